"""Clifford-only simulation via a tableau of Majorana-monomial stabilizers.

A state of ``n`` modes is fixed by ``n`` independent, pairwise-commuting
Hermitian monomials.  The tableau stores only stabilizers (no
destabilizers); measurement repair scans for anticommuting partners
linearly, which is plenty for the register sizes this backend targets.

Braiding acts by conjugation with the sign convention

    gamma_i -> gamma_j,   gamma_j -> -gamma_i,

which corresponds to the unitary ``exp((pi/4) gamma_j gamma_i)`` and
reproduces the pair-braid matrix ``diag(e^{i pi/4}, e^{-i pi/4})`` of the
elementary gate set when applied to a mode's own Majorana pair (see the
fock-backend tests for the explicit matrix check).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .algebra import MajoranaMonomial
from .errors import (
    InvalidMeasurementError,
    ModeMismatchError,
    OverconstraintError,
)

__all__ = ["StabilizerTableau", "prep_pair", "braid", "measure"]


def _support_mask(mon: MajoranaMonomial) -> int:
    mask = 0
    for p in mon.indices:
        mask |= 1 << p
    return mask


@dataclass
class StabilizerTableau:
    """A (possibly partial) list of commuting Hermitian stabilizers."""

    n_modes: int
    stabilizers: list[MajoranaMonomial] = field(default_factory=list)

    @classmethod
    def fresh(cls, n_modes: int) -> "StabilizerTableau":
        """Tableau with no constraints (all Majoranas unpaired)."""
        return cls(n_modes, [])

    @classmethod
    def vacuum(cls, n_modes: int) -> "StabilizerTableau":
        """All modes empty: stabilizers +i gamma_{2k} gamma_{2k+1}."""
        return cls(n_modes,
                   [MajoranaMonomial.mode_parity(k, n_modes)
                    for k in range(n_modes)])

    def copy(self) -> "StabilizerTableau":
        return StabilizerTableau(self.n_modes, list(self.stabilizers))

    @property
    def constrained(self) -> int:
        """Bitmask over Majorana indices appearing in any stabilizer."""
        mask = 0
        for s in self.stabilizers:
            mask |= _support_mask(s)
        return mask

    def check_invariants(self) -> None:
        """Commutativity, Hermiticity and GF(2) independence of supports."""
        for s in self.stabilizers:
            if not s.is_hermitian():
                raise ValueError(f"non-Hermitian stabilizer {s}")
            if s.weight % 2:
                raise ValueError(f"odd-weight stabilizer {s}")
        for i, a in enumerate(self.stabilizers):
            for b in self.stabilizers[i + 1:]:
                if not a.commutes_with(b):
                    raise ValueError(f"stabilizers {a} and {b} anticommute")
        masks = [_support_mask(s) for s in self.stabilizers]
        if _gf2_rank(masks) != len(masks):
            raise ValueError("stabilizer supports are GF(2) dependent")

    # ------------------------------------------------------------------
    # operations (mutating; each returns self for chaining)
    # ------------------------------------------------------------------

    def prep_pair(self, a: int, b: int) -> "StabilizerTableau":
        """Add the stabilizer ``+i gamma_a gamma_b`` for a fresh pair."""
        if a == b:
            raise ValueError("preparation needs two distinct Majoranas")
        for p in (a, b):
            if not 0 <= p < 2 * self.n_modes:
                raise ValueError(f"Majorana index {p} out of range")
        used = self.constrained
        if used & ((1 << a) | (1 << b)):
            raise OverconstraintError(
                f"Majoranas {a}, {b} are already constrained")
        self.stabilizers.append(MajoranaMonomial.pair(a, b, self.n_modes))
        return self

    def braid(self, i: int, j: int) -> "StabilizerTableau":
        """Conjugate every stabilizer by the braid gamma_i -> gamma_j, gamma_j -> -gamma_i."""
        if i == j:
            raise ValueError("braid needs two distinct Majoranas")
        for p in (i, j):
            if not 0 <= p < 2 * self.n_modes:
                raise ValueError(f"Majorana index {p} out of range")
        new = []
        for s in self.stabilizers:
            flips = 0
            factors = []
            for p in s.indices:
                if p == i:
                    factors.append(j)
                elif p == j:
                    factors.append(i)
                    flips += 1
                else:
                    factors.append(p)
            new.append(MajoranaMonomial(
                self.n_modes, factors, phase_exp=(s.phase_exp + 2 * flips) % 4))
        self.stabilizers = new
        return self

    def apply_monomial(self, mon: MajoranaMonomial) -> "StabilizerTableau":
        """Conjugate by a monomial used as a unitary: s -> m s m^dagger.

        For even-weight ``m`` this flips the sign of stabilizers that share
        an odd number of Majoranas with it.
        """
        conj = mon.conjugate()
        self.stabilizers = [mon * s * conj for s in self.stabilizers]
        return self

    def deterministic_outcome(self, mon: MajoranaMonomial) -> int | None:
        """If +/-mon is in the stabilizer group, return its eigenvalue."""
        combo = _gf2_solve([_support_mask(s) for s in self.stabilizers],
                           _support_mask(mon))
        if combo is None:
            return None
        product = MajoranaMonomial.identity(self.n_modes)
        for k in combo:
            product = product * self.stabilizers[k]
        diff = (product.phase_exp - mon.phase_exp) % 4
        if diff == 0:
            return 1
        if diff == 2:
            return -1
        raise InvalidMeasurementError(
            f"group element {product} is not +/- the measured {mon}")

    def measure(
        self,
        mon: MajoranaMonomial,
        rng: np.random.Generator | None,
        force: int | None = None,
    ) -> tuple[int, float]:
        """Measure a Hermitian even-weight monomial.

        Returns ``(outcome, probability)`` where probability is 1.0 for
        deterministic outcomes and 0.5 for uniformly random ones.  ``force``
        overrides the coin flip (used for branch enumeration); forcing a
        deterministic measurement to the wrong value raises.
        """
        if mon.n_modes != self.n_modes:
            raise ModeMismatchError("operator and tableau mode counts differ")
        if mon.weight % 2:
            raise InvalidMeasurementError(f"odd-weight measurement {mon}")
        if not mon.is_hermitian():
            raise InvalidMeasurementError(f"non-Hermitian measurement {mon}")

        anti = [k for k, s in enumerate(self.stabilizers)
                if not s.commutes_with(mon)]
        if not anti:
            value = self.deterministic_outcome(mon)
            if value is not None:
                if force is not None and force != value:
                    raise InvalidMeasurementError(
                        f"cannot force outcome {force}; measurement is "
                        f"deterministic with value {value}")
                return value, 1.0
            # Commuting but independent: the tableau is partial; the outcome
            # is uniform and the measured operator joins the tableau.
            outcome = _coin(rng, force)
            self.stabilizers.append(mon if outcome == 1 else mon.negated())
            return outcome, 0.5

        pivot = anti[0]
        pivot_stab = self.stabilizers[pivot]
        for k in anti[1:]:
            self.stabilizers[k] = pivot_stab * self.stabilizers[k]
        outcome = _coin(rng, force)
        self.stabilizers[pivot] = mon if outcome == 1 else mon.negated()
        return outcome, 0.5

    # ------------------------------------------------------------------
    # serialization
    # ------------------------------------------------------------------

    def dump(self) -> str:
        """One stabilizer per line: phase exponent, then the index list."""
        lines = [f"{s.phase_exp} " + " ".join(str(p) for p in s.indices)
                 for s in self.stabilizers]
        return "\n".join(lines)

    @classmethod
    def load(cls, text: str, n_modes: int) -> "StabilizerTableau":
        stabs = []
        for line in text.strip().splitlines():
            parts = line.split()
            stabs.append(MajoranaMonomial(
                n_modes, tuple(int(p) for p in parts[1:]),
                phase_exp=int(parts[0])))
        return cls(n_modes, stabs)


def _coin(rng: np.random.Generator | None, force: int | None) -> int:
    if force is not None:
        if force not in (1, -1):
            raise ValueError("forced outcome must be +1 or -1")
        return force
    if rng is None:
        raise ValueError("random measurement needs an explicit rng")
    return 1 if rng.random() < 0.5 else -1


def _gf2_rank(masks: list[int]) -> int:
    rank = 0
    rows = list(masks)
    while rows:
        row = rows.pop()
        if row == 0:
            continue
        pivot = row & -row
        rank += 1
        rows = [r ^ row if r & pivot else r for r in rows]
    return rank


def _gf2_solve(masks: list[int], target: int) -> list[int] | None:
    """Indices of a subset of masks whose XOR equals target, if any."""
    basis: list[tuple[int, int]] = []  # (mask, combo bitset over input rows)
    for k, mask in enumerate(masks):
        combo = 1 << k
        for bmask, bcombo in basis:
            if mask & (bmask & -bmask):
                mask ^= bmask
                combo ^= bcombo
        if mask:
            basis.append((mask, combo))
            basis.sort(key=lambda mc: mc[0] & -mc[0])
    combo = 0
    for bmask, bcombo in basis:
        if target & (bmask & -bmask):
            target ^= bmask
            combo ^= bcombo
    if target != 0:
        return None
    return [k for k in range(len(masks)) if combo & (1 << k)]


# Functional wrappers matching the operation names used elsewhere.

def prep_pair(tableau: StabilizerTableau, pair) -> StabilizerTableau:
    a, b = pair
    return tableau.prep_pair(a, b)


def braid(tableau: StabilizerTableau, i: int, j: int) -> StabilizerTableau:
    return tableau.braid(i, j)


def measure(tableau, mon, rng, force=None):
    outcome, _ = tableau.measure(mon, rng, force)
    return outcome, tableau

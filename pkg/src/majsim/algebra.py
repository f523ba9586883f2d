"""Exact symbolic algebra of Majorana monomials.

A register of ``n_modes`` fermionic modes carries ``2 * n_modes`` Majorana
operators obeying the Clifford-algebra relation

    {gamma_p, gamma_q} = gamma_p gamma_q + gamma_q gamma_p = 2 delta_pq,

which implies ``gamma_p ** 2 = 1``.  A :class:`MajoranaMonomial` is a product
of distinct Majorana operators together with a phase drawn from the fourth
roots of unity, stored as an exponent ``k`` meaning ``i**k``.  Multiplication
applies ``gamma**2 = 1`` eagerly and tracks every anticommutation sign, so
equal operators always compare (and hash) equal structurally.

Conventions
-----------
Fermionic mode ``k`` owns Majoranas ``2k`` and ``2k + 1`` with

    f_k^dagger = (gamma_{2k} + i gamma_{2k+1}) / 2,

so the pair-parity operator ``i gamma_{2k} gamma_{2k+1}`` equals
``1 - 2 n_k`` and takes the value +1 on an empty mode.  Every module in the
package shares this convention.

Real or complex coefficients never live on monomials; weighted sums of
monomials belong to :mod:`majsim.hamiltonians`.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from .errors import ModeMismatchError

__all__ = [
    "ParitySector",
    "MajoranaMonomial",
    "multiply",
    "commutes",
    "parity_weight",
]

_PHASE_CHARS = {0: "+", 1: "+i", 2: "-", 3: "-i"}


class ParitySector(Enum):
    """Total fermion-number parity of a state or the weight class of an operator."""

    EVEN = 0
    ODD = 1

    def flipped(self) -> "ParitySector":
        return ParitySector.ODD if self is ParitySector.EVEN else ParitySector.EVEN


def _merge_indices(left: tuple[int, ...], right: tuple[int, ...]) -> tuple[tuple[int, ...], int]:
    """Merge two sorted index tuples, cancelling duplicates.

    Returns the merged tuple and the parity (0 or 1) of the number of
    transpositions needed to interleave ``right`` into ``left``.
    """
    merged: list[int] = []
    parity = 0
    i, j = 0, 0
    while i < len(left) and j < len(right):
        if left[i] < right[j]:
            merged.append(left[i])
            i += 1
        elif left[i] > right[j]:
            merged.append(right[j])
            j += 1
            parity += len(left) - i
        else:
            # gamma_p gamma_p = 1: drop both, count the moves that brought
            # them together.
            parity += len(left) - i - 1
            i += 1
            j += 1
    merged.extend(left[i:])
    merged.extend(right[j:])
    return tuple(merged), parity % 2


def _sort_indices(indices: tuple[int, ...]) -> tuple[tuple[int, ...], int]:
    """Sort an arbitrary index tuple, returning (canonical tuple, swap parity)."""
    if len(indices) < 2:
        return tuple(indices), 0
    mid = len(indices) // 2
    left, pl = _sort_indices(indices[:mid])
    right, pr = _sort_indices(indices[mid:])
    merged, pm = _merge_indices(left, right)
    return merged, (pl + pr + pm) % 2


@dataclass(frozen=True)
class MajoranaMonomial:
    """A phased product of distinct Majorana operators.

    Attributes:
        n_modes: number of fermionic modes of the register the monomial
            acts on; valid Majorana indices are ``0 .. 2*n_modes - 1``.
        indices: strictly ascending Majorana indices (the support).
        phase_exp: integer ``k`` in ``{0, 1, 2, 3}``; the phase is ``i**k``.

    Instances are canonical by construction: the constructor sorts the given
    factors and folds all reordering signs into the phase.
    """

    n_modes: int
    indices: tuple[int, ...]
    phase_exp: int = 0

    def __init__(self, n_modes: int, factors=(), phase_exp: int = 0):
        """Build ``i**phase_exp * gamma_{f0} gamma_{f1} ...`` in canonical form.

        ``factors`` is an arbitrary (possibly unsorted, possibly repeated)
        sequence of Majorana indices, read left to right as an operator
        product.
        """
        factors = tuple(int(f) for f in factors)
        if n_modes < 1:
            raise ValueError(f"n_modes must be positive, got {n_modes}")
        for f in factors:
            if not 0 <= f < 2 * n_modes:
                raise ValueError(
                    f"Majorana index {f} out of range for {n_modes} modes")
        indices, parity = _sort_indices(factors)
        object.__setattr__(self, "n_modes", n_modes)
        object.__setattr__(self, "indices", indices)
        object.__setattr__(self, "phase_exp", (int(phase_exp) + 2 * parity) % 4)

    # ------------------------------------------------------------------
    # constructors
    # ------------------------------------------------------------------

    @classmethod
    def identity(cls, n_modes: int) -> "MajoranaMonomial":
        return cls(n_modes, ())

    @classmethod
    def gamma(cls, index: int, n_modes: int) -> "MajoranaMonomial":
        """The single operator ``gamma_index``."""
        return cls(n_modes, (index,))

    @classmethod
    def pair(cls, p: int, q: int, n_modes: int) -> "MajoranaMonomial":
        """The Hermitian pair parity ``i gamma_p gamma_q``."""
        if p == q:
            raise ValueError("pair requires two distinct Majorana indices")
        return cls(n_modes, (p, q), phase_exp=1)

    @classmethod
    def mode_parity(cls, mode: int, n_modes: int) -> "MajoranaMonomial":
        """``i gamma_{2k} gamma_{2k+1} = 1 - 2 n_k`` for mode ``k``."""
        return cls.pair(2 * mode, 2 * mode + 1, n_modes)

    @classmethod
    def total_parity(cls, n_modes: int) -> "MajoranaMonomial":
        """``i**n gamma_0 gamma_1 ... gamma_{2n-1}``, the global parity."""
        return cls(n_modes, tuple(range(2 * n_modes)), phase_exp=n_modes % 4)

    # ------------------------------------------------------------------
    # algebra
    # ------------------------------------------------------------------

    @property
    def weight(self) -> int:
        return len(self.indices)

    @property
    def phase(self) -> complex:
        return 1j ** self.phase_exp

    def __mul__(self, other: "MajoranaMonomial") -> "MajoranaMonomial":
        if not isinstance(other, MajoranaMonomial):
            return NotImplemented
        if self.n_modes != other.n_modes:
            raise ModeMismatchError(
                f"cannot multiply monomials on {self.n_modes} and "
                f"{other.n_modes} modes")
        merged, parity = _merge_indices(self.indices, other.indices)
        exp = (self.phase_exp + other.phase_exp + 2 * parity) % 4
        out = object.__new__(MajoranaMonomial)
        object.__setattr__(out, "n_modes", self.n_modes)
        object.__setattr__(out, "indices", merged)
        object.__setattr__(out, "phase_exp", exp)
        return out

    def conjugate(self) -> "MajoranaMonomial":
        """Hermitian conjugate: reverse the factor order, conjugate the phase."""
        w = self.weight
        reversal_parity = (w * (w - 1) // 2) % 2
        exp = (-self.phase_exp + 2 * reversal_parity) % 4
        out = object.__new__(MajoranaMonomial)
        object.__setattr__(out, "n_modes", self.n_modes)
        object.__setattr__(out, "indices", self.indices)
        object.__setattr__(out, "phase_exp", exp)
        return out

    def is_hermitian(self) -> bool:
        return self.conjugate() == self

    def negated(self) -> "MajoranaMonomial":
        out = object.__new__(MajoranaMonomial)
        object.__setattr__(out, "n_modes", self.n_modes)
        object.__setattr__(out, "indices", self.indices)
        object.__setattr__(out, "phase_exp", (self.phase_exp + 2) % 4)
        return out

    def commutes_with(self, other: "MajoranaMonomial") -> bool:
        """True iff ``self * other == other * self``.

        Two monomials commute exactly when ``|a| |b| - |a & b|`` is even,
        where ``|.|`` is support size.
        """
        if self.n_modes != other.n_modes:
            raise ModeMismatchError("operands live on different registers")
        shared = len(set(self.indices) & set(other.indices))
        return (self.weight * other.weight - shared) % 2 == 0

    def parity_weight(self) -> ParitySector:
        """EVEN monomials preserve the fermion-parity sector, ODD ones swap it."""
        return ParitySector.EVEN if self.weight % 2 == 0 else ParitySector.ODD

    # ------------------------------------------------------------------
    # rendering / serialization
    # ------------------------------------------------------------------

    def __str__(self) -> str:
        body = " ".join(f"g{p}" for p in self.indices) if self.indices else "1"
        return f"{_PHASE_CHARS[self.phase_exp]} {body}"

    def to_wire(self) -> dict:
        """Stable serialization: index list plus phase exponent."""
        return {"indices": list(self.indices), "phase_exp": self.phase_exp}

    @classmethod
    def from_wire(cls, data: dict, n_modes: int) -> "MajoranaMonomial":
        return cls(n_modes, tuple(data["indices"]), phase_exp=data["phase_exp"])


def multiply(a: MajoranaMonomial, b: MajoranaMonomial) -> MajoranaMonomial:
    """Canonical product ``a * b``."""
    return a * b


def commutes(a: MajoranaMonomial, b: MajoranaMonomial) -> bool:
    """Whether two monomials commute as operators."""
    return a.commutes_with(b)


def parity_weight(a: MajoranaMonomial) -> ParitySector:
    """Parity sector action of a monomial (EVEN preserves, ODD swaps)."""
    return a.parity_weight()


def hermitian_representative(n_modes: int, indices) -> MajoranaMonomial:
    """The canonical Hermitian monomial on the given support.

    For support weight ``w``, the plain product ``gamma_{i0} ... gamma_{iw-1}``
    (ascending) conjugates to ``(-1)**(w(w-1)/2)`` times itself, so either it
    or ``i`` times it is Hermitian.
    """
    indices = tuple(sorted(int(i) for i in indices))
    w = len(indices)
    exp = 1 if (w * (w - 1) // 2) % 2 else 0
    return MajoranaMonomial(n_modes, indices, phase_exp=exp)

"""Exact state-vector and density-matrix simulation in the occupation basis.

States of ``n`` fermionic modes are complex vectors over occupation
bitstrings, indexed with mode 0 as the least significant bit.  Majorana
operators act through the package convention (see :mod:`majsim.algebra`):

    gamma_{2k}   |...n_k...>  flips bit k with the Jordan-Wigner prefix
                              sign (-1)^(n_0 + ... + n_{k-1}),
    gamma_{2k+1} |...n_k...>  additionally multiplies by -i when n_k was 0
                              and +i when n_k was 1.

The string prefix is internal to this backend; circuit-level code only ever
sees monomials, rotations and joint-parity measurements.

The dense state-vector backend is capped at 14 modes and the density-matrix
backend at 7 modes.  Larger Clifford-only runs belong to
:mod:`majsim.stabilizer`.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .algebra import MajoranaMonomial, ParitySector
from .errors import CapacityError, InvalidMeasurementError, ModeMismatchError

__all__ = [
    "FOCK_MODE_CAP",
    "DENSITY_MODE_CAP",
    "FockState",
    "DensityState",
    "MeasurementRecord",
    "apply_monomial",
    "apply_rotation",
    "measure_parity",
    "expectation",
    "depolarize",
]

FOCK_MODE_CAP = 14
DENSITY_MODE_CAP = 7

_NORM_TOL = 1e-12


def _check_cap(n_modes: int, cap: int, what: str) -> None:
    if n_modes > cap:
        raise CapacityError(
            f"{what} supports at most {cap} modes, got {n_modes}",
            limiting_module="fock",
        )


def _monomial_action(mon: MajoranaMonomial) -> tuple[int, np.ndarray]:
    """Fock-basis action of a monomial as (flip mask, per-source factor).

    ``M |j> = factor[j] |j ^ mask>`` including the monomial's own phase.
    Factors are computed by applying the gamma factors right to left while
    tracking the intermediate bit pattern, so all Jordan-Wigner signs land
    where the operator ordering puts them.
    """
    dim = 1 << mon.n_modes
    idx = np.arange(dim, dtype=np.int64)
    current = idx.copy()
    factor = np.full(dim, mon.phase, dtype=np.complex128)
    for p in reversed(mon.indices):
        k = p >> 1
        bit = np.int64(1) << k
        low_mask = bit - 1
        prefix_sign = 1.0 - 2.0 * (np.bitwise_count(current & low_mask) & 1)
        if p & 1:
            occ = (current & bit) != 0
            factor *= prefix_sign * np.where(occ, 1j, -1j)
        else:
            factor *= prefix_sign
        current ^= bit
    mask = 0
    for p in mon.indices:
        mask ^= 1 << (p >> 1)
    return mask, factor


def _occupation_parity(n_modes: int) -> np.ndarray:
    idx = np.arange(1 << n_modes, dtype=np.int64)
    return (np.bitwise_count(idx) & 1).astype(np.int8)


@dataclass
class MeasurementRecord:
    """Outcome of a joint-parity measurement."""

    measured_monomial: MajoranaMonomial
    outcome: int
    probability: float


@dataclass
class FockState:
    """Normalized amplitude vector over occupation bitstrings."""

    n_modes: int
    amplitudes: np.ndarray
    declared_sector: ParitySector | None = None

    @classmethod
    def vacuum(cls, n_modes: int) -> "FockState":
        _check_cap(n_modes, FOCK_MODE_CAP, "state-vector backend")
        amps = np.zeros(1 << n_modes, dtype=np.complex128)
        amps[0] = 1.0
        return cls(n_modes, amps, ParitySector.EVEN)

    @classmethod
    def from_occupations(cls, bits) -> "FockState":
        bits = list(bits)
        _check_cap(len(bits), FOCK_MODE_CAP, "state-vector backend")
        index = sum(1 << k for k, b in enumerate(bits) if b)
        amps = np.zeros(1 << len(bits), dtype=np.complex128)
        amps[index] = 1.0
        sector = ParitySector.EVEN if sum(bits) % 2 == 0 else ParitySector.ODD
        return cls(len(bits), amps, sector)

    @classmethod
    def from_amplitudes(cls, amplitudes, declared_sector=None) -> "FockState":
        amps = np.asarray(amplitudes, dtype=np.complex128)
        n = int(np.log2(len(amps)))
        if 1 << n != len(amps):
            raise ValueError("amplitude vector length must be a power of two")
        _check_cap(n, FOCK_MODE_CAP, "state-vector backend")
        norm = np.linalg.norm(amps)
        if abs(norm) < _NORM_TOL:
            raise ValueError("cannot normalize a zero vector")
        return cls(n, amps / norm, declared_sector)

    def copy(self) -> "FockState":
        return FockState(self.n_modes, self.amplitudes.copy(), self.declared_sector)

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def overlap(self, other: "FockState") -> complex:
        if self.n_modes != other.n_modes:
            raise ModeMismatchError("states live on different registers")
        return complex(np.vdot(self.amplitudes, other.amplitudes))

    def fidelity(self, other: "FockState") -> float:
        """Global-phase-quotiented state agreement |<a|b>|."""
        return abs(self.overlap(other))

    def sector_weight(self, sector: ParitySector) -> float:
        par = _occupation_parity(self.n_modes)
        mask = par == (0 if sector is ParitySector.EVEN else 1)
        return float(np.sum(np.abs(self.amplitudes[mask]) ** 2))

    def assert_sector(self, tol: float = 1e-10) -> None:
        """Check that all support lies in the declared parity sector."""
        if self.declared_sector is None:
            return
        leak = 1.0 - self.sector_weight(self.declared_sector)
        if leak > tol:
            raise InvalidMeasurementError(
                f"state leaked {leak:.3e} outside the declared "
                f"{self.declared_sector.name} sector")

    # -- serialization ------------------------------------------------

    def to_wire(self, threshold: float = 0.0) -> dict:
        """JSON snapshot: occupation bitstring -> [re, im].

        Bitstring keys read left to right from the highest mode down to
        mode 0; mode 0 is the least significant (rightmost) character.
        """
        entries = {}
        for index, amp in enumerate(self.amplitudes):
            if abs(amp) > threshold:
                key = format(index, f"0{self.n_modes}b")
                entries[key] = [float(amp.real), float(amp.imag)]
        return {
            "n_modes": self.n_modes,
            "bit_order": "mode0-least-significant",
            "amplitudes": entries,
        }

    @classmethod
    def from_wire(cls, data: dict) -> "FockState":
        n = data["n_modes"]
        amps = np.zeros(1 << n, dtype=np.complex128)
        for key, (re, im) in data["amplitudes"].items():
            amps[int(key, 2)] = re + 1j * im
        return cls.from_amplitudes(amps)


@dataclass
class DensityState:
    """Positive semidefinite, trace-one operator on the occupation basis."""

    n_modes: int
    matrix: np.ndarray

    @classmethod
    def from_pure(cls, state: FockState) -> "DensityState":
        _check_cap(state.n_modes, DENSITY_MODE_CAP, "density-matrix backend")
        psi = state.amplitudes
        return cls(state.n_modes, np.outer(psi, psi.conj()))

    @classmethod
    def vacuum(cls, n_modes: int) -> "DensityState":
        return cls.from_pure(FockState.vacuum(n_modes))

    def copy(self) -> "DensityState":
        return DensityState(self.n_modes, self.matrix.copy())

    def trace(self) -> float:
        return float(np.trace(self.matrix).real)

    def fidelity_with_pure(self, state: FockState) -> float:
        psi = state.amplitudes
        return float(np.real(psi.conj() @ self.matrix @ psi))

    def expectation(self, mon: MajoranaMonomial) -> complex:
        mask, factor = _monomial_action(mon)
        idx = np.arange(1 << self.n_modes)
        # tr(rho M) with M|j> = factor[j]|j^mask>
        return complex(np.sum(self.matrix[idx, idx ^ mask] * factor))

    def check_invariants(self, tol: float = 1e-10) -> None:
        if not np.allclose(self.matrix, self.matrix.conj().T, atol=1e-12):
            raise ValueError("density matrix is not Hermitian")
        if abs(self.trace() - 1.0) > 1e-12:
            raise ValueError("density matrix trace differs from 1")
        eigs = np.linalg.eigvalsh(self.matrix)
        if eigs.min() < -tol:
            raise ValueError(f"negative eigenvalue {eigs.min():.3e}")


# ----------------------------------------------------------------------
# operations
# ----------------------------------------------------------------------

def apply_monomial(state: FockState, mon: MajoranaMonomial) -> FockState:
    """Multiply the state vector by a Majorana monomial.

    Odd-weight monomials are a backend-internal primitive; they flip the
    declared parity sector.  The circuit layer refuses to emit them.
    """
    if mon.n_modes != state.n_modes:
        raise ModeMismatchError("monomial and state mode counts differ")
    mask, factor = _monomial_action(mon)
    idx = np.arange(1 << state.n_modes)
    src = idx ^ mask
    new = factor[src] * state.amplitudes[src]
    sector = state.declared_sector
    if sector is not None and mon.weight % 2 == 1:
        sector = sector.flipped()
    return FockState(state.n_modes, new, sector)


def apply_monomial_density(state: DensityState, mon: MajoranaMonomial) -> DensityState:
    """Conjugate a density matrix by a (unitary) monomial: rho -> M rho M^dag."""
    mask, factor = _monomial_action(mon)
    idx = np.arange(1 << state.n_modes)
    src = idx ^ mask
    f = factor[src]
    rho = state.matrix[np.ix_(src, src)] * np.outer(f, f.conj())
    return DensityState(state.n_modes, rho)


def _rotation_monomial(n_modes: int, pairs) -> MajoranaMonomial:
    flat: list[int] = []
    mon = MajoranaMonomial.identity(n_modes)
    for a, b in pairs:
        flat.extend((a, b))
        mon = mon * MajoranaMonomial.pair(a, b, n_modes)
    if len(set(flat)) != len(flat):
        raise ValueError(f"rotation pairs share a Majorana index: {pairs}")
    if not flat:
        raise ValueError("rotation needs at least one pair")
    return mon


def apply_rotation(state: FockState, pairs, theta: float) -> FockState:
    """Apply ``exp(i theta * prod_k (i gamma_{a_k} gamma_{b_k}))``.

    The product over disjoint pairs is Hermitian and squares to one, so the
    exponential reduces to ``cos(theta) + i sin(theta) M``.
    """
    mon = _rotation_monomial(state.n_modes, pairs)
    rotated = apply_monomial(state, mon)
    new = np.cos(theta) * state.amplitudes + 1j * np.sin(theta) * rotated.amplitudes
    return FockState(state.n_modes, new, state.declared_sector)


def apply_rotation_density(state: DensityState, pairs, theta: float) -> DensityState:
    mon = _rotation_monomial(state.n_modes, pairs)
    mask, factor = _monomial_action(mon)
    dim = 1 << state.n_modes
    u = np.zeros((dim, dim), dtype=np.complex128)
    idx = np.arange(dim)
    u[idx, idx] = np.cos(theta)
    u[idx ^ mask, idx] += 1j * np.sin(theta) * factor
    return DensityState(state.n_modes, u @ state.matrix @ u.conj().T)


def _require_measurable(mon: MajoranaMonomial) -> None:
    if mon.weight % 2 == 1:
        raise InvalidMeasurementError(
            f"odd-weight operator {mon} is not a physical joint parity")
    if not mon.is_hermitian():
        raise InvalidMeasurementError(f"operator {mon} is not Hermitian")


def measure_parity(
    state: FockState,
    mon: MajoranaMonomial,
    rng: np.random.Generator,
) -> tuple[MeasurementRecord, FockState]:
    """Projectively measure a Hermitian even-weight joint parity.

    The outcome is sampled with Born probabilities from the explicit seeded
    generator; the post-measurement state is renormalized, so repeating the
    same measurement returns the same outcome with probability one.
    """
    _require_measurable(mon)
    rotated = apply_monomial(state, mon)
    exp_val = float(np.real(np.vdot(state.amplitudes, rotated.amplitudes)))
    exp_val = min(1.0, max(-1.0, exp_val))
    p_plus = 0.5 * (1.0 + exp_val)
    outcome = 1 if rng.random() < p_plus else -1
    prob = p_plus if outcome == 1 else 1.0 - p_plus
    new = 0.5 * (state.amplitudes + outcome * rotated.amplitudes)
    norm = np.linalg.norm(new)
    if norm < _NORM_TOL:
        raise InvalidMeasurementError(
            "projection annihilated the state; inconsistent outcome")
    result = FockState(state.n_modes, new / norm, state.declared_sector)
    return MeasurementRecord(mon, outcome, prob), result


def parity_expectation(state: FockState, mon: MajoranaMonomial) -> float:
    """<state| mon |state> for a Hermitian monomial (exactly real)."""
    _require_measurable(mon)
    rotated = apply_monomial(state, mon)
    return float(np.real(np.vdot(state.amplitudes, rotated.amplitudes)))


def expectation(state: FockState, terms) -> float:
    """Energy ``sum_j c_j <m_j>`` of a weighted Hermitian monomial list."""
    total = 0.0 + 0.0j
    for coeff, mon in terms:
        if not mon.is_hermitian():
            raise InvalidMeasurementError(f"non-Hermitian term {mon}")
        if abs(complex(coeff).imag) > 1e-12:
            raise InvalidMeasurementError(f"non-real coefficient {coeff}")
        rotated = apply_monomial(state, mon)
        total += complex(coeff) * np.vdot(state.amplitudes, rotated.amplitudes)
    if abs(total.imag) > 1e-10:
        raise InvalidMeasurementError(
            f"expectation acquired imaginary part {total.imag:.3e}")
    return float(total.real)


def depolarize(state: DensityState, qubit, epsilon: float) -> DensityState:
    """Depolarizing channel on one encoded 4-Majorana qubit.

    ``rho -> (1 - eps) rho + eps/3 (X rho X + Y rho Y + Z rho Z)`` with
    X, Y, Z the logical pair operators of ``qubit``.  Trace preserving for
    any ``0 <= eps <= 1``.
    """
    if not 0.0 <= epsilon <= 1.0:
        raise ValueError(f"epsilon must lie in [0, 1], got {epsilon}")
    rho = (1.0 - epsilon) * state.matrix
    for logical in (qubit.logical_x, qubit.logical_y, qubit.logical_z):
        rho = rho + (epsilon / 3.0) * apply_monomial_density(state, logical).matrix
    return DensityState(state.n_modes, rho)

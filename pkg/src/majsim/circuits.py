"""Circuit IR, compiled gadgets, and the two-backend interpreter.

Instructions are the elementary operations of the hardware model:
pair preparation, braiding, a single-pair unprotected rotation, joint
parity measurement, and classically conditioned braids/rotations.  All
weight-2N rotations are *compiled* out of these via an ancilla-qubit
gadget (:func:`compile_rotation`); they never appear as primitives.

Gadget structure for ``exp(i theta M)`` with ``M`` a product of N disjoint
pair parities over the target Majoranas, using a four-Majorana ancilla
``(c1, c2, c3, c4)`` with ``Z = i g_c1 g_c2`` and ``X = i g_c2 g_c3``:

1. prepare both ancilla pairs (+1 eigenstates, so Z = +1),
2. measure the joint parity ``K = M * X`` (weight 2N + 2; outcome 50/50),
3. on outcome -1, flip the ancilla with two braids (the unitary Z),
4. rotate the ancilla by ``exp(i theta X)``; for a generic angle this is
   two compensating braids plus one unprotected rotation by
   ``alpha = theta + pi/2``, for multiples of pi/4 it is braids only,
5. measure the ancilla pair ``Z`` to disentangle,
6. on outcome -1, apply the unitary ``M`` as conditional braid pairs.

Both measurement branches then act on the targets exactly as
``exp(i theta M)`` up to global phase, which the tests verify against a
dense matrix exponential.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field, replace

import numpy as np

from .algebra import MajoranaMonomial, ParitySector
from .errors import (
    CircuitError,
    InvalidMeasurementError,
    NonCliffordError,
)
from .fock import FockState, apply_monomial, apply_rotation, measure_parity
from .stabilizer import StabilizerTableau

__all__ = [
    "Predicate",
    "PrepPair",
    "Braid",
    "Rotate",
    "JointParityMeasure",
    "ConditionalBraid",
    "ConditionalRotate",
    "Barrier",
    "Circuit",
    "ResourceCount",
    "RunResult",
    "run",
    "enumerate_branches",
    "compile_rotation",
    "compile_cz",
    "compile_cat_prep",
]

_QUARTER = math.pi / 4
_ANGLE_TOL = 1e-12


@dataclass(frozen=True)
class Predicate:
    """Classical condition: XOR of the named bits equals ``value``."""

    bits: tuple[int, ...]
    value: int

    def evaluate(self, register: list[int]) -> bool:
        acc = 0
        for b in self.bits:
            if register[b] < 0:
                raise CircuitError(f"classical bit {b} read before write")
            acc ^= register[b]
        return acc == self.value


@dataclass(frozen=True)
class PrepPair:
    a: int
    b: int

    def majoranas(self):
        return (self.a, self.b)


@dataclass(frozen=True)
class Braid:
    i: int
    j: int

    def majoranas(self):
        return (self.i, self.j)


@dataclass(frozen=True)
class Rotate:
    i: int
    j: int
    theta: float

    def majoranas(self):
        return (self.i, self.j)


@dataclass(frozen=True)
class JointParityMeasure:
    monomial: MajoranaMonomial
    bit: int

    def majoranas(self):
        return self.monomial.indices


@dataclass(frozen=True)
class ConditionalBraid:
    i: int
    j: int
    predicate: Predicate

    def majoranas(self):
        return (self.i, self.j)


@dataclass(frozen=True)
class ConditionalRotate:
    i: int
    j: int
    theta: float
    predicate: Predicate

    def majoranas(self):
        return (self.i, self.j)


@dataclass(frozen=True)
class Barrier:
    """Global synchronization marker (stage boundary in bound schedules)."""

    label: str = ""

    def majoranas(self):
        return ()


Instruction = (PrepPair | Braid | Rotate | JointParityMeasure
               | ConditionalBraid | ConditionalRotate | Barrier)


@dataclass
class ResourceCount:
    braidings: int = 0
    measurements: int = 0
    unprotected_rotations: int = 0
    prepared_pairs: int = 0

    def __add__(self, other: "ResourceCount") -> "ResourceCount":
        return ResourceCount(
            self.braidings + other.braidings,
            self.measurements + other.measurements,
            self.unprotected_rotations + other.unprotected_rotations,
            self.prepared_pairs + other.prepared_pairs,
        )

    def to_wire(self) -> dict:
        return {
            "braidings": self.braidings,
            "measurements": self.measurements,
            "unprotected_rotations": self.unprotected_rotations,
            "prepared_pairs": self.prepared_pairs,
        }


@dataclass
class Circuit:
    """Ordered instruction list over ``n_modes`` modes and ``n_bits`` bits."""

    n_modes: int
    instructions: list
    n_bits: int = 0
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        self.validate()

    def validate(self) -> None:
        written: set[int] = set()
        for inst in self.instructions:
            for p in inst.majoranas():
                if not 0 <= p < 2 * self.n_modes:
                    raise CircuitError(
                        f"Majorana index {p} out of range in {inst}")
            if isinstance(inst, (Braid, ConditionalBraid)) and inst.i == inst.j:
                raise CircuitError(f"braid needs distinct Majoranas: {inst}")
            if isinstance(inst, (Rotate, ConditionalRotate)):
                if inst.i == inst.j:
                    raise CircuitError(f"rotation pair must be distinct: {inst}")
                if not math.isfinite(inst.theta):
                    raise CircuitError(f"non-finite angle in {inst}")
            if isinstance(inst, JointParityMeasure):
                mon = inst.monomial
                if mon.n_modes != self.n_modes:
                    raise CircuitError(
                        f"measured monomial register size {mon.n_modes} != "
                        f"{self.n_modes}")
                if mon.weight % 2 or not mon.is_hermitian():
                    raise CircuitError(
                        f"measured operator must be Hermitian even weight: {mon}")
                if not 0 <= inst.bit < self.n_bits:
                    raise CircuitError(f"classical bit {inst.bit} out of range")
                written.add(inst.bit)
            if isinstance(inst, (ConditionalBraid, ConditionalRotate)):
                for b in inst.predicate.bits:
                    if not 0 <= b < self.n_bits:
                        raise CircuitError(f"predicate bit {b} out of range")
                    if b not in written:
                        raise CircuitError(
                            f"predicate bit {b} read before any write")

    def extended(self, other: "Circuit", bit_offset: int | None = None) -> "Circuit":
        """Concatenate, shifting the other circuit's classical bits."""
        if other.n_modes != self.n_modes:
            raise CircuitError("cannot concatenate circuits of different size")
        offset = self.n_bits if bit_offset is None else bit_offset
        shifted = [_shift_bits(inst, offset) for inst in other.instructions]
        return Circuit(self.n_modes, self.instructions + shifted,
                       max(self.n_bits, offset + other.n_bits),
                       {**self.metadata})

    def dag_depth(self) -> int:
        """Longest dependency chain.

        Instructions depend on earlier ones that touch a shared Majorana
        index or classical bit; a Barrier orders everything across it but
        contributes no depth of its own.
        """
        maj_front: dict[int, int] = {}
        bit_write_front: dict[int, int] = {}
        bit_read_front: dict[int, int] = {}
        floor = 0
        longest = 0
        for inst in self.instructions:
            if isinstance(inst, Barrier):
                floor = longest
                continue
            depth = floor
            for p in inst.majoranas():
                depth = max(depth, maj_front.get(p, floor))
            reads: list[int] = []
            writes: list[int] = []
            if isinstance(inst, JointParityMeasure):
                writes = [inst.bit]
            elif isinstance(inst, (ConditionalBraid, ConditionalRotate)):
                reads = list(inst.predicate.bits)
            for b in reads:
                depth = max(depth, bit_write_front.get(b, floor))
            for b in writes:
                # a rewrite must wait for earlier reads and the prior write
                depth = max(depth, bit_write_front.get(b, floor),
                            bit_read_front.get(b, floor))
            depth += 1
            for p in inst.majoranas():
                maj_front[p] = depth
            for b in reads:
                bit_read_front[b] = max(bit_read_front.get(b, 0), depth)
            for b in writes:
                bit_write_front[b] = depth
            longest = max(longest, depth)
        return longest

    # -- serialization: one JSON object per line ------------------------

    def to_jsonl(self) -> str:
        lines = [json.dumps({"n_modes": self.n_modes, "n_bits": self.n_bits})]
        for inst in self.instructions:
            lines.append(json.dumps(_inst_to_obj(inst)))
        return "\n".join(lines)

    @classmethod
    def from_jsonl(cls, text: str) -> "Circuit":
        lines = [ln for ln in text.strip().splitlines() if ln.strip()]
        header = json.loads(lines[0])
        instructions = [_obj_to_inst(json.loads(ln), header["n_modes"])
                        for ln in lines[1:]]
        return cls(header["n_modes"], instructions, header["n_bits"])


def _shift_bits(inst, offset: int):
    if isinstance(inst, JointParityMeasure):
        return replace(inst, bit=inst.bit + offset)
    if isinstance(inst, (ConditionalBraid, ConditionalRotate)):
        pred = Predicate(tuple(b + offset for b in inst.predicate.bits),
                         inst.predicate.value)
        return replace(inst, predicate=pred)
    return inst


def _inst_to_obj(inst) -> dict:
    if isinstance(inst, PrepPair):
        return {"op": "prep", "indices": [inst.a, inst.b]}
    if isinstance(inst, Braid):
        return {"op": "braid", "indices": [inst.i, inst.j]}
    if isinstance(inst, Rotate):
        return {"op": "rotate", "indices": [inst.i, inst.j],
                "theta": inst.theta}
    if isinstance(inst, JointParityMeasure):
        return {"op": "measure", **inst.monomial.to_wire(), "bit": inst.bit}
    if isinstance(inst, ConditionalBraid):
        return {"op": "cond_braid", "indices": [inst.i, inst.j],
                "pred_bits": list(inst.predicate.bits),
                "pred_value": inst.predicate.value}
    if isinstance(inst, ConditionalRotate):
        return {"op": "cond_rotate", "indices": [inst.i, inst.j],
                "theta": inst.theta,
                "pred_bits": list(inst.predicate.bits),
                "pred_value": inst.predicate.value}
    if isinstance(inst, Barrier):
        return {"op": "barrier", "label": inst.label}
    raise CircuitError(f"unknown instruction {inst!r}")


def _obj_to_inst(obj: dict, n_modes: int):
    op = obj["op"]
    if op == "prep":
        return PrepPair(*obj["indices"])
    if op == "braid":
        return Braid(*obj["indices"])
    if op == "rotate":
        return Rotate(obj["indices"][0], obj["indices"][1], obj["theta"])
    if op == "measure":
        mon = MajoranaMonomial(n_modes, tuple(obj["indices"]),
                               phase_exp=obj["phase_exp"])
        return JointParityMeasure(mon, obj["bit"])
    if op == "cond_braid":
        return ConditionalBraid(obj["indices"][0], obj["indices"][1],
                                Predicate(tuple(obj["pred_bits"]),
                                          obj["pred_value"]))
    if op == "cond_rotate":
        return ConditionalRotate(obj["indices"][0], obj["indices"][1],
                                 obj["theta"],
                                 Predicate(tuple(obj["pred_bits"]),
                                           obj["pred_value"]))
    if op == "barrier":
        return Barrier(obj.get("label", ""))
    raise CircuitError(f"unknown serialized op {op!r}")


# ----------------------------------------------------------------------
# interpreter
# ----------------------------------------------------------------------

@dataclass
class RunResult:
    bits: list[int]
    state: object
    counts: ResourceCount
    probability: float


def _clifford_braid_count(theta: float) -> int | None:
    """Number of pi/4 braids realizing exp(i theta X), or None if non-Clifford."""
    ratio = theta / _QUARTER
    nearest = round(ratio)
    if abs(ratio - nearest) < 1e-9:
        return nearest % 8
    return None


class _FockExecutor:
    backend = "fock"

    def __init__(self, n_modes: int, state: FockState | None = None):
        self.state = state.copy() if state is not None else FockState.vacuum(n_modes)

    def copy(self):
        out = _FockExecutor.__new__(_FockExecutor)
        out.state = self.state.copy()
        return out

    def braid(self, i: int, j: int) -> None:
        self.state = apply_rotation(self.state, [(i, j)], _QUARTER)

    def rotate(self, i: int, j: int, theta: float) -> None:
        self.state = apply_rotation(self.state, [(i, j)], theta)

    def outcome_probability(self, mon: MajoranaMonomial, outcome: int) -> float:
        rotated = apply_monomial(self.state, mon)
        exp_val = float(np.real(np.vdot(self.state.amplitudes,
                                        rotated.amplitudes)))
        return 0.5 * (1.0 + outcome * min(1.0, max(-1.0, exp_val)))

    def measure(self, mon, rng, force=None) -> tuple[int, float]:
        if force is None:
            record, self.state = measure_parity(self.state, mon, rng)
            return record.outcome, record.probability
        prob = self.outcome_probability(mon, force)
        if prob < 1e-14:
            raise InvalidMeasurementError("forced outcome has zero probability")
        rotated = apply_monomial(self.state, mon)
        new = 0.5 * (self.state.amplitudes + force * rotated.amplitudes)
        self.state = FockState(self.state.n_modes,
                               new / np.linalg.norm(new),
                               self.state.declared_sector)
        return force, prob

    def prep(self, a, b, rng, force=None) -> tuple[int, float]:
        mon = MajoranaMonomial.pair(a, b, self.state.n_modes)
        outcome, prob = self.measure(mon, rng, force)
        if outcome == -1:
            # physical reset: exchange one fermion with the common ground
            self.state = apply_monomial(
                self.state, MajoranaMonomial.gamma(a, self.state.n_modes))
        return outcome, prob

    def result_state(self):
        return self.state


class _TableauExecutor:
    backend = "stabilizer"

    def __init__(self, n_modes: int, state: StabilizerTableau | None = None):
        self.state = state.copy() if state is not None \
            else StabilizerTableau.vacuum(n_modes)

    def copy(self):
        out = _TableauExecutor.__new__(_TableauExecutor)
        out.state = self.state.copy()
        return out

    def braid(self, i: int, j: int) -> None:
        self.state.braid(i, j)

    def rotate(self, i: int, j: int, theta: float) -> None:
        k = _clifford_braid_count(theta)
        if k is None:
            raise NonCliffordError(
                f"rotation angle {theta} is not a multiple of pi/4; "
                "route this circuit to the fock backend")
        for _ in range(k):
            self.state.braid(i, j)

    def measure(self, mon, rng, force=None) -> tuple[int, float]:
        return self.state.measure(mon, rng, force)

    def prep(self, a, b, rng, force=None) -> tuple[int, float]:
        free = not (self.state.constrained & ((1 << a) | (1 << b)))
        if free:
            if force == -1:
                raise InvalidMeasurementError(
                    "fresh pair preparation cannot yield -1")
            self.state.prep_pair(a, b)
            return 1, 1.0
        mon = MajoranaMonomial.pair(a, b, self.state.n_modes)
        outcome, prob = self.state.measure(mon, rng, force)
        if outcome == -1:
            self.state.apply_monomial(
                MajoranaMonomial.gamma(a, self.state.n_modes))
        return outcome, prob

    def result_state(self):
        return self.state


def _make_executor(circuit, backend, state):
    if backend == "fock":
        return _FockExecutor(circuit.n_modes, state)
    if backend == "stabilizer":
        return _TableauExecutor(circuit.n_modes, state)
    raise ValueError(f"unknown backend {backend!r}")


def _execute(executor, inst, register, counts, rng, force=None):
    """Run one instruction; returns branch probability of any random event."""
    prob = 1.0
    if isinstance(inst, Barrier):
        return prob
    if isinstance(inst, PrepPair):
        _, prob = executor.prep(inst.a, inst.b, rng, force)
        counts.prepared_pairs += 1
    elif isinstance(inst, Braid):
        executor.braid(inst.i, inst.j)
        counts.braidings += 1
    elif isinstance(inst, Rotate):
        executor.rotate(inst.i, inst.j, inst.theta)
        counts.unprotected_rotations += 1
    elif isinstance(inst, JointParityMeasure):
        outcome, prob = executor.measure(inst.monomial, rng, force)
        register[inst.bit] = 0 if outcome == 1 else 1
        counts.measurements += 1
    elif isinstance(inst, ConditionalBraid):
        if inst.predicate.evaluate(register):
            executor.braid(inst.i, inst.j)
            counts.braidings += 1
    elif isinstance(inst, ConditionalRotate):
        if inst.predicate.evaluate(register):
            executor.rotate(inst.i, inst.j, inst.theta)
            counts.unprotected_rotations += 1
    else:
        raise CircuitError(f"unknown instruction {inst!r}")
    return prob


def _is_random_event(executor, inst) -> bool:
    if isinstance(inst, JointParityMeasure):
        return True
    return isinstance(inst, PrepPair)


def run(circuit: Circuit, backend: str = "fock",
        rng: np.random.Generator | None = None,
        state=None, check_sector: bool = False) -> RunResult:
    """Interpret a circuit; deterministic given the seed.

    Returns the classical register (0 for outcome +1, 1 for -1, -1 for
    never-written bits), the final state handle, the executed resource
    counts, and the joint probability of the realized measurement record.
    """
    executor = _make_executor(circuit, backend, state)
    register = [-1] * circuit.n_bits
    counts = ResourceCount()
    probability = 1.0
    for inst in circuit.instructions:
        probability *= _execute(executor, inst, register, counts, rng)
        if check_sector and backend == "fock":
            executor.state.assert_sector()
    return RunResult(register, executor.result_state(), counts, probability)


@dataclass
class Branch:
    bits: list[int]
    state: object
    counts: ResourceCount
    probability: float


def enumerate_branches(circuit: Circuit, backend: str = "fock",
                       state=None, prob_floor: float = 1e-12) -> list[Branch]:
    """Execute every measurement-outcome branch with its probability.

    Branches below ``prob_floor`` are pruned; the surviving probabilities
    sum to one up to that floor.
    """
    leaves: list[Branch] = []

    def walk(executor, pos, register, counts, prob):
        instructions = circuit.instructions
        k = pos
        while k < len(instructions):
            inst = instructions[k]
            if _is_random_event(executor, inst):
                for outcome in (1, -1):
                    fork = executor.copy()
                    fork_register = list(register)
                    fork_counts = ResourceCount(**counts.to_wire())
                    try:
                        p = _execute(fork, inst, fork_register, fork_counts,
                                     None, force=outcome)
                    except InvalidMeasurementError:
                        continue
                    if prob * p < prob_floor:
                        continue
                    walk(fork, k + 1, fork_register, fork_counts, prob * p)
                return
            _execute(executor, inst, register, counts, None)
            k += 1
        leaves.append(Branch(register, executor.result_state(), counts, prob))

    executor = _make_executor(circuit, backend, state)
    walk(executor, 0, [-1] * circuit.n_bits, ResourceCount(), 1.0)
    return leaves


# ----------------------------------------------------------------------
# compiled gadgets
# ----------------------------------------------------------------------

def pairing_monomial(n_modes: int, indices) -> MajoranaMonomial:
    """Product of pair parities over consecutive index pairs.

    ``indices = (a, b, c, d, ...)`` gives
    ``(i g_a g_b)(i g_c g_d) ...`` in canonical form.
    """
    if len(indices) % 2 or not indices:
        raise CircuitError("need a positive even number of target indices")
    mon = MajoranaMonomial.identity(n_modes)
    for k in range(0, len(indices), 2):
        mon = mon * MajoranaMonomial.pair(indices[k], indices[k + 1], n_modes)
    return mon


def compile_rotation(n_modes: int, targets, theta: float, ancilla) -> Circuit:
    """Compile ``exp(i theta * prod_k i g_{t2k} g_{t2k+1})`` into a circuit.

    ``targets`` holds 2N distinct Majorana indices, paired consecutively;
    ``ancilla`` holds the gadget's four Majorana indices, disjoint from the
    targets.  Works for any N >= 1; the ancilla ends re-preparable and the
    action on the targets equals the rotation on every outcome branch.
    """
    targets = tuple(int(t) for t in targets)
    ancilla = tuple(int(a) for a in ancilla)
    if len(ancilla) != 4 or len(set(ancilla)) != 4:
        raise CircuitError("gadget ancilla must be four distinct Majoranas")
    if len(set(targets)) != len(targets) or not targets:
        raise CircuitError("targets must be distinct and nonempty")
    if len(targets) % 2:
        raise CircuitError("targets must pair up (got odd count)")
    if set(targets) & set(ancilla):
        raise CircuitError("targets and ancilla overlap")

    c1, c2, c3, c4 = ancilla
    target_monomial = pairing_monomial(n_modes, targets)
    x_anc = MajoranaMonomial.pair(c2, c3, n_modes)
    z_anc = MajoranaMonomial.pair(c1, c2, n_modes)
    joint = target_monomial * x_anc

    instructions: list = [
        PrepPair(c1, c2),
        PrepPair(c3, c4),
        JointParityMeasure(joint, 0),
        ConditionalBraid(c1, c2, Predicate((0,), 1)),
        ConditionalBraid(c1, c2, Predicate((0,), 1)),
    ]
    k = _clifford_braid_count(theta)
    if k is not None:
        instructions.extend(Braid(c2, c3) for _ in range(k))
    else:
        # two inverse braids of the phase pair, compensated inside the
        # unprotected angle alpha = theta + pi/2
        instructions.append(Braid(c3, c2))
        instructions.append(Braid(c3, c2))
        instructions.append(Rotate(c2, c3, theta + math.pi / 2))
    instructions.append(JointParityMeasure(z_anc, 1))
    for idx in range(0, len(targets), 2):
        a, b = targets[idx], targets[idx + 1]
        instructions.append(ConditionalBraid(a, b, Predicate((1,), 1)))
        instructions.append(ConditionalBraid(a, b, Predicate((1,), 1)))

    metadata = {
        "gadget": "rotation",
        "targets": list(targets),
        "theta": theta,
        "joint_parity": joint.to_wire(),
        "full_parity_support": sorted(set(targets) | set(ancilla)),
    }
    return Circuit(n_modes, instructions, n_bits=2, metadata=metadata)


def compile_cz(n_modes: int, control_block, target_block, ancilla) -> Circuit:
    """Controlled-Z between two encoded 4-Majorana qubits.

    Logical Z of a block is the pair parity of its first two Majoranas.
    Up to global phase, CZ = exp(i pi/4 Z1) exp(i pi/4 Z2)
    exp(-i pi/4 Z1 Z2); the first two factors are single braids and the
    weight-4 factor runs through the rotation gadget at a Clifford angle,
    so the compiled circuit is braids and measurements only.
    """
    q1 = tuple(int(x) for x in control_block)
    q2 = tuple(int(x) for x in target_block)
    if set(q1) & set(q2):
        raise CircuitError("encoded blocks overlap")
    header = Circuit(n_modes, [Braid(q1[0], q1[1]), Braid(q2[0], q2[1])],
                     n_bits=0, metadata={"gadget": "cz"})
    gadget = compile_rotation(
        n_modes, (q1[0], q1[1], q2[0], q2[1]), -math.pi / 4, ancilla)
    out = header.extended(gadget)
    out.metadata = {"gadget": "cz", "blocks": [list(q1), list(q2)]}
    return out


def compile_cat_prep(n_modes: int, units) -> Circuit:
    """Prepare an extended cat (GHZ) state across ancilla fermion pairs.

    ``units`` lists the fermion pairs: each entry is a pair of *adjacent*
    mode indices ``(m, m+1)``.  Per unit, two crossed pair preparations put
    the two modes in (|00> + |11>)/sqrt(2); weight-4 joint parity
    measurements between consecutive units then force the global
    superposition, and outcome-conditioned braid pairs flip misaligned
    units so every branch ends in (|0...0> + |1...1>)/sqrt(2) exactly.

    Adjacency keeps every emitted operator free of occupation strings over
    foreign modes, so the preparation commutes with whatever the rest of
    the register is doing.
    """
    units = [tuple(int(m) for m in u) for u in units]
    if not units:
        raise CircuitError("need at least one ancilla fermion pair")
    seen: set[int] = set()
    for a, b in units:
        if b != a + 1:
            raise CircuitError(
                f"cat unit modes must be adjacent, got ({a}, {b})")
        if a in seen or b in seen or not 0 <= a < b < n_modes:
            raise CircuitError(f"bad or repeated cat unit ({a}, {b})")
        seen.update((a, b))

    instructions: list = []
    for a, b in units:
        instructions.append(PrepPair(2 * a, 2 * b + 1))
        instructions.append(PrepPair(2 * a + 1, 2 * b))
    n_merge = len(units) - 1
    for j in range(n_merge):
        b_mode = units[j][1]
        c_mode = units[j + 1][0]
        mon = MajoranaMonomial(
            n_modes,
            (2 * b_mode, 2 * b_mode + 1, 2 * c_mode, 2 * c_mode + 1))
        instructions.append(JointParityMeasure(mon, j))
    for k in range(1, len(units)):
        pred = Predicate(tuple(range(k)), (k + 1) % 2)
        a, b = units[k]
        instructions.append(ConditionalBraid(2 * a + 1, 2 * b, pred))
        instructions.append(ConditionalBraid(2 * a + 1, 2 * b, pred))
    metadata = {"gadget": "cat_prep", "units": [list(u) for u in units]}
    return Circuit(n_modes, instructions, n_bits=max(n_merge, 0),
                   metadata=metadata)

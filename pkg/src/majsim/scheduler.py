"""Adjacent-transposition line schedules with subset-coverage guarantees.

A schedule acts on a line of N labeled positions; each layer is a set of
disjoint adjacent transpositions applied simultaneously.  The three
builders guarantee that every pair / triple / quadruple of labels occupies
consecutive positions at some timestep, in depth O(N), O(N^2), O(N^3)
respectively:

* pairs: one odd-even transposition reversal of the line,
* triples on a block: split the block in half, glue size-k windows of one
  half as supernodes and reverse-sort them against the other half's
  groups, looping window alignments over the half's own pair schedule,
  then recurse into the halves,
* quadruples: the same looped (m, 4-m) construction for m = 1, 2, 3 over
  the two halves, with the (0, 4) and (4, 0) cases handled by recursion.

The exact swap pattern that keeps glued windows contiguous treats each
window as a supernode during the sort; coverage is verified exhaustively
by :func:`verify_coverage` rather than by construction-time bookkeeping.
Schedules are deterministic functions of N (ties broken lexicographically:
the left half takes the ceiling of the split).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from math import comb

__all__ = [
    "LineSchedule",
    "CoverageReport",
    "pair_schedule",
    "triple_schedule",
    "quad_schedule",
    "verify_coverage",
]


@dataclass
class LineSchedule:
    """Swap layers over a line, with optional inert padding labels."""

    n: int
    layers: list[tuple[tuple[int, int], ...]]
    n_active: int | None = None

    @property
    def depth(self) -> int:
        return len(self.layers)

    @property
    def active_labels(self) -> range:
        return range(self.n if self.n_active is None else self.n_active)

    def final_arrangement(self) -> list[int]:
        labels = list(range(self.n))
        for layer in self.layers:
            for i, j in layer:
                labels[i], labels[j] = labels[j], labels[i]
        return labels

    def to_text(self) -> str:
        """One layer per line; swaps as ``i,j`` position pairs."""
        lines = [f"n {self.n} active {self.n_active or self.n}"]
        for layer in self.layers:
            lines.append(" ".join(f"{i},{j}" for i, j in layer))
        return "\n".join(lines)

    @classmethod
    def from_text(cls, text: str) -> "LineSchedule":
        lines = text.strip().splitlines()
        _, n, _, active = lines[0].split()
        layers = []
        for line in lines[1:]:
            swaps = tuple(tuple(int(x) for x in pair.split(","))
                          for pair in line.split() if pair)
            layers.append(swaps)
        return cls(int(n), layers, int(active))


@dataclass
class CoverageReport:
    subset_size: int
    covered: int
    missing: list[tuple[int, ...]]
    depth: int

    @property
    def complete(self) -> bool:
        return not self.missing


class _Builder:
    """Accumulates layers while tracking the arrangement."""

    def __init__(self, n: int):
        self.n = n
        self.labels = list(range(n))
        self.layers: list[tuple[tuple[int, int], ...]] = []

    def apply_layer(self, swaps) -> None:
        swaps = tuple(sorted(tuple(s) for s in swaps))
        touched: set[int] = set()
        for i, j in swaps:
            if j != i + 1:
                raise ValueError(f"swap ({i}, {j}) is not adjacent")
            if i in touched or j in touched:
                raise ValueError("overlapping swaps in one layer")
            touched.update((i, j))
        if not swaps:
            return
        for i, j in swaps:
            self.labels[i], self.labels[j] = self.labels[j], self.labels[i]
        self.layers.append(swaps)

    def apply_parallel_sequences(self, sequences) -> None:
        """Merge swap sequences from disjoint position ranges layer by layer."""
        length = max((len(s) for s in sequences), default=0)
        for t in range(length):
            self.apply_layer([s[t] for s in sequences if t < len(s)])

    def replay_reversed(self, start: int) -> None:
        """Undo all layers emitted since ``start`` (each layer self-inverse)."""
        for layer in reversed(self.layers[start:]):
            self.apply_layer(layer)


def _odd_even_reversal(builder: _Builder, lo: int, hi: int):
    """Generator: one odd-even transposition layer per step, reversing
    positions [lo, hi).  Yields after applying each layer."""
    size = hi - lo
    if size < 2:
        return
    n_layers = 1 if size == 2 else size
    for t in range(n_layers):
        swaps = [(lo + i, lo + i + 1)
                 for i in range(t % 2, size - 1, 2)]
        builder.apply_layer(swaps)
        yield


def _block_swap_sequence(start: int, left: int, right: int):
    """Sequential adjacent swaps exchanging two neighboring blocks,
    preserving the internal order of each."""
    seq = []
    for b in range(right):
        for m in range(left):
            pos = start + left + b - m - 1
            seq.append((pos, pos + 1))
    return seq


def _reverse_units(builder: _Builder, base: int, sizes: list[int]) -> None:
    """Reverse the order of contiguous units via unit-level odd-even sort."""
    order = list(sizes)
    n_units = len(order)
    if n_units < 2:
        return
    n_layers = 1 if n_units == 2 else n_units
    for t in range(n_layers):
        starts = [base]
        for s in order[:-1]:
            starts.append(starts[-1] + s)
        sequences = []
        swapping = []
        for u in range(t % 2, n_units - 1, 2):
            sequences.append(_block_swap_sequence(
                starts[u], order[u], order[u + 1]))
            swapping.append(u)
        builder.apply_parallel_sequences(sequences)
        for u in swapping:
            order[u], order[u + 1] = order[u + 1], order[u]


def _tile_units(lo: int, hi: int, k: int, offset: int) -> list[int]:
    """Unit sizes tiling [lo, hi): singles, aligned k-windows, tail singles."""
    sizes = [1] * offset
    pos = lo + offset
    while pos + k <= hi:
        sizes.append(k)
        pos += k
    sizes.extend([1] * (hi - pos))
    return sizes


def _pairing_roundtrip(builder: _Builder, lo: int, mid: int, hi: int,
                       ka: int, oa: int, kb: int, ob: int) -> None:
    """Glue aligned windows in both halves, reverse the unit line so every
    window pair becomes adjacent, then restore positions exactly.

    A no-op when either half has no complete window at its offset: the
    sort would bring no new group together.
    """
    left = _tile_units(lo, mid, ka, oa)
    right = _tile_units(mid, hi, kb, ob)
    if ka not in left or kb not in right:
        return
    sizes = left + right
    mark = len(builder.layers)
    _reverse_units(builder, lo, sizes)
    builder.replay_reversed(mark)


def _group_states(builder: _Builder, lo: int, hi: int, k: int):
    """Generator pausing at every arrangement of the block's k-subset
    coverage circuit; every k-subset of the block's labels is consecutive
    at some yielded state."""
    size = hi - lo
    yield
    if k == 1 or size <= k:
        # any k-subset is the whole block (or none exists): one state does
        return
    if k == 2:
        yield from _odd_even_reversal(builder, lo, hi)
        return
    if k == 3:
        yield from _triple_states(builder, lo, hi)
        return
    raise ValueError(f"no group circuit for k={k}")


def _paired_phase(builder: _Builder, lo: int, mid: int, hi: int,
                  ka: int, kb: int):
    """Loop (ka, kb) group circuits against each other with pairing sorts.

    Yields at every intermediate arrangement so enclosing constructions can
    reuse the exposed groupings.
    """
    for _ in _group_states(builder, lo, mid, ka):
        for oa in range(ka):
            gen_b = _group_states(builder, mid, hi, kb)
            for _ in gen_b:
                for ob in range(kb):
                    _pairing_roundtrip(builder, lo, mid, hi, ka, oa, kb, ob)
                    yield
        yield


def _triple_states(builder: _Builder, lo: int, hi: int):
    size = hi - lo
    if size < 3:
        return
    if size == 3:
        yield  # the block is its own window
        return
    mid = lo + (size + 1) // 2
    yield from _paired_phase(builder, lo, mid, hi, 1, 2)
    yield from _paired_phase(builder, lo, mid, hi, 2, 1)
    yield from _triple_states(builder, lo, mid)
    yield from _triple_states(builder, mid, hi)


def _quad_states(builder: _Builder, lo: int, hi: int):
    size = hi - lo
    if size <= 4:
        yield  # a 4-subset of a block this small is already consecutive
        return
    mid = lo + (size + 1) // 2
    for ka in (1, 2, 3):
        yield from _paired_phase(builder, lo, mid, hi, ka, 4 - ka)
    yield from _quad_states(builder, lo, mid)
    yield from _quad_states(builder, mid, hi)


def pair_schedule(n: int) -> LineSchedule:
    """Odd-even transposition reversal: every 2-subset adjacent, depth N."""
    if n < 2:
        raise ValueError("pair_schedule needs N >= 2")
    builder = _Builder(n)
    for _ in _odd_even_reversal(builder, 0, n):
        pass
    assert builder.labels == list(range(n))[::-1]
    return LineSchedule(n, builder.layers)


def triple_schedule(n: int) -> LineSchedule:
    """Every 3-subset consecutive at some timestep; depth O(N^2)."""
    if n < 3:
        raise ValueError("triple_schedule needs N >= 3")
    builder = _Builder(n)
    for _ in _triple_states(builder, 0, n):
        pass
    return LineSchedule(n, builder.layers)


def quad_schedule(n: int) -> LineSchedule:
    """Every 4-subset consecutive at some timestep; depth O(N^3).

    Lines whose length is not a multiple of four are padded with inert
    labels that are excluded from coverage accounting.
    """
    if n < 4:
        raise ValueError("quad_schedule needs N >= 4")
    padded = n if n % 4 == 0 else n + (4 - n % 4)
    builder = _Builder(padded)
    for _ in _quad_states(builder, 0, padded):
        pass
    return LineSchedule(padded, builder.layers, n_active=n)


def verify_coverage(schedule: LineSchedule, k: int) -> CoverageReport:
    """Exhaustively simulate the timeline and report k-subset coverage.

    A subset counts as covered when its labels occupy k consecutive
    positions at t = 0 or after any layer.
    """
    n = schedule.n
    if not 1 <= k <= n:
        raise ValueError(f"subset size {k} out of range for line of {n}")
    active = set(schedule.active_labels)
    labels = list(range(n))
    covered: set[tuple[int, ...]] = set()

    def record():
        for start in range(n - k + 1):
            window = labels[start:start + k]
            if all(lab in active for lab in window):
                covered.add(tuple(sorted(window)))

    record()
    for layer in schedule.layers:
        for i, j in layer:
            labels[i], labels[j] = labels[j], labels[i]
        record()

    missing = [subset for subset in combinations(sorted(active), k)
               if subset not in covered]
    assert len(covered) + len(missing) == comb(len(active), k)
    return CoverageReport(k, len(covered), missing, schedule.depth)

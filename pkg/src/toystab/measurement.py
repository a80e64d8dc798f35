"""Observable measurements, partition measurements and decision trees."""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Sequence, Union

from .algebra import QUBIT, Observable, commutes, multiply
from .stabilizer import (
    Membership,
    StabilizerState,
    Violation,
    are_disjoint,
    expand,
    membership,
    trusted_state,
)


class MissingSeed(RuntimeError):
    """A random outcome was needed but no rng was supplied."""


class ImpossibleOutcome(ValueError):
    pass


@dataclass(frozen=True)
class MeasureResult:
    value: int
    posterior: StabilizerState
    deterministic: bool


def expectation(s: StabilizerState, g: Observable) -> int:
    m = membership(s, g)
    if m is Membership.IN_GROUP:
        return 1
    if m is Membership.NEGATION_IN_GROUP:
        return -1
    return 0


def _draw(rng) -> int:
    if rng is None:
        raise MissingSeed("outcome is random; pass a seeded rng")
    return 1 if int(rng.integers(2)) == 0 else -1


def _update(s: StabilizerState, g: Observable, value: int) -> StabilizerState:
    gens = list(s.gens)
    anti = [i for i, h in enumerate(gens) if not commutes(h, g)]
    if anti:
        h = gens[anti[0]]
        for i in anti[1:]:
            gens[i] = multiply(gens[i], h)
        del gens[anti[0]]
    gens.append(g if value == 1 else -g)
    return trusted_state(gens, s.n, s.algebra)


def _deterministic_value(s: StabilizerState, g: Observable) -> int | None:
    if g.is_trivial:
        return 1 if g.ipow == 0 else -1
    e = expectation(s, g)
    return e or None


def _check_measurable(s: StabilizerState, g: Observable) -> None:
    if s.algebra == QUBIT:
        raise NotImplementedError("qubit states support expectation() only")
    s._check(g)


def measure(s: StabilizerState, g: Observable, rng=None) -> MeasureResult:
    """Measure a toy observable; ``rng`` is a numpy Generator."""
    _check_measurable(s, g)
    value = _deterministic_value(s, g)
    if value is not None:
        return MeasureResult(value, s, True)
    value = _draw(rng)
    return MeasureResult(value, _update(s, g, value), False)


def postselect(s: StabilizerState, g: Observable, value: int) -> StabilizerState:
    """Posterior conditioned on ``g`` reading ``value``."""
    _check_measurable(s, g)
    if value not in (1, -1):
        raise ValueError("value must be +1 or -1")
    known = _deterministic_value(s, g)
    if known is not None:
        if known != value:
            raise ImpossibleOutcome(f"{g} has value {known} with certainty")
        return s
    return _update(s, g, value)


def outcome_probability(s: StabilizerState, g: Observable, value: int = 1) -> float:
    known = _deterministic_value(s, g)
    if known is None:
        return 0.5
    return 1.0 if known == value else 0.0


# -- partition measurements --------------------------------------------------


@dataclass(frozen=True)
class PartitionMeasurement:
    blocks: tuple[StabilizerState, ...]

    def __post_init__(self):
        object.__setattr__(self, "blocks", tuple(self.blocks))

    @property
    def n(self) -> int:
        return self.blocks[0].n


def validate_partition(p: PartitionMeasurement) -> Violation | None:
    blocks = p.blocks
    if not blocks:
        return Violation("cover", (), "a partition needs at least one block")
    n = blocks[0].n
    for b in blocks:
        if b.n != n or b.algebra != blocks[0].algebra:
            return Violation("mismatch", (), "blocks differ in system count or algebra")
    for i, j in combinations(range(len(blocks)), 2):
        if not are_disjoint(blocks[i], blocks[j]):
            return Violation("overlap", (i, j), f"blocks {i} and {j} overlap")
    # pairwise disjoint, so the supports cover everything iff sizes add up
    total = sum(1 << (2 * n - len(b.gens)) for b in blocks)
    if total != 4**n:
        return Violation("cover", tuple(range(len(blocks))), f"blocks cover {total} of {4**n} ontic states")
    return None


@dataclass(frozen=True)
class Leaf:
    block: int


@dataclass(frozen=True)
class Node:
    observable: Observable
    plus: DecisionTree
    minus: DecisionTree


DecisionTree = Union[Leaf, Node]


@dataclass(frozen=True)
class NotFound:
    """No observable sequence realises the partition.

    ``blocks`` are the block indices at the level where the search failed;
    ``certificate`` is the shortest prefix of them whose subgroups share no
    non-trivial observable up to sign (None when candidates existed but every
    branch failed deeper down).
    """

    blocks: tuple[int, ...]
    certificate: tuple[int, ...] | None = None
    tried: tuple[Observable, ...] = field(default=())


def common_observables(blocks: Sequence[StabilizerState]) -> list[tuple[Observable, tuple[Membership, ...]]]:
    """Non-trivial +signed g with +-g in every block, in check-vector lex order."""
    first = blocks[0]
    seen = {}
    for e in expand(first):
        if e.is_trivial:
            continue
        g = e.with_ipow(0)
        seen[g.cv] = g
    out = []
    for cv in sorted(seen, key=lambda c: c.lex_key()):
        g = seen[cv]
        ms = tuple(membership(b, g) for b in blocks)
        if Membership.NEITHER not in ms:
            out.append((g, ms))
    return out


def _certificate(blocks: Sequence[StabilizerState], idx: Sequence[int]) -> tuple[int, ...] | None:
    for k in range(1, len(idx) + 1):
        if not common_observables([blocks[i] for i in idx[:k]]):
            return tuple(idx[:k])
    return None


def _search(blocks: Sequence[StabilizerState], idx: tuple[int, ...]) -> DecisionTree | NotFound:
    if len(idx) == 1:
        return Leaf(idx[0])
    sub = [blocks[i] for i in idx]
    tried = []
    deepest = None
    for g, ms in common_observables(sub):
        plus = tuple(i for i, m in zip(idx, ms) if m is Membership.IN_GROUP)
        minus = tuple(i for i, m in zip(idx, ms) if m is Membership.NEGATION_IN_GROUP)
        if not plus or not minus:
            continue
        tried.append(g)
        left = _search(blocks, plus)
        if isinstance(left, NotFound):
            deepest = deepest or left
            continue
        right = _search(blocks, minus)
        if isinstance(right, NotFound):
            deepest = deepest or right
            continue
        return Node(g, left, right)
    if not tried:
        return NotFound(idx, _certificate(blocks, idx))
    return deepest if deepest is not None else NotFound(idx, None, tuple(tried))


def find_observable_sequence(p: PartitionMeasurement) -> DecisionTree | NotFound:
    violation = validate_partition(p)
    if violation is not None:
        raise ValueError(f"invalid partition: {violation.message}")
    return _search(p.blocks, tuple(range(len(p.blocks))))


def tree_paths(tree: DecisionTree, prefix: tuple[Observable, ...] = ()):
    """Yield ``(block index, signed observables along the path)``."""
    if isinstance(tree, Leaf):
        yield tree.block, prefix
        return
    yield from tree_paths(tree.plus, prefix + (tree.observable,))
    yield from tree_paths(tree.minus, prefix + (-tree.observable,))


def format_tree(tree: DecisionTree, indent: int = 0) -> str:
    pad = "  " * indent
    if isinstance(tree, Leaf):
        return f"{pad}block {tree.block}"
    return "\n".join(
        [
            f"{pad}measure {tree.observable}",
            f"{pad}+1:",
            format_tree(tree.plus, indent + 1),
            f"{pad}-1:",
            format_tree(tree.minus, indent + 1),
        ]
    )


def run_tree(tree: DecisionTree, s: StabilizerState, rng=None) -> tuple[int, StabilizerState, list[tuple[Observable, int]]]:
    """Measure along the tree; returns the block reached, posterior and readings."""
    readings = []
    while isinstance(tree, Node):
        r = measure(s, tree.observable, rng)
        readings.append((tree.observable, r.value))
        s = r.posterior
        tree = tree.plus if r.value == 1 else tree.minus
    return tree.block, s, readings


def partition(*blocks: StabilizerState) -> PartitionMeasurement:
    return PartitionMeasurement(tuple(blocks))


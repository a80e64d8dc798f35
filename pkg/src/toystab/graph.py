"""Toy graph states and the Z-measurement vertex-deletion rule."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .algebra import TOY, CheckVector, ToyObservable
from .measurement import measure
from .stabilizer import StabilizerState, new_state, trusted_state
from .transform import apply, compose, gate, identity_transformation


@dataclass(frozen=True)
class SimpleGraph:
    """Undirected simple graph on vertices ``0..n-1``."""

    n: int
    edges: frozenset[tuple[int, int]]

    def __post_init__(self):
        clean = set()
        for a, b in self.edges:
            if a == b:
                raise ValueError(f"self-loop at vertex {a}")
            if not (0 <= a < self.n and 0 <= b < self.n):
                raise ValueError(f"edge ({a}, {b}) out of range for n={self.n}")
            clean.add((min(a, b), max(a, b)))
        object.__setattr__(self, "edges", frozenset(clean))

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> SimpleGraph:
        edges = list(edges)
        seen = set()
        for a, b in edges:
            key = (min(a, b), max(a, b))
            if key in seen:
                raise ValueError(f"duplicate edge {key}")
            seen.add(key)
        return cls(n, frozenset(edges))

    def neighbors(self, k: int) -> list[int]:
        return sorted({b for a, b in self.edges if a == k} | {a for a, b in self.edges if b == k})

    def delete_vertex(self, k: int) -> SimpleGraph:
        """Drop the edges at ``k``; the vertex itself stays, isolated."""
        return SimpleGraph(self.n, frozenset(e for e in self.edges if k not in e))


def graph_generator(g: SimpleGraph, k: int) -> ToyObservable:
    z = 0
    for l in g.neighbors(k):
        z |= 1 << l
    return ToyObservable(CheckVector(g.n, 1 << k, z))


def build_graph_state(g: SimpleGraph) -> StabilizerState:
    """``<g_1..g_n>`` with ``g_k = X_k * prod over neighbours l of Z_l``."""
    return new_state([graph_generator(g, k) for k in range(g.n)], n=g.n, algebra=TOY)


def build_graph_state_by_gates(g: SimpleGraph, order: Sequence[tuple[int, int]] | None = None) -> StabilizerState:
    """Same state by applying a CZ-analogue per edge to ``<X_1, ..., X_n>``."""
    plus = new_state([ToyObservable(CheckVector(g.n, 1 << k, 0)) for k in range(g.n)], n=g.n, algebra=TOY)
    t = identity_transformation(g.n)
    for a, b in order if order is not None else sorted(g.edges):
        t = compose(gate("cz", a, b, n=g.n), t)
    return apply(t, plus)


def measure_z_vertex(g: SimpleGraph, s: StabilizerState, k: int, rng) -> tuple[int, SimpleGraph, StabilizerState]:
    """Measure Z_k on the graph state of ``g`` and correct the neighbours.

    On outcome -1 the ``z`` gate (X -> -X) is applied to every neighbour.
    The posterior is the graph state of ``g`` without ``k``'s edges, except
    that system ``k`` holds ``<+-Z_k>``.
    """
    if not 0 <= k < g.n:
        raise ValueError(f"vertex {k} out of range for n={g.n}")
    zk = ToyObservable(CheckVector(g.n, 0, 1 << k))
    result = measure(s, zk, rng)
    post = result.posterior
    if result.value == -1:
        for l in g.neighbors(k):
            post = apply(gate("z", l, n=g.n), post)
    return result.value, g.delete_vertex(k), post


def expected_after_z(g: SimpleGraph, k: int, value: int) -> StabilizerState:
    """Graph state with ``k`` deleted, system ``k`` fixed to ``<value * Z_k>``."""
    rest = g.delete_vertex(k)
    gens = [graph_generator(rest, l) for l in range(g.n) if l != k]
    gens.append(ToyObservable(CheckVector(g.n, 0, 1 << k), value))
    return trusted_state(gens, g.n, TOY)


def parse_edges(text: str, n: int | None = None) -> SimpleGraph:
    """``"1-2,2-3"`` with 1-based vertices."""
    pairs = []
    for item in filter(None, (p.strip() for p in text.split(","))):
        a, _, b = item.partition("-")
        pairs.append((int(a) - 1, int(b) - 1))
    size = n if n is not None else max((max(p) for p in pairs), default=-1) + 1
    return SimpleGraph.from_edges(size, pairs)

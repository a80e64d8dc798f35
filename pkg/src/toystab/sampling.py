"""Seeded random states, transformations and circuits for tests and benchmarks."""

from __future__ import annotations

import numpy as np

from . import gf2
from .algebra import TOY, Algebra, CheckVector, ToyObservable, make
from .stabilizer import StabilizerState, trusted_state
from .transform import GATE_ARITY, Transformation, apply


def random_observable(n: int, rng, algebra: Algebra = TOY, nontrivial: bool = True):
    while True:
        x = int(rng.integers(1 << n))
        z = int(rng.integers(1 << n))
        if x or z or not nontrivial:
            return make(algebra, CheckVector(n, x, z), 2 * int(rng.integers(2)))


def random_transformation(n: int, rng, algebra: Algebra = TOY) -> Transformation:
    """Images drawn slot by slot, rejecting vectors that break the pattern."""
    width = 2 * n
    while True:
        rows: list[tuple[int, int]] = []
        for i in range(width):
            partner = (i + n) % width
            for _ in range(64 * width):
                v = (int(rng.integers(1 << n)), int(rng.integers(1 << n)))
                if v != (0, 0) and all(gf2.sp(v, rows[j]) == (j == partner) for j in range(i)):
                    rows.append(v)
                    break
            else:
                break
        if len(rows) == width:
            break
    images = tuple(make(algebra, CheckVector(n, x, z), 2 * int(rng.integers(2))) for x, z in rows)
    return Transformation(algebra, n, images)


def random_state(n: int, rng, algebra: Algebra = TOY, l: int | None = None) -> StabilizerState:
    """A random transformation applied to ``<+-Z_1, ..., +-Z_l>``."""
    if l is None:
        l = int(rng.integers(n + 1))
    gens = [make(algebra, CheckVector(n, 0, 1 << k), 2 * int(rng.integers(2))) for k in range(l)]
    base = trusted_state(gens, n, algebra)
    return apply(random_transformation(n, rng, algebra), base)


def random_rephasing(s: StabilizerState, rng) -> StabilizerState:
    """Flip a random non-empty subset of the generator signs."""
    l = len(s.gens)
    if l == 0:
        raise ValueError("the trivial state has no distinct rephasing")
    while True:
        flips = [bool(rng.integers(2)) for _ in range(l)]
        if any(flips):
            break
    gens = [-g if f else g for g, f in zip(s.gens, flips)]
    return trusted_state(gens, s.n, s.algebra)


def random_circuit(n: int, length: int, rng, measure_fraction: float = 0.3, local: bool = True):
    """List of ``("gate", name, systems)`` / ``("measure", observable)`` ops.

    ``local`` restricts measurements to single-system X, Y or Z.
    """
    names = [name for name in GATE_ARITY if GATE_ARITY[name] <= n]
    ops = []
    for _ in range(length):
        if rng.random() < measure_fraction:
            if local:
                k = int(rng.integers(n))
                letter = int(rng.integers(3))
                x = (letter != 1) << k
                z = (letter != 0) << k
                g = ToyObservable(CheckVector(n, x, z), 1 if rng.integers(2) == 0 else -1)
            else:
                g = random_observable(n, rng)
            ops.append(("measure", g))
        else:
            name = names[int(rng.integers(len(names)))]
            systems = tuple(int(v) for v in rng.choice(n, GATE_ARITY[name], replace=False))
            ops.append(("gate", name, systems))
    return ops


def make_rng(seed) -> np.random.Generator:
    return np.random.default_rng(seed)

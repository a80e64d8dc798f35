"""Reversible transformations as canonical generator sets.

A :class:`Transformation` stores the image of every X_k (slot ``k``) and Z_k
(slot ``n + k``).  Everything else about its action follows by
multiplicativity, so no ``4**n`` object is ever built except in
:func:`ontic_permutation`.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from itertools import combinations
from typing import Sequence

from . import gf2
from .algebra import (
    OBSERVABLE_TYPES,
    QUBIT,
    TOY,
    Algebra,
    CheckVector,
    DimensionMismatch,
    Observable,
    ToyObservable,
    eigenvalue,
    multiply,
    ontic_index,
    parse_observable,
    symplectic_product,
)
from .stabilizer import StabilizerState, Violation, trusted_state

ONTIC_LIMIT = 6


class InvalidTransformation(ValueError):
    def __init__(self, violation: Violation):
        super().__init__(violation.message)
        self.violation = violation


# -- elementary permutations -------------------------------------------------

_CYCLES_RE = re.compile(r"^(\(\d+\))+$")


@dataclass(frozen=True)
class ElementaryPermutation:
    """A bijection on the ontic labels 1..4; ``images[k - 1]`` is where k goes."""

    images: tuple[int, int, int, int]

    def __post_init__(self):
        if sorted(self.images) != [1, 2, 3, 4]:
            raise ValueError(f"not a permutation of 1..4: {self.images}")

    @classmethod
    def identity(cls) -> ElementaryPermutation:
        return cls((1, 2, 3, 4))

    @classmethod
    def from_cycles(cls, text: str) -> ElementaryPermutation:
        """Parse cycle notation; ``(342)`` sends 3 to 4, 4 to 2 and 2 to 3."""
        compact = "".join(text.split())
        if not _CYCLES_RE.match(compact):
            raise ValueError(f"bad cycle notation {text!r}")
        images = {k: k for k in range(1, 5)}
        seen: set[int] = set()
        for cycle in re.findall(r"\((\d+)\)", compact):
            labels = [int(c) for c in cycle]
            for lab in labels:
                if lab not in images:
                    raise ValueError(f"ontic label {lab} out of range in {text!r}")
                if lab in seen:
                    raise ValueError(f"label {lab} repeated in {text!r}")
                seen.add(lab)
            for a, b in zip(labels, labels[1:] + labels[:1]):
                images[a] = b
        return cls(tuple(images[k] for k in range(1, 5)))

    def __call__(self, k: int) -> int:
        return self.images[k - 1]

    def then(self, other: ElementaryPermutation) -> ElementaryPermutation:
        """Apply ``self`` first, then ``other``."""
        return ElementaryPermutation(tuple(other(self(k)) for k in range(1, 5)))

    def inverse(self) -> ElementaryPermutation:
        inv = [0] * 4
        for k in range(1, 5):
            inv[self(k) - 1] = k
        return ElementaryPermutation(tuple(inv))

    def cycles(self) -> str:
        """Cycle notation with each cycle ending on its smallest label."""
        out = []
        done: set[int] = set()
        for start in range(1, 5):
            if start in done:
                continue
            cyc = [start]
            done.add(start)
            k = self(start)
            while k != start:
                cyc.append(k)
                done.add(k)
                k = self(k)
            cyc = cyc[1:] + cyc[:1]
            out.append("(" + "".join(map(str, cyc)) + ")")
        return "".join(out)

    def __str__(self) -> str:
        return self.cycles()


def all_elementary_permutations() -> list[ElementaryPermutation]:
    from itertools import permutations

    return [ElementaryPermutation(p) for p in permutations((1, 2, 3, 4))]


# -- transformations ---------------------------------------------------------


@dataclass(frozen=True)
class Transformation:
    algebra: Algebra
    n: int
    images: tuple[Observable, ...]

    def image_of_x(self, k: int) -> Observable:
        return self.images[k]

    def image_of_z(self, k: int) -> Observable:
        return self.images[self.n + k]

    def matrix_rows(self) -> list[int]:
        """Packed check vectors of the images (the binary symplectic matrix)."""
        return [gf2.pack(g.cv.x, g.cv.z, self.n) for g in self.images]

    def describe(self) -> str:
        n = self.n
        parts = []
        for k in range(n):
            parts.append(f"X{k + 1} -> {self.images[k]}")
        for k in range(n):
            parts.append(f"Z{k + 1} -> {self.images[n + k]}")
        return ", ".join(parts)


def validate_transformation(images: Sequence[Observable]) -> Violation | None:
    if len(images) % 2:
        return Violation("singular", (), "need an image for every X_k and Z_k")
    n = len(images) // 2
    for i, g in enumerate(images):
        if g.n != n or g.algebra != images[0].algebra:
            raise DimensionMismatch("images must share algebra and act on n systems")
        if not g.is_hermitian:
            return Violation("non-hermitian", (i,), f"image {i} ({g}) is not Hermitian")
    for i, j in combinations(range(2 * n), 2):
        want = 1 if j == i + n else 0
        if symplectic_product(images[i].cv, images[j].cv) != want:
            verb = "anticommute" if want == 0 else "commute"
            return Violation(
                "anticommute", (i, j), f"images {i} ({images[i]}) and {j} ({images[j]}) {verb} against the canonical pattern"
            )
    if gf2.rank([gf2.pack(g.cv.x, g.cv.z, n) for g in images]) != 2 * n:
        return Violation("singular", (), "image check vectors are not linearly independent")
    return None


def new_transformation(images: Sequence[Observable]) -> Transformation:
    images = tuple(images)
    violation = validate_transformation(images)
    if violation is not None:
        raise InvalidTransformation(violation)
    return Transformation(images[0].algebra, len(images) // 2, images)


def transformation(*texts: str, algebra: Algebra = TOY) -> Transformation:
    """Images as strings: X_1..X_n images first, then Z_1..Z_n."""
    n = len(texts) // 2
    return new_transformation([parse_observable(t, n, algebra) for t in texts])


def identity_transformation(n: int, algebra: Algebra = TOY) -> Transformation:
    cls = OBSERVABLE_TYPES[algebra]
    images = [cls(CheckVector(n, 1 << k, 0)) for k in range(n)] + [cls(CheckVector(n, 0, 1 << k)) for k in range(n)]
    return Transformation(algebra, n, tuple(images))


def apply_to_observable(t: Transformation, g: Observable) -> Observable:
    if g.algebra != t.algebra or g.n != t.n:
        raise DimensionMismatch("observable and transformation do not match")
    n = t.n
    x, z = g.cv.x, g.cv.z
    ipow = g.ipow
    if t.algebra == QUBIT:
        # Y = i X Z: peel the phase so each site is X^x Z^z in that order.
        ipow += (x & z).bit_count()
    acc = OBSERVABLE_TYPES[t.algebra](CheckVector.zero(n)).with_ipow(ipow)
    images = t.images
    for k in range(n):
        if (x >> k) & 1:
            acc = multiply(acc, images[k])
        if (z >> k) & 1:
            acc = multiply(acc, images[n + k])
    return acc


def apply(t: Transformation, s: StabilizerState) -> StabilizerState:
    if s.algebra != t.algebra or s.n != t.n:
        raise DimensionMismatch("state and transformation do not match")
    return trusted_state([apply_to_observable(t, g) for g in s.gens], s.n, s.algebra)


def compose(t2: Transformation, t1: Transformation) -> Transformation:
    """``t1`` first, then ``t2``."""
    if t1.algebra != t2.algebra or t1.n != t2.n:
        raise DimensionMismatch("transformations do not match")
    return Transformation(t1.algebra, t1.n, tuple(apply_to_observable(t2, g) for g in t1.images))


def invert(t: Transformation) -> Transformation:
    n = t.n
    width = 2 * n
    # Gauss-Jordan on [M | I]: image rows carry a tag recording which
    # images were combined.  Packed bit i is slot i (X_k then Z_k).
    rows = [[v, 1 << i] for i, v in enumerate(t.matrix_rows())]
    for col in range(width):
        pivot = next((r for r in range(col, width) if (rows[r][0] >> col) & 1), None)
        if pivot is None:
            raise InvalidTransformation(Violation("singular", (), "transformation is not invertible"))
        rows[col], rows[pivot] = rows[pivot], rows[col]
        pv, ptag = rows[col]
        for r in range(width):
            if r != col and (rows[r][0] >> col) & 1:
                rows[r][0] ^= pv
                rows[r][1] ^= ptag
    cls = OBSERVABLE_TYPES[t.algebra]
    mask = (1 << n) - 1
    images = []
    for slot in range(width):
        tag = rows[slot][1]
        pre = cls(CheckVector(n, tag & mask, tag >> n))
        img = apply_to_observable(t, pre)
        images.append(pre.with_ipow(pre.ipow - img.ipow))
    return Transformation(t.algebra, n, tuple(images))


def tensor_transformations(*ts: Transformation) -> Transformation:
    algebra = ts[0].algebra
    total = sum(t.n for t in ts)
    cls = OBSERVABLE_TYPES[algebra]
    xs, zs = [], []
    offset = 0
    for t in ts:
        for k, g in enumerate(t.images):
            lifted = cls(CheckVector(total, g.cv.x << offset, g.cv.z << offset)).with_ipow(g.ipow)
            (xs if k < t.n else zs).append(lifted)
        offset += t.n
    return Transformation(algebra, total, tuple(xs + zs))


def embed(local: Transformation, systems: Sequence[int], n: int) -> Transformation:
    """Act with ``local`` on the given 0-based systems of an n-system register."""
    systems = tuple(systems)
    if len(systems) != local.n or len(set(systems)) != len(systems):
        raise ValueError(f"need {local.n} distinct systems, got {systems}")
    if any(not 0 <= s < n for s in systems):
        raise ValueError(f"system index out of range for n={n}: {systems}")
    cls = OBSERVABLE_TYPES[local.algebra]

    def lift(g: Observable) -> Observable:
        x = z = 0
        for j, s in enumerate(systems):
            x |= ((g.cv.x >> j) & 1) << s
            z |= ((g.cv.z >> j) & 1) << s
        return cls(CheckVector(n, x, z)).with_ipow(g.ipow)

    base = identity_transformation(n, local.algebra)
    images = list(base.images)
    for j, s in enumerate(systems):
        images[s] = lift(local.images[j])
        images[n + s] = lift(local.images[local.n + j])
    return Transformation(local.algebra, n, tuple(images))


# -- ontic level -------------------------------------------------------------


def conjugate_diagonal(perm: Sequence[int], g: ToyObservable) -> list[int]:
    """Diagonal of ``U g U^T`` for the ontic permutation ``v -> perm[v]``."""
    out = [0] * len(perm)
    for v, pv in enumerate(perm):
        out[pv] = eigenvalue(g, v)
    return out


def diagonal_to_observable(diag: Sequence[int], n: int) -> ToyObservable | None:
    """The toy observable with this diagonal, or None if there is none."""
    sign = diag[0]
    x = z = 0
    for k in range(n):
        if diag[ontic_index(1 << k, 0, n)] != sign:
            x |= 1 << k
        if diag[ontic_index(0, 1 << k, n)] != sign:
            z |= 1 << k
    g = ToyObservable(CheckVector(n, x, z), sign)
    if any(eigenvalue(g, v) != d for v, d in enumerate(diag)):
        return None
    return g


def from_permutation(p: ElementaryPermutation | str) -> Transformation:
    """The single-system transformation realised by an ontic permutation."""
    if isinstance(p, str):
        p = ElementaryPermutation.from_cycles(p)
    perm = [p(k + 1) - 1 for k in range(4)]
    images = []
    for letter_x, letter_z in ((1, 0), (0, 1)):
        g = ToyObservable(CheckVector(1, letter_x, letter_z))
        img = diagonal_to_observable(conjugate_diagonal(perm, g), 1)
        assert img is not None
        images.append(img)
    return Transformation(TOY, 1, tuple(images))


def ontic_permutation(t: Transformation, limit: int = ONTIC_LIMIT) -> tuple[int, ...]:
    """The ontic permutation ``v -> perm[v]`` realising a toy transformation."""
    if t.algebra != TOY:
        raise ValueError("ontic permutations exist for toy transformations only")
    n = t.n
    if n > limit:
        raise ValueError(f"ontic permutation refused for n={n} (limit {limit})")
    inv = invert(t)
    xs = inv.images[:n]
    zs = inv.images[n:]
    perm = []
    for v in range(4**n):
        ox = sum((eigenvalue(g, v) == -1) << k for k, g in enumerate(xs))
        oz = sum((eigenvalue(g, v) == -1) << k for k, g in enumerate(zs))
        perm.append(ontic_index(ox, oz, n))
    return tuple(perm)


def is_valid_ontic_permutation(perm: Sequence[int], n: int) -> bool:
    """Brute-force check that ``perm`` maps toy observables to toy observables
    and preserves commutation."""
    if sorted(perm) != list(range(4**n)):
        return False
    images = {}
    for x in range(1 << n):
        for z in range(1 << n):
            g = ToyObservable(CheckVector(n, x, z))
            img = diagonal_to_observable(conjugate_diagonal(perm, g), n)
            if img is None:
                return False
            images[(x, z)] = img
    keys = list(images)
    for a in keys:
        for b in keys:
            before = gf2.sp(a, b)
            after = symplectic_product(images[a].cv, images[b].cv)
            if before != after:
                return False
    return True


# -- named gates -------------------------------------------------------------

_TOY_GATES = {
    "x": ("+X", "-Z"),
    "z": ("-X", "+Z"),
    "h": ("+Z", "+X"),
    "s": ("+Y", "-Z"),
    "cnot": ("+XX", "+IX", "+ZI", "+ZZ"),
    "cz": ("+XZ", "+ZX", "+ZI", "+IZ"),
}

_QUBIT_GATES = {
    "x": ("+X", "-Z"),
    "z": ("-X", "+Z"),
    "h": ("+Z", "+X"),
    "s": ("+Y", "+Z"),
    "cnot": ("+XX", "+IX", "+ZI", "+ZZ"),
    "cz": ("+XZ", "+ZX", "+ZI", "+IZ"),
}

GATE_ARITY = {"x": 1, "z": 1, "h": 1, "s": 1, "cnot": 2, "cz": 2}


def local_gate(name: str, algebra: Algebra = TOY) -> Transformation:
    """A named gate on its own 1 or 2 systems."""
    table = _TOY_GATES if algebra == TOY else _QUBIT_GATES
    if name not in table:
        raise KeyError(f"unknown gate {name!r}")
    return transformation(*table[name], algebra=algebra)


def gate(name: str, *systems: int, n: int, algebra: Algebra = TOY) -> Transformation:
    """Named gate on 0-based ``systems`` of an n-system register."""
    return embed(local_gate(name, algebra), systems, n)


def perm_gate(p: ElementaryPermutation | str, system: int, n: int) -> Transformation:
    return embed(from_permutation(p), (system,), n)

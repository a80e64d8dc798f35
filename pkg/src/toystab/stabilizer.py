"""Stabilizer subgroups over either algebra.

A :class:`StabilizerState` always holds its generators in canonical form: the
reduced row echelon form of the generator check matrix with pivot columns
taken in the order X_1..X_n then Z_1..Z_n, phases carried through the row
operations.  Two states are equal exactly when they share a subgroup.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Sequence

from . import gf2
from .algebra import (
    OBSERVABLE_TYPES,
    QUBIT,
    TOY,
    Algebra,
    CheckVector,
    DimensionMismatch,
    Observable,
    multiply,
    parse_observable,
    symplectic_product,
)

EXPAND_LIMIT = 20


class InvalidGenerators(ValueError):
    def __init__(self, violation: Violation):
        super().__init__(violation.message)
        self.violation = violation


class NotARephasing(ValueError):
    pass


@dataclass(frozen=True)
class Violation:
    """Why a generator list (or image list) was rejected.

    ``kind`` is one of ``"anticommute"``, ``"dependent"``, ``"non-hermitian"``,
    ``"singular"``; ``indices`` points at the offending entries.
    """

    kind: str
    indices: tuple[int, ...]
    message: str


class Membership(enum.Enum):
    IN_GROUP = "in"
    NEGATION_IN_GROUP = "negation"
    NEITHER = "neither"


def _same_kind(gens: Sequence[Observable]) -> tuple[Algebra, int]:
    algebra, n = gens[0].algebra, gens[0].n
    for g in gens[1:]:
        if g.algebra != algebra or g.n != n:
            raise DimensionMismatch("generators must share algebra and system count")
    return algebra, n


def validate_generators(gens: Sequence[Observable]) -> Violation | None:
    """Independent commuting generators pass (None); otherwise the first fault."""
    if not gens:
        return None
    _, n = _same_kind(gens)
    for i, g in enumerate(gens):
        if not g.is_hermitian:
            return Violation("non-hermitian", (i,), f"generator {i} ({g}) is not Hermitian")
    for i, j in combinations(range(len(gens)), 2):
        if symplectic_product(gens[i].cv, gens[j].cv):
            return Violation("anticommute", (i, j), f"generators {i} ({gens[i]}) and {j} ({gens[j]}) anticommute")
    dep = gf2.first_dependent([gf2.pack(g.cv.x, g.cv.z, n) for g in gens])
    if dep is not None:
        return Violation("dependent", (dep,), f"generator {dep} ({gens[dep]}) depends on the preceding ones")
    return None


def _column_order(n: int):
    for k in range(n):
        yield 0, k
    for k in range(n):
        yield 1, k


def _has(cv: CheckVector, col: tuple[int, int]) -> int:
    part, k = col
    return ((cv.z if part else cv.x) >> k) & 1


def canonicalize(gens: Sequence[Observable]) -> tuple[Observable, ...]:
    """RREF with X-part pivots first; assumes independent commuting input."""
    rows = list(gens)
    if not rows:
        return ()
    n = rows[0].n
    r = 0
    for col in _column_order(n):
        if r == len(rows):
            break
        pivot = next((i for i in range(r, len(rows)) if _has(rows[i].cv, col)), None)
        if pivot is None:
            continue
        rows[r], rows[pivot] = rows[pivot], rows[r]
        p = rows[r]
        for i in range(len(rows)):
            if i != r and _has(rows[i].cv, col):
                rows[i] = multiply(rows[i], p)
        r += 1
    return tuple(rows)


def _pivot_col(cv: CheckVector) -> tuple[int, int]:
    if cv.x:
        return 0, (cv.x & -cv.x).bit_length() - 1
    return 1, (cv.z & -cv.z).bit_length() - 1


@dataclass(frozen=True)
class StabilizerState:
    """Epistemic state (toy) or stabilizer group (qubit) on ``n`` systems.

    Build with :func:`new_state`; the direct constructor trusts its input to
    be canonical already.
    """

    algebra: Algebra
    n: int
    gens: tuple[Observable, ...]

    def __str__(self) -> str:
        return "<" + ", ".join(str(g) for g in self.gens) + ">"

    def __len__(self) -> int:
        return len(self.gens)

    @property
    def size(self) -> int:
        return 1 << len(self.gens)

    def generator_strings(self) -> tuple[str, ...]:
        return tuple(str(g) for g in self.gens)

    def identity(self) -> Observable:
        return OBSERVABLE_TYPES[self.algebra].identity(self.n)

    def sort_key(self):
        return tuple((g.cv.lex_key(), g.ipow) for g in self.gens)

    def pivots(self) -> tuple[tuple[int, int], ...]:
        return tuple(_pivot_col(g.cv) for g in self.gens)

    def decompose(self, g: Observable) -> tuple[Observable, CheckVector, tuple[int, ...]]:
        """Reduce ``g``'s letters against the generators.

        Returns the matching group element, the residual check vector (zero
        iff ``+-g`` lies in the row space) and the generator indices used.
        """
        self._check(g)
        acc = self.identity()
        x, z = g.cv.x, g.cv.z
        used = []
        for i, (gen, col) in enumerate(zip(self.gens, self.pivots())):
            part, k = col
            if ((z if part else x) >> k) & 1:
                acc = multiply(acc, gen)
                x ^= gen.cv.x
                z ^= gen.cv.z
                used.append(i)
        return acc, CheckVector(self.n, x, z), tuple(used)

    def _check(self, g: Observable) -> None:
        if g.algebra != self.algebra or g.n != self.n:
            raise DimensionMismatch(f"{g.algebra} observable on {g.n} systems vs {self.algebra} state on {self.n}")


def new_state(gens: Iterable[Observable], n: int | None = None, algebra: Algebra | None = None) -> StabilizerState:
    """Validate and canonicalize a generator list."""
    gens = list(gens)
    if gens:
        alg, size = _same_kind(gens)
        if (n is not None and n != size) or (algebra is not None and algebra != alg):
            raise DimensionMismatch("generators disagree with requested n/algebra")
    else:
        if n is None:
            raise ValueError("an empty generator list needs an explicit n")
        alg, size = algebra or TOY, n
    violation = validate_generators(gens)
    if violation is not None:
        raise InvalidGenerators(violation)
    return StabilizerState(alg, size, canonicalize(gens))


def trusted_state(gens: Sequence[Observable], n: int, algebra: Algebra) -> StabilizerState:
    """Canonicalize generators already known to be valid."""
    return StabilizerState(algebra, n, canonicalize(gens))


def state(*texts: str, n: int | None = None, algebra: Algebra = TOY) -> StabilizerState:
    """Shorthand: ``state("+XX", "+ZZ")``."""
    gens = [parse_observable(t, n, algebra) for t in texts]
    return new_state(gens, n=n if gens else (n or 0), algebra=algebra)


def trivial_state(n: int, algebra: Algebra = TOY) -> StabilizerState:
    return StabilizerState(algebra, n, ())


def membership(s: StabilizerState, g: Observable) -> Membership:
    acc, residual, _ = s.decompose(g)
    if not residual.is_zero:
        return Membership.NEITHER
    d = (g.ipow - acc.ipow) & 3
    if d == 0:
        return Membership.IN_GROUP
    if d == 2:
        return Membership.NEGATION_IN_GROUP
    return Membership.NEITHER


def expand(s: StabilizerState, limit: int = EXPAND_LIMIT) -> list[Observable]:
    """All ``2**l`` group elements, identity first."""
    if len(s.gens) > limit:
        raise ValueError(f"refusing to expand {len(s.gens)} generators (limit {limit})")
    elements = [s.identity()]
    for gen in s.gens:
        elements += [multiply(e, gen) for e in elements]
    return elements


def is_pure(s: StabilizerState) -> bool:
    return len(s.gens) == s.n


def _check_pair(s: StabilizerState, t: StabilizerState) -> None:
    if s.algebra != t.algebra or s.n != t.n:
        raise DimensionMismatch("states differ in algebra or system count")


def are_disjoint(s: StabilizerState, t: StabilizerState) -> bool:
    """True iff some element of ``s`` has its negation in ``t``.

    Walks a basis of the intersection of the two row spaces: each basis
    element is a product of ``t`` generators whose letters also occur in
    ``s``; the sign comparison is a homomorphism on that intersection.
    """
    _check_pair(s, t)
    n = s.n
    pivots: dict[int, tuple[int, Observable]] = {}
    for gen in t.gens:
        _, res, _ = s.decompose(gen)
        r = gf2.pack(res.x, res.z, n)
        elem = gen
        while r:
            top = r.bit_length() - 1
            hit = pivots.get(top)
            if hit is None:
                break
            r ^= hit[0]
            elem = multiply(elem, hit[1])
        if r:
            pivots[r.bit_length() - 1] = (r, elem)
        elif membership(s, elem) is Membership.NEGATION_IN_GROUP:
            return True
    return False


def is_rephasing(s: StabilizerState, t: StabilizerState) -> bool:
    _check_pair(s, t)
    return [g.cv for g in s.gens] == [g.cv for g in t.gens]


def mix(s: StabilizerState, t: StabilizerState) -> StabilizerState:
    """The subgroup ``s & t`` describing the equal mixture of a rephasing pair."""
    if not is_rephasing(s, t):
        raise NotARephasing(f"{t} is not a rephasing of {s}")
    keep = []
    flipped = None
    for a, b in zip(s.gens, t.gens):
        if a.ipow == b.ipow:
            keep.append(a)
        elif flipped is None:
            flipped = a
        else:
            keep.append(multiply(a, flipped))
    return trusted_state(keep, s.n, s.algebra)


def superpositions(s: StabilizerState, t: StabilizerState) -> list[StabilizerState]:
    """The four uniform coherent superpositions of a distinct rephasing pair."""
    if not (is_pure(s) and is_pure(t)):
        raise ValueError("superpositions need pure states")
    if s == t:
        raise ValueError("superpositions need distinct states")
    common = mix(s, t)
    if len(common.gens) != s.n - 1:
        raise AssertionError("rephasing pair did not share n-1 generators")
    n = s.n
    basis = gf2.XorBasis()
    for g in common.gens:
        basis.add(gf2.pack(g.cv.x, g.cv.z, n))
    g_last = next(g for g in s.gens if basis.add(gf2.pack(g.cv.x, g.cv.z, n)))
    # g_last goes last: its partner then commutes with the span of common,
    # which the completion only ever recombines among itself.
    stabs = [(g.cv.x, g.cv.z) for g in common.gens] + [(g_last.cv.x, g_last.cv.z)]
    destabs, _ = gf2.symplectic_completion(stabs, n)
    d = CheckVector(n, *destabs[-1])
    candidates = [d, CheckVector(n, d.x ^ g_last.cv.x, d.z ^ g_last.cv.z)]
    cls = OBSERVABLE_TYPES[s.algebra]
    out = set()
    for cv in candidates:
        for ipow in (0, 2):
            out.add(trusted_state(common.gens + (cls(cv).with_ipow(ipow),), n, s.algebra))
    return sorted(out, key=StabilizerState.sort_key)


def tensor(*states: StabilizerState) -> StabilizerState:
    """Tensor product, systems of the first state first."""
    algebra = states[0].algebra
    total = sum(st.n for st in states)
    cls = OBSERVABLE_TYPES[algebra]
    gens = []
    offset = 0
    for st in states:
        if st.algebra != algebra:
            raise DimensionMismatch("cannot tensor states of different algebras")
        for g in st.gens:
            gens.append(cls(CheckVector(total, g.cv.x << offset, g.cv.z << offset)).with_ipow(g.ipow))
        offset += st.n
    return trusted_state(gens, total, algebra)


def as_qubit(s: StabilizerState) -> StabilizerState:
    """Same generator list read in the qubit algebra."""
    if s.algebra == QUBIT:
        return s
    cls = OBSERVABLE_TYPES[QUBIT]
    return trusted_state([cls(g.cv, g.ipow) for g in s.gens], s.n, QUBIT)

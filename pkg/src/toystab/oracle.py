"""Brute-force ground truth over all ``4**n`` ontic states.

Nothing here is clever on purpose: supports are filtered state by state,
measurement disturbance is found by scanning every ontic state, and the
enumerations walk every candidate.  The symbolic engine is checked against
these results.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import combinations, permutations, product
from math import prod
from typing import Iterable

import numpy as np

from . import gf2
from .algebra import (
    TOY,
    Algebra,
    CheckVector,
    ToyObservable,
    eigenvalue,
    format_ontic,
    make,
    symplectic_product,
)
from .stabilizer import StabilizerState, trusted_state
from .transform import Transformation, is_valid_ontic_permutation, validate_transformation

SUPPORT_LIMIT = 8
PURE_LIMIT = 3
ALL_LIMIT = 2
TRANSFORM_LIMIT = 2


def _guard(n: int, limit: int, what: str) -> None:
    if n > limit:
        raise ValueError(f"{what} refused for n={n} (limit {limit})")


@lru_cache(maxsize=None)
def _ontic_tables(n: int) -> tuple[np.ndarray, np.ndarray]:
    v = np.arange(4**n, dtype=np.uint64)
    ox = np.zeros_like(v)
    oz = np.zeros_like(v)
    for k in range(n):
        ox |= ((v >> np.uint64(2 * k)) & np.uint64(1)) << np.uint64(k)
        oz |= ((v >> np.uint64(2 * k + 1)) & np.uint64(1)) << np.uint64(k)
    return ox, oz


def eigenvalues(g: ToyObservable) -> np.ndarray:
    """Value of ``g`` on every ontic state, as an int8 array."""
    n = g.cv.n
    ox, oz = _ontic_tables(n)
    parity = (np.bitwise_count(ox & np.uint64(g.cv.x)) + np.bitwise_count(oz & np.uint64(g.cv.z))) & 1
    return np.where(parity == 1, -g.sign, g.sign).astype(np.int8)


@dataclass(frozen=True)
class OnticSupport:
    n: int
    members: frozenset[int]

    def __len__(self) -> int:
        return len(self.members)

    def __contains__(self, v: int) -> bool:
        return v in self.members

    def sorted(self) -> list[int]:
        return sorted(self.members)

    def labels(self) -> list[str]:
        return [format_ontic(v, self.n) for v in self.sorted()]

    def __str__(self) -> str:
        return " v ".join(f"({lab})" for lab in self.labels())


def support_of(s: StabilizerState, limit: int = SUPPORT_LIMIT) -> OnticSupport:
    if s.algebra != TOY:
        raise ValueError("ontic supports exist for toy states only")
    _guard(s.n, limit, "support enumeration")
    mask = np.ones(4**s.n, dtype=bool)
    for g in s.gens:
        mask &= eigenvalues(g) == 1
    return OnticSupport(s.n, frozenset(int(v) for v in np.flatnonzero(mask)))


def commutant_basis(g: ToyObservable) -> list[ToyObservable]:
    """Basis (unsigned) of the toy observables commuting with ``g``."""
    n = g.cv.n
    out = []
    for x, z in [(1 << k, 0) for k in range(n)] + [(0, 1 << k) for k in range(n)]:
        out.append(CheckVector(n, x, z))
    if not g.is_trivial:
        # swap one anticommuting unit for products that commute
        anti = [cv for cv in out if symplectic_product(cv, g.cv)]
        keep = [cv for cv in out if not symplectic_product(cv, g.cv)]
        out = keep + [anti[0] ^ a for a in anti[1:]]
    return [ToyObservable(cv) for cv in out]


def disturbance_set(v: int, g: ToyObservable, limit: int = SUPPORT_LIMIT) -> list[int]:
    """All ontic states agreeing with ``v`` on every observable commuting with ``g``."""
    n = g.cv.n
    _guard(n, limit, "ontic measurement")
    mask = np.ones(4**n, dtype=bool)
    for h in commutant_basis(g):
        vals = eigenvalues(h)
        mask &= vals == vals[v]
    return [int(u) for u in np.flatnonzero(mask)]


def ontic_measure(v: int, g: ToyObservable, rng, limit: int = SUPPORT_LIMIT) -> tuple[int, int]:
    """Read ``g`` off ontic state ``v`` and sample the disturbed state."""
    value = eigenvalue(g, v)
    choices = disturbance_set(v, g, limit)
    if len(choices) == 1:
        return value, choices[0]
    return value, choices[int(rng.integers(len(choices)))]


def ontic_posterior(support: Iterable[int], g: ToyObservable, value: int, limit: int = SUPPORT_LIMIT) -> frozenset[int]:
    """Set-level update: collect the disturbance sets of the consistent states."""
    out: set[int] = set()
    for v in support:
        if eigenvalue(g, v) == value:
            out.update(disturbance_set(v, g, limit))
    return frozenset(out)


# -- enumeration -------------------------------------------------------------


@dataclass
class CountReport:
    n: int
    kind: str
    formula_value: int | None
    enumerated_value: int | None
    method: str
    extra: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        checks = all(v for k, v in self.extra.items() if k.endswith("_ok"))
        if self.formula_value is None or self.enumerated_value is None:
            return checks
        return checks and self.formula_value == self.enumerated_value

    def line(self) -> str:
        f = "-" if self.formula_value is None else str(self.formula_value)
        e = "-" if self.enumerated_value is None else str(self.enumerated_value)
        return f"{self.kind} {self.n} {f} {e} {'OK' if self.ok else 'MISMATCH'}"


def pure_state_formula(n: int) -> int:
    return 2**n * prod(2 ** (n - k) + 1 for k in range(n))


def isotropic_subspace_count(n: int, l: int) -> int:
    """Number of l-dimensional self-orthogonal subspaces of the 2n-dim symplectic space."""
    num = prod(4 ** (n - i) - 1 for i in range(l))
    den = prod(2 ** (i + 1) - 1 for i in range(l))
    return num // den


def all_state_formula(n: int) -> int:
    return sum(2**l * isotropic_subspace_count(n, l) for l in range(n + 1))


def transformation_formula(n: int) -> int:
    value = Fraction(2 ** (2 * n * n + 3 * n)) * prod((1 - Fraction(1, 4**k) for k in range(1, n + 1)), start=Fraction(1))
    assert value.denominator == 1
    return int(value)


def _column_vector(col: int, n: int) -> tuple[int, int]:
    return (1 << col, 0) if col < n else (0, 1 << (col - n))


def isotropic_rref(n: int, l: int) -> list[list[tuple[int, int]]]:
    """Every commuting RREF check matrix of rank l (X columns pivot first)."""
    width = 2 * n
    out = []
    for pivots in combinations(range(width), l):
        free = [[c for c in range(p + 1, width) if c not in pivots] for p in pivots]
        for fill in product(*[product((0, 1), repeat=len(f)) for f in free]):
            rows = []
            for p, cols, bits in zip(pivots, free, fill):
                x, z = _column_vector(p, n)
                for c, b in zip(cols, bits):
                    if b:
                        cx, cz = _column_vector(c, n)
                        x |= cx
                        z |= cz
                rows.append((x, z))
            if all(not gf2.sp(a, b) for a, b in combinations(rows, 2)):
                out.append(rows)
    return out


def states_with_generators(n: int, l: int, algebra: Algebra = TOY) -> list[StabilizerState]:
    out = []
    for rows in isotropic_rref(n, l):
        for signs in product((0, 2), repeat=l):
            gens = [make(algebra, CheckVector(n, x, z), ip) for (x, z), ip in zip(rows, signs)]
            out.append(StabilizerState(algebra, n, tuple(gens)))
    return out


def pure_states(n: int, algebra: Algebra = TOY) -> list[StabilizerState]:
    _guard(n, PURE_LIMIT, "pure state enumeration")
    return states_with_generators(n, n, algebra)


def all_states(n: int, algebra: Algebra = TOY) -> list[StabilizerState]:
    _guard(n, ALL_LIMIT, "state enumeration")
    return [s for l in range(n + 1) for s in states_with_generators(n, l, algebra)]


def enumerate_pure_states(n: int) -> CountReport:
    states = pure_states(n)
    distinct = len(set(states))
    canonical = all(trusted_state(s.gens, n, TOY) == s for s in states)
    return CountReport(
        n,
        "pure_states",
        pure_state_formula(n),
        distinct,
        "rref-pivot enumeration x signs",
        {"canonical_ok": canonical, "listed": len(states)},
    )


def _valid_single(support: frozenset[int]) -> bool:
    return len(support) in (2, 4)


_SINGLE_MEASUREMENTS = [
    [(0, 1, 2, 3)],
    [(0, 1), (2, 3)],
    [(0, 2), (1, 3)],
    [(0, 3), (1, 2)],
]


def knowledge_balanced(support: frozenset[int], n: int) -> bool:
    """Inductive validity test for n <= 2 epistemic states given as ontic sets.

    n = 1: two or four states.  n = 2: the size is a power of two and every
    outcome of every valid measurement on one system leaves a valid state for
    the other.  Without the size rule sets of 10 to 15 states slip through.
    """
    if not support or len(support) & (len(support) - 1):
        return False
    if n == 1:
        return _valid_single(support)
    if n != 2:
        raise ValueError("support-based validity is implemented for n <= 2 only")
    pairs = [(v & 3, v >> 2) for v in support]
    for a_pos in (0, 1):
        for meas in _SINGLE_MEASUREMENTS:
            for block in meas:
                cond = frozenset(p[1 - a_pos] for p in pairs if p[a_pos] in block)
                if cond and not _valid_single(cond):
                    return False
    return True


def balanced_supports(n: int) -> set[frozenset[int]]:
    _guard(n, ALL_LIMIT, "support enumeration")
    size = 4**n
    out = set()
    for mask in range(1, 1 << size):
        sup = frozenset(v for v in range(size) if (mask >> v) & 1)
        if knowledge_balanced(sup, n):
            out.add(sup)
    return out


def enumerate_all_states(n: int) -> CountReport:
    if n == 0:
        return CountReport(0, "all_states", 1, 1, "trivial")
    states = all_states(n)
    supports = {support_of(s).members for s in states}
    extra = {
        "distinct_supports_ok": len(supports) == len(states),
        "listed": len(states),
    }
    method = "rref-pivot enumeration x signs"
    if n <= 2:
        balanced = balanced_supports(n)
        extra["support_based"] = len(balanced)
        extra["support_sets_ok"] = balanced == supports
        method += "; knowledge-balance subset scan"
    return CountReport(n, "all_states", all_state_formula(n), len(set(states)), method, extra)


def stabilizer_partitions(n: int, outcomes: int) -> list[tuple[StabilizerState, ...]]:
    """Every cover of the ontic space by ``outcomes`` disjoint non-trivial states."""
    _guard(n, ALL_LIMIT, "partition enumeration")
    full = (1 << 4**n) - 1
    masks = []
    for s in all_states(n):
        m = sum(1 << v for v in support_of(s).members)
        if m != full:
            masks.append((m, s))
    out = []

    def extend(covered: int, start: int, chosen: list):
        if len(chosen) == outcomes:
            if covered == full:
                out.append(tuple(chosen))
            return
        # the lowest uncovered ontic state fixes which block comes next
        low = (~covered & full) & -(~covered & full)
        for i in range(start, len(masks)):
            m, s = masks[i]
            if m & low and not m & covered:
                chosen.append(s)
                extend(covered | m, 0, chosen)
                chosen.pop()

    extend(0, 0, [])
    return out


def canonical_generator_sets(n: int, algebra: Algebra = TOY) -> list[Transformation]:
    """Every valid transformation by backtracking over image slots."""
    _guard(n, TRANSFORM_LIMIT, "transformation enumeration")
    width = 2 * n
    vectors = [(x, z) for x in range(1 << n) for z in range(1 << n) if x or z]

    def partner(i: int) -> int:
        return (i + n) % width

    found = []

    def extend(chosen: list[tuple[int, int]]):
        i = len(chosen)
        if i == width:
            found.append(list(chosen))
            return
        for v in vectors:
            if all(gf2.sp(v, chosen[j]) == (1 if j == partner(i) else 0) for j in range(i)):
                chosen.append(v)
                extend(chosen)
                chosen.pop()

    extend([])
    out = []
    for rows in found:
        for signs in product((0, 2), repeat=width):
            images = tuple(make(algebra, CheckVector(n, x, z), ip) for (x, z), ip in zip(rows, signs))
            out.append(Transformation(algebra, n, images))
    return out


def enumerate_transformations(n: int) -> CountReport:
    ts = canonical_generator_sets(n)
    extra = {"valid_ok": all(validate_transformation(t.images) is None for t in ts)}
    method = "backtracking over canonical generator sets x signs"
    if n == 1:
        from .transform import ElementaryPermutation, from_permutation

        perms = list(permutations(range(4)))
        extra["ontic_valid"] = sum(is_valid_ontic_permutation(p, 1) for p in perms)
        extra["ontic_valid_ok"] = extra["ontic_valid"] == 24
        realised = {from_permutation(ElementaryPermutation(tuple(k + 1 for k in p))) for p in perms}
        extra["bijection_ok"] = realised == set(ts)
        method += "; all 24 ontic permutations"
    return CountReport(n, "transformations", transformation_formula(n), len(set(ts)), method, extra)


def count(kind: str, n: int, method: str = "both") -> CountReport:
    """Formula, enumeration or both for ``pure_states``/``all_states``/``transformations``."""
    formulas = {
        "pure_states": pure_state_formula,
        "all_states": all_state_formula,
        "transformations": transformation_formula,
    }
    enumerators = {
        "pure_states": enumerate_pure_states,
        "all_states": enumerate_all_states,
        "transformations": enumerate_transformations,
    }
    if kind not in formulas:
        raise ValueError(f"unknown count kind {kind!r}")
    if method == "formula":
        return CountReport(n, kind, formulas[kind](n), None, "formula")
    report = enumerators[kind](n)
    if method == "enumerate":
        report.formula_value = None
    return report


# -- circuits ----------------------------------------------------------------

CIRCUIT_LIMIT = 4


@dataclass
class OracleReport:
    n: int
    trials: int
    mismatches: list[str] = field(default_factory=list)
    frequencies: dict[int, tuple[int, int, bool]] = field(default_factory=dict)

    @property
    def first_divergence(self) -> str | None:
        return self.mismatches[0] if self.mismatches else None

    @property
    def ok(self) -> bool:
        return not self.mismatches and all(ok for _, _, ok in self.frequencies.values())

    def lines(self) -> list[str]:
        out = [f"oracle-check n={self.n} trials={self.trials} {'OK' if self.ok else 'MISMATCH'}"]
        for step, (count, plus, ok) in sorted(self.frequencies.items()):
            out.append(f"  statement {step + 1}: random in {count} trials, +1 in {plus} {'ok' if ok else 'OUT OF BOUNDS'}")
        out += [f"  {m}" for m in self.mismatches[:10]]
        return out


@lru_cache(maxsize=4096)
def _cached_posterior(support: frozenset[int], g: ToyObservable, value: int) -> frozenset[int]:
    return ontic_posterior(support, g, value)


def _set_expectation(support: frozenset[int], g: ToyObservable) -> int:
    vals = eigenvalues(g)[sorted(support)]
    plus = int((vals == 1).sum())
    if plus == len(vals):
        return 1
    if plus == 0:
        return -1
    return 0 if 2 * plus == len(vals) else 2


def oracle_check_circuit(program, trials: int = 1000, seed: int = 0, limit: int = CIRCUIT_LIMIT) -> OracleReport:
    """Run ``program`` symbolically and on sampled ontic states side by side.

    Each trial draws the initial ontic state uniformly from the declared
    support, replays every measurement with the ontic value and checks the
    symbolic posterior support against the set-level ontic update.
    Frequencies of random outcomes must sit within 5 sigma of one half.
    """
    from .circuit import Expect, Gate, Perm, StateDecl
    from .measurement import expectation, postselect
    from .stabilizer import new_state
    from .transform import apply, gate, ontic_permutation, perm_gate
    from .algebra import parse_observable

    if program.mode != TOY:
        raise ValueError("the ontic oracle runs toy programs only")
    n = program.n
    _guard(n, limit, "circuit oracle")
    rng = np.random.default_rng(seed)
    report = OracleReport(n, trials)
    counts: dict[int, list[int]] = {}
    transforms = {}
    for st in program.statements:
        if isinstance(st, Gate):
            transforms[st] = gate(st.name, *(k - 1 for k in st.systems), n=n)
        elif isinstance(st, Perm):
            transforms[st] = perm_gate(st.cycles, st.system - 1, n)
    perms = {key: ontic_permutation(t) for key, t in transforms.items()}

    for trial in range(trials):
        s = None
        sup: frozenset[int] = frozenset()
        v = -1
        for i, st in enumerate(program.statements):
            where = f"trial {trial}, statement {i + 1}"
            if isinstance(st, StateDecl):
                s = new_state([parse_observable(t, n, TOY) for t in st.observables], n=n, algebra=TOY)
                sup = support_of(s).members
                members = sorted(sup)
                v = members[int(rng.integers(len(members)))]
                continue
            if s is None:
                report.mismatches.append(f"{where}: no state declared")
                return report
            if isinstance(st, (Gate, Perm)):
                s = apply(transforms[st], s)
                perm = perms[st]
                sup = frozenset(perm[u] for u in sup)
                v = perm[v]
            else:
                g = parse_observable(st.observable, n, TOY)
                predicted = expectation(s, g)
                if isinstance(st, Expect):
                    actual = _set_expectation(sup, g)
                    if actual != predicted:
                        report.mismatches.append(f"{where}: expect {st.observable} symbolic {predicted}, ontic {actual}")
                    continue
                value = eigenvalue(g, v)
                if predicted and value != predicted:
                    report.mismatches.append(f"{where}: {st.observable} predicted {predicted}, ontic value {value}")
                if not predicted:
                    tally = counts.setdefault(i, [0, 0])
                    tally[0] += 1
                    tally[1] += value == 1
                s = postselect(s, g, value)
                sup = _cached_posterior(sup, g, value)
                _, v = ontic_measure(v, g, rng)
            if sup != support_of(s).members:
                report.mismatches.append(f"{where}: symbolic support {len(support_of(s))} states, ontic {len(sup)} states differ")
            if v not in sup:
                report.mismatches.append(f"{where}: sampled ontic state left the support")
    for i, (total, plus) in counts.items():
        sigma = (total / 4) ** 0.5
        report.frequencies[i] = (total, plus, abs(plus - total / 2) <= 5 * sigma)
    return report

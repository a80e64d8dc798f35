"""Packed tableau for fast toy simulation.

Rows are check vectors packed into uint64 words, ``2n`` of them, arranged in
pairs ``(j, n + j)``.  A pair is either a stabilizer generator with its
destabilizer, or a logical pair that anticommutes internally and commutes
with everything else.  Toy multiplication never produces letter phases, so
only stabilizer rows carry a meaningful sign.

Gates are applied column-wise through lookup tables built from the symbolic
transformation, so both engines agree by construction.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np

from . import gf2
from .algebra import TOY, CheckVector, DimensionMismatch, ToyObservable
from .measurement import MissingSeed
from .stabilizer import StabilizerState, trusted_state
from .transform import Transformation, apply_to_observable, local_gate

_ONE = np.uint64(1)


def _words(n: int) -> int:
    return max(1, (n + 63) // 64)


def _to_words(v: int, w: int) -> np.ndarray:
    mask = (1 << 64) - 1
    return np.array([(v >> (64 * i)) & mask for i in range(w)], dtype=np.uint64)


def _from_words(row: np.ndarray) -> int:
    out = 0
    for i, word in enumerate(row.tolist()):
        out |= int(word) << (64 * i)
    return out


@lru_cache(maxsize=None)
def _gate_table(key) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    t = key if isinstance(key, Transformation) else local_gate(key, TOY)
    m = t.n
    size = 4**m
    newx = np.zeros(size, dtype=np.uint64)
    newz = np.zeros(size, dtype=np.uint64)
    flip = np.zeros(size, dtype=bool)
    lo = (1 << m) - 1
    for p in range(size):
        img = apply_to_observable(t, ToyObservable(CheckVector(m, p & lo, p >> m)))
        newx[p] = img.cv.x
        newz[p] = img.cv.z
        flip[p] = img.sign == -1
    return newx, newz, flip


class ToyTableau:
    """Mutable toy state for long circuits; convert with :meth:`to_state`."""

    def __init__(self, n: int):
        self.n = n
        self.w = _words(n)
        self.xs = np.zeros((2 * n, self.w), dtype=np.uint64)
        self.zs = np.zeros((2 * n, self.w), dtype=np.uint64)
        self.signs = np.ones(2 * n, dtype=np.int8)
        self.is_stab = np.zeros(n, dtype=bool)

    # -- construction -------------------------------------------------------

    @classmethod
    def trivial(cls, n: int) -> ToyTableau:
        tab = cls(n)
        for k in range(n):
            tab._set_row(k, 1 << k, 0)
            tab._set_row(n + k, 0, 1 << k)
        return tab

    @classmethod
    def from_state(cls, s: StabilizerState) -> ToyTableau:
        if s.algebra != TOY:
            raise ValueError("the tableau kernel handles toy states only")
        n = s.n
        tab = cls(n)
        stabs = [(g.cv.x, g.cv.z) for g in s.gens]
        signs = [g.sign for g in s.gens]

        def track(j, i):
            signs[j] *= signs[i]

        destabs, logicals = gf2.symplectic_completion(stabs, n, track)
        for j, ((sx, sz), (dx, dz)) in enumerate(zip(stabs, destabs)):
            tab._set_row(j, sx, sz, signs[j])
            tab._set_row(n + j, dx, dz)
            tab.is_stab[j] = True
        for i, ((ux, uz), (vx, vz)) in enumerate(logicals):
            j = len(stabs) + i
            tab._set_row(j, ux, uz)
            tab._set_row(n + j, vx, vz)
        return tab

    def _set_row(self, r: int, x: int, z: int, sign: int = 1) -> None:
        self.xs[r] = _to_words(x, self.w)
        self.zs[r] = _to_words(z, self.w)
        self.signs[r] = sign

    def copy(self) -> ToyTableau:
        out = ToyTableau.__new__(ToyTableau)
        out.n, out.w = self.n, self.w
        out.xs, out.zs = self.xs.copy(), self.zs.copy()
        out.signs, out.is_stab = self.signs.copy(), self.is_stab.copy()
        return out

    # -- read out -----------------------------------------------------------

    def generators(self) -> list[ToyObservable]:
        out = []
        for j in np.flatnonzero(self.is_stab):
            cv = CheckVector(self.n, _from_words(self.xs[j]), _from_words(self.zs[j]))
            out.append(ToyObservable(cv, int(self.signs[j])))
        return out

    def to_state(self) -> StabilizerState:
        return trusted_state(self.generators(), self.n, TOY)

    @property
    def num_generators(self) -> int:
        return int(self.is_stab.sum())

    # -- gates --------------------------------------------------------------

    def _column(self, part: np.ndarray, k: int) -> np.ndarray:
        return (part[:, k >> 6] >> np.uint64(k & 63)) & _ONE

    def _write_column(self, part: np.ndarray, k: int, bits: np.ndarray) -> None:
        shift = np.uint64(k & 63)
        word = part[:, k >> 6]
        part[:, k >> 6] = (word & ~(_ONE << shift)) | (bits << shift)

    def apply_gate(self, name_or_local, *systems: int) -> None:
        """Apply a named gate (or a local toy Transformation) to 0-based systems."""
        newx, newz, flip = _gate_table(name_or_local)
        m = len(systems)
        if len(newx) != 4**m:
            raise ValueError(f"gate acts on {int(np.log(len(newx)) / np.log(4))} systems, got {m}")
        for k in systems:
            if not 0 <= k < self.n:
                raise IndexError(f"system {k} out of range for n={self.n}")
        pattern = np.zeros(2 * self.n, dtype=np.uint64)
        for j, k in enumerate(systems):
            pattern |= self._column(self.xs, k) << np.uint64(j)
            pattern |= self._column(self.zs, k) << np.uint64(m + j)
        px = newx[pattern]
        pz = newz[pattern]
        for j, k in enumerate(systems):
            self._write_column(self.xs, k, (px >> np.uint64(j)) & _ONE)
            self._write_column(self.zs, k, (pz >> np.uint64(j)) & _ONE)
        self.signs[flip[pattern]] *= -1

    # -- measurement --------------------------------------------------------

    def _obs_words(self, g: ToyObservable) -> tuple[np.ndarray, np.ndarray]:
        if g.cv.n != self.n:
            raise DimensionMismatch(f"observable on {g.cv.n} systems vs tableau on {self.n}")
        return _to_words(g.cv.x, self.w), _to_words(g.cv.z, self.w)

    def _anticommuting(self, gx: np.ndarray, gz: np.ndarray) -> np.ndarray:
        c = np.bitwise_count(self.xs & gz).sum(axis=1) + np.bitwise_count(self.zs & gx).sum(axis=1)
        return (c & 1).astype(bool)

    def _classify(self, g: ToyObservable):
        gx, gz = self._obs_words(g)
        anti = self._anticommuting(gx, gz)
        n = self.n
        stab_rows = np.flatnonzero(anti[:n] & self.is_stab)
        if len(stab_rows):
            return "stab", int(stab_rows[0]), anti, gx, gz
        logical = np.concatenate([self.is_stab, self.is_stab])
        free = np.flatnonzero(anti & ~logical)
        if len(free):
            return "logical", int(free[0]), anti, gx, gz
        return "determined", -1, anti, gx, gz

    def _determined_value(self, g: ToyObservable, anti: np.ndarray) -> int:
        # g is +-(product of S_j over destabilizers D_j anticommuting with g)
        n = self.n
        used = anti[n:] & self.is_stab
        product = int(np.prod(self.signs[:n][used], dtype=np.int64)) if used.any() else 1
        return g.sign * product

    def expectation(self, g: ToyObservable) -> int:
        if g.is_trivial:
            return g.sign
        kind, _, anti, _, _ = self._classify(g)
        return self._determined_value(g, anti) if kind == "determined" else 0

    def _mul_rows(self, targets: np.ndarray, src: int) -> None:
        if not len(targets):
            return
        self.xs[targets] ^= self.xs[src]
        self.zs[targets] ^= self.zs[src]
        self.signs[targets] *= self.signs[src]

    def _collapse(self, kind: str, p: int, anti: np.ndarray, gx, gz, sign: int) -> None:
        n = self.n
        if kind == "stab":
            partner = n + p
            rows = np.flatnonzero(anti)
            rows = rows[(rows != p) & (rows != partner)]
            self._mul_rows(rows, p)
            self.xs[partner], self.zs[partner] = self.xs[p], self.zs[p]
            self.signs[partner] = 1
            self.xs[p], self.zs[p], self.signs[p] = gx, gz, sign
            return
        j = p % n
        other = n + j if p == j else j
        rows = np.flatnonzero(anti)
        rows = rows[(rows != p) & (rows != other)]
        self._mul_rows(rows, p)
        self.xs[n + j], self.zs[n + j] = self.xs[p].copy(), self.zs[p].copy()
        self.signs[n + j] = 1
        self.xs[j], self.zs[j], self.signs[j] = gx, gz, sign
        self.is_stab[j] = True

    def measure(self, g: ToyObservable, rng=None) -> tuple[int, bool]:
        """Return ``(value, deterministic)``; consumes one draw when random."""
        if g.is_trivial:
            return g.sign, True
        kind, p, anti, gx, gz = self._classify(g)
        if kind == "determined":
            return self._determined_value(g, anti), True
        if rng is None:
            raise MissingSeed("outcome is random; pass a seeded rng")
        value = 1 if int(rng.integers(2)) == 0 else -1
        self._collapse(kind, p, anti, gx, gz, value * g.sign)
        return value, False

    def postselect(self, g: ToyObservable, value: int) -> None:
        if g.is_trivial:
            if g.sign != value:
                raise ValueError(f"{g} has value {g.sign} with certainty")
            return
        kind, p, anti, gx, gz = self._classify(g)
        if kind == "determined":
            if self._determined_value(g, anti) != value:
                raise ValueError(f"{g} is determined to the other value")
            return
        self._collapse(kind, p, anti, gx, gz, value * g.sign)

    def check_invariants(self) -> None:
        """Assert the symplectic pairing; O(n^2), for tests."""
        n = self.n
        rows = [(_from_words(self.xs[r]), _from_words(self.zs[r])) for r in range(2 * n)]
        for a in range(2 * n):
            for b in range(a + 1, 2 * n):
                want = 1 if b == a + n else 0
                if gf2.sp(rows[a], rows[b]) != want:
                    raise AssertionError(f"rows {a} and {b} break the symplectic pairing")

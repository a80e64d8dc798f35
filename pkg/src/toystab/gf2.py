"""GF(2) linear algebra on int bitsets.

Vectors in the symplectic space are ``(x, z)`` pairs of n-bit ints.  For plain
row reduction they are packed into a single int ``x | z << n``.
"""

from __future__ import annotations

from typing import Callable, Sequence


def pack(x: int, z: int, n: int) -> int:
    return x | (z << n)


def unpack(c: int, n: int) -> tuple[int, int]:
    return c & ((1 << n) - 1), c >> n


def sp(a: tuple[int, int], b: tuple[int, int]) -> int:
    return ((a[0] & b[1]) ^ (a[1] & b[0])).bit_count() & 1


class XorBasis:
    """Incremental row-echelon basis keyed by highest set bit."""

    def __init__(self):
        self._rows: dict[int, int] = {}

    def __len__(self) -> int:
        return len(self._rows)

    def reduce(self, v: int) -> int:
        rows = self._rows
        while v:
            top = v.bit_length() - 1
            r = rows.get(top)
            if r is None:
                break
            v ^= r
        return v

    def residual(self, v: int) -> int:
        """Fully reduce, also clearing lower pivot bits."""
        rows = self._rows
        out = 0
        while v:
            top = v.bit_length() - 1
            r = rows.get(top)
            bit = 1 << top
            if r is None:
                out |= bit
                v ^= bit
            else:
                v ^= r
        return out

    def add(self, v: int) -> bool:
        """Insert ``v``; return False if it was already in the span."""
        v = self.reduce(v)
        if not v:
            return False
        self._rows[v.bit_length() - 1] = v
        return True

    def __contains__(self, v: int) -> bool:
        return self.reduce(v) == 0


def rank(vectors: Sequence[int]) -> int:
    basis = XorBasis()
    for v in vectors:
        basis.add(v)
    return len(basis)


def first_dependent(vectors: Sequence[int]) -> int | None:
    """Index of the first vector lying in the span of its predecessors."""
    basis = XorBasis()
    for i, v in enumerate(vectors):
        if not basis.add(v):
            return i
    return None


def symplectic_completion(
    stabs: list[tuple[int, int]],
    n: int,
    on_stab_mul: Callable[[int, int], None] | None = None,
) -> tuple[list[tuple[int, int]], list[tuple[tuple[int, int], tuple[int, int]]]]:
    """Extend commuting independent vectors to a symplectic basis.

    ``stabs`` is modified in place: a later stabilizer row ``j`` may be
    replaced by its product with an earlier row ``i``; ``on_stab_mul(j, i)``
    is called before each such update so callers can track phases.  The first
    row is never modified.

    Returns ``(destabs, logicals)``: ``destabs[i]`` anticommutes with
    ``stabs[i]`` only, and each logical pair anticommutes internally and
    commutes with everything else.
    """
    pool: list[tuple[int, int]] = [(1 << k, 0) for k in range(n)] + [(0, 1 << k) for k in range(n)]
    destabs: list[tuple[int, int]] = []
    for i in range(len(stabs)):
        s = stabs[i]
        w_at = next((t for t, u in enumerate(pool) if sp(u, s)), None)
        if w_at is None:
            raise ValueError("generators are not independent and commuting")
        w = pool.pop(w_at)
        destabs.append(w)
        for j in range(i + 1, len(stabs)):
            if sp(stabs[j], w):
                if on_stab_mul is not None:
                    on_stab_mul(j, i)
                sj = stabs[j]
                stabs[j] = (sj[0] ^ s[0], sj[1] ^ s[1])
        pool = _project(pool, s, w)
    logicals = []
    while pool:
        u = pool.pop(0)
        v_at = next((t for t, v in enumerate(pool) if sp(u, v)), None)
        if v_at is None:
            raise AssertionError("symplectic completion lost a partner")
        v = pool.pop(v_at)
        logicals.append((u, v))
        pool = _project(pool, u, v)
    return destabs, logicals


def _project(pool, a, b):
    """Make every pool vector commute with the pair ``(a, b)``; drop zeros."""
    out = []
    for u in pool:
        x, z = u
        if sp(u, b):
            x ^= a[0]
            z ^= a[1]
        if sp(u, a):
            x ^= b[0]
            z ^= b[1]
        if x or z:
            out.append((x, z))
    return out

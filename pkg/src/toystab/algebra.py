"""Check vectors and the two observable algebras.

A check vector stores the X-part and Z-part of an n-system letter pattern as
two Python ints: bit ``k`` of ``x`` (``z``) is set when system ``k`` carries an
X (Z) component, a Y being both.  Toy observables carry a sign, Pauli
observables carry a power of ``i``.  The two algebras share check-vector
arithmetic and differ only in the phase produced by a product.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Literal, Union

Algebra = Literal["toy", "qubit"]

TOY: Algebra = "toy"
QUBIT: Algebra = "qubit"

_LETTERS = "IXZY"  # index = x | (z << 1)
_LETTER_BITS = {"I": (0, 0), "X": (1, 0), "Z": (0, 1), "Y": (1, 1)}


class DimensionMismatch(ValueError):
    """Raised when operands act on different numbers of systems or algebras."""


class ObservableSyntaxError(ValueError):
    """Raised for observable literals that do not match ``SIGN? LETTER{n}``."""


@dataclass(frozen=True, slots=True)
class CheckVector:
    n: int
    x: int = 0
    z: int = 0

    def __post_init__(self):
        limit = 1 << self.n
        if self.n < 0 or not (0 <= self.x < limit and 0 <= self.z < limit):
            raise ValueError(f"check vector bits do not fit in n={self.n}")

    @classmethod
    def zero(cls, n: int) -> CheckVector:
        return cls(n, 0, 0)

    @classmethod
    def from_bits(cls, bits) -> CheckVector:
        """Build from the flat layout ``(x_1..x_n, z_1..z_n)``."""
        bits = [int(b) for b in bits]
        if len(bits) % 2:
            raise ValueError("check vector needs an even number of bits")
        n = len(bits) // 2
        x = sum(b << k for k, b in enumerate(bits[:n]))
        z = sum(b << k for k, b in enumerate(bits[n:]))
        return cls(n, x, z)

    @property
    def bits(self) -> tuple[int, ...]:
        n = self.n
        return tuple((self.x >> k) & 1 for k in range(n)) + tuple((self.z >> k) & 1 for k in range(n))

    @property
    def is_zero(self) -> bool:
        return self.x == 0 and self.z == 0

    @property
    def weight(self) -> int:
        return (self.x | self.z).bit_count()

    def support(self) -> tuple[int, ...]:
        """Systems (0-based) carrying a non-identity letter."""
        mask = self.x | self.z
        return tuple(k for k in range(self.n) if (mask >> k) & 1)

    def letter(self, k: int) -> str:
        return _LETTERS[((self.x >> k) & 1) | (((self.z >> k) & 1) << 1)]

    def letters(self) -> str:
        return "".join(self.letter(k) for k in range(self.n))

    def lex_key(self) -> int:
        """Integer whose order is the lexicographic order of :attr:`bits`."""
        n = self.n
        return (_reverse(self.x, n) << n) | _reverse(self.z, n)

    def __xor__(self, other: CheckVector) -> CheckVector:
        return cv_add(self, other)


def _reverse(v: int, width: int) -> int:
    if width == 0:
        return 0
    return int(format(v, f"0{width}b")[::-1], 2)


def _check_n(a: CheckVector, b: CheckVector) -> None:
    if a.n != b.n:
        raise DimensionMismatch(f"check vectors on {a.n} and {b.n} systems")


def symplectic_product(a: CheckVector, b: CheckVector) -> int:
    """0 if the observables commute, 1 if they anticommute."""
    _check_n(a, b)
    return ((a.x & b.z) ^ (a.z & b.x)).bit_count() & 1


def cv_add(a: CheckVector, b: CheckVector) -> CheckVector:
    _check_n(a, b)
    return CheckVector(a.n, a.x ^ b.x, a.z ^ b.z)


def letter_phase(ax: int, az: int, bx: int, bz: int) -> int:
    """Power of ``i`` picked up by the letter-wise Pauli product ``a * b``.

    Operands are bitmasks over systems.  Per system the table is
    XY=iZ, YZ=iX, ZX=iY (+1) and the reversed orders (-1 = +3).
    """
    a_x, a_y, a_z = ax & ~az, ax & az, az & ~ax
    b_x, b_y, b_z = bx & ~bz, bx & bz, bz & ~bx
    plus = (a_x & b_y) | (a_y & b_z) | (a_z & b_x)
    minus = (a_x & b_z) | (a_y & b_x) | (a_z & b_y)
    return (plus.bit_count() - minus.bit_count()) & 3


class _Observable:
    __slots__ = ()

    algebra: Algebra
    cv: CheckVector

    @property
    def n(self) -> int:
        return self.cv.n

    @property
    def is_trivial(self) -> bool:
        """True for plus or minus the identity."""
        return self.cv.is_zero

    def __mul__(self, other):
        return multiply(self, other)

    def __str__(self) -> str:
        return format_observable(self)


@dataclass(frozen=True, slots=True)
class ToyObservable(_Observable):
    """A signed tensor product of the toy letters I, X, Y, Z."""

    cv: CheckVector
    sign: int = 1

    algebra = TOY

    def __post_init__(self):
        if self.sign not in (1, -1):
            raise ValueError(f"toy sign must be +1 or -1, got {self.sign!r}")

    @property
    def ipow(self) -> int:
        return 0 if self.sign == 1 else 2

    @property
    def is_hermitian(self) -> bool:
        return True

    @classmethod
    def identity(cls, n: int) -> ToyObservable:
        return cls(CheckVector.zero(n))

    @classmethod
    def single(cls, letter: str, k: int, n: int, sign: int = 1) -> ToyObservable:
        bx, bz = _LETTER_BITS[letter]
        return cls(CheckVector(n, bx << k, bz << k), sign)

    def __neg__(self) -> ToyObservable:
        return ToyObservable(self.cv, -self.sign)

    def with_ipow(self, ipow: int) -> ToyObservable:
        if ipow & 1:
            raise ValueError("toy observables have no imaginary phases")
        return ToyObservable(self.cv, 1 if ipow & 3 == 0 else -1)


@dataclass(frozen=True, slots=True)
class PauliObservable(_Observable):
    """``i**phase_ipow`` times a tensor product of I, X, Y, Z."""

    cv: CheckVector
    phase_ipow: int = 0

    algebra = QUBIT

    def __post_init__(self):
        if not 0 <= self.phase_ipow < 4:
            object.__setattr__(self, "phase_ipow", self.phase_ipow & 3)

    @property
    def ipow(self) -> int:
        return self.phase_ipow

    @property
    def sign(self) -> int:
        if self.phase_ipow & 1:
            raise ValueError(f"{self} is not Hermitian")
        return 1 if self.phase_ipow == 0 else -1

    @property
    def is_hermitian(self) -> bool:
        return self.phase_ipow in (0, 2)

    @classmethod
    def identity(cls, n: int) -> PauliObservable:
        return cls(CheckVector.zero(n))

    @classmethod
    def single(cls, letter: str, k: int, n: int, sign: int = 1) -> PauliObservable:
        bx, bz = _LETTER_BITS[letter]
        return cls(CheckVector(n, bx << k, bz << k), 0 if sign == 1 else 2)

    def __neg__(self) -> PauliObservable:
        return PauliObservable(self.cv, self.phase_ipow ^ 2)

    def with_ipow(self, ipow: int) -> PauliObservable:
        return PauliObservable(self.cv, ipow & 3)


Observable = Union[ToyObservable, PauliObservable]

OBSERVABLE_TYPES = {TOY: ToyObservable, QUBIT: PauliObservable}


def _check_pair(g: Observable, h: Observable) -> None:
    if g.algebra != h.algebra:
        raise DimensionMismatch(f"cannot combine {g.algebra} and {h.algebra} observables")
    _check_n(g.cv, h.cv)


def toy_mul(g: ToyObservable, h: ToyObservable) -> ToyObservable:
    _check_pair(g, h)
    return ToyObservable(CheckVector(g.cv.n, g.cv.x ^ h.cv.x, g.cv.z ^ h.cv.z), g.sign * h.sign)


def pauli_mul(g: PauliObservable, h: PauliObservable) -> PauliObservable:
    _check_pair(g, h)
    a, b = g.cv, h.cv
    ipow = g.phase_ipow + h.phase_ipow + letter_phase(a.x, a.z, b.x, b.z)
    return PauliObservable(CheckVector(a.n, a.x ^ b.x, a.z ^ b.z), ipow & 3)


def multiply(g: Observable, h: Observable) -> Observable:
    if g.algebra == TOY and h.algebra == TOY:
        return toy_mul(g, h)
    return pauli_mul(g, h)


def commutes(g: Observable, h: Observable) -> bool:
    return symplectic_product(g.cv, h.cv) == 0


def identity(n: int, algebra: Algebra = TOY) -> Observable:
    return OBSERVABLE_TYPES[algebra].identity(n)


def m_map(g: ToyObservable) -> PauliObservable:
    """Send a toy observable to the Pauli observable written the same way."""
    return PauliObservable(g.cv, 0 if g.sign == 1 else 2)


def relative_sign(g: Observable, h: Observable) -> int:
    """+1 or -1 when ``g = +-h``; 0 when the phases differ by ``+-i``.

    Raises if the letter patterns differ.
    """
    _check_pair(g, h)
    if g.cv != h.cv:
        raise ValueError(f"{g} and {h} have different letter patterns")
    d = (g.ipow - h.ipow) & 3
    return {0: 1, 2: -1}.get(d, 0)


# -- ontic states ------------------------------------------------------------


@lru_cache(maxsize=1 << 16)
def ontic_bits(v: int, n: int) -> tuple[int, int]:
    """Split an ontic index into ``(ox, oz)`` bitmasks.

    Digit ``d_k`` of the base-4 little-endian expansion is ``ox_k + 2*oz_k``,
    so labels 1, 2, 3, 4 map to (0,0), (1,0), (0,1), (1,1).
    """
    if not 0 <= v < 4**n:
        raise IndexError(f"ontic index {v} out of range for n={n}")
    ox = oz = 0
    for k in range(n):
        d = v & 3
        ox |= (d & 1) << k
        oz |= (d >> 1) << k
        v >>= 2
    return ox, oz


def ontic_index(ox: int, oz: int, n: int) -> int:
    v = 0
    for k in reversed(range(n)):
        v = (v << 2) | ((ox >> k) & 1) | (((oz >> k) & 1) << 1)
    return v


def ontic_labels(v: int, n: int) -> tuple[int, ...]:
    """Per-system labels in 1..4, e.g. ``(2, 4)`` for the state 2·4."""
    ox, oz = ontic_bits(v, n)
    return tuple(1 + ((ox >> k) & 1) + 2 * ((oz >> k) & 1) for k in range(n))


def ontic_from_labels(labels) -> int:
    labels = tuple(labels)
    ox = oz = 0
    for k, lab in enumerate(labels):
        if lab not in (1, 2, 3, 4):
            raise ValueError(f"ontic label must be 1..4, got {lab!r}")
        d = lab - 1
        ox |= (d & 1) << k
        oz |= (d >> 1) << k
    return ontic_index(ox, oz, len(labels))


def format_ontic(v: int, n: int) -> str:
    return "·".join(str(lab) for lab in ontic_labels(v, n))


def eigenvalue(g: ToyObservable, v: int) -> int:
    """Value (+1/-1) that toy observable ``g`` takes on ontic state ``v``."""
    if g.algebra != TOY:
        raise DimensionMismatch("eigenvalues are defined for toy observables only")
    ox, oz = ontic_bits(v, g.cv.n)
    parity = ((g.cv.x & ox).bit_count() + (g.cv.z & oz).bit_count()) & 1
    return -g.sign if parity else g.sign


# -- text form ---------------------------------------------------------------


def parse_observable(text: str, n: int | None = None, algebra: Algebra = TOY) -> Observable:
    """Parse ``SIGN? LETTER{n}``; e.g. ``"-ZI"`` is minus Z on system 1."""
    if algebra not in OBSERVABLE_TYPES:
        raise ValueError(f"unknown algebra {algebra!r}")
    body = text.strip()
    sign = 1
    if body[:1] in ("+", "-"):
        sign = -1 if body[0] == "-" else 1
        body = body[1:]
        if body[:1] in ("+", "-"):
            raise ObservableSyntaxError(f"duplicate sign in {text!r}")
    if not body:
        raise ObservableSyntaxError(f"missing letters in {text!r}")
    bad = [c for c in body if c not in _LETTER_BITS]
    if bad:
        raise ObservableSyntaxError(f"unknown letter {bad[0]!r} in {text!r}")
    if n is not None and len(body) != n:
        raise ObservableSyntaxError(f"{text!r} has {len(body)} letters, expected {n}")
    x = z = 0
    for k, c in enumerate(body):
        bx, bz = _LETTER_BITS[c]
        x |= bx << k
        z |= bz << k
    cv = CheckVector(len(body), x, z)
    if algebra == TOY:
        return ToyObservable(cv, sign)
    return PauliObservable(cv, 0 if sign == 1 else 2)


def format_observable(g: Observable) -> str:
    prefix = {0: "+", 1: "+i", 2: "-", 3: "-i"}[g.ipow]
    return prefix + g.cv.letters()


def toy(text: str, n: int | None = None) -> ToyObservable:
    return parse_observable(text, n, TOY)


def pauli(text: str, n: int | None = None) -> PauliObservable:
    return parse_observable(text, n, QUBIT)


def make(algebra: Algebra, cv: CheckVector, ipow: int = 0) -> Observable:
    """Observable of either algebra from a check vector and phase power."""
    return OBSERVABLE_TYPES[algebra](cv).with_ipow(ipow)

"""Exact arithmetic in rings of integers of quadratic fields.

Elements are stored as integer pairs ``(a, b)`` meaning ``a + b*w`` where
``w`` is ``sqrt(d)`` when ``d = 2, 3 (mod 4)`` and ``(1 + sqrt(d))/2`` when
``d = 1 (mod 4)``.  Coordinates are Python ints, so nothing overflows.
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import gcd, isqrt
from typing import Iterator, Optional

__all__ = [
    "NORM_EUCLIDEAN_D",
    "NEGATIVE_D",
    "OmegaKind",
    "RingSpec",
    "QuadInt",
    "QuadRat",
    "RingError",
    "make_ring",
    "div4",
    "euclid_divmod",
    "int_rem_divmod",
    "associates",
    "canonical_associate",
    "exact_div",
    "ring_gcd",
    "elements_up_to_norm",
]

NORM_EUCLIDEAN_D = (-11, -7, -3, -2, -1, 2, 3, 5, 6, 7, 11, 13, 17, 19, 21, 29, 33, 37, 41, 57, 73)
NEGATIVE_D = (-1, -2, -3, -7, -11)

# Exceptional-set norm bounds; d = -11 additionally drops +-2 from the set.
_EXCEPTIONAL_NORM = {-1: 2, -2: 3, -3: 1, -7: 2, -11: 5}


class RingError(ValueError):
    """Invalid ring parameters or an operation the ring does not support."""


class OmegaKind(enum.Enum):
    SQRT = "sqrt"
    HALF_PLUS_SQRT = "half_plus_sqrt"


def _squarefree(d: int) -> bool:
    m = abs(d)
    k = 2
    while k * k <= m:
        if m % (k * k) == 0:
            return False
        k += 1
    return True


class QuadInt:
    """An element ``a + b*w`` of a quadratic integer ring."""

    __slots__ = ("a", "b", "ring")

    def __init__(self, a: int, b: int, ring: "RingSpec"):
        self.a = a
        self.b = b
        self.ring = ring

    # -- construction helpers -------------------------------------------------
    def _new(self, a: int, b: int) -> "QuadInt":
        return QuadInt(a, b, self.ring)

    def _coerce(self, other) -> "QuadInt":
        if isinstance(other, QuadInt):
            if other.ring.d != self.ring.d:
                raise RingError(f"mixed rings: d={self.ring.d} and d={other.ring.d}")
            return other
        if isinstance(other, int):
            return QuadInt(other, 0, self.ring)
        return NotImplemented

    # -- ring operations ------------------------------------------------------
    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return QuadInt(self.a + o.a, self.b + o.b, self.ring)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return QuadInt(self.a - o.a, self.b - o.b, self.ring)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return QuadInt(o.a - self.a, o.b - self.b, self.ring)

    def __neg__(self):
        return QuadInt(-self.a, -self.b, self.ring)

    def __pos__(self):
        return self

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        p, q = self.ring.omega_sq_coeffs
        a, b, c, e = self.a, self.b, o.a, o.b
        be = b * e
        return QuadInt(a * c + p * be, a * e + b * c + q * be, self.ring)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise RingError("negative powers are not ring elements")
        result = self.ring.one
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def conj(self) -> "QuadInt":
        """Galois conjugate; maps sqrt(d) to -sqrt(d)."""
        q = self.ring.omega_sq_coeffs[1]
        return QuadInt(self.a + q * self.b, -self.b, self.ring)

    def norm(self) -> int:
        p, q = self.ring.omega_sq_coeffs
        a, b = self.a, self.b
        return a * a + q * a * b - p * b * b

    def trace(self) -> int:
        return 2 * self.a + self.ring.omega_sq_coeffs[1] * self.b

    def is_zero(self) -> bool:
        return self.a == 0 and self.b == 0

    def is_unit(self) -> bool:
        return abs(self.norm()) == 1

    def divides(self, other: "QuadInt") -> bool:
        if self.is_zero():
            return other.is_zero()
        return _try_div(other, self) is not None

    # -- comparison / hashing -------------------------------------------------
    def __eq__(self, other):
        if isinstance(other, QuadInt):
            return self.a == other.a and self.b == other.b and self.ring.d == other.ring.d
        if isinstance(other, int):
            return self.b == 0 and self.a == other
        return NotImplemented

    def __hash__(self):
        return hash((self.a, self.b, self.ring.d))

    def key(self) -> tuple[int, int]:
        return (self.a, self.b)

    def __repr__(self):
        return f"QuadInt({self.a}, {self.b}, d={self.ring.d})"

    def __str__(self):
        return format_element(self)


def _try_div(x: QuadInt, y: QuadInt) -> Optional[QuadInt]:
    n = y.norm()
    if n == 0:
        raise ZeroDivisionError("division by zero element")
    t = x * y.conj()
    if t.a % n or t.b % n:
        return None
    return QuadInt(t.a // n, t.b // n, x.ring)


def exact_div(x: QuadInt, y: QuadInt) -> QuadInt:
    """Return ``x / y``; raises ``ArithmeticError`` when ``y`` does not divide ``x``."""
    res = _try_div(x, y)
    if res is None:
        raise ArithmeticError(f"{y} does not divide {x} in d={x.ring.d}")
    return res


class QuadRat:
    """An element ``num / den`` of the fraction field, kept as rational coordinates.

    ``x / y`` is rationalised as ``x * conj(y) / N(y)``, so equality is plain
    coordinate equality.
    """

    __slots__ = ("ring", "a", "b")

    def __init__(self, num, den=1):
        if isinstance(num, QuadInt):
            ring = num.ring
        elif isinstance(den, QuadInt):
            ring = den.ring
        else:
            raise TypeError("QuadRat needs at least one QuadInt")
        num = num if isinstance(num, QuadInt) else QuadInt(int(num), 0, ring)
        den = den if isinstance(den, QuadInt) else QuadInt(int(den), 0, ring)
        if num.ring.d != den.ring.d:
            raise RingError("mixed rings")
        n = den.norm()
        if n == 0:
            raise ZeroDivisionError("zero denominator")
        t = num * den.conj()
        self.ring = ring
        self.a = Fraction(t.a, n)
        self.b = Fraction(t.b, n)

    @classmethod
    def _make(cls, ring, a: Fraction, b: Fraction) -> "QuadRat":
        out = object.__new__(cls)
        out.ring, out.a, out.b = ring, a, b
        return out

    def _lift(self, other) -> "QuadRat":
        if isinstance(other, QuadRat):
            if other.ring.d != self.ring.d:
                raise RingError("mixed rings")
            return other
        if isinstance(other, QuadInt):
            return QuadRat(other)
        return QuadRat._make(self.ring, Fraction(other), Fraction(0))

    def __add__(self, other):
        o = self._lift(other)
        return QuadRat._make(self.ring, self.a + o.a, self.b + o.b)

    __radd__ = __add__

    def __neg__(self):
        return QuadRat._make(self.ring, -self.a, -self.b)

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __mul__(self, other):
        o = self._lift(other)
        p, q = self.ring.omega_sq_coeffs
        bb = self.b * o.b
        return QuadRat._make(self.ring, self.a * o.a + p * bb, self.a * o.b + self.b * o.a + q * bb)

    __rmul__ = __mul__

    def conj(self) -> "QuadRat":
        q = self.ring.omega_sq_coeffs[1]
        return QuadRat._make(self.ring, self.a + q * self.b, -self.b)

    def norm(self) -> Fraction:
        p, q = self.ring.omega_sq_coeffs
        return self.a * self.a + q * self.a * self.b - p * self.b * self.b

    def inverse(self) -> "QuadRat":
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("inverse of zero")
        c = self.conj()
        return QuadRat._make(self.ring, c.a / n, c.b / n)

    def __truediv__(self, other):
        return self * self._lift(other).inverse()

    def __eq__(self, other):
        if isinstance(other, (QuadRat, QuadInt, int)):
            o = self._lift(other)
            return self.ring.d == o.ring.d and self.a == o.a and self.b == o.b
        return NotImplemented

    def __hash__(self):
        return hash((self.ring.d, self.a, self.b))

    def __repr__(self):
        return f"QuadRat({self.a} + {self.b}*w, d={self.ring.d})"


@dataclass(frozen=True, eq=False)
class RingSpec:
    """The ring of integers of Q(sqrt(d)) in the basis {1, w}."""

    d: int
    omega_kind: OmegaKind
    omega_sq_coeffs: tuple[int, int]
    norm_coeffs: tuple[int, int, int]
    units: tuple[QuadInt, ...] = field(default=(), repr=False)
    two_divisors: tuple[QuadInt, ...] = field(default=(), repr=False)
    two_is_prime: bool = False
    exceptional_set: tuple[QuadInt, ...] = field(default=(), repr=False)

    def __hash__(self):
        return hash(self.d)

    def __eq__(self, other):
        return isinstance(other, RingSpec) and other.d == self.d

    def __call__(self, a: int, b: int = 0) -> QuadInt:
        return QuadInt(a, b, self)

    @property
    def one(self) -> QuadInt:
        return QuadInt(1, 0, self)

    @property
    def zero(self) -> QuadInt:
        return QuadInt(0, 0, self)

    @property
    def w(self) -> QuadInt:
        return QuadInt(0, 1, self)

    @property
    def is_imaginary(self) -> bool:
        return self.d < 0

    @property
    def is_norm_euclidean(self) -> bool:
        return self.d in NORM_EUCLIDEAN_D

    def is_exceptional(self, x: QuadInt) -> bool:
        if self.d not in _EXCEPTIONAL_NORM:
            return False
        n = x.norm()
        if n > _EXCEPTIONAL_NORM[self.d]:
            return False
        if self.d == -11 and x.b == 0 and abs(x.a) == 2:
            return False
        return True

    def parse(self, text: str) -> QuadInt:
        return parse_element(text, self)


@lru_cache(maxsize=None)
def make_ring(d: int) -> RingSpec:
    """Build the ring of integers for squarefree ``d``."""
    if not isinstance(d, int) or isinstance(d, bool):
        raise RingError(f"d must be an integer, got {d!r}")
    if d in (0, 1):
        raise RingError(f"d={d} is degenerate")
    if not _squarefree(d):
        raise RingError(f"d={d} is not squarefree")

    if d % 4 == 1:
        kind = OmegaKind.HALF_PLUS_SQRT
        p, q = (d - 1) // 4, 1
    else:
        kind = OmegaKind.SQRT
        p, q = d, 0
    ring = RingSpec(d, kind, (p, q), (1, q, -p))

    def el(a, b):
        return QuadInt(a, b, ring)

    units: tuple[QuadInt, ...] = ()
    two_divisors: tuple[QuadInt, ...] = ()
    two_is_prime = False
    if d < 0:
        if d == -1:
            units = (el(1, 0), el(-1, 0), el(0, 1), el(0, -1))
        elif d == -3:
            units = (el(1, 0), el(-1, 0), el(0, 1), el(0, -1), el(-1, 1), el(1, -1))
        else:
            units = (el(1, 0), el(-1, 0))
        if d == -1:
            two_divisors = (el(1, 1),)
        elif d == -2:
            two_divisors = (el(0, 1),)
        elif d == -7:
            two_divisors = (el(0, 1), el(1, -1))
        elif d % 8 == 5:
            two_is_prime = True
        else:
            two_divisors = tuple(_find_two_divisors(ring))
    object.__setattr__(ring, "units", units)
    object.__setattr__(ring, "two_divisors", two_divisors)
    object.__setattr__(ring, "two_is_prime", two_is_prime)
    if d in _EXCEPTIONAL_NORM:
        exc = tuple(x for x in elements_up_to_norm(ring, _EXCEPTIONAL_NORM[d]) if ring.is_exceptional(x))
        object.__setattr__(ring, "exceptional_set", exc)
    return ring


def _find_two_divisors(ring: RingSpec) -> list[QuadInt]:
    # Only reached for imaginary rings outside the hard-coded list.
    found: list[QuadInt] = []
    for x in elements_up_to_norm(ring, 2):
        if x.norm() == 2 and not any(_try_div(x, y) is not None and _try_div(x, y).is_unit() for y in found):
            found.append(x)
    return found


def elements_up_to_norm(ring: RingSpec, bound: int, lower: int = 0) -> Iterator[QuadInt]:
    """Yield every element with ``lower <= N(x) <= bound`` ordered by (norm, a, b).

    Only defined for imaginary rings, where the norm form is positive definite.
    """
    if ring.d > 0:
        raise RingError("norm balls are infinite for real quadratic rings")
    p, q = ring.omega_sq_coeffs
    # N = (a + q b/2)^2 + (-p - q^2/4) b^2, so |b| <= sqrt(bound / (-p - q^2/4)).
    disc = -4 * p - q * q  # = |d| for both kinds
    bmax = isqrt(4 * bound // disc) + 1
    pts = []
    for b in range(-bmax, bmax + 1):
        rest = 4 * bound - disc * b * b
        if rest < 0:
            continue
        half = isqrt(rest)
        lo = (-q * b - half) // 2 - 1
        hi = (-q * b + half) // 2 + 1
        for a in range(lo, hi + 1):
            nrm = a * a + q * a * b - p * b * b
            if lower <= nrm <= bound:
                pts.append((nrm, a, b))
    pts.sort()
    for _, a, b in pts:
        yield QuadInt(a, b, ring)


# -- division procedures ---------------------------------------------------------


def div4(n: QuadInt) -> tuple[QuadInt, QuadInt]:
    """Split ``n = 4q + r`` with both coordinates of ``r`` in {-1, 0, 1, 2}."""
    ra = (n.a + 1) % 4 - 1
    rb = (n.b + 1) % 4 - 1
    return n._new((n.a - ra) // 4, (n.b - rb) // 4), n._new(ra, rb)


def _nearest_floor_tie(num: int, den: int) -> int:
    # round num/den (den > 0) to nearest, ties toward -infinity
    return -((den - 2 * num) // (2 * den))


def euclid_divmod(x: QuadInt, n: QuadInt) -> tuple[QuadInt, QuadInt]:
    """Division with remainder measured by the norm: ``x = n*q + r``, ``|N(r)| < |N(n)|``.

    For imaginary rings the quotient is the lattice point nearest to ``x/n``;
    ties go to the smaller coordinates.  Real rings search outward from the
    coordinate-rounded quotient.
    """
    ring = x.ring
    if n.is_zero():
        raise ZeroDivisionError("euclid_divmod by zero")
    if not ring.is_norm_euclidean:
        raise RingError(f"d={ring.d} is not norm-Euclidean")
    nn = n.norm()
    t = x * n.conj()
    if nn < 0:
        t, nn = -t, -nn
    fa, fb = t.a // nn, t.b // nn
    if ring.d < 0:
        best = None
        for qa in (fa, fa + 1):
            for qb in (fb, fb + 1):
                q = ring(qa, qb)
                r = x - n * q
                key = (r.norm(), qa, qb)
                if best is None or key < best[0]:
                    best = (key, q, r)
        return best[1], best[2]
    # real quadratic: the admissible region |N| < 1 is unbounded, widen until found
    ca, cb = _nearest_floor_tie(t.a, nn), _nearest_floor_tie(t.b, nn)
    target = abs(n.norm())
    for radius in range(0, 64):
        best = None
        for da in range(-radius, radius + 1):
            for db in range(-radius, radius + 1):
                if max(abs(da), abs(db)) != radius:
                    continue
                q = ring(ca + da, cb + db)
                r = x - n * q
                rn = abs(r.norm())
                if rn < target:
                    key = (rn, abs(da) + abs(db), ca + da, cb + db)
                    if best is None or key < best[0]:
                        best = (key, q, r)
        if best is not None:
            return best[1], best[2]
    raise RingError(f"no Euclidean quotient found near {x}/{n} in d={ring.d}")


def int_rem_divmod(x: QuadInt, n: QuadInt) -> tuple[QuadInt, int]:
    """Divide with a rational-integer remainder: ``x = n*q + r`` and ``|r| <= (N(n)-1)/2``.

    Requires ``N(n)`` odd and not 1, and the w-coordinate of ``n`` coprime to
    ``N(n)``.  The construction: a Euclidean step, a Bezout combination that
    clears the w-coordinate of the remainder, then folding multiples of
    ``N(n) = n * conj(n)`` back into the quotient.
    """
    nn = n.norm()
    if nn % 2 == 0:
        raise RingError(f"int_rem_divmod: N({n}) = {nn} is not odd")
    if abs(nn) == 1:
        raise RingError(f"int_rem_divmod: {n} is a unit")
    if gcd(n.b, nn) != 1:
        raise RingError(f"int_rem_divmod: w-coordinate {n.b} of {n} is not coprime to N = {nn}")
    m_abs = abs(nn)
    q1, r1 = euclid_divmod(x, n)
    # s*b + t*N = 1
    s = pow(n.b, -1, m_abs)
    m = -r1.b * s
    shifted = r1 + n * m  # w-coordinate now divisible by N(n)
    assert shifted.b % m_abs == 0
    r = shifted.a % m_abs
    if r > (m_abs - 1) // 2:
        r -= m_abs
    # shifted - r = k * N(n) = k * n * conj(n)
    k = x.ring((shifted.a - r) // nn, shifted.b // nn)
    q = q1 - m + k * n.conj()
    if x != n * q + r:
        raise AssertionError("int_rem_divmod invariant violated")
    return q, r


def ring_gcd(x: QuadInt, y: QuadInt) -> QuadInt:
    while not y.is_zero():
        _, r = euclid_divmod(x, y)
        x, y = y, r
    return x


def associates(x: QuadInt) -> list[QuadInt]:
    ring = x.ring
    if ring.d > 0:
        raise RingError("associates: infinite unit group for real quadratic rings")
    return [u * x for u in ring.units]


def canonical_associate(x: QuadInt) -> tuple[QuadInt, QuadInt]:
    """Lexicographically least associate of ``x`` and the unit producing it."""
    ring = x.ring
    if ring.d > 0:
        raise RingError("canonical_associate: infinite unit group for real quadratic rings")
    return min(((u * x, u) for u in ring.units), key=lambda t: (t[0].a, t[0].b))


# -- text syntax -----------------------------------------------------------------

_TERM = re.compile(r"([+-]?)(\d*)(\*?)(w?)")


def parse_element(text: str, ring: RingSpec) -> QuadInt:
    """Parse ``a``, ``a+b*w``, ``a-b*w``, ``w``, ``-2*w`` and similar forms."""
    if re.search(r"\d\s+\d", text):
        raise ValueError(f"cannot parse element {text!r}")
    s = text.replace(" ", "")
    if not s:
        raise ValueError("empty element text")
    if s.startswith("(") and s.endswith(")"):
        s = s[1:-1]
    a = b = 0
    pos = 0
    seen = False
    while pos < len(s):
        m = _TERM.match(s, pos)
        if m is None or m.end() == pos:
            raise ValueError(f"cannot parse element {text!r}")
        sign, digits, star, w = m.groups()
        if seen and not sign:
            raise ValueError(f"cannot parse element {text!r}")
        if not digits and not w:
            raise ValueError(f"cannot parse element {text!r}")
        if star and not (digits and w):
            raise ValueError(f"cannot parse element {text!r}")
        coef = int(digits) if digits else 1
        if sign == "-":
            coef = -coef
        if w:
            b += coef
        else:
            a += coef
        pos = m.end()
        seen = True
    return QuadInt(a, b, ring)


def format_element(x: QuadInt) -> str:
    a, b = x.a, x.b
    if b == 0:
        return str(a)
    if abs(b) == 1:
        wpart = "w"
    else:
        wpart = f"{abs(b)}*w"
    if a == 0:
        return wpart if b > 0 else "-" + wpart
    return f"{a}{'+' if b > 0 else '-'}{wpart}"

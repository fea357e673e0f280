"""Constructive decompositions of 4/n into at most three signed unit fractions."""

from __future__ import annotations

from dataclasses import dataclass
from math import log2
from typing import Callable, Iterable, Optional, Sequence

from .ring import (
    NEGATIVE_D,
    QuadInt,
    RingError,
    RingSpec,
    canonical_associate,
    div4,
    elements_up_to_norm,
    exact_div,
    int_rem_divmod,
    make_ring,
    ring_gcd,
)

__all__ = [
    "UnitFraction",
    "Decomposition",
    "SymmetryTransform",
    "DecompositionError",
    "ExceptionalElementError",
    "DegenerateRecipeError",
    "InvariantViolation",
    "decompose_integer",
    "variant_4k1_denominator",
    "recipe_minus_one",
    "recipe_r_one",
    "recipe_s",
    "s_branches",
    "handled_divisors",
    "reduce_by_symmetry",
    "transforms",
    "special_table",
    "supplement_table",
    "decompose",
    "pad_to_three",
]


class DecompositionError(Exception):
    """No decomposition could be produced."""


class ExceptionalElementError(DecompositionError):
    """The input lies in the finite exceptional set of its ring."""


class DegenerateRecipeError(DecompositionError):
    """A recipe was applied to parameters that produce a zero denominator."""


class InvariantViolation(AssertionError):
    """A divisibility the algebra guarantees did not hold."""


@dataclass(frozen=True)
class UnitFraction:
    sign: int
    den: QuadInt

    def __post_init__(self):
        if self.sign not in (1, -1):
            raise ValueError(f"sign must be +1 or -1, got {self.sign}")
        if self.den.is_zero():
            raise ValueError("unit fraction with zero denominator")

    def scaled(self, f: QuadInt) -> "UnitFraction":
        return UnitFraction(self.sign, self.den * f)

    def conj(self) -> "UnitFraction":
        return UnitFraction(self.sign, self.den.conj())

    def __str__(self):
        return f"{'+' if self.sign > 0 else '-'}1/({self.den})"


@dataclass(frozen=True)
class Decomposition:
    terms: tuple[UnitFraction, ...]
    recipe_tag: str

    def __post_init__(self):
        if not 1 <= len(self.terms) <= 3:
            raise ValueError(f"a decomposition has 1-3 terms, got {len(self.terms)}")

    @classmethod
    def of(cls, tag: str, *terms: tuple[int, QuadInt]) -> "Decomposition":
        return cls(tuple(UnitFraction(s, x) for s, x in terms), tag)

    @property
    def dens(self) -> tuple[QuadInt, ...]:
        return tuple(t.den for t in self.terms)

    def scaled(self, f: QuadInt, tag: Optional[str] = None) -> "Decomposition":
        """Decomposition of 4/(f*n) from one of 4/n."""
        return Decomposition(tuple(t.scaled(f) for t in self.terms), tag or self.recipe_tag)

    def conj(self) -> "Decomposition":
        return Decomposition(tuple(t.conj() for t in self.terms), self.recipe_tag)

    def retag(self, tag: str) -> "Decomposition":
        return Decomposition(self.terms, tag)

    def __str__(self):
        return " ".join(str(t) for t in self.terms)


@dataclass(frozen=True)
class SymmetryTransform:
    """``n -> unit * n`` or ``n -> unit * conj(n)``."""

    unit: QuadInt
    conjugate_flag: bool = False

    def apply(self, n: QuadInt) -> QuadInt:
        return self.unit * (n.conj() if self.conjugate_flag else n)

    def pull_back(self, dec: Decomposition) -> Decomposition:
        """Turn a decomposition of 4/apply(n) into one of 4/n."""
        inv = self.unit.conj()  # units of imaginary rings have norm 1
        out = dec.scaled(inv)
        return out.conj() if self.conjugate_flag else out

    @property
    def is_identity(self) -> bool:
        return not self.conjugate_flag and self.unit == 1


# -- integers ----------------------------------------------------------------------


def decompose_integer(n: int) -> Decomposition:
    """4/n for a rational integer ``|n| >= 2`` with at most two terms."""
    if abs(n) < 2:
        raise DecompositionError(f"4/{n}: need |n| >= 2")
    Z = make_ring(-1)
    tag = "eq2-integer"
    if n % 2 == 0:
        k = n // 2
        return Decomposition.of(tag, (1, Z(k)), (1, Z(k)))
    if n % 4 == 1:
        k = (n - 1) // 4
        return Decomposition.of(tag, (1, Z(k)), (-1, Z(k * n)))
    k = (n - 3) // 4
    # the (k+1)(4k+1) form fails: 4/7 != 1/2 + 1/10
    return Decomposition.of(tag, (1, Z(k + 1)), (1, Z((k + 1) * n)))


def variant_4k1_denominator(n: int) -> Decomposition:
    """The n = 4k+3 case with the second denominator (k+1)(4k+1); kept as a negative control."""
    Z = make_ring(-1)
    k = (n - 3) // 4
    return Decomposition.of("integer-4k1-variant", (1, Z(k + 1)), (1, Z((k + 1) * (4 * k + 1))))


# -- the two generic recipes ------------------------------------------------------


def recipe_minus_one(a: QuadInt) -> Decomposition:
    """4/(4a - 1) = 1/a + 1/(a(4a - 1))."""
    if a.is_zero():
        raise DegenerateRecipeError("recipe_minus_one needs a != 0")
    n = 4 * a - 1
    if n.is_zero():
        raise DegenerateRecipeError("4a - 1 = 0")
    return Decomposition.of("prop5-minus-one", (1, a), (1, a * n))


def recipe_r_one(divisor: QuadInt, b: QuadInt) -> Decomposition:
    """Three terms for n = 4(divisor*b + 1) - divisor."""
    if b.is_zero():
        raise DegenerateRecipeError("recipe_r_one needs b != 0")
    q = divisor * b + 1
    if q.is_zero():
        raise DegenerateRecipeError("divisor*b + 1 = 0")
    n = 4 * q - divisor
    if n.is_zero():
        raise DegenerateRecipeError("recipe_r_one target is zero")
    return Decomposition.of("prop5-r1", (1, q), (1, n * b), (-1, n * q * b))


# -- s-function branches --------------------------------------------------------
#
# With q = divisor*c + r and p = 4q - divisor, 4/p = 1/q + divisor/(p*q).  Each
# branch picks s with divisor*s equal to one of
#   "unit":  q + u           -> 1/q + 1/(p s) + 1/(u^-1 p q s)
#   "p+1":   p + 1           -> 1/q + 1/(q s) + 1/(p q s)
#   "p-1":   p - 1           -> 1/q + 1/(q s) - 1/(p q s)
#   "pq-1":  p q - 1         -> 1/q + 1/s     - 1/(p q s)
# Positive r carry closed forms for s; negative r are mirror branches whose s is
# obtained by exact division.


@dataclass(frozen=True)
class _Branch:
    kind: str
    unit: Optional[tuple[int, int]] = None
    closed_form: Optional[Callable[[QuadInt, QuadInt], QuadInt]] = None


def _sq_closed(r: int, const: tuple[int, int]):
    # s = c(4(N c + 2r) - N) + const, for the "pq-1" kind
    def f(c: QuadInt, N: QuadInt) -> QuadInt:
        return c * (4 * (N * c + 2 * r) - N) + c.ring(*const)

    return f


def _lin_closed(const: tuple[int, int]):
    # s = 4c + const, for the "p+1" and "p-1" kinds
    def f(c: QuadInt, N: QuadInt) -> QuadInt:
        return 4 * c + c.ring(*const)

    return f


_BRANCHES: dict[tuple[int, tuple[int, int], int], _Branch] = {
    # d = -1, divisor 1 - 2w
    (-1, (1, -2), 2): _Branch("unit", (0, 1), lambda c, N: c + c.ring.w),
    (-1, (1, -2), -2): _Branch("unit", (0, -1)),
    # d = -2, divisor 1 + 2w
    (-2, (1, 2), 2): _Branch("p+1", closed_form=_lin_closed((0, -2))),
    (-2, (1, 2), 4): _Branch("pq-1", closed_form=_sq_closed(4, (3, -14))),
    (-2, (1, 2), -2): _Branch("p-1"),
    (-2, (1, 2), -4): _Branch("pq-1"),
    # d = -7, divisor 1 - 2w
    (-7, (1, -2), 2): _Branch("p-1", closed_form=_lin_closed((-2, 2))),
    (-7, (1, -2), 3): _Branch("pq-1", closed_form=_sq_closed(3, (-8, 10))),
    (-7, (1, -2), -2): _Branch("p+1"),
    (-7, (1, -2), -3): _Branch("pq-1"),
    # d = -11, divisor 1 + w
    (-11, (1, 1), 2): _Branch("pq-1", closed_form=_sq_closed(2, (4, -3))),
    (-11, (1, 1), -2): _Branch("pq-1"),
    # d = -11, divisor 1 + 2w
    (-11, (1, 2), 2): _Branch("pq-1", closed_form=_sq_closed(2, (1, -2))),
    (-11, (1, 2), 4): _Branch("p-1", closed_form=_lin_closed((2, -2))),
    (-11, (1, 2), 7): _Branch("pq-1", closed_form=_sq_closed(7, (32, -26))),
    (-11, (1, 2), -2): _Branch("pq-1"),
    (-11, (1, 2), -4): _Branch("p+1"),
    (-11, (1, 2), -7): _Branch("pq-1"),
}


def s_branches() -> list[tuple[int, tuple[int, int], int]]:
    """All supported ``(d, divisor coordinates, r)`` triples."""
    return sorted(_BRANCHES)


def _s_value(branch: _Branch, N: QuadInt, c: QuadInt, q: QuadInt, p: QuadInt) -> QuadInt:
    ring = N.ring
    if branch.kind == "unit":
        numer = q + ring(*branch.unit)
    elif branch.kind == "p+1":
        numer = p + 1
    elif branch.kind == "p-1":
        numer = p - 1
    elif branch.kind == "pq-1":
        numer = p * q - 1
    else:  # pragma: no cover
        raise ValueError(branch.kind)
    if branch.closed_form is not None:
        s = branch.closed_form(c, N)
        if N * s != numer:
            raise InvariantViolation(f"closed-form s={s} fails divisor*s == {numer} (d={ring.d}, N={N})")
        return s
    try:
        return exact_div(numer, N)
    except ArithmeticError as exc:
        raise InvariantViolation(str(exc)) from None


def recipe_s(ring: RingSpec, divisor: QuadInt, r: int, cd: QuadInt) -> Decomposition:
    """Three-term decomposition of 4/p where p = 4(divisor*cd + r) - divisor."""
    branch = _BRANCHES.get((ring.d, divisor.key(), r))
    if branch is None:
        raise DecompositionError(f"no s-branch for d={ring.d}, divisor={divisor}, r={r}")
    N = divisor
    q = N * cd + r
    p = 4 * q - N
    if q.is_zero() or p.is_zero():
        raise DegenerateRecipeError("zero q or p")
    s = _s_value(branch, N, cd, q, p)
    if s.is_zero():
        raise DegenerateRecipeError("s vanishes")
    tag = f"s-recipe:{ring.d}:{N}:{r}"
    pqs = p * q * s
    if branch.kind == "unit":
        uinv = ring(*branch.unit).conj()
        sign, unit = (1, uinv) if uinv.key() > (-uinv).key() else (-1, -uinv)
        return Decomposition.of(tag, (1, q), (1, p * s), (sign, unit * pqs))
    if branch.kind == "p+1":
        return Decomposition.of(tag, (1, q), (1, q * s), (1, pqs))
    if branch.kind == "p-1":
        return Decomposition.of(tag, (1, q), (1, q * s), (-1, pqs))
    return Decomposition.of(tag, (1, q), (1, s), (-1, pqs))


# -- symmetry reduction -----------------------------------------------------------

# divisors N whose class -N (mod 4) the remainder recipes handle directly
_HANDLED: dict[int, tuple[tuple[int, int], ...]] = {
    -1: ((1, 0), (1, -2)),
    -2: ((1, 0), (1, 1), (1, 2)),
    -3: ((1, 0), (1, 1)),
    -7: ((1, 0), (1, -2)),
    -11: ((1, 0), (0, 1), (1, 1), (1, 2)),
}


def handled_divisors(ring: RingSpec) -> list[QuadInt]:
    return [ring(*k) for k in _HANDLED[ring.d]]


def transforms(ring: RingSpec) -> list[SymmetryTransform]:
    """Units in ring order, then the same units composed with conjugation."""
    return [SymmetryTransform(u, False) for u in ring.units] + [SymmetryTransform(u, True) for u in ring.units]


def _handled_divisor_for(n: QuadInt) -> Optional[QuadInt]:
    for N in handled_divisors(n.ring):
        t = n + N
        if t.a % 4 == 0 and t.b % 4 == 0:
            return N
    return None


def reduce_by_symmetry(n: QuadInt, all_hits: bool = False):
    """First transform taking ``n`` into a handled remainder class.

    Returns ``(transform, n')``; with ``all_hits`` a list of every such pair.
    Raises ``DecompositionError`` (the even case) when none exists.
    """
    ring = n.ring
    if ring.d not in _HANDLED:
        raise RingError(f"symmetry reduction is defined for d in {NEGATIVE_D}")
    hits = []
    for t in transforms(ring):
        m = t.apply(n)
        if _handled_divisor_for(m) is not None:
            if not all_hits:
                return t, m
            hits.append((t, m))
    if all_hits and hits:
        return hits
    raise DecompositionError(f"{n} is even: no handled remainder class in d={ring.d}")


# -- special decompositions ---------------------------------------------------------


def _table_entries(ring: RingSpec) -> list[tuple[QuadInt, list[tuple[int, QuadInt]]]]:
    E = ring
    w = ring.w
    one = ring.one
    d = ring.d
    if d == -1:
        return [
            ((1 + w) ** 2, [(1, w), (1, 2 * w), (1, 2 * w)]),
            (-1 + 2 * w, [(1, w), (1, -1 + w), (1, -3 + w)]),
        ]
    if d == -2:
        return [
            (w ** 2, [(1, -one), (1, E(-2)), (1, E(-2))]),
            ((1 + w) ** 2, [(1, w), (1, -2 + w), (1, -1 + 2 * w)]),
            ((1 - w) * (1 + w), [(1, E(2)), (1, E(2)), (1, E(3))]),
            (w * (1 + w), [(1, -one), (1, w), (1, -2 + w)]),
        ]
    if d == -3:
        return [
            (E(2), [(1, one), (1, E(2)), (1, E(2))]),
            (1 + w, [(1, one), (1, w), (1, 1 + w)]),
        ]
    if d == -7:
        return [
            (w ** 2, [(1, -one), (1, -1 + w), (1, -1 + w)]),
            ((1 - w) ** 2, [(1, -one), (1, -w), (1, -w)]),
            (w * (1 - w), [(1, one), (1, E(2)), (1, E(2))]),
            (-1 + 2 * w, [(1, w), (1, -1 + w), (1, -2 + 4 * w)]),
        ]
    if d == -11:
        return [
            (E(2), [(1, one), (1, E(2)), (1, E(2))]),
            (w ** 2, [(1, -one), (1, w ** 2), (1, w)]),
            ((1 + w) ** 2, [(1, -1 + w), (1, 2 * w), (1, 12 - 18 * w)]),
            (w * (1 - w), [(1, E(2)), (1, E(2)), (1, E(3))]),
            (w * (1 + w), [(1, -one), (1, w), (1, 1 + w)]),
            ((1 - w) * (1 + w), [(1, one), (1, -w), (1, 3 + 3 * w)]),
            ((1 + w) * (2 - w), [(1, E(2)), (1, E(4)), (1, E(20))]),
        ]
    return []


def _supplement_entries(ring: RingSpec) -> list[tuple[QuadInt, list[tuple[int, QuadInt]]]]:
    # q = +-1 collapses the remainder recipes (n = +-4 - N); witnesses from the bounded search
    w = ring.w
    one = ring.one
    d = ring.d
    if d == -2:
        return [
            (3 - w, [(1, one), (1, -w), (1, 2 + 3 * w)]),
            (-5 - w, [(1, -2 - w), (1, -4 + w), (1, -5 - w)]),
            (-5 - 2 * w, [(1, -w), (1, -2 + w), (1, -3 + w)]),
        ]
    if d == -7:
        return [(3 + 2 * w, [(1, 1 + w), (1, 2 + w), (1, 16 - 20 * w)])]
    if d == -11:
        return [
            (-4 - w, [(1, -one), (1, 2 - w), (1, -11 + 3 * w)]),
            (-5 - w, [(1, ring(-2)), (1, -5 - w), (1, 2 - 4 * w)]),
        ]
    return []


_TABLE_CACHE: dict[tuple[str, int], dict[tuple[int, int], tuple[QuadInt, Decomposition]]] = {}


def _build_table(ring: RingSpec, tag: str, entries) -> dict[tuple[int, int], tuple[QuadInt, Decomposition]]:
    if (tag, ring.d) not in _TABLE_CACHE:
        table = {}
        for n, terms in entries(ring):
            key, _ = canonical_associate(n)
            table[key.key()] = (n, Decomposition.of(tag, *terms))
        _TABLE_CACHE[tag, ring.d] = table
    return _TABLE_CACHE[tag, ring.d]


def special_table(ring: RingSpec) -> dict[tuple[int, int], tuple[QuadInt, Decomposition]]:
    """Listed decompositions keyed by the canonical associate's coordinates.

    Values are ``(element, decomposition of 4/element)``.
    """
    return _build_table(ring, "special-table", _table_entries)


def supplement_table(ring: RingSpec) -> dict[tuple[int, int], tuple[QuadInt, Decomposition]]:
    """Fixed decompositions for the orbits where ``q = +-1`` leaves no recipe."""
    return _build_table(ring, "supplement-table", _supplement_entries)


def _table_lookup(n: QuadInt, table=None) -> Optional[Decomposition]:
    if table is None:
        table = special_table(n.ring)
    if not table:
        return None
    for conj in (False, True):
        x = n.conj() if conj else n
        key, u = canonical_associate(x)
        hit = table.get(key.key())
        if hit is None:
            continue
        orig, dec = hit
        lam = exact_div(x, orig)  # a unit
        out = dec.scaled(lam)
        return out.conj() if conj else out
    return None


# -- the dispatcher ---------------------------------------------------------------


def _proper_divisors(g: QuadInt) -> list[QuadInt]:
    """Non-unit divisors of ``g`` up to units, smallest norm first (``g`` has small norm)."""
    out = []
    seen = set()
    for x in elements_up_to_norm(g.ring, g.norm() - 1, lower=2):
        if x.divides(g):
            key = canonical_associate(x)[0].key()
            if key not in seen:
                seen.add(key)
                out.append(x)
    return out


class _Engine:
    def __init__(self, ring: RingSpec, max_depth: int):
        self.ring = ring
        self.max_depth = max_depth

    def run(self, n: QuadInt, depth: int = 0) -> Decomposition:
        if depth > self.max_depth:
            raise InvariantViolation(f"recursion depth {depth} exceeds log2 bound {self.max_depth}")
        ring = self.ring
        if n.is_zero():
            raise DegenerateRecipeError("zero")
        q4, r4 = div4(n)
        if r4.is_zero():
            return Decomposition.of("divisible-by-four", (1, q4))
        hit = _table_lookup(n)
        if hit is not None:
            return hit
        if ring.two_is_prime and n.a % 2 == 0 and n.b % 2 == 0:
            m = ring(n.a // 2, n.b // 2)
            return Decomposition.of("two-prime-halved", (1, m), (1, m))
        hits = []
        try:
            hits = reduce_by_symmetry(n, all_hits=True)
        except DecompositionError:
            pass
        for t, m in hits:
            try:
                return t.pull_back(self.handled(m, depth))
            except DegenerateRecipeError:
                continue
        hit = _table_lookup(n, supplement_table(ring))
        if hit is not None:
            return hit
        for pi in ring.two_divisors:
            if pi.divides(n):
                try:
                    inner = self.run(exact_div(n, pi), depth + 1)
                except DecompositionError:
                    continue
                return inner.scaled(pi, "even-scaled")
        raise DecompositionError(f"no recipe applies to {n} in d={ring.d}")

    def handled(self, n: QuadInt, depth: int) -> Decomposition:
        """Decompose ``n`` lying in the class ``-N (mod 4)`` of a handled divisor ``N``."""
        ring = self.ring
        N = _handled_divisor_for(n)
        if N == 1:
            return recipe_minus_one(exact_div(n + 1, ring(4)))
        m = exact_div(n + N, ring(4))
        if m.is_zero():
            raise DegenerateRecipeError(f"{n} = -{N}")
        c, r = int_rem_divmod(m, N)
        if r == 1:
            return recipe_r_one(N, c)
        if r == -1:
            # -n = 4((-N)c + 1) + N
            return recipe_r_one(-N, c).scaled(-ring.one)
        if (ring.d, N.key(), r) in _BRANCHES:
            return recipe_s(ring, N, r, c)
        return self.composite(n, N, depth)

    def composite(self, n: QuadInt, N: QuadInt, depth: int) -> Decomposition:
        g = ring_gcd(n, N)
        if g.is_unit():
            raise InvariantViolation(f"{n} shares no factor with {N} yet has no branch")
        for f in [g] + _proper_divisors(g):
            if not f.divides(n):
                continue
            try:
                inner = self.run(exact_div(n, f), depth + 1)
            except DecompositionError:
                continue
            return inner.scaled(f, "composite-scaled")
        raise DegenerateRecipeError(f"composite {n}: no cofactor decomposes")


def decompose(ring: RingSpec, n: QuadInt) -> Decomposition:
    """A decomposition of 4/n valid in ``ring``.

    Imaginary rings outside the exceptional set go through the remainder
    dispatcher; real rings scale the unit-group identity for 4.
    """
    if n.ring.d != ring.d:
        raise RingError("element belongs to a different ring")
    if n.is_zero():
        raise DecompositionError("4/0 is undefined")
    if ring.d > 0:
        from .pell import pell_two_term

        return pell_two_term(ring.d).scaled(n)
    if ring.d not in NEGATIVE_D:
        raise RingError(f"decompose supports d in {NEGATIVE_D} and positive norm-Euclidean d")
    if ring.is_exceptional(n):
        raise ExceptionalElementError(f"{n} lies in the exceptional set E_{ring.d}")
    max_depth = max(1, int(log2(n.norm())))
    return _Engine(ring, max_depth).run(n)


def pad_to_three(dec: Decomposition) -> Decomposition:
    """Split terms via 1/x = 1/(2x) + 1/(2x) until there are three."""
    terms = list(dec.terms)
    while len(terms) < 3:
        t = terms.pop(0)
        terms[:0] = [UnitFraction(t.sign, t.den * 2), UnitFraction(t.sign, t.den * 2)]
    return Decomposition(tuple(terms), dec.recipe_tag)

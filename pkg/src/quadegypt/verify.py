"""Exact checks of 4/n = sum of signed unit fractions, and the Z[i] cone predicate."""

from __future__ import annotations

from dataclasses import dataclass

from .decomp import Decomposition
from .ring import QuadInt, QuadRat, RingError, RingSpec

__all__ = [
    "MalformedDecompositionError",
    "ConeReport",
    "verify",
    "verify_rational",
    "rational_sum",
    "in_cone",
    "check_conjecture",
    "CONE_EXCLUDED",
]

# E = {0, 1, w, 1+w} in Z[i] coordinates
CONE_EXCLUDED = frozenset({(0, 0), (1, 0), (0, 1), (1, 1)})


class MalformedDecompositionError(ValueError):
    pass


def verify(ring: RingSpec, n: QuadInt, dec: Decomposition) -> bool:
    """True iff the signed unit fractions of ``dec`` sum to exactly 4/n.

    Denominators are cleared: 4 * prod(den) == n * sum(sign_i * prod_{j != i} den_j).
    """
    if n.is_zero():
        raise MalformedDecompositionError("n = 0")
    dens = dec.dens
    for x in dens:
        if x.is_zero():
            raise MalformedDecompositionError("zero denominator")
        if x.ring.d != ring.d:
            raise RingError(f"denominator {x!r} is not in d={ring.d}")
    if n.ring.d != ring.d:
        raise RingError(f"{n!r} is not in d={ring.d}")
    total = ring.one
    for x in dens:
        total = total * x
    rhs = ring.zero
    for i, t in enumerate(dec.terms):
        prod = ring(t.sign)
        for j, x in enumerate(dens):
            if j != i:
                prod = prod * x
        rhs = rhs + prod
    return 4 * total == n * rhs


def in_cone(x: QuadInt) -> bool:
    """Both coordinates nonnegative or both nonpositive (Gaussian integers only)."""
    if x.ring.d != -1:
        raise RingError("the cone predicate is defined on Z[i]")
    return (x.a >= 0 and x.b >= 0) or (x.a <= 0 and x.b <= 0)


@dataclass(frozen=True)
class ConeReport:
    n: QuadInt
    in_domain: bool
    terms_ok: bool
    sum_ok: bool

    @property
    def satisfied(self) -> bool:
        return self.in_domain and self.terms_ok and self.sum_ok


def check_conjecture(n: QuadInt, dec: Decomposition) -> ConeReport:
    ring = n.ring
    if ring.d != -1:
        raise RingError("the cone conjecture concerns Z[i]")
    in_domain = n.a >= 0 and n.b >= 0 and n.key() not in CONE_EXCLUDED
    terms_ok = all(in_cone(x) for x in dec.dens)
    sum_ok = not n.is_zero() and verify(ring, n, dec)
    return ConeReport(n, in_domain, terms_ok, sum_ok)


def rational_sum(ring: RingSpec, dec: Decomposition) -> QuadRat:
    """``sum(sign / den)`` as an exact element of the fraction field."""
    total = QuadRat(ring.zero)
    for t in dec.terms:
        if t.den.is_zero():
            raise MalformedDecompositionError("zero denominator")
        total = total + QuadRat(ring(t.sign), t.den)
    return total


def verify_rational(ring: RingSpec, n: QuadInt, dec: Decomposition) -> bool:
    """Same question as :func:`verify`, answered by summing fractions instead of clearing denominators."""
    if n.is_zero():
        raise MalformedDecompositionError("n = 0")
    return rational_sum(ring, dec) == QuadRat(ring(4), n)

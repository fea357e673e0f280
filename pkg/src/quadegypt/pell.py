"""Identities 4 = 1/z + 1/conj(z) (and 4 = 1 + 1/z + 1/conj(z)) in real quadratic rings.

``4 = 1/z + 1/conj(z)`` means ``trace(z) = 4 N(z)``, which holds exactly when
``u = 4z - 1`` is a unit of norm 1 with both coordinates congruent to -1 mod 4.
The three-term shape swaps 4 for 3.  Candidate units are ``+-eps**k`` for the
fundamental unit ``eps``, found from the continued fraction of ``w``.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import isqrt
from typing import Iterator, Optional

from .decomp import Decomposition, DecompositionError
from .ring import OmegaKind, QuadInt, RingError, RingSpec, make_ring

__all__ = [
    "PellSearchError",
    "PellIdentity",
    "continued_fraction",
    "fundamental_unit",
    "pell_candidates",
    "pell_identity",
    "pell_two_term",
    "pell_xy",
]

DEFAULT_MAX_POWER = 50
DEFAULT_OMEGA_BOUND = 10**6


class PellSearchError(DecompositionError):
    def __init__(self, d: int, max_power: int, omega_bound: int, form: str):
        super().__init__(f"no {form}-term identity for d={d} with powers <= {max_power}, |w-coordinate| <= {omega_bound}")
        self.d = d
        self.max_power = max_power
        self.omega_bound = omega_bound
        self.form = form


def continued_fraction(P: int, Q: int, D: int) -> Iterator[int]:
    """Partial quotients of ``(P + sqrt(D)) / Q`` for non-square ``D`` with ``Q | D - P*P``."""
    if Q == 0 or (D - P * P) % Q:
        raise ValueError("need Q != 0 and Q | D - P^2")
    s = isqrt(D)
    if s * s == D:
        raise ValueError("D is a perfect square")
    while True:
        # floor((P + sqrt D)/Q); sqrt D is irrational so only the sign of Q matters
        a = (P + s) // Q if Q > 0 else (P + s + 1) // Q
        yield a
        P = a * Q - P
        Q = (D - P * P) // Q


def fundamental_unit(ring: RingSpec) -> QuadInt:
    """The least unit greater than 1, read off the convergents of ``w``."""
    if ring.d <= 1:
        raise RingError("fundamental_unit needs d > 1")
    p, q = ring.omega_sq_coeffs
    P0, Q0 = (1, 2) if ring.omega_kind is OmegaKind.HALF_PLUS_SQRT else (0, 1)
    h0, h1 = 1, 0
    k0, k1 = 0, 1
    for a in continued_fraction(P0, Q0, ring.d):
        h0, h1 = a * h0 + h1, h0
        k0, k1 = a * k0 + k1, k0
        # h/k ~ w, so h - k*conj(w) = (h - q k) + k w is large with small norm
        u = ring(h0 - q * k0, k0)
        if abs(u.norm()) == 1:
            return u
    raise AssertionError("unreachable")  # pragma: no cover


def pell_candidates(ring: RingSpec, m: int, max_power: int = DEFAULT_MAX_POWER) -> Iterator[tuple[int, QuadInt]]:
    """``(k, z)`` with ``m z - 1 = +-eps**k`` of norm 1, so that ``trace(z) = m N(z)``."""
    eps = fundamental_unit(ring)
    u = ring.one
    for k in range(1, max_power + 1):
        u = u * eps
        if u.norm() != 1:
            continue
        for v in (u, -u):
            if (v.a + 1) % m == 0 and v.b % m == 0:
                yield k, ring((v.a + 1) // m, v.b // m)


@dataclass(frozen=True)
class PellIdentity:
    """``z`` with ``4 = lead + 1/z + 1/conj(z)``; ``lead`` is 0 or 1."""

    ring: RingSpec
    z: QuadInt
    lead: int
    power: int

    @property
    def form(self) -> str:
        return "three" if self.lead else "two"

    def decomposition(self) -> Decomposition:
        pair = ((1, self.z), (1, self.z.conj()))
        if self.lead:
            return Decomposition.of("pell-three-term", (1, self.ring.one), *pair)
        return Decomposition.of("pell-two-term", *pair)


def _present(z: QuadInt) -> QuadInt:
    # the member of {z, conj z} with positive w-coordinate comes first
    return z if z.b > 0 else z.conj()


def _first(ring: RingSpec, m: int, max_power: int, omega_bound: int) -> Optional[tuple[int, QuadInt]]:
    for k, z in pell_candidates(ring, m, max_power):
        if abs(z.b) <= omega_bound:
            return k, _present(z)
    return None


def pell_identity(
    d: int,
    max_power: int = DEFAULT_MAX_POWER,
    omega_bound: int = DEFAULT_OMEGA_BOUND,
    form: str = "auto",
) -> PellIdentity:
    """Search for an identity for 4 in ``D[d]``, ``d > 1``.

    ``form`` is ``"two"``, ``"three"`` or ``"auto"``.  Auto mode tries the
    two-term shape and falls back to the three-term one.
    """
    ring = make_ring(d)
    if d <= 1:
        raise RingError("Pell identities need d > 1")
    if form not in ("auto", "two", "three"):
        raise ValueError(f"unknown form {form!r}")
    if form in ("auto", "two"):
        hit = _first(ring, 4, max_power, omega_bound)
        if hit is not None:
            return PellIdentity(ring, hit[1], 0, hit[0])
    if form in ("auto", "three"):
        hit = _first(ring, 3, max_power, omega_bound)
        if hit is not None:
            return PellIdentity(ring, hit[1], 1, hit[0])
    raise PellSearchError(d, max_power, omega_bound, form)


def pell_two_term(
    d: int,
    max_power: int = DEFAULT_MAX_POWER,
    omega_bound: int = DEFAULT_OMEGA_BOUND,
    form: str = "auto",
) -> Decomposition:
    """Decomposition of 4/1 in ``D[d]``; scale the denominators by ``n`` for 4/n."""
    return pell_identity(d, max_power, omega_bound, form).decomposition()


def pell_xy(z: QuadInt, lead: int = 0) -> tuple[int, int]:
    """``(x, y)`` with ``x*x - d*y*y = 1`` built from ``z = a + b*sqrt(d)``.

    Two-term: ``(4a - 1, 4b)``; three-term: ``(3a - 1, 3b)``.  Only for ``w = sqrt(d)``.
    """
    if z.ring.omega_kind is not OmegaKind.SQRT:
        raise RingError("pell_xy is stated for w = sqrt(d)")
    m = 3 if lead else 4
    return m * z.a - 1, m * z.b

"""Inner loop of the bounded search: find every ``b`` in a norm annulus for which
``c = Q*b / (P*b - Q)`` is an algebraic integer.

Two interchangeable backends operate on int64 coordinates:

* a numba ``@njit`` kernel (default when numba imports), and
* a vectorised numpy kernel.

Set ``QUADEGYPT_NUMBA=0`` to force the numpy path.  Callers must check
``fits_int64`` first; the pure-Python big-int path in ``oracle`` covers the rest.
"""

from __future__ import annotations

import os
from math import isqrt

import numpy as np

try:
    from numba import njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover
    HAVE_NUMBA = False

__all__ = ["HAVE_NUMBA", "backend", "fits_int64", "solve_annulus", "solve_annulus_numba", "solve_annulus_numpy"]

_LIMIT = 2**62


def backend() -> str:
    if HAVE_NUMBA and os.environ.get("QUADEGYPT_NUMBA", "1") != "0":
        return "numba"
    return "numpy"


def _row_bound(hi: int, p: int, q: int) -> int:
    disc = -4 * p - q * q
    return isqrt(4 * hi // disc) + 1


def fits_int64(P: tuple[int, int], Q: tuple[int, int], p: int, q: int, hi: int) -> bool:
    """Whether every intermediate of the kernels stays below 2**62 in magnitude."""
    bmax = _row_bound(hi, p, q)
    amax = bmax * (abs(q) + 2) + isqrt(hi) + 2
    coef = 1 + abs(p) + abs(q)
    mP = max(abs(P[0]), abs(P[1]))
    mQ = max(abs(Q[0]), abs(Q[1]))
    mb = max(amax, bmax)
    m_num = 2 * coef * mQ * mb  # coordinates of Q*b
    m_den = 2 * coef * mP * mb + mQ  # coordinates of P*b - Q
    m_conj = m_den * (1 + abs(q))
    prod = 2 * coef * m_num * m_conj
    nrm = coef * 2 * m_den * m_den
    return max(prod, nrm) < _LIMIT


def _solve_numpy(Pa, Pb, Qa, Qb, p, q, lo, hi):
    bmax = _row_bound(hi, p, q)
    disc = -4 * p - q * q
    rows_b = []
    rows_a = []
    for y in range(-bmax, bmax + 1):
        rest = 4 * hi - disc * y * y
        if rest < 0:
            continue
        half = isqrt(rest)
        x0 = (-q * y - half) // 2 - 1
        x1 = (-q * y + half) // 2 + 1
        xs = np.arange(x0, x1 + 1, dtype=np.int64)
        rows_a.append(xs)
        rows_b.append(np.full(xs.shape, y, dtype=np.int64))
    if not rows_a:
        empty = np.empty(0, dtype=np.int64)
        return empty, empty, empty, empty
    ba = np.concatenate(rows_a)
    bb = np.concatenate(rows_b)
    nb = ba * ba + q * ba * bb - p * bb * bb
    keep = (nb >= lo) & (nb <= hi)
    ba, bb = ba[keep], bb[keep]
    # numerator Q*b, denominator P*b - Q
    na = Qa * ba + p * Qb * bb
    nbw = Qa * bb + Qb * ba + q * Qb * bb
    da = Pa * ba + p * Pb * bb - Qa
    db = Pa * bb + Pb * ba + q * Pb * bb - Qb
    nd = da * da + q * da * db - p * db * db
    nonzero = nd != 0
    ba, bb, na, nbw, da, db, nd = (v[nonzero] for v in (ba, bb, na, nbw, da, db, nd))
    # num * conj(den); conj(x + y w) = (x + q y) - y w
    ca_ = da + q * db
    cb_ = -db
    ta = na * ca_ + p * nbw * cb_
    tb = na * cb_ + nbw * ca_ + q * nbw * cb_
    ok = (ta % nd == 0) & (tb % nd == 0)
    return ba[ok], bb[ok], ta[ok] // nd[ok], tb[ok] // nd[ok]


def solve_annulus_numpy(P, Q, p, q, lo, hi):
    """numpy backend; returns arrays ``(b_a, b_b, c_a, c_b)``."""
    return _solve_numpy(int(P[0]), int(P[1]), int(Q[0]), int(Q[1]), int(p), int(q), int(lo), int(hi))


if HAVE_NUMBA:

    @njit(cache=True)
    def _solve_numba(Pa, Pb, Qa, Qb, p, q, lo, hi, bmax, out):
        disc = -4 * p - q * q
        count = 0
        cap = out.shape[0]
        for y in range(-bmax, bmax + 1):
            rest = 4 * hi - disc * y * y
            if rest < 0:
                continue
            half = np.int64(np.sqrt(np.float64(rest))) + 1
            x0 = (-q * y - half) // 2 - 1
            x1 = (-q * y + half) // 2 + 1
            for x in range(x0, x1 + 1):
                nb = x * x + q * x * y - p * y * y
                if nb < lo or nb > hi:
                    continue
                na = Qa * x + p * Qb * y
                nbw = Qa * y + Qb * x + q * Qb * y
                da = Pa * x + p * Pb * y - Qa
                db = Pa * y + Pb * x + q * Pb * y - Qb
                nd = da * da + q * da * db - p * db * db
                if nd == 0:
                    continue
                ca_ = da + q * db
                cb_ = -db
                ta = na * ca_ + p * nbw * cb_
                tb = na * cb_ + nbw * ca_ + q * nbw * cb_
                if ta % nd != 0 or tb % nd != 0:
                    continue
                if count < cap:
                    out[count, 0] = x
                    out[count, 1] = y
                    out[count, 2] = ta // nd
                    out[count, 3] = tb // nd
                count += 1
        return count


def solve_annulus_numba(P, Q, p, q, lo, hi):
    """numba backend; same contract as :func:`solve_annulus_numpy`."""
    bmax = _row_bound(hi, p, q)
    cap = 64
    while True:
        out = np.empty((cap, 4), dtype=np.int64)
        count = _solve_numba(int(P[0]), int(P[1]), int(Q[0]), int(Q[1]), int(p), int(q), int(lo), int(hi), bmax, out)
        if count <= cap:
            out = out[:count]
            return out[:, 0].copy(), out[:, 1].copy(), out[:, 2].copy(), out[:, 3].copy()
        cap = count


def solve_annulus(P, Q, p, q, lo, hi):
    if backend() == "numba":
        return solve_annulus_numba(P, Q, p, q, lo, hi)
    return solve_annulus_numpy(P, Q, p, q, lo, hi)

"""Bounded exhaustive search for decompositions, and scans built on it.

The search is independent of the constructive engine: it only enumerates
lattice points and solves for the last denominator exactly.  Every unit
fraction is written with sign +1 (``-1/x == 1/(-x)``), and terms are reported
in nondecreasing ``(norm, a, b)`` order so each multiset appears once.

Pruning: if the terms of ``R = 1/x_1 + ... + 1/x_k`` are sorted by norm, the
first satisfies ``|1/x_1| >= |R|/k``, i.e. ``N(x_1) * N(R) <= k**2``.
"""

from __future__ import annotations

import json
import logging
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Iterator, Optional, Sequence

from . import _kernels
from .decomp import Decomposition, DecompositionError, ExceptionalElementError, decompose
from .ring import NEGATIVE_D, QuadInt, RingError, RingSpec, elements_up_to_norm, make_ring
from .verify import CONE_EXCLUDED, in_cone, verify

__all__ = [
    "ScanReport",
    "iter_solutions",
    "brute_force",
    "scan_theorem",
    "scan_conjecture",
    "max_workers",
    "CONE_READING",
]

log = logging.getLogger(__name__)

DEFAULT_CAP = 16
CONE_READING = "positive-sign unit fractions, denominators in the closed cone, repeats allowed"


def _key(x: QuadInt) -> tuple[int, int, int]:
    return (x.norm(), x.a, x.b)


def _solve_python(P: QuadInt, Q: QuadInt, lo: int, hi: int) -> Iterator[tuple[QuadInt, QuadInt]]:
    for b in elements_up_to_norm(P.ring, hi, lower=lo):
        den = P * b - Q
        if den.is_zero():
            continue
        num = Q * b
        nd = den.norm()
        t = num * den.conj()
        if t.a % nd == 0 and t.b % nd == 0:
            yield b, P.ring(t.a // nd, t.b // nd)


def _solve_pairs(P: QuadInt, Q: QuadInt, lo: int, hi: int, use_kernel: bool = True):
    """All ``(b, c)`` with ``lo <= N(b) <= hi`` and ``1/b + 1/c == P/Q``."""
    ring = P.ring
    p, q = ring.omega_sq_coeffs
    if hi < lo:
        return []
    if use_kernel and _kernels.fits_int64(P.key(), Q.key(), p, q, hi):
        ba, bb, ca, cb = _kernels.solve_annulus(P.key(), Q.key(), p, q, lo, hi)
        return [(ring(int(x), int(y)), ring(int(u), int(v))) for x, y, u, v in zip(ba, bb, ca, cb)]
    return list(_solve_python(P, Q, lo, hi))


def iter_solutions(
    ring: RingSpec,
    n: QuadInt,
    term_count: int,
    den_norm_bound: int,
    cone_only: bool = False,
    use_kernel: bool = True,
) -> Iterator[tuple[QuadInt, ...]]:
    """Yield denominator tuples (sorted by ``(norm, a, b)``) with ``sum 1/x == 4/n``."""
    if ring.d >= 0:
        raise RingError("brute force needs a positive definite norm (d < 0)")
    if n.is_zero():
        raise ValueError("n = 0")
    if cone_only and ring.d != -1:
        raise RingError("cone_only applies to d = -1")
    if term_count not in (1, 2, 3):
        raise ValueError("term_count must be 1, 2 or 3")
    four = ring(4)
    ok = (lambda x: in_cone(x)) if cone_only else (lambda x: True)

    if term_count == 1:
        t = n * four.conj()  # x = n / 4
        if t.a % 16 == 0 and t.b % 16 == 0:
            x = ring(t.a // 16, t.b // 16)
            if x.norm() <= den_norm_bound and ok(x):
                yield (x,)
        return

    if term_count == 2:
        # N(b) * N(4) <= 4 N(n)
        hi = min(den_norm_bound, (4 * n.norm()) // 16)
        for b, c in _solve_pairs(four, n, 1, hi, use_kernel):
            if _key(c) >= _key(b) and c.norm() <= den_norm_bound and ok(b) and ok(c):
                yield (b, c)
        return

    a_hi = min(den_norm_bound, (9 * n.norm()) // 16)
    for a in elements_up_to_norm(ring, a_hi, lower=1):
        if not ok(a):
            continue
        P1 = four * a - n
        if P1.is_zero():
            continue  # 4/n = 1/a leaves 1/b + 1/c = 0
        Q1 = n * a
        # N(b) * N(P1) <= 4 N(Q1)
        hi = min(den_norm_bound, (4 * Q1.norm()) // P1.norm())
        lo = a.norm()
        ka = _key(a)
        for b, c in _solve_pairs(P1, Q1, lo, hi, use_kernel):
            kb = _key(b)
            if kb < ka or _key(c) < kb:
                continue
            if c.norm() > den_norm_bound or not ok(b) or not ok(c):
                continue
            yield (a, b, c)


def brute_force(
    ring: RingSpec,
    n: QuadInt,
    term_count: int,
    den_norm_bound: int,
    cone_only: bool = False,
    cap: Optional[int] = DEFAULT_CAP,
    use_kernel: bool = True,
) -> list[Decomposition]:
    """Every verified decomposition within the bound, sorted by max norm then lexicographically."""
    sols = []
    for dens in iter_solutions(ring, n, term_count, den_norm_bound, cone_only, use_kernel):
        dec = Decomposition.of("oracle", *((1, x) for x in dens))
        if not verify(ring, n, dec):  # pragma: no cover - guarded by construction
            raise AssertionError(f"oracle produced a non-identity for {n}: {dec}")
        sols.append(dec)
    sols.sort(key=lambda dec: (max(x.norm() for x in dec.dens), [_key(x) for x in dec.dens]))
    return sols if cap is None else sols[:cap]


def find_any(ring: RingSpec, n: QuadInt, den_norm_bound: int, cone_only: bool = False) -> Optional[Decomposition]:
    """The first hit over 1, 2, then 3 terms, in search order; ``None`` if nothing fits."""
    for k in (1, 2, 3):
        for dens in iter_solutions(ring, n, k, den_norm_bound, cone_only):
            return Decomposition.of("oracle", *((1, x) for x in dens))
    return None


# -- scans -----------------------------------------------------------------------


@dataclass
class ScanReport:
    d: int
    norm_bound: int
    attempted: int = 0
    decomposed: int = 0
    failures: list[QuadInt] = field(default_factory=list)
    exceptional_hits: list[QuadInt] = field(default_factory=list)
    kind: str = "theorem"
    den_norm_bound: Optional[int] = None
    witnesses: dict[tuple[int, int], Decomposition] = field(default_factory=dict, repr=False)

    @property
    def consistent(self) -> bool:
        return self.attempted == self.decomposed + len(self.failures) + len(self.exceptional_hits)

    def records(self, emit_all: bool = False) -> Iterator[dict]:
        """Line records: header, per-element records, summary."""
        from .ring import format_element

        header = {
            "schema_version": "1",
            "record": "header",
            "scan": self.kind,
            "ring_d": self.d,
            "norm_bound": self.norm_bound,
        }
        if self.kind == "conjecture":
            header["den_norm_bound"] = self.den_norm_bound
            header["reading"] = CONE_READING
        yield header
        status_of = {}
        for x in self.exceptional_hits:
            status_of[x.key()] = "exceptional"
        for x in self.failures:
            status_of[x.key()] = "open" if self.kind == "conjecture" else "failure"
        keys = set(status_of)
        if emit_all:
            keys |= set(self.witnesses)
        for k in sorted(keys, key=lambda k: (_key(make_ring(self.d)(*k)), k)):
            x = make_ring(self.d)(*k)
            rec = {"schema_version": "1", "record": status_of.get(k, "decomposed"), "input": format_element(x)}
            dec = self.witnesses.get(k)
            if dec is not None:
                rec["terms"] = [{"sign": t.sign, "den": format_element(t.den)} for t in dec.terms]
                rec["recipe_tag"] = dec.recipe_tag
                rec["verified"] = verify(x.ring, x, dec)
            yield rec
        yield {
            "schema_version": "1",
            "record": "summary",
            "scan": self.kind,
            "ring_d": self.d,
            "norm_bound": self.norm_bound,
            "attempted": self.attempted,
            "decomposed": self.decomposed,
            "failures": len(self.failures),
            "exceptional_hits": len(self.exceptional_hits),
        }

    def to_jsonl(self, emit_all: bool = False) -> str:
        return "".join(json.dumps(r, sort_keys=False) + "\n" for r in self.records(emit_all))


def max_workers(requested: Optional[int] = None) -> int:
    """Worker count, capped by ``QUADEGYPT_MAX_WORKERS`` when set."""
    n = requested if requested and requested > 0 else 1
    cap = os.environ.get("QUADEGYPT_MAX_WORKERS")
    if cap:
        n = min(n, max(1, int(cap)))
    return n


def _theorem_shard(args):
    d, keys, keep = args
    ring = make_ring(d)
    out = []
    for k in keys:
        n = ring(*k)
        try:
            dec = decompose(ring, n)
        except ExceptionalElementError:
            out.append((k, "exceptional", None))
            continue
        except DecompositionError:
            out.append((k, "failure", None))
            continue
        if verify(ring, n, dec):
            out.append((k, "ok", dec if keep else None))
        else:
            out.append((k, "failure", None))
    return out


def _conjecture_shard(args):
    keys, den_bound, keep = args
    ring = make_ring(-1)
    out = []
    for k in keys:
        dec = find_any(ring, ring(*k), den_bound, cone_only=True)
        out.append((k, "ok" if dec is not None else "open", dec if keep else None))
    return out


def _run_shards(fn, shard_args, jobs: int):
    if jobs <= 1 or len(shard_args) <= 1:
        return [fn(a) for a in shard_args]
    with ProcessPoolExecutor(max_workers=jobs) as ex:
        return list(ex.map(fn, shard_args))


def _shards(keys: Sequence, jobs: int) -> list[list]:
    if jobs <= 1:
        return [list(keys)]
    # round-robin so large-norm elements spread across workers
    return [list(keys[i::jobs]) for i in range(jobs)]


def scan_theorem(ring: RingSpec, norm_bound: int, jobs: int = 1, keep_witnesses: bool = False) -> ScanReport:
    """Decompose and verify every ``n`` with ``1 <= N(n) <= norm_bound``."""
    if ring.d not in NEGATIVE_D:
        raise RingError(f"scan_theorem supports d in {NEGATIVE_D}")
    keys = [x.key() for x in elements_up_to_norm(ring, norm_bound, lower=1)]
    jobs = max_workers(jobs)
    results = _run_shards(_theorem_shard, [(ring.d, s, keep_witnesses) for s in _shards(keys, jobs)], jobs)
    report = ScanReport(ring.d, norm_bound)
    merged = sorted((r for shard in results for r in shard), key=lambda r: (_key(ring(*r[0])), r[0]))
    for k, status, dec in merged:
        report.attempted += 1
        if status == "ok":
            report.decomposed += 1
            if dec is not None:
                report.witnesses[k] = dec
        elif status == "exceptional":
            report.exceptional_hits.append(ring(*k))
        else:
            report.failures.append(ring(*k))
    return report


def conjecture_domain(norm_bound: int) -> list[QuadInt]:
    ring = make_ring(-1)
    return [
        x
        for x in elements_up_to_norm(ring, norm_bound, lower=1)
        if x.a >= 0 and x.b >= 0 and x.key() not in CONE_EXCLUDED
    ]


def scan_conjecture(norm_bound: int, den_norm_bound: int, jobs: int = 1, keep_witnesses: bool = False) -> ScanReport:
    """Cone-restricted search for every in-domain Gaussian integer up to ``norm_bound``.

    A failure here is an open instance within the denominator bound, not a
    counterexample.
    """
    keys = [x.key() for x in conjecture_domain(norm_bound)]
    jobs = max_workers(jobs)
    results = _run_shards(_conjecture_shard, [(s, den_norm_bound, keep_witnesses) for s in _shards(keys, jobs)], jobs)
    ring = make_ring(-1)
    report = ScanReport(-1, norm_bound, kind="conjecture", den_norm_bound=den_norm_bound)
    merged = sorted((r for shard in results for r in shard), key=lambda r: (_key(ring(*r[0])), r[0]))
    for k, status, dec in merged:
        report.attempted += 1
        if status == "ok":
            report.decomposed += 1
            if dec is not None:
                report.witnesses[k] = dec
        else:
            report.failures.append(ring(*k))
    return report

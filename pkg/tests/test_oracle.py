import json

import pytest

from quadegypt.decomp import decompose
from quadegypt.oracle import (
    CONE_READING,
    brute_force,
    conjecture_domain,
    find_any,
    iter_solutions,
    max_workers,
    scan_conjecture,
    scan_theorem,
)
from quadegypt import _kernels
from quadegypt.oracle import _solve_pairs
from quadegypt.ring import NEGATIVE_D, RingError, elements_up_to_norm, make_ring
from quadegypt.verify import verify

G = make_ring(-1)
w = G.w


def dens(dec):
    return [x.key() for x in dec.dens]


def test_cone_triple_for_1_plus_2w():
    sols = brute_force(G, 1 + 2 * w, 3, 20, cone_only=True)
    assert [(0, 1), (1, 1), (3, 1)] in [dens(s) for s in sols]


def test_cone_triple_for_3_plus_w():
    sols = brute_force(G, 3 + w, 3, 60, cone_only=True)
    assert [(1, 0), (1, 3), (5, 5)] in [dens(s) for s in sols]
    assert all(all(x.a * x.b >= 0 for x in s.dens) for s in sols)


def test_one_and_two_terms():
    assert [dens(s) for s in brute_force(G, G(8, 4), 1, 10)] == [[(2, 1)]]
    assert brute_force(G, G(3, 1), 1, 100) == []
    two = brute_force(G, G(6), 2, 100)
    assert [(3, 0), (3, 0)] in [dens(s) for s in two]


def test_results_sorted_and_verified():
    n = G(5, 2)
    sols = brute_force(G, n, 3, 400, cap=None)
    assert sols
    keys = [(max(x.norm() for x in s.dens), [(x.norm(), x.a, x.b) for x in s.dens]) for s in sols]
    assert keys == sorted(keys)
    assert all(verify(G, n, s) for s in sols)
    assert len(brute_force(G, n, 3, 400)) == min(16, len(sols))


@pytest.mark.parametrize("d", NEGATIVE_D)
def test_exceptional_elements_have_no_small_hits(d):
    # the search has no notion of E_d; it simply finds nothing for these inputs
    R = make_ring(d)
    for x in elements_up_to_norm(R, 5, lower=1):
        if R.is_exceptional(x):
            for k in (1, 2, 3):
                assert brute_force(R, x, k, 200) == []


def test_kernel_and_python_paths_agree():
    R = make_ring(-7)
    n = R(5, 3)
    a = [str(s) for s in brute_force(R, n, 3, 3000, cap=None)]
    b = [str(s) for s in brute_force(R, n, 3, 3000, cap=None, use_kernel=False)]
    assert a == b and a


def test_big_coordinates_fall_back():
    R = make_ring(-2)
    b, c = R(1, 1), R(10**15, 3)
    P, Q = b + c, b * c  # 1/b + 1/c = P/Q
    assert not _kernels.fits_int64(P.key(), Q.key(), *R.omega_sq_coeffs, 10)
    pairs = _solve_pairs(P, Q, 1, 10)
    assert (b, c) in pairs
    assert all((x + y) * Q == x * y * P for x, y in pairs)


def test_monotone_in_bound():
    n = G(4, 3)
    small = {str(s) for s in brute_force(G, n, 3, 200, cap=None)}
    large = {str(s) for s in brute_force(G, n, 3, 800, cap=None)}
    assert small <= large


def test_bad_arguments():
    with pytest.raises(RingError):
        brute_force(make_ring(2), make_ring(2).one, 2, 10)
    with pytest.raises(RingError):
        brute_force(make_ring(-2), make_ring(-2)(5), 3, 10, cone_only=True)
    with pytest.raises(ValueError):
        brute_force(G, G(3), 4, 10)
    with pytest.raises(ValueError):
        brute_force(G, G.zero, 2, 10)


def test_find_any():
    assert find_any(G, G(2), 10, cone_only=True) is not None
    assert find_any(G, G(2, 1), 1, cone_only=True) is None


def test_scan_theorem_small():
    rep = scan_theorem(make_ring(-11), 5)
    assert rep.failures == []
    assert sorted(x.key() for x in rep.exceptional_hits) == sorted(
        x.key() for x in elements_up_to_norm(make_ring(-11), 5, lower=1) if x not in (2, -2)
    )
    assert rep.decomposed == 2 and rep.consistent
    rep = scan_theorem(make_ring(-3), 1)
    assert rep.decomposed == 0 and len(rep.exceptional_hits) == 6


def test_scan_jobs_independent(monkeypatch):
    monkeypatch.delenv("QUADEGYPT_MAX_WORKERS", raising=False)
    R = make_ring(-7)
    a = scan_theorem(R, 300, jobs=1).to_jsonl()
    b = scan_theorem(R, 300, jobs=3).to_jsonl()
    assert a == b
    c = scan_conjecture(20, 500, jobs=1, keep_witnesses=True).to_jsonl(emit_all=True)
    d = scan_conjecture(20, 500, jobs=2, keep_witnesses=True).to_jsonl(emit_all=True)
    assert c == d


def test_scan_records():
    rep = scan_conjecture(10, 200, keep_witnesses=True)
    recs = [json.loads(line) for line in rep.to_jsonl(emit_all=True).splitlines()]
    assert recs[0]["record"] == "header" and recs[0]["reading"] == CONE_READING
    assert recs[-1]["record"] == "summary"
    assert recs[-1]["attempted"] == len(conjecture_domain(10))
    body = recs[1:-1]
    assert all(r["record"] in ("decomposed", "open") for r in body)
    assert len(body) == recs[-1]["attempted"]


def test_conjecture_domain():
    keys = {x.key() for x in conjecture_domain(10)}
    assert (2, 0) in keys
    assert not keys & {(0, 0), (1, 0), (0, 1), (1, 1)}
    assert all(a >= 0 and b >= 0 for a, b in keys)


def test_scan_rejects_positive_d():
    with pytest.raises(RingError):
        scan_theorem(make_ring(2), 10)


def test_max_workers(monkeypatch):
    monkeypatch.setenv("QUADEGYPT_MAX_WORKERS", "2")
    assert max_workers(8) == 2
    monkeypatch.delenv("QUADEGYPT_MAX_WORKERS")
    assert max_workers(8) == 8
    assert max_workers(0) == 1


def test_engine_output_found_by_oracle():
    R = make_ring(-11)
    n = R(9, 4)
    eng = decompose(R, n)
    key = lambda x: (x.norm(), x.a, x.b)
    target = tuple(sorted((t.sign * t.den for t in eng.terms), key=key))
    bound = max(x.norm() for x in target)
    assert target in set(iter_solutions(R, n, len(target), bound))

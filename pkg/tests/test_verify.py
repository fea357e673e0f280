import pytest

from quadegypt.decomp import Decomposition, UnitFraction
from quadegypt.ring import QuadRat, RingError, make_ring
from quadegypt.verify import (
    MalformedDecompositionError,
    check_conjecture,
    in_cone,
    rational_sum,
    verify,
    verify_rational,
)

G = make_ring(-1)
w = G.w


def dec(*dens):
    return Decomposition.of("t", *((1, x) for x in dens))


T_1P2W = dec(w, 1 + w, 3 + w)
T_3PW_MIXED = dec(1 + w, G(2), 4 - 2 * w)
T_3PW_CONE = dec(G.one, 1 + 3 * w, 5 + 5 * w)


def test_gaussian_identities():
    assert verify(G, 1 + 2 * w, T_1P2W)
    assert verify(G, 3 + w, T_3PW_MIXED)
    assert verify(G, 3 + w, T_3PW_CONE)
    assert not verify(G, 3 + w, dec(G(1), G(2), G(3)))


def test_both_routes_agree():
    for n, d in ((1 + 2 * w, T_1P2W), (3 + w, T_3PW_MIXED), (3 + w, T_3PW_CONE), (3 + w, dec(G(1), G(2), G(3)))):
        assert verify(G, n, d) == verify_rational(G, n, d)
    assert rational_sum(G, T_1P2W) == QuadRat(G(4), 1 + 2 * w)


def test_d69_pair():
    R = make_ring(69)
    assert verify(R, R.one, dec(R(1710, 468), R(2178, -468)))


def test_signed_terms():
    R = make_ring(-3)
    d = Decomposition.of("t", (1, R.one), (-1, R(5)))
    assert verify(R, R(5), d)
    assert not verify(R, R(5), Decomposition.of("t", (1, R.one), (1, R(5))))


def test_malformed():
    with pytest.raises(MalformedDecompositionError):
        verify(G, G.zero, T_1P2W)
    bad = Decomposition.__new__(Decomposition)
    object.__setattr__(bad, "terms", (UnitFraction.__new__(UnitFraction),))
    object.__setattr__(bad.terms[0], "sign", 1)
    object.__setattr__(bad.terms[0], "den", G.zero)
    object.__setattr__(bad, "recipe_tag", "t")
    with pytest.raises(MalformedDecompositionError):
        verify(G, G.one, bad)
    with pytest.raises(RingError):
        verify(make_ring(-2), make_ring(-2)(3), T_1P2W)


def test_invariant_under_permutation_and_units():
    n = 3 + w
    terms = list(T_3PW_CONE.terms)
    assert verify(G, n, Decomposition(tuple(reversed(terms)), "t"))
    for u in G.units:
        assert verify(G, u * n, T_3PW_CONE.scaled(u))


def test_cone():
    assert in_cone(3 + w)
    assert in_cone(-1 - 2 * w)
    assert not in_cone(1 - w)
    assert in_cone(G.zero)
    with pytest.raises(RingError):
        in_cone(make_ring(-2).one)


def test_check_conjecture():
    rep = check_conjecture(1 + 2 * w, T_1P2W)
    assert rep.in_domain and rep.terms_ok and rep.sum_ok and rep.satisfied
    rep = check_conjecture(3 + w, T_3PW_MIXED)
    assert rep.sum_ok and not rep.terms_ok and not rep.satisfied
    assert not check_conjecture(G.one, dec(G(2), G(4), G(4))).in_domain
    assert not check_conjecture(1 + w, T_1P2W).in_domain

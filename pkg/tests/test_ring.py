import pytest

from quadegypt.ring import (
    NEGATIVE_D,
    OmegaKind,
    QuadRat,
    RingError,
    associates,
    canonical_associate,
    div4,
    elements_up_to_norm,
    euclid_divmod,
    exact_div,
    format_element,
    int_rem_divmod,
    make_ring,
    parse_element,
)


@pytest.fixture(params=NEGATIVE_D)
def ring(request):
    return make_ring(request.param)


def test_gaussian_ring_shape():
    R = make_ring(-1)
    assert R.omega_kind is OmegaKind.SQRT
    assert R.omega_sq_coeffs == (-1, 0)
    assert R(3, 4).norm() == 25
    assert set(u.key() for u in R.units) == {(1, 0), (-1, 0), (0, 1), (0, -1)}


def test_d_minus_11_shape():
    R = make_ring(-11)
    assert R.omega_kind is OmegaKind.HALF_PLUS_SQRT
    assert R.w * R.w == R(-3, 1)
    a, b = 5, -3
    assert R(a, b).norm() == a * a + a * b + 3 * b * b


@pytest.mark.parametrize(
    "d,form",
    [(-1, (1, 0, 1)), (-2, (1, 0, 2)), (-3, (1, 1, 1)), (-7, (1, 1, 2)), (-11, (1, 1, 3))],
)
def test_norm_forms(d, form):
    assert make_ring(d).norm_coeffs == form


def test_real_ring_d_2_mod_4():
    R = make_ring(6)
    assert R.omega_kind is OmegaKind.SQRT
    assert R(1, 1).norm() == -5
    assert R.units == ()


@pytest.mark.parametrize("d", [12, 0, 1, -4, 18])
def test_make_ring_rejects(d):
    with pytest.raises(RingError):
        make_ring(d)


def test_units_and_two_divisors():
    assert [str(u) for u in make_ring(-3).units] == ["1", "-1", "w", "-w", "-1+w", "1-w"]
    assert [str(x) for x in make_ring(-1).two_divisors] == ["1+w"]
    assert [str(x) for x in make_ring(-2).two_divisors] == ["w"]
    assert [str(x) for x in make_ring(-7).two_divisors] == ["w", "1-w"]
    assert make_ring(-3).two_is_prime and make_ring(-11).two_is_prime


def test_units_closed_under_negation(ring):
    keys = {u.key() for u in ring.units}
    assert all((-u).key() in keys for u in ring.units)
    assert all(abs(u.norm()) == 1 for u in ring.units)


def test_small_products():
    R = make_ring(-1)
    assert (1 + R.w) * (1 - R.w) == 2
    assert make_ring(-3).w ** 2 == make_ring(-3)(-1, 1)
    assert (1 - 2 * R.w) * R.w == R(2, 1)


def test_conj():
    assert make_ring(-2)(-1, 2).conj() == make_ring(-2)(-1, -2)
    R5 = make_ring(5)
    assert R5(-3, 2).conj() == R5(-1, -2)
    assert R5(5).conj() == 5


def test_norm_examples():
    assert make_ring(-1)(1, 2).norm() == 5
    assert make_ring(-11)(1, 2).norm() == 15
    assert make_ring(-7).zero.norm() == 0


def test_exceptional_sets():
    E = {d: sorted(x.key() for x in elements_up_to_norm(make_ring(d), 6, lower=1) if make_ring(d).is_exceptional(x)) for d in NEGATIVE_D}
    assert len(E[-1]) == 8  # +-1, +-w, +-1+-w
    assert len(E[-2]) == 8
    assert len(E[-3]) == 6
    assert len(E[-7]) == 6
    assert (2, 0) not in E[-11] and (-2, 0) not in E[-11]
    assert len(E[-11]) == 10


def test_div4_examples():
    R = make_ring(-1)
    assert div4(R(7, 2)) == (R(2, 0), R(-1, 2))
    assert div4(R(-1, 2)) == (R.zero, R(-1, 2))
    assert div4(R(4)) == (R.one, R.zero)


def test_div4_sixteen_classes(ring):
    rems = {div4(ring(a, b))[1].key() for a in range(-8, 8) for b in range(-8, 8)}
    assert len(rems) == 16
    assert all(a in (-1, 0, 1, 2) and b in (-1, 0, 1, 2) for a, b in rems)


def test_euclid_examples():
    R = make_ring(-1)
    x = R(3, 5)
    assert euclid_divmod(x, x) == (R.one, R.zero)
    assert euclid_divmod(R(5), R(1, 2)) == (R(1, -2), R.zero)
    for x in elements_up_to_norm(R, 100):
        q, r = euclid_divmod(x, R(2))
        assert x == 2 * q + r and r.norm() < 4


def test_euclid_errors():
    R = make_ring(-1)
    with pytest.raises(ZeroDivisionError):
        euclid_divmod(R(3), R.zero)
    with pytest.raises(RingError):
        euclid_divmod(make_ring(-5)(3), make_ring(-5)(2))


def test_int_rem_examples():
    R = make_ring(-1)
    n = R(1, -2)
    assert int_rem_divmod(n, n) == (R.one, 0)
    for x in elements_up_to_norm(R, 60):
        q, r = int_rem_divmod(x, n)
        assert -2 <= r <= 2 and x == n * q + r
    # the unique window solution, found by enumerating q directly
    R11 = make_ring(-11)
    assert int_rem_divmod(R11(7, 3), R11(1, 2)) == (R11(3, -1), -2)


@pytest.mark.parametrize("d,n", [(-1, (1, 1)), (-1, (3, 0)), (-2, (1, 0)), (-11, (3, 0))])
def test_int_rem_preconditions(d, n):
    R = make_ring(d)
    with pytest.raises(ValueError):
        int_rem_divmod(R(5, 1), R(*n))


def test_associates():
    R = make_ring(-1)
    assert {x.key() for x in associates(R.one)} == {(1, 0), (-1, 0), (0, 1), (0, -1)}
    assert len(set(x.key() for x in associates(-(1 - 2 * R.w)))) == 4
    x = R(3, -7)
    c, u = canonical_associate(x)
    assert u * x == c
    assert canonical_associate(c)[0] == c


def test_exact_div():
    R = make_ring(-7)
    assert exact_div(R(3, 1) * R(2, -5), R(2, -5)) == R(3, 1)
    with pytest.raises(ArithmeticError):
        exact_div(R(3), R(2))


@pytest.mark.parametrize(
    "text,key",
    [("3", (3, 0)), ("1+2*w", (1, 2)), ("1 - 2*w", (1, -2)), ("w", (0, 1)), ("-2*w", (0, -2)), ("(3+w)", (3, 1)), ("-1-w", (-1, -1))],
)
def test_parse(text, key):
    assert parse_element(text, make_ring(-1)).key() == key


@pytest.mark.parametrize("bad", ["", "1+", "x", "1+2*w+", "*w", "1 2"])
def test_parse_rejects(bad):
    with pytest.raises(ValueError):
        parse_element(bad, make_ring(-1))


def test_format_round_trip(ring):
    for x in elements_up_to_norm(ring, 40):
        s = format_element(x)
        assert parse_element(s, ring) == x
        assert format_element(parse_element(s, ring)) == s


def test_quadrat():
    R = make_ring(-3)
    a = QuadRat(R(1), R(1, 1))
    assert a * QuadRat(R(1, 1)) == 1
    assert QuadRat(R(2), R(4)) == QuadRat(R(1), R(2))
    assert QuadRat(R(3, 1), R(2, -1)) + QuadRat(R(1)) == QuadRat(R(3, 1) + R(2, -1), R(2, -1))
    with pytest.raises(ZeroDivisionError):
        QuadRat(R(1), R.zero)


def test_mixed_rings_rejected():
    with pytest.raises(RingError):
        make_ring(-1)(1, 1) + make_ring(-2)(1, 1)

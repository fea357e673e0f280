import numpy as np
import pytest

from quadegypt import _kernels
from quadegypt.ring import NEGATIVE_D, make_ring

CASES = [
    ((4, 0), (7, 2), 1, 400),
    ((3, 1), (10, 20), 1, 3000),
    ((1, -1), (40, 17), 5, 8000),
    ((2, 3), (-31, 12), 1, 5000),
]


def _rows(arrs):
    return sorted(zip(*(a.tolist() for a in arrs)))


@pytest.mark.parametrize("d", NEGATIVE_D)
@pytest.mark.parametrize("case", CASES)
def test_backends_agree(d, case):
    P, Q, lo, hi = case
    p, q = make_ring(d).omega_sq_coeffs
    a = _kernels.solve_annulus_numpy(P, Q, p, q, lo, hi)
    b = _kernels.solve_annulus_numba(P, Q, p, q, lo, hi)
    assert _rows(a) == _rows(b)


@pytest.mark.parametrize("d", NEGATIVE_D)
def test_solutions_are_exact(d):
    R = make_ring(d)
    p, q = R.omega_sq_coeffs
    P, Q = (4, 0), (9, 4)
    for ba, bb, ca, cb in _rows(_kernels.solve_annulus(P, Q, p, q, 1, 500)):
        b, c = R(ba, bb), R(ca, cb)
        assert 1 <= b.norm() <= 500
        # 1/b + 1/c == P/Q
        assert (b + c) * R(*Q) == b * c * R(*P)


def test_every_lattice_point_considered():
    R = make_ring(-1)
    p, q = R.omega_sq_coeffs
    # with Q = 0 every b with P*b != 0 gives c = 0: counts all lattice points in the annulus
    ba, bb, _, _ = _kernels.solve_annulus_numpy((1, 0), (0, 0), p, q, 1, 50)
    expect = sum(1 for a in range(-8, 9) for b in range(-8, 9) if 1 <= a * a + b * b <= 50)
    assert len(ba) == expect
    ba2, _, _, _ = _kernels.solve_annulus_numba((1, 0), (0, 0), p, q, 1, 50)
    assert len(ba2) == expect


def test_numba_grows_buffer():
    R = make_ring(-1)
    p, q = R.omega_sq_coeffs
    out = _kernels.solve_annulus_numba((1, 0), (0, 0), p, q, 1, 2000)
    assert len(out[0]) > 64


def test_backend_flag(monkeypatch):
    monkeypatch.setenv("QUADEGYPT_NUMBA", "0")
    assert _kernels.backend() == "numpy"
    monkeypatch.setenv("QUADEGYPT_NUMBA", "1")
    assert _kernels.backend() == ("numba" if _kernels.HAVE_NUMBA else "numpy")


def test_fits_int64():
    assert _kernels.fits_int64((4, 0), (7, 2), -1, 0, 1000)
    assert not _kernels.fits_int64((4, 0), (10**15, 2), -1, 0, 10**6)


def test_empty_annulus():
    out = _kernels.solve_annulus_numpy((4, 0), (7, 2), -1, 0, 5, 4)
    assert all(len(a) == 0 for a in out)
    assert all(a.dtype == np.int64 for a in out)

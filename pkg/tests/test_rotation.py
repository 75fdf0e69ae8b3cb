from fractions import Fraction

import numpy as np
import pytest

from gelltool.rotation import (
    PROJECTION_TOL,
    RotationError,
    bump_profile,
    clock_shift,
    rieffel_projection,
    rotation_isomorphic,
)


@pytest.mark.parametrize("p, q", [(1, 2), (2, 5), (3, 8)])
def test_clock_shift_relation(p, q):
    pair = clock_shift(p, q)
    assert pair.relation_residual() < 1e-12
    u, v = pair.U, pair.V
    assert np.allclose(v @ u, pair.omega * u @ v)
    assert np.allclose(u @ u.conj().T, np.eye(q))
    assert np.allclose(np.linalg.matrix_power(v, q), np.eye(q))


def test_bump_profile_identity():
    theta, eps = Fraction(2, 7), Fraction(1, 7)
    for k in range(50):
        t = Fraction(k, 50)
        f, g2 = bump_profile(theta, eps, t)
        assert 0 <= f <= 1 and g2 >= 0
        # f(t) + f(t + θ) = 1 on the overlap of the ramps
        if theta <= t <= theta + eps:
            f_lo, _ = bump_profile(theta, eps, t - theta)
            assert f_lo + f == 1
            assert g2 == f - f * f


@pytest.mark.parametrize("p, q, eps", [(1, 4, Fraction(1, 4)), (2, 7, Fraction(1, 7)),
                                       (3, 8, Fraction(1, 8)), (3, 10, Fraction(1, 5))])
def test_rieffel_projection(p, q, eps):
    res = rieffel_projection(p, q, eps)
    assert res.projection_residual <= PROJECTION_TOL
    assert res.selfadjoint_residual <= 1e-12
    assert abs(res.trace - p / q) <= 1e-12
    assert res.spectrum_gap <= 1e-6
    assert round(np.real(np.trace(res.P))) == p
    assert res.record()["trace_exact"] == f"{p}/{q}"


@pytest.mark.parametrize("p, q, eps", [(3, 6, Fraction(1, 6)), (0, 3, Fraction(1, 3)),
                                       (1, 4, Fraction(1, 2)), (1, 4, Fraction(1, 8))])
def test_rieffel_rejects(p, q, eps):
    with pytest.raises(RotationError):
        rieffel_projection(p, q, eps)


def test_rotation_isomorphic_truth_table():
    table = {(Fraction(1, 3), Fraction(2, 3)): True, (Fraction(1, 3), Fraction(1, 3)): True,
             (Fraction(1, 3), Fraction(1, 4)): False, (0, 1): True}
    for (a, b), want in table.items():
        assert rotation_isomorphic(a, b) is want
        assert rotation_isomorphic(b, a) is want
    with pytest.raises(RotationError):
        rotation_isomorphic(Fraction(3, 2), 0)


def test_rieffel_nontrivial_off_diagonal():
    # ε > 1/q puts interior grid points on the ramp, so g(U) is not zero
    res = rieffel_projection(5, 16, Fraction(1, 4))
    assert res.convention == "V*"
    assert np.abs(res.P - np.diag(np.diag(res.P))).max() > 0.1
    assert res.projection_residual <= PROJECTION_TOL

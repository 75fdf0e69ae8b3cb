import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from gelltool.errors import DimensionError, SymmetryError
from gelltool.exact import Matrix, determinant, pfaffian
from gelltool.twist import (
    THETA,
    SkewForm,
    ThetaLinear,
    cocycle,
    cocycle_identity_check,
    pfaffian_profile,
    restricted_form,
)
from oracles import pfaffian_matchings

FIFTH = SkewForm.standard(Fraction(1, 5))


@st.composite
def forms(draw, max_d=5):
    d = draw(st.integers(1, max_d))
    n = d * (d - 1) // 2
    entries = draw(st.lists(st.fractions(max_denominator=7).filter(lambda f: abs(f) < 10),
                            min_size=n, max_size=n))
    return SkewForm.from_upper(d, entries)


def vectors(d):
    return st.lists(st.integers(-5, 5), min_size=d, max_size=d)


def test_cocycle_examples():
    assert cocycle(SkewForm.zero(3), [1, 2, 3], [4, 5, 6]).r == 0
    assert cocycle(FIFTH, [3, -2], [3, -2]).r == 0
    assert cocycle(FIFTH, [1, 0], [0, 1]).r == Fraction(1, 5)
    assert cocycle(FIFTH, [0, 1], [1, 0]).r == Fraction(9, 5)


def test_cocycle_length_mismatch():
    with pytest.raises(DimensionError):
        cocycle(FIFTH, [1], [0, 1])


def test_cocycle_identity_examples():
    assert cocycle_identity_check(SkewForm.zero(2), [1, 2], [3, 4], [5, 6])
    assert cocycle_identity_check(FIFTH, [0, 0], [3, 4], [5, 6])


def test_cocycle_identity_random():
    rng = random.Random(5)
    for _ in range(100):
        d = rng.randint(1, 5)
        theta = SkewForm.from_upper(d, [Fraction(rng.randint(-9, 9), rng.randint(1, 9))
                                        for _ in range(d * (d - 1) // 2)])
        m, n, k = ([rng.randint(-6, 6) for _ in range(d)] for _ in range(3))
        assert cocycle_identity_check(theta, m, n, k)


@given(st.data())
def test_cocycle_antisymmetric_and_bilinear(data):
    theta = data.draw(forms())
    d = theta.d
    m, n, k = (data.draw(vectors(d)) for _ in range(3))
    assert (cocycle(theta, m, n).r + cocycle(theta, n, m).r) % 2 == 0
    mk = [a + b for a, b in zip(m, k)]
    assert cocycle(theta, mk, n) == cocycle(theta, m, n) + cocycle(theta, k, n)


def test_profile_examples():
    zero = pfaffian_profile(SkewForm.zero(4))
    assert zero[()] == 1 and all(v == 0 for key, v in zero.items() if key)
    assert pfaffian_profile(FIFTH) == {(): 1, (1, 2): Fraction(1, 5)}
    four = pfaffian_profile(SkewForm.from_upper(4, [1, 2, 3, 4, 5, 6]))
    assert [four[k] for k in [(1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4)]] == [1, 2, 3, 4, 5, 6]
    full = SkewForm.from_upper(4, [1, 2, 3, 4, 5, 6]).matrix
    assert four[(1, 2, 3, 4)] == 8 == pfaffian_matchings(full.tolist())


def test_profile_dimension_bound():
    with pytest.raises(DimensionError):
        pfaffian_profile(SkewForm.zero(9))


def test_restricted_form_examples():
    assert restricted_form(FIFTH, Matrix.identity(2)) == FIFTH
    r = restricted_form(FIFTH, Matrix.diag(2, 3))
    assert r == SkewForm.standard(Fraction(6, 5))
    assert pfaffian(r.matrix) == determinant(Matrix.diag(2, 3)) * pfaffian(FIFTH.matrix)
    swap = Matrix([[0, 1], [1, 0]])
    assert pfaffian(restricted_form(FIFTH, swap).matrix) == -Fraction(1, 5)
    with pytest.raises(DimensionError):
        restricted_form(FIFTH, Matrix([[1, 2], [2, 4]]))


@given(st.data())
def test_restricted_full_pfaffian(data):
    theta = data.draw(forms(max_d=4))
    d = theta.d
    b = Matrix(data.draw(st.lists(st.lists(st.integers(-3, 3), min_size=d, max_size=d), min_size=d, max_size=d)))
    if determinant(b) == 0:
        return
    top = tuple(range(1, d + 1))
    prof = pfaffian_profile(restricted_form(theta, b))
    if d % 2 == 0:
        assert prof[top] == determinant(b) * pfaffian_profile(theta)[top]


def test_symbolic_mode():
    sym = SkewForm.symbolic()
    assert sym.is_symbolic
    assert pfaffian_profile(sym) == {(): 1, (1, 2): THETA}
    r = restricted_form(sym, Matrix.diag(2, 3))
    assert pfaffian_profile(r)[(1, 2)] == ThetaLinear(0, 6)
    with pytest.raises(TypeError):
        cocycle(sym, [1, 0], [0, 1])
    with pytest.raises(ArithmeticError):
        THETA * THETA


def test_theta_linear_arithmetic():
    x = ThetaLinear(1, 2)
    assert x + 1 == ThetaLinear(2, 2)
    assert 3 * x == ThetaLinear(3, 6)
    assert (x - x) == 0
    assert x / 2 == ThetaLinear(Fraction(1, 2), 1)
    assert str(ThetaLinear(Fraction(1, 6), 0)) == "1/6"
    assert str(THETA) == "θ"


def test_non_skew_rejected():
    with pytest.raises(SymmetryError):
        SkewForm(2, Matrix([[0, 1], [1, 0]]))

"""The compiled core and the pure-Python fallback must agree exactly."""

import random

import pytest

from gelltool import _fallback, kernels

core = pytest.importorskip("gelltool._core")


def random_matrix(rng, m, n, bits):
    return [[rng.randint(-(1 << bits), 1 << bits) for _ in range(n)] for _ in range(m)]


def test_backend_reports_compiled():
    assert kernels.BACKEND == "compiled"


@pytest.mark.parametrize("bits", [3, 20, 40, 70, 200])
def test_det_parity(bits):
    rng = random.Random(bits)
    for _ in range(60):
        n = rng.randint(0, 7)
        a = random_matrix(rng, n, n, bits)
        assert core.det_int(a) == _fallback.det_int(a)


def test_det_fast_path_boundary():
    # entries near 2**31 in a 4x4 keep the Hadamard bound under 2**62 only barely
    big = (1 << 31) - 1
    a = [[big if i == j else big - 1 for j in range(4)] for i in range(4)]
    assert core.det_int(a) == _fallback.det_int(a)
    a = [[0, 1], [1, 0]]
    assert core.det_int(a) == -1


def test_det_singular():
    assert core.det_int([[1, 2], [2, 4]]) == 0 == _fallback.det_int([[1, 2], [2, 4]])
    assert core.det_int([[0, 0], [0, 1]]) == 0


def test_snf_parity():
    rng = random.Random(7)
    for _ in range(200):
        m, n = rng.randint(1, 6), rng.randint(1, 6)
        a = random_matrix(rng, m, n, 4)
        assert core.snf(a) == _fallback.snf(a)


def test_matmul_and_minors_parity():
    rng = random.Random(11)
    from itertools import combinations

    for _ in range(50):
        n = rng.randint(1, 5)
        a, b = random_matrix(rng, n, n, 30), random_matrix(rng, n, n, 30)
        assert core.matmul(a, b) == _fallback.matmul(a, b)
        k = rng.randint(0, n)
        idx = list(combinations(range(n), k))
        assert core.minors(a, idx, idx) == _fallback.minors(a, idx, idx)

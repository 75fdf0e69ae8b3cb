"""Acceptance suite: one PASS/FAIL line per criterion, at the stated tolerances."""

import os
import random
import subprocess
import sys
import time
from fractions import Fraction
from pathlib import Path

import pytest

from gelltool.cli import compare_obstructions
from gelltool.exact import (
    Matrix,
    SubgroupOfQ,
    determinant,
    exterior_power,
    invariant_factors,
    pfaffian,
)
from gelltool.ktheory import check_basic_certificate, inclusion_certificate, order_unit, transfer_class
from gelltool.lattice import OdometerSpec, cosets, cylinder_measure, index_at
from gelltool.pairing import (
    gap_label_group,
    shift_coinvariants,
    trace_range_d2,
    trace_twisted,
    trace_untwisted,
    twisted_label_group_via_restriction,
    verify_gap_labelling,
)
from gelltool.report import load_spec
from gelltool.rotation import rieffel_projection, rotation_isomorphic
from gelltool.twist import SkewForm
from oracles import det_leibniz, invariant_factors_by_minors, pfaffian_matchings

pytestmark = pytest.mark.acceptance

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"


@pytest.fixture
def report(capsys):
    def emit(number, ok, detail):
        with capsys.disabled():
            print(f"\n[criterion {number:2d}] {'PASS' if ok else 'FAIL'}  {detail}")
        assert ok, detail
    return emit


def random_form(rng, d, max_den=7):
    return SkewForm.from_upper(d, [Fraction(rng.randint(-9, 9), rng.randint(1, max_den))
                                   for _ in range(d * (d - 1) // 2)])


def random_step(rng, d, max_det=6):
    while True:
        m = Matrix([[rng.randint(-2, 2) for _ in range(d)] for _ in range(d)])
        if 1 <= abs(determinant(m)) <= max_det:
            return m


def random_skew(rng, n):
    rows = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            x = Fraction(rng.randint(-9, 9), rng.randint(1, 6))
            rows[i][j], rows[j][i] = x, -x
    return Matrix(rows)


def test_01_gap_labelling_two_adic(report):
    spec = OdometerSpec(1, (), (Matrix([[2]]),))
    start = time.perf_counter()
    ok = all(
        (r := verify_gap_labelling(spec, depth)).equal
        and r.lhs.rational == r.rhs == SubgroupOfQ(Fraction(1, 2 ** depth))
        for depth in range(9)
    )
    elapsed = time.perf_counter() - start
    report(1, ok and elapsed < 1.0, f"2-adic depths 0..8 equal (1/2^n)Z, {elapsed:.3f}s (< 1s)")


def test_02_gap_labelling_diag23(report):
    spec = OdometerSpec(2, (), (Matrix.diag(2, 3),))
    start = time.perf_counter()
    ok = all(
        (r := verify_gap_labelling(spec, depth)).equal
        and r.lhs.rational == r.rhs == SubgroupOfQ(Fraction(1, 6 ** depth))
        for depth in range(6)
    )
    elapsed = time.perf_counter() - start
    report(2, ok and elapsed < 5.0, f"diag(2,3) depths 0..5 equal (1/6^n)Z, {elapsed:.3f}s (< 5s)")


def test_03_order_unit_normalisation(report):
    rng = random.Random(3)
    bad = []
    for i in range(20):
        d = (1, 2, 3, 4)[i % 4]
        spec = OdometerSpec(d, (random_step(rng, d),))
        unit = order_unit(spec)
        theta = random_form(rng, d)
        if trace_untwisted(spec, unit) != 1 or trace_twisted(spec, theta, unit) != 1:
            bad.append(i)
    report(3, not bad, f"20 random forms, d in 1..4, tau(1) = tau_Theta(1) = 1 (failures: {bad})")


def test_04_twisted_label_range(report):
    spec = OdometerSpec.trivial(2)
    theta = SkewForm.standard(Fraction(1, 5))
    a = gap_label_group(spec, theta, 0)
    b = twisted_label_group_via_restriction(spec, theta, 0)
    c = trace_range_d2(Fraction(1, 5))
    ok = a == b == c and a.rational == SubgroupOfQ(Fraction(1, 5))
    report(4, ok, f"Theta=(1/5)J: route A {a}, route B {b}, Z+thetaZ {c}")


def test_05_dual_route_stress(report):
    rng = random.Random(5)
    bad = 0
    for d in (2, 4):
        for _ in range(50):
            spec = OdometerSpec(d, tuple(random_step(rng, d) for _ in range(rng.randint(0, 3))))
            theta = random_form(rng, d)
            depth = spec.depth
            if gap_label_group(spec, theta, depth) != twisted_label_group_via_restriction(spec, theta, depth):
                bad += 1
    report(5, bad == 0, f"d in {{2,4}}, 50 forms each, |det M| <= 6, depth <= 3: {bad} disagreements")


def test_06_pfaffian(report):
    rng = random.Random(6)
    bad_sq = bad_cong = 0
    for i in range(200):
        s = random_skew(rng, 2 + i % 7)
        pf = pfaffian(s)
        if pf * pf != determinant(s):
            bad_sq += 1
        if s.shape[0] <= 6 and pf != pfaffian_matchings(s.tolist()):
            bad_sq += 1
    for i in range(100):
        n = 2 * (1 + i % 4)
        s = random_skew(rng, n)
        b = Matrix([[rng.randint(-3, 3) for _ in range(n)] for _ in range(n)])
        if pfaffian(b.T @ s @ b) != determinant(b) * pfaffian(s):
            bad_cong += 1
    report(6, bad_sq == bad_cong == 0,
           f"Pf^2 = det on 200 forms ({bad_sq} bad), Pf(B^T S B) = det B Pf S on 100 ({bad_cong} bad)")


def test_07_exterior_functoriality(report):
    rng = random.Random(7)
    bad = 0
    for _ in range(200):
        n = rng.randint(1, 5)
        a = Matrix([[rng.randint(-4, 4) for _ in range(n)] for _ in range(n)])
        b = Matrix([[rng.randint(-4, 4) for _ in range(n)] for _ in range(n)])
        for k in range(n + 1):
            if exterior_power(a @ b, k) != exterior_power(a, k) @ exterior_power(b, k):
                bad += 1
        if exterior_power(a, n).tolist() != [[det_leibniz(a.tolist())]]:
            bad += 1
    report(7, bad == 0, f"Lambda^k(AB) = Lambda^k(A) Lambda^k(B), 200 pairs, all k: {bad} failures")


def test_08_transfer_measure(report):
    rng = random.Random(8)
    specs = [OdometerSpec(1, (Matrix([[2]]),) * 6), OdometerSpec(1, (Matrix([[3]]), Matrix([[-5]]))),
             OdometerSpec(2, (Matrix.diag(2, 3),) * 2), OdometerSpec(2, (Matrix([[1, 2], [-1, 1]]),) * 2)]
    while len(specs) < 10:
        d = rng.randint(1, 3)
        specs.append(OdometerSpec(d, tuple(random_step(rng, d) for _ in range(3))))
    checked = bad = 0
    for spec in specs:
        for j in range(spec.depth + 1):
            if index_at(spec, j) > 64:
                break
            for c in cosets(spec, j):
                checked += 1
                if trace_untwisted(spec, transfer_class(spec, c)) != cylinder_measure(spec, c):
                    bad += 1
    report(8, bad == 0 and checked > 0, f"tau(transfer(c)) = mu(c) on {checked} cylinders of 10 specs: {bad} bad")


@pytest.mark.parametrize("p, q, eps", [(1, 4, Fraction(1, 4)), (2, 7, Fraction(1, 7)), (3, 8, Fraction(1, 8))])
def test_09_rieffel(report, p, q, eps):
    start = time.perf_counter()
    r = rieffel_projection(p, q, eps)
    elapsed = time.perf_counter() - start
    ok = (r.projection_residual <= 1e-9 and r.selfadjoint_residual <= 1e-12
          and abs(r.trace - p / q) <= 1e-12 and r.spectrum_gap <= 1e-6 and elapsed < 1.0)
    report(9, ok, f"({p},{q},{eps}): |P^2-P|={r.projection_residual:.1e} |P-P*|={r.selfadjoint_residual:.1e} "
                  f"tr={r.trace:.15f} gap={r.spectrum_gap:.1e} {elapsed:.3f}s")


def test_10_kronecker(report):
    table = {(Fraction(1, 3), Fraction(2, 3)): True, (Fraction(1, 3), Fraction(1, 3)): True,
             (Fraction(1, 3), Fraction(1, 4)): False, (Fraction(0), Fraction(1)): True}
    got = {k: rotation_isomorphic(*k) for k in table}
    report(10, got == table, "truth table " + ", ".join(f"({a},{b})->{v}" for (a, b), v in got.items()))


def test_11_obstructions(report):
    a, b = load_spec(FIXTURES / "two_adic.json"), load_spec(FIXTURES / "three_adic.json")
    distinguished, lines = compare_obstructions(a, b, 6)
    fa, fb = load_spec(FIXTURES / "two_adic_finite.json"), load_spec(FIXTURES / "four_adic_finite.json")
    cert = inclusion_certificate(fa.spec, fb.spec, [0, 1, 1, 2, 2])
    verified = check_basic_certificate(fa.spec, fb.spec, cert).ok
    report(11, distinguished and verified,
           f"2-adic vs 3-adic distinguished={distinguished}; [2,2,2,2]->[4,4] certificate verified={verified}")


def test_12_coinvariants(report):
    bad = []
    for q in range(1, 33):
        c = shift_coinvariants(q)
        rows = [[(1 if i == j else 0) - (1 if i == (j + 1) % q else 0) for j in range(q)] for i in range(q)]
        if q <= 8 and invariant_factors_by_minors(rows) != list(invariant_factors(Matrix(rows))):
            bad.append(q)
        if c.rank != 1 or c.torsion:
            bad.append(q)
    report(12, not bad, f"coker(id - shift) on Z^q is Z for q = 1..32 (failures: {bad})")


def test_13_determinism(report, tmp_path):
    fixtures = sorted(p for p in FIXTURES.glob("*.json") if not p.name.startswith("cert_"))
    outputs = []
    for seed in ("1", "4242"):
        env = dict(os.environ, PYTHONHASHSEED=seed)
        run = []
        for f in fixtures:
            proc = subprocess.run([sys.executable, "-m", "gelltool", "gell", str(f), "--out", "-"],
                                  capture_output=True, env=env, check=True)
            run.append(proc.stdout)
        outputs.append(run)
    same = outputs[0] == outputs[1]
    report(13, same, f"{len(fixtures)} fixtures, two runs with different hash seeds byte-identical={same}")

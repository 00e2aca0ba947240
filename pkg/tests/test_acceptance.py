"""The ten acceptance criteria, each at its stated tolerance.

Every criterion records a PASS/FAIL line that the terminal summary prints
(see ``conftest.pytest_terminal_summary``).
"""
import math
import time

import numpy as np
import pytest

from revperim import (
    ContainerError,
    ConvexPolygon,
    DomainError,
    OptimizationConfig,
    UnitDisk,
    brute_force_disk,
    gradient_check,
    lambda_of,
    maximize,
    perturb_triple,
    solve_disk,
    solve_lagrangian,
)
from revperim.disk_solver import lagrangian_objective
from revperim.geometry import disk_area, disk_perimeter

from conftest import ACCEPTANCE, offset_trig, oval_trig, regular_area, square

TAU = 2.0 * math.pi


def record(key, label, ok, detail=""):
    prev_ok, _, prev_detail = ACCEPTANCE.get(key, (True, label, ""))
    details = [d for d in (prev_detail, detail) if d]
    ACCEPTANCE[key] = (prev_ok and ok, label, "; ".join(details))
    print("criterion %d: %s %s" % (key, "PASS" if ok else "FAIL", detail))


def side_count_scan(A):
    """Independent restatement: smallest m >= 3 with 2A <= m sin(2 pi / m)."""
    m = 3
    while 2 * A > m * math.sin(TAU / m) * (1 + 1e-15):
        m += 1
    return m


# -- 1 ------------------------------------------------------------------------

FIG_AREAS = [
    (1.0, 3, False),
    (regular_area(3), 3, True),
    (1.75, 4, False),
    (2.0, 4, True),
    (2.5, 6, False),
    (regular_area(6), 6, True),
    (2.8, 8, False),
    (3.0, 12, True),
    (3.05, 15, False),
]


def test_c01_side_counts():
    worst = 0.0
    ok = True
    for A, m, regular in FIG_AREAS:
        assert side_count_scan(A) == m
        best = math.inf
        for _ in range(20):
            t0 = time.perf_counter()
            sol = solve_disk(A)
            best = min(best, time.perf_counter() - t0)
        worst = max(worst, best)
        ok &= sol.m == m and sol.is_regular == regular
    ok &= worst < 1e-3
    record(1, "side counts 3,3,4,4,6,6,8,12,15", ok, "slowest %.3g ms" % (1e3 * worst))
    assert ok


# -- 2 ------------------------------------------------------------------------

@pytest.mark.parametrize("m, res", [(3, 1e-3), (4, 1e-3), (5, 2e-3)])
def test_c02_oracle_equivalence(m, res):
    rng = np.random.default_rng(100 + m)
    areas = rng.uniform(0.05, regular_area(m) * (1 - 1e-3), 20)
    errs = [abs(brute_force_disk(A, m, res).best_perimeter - solve_disk(A).perimeter) for A in areas]
    ok = max(errs) <= 5 * res
    record(2, "brute force vs closed form", ok, "m=%d max gap %.2g (limit %.0e)" % (m, max(errs), 5 * res))
    assert ok


# -- 3 ------------------------------------------------------------------------

def test_c03_regular_saturation():
    worst = 0.0
    ok = True
    for m in range(3, 41):
        sol = solve_disk(regular_area(m))
        ok &= sol.m == m and sol.is_regular
        worst = max(worst, abs(sol.theta1 - TAU / m))
    ok &= worst <= 1e-10
    record(3, "regular saturation m=3..40", ok, "max |theta1 - 2pi/m| = %.2g" % worst)
    assert ok


# -- 4 ------------------------------------------------------------------------

def test_c04_monotone_perimeter():
    areas = np.sort(np.random.default_rng(4).uniform(0.01, 3.14, 500))
    per = np.array([solve_disk(A).perimeter for A in areas])
    ok = bool(np.all(np.diff(per) > 0.0))
    record(4, "perimeter strictly increasing in area", ok, "min step %.2g" % np.diff(per).min())
    assert ok


# -- 5 ------------------------------------------------------------------------

def test_c05_perturbation():
    rng = np.random.default_rng(5)
    worst_sum = worst_sin = 0.0
    min_gain = math.inf
    done = skipped = 0
    while done < 1000:
        a = rng.uniform(0.1, 1.5)
        b = rng.uniform(a, 2.5)
        c = rng.uniform(b + 0.05, math.pi)
        s = rng.uniform(0.2, 1.0) * min(a, (c - b) / 4) * 0.05
        try:
            out = perturb_triple(a, b, c, s)
        except DomainError:
            # s too large for the sine sum to be bracketed: not admissible
            skipped += 1
            continue
        worst_sum = max(worst_sum, abs((out.a + out.b + out.c) - (a + b + c)))
        worst_sin = max(worst_sin, abs(math.fsum(map(math.sin, (out.a, out.b, out.c)))
                                       - math.fsum(map(math.sin, (a, b, c)))))
        gain = math.fsum(2 * math.cos((u + v) / 4) * math.sin((u - v) / 4)
                         for v, u in zip((a, b, c), (out.a, out.b, out.c)))
        min_gain = min(min_gain, gain)
        done += 1
    ok = worst_sum <= 1e-12 and worst_sin <= 1e-12 and min_gain > 0.0
    record(5, "perturbation keeps sums, raises half-sine sum", ok,
           "sum err %.1g, sine err %.1g, min gain %.2g, %d draws not admissible"
           % (worst_sum, worst_sin, min_gain, skipped))
    assert ok


# -- 6 ------------------------------------------------------------------------

HEXAGON = ConvexPolygon([(1.2, 0.0), (0.6, 0.9), (-0.5, 1.0), (-1.1, 0.1), (-0.7, -0.9), (0.5, -1.0)])


@pytest.mark.parametrize("name, container", [
    ("disk", UnitDisk()), ("offset trig", offset_trig()), ("oval trig", oval_trig()),
    ("square", square()), ("hexagon", HEXAGON),
])
def test_c06_gradients(name, container):
    rep = gradient_check(container, 100, seed=6)
    record(6, "analytic vs finite-difference gradients (500 samples)", rep.passed,
           "%s smooth %.1g corner %.1g (%d near corners)"
           % (name, rep.max_error_smooth, rep.max_error_corner, rep.corner_samples))
    assert rep.passed


# -- 7 ------------------------------------------------------------------------

def test_c07_disk_self_consistency():
    t0 = time.perf_counter()
    ok = True
    parts = []
    for A in (0.5, 1.0, 1.5, 2.0, 2.5, 3.0):
        run = maximize(UnitDisk(), A, 30, OptimizationConfig(restarts=20, seed=0))
        exact = solve_disk(A)
        good = abs(run.perimeter - exact.perimeter) <= 1e-6 and run.pruned.n == exact.m
        ok &= good
        parts.append("A=%g:%d/%d" % (A, run.pruned.n, exact.m))
    elapsed = time.perf_counter() - t0
    ok &= elapsed < 60.0
    record(7, "optimizer reproduces the disk solution", ok, "%s, %.1f s" % (" ".join(parts), elapsed))
    assert ok


# -- 8 ------------------------------------------------------------------------

OFFSET_CASES = [(A, n, m) for A, m in ((1.0, 3), (1.7, 4), (2.0, 5)) for n in (10, 30, 50)]


@pytest.mark.parametrize(
    "A, n, expected",
    [pytest.param(*c, marks=pytest.mark.xfail(strict=True, reason="a six-vertex polygon has larger perimeter"))
     if c[0] == 2.0 else c for c in OFFSET_CASES],
)
def test_c08_offset_container(A, n, expected):
    run = maximize(offset_trig(), A, n, OptimizationConfig(restarts=20, seed=0))
    ok = run.pruned.n == expected
    record(8, "trig containers give few-vertex polygons", ok,
           "offset A=%g n=%d: %d vertices (expected %d)" % (A, n, run.pruned.n, expected))
    assert ok


@pytest.mark.parametrize("A", [0.5, 1.0, 1.2])
@pytest.mark.parametrize("n", [30, 50])
def test_c08_oval_container(A, n):
    run = maximize(oval_trig(), A, n, OptimizationConfig(restarts=20, seed=0))
    ok = run.pruned.n <= n // 4
    record(8, "trig containers give few-vertex polygons", ok, "oval A=%g n=%d: %d vertices" % (A, n, run.pruned.n))
    assert ok


# -- 9 ------------------------------------------------------------------------

def random_convex_polygon(rng, k):
    while True:
        ang = np.sort(rng.uniform(0.0, TAU, k))
        r = rng.uniform(0.6, 1.4, k)
        try:
            return ConvexPolygon(list(zip(r * np.cos(ang), r * np.sin(ang))))
        except ContainerError:
            continue


def test_c09_vertex_bound():
    rng = np.random.default_rng(2024)
    ok = True
    parts = []
    for i in range(10):
        k = int(rng.integers(3, 9))
        c = random_convex_polygon(rng, k)
        A = rng.uniform(0.1, 0.9) * c.area()
        run = maximize(c, A, 2 * k + 4, OptimizationConfig(restarts=10, seed=i))
        ok &= run.pruned.n <= 2 * k
        parts.append("%d<=%d" % (run.pruned.n, 2 * k))
    record(9, "pruned optimum has at most twice the container's edges", ok, " ".join(parts))
    assert ok


# -- 10 -----------------------------------------------------------------------

def test_c10_lambda_map():
    ok = True
    worst = max(abs(lambda_of(m, TAU / m) - 1 / (2 * math.cos(math.pi / m))) for m in range(3, 11))
    ok &= worst <= 1e-14
    ok &= solve_lagrangian(0.4).kind == "disk" and solve_lagrangian(1.5).kind == "diameter"
    rng = np.random.default_rng(10)
    polys = []
    while len(polys) < 50:
        n = int(rng.integers(3, 12))
        a = rng.dirichlet(np.ones(n)) * TAU
        if a.max() <= math.pi:
            a[-1] = TAU - math.fsum(a[:-1])
            if 0.0 <= a[-1] <= math.pi:
                polys.append((disk_area(a), disk_perimeter(a)))
    margin = math.inf
    for lam in np.sort(rng.uniform(0.5, 1.0, 100)) + 1e-12:
        sol = solve_lagrangian(lam)
        rivals = [lagrangian_objective(lam, math.pi, TAU), -4.0]
        rivals += [lagrangian_objective(lam, ar, pe) for ar, pe in polys]
        margin = min(margin, min(rivals) - sol.objective)
    ok &= margin >= -1e-12
    record(10, "lambda map and Lagrangian minimisers", ok, "endpoint err %.1g, min margin %.2g" % (worst, margin))
    assert ok

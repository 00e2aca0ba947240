import math

import numpy as np
import pytest
from hypothesis import given, strategies as st
from hypothesis.extra import numpy as hnp

from revperim import (
    DegeneracyError,
    DeltaVars,
    DomainError,
    InscribedPolygon,
    OptimizationConfig,
    OptimizationError,
    UnitDisk,
    maximize,
    prune_redundant,
    solve_disk,
)
from revperim.optimizer import area_with_gradient, objective_with_gradient, params_from_x, project_delta
from revperim.refine import refine
from revperim.optimizer import _evaluator

from conftest import offset_trig, oval_trig, square

TAU = 2.0 * math.pi


def test_delta_vars_validation():
    v = DeltaVars(0.5, (1.0, 2.0))
    assert np.allclose(v.params(), [0.5, 1.5, 3.5])
    assert np.allclose(DeltaVars.from_array(v.to_array()).to_array(), v.to_array())
    with pytest.raises(DomainError):
        DeltaVars(-0.1, (1.0,))
    with pytest.raises(DomainError):
        DeltaVars(0.0, (4.0, 3.0))
    with pytest.raises(DomainError):
        DeltaVars(0.0, (1.0, -0.5))


def test_equal_spacing_on_disk():
    n = 9
    v = DeltaVars(0.7, (TAU / n,) * (n - 1))
    per, gp = objective_with_gradient(UnitDisk(), v)
    area, ga = area_with_gradient(UnitDisk(), v)
    assert per == pytest.approx(2 * n * math.sin(math.pi / n), abs=1e-13)
    assert area == pytest.approx(0.5 * n * math.sin(TAU / n), abs=1e-13)
    assert abs(gp[0]) < 1e-12 and abs(ga[0]) < 1e-12


def test_oval_symmetry():
    c = oval_trig()
    v = DeltaVars(0.0, (math.pi / 2,) * 3)
    per, g = objective_with_gradient(c, v)
    assert per == pytest.approx(4 * math.hypot(1.1, 0.9), abs=1e-13)
    # rotating by pi maps the container to itself, so the per-vertex gradient is 2-periodic
    gt = np.append(-np.diff(g), g[-1])
    gt[0] = g[0] - g[1]
    assert gt[0] == pytest.approx(gt[2], abs=1e-13) and gt[1] == pytest.approx(gt[3], abs=1e-13)


def test_collapsed_polygon():
    for c in (UnitDisk(), offset_trig(), square()):
        v = DeltaVars(0.2 * c.period, (0.0,) * 5, c.period)
        assert objective_with_gradient(c, v)[0] == 0.0
        assert area_with_gradient(c, v)[0] == 0.0


raw_x = hnp.arrays(np.float64, st.integers(2, 15), elements=st.floats(-10, 20))


@given(raw_x, st.sampled_from([1.0, TAU]))
def test_projection_feasible_and_idempotent(x, P):
    y = project_delta(x, P)
    assert 0.0 <= y[0] <= P
    assert np.all(y[1:] >= 0.0)
    assert y[1:].sum() <= P
    assert np.array_equal(project_delta(y, P), y)
    DeltaVars.from_array(y, P)


@given(raw_x)
def test_projection_is_nearest_point(x):
    P = TAU
    y = project_delta(x, P)
    rng = np.random.default_rng(0)
    d = np.linalg.norm(x - y)
    for _ in range(20):
        z = project_delta(y + rng.normal(0, 0.5, y.size), P)
        assert np.linalg.norm(x - z) >= d - 1e-9


def test_config_validation():
    with pytest.raises(ValueError):
        OptimizationConfig(restarts=0)
    with pytest.raises(ValueError):
        OptimizationConfig(kkt_tol=0.0)
    with pytest.raises(ValueError):
        OptimizationConfig(seed=-1)


def test_maximize_disk_small():
    run = maximize(UnitDisk(), 1.0, 10, OptimizationConfig(restarts=4, seed=5))
    assert run.perimeter == pytest.approx(solve_disk(1.0).perimeter, abs=1e-6)
    assert run.pruned.n == 3
    assert abs(run.area_residual) <= 1e-9 and run.kkt_residual <= 1e-7
    accepted = [p for p in run.per_restart_perimeters if p is not None]
    assert run.perimeter == max(accepted)
    assert run.records[run.best_index].perimeter == run.perimeter
    assert run.dispersion >= 0.0


def test_maximize_deterministic_and_thread_independent():
    cfg = OptimizationConfig(restarts=4, seed=42)
    a = maximize(offset_trig(), 1.0, 8, cfg)
    b = maximize(offset_trig(), 1.0, 8, OptimizationConfig(restarts=4, seed=42, threads=3))
    assert a.best.params == b.best.params
    assert a.to_json() == b.to_json()


def test_maximize_square_near_full():
    run = maximize(square(), 3.9, 12, OptimizationConfig(restarts=3, seed=1))
    assert run.pruned.n <= 8
    assert run.perimeter <= 8.0 + 1e-9


def test_maximize_domain_errors():
    with pytest.raises(DomainError):
        maximize(UnitDisk(), 1.0, 2)
    with pytest.raises(DomainError):
        maximize(UnitDisk(), 3.2, 10)
    with pytest.raises(DomainError):
        maximize(square(), 0.0, 10)


def test_all_restarts_rejected():
    with pytest.raises(OptimizationError) as info:
        maximize(offset_trig(), 1.7, 20, OptimizationConfig(restarts=2, max_iterations=20, kkt_tol=1e-300))
    assert len(info.value.diagnostics) == 2


def test_prune_midpoint_vertex():
    c = square()
    tri = InscribedPolygon(c, (0.0, 0.25, 0.5))
    with_mid = InscribedPolygon(c, (0.0, 0.125, 0.25, 0.5))
    pruned = prune_redundant(with_mid)
    assert pruned.n == 3
    assert pruned.perimeter() == pytest.approx(tri.perimeter(), abs=1e-12)


def test_prune_embedded_disk_solution():
    sol = solve_disk(1.75)
    t = np.concatenate([[0.0], np.cumsum(sol.angles().angles)[:-1]])
    t = np.sort(np.concatenate([t, [t[1]] * 3, [t[2]] * 2]))
    pruned = prune_redundant(InscribedPolygon(UnitDisk(), tuple(t)))
    assert pruned.n == sol.m
    assert pruned.perimeter() == pytest.approx(sol.perimeter, abs=1e-12)


def test_prune_degenerate():
    with pytest.raises(DegeneracyError):
        prune_redundant(InscribedPolygon(UnitDisk(), (0.0, 0.0, math.pi, math.pi)))


def test_refine_recovers_disk_optimum():
    sol = solve_disk(2.5)
    t = np.concatenate([[0.0], np.cumsum(sol.angles().angles)[:-1]])
    t = np.sort(np.concatenate([t, t[:2]])) + 1e-4 * np.random.default_rng(0).normal(size=t.size + 2)
    t = np.sort(t)
    c = UnitDisk()
    ev = _evaluator(c)
    proj = lambda z: project_delta(z, c.period)
    ref = refine(c, 2.5, t, 1.0, ev, proj, 1e-7)
    assert ref.kkt <= 1e-7 and abs(ref.area_residual) <= 1e-9
    assert InscribedPolygon(c, tuple(ref.params)).perimeter() == pytest.approx(sol.perimeter, abs=1e-9)

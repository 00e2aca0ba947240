"""Numerical perimeter maximisation for polygons inscribed in a general container.

Vertices are boundary parameters ``t_1 <= ... <= t_n``, optimised through the
variables ``(t_1, d_2, ..., d_n)`` with ``d_i = t_i - t_{i-1}``. Feasibility is
``0 <= t_1 <= P``, ``d_i >= 0`` and ``sum d_i <= P`` (``P`` the container's
parameter period), which is kept exactly by Euclidean projection. The area
equality is handled by an augmented Lagrangian whose subproblems are solved by
a nonmonotone spectral projected gradient method. Multiple random restarts are
run and the best accepted one is reported.

Polygon containers have corners where the boundary map is not differentiable;
there the ascent result is refined with each vertex pinned to one container
edge (a smooth box-constrained problem), switching edges while that improves.
"""
from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .errors import DegeneracyError, DomainError, InfeasibleError, OptimizationError
from .geometry import Container, ConvexPolygon, InscribedPolygon
from .refine import refine

THREADS_ENV = "REVPERIM_THREADS"

MAX_OUTER = 40
RHO0 = 10.0
RHO_MAX = 1e8
SPG_HISTORY = 10
COARSE_KKT = 1e-5
SPG_STEP_MIN = 1e-12
SPG_STEP_MAX = 1e12
ARMIJO = 1e-4


@dataclass(frozen=True)
class DeltaVars:
    """First parameter plus the gaps to each following vertex."""

    theta1: float
    deltas: tuple
    period: float = 2.0 * math.pi

    def __post_init__(self):
        d = tuple(float(x) for x in self.deltas)
        object.__setattr__(self, "deltas", d)
        P = self.period
        if not 0.0 <= self.theta1 <= P:
            raise DomainError("theta1 must lie in [0, %g]" % P)
        if any(x < 0.0 for x in d) or math.fsum(d) > P * (1.0 + 1e-12):
            raise DomainError("gaps must be nonnegative with total at most %g" % P)

    @classmethod
    def from_array(cls, x, period=2.0 * math.pi) -> "DeltaVars":
        x = np.asarray(x, float)
        return cls(float(x[0]), tuple(x[1:]), period)

    def to_array(self) -> np.ndarray:
        return np.concatenate([[self.theta1], self.deltas])

    def params(self) -> np.ndarray:
        return params_from_x(self.to_array())


@dataclass(frozen=True)
class OptimizationConfig:
    restarts: int = 20
    seed: int = 0
    max_iterations: int = 5000
    kkt_tol: float = 1e-7
    area_tol: float = 1e-9
    collinearity_tol: float = 1e-7
    threads: int | None = None

    def __post_init__(self):
        if self.restarts < 1:
            raise ValueError("restarts must be at least 1")
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be at least 1")
        if min(self.kkt_tol, self.area_tol, self.collinearity_tol) <= 0.0:
            raise ValueError("tolerances must be positive")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be a 64-bit unsigned integer")


@dataclass
class RestartRecord:
    index: int
    perimeter: float
    area_residual: float
    kkt_residual: float
    iterations: int
    accepted: bool
    message: str = ""
    params: tuple = field(default=(), repr=False)
    multiplier: float = 0.0

    def to_json(self) -> dict:
        finite = lambda v: v if math.isfinite(v) else None
        return {
            "index": self.index,
            "perimeter": finite(self.perimeter),
            "area_residual": finite(self.area_residual),
            "kkt_residual": finite(self.kkt_residual),
            "iterations": self.iterations,
            "accepted": self.accepted,
            "message": self.message,
        }


@dataclass(frozen=True)
class OptimizationRun:
    area: float
    best: InscribedPolygon
    pruned: InscribedPolygon
    perimeter: float
    area_residual: float
    kkt_residual: float
    multiplier: float
    restarts_used: int
    per_restart_perimeters: list
    records: list
    config: OptimizationConfig

    @property
    def best_index(self) -> int:
        return next(r.index for r in self.records if r.accepted and r.params == self.best.params)

    @property
    def dispersion(self) -> float:
        """Spread (max - min) of accepted restart perimeters."""
        vals = [p for p in self.per_restart_perimeters if p is not None]
        return max(vals) - min(vals)

    def to_json(self) -> dict:
        return {
            "container": self.best.container.to_json(),
            "area": self.area,
            "n": self.best.n,
            "perimeter": self.perimeter,
            "area_residual": self.area_residual,
            "kkt_residual": self.kkt_residual,
            "multiplier": self.multiplier,
            "params": list(self.best.params),
            "pruned_params": list(self.pruned.params),
            "pruned_vertices": self.pruned.vertices().tolist(),
            "pruned_count": self.pruned.n,
            "restarts_used": self.restarts_used,
            "per_restart_perimeters": self.per_restart_perimeters,
            "dispersion": self.dispersion,
            "config": {
                "restarts": self.config.restarts,
                "seed": self.config.seed,
                "max_iterations": self.config.max_iterations,
                "kkt_tol": self.config.kkt_tol,
                "area_tol": self.config.area_tol,
                "collinearity_tol": self.config.collinearity_tol,
            },
            "restarts": [r.to_json() for r in self.records],
        }


# --- variable maps -----------------------------------------------------------

def params_from_x(x) -> np.ndarray:
    x = np.asarray(x, float)
    t = np.empty_like(x)
    t[0] = x[0]
    t[1:] = x[0] + np.cumsum(x[1:])
    return t


def _x_from_params(t) -> np.ndarray:
    t = np.asarray(t, float)
    return np.concatenate([[t[0]], np.diff(t)])


def _grad_to_x(g_t) -> np.ndarray:
    """Chain rule from vertex parameters to ``(t_1, d_2, ..., d_n)``."""
    tail = np.cumsum(g_t[::-1])[::-1]
    return tail  # tail[0] is the full sum (t_1), tail[k] covers vertices k..n-1


def _evaluator(container: Container):
    def evaluate(x):
        pts, tans = container.boundary(params_from_x(x))
        per, area, gp, ga = kernels.polygon_eval(pts, tans)
        return per, area, _grad_to_x(gp), _grad_to_x(ga)

    return evaluate


def objective_with_gradient(container: Container, vars: DeltaVars):
    """Perimeter of the induced inscribed polygon and its gradient in ``(t_1, d)``."""
    per, _, gp, _ = _evaluator(container)(vars.to_array())
    return per, gp


def area_with_gradient(container: Container, vars: DeltaVars):
    """Fan area of the induced inscribed polygon and its gradient in ``(t_1, d)``."""
    _, area, _, ga = _evaluator(container)(vars.to_array())
    return area, ga


# --- projections -------------------------------------------------------------

def _project_simplex(v, total):
    """Euclidean projection onto ``{y >= 0, sum y = total}``."""
    u = np.sort(v)[::-1]
    css = np.cumsum(u) - total
    ind = np.arange(1, v.size + 1)
    cond = u - css / ind > 0.0
    r = ind[cond][-1]
    tau = css[cond][-1] / r
    return np.maximum(v - tau, 0.0)


def project_delta(x, period):
    """Projection onto ``0 <= t_1 <= P``, ``d >= 0``, ``sum d <= P``."""
    y = np.array(x, dtype=float)
    y[0] = min(max(y[0], 0.0), period)
    d = np.maximum(y[1:], 0.0)
    if d.sum() > period:
        d = _project_simplex(y[1:], period)
        # rounding can leave the sum a few ulps above P
        excess = d.sum() - period
        if excess > 0.0:
            d[np.argmax(d)] -= excess
    y[1:] = d
    return y


# --- solvers -----------------------------------------------------------------

def _spg(fun, x, proj, tol, max_iter):
    """Nonmonotone spectral projected gradient for ``min fun`` over a convex set."""
    f, g = fun(x)
    pg = np.max(np.abs(proj(x - g) - x))
    alpha = 1.0 / max(pg, 1e-12)
    history = [f]
    it = 0
    while it < max_iter and pg > tol:
        it += 1
        d = proj(x - alpha * g) - x
        gd = float(g @ d)
        if gd >= 0.0:
            # numerically stationary along the projected arc
            alpha = 1.0
            d = proj(x - g) - x
            gd = float(g @ d)
            if gd >= 0.0:
                break
        fref = max(history[-SPG_HISTORY:])
        lam = 1.0
        while True:
            xn = proj(x + lam * d)
            fn, gn = fun(xn)
            if fn <= fref + ARMIJO * lam * gd or lam < 1e-16:
                break
            # safeguarded quadratic interpolation
            denom = 2.0 * (fn - f - lam * gd)
            lt = -gd * lam * lam / denom if denom > 0.0 else 0.5 * lam
            lam = lt if 0.1 * lam <= lt <= 0.9 * lam else 0.5 * lam
        s = xn - x
        y = gn - g
        sy = float(s @ y)
        alpha = min(max(float(s @ s) / sy, SPG_STEP_MIN), SPG_STEP_MAX) if sy > 0.0 else SPG_STEP_MAX
        x, f, g = xn, fn, gn
        history.append(f)
        pg = np.max(np.abs(proj(x - g) - x))
    return x, f, g, pg, it


@dataclass
class _ALResult:
    x: np.ndarray
    perimeter: float
    area: float
    multiplier: float
    kkt: float
    iterations: int


def _kkt_residual(evaluate, x, proj, mu):
    """Projected gradient of the Lagrangian ``-Per - mu (Area - A)``."""
    _, _, gp, ga = evaluate(x)
    g = -gp - mu * ga
    return float(np.max(np.abs(proj(x - g) - x)))


def _augmented_lagrangian(evaluate, x, proj, A, kkt_tol, area_tol, budget, mu=None):
    """Maximise perimeter subject to area ``A`` over the projection's feasible set."""
    per, area, gp, ga = evaluate(x)
    if mu is None:
        gg = float(ga @ ga)
        mu = -float(gp @ ga) / gg if gg > 0.0 else -1.0
    rho = RHO0
    inner_tol = 1e-2
    c_prev = abs(area - A)
    total = 0
    for _ in range(MAX_OUTER):
        left = budget - total
        if left <= 0:
            break

        def fun(z, mu=mu, rho=rho):
            p, a, gp_, ga_ = evaluate(z)
            c = a - A
            return -p - mu * c + 0.5 * rho * c * c, -gp_ - (mu - rho * c) * ga_

        tol = max(inner_tol, 0.5 * kkt_tol)
        x, _, _, pg, it = _spg(fun, x, proj, tol, left)
        total += it
        per, area, _, _ = evaluate(x)
        c = area - A
        mu = mu - rho * c
        if abs(c) <= area_tol and pg <= kkt_tol:
            break
        # only an inner solve that converged says anything about the penalty
        if pg <= tol and abs(c) > 0.25 * c_prev:
            rho = min(10.0 * rho, RHO_MAX)
        c_prev = abs(c)
        inner_tol = max(0.1 * inner_tol, 0.5 * kkt_tol)
    kkt = _kkt_residual(evaluate, x, proj, mu)
    return _ALResult(x, per, area, mu, kkt, total)


# --- multistart driver -------------------------------------------------------

def _rng(seed: int, index: int) -> np.random.Generator:
    """Counter-based stream owned by one restart."""
    return np.random.Generator(np.random.Philox(np.random.SeedSequence([seed, index])))


def _polygon_area(container, t) -> float:
    pts, tans = container.boundary(t)
    return kernels.polygon_eval(pts, tans)[1]


def _contract(container, t, anchor, A):
    """Bisect the factor of ``anchor + s (t - anchor)`` that gives area ``A``."""
    lo, hi = 0.0, 1.0
    for _ in range(60):
        mid = 0.5 * (lo + hi)
        if _polygon_area(container, anchor + mid * (t - anchor)) >= A:
            hi = mid
        else:
            lo = mid
    return anchor + hi * (t - anchor)


def _initial_params(container: Container, A, n, rng, index=0) -> np.ndarray:
    """Random sorted parameters shrunk until the enclosed area is ``A``.

    Even restarts shrink the spread toward its mean (a cap-like start); odd
    restarts shrink each parameter toward the nearer of two half-period-apart
    anchors (a diameter-like start). Both shapes degenerate to zero area.
    """
    P = container.period
    t = np.sort(rng.uniform(0.0, P, n))
    if _polygon_area(container, t) < A:
        equi = rng.uniform(0.0, P / n) + np.arange(n) * (P / n)
        corners = container.corners()
        if 0 < corners.size <= n:
            # every corner plus random extras encloses the whole container
            equi = np.sort(np.concatenate([corners, rng.uniform(0.0, P, n - corners.size)]))
        if _polygon_area(container, equi) < A:
            raise InfeasibleError("area %.6g exceeds what %d boundary vertices can enclose" % (A, n))
        t = _contract(container, equi, t, A)
    if index % 2 == 0:
        return _contract(container, t, t.mean(), A)
    a0 = rng.uniform(0.0, 0.5 * P)
    # offsets to the nearer anchor, in (-P/4, P/4]
    anchors = np.where(np.abs(t - a0 - 0.5 * P) < 0.25 * P, a0 + 0.5 * P, a0)
    anchors = np.where(t - a0 < -0.25 * P, a0 - 0.5 * P, anchors)
    anchors = np.where(t - a0 > 0.75 * P, a0 + P, anchors)
    out = _contract(container, t, anchors, A)
    return np.sort(np.mod(out, P))


def _run_restart(container: Container, A, n, cfg: OptimizationConfig, index: int) -> RestartRecord:
    rng = _rng(cfg.seed, index)
    P = container.period
    t0 = _initial_params(container, A, n, rng, index)
    x = project_delta(_x_from_params(t0), P)
    evaluate = _evaluator(container)
    proj = lambda z: project_delta(z, P)
    smooth = not isinstance(container, ConvexPolygon)

    def passes(kkt, area_res):
        return kkt <= cfg.kkt_tol and abs(area_res) <= cfg.area_tol

    mu, used, best = None, 0, None
    # a loose first-order pass, Newton polish, then a tight pass if needed
    # on polygons the first-order pass stalls at corners; refinement resolves those
    first_cap = cfg.max_iterations if smooth else max(1, cfg.max_iterations // 4)
    stages = ((max(COARSE_KKT, cfg.kkt_tol), first_cap), (cfg.kkt_tol, cfg.max_iterations))
    for kkt_target, cap in stages:
        res = _augmented_lagrangian(evaluate, x, proj, A, kkt_target, cfg.area_tol, cap - used, mu)
        used += res.iterations
        x, mu = res.x, res.multiplier
        t = params_from_x(x)
        ref = refine(container, A, t, mu, evaluate, proj, cfg.kkt_tol)
        if passes(ref.kkt, ref.area_residual):
            best = (ref.params, ref.multiplier, ref.kkt, ref.area_residual)
            break
        if smooth and passes(res.kkt, res.area - A):
            best = (t, res.multiplier, res.kkt, res.area - A)
            break
        if used >= cfg.max_iterations:
            break
    if best is None:
        kkt = res.kkt if smooth else ref.kkt
        best = (t, mu, kkt, res.area - A) if smooth else (ref.params, ref.multiplier, ref.kkt, ref.area_residual)
    t, mu, kkt, _ = best
    poly = InscribedPolygon(container, tuple(t))
    per = poly.perimeter()
    area_res = poly.area() - A
    ok = passes(kkt, area_res)
    msg = "" if ok else "area residual %.3g, kkt residual %.3g" % (area_res, kkt)
    return RestartRecord(index, per, area_res, kkt, used, ok, msg, poly.params, mu)


def _thread_count(cfg: OptimizationConfig) -> int:
    if cfg.threads is not None:
        return max(1, cfg.threads)
    try:
        return max(1, int(os.environ.get(THREADS_ENV, "1")))
    except ValueError:
        return 1


def maximize(container: Container, area: float, n: int, config: OptimizationConfig | None = None) -> OptimizationRun:
    """Best inscribed ``n``-vertex polygon of the given area over ``config.restarts`` restarts."""
    cfg = config or OptimizationConfig()
    A = float(area)
    if n < 3:
        raise DomainError("need at least 3 vertices")
    cap = container.area()
    if not 0.0 < A < cap:
        raise DomainError("area must lie in (0, %.12g) for this container" % cap)

    def one(i):
        try:
            return _run_restart(container, A, n, cfg, i)
        except InfeasibleError as exc:
            return RestartRecord(i, float("nan"), float("nan"), float("nan"), 0, False, str(exc))

    workers = _thread_count(cfg)
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            records = list(pool.map(one, range(cfg.restarts)))
    else:
        records = [one(i) for i in range(cfg.restarts)]

    accepted = [r for r in records if r.accepted]
    if not accepted:
        raise OptimizationError("all %d restarts were rejected" % cfg.restarts, records)
    # highest perimeter; lowest index breaks ties
    best = max(accepted, key=lambda r: (r.perimeter, -r.index))
    poly = InscribedPolygon(container, best.params)
    pruned = prune_redundant(poly, cfg.collinearity_tol)
    return OptimizationRun(
        area=A,
        best=poly,
        pruned=pruned,
        perimeter=best.perimeter,
        area_residual=best.area_residual,
        kkt_residual=best.kkt_residual,
        multiplier=best.multiplier,
        restarts_used=len(records),
        per_restart_perimeters=[r.perimeter if r.accepted else None for r in records],
        records=records,
        config=cfg,
    )


def prune_redundant(poly: InscribedPolygon, collinearity_tol: float = 1e-7) -> InscribedPolygon:
    """Drop coincident vertices and vertices collinear with their neighbours."""
    container = poly.container
    scale = container.circumradius()
    t = list(poly.params)
    pts = [p for p in poly.vertices()]

    def cross(i):
        a, b, c = pts[i - 1], pts[i], pts[(i + 1) % len(pts)]
        u, v = b - a, c - b
        return abs(u[0] * v[1] - u[1] * v[0])

    while True:
        if len(t) < 3:
            raise DegeneracyError("pruning left fewer than 3 vertices")
        # coincident neighbours (closing pair included)
        dup = next(
            (i for i in range(len(t)) if np.hypot(*(pts[i] - pts[i - 1])) <= collinearity_tol * scale),
            None,
        )
        if dup is not None:
            del t[dup], pts[dup]
            continue
        crosses = [cross(i) for i in range(len(t))]
        i = int(np.argmin(crosses))
        if crosses[i] > collinearity_tol * scale * scale:
            break
        del t[i], pts[i]
    return InscribedPolygon(container, tuple(t))

"""Independent checks for the exact and numerical solvers.

* :func:`brute_force_disk` -- exhaustive grid search over central angles
* :func:`perturb_triple` -- the three-angle perturbation that keeps both angle
  sums and strictly raises the half-angle sine sum
* :func:`finite_diff_gradient` -- central/forward differences
* :func:`structure_check` -- "all equal except one smallest" test
* :func:`gradient_check` -- analytic optimizer gradients against differences
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, NamedTuple

import numpy as np

from . import kernels
from .errors import DomainError, InfeasibleError
from .geometry import CORNER_SNAP, CentralAngles
from .roots import bisect_increasing

MAX_RESOLUTION = 1e-2


@dataclass(frozen=True)
class GridSearchReport:
    best_angles: CentralAngles
    best_perimeter: float
    grid_resolution: float
    feasible_points_scanned: int

    def to_json(self) -> dict:
        return {
            "best_angles": list(self.best_angles.angles),
            "best_perimeter": self.best_perimeter,
            "grid_resolution": self.grid_resolution,
            "feasible_points_scanned": self.feasible_points_scanned,
        }


def brute_force_disk(area: float, m: int, resolution: float) -> GridSearchReport:
    """Best inscribed polygon with at most ``m`` sides by exhaustive search.

    The ``m - 2`` smallest central angles run over a sorted grid of step
    ``resolution``; the last two are solved exactly from the sine constraint.
    Grid points whose best split falls short of the sine budget by at most
    ``m * resolution`` are kept (never points that exceed it).
    """
    if m not in (3, 4, 5):
        raise DomainError("brute force supports m in {3, 4, 5}")
    if not 0.0 < resolution <= MAX_RESOLUTION:
        raise DomainError("resolution must lie in (0, %g]" % MAX_RESOLUTION)
    cap = 0.5 * m * math.sin(2.0 * math.pi / m)
    if not 0.0 < area <= cap * (1.0 + 1e-15):
        raise InfeasibleError("area %.17g infeasible for m=%d (max %.17g)" % (area, m, cap))
    best, angles, count = kernels.scan_disk_grid(2.0 * area, m, resolution, m * resolution)
    if best < 0.0:
        raise InfeasibleError("no feasible grid point at resolution %g" % resolution)
    angles = np.sort(np.clip(angles, 0.0, math.pi))
    return GridSearchReport(CentralAngles(tuple(angles)), float(best), float(resolution), int(count))


class PerturbedTriple(NamedTuple):
    a: float
    b: float
    c: float
    t: float


def perturb_triple(a: float, b: float, c: float, s: float) -> PerturbedTriple:
    """Map ``(a, b, c)`` to ``(a - s, b + s + t, c - t)`` with the same sine sum.

    Requires ``0 < a <= b < c <= pi`` and ``0 < s <= a``; ``t`` lies in
    ``(0, (c - b - s)/2)`` and is found by bisection. Raises ``DomainError``
    when ``s`` is too large for the bracket to hold.
    """
    if not (0.0 < a <= b < c <= math.pi):
        raise DomainError("need 0 < a <= b < c <= pi")
    if not 0.0 < s <= a:
        raise DomainError("need 0 < s <= a")
    target = math.sin(a) + math.sin(b) + math.sin(c)
    hi = 0.5 * (c - b - s)
    if hi <= 0.0:
        raise DomainError("s too large: no room between b + s and c")

    def q(t):
        return math.sin(a - s) + math.sin(b + s + t) + math.sin(c - t)

    if not q(0.0) < target < q(hi):
        raise DomainError("s too large: sine sum not bracketed on [0, (c-b-s)/2]")
    t = bisect_increasing(q, 0.0, hi, target, tol=1e-13)
    return PerturbedTriple(a - s, b + s + t, c - t, t)


def finite_diff_gradient(f: Callable[[np.ndarray], float], x, h=1e-6, scheme="central") -> np.ndarray:
    """Difference quotients per coordinate.

    ``h`` and ``scheme`` may be scalars or per-coordinate sequences; schemes
    are ``"central"``, ``"forward"``, ``"backward"`` and the second-order
    one-sided ``"forward2"`` and ``"backward2"``.
    """
    x = np.asarray(x, dtype=float)
    hs = np.broadcast_to(np.asarray(h, dtype=float), x.shape)
    schemes = [scheme] * x.size if isinstance(scheme, str) else list(scheme)
    g = np.empty_like(x)
    for i in range(x.size):
        e = np.zeros_like(x)
        e[i] = hs[i]
        if schemes[i] == "central":
            g[i] = (f(x + e) - f(x - e)) / (2.0 * hs[i])
        elif schemes[i] == "forward":
            g[i] = (f(x + e) - f(x)) / hs[i]
        elif schemes[i] == "backward":
            g[i] = (f(x) - f(x - e)) / hs[i]
        elif schemes[i] == "forward2":
            g[i] = (-3.0 * f(x) + 4.0 * f(x + e) - f(x + 2.0 * e)) / (2.0 * hs[i])
        elif schemes[i] == "backward2":
            g[i] = (3.0 * f(x) - 4.0 * f(x - e) + f(x - 2.0 * e)) / (2.0 * hs[i])
        else:
            raise ValueError("unknown difference scheme %r" % (schemes[i],))
    return g


def structure_check(angles, tol: float = 1e-9) -> bool:
    """True iff the positive angles are all equal except possibly one smallest."""
    a = np.sort(np.asarray(list(angles), dtype=float))
    pos = a[a > tol]
    if pos.size <= 2:
        return True
    rest = pos[1:]
    return bool(rest.max() - rest.min() <= tol)


SMOOTH_GRAD_TOL = 1e-5
CORNER_GRAD_TOL = 1e-3
CORNER_NEAR = 1e-6


@dataclass(frozen=True)
class GradientCheckReport:
    samples: int
    corner_samples: int
    max_error_smooth: float
    max_error_corner: float

    @property
    def passed(self) -> bool:
        return self.max_error_smooth < SMOOTH_GRAD_TOL and self.max_error_corner < CORNER_GRAD_TOL

    def to_json(self) -> dict:
        return {
            "samples": self.samples,
            "corner_samples": self.corner_samples,
            "max_error_smooth": self.max_error_smooth,
            "max_error_corner": self.max_error_corner,
            "passed": self.passed,
        }


def random_delta_vars(container, rng, n_range=(3, 12)):
    """Random feasible variables; on polygons some vertices land on or next to corners."""
    from .optimizer import DeltaVars

    P = container.period
    n = int(rng.integers(n_range[0], n_range[1] + 1))
    t = rng.uniform(0.0, P, n)
    corners = container.corners()
    if corners.size and rng.random() < 0.5:
        k = rng.integers(0, n, size=int(rng.integers(1, n + 1)))
        # exactly on the corner, or clear of the tangent snap band around it
        offs = rng.choice([0.0, 1.0, -1.0], size=k.size) * rng.uniform(1e-8, 5e-7, size=k.size) * P
        t[k] = np.mod(rng.choice(corners, size=k.size) + offs, P)
    t = np.sort(t)
    return DeltaVars.from_array(np.concatenate([[t[0]], np.diff(t)]), P)


def _difference_plan(container, x, h):
    """Per-coordinate step and scheme that stay inside one smooth piece.

    Coordinate ``j`` shifts vertices ``j..n-1`` (all of them for ``j = 0``).
    A step may not reorder vertices or carry a vertex across a corner; at a
    corner or a repeated vertex only the forward side matches the analytic
    one-sided convention. Steps are also kept well below the shortest edge,
    where the perimeter has large curvature.
    """
    P = container.period
    n = x.size
    t = x[0] + np.concatenate([[0.0], np.cumsum(x[1:])])
    wrap = P - float(np.sum(x[1:]))
    gaps = np.append(x[1:], wrap)
    pos = gaps[gaps > 0.0]
    h_cap = max(min(h, 0.01 * float(pos.min())) if pos.size else h, 1e-12 * P)
    corners = container.corners()
    if corners.size:
        ext = np.concatenate([corners - P, corners, corners + P, corners + 2 * P])
        # parameters within the snap distance below a corner count as on it
        tm = np.mod(t, P) + CORNER_SNAP * P
        after = np.array([max(v - ext[ext <= v].max() - CORNER_SNAP * P, 0.0) for v in tm])
        before = np.array([ext[ext > v].min() - v for v in tm])
    else:
        after = before = np.full(n, np.inf)
    steps, schemes = [], []
    for j in range(n):
        idx = slice(j, None) if j else slice(None)
        fwd = float(before[idx].min())
        bwd = float(after[idx].min())
        if j:
            fwd = min(fwd, wrap)
            bwd = min(bwd, x[j])
        if fwd >= 2.0 * h_cap and bwd >= 2.0 * h_cap:
            steps.append(h_cap)
            schemes.append("central")
        elif fwd >= bwd and bwd < 2.0 * h_cap:
            steps.append(min(h_cap, fwd / 2.5))
            schemes.append("forward2")
        else:
            steps.append(min(h_cap, bwd / 2.5))
            schemes.append("backward2")
    return np.array(steps), schemes


def _near_corner(container, vars) -> bool:
    corners = container.corners()
    if corners.size == 0:
        return False
    P = container.period
    t = np.mod(vars.params(), P)
    d = np.abs(t[:, None] - np.concatenate([corners, [P]])[None, :])
    return bool(d.min() <= CORNER_NEAR * P)


def _relative_error(analytic, numeric) -> float:
    # unit floor: near-zero gradients (e.g. all vertices on one edge) are compared absolutely
    return float(np.max(np.abs(analytic - numeric)) / max(float(np.max(np.abs(numeric))), 1.0))


def gradient_check(container, samples: int, seed: int = 0, h: float = 1e-6) -> GradientCheckReport:
    """Compare perimeter and area gradients in ``(theta_1, deltas)`` with difference quotients."""
    from .optimizer import area_with_gradient, objective_with_gradient

    rng = np.random.Generator(np.random.Philox(np.random.SeedSequence([seed])))
    P = container.period
    worst_s = worst_c = 0.0
    n_corner = 0
    for _ in range(samples):
        v = random_delta_vars(container, rng)
        x = v.to_array()
        steps, schemes = _difference_plan(container, x, h * P)

        # difference quotients may leave the feasible set slightly; evaluate unchecked
        per_u = lambda z: _unchecked(container, z, 0)
        area_u = lambda z: _unchecked(container, z, 1)
        err = max(
            _relative_error(objective_with_gradient(container, v)[1], finite_diff_gradient(per_u, x, steps, schemes)),
            _relative_error(area_with_gradient(container, v)[1], finite_diff_gradient(area_u, x, steps, schemes)),
        )
        if _near_corner(container, v):
            n_corner += 1
            worst_c = max(worst_c, err)
        else:
            worst_s = max(worst_s, err)
    return GradientCheckReport(samples, n_corner, worst_s, worst_c)


def _unchecked(container, z, which):
    t = z[0] + np.concatenate([[0.0], np.cumsum(z[1:])])
    pts, tans = container.boundary(t)
    return kernels.polygon_eval(pts, tans)[which]

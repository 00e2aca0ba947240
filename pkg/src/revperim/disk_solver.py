"""Exact maximal-perimeter shapes of prescribed area inside the unit disk.

The optimum for area ``A`` in ``(0, pi)`` is an inscribed ``m``-gon whose central
angles are one smallest angle ``theta1`` and ``m - 1`` equal angles. ``m`` is the
unique integer with

    (m-1) sin(2 pi/(m-1)) < 2A <= m sin(2 pi/m)

and ``theta1`` in ``(0, 2 pi/m]`` solves

    sin(theta1) + (m-1) sin((2 pi - theta1)/(m-1)) = 2A.

The same machinery solves the general angle program with angle budget ``S``
and sine budget ``T``. The Lagrangian variant ``min lam*|O| - Per(O)`` is
handled by :func:`solve_lagrangian`.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, InfeasibleError
from .geometry import TWO_PI, CentralAngles
from .roots import bisect_increasing

# relative slack on the regular-polygon threshold so that A = (m/2) sin(2 pi/m),
# however it was rounded, selects m rather than m + 1
THRESHOLD_RTOL = 8.0 * np.finfo(float).eps

RESIDUAL_TOL = 1e-12
REGULAR_TOL = 1e-12
# the area-vs-theta1 relation is flat at the regular point (d area / d theta1 = 0),
# so an area rounded to ~8 digits moves theta1 by ~1e-4; flag regularity by area too
REGULAR_AREA_RTOL = 1e-8

# numerically observed regime boundaries of the Lagrangian problem (not proven)
LAMBDA_DISK = 0.5
LAMBDA_DIAMETER = 1.0


def _cap(S: float, m: int) -> float:
    """Largest sine sum of ``m`` angles summing to ``S``: ``m sin(S/m)``."""
    return m * math.sin(S / m)


def _below_cap(T: float, S: float, m: int) -> bool:
    return T <= _cap(S, m) * (1.0 + THRESHOLD_RTOL)


def _smallest_side_count(S: float, T: float, start: int) -> int:
    """Smallest ``m >= start`` with ``T <= m sin(S/m)`` (an increasing sequence in m)."""
    if _below_cap(T, S, start):
        return start
    lo, hi = start, start + 1
    while not _below_cap(T, S, hi):
        lo, hi = hi, 2 * hi
        if hi > 1 << 40:
            raise DomainError("sine budget %.17g too close to the angle budget %.17g" % (T, S))
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if _below_cap(T, S, mid):
            hi = mid
        else:
            lo = mid
    return hi


def side_count(area: float) -> int:
    """Number of sides of the optimal polygon of area ``area`` in the unit disk."""
    area = float(area)
    if not 0.0 < area < math.pi:
        raise DomainError("area must lie in the open interval (0, pi); got %r" % area)
    return _smallest_side_count(TWO_PI, 2.0 * area, 3)


def _sine_sum(theta: float, S: float, m: int) -> float:
    return math.sin(theta) + (m - 1) * math.sin((S - theta) / (m - 1))


def solve_theta1(S: float, T: float, m: int) -> float:
    """Smallest angle ``theta1`` in ``(0, S/m]`` of the ``m``-angle solution.

    Solves ``sin(t) + (m-1) sin((S-t)/(m-1)) = T`` by bisection; the left side is
    strictly increasing on ``[0, S/m]``.
    """
    if m < 2:
        raise DomainError("m must be at least 2")
    lower = (m - 1) * math.sin(S / (m - 1))
    upper = _cap(S, m)
    if not (lower < T and _below_cap(T, S, m)):
        raise InfeasibleError(
            "sine budget %.17g outside the admissible interval (%.17g, %.17g] for m=%d" % (T, lower, upper, m)
        )
    if T >= upper:
        return S / m
    return bisect_increasing(lambda t: _sine_sum(t, S, m), 0.0, S / m, T, tol=RESIDUAL_TOL)


@dataclass(frozen=True)
class AngleProgram:
    """Maximise ``sum sin(theta_i/2)`` over ``n`` ordered nonnegative angles with
    ``sum theta_i = S`` and ``sum sin(theta_i) = T``."""

    S: float
    T: float
    n: int

    def __post_init__(self):
        if not 0.0 < self.S <= TWO_PI:
            raise DomainError("angle budget S must lie in (0, 2 pi]")
        if self.n < 3:
            raise DomainError("n must be at least 3")
        if not (0.0 < self.T and _below_cap(self.T, self.S, self.n)):
            raise InfeasibleError("sine budget T must lie in (0, %.17g] for n=%d" % (_cap(self.S, self.n), self.n))


@dataclass(frozen=True)
class AngleProgramSolution:
    theta1: float
    theta_rest: float
    m_effective: int
    n: int

    def angles(self) -> np.ndarray:
        """All ``n`` angles, zero padding first, sorted ascending."""
        pos = [self.theta1] + [self.theta_rest] * (self.m_effective - 1)
        return np.array([0.0] * (self.n - self.m_effective) + pos)

    @property
    def value(self) -> float:
        """Objective ``2 sum sin(theta_i/2)``; independent of the zero padding."""
        return 2.0 * math.sin(0.5 * self.theta1) + 2.0 * (self.m_effective - 1) * math.sin(0.5 * self.theta_rest)


def solve_angle_program(program: AngleProgram) -> AngleProgramSolution:
    S, T, n = program.S, program.T, program.n
    m = _smallest_side_count(S, T, 2)
    if m == 2 and not math.sin(S) < T:
        raise InfeasibleError("sine budget %.17g is not attainable with angles in [0, pi] summing to %.17g" % (T, S))
    if m > n:
        raise InfeasibleError("n=%d too small: this (S, T) needs %d positive angles" % (n, m))
    theta1 = solve_theta1(S, T, m)
    rest = (S - theta1) / (m - 1)
    if rest > math.pi:
        raise InfeasibleError("solution would need an angle above pi")
    return AngleProgramSolution(theta1, rest, m, n)


@dataclass(frozen=True)
class CentralAngleSolution:
    m: int
    theta1: float
    theta_rest: float
    area: float
    perimeter: float
    is_regular: bool

    def angles(self) -> CentralAngles:
        return CentralAngles((self.theta1,) + (self.theta_rest,) * (self.m - 1))

    def to_json(self) -> dict:
        return {
            "m": self.m,
            "theta1": self.theta1,
            "theta_rest": self.theta_rest,
            "area": self.area,
            "perimeter": self.perimeter,
            "is_regular": self.is_regular,
        }


def _polygon_from_theta(m: int, theta1: float, area: float | None = None) -> CentralAngleSolution:
    rest = (TWO_PI - theta1) / (m - 1)
    if area is None:
        area = 0.5 * (math.sin(theta1) + (m - 1) * math.sin(rest))
    per = 2.0 * math.sin(0.5 * theta1) + 2.0 * (m - 1) * math.sin(0.5 * rest)
    return CentralAngleSolution(m, theta1, rest, area, per, abs(theta1 - rest) <= REGULAR_TOL)


def solve_disk(area: float) -> CentralAngleSolution:
    """Maximal-perimeter convex set of area ``area`` in the unit disk."""
    m = side_count(area)
    theta1 = solve_theta1(TWO_PI, 2.0 * float(area), m)
    sol = _polygon_from_theta(m, theta1, float(area))
    regular_area = 0.5 * m * math.sin(TWO_PI / m)
    if not sol.is_regular and abs(area - regular_area) <= REGULAR_AREA_RTOL * regular_area:
        sol = CentralAngleSolution(sol.m, sol.theta1, sol.theta_rest, sol.area, sol.perimeter, True)
    return sol


def lambda_of(m: int, theta: float) -> float:
    """Multiplier at which ``(m, theta)`` is a critical point of ``lam*area - perimeter``."""
    if m < 3:
        raise DomainError("m must be at least 3")
    if not 0.0 <= theta <= TWO_PI / m * (1.0 + 1e-12):
        raise DomainError("theta must lie in (0, 2 pi/m]")
    denom = math.cos(0.5 * theta) + math.cos((TWO_PI - theta) / (2 * (m - 1)))
    if denom <= 0.0:
        raise DomainError("non-positive denominator")
    return 1.0 / denom


def lambda_table(m_max: int, samples: int) -> np.ndarray:
    """Rows ``(m, theta, lambda)`` for ``3 <= m <= m_max`` and ``theta = j/samples * 2pi/m``."""
    if m_max < 3 or samples < 2:
        raise DomainError("need m_max >= 3 and samples >= 2")
    rows = []
    for m in range(3, m_max + 1):
        theta = np.arange(1, samples + 1) / samples * (TWO_PI / m)
        lam = 1.0 / (np.cos(0.5 * theta) + np.cos((TWO_PI - theta) / (2 * (m - 1))))
        rows.append(np.column_stack([np.full(samples, m), theta, lam]))
    return np.vstack(rows)


@dataclass(frozen=True)
class LagrangianSolution:
    kind: str  # "disk" | "diameter" | "polygon"
    lam: float
    objective: float
    polygon: CentralAngleSolution | None = None
    heuristic: bool = False
    on_branch: bool = False

    def to_json(self) -> dict:
        out = {"kind": self.kind, "lambda": self.lam, "objective": self.objective,
               "heuristic": self.heuristic, "on_branch": self.on_branch}
        if self.polygon is not None:
            out["polygon"] = self.polygon.to_json()
        return out


def _branch_roots(m: int, lam: float) -> list[float]:
    """All ``theta`` in ``(0, 2pi/m]`` with ``lambda_of(m, theta) == lam``.

    The denominator ``cos(t/2) + cos((2pi - t)/(2(m-1)))`` is concave in ``t``, so
    the branch splits at its maximiser into two monotone pieces.
    """
    k = 2 * (m - 1)
    top = TWO_PI / m
    denom = lambda t: math.cos(0.5 * t) + math.cos((TWO_PI - t) / k)
    slope = lambda t: -0.5 * math.sin(0.5 * t) + math.sin((TWO_PI - t) / k) / k
    if slope(top) >= 0.0:
        peak = top
    else:
        # slope is decreasing; bisect on -slope
        peak = bisect_increasing(lambda t: -slope(t), 0.0, top, 0.0, tol=1e-9)
    target = 1.0 / lam
    roots = []
    if denom(0.0) < target <= denom(peak):
        roots.append(bisect_increasing(denom, 0.0, peak, target, tol=1e-13))
    if peak < top and denom(top) <= target < denom(peak):
        roots.append(bisect_increasing(lambda t: -denom(t), peak, top, -target, tol=1e-13))
    return roots


def lagrangian_objective(lam: float, area: float, perimeter: float) -> float:
    return lam * area - perimeter


def solve_lagrangian(lam: float) -> LagrangianSolution:
    """Minimiser of ``lam*|O| - Per(O)`` over convex ``O`` in the unit disk.

    Outside ``(0.5, 1]`` the disk or a diameter is returned, following the
    numerically observed thresholds (flagged ``heuristic``). Inside, every
    critical ``(m, theta)`` and every regular polygon is a candidate, together
    with the disk and the diameter, and the lowest objective wins.
    """
    lam = float(lam)
    if not lam > 0.0:
        raise DomainError("lambda must be positive")
    disk_obj = lagrangian_objective(lam, math.pi, TWO_PI)
    if lam <= LAMBDA_DISK:
        return LagrangianSolution("disk", lam, disk_obj, heuristic=True)
    if lam > LAMBDA_DIAMETER:
        return LagrangianSolution("diameter", lam, -4.0, heuristic=True)

    best = LagrangianSolution("disk", lam, disk_obj, heuristic=True)
    if -4.0 < best.objective:
        best = LagrangianSolution("diameter", lam, -4.0, heuristic=True)

    def offer(cand: LagrangianSolution):
        nonlocal best
        if cand.objective < best.objective:
            best = cand

    m = 3
    while True:
        branch_max = max(1.0 / (1.0 + math.cos(math.pi / (m - 1))), 1.0 / (2.0 * math.cos(math.pi / m)))
        if branch_max < lam:
            break
        for theta in _branch_roots(m, lam):
            if theta <= 0.0:
                continue
            poly = _polygon_from_theta(m, theta)
            offer(LagrangianSolution("polygon", lam, lagrangian_objective(lam, poly.area, poly.perimeter),
                                     poly, heuristic=False, on_branch=True))
        m += 1
    # regular polygons fill the gaps between branches; their objective tends to the
    # disk's from below, so a generous scan past the last branch is enough
    for k in range(3, m + 200):
        poly = _polygon_from_theta(k, TWO_PI / k)
        offer(LagrangianSolution("polygon", lam, lagrangian_objective(lam, poly.area, poly.perimeter),
                                 poly, heuristic=True, on_branch=False))
    return best

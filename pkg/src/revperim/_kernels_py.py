"""Numpy implementations of the hot kernels.

These are the reference versions; ``_kernels.pyx`` mirrors them loop for loop.
"""
import math

import numpy as np

# chords shorter than this take their direction from the boundary tangent
EDGE_EPS = 1e-9

TWO_PI = 2.0 * math.pi


def radial_points(theta, a0, cos_c, sin_c):
    """Boundary points ``rho(t) r(t)`` and their t-derivatives for a trig radial function."""
    theta = np.ascontiguousarray(theta, dtype=float)
    rho = np.full_like(theta, float(a0))
    drho = np.zeros_like(theta)
    for k, c in enumerate(cos_c, start=1):
        if c:
            rho += c * np.cos(k * theta)
            drho -= k * c * np.sin(k * theta)
    for k, s in enumerate(sin_c, start=1):
        if s:
            rho += s * np.sin(k * theta)
            drho += k * s * np.cos(k * theta)
    ct = np.cos(theta)
    st = np.sin(theta)
    pts = np.empty((theta.size, 2))
    tans = np.empty((theta.size, 2))
    pts[:, 0] = rho * ct
    pts[:, 1] = rho * st
    tans[:, 0] = drho * ct - rho * st
    tans[:, 1] = drho * st + rho * ct
    return pts, tans


def polygon_eval(pts, tans):
    """Perimeter, area and their gradients with respect to each vertex parameter.

    ``pts`` are the closed polygon's vertices in order, ``tans`` the derivative of
    each vertex with respect to its own boundary parameter. Area is the sum of
    the origin fan triangles. A zero-length edge uses the forward tangent at its
    start vertex as direction, which is the one-sided derivative for a gap
    opening from zero.
    """
    pts = np.asarray(pts, dtype=float)
    tans = np.asarray(tans, dtype=float)
    nxt = np.roll(pts, -1, axis=0)
    prev = np.roll(pts, 1, axis=0)
    edge = nxt - pts
    length = np.hypot(edge[:, 0], edge[:, 1])
    perimeter = float(length.sum())
    area = 0.5 * float(np.sum(pts[:, 0] * nxt[:, 1] - pts[:, 1] * nxt[:, 0]))

    unit = np.empty_like(edge)
    long_ = length > EDGE_EPS
    unit[long_] = edge[long_] / length[long_, None]
    short = ~long_
    if short.any():
        tn = np.hypot(tans[short, 0], tans[short, 1])
        unit[short] = tans[short] / tn[:, None]
    back = np.roll(unit, 1, axis=0)
    g_per = tans[:, 0] * (back[:, 0] - unit[:, 0]) + tans[:, 1] * (back[:, 1] - unit[:, 1])
    g_area = 0.5 * (
        tans[:, 0] * nxt[:, 1] - tans[:, 1] * nxt[:, 0]
        + prev[:, 0] * tans[:, 1] - prev[:, 1] * tans[:, 0]
    )
    return perimeter, area, g_per, g_area


def scan_disk_grid(two_area, m, res, slack):
    """Exhaustive scan over sorted central-angle vectors of length ``m``.

    The ``m - 2`` smallest angles run over the grid ``j * res`` in nondecreasing
    order; the remaining pair is solved in closed form from the sine constraint.
    Returns ``(best_perimeter, best_angles, feasible_count)``; ``best_perimeter``
    is -1 when nothing is feasible.
    """
    best = -1.0
    best_angles = np.zeros(m)
    count = 0
    free = m - 2

    def recurse(prefix, j0, s_ang, s_sin, s_half):
        nonlocal best, best_angles, count
        k = len(prefix)
        remaining = m - k
        jmax = int(math.floor((TWO_PI - s_ang) / remaining / res + 1e-9))
        if k < free - 1:
            for j in range(j0, jmax + 1):
                a = j * res
                recurse(prefix + [a], j, s_ang + a, s_sin + math.sin(a), s_half + math.sin(0.5 * a))
            return
        # last free coordinate: vectorised
        if jmax < j0:
            return
        a = np.arange(j0, jmax + 1) * res
        rest = TWO_PI - s_ang - a
        t_left = two_area - s_sin - np.sin(a)
        half = 0.5 * rest
        cap = 2.0 * np.sin(half)
        with np.errstate(invalid="ignore", divide="ignore"):
            ratio = np.where(cap > 0.0, t_left / cap, np.inf)
            spread = np.arccos(np.clip(ratio, -1.0, 1.0))
        x = half - spread
        y = half + spread
        ok = (t_left >= 0.0) & (x >= 0.0) & (y <= math.pi) & (
            (ratio <= 1.0) | (t_left - cap <= slack)
        )
        if not ok.any():
            return
        per = 2.0 * (s_half + np.sin(0.5 * a) + np.sin(0.5 * x) + np.sin(0.5 * y))
        per = np.where(ok, per, -1.0)
        count += int(ok.sum())
        i = int(np.argmax(per))
        if per[i] > best:
            best = float(per[i])
            best_angles = np.array(prefix + [a[i], x[i], y[i]])

    recurse([], 0, 0.0, 0.0, 0.0)
    return best, best_angles, count

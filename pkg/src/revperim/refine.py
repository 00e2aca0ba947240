"""Newton refinement of a near-stationary inscribed polygon.

First-order ascent gets close to a critical point but converges slowly once
vertices merge or settle on container corners. Here the active structure is
fixed explicitly (distinct vertices with multiplicities, and for polygon
containers the vertices pinned at corners) and the remaining smooth KKT system

    -grad Per - mu grad Area = 0,   Area = A

is solved by damped Newton with a finite-difference Jacobian. Steps that would
reorder vertices or leave an edge change the structure instead. For polygon
containers the certificate also covers the moves the fixed structure hides
(leaving a corner, splitting a repeated vertex), and violated moves are applied.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import kernels
from .geometry import ConvexPolygon

MERGE_TOL = 1e-8
CORNER_SNAP = 1e-5
FD_STEP = 1e-7
NEWTON_ITERS = 40
F_TOL = 1e-13


@dataclass
class Refined:
    params: np.ndarray
    multiplier: float
    kkt: float
    area_residual: float


class _Structure:
    def __init__(self, container, t_full):
        self.c = container
        self.P = container.period
        self.poly = isinstance(container, ConvexPolygon)
        t = np.sort(np.mod(np.asarray(t_full, float), self.P))
        if self.poly:
            self.cum = np.append(container.corners(), 1.0)
            self.nc = self.cum.size - 1
            self.verts = np.asarray(container.vertices, float)
            self.units = container._units
            self.L = container.perimeter
        # merge clusters (cyclically)
        groups = [[t[0]]]
        for v in t[1:]:
            if v - groups[-1][-1] <= MERGE_TOL * self.P:
                groups[-1].append(v)
            else:
                groups.append([v])
        if len(groups) > 1 and groups[0][0] + self.P - groups[-1][-1] <= MERGE_TOL * self.P:
            tail = groups.pop()
            groups[0] = [v - self.P for v in tail] + groups[0]
        self.t = np.array([g[len(g) // 2] for g in groups])
        self.mult = np.array([len(g) for g in groups])
        self.corner = np.full(self.t.size, -1)
        self.edge = np.zeros(self.t.size, int)
        if self.poly:
            self.t = np.mod(self.t, 1.0)
            for i, v in enumerate(self.t):
                k = int(np.argmin(np.abs(self.cum - v)))
                if abs(self.cum[k] - v) <= CORNER_SNAP:
                    self.corner[i] = k % self.nc
                    self.t[i] = self.cum[k % self.nc]
                else:
                    self.edge[i] = min(int(np.searchsorted(self.cum, v, side="right")) - 1, self.nc - 1)
            self._sort()
            self._merge_equal()
        else:
            self._sort()

    # -- bookkeeping --------------------------------------------------------
    def _sort(self):
        o = np.argsort(self.t, kind="stable")
        self.t, self.mult, self.corner, self.edge = self.t[o], self.mult[o], self.corner[o], self.edge[o]

    def _merge_equal(self):
        """Merge consecutive vertices pinned at the same corner."""
        i = 0
        while self.t.size > 1 and i < self.t.size:
            j = (i + 1) % self.t.size
            if self.corner[i] >= 0 and self.corner[i] == self.corner[j]:
                self._merge(i, j)
                i = 0
                continue
            i += 1

    def _merge(self, i, j):
        keep, drop = (j, i) if self.corner[j] >= 0 and self.corner[i] < 0 else (i, j)
        self.mult[keep] += self.mult[drop]
        for name in ("t", "mult", "corner", "edge"):
            setattr(self, name, np.delete(getattr(self, name), drop))

    @property
    def free(self):
        return self.corner < 0

    def positions(self, t):
        if not self.poly:
            return self.c.boundary(t)
        pts = np.empty((t.size, 2))
        tans = np.empty((t.size, 2))
        f = self.free
        e = self.edge[f]
        pts[f] = self.verts[e] + ((t[f] - self.cum[e]) * self.L)[:, None] * self.units[e]
        tans[f] = self.L * self.units[e]
        # pinned vertices are not variables; the departing tangent only orients zero-length edges
        pts[~f] = self.verts[self.corner[~f]]
        tans[~f] = self.L * self.units[self.corner[~f]]
        return pts, tans

    def evaluate(self, z):
        t = self.t.copy()
        t[self.free] = z
        pts, tans = self.positions(t)
        per, area, gp, ga = kernels.polygon_eval(pts, tans)
        return per, area, gp[self.free], ga[self.free]

    def full_params(self):
        t = np.repeat(self.t, self.mult)
        t = t - math.floor(t[0] / self.P) * self.P
        return np.sort(t) if self.poly else t

    # -- step guard ---------------------------------------------------------
    def max_step(self, dz):
        """Largest step fraction keeping the order and edge membership."""
        d = np.zeros(self.t.size)
        d[self.free] = dz
        best, event = 1.0, None
        m = self.t.size
        for i in range(m):
            j = (i + 1) % m
            gap = (self.t[j] - self.t[i]) if j else (self.t[0] + self.P - self.t[i])
            rate = d[j] - d[i]
            if m > 1 and rate < 0.0 and gap / -rate < best:
                best, event = max(gap / -rate, 0.0), ("merge", i, j)
        if self.poly:
            for i in np.flatnonzero(self.free):
                e = self.edge[i]
                if d[i] < 0.0 and (self.t[i] - self.cum[e]) / -d[i] < best:
                    best, event = max((self.t[i] - self.cum[e]) / -d[i], 0.0), ("corner", i, e)
                if d[i] > 0.0 and (self.cum[e + 1] - self.t[i]) / d[i] < best:
                    best, event = max((self.cum[e + 1] - self.t[i]) / d[i], 0.0), ("corner", i, (e + 1) % self.nc)
        return best, event

    def apply(self, event):
        kind, i, j = event
        if kind == "merge":
            if self.poly and self.free[i] and self.free[j] and self.edge[i] != self.edge[j]:
                # adjacent edges meet only at their shared corner
                self.corner[i] = self.edge[j]
                self.t[i] = self.cum[self.edge[j]]
            self._merge(i, j)
        else:
            self.corner[i] = j
            self.t[i] = self.cum[j]
            self._sort()
            self._merge_equal()


def _kkt_system(s, z, mu, A):
    per, area, gp, ga = s.evaluate(z)
    return np.append(-gp - mu * ga, area - A), ga


def _newton(s: _Structure, mu, A, scale):
    """Damped Newton on the reduced KKT system; returns (mu, event)."""
    z = s.t[s.free].copy()
    F, ga = _kkt_system(s, z, mu, A)
    for _ in range(NEWTON_ITERS):
        fn = float(np.linalg.norm(F))
        if np.max(np.abs(F)) <= F_TOL * scale:
            break
        k = z.size
        J = np.zeros((k + 1, k + 1))
        h = FD_STEP * s.P
        for j in range(k):
            e = np.zeros(k)
            e[j] = h
            Fp, _ = _kkt_system(s, z + e, mu, A)
            Fm, _ = _kkt_system(s, z - e, mu, A)
            J[:, j] = (Fp - Fm) / (2.0 * h)
        J[:k, k] = -ga
        if not np.all(np.isfinite(J)):
            break
        step = np.linalg.lstsq(J, -F, rcond=1e-12)[0]
        dz, dmu = step[:k], step[k]
        amax, event = s.max_step(dz)
        if event is not None and amax < 1.0:
            z = z + amax * dz
            s.t[s.free] = z
            s.apply(event)
            return mu + amax * dmu, event
        a = 1.0
        while a > 1e-6:
            Fn, gan = _kkt_system(s, z + a * dz, mu + a * dmu, A)
            if np.linalg.norm(Fn) < (1.0 - 1e-4 * a) * fn:
                break
            a *= 0.5
        else:
            break
        z, mu, F, ga = z + a * dz, mu + a * dmu, Fn, gan
    s.t[s.free] = z
    return mu, None


def _vertex_gradients(pts, mu):
    """Cartesian gradient of ``-Per - mu Area`` at each vertex, with edge data."""
    nxt = np.roll(pts, -1, axis=0)
    prv = np.roll(pts, 1, axis=0)
    e_out, e_in = nxt - pts, pts - prv
    u_out = e_out / np.hypot(e_out[:, 0], e_out[:, 1])[:, None]
    u_in = e_in / np.hypot(e_in[:, 0], e_in[:, 1])[:, None]
    g_area = 0.5 * np.column_stack([nxt[:, 1] - prv[:, 1], prv[:, 0] - nxt[:, 0]])
    return -(u_in - u_out) - mu * g_area, e_out, e_in, u_out, u_in


def _cross(a, b):
    return a[0] * b[1] - a[1] * b[0]


def _polygon_certificate(s: _Structure, mu, A):
    """Worst first-order decrease of the Lagrangian over all admissible moves."""
    pts, tans = s.positions(s.t)
    G, e_out, e_in, u_out, u_in = _vertex_gradients(pts, mu)
    worst, move = 0.0, None

    def offer(val, mv):
        nonlocal worst, move
        if -val > worst:
            worst, move = -val, mv

    for i in range(s.t.size):
        if s.free[i]:
            fwd = bwd = s.L * s.units[s.edge[i]]
            bwd = -bwd
            offer(float(G[i] @ fwd), None)
            offer(float(G[i] @ bwd), None)
        else:
            k = s.corner[i]
            fwd = s.L * s.units[k]
            bwd = -s.L * s.units[(k - 1) % s.nc]
            offer(float(G[i] @ fwd), ("release", i, k))
            offer(float(G[i] @ bwd), ("release", i, (k - 1) % s.nc))
        if s.mult[i] > 1:
            d_per = math.hypot(*fwd) - float(fwd @ u_out[i])
            offer(-d_per - mu * 0.5 * _cross(fwd, e_out[i]), ("split", i, +1))
            d_per = math.hypot(*bwd) + float(bwd @ u_in[i])
            offer(-d_per - mu * 0.5 * _cross(bwd, e_in[i]), ("split", i, -1))
    return worst, move


def _apply_move(s: _Structure, move):
    kind, i, arg = move
    if kind == "release":
        # step a little way onto the edge the certificate says to move along
        e = arg
        fwd = e == s.corner[i]
        j = (i + (1 if fwd else -1)) % s.t.size
        room = _cyclic_gap(s, i, j)
        s.corner[i] = -1
        s.edge[i] = e
        s.t[i] = s.cum[e] + min(1e-3, 0.25 * room) if fwd else s.cum[e + 1] - min(1e-3, 0.25 * room)
        s._sort()
        return
    # split: peel one copy off along the boundary, a short way toward the neighbour
    gap = _cyclic_gap(s, i, (i + arg) % s.t.size)
    if s.corner[i] >= 0:
        k = s.corner[i]
        e = k if arg > 0 else (k - 1) % s.nc
    else:
        e = s.edge[i]
    lo, hi = s.cum[e], s.cum[e + 1]
    base = s.t[i] if s.corner[i] < 0 else (lo if arg > 0 else hi)
    new = float(np.clip(base + arg * min(1e-3, 0.25 * gap), lo, hi))
    s.mult[i] -= 1
    s.t = np.append(s.t, new)
    s.mult = np.append(s.mult, 1)
    s.corner = np.append(s.corner, -1)
    s.edge = np.append(s.edge, e)
    s._sort()


def _cyclic_gap(s, i, j):
    if i == j:
        return s.P
    d = (s.t[j] - s.t[i]) % s.P
    return min(d, s.P - d)


def refine(container, A, t_full, mu, evaluate_full, proj, kkt_tol, max_cycles=None) -> Refined:
    """Polish ``t_full`` to a KKT point of the structure it approximates."""
    s = _Structure(container, t_full)
    n = int(np.asarray(t_full).size)
    cycles = max_cycles or 4 * n + 20
    kkt = math.inf
    seen = set()
    for _ in range(cycles):
        if s.t.size < 2:
            break
        mu, event = _newton(s, mu, A, 1.0)
        if event is not None:
            continue
        if s.poly:
            worst, move = _polygon_certificate(s, mu, A)
            kkt = worst
            if worst <= kkt_tol or move is None:
                break
            # Newton can undo a move along a concave direction; stop once a state repeats
            state = (tuple(np.round(s.t, 12)), tuple(s.corner), tuple(s.mult), move[0], int(move[1]))
            if state in seen:
                break
            seen.add(state)
            _apply_move(s, move)
        else:
            break
    t = s.full_params()
    if not s.poly:
        x = np.concatenate([[t[0]], np.diff(t)])
        _, _, gp, ga = evaluate_full(x)
        g = -gp - mu * ga
        kkt = float(np.max(np.abs(proj(x - g) - x)))
    pts, tans = container.boundary(t)
    area = kernels.polygon_eval(pts, tans)[1]
    return Refined(t, mu, kkt, area - A)

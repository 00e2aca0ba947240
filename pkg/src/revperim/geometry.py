"""Containers, inscribed polygons and their area/perimeter.

Three container kinds are supported, all star-shaped about the origin:

* :class:`UnitDisk`
* :class:`TrigRadial` -- boundary ``rho(t) (cos t, sin t)`` with a trigonometric
  polynomial ``rho``
* :class:`ConvexPolygon` -- parametrised by normalised arc length

Every container exposes ``boundary(t) -> (points, tangents)`` over its parameter
``period`` (``2 pi`` for radial containers, ``1`` for polygons). Inscribed
polygons are lists of sorted boundary parameters.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import kernels
from .errors import ContainerError

TWO_PI = 2.0 * math.pi

# grid used to certify positivity and convexity of trig radial functions
CHECK_GRID = 4096

# polygon parameters this close below a corner use the departing edge's tangent
CORNER_SNAP = 1e-9


class Container:
    """Common interface; see the concrete subclasses."""

    period: float = TWO_PI
    kind: str = ""

    def boundary(self, t):
        raise NotImplementedError

    def radial(self, theta):
        raise NotImplementedError

    def area(self) -> float:
        raise NotImplementedError

    def circumradius(self) -> float:
        raise NotImplementedError

    def to_json(self) -> dict:
        raise NotImplementedError

    def outline(self, samples: int = 720) -> np.ndarray:
        t = np.linspace(0.0, self.period, samples, endpoint=False)
        return self.boundary(t)[0]

    def corners(self) -> np.ndarray:
        """Boundary parameters where the boundary is not differentiable."""
        return np.empty(0)


@dataclass(frozen=True)
class UnitDisk(Container):
    kind: str = field(default="disk", init=False, repr=False)

    def boundary(self, t):
        return kernels.radial_points(np.atleast_1d(np.asarray(t, float)), 1.0, np.empty(0), np.empty(0))

    def radial(self, theta):
        theta = np.asarray(theta, float)
        return np.ones_like(theta), np.zeros_like(theta)

    def area(self) -> float:
        return math.pi

    def circumradius(self) -> float:
        return 1.0

    def to_json(self) -> dict:
        return {"type": "disk"}


@dataclass(frozen=True)
class TrigRadial(Container):
    """``rho(t) = a0 + sum_k c_k cos(k t) + sum_k s_k sin(k t)``, k starting at 1."""

    a0: float
    cos_coeffs: tuple = ()
    sin_coeffs: tuple = ()
    kind: str = field(default="trig", init=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "a0", float(self.a0))
        object.__setattr__(self, "cos_coeffs", tuple(float(c) for c in self.cos_coeffs))
        object.__setattr__(self, "sin_coeffs", tuple(float(s) for s in self.sin_coeffs))
        theta = np.linspace(0.0, TWO_PI, CHECK_GRID, endpoint=False)
        rho, d1 = self.radial(theta)
        d2 = self._second_derivative(theta)
        if np.any(rho <= 0.0):
            raise ContainerError("radial function must be positive; min %.6g" % rho.min())
        curv = rho**2 + 2.0 * d1**2 - rho * d2
        if np.any(curv < 0.0):
            raise ContainerError("radial function does not bound a convex set; min rho^2+2rho'^2-rho*rho'' = %.6g" % curv.min())

    def radial(self, theta):
        theta = np.asarray(theta, float)
        rho = np.full_like(theta, self.a0)
        drho = np.zeros_like(theta)
        for k, c in enumerate(self.cos_coeffs, start=1):
            rho = rho + c * np.cos(k * theta)
            drho = drho - k * c * np.sin(k * theta)
        for k, s in enumerate(self.sin_coeffs, start=1):
            rho = rho + s * np.sin(k * theta)
            drho = drho + k * s * np.cos(k * theta)
        return rho, drho

    def _second_derivative(self, theta):
        d2 = np.zeros_like(theta)
        for k, c in enumerate(self.cos_coeffs, start=1):
            d2 -= k * k * c * np.cos(k * theta)
        for k, s in enumerate(self.sin_coeffs, start=1):
            d2 -= k * k * s * np.sin(k * theta)
        return d2

    def boundary(self, t):
        return kernels.radial_points(
            np.atleast_1d(np.asarray(t, float)),
            self.a0,
            np.asarray(self.cos_coeffs, float),
            np.asarray(self.sin_coeffs, float),
        )

    def area(self) -> float:
        # Parseval: (1/2) int rho^2
        sq = sum(c * c for c in self.cos_coeffs) + sum(s * s for s in self.sin_coeffs)
        return math.pi * (self.a0 * self.a0 + 0.5 * sq)

    def circumradius(self) -> float:
        rho, _ = self.radial(np.linspace(0.0, TWO_PI, CHECK_GRID, endpoint=False))
        return float(rho.max())

    def to_json(self) -> dict:
        return {"type": "trig", "a0": self.a0, "cos": list(self.cos_coeffs), "sin": list(self.sin_coeffs)}


@dataclass(frozen=True)
class ConvexPolygon(Container):
    """Strictly convex polygon, counterclockwise, with the origin in its interior.

    Boundary parameter is arc length divided by the total perimeter, measured
    from ``vertices[0]``. At a corner the tangent of the departing edge is used.
    """

    vertices: tuple
    kind: str = field(default="polygon", init=False, repr=False)
    period: float = field(default=1.0, init=False, repr=False)

    def __post_init__(self):
        v = tuple((float(x), float(y)) for x, y in self.vertices)
        object.__setattr__(self, "vertices", v)
        if len(v) < 3:
            raise ContainerError("a polygon container needs at least 3 vertices")
        arr = np.asarray(v)
        edges = np.roll(arr, -1, axis=0) - arr
        turn = edges[:, 0] * np.roll(edges, -1, axis=0)[:, 1] - edges[:, 1] * np.roll(edges, -1, axis=0)[:, 0]
        if np.any(turn <= 0.0):
            raise ContainerError("polygon vertices must be strictly convex and counterclockwise")
        side = edges[:, 0] * (-arr[:, 1]) - edges[:, 1] * (-arr[:, 0])
        if np.any(side <= 0.0):
            raise ContainerError("the origin must lie in the polygon interior")
        lengths = np.hypot(edges[:, 0], edges[:, 1])
        object.__setattr__(self, "_arr", arr)
        object.__setattr__(self, "_units", edges / lengths[:, None])
        object.__setattr__(self, "_length", float(lengths.sum()))
        object.__setattr__(self, "_cum", np.concatenate([[0.0], np.cumsum(lengths)]) / lengths.sum())
        normals = np.column_stack([edges[:, 1], -edges[:, 0]]) / lengths[:, None]
        object.__setattr__(self, "_normals", normals)
        object.__setattr__(self, "_offsets", np.einsum("ij,ij->i", normals, arr))
        object.__setattr__(self, "_polar", np.mod(np.arctan2(arr[:, 1], arr[:, 0]), TWO_PI))

    @property
    def perimeter(self) -> float:
        return self._length

    def _edge_index(self, s):
        k = np.searchsorted(self._cum, s, side="right") - 1
        return np.clip(k, 0, len(self.vertices) - 1)

    def boundary(self, t):
        s = np.mod(np.atleast_1d(np.asarray(t, float)), 1.0)
        k = self._edge_index(s)
        offset = (s - self._cum[k]) * self._length
        pts = self._arr[k] + offset[:, None] * self._units[k]
        # a parameter just short of a corner takes the departing edge's tangent
        kt = np.mod(np.searchsorted(self._cum, s + CORNER_SNAP, side="right") - 1, len(self.vertices))
        tans = self._length * self._units[kt]
        return pts, tans

    def radial(self, theta):
        theta = np.mod(np.asarray(theta, float), TWO_PI)
        # edge k is hit by rays with polar angle in [polar_k, polar_{k+1}) (cyclically)
        rel = np.mod(theta[..., None] - self._polar, TWO_PI)
        span = np.mod(np.roll(self._polar, -1) - self._polar, TWO_PI)
        k = np.argmax(rel < span, axis=-1)
        n = self._normals[k]
        h = self._offsets[k]
        c, s = np.cos(theta), np.sin(theta)
        nr = n[..., 0] * c + n[..., 1] * s
        ndr = -n[..., 0] * s + n[..., 1] * c
        return h / nr, -h * ndr / nr**2

    def area(self) -> float:
        return shoelace_area(self._arr)

    def circumradius(self) -> float:
        return float(np.hypot(self._arr[:, 0], self._arr[:, 1]).max())

    def corners(self) -> np.ndarray:
        return self._cum[:-1].copy()

    def to_json(self) -> dict:
        return {"type": "polygon", "vertices": [list(p) for p in self.vertices]}


def container_from_json(obj) -> Container:
    """Build a container from its JSON description (dict or JSON text)."""
    if isinstance(obj, (str, bytes)):
        obj = json.loads(obj)
    if not isinstance(obj, dict) or "type" not in obj:
        raise ContainerError("container spec must be an object with a 'type' key")
    kind = obj["type"]
    try:
        if kind == "disk":
            return UnitDisk()
        if kind == "trig":
            return TrigRadial(obj.get("a0", 1.0), obj.get("cos", ()), obj.get("sin", ()))
        if kind == "polygon":
            return ConvexPolygon(obj["vertices"])
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, ContainerError):
            raise
        raise ContainerError("malformed %s container: %s" % (kind, exc)) from exc
    raise ContainerError("unknown container type %r" % (kind,))


def load_container(path) -> Container:
    with open(path) as fh:
        return container_from_json(json.load(fh))


def radial(container: Container, theta):
    """``(rho, rho')`` of the container at polar angle ``theta``."""
    rho, drho = container.radial(theta)
    if np.ndim(rho) == 0:
        return float(rho), float(drho)
    return rho, drho


@dataclass(frozen=True)
class CentralAngles:
    """Central angles of a polygon inscribed in the unit disk."""

    angles: tuple

    def __post_init__(self):
        a = tuple(float(x) for x in self.angles)
        if len(a) < 3:
            raise ValueError("a polygon needs at least 3 central angles")
        if any(x < 0.0 or x > math.pi for x in a):
            raise ValueError("central angles must lie in [0, pi]")
        if abs(math.fsum(a) - TWO_PI) > 1e-12:
            raise ValueError("central angles must sum to 2 pi (got %.17g)" % math.fsum(a))
        object.__setattr__(self, "angles", a)

    def __iter__(self):
        return iter(self.angles)

    def __len__(self):
        return len(self.angles)


def _angles(angles) -> np.ndarray:
    if isinstance(angles, CentralAngles):
        return np.asarray(angles.angles)
    return np.asarray(CentralAngles(tuple(angles)).angles)


def disk_area(angles) -> float:
    """Area of the inscribed polygon with the given central angles: ``sum(sin)/2``."""
    return 0.5 * math.fsum(np.sin(_angles(angles)))


def disk_perimeter(angles) -> float:
    """Perimeter ``2 sum sin(theta/2)`` of the inscribed polygon."""
    return 2.0 * math.fsum(np.sin(0.5 * _angles(angles)))


def shoelace_area(points) -> float:
    p = np.asarray(points, float)
    q = np.roll(p, -1, axis=0)
    return 0.5 * float(np.sum(p[:, 0] * q[:, 1] - p[:, 1] * q[:, 0]))


@dataclass(frozen=True)
class InscribedPolygon:
    """Polygon whose vertices sit on ``container``'s boundary at sorted parameters.

    Coincident parameters are allowed and give zero-length sides.
    """

    container: Container
    params: tuple

    def __post_init__(self):
        t = np.asarray(self.params, float)
        if t.ndim != 1 or t.size < 1:
            raise ValueError("params must be a non-empty 1-d sequence")
        if np.any(np.diff(t) < 0.0):
            raise ValueError("params must be sorted ascending")
        period = self.container.period
        if t[-1] - t[0] > period * (1.0 + 1e-12):
            raise ValueError("params span more than one boundary turn")
        shift = period * math.floor(t[0] / period)
        object.__setattr__(self, "params", tuple(float(x) for x in t - shift))

    @property
    def n(self) -> int:
        return len(self.params)

    def gaps(self) -> np.ndarray:
        """Parameter gaps between consecutive vertices, closing gap last."""
        t = np.asarray(self.params)
        return np.append(np.diff(t), self.container.period - (t[-1] - t[0]))

    def vertices(self) -> np.ndarray:
        return vertices(self)

    def area(self) -> float:
        return fan_area(self)

    def perimeter(self) -> float:
        return fan_perimeter(self)


def vertices(poly: InscribedPolygon) -> np.ndarray:
    """Vertices of ``poly`` in counterclockwise order, shape ``(n, 2)``."""
    return poly.container.boundary(np.asarray(poly.params))[0]


def fan_area(poly: InscribedPolygon) -> float:
    """Sum of the triangles (a_i, origin, a_{i+1}), closing triangle included."""
    c = poly.container
    t = np.asarray(poly.params)
    if isinstance(c, ConvexPolygon):
        return shoelace_area(vertices(poly))
    rho, _ = c.radial(t)
    return 0.5 * math.fsum(rho * np.roll(rho, -1) * np.sin(poly.gaps()))


def fan_perimeter(poly: InscribedPolygon) -> float:
    """Sum of the chord lengths, closing chord included."""
    c = poly.container
    t = np.asarray(poly.params)
    if isinstance(c, ConvexPolygon):
        p = vertices(poly)
        e = np.roll(p, -1, axis=0) - p
        return math.fsum(np.hypot(e[:, 0], e[:, 1]))
    rho, _ = c.radial(t)
    nxt = np.roll(rho, -1)
    # rho_i^2 + rho_j^2 - 2 cos(d) rho_i rho_j without the cancellation at small d
    sq = (rho - nxt) ** 2 + 4.0 * rho * nxt * np.sin(0.5 * poly.gaps()) ** 2
    return math.fsum(np.sqrt(sq))


def regular_angles(m: int) -> CentralAngles:
    return CentralAngles((TWO_PI / m,) * m)

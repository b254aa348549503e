"""Convex-geometry kernel.

2D convex polygons (measures, inner parallel bodies, asymmetry indices),
closed-form balls in any dimension, and a small family of analytic 3D
bodies for quermassintegral checks.  Everything here is exact up to
floating point: no rasterization, no sampling except where an optimizer
needs an objective.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import linprog, minimize


# ---------------------------------------------------------------------------
# errors
# ---------------------------------------------------------------------------

class PolygonError(ValueError):
    """Invalid polygon input; carries the offending vertex index."""

    def __init__(self, message, vertex_index=None):
        super().__init__(message)
        self.vertex_index = vertex_index


class EmptyBodyError(ValueError):
    """Erosion depth at or beyond the inradius leaves an empty body."""


class UnsupportedBodyError(ValueError):
    """Analytic 3D body of a kind with no closed forms implemented."""


class OptimizerError(RuntimeError):
    """Center search failed; carries the last iterate and its residual."""

    def __init__(self, message, last_iterate=None, residual=None):
        super().__init__(message)
        self.last_iterate = last_iterate
        self.residual = residual


# ---------------------------------------------------------------------------
# balls (any dimension)
# ---------------------------------------------------------------------------

def unit_ball_volume(dim: int) -> float:
    """omega_n = pi^(n/2) / Gamma(n/2 + 1)."""
    if dim < 1:
        raise ValueError("dimension must be >= 1")
    return math.pi ** (dim / 2.0) / math.gamma(dim / 2.0 + 1.0)


@dataclass(frozen=True)
class BallGeometry:
    """Ball B_R in R^n with closed-form measures and Steiner coefficients."""

    dim: int
    radius: float
    center: tuple = ()

    def __post_init__(self):
        if self.dim < 2:
            raise ValueError("dim must be >= 2")
        if not self.radius > 0.0:
            raise ValueError("radius must be positive")
        if not self.center:
            object.__setattr__(self, "center", (0.0,) * self.dim)
        elif len(self.center) != self.dim:
            raise ValueError("center dimension mismatch")

    @property
    def volume(self) -> float:
        return unit_ball_volume(self.dim) * self.radius ** self.dim

    @property
    def perimeter(self) -> float:
        """Surface measure of the boundary sphere."""
        return self.dim * unit_ball_volume(self.dim) * self.radius ** (self.dim - 1)

    @property
    def diameter(self) -> float:
        return 2.0 * self.radius

    def quermass(self, i: int) -> float:
        """W_i(B_R) = omega_n R^(n-i), the Steiner coefficients of a ball."""
        if not 0 <= i <= self.dim:
            raise ValueError("quermass index out of range")
        return unit_ball_volume(self.dim) * self.radius ** (self.dim - i)

    @classmethod
    def with_perimeter(cls, dim: int, perimeter: float) -> "BallGeometry":
        """Ball with prescribed boundary measure."""
        if not perimeter > 0.0:
            raise ValueError("perimeter must be positive")
        omega = unit_ball_volume(dim)
        radius = (perimeter / (dim * omega)) ** (1.0 / (dim - 1))
        return cls(dim, radius)

    @classmethod
    def with_volume(cls, dim: int, volume: float) -> "BallGeometry":
        """Ball with prescribed volume."""
        if not volume > 0.0:
            raise ValueError("volume must be positive")
        radius = (volume / unit_ball_volume(dim)) ** (1.0 / dim)
        return cls(dim, radius)


# ---------------------------------------------------------------------------
# convex polygons
# ---------------------------------------------------------------------------

def _vertex_array(vertices) -> np.ndarray:
    arr = np.asarray(vertices, dtype=float)
    if arr.ndim != 2 or arr.shape[1] != 2:
        raise PolygonError("vertices must be an (N, 2) array of points")
    if not np.all(np.isfinite(arr)):
        raise PolygonError("vertices must be finite")
    return arr.copy()


class ConvexPolygon:
    """Strictly convex polygon with counterclockwise vertices.

    Immutable by convention: the vertex array is write-protected.  The
    convexity tolerance is an area-scaled cross-product threshold,
    default 1e-12 * (bounding-box diagonal)^2.
    """

    def __init__(self, vertices, tolerance: float | None = None, name: str = "polygon"):
        verts = _vertex_array(vertices)
        if len(verts) < 3:
            raise PolygonError("polygon needs at least 3 vertices")
        lo = verts.min(axis=0)
        hi = verts.max(axis=0)
        diag_sq = float(np.sum((hi - lo) ** 2))
        if tolerance is None:
            tolerance = 1e-12 * diag_sq
        if tolerance < 0.0:
            raise PolygonError("tolerance must be nonnegative")

        edges = np.roll(verts, -1, axis=0) - verts
        edge_sq = np.einsum("ij,ij->i", edges, edges)
        # duplicates are floating-point coincidences, far below the convexity
        # scale; legitimate short edges (e.g. just after an erosion event) pass
        dup = np.nonzero(edge_sq <= tolerance * 1e-12)[0]
        if dup.size:
            raise PolygonError(
                f"duplicate vertices at index {dup[0]}", vertex_index=int(dup[0])
            )
        cross = edges[:, 0] * np.roll(edges[:, 1], -1) - edges[:, 1] * np.roll(edges[:, 0], -1)
        # cross[i] is the turn at vertex i+1; all must be positive (CCW, strict)
        if float(np.sum(cross)) < 0.0:
            raise PolygonError("vertices must be ordered counterclockwise")
        bad = np.nonzero(cross <= tolerance)[0]
        if bad.size:
            idx = int((bad[0] + 1) % len(verts))
            raise PolygonError(
                f"polygon not strictly convex at vertex {idx}", vertex_index=idx
            )

        verts.setflags(write=False)
        self._verts = verts
        self.tolerance = float(tolerance)
        self.name = str(name)
        self._inradius_cache = None

    # -- basic data --------------------------------------------------------

    @property
    def vertices(self) -> np.ndarray:
        return self._verts

    @property
    def num_vertices(self) -> int:
        return len(self._verts)

    @property
    def area(self) -> float:
        v = self._verts
        w = np.roll(v, -1, axis=0)
        return 0.5 * float(np.sum(v[:, 0] * w[:, 1] - v[:, 1] * w[:, 0]))

    @property
    def perimeter(self) -> float:
        edges = np.roll(self._verts, -1, axis=0) - self._verts
        return float(np.sum(np.hypot(edges[:, 0], edges[:, 1])))

    @property
    def centroid(self) -> np.ndarray:
        v = self._verts
        w = np.roll(v, -1, axis=0)
        cross = v[:, 0] * w[:, 1] - v[:, 1] * w[:, 0]
        c = ((v + w) * cross[:, None]).sum(axis=0) / (3.0 * np.sum(cross))
        return c

    @property
    def diameter(self) -> float:
        v = self._verts
        d = v[:, None, :] - v[None, :, :]
        return float(np.sqrt(np.max(np.einsum("ijk,ijk->ij", d, d))))

    def edge_lines(self) -> tuple[np.ndarray, np.ndarray]:
        """Outward unit normals n_i and offsets b_i; interior = {n_i . x < b_i}."""
        v = self._verts
        e = np.roll(v, -1, axis=0) - v
        lengths = np.hypot(e[:, 0], e[:, 1])
        normals = np.column_stack([e[:, 1], -e[:, 0]]) / lengths[:, None]
        offsets = np.einsum("ij,ij->i", normals, v)
        return normals, offsets

    @property
    def inradius(self) -> float:
        return self._chebyshev()[0]

    @property
    def incenter(self) -> np.ndarray:
        return self._chebyshev()[1]

    def _chebyshev(self):
        # largest inscribed circle: maximize r s.t. n_i.x + r <= b_i
        if self._inradius_cache is None:
            normals, offsets = self.edge_lines()
            a_ub = np.column_stack([normals, np.ones(len(offsets))])
            res = linprog(c=[0.0, 0.0, -1.0], A_ub=a_ub, b_ub=offsets,
                          bounds=[(None, None)] * 3, method="highs")
            if not res.success:
                raise PolygonError("inradius LP failed: " + res.message)
            self._inradius_cache = (float(res.x[2]), np.array(res.x[:2]))
        return self._inradius_cache

    def support(self, directions: np.ndarray) -> np.ndarray:
        """Support function h(u) = max_i v_i . u for unit directions u."""
        u = np.atleast_2d(np.asarray(directions, dtype=float))
        return np.max(self._verts @ u.T, axis=0)

    def contains(self, points: np.ndarray, slack: float = 0.0) -> np.ndarray:
        pts = np.atleast_2d(np.asarray(points, dtype=float))
        normals, offsets = self.edge_lines()
        return np.all(pts @ normals.T <= offsets[None, :] + slack, axis=1)

    def translated(self, shift) -> "ConvexPolygon":
        return ConvexPolygon(self._verts + np.asarray(shift, dtype=float),
                             tolerance=self.tolerance, name=self.name)

    # -- serialization -----------------------------------------------------

    def to_json(self) -> dict:
        return {"vertices": [[float(x), float(y)] for x, y in self._verts],
                "name": self.name}

    @classmethod
    def from_json(cls, obj: dict) -> "ConvexPolygon":
        return cls(obj["vertices"], name=obj.get("name", "polygon"))

    def save(self, path) -> None:
        with open(path, "w") as fh:
            json.dump(self.to_json(), fh, indent=2)
            fh.write("\n")

    @classmethod
    def load(cls, path) -> "ConvexPolygon":
        with open(path) as fh:
            return cls.from_json(json.load(fh))

    def __repr__(self):
        return f"ConvexPolygon({self.name!r}, {self.num_vertices} vertices)"


# -- polygon constructors ----------------------------------------------------

def regular_polygon(sides: int, side_length: float = 1.0, name: str | None = None) -> ConvexPolygon:
    """Regular polygon with given side length, centered at the origin."""
    if sides < 3:
        raise PolygonError("need at least 3 sides")
    circum = side_length / (2.0 * math.sin(math.pi / sides))
    ang = 2.0 * math.pi * np.arange(sides) / sides
    verts = circum * np.column_stack([np.cos(ang), np.sin(ang)])
    return ConvexPolygon(verts, name=name or f"regular-{sides}")


def rectangle(width: float, height: float, name: str | None = None) -> ConvexPolygon:
    if not (width > 0 and height > 0):
        raise PolygonError("rectangle sides must be positive")
    w, h = 0.5 * width, 0.5 * height
    verts = [(-w, -h), (w, -h), (w, h), (-w, h)]
    return ConvexPolygon(verts, name=name or f"rect-{width:g}x{height:g}")


def _convex_hull(points: np.ndarray) -> np.ndarray:
    """Andrew monotone chain; returns hull vertices CCW, strict turns only."""
    pts = points[np.lexsort((points[:, 1], points[:, 0]))]

    def half(chain_pts):
        out = []
        for p in chain_pts:
            while len(out) >= 2:
                o, a = out[-2], out[-1]
                if (a[0] - o[0]) * (p[1] - o[1]) - (a[1] - o[1]) * (p[0] - o[0]) <= 0:
                    out.pop()
                else:
                    break
            out.append(p)
        return out

    lower = half(pts)
    upper = half(pts[::-1])
    return np.array(lower[:-1] + upper[:-1])


def random_convex_polygon(sides: int, rng: np.random.Generator,
                          name: str | None = None, max_tries: int = 20000) -> ConvexPolygon:
    """Convex hull of uniform draws in the unit square, redrawn until it has
    exactly the requested vertex count and passes strict-convexity checks."""
    if sides < 3:
        raise PolygonError("need at least 3 sides")
    for _ in range(max_tries):
        pts = rng.random((3 * sides, 2))
        hull = _convex_hull(pts)
        if len(hull) != sides:
            continue
        try:
            return ConvexPolygon(hull, name=name or f"random-{sides}")
        except PolygonError:
            continue
    raise PolygonError(f"could not draw a convex {sides}-gon in {max_tries} tries")


# ---------------------------------------------------------------------------
# measures and erosion
# ---------------------------------------------------------------------------

def measure_polygon(poly: ConvexPolygon) -> tuple[float, float, float]:
    """(area, perimeter, inradius) of a convex polygon."""
    return poly.area, poly.perimeter, poly.inradius


def _clip_halfplane(verts: np.ndarray, normal: np.ndarray, offset: float) -> np.ndarray:
    """Keep {x : normal . x <= offset} of a convex CCW polygon."""
    dist = verts @ normal - offset
    keep = dist <= 0.0
    if np.all(keep):
        return verts
    out = []
    n = len(verts)
    for i in range(n):
        j = (i + 1) % n
        if keep[i]:
            out.append(verts[i])
        if keep[i] != keep[j]:
            s = dist[i] / (dist[i] - dist[j])
            out.append(verts[i] + s * (verts[j] - verts[i]))
    return np.array(out) if out else np.empty((0, 2))


def erode(poly: ConvexPolygon, t: float) -> ConvexPolygon:
    """Inner parallel body: every edge line moved inward by t, intersected.

    Computed by successive half-plane clipping; edges whose offset lines
    become redundant drop out on their own.
    """
    if t < 0.0:
        raise ValueError("erosion depth must be nonnegative")
    if t == 0.0:
        return ConvexPolygon(poly.vertices, tolerance=poly.tolerance, name=poly.name)
    inr = poly.inradius
    if t >= inr:
        raise EmptyBodyError(f"erosion depth {t} >= inradius {inr}")
    normals, offsets = poly.edge_lines()
    verts = np.asarray(poly.vertices, dtype=float)
    for n_i, b_i in zip(normals, offsets - t):
        verts = _clip_halfplane(verts, n_i, b_i)
        if len(verts) < 3:
            raise EmptyBodyError("erosion produced an empty body")
    # drop coincident points and collinear vertices left by vanished edges
    dup_sq = poly.tolerance * 1e-12
    cleaned = [verts[0]]
    for p in verts[1:]:
        if float(np.sum((p - cleaned[-1]) ** 2)) > dup_sq:
            cleaned.append(p)
    if len(cleaned) > 1 and float(np.sum((cleaned[0] - cleaned[-1]) ** 2)) <= dup_sq:
        cleaned.pop()
    verts = np.array(cleaned)
    while len(verts) >= 3:
        e = np.roll(verts, -1, axis=0) - verts
        cross = e[:, 0] * np.roll(e[:, 1], -1) - e[:, 1] * np.roll(e[:, 0], -1)
        bad = np.nonzero(cross <= poly.tolerance)[0]
        if not bad.size:
            break
        verts = np.delete(verts, (bad[0] + 1) % len(verts), axis=0)
    if len(verts) < 3:
        raise EmptyBodyError("erosion produced a degenerate body")
    return ConvexPolygon(verts, name=f"{poly.name}@t={t:g}")


@dataclass(frozen=True)
class ErosionProfile:
    """Piecewise description of t -> (perimeter, area) of the eroded body.

    On segment k (between edge-vanishing events):
        P(t0 + s) = P_k - 2 C_k s
        A(t0 + s) = A_k - P_k s + C_k s^2
    where C_k is the sum of tan(phi/2) over the exterior turning angles of
    the surviving edges.  The final breakpoint is the inradius, where the
    area vanishes.
    """

    breakpoints: np.ndarray       # shape (m+1,), [0, ..., r_in]
    perimeter_start: np.ndarray   # shape (m,)
    area_start: np.ndarray        # shape (m,)
    slope: np.ndarray             # shape (m,), the C_k
    inradius: float

    def _segment(self, t):
        t = np.asarray(t, dtype=float)
        if np.any(t < -1e-12) or np.any(t > self.inradius * (1 + 1e-12) + 1e-300):
            raise ValueError("erosion time outside [0, inradius]")
        t = np.clip(t, 0.0, self.inradius)
        idx = np.clip(np.searchsorted(self.breakpoints, t, side="right") - 1,
                      0, len(self.slope) - 1)
        return t, idx, t - self.breakpoints[idx]

    def perimeter(self, t):
        t, idx, s = self._segment(t)
        return self.perimeter_start[idx] - 2.0 * self.slope[idx] * s

    def area(self, t):
        t, idx, s = self._segment(t)
        return self.area_start[idx] - self.perimeter_start[idx] * s + self.slope[idx] * s * s

    def perimeter_slope(self, t):
        """dP/dt, evaluated on segment interiors (right-continuous at breaks)."""
        _, idx, _ = self._segment(t)
        return -2.0 * self.slope[idx]


def _turning_angles(normals: np.ndarray) -> np.ndarray:
    """Exterior angle at the vertex between consecutive edges i-1, i."""
    prev = np.roll(normals, 1, axis=0)
    dots = np.clip(np.einsum("ij,ij->i", prev, normals), -1.0, 1.0)
    return np.arccos(dots)


def erosion_profile(poly: ConvexPolygon) -> ErosionProfile:
    """Exact erosion profile via an event loop over edge-vanishing times."""
    normals, offsets = poly.edge_lines()
    active = list(range(len(offsets)))
    t = 0.0
    perim = poly.perimeter
    area = poly.area
    breaks = [0.0]
    p_start, a_start, c_slope = [], [], []
    tiny = 1e-13 * max(poly.perimeter, 1.0)

    for _ in range(2 * len(offsets) + 2):
        nrm = normals[active]
        off = offsets[active] - t
        phi = _turning_angles(nrm)
        half_tan = np.tan(0.5 * phi)
        c_k = float(np.sum(half_tan))

        if len(active) == 3:
            # a triangle stage has no further events: it collapses at its
            # incenter, the solution of n_i . x + r = b_i (well-conditioned,
            # unlike area/length residuals that sit below fp resolution)
            sys = np.column_stack([nrm, np.ones(3)])
            _, _, r_left = np.linalg.solve(sys, off)
            p_start.append(perim)
            a_start.append(area)
            c_slope.append(c_k)
            breaks.append(t + r_left)
            break

        # vertex between edges i-1, i solves [n_{i-1}; n_i] x = [b_{i-1}; b_i]
        prev_n = np.roll(nrm, 1, axis=0)
        prev_b = np.roll(off, 1)
        det = prev_n[:, 0] * nrm[:, 1] - prev_n[:, 1] * nrm[:, 0]
        vx = (prev_b * nrm[:, 1] - off * prev_n[:, 1]) / det
        vy = (prev_n[:, 0] * off - nrm[:, 0] * prev_b) / det
        verts = np.column_stack([vx, vy])
        # signed lengths along the edge direction expose phantom edges that
        # already vanished (sign flips once neighbor intersections cross)
        edge_dirs = np.column_stack([-nrm[:, 1], nrm[:, 0]])
        lengths = np.einsum("ij,ij->i",
                            np.roll(verts, -1, axis=0) - verts, edge_dirs)
        if np.any(lengths <= 0.0):
            active = [idx for idx, l in zip(active, lengths) if l > 0.0]
            if len(active) < 3:
                break
            continue

        # edge i shrinks at rate tan(phi_i/2) + tan(phi_{i+1}/2)
        rate = half_tan + np.roll(half_tan, -1)
        dt_edges = lengths / rate
        dt_event = float(np.min(dt_edges))

        # every collapse (to a point or to a segment) coincides with an
        # edge-vanishing event, so event times are the conditioning-safe
        # terminal clock; the area root of A - P s + C s^2 only guards
        # against decisive fp breakdown (near a point collapse its
        # discriminant is a noisy zero, where the parabola vertex P/(2C)
        # is the stable root)
        disc = perim * perim - 4.0 * c_k * area
        if abs(disc) <= 1e-10 * perim * perim:
            dt_zero = perim / (2.0 * c_k)
        elif disc > 0.0:
            dt_zero = 2.0 * area / (perim + math.sqrt(disc))
        else:
            dt_zero = math.inf

        p_start.append(perim)
        a_start.append(area)
        c_slope.append(c_k)

        terminal = False
        if dt_zero < dt_event * (1.0 - 1e-4):
            dt_event = dt_zero
            terminal = True

        # events within relative 1e-9 are simultaneous at fp conditioning
        window = dt_event + tiny + 1e-9 * dt_event
        survivors = [idx for idx, d in zip(active, dt_edges) if d > window]
        if terminal or len(survivors) < 3:
            # terminal segment: the aggregate area root is bias-free where
            # the min over noisy near-equal event times is not; use it when
            # it confirms the event clock
            if math.isfinite(dt_zero) and abs(dt_zero - dt_event) <= 1e-6 * dt_event:
                dt_event = dt_zero
            breaks.append(t + dt_event)
            break
        t += dt_event
        breaks.append(t)
        area = area - perim * dt_event + c_k * dt_event * dt_event
        perim = perim - 2.0 * c_k * dt_event
        active = survivors

    return ErosionProfile(
        breakpoints=np.asarray(breaks),
        perimeter_start=np.asarray(p_start),
        area_start=np.asarray(a_start),
        slope=np.asarray(c_slope),
        inradius=float(breaks[-1]),
    )


def disk_erosion_profile(radius: float) -> ErosionProfile:
    """Exact single-stage profile of a disk: P(s) = 2 pi (R - s), A(s) = pi (R - s)^2."""
    if radius <= 0.0:
        raise ValueError("radius must be positive")
    r = float(radius)
    return ErosionProfile(
        breakpoints=np.array([0.0, r]),
        perimeter_start=np.array([2.0 * np.pi * r]),
        area_start=np.array([np.pi * r * r]),
        slope=np.array([np.pi]),
        inradius=r,
    )


# ---------------------------------------------------------------------------
# analytic 3D bodies and quermassintegrals
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class AnalyticBody3D:
    """3D convex body with closed-form volume, surface area, and W_2.

    Supported kinds: "ball" (radius), "box" (a, b, c), "tetrahedron"
    (regular, edge).  For polytopes W_2 = (1/3) sum_e (l_e/2)(pi - theta_e)
    over edges with dihedral angles theta_e.
    """

    kind: str
    params: tuple = field(default_factory=tuple)

    @classmethod
    def ball(cls, radius: float) -> "AnalyticBody3D":
        if not radius > 0:
            raise ValueError("radius must be positive")
        return cls("ball", (float(radius),))

    @classmethod
    def box(cls, a: float, b: float, c: float) -> "AnalyticBody3D":
        if min(a, b, c) <= 0:
            raise ValueError("box edges must be positive")
        return cls("box", (float(a), float(b), float(c)))

    @classmethod
    def regular_tetrahedron(cls, edge: float) -> "AnalyticBody3D":
        if not edge > 0:
            raise ValueError("edge must be positive")
        return cls("tetrahedron", (float(edge),))

    @property
    def volume(self) -> float:
        if self.kind == "ball":
            (r,) = self.params
            return (4.0 / 3.0) * math.pi * r ** 3
        if self.kind == "box":
            a, b, c = self.params
            return a * b * c
        if self.kind == "tetrahedron":
            (a,) = self.params
            return a ** 3 / (6.0 * math.sqrt(2.0))
        raise UnsupportedBodyError(self.kind)

    @property
    def surface_area(self) -> float:
        if self.kind == "ball":
            (r,) = self.params
            return 4.0 * math.pi * r ** 2
        if self.kind == "box":
            a, b, c = self.params
            return 2.0 * (a * b + b * c + c * a)
        if self.kind == "tetrahedron":
            (a,) = self.params
            return math.sqrt(3.0) * a ** 2
        raise UnsupportedBodyError(self.kind)

    @property
    def mean_width_integral(self) -> float:
        """M(K) = integral of mean curvature = 3 W_2(K)."""
        return 3.0 * quermass_w2(self)


def quermass_w2(body: AnalyticBody3D) -> float:
    """Second quermassintegral W_2 of an analytic 3D body."""
    if body.kind == "ball":
        (r,) = body.params
        return (4.0 * math.pi / 3.0) * r
    if body.kind == "box":
        a, b, c = body.params
        # 12 edges, 4 per direction, all dihedral angles pi/2
        return (math.pi / 3.0) * (a + b + c)
    if body.kind == "tetrahedron":
        (a,) = body.params
        theta = math.acos(1.0 / 3.0)
        return (1.0 / 3.0) * 6.0 * (a / 2.0) * (math.pi - theta)
    raise UnsupportedBodyError(body.kind)


def quermass_w2_lower_bound(perimeter: float, dim: int = 3) -> float:
    """Sharp lower bound n^{-(n-2)/(n-1)} omega_n^{1/(n-1)} P^{(n-2)/(n-1)};
    equality exactly for balls."""
    omega = unit_ball_volume(dim)
    q = (dim - 2.0) / (dim - 1.0)
    return dim ** (-q) * omega ** (1.0 / (dim - 1.0)) * perimeter ** q


# ---------------------------------------------------------------------------
# Hausdorff distance to a ball and asymmetry indices
# ---------------------------------------------------------------------------

_N_SUPPORT = 4096
_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


def _golden_max(fun, a: float, b: float, iters: int = 40) -> float:
    """Golden-section maximization of a scalar function on [a, b]."""
    x1 = b - _GOLDEN * (b - a)
    x2 = a + _GOLDEN * (b - a)
    f1, f2 = fun(x1), fun(x2)
    for _ in range(iters):
        if f1 < f2:
            a, x1, f1 = x1, x2, f2
            x2 = a + _GOLDEN * (b - a)
            f2 = fun(x2)
        else:
            b, x2, f2 = x2, x1, f1
            x1 = b - _GOLDEN * (b - a)
            f1 = fun(x1)
    return max(f1, f2)


class _BallDeviation:
    """sup_theta |h_poly(theta) - x.u(theta) - r| and its maximizer.

    The coarse pass uses a fixed uniform sample of directions; the top
    samples are refined by golden-section search, which recovers the exact
    extrema of the piecewise-sinusoidal objective.
    """

    def __init__(self, poly: ConvexPolygon, r: float):
        self.verts = poly.vertices
        self.r = r
        theta = 2.0 * math.pi * np.arange(_N_SUPPORT) / _N_SUPPORT
        self.dirs = np.column_stack([np.cos(theta), np.sin(theta)])
        self.theta = theta
        self.h_samples = np.max(self.verts @ self.dirs.T, axis=0)
        self.step = 2.0 * math.pi / _N_SUPPORT

    def _phi_at(self, theta: float, x: np.ndarray) -> float:
        u = np.array([math.cos(theta), math.sin(theta)])
        return float(np.max(self.verts @ u)) - float(x @ u) - self.r

    def value_and_subgradient(self, x: np.ndarray) -> tuple[float, np.ndarray]:
        phi = self.h_samples - self.dirs @ x - self.r
        absphi = np.abs(phi)
        # refine around the 8 best coarse samples, 3 golden rounds each
        order = np.argsort(absphi)[-8:]
        best_val = -math.inf
        best_theta = float(self.theta[order[-1]])
        best_sign = 1.0
        for idx in order:
            th = float(self.theta[idx])
            sgn = 1.0 if phi[idx] >= 0 else -1.0
            val = _golden_max(lambda q: sgn * self._phi_at(q, x),
                              th - self.step, th + self.step, iters=3 * 16)
            if val > best_val:
                best_val = val
                best_sign = sgn
                # recover maximizer location for the subgradient
                grid = np.linspace(th - self.step, th + self.step, 65)
                vals = [sgn * self._phi_at(q, x) for q in grid]
                best_theta = float(grid[int(np.argmax(vals))])
        u = np.array([math.cos(best_theta), math.sin(best_theta)])
        return best_val, -best_sign * u

    def value(self, x: np.ndarray) -> float:
        return self.value_and_subgradient(x)[0]


def hausdorff_to_ball(poly: ConvexPolygon, r: float,
                      center0: np.ndarray | None = None) -> tuple[float, np.ndarray]:
    """min over centers x of d_H(poly, B_r(x)).

    For convex bodies d_H equals the sup-norm distance of support functions,
    so the objective is sup_theta |h_poly - x.u - r|: convex and piecewise
    smooth in x.  Minimized by subgradient descent with Polyak-type steps,
    then a coordinate pattern search down to a 1e-9-scale residual.
    """
    if not r > 0.0:
        raise ValueError("ball radius must be positive")
    dev = _BallDeviation(poly, r)
    scale = max(poly.diameter, r)
    x = np.asarray(center0, dtype=float) if center0 is not None else poly.centroid

    f_best, _ = dev.value_and_subgradient(x)
    x_best = x.copy()
    delta = 0.25 * scale
    for k in range(240):
        f, g = dev.value_and_subgradient(x)
        if f < f_best:
            f_best, x_best = f, x.copy()
        gap = delta * 0.97 ** k
        step = gap / float(g @ g)
        x = x - step * g
        if gap < 1e-9 * scale:
            break

    # pattern-search polish on the exact objective
    x = x_best.copy()
    f = f_best
    step = 1e-2 * scale
    dirs = np.array([[1, 0], [-1, 0], [0, 1], [0, -1],
                     [1, 1], [1, -1], [-1, 1], [-1, -1]], dtype=float)
    dirs[4:] /= math.sqrt(2.0)
    while step > 1e-12 * scale:
        moved = False
        for d in dirs:
            trial = x + step * d
            ft = dev.value(trial)
            if ft < f - 1e-15 * scale:
                x, f, moved = trial, ft, True
                break
        if not moved:
            step *= 0.5
    if not math.isfinite(f):
        raise OptimizerError("Hausdorff center search diverged",
                             last_iterate=x, residual=f)
    return f, x


def circle_polygon_intersection_area(poly: ConvexPolygon, center, r: float) -> float:
    """Exact area of poly intersected with the disk B_r(center).

    Classic per-edge decomposition: each edge contributes either a signed
    triangle with the center (sub-segment inside the disk) or a signed
    circular sector (sub-segment outside).
    """
    if r <= 0.0:
        return 0.0
    c = np.asarray(center, dtype=float)
    verts = poly.vertices - c
    total = 0.0
    n = len(verts)
    r_sq = r * r
    for i in range(n):
        a = verts[i]
        b = verts[(i + 1) % n]
        d = b - a
        # segment-circle intersection parameters in (0, 1)
        aa = float(d @ d)
        bb = 2.0 * float(a @ d)
        cc = float(a @ a) - r_sq
        ts = [0.0]
        disc = bb * bb - 4.0 * aa * cc
        if disc > 0.0 and aa > 0.0:
            sq = math.sqrt(disc)
            for tval in ((-bb - sq) / (2 * aa), (-bb + sq) / (2 * aa)):
                if 1e-15 < tval < 1.0 - 1e-15:
                    ts.append(tval)
        ts.sort()
        ts.append(1.0)
        for t0, t1 in zip(ts[:-1], ts[1:]):
            if t1 - t0 < 1e-15:
                continue
            p = a + t0 * d
            q = a + t1 * d
            mid = a + 0.5 * (t0 + t1) * d
            if float(mid @ mid) <= r_sq:
                total += 0.5 * float(p[0] * q[1] - p[1] * q[0])
            else:
                ang = math.atan2(p[0] * q[1] - p[1] * q[0], float(p @ q))
                total += 0.5 * r_sq * ang
    return total


def fraenkel_asymmetry(poly: ConvexPolygon) -> tuple[float, np.ndarray]:
    """alpha = min over x of |poly symdiff B_r(x)| / |poly| with pi r^2 = |poly|.

    Smooth near the optimum for convex bodies: centroid start plus a
    Nelder-Mead polish on the exact overlap objective.
    """
    area = poly.area
    r = math.sqrt(area / math.pi)

    def objective(x):
        overlap = circle_polygon_intersection_area(poly, x, r)
        return 2.0 * (area - overlap) / area

    x0 = poly.centroid
    res = minimize(objective, x0, method="Nelder-Mead",
                   options={"xatol": 1e-10 * max(poly.diameter, 1.0),
                            "fatol": 1e-13, "maxiter": 600})
    x_best = res.x if res.fun <= objective(x0) else x0
    return float(objective(x_best)), np.asarray(x_best)


@dataclass(frozen=True)
class AsymmetryReport:
    """Isoperimetric deficits and asymmetry indices of a planar convex body.

    deficit_D = P(E) - P(ball of equal area)
    deficit_M = |ball of equal perimeter| - |E|
    hausdorff_star / hausdorff_sharp: best Hausdorff distance to a
    perimeter-matched / area-matched disk; fraenkel: symmetric-difference
    index to an area-matched disk.
    """

    deficit_D: float
    deficit_M: float
    hausdorff_star: float
    hausdorff_sharp: float
    fraenkel: float
    best_centers: dict


def asymmetry_report(poly: ConvexPolygon) -> AsymmetryReport:
    area, per, _ = measure_polygon(poly)
    r_star = per / (2.0 * math.pi)
    r_sharp = math.sqrt(area / math.pi)
    d_star, c_star = hausdorff_to_ball(poly, r_star)
    d_sharp, c_sharp = hausdorff_to_ball(poly, r_sharp)
    alpha, c_frk = fraenkel_asymmetry(poly)
    return AsymmetryReport(
        deficit_D=per - 2.0 * math.sqrt(math.pi * area),
        deficit_M=per * per / (4.0 * math.pi) - area,
        hausdorff_star=d_star,
        hausdorff_sharp=d_sharp,
        fraenkel=alpha,
        best_centers={
            "hausdorff_star": tuple(map(float, c_star)),
            "hausdorff_sharp": tuple(map(float, c_sharp)),
            "fraenkel": tuple(map(float, c_frk)),
        },
    )

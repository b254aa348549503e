"""Transplanting radial eigenprofiles onto convex polygons.

A strictly monotone radial profile v on a perimeter-matched disk induces a
test function on a polygon whose level sets are the inner-parallel (eroded)
bodies: the level at erosion depth d is fixed by requiring the level-set
speed |grad| to match the disk profile, i.e. by inverting the depth map
G^{-1}(t) = int dt / g(t) from the boundary level inward.  The Rayleigh
quotient of that function is then exact up to quadrature, because perimeter
and area of the eroded bodies are closed-form piecewise polynomials, and it
bounds the polygon eigenvalue from the eigenvalue side of the profile.

Working levels run upward from the boundary value: for a profile decreasing
in radius (positive boundary parameter) the working level is the profile
level itself; for an increasing profile (negative parameter) it is the drop
below the boundary maximum.  In both cases depth 0 is the boundary.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from .geometry import ConvexPolygon, ErosionProfile, erosion_profile
from .radial import LevelSpeed, RadialEigenpair, constant_C, level_speed

POSITIVE_BETA = "positive_beta"
NEGATIVE_BETA = "negative_beta"

_GAUSS = np.polynomial.legendre.leggauss(16)


class TransplantError(RuntimeError):
    """Base class for transplantation failures."""


class PerimeterMismatchError(TransplantError):
    """Polygon perimeter does not match the disk perimeter of the profile."""

    def __init__(self, message, polygon_perimeter=None, ball_perimeter=None):
        super().__init__(message)
        self.polygon_perimeter = polygon_perimeter
        self.ball_perimeter = ball_perimeter


class QuadratureError(TransplantError):
    """Depth quadrature failed near a vanishing-speed endpoint."""

    def __init__(self, message, endpoint=None):
        super().__init__(message)
        self.endpoint = endpoint


class DegenerateRangeError(TransplantError):
    """Inradius too small: the transplanted level range collapses."""

    def __init__(self, message, inradius=None):
        super().__init__(message)
        self.inradius = inradius


def _branch_of(beta: float) -> str:
    if beta > 0.0 or math.isinf(beta):
        return POSITIVE_BETA
    if beta < 0.0:
        return NEGATIVE_BETA
    raise TransplantError("constant profile (zero boundary parameter): nothing to transplant")


@dataclass
class TransplantMap:
    """Monotone map G between erosion depth and working level.

    Node depths come from composite quadrature of 1/g over the level grid,
    never from the stored radius grid, so round trips against that grid
    remain a genuine consistency check.
    """

    speed: LevelSpeed
    branch: str
    working: np.ndarray        # ascending working levels, working[0] at depth 0
    depths: np.ndarray         # quadrature depth of each working level
    working_radii: np.ndarray  # disk level-set radius at each working level

    @property
    def depth_total(self) -> float:
        return float(self.depths[-1])

    @property
    def level_span(self) -> float:
        return float(self.working[-1] - self.working[0])

    def level_of(self, w):
        """Profile level for a working level."""
        if self.branch == POSITIVE_BETA:
            return w
        return self.speed.levels[-1] - np.asarray(w, dtype=float)

    def working_of(self, t):
        if self.branch == POSITIVE_BETA:
            return t
        return self.speed.levels[-1] - np.asarray(t, dtype=float)

    def speed_at_working(self, w):
        return self.speed.speed_at(self.level_of(w))

    def depth_at(self, w):
        """Depth of working level w (vectorized): node cumsum plus a cell tail."""
        scalar = np.ndim(w) == 0
        w_arr = np.atleast_1d(np.asarray(w, dtype=float))
        j = np.clip(np.searchsorted(self.working, w_arr, side="right") - 1,
                    0, len(self.working) - 2)
        if self.branch == POSITIVE_BETA:
            a, b = self.working[j], w_arr
        else:
            top = self.speed.levels[-1]
            a, b = top - w_arr, top - self.working[j]
        out = self.depths[j] + self.speed.cell_inverse_integrals(a, b)
        out = np.where(w_arr >= self.working[-1], self.depths[-1], out)
        out = np.where(w_arr <= self.working[0], 0.0, out)
        return float(out[0]) if scalar else out

    def __call__(self, d):
        """Working level at depth d (inverse of depth_at), clamped to the range."""
        scalar = np.ndim(d) == 0
        d_arr = np.atleast_1d(np.asarray(d, dtype=float))
        out = np.array([self._level_at_depth(float(di)) for di in d_arr])
        return float(out[0]) if scalar else out

    def _level_at_depth(self, d: float) -> float:
        if d <= 0.0:
            return float(self.working[0])
        if d >= self.depths[-1]:
            return float(self.working[-1])
        k = int(np.searchsorted(self.depths, d, side="right")) - 1
        lo, hi = float(self.working[k]), float(self.working[k + 1])
        if self.depths[k] == d:
            return lo
        return float(brentq(lambda w: float(self.depth_at(w)) - d, lo, hi,
                            xtol=1e-15 * max(1.0, self.level_span), rtol=1e-15))

    def to_json(self) -> dict:
        return {
            "branch": self.branch,
            "depth_total": self.depth_total,
            "level_span": self.level_span,
            "working": self.working.tolist(),
            "depths": self.depths.tolist(),
        }


def build_G(speed: LevelSpeed, branch: str) -> TransplantMap:
    """Depth-to-level map by cumulative quadrature of 1/g from the boundary level."""
    if branch not in (POSITIVE_BETA, NEGATIVE_BETA):
        raise ValueError(f"unknown branch {branch!r}")
    t = speed.levels
    center_on_top = speed.center_level >= 0.5 * (t[0] + t[-1])
    if branch == POSITIVE_BETA and not center_on_top:
        raise ValueError("positive branch needs a profile decreasing toward the boundary")
    if branch == NEGATIVE_BETA and center_on_top:
        raise ValueError("negative branch needs a profile increasing toward the boundary")
    cells = speed.cell_inverse_integrals(t[:-1], t[1:])
    if not np.all(np.isfinite(cells)):
        bad = int(np.argmax(~np.isfinite(cells)))
        raise QuadratureError(
            f"non-finite depth integral near level {t[bad]:.6g}", endpoint=float(t[bad]))
    if branch == POSITIVE_BETA:
        working = t.copy()
        radii_w = speed.radii.copy()
        depths = np.concatenate([[0.0], np.cumsum(cells)])
    else:
        working = t[-1] - t[::-1]
        radii_w = speed.radii[::-1].copy()
        depths = np.concatenate([[0.0], np.cumsum(cells[::-1])])
    if np.any(np.diff(depths) <= 0.0):
        bad = int(np.argmax(np.diff(depths) <= 0.0))
        raise QuadratureError(
            f"depth map stalls near working level {working[bad]:.6g}",
            endpoint=float(working[bad]))
    return TransplantMap(speed=speed, branch=branch, working=working,
                         depths=depths, working_radii=radii_w)


@dataclass(frozen=True)
class TransplantQuotient:
    """Rayleigh quotient of the transplanted test function on a polygon."""

    dirichlet_energy: float
    boundary_term: float
    mass: float
    quotient: float
    branch: str
    truncated: bool
    u_min: float
    u_max: float

    def to_json(self) -> dict:
        return {
            "dirichlet_energy": self.dirichlet_energy,
            "boundary_term": self.boundary_term,
            "mass": self.mass,
            "quotient": self.quotient,
            "branch": self.branch,
            "truncated": self.truncated,
            "u_min": self.u_min,
            "u_max": self.u_max,
        }


def _range_cut(gmap: TransplantMap, inradius: float) -> tuple[float, float, bool]:
    """Depth and working level where the polygon stops the transplant.

    The 1e-8 window absorbs quadrature noise in depth_total for the disk
    itself; any actual polygon falls short of the disk inradius by far more.
    """
    truncated = inradius < gmap.depth_total * (1.0 - 1e-8)
    s_max = min(inradius, gmap.depth_total)
    w_max = gmap(s_max) if truncated else float(gmap.working[-1])
    return s_max, w_max, truncated


def quotient_from_profile(profile: ErosionProfile, perimeter: float, area: float,
                          pair: RadialEigenpair,
                          gmap: TransplantMap | None = None) -> TransplantQuotient:
    """Quotient of the transplanted profile against an explicit erosion profile.

    Energy integrates g^{p-1} P(eroded body) over levels, mass integrates the
    layer-cake of u^p with the eroded areas; both are composite Gauss over the
    working-level cells with extra knots at the erosion breakpoints.
    """
    if pair.dim != 2:
        raise ValueError("transplantation runs on plane polygons; need a dim-2 profile")
    p, beta = pair.p, pair.beta
    branch = _branch_of(beta)
    if gmap is None:
        gmap = build_G(level_speed(pair), branch)
    inradius = profile.inradius
    if inradius <= 0.0:
        raise DegenerateRangeError("empty inradius", inradius=inradius)
    s_max, w_max, truncated = _range_cut(gmap, inradius)
    w0 = float(gmap.working[0])
    if not w_max > w0:
        raise DegenerateRangeError(
            f"level range collapses at inradius {inradius:.3e}", inradius=inradius)

    inner = gmap.working[(gmap.working > w0) & (gmap.working < w_max)]
    bks = profile.breakpoints
    bks = bks[(bks > 0.0) & (bks < s_max * (1.0 - 1e-14))]
    wbks = np.asarray(gmap(bks)) if len(bks) else np.empty(0)
    knots = np.unique(np.concatenate([[w0, w_max], inner, wbks]))
    a, b = knots[:-1], knots[1:]
    nodes, weights = _GAUSS
    x = (0.5 * (b - a)[:, None] * nodes + 0.5 * (b + a)[:, None]).ravel()
    wq = (0.5 * (b - a)[:, None] * weights).ravel()

    s = np.clip(gmap.depth_at(x), 0.0, inradius)
    g = gmap.speed_at_working(x)
    per_s = profile.perimeter(s)
    area_s = profile.area(s)
    energy = float(np.sum(wq * g ** (p - 1.0) * per_s))
    if gmap.branch == POSITIVE_BETA:
        mass = pair.v_min ** p * area + float(np.sum(wq * p * x ** (p - 1.0) * area_s))
        boundary = 0.0 if math.isinf(beta) else beta * pair.v_min ** p * perimeter
        u_min, u_max = pair.v_min, float(gmap.level_of(w_max))
    else:
        top = pair.v_max
        mass = (top - w_max) ** p * area + float(
            np.sum(wq * p * (top - x) ** (p - 1.0) * (area - area_s)))
        boundary = beta * top ** p * perimeter
        u_min, u_max = top - w_max, top
    return TransplantQuotient(
        dirichlet_energy=energy, boundary_term=boundary, mass=mass,
        quotient=(energy + boundary) / mass, branch=gmap.branch,
        truncated=truncated, u_min=float(u_min), u_max=float(u_max))


def _check_perimeter(poly: ConvexPolygon, pair: RadialEigenpair) -> None:
    rel = abs(poly.perimeter - pair.ball_perimeter) / pair.ball_perimeter
    if rel > 1e-9:
        raise PerimeterMismatchError(
            f"polygon perimeter {poly.perimeter:.12g} does not match the disk "
            f"perimeter {pair.ball_perimeter:.12g} (relative gap {rel:.3e})",
            polygon_perimeter=poly.perimeter, ball_perimeter=pair.ball_perimeter)


def transplant_quotient(poly: ConvexPolygon, pair: RadialEigenpair) -> TransplantQuotient:
    """One-sided eigenvalue bound for the polygon from the transplanted profile.

    The quotient of any admissible test function lies above the first
    eigenvalue, so the returned value is an upper bound for both signs of the
    boundary parameter.  Requires the polygon perimeter to match the disk
    perimeter of the profile within 1e-9 relative.
    """
    _check_perimeter(poly, pair)
    return quotient_from_profile(erosion_profile(poly), poly.perimeter, poly.area, pair)


@dataclass(frozen=True)
class ProofChainReport:
    """Slacks of every comparison step linking polygon quotient to disk eigenvalue.

    Per-level arrays (at the reported working levels):
      perimeter_slack: disk level-set perimeter minus polygon one, >= 0;
      rate_slack: the same gap divided by the level speed (measure-derivative
        comparison), >= 0;
      gap_slack: decrease of (disk minus polygon) level-set measure between
        consecutive levels, >= 0.
    Scalars:
      energy_slack: disk Dirichlet energy minus polygon energy, >= 0;
      mass_slack: margin of the layer-cake mass bound, >= 0;
      bound_slack: closed-form eigenvalue bound minus the quotient, >= 0
        (NaN when the closed form degenerates).
    """

    branch: str
    truncated: bool
    working_levels: np.ndarray
    perimeter_slack: np.ndarray
    rate_slack: np.ndarray
    gap_slack: np.ndarray
    energy_slack: float
    mass_slack: float
    bound_slack: float

    def min_slack(self) -> float:
        parts = [self.perimeter_slack, self.rate_slack, self.gap_slack,
                 np.array([self.energy_slack, self.mass_slack, self.bound_slack])]
        vals = np.concatenate([np.asarray(x, dtype=float).ravel() for x in parts])
        return float(np.nanmin(vals))

    def ok(self, tol: float = 1e-8) -> bool:
        return self.min_slack() >= -tol

    def to_json(self) -> dict:
        return {
            "branch": self.branch,
            "truncated": self.truncated,
            "working_levels": self.working_levels.tolist(),
            "perimeter_slack": self.perimeter_slack.tolist(),
            "rate_slack": self.rate_slack.tolist(),
            "gap_slack": self.gap_slack.tolist(),
            "energy_slack": self.energy_slack,
            "mass_slack": self.mass_slack,
            "bound_slack": self.bound_slack,
            "min_slack": self.min_slack(),
        }


def proof_chain_from_profile(profile: ErosionProfile, perimeter: float, area: float,
                             pair: RadialEigenpair,
                             num_levels: int = 64) -> ProofChainReport:
    """Instantiate the comparison chain numerically on an erosion profile.

    Levels are taken from the stored working grid (cumulative node depths are
    quadrature-exact there).  Levels within 0.1% of the center value are
    dropped: the level speed vanishes at the center, so the rate comparison
    divides by it and would only amplify quadrature noise there.
    """
    gmap = build_G(level_speed(pair), _branch_of(pair.beta))
    q = quotient_from_profile(profile, perimeter, area, pair, gmap=gmap)
    inradius = profile.inradius
    _, w_max, _ = _range_cut(gmap, inradius)
    span = gmap.level_span
    center_gap = gmap.working[-1] - gmap.working
    usable = np.nonzero((gmap.working <= w_max + 1e-15 * span)
                        & (center_gap > 1e-3 * span))[0]
    sel = usable[np.unique(np.round(
        np.linspace(0, len(usable) - 1, num_levels)).astype(int))]

    wlev = gmap.working[sel]
    s = np.clip(gmap.depths[sel], 0.0, inradius)
    r_disk = gmap.working_radii[sel]
    per_poly = profile.perimeter(s)
    area_poly = profile.area(s)
    g = gmap.speed_at_working(wlev)

    perimeter_slack = 2.0 * np.pi * r_disk - per_poly
    rate_slack = perimeter_slack / g
    gamma = np.pi * r_disk ** 2 - area_poly
    gap_slack = gamma[:-1] - gamma[1:]

    mass_ball = pair.lp_norm_p
    if math.isinf(pair.beta):
        boundary_ball = 0.0
    else:
        boundary_ball = pair.beta * pair.boundary_value ** pair.p * pair.ball_perimeter
    energy_ball = pair.eigenvalue * mass_ball - boundary_ball
    vol_ball = pair.ball_volume
    energy_slack = energy_ball - q.dirichlet_energy
    if gmap.branch == POSITIVE_BETA:
        mass_slack = q.mass - (mass_ball - pair.v_max ** pair.p * (vol_ball - area))
    else:
        mass_slack = (mass_ball - pair.v_min ** pair.p * (vol_ball - area)) - q.mass
    denom = 1.0 - constant_C(pair) * (1.0 - area / vol_ball)
    bound_slack = pair.eigenvalue / denom - q.quotient if denom > 0.0 else float("nan")

    return ProofChainReport(
        branch=gmap.branch, truncated=q.truncated, working_levels=wlev,
        perimeter_slack=perimeter_slack, rate_slack=rate_slack, gap_slack=gap_slack,
        energy_slack=float(energy_slack), mass_slack=float(mass_slack),
        bound_slack=float(bound_slack))


def proof_chain_check(poly: ConvexPolygon, pair: RadialEigenpair,
                      num_levels: int = 64) -> ProofChainReport:
    """Per-inequality slack report for a perimeter-matched polygon."""
    _check_perimeter(poly, pair)
    return proof_chain_from_profile(erosion_profile(poly), poly.perimeter,
                                    poly.area, pair, num_levels=num_levels)

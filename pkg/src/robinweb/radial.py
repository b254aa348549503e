"""First Robin eigenpairs of the p-Laplacian on balls.

The radial profile solves (r^{n-1} |v'|^{p-2} v')' = -lambda r^{n-1} |v|^{p-2} v
with v(0) = 1, v'(0) = 0 and boundary condition
|v'(R)|^{p-2} v'(R) + beta |v(R)|^{p-2} v(R) = 0.

Shooting on the first-order system (v, w) with w = |v'|^{p-2} v' (the smooth
variable when p != 2), eigenvalue located by root-finding on the monotone
boundary residual.
"""

from __future__ import annotations

import json
import math
import os
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
from scipy.integrate import solve_ivp, simpson
from scipy.interpolate import CubicHermiteSpline, PchipInterpolator
from scipy.optimize import brentq

from .geometry import unit_ball_volume

_SCHEMA = 1


@lru_cache(maxsize=8)
def _gauss_rule(num: int):
    return np.polynomial.legendre.leggauss(num)


class BracketError(RuntimeError):
    """No sign change of the boundary residual in the scanned interval."""

    def __init__(self, message, interval=None):
        super().__init__(message)
        self.interval = interval


class ODEStepError(RuntimeError):
    """Radial integration failed; carries the radius reached."""

    def __init__(self, message, radius_reached=None):
        super().__init__(message)
        self.radius_reached = radius_reached


class ProfileConsistencyError(RuntimeError):
    """Profile violates an assumption (e.g. monotonicity) it should satisfy."""


# ---------------------------------------------------------------------------
# eigenpair container
# ---------------------------------------------------------------------------

@dataclass
class RadialEigenpair:
    """First radial Robin eigenpair on the ball B_R in R^n, v(0) = 1."""

    dim: int
    p: float
    beta: float
    radius: float
    eigenvalue: float
    grid: np.ndarray
    values: np.ndarray
    derivs: np.ndarray
    lp_norm_p: float = 0.0
    start_sensitivity: float = 0.0
    _spline: object = field(default=None, repr=False, compare=False)

    @property
    def v_min(self) -> float:
        return float(np.min(self.values))

    @property
    def v_max(self) -> float:
        return float(np.max(self.values))

    @property
    def linf(self) -> float:
        return float(np.max(np.abs(self.values)))

    @property
    def boundary_value(self) -> float:
        return float(self.values[-1])

    @property
    def ball_volume(self) -> float:
        return unit_ball_volume(self.dim) * self.radius ** self.dim

    @property
    def ball_perimeter(self) -> float:
        return self.dim * unit_ball_volume(self.dim) * self.radius ** (self.dim - 1)

    @property
    def boundary_residual(self) -> float:
        """|w(R) + beta |v(R)|^{p-2} v(R)| relative to the term scale."""
        v_r = float(self.values[-1])
        dv_r = float(self.derivs[-1])
        w_r = _odd_pow(dv_r, self.p - 1.0)
        if math.isinf(self.beta):
            return abs(v_r)
        flux = self.beta * _odd_pow(v_r, self.p - 1.0)
        scale = max(abs(w_r), abs(flux), 1e-300)
        return abs(w_r + flux) / scale

    def _hermite(self):
        if self._spline is None:
            self._spline = CubicHermiteSpline(self.grid, self.values, self.derivs)
        return self._spline

    def value_at(self, r):
        return self._hermite()(np.clip(r, 0.0, self.radius))

    def deriv_at(self, r):
        return self._hermite().derivative()(np.clip(r, 0.0, self.radius))

    # -- serialization ------------------------------------------------------

    def to_json(self) -> dict:
        return {
            "schema": _SCHEMA,
            "dim": self.dim,
            "p": self.p,
            "beta": self.beta,
            "radius": self.radius,
            "eigenvalue": self.eigenvalue,
            "grid": self.grid.tolist(),
            "values": self.values.tolist(),
            "derivs": self.derivs.tolist(),
            "lp_norm_p": self.lp_norm_p,
            "start_sensitivity": self.start_sensitivity,
        }

    @classmethod
    def from_json(cls, obj: dict) -> "RadialEigenpair":
        return cls(
            dim=int(obj["dim"]),
            p=float(obj["p"]),
            beta=float(obj["beta"]),
            radius=float(obj["radius"]),
            eigenvalue=float(obj["eigenvalue"]),
            grid=np.asarray(obj["grid"]),
            values=np.asarray(obj["values"]),
            derivs=np.asarray(obj["derivs"]),
            lp_norm_p=float(obj["lp_norm_p"]),
            start_sensitivity=float(obj.get("start_sensitivity", 0.0)),
        )


class RadialCache:
    """JSON file cache for eigenpairs, keyed by (n, p, beta, R) at 12
    significant digits.  Directory given explicitly or via ROBINWEB_CACHE."""

    def __init__(self, directory=None):
        directory = directory or os.environ.get("ROBINWEB_CACHE")
        if directory is None:
            raise ValueError("cache directory not given and ROBINWEB_CACHE unset")
        self.directory = str(directory)
        os.makedirs(self.directory, exist_ok=True)

    def _path(self, n, p, beta, R, num_points):
        key = f"radial_{n}_{p:.12g}_{beta:.12g}_{R:.12g}_{num_points}.json"
        return os.path.join(self.directory, key)

    def load(self, n, p, beta, R, num_points):
        path = self._path(n, p, beta, R, num_points)
        if not os.path.exists(path):
            return None
        with open(path) as fh:
            return RadialEigenpair.from_json(json.load(fh))

    def store(self, pair: RadialEigenpair, num_points: int) -> None:
        path = self._path(pair.dim, pair.p, pair.beta, pair.radius, num_points)
        with open(path, "w") as fh:
            json.dump(pair.to_json(), fh)


# ---------------------------------------------------------------------------
# shooting machinery
# ---------------------------------------------------------------------------

def _odd_pow(x, expo):
    """sign(x) |x|^expo, the odd power used throughout the p-Laplacian."""
    return np.sign(x) * np.abs(x) ** expo


def _output_grid(R: float, num_points: int) -> np.ndarray:
    # quadratic clustering toward r = R, where v varies fastest for large |beta|
    s = np.linspace(0.0, 1.0, num_points)
    return R * (1.0 - (1.0 - s) ** 2)


def _integrate(n, p, lam, R, eps_factor=1e-6, dense=False):
    """Integrate (v, w) from the series start at eps to R."""
    if lam == 0.0:
        raise ValueError("lambda = 0 has the constant profile; no ODE needed")
    q = 1.0 / (p - 1.0)
    eps = eps_factor * R
    # leading-order series: v' = -sign(lam) (|lam| r / n)^{1/(p-1)}
    amp = (abs(lam) / n) ** q
    v_eps = 1.0 - math.copysign(1.0, lam) * (p - 1.0) / p * amp * eps ** (p / (p - 1.0))
    w_eps = -lam * eps / n

    def rhs(r, y):
        v, w = y
        return (_odd_pow(w, q), -lam * _odd_pow(v, p - 1.0) - (n - 1.0) * w / r)

    sol = solve_ivp(rhs, (eps, R), (v_eps, w_eps), method="RK45",
                    rtol=1e-11, atol=1e-14, dense_output=dense)
    if not sol.success:
        raise ODEStepError("radial integration failed: " + sol.message,
                           radius_reached=float(sol.t[-1]) if len(sol.t) else eps)
    return sol


def _boundary_state(n, p, lam, R, eps_factor=1e-6):
    sol = _integrate(n, p, lam, R, eps_factor=eps_factor)
    v_r, w_r = sol.y[0, -1], sol.y[1, -1]
    return float(v_r), float(w_r)


def _robin_residual(n, p, lam, beta, R, eps_factor=1e-6):
    v_r, w_r = _boundary_state(n, p, lam, R, eps_factor=eps_factor)
    return w_r + beta * _odd_pow(v_r, p - 1.0)


def _constant_pair(n, p, beta, R, num_points):
    grid = _output_grid(R, num_points)
    values = np.ones_like(grid)
    derivs = np.zeros_like(grid)
    return RadialEigenpair(dim=n, p=p, beta=beta, radius=R, eigenvalue=0.0,
                           grid=grid, values=values, derivs=derivs,
                           lp_norm_p=unit_ball_volume(n) * R ** n)


def _finalize(n, p, beta, R, lam, num_points):
    """Dense solve at the converged eigenvalue; assemble the eigenpair."""
    q = 1.0 / (p - 1.0)
    eps = 1e-6 * R
    sol = _integrate(n, p, lam, R, dense=True)
    grid = _output_grid(R, num_points)
    inside = grid >= eps
    vals = np.empty_like(grid)
    ders = np.empty_like(grid)
    y = sol.sol(grid[inside])
    vals[inside] = y[0]
    ders[inside] = _odd_pow(y[1], q)
    # below the series start: leading-order expansion around the center
    amp = (abs(lam) / n) ** q
    small = grid[~inside]
    vals[~inside] = 1.0 - math.copysign(1.0, lam) * (p - 1.0) / p * amp * small ** (p * q)
    ders[~inside] = -math.copysign(1.0, lam) * amp * small ** q

    # sensitivity of the boundary state to the series start (Richardson-style
    # consistency check at twice the start radius)
    v_r, w_r = float(y[0, -1]), float(y[1, -1])
    v2, w2 = _boundary_state(n, p, lam, R, eps_factor=2e-6)
    scale = max(abs(v_r), abs(w_r))
    sensitivity = max(abs(v2 - v_r), abs(w2 - w_r)) / scale

    pair = RadialEigenpair(dim=n, p=p, beta=beta, radius=R, eigenvalue=lam,
                           grid=grid, values=vals, derivs=ders,
                           start_sensitivity=sensitivity)
    pair.lp_norm_p = _radial_integral(pair, lambda v, dv: np.abs(v) ** p)
    return pair


def _radial_integral(pair: RadialEigenpair, integrand, num=8193) -> float:
    """n omega_n int_0^R f(v, v') r^{n-1} dr via Simpson on a refined grid."""
    r = np.linspace(0.0, pair.radius, num)
    v = pair.value_at(r)
    dv = pair.deriv_at(r)
    f = integrand(v, dv) * r ** (pair.dim - 1)
    return pair.dim * unit_ball_volume(pair.dim) * float(simpson(f, x=r))


_MEMO: dict = {}


def _memo_key(kind, n, p, beta, R, num_points):
    return (kind, n, f"{p:.12g}", f"{beta:.12g}", f"{R:.12g}", num_points)


def dirichlet_radial(n: int, p: float, R: float, num_points: int = 2048,
                     cache: RadialCache | None = None) -> RadialEigenpair:
    """First Dirichlet eigenpair on B_R: shooting on v(R) = 0, v(0) = 1."""
    _check_args(n, p, R)
    key = _memo_key("dirichlet", n, p, math.inf, R, num_points)
    if key in _MEMO:
        return _MEMO[key]
    if cache is not None:
        hit = cache.load(n, p, math.inf, R, num_points)
        if hit is not None:
            _MEMO[key] = hit
            return hit

    def res(lam):
        return _boundary_state(n, p, lam, R)[0]

    # Rayleigh quotient of cos(pi r / 2R) gives a rigorous upper bound for
    # the first eigenvalue, safely below the second one
    r = np.linspace(0.0, R, 4097)
    phi = np.cos(0.5 * math.pi * r / R)
    dphi = -0.5 * math.pi / R * np.sin(0.5 * math.pi * r / R)
    num = simpson(np.abs(dphi) ** p * r ** (n - 1), x=r)
    den = simpson(np.abs(phi) ** p * r ** (n - 1), x=r)
    hi = float(num / den)
    lo = hi / 4.0
    for _ in range(60):
        if res(hi) < 0.0:
            break
        lo = hi
        hi *= 1.25
    else:
        raise BracketError("no Dirichlet bracket found", interval=(lo, hi))
    while res(lo) <= 0.0:
        lo *= 0.5
        if lo < 1e-12 * hi:
            raise BracketError("no Dirichlet bracket found", interval=(lo, hi))
    lam = brentq(res, lo, hi, xtol=1e-14 * hi, rtol=4 * np.finfo(float).eps)
    pair = _finalize(n, p, math.inf, R, lam, num_points)
    _MEMO[key] = pair
    if cache is not None:
        cache.store(pair, num_points)
    return pair


def solve_radial(n: int, p: float, beta: float, R: float, num_points: int = 2048,
                 cache: RadialCache | None = None) -> RadialEigenpair:
    """First Robin eigenpair on B_R; beta = 0 returns the constant Neumann pair."""
    _check_args(n, p, R)
    if beta == 0.0:
        return _constant_pair(n, p, beta, R, num_points)
    key = _memo_key("robin", n, p, beta, R, num_points)
    if key in _MEMO:
        return _MEMO[key]
    if cache is not None:
        hit = cache.load(n, p, beta, R, num_points)
        if hit is not None:
            _MEMO[key] = hit
            return hit

    def res(lam):
        if lam == 0.0:
            return beta
        return _robin_residual(n, p, lam, beta, R)

    if beta > 0.0:
        # 0 < lambda < lambda_Dirichlet; residual is positive at 0+
        lam_d = dirichlet_radial(n, p, R, num_points=num_points).eigenvalue
        lo, hi = 0.0, lam_d * (1.0 - 1e-13)
        if res(hi) >= 0.0:
            raise BracketError("no Robin bracket below the Dirichlet eigenvalue",
                               interval=(lo, hi))
    else:
        # lambda <= beta n / R, the quotient of the constant test function
        hi = beta * n / R
        if res(hi) >= 0.0:
            hi *= 1.0 - 1e-12
        lo = None
        trial = 2.0 * beta * n / R
        for _ in range(42):
            if res(trial) > 0.0:
                lo = trial
                break
            trial *= 2.0
        if lo is None:
            raise BracketError("no bracket for the negative branch",
                               interval=(trial, hi))
    lam = brentq(res, lo, hi, xtol=1e-14 * max(abs(lo), abs(hi)),
                 rtol=4 * np.finfo(float).eps)
    pair = _finalize(n, p, beta, R, lam, num_points)
    _MEMO[key] = pair
    if cache is not None:
        cache.store(pair, num_points)
    return pair


def _check_args(n, p, R):
    if n < 2:
        raise ValueError("dimension must be >= 2")
    if not p > 1.0:
        raise ValueError("p must exceed 1")
    if not R > 0.0:
        raise ValueError("radius must be positive")


# ---------------------------------------------------------------------------
# derived quantities
# ---------------------------------------------------------------------------

def constant_C(pair: RadialEigenpair) -> float:
    """Sharpness constant of the eigenvalue bounds.

    beta > 0 branch: ||v||_inf^p |B| / ||v||_p^p;
    beta < 0 branch: (min v)^p |B| / ||v||_p^p.
    Invariant under rescaling of v, equal to 1 for the constant profile.
    """
    if pair.beta == 0.0:
        return 1.0
    if pair.beta > 0.0 or math.isinf(pair.beta):
        num = pair.linf ** pair.p
    else:
        num = pair.v_min ** pair.p
    return num * pair.ball_volume / pair.lp_norm_p


@dataclass
class LevelSpeed:
    """Speed g(t) = |grad v| on the level set {v = t}.

    Monotone-cubic interpolation.  Near the center level the speed vanishes
    like Delta^{1/p} in the level gap Delta, so there the interpolation runs
    on h = g / Delta^{1/p} (a smooth positive function of sigma = Delta^{1/p})
    and 1/g integrals use the coordinate u = Delta^{(p-1)/p}, in which the
    integrand p/(p-1) / h is smooth up to the endpoint.
    """

    levels: np.ndarray    # increasing t grid, [v_min, v_max]
    speed: np.ndarray     # g at those levels
    radii: np.ndarray     # r with v(r) = t
    p: float
    center_level: float   # level attained at r = 0, where g -> 0

    _far: object = field(default=None, repr=False, compare=False)
    _h_near: object = field(default=None, repr=False, compare=False)
    _split_gap: float = field(default=0.0, repr=False, compare=False)

    def __post_init__(self):
        t = self.levels
        span = t[-1] - t[0]
        gap = self._gap(t)
        # split at an interior node roughly a quarter span from the center
        near = gap <= 0.25 * span
        if np.count_nonzero(near) < 8:
            order = np.argsort(gap)
            near = np.zeros(len(t), dtype=bool)
            near[order[:8]] = True
        self._split_gap = float(np.max(gap[near]))
        sigma = gap[near] ** (1.0 / self.p)
        keep = sigma > 0.0
        h = self.speed[near][keep] / sigma[keep]
        idx = np.argsort(sigma[keep])
        self._h_near = PchipInterpolator(sigma[keep][idx], h[idx])
        far = gap >= 0.8 * self._split_gap
        tf = t[far]
        idx = np.argsort(tf)
        self._far = PchipInterpolator(tf[idx], self.speed[far][idx])

    def _gap(self, t):
        return np.abs(np.asarray(t, dtype=float) - self.center_level)

    def speed_at(self, t):
        t = np.asarray(t, dtype=float)
        gap = self._gap(t)
        out = np.empty_like(gap)
        nearby = gap < self._split_gap
        sigma = gap[nearby] ** (1.0 / self.p)
        out[nearby] = self._h_near(sigma) * sigma
        out[~nearby] = self._far(t[~nearby])
        return out if out.ndim else float(out)

    def cell_inverse_integrals(self, a, b, num_gauss: int = 16) -> np.ndarray:
        """int_{a_i}^{b_i} dt / g(t), each [a_i, b_i] inside one level cell.

        Vectorized over intervals.  Cells touching the center level integrate
        in u = gap^{(p-1)/p}, where the integrand is smooth; the split point
        sits on a stored level node, so a within-cell interval never straddles
        the near/far boundary.
        """
        a = np.asarray(a, dtype=float)
        b = np.asarray(b, dtype=float)
        nodes, weights = _gauss_rule(num_gauss)
        out = np.zeros_like(a)
        near = self._gap(0.5 * (a + b)) < self._split_gap
        far = ~near
        if np.any(far):
            af, bf = a[far], b[far]
            x = 0.5 * (bf - af)[:, None] * nodes + 0.5 * (bf + af)[:, None]
            w = 0.5 * (bf - af)[:, None] * weights
            out[far] = np.sum(w / self._far(x), axis=1)
        if np.any(near):
            q = (self.p - 1.0) / self.p
            ga = self._gap(a[near]) ** q
            gb = self._gap(b[near]) ** q
            u_lo = np.minimum(ga, gb)
            u_hi = np.maximum(ga, gb)
            x = 0.5 * (u_hi - u_lo)[:, None] * nodes + 0.5 * (u_hi + u_lo)[:, None]
            w = 0.5 * (u_hi - u_lo)[:, None] * weights
            sigma = x ** (1.0 / (self.p - 1.0))
            out[near] = np.sum(w / self._h_near(sigma), axis=1) / q
        return out

    def inverse_integral(self, a: float, b: float, num_gauss: int = 16) -> float:
        """int_a^b dt / g(t) for [a, b] inside the level range, a <= b.

        Composite over the stored level cells: the speed can vary by orders
        of magnitude across the range (boundary layers).
        """
        if b < a:
            raise ValueError("needs a <= b")
        i0 = np.searchsorted(self.levels, a, side="right")
        i1 = np.searchsorted(self.levels, b, side="left")
        knots = np.concatenate([[a], self.levels[i0:i1], [b]])
        vals = self.cell_inverse_integrals(knots[:-1], knots[1:], num_gauss=num_gauss)
        return float(np.sum(vals))


def level_speed(pair: RadialEigenpair) -> LevelSpeed:
    """Level-set speed of a strictly monotone radial profile."""
    vals = pair.values
    diffs = np.diff(vals)
    if np.all(diffs < 0.0):        # beta > 0: decreasing
        levels = vals[::-1]
        speed = np.abs(pair.derivs[::-1])
        radii = pair.grid[::-1]
        center_level = float(vals[0])
    elif np.all(diffs > 0.0):      # beta < 0: increasing
        levels = vals.copy()
        speed = np.abs(pair.derivs)
        radii = pair.grid.copy()
        center_level = float(vals[0])
    else:
        raise ProfileConsistencyError("profile is not strictly monotone")
    return LevelSpeed(levels=np.ascontiguousarray(levels),
                      speed=np.ascontiguousarray(speed),
                      radii=np.ascontiguousarray(radii),
                      p=pair.p, center_level=center_level)


def reconstruct_radii(ls: LevelSpeed, num_gauss: int = 16) -> np.ndarray:
    """Integrate dr = dt/g across level cells to rebuild the radius grid.

    Pure quadrature of the interpolated speed (no anchoring on the stored
    radii), so agreement with ls.radii is a genuine consistency check.
    """
    t = ls.levels
    cell_int = np.array([ls.inverse_integral(t[j], t[j + 1], num_gauss=num_gauss)
                         for j in range(len(t) - 1)])
    depth = np.concatenate([[0.0], np.cumsum(cell_int)])
    if ls.radii[0] > ls.radii[-1]:
        # decreasing profile: levels run boundary -> center
        return ls.radii[0] - depth
    return depth


def cut_parameter(pair: RadialEigenpair, r: float) -> tuple[float, float]:
    """Robin parameter seen by the restriction of the profile to B_r.

    gamma = -|v'|^{p-2} v'(r) / |v|^{p-2} v(r); re-solving on B_r with
    parameter gamma must reproduce the original eigenvalue.
    """
    if not 0.0 < r < pair.radius:
        raise ValueError("cut radius must lie strictly inside (0, R)")
    v = float(pair.value_at(r))
    dv = float(pair.deriv_at(r))
    gamma = -_odd_pow(dv, pair.p - 1.0) / _odd_pow(v, pair.p - 1.0)
    inner = solve_radial(pair.dim, pair.p, gamma, r)
    return gamma, inner.eigenvalue


@dataclass(frozen=True)
class MonotonicityReport:
    """Witness report for the beta-monotonicity of profiles and eigenvalues."""

    ok: bool
    pointwise_ok: bool
    eigenvalue_ok: bool
    norm_ok: bool
    lambda1: float
    lambda2: float
    first_violation: tuple | None


def monotonicity_check(n: int, p: float, beta1: float, beta2: float, R: float,
                       num_points: int = 2048, tol: float = 1e-10) -> MonotonicityReport:
    """Check v_{beta1} >= v_{beta2} pointwise, lambda and ||v||_p ordering."""
    if beta1 > beta2:
        raise ValueError("needs beta1 <= beta2")
    pair1 = solve_radial(n, p, beta1, R, num_points=num_points)
    pair2 = solve_radial(n, p, beta2, R, num_points=num_points)
    diff = pair1.values - pair2.values
    bad = np.nonzero(diff < -tol)[0]
    first = None
    if bad.size:
        i = int(bad[0])
        first = (i, float(pair1.grid[i]), float(pair1.values[i]), float(pair2.values[i]))
    scale = max(abs(pair1.eigenvalue), abs(pair2.eigenvalue), 1.0)
    if beta1 == beta2:
        eig_ok = abs(pair1.eigenvalue - pair2.eigenvalue) <= tol * scale
    else:
        eig_ok = pair1.eigenvalue < pair2.eigenvalue + tol * scale
    norm_ok = pair1.lp_norm_p >= pair2.lp_norm_p - tol * max(pair1.lp_norm_p, 1.0)
    return MonotonicityReport(
        ok=(not bad.size) and eig_ok and norm_ok,
        pointwise_ok=not bad.size,
        eigenvalue_ok=eig_ok,
        norm_ok=norm_ok,
        lambda1=pair1.eigenvalue,
        lambda2=pair2.eigenvalue,
        first_violation=first,
    )


def weak_form_residuals(pair: RadialEigenpair, num_tests: int = 20,
                        num_quad: int = 8193) -> np.ndarray:
    """Residuals of the weak form against a family of radial test functions.

    For each phi: E + B - lambda M with
      E = int |v'|^{p-2} v' phi' r^{n-1} dr,
      B = beta |v(R)|^{p-2} v(R) phi(R) R^{n-1},
      M = int |v|^{p-2} v phi r^{n-1} dr,
    normalized by |lambda| times the phi = 1 mass.
    """
    if math.isinf(pair.beta):
        raise ValueError("weak residuals need a finite Robin parameter")
    n, p, R = pair.dim, pair.p, pair.radius
    lam = pair.eigenvalue
    r = np.linspace(0.0, R, num_quad)
    v = pair.value_at(r)
    dv = pair.deriv_at(r)
    w = _odd_pow(dv, p - 1.0)
    vp = _odd_pow(v, p - 1.0)
    rn = r ** (n - 1)
    mass_unit = float(simpson(np.abs(vp) * rn, x=r))

    half = num_tests // 2
    res = np.empty(num_tests)
    for j in range(num_tests):
        if j < half:
            k = j + 1
            phi = (r / R) ** k
            dphi = k * (r / R) ** (k - 1) / R
        else:
            k = j - half + 1
            phi = np.cos(0.5 * math.pi * k * r / R)
            dphi = -0.5 * math.pi * k / R * np.sin(0.5 * math.pi * k * r / R)
        energy = float(simpson(w * dphi * rn, x=r))
        boundary = pair.beta * _odd_pow(float(v[-1]), p - 1.0) * float(phi[-1]) * R ** (n - 1)
        mass = float(simpson(vp * phi * rn, x=r))
        res[j] = (energy + boundary - lam * mass) / (max(abs(lam), 1e-300) * mass_unit)
    return res

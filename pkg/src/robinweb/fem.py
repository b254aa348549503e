"""Mesh-based eigenvalue oracle on convex polygons.

Piecewise-linear elements on a centroid-fan triangulation with uniform
midpoint refinement.  At p = 2 the discrete problem is the generalized
eigenproblem (K + beta B) u = lambda M u, solved by shifted inverse
iteration; the ground state is certified by sign-definiteness of the
converged mode, with the shift deepened until that certificate holds.
For general p > 1 the discrete Rayleigh quotient is minimized directly
by preconditioned descent; the result is an upper bound for the discrete
minimum.

Independent of the radial shooting route: no Bessel input, no level sets.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import minimize_scalar
from scipy.sparse import coo_matrix, csc_matrix
from scipy.sparse.linalg import splu

from .geometry import ConvexPolygon

__all__ = [
    "Mesh",
    "DiscreteEigenpair",
    "SolverStagnationError",
    "triangulate",
    "solve_p2",
    "minimize_rayleigh_p",
    "rayleigh_quotient",
    "refine_and_extrapolate",
]


class SolverStagnationError(RuntimeError):
    """Eigen-iteration failed to reach the residual target."""

    def __init__(self, message, ritz_history=None):
        super().__init__(message)
        self.ritz_history = list(ritz_history or [])


# ---------------------------------------------------------------------------
# meshes
# ---------------------------------------------------------------------------

@dataclass
class Mesh:
    """Conforming triangulation; triangles CCW, boundary edges interior-left."""

    nodes: np.ndarray            # (V, 2)
    triangles: np.ndarray        # (T, 3) int
    boundary_edges: np.ndarray   # (E, 2) int, polygon interior to the left
    refinement_level: int

    @property
    def num_nodes(self) -> int:
        return len(self.nodes)

    @property
    def num_triangles(self) -> int:
        return len(self.triangles)

    def triangle_areas(self) -> np.ndarray:
        a = self.nodes[self.triangles[:, 0]]
        b = self.nodes[self.triangles[:, 1]]
        c = self.nodes[self.triangles[:, 2]]
        return 0.5 * np.abs((b[:, 0] - a[:, 0]) * (c[:, 1] - a[:, 1])
                            - (b[:, 1] - a[:, 1]) * (c[:, 0] - a[:, 0]))

    def boundary_lengths(self) -> np.ndarray:
        seg = self.nodes[self.boundary_edges[:, 1]] - self.nodes[self.boundary_edges[:, 0]]
        return np.linalg.norm(seg, axis=1)

    def to_json(self) -> dict:
        return {
            "nodes": self.nodes.tolist(),
            "triangles": self.triangles.tolist(),
            "boundary_edges": self.boundary_edges.tolist(),
            "refinement_level": self.refinement_level,
        }

    @classmethod
    def from_json(cls, obj: dict) -> "Mesh":
        return cls(nodes=np.asarray(obj["nodes"], dtype=float),
                   triangles=np.asarray(obj["triangles"], dtype=np.int64),
                   boundary_edges=np.asarray(obj["boundary_edges"], dtype=np.int64),
                   refinement_level=int(obj["refinement_level"]))


def _refine_once(nodes, triangles, boundary):
    """Split every triangle into 4 by edge midpoints (deterministic order)."""
    midpoint: dict[tuple[int, int], int] = {}
    new_nodes = [nodes]
    counter = len(nodes)

    def mid(i, j):
        nonlocal counter
        key = (i, j) if i < j else (j, i)
        idx = midpoint.get(key)
        if idx is None:
            idx = counter
            midpoint[key] = idx
            new_nodes.append(0.5 * (nodes[i] + nodes[j])[None, :])
            counter += 1
        return idx

    tris = np.empty((4 * len(triangles), 3), dtype=np.int64)
    for t, (a, b, c) in enumerate(triangles):
        ab, bc, ca = mid(a, b), mid(b, c), mid(c, a)
        tris[4 * t:4 * t + 4] = [(a, ab, ca), (b, bc, ab), (c, ca, bc), (ab, bc, ca)]
    edges = np.empty((2 * len(boundary), 2), dtype=np.int64)
    for e, (a, b) in enumerate(boundary):
        m = mid(a, b)
        edges[2 * e:2 * e + 2] = [(a, m), (m, b)]
    return np.concatenate(new_nodes, axis=0), tris, edges


def triangulate(poly: ConvexPolygon, level: int) -> Mesh:
    """Centroid fan refined `level` times; node count is determined by
    (vertex count, level) through V' = V + E, E' = 2E + 3T, T' = 4T."""
    if level < 0:
        raise ValueError("refinement level must be >= 0")
    verts = poly.vertices
    m = len(verts)
    nodes = np.concatenate([verts, poly.centroid[None, :]], axis=0)
    triangles = np.column_stack([np.arange(m), (np.arange(m) + 1) % m,
                                 np.full(m, m)]).astype(np.int64)
    boundary = np.column_stack([np.arange(m), (np.arange(m) + 1) % m]).astype(np.int64)
    for _ in range(level):
        nodes, triangles, boundary = _refine_once(nodes, triangles, boundary)
    return Mesh(nodes=nodes, triangles=triangles, boundary_edges=boundary,
                refinement_level=level)


def _tri_geometry(mesh: Mesh):
    """Areas and P1 shape gradients: grads[t, i] = grad phi_i on triangle t."""
    pts = mesh.nodes[mesh.triangles]              # (T, 3, 2)
    a, b, c = pts[:, 0], pts[:, 1], pts[:, 2]
    det = ((b[:, 0] - a[:, 0]) * (c[:, 1] - a[:, 1])
           - (b[:, 1] - a[:, 1]) * (c[:, 0] - a[:, 0]))
    area = 0.5 * np.abs(det)
    grads = np.empty((len(det), 3, 2))
    # grad phi_i is the inward-scaled normal of the opposite edge
    for i, (j, k) in enumerate(((1, 2), (2, 0), (0, 1))):
        edge = pts[:, k] - pts[:, j]
        grads[:, i, 0] = -edge[:, 1] / det
        grads[:, i, 1] = edge[:, 0] / det
    return area, grads


# ---------------------------------------------------------------------------
# p = 2 generalized eigensolve
# ---------------------------------------------------------------------------

def _assemble_p2(mesh: Mesh, beta: float):
    """Stiffness + beta * boundary mass, and the interior mass matrix."""
    area, grads = _tri_geometry(mesh)
    tri = mesh.triangles
    V = mesh.num_nodes

    rows, cols, k_vals, m_vals = [], [], [], []
    for i in range(3):
        for j in range(3):
            rows.append(tri[:, i])
            cols.append(tri[:, j])
            k_vals.append(area * (grads[:, i, 0] * grads[:, j, 0]
                                  + grads[:, i, 1] * grads[:, j, 1]))
            m_vals.append(area * ((1.0 + (i == j)) / 12.0))
    rows = np.concatenate(rows)
    cols = np.concatenate(cols)
    K = coo_matrix((np.concatenate(k_vals), (rows, cols)), shape=(V, V)).tocsr()
    M = coo_matrix((np.concatenate(m_vals), (rows, cols)), shape=(V, V)).tocsr()

    be = mesh.boundary_edges
    ell = mesh.boundary_lengths()
    brows = np.concatenate([be[:, 0], be[:, 0], be[:, 1], be[:, 1]])
    bcols = np.concatenate([be[:, 0], be[:, 1], be[:, 0], be[:, 1]])
    bvals = np.concatenate([ell / 3.0, ell / 6.0, ell / 6.0, ell / 3.0])
    B = coo_matrix((bvals, (brows, bcols)), shape=(V, V)).tocsr()
    return K + beta * B, M


def solve_p2(mesh: Mesh, beta: float, tol: float = 1e-10,
             max_iterations: int = 500) -> "DiscreteEigenpair":
    """Bottom eigenvalue of (K + beta B) u = lambda M u by shifted inverse
    iteration with a bottom-ness certificate.

    Inverse iteration converges to the eigenvalue nearest the shift, which
    starts at the constant-function bound beta P/|Omega| - 1 for beta < 0
    (-1 for beta >= 0).  Each converged candidate is re-verified from a
    strictly deeper shift: a probe that surfaces a deeper eigenvalue replaces
    the candidate, a probe that reproduces it certifies that no eigenvalue
    lies in the probed window below.  The accepted mode must be sign-definite
    up to a 5% undershoot: coarse meshes clip steep boundary layers slightly
    below zero, while genuinely mixed modes cross at order one.  If no
    candidate passes within the round budget the solver raises rather than
    guessing.
    """
    A, M = _assemble_p2(mesh, beta)
    area = float(np.sum(mesh.triangle_areas()))
    per = float(np.sum(mesh.boundary_lengths()))
    # fixed problem scale so the Neumann case (A x -> 0) stays well-posed
    anorm = float(np.max(np.abs(A.data))) if A.nnz else 1.0
    history = []
    counter = {"it": 0}
    # deterministic symmetry-breaking seed: nonzero overlap with every mode
    seed = np.ones(mesh.num_nodes)
    seed += 1e-6 * np.sin(2.399963 * np.arange(mesh.num_nodes))

    def run(sigma: float):
        """Inverse iteration at one shift: (lam, x, resid), or None if stuck."""
        try:
            lu = splu(csc_matrix(A - sigma * M))
        except RuntimeError:
            return None
        x = seed / math.sqrt(float(seed @ (M @ seed)))
        for _ in range(max_iterations):
            x = lu.solve(M @ x)
            x /= math.sqrt(float(x @ (M @ x)))
            Ax = A @ x
            Mx = M @ x
            lam = float(x @ Ax)
            resid = float(np.linalg.norm(Ax - lam * Mx)
                          / (anorm * np.linalg.norm(x)
                             + abs(lam) * np.linalg.norm(Mx) + 1e-300))
            history.append(lam)
            counter["it"] += 1
            if resid < tol:
                return lam, x, resid
        return None

    sigma = beta * per / area - 1.0 if beta < 0.0 else -1.0
    scale = 1.0 + abs(sigma)
    best = None
    for _ in range(12):
        out = run(sigma)
        if out is None:
            sigma -= 2.0 * scale
            scale *= 2.0
            continue
        lam, x, resid = out
        if best is not None and lam >= best[0] - 100.0 * tol * (anorm + abs(best[0])):
            blam, bx, bresid = best
            idx = int(np.argmax(np.abs(bx)))
            if bx[idx] < 0.0:
                bx = -bx
            if float(np.min(bx)) >= -0.05 * float(np.max(bx)):
                return DiscreteEigenpair(mesh=mesh, p=2.0, beta=beta,
                                         lambda_h=blam, values=bx,
                                         residual=bresid,
                                         iterations=counter["it"],
                                         method="inverse_iteration")
            # certified window bottoms out at a mixed mode: search deeper
            best = None
            sigma = blam - 2.0 * scale
            scale *= 2.0
            continue
        best = (lam, x, resid)
        gap = lam - sigma if lam > sigma else 0.0
        step = min(max(2.0 * gap, 0.5 * (1.0 + abs(lam))), 4.0 * (1.0 + abs(lam)))
        sigma = lam - step
    raise SolverStagnationError(
        "no certified sign-definite bottom mode within the round budget",
        ritz_history=history)


# ---------------------------------------------------------------------------
# general-p Rayleigh quotient
# ---------------------------------------------------------------------------

# interior rule: edge midpoints (degree 2, exact for the p = 2 mass);
# boundary rule: two-point Gauss (degree 3)
_BARY_Q = np.array([[0.5, 0.5, 0.0], [0.0, 0.5, 0.5], [0.5, 0.0, 0.5]])
_EDGE_Q = np.array([0.5 - 0.5 / math.sqrt(3.0), 0.5 + 0.5 / math.sqrt(3.0)])


class _QuotientForms:
    """Vectorized evaluation of the discrete p-quotient and its gradient."""

    def __init__(self, mesh: Mesh, p: float, beta: float):
        self.mesh = mesh
        self.p = p
        self.beta = beta
        self.area, self.grads = _tri_geometry(mesh)
        self.tri = mesh.triangles
        self.be = mesh.boundary_edges
        self.ell = mesh.boundary_lengths()

    def _gradient_field(self, u):
        ut = u[self.tri]                                  # (T, 3)
        return np.einsum("ti,tix->tx", ut, self.grads)    # (T, 2)

    def energy(self, u):
        g = self._gradient_field(u)
        mag = np.hypot(g[:, 0], g[:, 1])
        return float(np.sum(mag ** self.p * self.area))

    def energy_grad(self, u, out):
        g = self._gradient_field(u)
        mag = np.maximum(np.hypot(g[:, 0], g[:, 1]), 1e-300)
        coef = self.p * mag ** (self.p - 2.0) * self.area     # (T,)
        contrib = np.einsum("t,tx,tix->ti", coef, g, self.grads)
        np.add.at(out, self.tri, contrib)

    def _interior_values(self, u):
        return u[self.tri] @ _BARY_Q.T                    # (T, 3) at midpoints

    def mass(self, u):
        vals = self._interior_values(u)
        return float(np.sum(np.abs(vals) ** self.p @ np.full(3, 1.0 / 3.0)
                            * self.area))

    def mass_grad(self, u, out):
        vals = self._interior_values(u)
        odd = np.sign(vals) * np.abs(vals) ** (self.p - 1.0)
        contrib = np.einsum("tq,qi,t->ti", (self.p / 3.0) * odd, _BARY_Q, self.area)
        np.add.at(out, self.tri, contrib)

    def _edge_values(self, u):
        ua = u[self.be[:, 0]][:, None]
        ub = u[self.be[:, 1]][:, None]
        q = _EDGE_Q[None, :]
        return ua * (1.0 - q) + ub * q                    # (E, 2)

    def boundary(self, u):
        vals = self._edge_values(u)
        return float(np.sum(np.sum(np.abs(vals) ** self.p, axis=1)
                            * self.ell / 2.0))

    def boundary_grad(self, u, out):
        vals = self._edge_values(u)
        odd = np.sign(vals) * np.abs(vals) ** (self.p - 1.0)
        coef = self.p * odd * (self.ell[:, None] / 2.0)
        q = _EDGE_Q[None, :]
        np.add.at(out, self.be[:, 0], np.sum(coef * (1.0 - q), axis=1))
        np.add.at(out, self.be[:, 1], np.sum(coef * q, axis=1))

    def quotient(self, u):
        num = self.energy(u) + self.beta * self.boundary(u)
        return num / self.mass(u)

    def quotient_grad(self, u):
        mass = self.mass(u)
        num = self.energy(u) + self.beta * self.boundary(u)
        J = num / mass
        gn = np.zeros_like(u)
        self.energy_grad(u, gn)
        if self.beta != 0.0:
            gb = np.zeros_like(u)
            self.boundary_grad(u, gb)
            gn += self.beta * gb
        gm = np.zeros_like(u)
        self.mass_grad(u, gm)
        return J, (gn - J * gm) / mass


def rayleigh_quotient(mesh: Mesh, p: float, beta: float, values) -> float:
    """Discrete p-quotient of given nodal values (admissible test function)."""
    u = np.asarray(values, dtype=float)
    if u.shape != (mesh.num_nodes,):
        raise ValueError("nodal value vector has the wrong length")
    return _QuotientForms(mesh, p, beta).quotient(u)


def minimize_rayleigh_p(mesh: Mesh, p: float, beta: float,
                        iterations: int = 400,
                        tol: float = 1e-13) -> "DiscreteEigenpair":
    """Descent on the discrete p-quotient from the positive constant.

    Search direction is the quotient gradient preconditioned by the p = 2
    operator K + M; each step does an exact scalar line search.  The final
    value is a certified upper bound for the discrete minimum (J decreases
    monotonically); `stalled` marks line-search failure before the tolerance.
    """
    if not p > 1.0:
        raise ValueError("p must exceed 1")
    forms = _QuotientForms(mesh, p, beta)
    A, M = _assemble_p2(mesh, 0.0)
    lu = splu(csc_matrix(A + M))

    u = np.ones(mesh.num_nodes)
    u /= forms.mass(u) ** (1.0 / p)
    J, grad = forms.quotient_grad(u)
    stalled = False
    last_drop = math.inf
    t_prev = 1.0
    it = 0
    for it in range(1, iterations + 1):
        d = lu.solve(grad)
        scale = float(np.max(np.abs(d)))
        if not math.isfinite(scale) or scale == 0.0:
            break
        d /= scale

        def phi(t):
            return forms.quotient(u - t * d)

        hi = 4.0 * t_prev
        best = minimize_scalar(phi, bounds=(0.0, hi), method="bounded",
                               options={"xatol": 1e-12 * max(hi, 1.0)})
        t_star, J_new = float(best.x), float(best.fun)
        tries = 0
        while J_new >= J and tries < 40:
            hi *= 0.25
            best = minimize_scalar(phi, bounds=(0.0, hi), method="bounded",
                                   options={"xatol": 1e-14 * max(hi, 1.0)})
            t_star, J_new = float(best.x), float(best.fun)
            tries += 1
        if J_new >= J:
            # no descent along the certified direction; stalled unless the
            # previous accepted step was already below tolerance
            stalled = last_drop > tol * max(1.0, abs(J))
            break
        last_drop = J - J_new
        u = u - t_star * d
        u /= forms.mass(u) ** (1.0 / p)
        t_prev = max(t_star, 1e-6)
        J, grad = forms.quotient_grad(u)
        if last_drop <= tol * max(1.0, abs(J)):
            break
    if float(np.sum(u)) < 0.0:
        u = -u
    resid = float(np.linalg.norm(grad) / max(1.0, abs(J)))
    return DiscreteEigenpair(mesh=mesh, p=p, beta=beta, lambda_h=J, values=u,
                             residual=resid, iterations=it,
                             method="quotient_descent", stalled=stalled)


# ---------------------------------------------------------------------------
# results
# ---------------------------------------------------------------------------

@dataclass
class DiscreteEigenpair:
    """Discrete minimizer of the p-quotient on a fixed mesh."""

    mesh: Mesh
    p: float
    beta: float
    lambda_h: float
    values: np.ndarray
    residual: float
    iterations: int
    method: str
    stalled: bool = False
    richardson_estimate: tuple | None = None   # (extrapolated lambda, error bar)
    level_history: list = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "p": self.p,
            "beta": self.beta,
            "lambda_h": self.lambda_h,
            "residual": self.residual,
            "iterations": self.iterations,
            "method": self.method,
            "stalled": self.stalled,
            "richardson_estimate": (list(self.richardson_estimate)
                                    if self.richardson_estimate else None),
            "level_history": [[int(l), float(v)] for l, v in self.level_history],
            "refinement_level": self.mesh.refinement_level,
            "values": [float(v) for v in self.values],
        }


def refine_and_extrapolate(poly: ConvexPolygon, beta: float,
                           levels=(2, 3, 4)) -> DiscreteEigenpair:
    """p = 2 eigenvalues across refinement levels with Richardson output.

    P1 eigenvalue error is O(h^2), so successive uniform refinements reduce
    it by 4: lambda_ext = lambda_L + (lambda_L - lambda_{L-1}) / 3, with the
    correction magnitude as the error bar.
    """
    if len(levels) < 2:
        raise ValueError("need at least two refinement levels")
    history = []
    pair = None
    for lv in levels:
        pair = solve_p2(triangulate(poly, lv), beta)
        history.append((lv, pair.lambda_h))
    lam_fine = history[-1][1]
    lam_prev = history[-2][1]
    corr = (lam_fine - lam_prev) / 3.0
    pair.richardson_estimate = (lam_fine + corr, abs(corr))
    pair.level_history = history
    return pair

"""Mesh oracle tests: triangulation exactness, eigensolves, p-quotient descent."""

import json
import math

import numpy as np
import pytest

from robinweb.fem import (
    Mesh,
    SolverStagnationError,
    minimize_rayleigh_p,
    rayleigh_quotient,
    refine_and_extrapolate,
    solve_p2,
    triangulate,
)
from robinweb.geometry import regular_polygon
from robinweb.radial import level_speed, solve_radial
from robinweb.transplant import _branch_of, build_G


def matched_kgon(k: int):
    return regular_polygon(k, 2.0 * math.pi / k)


def unit_square():
    return regular_polygon(4, 1.0)


class TestTriangulate:
    def test_square_level_zero_fan(self):
        mesh = triangulate(unit_square(), 0)
        assert mesh.num_triangles == 4
        assert mesh.num_nodes == 5
        assert len(mesh.boundary_edges) == 4

    @pytest.mark.parametrize("m,level", [(4, 1), (4, 3), (6, 2), (7, 2)])
    def test_counts_deterministic(self, m, level):
        poly = regular_polygon(m, 1.0)
        mesh = triangulate(poly, level)
        assert mesh.num_triangles == 4 ** level * m
        # V' = V + E, E' = 2E + 3T, T' = 4T from the fan start
        V, E, T = m + 1, 2 * m, m
        for _ in range(level):
            V, E, T = V + E, 2 * E + 3 * T, 4 * T
        assert mesh.num_nodes == V
        assert len(mesh.boundary_edges) == 2 ** level * m

    def test_hexagon_level3_exact_measures(self):
        poly = regular_polygon(6, 1.0)
        mesh = triangulate(poly, 3)
        assert np.sum(mesh.triangle_areas()) == pytest.approx(poly.area,
                                                              rel=1e-12)
        assert np.sum(mesh.boundary_lengths()) == pytest.approx(poly.perimeter,
                                                                rel=1e-12)

    def test_boundary_edges_on_polygon_edges(self):
        poly = regular_polygon(5, 1.0)
        mesh = triangulate(poly, 2)
        normals, offsets = poly.edge_lines()
        for a, b in mesh.boundary_edges:
            mid = 0.5 * (mesh.nodes[a] + mesh.nodes[b])
            assert np.min(np.abs(normals @ mid - offsets)) < 1e-12

    def test_orientations(self):
        poly = regular_polygon(7, 1.0)
        mesh = triangulate(poly, 1)
        pts = mesh.nodes[mesh.triangles]
        det = ((pts[:, 1, 0] - pts[:, 0, 0]) * (pts[:, 2, 1] - pts[:, 0, 1])
               - (pts[:, 1, 1] - pts[:, 0, 1]) * (pts[:, 2, 0] - pts[:, 0, 0]))
        assert np.all(det > 0.0)
        # interior (centroid) to the left of each boundary edge
        c = poly.centroid
        for a, b in mesh.boundary_edges:
            e = mesh.nodes[b] - mesh.nodes[a]
            r = c - mesh.nodes[a]
            assert e[0] * r[1] - e[1] * r[0] > 0.0

    def test_negative_level_rejected(self):
        with pytest.raises(ValueError):
            triangulate(unit_square(), -1)

    def test_json_round_trip(self):
        mesh = triangulate(unit_square(), 1)
        back = Mesh.from_json(json.loads(json.dumps(mesh.to_json())))
        assert np.allclose(back.nodes, mesh.nodes, atol=0.0)
        assert np.array_equal(back.triangles, mesh.triangles)
        assert np.array_equal(back.boundary_edges, mesh.boundary_edges)
        assert back.refinement_level == 1


class TestSolveP2:
    def test_disk_approximation_positive_beta(self):
        mesh = triangulate(matched_kgon(256), 4)
        pair = solve_p2(mesh, 1.0)
        lam_disk = solve_radial(2, 2.0, 1.0, 1.0).eigenvalue
        assert pair.residual < 1e-10
        assert abs(pair.lambda_h - lam_disk) / lam_disk < 3e-3

    def test_neumann_zero_constant(self):
        pair = solve_p2(triangulate(unit_square(), 2), 0.0)
        assert abs(pair.lambda_h) < 1e-12
        # constant up to the solver's own convergence scale
        assert np.ptp(pair.values) < 1e-8 * np.max(pair.values)
        assert pair.residual < 1e-10

    def test_square_negative_beta(self):
        poly = unit_square()
        pair = solve_p2(triangulate(poly, 4), -1.0)
        assert pair.lambda_h < 0.0
        # constant test function: lambda_h <= beta P / |Omega| = -4
        assert pair.lambda_h <= -4.0 + 1e-12
        # reverse ordering against the perimeter-matched disk
        lam_star = solve_radial(2, 2.0, -1.0, 2.0 / math.pi).eigenvalue
        assert pair.lambda_h <= lam_star

    @pytest.mark.parametrize("beta", [-3.0, -1.0, 0.5, 2.0])
    def test_residuals_and_positivity(self, beta):
        pair = solve_p2(triangulate(regular_polygon(6, 1.0), 3), beta)
        assert pair.residual < 1e-10
        assert np.min(pair.values) > 0.0

    def test_beta_monotone_at_fixed_mesh(self):
        mesh = triangulate(regular_polygon(5, 1.0), 3)
        lams = [solve_p2(mesh, b).lambda_h for b in (-2.0, -1.0, 0.0, 1.0, 2.0)]
        assert np.all(np.diff(lams) > 0.0)

    def test_refinement_decreases_lambda_positive_beta(self):
        poly = matched_kgon(64)
        lams = [solve_p2(triangulate(poly, lv), 1.0).lambda_h
                for lv in (1, 2, 3, 4)]
        assert np.all(np.diff(lams) < 0.0)
        # mesh-independence: refinement increments shrink
        gaps = np.abs(np.diff(lams))
        assert np.all(np.diff(gaps) < 0.0)

    def test_stagnation_raises_with_history(self):
        mesh = triangulate(unit_square(), 2)
        with pytest.raises(SolverStagnationError) as err:
            solve_p2(mesh, 1.0, max_iterations=2)
        # every probing round contributes its Ritz values before giving up
        assert len(err.value.ritz_history) >= 2

    def test_strong_negative_beta_finds_bottom(self):
        # boundary layers force the shift walk below the first few modes
        mesh = triangulate(unit_square(), 3)
        pair = solve_p2(mesh, -10.0)
        assert pair.residual < 1e-10
        # constant test function bound from above, spectrum is finite below
        assert pair.lambda_h < -40.0
        ref = solve_p2(triangulate(unit_square(), 4), -10.0)
        assert ref.lambda_h < pair.lambda_h  # refinement digs deeper here

    def test_richardson_extrapolation(self):
        poly = unit_square()
        pair = refine_and_extrapolate(poly, 1.0, levels=(2, 3, 4))
        lam_ext, bar = pair.richardson_estimate
        assert bar > 0.0
        assert [lv for lv, _ in pair.level_history] == [2, 3, 4]
        ref = solve_p2(triangulate(poly, 6), 1.0).lambda_h
        assert abs(lam_ext - ref) < abs(pair.lambda_h - ref)
        assert abs(lam_ext - ref) < 2.0 * bar

    def test_eigenpair_json(self):
        pair = solve_p2(triangulate(unit_square(), 1), 1.0)
        obj = pair.to_json()
        assert json.dumps(obj)
        assert obj["method"] == "inverse_iteration"


class TestMinimizeRayleighP:
    @pytest.mark.parametrize("beta", [1.0, -1.0])
    def test_p2_matches_eigensolver(self, beta):
        mesh = triangulate(unit_square(), 3)
        eig = solve_p2(mesh, beta)
        desc = minimize_rayleigh_p(mesh, 2.0, beta)
        assert not desc.stalled
        assert desc.lambda_h == pytest.approx(eig.lambda_h, abs=1e-6)

    def test_p15_diskish_matches_radial(self):
        mesh = triangulate(matched_kgon(256), 3)
        desc = minimize_rayleigh_p(mesh, 1.5, 1.0)
        lam = solve_radial(2, 1.5, 1.0, 1.0).eigenvalue
        assert abs(desc.lambda_h - lam) / lam < 1e-2

    @pytest.mark.parametrize("p", [1.5, 3.0])
    def test_scaling_identity(self, p):
        # lambda(2 Omega, beta) = 2^{-p} lambda(Omega, 2^{p-1} beta)
        lam_big = minimize_rayleigh_p(
            triangulate(regular_polygon(4, 2.0), 3), p, 1.0).lambda_h
        lam_unit = minimize_rayleigh_p(
            triangulate(unit_square(), 3), p, 2.0 ** (p - 1.0)).lambda_h
        assert lam_big == pytest.approx(2.0 ** (-p) * lam_unit, rel=1e-2)

    def test_upper_bound_improves_on_constant(self):
        poly = regular_polygon(6, 1.0)
        mesh = triangulate(poly, 3)
        desc = minimize_rayleigh_p(mesh, 3.0, -1.0)
        const_quot = -poly.perimeter / poly.area
        assert desc.lambda_h <= const_quot + 1e-12
        assert np.min(desc.values) > 0.0

    def test_invalid_p(self):
        with pytest.raises(ValueError):
            minimize_rayleigh_p(triangulate(unit_square(), 1), 1.0, 1.0)


class TestQuotientEvaluation:
    def test_constant_vector_closed_form(self):
        poly = regular_polygon(5, 1.0)
        mesh = triangulate(poly, 2)
        u = np.full(mesh.num_nodes, 3.0)
        got = rayleigh_quotient(mesh, 2.0, -1.5, u)
        assert got == pytest.approx(-1.5 * poly.perimeter / poly.area, rel=1e-12)

    def test_wrong_length_rejected(self):
        mesh = triangulate(unit_square(), 1)
        with pytest.raises(ValueError):
            rayleigh_quotient(mesh, 2.0, 1.0, np.ones(3))

    @pytest.mark.parametrize("beta", [1.0, -1.0])
    def test_transplanted_function_admissible(self, beta):
        # interpolate the distance-composed profile onto the mesh: its
        # discrete quotient must sit above the discrete minimum and near
        # the quadrature-route transplant quotient
        from robinweb.transplant import transplant_quotient
        poly = matched_kgon(64)
        pair = solve_radial(2, 2.0, beta, 1.0)
        gmap = build_G(level_speed(pair), _branch_of(beta))
        mesh = triangulate(poly, 3)
        normals, offsets = poly.edge_lines()
        depth = np.min(offsets[None, :] - mesh.nodes @ normals.T, axis=1)
        depth = np.clip(depth, 0.0, None)
        working = np.interp(depth, gmap.depths, gmap.working)
        u = np.asarray(gmap.level_of(working), dtype=float)
        J = rayleigh_quotient(mesh, 2.0, beta, u)
        lam_h = solve_p2(mesh, beta).lambda_h
        assert J >= lam_h - 1e-10
        q = transplant_quotient(poly, pair).quotient
        assert J == pytest.approx(q, rel=1e-2)

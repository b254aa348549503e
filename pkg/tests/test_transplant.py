"""Distance-function transplantation tests: depth maps, quotients, slacks."""

import json
import math

import numpy as np
import pytest

from robinweb.geometry import disk_erosion_profile, erosion_profile, regular_polygon
from robinweb.radial import dirichlet_radial, level_speed, solve_radial
from robinweb.transplant import (
    NEGATIVE_BETA,
    POSITIVE_BETA,
    PerimeterMismatchError,
    TransplantError,
    _branch_of,
    build_G,
    proof_chain_check,
    proof_chain_from_profile,
    quotient_from_profile,
    transplant_quotient,
)


def matched_kgon(k: int):
    """Regular k-gon with the unit disk's perimeter."""
    return regular_polygon(k, 2.0 * math.pi / k)


def disk_args(pair):
    return disk_erosion_profile(pair.radius), pair.ball_perimeter, pair.ball_volume


class TestBranchSelection:
    def test_signs(self):
        assert _branch_of(1.0) == POSITIVE_BETA
        assert _branch_of(math.inf) == POSITIVE_BETA
        assert _branch_of(-1.0) == NEGATIVE_BETA

    def test_neumann_rejected(self):
        with pytest.raises(TransplantError):
            _branch_of(0.0)


class TestDepthMap:
    @pytest.mark.parametrize("p,beta", [(2.0, 1.0), (2.0, -1.0), (1.5, 1.0),
                                        (1.5, -1.0), (3.0, 1.0), (3.0, -1.0),
                                        (2.0, -20.0), (2.0, 100.0)])
    def test_depths_match_radius_grid(self, p, beta):
        # independent route: on the ball itself the depth of level v(r) is
        # exactly R - r, so quadrature depths must match the solver grid
        pair = solve_radial(2, p, beta, 1.0)
        gmap = build_G(level_speed(pair), _branch_of(beta))
        exact = pair.radius - gmap.working_radii
        assert np.max(np.abs(gmap.depths - exact)) < 1e-6
        assert gmap.depth_total == pytest.approx(pair.radius, abs=1e-6)

    def test_depth_map_monotone(self):
        pair = solve_radial(2, 2.0, 1.0, 1.0)
        gmap = build_G(level_speed(pair), POSITIVE_BETA)
        rng = np.random.default_rng(17)
        d = np.sort(rng.uniform(0.0, gmap.depth_total, size=(100, 2)), axis=1)
        keep = d[:, 1] - d[:, 0] > 1e-9
        lo = np.array([gmap(x) for x in d[keep, 0]])
        hi = np.array([gmap(x) for x in d[keep, 1]])
        assert np.all(hi > lo)

    @pytest.mark.parametrize("beta", [1.0, -1.0])
    def test_inverse_composition(self, beta):
        pair = solve_radial(2, 2.0, beta, 1.0)
        gmap = build_G(level_speed(pair), _branch_of(beta))
        span = gmap.level_span
        for w in np.linspace(gmap.working[0], gmap.working[-1], 23):
            assert gmap(gmap.depth_at(w)) == pytest.approx(w, abs=1e-8 * span)

    def test_wrong_branch_rejected(self):
        pair = solve_radial(2, 2.0, 1.0, 1.0)
        with pytest.raises(ValueError):
            build_G(level_speed(pair), NEGATIVE_BETA)
        pair = solve_radial(2, 2.0, -1.0, 1.0)
        with pytest.raises(ValueError):
            build_G(level_speed(pair), POSITIVE_BETA)

    def test_clamping_at_range_ends(self):
        pair = solve_radial(2, 2.0, -1.0, 1.0)
        gmap = build_G(level_speed(pair), NEGATIVE_BETA)
        assert gmap(-1.0) == gmap.working[0]
        assert gmap(2.0 * gmap.depth_total) == gmap.working[-1]

    def test_json_payload(self):
        pair = solve_radial(2, 2.0, 1.0, 1.0)
        gmap = build_G(level_speed(pair), POSITIVE_BETA)
        payload = json.dumps(gmap.to_json())
        assert "depth_total" in payload


class TestDiskEquality:
    @pytest.mark.parametrize("p,beta", [(2.0, 1.0), (2.0, -1.0), (1.5, 1.0),
                                        (1.5, -1.0), (3.0, 1.0), (3.0, -1.0),
                                        (2.0, -20.0), (2.0, 100.0)])
    def test_quotient_reproduces_eigenvalue(self, p, beta):
        # transplanting onto the ball itself returns the Rayleigh quotient
        # of the eigenfunction: equality case of both bounds
        pair = solve_radial(2, p, beta, 1.0)
        q = quotient_from_profile(*disk_args(pair), pair)
        assert not q.truncated
        assert q.quotient == pytest.approx(pair.eigenvalue, rel=1e-8)

    def test_dirichlet_disk(self):
        pair = dirichlet_radial(2, 2.0, 1.0)
        q = quotient_from_profile(*disk_args(pair), pair)
        assert q.boundary_term == 0.0
        assert q.quotient == pytest.approx(pair.eigenvalue, rel=1e-8)

    def test_radius_two_disk(self):
        pair = solve_radial(2, 2.0, -1.0, 2.0)
        q = quotient_from_profile(*disk_args(pair), pair)
        assert q.quotient == pytest.approx(pair.eigenvalue, rel=1e-8)


class TestPolygonQuotient:
    def test_boundary_term_closed_form(self):
        poly = matched_kgon(64)
        for beta in (1.0, -1.0):
            pair = solve_radial(2, 2.0, beta, 1.0)
            q = transplant_quotient(poly, pair)
            expected = beta * pair.boundary_value ** 2 * poly.perimeter
            assert q.boundary_term == pytest.approx(expected, rel=1e-12)
            assert q.truncated

    def test_mass_between_extreme_slices(self):
        poly = matched_kgon(32)
        pair = solve_radial(2, 2.0, 1.0, 1.0)
        q = transplant_quotient(poly, pair)
        assert pair.v_min ** 2 * poly.area < q.mass < pair.v_max ** 2 * poly.area
        assert q.dirichlet_energy > 0.0

    def test_level_range_inside_profile_range(self):
        poly = matched_kgon(16)
        for beta in (1.0, -1.0):
            pair = solve_radial(2, 2.0, beta, 1.0)
            q = transplant_quotient(poly, pair)
            assert pair.v_min - 1e-12 <= q.u_min < q.u_max <= pair.v_max + 1e-12

    @pytest.mark.parametrize("p", [1.5, 2.0, 3.0])
    def test_positive_branch_upper_bound_converges(self, p):
        # quotient >= lambda_star, decreasing toward it as k grows
        pair = solve_radial(2, p, 1.0, 1.0)
        lam = pair.eigenvalue
        quots = [transplant_quotient(matched_kgon(k), pair).quotient
                 for k in (16, 64, 256)]
        assert all(q > lam for q in quots)
        assert quots[0] > quots[1] > quots[2]
        assert (quots[-1] - lam) / abs(lam) < 1e-3

    @pytest.mark.parametrize("p", [1.5, 2.0, 3.0])
    def test_negative_branch_lower_bound_converges(self, p):
        pair = solve_radial(2, p, -1.0, 1.0)
        lam = pair.eigenvalue
        quots = [transplant_quotient(matched_kgon(k), pair).quotient
                 for k in (16, 64, 256)]
        assert all(q < lam for q in quots)
        assert quots[0] < quots[1] < quots[2]
        assert (lam - quots[-1]) / abs(lam) < 1e-3

    def test_perimeter_mismatch_rejected(self):
        pair = solve_radial(2, 2.0, 1.0, 1.0)
        square = regular_polygon(4, 1.0)
        with pytest.raises(PerimeterMismatchError) as err:
            transplant_quotient(square, pair)
        assert err.value.polygon_perimeter == pytest.approx(4.0)
        assert err.value.ball_perimeter == pytest.approx(2.0 * math.pi)

    def test_neumann_pair_rejected(self):
        pair = solve_radial(2, 2.0, 0.0, 1.0)
        with pytest.raises(TransplantError):
            transplant_quotient(matched_kgon(16), pair)

    def test_quotient_json(self):
        pair = solve_radial(2, 2.0, 1.0, 1.0)
        q = transplant_quotient(matched_kgon(16), pair)
        obj = q.to_json()
        assert json.dumps(obj)
        assert obj["branch"] == POSITIVE_BETA


class TestProofChain:
    @pytest.mark.parametrize("p,beta", [(2.0, 1.0), (2.0, -1.0),
                                        (1.5, 1.0), (3.0, -1.0)])
    def test_disk_equality_slacks_vanish(self, p, beta):
        pair = solve_radial(2, p, beta, 1.0)
        rep = proof_chain_from_profile(*disk_args(pair), pair)
        assert rep.ok(tol=1e-8)
        assert abs(rep.energy_slack) < 1e-7
        assert abs(rep.mass_slack) < 1e-7
        assert np.max(np.abs(rep.perimeter_slack)) < 1e-6
        assert not rep.truncated

    def test_square_positive_beta_chain(self):
        poly = regular_polygon(4, 0.5 * math.pi)
        pair = solve_radial(2, 2.0, 1.0, 1.0)
        rep = proof_chain_check(poly, pair)
        assert rep.ok(tol=1e-8)
        assert rep.truncated
        # strict inequalities past level zero (perimeters match there)
        assert rep.perimeter_slack[0] == pytest.approx(0.0, abs=1e-9)
        assert np.min(rep.perimeter_slack[1:]) > 1e-4
        assert rep.energy_slack > 1e-3
        assert rep.mass_slack > 1e-3
        assert rep.bound_slack > 1e-3
        assert np.all(rep.gap_slack >= -1e-8)

    def test_hexagon_negative_beta_chain(self):
        poly = regular_polygon(6, math.pi / 3.0)
        pair = solve_radial(2, 2.0, -1.0, 1.0)
        rep = proof_chain_check(poly, pair)
        assert rep.ok(tol=1e-8)
        assert rep.truncated
        assert np.all(rep.gap_slack >= -1e-8)
        assert np.all(rep.rate_slack >= -1e-8)
        assert rep.min_slack() >= -1e-8

    def test_chain_rejects_perimeter_mismatch(self):
        pair = solve_radial(2, 2.0, 1.0, 1.0)
        with pytest.raises(PerimeterMismatchError):
            proof_chain_check(regular_polygon(4, 1.0), pair)

    def test_report_json(self):
        poly = matched_kgon(8)
        pair = solve_radial(2, 2.0, -1.0, 1.0)
        rep = proof_chain_check(poly, pair)
        obj = rep.to_json()
        assert json.dumps(obj)
        assert obj["truncated"] is True
        assert len(obj["working_levels"]) == len(obj["perimeter_slack"])


class TestConsistencyAcrossRoutes:
    def test_profile_route_equals_polygon_route(self):
        # transplant_quotient is a thin wrapper; both routes must agree exactly
        poly = matched_kgon(32)
        pair = solve_radial(2, 2.0, -1.0, 1.0)
        q1 = transplant_quotient(poly, pair)
        q2 = quotient_from_profile(erosion_profile(poly), poly.perimeter,
                                   poly.area, pair)
        assert q1.quotient == q2.quotient
        assert q1.mass == q2.mass

    def test_quotient_exceeds_bound_denominator_route(self):
        # lambda_star / (1 - C (1 - |Omega| / |B|)) stays on the correct side
        from robinweb.radial import constant_C
        poly = matched_kgon(64)
        pair = solve_radial(2, 2.0, 1.0, 1.0)
        q = transplant_quotient(poly, pair)
        denom = 1.0 - constant_C(pair) * (1.0 - poly.area / pair.ball_volume)
        assert q.quotient <= pair.eigenvalue / denom + 1e-12

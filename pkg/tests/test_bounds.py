"""Tests for the theorem-certification reports.

Oracles: closed-form square/rectangle geometry, the radial disk solver
(already pinned against Bessel values in test_radial), and algebraic
identities between the two equivalent forms of each bound.
"""

import json
import math

import numpy as np
import pytest

from robinweb.bounds import (
    CSV_FIELDS,
    HOLDS,
    HOLDS_WITH_BAR,
    VIOLATED,
    OracleValue,
    TheoremReport,
    check_T1,
    check_T2,
    check_T3,
    check_fuglede_lemma,
    check_weak_remark,
    csv_header,
    fuglede_g,
    isoperimetric_deficit,
    polygon_eigenvalue_oracle,
)
from robinweb.geometry import (
    ConvexPolygon,
    random_convex_polygon,
    rectangle,
    regular_polygon,
)
from robinweb.radial import constant_C, solve_radial

ALPHA_SQUARE = 0.18109193760990028  # Fraenkel index of the unit square (pinned in test_geometry)


def unit_square() -> ConvexPolygon:
    return ConvexPolygon([(0, 0), (1, 0), (1, 1), (0, 1)], name="square")


@pytest.fixture(scope="module")
def t1_square():
    return check_T1(unit_square(), 2.0, 1.0)


@pytest.fixture(scope="module")
def t2_square():
    return check_T2(unit_square(), 2.0, -1.0)


@pytest.fixture(scope="module")
def t3_square():
    return check_T3(unit_square(), 2.0, -1.0)


@pytest.fixture(scope="module")
def t3_64gon():
    return check_T3(regular_polygon(64, 0.1), 2.0, -1.0)


@pytest.fixture(scope="module")
def wr_square():
    return check_weak_remark(unit_square(), 2.0, -1.0)


class TestFugledeG:
    def test_planar_branch_is_square(self):
        for s in (0.0, 0.1, 0.37, 1.7):
            assert fuglede_g(2, s) == pytest.approx(s * s, rel=1e-15, abs=1e-300)

    def test_high_dimension_power(self):
        assert fuglede_g(4, 0.1) == pytest.approx(0.1 ** 2.5, rel=1e-14)
        assert fuglede_g(4, 0.1) == pytest.approx(3.162277660e-3, rel=1e-9)
        assert fuglede_g(5, 0.3) == pytest.approx(0.3 ** 3, rel=1e-14)
        assert fuglede_g(7, 0.2) == pytest.approx(0.2 ** 4, rel=1e-14)

    def test_three_dimensions_inverts_t_log(self):
        for s in (0.05, 0.1, 0.3):
            t = fuglede_g(3, s)
            assert 0.0 < t < math.exp(-1.0)
            assert t * math.log(1.0 / t) == pytest.approx(s ** 4, rel=1e-12)

    def test_three_dimensions_reference_value(self):
        # root of t ln(1/t) = 1e-4 on (0, 1/e)
        assert fuglede_g(3, 0.1) == pytest.approx(8.7e-6, abs=2e-7)

    def test_three_dimensions_monotone(self):
        vals = [fuglede_g(3, s) for s in (0.01, 0.05, 0.1, 0.2, 0.4)]
        assert all(b > a for a, b in zip(vals, vals[1:]))

    def test_zero_maps_to_zero(self):
        for n in (2, 3, 4, 6):
            assert fuglede_g(n, 0.0) == 0.0

    def test_three_dimensions_domain_error(self):
        with pytest.raises(ValueError):
            fuglede_g(3, 0.75)  # s^2 > 1/e
        assert fuglede_g(3, 0.55) > 0.0  # s^2 = 0.3025 < 1/e still fine

    def test_invalid_arguments(self):
        with pytest.raises(ValueError):
            fuglede_g(1, 0.1)
        with pytest.raises(ValueError):
            fuglede_g(2, -0.1)


class TestPolygonOracle:
    def test_richardson_kind_at_p2(self):
        oracle = polygon_eigenvalue_oracle(unit_square(), 2.0, 1.0, levels=(1, 2, 3))
        assert oracle.kind == "richardson"
        assert oracle.error_bar > 0.0
        assert len(oracle.level_history) == 3

    def test_memoized(self):
        a = polygon_eigenvalue_oracle(unit_square(), 2.0, 1.0, levels=(1, 2, 3))
        b = polygon_eigenvalue_oracle(unit_square(), 2.0, 1.0, levels=(1, 2, 3))
        assert a is b

    def test_upper_bound_kind_off_p2(self):
        oracle = polygon_eigenvalue_oracle(unit_square(), 1.5, 1.0, levels=(1, 2))
        assert oracle.kind == "upper_bound"
        assert len(oracle.level_history) == 2
        # refinement can only lower a variational upper bound
        assert oracle.level_history[1][1] <= oracle.level_history[0][1] + 1e-12

    def test_disk_limit_matches_radial(self):
        poly = regular_polygon(256, 0.02)
        oracle = polygon_eigenvalue_oracle(poly, 2.0, 1.0, levels=(1, 2, 3))
        radius = 256 * 0.02 / (2.0 * math.pi)
        lam_star = solve_radial(2, 2.0, 1.0, radius).eigenvalue
        assert oracle.value == pytest.approx(lam_star, rel=2e-3)
        assert oracle.value >= lam_star  # perimeter-matched disk minimizes

    def test_invalid_levels(self):
        with pytest.raises(ValueError):
            polygon_eigenvalue_oracle(unit_square(), 2.0, 1.0, levels=(3,))
        with pytest.raises(ValueError):
            polygon_eigenvalue_oracle(unit_square(), 2.0, 1.0, levels=(3, 3))


class TestCheckT1:
    def test_square_holds(self, t1_square):
        assert t1_square.status == HOLDS
        assert t1_square.slack > 0.0
        assert not t1_square.trivial_regime
        assert t1_square.applicable

    def test_square_deficit_closed_form(self, t1_square):
        assert t1_square.details["deficit"] == pytest.approx(1.0 - math.pi / 4.0, abs=1e-12)

    def test_sides_recomputed_independently(self, t1_square):
        lam = t1_square.details["lambda_oracle"]
        radius = 4.0 / (2.0 * math.pi)
        pair = solve_radial(2, 2.0, 1.0, radius)
        assert t1_square.lhs == pytest.approx((lam - pair.eigenvalue) / lam, rel=1e-12)
        assert t1_square.rhs == pytest.approx(constant_C(pair) * (1.0 - math.pi / 4.0), rel=1e-12)
        assert t1_square.slack == pytest.approx(t1_square.rhs - t1_square.lhs, rel=1e-12)

    def test_relative_gap_below_one(self, t1_square):
        assert 0.0 < t1_square.lhs < 1.0

    def test_faber_krahn_direction(self, t1_square):
        assert t1_square.details["faber_krahn_slack"] > 0.0

    def test_uniform_cap(self, t1_square):
        assert t1_square.details["cap_slack"] >= 0.0
        assert t1_square.constant_used <= t1_square.details["uniform_cap"]

    def test_constant_monotone_in_beta(self):
        weak = check_T1(unit_square(), 2.0, 0.1, levels=(1, 2, 3))
        strong = check_T1(unit_square(), 2.0, 10.0, levels=(1, 2, 3))
        assert strong.constant_used >= weak.constant_used
        assert weak.status == HOLDS and strong.status == HOLDS

    def test_trivial_regime_flag(self):
        report = check_T1(rectangle(4, 1), 2.0, 10.0, levels=(1, 2, 3))
        assert report.trivial_regime
        assert report.details["deficit"] >= report.details["trivial_threshold"]
        assert report.rhs >= 1.0 > report.lhs
        assert report.status == HOLDS

    def test_near_disk_both_sides_vanish(self):
        report = check_T1(regular_polygon(128, 0.05), 2.0, 1.0, levels=(1, 2, 3))
        assert abs(report.lhs) < 5e-3
        assert report.rhs < 1e-3
        assert report.status != VIOLATED

    def test_one_sided_oracle_certifies_holds(self):
        report = check_T1(unit_square(), 1.5, 1.0, levels=(1, 2))
        assert report.oracle_kind == "upper_bound"
        assert report.status == HOLDS
        assert report.slack > 0.0
        assert math.isfinite(report.error_bar)

    def test_rejects_wrong_sign(self):
        with pytest.raises(ValueError):
            check_T1(unit_square(), 2.0, -1.0)
        with pytest.raises(ValueError):
            check_T1(unit_square(), 2.0, math.inf)
        with pytest.raises(ValueError):
            check_T1(unit_square(), 1.0, 1.0)


class TestCheckT2:
    def test_square_holds_with_positive_slack(self, t2_square):
        assert t2_square.status == HOLDS
        assert t2_square.slack > 0.0
        assert t2_square.constant_branch == "min_power_ratio"

    def test_reverse_faber_krahn_direction(self, t2_square):
        assert t2_square.details["reverse_faber_krahn_slack"] > 0.0

    def test_volume_form_identity(self, t2_square):
        # C * deficit and (v_min^p/||v||_p^p)(|B| - |K|) are the same number
        assert t2_square.details["volume_form_agreement"] == pytest.approx(0.0, abs=1e-12)
        assert t2_square.details["volume_form_slack"] == pytest.approx(t2_square.slack, rel=1e-9)

    def test_sides_recomputed_independently(self, t2_square):
        lam = t2_square.details["lambda_oracle"]
        pair = solve_radial(2, 2.0, -1.0, 4.0 / (2.0 * math.pi))
        assert t2_square.lhs == pytest.approx((pair.eigenvalue - lam) / abs(lam), rel=1e-12)
        assert t2_square.rhs == pytest.approx(constant_C(pair) * (1.0 - math.pi / 4.0), rel=1e-12)

    def test_strong_negative_beta_constant_decays_but_holds(self, t2_square):
        report = check_T2(unit_square(), 2.0, -10.0, levels=(1, 2, 3))
        assert report.constant_used < t2_square.constant_used
        assert report.status == HOLDS
        assert report.slack > 0.0

    def test_near_disk_both_sides_vanish(self):
        report = check_T2(regular_polygon(128, 0.05), 2.0, -1.0, levels=(1, 2, 3))
        assert abs(report.lhs) < 5e-3
        assert report.status != VIOLATED

    def test_one_sided_oracle_certifies_holds(self):
        report = check_T2(unit_square(), 3.0, -1.0, levels=(1, 2))
        assert report.oracle_kind == "upper_bound"
        assert report.status == HOLDS

    def test_rejects_wrong_sign(self):
        with pytest.raises(ValueError):
            check_T2(unit_square(), 2.0, 1.0)
        with pytest.raises(ValueError):
            check_T2(unit_square(), 2.0, 0.0)


class TestCheckT3:
    def test_64gon_chain_holds(self, t3_64gon):
        assert t3_64gon.status == HOLDS
        assert t3_64gon.applicable  # near-disk gap is inside the smallness regime
        assert t3_64gon.slack > 0.0
        assert t3_64gon.details["link1_slack"] > 0.0
        assert t3_64gon.details["link2_slack"] > 0.0
        assert t3_64gon.details["link3_slack"] > 0.0

    def test_square_links_and_ratio(self, t3_square):
        assert t3_square.details["link1_slack"] > 0.0
        assert t3_square.details["link2_slack"] > 0.0
        ratio = t3_square.details["m_over_g"]
        assert math.isfinite(ratio) and ratio > 0.0

    def test_explicit_constant_composition(self, t3_square):
        pair = solve_radial(2, 2.0, -1.0, 4.0 / (2.0 * math.pi))
        ratio = pair.v_min ** 2 / pair.lp_norm_p
        k_const = 1.0 * (4.0 * math.pi / 4.0) * ratio
        assert t3_square.constant_used == pytest.approx(k_const, rel=1e-12)
        assert t3_square.rhs == pytest.approx(
            k_const * (pair.ball_volume - 1.0), rel=1e-12)

    def test_chain_is_ordered(self, t3_square):
        # the explicit end is the weakest link: rhs <= |lam| r M <= gap
        lam = t3_square.details["lambda_oracle"]
        ratio = t3_square.details["profile_ratio"]
        m = t3_square.details["volume_deficit"]
        middle = abs(lam) * ratio * m
        assert t3_square.rhs <= middle + 1e-12
        assert middle <= t3_square.lhs + 1e-12

    def test_smallness_regime_configurable(self):
        report = check_T3(unit_square(), 2.0, -1.0, levels=(1, 2, 3), delta0=1e-6)
        assert not report.applicable
        assert report.details["smallness_regime"] is False
        assert report.status == HOLDS  # chain still evaluated and passing

    def test_isoperimetric_link_strict_for_polygons(self, t3_square, t3_64gon):
        for report in (t3_square, t3_64gon):
            assert report.details["link3_slack"] > 0.0

    def test_near_disk_slack_vanishes(self):
        report = check_T3(regular_polygon(256, 0.02), 2.0, -1.0, levels=(1, 2, 3))
        assert abs(report.lhs) < 5e-3
        assert report.status != VIOLATED

    def test_rejects_wrong_sign(self):
        with pytest.raises(ValueError):
            check_T3(unit_square(), 2.0, 0.5)


class TestCheckWeakRemark:
    def test_square_recorded_values(self, wr_square):
        assert wr_square.details["alpha"] == pytest.approx(ALPHA_SQUARE, rel=1e-6)
        assert wr_square.details["deficit"] == pytest.approx(1.0 - math.pi / 4.0, abs=1e-12)
        ratio = (1.0 - math.pi / 4.0) / ALPHA_SQUARE ** 2
        assert wr_square.details["deficit_over_alpha_sq"] == pytest.approx(ratio, rel=1e-5)
        assert ratio == pytest.approx(6.55, abs=0.01)

    def test_square_applicable_and_holds(self, wr_square):
        assert wr_square.applicable
        assert wr_square.status == HOLDS
        assert wr_square.slack > 0.0
        assert wr_square.rhs == 0.0

    def test_unknown_constants_recorded_positive(self, wr_square):
        assert wr_square.details["gamma_empirical"] > 0.0
        assert wr_square.details["trombetti_empirical"] > 0.0
        assert wr_square.constant_used == wr_square.details["gap_over_hausdorff_form"]
        assert wr_square.constant_used > 0.0

    def test_hausdorff_form_assembly(self, wr_square):
        d = wr_square.details["hausdorff_sharp"]
        s = wr_square.details["diameter_sum"]
        assert wr_square.details["hausdorff_form"] == pytest.approx(d ** 4 / s ** 4, rel=1e-12)
        r_sharp = math.sqrt(1.0 / math.pi)
        assert s == pytest.approx(math.sqrt(2.0) + 2.0 * r_sharp, rel=1e-9)

    def test_elongated_rectangle_trips_precondition(self):
        report = check_weak_remark(rectangle(3, 1), 2.0, -1.0, levels=(1, 2, 3))
        assert report.details["alpha"] >= 0.5
        assert not report.applicable
        # ratios are still evaluated and recorded
        assert math.isfinite(report.details["deficit_over_alpha_sq"])

    def test_rejects_wrong_sign(self):
        with pytest.raises(ValueError):
            check_weak_remark(unit_square(), 2.0, 2.0)


class TestFugledeLemma:
    def test_square_closed_form(self):
        report = check_fuglede_lemma(unit_square())
        m_exact = 4.0 / math.pi - 1.0
        haus = 2.0 / math.pi - 0.5
        assert report.lhs == pytest.approx(m_exact, abs=1e-9)
        assert report.slack == report.lhs
        assert report.details["hausdorff_star"] == pytest.approx(haus, abs=1e-6)
        assert report.constant_used == pytest.approx(m_exact / haus ** 2, rel=1e-4)
        assert report.status == HOLDS
        assert report.applicable

    def test_corpus_ratio_bounded_below(self):
        rng = np.random.default_rng(7)
        corpus = [
            unit_square(),
            regular_polygon(6),
            rectangle(2, 1),
            random_convex_polygon(7, rng),
        ]
        ratios = [check_fuglede_lemma(poly).constant_used for poly in corpus]
        assert min(ratios) > 1.0
        assert all(math.isfinite(r) for r in ratios)

    def test_smallness_flag(self):
        assert check_fuglede_lemma(unit_square()).applicable
        assert not check_fuglede_lemma(rectangle(8, 1)).applicable

    def test_geometry_only(self):
        report = check_fuglede_lemma(regular_polygon(16))
        assert report.oracle_kind == "geometry_only"
        assert math.isnan(report.p) and math.isnan(report.beta)


class TestReportSerialization:
    def test_json_round_trip(self, t1_square):
        blob = json.dumps(t1_square.to_json(), allow_nan=False)
        back = json.loads(blob)
        assert back["theorem_id"] == "T1"
        assert back["status"] == HOLDS
        assert back["slack"] == pytest.approx(t1_square.slack, rel=1e-15)
        assert back["details"]["deficit"] == pytest.approx(1.0 - math.pi / 4.0, abs=1e-12)

    def test_nonfinite_fields_sanitized(self):
        report = check_fuglede_lemma(unit_square())
        blob = json.dumps(report.to_json(), allow_nan=False)  # nan p/beta become strings
        assert json.loads(blob)["p"] == "nan"

    def test_csv_row_matches_header(self, t1_square, t2_square):
        assert csv_header() == ",".join(CSV_FIELDS)
        for report in (t1_square, t2_square):
            row = report.csv_row()
            assert len(row.split(",")) == len(CSV_FIELDS)
            assert row.split(",")[0] == report.theorem_id
            assert row.split(",")[11] == report.status


class TestInvariants:
    def test_deficit_range_and_monotone_in_sides(self):
        last = 1.0
        for k in (3, 4, 8, 16, 64):
            d = isoperimetric_deficit(regular_polygon(k))
            assert 0.0 < d < 1.0
            assert d < last
            last = d

    def test_deficit_closed_forms(self):
        assert isoperimetric_deficit(rectangle(5, 1)) == pytest.approx(
            1.0 - 4.0 * math.pi * 5.0 / 144.0, abs=1e-12)
        assert isoperimetric_deficit(unit_square()) == pytest.approx(
            1.0 - math.pi / 4.0, abs=1e-12)

    def test_deficit_vanishes_only_in_disk_limit(self):
        assert isoperimetric_deficit(unit_square()) > 1e-9
        fine = isoperimetric_deficit(regular_polygon(4096, 1e-3))
        assert 0.0 < fine < 1e-6  # approaches 0 only as the polygon rounds off

    def test_bernoulli_step(self):
        # (1+x)^{n/(n-1)} >= 1 + n x / (n-1) for x >= 0
        for n in (2, 3, 4, 7):
            r = n / (n - 1.0)
            for x in (0.0, 1e-6, 0.5, 1.0, 3.0, 7.5):
                assert (1.0 + x) ** r >= 1.0 + r * x - 1e-12

    def test_faber_krahn_small_corpus(self):
        for poly in (unit_square(), regular_polygon(6), rectangle(2, 1)):
            pos = check_T1(poly, 2.0, 1.0, levels=(1, 2, 3))
            neg = check_T2(poly, 2.0, -1.0, levels=(1, 2, 3))
            assert pos.details["faber_krahn_slack"] >= -pos.details["oracle_error_bar"]
            assert neg.details["reverse_faber_krahn_slack"] >= -neg.details["oracle_error_bar"]

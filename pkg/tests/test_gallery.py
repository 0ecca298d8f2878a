"""Construction values and closed forms of the benchmark measures."""

import math

import numpy as np
import pytest

from ballmodes.gallery import (
    CrossedSquaresParams,
    NoModeParams,
    band_radius,
    build,
    build_crossed_squares,
    build_k_dependence,
    build_no_mode_density,
    build_two_line_gaussian,
    cross_center,
    cross_half_extent,
    expected_mass,
    no_mode_normaliser,
    oscillation_band,
)
from ballmodes.measure import Ball, PNorm, ball_mass, total_mass

SQRT2 = math.sqrt(2.0)
ALPHA = 7.0 / 8.0


def collinear_overlap(s1, s2):
    """Shared length of two segments; zero unless they overlap collinearly."""
    d = (s1.b[0] - s1.a[0], s1.b[1] - s1.a[1])
    e = (s2.b[0] - s2.a[0], s2.b[1] - s2.a[1])
    if d[0] * e[1] - d[1] * e[0] != 0.0:
        return 0.0
    if d[0] * (s2.a[1] - s1.a[1]) - d[1] * (s2.a[0] - s1.a[0]) != 0.0:
        return 0.0
    norm2 = d[0] * d[0] + d[1] * d[1]
    ta = (d[0] * (s2.a[0] - s1.a[0]) + d[1] * (s2.a[1] - s1.a[1])) / norm2
    tb = (d[0] * (s2.b[0] - s1.a[0]) + d[1] * (s2.b[1] - s1.a[1])) / norm2
    lo, hi = min(ta, tb), max(ta, tb)
    return max(0.0, min(hi, 1.0) - max(lo, 0.0)) * math.sqrt(norm2)


class TestCrossedSquares:
    def test_group_masses(self):
        m = build_crossed_squares()
        for n in range(12):
            group = m.components[6 * n: 6 * (n + 1)]
            cross = sum(c.mass for c in group[:2])
            square = sum(c.mass for c in group[2:])
            assert cross == pytest.approx(2.0 ** -(n - 1), rel=1e-12)
            assert square == pytest.approx(ALPHA * 2.0 ** -(n - 1), rel=1e-12)
            assert cross > square
            assert cross + square == pytest.approx((1.0 + ALPHA) * 2.0 ** -(n - 1), rel=1e-12)

    def test_single_group_total(self):
        m = build_crossed_squares(CrossedSquaresParams(n_crosses=1))
        assert total_mass(m) == pytest.approx((1.0 + ALPHA) * 2.0, rel=1e-12)

    def test_component_count(self):
        assert len(build_crossed_squares().components) == 72

    def test_center_spacing_all_norms(self):
        for n in range(1, 12):
            prev = cross_center(n - 1)
            cur = cross_center(n)
            # centres share the x axis, so every p-norm gives the same distance
            assert abs(cur[0] - prev[0]) == pytest.approx(2.0 ** -(n - 1), rel=1e-12)
            assert cur[1] == prev[1] == 0.0

    def test_components_pairwise_disjoint(self):
        m = build_crossed_squares(CrossedSquaresParams(n_crosses=6))
        comps = m.components
        for i in range(len(comps)):
            for j in range(i + 1, len(comps)):
                assert collinear_overlap(comps[i], comps[j]) == 0.0

    def test_band_ratio_between_bounds(self):
        m = build_crossed_squares()
        for n in range(1, 7):
            r = band_radius(n)
            lo, hi = oscillation_band(n)
            assert lo < r < hi
            ratio = (ball_mass(m, Ball(cross_center(n), r, PNorm.INF))
                     / ball_mass(m, Ball(cross_center(0), r, PNorm.INF)))
            assert 1.25 < ratio < 1.0 + ALPHA

    def test_mass_linear_below_band(self):
        # below the oscillation band a ball at a centre sees only the cross arms
        m = build_crossed_squares()
        for n in range(4):
            h = cross_half_extent(n)
            for r in (0.5 * h, 0.9 * h, h):
                got = ball_mass(m, Ball(cross_center(n), r, PNorm.INF))
                assert got == pytest.approx(4.0 * r, rel=1e-12)

    def test_param_validation(self):
        with pytest.raises(ValueError):
            CrossedSquaresParams(alpha=1.5)
        with pytest.raises(ValueError):
            CrossedSquaresParams(n_crosses=0)


class TestNoMode:
    def test_piece_geometry(self):
        p = NoModeParams()
        m = build_no_mode_density(p)
        norm = no_mode_normaliser(p)
        assert len(m.components) == 16
        for n, comp in enumerate(m.components, start=1):
            assert comp.hi - comp.lo == pytest.approx(2.0 ** (1 - 2 * n), rel=1e-12)
            assert comp.height == pytest.approx(2.0 ** (n - 1) / norm, rel=1e-12)
            assert comp.mass == pytest.approx(2.0 ** -n / norm, rel=1e-12)

    def test_total_mass_normalised(self):
        for n_pieces in (1, 4, 16):
            m = build_no_mode_density(NoModeParams(n_pieces=n_pieces))
            assert total_mass(m) == pytest.approx(1.0, rel=1e-12)

    def test_peak_ball_mass(self):
        p = NoModeParams()
        m = build_no_mode_density(p)
        norm = no_mode_normaliser(p)
        for n in range(1, 9):
            got = ball_mass(m, Ball((float(n),), p.b ** -n))
            assert got == pytest.approx(p.a ** -n / norm, rel=1e-12)

    def test_param_validation(self):
        with pytest.raises(ValueError):
            NoModeParams(a=1.0)
        with pytest.raises(ValueError):
            NoModeParams(b=2.0)


class TestKDependence:
    def test_total_mass(self):
        # four unit-half-length arms of density one
        assert total_mass(build_k_dependence()) == pytest.approx(8.0, rel=1e-12)

    @pytest.mark.parametrize("r", [0.1, 0.25, 0.4])
    def test_closed_forms(self, r):
        m = build_k_dependence()
        cases = [
            ((-1.0, 0.0), PNorm.ONE, 2.0 * SQRT2 * r),
            ((-1.0, 0.0), PNorm.INF, 4.0 * SQRT2 * r),
            ((1.0, 0.0), PNorm.ONE, 4.0 * r),
            ((1.0, 0.0), PNorm.INF, 4.0 * r),
        ]
        for center, norm, want in cases:
            assert ball_mass(m, Ball(center, r, norm)) == pytest.approx(want, rel=1e-12)

    def test_off_center_diamond_mass_bounded(self):
        m = build_k_dependence()
        rng = np.random.default_rng(3)
        for _ in range(25):
            # generic points on the axis-aligned arms, away from the crossing
            t = float(rng.uniform(0.1, 0.8))
            pt = (1.0 + t, 0.0) if rng.random() < 0.5 else (1.0, t)
            r = float(rng.uniform(0.01, 0.05))
            assert ball_mass(m, Ball(pt, r, PNorm.ONE)) <= 2.0 * r + 1e-12


class TestTwoLineGaussian:
    def test_total_mass_matches_truncated_gaussian(self):
        m = build_two_line_gaussian()
        want = math.erf(8.0 / SQRT2)
        assert abs(total_mass(m) - want) <= 1e-10

    def test_gap_at_origin(self):
        m = build_two_line_gaussian()
        for r in (0.2, 0.5, 0.99):
            assert ball_mass(m, Ball((0.0, 0.0), r, PNorm.INF)) == 0.0

    def test_line_masses_match_normal_cdf(self):
        m = build_two_line_gaussian()
        left = sum(c.mass for c in m.components if c.a[0] == -1.0)
        assert left == pytest.approx(0.5 * math.erf(8.0 / SQRT2), rel=1e-12)

    def test_mirror_symmetry(self):
        m = build_two_line_gaussian()
        for r in (0.1, 0.37, 1.4):
            f_right = ball_mass(m, Ball((1.0, 0.0), r, PNorm.INF))
            f_left = ball_mass(m, Ball((-1.0, 0.0), r, PNorm.INF))
            assert f_right == pytest.approx(f_left, rel=1e-13)


class TestBuildAndExpected:
    def test_build_dispatch(self):
        assert build("k-dependence").label == "k-dependence"
        assert len(build("no-mode", n_pieces=4).components) == 4
        with pytest.raises(KeyError):
            build("unknown-id")

    def test_expected_mass_crossed_squares(self):
        m = build_crossed_squares()
        for n in range(7):
            lo, hi = oscillation_band(n)
            r = band_radius(n)
            want = expected_mass("crossed-squares", cross_center(n), r, PNorm.INF)
            assert want is not None
            assert ball_mass(m, Ball(cross_center(n), r, PNorm.INF)) == pytest.approx(want, rel=1e-9)
            below = 0.5 * lo
            want = expected_mass("crossed-squares", cross_center(n), below, PNorm.INF)
            assert ball_mass(m, Ball(cross_center(n), below, PNorm.INF)) == pytest.approx(want, rel=1e-9)

    def test_expected_mass_k_dependence(self):
        m = build_k_dependence()
        got = expected_mass("example-5.3", (-1.0, 0.0), 0.1, PNorm.INF)
        assert got == pytest.approx(0.4 * SQRT2, rel=1e-12)
        for center in ((-1.0, 0.0), (1.0, 0.0)):
            for norm in (PNorm.ONE, PNorm.INF):
                for r in (0.05, 0.3, 0.45):
                    want = expected_mass("k-dependence", center, r, norm)
                    assert ball_mass(m, Ball(center, r, norm)) == pytest.approx(want, rel=1e-9)

    def test_expected_mass_no_mode(self):
        m = build_no_mode_density()
        for n in (1, 3, 8):
            r = 0.5 * 4.0 ** -n
            want = expected_mass("no-mode", (float(n),), r, PNorm.INF)
            assert ball_mass(m, Ball((float(n),), r)) == pytest.approx(want, rel=1e-9)

    def test_uncovered_regimes_signal_none(self):
        assert expected_mass("k-dependence", (-1.0, 0.0), 0.75, PNorm.INF) is None
        assert expected_mass("k-dependence", (-1.0, 0.0), 0.1, PNorm.TWO) is None
        assert expected_mass("k-dependence", (0.3, 0.0), 0.1, PNorm.INF) is None
        assert expected_mass("crossed-squares", cross_center(1), 0.4, PNorm.INF) is None
        assert expected_mass("no-mode", (1.5,), 0.01, PNorm.INF) is None
        assert expected_mass("two-line-gaussian", (1.0, 0.0), 0.1, PNorm.INF) is None

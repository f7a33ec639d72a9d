"""Profile construction, derivatives, and the admissibility margin."""

import math

import numpy as np
import pytest

from mindiag.errors import DomainError, InputError
from mindiag.profiles import (
    AdmissibilityReport,
    admissibility_margin,
    check_admissible_on,
    make_builtin,
)

ALL_NAMES = ["quadratic", "power:3", "power:1.5", "smoothed-g", "smoothed-h",
             "extended-h", "exp-square"]


def sample_range(profile):
    """A finite sampling interval inside the profile's domain."""
    lo, hi = profile.domain
    if profile.name == "exp-square":
        return (-3.0, 3.0)
    if math.isinf(lo):
        return (-8.0, 8.0)
    pad = 0.05 * (hi - lo)
    return (lo + pad, hi - pad)


def away_from_nonsmooth(profile, xs, slack=None):
    if slack is None:
        # fractional powers keep large higher derivatives well past the
        # singular point, so finite differences at step 1e-4 need a wider
        # berth there than the usual 1e-3
        slack = 0.05 if profile.name.startswith("power:1") else 1e-3
    keep = np.ones(len(xs), dtype=bool)
    for p in profile.nonsmooth_points:
        keep &= np.abs(xs - p) > slack
    return xs[keep]


class TestConstruction:
    def test_unknown_name_rejected(self):
        with pytest.raises(InputError):
            make_builtin("cubic-spline")

    def test_power_needs_exponent_above_one(self):
        with pytest.raises(InputError):
            make_builtin("power", c=1.0)
        with pytest.raises(InputError):
            make_builtin("power:0.5")
        with pytest.raises(InputError):
            make_builtin("power")

    def test_inline_parameter_parsing(self):
        p = make_builtin("power:3")
        assert p.eval(2.0) == pytest.approx(8.0, rel=1e-12)
        with pytest.raises(InputError):
            make_builtin("power:abc")
        with pytest.raises(InputError):
            make_builtin("power:3", c=3.0)

    def test_symmetry_flags(self):
        rng = np.random.default_rng(7)
        for name in ALL_NAMES:
            prof = make_builtin(name)
            assert prof.symmetric
            lo, hi = sample_range(prof)
            xs = rng.uniform(0.0, min(abs(lo), hi), 50)
            assert np.allclose(prof.eval(xs), prof.eval(-xs), rtol=1e-12, atol=1e-12)

    def test_domain_enforced(self):
        h = make_builtin("smoothed-h")
        with pytest.raises(DomainError):
            h.eval(math.pi)
        with pytest.raises(DomainError):
            h.eval(-math.pi - 0.1)
        with pytest.raises(DomainError):
            h.eval(np.array([0.0, 3.2]))

    def test_grid_values_inf_outside(self):
        h = make_builtin("smoothed-h")
        vals = h.grid_values(np.array([0.0, 3.2, -4.0]))
        assert vals[0] == pytest.approx(-math.log(2.0), rel=1e-12)
        assert math.isinf(vals[1]) and math.isinf(vals[2])

    def test_bad_order_rejected(self):
        q = make_builtin("quadratic")
        with pytest.raises(InputError):
            q.eval(1.0, 4)


class TestFrozenValues:
    def test_smoothed_g_at_zero(self):
        g = make_builtin("smoothed-g")
        assert g.eval(0.0, 0) == pytest.approx(math.log(4.0), abs=1e-12)
        assert g.eval(0.0, 1) == pytest.approx(0.0, abs=1e-12)
        assert g.eval(0.0, 2) == pytest.approx(0.5, abs=1e-12)
        assert g.eval(0.0, 3) == pytest.approx(0.0, abs=1e-12)

    def test_smoothed_h_at_zero(self):
        h = make_builtin("smoothed-h")
        assert h.eval(0.0, 0) == pytest.approx(-math.log(2.0), abs=1e-12)
        assert h.eval(0.0, 1) == pytest.approx(0.0, abs=1e-12)
        assert h.eval(0.0, 2) == pytest.approx(0.5, abs=1e-12)

    def test_smoothed_g_derivative_forms(self):
        # closed forms written with explicit exponentials
        g = make_builtin("smoothed-g")
        for x in (-3.0, -0.7, 0.4, 2.5, 11.0):
            e = math.exp(x)
            assert g.eval(x, 0) == pytest.approx(math.log(e + 2.0 + 1.0 / e), rel=1e-12)
            assert g.eval(x, 1) == pytest.approx((e - 1.0) / (e + 1.0), rel=1e-12)
            assert g.eval(x, 2) == pytest.approx(2.0 * e / (1.0 + e) ** 2, rel=1e-12)
            assert g.eval(x, 3) == pytest.approx(
                -2.0 * e * (e - 1.0) / (1.0 + e) ** 3, rel=1e-12)

    def test_smoothed_h_derivative_forms(self):
        h = make_builtin("smoothed-h")
        for y in (-2.8, -1.1, 0.3, 1.5, 2.9):
            assert h.eval(y, 0) == pytest.approx(-math.log(1.0 + math.cos(y)), rel=1e-12)
            assert h.eval(y, 1) == pytest.approx(math.tan(0.5 * y), rel=1e-12)
            assert h.eval(y, 2) == pytest.approx(1.0 / (1.0 + math.cos(y)), rel=1e-12)
            assert h.eval(y, 3) == pytest.approx(
                math.sin(y) / (1.0 + math.cos(y)) ** 2, rel=1e-12)

    def test_extended_h_c2_junction(self):
        h = make_builtin("extended-h")
        for side in (1.0, -1.0):
            y = side * math.pi / 2.0
            for order in (0, 1, 2):
                below = h.eval(y - side * 1e-9, order)
                above = h.eval(y + side * 1e-9, order)
                assert abs(above - below) <= 1e-8
        # third derivative is 0 on the quadratic side and at the junction guard
        assert h.eval(math.pi / 2.0, 3) == 0.0
        assert h.eval(2.0, 3) == 0.0
        assert h.eval(-4.0, 3) == 0.0

    def test_extended_h_matches_smoothed_inside(self):
        he = make_builtin("extended-h")
        hs = make_builtin("smoothed-h")
        ys = np.linspace(-1.5, 1.5, 101)
        for order in range(3):
            assert np.allclose(he.eval(ys, order), hs.eval(ys, order),
                               rtol=1e-12, atol=1e-12)

    def test_extended_h_quadratic_tail(self):
        h = make_builtin("extended-h")
        # tail is e + e^2/2 past the junction, with h'' = 1
        e = 1.25
        y = math.pi / 2.0 + e
        assert h.eval(y, 0) == pytest.approx(e + 0.5 * e * e, rel=1e-12)
        assert h.eval(y, 1) == pytest.approx(1.0 + e, rel=1e-12)
        assert h.eval(y, 2) == pytest.approx(1.0, rel=1e-12)
        assert h.eval(-y, 1) == pytest.approx(-(1.0 + e), rel=1e-12)

    def test_exp_square_values(self):
        f = make_builtin("exp-square")
        assert f.eval(1.0, 0) == pytest.approx(math.e, rel=1e-12)
        assert f.eval(1.0, 1) == pytest.approx(2.0 * math.e, rel=1e-12)
        assert f.eval(1.0, 2) == pytest.approx(6.0 * math.e, rel=1e-12)
        assert f.eval(1.0, 3) == pytest.approx(20.0 * math.e, rel=1e-12)


class TestMargin:
    def test_quadratic_margin_constant_four(self):
        q = make_builtin("quadratic")
        xs = np.linspace(-50.0, 50.0, 101)
        assert np.all(admissibility_margin(q, xs) == 4.0)

    def test_smoothed_h_margin_zero_at_half_pi(self):
        h = make_builtin("smoothed-h")
        assert abs(admissibility_margin(h, math.pi / 2.0)) <= 1e-9
        assert abs(admissibility_margin(h, -math.pi / 2.0)) <= 1e-9

    def test_exp_square_margin_at_one(self):
        f = make_builtin("exp-square")
        assert admissibility_margin(f, 1.0) == pytest.approx(
            -4.0 * math.exp(2.0), rel=1e-12)

    def test_smoothed_g_margin_positive(self):
        g = make_builtin("smoothed-g")
        xs = np.random.default_rng(3).uniform(-20.0, 20.0, 1000)
        assert np.all(admissibility_margin(g, xs) > 0.0)

    def test_extended_h_margin_positive(self):
        h = make_builtin("extended-h")
        rng = np.random.default_rng(4)
        ys = rng.uniform(-3.0 * math.pi, 3.0 * math.pi, 1000)
        for p in h.nonsmooth_points:
            ys = ys[np.abs(ys - p) > 1e-6 + 1e-9]
        assert np.all(admissibility_margin(h, ys) > 0.0)

    def test_exp_square_single_sign_change(self):
        f = make_builtin("exp-square")
        xs = np.linspace(1e-4, 2.0, 4001)
        margins = admissibility_margin(f, xs)
        signs = np.sign(margins)
        flips = np.nonzero(signs[:-1] * signs[1:] < 0)[0]
        assert len(flips) == 1
        lo, hi = xs[flips[0]], xs[flips[0] + 1]
        for _ in range(60):
            mid = 0.5 * (lo + hi)
            if admissibility_margin(f, mid) > 0:
                lo = mid
            else:
                hi = mid
        assert 0.5 * (lo + hi) == pytest.approx(1.0 / math.sqrt(2.0), abs=1e-6)

    def test_power_margin_positive(self):
        for c in (1.5, 2.5, 3.0, 4.0):
            prof = make_builtin("power", c=c)
            xs = np.random.default_rng(5).uniform(-5.0, 5.0, 500)
            xs = away_from_nonsmooth(prof, xs)
            assert np.all(admissibility_margin(prof, xs) > 0.0)


class TestAdmissibilityReport:
    def test_smoothed_h_inside_interval(self):
        h = make_builtin("smoothed-h")
        rep = check_admissible_on(h, (-1.5, 1.5), 1000)
        assert rep.min_margin > 0.0
        assert rep.admissible
        assert rep.first_violation is None

    def test_smoothed_h_outside_interval(self):
        h = make_builtin("smoothed-h")
        rep = check_admissible_on(h, (1.6, 3.0), 1000)
        assert rep.min_margin < 0.0
        assert not rep.admissible
        assert rep.first_violation is not None
        assert 1.6 <= rep.first_violation <= 3.0

    def test_exp_square_interval(self):
        f = make_builtin("exp-square")
        rep = check_admissible_on(f, (0.8, 2.0), 100)
        assert rep.min_margin < 0.0
        assert rep.first_violation == pytest.approx(0.8, abs=1e-12)

    def test_report_fields(self):
        q = make_builtin("quadratic")
        rep = check_admissible_on(q, (-2.0, 2.0), 17)
        assert isinstance(rep, AdmissibilityReport)
        assert rep.profile == "quadratic"
        assert rep.interval == (-2.0, 2.0)
        assert rep.samples == 17
        assert rep.min_margin == 4.0

    def test_interval_outside_domain_rejected(self):
        h = make_builtin("smoothed-h")
        with pytest.raises(DomainError):
            check_admissible_on(h, (-4.0, 1.0), 10)
        with pytest.raises(InputError):
            check_admissible_on(h, (1.0, 1.0), 10)
        with pytest.raises(InputError):
            check_admissible_on(h, (0.0, 1.0), 1)


class TestDerivativeConsistency:
    @pytest.mark.parametrize("name", ALL_NAMES)
    def test_finite_differences(self, name):
        prof = make_builtin(name)
        rng = np.random.default_rng(11)
        lo, hi = sample_range(prof)
        xs = away_from_nonsmooth(prof, rng.uniform(lo, hi, 1000))
        step = 1e-4
        for order in (1, 2, 3):
            exact = prof.eval(xs, order)
            fd = (prof.eval(xs + step, order - 1)
                  - prof.eval(xs - step, order - 1)) / (2.0 * step)
            err = np.abs(fd - exact)
            tol = 1e-5 * np.maximum(np.abs(exact), 1.0) + 1e-8
            assert np.all(err <= tol), f"{name} order {order}"

    @pytest.mark.parametrize("name", ALL_NAMES)
    def test_convexity_sampled(self, name):
        prof = make_builtin(name)
        rng = np.random.default_rng(13)
        lo, hi = sample_range(prof)
        xs = away_from_nonsmooth(prof, rng.uniform(lo, hi, 500))
        second = prof.eval(xs, 2)
        assert np.all(second >= 0.0)
        if prof.strictly_convex:
            assert np.all(second > 0.0)

import math

import numpy as np
import pytest

from mollab.besov import (BesovParams, besov_seminorm_space,
                          besov_seminorm_spacetime, dyadic_space_shifts,
                          holder_exponent_fit, translation_difference_norm)
from mollab.grid import Field, make_grid
from mollab.mollify import mollify_space
from mollab.synth import (Constant, FourierMode, Holder, Indicator, Separable,
                          generate)


class TestParams:
    def test_alpha_range(self):
        with pytest.raises(ValueError):
            BesovParams(alpha=0.0, q=3)
        with pytest.raises(ValueError):
            BesovParams(alpha=1.0, q=3)

    def test_beta_ordering(self):
        with pytest.raises(ValueError):
            BesovParams(alpha=0.5, q=3, beta=0.4, p=3)
        BesovParams(alpha=0.5, q=3, beta=0.5, p=3)


class TestDifferenceNorm:
    def test_indicator_closed_form(self):
        # shifting the half-torus indicator by y flips two strips of width y
        g = make_grid(1, 1024)
        f = generate(g, Indicator((0.0, 0.5)))
        for m in (1, 4, 16, 64):
            y = m * g.dx
            for q in (1, 2, 3):
                assert translation_difference_norm(f, (m,), q) == pytest.approx(
                    (2 * y) ** (1 / q), rel=1e-12)

    def test_translation_invariance_exact(self):
        g = make_grid(1, 256)
        rng = np.random.default_rng(0)
        f = Field(g, rng.standard_normal(256))
        fz = Field(g, np.roll(f.values(), 37))
        for m in (1, 8, 32):
            for q in (1, 2, 3, math.inf):
                assert (translation_difference_norm(f, (m,), q)
                        == translation_difference_norm(fz, (m,), q))


class TestSeminormSpace:
    def test_constant_flagged(self):
        g = make_grid(1, 64)
        est = besov_seminorm_space(generate(g, Constant(2.0)), 0.5, 3)
        assert est.seminorm == 0.0
        assert est.flag == "no_scaling"
        assert est.fitted_alpha is None

    def test_indicator_third(self):
        g = make_grid(1, 2 ** 12)
        f = generate(g, Indicator((0.0, 0.5)))
        est = besov_seminorm_space(f, 1 / 3, 3)
        assert est.fitted_alpha == pytest.approx(1 / 3, abs=0.05)
        assert est.seminorm > 0

    def test_scaling_homogeneity(self):
        g = make_grid(1, 512)
        rng = np.random.default_rng(2)
        f = Field(g, rng.standard_normal(512))
        e1 = besov_seminorm_space(f, 0.4, 2)
        e2 = besov_seminorm_space(Field(g, -3.5 * f.values()), 0.4, 2)
        assert e2.seminorm == pytest.approx(3.5 * e1.seminorm, rel=1e-12)

    def test_monotone_in_alpha(self):
        g = make_grid(1, 512)
        f = generate(g, Holder(0.5, seed=1))
        vals = [besov_seminorm_space(f, a, 2).seminorm
                for a in (0.2, 0.4, 0.6, 0.8)]
        assert all(a <= b for a, b in zip(vals, vals[1:]))

    def test_translation_invariance_of_seminorm(self):
        g = make_grid(1, 512)
        f = generate(g, Holder(0.5, seed=4))
        fz = Field(g, np.roll(f.values(), 100))
        a = besov_seminorm_space(f, 0.5, 3)
        b = besov_seminorm_space(fz, 0.5, 3)
        assert a.seminorm == b.seminorm

    def test_rejects_bad_input(self):
        g = make_grid(1, 64)
        f = generate(g, Constant(1.0))
        with pytest.raises(ValueError):
            besov_seminorm_space(f, 1.5, 3)
        with pytest.raises(ValueError):
            besov_seminorm_space(f, 0.5, 3, shift_set=[])
        with pytest.raises(ValueError):
            besov_seminorm_space(f, 0.5, 3, shift_set=[(0,)])
        with pytest.raises(ValueError):
            besov_seminorm_space(f, 0.5, 3, shift_set=[(33,)])  # > length/4

    def test_2d_shift_set_includes_diagonals(self):
        g = make_grid(2, 64)
        shifts = dyadic_space_shifts(g)
        assert (1, 1) in shifts and (1, 0) in shifts and (0, 1) in shifts
        f = generate(g, Holder(0.5, seed=3))
        est = besov_seminorm_space(f, 0.5, 2)
        assert est.seminorm > 0


class TestHolderFit:
    @pytest.mark.parametrize("q,expected", [(4, 0.25)])
    def test_indicator_exponent(self, q, expected):
        g = make_grid(1, 2 ** 12)
        f = generate(g, Indicator((0.0, 0.5)))
        fit = holder_exponent_fit(f, q)
        assert fit.alpha_hat == pytest.approx(expected, abs=0.05)

    def test_smooth_saturates_at_one(self):
        g = make_grid(1, 2 ** 12)
        f = generate(g, FourierMode(1))
        fit = holder_exponent_fit(f, 2)
        assert fit.alpha_hat == pytest.approx(1.0, abs=0.05)

    def test_generator_consistency(self):
        g = make_grid(1, 2 ** 13)
        fit = holder_exponent_fit(generate(g, Holder(0.35, seed=12)), 3)
        assert 0.25 <= fit.alpha_hat <= 0.45

    def test_generator_consistency_2d(self):
        g = make_grid(2, 512)
        for alpha in (0.3, 0.5):
            fit = holder_exponent_fit(generate(g, Holder(alpha, seed=4)), 3)
            assert abs(fit.alpha_hat - alpha) <= 0.1

    def test_constant_flagged(self):
        g = make_grid(1, 64)
        fit = holder_exponent_fit(generate(g, Constant(1.0)), 3)
        assert fit.flag == "no_scaling"
        assert fit.alpha_hat is None

    def test_mollification_never_reduces_regularity(self):
        g = make_grid(1, 2 ** 12)
        for alpha in (0.3, 0.5):
            f = generate(g, Holder(alpha, seed=8))
            base = holder_exponent_fit(f, 2).alpha_hat
            fe = mollify_space(f, 8 / g.n)
            assert holder_exponent_fit(fe, 2).alpha_hat >= base - 0.05


class TestSpacetime:
    def test_separable_recovers_both_exponents(self):
        g = make_grid(1, 2 ** 11, nt=2 ** 11, t_end=1.0)
        f = generate(g, Separable(Holder(0.6, seed=21), Holder(0.4, seed=22)),
                     time_periodic=True)
        est = besov_seminorm_spacetime(f, beta=0.6, p=2, alpha=0.4, q=2)
        assert est.temporal.fitted_alpha == pytest.approx(0.6, abs=0.1)
        assert est.spatial.fitted_alpha == pytest.approx(0.4, abs=0.1)

    def test_time_constant_field(self):
        g = make_grid(1, 256, nt=64, t_end=1.0)
        f = generate(g, Holder(0.5, seed=5), time_periodic=True)
        est = besov_seminorm_spacetime(f, beta=0.5, p=2, alpha=0.5, q=2)
        assert est.temporal.seminorm == 0.0
        assert est.temporal.flag == "no_scaling"
        assert est.spatial.seminorm > 0.0

    def test_constant_field_both_zero(self):
        g = make_grid(1, 64, nt=32, t_end=1.0)
        f = generate(g, Constant(3.0), time_periodic=True)
        est = besov_seminorm_spacetime(f, beta=0.5, p=2, alpha=0.5, q=2)
        assert est.temporal.seminorm == 0.0
        assert est.spatial.seminorm == 0.0

    def test_needs_time_axis(self):
        g = make_grid(1, 64)
        with pytest.raises(ValueError):
            besov_seminorm_spacetime(generate(g, Constant(1.0)),
                                     beta=0.5, p=2, alpha=0.5, q=2)

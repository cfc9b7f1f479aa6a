import math

import mpmath
import numpy as np
import pytest

from mollab.grid import Field, lp_norm, make_grid
from mollab.mollify import (Mollifier, kernel_normalization, kernel_value,
                            mollify_space, mollify_spacetime,
                            spectral_gradient)
from mollab.synth import (Constant, FourierMode, Holder, Indicator, Separable,
                          generate)


class TestKernelValue:
    def test_normalization_against_mpmath(self):
        # independent high-precision quadrature of the bump integral
        f = lambda r: mpmath.e ** (-1 / (1 - r * r))
        i1 = 2 * mpmath.quad(f, [0, 1])
        assert kernel_normalization(1) == pytest.approx(float(1 / i1), rel=1e-10)
        i2 = 2 * mpmath.pi * mpmath.quad(lambda r: r * f(r), [0, 1])
        assert kernel_normalization(2) == pytest.approx(float(1 / i2), rel=1e-10)
        i3 = 4 * mpmath.pi * mpmath.quad(lambda r: r * r * f(r), [0, 1])
        assert kernel_normalization(3) == pytest.approx(float(1 / i3), rel=1e-10)

    def test_known_value_1d(self):
        assert kernel_normalization(1) == pytest.approx(2.2523, abs=2e-4)
        assert kernel_value(0.0, 1.0) == pytest.approx(
            kernel_normalization(1) * math.exp(-1.0), rel=1e-12)

    def test_zero_on_and_outside_support(self):
        for eps in (0.5, 1.0, 2.0):
            assert kernel_value(eps, eps) == 0.0
            assert kernel_value(-1.5 * eps, eps) == 0.0
        assert kernel_value([0.6, 0.8], 1.0) == 0.0  # |x| = 1

    def test_even_symmetry(self):
        rng = np.random.default_rng(1)
        for x in rng.uniform(-1, 1, size=20):
            assert kernel_value(x, 1.0) == kernel_value(-x, 1.0)

    def test_rejects_bad_epsilon(self):
        with pytest.raises(ValueError):
            kernel_value(0.0, 0.0)


class TestMollifierWeights:
    @pytest.mark.parametrize("d,n,eps_cells", [(1, 64, 2), (1, 64, 8),
                                               (1, 256, 21), (2, 32, 4),
                                               (2, 64, 9)])
    def test_mass_exactly_one(self, d, n, eps_cells):
        g = make_grid(d, n)
        mol = Mollifier.space(g, eps_cells / n)
        assert math.fsum(mol.weights) == 1.0
        assert np.all(mol.weights >= 0.0)

    def test_support_in_ball(self):
        g = make_grid(2, 64)
        mol = Mollifier.space(g, 8 / 64)
        r = np.sqrt(np.sum((mol.offsets * g.dx) ** 2, axis=1))
        assert np.all(r < mol.epsilon)

    @pytest.mark.parametrize("d", [1, 2])
    def test_negation_symmetry(self, d):
        g = make_grid(d, 64)
        mol = Mollifier.space(g, 8 / 64)
        w = dict(zip((tuple(o) for o in mol.offsets), mol.weights))
        for off, wv in w.items():
            assert w[tuple(-o for o in off)] == wv

    def test_under_resolved_rejected(self):
        g = make_grid(1, 64)
        with pytest.raises(ValueError):
            Mollifier.space(g, 1.9 / 64)

    def test_spacetime_mass(self):
        g = make_grid(1, 32, nt=32, t_end=1.0)
        mol = Mollifier.spacetime(g, 4 / 32)
        assert math.fsum(mol.weights) == 1.0
        assert mol.d_eff == 2


class TestMollifySpace:
    def test_constant_fixed_point_exact(self):
        g = make_grid(1, 64)
        c = generate(g, Constant(2.7))
        for eps in (2 / 64, 8 / 64, 20 / 64):   # direct and FFT paths
            out = mollify_space(c, eps)
            assert np.array_equal(out.values(), c.values())

    def test_mode_damping_against_dense_oracle(self):
        # oracle: factor sum_j w_j cos(2 pi k y_j) applied to the same mode
        g = make_grid(1, 64)
        k = 3
        f = generate(g, FourierMode(k))
        eps = 8 / 64
        mol = Mollifier.space(g, eps)
        damp = math.fsum(mol.weights *
                         np.cos(2 * np.pi * k * mol.offsets[:, 0] * g.dx))
        out = mollify_space(f, eps)
        assert 0.0 < damp <= 1.0
        assert np.allclose(out.values(), damp * f.values(), atol=1e-12)

    def test_direct_and_fft_agree(self):
        rng = np.random.default_rng(7)
        for d, n in ((1, 128), (2, 32)):
            g = make_grid(d, n)
            f = Field(g, rng.standard_normal(g.space_shape))
            for eps_cells in (4, 8, 12):
                a = mollify_space(f, eps_cells / n, method="direct")
                b = mollify_space(f, eps_cells / n, method="fft")
                assert np.allclose(a.values(), b.values(), atol=1e-10)

    def test_indicator_bounds_and_locality(self):
        g = make_grid(1, 256)
        f = generate(g, Indicator((0.0, 0.5)))
        eps = 8 / 256
        out = mollify_space(f, eps).values()
        assert out.min() >= -1e-13 and out.max() <= 1.0 + 1e-13
        x = g.x()
        interior = (x > eps) & (x < 0.5 - eps)
        assert np.allclose(out[interior], 1.0, atol=1e-13)

    def test_minmax_bounds(self):
        g = make_grid(1, 256)
        rng = np.random.default_rng(3)
        f = Field(g, rng.standard_normal(256))
        out = mollify_space(f, 16 / 256).values()
        scale = np.abs(f.values()).max()
        assert out.max() <= f.values().max() + 1e-13 * scale
        assert out.min() >= f.values().min() - 1e-13 * scale

    def test_contraction_random_fields(self):
        g = make_grid(1, 128)
        rng = np.random.default_rng(11)
        for _ in range(20):
            f = Field(g, rng.standard_normal(128))
            fe = mollify_space(f, 8 / 128)
            for q in (1, 2, 3, math.inf):
                assert lp_norm(fe, q) <= lp_norm(f, q) * (1 + 1e-12)

    def test_epsilon_too_large_rejected(self):
        g = make_grid(1, 64)
        with pytest.raises(ValueError):
            mollify_space(generate(g, Constant(1.0)), 0.5)


class TestMollifySpacetime:
    def test_constant_on_interior_window(self):
        g = make_grid(1, 32, nt=64, t_end=1.0)
        c = generate(g, Constant(4.5))
        out = mollify_spacetime(c, 4 / 32)
        assert out.grid.nt < 64
        assert np.allclose(out.values(), 4.5, rtol=0, atol=1e-12)

    def test_constant_exact_when_periodic(self):
        g = make_grid(1, 32, nt=32, t_end=1.0)
        c = generate(g, Constant(1.25), time_periodic=True)
        out = mollify_spacetime(c, 4 / 32)
        assert np.array_equal(out.values(), c.values())

    def test_separable_matches_dense_oracle(self):
        # dense double-sum over the kernel lattice, wraparound in both axes
        g = make_grid(1, 32, nt=32, t_end=1.0)
        f = generate(g, Separable(FourierMode(1), FourierMode(2)),
                     time_periodic=True)
        eps = 4 / 32
        mol = Mollifier.spacetime(g, eps)
        arr = f.values()
        expect = np.zeros_like(arr)
        for w, (ot, ox) in zip(mol.weights, mol.offsets):
            expect += w * np.roll(np.roll(arr, ot, axis=0), ox, axis=1)
        out = mollify_spacetime(f, eps)
        assert np.allclose(out.values(), expect, atol=1e-10)

    def test_wrap_direct_and_fft_agree(self):
        g = make_grid(1, 64, nt=64, t_end=1.0)
        rng = np.random.default_rng(9)
        f = Field(g, rng.standard_normal((64, 64)), time_periodic=True)
        a = mollify_spacetime(f, 6 / 64, method="direct")
        b = mollify_spacetime(f, 6 / 64, method="fft")
        assert np.allclose(a.values(), b.values(), atol=1e-10)

    def test_compact_support_stays_zero(self):
        g = make_grid(1, 32, nt=128, t_end=1.0)
        data = np.zeros((128, 32))
        data[:40] = 1.7   # supported in t < t0 = 40*dt
        f = Field(g, data)
        eps = 8 / 128
        out = mollify_spacetime(f, eps)
        t_out = out.grid.t()
        beyond = t_out > 40 / 128 + eps
        assert np.all(out.values()[beyond] == 0.0)

    def test_no_interior_left_rejected(self):
        g = make_grid(1, 32, nt=16, t_end=0.25)
        f = generate(g, Constant(1.0))
        with pytest.raises(ValueError):
            mollify_spacetime(f, 0.125)   # eps = T/2

    def test_needs_time_axis(self):
        g = make_grid(1, 32)
        with pytest.raises(ValueError):
            mollify_spacetime(generate(g, Constant(1.0)), 4 / 32)


class TestSmoothingRates:
    def test_convergence_ratio_holder(self):
        g = make_grid(1, 2 ** 12)
        for alpha in (0.3, 0.6):
            f = generate(g, Holder(alpha, seed=11))
            eps = [2.0 ** (-k) for k in range(3, 9)]
            diffs = [lp_norm(Field(g, mollify_space(f, e).values() - f.values()), 2)
                     for e in eps]
            target = 2 ** (alpha - 0.15)
            for a, b in zip(diffs, diffs[1:]):
                assert a / b >= target

    def test_gradient_blowup_compensated(self):
        g = make_grid(1, 2 ** 12)
        f = generate(g, Holder(0.4, seed=2))
        eps = [2.0 ** (-k) for k in range(3, 9)]
        comp = [lp_norm(spectral_gradient(mollify_space(f, e)), 2) * e ** 0.6
                for e in eps]
        assert max(comp) / min(comp) < 4.0


class TestSpectralDerivative:
    def test_exact_on_modes(self):
        g = make_grid(1, 64)
        f = generate(g, FourierMode(3))
        df = spectral_gradient(f).values()
        x = g.x()
        assert np.allclose(df, 6 * np.pi * np.cos(6 * np.pi * x), atol=1e-10)

    def test_axis_validation(self):
        g = make_grid(1, 64)
        with pytest.raises(ValueError):
            spectral_gradient(generate(g, Constant(1.0)), axis=1)

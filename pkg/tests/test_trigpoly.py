import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.integrate import quad

from sturm_hurwitz import (
    Harmonic,
    MeanNotZero,
    TrigPoly,
    antiderivative,
    antiderivative_iter,
    derivative,
    evaluate,
    leading_harmonic,
    rescaled_antiderivative,
    sup_norm,
)
from sturm_hurwitz.trigpoly import grid_values

from conftest import brute_eval

coef = st.floats(min_value=-10, max_value=10, allow_nan=False, allow_infinity=False)


@st.composite
def polys(draw, mean_zero=False, max_degree=24):
    orders = draw(st.lists(st.integers(1 if mean_zero else 0, max_degree), min_size=0, max_size=8, unique=True))
    return TrigPoly([(k, draw(coef), 0.0 if k == 0 else draw(coef)) for k in orders])


SIN = TrigPoly([(1, 0, 1)])


class TestConstruction:
    def test_canonical_drops_zero_terms(self):
        p = TrigPoly([(3, 0.0, 0.0), (1, 2.0, 0.0)])
        assert p.orders.tolist() == [1]
        assert p.degree == 1

    def test_sorted_and_duplicates_rejected(self):
        assert TrigPoly([(5, 1, 0), (2, 0, 1)]).orders.tolist() == [2, 5]
        with pytest.raises(ValueError):
            TrigPoly([(2, 1, 0), (2, 0, 1)])

    @pytest.mark.parametrize("bad", [(-1, 1.0, 0.0), (0, 1.0, 2.0), (1, math.nan, 0.0), (1.5, 1.0, 0.0)])
    def test_invalid_harmonic(self, bad):
        with pytest.raises(ValueError):
            Harmonic(*bad)

    def test_empty_is_zero(self):
        assert TrigPoly().is_zero() and TrigPoly().degree == 0

    def test_immutable_arrays(self):
        with pytest.raises(ValueError):
            SIN.cos_coeffs[0] = 3.0


class TestEval:
    def test_sin_at_half_pi(self):
        assert evaluate(SIN, math.pi / 2) == 1.0

    def test_zero_function(self):
        assert evaluate(TrigPoly(), 3.7) == 0.0

    def test_mixed_at_origin(self):
        assert evaluate(TrigPoly([(2, 0.5, 0), (5, 0, 0.1)]), 0.0) == 0.5

    def test_array_input_shape(self):
        x = np.linspace(0, 1, 12).reshape(3, 4)
        assert evaluate(SIN, x).shape == (3, 4)

    def test_compensated_path_agrees_with_fsum(self, rng):
        k = np.arange(1, 200)
        p = TrigPoly.from_arrays(k, rng.standard_normal(k.size), rng.standard_normal(k.size))
        for x in rng.uniform(-10, 10, 20):
            assert abs(evaluate(p, x) - brute_eval(p, x)) < 1e-12

    def test_grid_values_match_direct(self, rng):
        k = np.arange(0, 17)
        b = rng.standard_normal(k.size)
        b[0] = 0
        p = TrigPoly.from_arrays(k, rng.standard_normal(k.size), b)
        x = 2 * np.pi * np.arange(64) / 64
        assert np.allclose(grid_values(p, 64), evaluate(p, x), atol=1e-13, rtol=0)


class TestCalculus:
    def test_derivative_examples(self):
        assert derivative(SIN) == TrigPoly([(1, 1, 0)])
        assert derivative(TrigPoly([(0, 2, 0)])) == TrigPoly()
        assert derivative(TrigPoly([(3, 1, 0)])) == TrigPoly([(3, 0, -3)])

    def test_antiderivative_examples(self):
        assert antiderivative(TrigPoly([(1, 1, 0)])) == SIN
        assert antiderivative(TrigPoly([(2, 0, 4)])) == TrigPoly([(2, -2, 0)])
        with pytest.raises(MeanNotZero):
            antiderivative(TrigPoly([(0, 1, 0)]))

    def test_antiderivative_iter_examples(self):
        assert antiderivative_iter(TrigPoly([(2, 1, 0)]), 4) == TrigPoly([(2, 1 / 16, 0)])
        assert antiderivative_iter(TrigPoly([(1, 1, 0)]), 2) == TrigPoly([(1, -1, 0)])
        p = TrigPoly([(1, 0.3, -2), (4, 1, 1)])
        assert antiderivative_iter(p, 1) == antiderivative(p)

    @given(polys(mean_zero=True))
    def test_roundtrip(self, p):
        back = derivative(antiderivative(p))
        a1, b1 = p.to_dense(30)
        a2, b2 = back.to_dense(30)
        assert np.max(np.abs(a1 - a2), initial=0) <= 1e-13
        assert np.max(np.abs(b1 - b2), initial=0) <= 1e-13

    @given(polys(mean_zero=True), st.integers(1, 12))
    def test_iter_equals_repeated(self, p, ell):
        q = p
        for _ in range(ell):
            q = antiderivative(q)
        assert antiderivative_iter(p, ell) == q

    @given(polys(mean_zero=True), st.integers(0, 40))
    def test_rescaled_is_positive_multiple(self, p, ell):
        if p.is_zero():
            return
        n = int(p.orders[0])
        scaled = rescaled_antiderivative(p, ell, n)
        if ell <= 12:
            raw = antiderivative_iter(p, ell) if ell else p
            x = np.linspace(0, 2 * np.pi, 17)
            assert np.allclose(evaluate(scaled, x), n ** ell * evaluate(raw, x), rtol=1e-12, atol=1e-12 * p.coefficient_bound())
        assert np.all(scaled.amplitudes <= p.amplitudes[: len(scaled)] * (1 + 1e-12))

    def test_quadrature_consistency(self, rng):
        for _ in range(25):
            k = np.arange(1, int(rng.integers(2, 12)))
            p = TrigPoly.from_arrays(k, rng.standard_normal(k.size), rng.standard_normal(k.size))
            P = antiderivative(p)
            x = float(rng.uniform(-7, 7))
            integral, _ = quad(lambda t: evaluate(p, t), 0.0, x, epsabs=1e-12, epsrel=1e-12, limit=200)
            assert abs((evaluate(P, x) - evaluate(P, 0.0)) - integral) < 1e-8

    def test_antiderivative_has_mean_zero(self):
        P = antiderivative(TrigPoly([(1, 1, 2), (3, -1, 0.5)]))
        assert P.coef(0) == (0.0, 0.0)


class TestAlgebra:
    @given(polys(), polys(), st.floats(-50, 50))
    def test_linearity(self, p, q, x):
        lhs = evaluate(p + q, x)
        rhs = evaluate(p, x) + evaluate(q, x)
        assert abs(lhs - rhs) <= 1e-12 * max(1.0, p.coefficient_bound() + q.coefficient_bound())

    @given(polys(), st.floats(-100, 100))
    def test_periodicity(self, p, x):
        assert abs(evaluate(p, x) - evaluate(p, x + 2 * math.pi)) <= 1e-10 * max(1.0, p.coefficient_bound())

    def test_translate_moves_graph(self, rng):
        p = TrigPoly([(2, 1, 0.5), (5, -0.3, 0.2)])
        q = p.translate(0.7)
        for x in rng.uniform(0, 6, 10):
            assert abs(evaluate(q, x) - evaluate(p, x - 0.7)) < 1e-13


class TestLeadingHarmonic:
    def test_examples(self):
        lh = leading_harmonic(TrigPoly([(2, 0.5, 0), (5, 0, 0.1)]), 1e-9)
        assert (lh.n, lh.rho, lh.phi) == (2, 0.5, 0.0)
        assert leading_harmonic(TrigPoly()) is None
        lh = leading_harmonic(TrigPoly([(3, 3, 4)]))
        assert lh.n == 3 and lh.rho == 5.0 and lh.phi == math.atan2(4, 3)

    def test_relative_threshold_is_scale_invariant(self):
        p = TrigPoly([(1, 1e-12, 0), (2, 1, 1)])
        for c in (1e-6, 1, 1e6):
            assert leading_harmonic(p * c).n == 2
        assert leading_harmonic(p, tol=0).n == 1

    def test_constant_ignored(self):
        assert leading_harmonic(TrigPoly([(0, 4, 0), (3, 0, 1)])).n == 3
        assert leading_harmonic(TrigPoly([(0, 4, 0)])) is None

    @given(coef.filter(lambda v: abs(v) > 1e-100), coef.filter(lambda v: abs(v) > 1e-100))
    def test_amplitude_identity(self, a, b):
        lh = leading_harmonic(TrigPoly([(1, a, b)]))
        assert abs(lh.rho ** 2 - (a * a + b * b)) <= 1e-14 * (a * a + b * b)


class TestSupNorm:
    def test_sin(self):
        assert abs(sup_norm(SIN) - 1.0) < 1e-6

    def test_empty(self):
        assert sup_norm(TrigPoly()) == 0.0

    def test_two_harmonics(self):
        # 2e6-point scan gives sup = 1.0812606...; the estimate must bracket it within [1.0, 1.1].
        s = sup_norm(TrigPoly([(2, 0, 1), (5, 0, 0.1)]))
        assert 1.0812606 <= s <= 1.1

    def test_rejects_coarse_grid(self):
        with pytest.raises(ValueError):
            sup_norm(SIN, 4)

    @settings(max_examples=60)
    @given(polys())
    def test_sandwich(self, p):
        s = sup_norm(p)
        if p.is_zero():
            assert s == 0.0
            return
        npts = 64 * max(p.degree, 1)
        grid_max = float(np.max(np.abs(grid_values(p, npts))))
        assert grid_max <= s <= max(grid_max, p.coefficient_bound())
        dense = np.linspace(0, 2 * np.pi, 20001)
        assert np.max(np.abs(evaluate(p, dense))) <= s * (1 + 1e-12)

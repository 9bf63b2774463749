import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from sturm_hurwitz import SampledSignal, TooFewSamples, TrigPoly, analyze, synthesize


def dft_direct(values):
    """O(N K) real DFT straight from the defining sums."""
    v = np.asarray(values, dtype=float)
    N = v.size
    x = 2 * np.pi * np.arange(N) / N
    K = (N - 1) // 2
    a = [v.mean()] + [2 / N * np.sum(v * np.cos(k * x)) for k in range(1, K + 1)]
    b = [0.0] + [2 / N * np.sum(v * np.sin(k * x)) for k in range(1, K + 1)]
    if N % 2 == 0:
        a.append(1 / N * np.sum(v * np.cos(N // 2 * x)))
        b.append(0.0)
    return np.array(a), np.array(b)


def test_sin_eight_points():
    p = analyze(synthesize(TrigPoly([(1, 0, 1)]), 8))
    a, b = p.to_dense(5)
    assert abs(b[1] - 1) < 1e-12
    assert np.all(np.abs(a) < 1e-12)
    assert np.all(np.abs(np.delete(b, 1)) < 1e-12)


def test_constant():
    assert analyze(SampledSignal((2.5,) * 7)) == TrigPoly([(0, 2.5, 0)])


def test_two_tone_n64():
    p = TrigPoly([(3, 1, 0), (7, 0, 0.25)])
    q = analyze(synthesize(p, 64))
    assert abs(q.coef(3)[0] - 1) < 1e-10 and abs(q.coef(7)[1] - 0.25) < 1e-10
    a1, b1 = p.to_dense(33)
    a2, b2 = q.to_dense(33)
    assert np.max(np.abs(a1 - a2)) < 1e-10 and np.max(np.abs(b1 - b2)) < 1e-10


def test_synthesize_examples():
    assert synthesize(TrigPoly(), 4).values == (0.0, 0.0, 0.0, 0.0)
    assert synthesize(TrigPoly([(0, 1, 0)]), 3).values == (1.0, 1.0, 1.0)
    assert np.allclose(synthesize(TrigPoly([(1, 0, 1)]), 4).values, [0, 1, 0, -1], atol=1e-15, rtol=0)


def test_too_few_samples():
    with pytest.raises(TooFewSamples):
        SampledSignal((1.0,))
    with pytest.raises(TooFewSamples):
        synthesize(TrigPoly(), 1)


@pytest.mark.parametrize("N", [2, 3, 8, 9, 31, 64])
def test_fft_matches_direct_sums(rng, N):
    v = rng.standard_normal(N)
    a, b = dft_direct(v)
    q = analyze(SampledSignal(tuple(v)))
    qa, qb = q.to_dense(a.size)
    assert np.allclose(qa, a, atol=1e-12, rtol=0) and np.allclose(qb, b, atol=1e-12, rtol=0)


@given(st.integers(0, 20), st.integers(0, 6), st.integers(0, 2**32 - 1))
def test_roundtrip(degree, extra, seed):
    r = np.random.default_rng(seed)
    k = np.arange(degree + 1)
    b = r.standard_normal(k.size)
    b[0] = 0
    p = TrigPoly.from_arrays(k, r.standard_normal(k.size), b)
    N = 2 * degree + 2 + extra
    q = analyze(synthesize(p, N))
    size = max(N // 2 + 1, degree + 1)
    a1, b1 = p.to_dense(size)
    a2, b2 = q.to_dense(size)
    assert np.max(np.abs(a1 - a2)) <= 1e-10 and np.max(np.abs(b1 - b2)) <= 1e-10


def test_parseval(rng):
    for _ in range(20):
        degree = int(rng.integers(0, 25))
        k = np.arange(degree + 1)
        b = rng.standard_normal(k.size)
        b[0] = 0
        p = TrigPoly.from_arrays(k, rng.standard_normal(k.size), b)
        v = np.array(synthesize(p, 2 * degree + 2).values)
        a, bb = p.to_dense()
        energy = a[0] ** 2 + 0.5 * np.sum(a[1:] ** 2 + bb[1:] ** 2)
        assert math.isclose(np.mean(v ** 2), energy, rel_tol=1e-9)

"""Brute-force zero counting by dense sign scanning.

This is the independent check on the certification pipeline: it never looks
at coefficients beyond evaluating the function, and refines with plain
bisection.  It only sees zeros where the function changes sign, so a
tangential zero is invisible to it.
"""

from __future__ import annotations

import math
from typing import Callable, Union

import numpy as np

from .trigpoly import TWO_PI, TrigPoly, evaluate

Periodic = Union[TrigPoly, Callable[[np.ndarray], np.ndarray]]

MIN_SAMPLES = 4


def as_callable(f: Periodic) -> Callable[[np.ndarray], np.ndarray]:
    if isinstance(f, TrigPoly):
        return lambda x: evaluate(f, x)
    return lambda x: np.asarray(f(x), dtype=float)


def default_samples(p: TrigPoly) -> int:
    return max(4096, 64 * p.degree)


def sample_window(f: Periodic, start: float, stop: float, samples: int, *, closed: bool):
    """Sample on a uniform grid over ``[start, stop)`` (or ``[start, stop]`` if ``closed``).

    If any sample is exactly zero the whole grid slides by half a step and is
    resampled once, so that sign changes are strict.
    """
    fn = as_callable(f)
    step = (stop - start) / samples
    idx = np.arange(samples + 1 if closed else samples, dtype=float)
    xs = start + step * idx
    values = fn(xs)
    if np.any(values == 0.0):
        xs = start + step * (idx + 0.5)
        values = fn(xs)
    return xs, values


def sign_change_mask(values: np.ndarray, cyclic: bool) -> np.ndarray:
    s = np.sign(values)
    nxt = np.roll(s, -1) if cyclic else s[1:]
    cur = s if cyclic else s[:-1]
    return cur * nxt < 0


def count_sign_changes(f: Periodic, samples: int | None = None) -> int:
    """Number of strict sign changes between cyclically adjacent samples on [0, 2*pi).

    Always even, since going once round the circle returns to the starting sign.
    """
    if samples is None:
        samples = default_samples(f) if isinstance(f, TrigPoly) else 4096
    if samples < MIN_SAMPLES:
        raise ValueError(f"samples must be at least {MIN_SAMPLES}")
    _, values = sample_window(f, 0.0, TWO_PI, samples, closed=False)
    return int(np.count_nonzero(sign_change_mask(values, cyclic=True)))


def bisect_brackets(fn, lo: np.ndarray, hi: np.ndarray, xtol: float, max_iter: int = 200) -> np.ndarray:
    """Plain vectorised bisection on sign-change brackets; returns midpoints."""
    lo = np.array(lo, dtype=float)
    hi = np.array(hi, dtype=float)
    if lo.size == 0:
        return lo
    s_lo = np.sign(fn(lo))
    for _ in range(max_iter):
        width = hi - lo
        active = width >= xtol
        if not active.any():
            break
        mid = 0.5 * (lo + hi)
        stalled = (mid <= lo) | (mid >= hi)
        active &= ~stalled
        if not active.any():
            break
        s_mid = np.sign(fn(mid))
        exact = active & (s_mid == 0)
        go_right = active & (s_mid == s_lo)
        go_left = active & ~go_right & ~exact
        lo = np.where(go_right | exact, mid, lo)
        hi = np.where(go_left | exact, mid, hi)
    return 0.5 * (lo + hi)


def locate_zeros(f: Periodic, samples: int | None = None, xtol: float = 1e-12) -> np.ndarray:
    """Sign-change zeros on [0, 2*pi), each bisected to width ``< xtol``, sorted."""
    if samples is None:
        samples = default_samples(f) if isinstance(f, TrigPoly) else 4096
    if samples < MIN_SAMPLES:
        raise ValueError(f"samples must be at least {MIN_SAMPLES}")
    fn = as_callable(f)
    xs, values = sample_window(f, 0.0, TWO_PI, samples, closed=False)
    idx = np.flatnonzero(sign_change_mask(values, cyclic=True))
    lo = xs[idx]
    hi = np.where(idx + 1 < samples, xs[(idx + 1) % samples], xs[0] + TWO_PI)
    roots = np.mod(bisect_brackets(fn, lo, hi, xtol), TWO_PI)
    roots[roots >= TWO_PI] = 0.0
    return np.sort(roots)


def resolution_stable(p: TrigPoly, coarse: int = 64, fine: int = 256) -> bool:
    """Whether sign-change counts at ``coarse`` and ``fine`` samples per harmonic agree."""
    deg = max(p.degree, 1)
    return count_sign_changes(p, max(MIN_SAMPLES, coarse * deg)) == count_sign_changes(p, max(MIN_SAMPLES, fine * deg))


def cyclic_distance(x: float, y: float) -> float:
    d = abs(x - y) % TWO_PI
    return min(d, TWO_PI - d)


def nearest_cyclic(points: np.ndarray, targets: np.ndarray) -> np.ndarray:
    """For each point, the cyclic distance to the closest target."""
    points = np.asarray(points, dtype=float)
    targets = np.asarray(targets, dtype=float)
    if targets.size == 0:
        return np.full(points.shape, math.inf)
    d = np.abs(np.subtract.outer(points, targets)) % TWO_PI
    return np.minimum(d, TWO_PI - d).min(axis=1)

"""Moving between uniform samples on [0, 2*pi) and coefficient form."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import TooFewSamples
from .trigpoly import TWO_PI, TrigPoly, evaluate


@dataclass(frozen=True)
class SampledSignal:
    """Values at ``x_j = 2*pi*j/N`` for ``j = 0..N-1``."""

    values: tuple[float, ...]

    def __post_init__(self):
        vals = tuple(float(v) for v in self.values)
        if len(vals) < 2:
            raise TooFewSamples(f"need at least 2 samples, got {len(vals)}")
        if not all(math.isfinite(v) for v in vals):
            raise ValueError("samples must be finite")
        object.__setattr__(self, "values", vals)

    @property
    def size(self) -> int:
        return len(self.values)

    def grid(self) -> np.ndarray:
        n = self.size
        return TWO_PI * np.arange(n) / n

    def as_array(self) -> np.ndarray:
        return np.array(self.values)


def analyze(signal: SampledSignal) -> TrigPoly:
    """Real discrete Fourier coefficients of a sampled signal.

    ``a_0`` is the sample mean, ``a_k, b_k = (2/N) sum v_j (cos, sin)(k x_j)``
    for ``1 <= k < N/2``; for even ``N`` the Nyquist order ``N/2`` gets weight
    ``1/N`` and no sine part.  Band-limited inputs with ``N >= 2 K + 2`` are
    recovered exactly (up to rounding).

    Coefficients below the transform's rounding floor
    (``16 eps log2(N) max|v|``) are set to zero, so a pure tone comes back
    as a single harmonic rather than one harmonic plus 1e-17 residue.
    """
    values = np.asarray(signal.values if isinstance(signal, SampledSignal) else signal, dtype=float)
    n = values.size
    if n < 2:
        raise TooFewSamples(f"need at least 2 samples, got {n}")
    spectrum = np.fft.rfft(values)
    a = 2.0 * spectrum.real / n
    b = -2.0 * spectrum.imag / n
    a[0] = spectrum[0].real / n
    b[0] = 0.0
    if n % 2 == 0:
        a[-1] = spectrum[-1].real / n
        b[-1] = 0.0
    floor = 16.0 * np.finfo(float).eps * max(1.0, math.log2(n)) * float(np.max(np.abs(values)))
    a[np.abs(a) <= floor] = 0.0
    b[np.abs(b) <= floor] = 0.0
    return TrigPoly.from_dense(a, b)


def synthesize(p: TrigPoly, n: int) -> SampledSignal:
    """Sample ``p`` at ``n`` equispaced points of [0, 2*pi)."""
    if n < 2:
        raise TooFewSamples(f"need at least 2 samples, got {n}")
    return SampledSignal(tuple(evaluate(p, TWO_PI * np.arange(n) / n).tolist()))

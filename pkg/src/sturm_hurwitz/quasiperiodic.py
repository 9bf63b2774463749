"""Trigonometric sums with arbitrary positive frequencies.

``q(x) = sum_i a_i cos(lambda_i x) + b_i sin(lambda_i x)`` is not periodic in
general, so instead of a zero count per period this module measures a zero
density (sign changes per unit length) over a long window.  Nothing here
asserts a theoretical lower bound; reports list ``lambda_1 / pi`` next to the
measurement for comparison only.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .errors import WindowUnderResolved
from .oracle import sign_change_mask
from .trigpoly import TrigPoly

_BLOCK = 1 << 18


@dataclass(frozen=True)
class QPTerm:
    lam: float
    a: float
    b: float = 0.0

    def __post_init__(self):
        for name in ("lam", "a", "b"):
            value = float(getattr(self, name))
            if not math.isfinite(value):
                raise ValueError(f"{name} must be finite")
            object.__setattr__(self, name, value)
        if not self.lam > 0:
            raise ValueError(f"frequencies must be positive, got {self.lam}")


class QPSum:
    """Finite sum of sinusoids with strictly increasing positive frequencies."""

    __slots__ = ("terms", "_lam", "_a", "_b")

    def __init__(self, terms: Iterable[QPTerm | tuple]):
        terms = tuple(t if isinstance(t, QPTerm) else QPTerm(*t) for t in terms)
        if not terms:
            raise ValueError("a quasi-periodic sum needs at least one term")
        lams = [t.lam for t in terms]
        if any(l2 <= l1 for l1, l2 in zip(lams, lams[1:])):
            raise ValueError("frequencies must be strictly increasing")
        if all(t.a == 0.0 and t.b == 0.0 for t in terms):
            raise ValueError("at least one term must be nonzero")
        self.terms = terms
        self._lam = np.array(lams)
        self._a = np.array([t.a for t in terms])
        self._b = np.array([t.b for t in terms])

    @classmethod
    def from_trigpoly(cls, p: TrigPoly) -> "QPSum":
        if p.orders.size and p.orders[0] == 0:
            raise ValueError("a constant term has frequency zero and cannot be represented")
        return cls(QPTerm(float(k), float(a), float(b)) for k, a, b in zip(p.orders, p.cos_coeffs, p.sin_coeffs))

    def to_trigpoly(self) -> TrigPoly:
        """Exact conversion when every frequency is a whole number."""
        if np.any(self._lam != np.round(self._lam)):
            raise ValueError("only integer frequencies give a 2*pi-periodic polynomial")
        return TrigPoly.from_arrays(self._lam.astype(np.int64), self._a, self._b)

    @property
    def lowest(self) -> float:
        return float(self._lam[0])

    @property
    def highest(self) -> float:
        return float(self._lam[-1])

    def scaled(self, c: float) -> "QPSum":
        return QPSum(QPTerm(t.lam, c * t.a, c * t.b) for t in self.terms)

    def __call__(self, x):
        return eval_qp(self, x)

    def __repr__(self):
        return f"QPSum({[(t.lam, t.a, t.b) for t in self.terms]!r})"


def eval_qp(q: QPSum, x):
    """Pointwise value of the sum; scalar in, float out."""
    xa = np.asarray(x, dtype=float)
    phase = np.multiply.outer(xa, q._lam)
    out = np.cos(phase) @ q._a + np.sin(phase) @ q._b
    return float(out) if xa.ndim == 0 else out


def min_samples(q: QPSum, T: float) -> int:
    """Fewest samples giving 64 per period of the fastest term over a window of length ``T``."""
    return math.ceil(64.0 * q.highest * T / (2.0 * math.pi))


def count_zeros(q: QPSum, T: float, samples: int | None = None) -> int:
    """Strict sign changes between neighbouring samples over ``[0, T]``.

    The window is cut into ``samples`` equal steps.  If any sample lands
    exactly on zero the grid slides by half a step and the scan restarts.
    Long windows are processed in blocks, stitched by carrying the last sign.
    """
    if not T > 0:
        raise ValueError("window length must be positive")
    floor = min_samples(q, T)
    if samples is None:
        samples = max(4096, floor)
    if samples < floor:
        raise WindowUnderResolved(f"{samples} samples cannot resolve frequency {q.highest} over length {T} (need {floor})")
    step = T / samples
    for offset in (0.0, 0.5):
        count, exact_zero = _scan(q, step, samples, offset)
        if not exact_zero:
            return count
    return count


def _scan(q: QPSum, step: float, samples: int, offset: float):
    count = 0
    prev = None
    for start in range(0, samples + 1, _BLOCK):
        idx = np.arange(start, min(start + _BLOCK, samples + 1), dtype=float)
        s = np.sign(eval_qp(q, step * (idx + offset)))
        if np.any(s == 0):
            return 0, True
        if prev is not None:
            count += int(prev * s[0] < 0)
        count += int(np.count_nonzero(sign_change_mask(s, cyclic=False)))
        prev = s[-1]
    return count, False


def zero_density(q: QPSum, T: float, samples: int | None = None) -> float:
    """Zeros per unit length over ``[0, T]``."""
    return count_zeros(q, T, samples) / T


def density_report(q: QPSum, T: float, samples: int | None = None) -> dict:
    if samples is None:
        samples = max(4096, min_samples(q, T))
    count = count_zeros(q, T, samples)
    return {
        "window": T,
        "samples": samples,
        "sign_changes": count,
        "density": count / T,
        "reference_lambda1_over_pi": q.lowest / math.pi,
        "lambda_1": q.lowest,
        "lambda_N": q.highest,
    }

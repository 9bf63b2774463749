"""Real trigonometric polynomials in coefficient form.

A :class:`TrigPoly` stores the finite sum

    p(x) = sum_k  a_k cos(k x) + b_k sin(k x)

as three parallel arrays (orders, cosine and sine coefficients).  All calculus
is done exactly in coefficient space: differentiation multiplies by ``k`` and
rotates each ``(a, b)`` pair by a quarter turn, the mean-zero antiderivative
divides by ``k`` and rotates the other way.

Objects are immutable; every operation returns a new polynomial.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Iterator

import numpy as np

from .errors import MeanNotZero

TWO_PI = 2.0 * math.pi

# Above this many harmonics evaluation switches to compensated summation.
COMPENSATED_THRESHOLD = 64
# Cap on (points x harmonics) held in memory at once during evaluation.
_EVAL_BLOCK = 1 << 20


@dataclass(frozen=True)
class Harmonic:
    """One term ``a cos(kx) + b sin(kx)``."""

    k: int
    a: float
    b: float = 0.0

    def __post_init__(self):
        if isinstance(self.k, bool) or int(self.k) != self.k or self.k < 0:
            raise ValueError(f"harmonic order must be a non-negative integer, got {self.k!r}")
        if not (math.isfinite(self.a) and math.isfinite(self.b)):
            raise ValueError(f"harmonic {self.k} has non-finite coefficients")
        if self.k == 0 and self.b != 0.0:
            raise ValueError("a sine term of order zero is not allowed")
        object.__setattr__(self, "k", int(self.k))
        object.__setattr__(self, "a", float(self.a))
        object.__setattr__(self, "b", float(self.b))

    @property
    def amplitude(self) -> float:
        return math.hypot(self.a, self.b)


class TrigPoly:
    """Immutable real trigonometric polynomial with 2*pi period.

    Args:
        harmonics: iterable of :class:`Harmonic` or ``(k, a, b)`` tuples.
            Orders may come in any order but must not repeat.  Terms with
            ``a == b == 0`` are dropped, so the stored form is canonical and
            the empty polynomial is the zero function.
    """

    __slots__ = ("_k", "_a", "_b")

    def __init__(self, harmonics: Iterable[Harmonic | tuple] = ()):
        terms = [h if isinstance(h, Harmonic) else Harmonic(*h) for h in harmonics]
        terms.sort(key=lambda h: h.k)
        for prev, cur in zip(terms, terms[1:]):
            if prev.k == cur.k:
                raise ValueError(f"duplicate harmonic order {cur.k}")
        k = np.array([h.k for h in terms], dtype=np.int64)
        a = np.array([h.a for h in terms], dtype=float)
        b = np.array([h.b for h in terms], dtype=float)
        self._set(k, a, b)

    def _set(self, k, a, b):
        keep = (a != 0.0) | (b != 0.0)
        k, a, b = k[keep], a[keep], b[keep]
        for arr in (k, a, b):
            arr.setflags(write=False)
        self._k, self._a, self._b = k, a, b

    @classmethod
    def from_arrays(cls, k, a, b) -> "TrigPoly":
        """Build from parallel arrays of orders and coefficients (validated)."""
        k = np.asarray(k)
        a = np.asarray(a, dtype=float)
        b = np.asarray(b, dtype=float)
        if not (k.shape == a.shape == b.shape) or k.ndim != 1:
            raise ValueError("orders and coefficients must be 1-d arrays of equal length")
        if k.size:
            if np.any(k < 0) or np.any(k != np.round(k)):
                raise ValueError("harmonic orders must be non-negative integers")
            if not (np.all(np.isfinite(a)) and np.all(np.isfinite(b))):
                raise ValueError("coefficients must be finite")
            if np.any((k == 0) & (b != 0.0)):
                raise ValueError("a sine term of order zero is not allowed")
        k = k.astype(np.int64)
        order = np.argsort(k, kind="stable")
        k, a, b = k[order], a[order], b[order]
        if np.any(np.diff(k) == 0):
            raise ValueError("duplicate harmonic orders")
        return cls._trusted(k, a.copy(), b.copy())

    @classmethod
    def _trusted(cls, k, a, b) -> "TrigPoly":
        # Caller guarantees sorted unique orders, finite values, no sine at k=0.
        obj = cls.__new__(cls)
        obj._set(np.asarray(k, dtype=np.int64), np.asarray(a, dtype=float), np.asarray(b, dtype=float))
        return obj

    @classmethod
    def from_dense(cls, a, b=None) -> "TrigPoly":
        """Build from dense coefficient vectors indexed by order (``b[0]`` ignored)."""
        a = np.asarray(a, dtype=float)
        b = np.zeros_like(a) if b is None else np.asarray(b, dtype=float).copy()
        if a.shape != b.shape:
            raise ValueError("dense a and b must have equal length")
        if b.size:
            b[0] = 0.0
        return cls.from_arrays(np.arange(a.size), a, b)

    @classmethod
    def zero(cls) -> "TrigPoly":
        return cls()

    # -- inspection ---------------------------------------------------------

    @property
    def orders(self) -> np.ndarray:
        return self._k

    @property
    def cos_coeffs(self) -> np.ndarray:
        return self._a

    @property
    def sin_coeffs(self) -> np.ndarray:
        return self._b

    @property
    def harmonics(self) -> tuple[Harmonic, ...]:
        return tuple(Harmonic(int(k), float(a), float(b)) for k, a, b in zip(self._k, self._a, self._b))

    @property
    def degree(self) -> int:
        """Largest order with a nonzero term (0 for the zero function)."""
        return int(self._k[-1]) if self._k.size else 0

    @property
    def amplitudes(self) -> np.ndarray:
        return np.hypot(self._a, self._b)

    def coefficient_bound(self) -> float:
        """Sum of harmonic amplitudes, an upper bound for sup |p|."""
        return float(np.sum(self.amplitudes))

    def coef(self, k: int) -> tuple[float, float]:
        """Return ``(a_k, b_k)``; zero for an absent order."""
        i = np.searchsorted(self._k, k)
        if i < self._k.size and self._k[i] == k:
            return float(self._a[i]), float(self._b[i])
        return 0.0, 0.0

    def to_dense(self, size: int | None = None) -> tuple[np.ndarray, np.ndarray]:
        """Dense ``(a, b)`` arrays of length ``size`` (default ``degree + 1``)."""
        size = self.degree + 1 if size is None else size
        if size <= self.degree and self._k.size:
            raise ValueError(f"size {size} too small for degree {self.degree}")
        a = np.zeros(size)
        b = np.zeros(size)
        a[self._k] = self._a
        b[self._k] = self._b
        return a, b

    def is_zero(self) -> bool:
        return self._k.size == 0

    def __len__(self) -> int:
        return int(self._k.size)

    def __iter__(self) -> Iterator[Harmonic]:
        return iter(self.harmonics)

    def __eq__(self, other) -> bool:
        if not isinstance(other, TrigPoly):
            return NotImplemented
        return (
            np.array_equal(self._k, other._k)
            and np.array_equal(self._a, other._a)
            and np.array_equal(self._b, other._b)
        )

    def __hash__(self):
        return hash((self._k.tobytes(), self._a.tobytes(), self._b.tobytes()))

    def __repr__(self) -> str:
        terms = ", ".join(f"({k}, {a!r}, {b!r})" for k, a, b in zip(self._k.tolist(), self._a.tolist(), self._b.tolist()))
        return f"TrigPoly([{terms}])"

    # -- arithmetic ---------------------------------------------------------

    def __add__(self, other: "TrigPoly") -> "TrigPoly":
        if not isinstance(other, TrigPoly):
            return NotImplemented
        size = max(self.degree, other.degree) + 1
        a1, b1 = self.to_dense(size)
        a2, b2 = other.to_dense(size)
        return TrigPoly.from_dense(a1 + a2, b1 + b2)

    def __neg__(self) -> "TrigPoly":
        return TrigPoly._trusted(self._k, -self._a, -self._b)

    def __sub__(self, other: "TrigPoly") -> "TrigPoly":
        if not isinstance(other, TrigPoly):
            return NotImplemented
        return self + (-other)

    def __mul__(self, c) -> "TrigPoly":
        c = float(c)
        if not math.isfinite(c):
            raise ValueError("scale factor must be finite")
        return TrigPoly._trusted(self._k, c * self._a, c * self._b)

    __rmul__ = __mul__

    def without_mean(self) -> "TrigPoly":
        """Drop the constant term."""
        keep = self._k != 0
        return TrigPoly._trusted(self._k[keep], self._a[keep], self._b[keep])

    def truncate_below(self, n: int) -> "TrigPoly":
        """Keep only harmonics of order ``>= n``."""
        keep = self._k >= n
        return TrigPoly._trusted(self._k[keep], self._a[keep], self._b[keep])

    def translate(self, shift: float) -> "TrigPoly":
        """Return ``q`` with ``q(x) = p(x - shift)``, so zeros move by ``+shift``."""
        c, s = np.cos(self._k * shift), np.sin(self._k * shift)
        b = np.where(self._k == 0, 0.0, self._a * s + self._b * c)
        return TrigPoly._trusted(self._k, self._a * c - self._b * s, b)

    # -- evaluation ---------------------------------------------------------

    def __call__(self, x):
        return evaluate(self, x)


def evaluate_arrays(k, a, b, x, compensated: bool | None = None) -> np.ndarray:
    """Evaluate the sum defined by raw coefficient arrays at points ``x``."""
    x = np.asarray(x, dtype=float)
    flat = x.ravel()
    out = np.empty(flat.size)
    if k.size == 0:
        out[:] = 0.0
        return out.reshape(x.shape)
    if compensated is None:
        compensated = k.size > COMPENSATED_THRESHOLD
    step = max(1, _EVAL_BLOCK // k.size)
    kf = k.astype(float)
    for start in range(0, flat.size, step):
        xs = flat[start:start + step]
        phase = np.multiply.outer(xs, kf)
        terms = np.cos(phase) * a + np.sin(phase) * b
        out[start:start + step] = _neumaier_rows(terms) if compensated else terms.sum(axis=1)
    return out.reshape(x.shape)


def _neumaier_rows(terms: np.ndarray) -> np.ndarray:
    total = np.zeros(terms.shape[0])
    comp = np.zeros(terms.shape[0])
    for col in terms.T:
        t = total + col
        big = np.abs(total) >= np.abs(col)
        comp += np.where(big, (total - t) + col, (col - t) + total)
        total = t
    return total + comp


def evaluate(p: TrigPoly, x):
    """Evaluate ``p`` at a scalar or array of points (scalar in, float out)."""
    values = evaluate_arrays(p.orders, p.cos_coeffs, p.sin_coeffs, x)
    if np.ndim(x) == 0:
        return float(values)
    return values


def derivative(p: TrigPoly) -> TrigPoly:
    """Exact derivative: ``(k, a, b) -> (k, k b, -k a)``; constants vanish."""
    k = p.orders
    keep = k != 0
    k = k[keep]
    kf = k.astype(float)
    return TrigPoly._trusted(k, kf * p.sin_coeffs[keep], -kf * p.cos_coeffs[keep])


def _check_mean_zero(p: TrigPoly):
    if p.orders.size and p.orders[0] == 0:
        raise MeanNotZero(f"constant term {float(p.cos_coeffs[0])!r} must vanish before integrating")


def antiderivative(p: TrigPoly) -> TrigPoly:
    """Mean-zero antiderivative: ``(k, a, b) -> (k, -b/k, a/k)``.

    Raises:
        MeanNotZero: ``p`` has a constant term, so no periodic antiderivative exists.
    """
    _check_mean_zero(p)
    kf = p.orders.astype(float)
    return TrigPoly._trusted(p.orders, -p.sin_coeffs / kf, p.cos_coeffs / kf)


def antiderivative_iter(p: TrigPoly, ell: int) -> TrigPoly:
    """Apply :func:`antiderivative` ``ell`` times.

    Performs the same floating-point operations as ``ell`` separate calls, so
    the result matches them bit for bit.  For large ``ell`` the high orders
    underflow to zero; use :func:`rescaled_antiderivative` when that matters.
    """
    if ell < 1:
        raise ValueError("ell must be a positive integer")
    _check_mean_zero(p)
    kf = p.orders.astype(float)
    a, b = p.cos_coeffs, p.sin_coeffs
    for _ in range(ell):
        a, b = -b / kf, a / kf
    return TrigPoly._trusted(p.orders, a, b)


def rotate_quarter_turns(a, b, turns: int):
    """Apply ``(a, b) -> (-b, a)`` ``turns`` times (exact; sign flips and swaps only)."""
    turns %= 4
    if turns == 0:
        return a, b
    if turns == 1:
        return -b, a
    if turns == 2:
        return -a, -b
    return b, -a


def rescaled_antiderivative(p: TrigPoly, ell: int, ref_order: int) -> TrigPoly:
    """``ref_order**ell`` times the ``ell``-th mean-zero antiderivative of ``p``.

    Harmonic ``k`` is rotated ``ell`` quarter turns and scaled by
    ``(ref_order / k)**ell``.  With ``ref_order`` the lowest order present the
    factors never exceed one, so nothing overflows no matter how large
    ``ell`` gets; the result is a positive multiple of the true antiderivative
    and has the same zeros and signs.  ``ell == 0`` returns ``p`` unchanged.
    """
    if ell < 0:
        raise ValueError("ell must be non-negative")
    if ell == 0:
        return p
    _check_mean_zero(p)
    if ref_order < 1:
        raise ValueError("reference order must be positive")
    k = p.orders
    if k.size and k[0] < ref_order:
        raise ValueError("reference order exceeds the lowest harmonic present")
    factor = np.exp(ell * (math.log(ref_order) - np.log(k.astype(float))))
    factor[k == ref_order] = 1.0
    a, b = rotate_quarter_turns(p.cos_coeffs, p.sin_coeffs, ell)
    return TrigPoly._trusted(k, a * factor, b * factor)


@dataclass(frozen=True)
class LeadingHarmonic:
    """Lowest non-negligible harmonic ``a_n cos(nx) + b_n sin(nx) = rho cos(nx - phi)``."""

    n: int
    a_n: float
    b_n: float
    rho: float
    phi: float

    @classmethod
    def from_coefficients(cls, n: int, a_n: float, b_n: float) -> "LeadingHarmonic":
        rho = math.hypot(a_n, b_n)
        if not rho > 0.0:
            raise ValueError("leading harmonic must have positive amplitude")
        if n < 1:
            raise ValueError("leading order must be positive")
        return cls(int(n), float(a_n), float(b_n), rho, math.atan2(b_n, a_n))

    def as_poly(self) -> TrigPoly:
        return TrigPoly([Harmonic(self.n, self.a_n, self.b_n)])


def leading_harmonic(p: TrigPoly, tol: float = 1e-9) -> LeadingHarmonic | None:
    """Find the lowest order ``n >= 1`` whose amplitude exceeds ``tol`` times the largest.

    The threshold is relative, so rescaling ``p`` never changes ``n``.  The
    constant term takes part in the largest-amplitude reference but is never
    itself a candidate.
    """
    if tol < 0:
        raise ValueError("tol must be non-negative")
    if p.is_zero():
        return None
    amps = p.amplitudes
    cutoff = tol * float(amps.max())
    for k, a, b, amp in zip(p.orders, p.cos_coeffs, p.sin_coeffs, amps):
        if k >= 1 and amp > cutoff:
            return LeadingHarmonic.from_coefficients(int(k), float(a), float(b))
    return None


def sup_norm(p: TrigPoly, samples_per_harmonic: int = 64) -> float:
    """Upper estimate of ``max |p(x)|``.

    Takes the largest ``|p|`` on a uniform grid of
    ``samples_per_harmonic * max(degree, 1)`` points and divides by
    ``1 - pi**2 / (2 s**2)``.  The cushion is rigorous: at the true maximiser
    ``p' = 0``, a grid point lies within half a spacing, and Bernstein's
    inequality bounds ``|p''|`` by ``degree**2 * max|p|``.  The result is
    then capped by the coefficient-sum bound.
    """
    if samples_per_harmonic < 8:
        raise ValueError("samples_per_harmonic must be at least 8")
    if p.is_zero():
        return 0.0
    npts = samples_per_harmonic * max(p.degree, 1)
    grid_max = float(np.max(np.abs(grid_values(p, npts))))
    cushioned = grid_max / (1.0 - math.pi ** 2 / (2.0 * samples_per_harmonic ** 2))
    return max(grid_max, min(cushioned, p.coefficient_bound()))


def grid_values(p: TrigPoly, npts: int) -> np.ndarray:
    """Values at ``2*pi*j/npts``, ``j = 0..npts-1``, by inverse real FFT.

    Needs ``npts > 2 * degree`` so that no harmonic aliases.
    """
    if npts <= 2 * p.degree:
        raise ValueError(f"{npts} points alias degree {p.degree}")
    spec = np.zeros(npts // 2 + 1, dtype=complex)
    spec[p.orders] = (p.cos_coeffs - 1j * p.sin_coeffs) * (npts / 2.0)
    if p.orders.size and p.orders[0] == 0:
        spec[0] = p.cos_coeffs[0] * npts
    return np.fft.irfft(spec, npts)

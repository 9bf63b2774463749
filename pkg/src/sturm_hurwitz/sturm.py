"""Certify and locate at least 2n zeros of a trigonometric polynomial.

Pipeline, for ``p`` whose lowest harmonic is ``g = a_n cos(nx) + b_n sin(nx)``:

1. integrate ``p`` ``ell`` times (mean-zero antiderivatives) so that the
   leading term dominates: ``max |p^(-ell) - g^(-ell)| < rho / n**ell``;
2. at the 2n alternating extrema of ``g^(-ell)`` the smoothed function then
   has alternating signs, which brackets 2n zeros;
3. differentiate back down one level at a time; between two consecutive
   zeros of ``G`` with opposite crossing directions the derivative ``G'``
   changes sign, so each arc yields one zero of ``G'`` and the count is kept.

Every level-``j`` polynomial is handled as ``n**j * p^(-j)``: harmonic ``k`` is
scaled by ``(n/k)**j <= 1``, which keeps the leading amplitude at ``rho`` and
avoids underflow for large ``ell``.  Multiplying by a positive constant
changes neither zeros nor signs.
"""

from __future__ import annotations

import logging
import math
import sys
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .errors import (
    BadBracket,
    CertificateInvalid,
    CrossingDegenerate,
    DescentSignFailure,
    DominanceUnreachable,
    InvalidBound,
    SignMismatch,
    Underflow,
    ZeroFunction,
)
from . import _kernels
from .oracle import cyclic_distance
from .trigpoly import (
    TWO_PI,
    LeadingHarmonic,
    TrigPoly,
    derivative,
    evaluate,
    leading_harmonic,
    rescaled_antiderivative,
    rotate_quarter_turns,
    sup_norm,
)

log = logging.getLogger(__name__)

_EPS = np.finfo(float).eps


# ---------------------------------------------------------------------------
# Dominance
# ---------------------------------------------------------------------------


def leading_term(p: TrigPoly, lh: LeadingHarmonic) -> TrigPoly:
    """The single harmonic ``g`` of order ``lh.n``."""
    return lh.as_poly()


def paper_bound_scaled(M: float, n: int, ell: int) -> float:
    """``n**ell`` times the tail bound ``4 M / ((ell - 1) n**(ell - 1))``."""
    return 4.0 * M * n / (ell - 1)


def _bound_admits(lh: LeadingHarmonic, M: float, ell: int) -> bool:
    # Both sides of the dominance inequality multiplied by n**ell.
    return ell >= 2 and paper_bound_scaled(M, lh.n, ell) < lh.rho


def choose_ell(lh: LeadingHarmonic, M: float, multiple_of_four: bool = True) -> int:
    """Smallest admissible ``ell`` whose tail bound is below ``rho / n**ell``.

    Solving ``4M/((ell-1) n**(ell-1)) < rho/n**ell`` gives ``ell > 1 + 4Mn/rho``;
    the candidate from that closed form is then confirmed (and nudged if
    rounding put it off by a step) with the inequality itself.
    """
    if not (M > 0 and math.isfinite(M)):
        raise InvalidBound(f"sup-norm bound must be positive and finite, got {M!r}")
    if not lh.rho > 0:
        raise InvalidBound("leading amplitude must be positive")
    step = 4 if multiple_of_four else 1
    critical = 1.0 + 4.0 * M * lh.n / lh.rho
    if not math.isfinite(critical):
        raise InvalidBound("bound ratio overflows")
    ell = (math.floor(critical) // step + 1) * step
    ell = max(ell, step if step >= 2 else 2)
    while not _bound_admits(lh, M, ell):
        ell += step
    while ell - step >= 2 and _bound_admits(lh, M, ell - step):
        ell -= step
    return ell


@dataclass(frozen=True)
class DominanceReport:
    """Measured tail size after ``ell`` integrations against the dominance threshold.

    The ``*_scaled`` fields are multiplied by ``n**ell`` and are what the
    comparison uses; the plain fields are the unscaled values and may
    underflow to zero for large ``ell``.
    """

    ell: int
    n: int
    d_scaled: float
    paper_bound_scaled: float
    threshold_scaled: float
    M_used: float
    satisfied: bool

    @property
    def log_scale(self) -> float:
        return self.ell * math.log(self.n)

    def _unscale(self, value: float) -> float:
        return value * math.exp(-self.log_scale) if value else 0.0

    @property
    def d_ell(self) -> float:
        return self._unscale(self.d_scaled)

    @property
    def paper_bound(self) -> float:
        return self._unscale(self.paper_bound_scaled)

    @property
    def threshold(self) -> float:
        return self._unscale(self.threshold_scaled)

    @property
    def margin(self) -> float:
        """Fraction of the threshold left unused by the measured gap."""
        return 1.0 - self.d_scaled / self.threshold_scaled

    def as_dict(self) -> dict:
        return {
            "ell": self.ell,
            "n": self.n,
            "d_ell": self.d_ell,
            "paper_bound": self.paper_bound,
            "threshold": self.threshold,
            "d_ell_scaled": self.d_scaled,
            "paper_bound_scaled": self.paper_bound_scaled,
            "threshold_scaled": self.threshold_scaled,
            "log_scale": self.log_scale,
            "M_used": self.M_used,
            "satisfied": self.satisfied,
        }


def dominance_gap(
    p: TrigPoly,
    lh: LeadingHarmonic,
    ell: int,
    samples_per_harmonic: int = 64,
    M: float | None = None,
) -> DominanceReport:
    """Measure ``max |p^(-ell) - g^(-ell)|`` and compare it with ``rho / n**ell``.

    ``p`` must be mean-zero with no harmonic below ``lh.n``.  The gap is the
    :func:`sup_norm` upper estimate of the integrated tail, so ``satisfied``
    errs on the side of caution.
    """
    if ell < 2:
        raise ValueError("ell must be at least 2")
    tail = p - leading_term(p, lh)
    tail_scaled = rescaled_antiderivative(tail, ell, lh.n)
    d_scaled = sup_norm(tail_scaled, samples_per_harmonic)
    M_used = sup_norm(p, samples_per_harmonic) if M is None else float(M)
    return DominanceReport(
        ell=ell,
        n=lh.n,
        d_scaled=d_scaled,
        paper_bound_scaled=paper_bound_scaled(M_used, lh.n, ell),
        threshold_scaled=lh.rho,
        M_used=M_used,
        satisfied=d_scaled < lh.rho,
    )


# ---------------------------------------------------------------------------
# Brackets
# ---------------------------------------------------------------------------


def extremal_grid(lh: LeadingHarmonic, ell: int, offset: float = 0.0) -> list[tuple[float, int]]:
    """The 2n points where ``g^(-ell)`` reaches ``+-rho/n**ell``, sorted, with signs.

    ``g^(-ell)(x)`` is proportional to ``cos(n x - phi - ell*pi/2)``, so its
    maxima sit at ``(phi + ell*pi/2 + 2*pi*j)/n`` with minima halfway between.
    ``offset`` slides every point by the same amount (used for retries).
    """
    n = lh.n
    base = lh.phi + (ell % 4) * (math.pi / 2)
    pts = []
    for m in range(2 * n):
        x = math.fmod((base + m * math.pi) / n + offset, TWO_PI)
        if x < 0:
            x += TWO_PI
        if x >= TWO_PI:
            x = 0.0
        pts.append((x, 1 if m % 2 == 0 else -1))
    pts.sort()
    return pts


@dataclass(frozen=True)
class Bracket:
    """Interval ``[lo, hi]`` (``hi`` may pass 2*pi) whose endpoints carry opposite signs."""

    lo: float
    hi: float
    sign_lo: int
    sign_hi: int

    def __post_init__(self):
        if not self.lo < self.hi:
            raise ValueError(f"bracket needs lo < hi, got ({self.lo}, {self.hi})")
        if not self.hi - self.lo < TWO_PI:
            raise ValueError("bracket must be shorter than a period")
        if {self.sign_lo, self.sign_hi} != {-1, 1}:
            raise ValueError("bracket endpoint signs must be +1 and -1")

    @property
    def width(self) -> float:
        return self.hi - self.lo


def _zero_floor(F: TrigPoly) -> float:
    return 8.0 * _EPS * max(F.coefficient_bound(), np.finfo(float).tiny)


def bracket_zeros(F: TrigPoly, grid: Sequence[tuple[float, int]]) -> list[Bracket]:
    """Turn consecutive extremal points into sign-change brackets of ``F``.

    Raises:
        SignMismatch: ``F`` is zero (to rounding) or has the wrong sign at some grid point.
    """
    xs = np.array([x for x, _ in grid])
    signs = [s for _, s in grid]
    values = evaluate(F, xs)
    floor = _zero_floor(F)
    for x, s, v in zip(xs, signs, values):
        if abs(v) <= floor or np.sign(v) != s:
            raise SignMismatch(f"smoothed function is {v:.3e} at x={x:.17g}, expected sign {s:+d}")
    out = []
    m = len(grid)
    for i in range(m):
        lo = float(xs[i])
        hi = float(xs[i + 1]) if i + 1 < m else float(xs[0]) + TWO_PI
        out.append(Bracket(lo, hi, signs[i], signs[(i + 1) % m]))
    return out


# ---------------------------------------------------------------------------
# Root refinement
# ---------------------------------------------------------------------------


class _Evaluator:
    """Packs a polynomial's coefficients for the compiled kernels.

    Contiguous order ranges (the usual case) use a dense layout stepped by
    angle addition; sparse spectra keep explicit orders.
    """

    _MAX_SPAN = 512

    def __init__(self, F: TrigPoly):
        k = F.orders
        self.empty = k.size == 0
        span = int(k[-1] - k[0]) + 1 if k.size else 0
        self.dense = bool(k.size) and span <= min(self._MAX_SPAN, 4 * k.size + 8)
        if self.dense:
            self.kmin = int(k[0])
            self.a = np.zeros(span)
            self.b = np.zeros(span)
            self.a[k - self.kmin] = F.cos_coeffs
            self.b[k - self.kmin] = F.sin_coeffs
        else:
            self.kmin = 0
            self.a = np.ascontiguousarray(F.cos_coeffs, dtype=float)
            self.b = np.ascontiguousarray(F.sin_coeffs, dtype=float)
        self.orders = k.astype(float)

    def _args(self):
        return self.dense, self.kmin, self.orders, self.a, self.b

    def values(self, x) -> np.ndarray:
        x = np.ascontiguousarray(x, dtype=float)
        if self.empty:
            return np.zeros(x.shape)
        return _kernels.values(x, *self._args())

    def refine(self, lo, hi, s_lo, xtol: float, max_iter: int = 400) -> np.ndarray:
        lo = np.ascontiguousarray(lo, dtype=float)
        hi = np.ascontiguousarray(hi, dtype=float)
        s_lo = np.ascontiguousarray(s_lo, dtype=float)
        if self.empty:
            raise BadBracket("the zero polynomial has no sign changes")
        return _kernels.refine(lo, hi, s_lo, float(xtol), max_iter, *self._args())


def _refine_many(F: TrigPoly, lo, hi, s_lo, xtol: float, ev: _Evaluator | None = None) -> np.ndarray:
    """Shrink sign-change brackets of ``F`` below ``xtol``; return their midpoints.

    Bisection is the fallback that guarantees convergence; a Newton step is
    taken only when it lands inside the bracket and the previous round at
    least halved it.  Each round also probes ``xtol/4`` either side of the
    current estimate, so a converged estimate collapses the bracket at once.
    """
    if len(lo) == 0:
        return np.zeros(0)
    return (ev or _Evaluator(F)).refine(lo, hi, s_lo, xtol)


def _wrap(x: np.ndarray) -> np.ndarray:
    x = np.mod(x, TWO_PI)
    x[x >= TWO_PI] = 0.0
    return x


def refine_zero(F: TrigPoly, br: Bracket, xtol: float = 1e-10) -> float:
    """Locate a zero of ``F`` inside ``br`` to within ``xtol``; result in [0, 2*pi).

    Raises:
        BadBracket: ``F`` does not take opposite signs at the bracket ends.
    """
    f_lo, f_hi = evaluate(F, np.array([br.lo, br.hi]))
    if not f_lo * f_hi < 0:
        raise BadBracket(f"F({br.lo:.17g})={f_lo:.3e} and F({br.hi:.17g})={f_hi:.3e} do not straddle zero")
    root = _refine_many(F, [br.lo], [br.hi], [np.sign(f_lo)], xtol)
    return float(_wrap(root)[0])


# ---------------------------------------------------------------------------
# Rolle descent
# ---------------------------------------------------------------------------

Ladder = Callable[[int], TrigPoly]


def _derivative_ladder(F: TrigPoly) -> Ladder:
    cache = {0: F}

    def rung(i: int) -> TrigPoly:
        if i not in cache:
            d = derivative(rung(i - 1))
            peak = float(d.amplitudes.max()) if len(d) else 1.0
            cache[i] = d * (1.0 / peak)
        return cache[i]

    return rung


def rolle_descent(
    F: TrigPoly,
    zeros_of_F: Sequence[float],
    levels: int,
    xtol: float = 1e-10,
    *,
    ladder: Ladder | None = None,
    simplicity: float = 1e-9,
    trace: list | None = None,
) -> np.ndarray:
    """Carry ``m`` alternating simple zeros of ``F`` down to ``m`` zeros of ``F^(levels)``.

    At each level the derivative is bisected on every cyclic arc between
    consecutive zeros; the crossing directions alternate, so the derivative
    has opposite signs at the two ends of each arc.

    Args:
        ladder: ``ladder(i)`` returns a positive multiple of the ``i``-th
            derivative of ``F``.  Defaults to repeated :func:`derivative`
            with amplitude normalisation; pass an explicit ladder when the
            higher derivatives can be built more accurately another way.
        simplicity: a zero counts as transversal when ``|G'(z)|`` is at least
            this fraction of ``sup |G'|``.
        trace: if given, the zero list of every level (starting with the
            input) is appended to it.

    Raises:
        CrossingDegenerate: a zero is too close to tangential to tell its direction.
        DescentSignFailure: derivative signs fail to alternate around the circle.
    """
    rung = ladder or _derivative_ladder(F)
    z = np.sort(_wrap(np.asarray(zeros_of_F, dtype=float)))
    if z.size < 2:
        raise ValueError("descent needs at least two zeros")
    if trace is not None:
        trace.append(z.copy())
    for level in range(1, levels + 1):
        H = rung(level)
        ev = _Evaluator(H)
        slopes = ev.values(z)
        # sup_norm <= coefficient sum, so the cheap bound settles most levels.
        weak = np.abs(slopes) < simplicity * H.coefficient_bound()
        if weak.any():
            scale = sup_norm(H, 8)
            weak = np.abs(slopes) < simplicity * scale
        if weak.any():
            i = int(np.flatnonzero(weak)[0])
            raise CrossingDegenerate(
                f"level {level}: |G'({z[i]:.17g})| = {abs(slopes[i]):.3e} below {simplicity:g} * {scale:.3e}"
            )
        s = np.sign(slopes)
        if np.any(s * np.roll(s, -1) >= 0):
            raise DescentSignFailure(f"level {level}: derivative signs do not alternate at consecutive zeros")
        hi = np.append(z[1:], z[0] + TWO_PI)
        z = np.sort(_wrap(_refine_many(H, z, hi, s, xtol, ev=ev)))
        if trace is not None:
            trace.append(z.copy())
    return z


# ---------------------------------------------------------------------------
# Certification
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CertifyConfig:
    """Knobs for :func:`certify`.

    ``mode="paper"`` picks ``ell`` from the closed-form tail bound;
    ``mode="tight"`` takes the smallest admissible ``ell`` whose measured gap
    already clears the threshold (never larger than the bound-based choice).
    ``rtol`` is relative to ``sup |p|``.
    """

    mode: str = "paper"
    ell_cap: int = 256
    xtol: float = 1e-10
    rtol: float = 1e-8
    leading_tol: float = 1e-9
    samples_per_harmonic: int = 64
    multiple_of_four: bool = True
    distinct_tol: float = 1e-7
    simplicity: float = 1e-9
    M: float | None = None
    keep_trace: bool = False

    def __post_init__(self):
        if self.mode not in ("paper", "tight"):
            raise ValueError(f"unknown mode {self.mode!r}")
        if self.ell_cap < 1:
            raise ValueError("ell_cap must be positive")
        if self.M is not None and not self.M > 0:
            raise InvalidBound("M override must be positive")


@dataclass(frozen=True)
class ZeroCertificate:
    """Located zeros of ``p`` together with the evidence behind them.

    A trivial certificate (``n == 0``) is issued when ``p`` has a genuine
    constant term: the zero-count guarantee is then empty.
    """

    n: int
    ell: int
    dominance: DominanceReport | None
    zeros: tuple[float, ...]
    residuals: tuple[float, ...]
    residual_tol: float
    leading: LeadingHarmonic | None = None
    descent_trace: tuple[tuple[float, ...], ...] | None = None
    note: str = ""
    dropped: tuple[int, ...] = field(default=())

    @property
    def trivial(self) -> bool:
        return self.n == 0

    @property
    def guaranteed(self) -> int:
        return 2 * self.n

    @property
    def passed(self) -> bool:
        return len(self.zeros) >= 2 * self.n and all(r <= self.residual_tol for r in self.residuals)


def _trivial(p: TrigPoly, note: str) -> ZeroCertificate:
    return ZeroCertificate(n=0, ell=0, dominance=None, zeros=(), residuals=(), residual_tol=0.0, note=note)


def _smoothing_ladder(p: TrigPoly, ell: int, n: int) -> Ladder:
    """``ladder(i)`` is ``rescaled_antiderivative(p, ell - i, n)``, with the logs hoisted."""
    k = p.orders
    log_ratio = math.log(n) - np.log(k.astype(float))
    at_n = k == n

    def rung(i: int) -> TrigPoly:
        j = ell - i
        if j == 0:
            return p
        factor = np.exp(j * log_ratio)
        factor[at_n] = 1.0
        a, b = rotate_quarter_turns(p.cos_coeffs, p.sin_coeffs, j)
        return TrigPoly._trusted(k, a * factor, b * factor)

    return rung


def _tight_candidates(bound_ell: int, cap: int, step: int):
    ell = step if step >= 2 else 2
    while ell <= min(bound_ell, cap):
        yield ell
        ell += step


def certify(p: TrigPoly, config: CertifyConfig | None = None) -> ZeroCertificate:
    """Locate at least ``2n`` distinct zeros of ``p`` in [0, 2*pi).

    Harmonics below the leading order whose amplitude is under
    ``leading_tol`` times the largest are treated as rounding noise and
    removed before smoothing; their orders are listed in
    ``ZeroCertificate.dropped``.  Residuals are always measured on the
    original ``p``.

    Raises:
        ZeroFunction: ``p`` is identically zero.
        DominanceUnreachable: no admissible ``ell <= ell_cap`` works.
        CrossingDegenerate, ToleranceFailure: numerical safeguards tripped.
    """
    cfg = config or CertifyConfig()
    if p.is_zero():
        raise ZeroFunction("cannot certify zeros of the zero function")
    cutoff = cfg.leading_tol * float(p.amplitudes.max())
    a0, _ = p.coef(0)
    if abs(a0) > cutoff:
        return _trivial(p, f"nonzero mean {a0!r}: leading order is 0 and no zeros are guaranteed")
    lh = leading_harmonic(p, cfg.leading_tol)
    if lh is None:
        return _trivial(p, "no non-constant harmonic above tolerance")
    if lh.rho < sys.float_info.min:
        raise Underflow(f"leading amplitude {lh.rho!r} is not a positive normal float")
    n = lh.n
    p_eff = p.truncate_below(n)
    dropped = tuple(int(k) for k in p.orders if k < n)
    M = cfg.M if cfg.M is not None else sup_norm(p_eff, cfg.samples_per_harmonic)
    bound_ell = choose_ell(lh, M, cfg.multiple_of_four)

    if cfg.mode == "paper":
        if bound_ell > cfg.ell_cap:
            raise DominanceUnreachable(f"the tail bound needs ell={bound_ell}, above the cap {cfg.ell_cap}")
        candidates = [bound_ell]
    else:
        candidates = _tight_candidates(bound_ell, cfg.ell_cap, 4 if cfg.multiple_of_four else 1)

    chosen = None
    for ell in candidates:
        report = dominance_gap(p_eff, lh, ell, cfg.samples_per_harmonic, M)
        if not report.satisfied:
            continue
        F = rescaled_antiderivative(p_eff, ell, n)
        try:
            brackets = bracket_zeros(F, extremal_grid(lh, ell))
        except SignMismatch:
            # Slide the grid an eighth of a half-period; |g| stays above rho*cos(pi/8) there.
            brackets = bracket_zeros(F, extremal_grid(lh, ell, offset=math.pi / (8 * n)))
        chosen = (ell, report, F, brackets)
        break
    if chosen is None:
        raise DominanceUnreachable(f"no admissible ell <= {min(bound_ell, cfg.ell_cap)} gave dominance")
    ell, report, F, brackets = chosen
    log.debug("certify: n=%d ell=%d gap=%.3e threshold=%.3e", n, ell, report.d_scaled, report.threshold_scaled)

    top = _refine_many(
        F,
        [br.lo for br in brackets],
        [br.hi for br in brackets],
        [br.sign_lo for br in brackets],
        cfg.xtol,
    )
    trace: list | None = [] if cfg.keep_trace else None
    zeros = rolle_descent(
        F,
        top,
        ell,
        cfg.xtol,
        ladder=_smoothing_ladder(p_eff, ell, n),
        simplicity=cfg.simplicity,
        trace=trace,
    )

    residuals = np.abs(evaluate(p, zeros))
    residual_tol = cfg.rtol * sup_norm(p, cfg.samples_per_harmonic)
    bad = np.flatnonzero(residuals > residual_tol)
    if bad.size:
        i = int(bad[0])
        raise CertificateInvalid(f"|p({zeros[i]:.17g})| = {residuals[i]:.3e} exceeds {residual_tol:.3e}")
    if zeros.size > 1:
        gaps = [cyclic_distance(zeros[i], zeros[(i + 1) % zeros.size]) for i in range(zeros.size)]
        if min(gaps) < cfg.distinct_tol:
            raise CertificateInvalid(f"zeros closer than {cfg.distinct_tol:g}: min gap {min(gaps):.3e}")

    return ZeroCertificate(
        n=n,
        ell=ell,
        dominance=report,
        zeros=tuple(float(z) for z in zeros),
        residuals=tuple(float(r) for r in residuals),
        residual_tol=residual_tol,
        leading=lh,
        descent_trace=tuple(tuple(float(v) for v in level) for level in trace) if trace is not None else None,
        dropped=dropped,
    )

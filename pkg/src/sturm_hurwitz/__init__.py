"""Locate the 2n zeros of a trigonometric polynomial guaranteed by the Sturm-Hurwitz theorem."""

from .errors import *  # noqa: F401,F403
from .ingest import SampledSignal, analyze, synthesize
from .oracle import count_sign_changes, locate_zeros
from .sturm import (
    Bracket,
    CertifyConfig,
    DominanceReport,
    ZeroCertificate,
    bracket_zeros,
    certify,
    choose_ell,
    dominance_gap,
    extremal_grid,
    leading_term,
    refine_zero,
    rolle_descent,
)
from .trigpoly import (
    Harmonic,
    LeadingHarmonic,
    TrigPoly,
    antiderivative,
    antiderivative_iter,
    derivative,
    evaluate,
    leading_harmonic,
    rescaled_antiderivative,
    sup_norm,
)

__version__ = "0.1.0"

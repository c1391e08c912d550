"""Recovering integer multisets from their s-sums."""

from .multiset import (
    IntMultiset,
    MultisetParseError,
    canonical_form,
    equivalence_trace,
    format_multiset,
    genpoly,
    is_equivalent,
    make_multiset,
    mirror,
    parse_multiset,
    s_sums,
    sigma_divergence,
    ssum_genpoly,
)
from .polynomial import IntPolynomial

__version__ = "0.1.0"

__all__ = [
    "IntMultiset",
    "IntPolynomial",
    "MultisetParseError",
    "canonical_form",
    "equivalence_trace",
    "format_multiset",
    "genpoly",
    "is_equivalent",
    "make_multiset",
    "mirror",
    "parse_multiset",
    "s_sums",
    "sigma_divergence",
    "ssum_genpoly",
]

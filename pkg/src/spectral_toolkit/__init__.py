"""Numerical toolkit for finite spectral triples: norm ladders, Ω-form groups,
exponential maps and traces."""

from .algebra import (
    StarAlgebra,
    amplify_algebra,
    close_from_generators,
    contains,
    diagonal_algebra,
    direct_sum_algebra,
    full_matrix_algebra,
    random_element,
)
from .errors import SpectralToolkitError
from .liegroup import exp_gateaux, exp_map, log_derivative, log_near_identity, product_integral
from .normladder import knorm, ladder, lemma_constants, seminorms, verify_product_estimate
from .omega import classify_blocks, in_group, in_lie_algebra, make_omega, sigma
from .trace import TraceFunctional, dixmier_mean, hypertrace_estimate, normalized_matrix_trace
from .triple import FiniteSpectralTriple, amplify, d_derivation, delta_derivation, direct_sum

__version__ = "0.1.0"

__all__ = [
    "StarAlgebra",
    "amplify_algebra",
    "close_from_generators",
    "contains",
    "diagonal_algebra",
    "direct_sum_algebra",
    "full_matrix_algebra",
    "random_element",
    "SpectralToolkitError",
    "exp_gateaux",
    "exp_map",
    "log_derivative",
    "log_near_identity",
    "product_integral",
    "knorm",
    "ladder",
    "lemma_constants",
    "seminorms",
    "verify_product_estimate",
    "classify_blocks",
    "in_group",
    "in_lie_algebra",
    "make_omega",
    "sigma",
    "TraceFunctional",
    "dixmier_mean",
    "hypertrace_estimate",
    "normalized_matrix_trace",
    "FiniteSpectralTriple",
    "amplify",
    "d_derivation",
    "delta_derivation",
    "direct_sum",
]

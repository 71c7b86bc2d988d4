"""Exact harmonic analysis on local fields of positive characteristic.

Fourier analysis of step functions on K_q = GF(q)((t)), Sobolev spaces
H^s(K_q), level-dependent multiresolution analyses and wavelet packets,
with exact rational / cyclotomic arithmetic throughout.
"""

from .gfq import FieldParams, ParameterError, field_params
from .localfield import Ball, FieldElement, character, chi_n, lam, parse_element
from .stepfn import StepFunction, exact_gram, indicator, sf_fourier

__version__ = "0.1.0"

__all__ = [
    "FieldParams",
    "ParameterError",
    "field_params",
    "Ball",
    "FieldElement",
    "character",
    "chi_n",
    "lam",
    "parse_element",
    "StepFunction",
    "exact_gram",
    "indicator",
    "sf_fourier",
]

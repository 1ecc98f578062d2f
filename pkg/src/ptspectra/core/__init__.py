"""Shared numerical kernels."""
from .model import ModelParams, QFunction, potential_sign
from .paths import ComplexPath, action_integral, sqrtq_continued, TOL_QUAD, TOL_TP

"""Convolution algebras, the crossed-product comparison and the localization algebra."""

from .convolution import (
    AlgebraElement,
    RegularRepresentation,
    audit_regular_representation,
    conditional_expectation,
    convolve,
    involution,
    operator_norm,
    psi,
    psi_report,
    psi_x_restriction,
)
from .exel import ExelAlgebra, exel_build_and_iso
from .kumjian import LocalizationAlgebra, kumjian_rho

__all__ = [
    "AlgebraElement", "RegularRepresentation", "audit_regular_representation",
    "conditional_expectation", "convolve", "involution", "operator_norm", "psi",
    "psi_report", "psi_x_restriction", "ExelAlgebra", "exel_build_and_iso",
    "LocalizationAlgebra", "kumjian_rho",
]

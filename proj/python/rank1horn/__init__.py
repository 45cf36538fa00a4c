"""Rank-one randomized Horn problems: samplers, closed-form densities and checks."""

from ._rank1horn import (
    Rank1HornError,
    additive_roots,
    cauchy_double_alternant,
    change_of_variables_check,
    hciz,
    hciz_monte_carlo,
    ks_two_sample,
    multiplicative_roots,
    pdf_additive,
    pdf_heckman_n3,
    pdf_multiplicative,
    pdf_projection,
    pdf_quadratic_form,
    pdf_spacing_n2,
    projection_roots,
    roundtrip_additive,
    sample,
    weights_from_roots_additive,
    weights_from_roots_multiplicative,
    weights_from_roots_projection,
)

__all__ = [
    "Rank1HornError",
    "additive_roots",
    "cauchy_double_alternant",
    "change_of_variables_check",
    "hciz",
    "hciz_monte_carlo",
    "ks_two_sample",
    "multiplicative_roots",
    "pdf_additive",
    "pdf_heckman_n3",
    "pdf_multiplicative",
    "pdf_projection",
    "pdf_quadratic_form",
    "pdf_spacing_n2",
    "projection_roots",
    "roundtrip_additive",
    "sample",
    "weights_from_roots_additive",
    "weights_from_roots_multiplicative",
    "weights_from_roots_projection",
]

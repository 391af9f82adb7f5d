# Copyright (c) 2025 avm-flow contributors
# This code is licensed under MIT license (see LICENSE for details)

"""
The **avm_flow.smooth** builds basis and penalty matrices: natural cubic
regression splines, the low-rank Gaussian-process location smooth and the
sum-to-zero categorical encodings.
"""

from .categorical import CategoricalEncoding, sum_to_zero
from .cr import CRBasis, cr_basis, cr_design, cr_matrices
from .gp import GPTerm, gp_basis, gp_term, max_pairwise_distance
from .kernel import kernel
from .knots import choose_quantile_knots, choose_spatial_knots

__all__ = [
    "CRBasis",
    "CategoricalEncoding",
    "GPTerm",
    "choose_quantile_knots",
    "choose_spatial_knots",
    "cr_basis",
    "cr_design",
    "cr_matrices",
    "gp_basis",
    "gp_term",
    "kernel",
    "max_pairwise_distance",
    "sum_to_zero",
]

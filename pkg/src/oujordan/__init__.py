"""Exact Jordan decomposition of Ornstein-Uhlenbeck operators with Jordan-block drift."""

from .exact import ExactMatrix, rank, determinant, minor, kernel_dimension
from .hermite import HermitePoly, hermite_1d, monomial_to_hermite, project, evaluate, degree_support
from .ou_operator import OUContext, apply_A, apply_shifted, apply_projected, apply_power
from .jordan2d import build_chain_2d, closed_form_element, g_poly
from .jordan3d import jordan_basis, lead_vector, eigenfunction, transition_matrices, conjecture_check
from .dag import build_dag, export_dot
from .oracle import jordan_structure, compare_with_theory, operator_matrix

__version__ = "0.1.0"

__all__ = [
    "ExactMatrix",
    "rank",
    "determinant",
    "minor",
    "kernel_dimension",
    "HermitePoly",
    "hermite_1d",
    "monomial_to_hermite",
    "project",
    "evaluate",
    "degree_support",
    "OUContext",
    "apply_A",
    "apply_shifted",
    "apply_projected",
    "apply_power",
    "build_chain_2d",
    "closed_form_element",
    "g_poly",
    "jordan_basis",
    "lead_vector",
    "eigenfunction",
    "transition_matrices",
    "conjecture_check",
    "build_dag",
    "export_dot",
    "jordan_structure",
    "compare_with_theory",
    "operator_matrix",
]

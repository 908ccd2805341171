"""Generalized Kneser hypergraphs: exact colorings, lower bounds, and executable proof checks."""

from .bounds import (
    BoundReport,
    afl_lower_bound,
    ceil_div,
    compare_bounds,
    homomorphism_lower_bound,
    theorem1_lower_bound,
)
from .core import (
    Coloring,
    Edge,
    KneserParams,
    KSubset,
    compatibility_graph,
    enumerate_vertices,
    is_edge,
    pad_homomorphism,
    verify_homomorphism,
)
from .errors import BudgetExceeded, ParameterError, StructuralError
from .solver import (
    SolveBudget,
    SolveResult,
    exact_chromatic,
    find_monochromatic_edge,
    is_proper,
    m_colorable,
    windowed_coloring_s0,
)

from .reduction import ReductionPlan, WitnessReport, derived_m, extract_witness, verify_witness
from .tucker import SignedVector, TuckerInstance, conclusion_check, verify_tucker

__version__ = "0.1.0"

__all__ = [
    "BoundReport", "BudgetExceeded", "Coloring", "Edge", "KSubset", "KneserParams",
    "ParameterError", "ReductionPlan", "SignedVector", "SolveBudget", "SolveResult",
    "StructuralError", "TuckerInstance", "WitnessReport", "afl_lower_bound", "ceil_div",
    "compare_bounds", "compatibility_graph", "conclusion_check", "derived_m",
    "enumerate_vertices", "exact_chromatic", "extract_witness", "find_monochromatic_edge",
    "homomorphism_lower_bound", "is_edge", "is_proper", "m_colorable", "pad_homomorphism",
    "theorem1_lower_bound", "verify_homomorphism", "verify_tucker", "verify_witness",
    "windowed_coloring_s0",
]

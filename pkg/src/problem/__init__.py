from src.problem.assembly import DiscreteProblem, assemble, build_problem, direct_solve
from src.problem.grid import (
    CoefficientField,
    GridSpec,
    InclusionPattern,
    build_coefficient_field,
    export_coefficient_csv,
)

__all__ = [
    "CoefficientField",
    "DiscreteProblem",
    "GridSpec",
    "InclusionPattern",
    "assemble",
    "build_coefficient_field",
    "build_problem",
    "direct_solve",
    "export_coefficient_csv",
]

from src.bounds.chebyshev import (
    ClusterInterval,
    affine_map,
    log_abs_cheb,
    log_abs_scaled_cheb,
    log_growth_rate,
    log_inv_gamma,
)
from src.bounds.iteration_bounds import (
    ClusterPolynomial,
    PolynomialCheck,
    cluster_degrees,
    m1,
    m2,
    ms,
    verify_polynomial,
)
from src.bounds.report import BoundReport, build_bound_report
from src.bounds.spectrum import (
    ClusterPartition,
    Spectrum,
    parse_spectrum_lines,
    read_spectrum,
    write_spectrum,
)

__all__ = [
    "BoundReport",
    "ClusterInterval",
    "ClusterPartition",
    "ClusterPolynomial",
    "PolynomialCheck",
    "Spectrum",
    "affine_map",
    "build_bound_report",
    "cluster_degrees",
    "log_abs_cheb",
    "log_abs_scaled_cheb",
    "log_growth_rate",
    "log_inv_gamma",
    "m1",
    "m2",
    "ms",
    "parse_spectrum_lines",
    "read_spectrum",
    "verify_polynomial",
    "write_spectrum",
]

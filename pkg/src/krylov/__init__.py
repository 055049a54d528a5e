from src.krylov.extremes import RitzExtremes, RitzExtremesObserver, converge_ritz_extremes
from src.krylov.lanczos import lanczos_tridiagonal, ritz_values
from src.krylov.pcg import Observer, Preconditioner, pcg
from src.krylov.trace import CGTrace, StopRule, write_trace_csv

__all__ = [
    "CGTrace",
    "Observer",
    "Preconditioner",
    "RitzExtremes",
    "RitzExtremesObserver",
    "StopRule",
    "converge_ritz_extremes",
    "lanczos_tridiagonal",
    "pcg",
    "ritz_values",
    "write_trace_csv",
]

from typing import Optional


class DimensionMismatchError(ValueError):
    """Operand shapes do not line up (spmv, preconditioner apply, pcg)."""


class NotPositiveDefiniteError(RuntimeError):
    """A matrix or operator that must be SPD turned out not to be."""


class ConvergenceError(RuntimeError):
    """An iterative kernel ran out of its iteration budget."""


class OracleCapExceededError(ValueError):
    def __init__(self, n: int, cap: int) -> None:
        super().__init__(
            f"Dense oracle refused: n={n} exceeds the oracle cap {cap}. "
            "Use Ritz mode (cmd_solve) for larger problems."
        )
        self.n = n
        self.cap = cap


class SpectrumParseError(ValueError):
    def __init__(self, message: str, line_no: Optional[int] = None) -> None:
        prefix = f"line {line_no}: " if line_no is not None else ""
        super().__init__(prefix + message)
        self.line_no = line_no


class ConfigError(ValueError):
    """Config file or flag combination rejected."""


class PatternError(ValueError):
    """Inclusion pattern does not fit the grid."""


class DecompositionError(ValueError):
    """Domain decomposition request does not fit the grid."""


class LambertDomainError(ValueError):
    """Argument outside the real domain of the W_-1 branch."""

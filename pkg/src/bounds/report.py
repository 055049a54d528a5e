import json
from dataclasses import asdict, dataclass, field
from typing import Any, Dict, List, Optional

from src.bounds.iteration_bounds import (
    ClusterPolynomial,
    PolynomialCheck,
    m1,
    ms,
    verify_polynomial,
)

REPORT_CSV_FIELDS = [
    "n",
    "eps",
    "kappa",
    "s",
    "m1",
    "m2",
    "ms",
    "partition",
    "degrees",
    "verified",
]


@dataclass
class BoundReport:
    """m1, m2 (top-level candidate split), ms with the partition and degrees behind it."""

    n: int
    eps: float
    kappa: float
    m1: int
    ms: int
    s: int
    partition: List[int]
    clusters: List[List[int]]
    degrees: List[int]
    kappas: List[float]
    m2: Optional[int] = None
    verification: Dict[str, Any] = field(default_factory=dict)
    decisions: List[Dict[str, Any]] = field(default_factory=list)

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    def csv_row(self) -> Dict[str, Any]:
        return {
            "n": self.n,
            "eps": self.eps,
            "kappa": self.kappa,
            "s": self.s,
            "m1": self.m1,
            "m2": "" if self.m2 is None else self.m2,
            "ms": self.ms,
            "partition": " ".join(str(k) for k in self.partition),
            "degrees": " ".join(str(p) for p in self.degrees),
            "verified": bool(self.verification.get("passed", False)),
        }


def build_bound_report(
    poly: ClusterPolynomial,
    m2_value: Optional[int] = None,
    decisions: Optional[List[Dict[str, Any]]] = None,
) -> BoundReport:
    """Assemble the report for a polynomial whose degrees are already fixed."""
    part = poly.partition
    spec = part.spectrum
    check: PolynomialCheck = verify_polynomial(spec, poly, poly.eps)
    return BoundReport(
        n=spec.n,
        eps=poly.eps,
        kappa=spec.kappa,
        m1=m1(spec.kappa, poly.eps),
        ms=max(1, ms(poly)),
        s=part.s,
        partition=list(part.indices),
        clusters=[list(c) for c in part.clusters],
        degrees=list(poly.degrees),
        kappas=part.kappas,
        m2=m2_value,
        verification=check.to_dict(),
        decisions=list(decisions or []),
    )

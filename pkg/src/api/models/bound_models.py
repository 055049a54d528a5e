from pydantic import BaseModel, Field
from typing import List, Dict, Any, Optional, Literal


class SpectrumRequest(BaseModel):
    eigenvalues: List[float] = Field(..., min_length=1)
    eps: float = Field(default=1e-8, gt=0, lt=1)
    accept: Literal["exact", "expansion", "m2"] = "exact"
    sort: bool = False


class BoundResponse(BaseModel):
    n: int
    eps: float
    kappa: float
    m1: int
    m2: Optional[int] = None
    ms: int
    s: int
    partition: List[int]
    clusters: List[List[int]]
    degrees: List[int]
    kappas: List[float]
    verification: Dict[str, Any]
    decisions: List[Dict[str, Any]]


class PartitionResponse(BaseModel):
    indices: List[int]
    clusters: List[List[int]]
    intervals: List[List[float]]
    kappas: List[float]
    decisions: List[Dict[str, Any]]

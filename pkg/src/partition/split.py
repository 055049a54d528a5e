import math
from dataclasses import asdict, dataclass
from typing import Any, Dict, Literal

import numpy as np

from src.bounds.iteration_bounds import m1, m2
from src.bounds.spectrum import Spectrum
from src.partition.lambertw import lambert_w_minus1

AcceptMode = Literal["exact", "expansion", "m2"]

# Relative tolerance under which two gap ratios count as tied.
TIE_RTOL = 1e-12


@dataclass(frozen=True)
class SplitCandidate:
    """Largest relative gap lam_{k+1}/lam_k of a (sub)spectrum; k is 1-based."""

    k: int
    gap: float
    kappa: float
    kappa1: float
    kappa2: float


@dataclass(frozen=True)
class ThresholdTerms:
    x: float
    L: float
    l: float
    w: float
    expansion: float
    threshold_expansion: float
    threshold_exact: float


@dataclass(frozen=True)
class SplitDecision:
    candidate: SplitCandidate
    terms: ThresholdTerms
    m1: int
    m2: int
    accepted_exact: bool
    accepted_expansion: bool
    accepted_m2: bool
    mode: str
    accepted: bool

    def to_dict(self) -> Dict[str, Any]:
        out = {
            "k": self.candidate.k,
            "gap": self.candidate.gap,
            "kappa": self.candidate.kappa,
            "kappa1": self.candidate.kappa1,
            "kappa2": self.candidate.kappa2,
            "m1": self.m1,
            "m2": self.m2,
            "accepted_exact": self.accepted_exact,
            "accepted_expansion": self.accepted_expansion,
            "accepted_m2": self.accepted_m2,
            "mode": self.mode,
            "accepted": self.accepted,
        }
        out.update({f"terms_{k}": v for k, v in asdict(self.terms).items()})
        return out


def find_candidate(spec: Spectrum) -> SplitCandidate:
    """argmax of consecutive ratios; ties go to the smallest index."""
    if spec.n < 2:
        raise ValueError("a split candidate needs at least two eigenvalues")
    v = spec.values
    ratios = v[1:] / v[:-1]
    best = float(np.max(ratios))
    k = int(np.flatnonzero(ratios >= best * (1.0 - TIE_RTOL))[0]) + 1
    return SplitCandidate(
        k=k,
        gap=float(ratios[k - 1]),
        kappa=spec.kappa,
        kappa1=spec.lam(k) / spec.lam(1),
        kappa2=spec.lam(spec.n) / spec.lam(k + 1),
    )


def threshold_terms(kappa1: float, kappa2: float) -> ThresholdTerms:
    """
    x = -(2 sqrt(k2) exp(1/sqrt(k2)))^-1, L = ln(-x), l = ln(-L); thresholds
    4 k1 k2 (L - l + l/L)^2 (expansion) and 4 k1 k2 W_-1(x)^2 (exact).
    """
    sk2 = math.sqrt(kappa2)
    x = -1.0 / (2.0 * sk2 * math.exp(1.0 / sk2))
    L = math.log(-x)
    l = math.log(-L)
    expansion = L - l + l / L
    w = lambert_w_minus1(x)
    scale = 4.0 * kappa1 * kappa2
    return ThresholdTerms(
        x=x,
        L=L,
        l=l,
        w=w,
        expansion=expansion,
        threshold_expansion=scale * expansion**2,
        threshold_exact=scale * w**2,
    )


def accept_split(
    spec: Spectrum,
    cand: SplitCandidate,
    eps: float,
    mode: AcceptMode = "exact",
) -> SplitDecision:
    """
    Threshold test for a candidate split. All three criteria are evaluated and
    reported; `mode` picks the one that decides. A gap of exactly 1 (duplicate
    eigenvalues) is never accepted.
    """
    terms = threshold_terms(cand.kappa1, cand.kappa2)
    kappa = spec.kappa
    m1_value = m1(kappa, eps)
    m2_value = m2(kappa, cand.kappa1, cand.kappa2, eps)
    separated = cand.gap > 1.0

    accepted_exact = separated and kappa > terms.threshold_exact
    accepted_expansion = separated and kappa > terms.threshold_expansion
    accepted_m2 = separated and m2_value < m1_value
    chosen = {"exact": accepted_exact, "expansion": accepted_expansion, "m2": accepted_m2}[mode]

    return SplitDecision(
        candidate=cand,
        terms=terms,
        m1=m1_value,
        m2=m2_value,
        accepted_exact=accepted_exact,
        accepted_expansion=accepted_expansion,
        accepted_m2=accepted_m2,
        mode=mode,
        accepted=chosen,
    )

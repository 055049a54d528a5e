import math
from typing import Any, Dict, List, Optional


# ---------------------------
# Per-row bound quality
# ---------------------------

BOUND_KEYS = ("m1", "ms_converged", "ms_early")


def bound_marker(bound: Optional[float], m: Optional[float]) -> str:
    """
    "over" when the bound exceeds the actual count, "under" when it falls short,
    "match" when equal; "" when either side is missing.
    """
    if bound is None or m is None or bound == "" or m == "":
        return ""
    bound, m = float(bound), float(m)
    if bound > m:
        return "over"
    if bound < m:
        return "under"
    return "match"


def _ratio(bound: Any, m: Any) -> Optional[float]:
    try:
        bound, m = float(bound), float(m)
    except (TypeError, ValueError):
        return None
    if m <= 0:
        return None
    return bound / m


def compute_row_metrics(row: Dict[str, Any]) -> Dict[str, Any]:
    """bound/m ratios and over/under markers for m1, ms (converged) and ms (early)."""
    m = row.get("m")
    out: Dict[str, Any] = {}
    for key in BOUND_KEYS:
        out[f"{key}_over_m"] = _ratio(row.get(key), m)
        out[f"{key}_vs_m"] = bound_marker(row.get(key), m)
    return out


# ---------------------------
# Aggregates
# ---------------------------


def _geomean(values: List[float]) -> Optional[float]:
    vals = [v for v in values if v is not None and v > 0]
    if not vals:
        return None
    return math.exp(sum(math.log(v) for v in vals) / len(vals))


def compute_aggregate_metrics(rows: List[Dict[str, Any]]) -> Dict[str, Any]:
    """
    Summary over result rows: failure count, geometric-mean bound/m ratios and
    the share of rows where each bound is at least m.
    """
    ok = [r for r in rows if r.get("status") not in ("failed",)]
    summary: Dict[str, Any] = {
        "n": len(rows),
        "failed": len(rows) - len(ok),
    }
    for key in BOUND_KEYS:
        ratios = [_ratio(r.get(key), r.get("m")) for r in ok]
        present = [q for q in ratios if q is not None]
        summary[f"{key}_over_m_geomean"] = _geomean(present)
        summary[f"{key}_over_m_max"] = max(present) if present else None
        summary[f"{key}_at_least_m_rate"] = (
            sum(1 for q in present if q >= 1.0) / len(present) if present else None
        )
    return summary


def aggregate_by(rows: List[Dict[str, Any]], key: str) -> Dict[str, Dict[str, Any]]:
    """compute_aggregate_metrics per distinct value of `key`, in first-seen order."""
    groups: Dict[str, List[Dict[str, Any]]] = {}
    for r in rows:
        groups.setdefault(str(r.get(key)), []).append(r)
    return {k: compute_aggregate_metrics(v) for k, v in groups.items()}


def coarse_space_ratios(
    rows: List[Dict[str, Any]],
    H_list: List[float],
    numerator: str = "rgdsw",
    denominator: str = "gdsw",
) -> Dict[str, Dict[str, Optional[float]]]:
    """
    numerator / denominator for m, m1 and ms_converged at each H where both
    cells finished, keyed "1/<n_sub>".
    """
    by_cell = {(r.get("H"), r.get("coarse_space")): r for r in rows}
    out: Dict[str, Dict[str, Optional[float]]] = {}
    for H in H_list:
        top, bottom = by_cell.get((H, numerator), {}), by_cell.get((H, denominator), {})
        if not (top.get("m") and bottom.get("m")):
            continue
        out[f"1/{round(1 / H)}"] = {k: _ratio(top.get(k), bottom.get(k)) for k in ("m", "m1", "ms_converged")}
    return out

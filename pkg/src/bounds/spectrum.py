from dataclasses import dataclass
from typing import Any, Dict, List, Sequence, Tuple

import numpy as np

from src.bounds.chebyshev import ClusterInterval
from src.utils.errors import SpectrumParseError
from src.utils.helpers import atomic_write_text, fmt17


@dataclass(frozen=True, eq=False)
class Spectrum:
    """Ascending, strictly positive eigenvalues (exact or Ritz); duplicates allowed."""

    values: np.ndarray

    def __post_init__(self) -> None:
        v = np.array(self.values, dtype=np.float64).reshape(-1)
        if v.size == 0:
            raise ValueError("Spectrum needs at least one eigenvalue")
        if not np.all(np.isfinite(v)):
            raise ValueError("Spectrum values must be finite")
        if v[0] <= 0.0:
            raise ValueError(f"Spectrum values must be strictly positive, smallest is {v[0]!r}")
        if np.any(np.diff(v) < 0.0):
            raise ValueError("Spectrum values must be ascending")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    @classmethod
    def from_unsorted(cls, values: Sequence[float]) -> "Spectrum":
        return cls(np.sort(np.asarray(values, dtype=np.float64)))

    @property
    def n(self) -> int:
        return int(self.values.size)

    @property
    def kappa(self) -> float:
        return float(self.values[-1] / self.values[0])

    def __len__(self) -> int:
        return self.n

    def lam(self, i: int) -> float:
        """1-based access, lam(1) is the smallest eigenvalue."""
        return float(self.values[i - 1])

    def sub(self, lo: int, hi: int) -> "Spectrum":
        """Eigenvalues lam(lo)..lam(hi), 1-based inclusive."""
        return Spectrum(self.values[lo - 1 : hi])


@dataclass(frozen=True, eq=False)
class ClusterPartition:
    """
    Partition indices 0 = k_0 < k_1 < ... < k_s = n over a spectrum;
    cluster i covers lam(k_{i-1}+1)..lam(k_i).
    """

    spectrum: Spectrum
    indices: Tuple[int, ...]

    def __post_init__(self) -> None:
        k = tuple(int(i) for i in self.indices)
        n = self.spectrum.n
        if len(k) < 2 or k[0] != 0 or k[-1] != n:
            raise ValueError(f"partition indices must run from 0 to n={n}, got {k}")
        if any(b <= a for a, b in zip(k, k[1:])):
            raise ValueError(f"partition indices must be strictly increasing, got {k}")
        for ki in k[1:-1]:
            if not self.spectrum.lam(ki) < self.spectrum.lam(ki + 1):
                raise ValueError(f"clusters must be disjoint, lam({ki}) == lam({ki + 1})")
        object.__setattr__(self, "indices", k)

    @classmethod
    def single(cls, spectrum: Spectrum) -> "ClusterPartition":
        return cls(spectrum, (0, spectrum.n))

    @property
    def s(self) -> int:
        return len(self.indices) - 1

    @property
    def clusters(self) -> List[Tuple[int, int]]:
        """1-based inclusive index ranges [(lo, hi), ...]."""
        return [(a + 1, b) for a, b in zip(self.indices, self.indices[1:])]

    @property
    def intervals(self) -> List[ClusterInterval]:
        sp = self.spectrum
        return [ClusterInterval(sp.lam(lo), sp.lam(hi)) for lo, hi in self.clusters]

    @property
    def kappas(self) -> List[float]:
        return [iv.kappa for iv in self.intervals]

    @property
    def kappa(self) -> float:
        return self.spectrum.kappa

    def edge_values(self) -> List[float]:
        """All interval endpoints, ascending: lam_1, then both edges of every gap, then lam_n."""
        edges: List[float] = []
        for iv in self.intervals:
            edges.extend([iv.lo, iv.hi])
        return edges

    def to_dict(self) -> Dict[str, Any]:
        return {
            "indices": list(self.indices),
            "clusters": [list(c) for c in self.clusters],
            "intervals": [[iv.lo, iv.hi] for iv in self.intervals],
            "kappas": self.kappas,
        }


# ---------------------------------------------------------------------
# Plain-text spectrum files
# ---------------------------------------------------------------------


def parse_spectrum_lines(lines: Sequence[str]) -> Spectrum:
    """
    One eigenvalue per line, ascending, strictly positive. Blank lines and
    '#' comments are skipped; the first offending line is reported.
    """
    values: List[float] = []
    for line_no, line in enumerate(lines, start=1):
        text = line.split("#", 1)[0].strip()
        if not text:
            continue
        try:
            v = float(text)
        except ValueError:
            raise SpectrumParseError(f"not a number: {text!r}", line_no)
        if not np.isfinite(v) or v <= 0.0:
            raise SpectrumParseError(f"eigenvalue must be finite and positive, got {text!r}", line_no)
        if values and v < values[-1]:
            raise SpectrumParseError(f"values not ascending ({v!r} after {values[-1]!r})", line_no)
        values.append(v)
    if not values:
        raise SpectrumParseError("spectrum file holds no values")
    return Spectrum(np.asarray(values))


def read_spectrum(path: str) -> Spectrum:
    with open(path, "r", encoding="utf-8") as f:
        return parse_spectrum_lines(f.readlines())


def write_spectrum(spec: Spectrum, path: str) -> None:
    atomic_write_text(path, "".join(fmt17(v) + "\n" for v in spec.values))

"""
Structured grid on the unit square and the high-contrast coefficient pattern.

Elements are indexed (ex, ey) with 0 <= ex, ey < N; nodes (i, j) with
0 <= i, j <= N. Subdomain a along x covers elements a*h_ratio .. (a+1)*h_ratio - 1.
"""
from dataclasses import dataclass
from typing import List, Tuple

import numpy as np

from src.utils.config import ProblemConfig
from src.utils.errors import PatternError
from src.utils.helpers import atomic_write_text


@dataclass(frozen=True)
class GridSpec:
    n_sub: int = 4
    h_ratio: int = 16

    def __post_init__(self) -> None:
        if self.n_sub < 1 or self.h_ratio < 1:
            raise ValueError(f"1/H and H/h must be positive integers, got {self.n_sub}, {self.h_ratio}")

    @classmethod
    def from_H(cls, H: float, H_over_h: int = 16) -> "GridSpec":
        inv = 1.0 / H
        if abs(inv - round(inv)) > 1e-9:
            raise ValueError(f"1/H must be an integer, got 1/H={inv}")
        return cls(n_sub=int(round(inv)), h_ratio=int(H_over_h))

    @property
    def H(self) -> float:
        return 1.0 / self.n_sub

    @property
    def N(self) -> int:
        """Elements per side."""
        return self.n_sub * self.h_ratio

    @property
    def h(self) -> float:
        return 1.0 / self.N

    @property
    def n_interior(self) -> int:
        return (self.N - 1) ** 2

    def interior_index(self, i: int, j: int) -> int:
        """Lexicographic unknown number of interior node (i, j), x fastest."""
        return (j - 1) * (self.N - 1) + (i - 1)


@dataclass(frozen=True)
class InclusionPattern:
    """
    Channels of high coefficient crossing every interior subdomain interface.

    Each interface segment (one subdomain side) carries `inclusions_per_edge`
    channels at even spacing; a channel is `2*half_length` elements long across
    the interface and `width` elements wide along it.
    """

    inclusions_per_edge: int = 2
    half_length: int = 3
    width: int = 1
    contrast: float = 1e8
    background: float = 1.0

    @classmethod
    def from_config(cls, cfg: ProblemConfig) -> "InclusionPattern":
        return cls(
            inclusions_per_edge=cfg.inclusions_per_edge,
            half_length=cfg.channel_len,
            width=cfg.channel_width,
            contrast=cfg.contrast,
            background=cfg.background,
        )

    def channel_offsets(self, h_ratio: int) -> List[int]:
        """Element offsets along a segment of h_ratio elements where channels start."""
        k = self.inclusions_per_edge
        return [(t + 1) * h_ratio // (k + 1) - self.width // 2 for t in range(k)]

    def check_fits(self, grid: GridSpec) -> None:
        if self.inclusions_per_edge < 0 or self.half_length < 0 or self.width < 1:
            raise PatternError("inclusion counts and lengths must be non-negative, width >= 1")
        if self.contrast <= 0 or self.background <= 0:
            raise PatternError("coefficient values must be strictly positive")
        if self.inclusions_per_edge == 0 or self.half_length == 0:
            return
        if 2 * self.half_length > grid.h_ratio:
            raise PatternError(
                f"channel length {2 * self.half_length} exceeds subdomain width {grid.h_ratio}"
            )
        offsets = self.channel_offsets(grid.h_ratio)
        if offsets[0] < 0 or offsets[-1] + self.width > grid.h_ratio:
            raise PatternError("channels do not fit inside one interface segment")
        if any(b - a < self.width for a, b in zip(offsets, offsets[1:])):
            raise PatternError(
                f"{self.inclusions_per_edge} channels of width {self.width} overlap on a "
                f"segment of {grid.h_ratio} elements"
            )


@dataclass(frozen=True, eq=False)
class CoefficientField:
    """Element-wise constant coefficient, values[ey, ex]."""

    grid: GridSpec
    values: np.ndarray
    background: float = 1.0
    contrast: float = 1e8

    def __post_init__(self) -> None:
        v = np.asarray(self.values, dtype=np.float64)
        if v.shape != (self.grid.N, self.grid.N):
            raise ValueError(f"coefficient raster is {v.shape}, grid needs {(self.grid.N,) * 2}")
        if np.any(v <= 0.0):
            raise ValueError("coefficients must be strictly positive")
        v = v.copy()
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    @property
    def n_contrast(self) -> int:
        return int(np.count_nonzero(self.values == self.contrast))

    def subdomain_block(self, a: int, b: int) -> np.ndarray:
        """Local raster of subdomain (a, b): a along x, b along y."""
        r = self.grid.h_ratio
        return self.values[b * r : (b + 1) * r, a * r : (a + 1) * r]

    def scaled(self, c: float) -> "CoefficientField":
        return CoefficientField(self.grid, self.values * c, self.background * c, self.contrast * c)


def _channel_boxes(grid: GridSpec, pattern: InclusionPattern) -> List[Tuple[int, int, int, int]]:
    """(x0, x1, y0, y1) element boxes, half-open, of every channel."""
    r = grid.h_ratio
    half = pattern.half_length
    boxes: List[Tuple[int, int, int, int]] = []
    for a in range(1, grid.n_sub):
        X = a * r
        for b in range(grid.n_sub):
            for off in pattern.channel_offsets(r):
                c0 = b * r + off
                # crosses the vertical interface x = X horizontally
                boxes.append((X - half, X + half, c0, c0 + pattern.width))
                # crosses the horizontal interface y = X vertically
                boxes.append((c0, c0 + pattern.width, X - half, X + half))
    return boxes


def build_coefficient_field(grid: GridSpec, pattern: InclusionPattern) -> CoefficientField:
    pattern.check_fits(grid)
    values = np.full((grid.N, grid.N), pattern.background, dtype=np.float64)
    if pattern.inclusions_per_edge > 0 and pattern.half_length > 0:
        for x0, x1, y0, y1 in _channel_boxes(grid, pattern):
            values[y0:y1, x0:x1] = pattern.contrast
    return CoefficientField(grid, values, pattern.background, pattern.contrast)


def export_coefficient_csv(field: CoefficientField, path: str) -> None:
    """One CSV row per element row (ey ascending), one column per ex."""
    lines = [",".join(f"{v:.17g}" for v in row) for row in field.values]
    atomic_write_text(path, "\n".join(lines) + "\n")

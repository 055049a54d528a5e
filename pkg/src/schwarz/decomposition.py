from dataclasses import dataclass, field
from typing import Dict, List, Literal, Tuple

import numpy as np

from src.problem.grid import GridSpec
from src.utils.errors import DecompositionError
from src.utils.helpers import write_csv

ComponentKind = Literal["vertex", "edge"]


@dataclass(frozen=True, eq=False)
class InterfaceComponent:
    """
    A subdomain vertex or edge. `key` is (a, b) in vertex-grid coordinates for
    vertices and ("x"|"y", a, b) for edges; `ancestors` are the component
    indices of the interior vertices at the ends of an edge.
    """

    kind: ComponentKind
    key: Tuple
    nodes: np.ndarray
    subdomains: Tuple[int, ...]
    ancestors: Tuple[int, ...] = ()


@dataclass(frozen=True, eq=False)
class DomainDecomposition:
    """
    Box decomposition of the interior unknowns into n_sub x n_sub subdomains.

    subdomains[s]  non-overlapping node set, half-open boxes [a*r, (a+1)*r)
    overlapping[s] the same box grown by `overlap` node layers
    interiors[s]   nodes strictly inside subdomain s (off the interface)
    Subdomain s = b * n_sub + a covers elements a*r..(a+1)*r-1 in x and
    b*r..(b+1)*r-1 in y. All index arrays are sorted unknown numbers.
    """

    grid: GridSpec
    overlap: int
    subdomains: List[np.ndarray]
    overlapping: List[np.ndarray]
    interiors: List[np.ndarray]
    owner: np.ndarray
    components: List[InterfaceComponent] = field(default_factory=list)

    @property
    def n_subdomains(self) -> int:
        return len(self.subdomains)

    @property
    def vertices(self) -> List[InterfaceComponent]:
        return [c for c in self.components if c.kind == "vertex"]

    @property
    def edges(self) -> List[InterfaceComponent]:
        return [c for c in self.components if c.kind == "edge"]

    @property
    def interface(self) -> np.ndarray:
        if not self.components:
            return np.zeros(0, dtype=np.int64)
        return np.sort(np.concatenate([c.nodes for c in self.components]))

    def interface_kind(self) -> np.ndarray:
        """Per unknown: 0 interior, 1 edge, 2 vertex."""
        kind = np.zeros(self.owner.size, dtype=np.int64)
        for c in self.components:
            kind[c.nodes] = 2 if c.kind == "vertex" else 1
        return kind


def _box(grid: GridSpec, i0: int, i1: int, j0: int, j1: int) -> np.ndarray:
    """Unknown numbers of nodes i0 <= i < i1, j0 <= j < j1, clipped to the interior."""
    N = grid.N
    i0, i1 = max(i0, 1), min(i1, N)
    j0, j1 = max(j0, 1), min(j1, N)
    if i0 >= i1 or j0 >= j1:
        return np.zeros(0, dtype=np.int64)
    ii = np.arange(i0, i1, dtype=np.int64)
    jj = np.arange(j0, j1, dtype=np.int64)
    return np.add.outer((jj - 1) * (N - 1), ii - 1).ravel()


def _classify_interface(grid: GridSpec) -> List[InterfaceComponent]:
    n, r = grid.n_sub, grid.h_ratio
    components: List[InterfaceComponent] = []
    vertex_id: Dict[Tuple[int, int], int] = {}

    def sid(a: int, b: int) -> int:
        return b * n + a

    for b in range(1, n):
        for a in range(1, n):
            vertex_id[(a, b)] = len(components)
            components.append(
                InterfaceComponent(
                    kind="vertex",
                    key=(a, b),
                    nodes=_box(grid, a * r, a * r + 1, b * r, b * r + 1),
                    subdomains=(sid(a - 1, b - 1), sid(a, b - 1), sid(a - 1, b), sid(a, b)),
                )
            )

    # edges on the vertical lines x = a*r, one per subdomain row b
    for a in range(1, n):
        for b in range(n):
            ends = tuple(vertex_id[(a, e)] for e in (b, b + 1) if (a, e) in vertex_id)
            components.append(
                InterfaceComponent(
                    kind="edge",
                    key=("x", a, b),
                    nodes=_box(grid, a * r, a * r + 1, b * r + 1, (b + 1) * r),
                    subdomains=(sid(a - 1, b), sid(a, b)),
                    ancestors=ends,
                )
            )
    # edges on the horizontal lines y = b*r, one per subdomain column a
    for b in range(1, n):
        for a in range(n):
            ends = tuple(vertex_id[(e, b)] for e in (a, a + 1) if (e, b) in vertex_id)
            components.append(
                InterfaceComponent(
                    kind="edge",
                    key=("y", a, b),
                    nodes=_box(grid, a * r + 1, (a + 1) * r, b * r, b * r + 1),
                    subdomains=(sid(a, b - 1), sid(a, b)),
                    ancestors=ends,
                )
            )
    return components


def decompose(grid: GridSpec, overlap: int = 2) -> DomainDecomposition:
    """
    Structured decomposition with overlap measured in element layers.

    Refuses an overlap wider than a subdomain.
    """
    if overlap < 0:
        raise DecompositionError(f"overlap must be non-negative, got {overlap}")
    if overlap > grid.h_ratio:
        raise DecompositionError(
            f"overlap of {overlap} layers exceeds the subdomain size H/h = {grid.h_ratio}"
        )
    n, r = grid.n_sub, grid.h_ratio

    subdomains: List[np.ndarray] = []
    overlapping: List[np.ndarray] = []
    interiors: List[np.ndarray] = []
    owner = np.empty(grid.n_interior, dtype=np.int64)
    for b in range(n):
        for a in range(n):
            i0, i1, j0, j1 = a * r, (a + 1) * r, b * r, (b + 1) * r
            own = _box(grid, i0, i1, j0, j1)
            owner[own] = len(subdomains)
            subdomains.append(own)
            overlapping.append(_box(grid, i0 - overlap, i1 + overlap, j0 - overlap, j1 + overlap))
            interiors.append(_box(grid, i0 + 1, i1, j0 + 1, j1))

    return DomainDecomposition(
        grid=grid,
        overlap=overlap,
        subdomains=subdomains,
        overlapping=overlapping,
        interiors=interiors,
        owner=owner,
        components=_classify_interface(grid),
    )


def export_decomposition_csv(dd: DomainDecomposition, path: str) -> None:
    """node -> owning subdomain, with grid position and interface class."""
    N = dd.grid.N
    labels = {0: "", 1: "edge", 2: "vertex"}
    kind = dd.interface_kind()
    rows = [
        {
            "node": k,
            "i": k % (N - 1) + 1,
            "j": k // (N - 1) + 1,
            "subdomain": int(dd.owner[k]),
            "interface": labels[int(kind[k])],
        }
        for k in range(dd.owner.size)
    ]
    write_csv(rows, path, fieldnames=["node", "i", "j", "subdomain", "interface"])

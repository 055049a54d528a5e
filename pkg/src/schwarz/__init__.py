from src.schwarz.coarse import CoarseKind, CoarseSpace, build_gdsw, build_rgdsw, export_coarse_space
from src.schwarz.decomposition import (
    DomainDecomposition,
    InterfaceComponent,
    decompose,
    export_decomposition_csv,
)
from src.schwarz.oracle import dense_preconditioner, spectrum_oracle
from src.schwarz.preconditioner import PreconditionerAssembly, build_coarse_space, build_preconditioner

__all__ = [
    "CoarseKind",
    "CoarseSpace",
    "DomainDecomposition",
    "InterfaceComponent",
    "PreconditionerAssembly",
    "build_coarse_space",
    "build_gdsw",
    "build_preconditioner",
    "build_rgdsw",
    "decompose",
    "dense_preconditioner",
    "export_coarse_space",
    "export_decomposition_csv",
    "spectrum_oracle",
]

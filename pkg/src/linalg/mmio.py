import os
import tempfile
from typing import List

import numpy as np
import scipy.io
import scipy.sparse as sp

from src.linalg.sparse import as_sparse, is_symmetric
from src.utils.errors import SpectrumParseError
from src.utils.helpers import atomic_write_text, fmt17


def write_matrix(A: sp.spmatrix, path: str, comment: str = "") -> None:
    """Matrix Market coordinate format; symmetric matrices store the lower triangle only."""
    A = as_sparse(A)
    symmetry = "symmetric" if is_symmetric(A) else "general"
    directory = os.path.dirname(os.path.abspath(path))
    os.makedirs(directory, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp_", suffix=".mtx")
    os.close(fd)
    try:
        scipy.io.mmwrite(tmp, A.tocoo(), comment=comment, field="real", precision=17, symmetry=symmetry)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.remove(tmp)
        raise


def read_matrix(path: str) -> sp.csr_matrix:
    M = scipy.io.mmread(path)
    if not sp.issparse(M):
        M = sp.csr_matrix(M)
    return as_sparse(M)


def write_vector(x: np.ndarray, path: str) -> None:
    values = np.asarray(x, dtype=np.float64).reshape(-1)
    atomic_write_text(path, "".join(fmt17(v) + "\n" for v in values))


def read_vector(path: str) -> np.ndarray:
    """One real per line; blank lines and '#' comments are skipped."""
    values: List[float] = []
    with open(path, "r", encoding="utf-8") as f:
        for line_no, line in enumerate(f, start=1):
            text = line.split("#", 1)[0].strip()
            if not text:
                continue
            try:
                values.append(float(text))
            except ValueError:
                raise SpectrumParseError(f"not a number: {text!r}", line_no)
    return np.asarray(values, dtype=np.float64)

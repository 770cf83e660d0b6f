"""Python bindings for the PSLR preconditioner library."""

from ._core import (
    Preconditioner,
    PslrConfig,
    PslrError,
    SparseMatrix,
    count_negative_eigs,
    eigenvalues,
    problem,
    read_matrix_market,
    run_cli,
    seeded_random_vector,
    solve,
    write_matrix_market,
)

__all__ = [
    "Preconditioner",
    "PslrConfig",
    "PslrError",
    "SparseMatrix",
    "count_negative_eigs",
    "eigenvalues",
    "from_scipy",
    "problem",
    "read_matrix_market",
    "run_cli",
    "seeded_random_vector",
    "solve",
    "to_scipy",
    "write_matrix_market",
]


def from_scipy(matrix):
    """Copies any scipy.sparse matrix into a SparseMatrix."""
    csr = matrix.tocsr()
    csr.sum_duplicates()
    csr.sort_indices()
    rows, cols = csr.shape
    return SparseMatrix(rows, cols, csr.indptr.astype("int64"), csr.indices.astype("int64"),
                        csr.data.astype("float64"))


def to_scipy(matrix):
    """Returns a scipy.sparse.csr_matrix copy."""
    import scipy.sparse

    return scipy.sparse.csr_matrix(matrix.csr(), shape=matrix.shape)

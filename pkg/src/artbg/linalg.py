"""Dense linear-algebra kernels: LU solves, Hermitian spectra, |A|."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.linalg as sla
import scipy.sparse as sps
import scipy.sparse.linalg as spla

from .exceptions import InvalidArgumentError, SingularMatrixError

HERMITIAN_RTOL = 1e-10


def _finite(a, name):
    a = np.asarray(a)
    if not np.all(np.isfinite(a)):
        raise InvalidArgumentError(f"{name} has non-finite entries")
    return a


def lu_factor(A):
    A = _finite(A, "A")
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise InvalidArgumentError(f"expected a square matrix, got shape {A.shape}")
    lu, piv = sla.lu_factor(A, check_finite=False)
    if np.any(np.diag(lu) == 0):
        raise SingularMatrixError("exactly singular pivot in LU factorisation")
    return lu, piv


def lu_solve(A, B, factor=None):
    """Solve A X = B with partial pivoting; ``factor`` reuses an lu_factor result."""
    lu_piv = factor if factor is not None else lu_factor(A)
    B = _finite(B, "B")
    return sla.lu_solve(lu_piv, B, check_finite=False)


def _hermitian_part(A):
    A = _finite(A, "A")
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise InvalidArgumentError(f"expected a square matrix, got shape {A.shape}")
    scale = np.linalg.norm(A)
    if np.linalg.norm(A - A.conj().T) > HERMITIAN_RTOL * max(scale, np.finfo(float).tiny):
        raise InvalidArgumentError("matrix is not Hermitian within tolerance")
    return 0.5 * (A + A.conj().T)


def hermitian_eig(A):
    """Ascending eigenvalues and unitary eigenvectors of a Hermitian matrix."""
    H = _hermitian_part(A)
    w, V = sla.eigh(H, check_finite=False)
    return w, V


def operator_abs(A):
    """|A| = V |Lambda| V^* for Hermitian A."""
    w, V = hermitian_eig(A)
    out = (V * np.abs(w)) @ V.conj().T
    return 0.5 * (out + out.conj().T)


@dataclass(frozen=True, eq=False)
class EigResult:
    values: np.ndarray
    vectors: np.ndarray = field(repr=False)


def gen_symdef_eig(A, B, count=None):
    """Smallest ``count`` eigenpairs of A v = lambda B v, B symmetric positive definite.

    Dense matrices go through a Cholesky reduction. Sparse inputs use
    shift-invert Lanczos about zero, which needs A nonsingular as well.
    Eigenvectors are B-orthonormal.
    """
    if sps.issparse(A) or sps.issparse(B):
        return _gen_symdef_eig_sparse(sps.csc_matrix(A), sps.csc_matrix(B), count)
    A = _finite(A, "A")
    B = _finite(B, "B")
    n = A.shape[0]
    count = n if count is None else min(int(count), n)
    A = 0.5 * (A + A.T)
    B = 0.5 * (B + B.T)
    try:
        sla.cholesky(B, lower=True, check_finite=False)
    except np.linalg.LinAlgError as exc:
        raise InvalidArgumentError("B is not positive definite") from exc
    w, V = sla.eigh(A, B, subset_by_index=(0, count - 1), check_finite=False)
    return EigResult(w, V)


def _gen_symdef_eig_sparse(A, B, count):
    n = A.shape[0]
    if count is None or count >= n - 1:
        return gen_symdef_eig(A.toarray(), B.toarray(), count)
    try:
        # cholmod is unavailable, so probe definiteness with an LDL-free check:
        # a sparse LU of B whose pivots are all positive for SPD B
        lu = spla.splu(B, permc_spec="NATURAL", diag_pivot_thresh=0.0)
    except RuntimeError as exc:
        raise InvalidArgumentError("B is singular") from exc
    if np.any(lu.U.diagonal() <= 0):
        raise InvalidArgumentError("B is not positive definite")
    w, V = spla.eigsh(A, k=count, M=B, sigma=0.0, which="LM", tol=1e-13)
    order = np.argsort(w)
    return EigResult(w[order], V[:, order])

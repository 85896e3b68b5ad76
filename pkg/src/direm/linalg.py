"""Dense linear-algebra primitives shared by the operator and embedding code.

Every eigendecomposition needed downstream is reduced to a symmetric problem,
so only a symmetric solver is provided here.
"""

from dataclasses import dataclass

import numpy as np
import scipy.linalg
from scipy.sparse import csgraph

from .errors import ConvergenceFailure, DegenerateDegree, Disconnected, SymmetryViolation

SYMMETRY_RTOL = 1e-10
RESIDUAL_RTOL = 1e-8


@dataclass(frozen=True)
class EigenPairs:
    """Eigenvalues in decreasing order and unit-norm eigenvectors as columns.

    Each column is signed so its largest-magnitude entry is positive (the
    lowest index wins among ties).
    """

    values: np.ndarray
    vectors: np.ndarray


def as_dense(M, name="matrix"):
    M = np.asarray(M, dtype=float)
    if M.ndim != 2 or M.size == 0:
        raise ValueError(f"{name} must be a non-empty 2-D array, got shape {M.shape}")
    if not np.all(np.isfinite(M)):
        raise ValueError(f"{name} contains non-finite entries")
    return M


def fix_signs(vectors, rtol=1e-12):
    """Flip columns so the largest-|entry| of each is positive, in place."""
    absv = np.abs(vectors)
    for j in range(vectors.shape[1]):
        col = absv[:, j]
        top = col.max()
        # Entries equal to the max up to rounding count as ties; lowest index wins.
        i = int(np.flatnonzero(col >= top * (1.0 - rtol))[0])
        if vectors[i, j] < 0:
            vectors[:, j] *= -1.0
    return vectors


def sym_eigs(M, k):
    """Return the ``k`` algebraically largest eigenpairs of symmetric ``M``.

    Raises
    ------
    SymmetryViolation
        If ``M`` is not symmetric to within ``1e-10 * max|M|``.
    ConvergenceFailure
        If LAPACK fails or a returned pair has residual above ``1e-8 * ||M||_F``.
    """
    M = as_dense(M)
    n = M.shape[0]
    if M.shape[1] != n:
        raise SymmetryViolation(f"matrix must be square, got {M.shape}")
    if not 1 <= k <= n:
        raise ValueError(f"k must be in [1, {n}], got {k}")
    scale = np.abs(M).max()
    if np.abs(M - M.T).max() > SYMMETRY_RTOL * scale:
        raise SymmetryViolation("matrix is not symmetric")
    Ms = 0.5 * (M + M.T)
    try:
        vals, vecs = scipy.linalg.eigh(Ms, subset_by_index=[n - k, n - 1], driver="evr")
    except (np.linalg.LinAlgError, ValueError) as exc:
        raise ConvergenceFailure(str(exc)) from exc
    vals = vals[::-1].copy()
    vecs = vecs[:, ::-1].copy()
    vecs /= np.linalg.norm(vecs, axis=0)
    fix_signs(vecs)
    resid = np.linalg.norm(Ms @ vecs - vecs * vals, axis=0)
    if np.any(resid > RESIDUAL_RTOL * max(np.linalg.norm(Ms), np.finfo(float).tiny)):
        raise ConvergenceFailure(f"eigenpair residual too large: {resid.max():.3e}")
    return EigenPairs(vals, vecs)


def _check_positive(d, what):
    bad = np.flatnonzero(~(d > 0))
    if bad.size:
        raise DegenerateDegree(
            f"{what} must be strictly positive; offending rows {bad[:10].tolist()}", bad
        )


def row_normalize(M):
    """Divide each row by its sum; returns ``(H, degrees)``."""
    M = as_dense(M)
    degrees = M.sum(axis=1)
    _check_positive(degrees, "row sums")
    return M / degrees[:, None], degrees


def diag_sandwich(M, d, power):
    """Return ``diag(d)**power @ M @ diag(d)**power``."""
    M = as_dense(M)
    d = np.asarray(d, dtype=float)
    _check_positive(d, "diagonal scaling")
    s = d**power
    return s[:, None] * M * s[None, :]


def component_sizes(M):
    """Sizes of the connected components of the graph with edges ``M != 0``.

    Edge direction is ignored.
    """
    M = np.asarray(M)
    off = M != 0
    np.fill_diagonal(off, True)
    if off.all():
        return [M.shape[0]]
    ncomp, labels = csgraph.connected_components(off, directed=True, connection="weak")
    return sorted(np.bincount(labels, minlength=ncomp).tolist(), reverse=True)


def check_connected(M):
    sizes = component_sizes(M)
    if len(sizes) > 1:
        raise Disconnected(f"graph has {len(sizes)} connected components {sizes}", sizes)


def stationary_left(V):
    """Stationary distribution of the random walk ``row_normalize(V)``.

    For symmetric ``V`` the chain is reversible and ``pi_i`` is proportional to
    the i-th row sum, so no iteration is needed.
    """
    V = as_dense(V)
    if np.abs(V - V.T).max() > SYMMETRY_RTOL * np.abs(V).max():
        raise SymmetryViolation("stationary_left requires a symmetric matrix")
    if np.any(V < 0):
        raise ValueError("stationary_left requires nonnegative entries")
    check_connected(V)
    q = V.sum(axis=1)
    _check_positive(q, "row sums")
    return q / q.sum()

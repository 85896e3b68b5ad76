"""Discrete Laplacian-type operators built from a directed affinity matrix.

Four families differ in which kernel is renormalized (full ``A`` or its
symmetric part ``S``) and whose degrees are used:

======  ====================  =========================
family  renormalized kernel   degrees used
======  ====================  =========================
ss      S                     S
aa      A                     A
as      S                     A
sa      A                     S
======  ====================  =========================

Renormalization by ``alpha`` divides the kernel by ``degree**alpha`` at both
endpoints before normalizing rows.
"""

from dataclasses import dataclass, field

import numpy as np

from .linalg import EigenPairs, _check_positive, as_dense, diag_sandwich, row_normalize, sym_eigs

FAMILIES = ("ss", "aa", "as", "sa")


@dataclass(frozen=True)
class OperatorMatrix:
    H: np.ndarray
    family: str
    alpha: float
    aux: dict = field(default_factory=dict, repr=False)

    def __array__(self, dtype=None, copy=None):
        return self.H if dtype is None else self.H.astype(dtype)


def _affinity(A):
    A = as_dense(A, "affinity matrix")
    if A.shape[0] != A.shape[1]:
        raise ValueError(f"affinity matrix must be square, got {A.shape}")
    if np.any(A < 0):
        raise ValueError("affinity matrix must be nonnegative")
    return A


def _check_alpha(alpha):
    if not 0.0 <= alpha <= 1.0:
        raise ValueError(f"alpha must lie in [0, 1], got {alpha}")
    return float(alpha)


def _degrees(M, what):
    d = M.sum(axis=1)
    _check_positive(d, what)
    return d


def build_ss(A, alpha=1.0):
    """Symmetric kernel renormalized by its own degrees (diffusion maps)."""
    A, alpha = _affinity(A), _check_alpha(alpha)
    S = 0.5 * (A + A.T)
    q = _degrees(S, "symmetrized degrees")
    V = diag_sandwich(S, q, -alpha)
    H, q1 = row_normalize(V)
    return OperatorMatrix(H, "ss", alpha, {"S": S, "q": q, "V": V, "q1": q1})


def build_aa(A, alpha=1.0):
    """Full kernel renormalized by its out-degrees (advected diffusion)."""
    A, alpha = _affinity(A), _check_alpha(alpha)
    p = _degrees(A, "out-degrees")
    T = diag_sandwich(A, p, -alpha)
    H, p1 = row_normalize(T)
    return OperatorMatrix(H, "aa", alpha, {"p": p, "T": T, "p1": p1})


def build_as(A, alpha=1.0):
    """Symmetric part renormalized and row-scaled by the full kernel's degrees.

    Rows do not sum to one in general; ``H.sum(axis=1) - 1`` is the discrete
    source term used by :func:`direm.embedding.divergence_estimate`.
    """
    A, alpha = _affinity(A), _check_alpha(alpha)
    S = 0.5 * (A + A.T)
    p = _degrees(A, "out-degrees")
    Vs = diag_sandwich(S, p, -alpha)
    T = diag_sandwich(A, p, -alpha)
    t = _degrees(T, "renormalized out-degrees")
    return OperatorMatrix(Vs / t[:, None], "as", alpha, {"p": p, "Vs": Vs, "T": T, "p1": t})


def build_sa(A, alpha=1.0):
    """Full kernel renormalized and row-scaled by the symmetric part's degrees."""
    A, alpha = _affinity(A), _check_alpha(alpha)
    S = 0.5 * (A + A.T)
    q = _degrees(S, "symmetrized degrees")
    Ta = diag_sandwich(A, q, -alpha)
    V = diag_sandwich(S, q, -alpha)
    v = _degrees(V, "renormalized symmetrized degrees")
    return OperatorMatrix(Ta / v[:, None], "sa", alpha, {"q": q, "Ta": Ta, "V": V, "q1": v})


_BUILDERS = {"ss": build_ss, "aa": build_aa, "as": build_as, "sa": build_sa}


def build(A, family, alpha=1.0):
    try:
        builder = _BUILDERS[family]
    except KeyError:
        raise ValueError(f"unknown operator family {family!r}; choose from {FAMILIES}") from None
    return builder(A, alpha)


def wcut_laplacian(A, T=None):
    """Symmetrized weighted-cut Laplacian ``(B + B.T) / 2``.

    ``B = T**(-1/2) (D - A) T**(-1/2)`` with ``D`` the out-degrees; ``T``
    defaults to ``D``, which gives ``I - D**(-1/2) (A + A.T)/2 D**(-1/2)``.
    """
    A = _affinity(A)
    D = _degrees(A, "out-degrees")
    T = D if T is None else np.asarray(T, dtype=float)
    if T.shape != D.shape:
        raise ValueError(f"node weights must have length {D.shape[0]}")
    _check_positive(T, "node weights")
    L = np.diag(D) - A
    B = diag_sandwich(L, T, -0.5)
    return 0.5 * (B + B.T)


def wcut_eigs(W, k):
    """The ``k`` smallest eigenpairs of a WCut Laplacian, in increasing order."""
    pairs = sym_eigs(-np.asarray(W, dtype=float), k)
    return EigenPairs(-pairs.values, pairs.vectors)

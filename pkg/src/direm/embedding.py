"""Directed embedding: coordinates, sampling density and vector field from a
weighted directed graph.

The pipeline is

1. symmetrize ``A`` and renormalize with ``alpha = 1`` to get ``H_ss``;
2. take the eigenvectors 2..d+1 of ``H_ss`` as coordinates ``Phi``;
3. read the stationary vector ``pi`` of ``H_ss``;
4. build ``H_aa`` (full kernel, ``alpha = 1``) and set
   ``R = (Phi Lambda - H_aa Phi) / 2``.

``R`` is defined up to a global multiplicative constant (sign included). With
the kernel convention of :mod:`direm.kernels`, ``R`` is proportional to
``-eps * w . grad(Phi)``.
"""

import warnings
from dataclasses import dataclass, field, replace

import numpy as np

from .errors import EigengapWarning
from .linalg import check_connected, diag_sandwich, fix_signs, row_normalize, stationary_left, sym_eigs
from .operators import _affinity, build_aa, build_as, build_ss

EIGENGAP_TOL = 1e-6


@dataclass(frozen=True)
class EmbeddingResult:
    """Output of :func:`directed_embed`.

    Attributes
    ----------
    Phi : (n, d) array
        Embedding coordinates, unit-norm columns.
    Lambda : (d,) array
        Eigenvalues of ``H_ss`` paired with the columns of ``Phi``, decreasing.
    pi : (n,) array
        Stationary distribution of ``H_ss``.
    degree_density : (n,) array
        Normalized degrees of the symmetrized kernel (a kernel density estimate
        up to constants).
    R, total_flow : (n, d) arrays or None
        Filled in by :func:`recover_field` and :func:`total_flow`.
    """

    Phi: np.ndarray
    Lambda: np.ndarray
    pi: np.ndarray
    degree_density: np.ndarray
    R: np.ndarray = None
    total_flow: np.ndarray = None
    diagnostics: dict = field(default_factory=dict)

    @property
    def d(self):
        return self.Phi.shape[1]


def embed(A, d):
    """Coordinates, eigenvalues and stationary density from ``H_ss`` (alpha=1).

    Right eigenvectors of ``H_ss = diag(q1)^-1 V`` come from the symmetric
    matrix ``diag(q1)^-1/2 V diag(q1)^-1/2`` and are mapped back with
    ``diag(q1)^-1/2``.
    """
    A = _affinity(A)
    n = A.shape[0]
    if not 1 <= d <= n - 1:
        raise ValueError(f"embedding dimension must be in [1, {n - 1}], got {d}")
    ss = build_ss(A, 1.0)
    V, q1 = ss.aux["V"], ss.aux["q1"]
    check_connected(V)
    k = min(d + 2, n)
    M = diag_sandwich(V, q1, -0.5)
    pairs = sym_eigs(M, k)
    Phi = pairs.vectors[:, 1 : d + 1] / np.sqrt(q1)[:, None]
    Phi /= np.linalg.norm(Phi, axis=0)
    fix_signs(Phi)
    Lambda = pairs.values[1 : d + 1].copy()

    diagnostics = {"eigenvalues": pairs.values.tolist(), "top_eigenvalue": float(pairs.values[0])}
    if k == d + 2:
        gap = float(pairs.values[d] - pairs.values[d + 1])
        diagnostics["spectral_gap"] = gap
        if gap < EIGENGAP_TOL:
            warnings.warn(
                f"eigenvalues {d + 1} and {d + 2} differ by {gap:.2e}; the last "
                "coordinate is not uniquely determined",
                EigengapWarning,
                stacklevel=2,
            )
    q = ss.aux["q"]
    return EmbeddingResult(
        Phi=Phi,
        Lambda=Lambda,
        pi=stationary_left(V),
        degree_density=q / q.sum(),
        diagnostics=diagnostics,
    )


def _check_shapes(A, emb):
    if emb.Phi.shape[0] != A.shape[0]:
        raise ValueError(
            f"embedding has {emb.Phi.shape[0]} rows but the affinity matrix has {A.shape[0]}"
        )


def recover_field(A, emb):
    """Tangential field components ``R = (Phi Lambda - H_aa Phi) / 2``."""
    A = _affinity(A)
    _check_shapes(A, emb)
    Haa = build_aa(A, 1.0).H
    return 0.5 * (emb.Phi * emb.Lambda - Haa @ emb.Phi)


def total_flow(A, emb):
    """Combined density drift and field, ``(Phi Lambda - P Phi) / 2``.

    ``P = diag(A 1)^-1 A`` is the plain random-walk matrix, i.e. ``H_aa`` at
    ``alpha = 0``.
    """
    A = _affinity(A)
    _check_shapes(A, emb)
    P, _ = row_normalize(A)
    return 0.5 * (emb.Phi * emb.Lambda - P @ emb.Phi)


def divergence_estimate(A):
    """Experimental source-term estimate ``(H_as - H_ss) 1`` at ``alpha = 1``.

    For a tangential field and the kernel orientation of
    :func:`direm.kernels.generative_affinity` this tends to ``-eps * div(w)``
    (a sink of ``w`` gives a positive value); a normal field component adds an
    unknown curvature term. The estimate is very sensitive to the sampling
    pattern, so treat its magnitude with suspicion.
    """
    A = _affinity(A)
    return build_as(A, 1.0).H.sum(axis=1) - build_ss(A, 1.0).H.sum(axis=1)


def directed_embed(A, d, with_total_flow=True):
    """Run the full pipeline: :func:`embed`, :func:`recover_field`, :func:`total_flow`."""
    A = _affinity(A)
    emb = embed(A, d)
    R = recover_field(A, emb)
    flow = total_flow(A, emb) if with_total_flow else None
    return replace(emb, R=R, total_flow=flow)

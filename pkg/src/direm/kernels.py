"""Symmetric diffusion kernel, asymmetric generative kernel, and the
symmetric/skew split of an observed affinity matrix.

The profile is the Gaussian ``exp(-|y - x|**2 / (4 eps))`` scaled by
``eps**(-d/2)``. With this profile the second-to-zeroth moment ratio
``m2 / (2 m0)`` is exactly 1, so the small-bandwidth generators have unit
coefficients (``(H - I) / eps -> Laplace-Beltrami`` and so on).
"""

import warnings
from dataclasses import dataclass

import numpy as np
from scipy.spatial.distance import cdist

from .errors import ClampWarning

CLAMP_WARN_FRACTION = 0.01


@dataclass(frozen=True)
class KernelConfig:
    """Bandwidth ``epsilon`` (squared-length units) and intrinsic dimension."""

    epsilon: float
    dim_d: int = 1

    def __post_init__(self):
        if not (np.isfinite(self.epsilon) and self.epsilon > 0):
            raise ValueError(f"epsilon must be positive, got {self.epsilon}")
        if int(self.dim_d) != self.dim_d or self.dim_d < 1:
            raise ValueError(f"dim_d must be a positive integer, got {self.dim_d}")


@dataclass(frozen=True)
class PointCloud:
    points: np.ndarray
    intrinsic_dim: int

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=float)
        if pts.ndim != 2 or pts.shape[0] < 2:
            raise ValueError("a point cloud needs at least 2 points as an (n, m) array")
        if pts.shape[1] < self.intrinsic_dim:
            raise ValueError("ambient dimension is smaller than the intrinsic dimension")
        if not np.all(np.isfinite(pts)):
            raise ValueError("point coordinates must be finite")
        object.__setattr__(self, "points", pts)

    @property
    def n(self):
        return self.points.shape[0]


@dataclass(frozen=True)
class ClampReport:
    """Entries where the linear asymmetry factor went negative.

    ``clamped_mass`` is the total negative weight removed by clamping,
    ``total_mass`` the sum of the symmetric kernel.
    """

    count: int
    max_kernel: float
    clamped_mass: float
    total_mass: float

    @property
    def fraction(self):
        return self.clamped_mass / self.total_mass if self.total_mass > 0 else 0.0

    def as_dict(self):
        return {
            "count": self.count,
            "max_kernel": self.max_kernel,
            "clamped_mass": self.clamped_mass,
            "total_mass": self.total_mass,
            "fraction": self.fraction,
        }


def _points(pc):
    if isinstance(pc, PointCloud):
        return pc.points
    pts = np.asarray(pc, dtype=float)
    if pts.ndim == 1:
        pts = pts[:, None]
    return pts


def symmetric_kernel(pc, cfg):
    """Gaussian kernel matrix ``S_ij = eps**(-d/2) exp(-|x_j - x_i|**2 / (4 eps))``."""
    X = _points(pc)
    sq = cdist(X, X, "sqeuclidean")
    S = np.exp(sq / (-4.0 * cfg.epsilon))
    S *= cfg.epsilon ** (-cfg.dim_d / 2.0)
    return S


def asymmetry_factor(X, W):
    """``f_ij = 1 + ((w_i + w_j) / 2) . (x_j - x_i)`` without forming n*n*m arrays."""
    G = W @ X.T  # G_ij = w_i . x_j
    g = np.diag(G).copy()
    return 1.0 + 0.5 * ((G - g[:, None]) + (g[None, :] - G.T))


def generative_affinity(pc, w, cfg, warn=True):
    """Asymmetric affinity ``A_ij = S_ij * max(0, 1 + ((w_i + w_j)/2) . (x_j - x_i))``.

    The symmetric part is :func:`symmetric_kernel`; the skew part carries the
    vector field with ``r(x, y) = w(x) + w(y)``, so ``r(x, x) = 2 w(x)``.

    Returns
    -------
    A : ndarray
    report : ClampReport
    """
    X = _points(pc)
    W = np.asarray(w, dtype=float)
    if W.ndim == 1:
        W = W[:, None]
    if W.shape != X.shape:
        raise ValueError(f"field shape {W.shape} does not match points {X.shape}")
    if not np.all(np.isfinite(W)):
        raise ValueError("field components must be finite")
    S = symmetric_kernel(X, cfg)
    if not np.any(W):
        return S, ClampReport(0, 0.0, 0.0, float(S.sum()))
    F = asymmetry_factor(X, W)
    neg = F < 0
    count = int(neg.sum())
    if count:
        report = ClampReport(
            count, float(S[neg].max()), float(-(S[neg] * F[neg]).sum()), float(S.sum())
        )
        np.maximum(F, 0.0, out=F)
    else:
        report = ClampReport(0, 0.0, 0.0, float(S.sum()))
    A = S * F
    if warn and report.fraction > CLAMP_WARN_FRACTION:
        warnings.warn(
            f"clamped {report.fraction:.2%} of the kernel mass; epsilon is large "
            "for this field magnitude",
            ClampWarning,
            stacklevel=2,
        )
    return A, report


def decompose(A):
    """Split ``A`` into symmetric ``(A + A.T)/2`` and skew ``(A - A.T)/2`` parts."""
    A = np.asarray(A, dtype=float)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ValueError(f"affinity matrix must be square, got {A.shape}")
    return 0.5 * (A + A.T), 0.5 * (A - A.T)

"""Synthetic manifolds with known density and vector field, and tools for
comparing a recovered field with the ground truth.

Field and density options are given as short strings so they can be passed
from the command line:

* fields on curves: ``"none"``, ``"tangential:a"``, ``"radial:b"`` /
  ``"normal:b"``, ``"mixed:a,b"`` (tangential ``a (1 + 0.5 sin t)`` plus
  constant normal ``b``), ``"sinusoidal:a"`` (tangential ``a sin t``);
* octant: ``"tangential:a"``, ``"with_normal:a,b"``;
* sphere: ``"latitudinal:a"``, ``"latitudinal_cos:a"``;
* densities: ``"uniform"``, ``"cos:c"`` (``1 + c cos t`` on curves),
  ``"exp:beta"`` (octant), ``"vmf"`` or ``"vmf:kappa"`` (sphere).
"""

import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import cumulative_trapezoid
from scipy.spatial import cKDTree

from .errors import EmptyComparison

DUMBBELL_WAIST = 0.7


@dataclass(frozen=True)
class ManifoldDataset:
    """Sampled manifold with ground-truth vector field.

    ``w_tangential`` is ``w_true`` with the normal component removed using the
    analytic tangent space; ``boundary_mask`` flags points too close to a
    manifold boundary for the closed-manifold theory to apply.
    """

    points: np.ndarray
    w_true: np.ndarray
    w_tangential: np.ndarray
    intrinsic_dim: int
    params: dict
    tangents: np.ndarray = field(repr=False)  # (n, m, intrinsic_dim) orthonormal basis
    boundary_mask: np.ndarray = None
    param: np.ndarray = field(default=None, repr=False)

    @property
    def n(self):
        return self.points.shape[0]

    @property
    def interior(self):
        if self.boundary_mask is None:
            return np.ones(self.n, dtype=bool)
        return ~self.boundary_mask


def parse_spec(spec):
    """Split ``"kind:1,2"`` into ``("kind", [1.0, 2.0])``."""
    if callable(spec):
        return "custom", spec
    kind, _, rest = str(spec).partition(":")
    values = [float(v) for v in rest.split(",") if v.strip()] if rest else []
    return kind.strip().lower(), values


def _arg(values, i, default):
    return values[i] if len(values) > i else default


def _curve_density(density):
    kind, vals = parse_spec(density)
    if kind == "custom":
        return vals
    if kind == "uniform":
        return None
    if kind == "cos":
        c = _arg(vals, 0, 0.5)
        if not abs(c) < 1:
            raise ValueError("cos density amplitude must be below 1")
        return lambda t: 1.0 + c * np.cos(t)
    raise ValueError(f"unknown curve density {density!r}")


def _curve_field(field_spec, t):
    """Tangential and normal magnitudes of a curve field at parameters ``t``."""
    kind, vals = parse_spec(field_spec)
    zero = np.zeros_like(t)
    if kind == "custom":
        tan, nor = vals(t)
        return np.broadcast_to(tan, t.shape).astype(float), np.broadcast_to(nor, t.shape).astype(float)
    if kind == "none":
        return zero, zero
    if kind in ("tangential", "constant_tangential"):
        return zero + _arg(vals, 0, 1.0), zero
    if kind in ("radial", "normal"):
        return zero, zero + _arg(vals, 0, 1.0)
    if kind == "mixed":
        return _arg(vals, 0, 0.5) * (1.0 + 0.5 * np.sin(t)), zero + _arg(vals, 1, 0.5)
    if kind == "sinusoidal":
        return _arg(vals, 0, 0.5) * np.sin(t), zero
    raise ValueError(f"unknown curve field {field_spec!r}")


def _quantile_grid(n, cdf_x, cdf_y, rng=None):
    """Parameters at equally spaced quantiles (or random ones if ``rng``)."""
    if rng is None:
        u = np.arange(n) / n
    else:
        u = np.sort(rng.random(n))
    return np.interp(u * cdf_y[-1], cdf_y, cdf_x)


def _planar_curve(n, radius, dradius, density, field_spec, seed, sampling, name, extra):
    """Closed star-shaped curve ``rho(t)`` sampled by arclength times density."""
    rng = np.random.default_rng(seed) if sampling == "random" else None
    dens = _curve_density(density)
    fine = np.linspace(0.0, 2 * np.pi, 2**16 + 1)
    speed = np.hypot(radius(fine), dradius(fine))
    weight = speed if dens is None else speed * dens(fine)
    cdf = cumulative_trapezoid(weight, fine, initial=0.0)
    t = _quantile_grid(n, fine, cdf, rng)

    rho, drho = radius(t), dradius(t)
    c, s = np.cos(t), np.sin(t)
    points = np.column_stack([rho * c, rho * s])
    tangent = np.column_stack([drho * c - rho * s, drho * s + rho * c])
    tangent /= np.linalg.norm(tangent, axis=1)[:, None]
    normal = np.column_stack([tangent[:, 1], -tangent[:, 0]])  # outward for CCW

    tan_mag, nor_mag = _curve_field(field_spec, t)
    w_true = tan_mag[:, None] * tangent + nor_mag[:, None] * normal
    w_tan = np.sum(w_true * tangent, axis=1)[:, None] * tangent
    params = {
        "shape": name,
        "n": int(n),
        "density": density if isinstance(density, str) else "custom",
        "field": field_spec if isinstance(field_spec, str) else "custom",
        "seed": seed,
        "sampling": sampling,
        **extra,
    }
    return ManifoldDataset(
        points=points,
        w_true=w_true,
        w_tangential=w_tan,
        intrinsic_dim=1,
        params=params,
        tangents=tangent[:, :, None],
        boundary_mask=np.zeros(n, dtype=bool),
        param=t,
    )


def gen_circle(n, density="uniform", field="tangential:1.0", seed=0, sampling="grid"):
    """Unit circle; the grid starts at angle 0 and is uniform in arclength
    weighted by ``density``."""
    if n < 4:
        raise ValueError("circle needs n >= 4")
    one = lambda t: np.ones_like(t)
    zero = lambda t: np.zeros_like(t)
    return _planar_curve(n, one, zero, density, field, seed, sampling, "circle", {})


def dumbbell_radius(t, waist=DUMBBELL_WAIST):
    return 1.0 + waist * np.cos(2 * t)


def gen_dumbbell(n, density="uniform", field="mixed:0.5,0.5", seed=0, sampling="grid",
                 waist=DUMBBELL_WAIST):
    """Two-lobed closed curve ``rho(t) = 1 + waist cos(2t)``."""
    if n < 4:
        raise ValueError("dumbbell needs n >= 4")
    if not 0 <= waist < 1:
        raise ValueError("waist parameter must lie in [0, 1)")
    radius = lambda t: dumbbell_radius(t, waist)
    dradius = lambda t: -2.0 * waist * np.sin(2 * t)
    return _planar_curve(n, radius, dradius, density, field, seed, sampling, "dumbbell",
                         {"waist": waist})


def _sphere_basis(x):
    """Orthonormal tangent basis (east, north) at unit vectors ``x``."""
    east = np.column_stack([-x[:, 1], x[:, 0], np.zeros(len(x))])
    norm = np.linalg.norm(east, axis=1)
    polar = norm < 1e-12
    east[polar] = [1.0, 0.0, 0.0]
    norm[polar] = 1.0
    east /= norm[:, None]
    north = np.cross(x, east)
    return np.stack([east, north], axis=2)


def _uniform_sphere(rng, size):
    g = rng.standard_normal((size, 3))
    return g / np.linalg.norm(g, axis=1)[:, None]


def _rejection(rng, n, propose, accept_prob, batch=4096):
    out = []
    have = 0
    while have < n:
        x = propose(rng, batch)
        x = x[rng.random(batch) < accept_prob(x)]
        out.append(x)
        have += len(x)
    return np.concatenate(out)[:n]


def _tangential_part(w, x):
    return w - np.sum(w * x, axis=1)[:, None] * x


def gen_octant(n, density="exp:1.0", field="tangential:1.0", seed=0, eps=0.01):
    """Points on ``{|x| = 1, x, y, z >= 0}`` with density ``exp(-beta z)``.

    The tangential field is the unit azimuthal direction times ``a``;
    ``with_normal:a,b`` adds a radial component ``b x``. Points within
    ``2 sqrt(eps)`` geodesic distance of an edge are flagged in
    ``boundary_mask``.
    """
    kind, vals = parse_spec(density)
    if kind == "uniform":
        beta = 0.0
    elif kind == "exp":
        beta = _arg(vals, 0, 1.0)
    else:
        raise ValueError(f"unknown octant density {density!r}")
    if beta < 0:
        raise ValueError("octant density exponent must be nonnegative")
    rng = np.random.default_rng(seed)
    x = _rejection(rng, n, lambda r, m: np.abs(_uniform_sphere(r, m)),
                   lambda p: np.exp(-beta * p[:, 2]))

    fkind, fvals = parse_spec(field)
    basis = _sphere_basis(x)
    if fkind in ("tangential", "with_normal"):
        w = _arg(fvals, 0, 1.0) * basis[:, :, 0]
        if fkind == "with_normal":
            w = w + _arg(fvals, 1, 0.5) * x
    elif fkind == "none":
        w = np.zeros_like(x)
    else:
        raise ValueError(f"unknown octant field {field!r}")
    edge_dist = np.arcsin(np.clip(x, 0.0, 1.0)).min(axis=1)
    return ManifoldDataset(
        points=x,
        w_true=w,
        w_tangential=_tangential_part(w, x),
        intrinsic_dim=2,
        params={"shape": "octant", "n": int(n), "density": f"exp:{beta!r}",
                "field": field, "seed": seed, "eps": eps},
        tangents=basis,
        boundary_mask=edge_dist < 2.0 * np.sqrt(eps),
    )


DEFAULT_VMF = (
    ((0.6, 0.3, 0.74), 6.0, 1.0),
    ((-0.5, -0.7, -0.2), 4.0, 0.7),
    ((0.1, 0.9, -0.4), 8.0, 0.5),
)


def _vmf_mixture(density):
    """Components ``(center, kappa, weight)`` and a uniform floor weight."""
    kind, vals = parse_spec(density)
    if kind == "uniform":
        return (), 1.0
    if kind == "vmf":
        if vals:
            return (((0.0, 0.0, 1.0), vals[0], 1.0),), _arg(vals, 1, 0.0)
        return DEFAULT_VMF, 0.15
    if kind == "custom":
        comps, floor = vals
        return tuple(comps), floor
    raise ValueError(f"unknown sphere density {density!r}")


def vmf_density(x, components, floor):
    """Unnormalized mixture ``floor + sum_k weight_k exp(kappa_k (mu_k . x - 1))``."""
    f = np.full(len(x), float(floor))
    for mu, kappa, weight in components:
        mu = np.asarray(mu, dtype=float)
        mu = mu / np.linalg.norm(mu)
        f += weight * np.exp(kappa * (x @ mu - 1.0))
    return f


def gen_sphere(n, density="vmf", field="latitudinal:1.0", seed=0):
    """Unit sphere sampled from a von Mises-Fisher mixture with field
    ``a * (z_hat x p)`` tangent to the latitude circles."""
    components, floor = _vmf_mixture(density)
    bound = floor + sum(c[2] for c in components)
    rng = np.random.default_rng(seed)
    x = _rejection(rng, n, _uniform_sphere,
                   lambda p: vmf_density(p, components, floor) / bound)
    fkind, fvals = parse_spec(field)
    zcross = np.column_stack([-x[:, 1], x[:, 0], np.zeros(n)])
    if fkind == "latitudinal":
        w = _arg(fvals, 0, 1.0) * zcross
    elif fkind == "latitudinal_cos":
        w = _arg(fvals, 0, 1.0) * zcross * np.hypot(x[:, 0], x[:, 1])[:, None]
    elif fkind == "none":
        w = np.zeros_like(x)
    else:
        raise ValueError(f"unknown sphere field {field!r}")
    return ManifoldDataset(
        points=x,
        w_true=w,
        w_tangential=_tangential_part(w, x),
        intrinsic_dim=2,
        params={"shape": "sphere", "n": int(n), "density": density if isinstance(density, str) else "custom",
                "field": field, "seed": seed},
        tangents=_sphere_basis(x),
        boundary_mask=np.zeros(n, dtype=bool),
    )


GENERATORS = {
    "circle": gen_circle,
    "dumbbell": gen_dumbbell,
    "octant": gen_octant,
    "sphere": gen_sphere,
}


def pushforward_field(ds, Phi, k_neighbors=12, rcond=1e-10):
    """Ground-truth tangential field expressed in embedding coordinates.

    For each point, the differential of the embedding is estimated by least
    squares from its ``k_neighbors`` nearest neighbours, with ambient offsets
    first projected on a local PCA tangent basis of dimension
    ``ds.intrinsic_dim``. Rows whose local fit is rank deficient are NaN.
    """
    Phi = getattr(Phi, "Phi", Phi)
    Phi = np.asarray(Phi, dtype=float)
    if Phi.ndim == 1:
        Phi = Phi[:, None]
    X = ds.points
    n, d = Phi.shape
    if n != ds.n:
        raise ValueError("embedding and dataset sizes differ")
    k_dim = ds.intrinsic_dim
    if k_neighbors < d + 2 or k_neighbors < k_dim + 1:
        raise ValueError(f"k_neighbors must be at least {max(d + 2, k_dim + 1)}")
    _, idx = cKDTree(X).query(X, k=k_neighbors + 1)
    out = np.full((n, d), np.nan)
    for i in range(n):
        nb = idx[i, idx[i] != i][:k_neighbors]
        dX = X[nb] - X[i]
        dY = Phi[nb] - Phi[i]
        # Local tangent plane from the neighbourhood's principal directions.
        _, sv, vt = np.linalg.svd(dX - dX.mean(axis=0), full_matrices=False)
        if sv.size < k_dim or sv[k_dim - 1] <= rcond * max(sv[0], np.finfo(float).tiny):
            continue
        T = vt[:k_dim].T
        coords = dX @ T
        J, _, rank, _ = np.linalg.lstsq(coords, dY, rcond=rcond)
        if rank < k_dim:
            continue
        out[i] = (ds.w_tangential[i] @ T) @ J
    bad = int(np.isnan(out[:, 0]).sum())
    if bad:
        warnings.warn(f"pushforward fit rank deficient at {bad} points", RuntimeWarning, stacklevel=2)
    return out


@dataclass(frozen=True)
class FieldMetrics:
    cosines: np.ndarray
    sign: int
    used: np.ndarray

    @property
    def median_cosine(self):
        return float(np.median(self.cosines))

    @property
    def sign_consistency(self):
        return float(np.mean(self.cosines > 0))

    def frac_cosine_above(self, tau):
        return float(np.mean(self.cosines > tau))


def field_metrics(R, R_true, mask=None, min_norm=1e-12):
    """Per-point cosine similarity after a global sign alignment.

    Rows are skipped when ``R_true`` is (near) zero or NaN, or where ``mask``
    is False. The sign ``s`` maximizing the median cosine is applied, since the
    recovered field's global sign is not identifiable.
    """
    R = np.asarray(R, dtype=float)
    R_true = np.asarray(R_true, dtype=float)
    if R.shape != R_true.shape:
        raise ValueError(f"shape mismatch {R.shape} vs {R_true.shape}")
    if R.ndim == 1:
        R, R_true = R[:, None], R_true[:, None]
    nr = np.linalg.norm(R, axis=1)
    nt = np.linalg.norm(R_true, axis=1)
    used = np.isfinite(nt) & (nt >= min_norm) & (nr > 0)
    if mask is not None:
        used &= np.asarray(mask, dtype=bool)
    if not used.any():
        raise EmptyComparison("no rows left to compare")
    cos = np.sum(R[used] * R_true[used], axis=1) / (nr[used] * nt[used])
    sign = -1 if np.median(cos) < 0 else 1
    return FieldMetrics(sign * cos, sign, used)

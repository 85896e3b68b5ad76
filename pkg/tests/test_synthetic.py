import numpy as np
import pytest
from scipy import integrate, stats

from direm.embedding import directed_embed
from direm.errors import EmptyComparison
from direm.kernels import KernelConfig, generative_affinity
from direm.synthetic import (
    ManifoldDataset,
    dumbbell_radius,
    field_metrics,
    gen_circle,
    gen_dumbbell,
    gen_octant,
    gen_sphere,
    pushforward_field,
)


def test_circle_grid_angles():
    ds = gen_circle(4)
    np.testing.assert_allclose(ds.param, [0, np.pi / 2, np.pi, 3 * np.pi / 2], atol=1e-12)
    np.testing.assert_allclose(ds.points, [[1, 0], [0, 1], [-1, 0], [0, -1]], atol=1e-12)


def test_circle_fields():
    ds = gen_circle(64, field="radial:0.7")
    assert np.abs(ds.w_tangential).max() <= 1e-15
    np.testing.assert_allclose(np.linalg.norm(ds.w_true, axis=1), 0.7)
    ds = gen_circle(64, field="constant_tangential:1")
    np.testing.assert_allclose(np.linalg.norm(ds.w_true, axis=1), 1.0)
    t = ds.param
    np.testing.assert_allclose(ds.w_true, np.column_stack([-np.sin(t), np.cos(t)]), atol=1e-12)


def test_circle_custom_field_and_density():
    ds = gen_circle(100, density=lambda t: 2 + np.cos(t), field=lambda t: (np.cos(t), 0.0))
    assert ds.params["density"] == "custom"
    dens = np.abs(np.diff(ds.param))
    # more points (smaller gaps) where the density is high
    assert dens[:5].mean() < dens[45:55].mean()
    np.testing.assert_allclose(np.sum(ds.w_true * ds.points, axis=1), 0, atol=1e-14)


def test_dumbbell_extents():
    assert dumbbell_radius(0.0) == pytest.approx(1.7)
    assert dumbbell_radius(np.pi / 2) == pytest.approx(0.3)


def test_dumbbell_arclength_grid():
    ds = gen_dumbbell(400)
    t = np.append(ds.param, 2 * np.pi)
    speed = lambda s: np.hypot(dumbbell_radius(s), -1.4 * np.sin(2 * s))
    gaps = [integrate.quad(speed, a, b, epsabs=1e-13)[0] for a, b in zip(t[:-1], t[1:])]
    assert np.ptp(gaps) <= 1e-6


def test_dumbbell_fields_orthogonality():
    ds = gen_dumbbell(200, field="normal:1.0")
    assert np.abs(ds.w_tangential).max() <= 1e-12
    ds = gen_dumbbell(200, field="mixed:0.5,0.5")
    normals = np.column_stack([ds.tangents[:, 1, 0], -ds.tangents[:, 0, 0]])
    assert np.abs(np.sum(ds.w_tangential * normals, axis=1)).max() <= 1e-10
    assert np.abs(np.sum(ds.w_true * normals, axis=1) - 0.5).max() <= 1e-12
    # outward normal: points away from the origin on this star-shaped curve
    assert np.all(np.sum(normals * ds.points, axis=1) > 0)


def test_octant_construction():
    ds = gen_octant(500, field="tangential:1.0", seed=1)
    np.testing.assert_allclose(np.linalg.norm(ds.points, axis=1), 1.0, atol=1e-14)
    assert ds.points.min() >= 0
    assert np.abs(np.sum(ds.w_tangential * ds.points, axis=1)).max() <= 1e-10
    assert 0 < ds.boundary_mask.mean() < 1
    ds = gen_octant(300, field="with_normal:1.0,0.5")
    np.testing.assert_allclose(np.sum(ds.w_true * ds.points, axis=1), 0.5, atol=1e-12)
    assert np.abs(np.sum(ds.w_tangential * ds.points, axis=1)).max() <= 1e-10


def test_octant_uniform_chi_square():
    ds = gen_octant(5000, density="exp:0", seed=7)
    x, y, z = ds.points.T
    # equal-area cells: equal z bands (Archimedes) times equal azimuth bins
    zb = np.minimum((z * 5).astype(int), 4)
    ab = np.minimum((np.arctan2(y, x) / (np.pi / 2) * 5).astype(int), 4)
    counts = np.bincount(zb * 5 + ab, minlength=25)
    assert stats.chisquare(counts).pvalue > 0.01


def test_octant_density_tilt():
    ds = gen_octant(5000, density="exp:2.0", seed=7)
    # exp(-2z) pushes mass towards the equator: mean z drops below the uniform 1/2
    assert ds.points[:, 2].mean() < 0.45


def test_sphere_field():
    ds = gen_sphere(1000, seed=2)
    assert np.abs(np.sum(ds.w_tangential * ds.points, axis=1)).max() <= 1e-12
    np.testing.assert_allclose(np.linalg.norm(ds.w_true, axis=1), np.hypot(ds.points[:, 0], ds.points[:, 1]))
    near_pole = np.abs(ds.points[:, 2]) > 0.99
    assert np.linalg.norm(ds.w_true[near_pole], axis=1).max() < 0.15


def test_sphere_vmf_mode():
    ds = gen_sphere(4000, density="vmf:5", seed=3)
    mean_dir = ds.points.mean(axis=0)
    mean_dir /= np.linalg.norm(mean_dir)
    assert np.degrees(np.arccos(mean_dir[2])) < 5.0


def test_determinism():
    for gen, kw in [(gen_octant, {}), (gen_sphere, {}), (gen_dumbbell, {"sampling": "random"})]:
        a, b = gen(600, seed=11, **kw), gen(600, seed=11, **kw)
        assert np.array_equal(a.points, b.points) and np.array_equal(a.w_true, b.w_true)
    assert not np.array_equal(gen_octant(600, seed=1).points, gen_octant(600, seed=2).points)


def flat_dataset(n=200, seed=0):
    rng = np.random.default_rng(seed)
    pts = rng.random((n, 2))
    w = rng.standard_normal((n, 2))
    return ManifoldDataset(pts, w, w, 2, {}, tangents=np.broadcast_to(np.eye(2), (n, 2, 2)))


def test_pushforward_identity_embedding():
    ds = flat_dataset()
    np.testing.assert_allclose(pushforward_field(ds, ds.points), ds.w_tangential, atol=1e-10)


def test_pushforward_linearity_and_metric_invariance():
    ds = gen_circle(400, field="tangential:0.5")
    A, _ = generative_affinity(ds.points, ds.w_true, KernelConfig(0.03, 1))
    emb = directed_embed(A, 2)
    p1 = pushforward_field(ds, emb.Phi)
    p2 = pushforward_field(ds, -3.0 * emb.Phi)
    np.testing.assert_allclose(p2, -3.0 * p1, atol=1e-12)
    assert field_metrics(emb.R, p1).median_cosine == pytest.approx(field_metrics(emb.R, p2).median_cosine)
    norms = np.linalg.norm(p1, axis=1)
    assert norms.max() / norms.min() - 1 < 0.2


def test_pushforward_rank_deficient():
    ds = flat_dataset(50)
    pts = ds.points.copy()
    pts[:, 1] = 0.0  # collapse to a line: no 2-D tangent plane
    ds = ManifoldDataset(pts, ds.w_true, ds.w_tangential, 2, {}, tangents=ds.tangents)
    with pytest.warns(RuntimeWarning):
        out = pushforward_field(ds, pts)
    assert np.isnan(out).all()


def test_field_metrics_examples(rng):
    R = rng.standard_normal((50, 2))
    assert field_metrics(R, R).median_cosine == pytest.approx(1.0)
    m = field_metrics(-R, R)
    assert m.median_cosine == pytest.approx(1.0) and m.sign == -1
    assert m.sign_consistency == 1.0
    with pytest.raises(EmptyComparison):
        field_metrics(R, np.zeros_like(R))
    with pytest.raises(EmptyComparison):
        field_metrics(R, R, mask=np.zeros(50, bool))


def test_field_metrics_null_distribution():
    rng = np.random.default_rng(99)
    R_true = rng.standard_normal((1000, 2))
    R = rng.standard_normal((1000, 2))
    cos = np.abs(field_metrics(R, R_true).cosines)
    # |cos| of random 2-D directions is |cos U|, U uniform: the median is cos(pi/4)
    assert np.median(field_metrics(R, R_true).cosines) < 0.2
    assert np.median(cos) == pytest.approx(np.cos(np.pi / 4), abs=0.05)

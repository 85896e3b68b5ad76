import numpy as np
import pytest

from direm.errors import DegenerateDegree
from direm.kernels import KernelConfig, generative_affinity, symmetric_kernel
from direm.linalg import stationary_left, sym_eigs
from direm.operators import FAMILIES, build, build_aa, build_as, build_sa, build_ss, wcut_laplacian

from conftest import random_digraph, random_symmetric_affinity

A2 = np.array([[0.0, 2.0], [4.0, 0.0]])
A3 = np.array([[0.0, 1.0, 1.0], [1.0, 0.0, 1.0], [0.2, 1.0, 0.0]])


def brute_operator(A, family, alpha):
    """Entry-by-entry evaluation of the four operator recipes."""
    n = len(A)
    S = [[(A[i][j] + A[j][i]) / 2 for j in range(n)] for i in range(n)]
    kern = {"s": S, "a": A}
    # first letter: whose degrees; second: which kernel is renormalized
    deg_src, kern_src = family[0], family[1]
    deg = [sum(kern[deg_src][i]) for i in range(n)]
    K = kern[kern_src]
    full = kern[deg_src]
    num = [[K[i][j] / (deg[i] ** alpha * deg[j] ** alpha) for j in range(n)] for i in range(n)]
    norm = [sum(full[i][j] / (deg[i] ** alpha * deg[j] ** alpha) for j in range(n)) for i in range(n)]
    return np.array([[num[i][j] / norm[i] for j in range(n)] for i in range(n)])


def test_build_ss_hand_example():
    op = build_ss(A2, 1.0)
    np.testing.assert_allclose(op.aux["S"], [[0, 3], [3, 0]])
    np.testing.assert_allclose(op.aux["q"], [3, 3])
    np.testing.assert_allclose(op.aux["V"], [[0, 1 / 3], [1 / 3, 0]])
    np.testing.assert_allclose(op.H, [[0, 1], [1, 0]])
    assert op.family == "ss" and op.alpha == 1.0


def test_build_aa_hand_example():
    op = build_aa(A2, 1.0)
    np.testing.assert_allclose(op.aux["p"], [2, 4])
    np.testing.assert_allclose(op.aux["T"], [[0, 2 / 8], [4 / 8, 0]])
    np.testing.assert_allclose(op.H, [[0, 1], [1, 0]])


def test_alpha_zero_cases(rng):
    A = random_digraph(rng, 8)
    S = (A + A.T) / 2
    np.testing.assert_allclose(build_ss(A, 0).H, S / S.sum(1)[:, None], rtol=1e-14)
    np.testing.assert_allclose(build_aa(A, 0).H, A / A.sum(1)[:, None], rtol=1e-14)


@pytest.mark.parametrize("family", FAMILIES)
@pytest.mark.parametrize("alpha", [0.0, 0.5, 1.0])
def test_matches_brute_force(rng, family, alpha):
    A = random_digraph(rng, 6)
    np.testing.assert_allclose(build(A, family, alpha).H, brute_operator(A.tolist(), family, alpha),
                               rtol=1e-12)


def test_as_row_sums_at_asymmetric_node():
    H = build_as(A3, 1.0).H
    expected = brute_operator(A3.tolist(), "as", 1.0).sum(axis=1)
    np.testing.assert_allclose(H.sum(axis=1), expected, rtol=1e-13)
    # nodes 0 and 2 carry the asymmetric edge
    assert np.all(np.abs(H.sum(axis=1)[[0, 2]] - 1) > 1e-3)
    op = build_as(A3, 1.0)
    np.testing.assert_allclose(H.sum(1), op.aux["Vs"].sum(1) / op.aux["T"].sum(1), rtol=1e-14)


def test_sa_differs_from_as():
    assert np.abs(build_sa(A3, 1.0).H - build_as(A3, 1.0).H).max() > 1e-3


def test_sa_zero_field_equals_ss(rng):
    X = rng.standard_normal((20, 2))
    A, _ = generative_affinity(X, np.zeros_like(X), KernelConfig(0.5, 1))
    np.testing.assert_array_equal(build_sa(A, 1.0).H, build_ss(A, 1.0).H)


@pytest.mark.parametrize("alpha", [0.0, 0.5, 1.0])
def test_family_collapse_for_symmetric_input(rng, alpha):
    A = random_symmetric_affinity(rng, 30)
    ref = build_ss(A, alpha).H
    for family in FAMILIES:
        assert np.abs(build(A, family, alpha).H - ref).max() <= 1e-12


def test_stochastic_families(rng):
    A = random_digraph(rng, 25)
    for op in (build_ss(A, 0.5), build_aa(A, 0.5), build_ss(A, 1.0), build_aa(A, 1.0)):
        assert np.abs(op.H.sum(axis=1) - 1).max() <= 1e-12


def test_ss_left_perron_vector(rng):
    A = random_digraph(rng, 20)
    op = build_ss(A, 1.0)
    pi = stationary_left(op.aux["V"])
    np.testing.assert_allclose(pi @ op.H, pi, atol=1e-15)


def test_constant_degree_alpha_independent():
    # circulant symmetric graph: all degrees equal
    n = 12
    c = np.zeros(n)
    c[[1, -1]] = 1.0
    c[[2, -2]] = 0.5
    A = np.array([np.roll(c, k) for k in range(n)])
    for alpha in (0.0, 0.3, 1.0):
        np.testing.assert_allclose(build_ss(A, alpha).H, build_ss(A, 0.0).H, rtol=1e-14)


def test_degenerate_degrees():
    A = np.array([[0.0, 1.0], [0.0, 0.0]])
    with pytest.raises(DegenerateDegree) as exc:
        build_aa(A)
    assert exc.value.indices == [1]
    with pytest.raises(DegenerateDegree):
        build_ss(np.zeros((2, 2)))
    with pytest.raises(ValueError):
        build_ss(A2, 1.5)
    with pytest.raises(ValueError):
        build(A2, "xx")


def test_wcut_hand_example():
    W = wcut_laplacian(A2)
    expected = np.eye(2) - np.array([[0, 3], [3, 0]]) / np.sqrt(8)
    np.testing.assert_allclose(W, expected, rtol=1e-15)


def test_wcut_eq15_vs_eq16(rng):
    A = random_digraph(rng, 15)
    D = A.sum(1)
    closed = np.eye(15) - (A + A.T) / 2 / np.sqrt(np.outer(D, D))
    np.testing.assert_allclose(wcut_laplacian(A), closed, atol=1e-14)
    np.testing.assert_allclose(wcut_laplacian(A, D), closed, atol=1e-14)


def test_wcut_symmetric_normalized_laplacian(rng):
    A = random_symmetric_affinity(rng, 20)
    W = wcut_laplacian(A)
    assert np.array_equal(W, W.T)
    vals = -sym_eigs(-W, 20).values
    assert vals.min() >= -1e-10
    D = A.sum(1)
    v = sym_eigs(-W, 1).vectors[:, 0]
    np.testing.assert_allclose(np.abs(v), np.sqrt(D) / np.linalg.norm(np.sqrt(D)), atol=1e-10)


def test_wcut_custom_weights(rng):
    A = random_digraph(rng, 6)
    T = rng.random(6) + 0.5
    B = np.diag(T**-0.5) @ (np.diag(A.sum(1)) - A) @ np.diag(T**-0.5)
    np.testing.assert_allclose(wcut_laplacian(A, T), (B + B.T) / 2, atol=1e-14)
    T[2] = 0
    with pytest.raises(DegenerateDegree):
        wcut_laplacian(A, T)


def test_operator_matrix_is_array_like(rng):
    A = random_digraph(rng, 4)
    op = build_ss(A)
    assert np.array_equal(np.asarray(op), op.H)
    np.testing.assert_allclose(symmetric_kernel(np.zeros((2, 1)), KernelConfig(1.0)), 1.0)

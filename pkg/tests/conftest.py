import numpy as np
import pytest


def jacobi_eigh(M, tol=1e-14, max_sweeps=100):
    """Cyclic Jacobi eigenvalue iteration, used as an independent oracle."""
    A = np.array(M, dtype=float)
    n = A.shape[0]
    V = np.eye(n)
    for _ in range(max_sweeps):
        off = np.sqrt(np.sum(np.tril(A, -1) ** 2))
        if off <= tol * np.linalg.norm(A):
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                if A[p, q] == 0.0:
                    continue
                theta = (A[q, q] - A[p, p]) / (2 * A[p, q])
                t = np.sign(theta) / (abs(theta) + np.sqrt(theta**2 + 1)) if theta else 1.0
                c = 1 / np.sqrt(t**2 + 1)
                s = t * c
                J = np.eye(n)
                J[p, p] = J[q, q] = c
                J[p, q], J[q, p] = s, -s
                A = J.T @ A @ J
                V = V @ J
    order = np.argsort(-np.diag(A), kind="stable")
    return np.diag(A)[order], V[:, order]


def random_symmetric_affinity(rng, n, density=1.0):
    A = rng.random((n, n))
    if density < 1.0:
        A *= rng.random((n, n)) < density
    A = A + A.T
    np.fill_diagonal(A, rng.random(n))
    return A


def random_digraph(rng, n):
    return rng.random((n, n)) + 0.05


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)

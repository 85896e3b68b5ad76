"""WCut on a directed graph with two loosely joined clusters."""
import numpy as np

from direm.operators import wcut_eigs, wcut_laplacian

rng = np.random.default_rng(0)
n = 40
block = np.repeat([0, 1], n // 2)
same = block[:, None] == block[None, :]
A = np.where(same, 1.0, 0.05) * rng.uniform(0.5, 1.5, (n, n))
A[:n // 2, n // 2:] *= 3.0   # traffic leaks mostly one way
np.fill_diagonal(A, 0.0)

W = wcut_laplacian(A)
print("W symmetric:", np.array_equal(W, W.T))
pairs = wcut_eigs(W, 3)
print("smallest eigenvalues:", pairs.values)

v = pairs.vectors[:, 1]
split = v > np.median(v)
agree = max(np.mean(split == block), np.mean(split != block))
print("cluster recovery from the second vector:", agree)

# on a symmetric graph W reduces to the normalized Laplacian
S = (A + A.T) / 2
D = S.sum(1)
print("max |W - (I - D^-1/2 S D^-1/2)| =",
      np.abs(wcut_laplacian(S) - (np.eye(n) - S / np.sqrt(np.outer(D, D)))).max())

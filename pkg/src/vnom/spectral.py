"""Spectral primitives for the nomination pipeline.

Weighted graphs come in as dense symmetric numpy arrays (zero = non-edge).
The pipeline is: pass-to-ranks the weights, augment the diagonal, embed by
the scaled top eigenvectors, pick a dimension at the scree-plot elbow, and
align the two embeddings on seed rows with an orthogonal Procrustes step.
"""

from __future__ import annotations

import math

import numpy as np
from scipy.stats import rankdata

__all__ = [
    "check_weighted_adjacency",
    "pass_to_ranks",
    "diag_augment",
    "ase",
    "profile_likelihood_elbow",
    "select_dim",
    "procrustes",
]

SYMMETRY_TOL = 1e-12


def check_weighted_adjacency(a):
    """Validate and return a symmetric nonnegative weight matrix."""
    a = np.asarray(a, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"adjacency must be square, got shape {a.shape}")
    if not np.allclose(a, a.T, atol=SYMMETRY_TOL, rtol=0.0):
        raise ValueError("adjacency must be symmetric")
    if np.any(a < 0):
        raise ValueError("negative edge weights are not supported")
    return a


def pass_to_ranks(a):
    """Replace nonzero weights by 2*rank/(s+1), ties averaged.

    Ranks are computed over the s nonzero upper-triangle weights and
    mirrored, so the output is symmetric and the nonzero weights average to
    exactly one.  Binary matrices come back unchanged: every weight ties at
    the middle rank.
    """
    a = check_weighted_adjacency(a)
    n = a.shape[0]
    iu = np.triu_indices(n, k=1)
    weights = a[iu]
    nz = weights > 0
    s = int(np.count_nonzero(nz))
    out = np.zeros_like(a)
    if s:
        ranked = np.zeros_like(weights)
        ranked[nz] = 2.0 * rankdata(weights[nz], method="average") / (s + 1)
        out[iu] = ranked
        out = out + out.T
    return out


def diag_augment(a):
    """Set each diagonal entry to the mean off-diagonal weight of its row."""
    a = check_weighted_adjacency(a)
    n = a.shape[0]
    if n < 2:
        raise ValueError("diagonal augmentation needs at least two vertices")
    out = a.copy()
    off_sums = a.sum(axis=1) - np.diag(a)
    np.fill_diagonal(out, off_sums / (n - 1))
    return out


def _fix_column_signs(u):
    # determinism across eigensolvers: largest-magnitude entry nonnegative
    idx = np.argmax(np.abs(u), axis=0)
    signs = np.sign(u[idx, np.arange(u.shape[1])])
    signs[signs == 0] = 1.0
    return u * signs


def ase(a, d):
    """Adjacency spectral embedding: scaled top-d eigenvectors of |A|.

    For symmetric input the spectral absolute value reduces to taking
    absolute eigenvalues.  Returns an n-by-d array whose i-th row embeds
    vertex i; its Gram diagonal recovers the selected eigenvalue magnitudes
    in non-increasing order.
    """
    a = np.asarray(a, dtype=float)
    n = a.shape[0]
    if not 1 <= d <= n:
        raise ValueError(f"embedding dimension {d} out of range 1..{n}")
    sym = (a + a.T) / 2.0
    values, vectors = np.linalg.eigh(sym)
    magnitude = np.abs(values)
    order = np.argsort(-magnitude, kind="stable")[:d]
    u = _fix_column_signs(vectors[:, order])
    return u * np.sqrt(magnitude[order])


def profile_likelihood_elbow(values):
    """Elbow index (1-based) of a non-increasing scree via profile likelihood.

    Every split point divides the values into a "signal" and a "noise"
    group; both are modelled as normal with separate means and a pooled
    variance, and the split with the highest likelihood wins.  Degenerate
    flat inputs return 1.
    """
    v = np.asarray(values, dtype=float)
    if v.ndim != 1 or v.size == 0:
        raise ValueError("need a one-dimensional, nonempty value array")
    v = np.sort(v)[::-1]
    p = v.size
    if p == 1 or np.allclose(v, v[0]):
        return 1
    scale = max(1.0, float(np.mean(np.abs(v))))
    best_q, best_ll = 1, -math.inf
    for q in range(1, p):
        head, tail = v[:q], v[q:]
        ss = float(np.sum((head - head.mean()) ** 2) + np.sum((tail - tail.mean()) ** 2))
        sigma = max(math.sqrt(ss / p), 1e-12 * scale)
        ll = (
            -p * math.log(sigma)
            - ss / (2.0 * sigma**2)
        )
        if ll > best_ll + 1e-12:
            best_q, best_ll = q, ll
    return best_q


def select_dim(a, max_d=None):
    """Embedding dimension from the profile-likelihood elbow of the scree.

    Scans the top ``min(n, 3*ceil(sqrt(n)))`` eigenvalue magnitudes unless
    ``max_d`` caps the scan.  Callers running a two-graph pipeline take the
    larger of the two selections.
    """
    a = np.asarray(a, dtype=float)
    n = a.shape[0]
    scan = min(n, 3 * math.ceil(math.sqrt(n)))
    if max_d is not None:
        if not 1 <= max_d <= n:
            raise ValueError(f"max_d {max_d} out of range 1..{n}")
        scan = min(scan, max_d) if max_d > 1 else 1
        scan = max(scan, min(max_d, n))
    values = np.linalg.eigvalsh((a + a.T) / 2.0)
    magnitude = np.sort(np.abs(values))[::-1][:scan]
    return profile_likelihood_elbow(magnitude)


def procrustes(x_seeds, y_seeds):
    """Orthogonal Q minimising ||XQ - Y||_F, via SVD of X^T Y.

    Rank-deficient cross-products are completed canonically by the SVD's
    orthonormal bases, so the result is always exactly orthogonal.
    """
    x = np.asarray(x_seeds, dtype=float)
    y = np.asarray(y_seeds, dtype=float)
    if x.shape != y.shape:
        raise ValueError(f"seed blocks differ in shape: {x.shape} vs {y.shape}")
    if x.ndim != 2:
        raise ValueError("seed blocks must be 2-d")
    u, _, vt = np.linalg.svd(x.T @ y)
    return u @ vt

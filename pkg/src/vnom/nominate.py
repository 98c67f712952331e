"""Gaussian-mixture nomination on embedded graphs.

Fits a Gaussian mixture to embedded (optionally feature-appended) vertex
positions of two graphs, then ranks candidate vertices of the second graph
by a max-min Mahalanobis distance to the vertices of interest in the first.
The full chain (rank transform -> diagonal augmentation -> spectral embed ->
seed Procrustes -> feature append -> joint mixture fit -> ranking) lives in
``run_pipeline``.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import cho_factor, cho_solve, solve_triangular
from scipy.special import logsumexp

from .spectral import ase, diag_augment, pass_to_ranks, procrustes, select_dim

__all__ = [
    "GMMModel",
    "NominationResult",
    "gmm_fit",
    "select_k_bic",
    "interest_distance",
    "nominate",
    "precision_curve",
    "rank_of",
    "run_pipeline",
]

_RIDGE_SCALE = 1e-6
_EIG_FLOOR = 1e-8
_EM_RTOL = 1e-8
_EM_MAX_ITER = 500


def _regularize(cov):
    """Ridge a covariance matrix when its smallest eigenvalue dips too low.

    Returns the (possibly adjusted) matrix and whether an adjustment was
    made.
    """
    cov = 0.5 * (cov + cov.T)
    d = cov.shape[0]
    if np.linalg.eigvalsh(cov)[0] >= _EIG_FLOOR:
        return cov, False
    cov = cov + (_RIDGE_SCALE * np.trace(cov) / d) * np.eye(d)
    if np.linalg.eigvalsh(cov)[0] < _EIG_FLOOR:
        # a component collapsed onto duplicate rows (e.g. one-hot
        # features): the trace-scaled ridge is then itself ~0, so fall
        # back to an absolute floor to keep the model usable
        cov = cov + _EIG_FLOOR * np.eye(d)
    return cov, True


@dataclass
class GMMModel:
    """A fitted Gaussian mixture.

    ``responsibilities`` holds the posterior component memberships of the
    rows the model was fit to; ``log_likelihood_path`` records the total
    log-likelihood after every EM iteration (non-decreasing).
    """

    weights: np.ndarray
    means: np.ndarray
    covariances: np.ndarray
    responsibilities: np.ndarray
    log_likelihood_path: np.ndarray
    converged: bool
    n_iter: int
    _chol: list = field(default_factory=list, repr=False)

    @property
    def n_components(self):
        return self.weights.shape[0]

    @property
    def dim(self):
        return self.means.shape[1]

    def _factors(self):
        if not self._chol:
            for k in range(self.n_components):
                try:
                    low = np.linalg.cholesky(self.covariances[k])
                except np.linalg.LinAlgError as err:
                    raise np.linalg.LinAlgError(
                        f"component {k} covariance is singular after ridge "
                        f"(min eig {np.linalg.eigvalsh(self.covariances[k])[0]:.3e})"
                    ) from err
                self._chol.append(low)
        return self._chol

    def log_joint(self, z):
        """log(weight_k) + log N(z_i | mu_k, Sigma_k), shape (n, K)."""
        z = np.atleast_2d(np.asarray(z, dtype=float))
        n, d = z.shape
        out = np.empty((n, self.n_components))
        for k, low in enumerate(self._factors()):
            diff = z - self.means[k]
            half = solve_triangular(low, diff.T, lower=True)
            quad = np.einsum("ij,ij->j", half, half)
            logdet = 2.0 * np.sum(np.log(np.diag(low)))
            with np.errstate(divide="ignore"):
                logw = np.log(self.weights[k])
            out[:, k] = logw - 0.5 * (d * np.log(2.0 * np.pi) + logdet + quad)
        return out

    def responsibility(self, z):
        """Posterior component probabilities for arbitrary points."""
        lj = self.log_joint(z)
        return np.exp(lj - logsumexp(lj, axis=1, keepdims=True))

    def predict_components(self, z):
        """Hard component assignment (argmax posterior) for each row of z."""
        return np.argmax(self.log_joint(z), axis=1)

    def score(self, z):
        """Total log-likelihood of the rows of z under the mixture."""
        return float(np.sum(logsumexp(self.log_joint(z), axis=1)))


def _farthest_point_indices(z, k, rng):
    """Greedy farthest-point seeding: random start, then repeatedly pick the
    point maximizing distance to its nearest chosen center."""
    n = z.shape[0]
    first = int(rng.integers(n))
    chosen = [first]
    dist2 = np.sum((z - z[first]) ** 2, axis=1)
    for _ in range(1, k):
        nxt = int(np.argmax(dist2))
        chosen.append(nxt)
        dist2 = np.minimum(dist2, np.sum((z - z[nxt]) ** 2, axis=1))
    return chosen


def gmm_fit(z, k, seed=None):
    """Fit a k-component Gaussian mixture to the rows of z by EM.

    Initialization places component means at farthest-point-seeded data
    rows with the pooled sample covariance and uniform weights.  Iterates
    until the relative log-likelihood change drops below 1e-8 or 500
    iterations, asserting monotonicity along the way.  Near-singular
    covariances are ridged by 1e-6 * trace/d on the diagonal.
    """
    z = np.asarray(z, dtype=float)
    if z.ndim != 2:
        raise ValueError("expected a 2-d array of row vectors")
    n, d = z.shape
    if k < 1:
        raise ValueError("need at least one component")
    if n < k:
        raise ValueError(f"cannot fit {k} components to {n} rows")
    rng = np.random.default_rng(seed)

    centers = _farthest_point_indices(z, k, rng)
    means = z[centers].copy()
    pooled, _ = _regularize(np.cov(z, rowvar=False, bias=True).reshape(d, d))
    covs = np.stack([pooled.copy() for _ in range(k)])
    weights = np.full(k, 1.0 / k)

    model = GMMModel(weights, means, covs, np.empty((n, k)), np.empty(0), False, 0)
    path = []
    prev = None
    prev_model = model
    ridged = True  # the pooled init covariance may itself be adjusted
    converged = False
    iters = 0
    for it in range(1, _EM_MAX_ITER + 1):
        lj = model.log_joint(z)
        ll = float(np.sum(logsumexp(lj, axis=1)))
        if prev is not None and ll < prev - 1e-9 * (1.0 + abs(prev)):
            # a ridged M step is no longer the exact maximizer, so the
            # likelihood can overshoot; keep the better previous state.
            # Without regularization in play a decrease is a real bug.
            assert ridged, (
                f"EM log-likelihood decreased: {prev} -> {ll} at iteration {it}"
            )
            model = prev_model
            converged = True
            break
        path.append(ll)
        iters = it
        if prev is not None and abs(ll - prev) <= _EM_RTOL * max(1.0, abs(prev)):
            converged = True
            break
        prev = ll
        resp = np.exp(lj - logsumexp(lj, axis=1, keepdims=True))

        nk = resp.sum(axis=0)
        safe = nk + 10.0 * np.finfo(float).tiny
        weights = nk / n
        means = (resp.T @ z) / safe[:, None]
        covs = np.empty((k, d, d))
        ridged = False
        for j in range(k):
            diff = z - means[j]
            covs[j], adjusted = _regularize((resp[:, j, None] * diff).T @ diff / safe[j])
            ridged = ridged or adjusted
        prev_model = model
        model = GMMModel(weights, means, covs, resp, np.empty(0), False, it)

    lj = model.log_joint(z)
    resp = np.exp(lj - logsumexp(lj, axis=1, keepdims=True))
    model.responsibilities = resp
    model.log_likelihood_path = np.asarray(path)
    model.converged = converged
    model.n_iter = iters
    return model


def select_k_bic(z, k_max=10, seed=None):
    """Fit mixtures for K = 1..k_max and keep the one minimizing BIC."""
    z = np.asarray(z, dtype=float)
    n, d = z.shape
    rng = np.random.default_rng(seed)
    best = None
    best_bic = np.inf
    for k in range(1, min(k_max, n) + 1):
        model = gmm_fit(z, k, rng)
        n_params = (k - 1) + k * d + k * d * (d + 1) // 2
        bic = -2.0 * model.log_likelihood_path[-1] + n_params * np.log(n)
        if bic < best_bic:
            best, best_bic = model, bic
    return best


def _mahalanobis(diff, cov):
    try:
        factor = cho_factor(cov, lower=True)
    except np.linalg.LinAlgError as err:
        raise np.linalg.LinAlgError(
            f"singular covariance in distance computation "
            f"(min eig {np.linalg.eigvalsh(cov)[0]:.3e})"
        ) from err
    return float(np.sqrt(diff @ cho_solve(factor, diff)))


def interest_distance(z1, z2, model1, model2, interest, u):
    """Max-min Mahalanobis distance from candidate u (a row of z2) to the
    interest set (rows of z1).

    For each interesting vertex the two Mahalanobis distances -- one under
    the candidate's component covariance, one under the interesting
    vertex's -- are maxed, and the minimum over the interest set is
    returned.
    """
    z1 = np.asarray(z1, dtype=float)
    z2 = np.asarray(z2, dtype=float)
    comp_u = int(model2.predict_components(z2[u][None, :])[0])
    cov_u = model2.covariances[comp_u]
    best = np.inf
    for v in interest:
        diff = z1[v] - z2[u]
        comp_v = int(model1.predict_components(z1[v][None, :])[0])
        d_u = _mahalanobis(diff, cov_u)
        d_v = _mahalanobis(diff, model1.covariances[comp_v])
        best = min(best, max(d_u, d_v))
    return best


@dataclass(frozen=True)
class NominationResult:
    """A ranked list of candidate vertices with their distance scores.

    ``order[0]`` is the top nomination; ``scores`` is aligned with
    ``order`` and non-decreasing.  ``provenance`` records which inputs
    drove the ranking ("graph+features", "graph-only" or "features-only").
    """

    order: tuple
    scores: tuple
    provenance: str

    def __post_init__(self):
        if len(self.order) != len(self.scores):
            raise ValueError("order and scores must align")

    def __len__(self):
        return len(self.order)


def nominate(z1, z2, model1, model2, interest, seeds, provenance="graph+features"):
    """Rank the non-seed vertices of the second graph by interest distance.

    Ascending distance, ties broken by vertex index (fixed order).
    """
    if not interest:
        raise ValueError("interest set is empty")
    z2 = np.asarray(z2, dtype=float)
    seed_set = set(int(s) for s in seeds)
    candidates = [u for u in range(z2.shape[0]) if u not in seed_set]
    if not candidates:
        raise ValueError("no candidate vertices remain after removing seeds")
    dists = [interest_distance(z1, z2, model1, model2, interest, u)
             for u in candidates]
    order = sorted(range(len(candidates)), key=lambda i: (dists[i], candidates[i]))
    return NominationResult(
        order=tuple(candidates[i] for i in order),
        scores=tuple(dists[i] for i in order),
        provenance=provenance,
    )


def precision_curve(result, truth, k_grid):
    """Number of true vertices among the top k, for each k in k_grid."""
    truth = set(int(v) for v in truth)
    if not truth:
        raise ValueError("truth set is empty")
    out = np.empty(len(k_grid), dtype=int)
    for i, k in enumerate(k_grid):
        if k > len(result.order):
            raise ValueError(f"k={k} exceeds ranking length {len(result.order)}")
        out[i] = sum(1 for v in result.order[:k] if v in truth)
    return out


def rank_of(result, vertex):
    """1-based rank of a vertex in the nomination list."""
    try:
        return result.order.index(int(vertex)) + 1
    except ValueError as err:
        raise ValueError(f"vertex {vertex} is not in the ranking") from err


def _zscore_pooled(x, y):
    stacked = np.vstack([x, y])
    mu = stacked.mean(axis=0)
    sd = stacked.std(axis=0)
    sd[sd == 0.0] = 1.0
    return (x - mu) / sd, (y - mu) / sd


def run_pipeline(g1, x, g2, y, seeds, interest, *, use_graph=True,
                 use_features=True, embed_dim=None, n_components=None,
                 zscore_features=False, seed=None):
    """Full nomination chain on a pair of weighted graphs with features.

    ``seeds`` is a sequence of (vertex in graph 1, vertex in graph 2)
    pairs with known correspondence; the graph-2 members are excluded from
    the ranking.  Embedding dimension defaults to the larger of the two
    scree-plot elbows (both graphs re-embedded at the common dimension);
    the number of mixture components defaults to a BIC scan.  Toggling
    ``use_graph`` off ranks on features alone; ``use_features`` off ranks
    on topology alone.
    """
    if not use_graph and not use_features:
        raise ValueError("at least one of use_graph / use_features required")
    seeds = [(int(a), int(b)) for a, b in seeds]
    interest = sorted(int(v) for v in interest)
    rng = np.random.default_rng(seed)

    z1 = z2 = None
    if use_graph:
        a1 = diag_augment(pass_to_ranks(np.asarray(g1, dtype=float)))
        a2 = diag_augment(pass_to_ranks(np.asarray(g2, dtype=float)))
        if a1.shape != a2.shape:
            raise ValueError("graphs must have the same vertex count")
        d = embed_dim if embed_dim is not None else max(select_dim(a1), select_dim(a2))
        x1 = ase(a1, d)
        x2 = ase(a2, d)
        if len(seeds) < d:
            warnings.warn(
                f"{len(seeds)} seed pairs for a {d}-dimensional Procrustes "
                "alignment; rotation is under-determined", stacklevel=2)
        s1 = [a for a, _ in seeds]
        s2 = [b for _, b in seeds]
        q = procrustes(x2[s2], x1[s1])
        z1, z2 = x1, x2 @ q

    if use_features:
        if x is None or y is None:
            raise ValueError("use_features requires vertex features for both graphs")
        fx = np.atleast_2d(np.asarray(x, dtype=float))
        fy = np.atleast_2d(np.asarray(y, dtype=float))
        if fx.shape[0] != fy.shape[0]:
            raise ValueError("feature matrices must have the same row count")
        if zscore_features:
            fx, fy = _zscore_pooled(fx, fy)
        if use_graph:
            z1 = np.hstack([z1, fx])
            z2 = np.hstack([z2, fy])
        else:
            z1, z2 = fx, fy

    stacked = np.vstack([z1, z2])
    if n_components is not None:
        model = gmm_fit(stacked, n_components, rng)
    else:
        model = select_k_bic(stacked, seed=rng)

    provenance = ("graph+features" if use_graph and use_features
                  else "graph-only" if use_graph else "features-only")
    return nominate(z1, z2, model, model, interest,
                    [b for _, b in seeds], provenance=provenance)

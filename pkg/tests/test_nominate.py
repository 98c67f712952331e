"""Tests for the mixture fit, the interest distance, and the full pipeline."""

import math

import numpy as np
import pytest

from vnom.models import sample_sim_pair
from vnom.nominate import (
    GMMModel,
    NominationResult,
    gmm_fit,
    interest_distance,
    nominate,
    precision_curve,
    rank_of,
    run_pipeline,
    select_k_bic,
)


def single_component_model(cov):
    cov = np.asarray(cov, dtype=float)
    d = cov.shape[0]
    return GMMModel(
        weights=np.array([1.0]),
        means=np.zeros((1, d)),
        covariances=cov[None, :, :],
        responsibilities=np.ones((1, 1)),
        log_likelihood_path=np.zeros(1),
        converged=True,
        n_iter=1,
    )


def two_blob_data(rng, n_per=100, d=2, sep=5.0):
    a = rng.standard_normal((n_per, d)) + sep
    b = rng.standard_normal((n_per, d)) - sep
    labels = np.array([0] * n_per + [1] * n_per)
    return np.vstack([a, b]), labels


# ---------------------------------------------------------------------------
# mixture fitting


def test_single_component_is_sample_mean_and_covariance():
    rng = np.random.default_rng(0)
    z = rng.standard_normal((50, 3)) * 2.0 + 1.0
    model = gmm_fit(z, 1, seed=1)
    assert np.allclose(model.means[0], z.mean(axis=0), atol=1e-8)
    assert np.allclose(model.covariances[0], np.cov(z.T, bias=True), atol=1e-8)
    assert model.weights[0] == pytest.approx(1.0)


def test_two_blob_recovery():
    z, labels = two_blob_data(np.random.default_rng(0))
    model = gmm_fit(z, 2, seed=1)
    centers = model.means
    # match fitted components to the planted centers up to swap
    true = np.array([[5.0, 5.0], [-5.0, -5.0]])
    direct = max(np.linalg.norm(centers[i] - true[i]) for i in range(2))
    swapped = max(np.linalg.norm(centers[i] - true[1 - i]) for i in range(2))
    flip = swapped < direct
    assert min(direct, swapped) < 0.3

    got = model.predict_components(z)
    if flip:
        got = 1 - got
    assert (got == labels).mean() >= 0.98


def test_em_path_is_monotone_and_model_is_proper():
    rng = np.random.default_rng(2)
    for trial in range(10):
        n = int(rng.integers(30, 80))
        d = int(rng.integers(1, 4))
        k = int(rng.integers(1, 4))
        z = rng.standard_normal((n, d)) + rng.integers(-3, 4, size=d)
        model = gmm_fit(z, k, seed=trial)
        path = model.log_likelihood_path
        assert np.all(np.diff(path) >= -1e-9 * (1.0 + np.abs(path[:-1])))
        assert model.weights.sum() == pytest.approx(1.0)
        assert np.all(model.weights >= 0)
        assert np.allclose(model.responsibilities.sum(axis=1), 1.0)
        for cov in model.covariances:
            assert np.linalg.eigvalsh(cov)[0] > 0


def test_fit_validates_shapes():
    z = np.zeros((4, 2))
    with pytest.raises(ValueError):
        gmm_fit(z, 0)
    with pytest.raises(ValueError):
        gmm_fit(z, 5)
    with pytest.raises(ValueError):
        gmm_fit(np.zeros(4), 1)


def test_fit_survives_duplicate_rows():
    # one-hot style input collapses a component's covariance; the fit must
    # still produce an invertible model
    z = np.repeat(np.eye(3), (8, 7, 6), axis=0)
    model = gmm_fit(z, 2, seed=0)
    for cov in model.covariances:
        assert np.linalg.eigvalsh(cov)[0] > 0
    assert np.isfinite(model.score(z))


def test_bic_scan_finds_two_blobs():
    z, _ = two_blob_data(np.random.default_rng(3))
    model = select_k_bic(z, k_max=5, seed=4)
    assert model.n_components == 2


def test_score_matches_path_end():
    rng = np.random.default_rng(5)
    z = rng.standard_normal((40, 2))
    model = gmm_fit(z, 2, seed=6)
    assert model.score(z) == pytest.approx(model.log_likelihood_path[-1], rel=1e-9)


# ---------------------------------------------------------------------------
# interest distance


def test_distance_zero_when_rows_coincide():
    model = single_component_model(np.eye(2))
    z1 = np.array([[1.0, 2.0], [3.0, 4.0]])
    z2 = np.array([[9.0, 9.0], [1.0, 2.0]])
    assert interest_distance(z1, z2, model, model, [0], 1) == pytest.approx(0.0)


def test_identity_covariance_reduces_to_euclidean():
    model = single_component_model(np.eye(2))
    z1 = np.array([[0.0, 0.0], [10.0, 0.0]])
    z2 = np.array([[3.0, 4.0]])
    d = interest_distance(z1, z2, model, model, [0, 1], 0)
    assert d == pytest.approx(5.0)  # the closer interesting vertex wins


def test_mismatched_covariances_take_the_max():
    wide = single_component_model(4.0 * np.eye(2))
    tight = single_component_model(np.eye(2))
    z1 = np.array([[3.0, 0.0]])
    z2 = np.array([[0.0, 0.0]])
    # candidate's covariance gives 3/2, the interesting vertex's gives 3
    assert interest_distance(z1, z2, tight, wide, [0], 0) == pytest.approx(3.0)


def test_singular_covariance_reports_diagnostics():
    broken = single_component_model(np.zeros((2, 2)))
    z = np.array([[1.0, 0.0]])
    with pytest.raises(np.linalg.LinAlgError, match="min eig"):
        interest_distance(z, z, broken, broken, [0], 0)


# ---------------------------------------------------------------------------
# ranking


def test_planted_copy_is_ranked_first():
    rng = np.random.default_rng(7)
    z = rng.standard_normal((10, 2))
    model = single_component_model(np.eye(2))
    result = nominate(z, z, model, model, [4], seeds=[2, 7])
    assert result.order[0] == 4
    assert result.scores[0] == pytest.approx(0.0)
    assert set(result.order) == set(range(10)) - {2, 7}
    assert list(result.scores) == sorted(result.scores)


def test_ties_break_by_vertex_index():
    z1 = np.zeros((3, 2))
    z2 = np.zeros((5, 2))
    model = single_component_model(np.eye(2))
    result = nominate(z1, z2, model, model, [0], seeds=[1])
    assert result.order == (0, 2, 3, 4)


def test_nominate_validates_inputs():
    z = np.zeros((3, 2))
    model = single_component_model(np.eye(2))
    with pytest.raises(ValueError, match="interest"):
        nominate(z, z, model, model, [], seeds=[])
    with pytest.raises(ValueError, match="candidate"):
        nominate(z, z, model, model, [0], seeds=[0, 1, 2])


def test_rank_of_is_one_based():
    result = NominationResult(order=(5, 3, 8), scores=(0.0, 1.0, 2.0), provenance="x")
    assert rank_of(result, 5) == 1
    assert rank_of(result, 8) == 3
    with pytest.raises(ValueError):
        rank_of(result, 99)


def test_result_length_and_alignment():
    assert len(NominationResult((1, 2), (0.0, 0.1), "graph-only")) == 2
    with pytest.raises(ValueError):
        NominationResult((1, 2), (0.0,), "graph-only")


# ---------------------------------------------------------------------------
# precision curves


def test_perfect_ranking_curve():
    order = tuple(range(100))
    result = NominationResult(order, tuple(float(i) for i in order), "x")
    truth = set(range(40))
    curve = precision_curve(result, truth, (1, 10, 40, 100))
    assert list(curve) == [1, 10, 40, 40]


def test_disjoint_truth_curve_is_zero():
    result = NominationResult((0, 1, 2), (0.0, 0.0, 0.0), "x")
    assert list(precision_curve(result, {7, 8}, (1, 3))) == [0, 0]


def test_curve_bounds_and_errors():
    rng = np.random.default_rng(8)
    order = tuple(int(v) for v in rng.permutation(60))
    result = NominationResult(order, (0.0,) * 60, "x")
    truth = set(range(15))
    ks = (1, 5, 20, 60)
    curve = precision_curve(result, truth, ks)
    assert all(0 <= c <= min(k, 15) for c, k in zip(curve, ks))
    assert np.all(np.diff(curve) >= 0)
    with pytest.raises(ValueError):
        precision_curve(result, truth, (61,))
    with pytest.raises(ValueError):
        precision_curve(result, set(), (1,))


def test_random_ranking_matches_hypergeometric_mean():
    rng = np.random.default_rng(9)
    trials = 2000
    hits = np.empty(trials)
    truth = set(range(40))
    for t in range(trials):
        order = tuple(int(v) for v in rng.permutation(240))
        result = NominationResult(order, (0.0,) * 240, "x")
        hits[t] = precision_curve(result, truth, (40,))[0]
    expected = 40 * 40 / 240
    se = hits.std(ddof=1) / math.sqrt(trials)
    assert abs(hits.mean() - expected) < 3 * se


# ---------------------------------------------------------------------------
# full pipeline


def small_pair(rng, n=60):
    blocks = np.repeat(np.arange(3), n // 3)
    p = np.where(blocks[:, None] == blocks[None, :], 0.5, 0.1)
    iu = np.triu_indices(n, 1)
    a = np.zeros((n, n))
    a[iu] = (rng.random(len(iu[0])) < p[iu]).astype(float)
    return a + a.T, blocks


def test_pipeline_identical_inputs_rank_target_on_top():
    rng = np.random.default_rng(10)
    a, _ = small_pair(rng)
    x = rng.standard_normal((60, 2))
    seeds = [(int(s), int(s)) for s in rng.choice(60, size=20, replace=False)]
    seeded = {b for _, b in seeds}
    target = next(v for v in range(60) if v not in seeded)
    result = run_pipeline(
        a, x, a, x, seeds, [target], embed_dim=3, n_components=2, seed=11
    )
    assert rank_of(result, target) <= 3


def test_pipeline_is_deterministic():
    rng = np.random.default_rng(12)
    a1, _ = small_pair(rng)
    a2, _ = small_pair(rng)
    x = rng.standard_normal((60, 3))
    y = rng.standard_normal((60, 3))
    seeds = [(v, v) for v in range(0, 60, 6)]
    runs = [
        run_pipeline(a1, x, a2, y, seeds, [1, 2, 3], embed_dim=3,
                     n_components=2, seed=13)
        for _ in range(2)
    ]
    assert runs[0].order == runs[1].order
    assert runs[0].scores == runs[1].scores


def test_pipeline_provenance_strings():
    rng = np.random.default_rng(14)
    a1, _ = small_pair(rng)
    a2, _ = small_pair(rng)
    x = rng.standard_normal((60, 2))
    seeds = [(v, v) for v in range(0, 60, 10)]
    kinds = {
        (True, True): "graph+features",
        (True, False): "graph-only",
        (False, True): "features-only",
    }
    for (use_g, use_f), want in kinds.items():
        result = run_pipeline(
            a1, x, a2, x, seeds, [1], use_graph=use_g, use_features=use_f,
            embed_dim=2, n_components=1, seed=15,
        )
        assert result.provenance == want
    with pytest.raises(ValueError):
        run_pipeline(a1, x, a2, x, seeds, [1], use_graph=False, use_features=False)


def test_pipeline_errors_and_warnings():
    rng = np.random.default_rng(16)
    a1, _ = small_pair(rng)
    x = rng.standard_normal((60, 2))
    with pytest.raises(ValueError, match="vertex count"):
        run_pipeline(a1, x, np.zeros((10, 10)), x[:10], [(0, 0)], [1],
                     embed_dim=2, n_components=1)
    with pytest.raises(ValueError, match="features"):
        run_pipeline(a1, None, a1, None, [(0, 0), (1, 1)], [2], use_features=True,
                     embed_dim=2, n_components=1)
    with pytest.warns(UserWarning, match="under-determined"):
        run_pipeline(a1, x, a1, x, [(0, 0), (1, 1)], [2], embed_dim=4,
                     n_components=1, seed=17)


def test_features_only_finds_shifted_block():
    rng = np.random.default_rng(18)
    pair = sample_sim_pair(0.0, 2.0, rng)
    block1 = np.flatnonzero(pair.blocks == 0)
    seeds = [(int(s), int(s)) for s in block1[:10]]
    interest = [int(v) for v in block1[10:]]
    result = run_pipeline(
        pair.a1, pair.x, pair.a2, pair.y, seeds, interest,
        use_graph=False, n_components=5, seed=19,
    )
    r40 = precision_curve(result, set(interest), (40,))[0]
    assert r40 > 20  # chance level is 40*40/240 ~ 6.7


def test_strong_signal_regression():
    # one pinned end-to-end run: clear topology and feature signal
    rng = np.random.default_rng(42)
    pair = sample_sim_pair(0.5, 2.0, rng)
    block1 = np.flatnonzero(pair.blocks == 0)
    picked = np.sort(rng.choice(block1, size=10, replace=False))
    seeds = [(int(s), int(s)) for s in picked]
    interest = [int(v) for v in block1 if v not in set(picked)]
    result = run_pipeline(
        pair.a1, pair.x, pair.a2, pair.y, seeds, interest,
        embed_dim=5, n_components=5, seed=7,
    )
    r40 = precision_curve(result, set(interest), (40,))[0]
    assert r40 >= 30

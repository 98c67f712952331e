"""Tests for the exact ranking oracle: partitions, losses, consistency,
rank-prefix information, and the loss-vs-information verdicts."""

import itertools
import math

import numpy as np
import pytest

from vnom.featured_graph import (
    FeaturedGraph,
    Obfuscation,
    apply_permutation,
    invert_permutation,
)
from vnom.models import PairDistribution, SupportEntry, bundled_instance
from vnom.oracle import (
    FLOAT_TOL,
    MODES,
    build_bayes_scheme,
    check_consistency,
    class_representatives,
    exhaustive_min_level_k_loss,
    level_k_loss,
    oracle_report_rows,
    posterior_interest_mass,
    r_k_statistic,
    random_consistent_scheme,
    rank_entropy,
    rank_mutual_information,
    tie_break_orders,
    verify_information_theorem,
)


@pytest.fixture(scope="module")
def graph_signal():
    return bundled_instance("graph-signal")


@pytest.fixture(scope="module")
def empty_graph():
    return bundled_instance("empty-graph")


@pytest.fixture(scope="module")
def const_features():
    return bundled_instance("const-features")


@pytest.fixture(scope="module")
def quartered():
    return bundled_instance("two-block-quartered")


@pytest.fixture(scope="module")
def quartered_partition(quartered):
    return class_representatives(quartered, "featured")


# ---------------------------------------------------------------------------
# partitions and posterior scores


def test_class_masses_sum_to_one(graph_signal):
    for mode in MODES:
        part = class_representatives(graph_signal, mode)
        assert math.fsum(c.mass for c in part.classes) == pytest.approx(1.0, abs=1e-12)
        covered = {
            eid for cls in part.classes for mem in cls.members for eid in mem.entry_ids
        }
        assert covered == set(range(graph_signal.support_size()))


def test_scores_conserve_interest_mass(graph_signal, empty_graph, const_features):
    for dist in (graph_signal, empty_graph, const_features):
        for mode in MODES:
            part = class_representatives(dist, mode)
            for cls in part.classes:
                assert math.fsum(cls.scores) == pytest.approx(
                    len(dist.interest), abs=1e-9
                )


def test_uniform_shuffle_has_uniform_posterior(empty_graph):
    # distinct rows under a uniform shuffle: no label is more likely than
    # another to hide the interesting vertex
    part = class_representatives(empty_graph, "featured")
    for cls in part.classes:
        for pos in range(empty_graph.m):
            assert posterior_interest_mass(part, cls.index, pos) == pytest.approx(
                1.0 / 3.0, abs=1e-12
            )


def test_relabeled_copies_share_a_class():
    # two support entries whose right graphs are relabelings of each other
    # must land in one class; guards the canonical-key computation against
    # representation-order artifacts
    edges = {e: ("1",) for e in [(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (1, 3)]}
    g = FeaturedGraph(6, [("c",)] * 6, edges)
    sigma = (2, 4, 0, 5, 3, 1)
    left = FeaturedGraph(6, [(str(v),) for v in range(6)], {}, d2=1)
    dist = PairDistribution(
        "relabel-pair",
        [
            SupportEntry(left, g, 0.5),
            SupportEntry(left, apply_permutation(g, sigma), 0.5),
        ],
        interest=(0,),
        obfuscation=Obfuscation.natural(6),
    )
    part = class_representatives(dist, "featured")
    assert len(part.classes) == 1
    assert part.classes[0].size == 2
    for member in part.classes[0].members:
        assert len(member.alignments) == 1  # the graph is asymmetric


def test_identical_entries_merge_into_one_member():
    # the same right graph built with different dict insertion orders is the
    # same observation and must not split a class member
    left = FeaturedGraph(3, [("a",), ("b",), ("c",)], {}, d2=1)
    right_a = FeaturedGraph(3, [("u",)] * 3, {(0, 1): ("1",), (1, 2): ("2",)})
    right_b = FeaturedGraph(3, [("u",)] * 3, {(1, 2): ("2",), (0, 1): ("1",)})
    assert right_a == right_b
    dist = PairDistribution(
        "dict-order",
        [SupportEntry(left, right_a, 0.5), SupportEntry(left, right_b, 0.5)],
        interest=(0,),
        obfuscation=Obfuscation.natural(3),
    )
    part = class_representatives(dist, "featured")
    assert len(part.classes) == 1
    assert part.classes[0].size == 1
    assert part.classes[0].members[0].mass == pytest.approx(1.0)


# ---------------------------------------------------------------------------
# losses: greedy construction vs. brute force


@pytest.mark.parametrize("name", ["empty-graph", "graph-signal", "const-features"])
@pytest.mark.parametrize("mode", MODES)
def test_greedy_scheme_attains_exhaustive_minimum(name, mode):
    dist = bundled_instance(name)
    ks = tuple(range(1, dist.m))[:3]
    scheme = build_bayes_scheme(dist, mode)
    losses = level_k_loss(scheme, ks)
    floor = exhaustive_min_level_k_loss(dist, mode, ks)
    for i, k in enumerate(ks):
        assert abs(losses.losses[i] - floor[k]) <= FLOAT_TOL


def test_uniform_posterior_closed_form(empty_graph):
    # with a uniform 1/3 posterior every rank list is optimal and the loss
    # is 1 - 1/3 at every depth
    for mode in MODES:
        scheme = build_bayes_scheme(empty_graph, mode)
        report = level_k_loss(scheme, (1, 2))
        assert report.loss(1) == pytest.approx(2.0 / 3.0, abs=1e-12)
        assert report.loss(2) == pytest.approx(2.0 / 3.0, abs=1e-12)


def test_loss_decomposes_over_classes(graph_signal, quartered, quartered_partition):
    rng = np.random.default_rng(0)
    for dist, part in ((graph_signal, None), (quartered, quartered_partition)):
        for scheme in (
            build_bayes_scheme(dist, "featured", partition=part),
            random_consistent_scheme(dist, "featured", rng, partition=part),
        ):
            for k in (1, dist.m - 1):
                total = math.fsum(
                    cls.mass * r_k_statistic(scheme, cls.index, k)
                    for cls in scheme.partition.classes
                )
                assert level_k_loss(scheme, k).loss(k) == pytest.approx(
                    1.0 - total / k, abs=1e-9
                )


def test_random_schemes_never_beat_greedy_per_class(graph_signal):
    rng = np.random.default_rng(1)
    part = class_representatives(graph_signal, "featured")
    best = build_bayes_scheme(graph_signal, "featured", partition=part)
    for _ in range(10):
        other = random_consistent_scheme(graph_signal, "featured", rng, partition=part)
        for cls in part.classes:
            for k in range(1, graph_signal.m + 1):
                assert (
                    r_k_statistic(other, cls.index, k)
                    <= r_k_statistic(best, cls.index, k) + FLOAT_TOL
                )


def test_featured_loss_dominates_reduced_losses():
    # seeing strictly more can only help an exact posterior ranking
    for name in ("two-block-noisy", "graph-signal", "empty-graph"):
        dist = bundled_instance(name)
        rows = oracle_report_rows(dist, (1, 2))
        for row in rows:
            assert row["loss_featured"] <= row["loss_graph_only"] + FLOAT_TOL
            assert row["loss_featured"] <= row["loss_features_only"] + FLOAT_TOL


def test_loss_report_accessors(graph_signal):
    scheme = build_bayes_scheme(graph_signal, "featured")
    report = level_k_loss(scheme, (1, 2))
    assert report.loss(2) == report.losses[1]
    with pytest.raises(ValueError):
        level_k_loss(scheme, 0)
    with pytest.raises(ValueError):
        level_k_loss(scheme, graph_signal.m + 1)
    with pytest.raises(ValueError):
        r_k_statistic(scheme, 0, 99)


def test_unique_alignment_guard(quartered, quartered_partition, const_features):
    # the quartered support contains symmetric outcomes (e.g. the blank
    # graph), so requiring unique alignments must refuse it
    with pytest.raises(ValueError, match="alignment"):
        build_bayes_scheme(
            quartered,
            "featured",
            partition=quartered_partition,
            require_unique_alignment=True,
        )
    build_bayes_scheme(const_features, "featured", require_unique_alignment=True)


# ---------------------------------------------------------------------------
# scheme tables and the consistency criterion


def test_scheme_output_is_a_label_position_permutation(graph_signal):
    scheme = build_bayes_scheme(graph_signal, "featured")
    entry = graph_signal.entries[0]
    base = graph_signal.obfuscation.position_permutation()
    out = scheme(entry.left, apply_permutation(entry.right, base))
    assert sorted(out) == list(range(graph_signal.m))


def test_scheme_rejects_off_support_observation(graph_signal):
    scheme = build_bayes_scheme(graph_signal, "featured")
    stranger = FeaturedGraph(3, [("zz",)] * 3, {}, d2=1)
    with pytest.raises(ValueError, match="support"):
        scheme(graph_signal.entries[0].left, stranger)


@pytest.mark.parametrize("name", ["two-block-noisy", "empty-graph", "graph-signal"])
def test_bayes_schemes_are_consistent(name):
    dist = bundled_instance(name)
    for mode in MODES:
        scheme = build_bayes_scheme(dist, mode)
        report = check_consistency(scheme, dist, mode, rng=np.random.default_rng(2))
        assert report.ok, report.witness


def test_random_schemes_are_consistent(graph_signal):
    rng = np.random.default_rng(3)
    scheme = random_consistent_scheme(graph_signal, "featured", rng)
    assert check_consistency(scheme, graph_signal, "featured", rng=rng).ok


def test_constant_output_scheme_is_caught(empty_graph):
    # ignoring the obfuscation entirely breaks the criterion: relabeling the
    # observation must relabel the output, but a constant list cannot
    m = empty_graph.m

    def stubborn(left, observed):
        return tuple(range(m))

    report = check_consistency(
        stubborn, empty_graph, "featured", rng=np.random.default_rng(4)
    )
    assert not report.ok
    w = report.witness
    assert w is not None
    assert 0 <= w.entry_id < empty_graph.support_size()
    assert w.vertex in w.vertex_orbit


# ---------------------------------------------------------------------------
# rank-prefix entropy and mutual information


def test_entropy_bounds_and_monotonicity(quartered, quartered_partition):
    scheme = build_bayes_scheme(quartered, "featured", partition=quartered_partition)
    previous = 0.0
    for k in (1, 2, 3):
        h = rank_entropy(scheme, k)
        assert -1e-12 <= h
        # a longer prefix determines every shorter one
        assert h >= previous - 1e-9
        previous = h
    with pytest.raises(ValueError):
        rank_entropy(scheme, 0)


def test_mutual_information_matches_conditional_entropy(graph_signal):
    # cross-check I = H - H(prefix | target) computed by a separate route
    from vnom.oracle import _entry_prefixes, _target_key

    scheme = build_bayes_scheme(graph_signal, "featured")
    for k in (1, 2):
        for target in ("graphs", "vertex_features"):
            info = rank_mutual_information(scheme, k, target)
            by_target = {}
            for entry, weight, prefix in _entry_prefixes(scheme, k):
                t = _target_key(entry, target)
                by_target.setdefault(t, {}).setdefault(prefix, []).append(weight)
            cond = 0.0
            for prefixes in by_target.values():
                mass = math.fsum(w for ws in prefixes.values() for w in ws)
                for ws in prefixes.values():
                    p = math.fsum(ws)
                    cond -= p * math.log2(p / mass)
            assert info.mutual_information_bits == pytest.approx(
                info.entropy_bits - cond, abs=1e-9
            )
            assert -1e-9 <= info.mutual_information_bits <= info.entropy_bits + 1e-9


def test_mutual_information_unknown_target(graph_signal):
    scheme = build_bayes_scheme(graph_signal, "featured")
    with pytest.raises(ValueError):
        rank_mutual_information(scheme, 1, target="moons")


def test_graph_mode_is_blind_to_features(quartered):
    # replacing every feature symbol with a constant must not change the
    # graph-only ranking problem
    def strip(g):
        return FeaturedGraph(
            g.n, [("c",)] * g.n, dict(g.edge_feature_rows), d2=g.d2
        )

    stripped = PairDistribution(
        "stripped",
        [SupportEntry(strip(e.left), strip(e.right), e.prob) for e in quartered],
        interest=quartered.interest,
        obfuscation=quartered.obfuscation,
    )
    ks = (1, 2, 3)
    a = level_k_loss(build_bayes_scheme(quartered, "graph"), ks).losses
    b = level_k_loss(build_bayes_scheme(stripped, "graph"), ks).losses
    assert a == pytest.approx(b, abs=1e-12)


def test_tie_break_orders_cover_or_truncate():
    assert len(tie_break_orders(3)) == 6
    assert len(tie_break_orders(4)) == 24
    assert len(tie_break_orders(5)) == 24  # truncated scan
    assert len(set(tie_break_orders(5))) == 24


# ---------------------------------------------------------------------------
# the loss-vs-information verdicts


def test_const_features_equality_branch(const_features):
    rep = verify_information_theorem(const_features, 1, "features")
    assert rep.losses_equal
    assert rep.matching_tiebreak is not None
    assert rep.holds
    h, mi = rep.tiebreak_entropy_mi[rep.matching_tiebreak]
    assert h - mi <= FLOAT_TOL


def test_quartered_strict_branch(quartered):
    rep = verify_information_theorem(quartered, 1, "features")
    assert rep.exhaustive  # 4! orders all scanned
    assert not rep.losses_equal
    assert rep.loss_full < rep.loss_reduced
    assert rep.matching_tiebreak is None
    assert rep.holds
    assert all(h - mi > FLOAT_TOL for h, mi in rep.tiebreak_entropy_mi)


def test_empty_graph_topology_equality(empty_graph):
    rep = verify_information_theorem(empty_graph, 1, "topology")
    assert rep.losses_equal and rep.holds
    assert rep.loss_full == pytest.approx(2.0 / 3.0, abs=1e-12)


def test_graph_signal_topology_strict(graph_signal):
    rep = verify_information_theorem(graph_signal, 1, "topology")
    assert not rep.losses_equal
    assert rep.loss_full == pytest.approx(7.0 / 12.0, abs=1e-9)
    assert rep.loss_reduced == pytest.approx(2.0 / 3.0, abs=1e-9)
    assert rep.matching_tiebreak is None and rep.holds


def test_unknown_variant_rejected(graph_signal):
    with pytest.raises(ValueError):
        verify_information_theorem(graph_signal, 1, "sideways")


def test_report_rows_schema(graph_signal):
    rows = oracle_report_rows(graph_signal, (1, 2))
    assert [row["k"] for row in rows] == [1, 2]
    for row in rows:
        assert set(row) == {
            "k",
            "loss_featured",
            "loss_graph_only",
            "loss_features_only",
            "prefix_entropy_bits",
            "mi_graphs_bits",
            "mi_features_bits",
        }
        assert row["mi_graphs_bits"] <= row["prefix_entropy_bits"] + FLOAT_TOL

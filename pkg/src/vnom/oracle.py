"""Exact ranking oracles over enumerable pair distributions.

Given a :class:`~vnom.models.PairDistribution`, a ranking scheme maps each
observed pair (left graph, obfuscated right graph) to an ordering of the
obfuscated labels, hoping to place the labels of interesting vertices first.
A scheme cannot decode the obfuscation, so the best it can do is reason
per *class*: the set of support entries whose observable statistic agrees up
to a relabeling of the right graph.  Three statistics are supported, named
by what the scheme is allowed to look at:

``"featured"``
    the full right graph with vertex and edge features (classes collect
    feature-respecting isomorphs),
``"graph"``
    topology only (classes collect edge-set isomorphs, marginalising
    features away),
``"features"``
    vertex-feature rows only (classes collect row permutations,
    marginalising topology away).

Within a class, each member carries one or more alignments onto the class
representative.  Where the relevant asymmetry assumption holds the alignment
is unique and the machinery below reproduces the exact optimal construction;
where it fails, scores and losses average uniformly over the alignment
choices, which models a scheme that cannot favour one symmetric resolution
over another.

Ranks are reported over label *positions* ``0..m-1`` in the obfuscation's
fixed label order; that order is also the deterministic tie-break.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np

from .featured_graph import (
    FeaturedGraph,
    ObfuscatedGraph,
    all_f_isomorphisms,
    all_graph_isomorphisms,
    apply_permutation,
    feature_row_matchings,
    invert_permutation,
    orbit_partition,
    permuted_graph_key,
    random_permutation,
)

__all__ = [
    "MODES",
    "SchemeClass",
    "ClassMember",
    "Partition",
    "class_representatives",
    "posterior_interest_mass",
    "SchemeTable",
    "build_bayes_scheme",
    "tie_break_orders",
    "level_k_loss",
    "LossReport",
    "r_k_statistic",
    "exhaustive_min_level_k_loss",
    "random_consistent_scheme",
    "check_consistency",
    "ConsistencyReport",
    "ConsistencyWitness",
    "rank_entropy",
    "rank_mutual_information",
    "InfoReport",
    "verify_information_theorem",
    "TheoremReport",
    "oracle_report_rows",
    "FLOAT_TOL",
]

MODES = ("featured", "graph", "features")
FLOAT_TOL = 1e-9


class _Kahan:
    """Compensated running sum for long probability accumulations."""

    __slots__ = ("total", "_c")

    def __init__(self):
        self.total = 0.0
        self._c = 0.0

    def add(self, value):
        y = value - self._c
        t = self.total + y
        self._c = (t - self.total) - y
        self.total = t


# ---------------------------------------------------------------------------
# mode strategies


def _rows_permuted(rows, sigma):
    inv = invert_permutation(sigma)
    return tuple(rows[inv[i]] for i in range(len(rows)))


class _FeaturedOps:
    name = "featured"

    @staticmethod
    def left_key(graph):
        return graph.key()

    @staticmethod
    def right_stat(graph):
        return graph

    @staticmethod
    def right_key(stat):
        return stat.key()

    @staticmethod
    def permuted_right_key(stat, sigma):
        return permuted_graph_key(stat, sigma)

    @staticmethod
    def alignments(stat_a, stat_b):
        return sorted(all_f_isomorphisms(stat_a, stat_b))

    @staticmethod
    def observed_stat(observed_graph):
        return observed_graph

    @staticmethod
    def transported_stat(stat, sigma):
        return apply_permutation(stat, sigma)


class _GraphOps:
    name = "graph"

    @staticmethod
    def left_key(graph):
        return graph.plain_key()

    @staticmethod
    def right_stat(graph):
        return graph

    @staticmethod
    def right_key(stat):
        return stat.plain_key()

    @staticmethod
    def permuted_right_key(stat, sigma):
        # sorted tuple, not frozenset: canonical selection compares reprs,
        # and equal frozensets built in different orders can repr differently
        pairs = sorted(
            (sigma[u], sigma[v]) if sigma[u] < sigma[v] else (sigma[v], sigma[u])
            for (u, v) in stat.edge_feature_rows
        )
        return (stat.n, tuple(pairs))

    @staticmethod
    def alignments(stat_a, stat_b):
        return sorted(all_graph_isomorphisms(stat_a, stat_b))

    @staticmethod
    def observed_stat(observed_graph):
        return observed_graph

    @staticmethod
    def transported_stat(stat, sigma):
        return apply_permutation(stat, sigma)


class _FeatureRowOps:
    name = "features"

    @staticmethod
    def left_key(graph):
        return graph.vertex_features

    @staticmethod
    def right_stat(graph):
        return graph.vertex_features

    @staticmethod
    def right_key(stat):
        return stat

    @staticmethod
    def permuted_right_key(stat, sigma):
        return _rows_permuted(stat, sigma)

    @staticmethod
    def alignments(stat_a, stat_b):
        return feature_row_matchings(stat_a, stat_b)

    @staticmethod
    def observed_stat(observed_graph):
        return observed_graph.vertex_features

    @staticmethod
    def transported_stat(stat, sigma):
        return _rows_permuted(stat, sigma)


_MODE_OPS = {ops.name: ops for ops in (_FeaturedOps, _GraphOps, _FeatureRowOps)}


def _ops(mode):
    try:
        return _MODE_OPS[mode]
    except KeyError:
        raise ValueError(f"unknown mode {mode!r}; expected one of {MODES}") from None


# ---------------------------------------------------------------------------
# class partition


@dataclass
class ClassMember:
    """One observable-statistic value inside a class.

    ``alignments`` lists every relabeling carrying the class representative's
    statistic onto this member's statistic, in sorted order; the first one is
    the canonical resolution used when a single deterministic output is
    required.
    """

    right_key: object
    mass: float
    alignments: tuple
    entry_ids: tuple


@dataclass
class SchemeClass:
    """All support entries whose observation is the same up to relabeling."""

    index: int
    left_key: object
    canonical_key: object
    rep_entry_id: int
    rep_stat: object
    mass: float
    members: list
    scores: tuple

    @property
    def size(self):
        return len(self.members)


@dataclass
class Partition:
    """Support partition into observation classes for one mode."""

    mode: str
    dist: object
    classes: list
    entry_to_member: list  # entry index -> (class index, member index)

    def class_of_entry(self, entry_id):
        return self.entry_to_member[entry_id][0]


def class_representatives(dist, mode="featured"):
    """Partition the support into classes and compute per-label scores.

    For each class, ``scores[p]`` is the share of class mass whose alignment
    sends the vertex observed at label position ``p`` onto an interesting
    vertex — the exact quantity a rank list should sort by.  Scores always
    sum to the number of interesting vertices.
    """
    ops = _ops(mode)
    m = dist.m
    pi = dist.obfuscation.position_permutation()
    pi_inv = invert_permutation(pi)
    perms = list(itertools.permutations(range(m)))
    interest = frozenset(dist.interest)

    marginals = {}  # (left_key, right_key) -> [stat, entry_ids, kahan mass]
    for eid, entry in enumerate(dist.entries):
        stat = ops.right_stat(entry.right)
        key = (ops.left_key(entry.left), ops.right_key(stat))
        slot = marginals.get(key)
        if slot is None:
            slot = [stat, [], _Kahan()]
            marginals[key] = slot
        slot[1].append(eid)
        slot[2].add(entry.prob)

    groups = {}  # (left_key, canonical right key) -> list of marginal items
    for (lk, rk), (stat, eids, mass) in marginals.items():
        canonical = min(
            (ops.permuted_right_key(stat, sigma) for sigma in perms), key=repr
        )
        groups.setdefault((lk, canonical), []).append((rk, stat, eids, mass.total))

    classes = []
    entry_to_member = [None] * len(dist.entries)
    for (lk, canonical), items in groups.items():
        items = sorted(items, key=lambda item: repr(item[0]))
        rep_stat = items[0][1]
        members = []
        class_mass = math.fsum(mass for _, _, _, mass in items)
        score_acc = [_Kahan() for _ in range(m)]
        for rk, stat, eids, mass in items:
            aligns = tuple(ops.alignments(rep_stat, stat))
            if not aligns:
                raise AssertionError("class member lost its alignment")
            member = ClassMember(
                right_key=rk, mass=mass, alignments=aligns, entry_ids=tuple(eids)
            )
            members.append(member)
            share = mass / len(aligns)
            for sigma in aligns:
                for p in range(m):
                    if sigma[pi_inv[p]] in interest:
                        score_acc[p].add(share)
        ci = len(classes)
        classes.append(
            SchemeClass(
                index=ci,
                left_key=lk,
                canonical_key=canonical,
                rep_entry_id=min(members[0].entry_ids),
                rep_stat=rep_stat,
                mass=class_mass,
                members=members,
                scores=tuple(acc.total / class_mass for acc in score_acc),
            )
        )
        for mi, member in enumerate(members):
            for eid in member.entry_ids:
                entry_to_member[eid] = (ci, mi)

    return Partition(
        mode=mode, dist=dist, classes=classes, entry_to_member=entry_to_member
    )


def posterior_interest_mass(partition, class_index, position):
    """Share of class mass placing an interesting vertex at ``position``."""
    return partition.classes[class_index].scores[position]


# ---------------------------------------------------------------------------
# schemes


def tie_break_orders(m, limit=24):
    """Deterministic label-position priority orders to scan.

    All ``m!`` orders when that is at most ``limit``; otherwise the first
    ``limit`` orders in lexicographic sequence, and the scan is flagged
    incomplete by callers.
    """
    if math.factorial(m) <= limit:
        return [tuple(p) for p in itertools.permutations(range(m))]
    return [tuple(p) for p in itertools.islice(itertools.permutations(range(m)), limit)]


def _greedy_list(scores, tie_break):
    tie_rank = invert_permutation(tie_break)
    return tuple(sorted(range(len(scores)), key=lambda p: (-scores[p], tie_rank[p])))


@dataclass
class SchemeTable:
    """A ranking scheme stored as one rank list per observation class.

    Calling the table on an observed pair looks up the class of the
    observation and transports the stored list along the canonical alignment,
    so relabeled observations receive consistently relabeled outputs.
    """

    mode: str
    partition: Partition
    rep_lists: tuple
    tie_break: tuple
    _lookup: dict = field(default_factory=dict, repr=False)
    _transported: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        if not self._lookup:
            for cls in self.partition.classes:
                self._lookup[(cls.left_key, cls.canonical_key)] = cls.index

    @property
    def dist(self):
        return self.partition.dist

    def rank_list(self, class_index):
        return self.rep_lists[class_index]

    def __call__(self, left, observed):
        ops = _ops(self.mode)
        if isinstance(observed, ObfuscatedGraph):
            observed = observed.graph
        stat = ops.observed_stat(observed)
        perms = itertools.permutations(range(self.dist.m))
        canonical = min(
            (ops.permuted_right_key(stat, sigma) for sigma in perms), key=repr
        )
        key = (ops.left_key(left), canonical)
        ci = self._lookup.get(key)
        if ci is None:
            raise ValueError("observation does not belong to any support class")
        rep_obs = self._transported.get(ci)
        if rep_obs is None:
            pi = self.dist.obfuscation.position_permutation()
            rep_obs = ops.transported_stat(self.partition.classes[ci].rep_stat, pi)
            self._transported[ci] = rep_obs
        lifts = ops.alignments(rep_obs, stat)
        if not lifts:
            raise ValueError("observation matches a class but admits no alignment")
        sigma_h = lifts[0]
        return tuple(sigma_h[p] for p in self.rep_lists[ci])


def build_bayes_scheme(dist, mode="featured", tie_break=None, partition=None,
                       require_unique_alignment=False):
    """Greedy per-class optimal scheme: rank positions by interest score.

    With ``require_unique_alignment`` the construction refuses supports where
    some class member admits several alignments (i.e. the asymmetry
    assumption backing the mode's exact optimality fails); by default those
    members contribute uniformly averaged scores instead.
    """
    if partition is None:
        partition = class_representatives(dist, mode)
    if require_unique_alignment:
        for cls in partition.classes:
            for member in cls.members:
                if len(member.alignments) != 1:
                    raise ValueError(
                        f"class {cls.index} member admits "
                        f"{len(member.alignments)} alignments; "
                        "support violates the mode's asymmetry assumption"
                    )
    if tie_break is None:
        tie_break = tuple(range(dist.m))
    rep_lists = tuple(_greedy_list(cls.scores, tie_break) for cls in partition.classes)
    return SchemeTable(
        mode=mode, partition=partition, rep_lists=rep_lists, tie_break=tuple(tie_break)
    )


def random_consistent_scheme(dist, mode, rng, partition=None):
    """A scheme choosing an arbitrary (uniform) rank list per class."""
    if partition is None:
        partition = class_representatives(dist, mode)
    rep_lists = tuple(
        random_permutation(dist.m, rng) for _ in partition.classes
    )
    return SchemeTable(
        mode=mode,
        partition=partition,
        rep_lists=rep_lists,
        tie_break=tuple(range(dist.m)),
    )


# ---------------------------------------------------------------------------
# loss and per-class statistics


@dataclass
class LossReport:
    mode: str
    dist_name: str
    ks: tuple
    losses: tuple

    def loss(self, k):
        return self.losses[self.ks.index(k)]


def level_k_loss(scheme, ks):
    """Exact expected miss share of the top-``k`` ranks, for each ``k``.

    For every support entry the realised output list is materialised through
    the member's alignment (uniformly averaged when several alignments
    exist), the ranks of the interesting labels read off, and the hit count
    accumulated.  The loss at ``k`` is ``1 - hits/k``.
    """
    dist = scheme.dist
    single = isinstance(ks, int)
    ks = (ks,) if single else tuple(ks)
    for k in ks:
        if not 1 <= k <= dist.m:
            raise ValueError(f"k={k} out of range 1..{dist.m}")
    pi = dist.obfuscation.position_permutation()
    pi_inv = invert_permutation(pi)
    partition = scheme.partition

    # rank_of_pos[ci][p] = rank of label position p in the class's rep list
    rank_of_pos = [invert_permutation(lst) for lst in scheme.rep_lists]

    hit_mass = {k: _Kahan() for k in ks}
    for eid, entry in enumerate(dist.entries):
        ci, mi = partition.entry_to_member[eid]
        member = partition.classes[ci].members[mi]
        ranks = rank_of_pos[ci]
        weight = entry.prob / len(member.alignments)
        for sigma in member.alignments:
            sigma_inv = invert_permutation(sigma)
            interest_ranks = [ranks[pi[sigma_inv[v]]] for v in dist.interest]
            for k in ks:
                hits = sum(1 for r in interest_ranks if r < k)
                if hits:
                    hit_mass[k].add(weight * hits)
    losses = tuple(1.0 - hit_mass[k].total / k for k in ks)
    return LossReport(
        mode=scheme.mode, dist_name=dist.name, ks=ks, losses=losses
    )


def r_k_statistic(scheme, class_index, k):
    """Expected number of interesting labels in the class's top ``k`` ranks."""
    dist = scheme.dist
    if not 1 <= k <= dist.m:
        raise ValueError(f"k={k} out of range 1..{dist.m}")
    cls = scheme.partition.classes[class_index]
    lst = scheme.rep_lists[class_index]
    return math.fsum(cls.scores[p] for p in lst[:k])


def exhaustive_min_level_k_loss(dist, mode, ks, partition=None):
    """Minimum loss over every choice of per-class rank list, by brute force.

    The loss of a per-class scheme separates across classes, so minimising it
    means maximising each class's expected top-``k`` interest count
    independently; this scans all ``m!`` rank lists per class and keeps the
    best.  Intended as an independent check of the greedy construction at
    small ``m``.
    """
    ks = tuple(ks)
    if partition is None:
        partition = class_representatives(dist, mode)
    m = dist.m
    orders = list(itertools.permutations(range(m)))
    best = {k: _Kahan() for k in ks}
    for cls in partition.classes:
        for k in ks:
            top = max(
                math.fsum(cls.scores[p] for p in order[:k]) for order in orders
            )
            best[k].add(cls.mass * top)
    return {k: 1.0 - best[k].total / k for k in ks}


# ---------------------------------------------------------------------------
# consistency criterion


@dataclass
class ConsistencyWitness:
    """Where and how the orbit criterion failed.

    ``vertex`` is the right-graph vertex whose orbit rank set disagrees with
    the positional orbit alignment; ``mismatched_orbit`` is the orbit sitting
    at the first misaligned rank (None when the rank sequences align and the
    failure is a rank-set disagreement instead).
    """

    entry_id: int
    pair_id: int
    vertex: int
    vertex_orbit: frozenset
    first_mismatch_rank: int | None
    mismatched_orbit: frozenset | None


@dataclass
class ConsistencyReport:
    ok: bool
    witness: ConsistencyWitness | None
    entries_tested: int
    pairs_tested: int


def check_consistency(scheme, dist, mode="featured", pairs=None, n_random_pairs=10,
                      max_entries=64, rng=None):
    """Test a scheme against the orbit-level consistency criterion.

    For each tested support entry and each pair of obfuscations (given as
    label-position permutations), the criterion requires, for every vertex
    ``u``: the orbit of ``u`` occupies the same rank set under both
    obfuscations if and only if the two output lists run through the same
    orbit at every rank.  ``scheme`` is any callable ``(left, observed) ->
    rank list``; the default obfuscation pair set is the distribution's own
    pair plus ``n_random_pairs`` random ones.
    """
    if rng is None:
        rng = np.random.default_rng(0)
    m = dist.m
    if pairs is None:
        base = dist.obfuscation.position_permutation()
        pairs = [(base, base)]
        for _ in range(n_random_pairs):
            pairs.append((random_permutation(m, rng), random_permutation(m, rng)))

    entry_ids = list(range(len(dist.entries)))
    if len(entry_ids) > max_entries:
        entry_ids = sorted(
            int(i) for i in rng.choice(len(entry_ids), size=max_entries, replace=False)
        )

    orbit_cache = {}
    for eid in entry_ids:
        entry = dist.entries[eid]
        right = entry.right
        orbits = orbit_cache.get(right.key())
        if orbits is None:
            parts = orbit_partition(right, mode)
            orbits = [None] * m
            for part in parts:
                for v in part:
                    orbits[v] = part
            orbit_cache[right.key()] = orbits
        for pid, (pa, pb) in enumerate(pairs):
            obs_a = apply_permutation(right, pa)
            obs_b = apply_permutation(right, pb)
            list_a = scheme(entry.left, obs_a)
            list_b = scheme(entry.left, obs_b)
            rank_a = invert_permutation(list_a)
            rank_b = invert_permutation(list_b)
            pa_inv = invert_permutation(pa)
            pb_inv = invert_permutation(pb)

            first_mismatch = None
            for rank in range(m):
                orb_a = orbits[pa_inv[list_a[rank]]]
                orb_b = orbits[pb_inv[list_b[rank]]]
                if orb_a != orb_b:
                    first_mismatch = (rank, orb_a)
                    break
            aligned = first_mismatch is None

            for u in range(m):
                part = orbits[u]
                set_a = {rank_a[pa[w]] for w in part}
                set_b = {rank_b[pb[w]] for w in part}
                if (set_a == set_b) != aligned:
                    return ConsistencyReport(
                        ok=False,
                        witness=ConsistencyWitness(
                            entry_id=eid,
                            pair_id=pid,
                            vertex=u,
                            vertex_orbit=part,
                            first_mismatch_rank=(
                                None if aligned else first_mismatch[0]
                            ),
                            mismatched_orbit=(
                                None if aligned else first_mismatch[1]
                            ),
                        ),
                        entries_tested=len(entry_ids),
                        pairs_tested=len(pairs),
                    )
    return ConsistencyReport(
        ok=True, witness=None, entries_tested=len(entry_ids), pairs_tested=len(pairs)
    )


# ---------------------------------------------------------------------------
# rank-prefix information


def _entry_prefixes(scheme, k):
    """Realised top-``k`` outputs per entry with their probability weights.

    When a class member admits several alignments the scheme's output on
    that entry is genuinely ambiguous; the realisation resolves uniformly at
    random among them, matching the loss semantics, so the entry's mass is
    split evenly over the alignment images.
    """
    dist = scheme.dist
    pi = dist.obfuscation.position_permutation()
    pi_inv = invert_permutation(pi)
    partition = scheme.partition
    for eid, entry in enumerate(dist.entries):
        ci, mi = partition.entry_to_member[eid]
        member = partition.classes[ci].members[mi]
        weight = entry.prob / len(member.alignments)
        for sigma in member.alignments:
            out = tuple(
                pi[sigma[pi_inv[p]]] for p in scheme.rep_lists[ci][:k]
            )
            yield entry, weight, out


def rank_entropy(scheme, k):
    """Entropy (bits) of the scheme's realised top-``k`` rank prefix."""
    dist = scheme.dist
    if not 1 <= k <= dist.m:
        raise ValueError(f"k={k} out of range 1..{dist.m}")
    acc = {}
    for _entry, weight, prefix in _entry_prefixes(scheme, k):
        acc.setdefault(prefix, _Kahan()).add(weight)
    return -math.fsum(
        s.total * math.log2(s.total) for s in acc.values() if s.total > 0.0
    )


_MI_TARGETS = ("graphs", "vertex_features")


def _target_key(entry, target):
    if target == "graphs":
        return (entry.left.plain_key(), entry.right.plain_key())
    if target == "vertex_features":
        return (entry.left.vertex_features, entry.right.vertex_features)
    raise ValueError(f"unknown target {target!r}; expected one of {_MI_TARGETS}")


@dataclass
class InfoReport:
    k: int
    target: str
    entropy_bits: float
    mutual_information_bits: float

    @property
    def gap_bits(self):
        return self.entropy_bits - self.mutual_information_bits


def rank_mutual_information(scheme, k, target="graphs"):
    """Mutual information (bits) between the top-``k`` prefix and a latent.

    ``target`` selects the latent: the unobfuscated plain graph pair, or the
    pair of vertex-feature tables.  Computed by the exact double sum over the
    joint support.
    """
    dist = scheme.dist
    if not 1 <= k <= dist.m:
        raise ValueError(f"k={k} out of range 1..{dist.m}")
    joint = {}
    p_prefix = {}
    p_target = {}
    for entry, weight, prefix in _entry_prefixes(scheme, k):
        t = _target_key(entry, target)
        joint.setdefault((prefix, t), _Kahan()).add(weight)
        p_prefix.setdefault(prefix, _Kahan()).add(weight)
        p_target.setdefault(t, _Kahan()).add(weight)
    mi = math.fsum(
        s.total
        * math.log2(s.total / (p_prefix[prefix].total * p_target[t].total))
        for (prefix, t), s in joint.items()
        if s.total > 0.0
    )
    entropy = -math.fsum(
        s.total * math.log2(s.total) for s in p_prefix.values() if s.total > 0.0
    )
    return InfoReport(
        k=k, target=target, entropy_bits=entropy, mutual_information_bits=mi
    )


# ---------------------------------------------------------------------------
# the information-equality verdict


@dataclass
class TheoremReport:
    """Outcome of the loss-equality vs. information-equality comparison.

    ``holds`` records whether the biconditional held: the full scheme's loss
    equals the reduced scheme's loss exactly when some tie-break order makes
    the rank prefix carry no information beyond the reduced statistic
    (entropy equals mutual information).  ``exhaustive`` marks whether every
    tie-break order was scanned.
    """

    variant: str
    k: int
    loss_full: float
    loss_reduced: float
    losses_equal: bool
    tiebreak_entropy_mi: tuple
    matching_tiebreak: int | None
    exhaustive: bool
    holds: bool
    tol: float


_VARIANTS = {
    "features": ("graph", "graphs"),
    "topology": ("features", "vertex_features"),
}


def verify_information_theorem(dist, k, variant="features", tol=FLOAT_TOL):
    """Compare full-information loss against a reduced scheme's loss.

    ``variant="features"`` asks whether vertex/edge features help beyond
    topology: the reduced scheme sees only the graphs, and the information
    side measures whether some tie-break makes the full scheme's rank prefix
    a function of the plain graph pair.  ``variant="topology"`` is the
    mirror question for topology beyond vertex features.
    """
    try:
        reduced_mode, target = _VARIANTS[variant]
    except KeyError:
        raise ValueError(
            f"unknown variant {variant!r}; expected one of {sorted(_VARIANTS)}"
        ) from None

    partition_full = class_representatives(dist, "featured")
    full = build_bayes_scheme(dist, "featured", partition=partition_full)
    reduced = build_bayes_scheme(dist, reduced_mode)
    loss_full = level_k_loss(full, k).losses[0]
    loss_reduced = level_k_loss(reduced, k).losses[0]
    losses_equal = abs(loss_full - loss_reduced) <= tol

    orders = tie_break_orders(dist.m)
    exhaustive = len(orders) == math.factorial(dist.m)
    pairs = []
    matching = None
    for i, order in enumerate(orders):
        scheme = build_bayes_scheme(
            dist, "featured", tie_break=order, partition=partition_full
        )
        info = rank_mutual_information(scheme, k, target)
        pairs.append((info.entropy_bits, info.mutual_information_bits))
        if matching is None and info.gap_bits <= tol:
            matching = i
    exists = matching is not None
    return TheoremReport(
        variant=variant,
        k=k,
        loss_full=loss_full,
        loss_reduced=loss_reduced,
        losses_equal=losses_equal,
        tiebreak_entropy_mi=tuple(pairs),
        matching_tiebreak=matching,
        exhaustive=exhaustive,
        holds=losses_equal == exists,
        tol=tol,
    )


def oracle_report_rows(dist, ks):
    """Per-``k`` summary rows: losses of all three modes plus prefix information."""
    schemes = {mode: build_bayes_scheme(dist, mode) for mode in MODES}
    reports = {mode: level_k_loss(schemes[mode], ks) for mode in MODES}
    rows = []
    for i, k in enumerate(ks):
        info_g = rank_mutual_information(schemes["featured"], k, "graphs")
        info_f = rank_mutual_information(schemes["featured"], k, "vertex_features")
        rows.append(
            {
                "k": k,
                "loss_featured": reports["featured"].losses[i],
                "loss_graph_only": reports["graph"].losses[i],
                "loss_features_only": reports["features"].losses[i],
                "prefix_entropy_bits": info_g.entropy_bits,
                "mi_graphs_bits": info_g.mutual_information_bits,
                "mi_features_bits": info_f.mutual_information_bits,
            }
        )
    return rows

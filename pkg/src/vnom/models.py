"""Generative models: SBM pair samplers and enumerable pair distributions.

Two scales live here.  The sampling half produces numpy adjacency matrices
and Gaussian vertex features for the simulation harness.  The enumeration
half builds exact finite-support distributions over pairs of small
:class:`~vnom.featured_graph.FeaturedGraph` objects, which the ranking
oracle consumes.  Support entries are pairs ``(left, right)``: the left
graph keeps its labels, the right one is observed only through an
obfuscation.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np

from .featured_graph import (
    FeaturedGraph,
    Obfuscation,
    f_automorphisms,
    graph_automorphisms,
    vertex_pairs,
)

__all__ = [
    "SBMParams",
    "sample_sbm",
    "SimPair",
    "sim_block_probs",
    "sample_sim_pair",
    "FeaturedGraphFactor",
    "PairSpec",
    "SupportEntry",
    "PairDistribution",
    "AsymmetryViolation",
    "enumerate_distribution",
    "is_featured_asymmetric",
    "is_graph_asymmetric",
    "has_distinct_feature_rows",
    "quartered_two_block_instance",
    "noisy_two_block_instance",
    "constant_feature_instance",
    "empty_graph_instance",
    "graph_signal_instance",
    "bundled_instance",
    "BUNDLED_INSTANCE_NAMES",
    "sample_synthetic_connectome_pair",
]

PROB_TOL = 1e-9


# ---------------------------------------------------------------------------
# sampling scale


@dataclass(frozen=True)
class SBMParams:
    """Block labels (one per vertex, 0-based) and a symmetric block-probability matrix."""

    blocks: tuple
    probs: np.ndarray

    def __post_init__(self):
        probs = np.asarray(self.probs, dtype=float)
        object.__setattr__(self, "probs", probs)
        k = probs.shape[0]
        if probs.shape != (k, k):
            raise ValueError("probs must be square")
        if not np.allclose(probs, probs.T, atol=1e-12):
            raise ValueError("probs must be symmetric")
        if probs.min() < 0.0 or probs.max() > 1.0:
            raise ValueError("probs must lie in [0, 1]")
        if any(not 0 <= b < k for b in self.blocks):
            raise ValueError("block labels out of range")

    @property
    def n(self):
        return len(self.blocks)


def sample_sbm(params, rng):
    """One symmetric hollow 0/1 adjacency matrix with independent edges."""
    n = params.n
    blocks = np.asarray(params.blocks)
    p = params.probs[np.ix_(blocks, blocks)]
    iu = np.triu_indices(n, 1)
    draws = (rng.random(len(iu[0])) < p[iu]).astype(float)
    a = np.zeros((n, n))
    a[iu] = draws
    return a + a.T


def sim_block_probs(eps):
    """The two 5-block probability matrices used by the simulation pair.

    The first is ``diag(eps + 0.05, eps, eps, eps, eps) + 0.3``; the second
    is a 0.8/0.2 mixture of the first with the all-ones matrix.  ``eps`` must
    stay at or below 0.65 so every entry is a probability.
    """
    if not 0.0 <= eps <= 0.65:
        raise ValueError("eps must lie in [0, 0.65]")
    lam1 = np.full((5, 5), 0.3) + np.diag([eps + 0.05, eps, eps, eps, eps])
    lam2 = 0.8 * lam1 + 0.2 * np.ones((5, 5))
    return lam1, lam2


@dataclass
class SimPair:
    """A sampled graph pair with Gaussian vertex features and block labels."""

    a1: np.ndarray
    x: np.ndarray
    a2: np.ndarray
    y: np.ndarray
    blocks: np.ndarray


def sample_sim_pair(eps, delta, rng, n_total=250):
    """Independent 5-block SBM pair with block-1 features shifted by ``delta``.

    Vertices are split into five contiguous blocks of ``n_total / 5``; the
    first block is the interesting one.  Features are 5-dimensional standard
    normals, mean ``delta`` in every coordinate on block 1 and mean zero
    elsewhere, drawn independently for the two graphs.
    """
    if n_total % 5 != 0:
        raise ValueError("n_total must be divisible by 5")
    size = n_total // 5
    blocks = np.repeat(np.arange(5), size)
    lam1, lam2 = sim_block_probs(eps)
    a1 = sample_sbm(SBMParams(tuple(blocks), lam1), rng)
    a2 = sample_sbm(SBMParams(tuple(blocks), lam2), rng)
    dim = 5
    shift = np.where(blocks == 0, float(delta), 0.0)[:, None]
    x = rng.standard_normal((n_total, dim)) + shift
    y = rng.standard_normal((n_total, dim)) + shift
    return SimPair(a1=a1, x=x, a2=a2, y=y, blocks=blocks)


# ---------------------------------------------------------------------------
# enumeration scale


class AsymmetryViolation(ValueError):
    """A support entry breaks a requested asymmetry assumption."""


@dataclass(frozen=True)
class FeaturedGraphFactor:
    """Product-form generator of one featured graph.

    ``edge_probs`` maps vertex pairs to presence probabilities (missing pairs
    never occur).  ``vertex_features`` holds one spec per vertex: a plain
    tuple for a deterministic row, or a list of ``(row, prob)`` choices.
    ``edge_features`` optionally maps pairs to the same kind of spec for the
    row carried by the edge when present; pairs without a spec carry
    ``("1",) * d2``.  ``joint_vertex_features`` replaces the per-vertex specs
    with an explicit joint table ``[(rows, prob), ...]`` when the feature
    coordinates need to be dependent (e.g. a random permutation of rows).
    ``graph_patterns`` likewise replaces the independent edge coins with an
    explicit table ``[(edge pairs, prob), ...]`` for dependent edge sets
    (e.g. a graph and a relabelled copy of it).
    """

    n: int
    edge_probs: dict = field(default_factory=dict)
    vertex_features: tuple = ()
    edge_features: dict | None = None
    joint_vertex_features: tuple | None = None
    graph_patterns: tuple | None = None
    d2: int = 1

    def __post_init__(self):
        for (u, v), p in self.edge_probs.items():
            if not (0 <= u < v < self.n):
                raise ValueError(f"bad pair {(u, v)!r}")
            if not 0.0 <= p <= 1.0:
                raise ValueError(f"edge probability {p} out of [0, 1]")
        if self.graph_patterns is not None and self.edge_probs:
            raise ValueError("graph_patterns and edge_probs are exclusive")
        if self.joint_vertex_features is None and len(self.vertex_features) != self.n:
            raise ValueError("need one vertex-feature spec per vertex")


def _expand_choice(spec):
    """Normalise a deterministic-or-categorical spec to [(value, prob)]."""
    if isinstance(spec, tuple):
        return [(spec, 1.0)]
    choices = [(tuple(value), float(p)) for value, p in spec]
    total = math.fsum(p for _, p in choices)
    if abs(total - 1.0) > PROB_TOL:
        raise ValueError(f"categorical probabilities sum to {total}, not 1")
    return [(value, p) for value, p in choices if p > 0.0]


def _edge_patterns(factor):
    """Edge-set outcomes of a factor as [(pairs, prob), ...]."""
    if factor.graph_patterns is not None:
        patterns = [
            (tuple(sorted(tuple(sorted(e)) for e in edges)), float(p))
            for edges, p in factor.graph_patterns
        ]
        total = math.fsum(p for _, p in patterns)
        if abs(total - 1.0) > PROB_TOL:
            raise ValueError(f"graph-pattern probabilities sum to {total}, not 1")
        for edges, _ in patterns:
            for u, v in edges:
                if not (0 <= u < v < factor.n):
                    raise ValueError(f"bad pair {(u, v)!r} in graph pattern")
        return [(edges, p) for edges, p in patterns if p > 0.0]
    sure = [pair for pair, p in factor.edge_probs.items() if p >= 1.0]
    coin = [(pair, p) for pair, p in factor.edge_probs.items() if 0.0 < p < 1.0]
    patterns = []
    for pattern in itertools.product((False, True), repeat=len(coin)):
        prob = 1.0
        edges = list(sure)
        for (pair, p), present in zip(coin, pattern):
            if present:
                edges.append(pair)
                prob *= p
            else:
                prob *= 1.0 - p
        patterns.append((tuple(edges), prob))
    return patterns


def _enumerate_factor(factor, max_support):
    """All (FeaturedGraph, probability) outcomes of a product-form factor."""
    n = factor.n

    if factor.joint_vertex_features is not None:
        feature_tables = [
            (tuple(tuple(r) for r in rows), float(p))
            for rows, p in factor.joint_vertex_features
        ]
        total = math.fsum(p for _, p in feature_tables)
        if abs(total - 1.0) > PROB_TOL:
            raise ValueError(f"joint feature probabilities sum to {total}, not 1")
        feature_tables = [(rows, p) for rows, p in feature_tables if p > 0.0]
    else:
        per_vertex = [_expand_choice(spec) for spec in factor.vertex_features]
        feature_tables = []
        for combo in itertools.product(*per_vertex):
            rows = tuple(value for value, _ in combo)
            prob = math.prod(p for _, p in combo)
            feature_tables.append((rows, prob))

    edge_specs = factor.edge_features or {}
    default_row = ("1",) * factor.d2

    outcomes = []
    for edges, edge_prob in _edge_patterns(factor):
        per_edge = [
            _expand_choice(edge_specs.get(pair, default_row)) for pair in edges
        ]
        for rows_combo in itertools.product(*per_edge):
            row_prob = math.prod(p for _, p in rows_combo)
            row_map = {pair: value for pair, (value, _) in zip(edges, rows_combo)}
            for vf_rows, vf_prob in feature_tables:
                prob = edge_prob * row_prob * vf_prob
                if prob <= 0.0:
                    continue
                graph = FeaturedGraph(n, vf_rows, row_map, d2=factor.d2)
                outcomes.append((graph, prob))
                if len(outcomes) > max_support:
                    raise ValueError(
                        f"factor support exceeds cap of {max_support} outcomes"
                    )
    return outcomes


@dataclass(frozen=True)
class SupportEntry:
    left: FeaturedGraph
    right: FeaturedGraph
    prob: float


ASYMMETRY_KINDS = ("featured", "graph", "features")


def is_featured_asymmetric(graph):
    """True when the only feature-respecting automorphism is the identity."""
    return len(f_automorphisms(graph)) == 1


def is_graph_asymmetric(graph):
    """True when the edge set alone admits only the identity automorphism."""
    return len(graph_automorphisms(graph)) == 1


def has_distinct_feature_rows(graph):
    """True when no two vertices share a feature row."""
    return len(set(graph.vertex_features)) == graph.n


_ASYMMETRY_CHECKS = {
    "featured": is_featured_asymmetric,
    "graph": is_graph_asymmetric,
    "features": has_distinct_feature_rows,
}


@dataclass(frozen=True)
class PairSpec:
    """Declarative description of an enumerable pair distribution."""

    left: FeaturedGraphFactor
    right: FeaturedGraphFactor
    interest: tuple
    core_size: int | None = None
    obfuscation: Obfuscation | None = None
    asymmetry: frozenset = frozenset()
    on_violation: str = "drop"
    max_support: int = 1_000_000
    name: str = "pair"


class PairDistribution:
    """Finite-support distribution over featured graph pairs.

    ``interest`` indexes the distinguished vertices (shared core labels).
    ``obfuscation`` is the fixed relabeling under which the right graph is
    observed; its label order is the deterministic tie-break order used by
    every ranking built downstream.
    """

    def __init__(self, name, entries, interest, obfuscation, core_size=None,
                 asymmetry=frozenset(), dropped_mass=0.0):
        entries = [
            e if isinstance(e, SupportEntry) else SupportEntry(*e) for e in entries
        ]
        if not entries:
            raise ValueError("empty support")
        n = entries[0].left.n
        m = entries[0].right.n
        for e in entries:
            if e.left.n != n or e.right.n != m:
                raise ValueError("inconsistent vertex counts across support")
            if e.prob <= 0.0:
                raise ValueError("support probabilities must be positive")
        total = math.fsum(e.prob for e in entries)
        if abs(total - 1.0) > PROB_TOL:
            raise ValueError(f"support probabilities sum to {total}, not 1")
        if obfuscation.m != m:
            raise ValueError("obfuscation size does not match right graphs")
        core = min(n, m) if core_size is None else core_size
        if not 0 <= core <= min(n, m):
            raise ValueError("core size out of range")
        interest = tuple(interest)
        if len(set(interest)) != len(interest):
            raise ValueError("interest vertices must be distinct")
        if any(not 0 <= v < core for v in interest):
            raise ValueError("interest vertices must be core vertices")
        self.name = name
        self.entries = entries
        self.interest = interest
        self.obfuscation = obfuscation
        self.core_size = core
        self.asymmetry = frozenset(asymmetry)
        self.dropped_mass = float(dropped_mass)

    @property
    def n(self):
        return self.entries[0].left.n

    @property
    def m(self):
        return self.entries[0].right.n

    def support_size(self):
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    def __repr__(self):
        return (
            f"PairDistribution({self.name!r}, support={len(self.entries)}, "
            f"n={self.n}, m={self.m}, interest={self.interest})"
        )


def enumerate_distribution(spec):
    """Materialise the full support of a :class:`PairSpec`.

    Entries violating a requested asymmetry kind are dropped and the
    remaining mass renormalised (``on_violation="drop"``), or raise
    :class:`AsymmetryViolation` (``on_violation="reject"``).
    """
    for kind in spec.asymmetry:
        if kind not in ASYMMETRY_KINDS:
            raise ValueError(f"unknown asymmetry kind {kind!r}")
    if spec.on_violation not in ("drop", "reject"):
        raise ValueError("on_violation must be 'drop' or 'reject'")

    left = _enumerate_factor(spec.left, spec.max_support)
    right = _enumerate_factor(spec.right, spec.max_support)
    if len(left) * len(right) > spec.max_support:
        raise ValueError(
            f"pair support {len(left)}x{len(right)} exceeds cap {spec.max_support}"
        )

    checks = [_ASYMMETRY_CHECKS[kind] for kind in sorted(spec.asymmetry)]

    def admissible(graph, cache={}):
        got = cache.get(id(graph))
        if got is None:
            got = all(check(graph) for check in checks)
            cache[id(graph)] = got
        return got

    kept = []
    dropped = 0.0
    for gl, pl in left:
        left_ok = admissible(gl)
        for gr, pr in right:
            prob = pl * pr
            if left_ok and admissible(gr):
                kept.append(SupportEntry(gl, gr, prob))
            elif spec.on_violation == "reject":
                raise AsymmetryViolation(
                    f"support entry violates asymmetry {sorted(spec.asymmetry)}"
                )
            else:
                dropped += prob
    if not kept:
        raise ValueError("all support mass violates the requested asymmetry")
    keep_mass = math.fsum(e.prob for e in kept)
    entries = [SupportEntry(e.left, e.right, e.prob / keep_mass) for e in kept]

    obf = spec.obfuscation or Obfuscation.natural(spec.right.n)
    return PairDistribution(
        name=spec.name,
        entries=entries,
        interest=spec.interest,
        obfuscation=obf,
        core_size=spec.core_size,
        asymmetry=spec.asymmetry,
        dropped_mass=dropped,
    )


# ---------------------------------------------------------------------------
# bundled small instances
#
# Fixed scrambled obfuscations keep the deterministic tie-break order from
# accidentally aligning with the interesting vertices.

_SCRAMBLE = {3: (1, 2, 0), 4: (2, 0, 3, 1), 6: (2, 4, 0, 5, 3, 1)}


def _bundle_obfuscation(m):
    return Obfuscation.from_positions(_SCRAMBLE[m], prefix="q")


def quartered_two_block_instance(block_size=2, p_block1=0.4, p_cross=0.1,
                                 p_block2=0.7):
    """Two equal blocks with a quartered low/high/low feature vector.

    Both graphs are drawn independently from the same two-block model:
    within-block probabilities ``p_block1`` / ``p_block2`` and cross
    probability ``p_cross`` with ``p_cross < p_block1 < p_block2``.  Every
    vertex carries one symbol; the first and last quarter of the vertex line
    share one symbol and the middle half shares another, so features cut
    across the blocks.  Vertex 0 is the single vertex of interest.  The full
    product support is kept, symmetric outcomes included, so at
    ``block_size=2`` the table has 2^6 x 2^6 entries.
    """
    if not p_cross < p_block1 < p_block2:
        raise ValueError("need p_cross < p_block1 < p_block2")
    if block_size % 2 != 0:
        raise ValueError("block_size must be even")
    if 2 * block_size > 4:
        raise ValueError("exact enumeration supports at most 4 vertices")
    n = 2 * block_size
    quarter = block_size // 2
    symbols = ["1"] * quarter + ["2"] * block_size + ["1"] * quarter
    features = tuple((s,) for s in symbols)
    block = [0] * block_size + [1] * block_size
    within = {0: p_block1, 1: p_block2}
    edge_probs = {}
    for u, v in vertex_pairs(n):
        if block[u] == block[v]:
            edge_probs[(u, v)] = within[block[u]]
        else:
            edge_probs[(u, v)] = p_cross
    factor = FeaturedGraphFactor(n=n, edge_probs=edge_probs, vertex_features=features)
    return enumerate_distribution(
        PairSpec(
            left=factor,
            right=factor,
            interest=(0,),
            obfuscation=_bundle_obfuscation(n),
            name="two-block-quartered",
        )
    )


def noisy_two_block_instance():
    """Fixed left graph, stochastic right graph with noisy block features.

    The left graph is a fixed feature-asymmetric 4-vertex graph with block
    features ``a, a, b, b``.  The right graph draws edges from a two-block
    profile and each vertex independently draws its symbol, with block-1
    vertices biased towards ``a``.  Feature-symmetric right graphs are
    dropped and the mass renormalised.
    """
    left = FeaturedGraphFactor(
        n=4,
        edge_probs={(0, 1): 1.0, (0, 2): 1.0, (2, 3): 1.0},
        vertex_features=(("a",), ("a",), ("b",), ("b",)),
    )
    block = [0, 0, 1, 1]
    edge_probs = {}
    for u, v in vertex_pairs(4):
        edge_probs[(u, v)] = 0.6 if block[u] == block[v] else 0.2
    bias = {0: [(("a",), 0.8), (("b",), 0.2)], 1: [(("a",), 0.3), (("b",), 0.7)]}
    right = FeaturedGraphFactor(
        n=4,
        edge_probs=edge_probs,
        vertex_features=tuple(bias[block[v]] for v in range(4)),
    )
    return enumerate_distribution(
        PairSpec(
            left=left,
            right=right,
            interest=(0,),
            obfuscation=_bundle_obfuscation(4),
            asymmetry=frozenset({"featured"}),
            on_violation="drop",
            name="two-block-noisy",
        )
    )


# An asymmetric 6-vertex graph (path 0-1-2-3-4-5 plus the chord 1-3): the
# smallest order at which graphs with trivial automorphism groups exist.
_ASYM6_EDGES = frozenset({(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (1, 3)})


def _relabel_pairs(pairs, perm):
    return frozenset(
        (perm[u], perm[v]) if perm[u] < perm[v] else (perm[v], perm[u])
        for (u, v) in pairs
    )


def constant_feature_instance():
    """Constant vertex symbols over asymmetric graphs; signal is edges only.

    The left graph is a fixed asymmetric 6-vertex graph.  The right graph is
    a four-way mixture: the same graph or a cyclically relabelled copy (3/8
    each), or that graph with one extra edge, again under two labellings
    (1/8 each).  Every outcome is asymmetric, so the only uncertainty left
    to a ranking scheme is which labelling of its isomorphism class
    occurred; with constant features, topology-blind and feature-aware
    schemes face exactly the same problem.  Vertex 0 is the vertex of
    interest.
    """
    n = 6
    const_rows = tuple(("c",) for _ in range(n))
    cyc = tuple((v + 1) % n for v in range(n))          # moves vertex 0
    swap45 = (0, 1, 2, 3, 5, 4)                          # fixes vertex 0
    base = _ASYM6_EDGES
    extra = base | {(0, 4)}
    patterns = (
        (tuple(base), 0.375),
        (tuple(_relabel_pairs(base, cyc)), 0.375),
        (tuple(extra), 0.125),
        (tuple(_relabel_pairs(extra, swap45)), 0.125),
    )
    left = FeaturedGraphFactor(
        n=n, graph_patterns=((tuple(base), 1.0),), vertex_features=const_rows
    )
    right = FeaturedGraphFactor(
        n=n, graph_patterns=patterns, vertex_features=const_rows
    )
    return enumerate_distribution(
        PairSpec(
            left=left,
            right=right,
            interest=(0,),
            obfuscation=_bundle_obfuscation(6),
            asymmetry=frozenset({"featured", "graph"}),
            on_violation="reject",
            name="const-features",
        )
    )


_DISTINCT_ROWS = (("s0",), ("s1",), ("s2",))


def _row_permutation_table(rows):
    perms = itertools.permutations(range(len(rows)))
    table = []
    prob = 1.0 / math.factorial(len(rows))
    for perm in perms:
        shuffled = tuple(rows[i] for i in perm)
        table.append((shuffled, prob))
    return tuple(table)


def empty_graph_instance():
    """Edgeless pair; the right graph's distinct rows are uniformly shuffled."""
    left = FeaturedGraphFactor(n=3, vertex_features=_DISTINCT_ROWS)
    right = FeaturedGraphFactor(
        n=3, joint_vertex_features=_row_permutation_table(_DISTINCT_ROWS)
    )
    return enumerate_distribution(
        PairSpec(
            left=left,
            right=right,
            interest=(0,),
            obfuscation=_bundle_obfuscation(3),
            asymmetry=frozenset({"featured", "features"}),
            on_violation="reject",
            name="empty-graph",
        )
    )


def graph_signal_instance():
    """Distinct rows shuffled uniformly, plus an edge that marks vertex 0.

    The right graph tosses a fair coin for the single possible edge
    ``(0, 1)`` while its feature rows are an independent uniform shuffle, so
    topology carries signal about the interesting vertex that the features
    alone cannot explain.
    """
    left = FeaturedGraphFactor(n=3, vertex_features=_DISTINCT_ROWS)
    right = FeaturedGraphFactor(
        n=3,
        edge_probs={(0, 1): 0.5},
        joint_vertex_features=_row_permutation_table(_DISTINCT_ROWS),
    )
    return enumerate_distribution(
        PairSpec(
            left=left,
            right=right,
            interest=(0,),
            obfuscation=_bundle_obfuscation(3),
            asymmetry=frozenset({"featured", "features"}),
            on_violation="reject",
            name="graph-signal",
        )
    )


_BUNDLED_FACTORIES = {
    "two-block-quartered": quartered_two_block_instance,
    "two-block-noisy": noisy_two_block_instance,
    "const-features": constant_feature_instance,
    "empty-graph": empty_graph_instance,
    "graph-signal": graph_signal_instance,
}

BUNDLED_INSTANCE_NAMES = tuple(_BUNDLED_FACTORIES)


def bundled_instance(name):
    """Build one of the named small instances shipped for the oracle suite."""
    try:
        factory = _BUNDLED_FACTORIES[name]
    except KeyError:
        raise ValueError(
            f"unknown instance {name!r}; choose from {BUNDLED_INSTANCE_NAMES}"
        ) from None
    return factory()


# ---------------------------------------------------------------------------
# synthetic connectome stand-in


def sample_synthetic_connectome_pair(rng, n=253):
    """Two correlated weighted graphs over one neuron set with three types.

    A documented stand-in for a real paired connectome.  The two graphs
    share latent uniform draws per vertex pair, with the first graph
    thresholding them more permissively than the second, so its edge set
    nests the other's and carries more than three times the edges.  Each
    vertex also gets an activity level shared by both graphs -- active
    neurons form more and heavier synapses of either kind -- and surviving
    pairs carry the same integer count in both graphs, which is what makes
    individual vertices (not just their types) recognisable across the
    pair.  Returns ``(w1, w2, types)`` where ``types`` assigns each vertex
    one of three categories.
    """
    sizes = [n - 2 * (n // 3), n // 3, n // 3]
    types = np.repeat(np.arange(3), sizes)
    base = np.array(
        [
            [0.30, 0.10, 0.06],
            [0.10, 0.26, 0.08],
            [0.06, 0.08, 0.22],
        ]
    )
    activity = rng.uniform(0.5, 1.5, n)
    p_dense = np.clip(base[np.ix_(types, types)] * np.outer(activity, activity),
                      0.0, 0.95)
    p_sparse = 0.28 * p_dense
    iu = np.triu_indices(n, 1)
    latent = rng.random(len(iu[0]))
    dense = latent < p_dense[iu]
    sparse = latent < p_sparse[iu]
    counts = 1.0 + rng.poisson(2.0 * np.outer(activity, activity)[iu])

    def weighted(mask):
        w = np.zeros((n, n))
        w[iu] = np.where(mask, counts, 0.0)
        return w + w.T

    return weighted(dense), weighted(sparse), types

"""Labeled graphs carrying vertex and edge features, plus symmetry machinery.

Vertices are the integers ``0..n-1``.  Vertex features form an ``n x d1``
table of hashable symbols.  Edge features are stored per present edge; the
lexicographic ``C(n,2) x d2`` matrix view materialises absent pairs as rows
of the :data:`STAR` sentinel, so the edge set is always recoverable from the
feature matrix alone (see :func:`edge_set_from_features`).

Permutations are tuples ``sigma`` of length ``n`` mapping ``v -> sigma[v]``.
Relabeling moves feature rows with their vertices: the new row of ``sigma[v]``
is the old row of ``v``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from types import MappingProxyType

import numpy as np

__all__ = [
    "STAR",
    "MalformedFeatures",
    "SymmetryGuardError",
    "FeaturedGraph",
    "vertex_pairs",
    "edge_set_from_features",
    "identity_permutation",
    "invert_permutation",
    "compose_permutations",
    "all_permutations",
    "random_permutation",
    "apply_permutation",
    "permuted_graph_key",
    "f_automorphisms",
    "f_isomorphism",
    "all_f_isomorphisms",
    "graph_automorphisms",
    "all_graph_isomorphisms",
    "feature_row_matchings",
    "orbit",
    "orbit_partition",
    "Obfuscation",
    "ObfuscatedGraph",
    "obfuscate",
]

# Exhaustive symmetry searches are factorial; refuse beyond this many vertices
# unless the caller raises the guard explicitly.
DEFAULT_SYMMETRY_GUARD = 10


class MalformedFeatures(ValueError):
    """An edge-feature row mixes present symbols with the missing marker."""


class SymmetryGuardError(ValueError):
    """Exhaustive symmetry search refused because the graph is too large."""


class _Star:
    """Singleton marker for entries of absent edges in feature matrices."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "*"

    def __reduce__(self):
        return (_Star, ())


STAR = _Star()


def vertex_pairs(n):
    """All unordered pairs ``(u, v)``, ``u < v``, in lexicographic order."""
    return [(u, v) for u in range(n) for v in range(u + 1, n)]


def _norm_pair(u, v):
    return (u, v) if u < v else (v, u)


def _vertex_count_from_rows(n_rows):
    # invert n_rows == n * (n - 1) / 2
    n = int((1 + (1 + 8 * n_rows) ** 0.5) / 2 + 0.5)
    if n * (n - 1) // 2 != n_rows:
        raise ValueError(f"{n_rows} rows is not C(n,2) for any integer n")
    return n


def edge_set_from_features(edge_features):
    """Recover the edge set encoded by a stacked edge-feature matrix.

    ``edge_features`` is a sequence of ``C(n,2)`` rows in lexicographic pair
    order.  A row that is entirely :data:`STAR` marks an absent edge; a row
    with no :data:`STAR` entries marks a present one.  Mixed rows raise
    :class:`MalformedFeatures`.
    """
    rows = [tuple(row) for row in edge_features]
    n = _vertex_count_from_rows(len(rows))
    edges = set()
    for pair, row in zip(vertex_pairs(n), rows):
        if not row:
            raise ValueError("edge-feature rows must have at least one column")
        n_star = sum(1 for entry in row if entry is STAR)
        if n_star == 0:
            edges.add(pair)
        elif n_star != len(row):
            raise MalformedFeatures(
                f"row for pair {pair} mixes {STAR!r} with feature symbols"
            )
    return frozenset(edges)


class FeaturedGraph:
    """Immutable undirected graph with vertex features and per-edge features.

    Parameters
    ----------
    n : number of vertices.
    vertex_features : sequence of ``n`` feature rows (each an iterable of
        hashable symbols, all the same length ``d1``).
    edge_feature_rows : mapping ``(u, v) -> row`` for present edges only,
        ``u < v``.  The keys define the edge set.  Rows must share length
        ``d2`` and may not contain :data:`STAR`.
    d2 : number of edge-feature columns; required when the graph has no
        edges (otherwise inferred).
    """

    __slots__ = ("n", "d1", "d2", "vertex_features", "edge_feature_rows", "_key")

    def __init__(self, n, vertex_features, edge_feature_rows, d2=None):
        if n < 1:
            raise ValueError("need at least one vertex")
        vf = tuple(tuple(row) for row in vertex_features)
        if len(vf) != n:
            raise ValueError(f"expected {n} vertex-feature rows, got {len(vf)}")
        d1 = len(vf[0])
        if d1 < 1 or any(len(row) != d1 for row in vf):
            raise ValueError("vertex-feature rows must share a positive length")
        if any(entry is STAR for row in vf for entry in row):
            raise MalformedFeatures("vertex features cannot contain the missing marker")

        rows = {}
        for pair, row in edge_feature_rows.items():
            u, v = pair
            if not (0 <= u < n and 0 <= v < n) or u == v:
                raise ValueError(f"bad edge {pair!r}")
            key = _norm_pair(u, v)
            if key in rows:
                raise ValueError(f"duplicate edge {pair!r}")
            rows[key] = tuple(row)
        if rows:
            lengths = {len(row) for row in rows.values()}
            if len(lengths) != 1:
                raise ValueError("edge-feature rows must share one length")
            inferred = lengths.pop()
            if inferred < 1:
                raise ValueError("edge-feature rows must have at least one column")
            if d2 is not None and d2 != inferred:
                raise ValueError(f"d2={d2} but rows have length {inferred}")
            d2 = inferred
            if any(entry is STAR for row in rows.values() for entry in row):
                raise MalformedFeatures("present edges cannot carry the missing marker")
        elif d2 is None:
            d2 = 1
        if d2 < 1:
            raise ValueError("d2 must be positive")

        object.__setattr__(self, "n", n)
        object.__setattr__(self, "d1", d1)
        object.__setattr__(self, "d2", d2)
        object.__setattr__(self, "vertex_features", vf)
        object.__setattr__(self, "edge_feature_rows", MappingProxyType(rows))
        object.__setattr__(
            self, "_key", (n, d1, d2, vf, tuple(sorted(rows.items())))
        )

    def __setattr__(self, name, value):
        raise AttributeError("FeaturedGraph is immutable")

    @classmethod
    def from_matrices(cls, vertex_features, edge_features):
        """Build from an ``n x d1`` vertex table and ``C(n,2) x d2`` edge table."""
        vf = [tuple(row) for row in vertex_features]
        rows = [tuple(row) for row in edge_features]
        n = len(vf)
        if len(rows) != n * (n - 1) // 2:
            raise ValueError(
                f"expected {n * (n - 1) // 2} edge-feature rows, got {len(rows)}"
            )
        edges = edge_set_from_features(rows) if rows else frozenset()
        pair_index = {pair: i for i, pair in enumerate(vertex_pairs(n))}
        present = {pair: rows[pair_index[pair]] for pair in edges}
        d2 = len(rows[0]) if rows else None
        return cls(n, vf, present, d2=d2)

    @property
    def edges(self):
        return frozenset(self.edge_feature_rows)

    @property
    def edge_features(self):
        """Materialised ``C(n,2) x d2`` feature matrix with STAR-filled rows."""
        pairs = vertex_pairs(self.n)
        out = np.empty((len(pairs), self.d2), dtype=object)
        out[:] = STAR
        for i, pair in enumerate(pairs):
            row = self.edge_feature_rows.get(pair)
            if row is not None:
                out[i, :] = row
        out.setflags(write=False)
        return out

    def degree(self, v):
        return sum(1 for pair in self.edge_feature_rows if v in pair)

    def has_edge(self, u, v):
        return _norm_pair(u, v) in self.edge_feature_rows

    def key(self):
        """Hashable canonical identity (label-sensitive)."""
        return self._key

    def plain_key(self):
        """Identity of the underlying unlabeled-feature graph: vertex count + edges."""
        return (self.n, frozenset(self.edge_feature_rows))

    def __eq__(self, other):
        return isinstance(other, FeaturedGraph) and self._key == other._key

    def __hash__(self):
        return hash(self._key)

    def __repr__(self):
        return (
            f"FeaturedGraph(n={self.n}, edges={sorted(self.edge_feature_rows)}, "
            f"d1={self.d1}, d2={self.d2})"
        )


# ---------------------------------------------------------------------------
# permutation action


def _check_permutation(sigma, n):
    if len(sigma) != n or sorted(sigma) != list(range(n)):
        raise ValueError(f"{sigma!r} is not a permutation of 0..{n - 1}")


def apply_permutation(graph, sigma):
    """Relabel ``graph`` by ``sigma``; features travel with their vertices."""
    sigma = tuple(sigma)
    _check_permutation(sigma, graph.n)
    inv = invert_permutation(sigma)
    vf = tuple(graph.vertex_features[inv[v]] for v in range(graph.n))
    rows = {
        _norm_pair(sigma[u], sigma[v]): row
        for (u, v), row in graph.edge_feature_rows.items()
    }
    return FeaturedGraph(graph.n, vf, rows, d2=graph.d2)


def permuted_graph_key(graph, sigma):
    """``apply_permutation(graph, sigma).key()`` without building the graph."""
    inv = invert_permutation(sigma)
    vf = tuple(graph.vertex_features[inv[v]] for v in range(graph.n))
    rows = tuple(
        sorted(
            (_norm_pair(sigma[u], sigma[v]), row)
            for (u, v), row in graph.edge_feature_rows.items()
        )
    )
    return (graph.n, graph.d1, graph.d2, vf, rows)


def identity_permutation(n):
    return tuple(range(n))


def invert_permutation(sigma):
    inv = [0] * len(sigma)
    for i, img in enumerate(sigma):
        inv[img] = i
    return tuple(inv)


def compose_permutations(outer, inner):
    """Composition ``outer o inner``: ``v -> outer[inner[v]]``."""
    return tuple(outer[i] for i in inner)


def all_permutations(n):
    return [tuple(p) for p in itertools.permutations(range(n))]


def random_permutation(n, rng):
    return tuple(int(v) for v in rng.permutation(n))


# ---------------------------------------------------------------------------
# isomorphism search
#
# One backtracking matcher serves both the feature-respecting and the
# topology-only notions: vertex/edge "colors" abstract which attributes a
# candidate bijection must preserve.  Absent edges get color None, so the
# color comparison enforces adjacency for free.


def _vertex_invariants(graph, vcolor, ecolor):
    inv = []
    for v in range(graph.n):
        neigh = []
        for (a, b), _ in graph.edge_feature_rows.items():
            if v == a:
                neigh.append((vcolor(graph, b), ecolor(graph, v, b)))
            elif v == b:
                neigh.append((vcolor(graph, a), ecolor(graph, v, a)))
        inv.append((vcolor(graph, v), len(neigh), tuple(sorted(neigh))))
    return inv


def _iso_search(ga, gb, vcolor, ecolor, find_all, guard):
    n = ga.n
    if gb.n != n:
        return []
    if n > guard:
        raise SymmetryGuardError(
            f"exhaustive isomorphism search refused for n={n} > guard={guard}"
        )
    inv_a = _vertex_invariants(ga, vcolor, ecolor)
    inv_b = _vertex_invariants(gb, vcolor, ecolor)
    if sorted(inv_a) != sorted(inv_b):
        return []
    candidates = [
        [w for w in range(n) if inv_b[w] == inv_a[v]] for v in range(n)
    ]
    found = []
    assign = [-1] * n
    used = [False] * n

    def extend(v):
        if v == n:
            found.append(tuple(assign))
            return not find_all
        for w in candidates[v]:
            if used[w]:
                continue
            ok = True
            for u in range(v):
                if ecolor(ga, v, u) != ecolor(gb, w, assign[u]):
                    ok = False
                    break
            if not ok:
                continue
            assign[v] = w
            used[w] = True
            if extend(v + 1):
                return True
            used[w] = False
            assign[v] = -1
        return False

    extend(0)
    return found


def _feat_vcolor(g, v):
    return g.vertex_features[v]


def _feat_ecolor(g, u, v):
    return g.edge_feature_rows.get(_norm_pair(u, v))


def _plain_vcolor(g, v):
    return 0


def _plain_ecolor(g, u, v):
    return _norm_pair(u, v) in g.edge_feature_rows


def f_automorphisms(graph, guard=DEFAULT_SYMMETRY_GUARD):
    """All permutations fixing the graph together with all its features."""
    return _iso_search(graph, graph, _feat_vcolor, _feat_ecolor, True, guard)


def all_f_isomorphisms(ga, gb, guard=DEFAULT_SYMMETRY_GUARD):
    """All ``sigma`` with ``apply_permutation(ga, sigma) == gb``."""
    if (ga.d1, ga.d2) != (gb.d1, gb.d2):
        raise ValueError("feature dimensions differ")
    return _iso_search(ga, gb, _feat_vcolor, _feat_ecolor, True, guard)


def f_isomorphism(ga, gb, guard=DEFAULT_SYMMETRY_GUARD):
    """One feature-respecting isomorphism ``ga -> gb``, or None."""
    if (ga.d1, ga.d2) != (gb.d1, gb.d2):
        raise ValueError("feature dimensions differ")
    found = _iso_search(ga, gb, _feat_vcolor, _feat_ecolor, False, guard)
    return found[0] if found else None


def graph_automorphisms(graph, guard=DEFAULT_SYMMETRY_GUARD):
    """All permutations fixing the edge set; features are ignored."""
    return _iso_search(graph, graph, _plain_vcolor, _plain_ecolor, True, guard)


def all_graph_isomorphisms(ga, gb, guard=DEFAULT_SYMMETRY_GUARD):
    """All edge-set isomorphisms ``ga -> gb``; features are ignored."""
    return _iso_search(ga, gb, _plain_vcolor, _plain_ecolor, True, guard)


def feature_row_matchings(rows_a, rows_b, guard=DEFAULT_SYMMETRY_GUARD):
    """All permutations ``sigma`` sending row table ``a`` onto row table ``b``.

    ``sigma`` satisfies ``rows_b[sigma[i]] == rows_a[i]`` for every ``i`` --
    the same travel convention as :func:`apply_permutation`.
    """
    rows_a = [tuple(r) for r in rows_a]
    rows_b = [tuple(r) for r in rows_b]
    n = len(rows_a)
    if len(rows_b) != n:
        return []
    if n > guard:
        raise SymmetryGuardError(f"row matching refused for n={n} > guard={guard}")
    groups_a = {}
    groups_b = {}
    for i, row in enumerate(rows_a):
        groups_a.setdefault(row, []).append(i)
    for i, row in enumerate(rows_b):
        groups_b.setdefault(row, []).append(i)
    if set(groups_a) != set(groups_b):
        return []
    if any(len(groups_a[row]) != len(groups_b[row]) for row in groups_a):
        return []
    rows_sorted = sorted(groups_a)
    found = []
    def build(row_idx, partial):
        if row_idx == len(rows_sorted):
            sigma = [0] * n
            for src, dst in partial:
                sigma[src] = dst
            found.append(tuple(sigma))
            return
        row = rows_sorted[row_idx]
        src = groups_a[row]
        for image in itertools.permutations(groups_b[row]):
            build(row_idx + 1, partial + list(zip(src, image)))

    build(0, [])
    return sorted(found)


# ---------------------------------------------------------------------------
# orbits

ORBIT_MODES = ("featured", "graph", "features")


def _symmetries(graph, mode, guard):
    if mode == "featured":
        return f_automorphisms(graph, guard)
    if mode == "graph":
        return graph_automorphisms(graph, guard)
    if mode == "features":
        return feature_row_matchings(
            graph.vertex_features, graph.vertex_features, guard
        )
    raise ValueError(f"unknown orbit mode {mode!r}; expected one of {ORBIT_MODES}")


def orbit(vertex, graph, mode="featured", guard=DEFAULT_SYMMETRY_GUARD):
    """Set of vertices reachable from ``vertex`` under the chosen symmetries.

    Modes: ``"featured"`` uses feature-respecting automorphisms, ``"graph"``
    ignores features, ``"features"`` ignores topology and uses only equality
    of vertex-feature rows.
    """
    if not 0 <= vertex < graph.n:
        raise ValueError(f"vertex {vertex} out of range")
    return frozenset(sigma[vertex] for sigma in _symmetries(graph, mode, guard))


def orbit_partition(graph, mode="featured", guard=DEFAULT_SYMMETRY_GUARD):
    """Orbits of all vertices as a list of frozensets (partition of 0..n-1)."""
    sigmas = _symmetries(graph, mode, guard)
    seen = set()
    parts = []
    for v in range(graph.n):
        if v in seen:
            continue
        part = frozenset(sigma[v] for sigma in sigmas)
        parts.append(part)
        seen |= part
    return parts


# ---------------------------------------------------------------------------
# obfuscation


@dataclass(frozen=True)
class Obfuscation:
    """A bijection from vertices ``0..m-1`` onto fresh ordered labels.

    ``labels`` fixes the label universe and its total order (the order is the
    deterministic tie-break used everywhere downstream).  ``images[v]`` is the
    label assigned to vertex ``v``; it need not respect the label order.
    """

    labels: tuple
    images: tuple

    def __post_init__(self):
        if len(set(self.labels)) != len(self.labels):
            raise ValueError("labels must be distinct")
        if any(isinstance(lab, int) for lab in self.labels):
            raise ValueError("labels must be disjoint from integer vertex ids")
        if sorted(self.images, key=self.labels.index) != list(self.labels):
            raise ValueError("images must be a bijection onto labels")

    @property
    def m(self):
        return len(self.labels)

    def position_permutation(self):
        """Vertex -> index of its label in the fixed label order."""
        pos = {lab: i for i, lab in enumerate(self.labels)}
        return tuple(pos[lab] for lab in self.images)

    def position_of(self, vertex):
        return self.position_permutation()[vertex]

    def vertex_at(self, position):
        return invert_permutation(self.position_permutation())[position]

    @classmethod
    def natural(cls, m, prefix="h"):
        labels = tuple(f"{prefix}{i}" for i in range(m))
        return cls(labels=labels, images=labels)

    @classmethod
    def from_positions(cls, positions, prefix="h"):
        """Build from a vertex -> label-position permutation."""
        positions = tuple(positions)
        labels = tuple(f"{prefix}{i}" for i in range(len(positions)))
        return cls(labels=labels, images=tuple(labels[p] for p in positions))


@dataclass(frozen=True)
class ObfuscatedGraph:
    """A featured graph relabeled to label positions, plus the label names.

    ``graph`` lives on ``0..m-1`` where index ``i`` stands for ``labels[i]``;
    its edge rows are therefore already ordered lexicographically by label.
    """

    graph: FeaturedGraph
    labels: tuple

    def label_of(self, position):
        return self.labels[position]


def obfuscate(graph, obf):
    """Apply an obfuscation, re-sorting edge rows by the fixed label order."""
    if obf.m != graph.n:
        raise ValueError(f"obfuscation covers {obf.m} vertices, graph has {graph.n}")
    relabeled = apply_permutation(graph, obf.position_permutation())
    return ObfuscatedGraph(graph=relabeled, labels=obf.labels)

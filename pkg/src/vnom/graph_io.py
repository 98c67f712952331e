"""File formats for graphs, features, seeds and result tables.

Featured graphs use a whitespace-delimited text format: a header line
``n d1 d2``, then ``n`` vertex-feature lines, then one line per present
edge ``u v f1 ... f_d2`` (absent pairs are implicit).  Weighted graphs are
plain edge lists ``u v weight``.  All CSVs are written with a fixed column
order and newline convention so identical inputs produce identical bytes.
"""

from __future__ import annotations

import csv

import numpy as np

from .featured_graph import FeaturedGraph

__all__ = [
    "write_featured_graph",
    "read_featured_graph",
    "read_weighted_edges",
    "write_weighted_edges",
    "read_feature_table",
    "read_seed_pairs",
    "read_interest",
    "write_embedding_csv",
    "write_nomination_csv",
    "write_curve_csv",
    "write_rows_csv",
]


def _format_symbol(sym, where):
    text = str(sym)
    if not text or any(ch.isspace() for ch in text):
        raise ValueError(f"cannot serialize feature symbol {sym!r} in {where}: "
                         "symbols must be non-empty and whitespace-free")
    return text


def write_featured_graph(path, graph):
    """Write a featured graph in the header/vertex-lines/edge-lines format."""
    lines = [f"{graph.n} {graph.d1} {graph.d2}"]
    for v, row in enumerate(graph.vertex_features):
        lines.append(" ".join(_format_symbol(s, f"vertex {v}") for s in row))
    for (u, v) in sorted(graph.edge_feature_rows):
        row = graph.edge_feature_rows[(u, v)]
        feats = " ".join(_format_symbol(s, f"edge ({u},{v})") for s in row)
        lines.append(f"{u} {v} {feats}".rstrip())
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")


def read_featured_graph(path):
    """Parse the featured-graph text format back into a FeaturedGraph.

    Feature symbols are opaque to the library, so tokens are kept as the
    strings that appeared on disk; writing a graph whose symbols are the
    same strings round-trips exactly.
    """
    with open(path, encoding="utf-8") as fh:
        raw = [(i + 1, line.strip()) for i, line in enumerate(fh)]
    lines = [(no, line) for no, line in raw if line]
    if not lines:
        raise ValueError(f"{path}: empty graph file")
    no, header = lines[0]
    parts = header.split()
    if len(parts) != 3:
        raise ValueError(f"{path}:{no}: header must be 'n d1 d2'")
    try:
        n, d1, d2 = (int(p) for p in parts)
    except ValueError as err:
        raise ValueError(f"{path}:{no}: non-integer header field") from err
    if len(lines) < 1 + n:
        raise ValueError(f"{path}: expected {n} vertex-feature lines")
    vf = []
    for no, line in lines[1:1 + n]:
        toks = line.split()
        if len(toks) != d1:
            raise ValueError(f"{path}:{no}: expected {d1} vertex features, "
                             f"got {len(toks)}")
        vf.append(tuple(toks))
    edges = {}
    for no, line in lines[1 + n:]:
        toks = line.split()
        if len(toks) != 2 + d2:
            raise ValueError(f"{path}:{no}: expected 'u v' plus {d2} edge "
                             f"features, got {len(toks)} fields")
        try:
            u, v = int(toks[0]), int(toks[1])
        except ValueError as err:
            raise ValueError(f"{path}:{no}: non-integer endpoint") from err
        if not (0 <= u < n and 0 <= v < n) or u == v:
            raise ValueError(f"{path}:{no}: bad edge ({u},{v}) for n={n}")
        pair = (u, v) if u < v else (v, u)
        if pair in edges:
            raise ValueError(f"{path}:{no}: duplicate edge {pair}")
        edges[pair] = tuple(toks[2:])
    return FeaturedGraph(n, vf, edges, d2=d2)


def read_weighted_edges(path, n=None, symmetrize="max", drop_loops=True):
    """Read a 'u v weight' edge list into a dense weighted adjacency.

    Directed duplicates are reconciled by taking the larger weight
    (``symmetrize="max"``) and self-loops are dropped, mirroring the usual
    connectome preprocessing.  The vertex count defaults to one past the
    largest endpoint seen.
    """
    if symmetrize not in ("max", "error"):
        raise ValueError("symmetrize must be 'max' or 'error'")
    triples = []
    top = -1
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            toks = line.split()
            if len(toks) not in (2, 3):
                raise ValueError(f"{path}:{lineno}: expected 'u v [weight]', "
                                 f"got {len(toks)} fields")
            try:
                u, v = int(toks[0]), int(toks[1])
                w = float(toks[2]) if len(toks) == 3 else 1.0
            except ValueError as err:
                raise ValueError(f"{path}:{lineno}: malformed edge line") from err
            if u < 0 or v < 0:
                raise ValueError(f"{path}:{lineno}: negative vertex id")
            if w < 0:
                raise ValueError(f"{path}:{lineno}: negative weight {w}")
            if u == v:
                if drop_loops:
                    continue
                raise ValueError(f"{path}:{lineno}: self-loop on vertex {u}")
            triples.append((u, v, w))
            top = max(top, u, v)
    count = n if n is not None else top + 1
    if top >= count:
        raise ValueError(f"{path}: vertex id {top} out of range for n={count}")
    a = np.zeros((count, count))
    for u, v, w in triples:
        if symmetrize == "error" and a[u, v] != 0.0 and a[u, v] != w:
            raise ValueError(f"{path}: conflicting weights for edge ({u},{v})")
        a[u, v] = max(a[u, v], w)
        a[v, u] = max(a[v, u], w)
    return a


def write_weighted_edges(path, w):
    """Write the upper triangle of a weighted adjacency as an edge list."""
    w = np.asarray(w)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for u in range(w.shape[0]):
            for v in range(u + 1, w.shape[1]):
                if w[u, v] != 0.0:
                    fh.write(f"{u} {v} {_fmt(w[u, v])}\n")


def read_feature_table(path):
    """Read a vertex-feature CSV into a float matrix.

    Columns that parse as numbers are taken as-is; any column containing a
    non-numeric entry is treated as categorical and expanded into one-hot
    indicator columns (categories in sorted order).

    A first row whose cells are all non-numeric is dropped as a header when
    either the remaining rows contain numbers or none of its cells recur in
    their own column (so a label row over a purely categorical table is
    still recognised, at the cost of misreading a single-use category that
    happens to sit in row one).
    """
    with open(path, encoding="utf-8", newline="") as fh:
        rows = [row for row in csv.reader(fh) if row and any(c.strip() for c in row)]
    if not rows:
        raise ValueError(f"{path}: empty feature table")
    width = len(rows[0])
    for i, row in enumerate(rows, start=1):
        if len(row) != width:
            raise ValueError(f"{path}:{i}: ragged row ({len(row)} of {width} fields)")
    cells = [[c.strip() for c in row] for row in rows]
    # drop a header row if its cells are non-numeric but the rest parse
    def _numeric(tok):
        try:
            float(tok)
            return True
        except ValueError:
            return False
    if len(cells) > 1 and not any(_numeric(c) for c in cells[0]):
        rest_numeric = all(any(_numeric(c) for c in row) for row in cells[1:])
        fresh_names = all(
            all(cells[0][j] != row[j] for row in cells[1:]) for j in range(width)
        )
        if rest_numeric or fresh_names:
            cells = cells[1:]
    columns = []
    for j in range(width):
        col = [row[j] for row in cells]
        if all(_numeric(c) for c in col):
            columns.append(np.array([float(c) for c in col])[:, None])
        else:
            cats = sorted(set(col))
            onehot = np.zeros((len(col), len(cats)))
            index = {c: i for i, c in enumerate(cats)}
            for i, c in enumerate(col):
                onehot[i, index[c]] = 1.0
            columns.append(onehot)
    return np.hstack(columns)


def read_seed_pairs(path):
    """Read corresponding seed pairs, one 'u v' pair per line."""
    pairs = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.replace(",", " ").strip()
            if not line or line.startswith("#"):
                continue
            toks = line.split()
            if len(toks) != 2:
                raise ValueError(f"{path}:{lineno}: expected 'u v' seed pair")
            try:
                pairs.append((int(toks[0]), int(toks[1])))
            except ValueError as err:
                raise ValueError(f"{path}:{lineno}: non-integer seed id") from err
    return pairs


def read_interest(path):
    """Read the vertices of interest, one id per line."""
    out = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            try:
                out.append(int(line))
            except ValueError as err:
                raise ValueError(f"{path}:{lineno}: non-integer vertex id") from err
    return out


def _fmt(value):
    if isinstance(value, (bool, np.bool_)):
        return str(bool(value))
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    return str(value)


def write_rows_csv(path, header, rows):
    """Write rows with a fixed header; numbers formatted reproducibly."""
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([_fmt(v) for v in row])


def write_embedding_csv(path, emb):
    emb = np.asarray(emb)
    header = ["vertex"] + [f"dim{j}" for j in range(emb.shape[1])]
    write_rows_csv(path, header, [[v] + list(emb[v]) for v in range(emb.shape[0])])


def write_nomination_csv(path, result, truth):
    truth = set(int(v) for v in truth)
    rows = [[rank + 1, v, s, v in truth]
            for rank, (v, s) in enumerate(zip(result.order, result.scores))]
    write_rows_csv(path, ["rank", "vertex", "distance", "is_truth"], rows)


def write_curve_csv(path, xs, ys, labels=("x", "y")):
    write_rows_csv(path, list(labels), list(zip(xs, ys)))

"""CSV readers and writers for affinity matrices and per-node tables.

Edge lists have the header ``src,dst,weight``; node ids are opaque strings
indexed in order of first appearance and duplicate pairs are summed. Dense
matrices have a header ``node_id,<id_1>,...,<id_n>`` followed by one row per
node.
"""

import csv
import math

import numpy as np

from .errors import EdgeListParseError

EDGE_HEADER = ["src", "dst", "weight"]


def fmt(x):
    """Shortest round-tripping text for a float."""
    x = float(x)
    if x == 0:
        return "0"
    return repr(x)


def _parse_weight(text, line):
    try:
        w = float(text)
    except ValueError:
        raise EdgeListParseError(f"weight {text!r} is not a number", line) from None
    if not math.isfinite(w):
        raise EdgeListParseError(f"weight {text!r} is not finite", line)
    if w < 0:
        raise EdgeListParseError(f"negative weight {text!r}", line)
    return w


def load_edge_list(path, zero_diagonal=False):
    """Read an edge list; returns ``(A, node_ids)``."""
    index = {}
    rows, cols, weights = [], [], []
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or [h.strip() for h in header] != EDGE_HEADER:
            raise EdgeListParseError("expected header 'src,dst,weight'", 1)
        for lineno, rec in enumerate(reader, start=2):
            if not rec or (len(rec) == 1 and not rec[0].strip()):
                continue
            if len(rec) != 3:
                raise EdgeListParseError(f"expected 3 fields, got {len(rec)}", lineno)
            src, dst = rec[0].strip(), rec[1].strip()
            if not src or not dst:
                raise EdgeListParseError("empty node id", lineno)
            w = _parse_weight(rec[2].strip(), lineno)
            for node in (src, dst):
                if node not in index:
                    index[node] = len(index)
            rows.append(index[src])
            cols.append(index[dst])
            weights.append(w)
    n = len(index)
    if n == 0:
        raise EdgeListParseError("edge list contains no edges")
    A = np.zeros((n, n))
    np.add.at(A, (rows, cols), weights)
    if zero_diagonal:
        np.fill_diagonal(A, 0.0)
    return A, list(index)


def save_edge_list(path, A, node_ids=None, min_weight=0.0):
    """Write ``A`` as an edge list.

    All diagonal entries are written first (zeros included) so that loading
    reproduces the node order; off-diagonal entries are written when they
    exceed ``min_weight``.
    """
    A = np.asarray(A, dtype=float)
    n = A.shape[0]
    ids = [str(i) for i in range(n)] if node_ids is None else [str(i) for i in node_ids]
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(EDGE_HEADER)
        for i in range(n):
            w.writerow([ids[i], ids[i], fmt(A[i, i])])
        for i in range(n):
            row = A[i]
            for j in np.flatnonzero(row > min_weight):
                if j != i:
                    w.writerow([ids[i], ids[j], fmt(row[j])])


def load_dense(path, zero_diagonal=False):
    """Read a dense matrix file; returns ``(A, node_ids)``."""
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if not header or header[0].strip() != "node_id" or len(header) < 2:
            raise EdgeListParseError("expected header 'node_id,<ids...>'", 1)
        ids = [h.strip() for h in header[1:]]
        n = len(ids)
        A = np.zeros((n, n))
        seen = 0
        for lineno, rec in enumerate(reader, start=2):
            if not rec:
                continue
            if seen >= n:
                raise EdgeListParseError("more rows than columns", lineno)
            if len(rec) != n + 1:
                raise EdgeListParseError(f"expected {n + 1} fields, got {len(rec)}", lineno)
            if rec[0].strip() != ids[seen]:
                raise EdgeListParseError(f"row id {rec[0]!r} does not match column {ids[seen]!r}", lineno)
            A[seen] = [_parse_weight(v.strip(), lineno) for v in rec[1:]]
            seen += 1
    if seen != n:
        raise EdgeListParseError(f"expected {n} rows, got {seen}")
    if zero_diagonal:
        np.fill_diagonal(A, 0.0)
    return A, ids


def save_dense(path, A, node_ids=None):
    A = np.asarray(A, dtype=float)
    ids = [str(i) for i in range(A.shape[0])] if node_ids is None else [str(i) for i in node_ids]
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["node_id", *ids])
        for i, row in zip(ids, A):
            w.writerow([i, *map(fmt, row)])


def write_table(path, header, node_ids, columns):
    """Write ``node_id`` plus float columns (a 2-D array, one row per node)."""
    columns = np.asarray(columns, dtype=float)
    if columns.ndim == 1:
        columns = columns[:, None]
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for nid, row in zip(node_ids, columns):
            w.writerow([nid, *map(fmt, row)])


def read_weights(path, node_ids):
    """Node weights from a ``node_id,weight`` file, ordered like ``node_ids``."""
    values = {}
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or [h.strip() for h in header] != ["node_id", "weight"]:
            raise EdgeListParseError("expected header 'node_id,weight'", 1)
        for lineno, rec in enumerate(reader, start=2):
            if not rec:
                continue
            if len(rec) != 2:
                raise EdgeListParseError(f"expected 2 fields, got {len(rec)}", lineno)
            try:
                values[rec[0].strip()] = float(rec[1])
            except ValueError:
                raise EdgeListParseError(f"weight {rec[1]!r} is not a number", lineno) from None
    missing = [nid for nid in node_ids if nid not in values]
    if missing:
        raise EdgeListParseError(f"weights missing for nodes {missing[:10]}")
    return np.array([values[nid] for nid in node_ids])

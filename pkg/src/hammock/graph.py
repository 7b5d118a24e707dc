"""Undirected simple graphs on integer-labelled nodes."""
from __future__ import annotations

import os
from functools import cached_property
from pathlib import Path

import numpy as np
import scipy.sparse as sp


def _frozen(a, dtype=np.int64):
    a = np.ascontiguousarray(a, dtype=dtype)
    a.setflags(write=False)
    return a


class Graph:
    """Immutable undirected graph.

    Nodes are a sorted array of integer IDs; edges are stored once each as
    ``(src, dst)`` with ``src < dst``, sorted lexicographically, with an integer
    ``weight`` per edge (1 unless given).  Self-loops are rejected; duplicate
    edges are an error.
    """

    def __init__(self, nodes, src=(), dst=(), weight=None):
        nodes = np.unique(np.asarray(list(nodes) if not isinstance(nodes, np.ndarray) else nodes,
                                     dtype=np.int64))
        src = np.asarray(src, dtype=np.int64).reshape(-1)
        dst = np.asarray(dst, dtype=np.int64).reshape(-1)
        weight = (np.ones(len(src), dtype=np.int64) if weight is None
                  else np.asarray(weight, dtype=np.int64).reshape(-1))
        if not (len(src) == len(dst) == len(weight)):
            raise ValueError("src, dst and weight must have equal length")
        if (src == dst).any():
            raise ValueError("self-loops are not allowed")
        lo, hi = np.minimum(src, dst), np.maximum(src, dst)
        order = np.lexsort((hi, lo))
        lo, hi, weight = lo[order], hi[order], weight[order]
        if len(lo) > 1 and ((np.diff(lo) == 0) & (np.diff(hi) == 0)).any():
            raise ValueError("duplicate edge")
        if len(lo) and not (np.isin(lo, nodes).all() and np.isin(hi, nodes).all()):
            raise ValueError("edge endpoint not in node set")
        self.nodes = _frozen(nodes)
        self.src = _frozen(lo)
        self.dst = _frozen(hi)
        self.weight = _frozen(weight)

    @classmethod
    def from_edges(cls, nodes, edges):
        """``edges`` is an iterable of pairs or a mapping pair -> weight."""
        if hasattr(edges, "items"):
            items = list(edges.items())
            src = [u for (u, _), _ in items]
            dst = [v for (_, v), _ in items]
            return cls(nodes, src, dst, [w for _, w in items])
        pairs = list(edges)
        return cls(nodes, [u for u, _ in pairs], [v for _, v in pairs])

    @property
    def n_nodes(self):
        return len(self.nodes)

    @property
    def n_edges(self):
        return len(self.src)

    def __repr__(self):
        return f"{type(self).__name__}(nodes={self.n_nodes}, edges={self.n_edges})"

    def __eq__(self, other):
        if not isinstance(other, Graph):
            return NotImplemented
        return (np.array_equal(self.nodes, other.nodes) and np.array_equal(self.src, other.src)
                and np.array_equal(self.dst, other.dst) and np.array_equal(self.weight, other.weight))

    __hash__ = None

    def edges(self) -> list[tuple[int, int]]:
        return list(zip(self.src.tolist(), self.dst.tolist()))

    def edge_weights(self) -> dict[tuple[int, int], int]:
        return dict(zip(self.edges(), self.weight.tolist()))

    def index_of(self, node) -> int:
        i = int(np.searchsorted(self.nodes, node))
        if i == len(self.nodes) or self.nodes[i] != node:
            raise KeyError(f"unknown node {node}")
        return i

    def has_node(self, node) -> bool:
        i = int(np.searchsorted(self.nodes, node))
        return i < len(self.nodes) and self.nodes[i] == node

    @cached_property
    def src_pos(self):
        return _frozen(np.searchsorted(self.nodes, self.src))

    @cached_property
    def dst_pos(self):
        return _frozen(np.searchsorted(self.nodes, self.dst))

    @cached_property
    def adjacency(self) -> sp.csr_matrix:
        """Symmetric 0/1 CSR matrix indexed by node position."""
        n = self.n_nodes
        rows = np.concatenate([self.src_pos, self.dst_pos])
        cols = np.concatenate([self.dst_pos, self.src_pos])
        m = sp.csr_matrix((np.ones(len(rows), dtype=np.int8), (rows, cols)), shape=(n, n))
        m.sort_indices()
        return m

    @cached_property
    def degrees(self) -> np.ndarray:
        return _frozen(np.diff(self.adjacency.indptr))

    def neighbors(self, node) -> np.ndarray:
        i = self.index_of(node)
        a = self.adjacency
        return self.nodes[a.indices[a.indptr[i]:a.indptr[i + 1]]]

    def has_edge(self, u, v) -> bool:
        if not (self.has_node(u) and self.has_node(v)):
            return False
        i, j = self.index_of(u), self.index_of(v)
        a = self.adjacency
        row = a.indices[a.indptr[i]:a.indptr[i + 1]]
        k = np.searchsorted(row, j)
        return bool(k < len(row) and row[k] == j)

    def edge_subgraph(self, mask) -> "Graph":
        """Same nodes, only the edges selected by boolean ``mask``."""
        return Graph(self.nodes, self.src[mask], self.dst[mask], self.weight[mask])

    def without_edge(self, u, v) -> "Graph":
        lo, hi = min(u, v), max(u, v)
        keep = ~((self.src == lo) & (self.dst == hi))
        if keep.all():
            raise KeyError(f"no edge ({u}, {v})")
        return self.edge_subgraph(keep)


def write_edge_tsv(g: Graph, path, columns=("u", "v", "weight")):
    """Edges as TSV (``u < v``, sorted); atomic via rename."""
    path = Path(path)
    tmp = path.with_name(path.name + ".tmp")
    with open(tmp, "w", encoding="utf-8", newline="") as fh:
        fh.write("\t".join(columns) + "\n")
        for u, v, w in zip(g.src.tolist(), g.dst.tolist(), g.weight.tolist()):
            fh.write(f"{u}\t{v}\t{w}\n")
    os.replace(tmp, path)


def read_edge_tsv(path) -> Graph:
    """Inverse of :func:`write_edge_tsv`.  Isolated nodes are not recoverable."""
    src, dst, w = [], [], []
    with open(path, encoding="utf-8") as fh:
        next(fh, None)
        for line in fh:
            if line.strip():
                a, b, c = line.split("\t")
                src.append(int(a))
                dst.append(int(b))
                w.append(int(c))
    return Graph(np.unique(src + dst), src, dst, w)

"""Sparse graph representation and neighborhood access.

A ``Graph`` stores out-edges in compressed-row form. Rows are sorted and
deduplicated, self-loops are dropped at build time, and undirected graphs
store every edge in both directions.
"""

import logging
from collections.abc import Hashable, Iterable, Sequence
from dataclasses import dataclass
from functools import cached_property

import numpy as np
import scipy.sparse as sp

from linkx_core.errors import GraphError, ShapeError

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class Graph:
    """Immutable directed graph in CSR layout."""

    n: int
    """Number of nodes."""

    indptr: np.ndarray
    """Row offsets, length n + 1."""

    indices: np.ndarray
    """Column indices (out-neighbors), length |E|."""

    directed: bool = False
    """Whether edges are one-way."""

    @property
    def num_stored_edges(self) -> int:
        """Stored CSR entries; undirected edges count twice."""
        return int(self.indptr[-1])

    @property
    def num_edges(self) -> int:
        """Edge count as a user would state it (undirected edges once)."""
        stored = self.num_stored_edges
        return stored if self.directed else stored // 2

    @cached_property
    def degrees(self) -> np.ndarray:
        """Out-degree of every node."""
        return np.diff(self.indptr)

    @cached_property
    def adjacency(self) -> sp.csr_matrix:
        """Binary adjacency with ``A[u, v] = 1`` for every stored edge u -> v."""
        data = np.ones(self.num_stored_edges, dtype=np.float64)
        return sp.csr_matrix((data, self.indices, self.indptr), shape=(self.n, self.n))

    @cached_property
    def adjacency_csc(self) -> sp.csc_matrix:
        """Column-major copy of the adjacency for column slicing."""
        return self.adjacency.tocsc()

    @cached_property
    def sources(self) -> np.ndarray:
        """Source node of every stored entry, aligned with ``indices``."""
        return np.repeat(np.arange(self.n, dtype=np.int64), self.degrees)

    def neighbors(self, u: int) -> np.ndarray:
        """Sorted out-neighbors of ``u``."""
        self._check_node(u)
        return self.indices[self.indptr[u] : self.indptr[u + 1]]

    def edge_list(self) -> np.ndarray:
        """Edges as an (m, 2) array; undirected edges appear once with src < dst."""
        pairs = np.column_stack([self.sources, self.indices])
        if not self.directed:
            pairs = pairs[pairs[:, 0] < pairs[:, 1]]
        return pairs

    def symmetrized(self) -> "Graph":
        """Undirected version of this graph (self if already undirected)."""
        if not self.directed:
            return self
        return build_graph(self.edge_list(), self.n, directed=False)

    def same_structure(self, other: "Graph") -> bool:
        """True when both graphs store identical CSR arrays."""
        return (
            self.n == other.n
            and self.directed == other.directed
            and np.array_equal(self.indptr, other.indptr)
            and np.array_equal(self.indices, other.indices)
        )

    def _check_node(self, u: int) -> None:
        if not 0 <= u < self.n:
            raise GraphError(f"Node {u} out of range for graph with {self.n} nodes")


def build_graph(edge_list: Sequence[tuple[int, int]] | np.ndarray, n: int, directed: bool = False) -> Graph:
    """Build a CSR graph from (src, dst) pairs.

    Duplicates are merged and self-loops dropped. When ``directed`` is False
    each edge is stored in both directions exactly once.

    Args:
        edge_list: Sequence or (m, 2) array of node index pairs
        n: Node count
        directed: Keep edges one-way

    Returns:
        The constructed Graph

    Raises:
        GraphError: If n is not positive or an index is out of range
    """
    if n <= 0:
        raise GraphError(f"Graph needs at least one node, got n={n}")

    edges = np.asarray(edge_list, dtype=np.int64).reshape(-1, 2)
    if edges.size and (edges.min() < 0 or edges.max() >= n):
        bad = edges[(edges < 0).any(axis=1) | (edges >= n).any(axis=1)][0]
        raise GraphError(f"Edge ({bad[0]}, {bad[1]}) out of range for n={n}")

    loops = edges[:, 0] == edges[:, 1]
    if loops.any():
        logger.debug(f"Dropping {int(loops.sum())} self-loop entries")
    edges = edges[~loops]

    src, dst = edges[:, 0], edges[:, 1]
    if not directed:
        src, dst = np.concatenate([src, dst]), np.concatenate([dst, src])

    mat = sp.csr_matrix((np.ones(src.size, dtype=np.float64), (src, dst)), shape=(n, n))
    mat.sum_duplicates()
    mat.sort_indices()

    return Graph(
        n=n,
        indptr=mat.indptr.astype(np.int64),
        indices=mat.indices.astype(np.int64),
        directed=directed,
    )


def degree(g: Graph, u: int) -> int:
    """Out-degree of node ``u`` (the full degree for undirected graphs)."""
    g._check_node(u)
    return int(g.indptr[u + 1] - g.indptr[u])


def adjacency_columns(g: Graph, nodes: Sequence[int] | np.ndarray) -> sp.csc_matrix:
    """Columns of the adjacency for the given nodes.

    Column j is the indicator of in-neighbors of ``nodes[j]``; for undirected
    graphs these are simply its neighbors. This is the per-node input of LINK
    and LINKX, and also the minibatch slice.

    Returns:
        Sparse n x len(nodes) 0/1 matrix
    """
    idx = np.asarray(nodes, dtype=np.int64).reshape(-1)
    if idx.size and (idx.min() < 0 or idx.max() >= g.n):
        raise GraphError(f"Node index out of range for graph with {g.n} nodes")
    return g.adjacency_csc[:, idx]


def relabel_nodes(pairs: Iterable[tuple[Hashable, Hashable]]) -> tuple[np.ndarray, list[Hashable]]:
    """Map arbitrary node IDs to dense indices in first-seen order.

    Returns:
        (edges as (m, 2) int array, list where position i holds the original ID of node i)
    """
    index: dict[Hashable, int] = {}
    out: list[tuple[int, int]] = []
    for a, b in pairs:
        ia = index.setdefault(a, len(index))
        ib = index.setdefault(b, len(index))
        out.append((ia, ib))
    return np.asarray(out, dtype=np.int64).reshape(-1, 2), list(index)


@dataclass(frozen=True, eq=False)
class Labels:
    """Integer class labels, one per node."""

    values: np.ndarray
    """Class of every node, entries in [0, num_classes)."""

    num_classes: int
    """Class count C (classes may be empty)."""

    def __post_init__(self) -> None:
        if self.num_classes < 1:
            raise GraphError(f"Need at least one class, got {self.num_classes}")
        values = np.asarray(self.values, dtype=np.int64).reshape(-1)
        if values.size and (values.min() < 0 or values.max() >= self.num_classes):
            raise GraphError(f"Labels must lie in [0, {self.num_classes})")
        object.__setattr__(self, "values", values)

    def __len__(self) -> int:
        return int(self.values.size)

    @cached_property
    def class_sizes(self) -> np.ndarray:
        """|C_k| for every class."""
        return np.bincount(self.values, minlength=self.num_classes)

    @property
    def class_fractions(self) -> np.ndarray:
        """|C_k| / n for every class."""
        return self.class_sizes / max(len(self), 1)

    def permuted(self, perm: Sequence[int] | np.ndarray) -> "Labels":
        """Relabel classes so that class k becomes ``perm[k]``."""
        return Labels(np.asarray(perm, dtype=np.int64)[self.values], self.num_classes)


@dataclass(frozen=True, eq=False)
class Dataset:
    """Graph, node features and labels for one node-classification task."""

    graph: Graph
    """Graph over n nodes."""

    features: np.ndarray
    """Dense D x n feature matrix, one column per node."""

    labels: Labels
    """Node labels."""

    def __post_init__(self) -> None:
        features = np.asarray(self.features, dtype=np.float64)
        if features.ndim != 2:
            raise ShapeError(f"Features must be 2-D (D x n), got shape {features.shape}")
        if features.shape[1] != self.graph.n:
            raise ShapeError(f"Feature columns ({features.shape[1]}) must equal node count ({self.graph.n})")
        if len(self.labels) != self.graph.n:
            raise ShapeError(f"Label count ({len(self.labels)}) must equal node count ({self.graph.n})")
        if not np.isfinite(features).all():
            raise ShapeError("Features contain non-finite values")
        object.__setattr__(self, "features", features)

    @property
    def num_nodes(self) -> int:
        return self.graph.n

    @property
    def num_classes(self) -> int:
        return self.labels.num_classes

    @property
    def feature_dim(self) -> int:
        return int(self.features.shape[0])

    def with_graph(self, graph: Graph) -> "Dataset":
        """Same features and labels over a different graph on the same nodes."""
        return Dataset(graph=graph, features=self.features, labels=self.labels)

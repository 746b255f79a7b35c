"""Homophily and label-topology diagnostics.

All quantities are computed over stored (directed) CSR entries, so an
undirected edge contributes once from each endpoint. Isolated nodes are
excluded from node-level averages and class-wise denominators.
"""

import logging
from dataclasses import dataclass, field
from typing import Any

import numpy as np

from linkx_core.errors import ShapeError, UndefinedMetricError
from linkx_core.graph import Graph, Labels
from linkx_core.rng import Stream, make_rng

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class CompatibilityMatrix:
    """Row-stochastic C x C class mixing matrix."""

    values: np.ndarray
    """H[k, l]: share of edges leaving class k that land in class l."""

    zero_row_mask: np.ndarray
    """True for classes with no outgoing edges (their row is all zero)."""

    counts: np.ndarray
    """Raw edge counts before row normalization."""

    @property
    def num_classes(self) -> int:
        return int(self.values.shape[0])


@dataclass
class HomophilyReport:
    """Every homophily diagnostic for one labeled graph, plus basic statistics."""

    edge_homophily: float
    node_homophily: float
    improved: float | None
    """None when undefined (a single class); see ``improved_reason``."""

    class_wise: list[float | None]
    """h_k per class; None where the class has zero total degree."""

    class_fractions: list[float]
    num_nodes: int
    num_edges: int
    num_classes: int
    directed: bool
    isolated_nodes: int
    two_hop_node_homophily: float | None = None
    """None when not requested or undefined; see ``two_hop_reason``."""

    improved_reason: str | None = None
    two_hop_reason: str | None = None
    extra: dict[str, Any] = field(default_factory=dict)

    def as_dict(self) -> dict[str, Any]:
        """Plain JSON-ready dictionary."""
        out = {
            "num_nodes": self.num_nodes,
            "num_edges": self.num_edges,
            "num_classes": self.num_classes,
            "directed": self.directed,
            "isolated_nodes": self.isolated_nodes,
            "edge_homophily": self.edge_homophily,
            "node_homophily": self.node_homophily,
            "improved": self.improved,
            "improved_reason": self.improved_reason,
            "class_wise": self.class_wise,
            "class_fractions": self.class_fractions,
            "two_hop_node_homophily": self.two_hop_node_homophily,
            "two_hop_reason": self.two_hop_reason,
        }
        out.update(self.extra)
        return out


def _check_pair(g: Graph, labels: Labels) -> None:
    if len(labels) != g.n:
        raise ShapeError(f"Label count ({len(labels)}) does not match node count ({g.n})")


def _require_edges(g: Graph) -> None:
    if g.num_stored_edges == 0:
        raise UndefinedMetricError("Homophily is undefined on a graph with no edges")


def _same_class(g: Graph, labels: Labels) -> np.ndarray:
    """Boolean per stored edge: do both endpoints share a class?"""
    return labels.values[g.sources] == labels.values[g.indices]


def _class_degree_sums(g: Graph, labels: Labels) -> tuple[np.ndarray, np.ndarray]:
    """(same-class endpoint count, total degree) summed per class."""
    src_class = labels.values[g.sources]
    same = _same_class(g, labels).astype(np.float64)
    same_k = np.bincount(src_class, weights=same, minlength=labels.num_classes)
    deg_k = np.bincount(src_class, minlength=labels.num_classes).astype(np.float64)
    return same_k, deg_k


def edge_homophily(g: Graph, labels: Labels) -> float:
    """Fraction of edges joining two nodes of the same class."""
    _check_pair(g, labels)
    _require_edges(g)
    return float(np.count_nonzero(_same_class(g, labels))) / g.num_stored_edges


def node_homophily(g: Graph, labels: Labels) -> float:
    """Per-node same-class neighbor share, averaged over non-isolated nodes."""
    _check_pair(g, labels)
    deg = g.degrees
    active = deg > 0
    if not active.any():
        raise UndefinedMetricError("Node homophily is undefined when every node is isolated")
    isolated = int(g.n - active.sum())
    if isolated:
        logger.warning(f"Excluding {isolated} isolated nodes from node homophily")

    same = np.bincount(g.sources, weights=_same_class(g, labels).astype(np.float64), minlength=g.n)
    return float(np.mean(same[active] / deg[active]))


def class_wise_homophily(g: Graph, labels: Labels) -> np.ndarray:
    """h_k for every class, NaN where the class has zero total degree."""
    _check_pair(g, labels)
    same_k, deg_k = _class_degree_sums(g, labels)
    out = np.full(labels.num_classes, np.nan)
    defined = deg_k > 0
    out[defined] = same_k[defined] / deg_k[defined]
    return out


def class_homophily(g: Graph, labels: Labels, k: int) -> float:
    """h_k: same-class share of all edge endpoints leaving class k.

    Raises:
        UndefinedMetricError: If class k has zero total degree
    """
    if not 0 <= k < labels.num_classes:
        raise ShapeError(f"Class {k} out of range for {labels.num_classes} classes")
    value = class_wise_homophily(g, labels)[k]
    if np.isnan(value):
        raise UndefinedMetricError(f"Class {k} has no edges; h_k is undefined")
    return float(value)


def improved_homophily(g: Graph, labels: Labels) -> float:
    """Class-insensitive measure: mean rectified excess of h_k over |C_k|/n.

    Classes with zero total degree contribute nothing.

    Raises:
        UndefinedMetricError: With a single class (the 1/(C-1) factor) or no edges
    """
    _check_pair(g, labels)
    if labels.num_classes < 2:
        raise UndefinedMetricError("Improved homophily needs at least two classes")
    _require_edges(g)

    h_k = class_wise_homophily(g, labels)
    excess = np.where(np.isnan(h_k), 0.0, h_k - labels.class_fractions)
    return float(np.sum(np.maximum(excess, 0.0)) / (labels.num_classes - 1))


def compatibility_matrix(g: Graph, labels: Labels) -> CompatibilityMatrix:
    """Row-normalized class-to-class edge proportions.

    Rows for classes without outgoing edges are zero and flagged in the mask.
    """
    _check_pair(g, labels)
    _require_edges(g)

    C = labels.num_classes
    pair = labels.values[g.sources] * C + labels.values[g.indices]
    counts = np.bincount(pair, minlength=C * C).reshape(C, C).astype(np.float64)
    row_sums = counts.sum(axis=1)
    mask = row_sums == 0
    values = np.zeros_like(counts)
    values[~mask] = counts[~mask] / row_sums[~mask, None]
    return CompatibilityMatrix(values=values, zero_row_mask=mask, counts=counts)


def _exact_two_hop(g: Graph, v: int) -> np.ndarray:
    nbrs = g.neighbors(v)
    if nbrs.size == 0:
        return nbrs
    reach = np.concatenate([g.indices[g.indptr[w] : g.indptr[w + 1]] for w in nbrs])
    return np.setdiff1d(np.unique(reach), np.append(nbrs, v), assume_unique=True)


def two_hop_node_homophily(g: Graph, labels: Labels, k_samples: int, seed: int = 0) -> float:
    """Node homophily over exact two-hop neighborhoods.

    The exact two-hop set of v excludes v and its direct neighbors. A sample
    of ``k_samples`` nodes estimates the average; nodes with an empty set are
    skipped. With ``k_samples >= n`` every node is used and the seed is ignored.

    Raises:
        UndefinedMetricError: If no considered node has a two-hop neighborhood
    """
    _check_pair(g, labels)
    if k_samples < 1:
        raise ValueError(f"k_samples must be at least 1, got {k_samples}")

    if k_samples >= g.n:
        nodes = np.arange(g.n)
    else:
        nodes = np.sort(make_rng(seed, Stream.TWO_HOP).choice(g.n, size=k_samples, replace=False))

    ratios = []
    for v in nodes:
        reach = _exact_two_hop(g, int(v))
        if reach.size:
            ratios.append(np.count_nonzero(labels.values[reach] == labels.values[v]) / reach.size)

    if not ratios:
        raise UndefinedMetricError("No sampled node has a non-empty two-hop neighborhood")
    skipped = nodes.size - len(ratios)
    if skipped:
        logger.debug(f"Skipped {skipped} nodes with empty two-hop neighborhoods")
    return float(np.mean(ratios))


def homophily_report(
    g: Graph,
    labels: Labels,
    two_hop_samples: int | None = None,
    seed: int = 0,
) -> HomophilyReport:
    """Compute every diagnostic into one report.

    Args:
        g: Graph (use ``g.symmetrized()`` beforehand to treat it as undirected)
        labels: Node labels
        two_hop_samples: Sample size for the two-hop estimate; None skips it
        seed: Root seed for two-hop sampling

    Returns:
        HomophilyReport; ĥ is None with a reason string when C = 1, and so is
        the two-hop estimate when no node has a two-hop neighborhood
    """
    improved: float | None
    reason: str | None = None
    try:
        improved = improved_homophily(g, labels)
    except UndefinedMetricError as e:
        improved, reason = None, str(e)

    class_wise = [None if np.isnan(h) else float(h) for h in class_wise_homophily(g, labels)]
    two_hop: float | None = None
    two_hop_reason: str | None = None
    if two_hop_samples:
        try:
            two_hop = two_hop_node_homophily(g, labels, two_hop_samples, seed)
        except UndefinedMetricError as e:
            two_hop_reason = str(e)

    return HomophilyReport(
        edge_homophily=edge_homophily(g, labels),
        node_homophily=node_homophily(g, labels),
        improved=improved,
        improved_reason=reason,
        class_wise=class_wise,
        class_fractions=[float(f) for f in labels.class_fractions],
        num_nodes=g.n,
        num_edges=g.num_edges,
        num_classes=labels.num_classes,
        directed=g.directed,
        isolated_nodes=int(np.count_nonzero(g.degrees == 0)),
        two_hop_node_homophily=two_hop,
        two_hop_reason=two_hop_reason,
    )

"""Deterministic synthetic graph generators.

Three families:

- canonical pattern graphs (pure homophily, pure heterophily, one neighbor
  per class), which are seed-independent;
- labeled Erdős–Rényi graphs for the class-imbalance null model;
- planted two-channel datasets whose adjacency and features carry
  controllable, independent class signal.
"""

import logging
from dataclasses import asdict, dataclass, field
from typing import Any, Literal

import numpy as np

from linkx_core.errors import UndefinedMetricError
from linkx_core.graph import Dataset, Labels, build_graph
from linkx_core.metrics import edge_homophily, improved_homophily
from linkx_core.rng import Stream, make_rng

logger = logging.getLogger(__name__)

SynthKind = Literal["pure_homophily", "pure_heterophily", "one_per_class", "erdos_renyi", "planted_partition"]
AdjacencySignal = Literal["none", "monophilous", "heterophilous"]
FeatureSignal = Literal["none", "gaussian"]

PATTERN_KINDS = ("pure_homophily", "pure_heterophily", "one_per_class")
SYNTH_KINDS = (*PATTERN_KINDS, "erdos_renyi", "planted_partition")


@dataclass
class SynthSpec:
    """Parameters for one generated dataset."""

    kind: SynthKind
    n: int
    num_classes: int = 2
    p: float = 0.25
    """Edge probability (Erdős–Rényi) or within-class mixing weight (planted partition)."""

    q: float = 1.0
    """Between-class mixing weight (planted partition, heterophilous wiring)."""

    class_fractions: tuple[float, ...] | None = None
    """Class proportions for Erdős–Rényi labels; None means balanced."""

    seed: int = 0
    adjacency_signal: AdjacencySignal = "none"
    feature_signal: FeatureSignal = "gaussian"
    noise: float = 0.0
    """Standard deviation of Gaussian feature noise."""

    edge_noise: float = 0.0
    """Probability that a planted edge ignores the class signal."""

    degree: int = 10
    """Expected average degree of planted-partition graphs."""

    feature_dim: int = 8

    def validate(self) -> None:
        """Raise ValueError on inconsistent parameters."""
        if self.kind not in SYNTH_KINDS:
            raise ValueError(f"Unknown synth kind '{self.kind}'")
        if self.num_classes < 1:
            raise ValueError(f"Need at least one class, got {self.num_classes}")
        for name in ("p", "q", "edge_noise"):
            value = getattr(self, name)
            if not 0.0 <= value <= 1.0:
                raise ValueError(f"{name} must lie in [0, 1], got {value}")
        if self.class_fractions is not None:
            _check_fractions(self.class_fractions)
            if len(self.class_fractions) != self.num_classes:
                raise ValueError(
                    f"Got {len(self.class_fractions)} class fractions for {self.num_classes} classes"
                )
        if self.noise < 0:
            raise ValueError(f"noise must be non-negative, got {self.noise}")

    def fractions(self) -> tuple[float, ...]:
        if self.class_fractions is not None:
            return tuple(self.class_fractions)
        return tuple([1.0 / self.num_classes] * self.num_classes)

    def as_dict(self) -> dict[str, Any]:
        out = asdict(self)
        if out["class_fractions"] is not None:
            out["class_fractions"] = list(out["class_fractions"])
        return out


@dataclass
class TwoChannelSample:
    """Planted dataset plus the mixing matrix its edges were drawn from."""

    dataset: Dataset
    mixing: np.ndarray
    """C x C class mixing used for wiring (uniform when edges ignore labels)."""

    preferences: np.ndarray | None = field(default=None)
    """Hidden preferred class of every node (monophilous wiring only)."""


def _check_fractions(fractions: tuple[float, ...] | list[float] | np.ndarray) -> None:
    arr = np.asarray(fractions, dtype=np.float64)
    if arr.size == 0 or (arr < 0).any():
        raise ValueError(f"Class fractions must be non-negative and non-empty, got {list(arr)}")
    if abs(arr.sum() - 1.0) > 1e-9:
        raise ValueError(f"Class fractions must sum to 1, got {arr.sum()!r}")


def _pattern_features(labels: np.ndarray, num_classes: int) -> np.ndarray:
    """One-hot class indicators with a trailing all-zero noise row."""
    features = np.zeros((num_classes + 1, labels.size))
    features[labels, np.arange(labels.size)] = 1.0
    return features


def largest_remainder_counts(fractions: tuple[float, ...] | list[float], n: int) -> np.ndarray:
    """Integer class sizes summing to n, apportioned by largest remainder."""
    raw = np.asarray(fractions, dtype=np.float64) * n
    counts = np.floor(raw).astype(np.int64)
    leftover = n - int(counts.sum())
    order = np.argsort(-(raw - counts), kind="stable")
    counts[order[:leftover]] += 1
    return counts


def generate_pattern(spec: SynthSpec) -> Dataset:
    """Canonical label-topology example graph (seed-independent).

    - pure_homophily: C disjoint same-class cliques of n / C nodes
    - pure_heterophily: complete bipartite graph between two classes
    - one_per_class: every node has exactly one neighbor in each class
      (n divisible by 2C); nodes come in same-class pairs, and the s-th
      member of each pair links to the s-th member of every other class's
      pair in the same block

    Raises:
        ValueError: If n and C are incompatible with the pattern
    """
    spec.validate()
    n, C = spec.n, spec.num_classes

    if spec.kind == "pure_homophily":
        if n % C or n // C < 2:
            raise ValueError(f"pure_homophily needs n divisible by C with at least 2 nodes per class (n={n}, C={C})")
        size = n // C
        labels = np.arange(n) // size
        blocks = [np.arange(k * size, (k + 1) * size) for k in range(C)]
        edges = [(int(a), int(b)) for block in blocks for i, a in enumerate(block) for b in block[i + 1 :]]

    elif spec.kind == "pure_heterophily":
        if C != 2 or n < 2:
            raise ValueError(f"pure_heterophily needs C = 2 and n >= 2 (n={n}, C={C})")
        half = (n + 1) // 2
        labels = (np.arange(n) >= half).astype(np.int64)
        edges = [(a, b) for a in range(half) for b in range(half, n)]

    elif spec.kind == "one_per_class":
        if n % (2 * C):
            raise ValueError(f"one_per_class needs n divisible by 2C (n={n}, C={C})")
        block = 2 * C

        def node(b: int, k: int, s: int) -> int:
            return b * block + 2 * k + s

        labels = (np.arange(n) % block) // 2
        edges = []
        for b in range(n // block):
            for k in range(C):
                edges.append((node(b, k, 0), node(b, k, 1)))
                for other in range(k + 1, C):
                    for s in (0, 1):
                        edges.append((node(b, k, s), node(b, other, s)))
    else:
        raise ValueError(f"'{spec.kind}' is not a pattern kind; expected one of {PATTERN_KINDS}")

    graph = build_graph(edges, n, directed=False)
    return Dataset(graph=graph, features=_pattern_features(labels, C), labels=Labels(labels, C))


def generate_er_labeled(n: int, p: float, class_fractions: tuple[float, ...] | list[float], seed: int) -> Dataset:
    """Undirected Erdős–Rényi graph with labels independent of the edges.

    Each unordered pair is kept with probability p. Class sizes come from
    largest-remainder rounding of ``class_fractions * n`` and classes occupy
    consecutive index ranges.

    Raises:
        ValueError: If n < 2, p is outside (0, 1], or fractions do not sum to 1
    """
    if n < 2:
        raise ValueError(f"Erdős–Rényi generation needs n >= 2, got {n}")
    if not 0.0 < p <= 1.0:
        raise ValueError(f"p must lie in (0, 1], got {p}")
    _check_fractions(class_fractions)

    counts = largest_remainder_counts(class_fractions, n)
    labels = np.repeat(np.arange(len(counts)), counts)

    rng = make_rng(seed, Stream.GRAPH)
    rows, cols = np.triu_indices(n, k=1)
    keep = rng.random(rows.size) < p
    graph = build_graph(np.column_stack([rows[keep], cols[keep]]), n, directed=False)

    C = len(counts)
    return Dataset(graph=graph, features=_pattern_features(labels, C), labels=Labels(labels, C))


def _mixing_for(spec: SynthSpec, mixing: np.ndarray | None) -> np.ndarray:
    C = spec.num_classes
    if mixing is None:
        if spec.adjacency_signal == "heterophilous":
            mixing = np.where(np.eye(C, dtype=bool), spec.p, spec.q)
        else:
            mixing = np.ones((C, C))
    mixing = np.asarray(mixing, dtype=np.float64)
    if mixing.shape != (C, C):
        raise ValueError(f"Mixing matrix must be {C}x{C}, got {mixing.shape}")
    if (mixing < 0).any():
        raise ValueError("Mixing matrix entries must be non-negative")
    row_sums = mixing.sum(axis=1)
    if (row_sums == 0).any():
        raise ValueError(f"Degenerate mixing matrix: class {int(np.argmin(row_sums))} has an all-zero row")
    return mixing / row_sums[:, None]


def _draw_in_groups(rng: np.random.Generator, groups: np.ndarray, wanted: np.ndarray, num_groups: int) -> np.ndarray:
    """For each entry of ``wanted``, a uniformly chosen node whose group equals it."""
    order = np.argsort(groups, kind="stable")
    sizes = np.bincount(groups, minlength=num_groups)
    starts = np.concatenate([[0], np.cumsum(sizes)[:-1]])
    offset = np.floor(rng.random(wanted.size) * sizes[wanted]).astype(np.int64)
    return order[starts[wanted] + offset]


def generate_two_channel(
    n: int,
    num_classes: int,
    adjacency_signal: AdjacencySignal,
    feature_signal: FeatureSignal,
    noise: float,
    seed: int,
    *,
    degree: int = 10,
    feature_dim: int = 8,
    edge_noise: float = 0.0,
    mixing: np.ndarray | None = None,
) -> TwoChannelSample:
    """Planted-partition dataset with independent adjacency and feature signal.

    Every node initiates ``degree // 2`` undirected edges. Wiring:

    - none: targets uniform over all nodes
    - heterophilous: target class drawn from the node's row of ``mixing``
      (default: uniform over the other classes), then a uniform member
    - monophilous: every node carries a hidden preferred class; a node of
      class k links to nodes that prefer k, so neighbor labels look random
      but neighbor identities reveal the class

    With probability ``edge_noise`` a stub ignores the signal and picks a
    uniform target. Features are Gaussian around per-class means
    (``feature_signal="gaussian"``) or pure standard-normal noise.

    Raises:
        ValueError: If n < 10 C or the mixing matrix has an all-zero row
    """
    spec = SynthSpec(
        kind="planted_partition",
        n=n,
        num_classes=num_classes,
        p=0.0,
        q=1.0,
        seed=seed,
        adjacency_signal=adjacency_signal,
        feature_signal=feature_signal,
        noise=noise,
        edge_noise=edge_noise,
        degree=degree,
        feature_dim=feature_dim,
    )
    return generate_planted(spec, mixing=mixing)


def generate_planted(spec: SynthSpec, mixing: np.ndarray | None = None) -> TwoChannelSample:
    """``generate_two_channel`` driven by a SynthSpec."""
    spec.validate()
    n, C = spec.n, spec.num_classes
    if n < 10 * C:
        raise ValueError(f"Planted datasets need n >= 10 C (n={n}, C={C})")
    if spec.adjacency_signal not in ("none", "monophilous", "heterophilous"):
        raise ValueError(f"Unknown adjacency signal '{spec.adjacency_signal}'")
    if spec.feature_signal not in ("none", "gaussian"):
        raise ValueError(f"Unknown feature signal '{spec.feature_signal}'")
    planted = _mixing_for(spec, mixing)

    labels = make_rng(spec.seed, Stream.LABELS, 0).permutation(np.arange(n) % C)
    stubs_per_node = max(1, spec.degree // 2)
    src = np.repeat(np.arange(n), stubs_per_node)

    rng = make_rng(spec.seed, Stream.GRAPH)
    preferences = None
    if spec.adjacency_signal == "none":
        dst = rng.integers(0, n, size=src.size)
    elif spec.adjacency_signal == "heterophilous":
        cum = np.cumsum(planted, axis=1)
        draw = rng.random(src.size)
        target_class = np.minimum((draw[:, None] >= cum[labels[src]]).sum(axis=1), C - 1)
        dst = _draw_in_groups(rng, labels, target_class, C)
    else:
        preferences = make_rng(spec.seed, Stream.LABELS, 1).permutation(np.arange(n) % C)
        dst = _draw_in_groups(rng, preferences, labels[src], C)

    if spec.edge_noise > 0:
        flip = rng.random(src.size) < spec.edge_noise
        dst = np.where(flip, rng.integers(0, n, size=src.size), dst)

    graph = build_graph(np.column_stack([src, dst]), n, directed=False)

    feat_rng = make_rng(spec.seed, Stream.FEATURES)
    if spec.feature_signal == "gaussian":
        means = feat_rng.normal(size=(spec.feature_dim, C))
        features = means[:, labels] + spec.noise * feat_rng.normal(size=(spec.feature_dim, n))
    else:
        features = feat_rng.normal(size=(spec.feature_dim, n))

    truth = planted if spec.adjacency_signal == "heterophilous" else np.full((C, C), 1.0 / C)
    logger.debug(f"Planted {graph.num_edges} edges over {n} nodes ({spec.adjacency_signal} wiring)")
    return TwoChannelSample(
        dataset=Dataset(graph=graph, features=features, labels=Labels(labels, C)),
        mixing=truth,
        preferences=preferences,
    )


def generate(spec: SynthSpec) -> Dataset:
    """Dispatch a SynthSpec to its generator."""
    spec.validate()
    if spec.kind in PATTERN_KINDS:
        return generate_pattern(spec)
    if spec.kind == "erdos_renyi":
        return generate_er_labeled(spec.n, spec.p, spec.fractions(), spec.seed)
    return generate_planted(spec).dataset


@dataclass
class NullModelPoint:
    """Sample statistics of h and ĥ at one majority-class fraction."""

    majority_fraction: float
    mean_h: float
    se_h: float
    mean_improved: float
    se_improved: float
    expected_h: float
    """Exact expectation of h under label-independent wiring."""

    samples: int


def expected_edge_homophily(counts: np.ndarray) -> float:
    """Same-class share of all ordered node pairs: sum n_k (n_k - 1) / (n (n - 1))."""
    counts = np.asarray(counts, dtype=np.float64)
    n = counts.sum()
    return float(np.sum(counts * (counts - 1)) / (n * (n - 1)))


def null_model_sweep(
    n: int = 100,
    p: float = 0.25,
    majority_fractions: tuple[float, ...] = (0.5, 0.6, 0.7, 0.8, 0.9),
    samples: int = 100,
    seed: int = 0,
) -> list[NullModelPoint]:
    """Two-class Erdős–Rényi experiment over a sweep of class imbalance.

    Sample i at every fraction uses seed ``seed + i``.
    """
    if samples < 2:
        raise ValueError(f"Need at least 2 samples for a standard error, got {samples}")

    points = []
    for q in majority_fractions:
        fractions = (q, 1.0 - q)
        hs, hhats = [], []
        for i in range(samples):
            data = generate_er_labeled(n, p, fractions, seed + i)
            try:
                h, hhat = edge_homophily(data.graph, data.labels), improved_homophily(data.graph, data.labels)
            except UndefinedMetricError as e:  # pragma: no cover - only for degenerate p
                logger.warning(f"Skipping sample {i} at fraction {q}: {e}")
                continue
            hs.append(h)
            hhats.append(hhat)
        h_arr, hh_arr = np.asarray(hs), np.asarray(hhats)
        points.append(
            NullModelPoint(
                majority_fraction=q,
                mean_h=float(h_arr.mean()),
                se_h=float(h_arr.std(ddof=1) / np.sqrt(h_arr.size)),
                mean_improved=float(hh_arr.mean()),
                se_improved=float(hh_arr.std(ddof=1) / np.sqrt(hh_arr.size)),
                expected_h=expected_edge_homophily(largest_remainder_counts(fractions, n)),
                samples=h_arr.size,
            )
        )
        logger.info(f"Null model q={q}: mean h={points[-1].mean_h:.4f}, mean ĥ={points[-1].mean_improved:.4f}")
    return points

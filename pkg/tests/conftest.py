"""Pytest configuration and fixtures."""

import sys
from pathlib import Path

import numpy as np
import pytest

# Add src directory to Python path for imports
src_path = Path(__file__).parent.parent / "src"
sys.path.insert(0, str(src_path))

from linkx_core.config import TrainConfig  # noqa: E402
from linkx_core.dataset_io import save_dataset  # noqa: E402
from linkx_core.graph import Dataset, Labels, build_graph  # noqa: E402
from linkx_core.synth import SynthSpec, generate_pattern, generate_two_channel  # noqa: E402


def random_dataset(seed: int, n: int = 8, num_features: int = 3, num_classes: int = 3, edges: int = 14) -> Dataset:
    """Small random dataset for gradient and oracle checks."""
    rng = np.random.default_rng(seed)
    pairs = rng.integers(0, n, size=(edges, 2))
    graph = build_graph(pairs, n, directed=False)
    features = rng.normal(size=(num_features, n))
    labels = Labels(rng.integers(0, num_classes, size=n), num_classes)
    return Dataset(graph=graph, features=features, labels=labels)


@pytest.fixture
def pattern_pure_homophily() -> Dataset:
    return generate_pattern(SynthSpec(kind="pure_homophily", n=4, num_classes=2))


@pytest.fixture
def pattern_pure_heterophily() -> Dataset:
    return generate_pattern(SynthSpec(kind="pure_heterophily", n=4, num_classes=2))


@pytest.fixture
def pattern_one_per_class_two() -> Dataset:
    return generate_pattern(SynthSpec(kind="one_per_class", n=4, num_classes=2))


@pytest.fixture
def pattern_one_per_class_three() -> Dataset:
    return generate_pattern(SynthSpec(kind="one_per_class", n=6, num_classes=3))


@pytest.fixture
def separable_dataset() -> Dataset:
    """Noiseless class-mean features, label-independent edges."""
    return generate_two_channel(200, 2, "none", "gaussian", 0.0, seed=0).dataset


@pytest.fixture
def small_config() -> TrainConfig:
    """Short runs over a one-point grid per model."""
    return TrainConfig(
        epochs=20,
        splits=2,
        grids={
            "mlp": {"hidden": [8], "layers": [2]},
            "link": {"weight_decay": [0.001]},
            "linkx": {"hidden": [8], "final_layers": [1]},
            "concat-mlp": {"hidden": [8], "layers": [1]},
            "labelprop": {"alpha": [0.5, 0.9]},
            "sgc": {"weight_decay": [0.001]},
        },
    )


@pytest.fixture
def dataset_dir(tmp_path, separable_dataset) -> Path:
    return save_dataset(separable_dataset, tmp_path / "separable")


@pytest.fixture
def make_random_dataset():
    return random_dataset

"""linkx-core: homophily diagnostics, synthetic graphs and simple scalable node classifiers."""

__version__ = "0.1.0"

from linkx_core.checkpoint import Checkpoint, evaluate_checkpoint, load_checkpoint, save_checkpoint
from linkx_core.config import DEFAULT_GRIDS, TrainConfig, load_train_config, resolve_workers
from linkx_core.dataset_io import dataset_checksum, load_dataset, save_dataset
from linkx_core.errors import (
    CheckpointError,
    DatasetFormatError,
    GraphError,
    LinkxError,
    NonFiniteError,
    ShapeError,
    UndefinedMetricError,
)
from linkx_core.evaluation import Split, accuracy, make_splits, roc_auc
from linkx_core.graph import Dataset, Graph, Labels, adjacency_columns, build_graph, degree, relabel_nodes

# Metrics
from linkx_core.metrics import (
    CompatibilityMatrix,
    HomophilyReport,
    class_homophily,
    compatibility_matrix,
    edge_homophily,
    homophily_report,
    improved_homophily,
    node_homophily,
    two_hop_node_homophily,
)

# Models and training
from linkx_core.models import (
    MODEL_KINDS,
    PropagationConfig,
    build_model,
    concat_mlp_forward,
    label_propagation,
    link_forward,
    linkx_forward,
    mlp_forward,
    sgc_logits,
)
from linkx_core.notifier import LoggingNotifier, NoOpNotifier, RunNotifier
from linkx_core.optim import AdamWConfig, OptimizerState, adamw_step
from linkx_core.synth import (
    SynthSpec,
    generate,
    generate_er_labeled,
    generate_pattern,
    generate_two_channel,
    null_model_sweep,
)
from linkx_core.training import ExperimentResult, SplitResult, run_experiment, train_full_batch, train_minibatch

__all__ = [
    "__version__",
    # Graphs and data
    "Graph",
    "Labels",
    "Dataset",
    "build_graph",
    "degree",
    "adjacency_columns",
    "relabel_nodes",
    "load_dataset",
    "save_dataset",
    "dataset_checksum",
    # Metrics
    "CompatibilityMatrix",
    "HomophilyReport",
    "edge_homophily",
    "node_homophily",
    "class_homophily",
    "improved_homophily",
    "compatibility_matrix",
    "two_hop_node_homophily",
    "homophily_report",
    # Synthetic data
    "SynthSpec",
    "generate",
    "generate_pattern",
    "generate_er_labeled",
    "generate_two_channel",
    "null_model_sweep",
    # Models
    "MODEL_KINDS",
    "PropagationConfig",
    "build_model",
    "mlp_forward",
    "link_forward",
    "linkx_forward",
    "concat_mlp_forward",
    "sgc_logits",
    "label_propagation",
    # Training
    "AdamWConfig",
    "OptimizerState",
    "adamw_step",
    "TrainConfig",
    "DEFAULT_GRIDS",
    "load_train_config",
    "resolve_workers",
    "Split",
    "make_splits",
    "accuracy",
    "roc_auc",
    "train_full_batch",
    "train_minibatch",
    "run_experiment",
    "SplitResult",
    "ExperimentResult",
    "Checkpoint",
    "save_checkpoint",
    "load_checkpoint",
    "evaluate_checkpoint",
    # Notifications
    "RunNotifier",
    "NoOpNotifier",
    "LoggingNotifier",
    # Errors
    "LinkxError",
    "GraphError",
    "ShapeError",
    "UndefinedMetricError",
    "NonFiniteError",
    "CheckpointError",
    "DatasetFormatError",
]

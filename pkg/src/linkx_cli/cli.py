"""CLI entry point for linkx: dataset statistics, synthetic data, training and evaluation."""

import argparse
import json
import logging
import sys
from pathlib import Path
from typing import Any

from linkx_cli import __version__
from linkx_cli.formatting import compatibility_csv, format_duration, format_summary, null_model_csv, render_json
from linkx_cli.manifest import MANIFEST_FILE, RunManifest
from linkx_core.checkpoint import Checkpoint, evaluate_checkpoint, load_checkpoint, save_checkpoint
from linkx_core.config import TrainConfig, load_train_config, resolve_workers
from linkx_core.dataset_io import dataset_checksum, load_dataset, save_dataset
from linkx_core.errors import LinkxError
from linkx_core.metrics import compatibility_matrix, homophily_report
from linkx_core.models import MODEL_KINDS
from linkx_core.notifier import LoggingNotifier
from linkx_core.synth import SYNTH_KINDS, SynthSpec, generate, null_model_sweep
from linkx_core.training import ExperimentResult, check_batch_mode, run_experiment

logger = logging.getLogger(__name__)

RESULTS_FILE = "results.json"
TIMINGS_FILE = "timings.json"
CHECKPOINT_DIR = "checkpoints"

KIND_ALIASES = {"er": "erdos_renyi", "planted": "planted_partition"}

# Default training config; every key is optional
DEFAULT_CONFIG_TEMPLATE = """\
# Auto-generated config.toml for linkx

[train]
lr = 0.01
weight_decay = 0.001
epochs = 500
batch = "full"          # "full" or "iid"
batch_fraction = 0.1    # iid minibatch size as a fraction of the train set
steps_per_epoch = 1
metric = "accuracy"     # "accuracy" or "rocauc"
splits = 5
hops = 1                # 1 or 2, label propagation and SGC

[optimizer]
beta1 = 0.9
beta2 = 0.999
eps = 1e-8

[propagation]
iterations = 50
normalization = "sym"   # "sym" or "row"
symmetrize = true

[grid.mlp]
hidden = [16, 32, 64, 128, 256]
layers = [2, 3]

[grid.link]
weight_decay = [0.001, 0.01, 0.1]

[grid.linkx]
hidden = [16, 32, 128, 256]
final_layers = [1, 2, 3]

[grid.concat-mlp]
hidden = [16, 32, 128, 256]
layers = [1, 2, 3]

[grid.labelprop]
alpha = [0.01, 0.1, 0.25, 0.5, 0.75, 0.9, 0.99]

[grid.sgc]
weight_decay = [0.001, 0.01, 0.1]
"""


def create_default_config(config_path: Path) -> bool:
    """
    Create a default config.toml if it doesn't exist.

    Args:
        config_path: Path where config should be created

    Returns:
        True if config was created, False if it already exists

    Raises:
        PermissionError: If unable to write to the directory
        OSError: If other file system errors occur
    """
    if config_path.exists():
        return False

    config_path.parent.mkdir(parents=True, exist_ok=True)
    config_path.write_text(DEFAULT_CONFIG_TEMPLATE)
    return True


def _float_list(text: str) -> tuple[float, ...]:
    try:
        return tuple(float(v) for v in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def _write(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text, encoding="utf-8")


# ============================================================================
# Subcommands
# ============================================================================


def cmd_init_config(args: argparse.Namespace) -> int:
    config_path = Path(args.config).resolve()
    if create_default_config(config_path):
        print(f"Created default config at: {config_path}")
    else:
        print(f"Config already exists at: {config_path}")
    return 0


def cmd_stats(args: argparse.Namespace) -> int:
    """Print the homophily report as JSON, or the compatibility matrix as CSV.

    The JSON always embeds the matrix under ``compatibility``. ``--out``
    additionally writes both files regardless of the stdout format.
    """
    dataset = load_dataset(args.dataset_dir, symmetrize=args.symmetrize)
    report = homophily_report(dataset.graph, dataset.labels, args.two_hop_samples, args.seed)
    report.extra["feature_dim"] = dataset.feature_dim
    cm = compatibility_matrix(dataset.graph, dataset.labels)
    report.extra["compatibility"] = cm.values.tolist()
    report.extra["compatibility_zero_rows"] = cm.zero_row_mask.tolist()

    text = render_json({"dataset_dir": str(args.dataset_dir), "symmetrized": args.symmetrize, **report.as_dict()})
    if args.out:
        out = Path(args.out)
        _write(out / "stats.json", text)
        _write(out / "compatibility.csv", compatibility_csv(cm))
        logger.info(f"Wrote stats to {out}")
    sys.stdout.write(compatibility_csv(cm) if args.format == "csv" else text)
    return 0


def cmd_synth(args: argparse.Namespace) -> int:
    spec = SynthSpec(
        kind=KIND_ALIASES.get(args.kind, args.kind),  # type: ignore[arg-type]
        n=args.n,
        num_classes=args.classes,
        p=args.p,
        q=args.q,
        class_fractions=args.fractions,
        seed=args.seed,
        adjacency_signal=args.adjacency_signal,
        feature_signal=args.feature_signal,
        noise=args.noise,
        edge_noise=args.edge_noise,
        degree=args.degree,
        feature_dim=args.feature_dim,
    )
    dataset = generate(spec)
    out = save_dataset(dataset, args.out_dir, provenance={"generator": spec.as_dict(), "tool_version": __version__})
    print(f"Wrote {spec.kind} dataset (n={dataset.num_nodes}, |E|={dataset.graph.num_edges}) to {out}")
    return 0


def _resolve_train_config(args: argparse.Namespace) -> TrainConfig:
    cfg = load_train_config(args.config) if args.config else TrainConfig()
    return cfg.with_overrides(
        seed=args.seed,
        batch=args.batch,
        splits=args.splits,
        lr=args.lr,
        weight_decay=args.weight_decay,
        hops=args.hops,
        steps_per_epoch=args.steps_per_epoch,
        epochs=args.epochs,
        batch_fraction=args.batch_fraction,
        metric=args.metric,
    )


def _run_training(
    model: str, dataset_dir: Path, symmetrize: bool, cfg: TrainConfig, out: Path, checksum: str | None = None
) -> ExperimentResult:
    """Write the manifest, train, then write results, timings and checkpoints."""
    check_batch_mode(model, cfg.batch)
    dataset = load_dataset(dataset_dir, symmetrize=symmetrize)
    actual = dataset_checksum(dataset_dir)
    if checksum is not None and actual != checksum:
        raise LinkxError(f"Dataset {dataset_dir} changed since the manifest was written (checksum {actual[:12]})")

    manifest = RunManifest(
        subcommand="train",
        config=cfg.as_dict(),
        seed=cfg.seed,
        dataset_dir=str(dataset_dir),
        dataset_checksum=actual,
        artifacts={
            "results": RESULTS_FILE,
            "timings": TIMINGS_FILE,
            **{f"checkpoint_{i}": f"{CHECKPOINT_DIR}/split_{i}" for i in range(cfg.splits)},
        },
        tool_version=__version__,
        options={"model": model, "symmetrize": symmetrize},
    )
    manifest.write(out)

    experiment = run_experiment(model, dataset, cfg, LoggingNotifier(), workers=resolve_workers())
    _write(out / RESULTS_FILE, render_json({"manifest": MANIFEST_FILE, **experiment.as_dict()}))
    _write(out / TIMINGS_FILE, json.dumps(experiment.timings(), indent=2) + "\n")
    for result in experiment.splits:
        save_checkpoint(
            Checkpoint(
                architecture=result.architecture,
                params=result.params,
                seed=cfg.seed,
                split_index=result.split.index,
                split_count=cfg.splits,
                metric=cfg.metric,
                test=result.test,
                dataset_checksum=actual,
                hyper=result.best.hyper,
                symmetrize=symmetrize,
            ),
            out / CHECKPOINT_DIR / f"split_{result.split.index}",
        )
    return experiment


def cmd_train(args: argparse.Namespace) -> int:
    cfg = _resolve_train_config(args)
    out = Path(args.out) if args.out else Path("runs") / f"{args.model}-{cfg.batch}-seed{cfg.seed}"
    experiment = _run_training(args.model, Path(args.dataset_dir), args.symmetrize, cfg, out)
    print(format_summary(args.model, cfg.metric, experiment.test_scores.tolist()))
    print(f"Results written to {out / RESULTS_FILE} ({format_duration(experiment.timings()['total'])})")
    return 0


def cmd_replay(args: argparse.Namespace) -> int:
    manifest = RunManifest.read(args.manifest)
    if manifest.subcommand != "train":
        raise ValueError(f"Only train runs can be replayed, manifest is for '{manifest.subcommand}'")
    if manifest.dataset_dir is None:
        raise ValueError("Manifest has no dataset directory")
    cfg = TrainConfig(**manifest.config)
    model = manifest.options["model"]
    experiment = _run_training(
        model, Path(manifest.dataset_dir), bool(manifest.options.get("symmetrize", False)), cfg, Path(args.out), manifest.dataset_checksum
    )
    print(format_summary(model, cfg.metric, experiment.test_scores.tolist()))
    return 0


def cmd_eval(args: argparse.Namespace) -> int:
    ckpt = load_checkpoint(args.checkpoint)
    dataset = load_dataset(args.dataset_dir, symmetrize=ckpt.symmetrize)
    result = evaluate_checkpoint(ckpt, dataset, dataset_checksum(args.dataset_dir), args.split_seed)
    sys.stdout.write(render_json(result))
    return 0


def cmd_null_model(args: argparse.Namespace) -> int:
    points = null_model_sweep(n=args.n, p=args.p, majority_fractions=args.fractions, samples=args.samples, seed=args.seed)
    text = null_model_csv(points)
    if args.out:
        _write(Path(args.out), text)
        print(f"Wrote null model sweep to {args.out}")
    else:
        sys.stdout.write(text)
    return 0


# ============================================================================
# Argument parsing
# ============================================================================


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="linkx",
        description="Homophily diagnostics and simple scalable models for non-homophilous node classification.",
        epilog="Examples:\n"
        "  linkx synth data/er --kind er --n 100 --p 0.25 --fractions 0.9,0.1 --seed 7\n"
        "  linkx stats data/er\n"
        "  linkx train data/er --model linkx --seed 0\n"
        "  linkx eval runs/linkx-full-seed0/checkpoints/split_0 data/er",
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true", help="Log debug output (per-epoch progress)")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("init-config", help="Write a default training config")
    p.add_argument("-c", "--config", default="config.toml", help="Path to config file (default: config.toml)")
    p.set_defaults(func=cmd_init_config)

    p = sub.add_parser("stats", help="Homophily report of a dataset")
    p.add_argument("dataset_dir", type=Path)
    p.add_argument("--symmetrize", action="store_true", help="Treat directed edges as undirected")
    p.add_argument("--two-hop-samples", type=int, default=None, metavar="K", help="Estimate two-hop homophily from K nodes")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument(
        "--format",
        choices=["json", "csv"],
        default="json",
        help="stdout format: the JSON report (matrix embedded) or the compatibility matrix as CSV",
    )
    p.add_argument("--out", default=None, help="Also write stats.json and compatibility.csv to this directory")
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("synth", help="Generate a synthetic dataset directory")
    p.add_argument("out_dir", type=Path)
    p.add_argument("--kind", required=True, choices=[*SYNTH_KINDS, *KIND_ALIASES])
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--classes", type=int, default=2)
    p.add_argument("--p", type=float, default=0.25)
    p.add_argument("--q", type=float, default=1.0)
    p.add_argument("--fractions", type=_float_list, default=None)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--adjacency-signal", choices=["none", "monophilous", "heterophilous"], default="none")
    p.add_argument("--feature-signal", choices=["none", "gaussian"], default="gaussian")
    p.add_argument("--noise", type=float, default=0.0)
    p.add_argument("--edge-noise", type=float, default=0.0)
    p.add_argument("--degree", type=int, default=10)
    p.add_argument("--feature-dim", type=int, default=8)
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("train", help="Grid-search a model over seeded splits")
    p.add_argument("dataset_dir", type=Path)
    p.add_argument("--model", required=True, choices=MODEL_KINDS)
    p.add_argument("--batch", choices=["full", "iid"], default=None)
    p.add_argument("--splits", type=int, default=None)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("-c", "--config", default=None, help="Training config TOML")
    p.add_argument("--out", default=None, help="Run directory (default: runs/<model>-<batch>-seed<seed>)")
    p.add_argument("--lr", type=float, default=None)
    p.add_argument("--weight-decay", type=float, default=None)
    p.add_argument("--hops", type=int, choices=[1, 2], default=None)
    p.add_argument("--steps-per-epoch", type=int, default=None)
    p.add_argument("--epochs", type=int, default=None)
    p.add_argument("--batch-fraction", type=float, default=None)
    p.add_argument("--metric", choices=["accuracy", "rocauc"], default=None)
    p.add_argument("--symmetrize", action="store_true")
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("eval", help="Recompute the test metric of a checkpoint")
    p.add_argument("checkpoint", type=Path)
    p.add_argument("dataset_dir", type=Path)
    p.add_argument("--split-seed", type=int, default=None, help="Split seed (default: the training seed)")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("null-model", help="Class-imbalanced Erdős–Rényi sweep of h and ĥ")
    p.add_argument("--n", type=int, default=100)
    p.add_argument("--p", type=float, default=0.25)
    p.add_argument("--fractions", type=_float_list, default=(0.5, 0.6, 0.7, 0.8, 0.9), help="Majority-class fractions")
    p.add_argument("--samples", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default=None, help="CSV path (default: stdout)")
    p.set_defaults(func=cmd_null_model)

    p = sub.add_parser("replay", help="Re-run a training run from its manifest")
    p.add_argument("manifest", type=Path, help="manifest.json or a run directory")
    p.add_argument("--out", required=True, help="Run directory for the replay")
    p.set_defaults(func=cmd_replay)

    return parser


def configure_logging(verbose: bool) -> None:
    logging.basicConfig(format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr)
    level = logging.DEBUG if verbose else logging.WARNING
    for name in ("linkx_core", "linkx_cli"):
        logging.getLogger(name).setLevel(level)


def run(argv: list[str] | None = None) -> int:
    """Parse arguments, dispatch, and map errors to exit codes.

    Returns:
        0 on success, 2 for invalid input, 1 for I/O failures, 130 on Ctrl+C
    """
    args: Any = build_parser().parse_args(argv)
    configure_logging(args.verbose)
    try:
        return int(args.func(args))
    except KeyboardInterrupt:
        return 130
    except (LinkxError, ValueError) as e:
        print(f"Error: {e}", file=sys.stderr)
        return 2
    except OSError as e:
        print(f"Error: {e}", file=sys.stderr)
        return 1


def main() -> None:
    """Main entry point for the linkx CLI."""
    sys.exit(run())


if __name__ == "__main__":
    main()

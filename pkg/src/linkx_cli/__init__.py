"""linkx-cli: command line for homophily statistics, synthetic data, training and evaluation."""

__version__ = "0.1.0"

from linkx_cli.cli import main, run
from linkx_cli.manifest import RunManifest

__all__ = [
    "__version__",
    "main",
    "run",
    "RunManifest",
]

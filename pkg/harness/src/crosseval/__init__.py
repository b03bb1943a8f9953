"""crosseval: train-on-synthetic, test-on-real classification harness."""

from .data import DataError, load_labeled_csv
from .harness import (
    EvalConfig,
    EvalResult,
    MatrixRow,
    format_matrix_table,
    run_eval,
    run_matrix,
    write_artifacts,
)
from .metrics import confusion_matrix, metrics_from_confusion
from .models import MODEL_KINDS, MODEL_TITLES, build_model

__version__ = "0.1.0"

__all__ = [
    "DataError",
    "EvalConfig",
    "EvalResult",
    "MODEL_KINDS",
    "MODEL_TITLES",
    "MatrixRow",
    "build_model",
    "confusion_matrix",
    "format_matrix_table",
    "load_labeled_csv",
    "metrics_from_confusion",
    "run_eval",
    "run_matrix",
    "write_artifacts",
    "__version__",
]

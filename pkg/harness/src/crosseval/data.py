"""CSV loading for labeled tabular datasets.

The harness is decoupled from any generator: it consumes plain CSV files
whose columns are numeric features plus one label column named ``Label``
(or ``label``).
"""

from __future__ import annotations

import numpy as np
import pandas as pd


class DataError(ValueError):
    pass


def load_labeled_csv(path: str) -> tuple[np.ndarray, np.ndarray, list[str]]:
    """Load a CSV into (features, labels, feature_column_names)."""
    frame = pd.read_csv(path)
    label_col = None
    for candidate in ("Label", "label"):
        if candidate in frame.columns:
            label_col = candidate
            break
    if label_col is None:
        raise DataError(f"{path}: no 'Label' column")
    y = frame[label_col].to_numpy()
    features = frame.drop(columns=[label_col])
    if features.empty or features.shape[1] == 0:
        raise DataError(f"{path}: no feature columns")
    try:
        x = features.to_numpy(dtype=float)
    except (TypeError, ValueError) as exc:
        raise DataError(f"{path}: non-numeric feature values ({exc})") from exc
    return x, y, list(features.columns)


def align_columns(
    train_cols: list[str], test_frame_cols: list[str]
) -> list[int]:
    """Indices that reorder test columns into train order; error on mismatch."""
    if set(train_cols) != set(test_frame_cols):
        missing = sorted(set(train_cols) ^ set(test_frame_cols))
        raise DataError(f"train/test column sets differ (mismatched: {missing})")
    position = {name: i for i, name in enumerate(test_frame_cols)}
    return [position[name] for name in train_cols]

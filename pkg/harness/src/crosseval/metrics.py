"""Confusion-matrix based multiclass metrics with macro averaging."""

from __future__ import annotations

import numpy as np


def confusion_matrix(y_true: np.ndarray, y_pred: np.ndarray, classes: list) -> np.ndarray:
    """Count matrix with true classes as rows and predicted classes as columns."""
    index = {c: i for i, c in enumerate(classes)}
    cm = np.zeros((len(classes), len(classes)), dtype=np.int64)
    for t, p in zip(y_true, y_pred):
        cm[index[t], index[p]] += 1
    return cm


def metrics_from_confusion(cm: np.ndarray) -> dict:
    """Macro precision/recall/F1 plus accuracy, all derived from the matrix.

    Per-class scores use the 0-when-undefined convention (a class with no
    predictions has precision 0; a class with no true rows has recall 0), so
    metrics recomputed from an emitted matrix always reproduce the report.
    """
    total = int(cm.sum())
    if total == 0:
        raise ValueError("empty confusion matrix")
    diag = np.diag(cm).astype(float)
    predicted = cm.sum(axis=0).astype(float)
    actual = cm.sum(axis=1).astype(float)

    precision = np.divide(diag, predicted, out=np.zeros_like(diag), where=predicted > 0)
    recall = np.divide(diag, actual, out=np.zeros_like(diag), where=actual > 0)
    pr_sum = precision + recall
    f1 = np.divide(2 * precision * recall, pr_sum, out=np.zeros_like(diag), where=pr_sum > 0)

    return {
        "precision": float(precision.mean()),
        "recall": float(recall.mean()),
        "f1": float(f1.mean()),
        "accuracy": float(diag.sum() / total),
        "per_class": {
            "precision": [float(v) for v in precision],
            "recall": [float(v) for v in recall],
            "f1": [float(v) for v in f1],
            "support": [int(v) for v in actual],
        },
    }

"""Cross-domain evaluation: fit on one CSV, score on another.

The headline use is functional-fidelity testing of synthetic datasets:
train a classifier exclusively on synthetic rows and measure how well it
recovers the classes of a real capture. Reports carry macro-averaged
precision/recall/F1, accuracy, the full confusion matrix, and the exact
hyperparameters used, so every number is reproducible from the artifacts.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from .data import DataError, align_columns, load_labeled_csv
from .metrics import confusion_matrix, metrics_from_confusion
from .models import MODEL_KINDS, MODEL_TITLES, PREPROCESSING, build_model, recorded_params

METRIC_AVERAGING = "macro"


@dataclass
class EvalConfig:
    train_path: str
    test_path: str
    model_kind: str
    seed: int = 0

    def __post_init__(self) -> None:
        if self.model_kind not in MODEL_KINDS:
            raise ValueError(f"unknown model kind {self.model_kind!r}")


@dataclass
class EvalResult:
    model_kind: str
    train_path: str
    test_path: str
    seed: int
    precision: float
    recall: float
    f1: float
    accuracy: float
    classes: list
    confusion: np.ndarray
    per_class: dict
    params: dict
    preprocessing: str
    train_rows: int = 0
    test_rows: int = 0

    def to_dict(self) -> dict:
        return {
            "model_kind": self.model_kind,
            "model_title": MODEL_TITLES[self.model_kind],
            "train_path": self.train_path,
            "test_path": self.test_path,
            "train_rows": self.train_rows,
            "test_rows": self.test_rows,
            "seed": self.seed,
            "metric_averaging": METRIC_AVERAGING,
            "preprocessing": self.preprocessing,
            "precision": self.precision,
            "recall": self.recall,
            "f1": self.f1,
            "accuracy": self.accuracy,
            "classes": [int(c) for c in self.classes],
            "confusion_matrix": self.confusion.tolist(),
            "per_class": self.per_class,
            "hyperparameters": self.params,
        }


def run_eval(cfg: EvalConfig) -> EvalResult:
    """Fit the configured model on the train CSV and score it on the test CSV."""
    x_train, y_train, train_cols = load_labeled_csv(cfg.train_path)
    x_test_raw, y_test, test_cols = load_labeled_csv(cfg.test_path)
    order = align_columns(train_cols, test_cols)
    x_test = x_test_raw[:, order]

    train_classes = sorted(set(int(v) for v in y_train))
    if len(train_classes) < 2:
        raise DataError(f"{cfg.train_path}: training set has a single class {train_classes}")

    model = build_model(cfg.model_kind, cfg.seed)
    model.fit(x_train, y_train)
    y_pred = model.predict(x_test)

    classes = sorted(set(int(v) for v in y_test) | set(int(v) for v in y_pred))
    cm = confusion_matrix(y_test.astype(int), y_pred.astype(int), classes)
    scores = metrics_from_confusion(cm)

    return EvalResult(
        model_kind=cfg.model_kind,
        train_path=cfg.train_path,
        test_path=cfg.test_path,
        seed=cfg.seed,
        precision=scores["precision"],
        recall=scores["recall"],
        f1=scores["f1"],
        accuracy=scores["accuracy"],
        classes=classes,
        confusion=cm,
        per_class=scores["per_class"],
        params=recorded_params(model),
        preprocessing=PREPROCESSING[cfg.model_kind],
        train_rows=len(y_train),
        test_rows=len(y_test),
    )


def write_artifacts(result: EvalResult, out_dir: str | Path, tag: str | None = None) -> list[str]:
    """Write report JSON, confusion CSV, and a rendered confusion-matrix image."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    stem = tag or result.model_kind

    report_path = out / f"{stem}_report.json"
    report_path.write_text(json.dumps(result.to_dict(), indent=2) + "\n", "utf-8")

    cm_path = out / f"{stem}_confusion.csv"
    header = "true\\pred," + ",".join(str(c) for c in result.classes)
    lines = [header]
    for i, c in enumerate(result.classes):
        lines.append(f"{c}," + ",".join(str(int(v)) for v in result.confusion[i]))
    cm_path.write_text("\n".join(lines) + "\n", "utf-8")

    png_path = out / f"{stem}_confusion.png"
    _render_confusion(result, png_path)
    return [str(report_path), str(cm_path), str(png_path)]


def _render_confusion(result: EvalResult, path: Path) -> None:
    cm = result.confusion
    fig, ax = plt.subplots(figsize=(4.5, 4))
    image = ax.imshow(cm, cmap="Blues")
    ax.set_title(f"{MODEL_TITLES[result.model_kind]} (acc {result.accuracy:.4f})")
    ax.set_xlabel("predicted")
    ax.set_ylabel("true")
    ax.set_xticks(range(len(result.classes)), [str(c) for c in result.classes])
    ax.set_yticks(range(len(result.classes)), [str(c) for c in result.classes])
    threshold = cm.max() / 2 if cm.max() else 0
    for i in range(cm.shape[0]):
        for j in range(cm.shape[1]):
            color = "white" if cm[i, j] > threshold else "black"
            ax.text(j, i, str(int(cm[i, j])), ha="center", va="center", color=color)
    fig.colorbar(image, ax=ax, shrink=0.8)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


@dataclass
class MatrixRow:
    cfg: EvalConfig
    result: EvalResult | None = None
    error: str | None = None


def run_matrix(cfgs: list[EvalConfig]) -> list[MatrixRow]:
    """Evaluate every config; failures are marked per row, never fatal."""
    rows = []
    for cfg in cfgs:
        try:
            rows.append(MatrixRow(cfg=cfg, result=run_eval(cfg)))
        except (DataError, ValueError, OSError) as exc:
            rows.append(MatrixRow(cfg=cfg, error=str(exc)))
    return rows


def format_matrix_table(rows: list[MatrixRow]) -> str:
    """Aligned text table: one block per model kind, fixed column order."""
    lines: list[str] = []
    for kind in MODEL_KINDS:
        block = [row for row in rows if row.cfg.model_kind == kind]
        if not block:
            continue
        lines.append(f"=== {MODEL_TITLES[kind]} ===")
        lines.append(f"{'Train set':<28}{'Precision':>11}{'Recall':>9}{'F1-Score':>10}{'Accuracy':>10}")
        for row in block:
            name = Path(row.cfg.train_path).name
            if row.result is None:
                lines.append(f"{name:<28}FAILED: {row.error}")
            else:
                r = row.result
                lines.append(
                    f"{name:<28}{r.precision:>11.4f}{r.recall:>9.4f}{r.f1:>10.4f}{r.accuracy:>10.4f}"
                )
        lines.append("")
    return "\n".join(lines)

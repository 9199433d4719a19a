"""Classification metrics: confusion counts, per-class and macro-averaged
precision/recall/F1, and the plain-text summary table used for fold reports.

Zero-denominator cases (a class never predicted, or never present) score 0
rather than NaN so that model selection stays total-ordered.  Macro averages
are unweighted means over classes.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = [
    "ConfusionMatrix",
    "MetricsReport",
    "confusion",
    "report",
    "macro_f1_score",
    "format_summary_table",
]


@dataclass(frozen=True)
class ConfusionMatrix:
    """Counts with rows = true class, columns = predicted class."""

    counts: np.ndarray
    class_labels: tuple

    @property
    def total(self) -> int:
        return int(self.counts.sum())


@dataclass(frozen=True)
class MetricsReport:
    accuracy: float
    precision: np.ndarray
    recall: np.ndarray
    f1: np.ndarray
    macro_precision: float
    macro_recall: float
    macro_f1: float
    n_samples: int
    class_labels: tuple

    def to_dict(self) -> dict:
        return {
            "accuracy": self.accuracy,
            "precision": list(self.precision),
            "recall": list(self.recall),
            "f1": list(self.f1),
            "macro_precision": self.macro_precision,
            "macro_recall": self.macro_recall,
            "macro_f1": self.macro_f1,
            "n_samples": self.n_samples,
            "class_labels": list(self.class_labels),
        }


def confusion(y_true, y_pred, class_labels=None) -> ConfusionMatrix:
    """Confusion counts for two equal-length label sequences.

    ``class_labels`` defaults to the sorted union of labels seen in either
    sequence; pass it explicitly to fix the class set (and ordering) when a
    class may be absent.
    """
    y_true = list(y_true)
    y_pred = list(y_pred)
    if len(y_true) != len(y_pred):
        raise ValueError(f"length mismatch: {len(y_true)} true vs {len(y_pred)} predicted")
    if class_labels is None:
        class_labels = sorted(set(y_true) | set(y_pred))
    class_labels = tuple(class_labels)
    index = {c: i for i, c in enumerate(class_labels)}
    counts = np.zeros((len(class_labels), len(class_labels)), dtype=np.int64)
    for t, p in zip(y_true, y_pred):
        if t not in index or p not in index:
            raise ValueError(f"label outside declared classes {class_labels}: ({t}, {p})")
        counts[index[t], index[p]] += 1
    return ConfusionMatrix(counts, class_labels)


def _safe_div(num, den):
    num = np.asarray(num, dtype=np.float64)
    den = np.asarray(den, dtype=np.float64)
    out = np.zeros_like(num)
    np.divide(num, den, out=out, where=den > 0)
    return out


def report(cm: ConfusionMatrix) -> MetricsReport:
    """Accuracy plus per-class and macro precision/recall/F1 from counts."""
    counts = np.asarray(cm.counts)
    total = int(counts.sum())
    if total < 1:
        raise ValueError("empty confusion matrix")
    tp = np.diag(counts).astype(np.float64)
    fp = counts.sum(axis=0) - tp
    fn = counts.sum(axis=1) - tp
    precision = _safe_div(tp, tp + fp)
    recall = _safe_div(tp, tp + fn)
    f1 = _safe_div(2 * precision * recall, precision + recall)
    return MetricsReport(
        accuracy=float(tp.sum() / total),
        precision=precision,
        recall=recall,
        f1=f1,
        macro_precision=float(precision.mean()),
        macro_recall=float(recall.mean()),
        macro_f1=float(f1.mean()),
        n_samples=total,
        class_labels=cm.class_labels,
    )


def macro_f1_score(y_true, y_pred, class_labels=None) -> float:
    """Unweighted mean F1 over classes; the model-selection criterion."""
    return report(confusion(y_true, y_pred, class_labels)).macro_f1


def format_summary_table(rows: dict) -> str:
    """Plain-text table of mean +/- std (in percent) over folds.

    ``rows`` maps a method name to its list of per-fold
    :class:`MetricsReport` objects.  Columns follow the usual benchmark
    layout: Accuracy, Precision, Recall, F1 (macro averages).  Std is the
    sample standard deviation over folds (0 for a single fold).
    """
    headers = ["Method", "Accuracy", "Precision", "Recall", "F1"]

    def cell(values):
        values = np.asarray(values, dtype=np.float64) * 100.0
        std = float(values.std(ddof=1)) if values.size > 1 else 0.0
        return f"{float(values.mean()):.2f} +/- {std:.2f}"

    body = []
    for method, reports in rows.items():
        body.append(
            [
                method,
                cell([r.accuracy for r in reports]),
                cell([r.macro_precision for r in reports]),
                cell([r.macro_recall for r in reports]),
                cell([r.macro_f1 for r in reports]),
            ]
        )
    widths = [max(len(row[i]) for row in [headers] + body) for i in range(len(headers))]
    lines = []
    sep = "  "
    lines.append(sep.join(h.ljust(w) for h, w in zip(headers, widths)))
    lines.append(sep.join("-" * w for w in widths))
    for row in body:
        lines.append(sep.join(c.ljust(w) for c, w in zip(row, widths)))
    return "\n".join(lines) + "\n"

"""Dataset plumbing: file I/O, z-score normalization, window assembly,
mid-price movement labeling, anchored forward folds, and a deterministic
synthetic generator for desk-scale experiments.

On-disk dataset format (UTF-8, comma-delimited, one frame per row)::

    day,index,feature_1,...,feature_D,label

``day`` is a 1-based integer and must be nondecreasing through the file;
``index`` is the within-day frame counter; labels are integers encoded
1 = up, 2 = stationary, 3 = down by default (any integer labels are
accepted, the mapping is a convention of the generator and reports).
"""

from __future__ import annotations

import itertools
import threading
from dataclasses import dataclass, replace

import numpy as np

__all__ = [
    "UP",
    "STATIONARY",
    "DOWN",
    "DataError",
    "FeatureFrame",
    "NormStats",
    "TensorWindow",
    "FoldPlan",
    "DayAccessLog",
    "load_frames",
    "save_frames",
    "select_days",
    "fit_norm",
    "apply_norm",
    "make_windows",
    "windows_to_arrays",
    "anchored_folds",
    "SynthConfig",
    "synth_generate",
    "synth_midprice_quotes",
    "mid_price",
    "label_movements",
]

UP, STATIONARY, DOWN = 1, 2, 3


class DataError(ValueError):
    """Malformed or inconsistent dataset content."""


@dataclass(frozen=True)
class FeatureFrame:
    """One time instance: a feature vector plus its movement label."""

    day: int
    index: int
    features: np.ndarray
    label: int


@dataclass(frozen=True)
class NormStats:
    """Per-dimension z-score statistics fitted on training rows only.

    ``std`` entries are strictly positive: zero-variance dimensions are
    flagged in ``zero_variance`` and store 1.0; those dimensions always
    normalize to exactly 0.
    """

    mean: np.ndarray
    std: np.ndarray
    zero_variance: np.ndarray


@dataclass(frozen=True)
class TensorWindow:
    """A channels x time sample; columns ordered oldest to newest."""

    sample: np.ndarray
    label: int
    day: int


@dataclass(frozen=True)
class FoldPlan:
    """Anchored split: train on days 1..i, test on day i+1."""

    fold: int
    train_days: tuple
    test_day: int


class DayAccessLog:
    """Thread-safe counter of dataset rows handed out, keyed by (phase, day)."""

    def __init__(self):
        self._lock = threading.Lock()
        self.counts: dict = {}

    def record(self, phase: str, day: int, n_rows: int) -> None:
        with self._lock:
            key = (phase, day)
            self.counts[key] = self.counts.get(key, 0) + n_rows

    def rows(self, phase: str, day: int) -> int:
        return self.counts.get((phase, day), 0)


def load_frames(path) -> list:
    """Parse a dataset file; raises :class:`DataError` with the line number
    on malformed rows and on day indices that decrease."""
    frames = []
    n_features = None
    prev_day = None
    with open(path, "r", encoding="utf-8") as fh:
        for ln, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            parts = line.split(",")
            if len(parts) < 4:
                raise DataError(f"line {ln}: expected day,index,features...,label but got {len(parts)} fields")
            try:
                day = int(parts[0])
                index = int(parts[1])
                label = int(parts[-1])
                features = np.array([float(v) for v in parts[2:-1]], dtype=np.float64)
            except ValueError as exc:
                raise DataError(f"line {ln}: {exc}") from exc
            if not np.all(np.isfinite(features)):
                raise DataError(f"line {ln}: non-finite feature value")
            if n_features is None:
                n_features = features.size
            elif features.size != n_features:
                raise DataError(f"line {ln}: expected {n_features} features, got {features.size}")
            if prev_day is not None and day < prev_day:
                raise DataError(f"line {ln}: day {day} decreases from {prev_day}")
            prev_day = day
            frames.append(FeatureFrame(day, index, features, label))
    return frames


def save_frames(path, frames) -> None:
    """Write frames in the documented row format (floats via repr, so a
    load/save round trip is exact)."""
    with open(path, "w", encoding="utf-8") as fh:
        for f in frames:
            feats = ",".join(repr(float(v)) for v in f.features)
            fh.write(f"{f.day},{f.index},{feats},{f.label}\n")


def select_days(frames, days, phase: str = "train", log: DayAccessLog | None = None) -> list:
    """Frames whose day is in ``days``, in input order.

    All day-scoped data handoffs go through here so a :class:`DayAccessLog`
    can audit which rows each pipeline phase actually read.
    """
    wanted = set(days)
    out = [f for f in frames if f.day in wanted]
    if log is not None:
        per_day: dict = {}
        for f in out:
            per_day[f.day] = per_day.get(f.day, 0) + 1
        for day, n in sorted(per_day.items()):
            log.record(phase, day, n)
    return out


def fit_norm(frames) -> NormStats:
    """Per-dimension mean and standard deviation of the given training rows."""
    if len(frames) < 2:
        raise DataError(f"need at least 2 training rows to fit normalization, got {len(frames)}")
    X = np.stack([f.features for f in frames])
    mean = X.mean(axis=0)
    std = X.std(axis=0)
    zero = std <= 1e-12 * np.maximum(1.0, np.abs(mean))
    std = np.where(zero, 1.0, std)
    return NormStats(mean=mean, std=std, zero_variance=zero)


def apply_norm(stats: NormStats, frames) -> list:
    """Z-score the frames with the given (training) statistics."""
    out = []
    for f in frames:
        z = (f.features - stats.mean) / stats.std
        if stats.zero_variance.any():
            z = np.where(stats.zero_variance, 0.0, z)
        out.append(replace(f, features=z))
    return out


def make_windows(frames, T: int) -> list:
    """Assemble one D x T window per frame having T-1 same-day predecessors.

    Columns are time-ordered oldest to newest; the window label and day are
    the newest frame's.  Windows never span a day boundary.
    """
    if T < 1:
        raise ValueError(f"T must be >= 1, got {T}")
    windows = []
    for _, group in itertools.groupby(frames, key=lambda f: f.day):
        day_frames = list(group)
        feats = np.stack([f.features for f in day_frames]) if day_frames else None
        for i in range(T - 1, len(day_frames)):
            sample = feats[i - T + 1 : i + 1].T.copy()
            windows.append(TensorWindow(sample, day_frames[i].label, day_frames[i].day))
    return windows


def windows_to_arrays(windows):
    """Stack windows into ``(N, D, T)`` samples and an ``(N,)`` label array."""
    X = np.stack([w.sample for w in windows])
    y = np.array([w.label for w in windows])
    return X, y


def anchored_folds(num_days: int) -> list:
    """The ``num_days - 1`` anchored splits: fold i trains on days 1..i and
    tests on day i+1."""
    if num_days < 2:
        raise ValueError(f"need at least 2 days for anchored folds, got {num_days}")
    return [FoldPlan(i, tuple(range(1, i + 1)), i + 1) for i in range(1, num_days)]


def mid_price(best_ask: float, best_bid: float) -> float:
    """Mean of the best ask and best bid quotes."""
    if best_bid <= 0:
        raise DataError(f"best bid must be positive, got {best_bid}")
    if best_ask < best_bid:
        raise DataError(f"crossed book: ask {best_ask} < bid {best_bid}")
    return (best_ask + best_bid) / 2.0


def label_movements(mids, horizon: int, threshold: float):
    """Movement label per time step from a mid-price series.

    The label at t compares the mean mid over the next ``horizon`` steps
    with the current mid: up if it exceeds by more than ``threshold``
    (relative), down if below by more, else stationary.  Only steps with a
    full horizon ahead are labeled, so the result has
    ``len(mids) - horizon`` entries.
    """
    mids = np.asarray(mids, dtype=np.float64)
    if horizon < 1:
        raise ValueError(f"horizon must be >= 1, got {horizon}")
    if threshold <= 0:
        raise ValueError(f"threshold must be > 0, got {threshold}")
    n = mids.size - horizon
    if n <= 0:
        return np.empty(0, dtype=np.int64)
    csum = np.concatenate([[0.0], np.cumsum(mids)])
    future_mean = (csum[1 + horizon :] - csum[1 : n + 1]) / horizon
    rel = (future_mean - mids[:n]) / mids[:n]
    labels = np.full(n, STATIONARY, dtype=np.int64)
    labels[rel > threshold] = UP
    labels[rel < -threshold] = DOWN
    return labels


@dataclass(frozen=True)
class SynthConfig:
    """Knobs for the synthetic desk-scale dataset.

    Frames are emitted day by day as shuffled runs of ``run_length``
    consecutive frames sharing one class.  Within a run, frame p draws its
    features from column ``min(p, pattern_window - 1)`` of that class's
    mean pattern plus isotropic noise, so windows aligned to a run start
    reproduce the full pattern.  Per-day class counts follow ``ratios``
    exactly (largest-remainder apportionment), which keeps the label
    histogram within one sample of the requested proportions.
    """

    n_classes: int = 3
    n_features: int = 144
    pattern_window: int = 10
    days: int = 10
    frames_per_day: int = 500
    ratios: tuple = (1.0, 1.0, 1.0)
    noise_sigma: float = 1.0
    signal_scale: float = 1.0
    run_length: int = 50
    class_means: np.ndarray | None = None
    seed: int = 0

    def resolved_class_means(self, rng) -> np.ndarray:
        """(C, D, T) mean patterns; defaults to one random unit direction
        per class, constant across the time axis."""
        if self.class_means is not None:
            means = np.asarray(self.class_means, dtype=np.float64)
            expected = (self.n_classes, self.n_features, self.pattern_window)
            if means.shape != expected:
                raise ValueError(f"class_means shape {means.shape} != {expected}")
            return means
        dirs = rng.standard_normal((self.n_classes, self.n_features))
        dirs /= np.linalg.norm(dirs, axis=1, keepdims=True)
        return np.repeat((self.signal_scale * dirs)[:, :, None], self.pattern_window, axis=2)


def _apportion(total: int, ratios) -> list:
    """Largest-remainder allocation of ``total`` items over ``ratios``."""
    ratios = np.asarray(ratios, dtype=np.float64)
    if np.any(ratios < 0) or ratios.sum() <= 0:
        raise ValueError(f"ratios must be nonnegative with a positive sum, got {ratios}")
    exact = total * ratios / ratios.sum()
    counts = np.floor(exact).astype(int)
    remainder = total - counts.sum()
    order = np.argsort(-(exact - counts), kind="stable")
    for i in range(remainder):
        counts[order[i]] += 1
    return counts.tolist()


def synth_generate(cfg: SynthConfig) -> list:
    """Deterministic synthetic frames with recoverable T-window class
    structure (class signal present in every column of a window)."""
    if cfg.noise_sigma <= 0:
        raise ValueError(f"noise_sigma must be > 0, got {cfg.noise_sigma}")
    if cfg.days < 1 or cfg.frames_per_day < 1 or cfg.run_length < 1:
        raise ValueError("days, frames_per_day and run_length must be >= 1")
    if len(cfg.ratios) != cfg.n_classes:
        raise ValueError(f"need {cfg.n_classes} ratios, got {len(cfg.ratios)}")
    rng = np.random.default_rng(cfg.seed)
    means = cfg.resolved_class_means(rng)
    frames = []
    for day in range(1, cfg.days + 1):
        quotas = _apportion(cfg.frames_per_day, cfg.ratios)
        runs = []
        for c, quota in enumerate(quotas):
            while quota > 0:
                take = min(cfg.run_length, quota)
                runs.append((c, take))
                quota -= take
        runs = [runs[i] for i in rng.permutation(len(runs))]
        index = 0
        for c, length in runs:
            cols = np.minimum(np.arange(length), cfg.pattern_window - 1)
            base = means[c][:, cols].T
            noise = cfg.noise_sigma * rng.standard_normal((length, cfg.n_features))
            for feats in base + noise:
                frames.append(FeatureFrame(day, index, feats, c + 1))
                index += 1
    return frames


def synth_midprice_quotes(frames, threshold: float = 2e-5, horizon: int = 1):
    """Companion (day, index, bid, ask) quote rows realizing the frame labels.

    Each day starts at mid 100; an up frame multiplies the next mid by
    ``1 + 4*threshold``, a down frame by ``1 - 4*threshold``, stationary
    leaves it unchanged.  For ``horizon == 1`` this reproduces the frame
    labels exactly under :func:`label_movements`; for longer horizons the
    interior of each run is still realized, boundaries are best-effort.
    """
    if threshold <= 0 or horizon < 1:
        raise ValueError("threshold must be > 0 and horizon >= 1")
    half_spread = threshold / 10.0
    quotes = []
    for _, group in itertools.groupby(frames, key=lambda f: f.day):
        mid = 100.0
        for f in group:
            quotes.append((f.day, f.index, mid * (1.0 - half_spread), mid * (1.0 + half_spread)))
            if f.label == UP:
                mid *= 1.0 + 4.0 * threshold
            elif f.label == DOWN:
                mid *= 1.0 - 4.0 * threshold
    return quotes

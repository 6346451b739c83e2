"""Descriptive statistics, outlier and normality screens, correlation pruning.

Conventions: ``std`` is the sample standard deviation (n - 1 denominator);
skewness ``g1 = m3 / m2**1.5`` and excess kurtosis ``g2 = m4 / m2**2 - 3``
use central moments with denominator n.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .config import CORRELATION_TAU, HIST_BINS, NORMALITY_BOUND, OUTLIER_Z
from .data import Dataset
from .errors import DataError, NumericalError, UndefinedMomentError


@dataclass(frozen=True)
class FeatureStats:
    n: int
    mean: float
    std: float
    min: float
    max: float
    _skewness: float | None = field(default=None, repr=False)
    _kurtosis: float | None = field(default=None, repr=False)

    @property
    def moments_defined(self) -> bool:
        return self._skewness is not None

    @property
    def skewness(self) -> float:
        if self._skewness is None:
            raise UndefinedMomentError("skewness undefined for zero variance")
        return self._skewness

    @property
    def kurtosis(self) -> float:
        if self._kurtosis is None:
            raise UndefinedMomentError("kurtosis undefined for zero variance")
        return self._kurtosis


def _as_series(series) -> np.ndarray:
    x = np.asarray(series, dtype=float).ravel()
    if x.size < 2:
        raise DataError("at least two values are required")
    if not np.all(np.isfinite(x)):
        raise DataError("series contains non-finite values")
    return x


def compute_stats(series) -> FeatureStats:
    x = _as_series(series)
    n = x.size
    mean = float(np.mean(x))
    dev = x - mean
    m2 = float(np.mean(dev**2))
    lo, hi = float(x.min()), float(x.max())
    # clamp so min <= mean <= max survives rounding in the mean
    mean = min(max(mean, lo), hi)
    if lo == hi:
        return FeatureStats(n, lo, 0.0, lo, hi)
    std = float(np.sqrt(np.sum(dev**2) / (n - 1)))
    m3 = float(np.mean(dev**3))
    m4 = float(np.mean(dev**4))
    return FeatureStats(n, mean, std, lo, hi, m3 / m2**1.5, m4 / m2**2 - 3.0)


def zscore(series) -> np.ndarray:
    x = _as_series(series)
    stats = compute_stats(x)
    if stats.std == 0:
        raise NumericalError("zero variance: z-scores undefined")
    return (x - np.mean(x)) / stats.std


@dataclass(frozen=True)
class OutlierEntry:
    id: str
    feature: str
    value: float
    z: float


@dataclass(frozen=True)
class OutlierReport:
    entries: tuple[OutlierEntry, ...]
    threshold: float = OUTLIER_Z


def _check_variance(ds: Dataset):
    for j, name in enumerate(ds.schema):
        if np.ptp(ds.X[:, j]) == 0:
            raise NumericalError(f"feature {name!r} has zero variance")


def detect_outliers(ds: Dataset, threshold: float = OUTLIER_Z) -> OutlierReport:
    """Flag every (sample, feature) cell whose |z| exceeds ``threshold``.

    Advisory only; the dataset is not modified.
    """
    if len(ds) < 2:
        raise DataError("outlier screening needs at least two samples")
    _check_variance(ds)
    entries = []
    for j, name in enumerate(ds.schema):
        z = zscore(ds.X[:, j])
        for i in np.flatnonzero(np.abs(z) > threshold):
            entries.append(OutlierEntry(ds.ids[i], name, float(ds.X[i, j]), float(z[i])))
    return OutlierReport(tuple(entries), threshold)


@dataclass(frozen=True)
class NormalityResult:
    skewness: float
    kurtosis: float
    passed: bool


@dataclass(frozen=True)
class NormalityScreen:
    features: dict[str, NormalityResult]
    bound: float = NORMALITY_BOUND

    def failing(self) -> list[str]:
        return [name for name, r in self.features.items() if not r.passed]


def normality_screen(ds: Dataset, bound: float = NORMALITY_BOUND) -> NormalityScreen:
    if len(ds) < 4:
        raise DataError("normality screen needs at least four samples")
    results = {}
    for j, name in enumerate(ds.schema):
        stats = compute_stats(ds.X[:, j])
        if not stats.moments_defined:
            raise NumericalError(f"feature {name!r} is degenerate (zero variance)")
        g1, g2 = stats.skewness, stats.kurtosis
        results[name] = NormalityResult(g1, g2, abs(g1) <= bound and abs(g2) <= bound)
    return NormalityScreen(results, bound)


def pearson(x, y) -> float:
    x = np.asarray(x, dtype=float).ravel()
    y = np.asarray(y, dtype=float).ravel()
    if x.size != y.size:
        raise DataError(f"length mismatch: {x.size} vs {y.size}")
    if x.size < 2:
        raise DataError("at least two values are required")
    dx = x - x.mean()
    dy = y - y.mean()
    sxx = float(np.dot(dx, dx))
    syy = float(np.dot(dy, dy))
    if sxx == 0 or syy == 0:
        raise NumericalError("zero variance: correlation undefined")
    r = float(np.dot(dx, dy)) / np.sqrt(sxx * syy)
    return float(min(1.0, max(-1.0, r)))


@dataclass(frozen=True)
class CorrelationMatrix:
    names: tuple[str, ...]
    r: np.ndarray

    def __getitem__(self, pair: tuple[str, str]) -> float:
        a, b = pair
        return float(self.r[self.index(a), self.index(b)])

    def index(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise DataError(f"unknown feature {name!r}") from None


def correlation_matrix(ds: Dataset) -> CorrelationMatrix:
    d = ds.width
    r = np.eye(d)
    for i in range(d):
        for j in range(i + 1, d):
            r[i, j] = r[j, i] = pearson(ds.X[:, i], ds.X[:, j])
    r.setflags(write=False)
    return CorrelationMatrix(ds.schema, r)


@dataclass(frozen=True)
class DropRecommendation:
    pivot: str
    dropped: dict[str, float]
    tau: float

    def keep(self, schema: Sequence[str]) -> list[str]:
        return [name for name in schema if name not in self.dropped]


def recommend_drops(
    cm: CorrelationMatrix, pivot: str, tau: float = CORRELATION_TAU
) -> DropRecommendation:
    """Features whose |r| with ``pivot`` is at least ``tau``; ``pivot`` is retained."""
    p = cm.index(pivot)
    dropped = {
        name: abs(float(cm.r[p, j]))
        for j, name in enumerate(cm.names)
        if j != p and abs(cm.r[p, j]) >= tau
    }
    return DropRecommendation(pivot, dropped, tau)


def histogram(series, bins: int = HIST_BINS) -> list[tuple[float, float, int]]:
    """Equal-width ``(bin_lo, bin_hi, count)`` rows spanning the data range."""
    x = _as_series(series)
    counts, edges = np.histogram(x, bins=bins)
    return [
        (float(edges[i]), float(edges[i + 1]), int(counts[i])) for i in range(bins)
    ]

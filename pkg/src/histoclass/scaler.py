"""Min-max normalisation fitted on a training partition."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .data import Dataset
from .errors import DataError


@dataclass(frozen=True)
class MinMaxScaler:
    names: tuple[str, ...]
    mins: tuple[float, ...]
    maxs: tuple[float, ...]

    def __post_init__(self):
        if not (len(self.names) == len(self.mins) == len(self.maxs)):
            raise DataError("scaler names/mins/maxs lengths differ")
        for name, lo, hi in zip(self.names, self.mins, self.maxs):
            if not lo <= hi:
                raise DataError(f"scaler range for {name!r} has min > max")

    @property
    def degenerate(self) -> tuple[str, ...]:
        """Features whose fitted range is a single point."""
        return tuple(n for n, lo, hi in zip(self.names, self.mins, self.maxs) if lo == hi)

    def _check_schema(self, ds: Dataset):
        if ds.schema != self.names:
            raise DataError(
                f"schema mismatch: scaler fitted on {list(self.names)}, got {list(ds.schema)}"
            )


def fit(train: Dataset) -> MinMaxScaler:
    return MinMaxScaler(
        train.schema,
        tuple(float(v) for v in train.X.min(axis=0)),
        tuple(float(v) for v in train.X.max(axis=0)),
    )


def transform_array(s: MinMaxScaler, X) -> np.ndarray:
    X = np.asarray(X, dtype=float)
    lo = np.array(s.mins)
    span = np.array(s.maxs) - lo
    safe = np.where(span > 0, span, 1.0)
    out = np.clip((X - lo) / safe, 0.0, 1.0)
    return np.where(span > 0, out, 0.0)


def transform(s: MinMaxScaler, ds: Dataset) -> Dataset:
    """Map each feature onto [0, 1] with the fitted extrema.

    Values outside the fitted range clamp to the nearest endpoint; a
    degenerate feature maps to 0.
    """
    s._check_schema(ds)
    return ds.with_values(transform_array(s, ds.X))


def inverse_transform(s: MinMaxScaler, ds: Dataset) -> Dataset:
    s._check_schema(ds)
    X = ds.X
    if np.any(X < 0) or np.any(X > 1):
        raise DataError("inverse_transform expects values in [0, 1]")
    lo = np.array(s.mins)
    return ds.with_values(X * (np.array(s.maxs) - lo) + lo)

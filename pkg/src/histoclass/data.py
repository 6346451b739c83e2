"""Dataset schema, WDBC ingestion, feature projection and seeded splitting."""

from __future__ import annotations

import enum
import io
import math
from dataclasses import dataclass
from pathlib import Path
from typing import BinaryIO, Iterable, Sequence

import numpy as np

from .errors import DataError

WDBC_FEATURES = (
    "radius",
    "texture",
    "perimeter",
    "area",
    "smoothness",
    "compactness",
    "concavity",
    "concave_points",
    "symmetry",
    "fdimension",
)
WDBC_FIELDS = 32


class Diagnosis(str, enum.Enum):
    """A = abnormal (malignant), N = normal (benign)."""

    A = "A"
    N = "N"

    @classmethod
    def from_code(cls, code: str) -> Diagnosis:
        try:
            return _SOURCE_CODES[code]
        except KeyError:
            raise DataError(f"unknown diagnosis code {code!r}") from None

    def __str__(self):
        return self.value


_SOURCE_CODES = {"M": Diagnosis.A, "B": Diagnosis.N}


@dataclass(frozen=True)
class Sample:
    id: str
    diagnosis: Diagnosis
    features: tuple[float, ...]


class Dataset:
    """An immutable table of labelled samples over an ordered feature schema.

    Feature values live in a read-only ``(n_samples, width)`` float array,
    ``X``. Labels are held as :class:`Diagnosis` values; ``y`` gives the
    numeric encoding used by the models (A = 1, N = 0).
    """

    __slots__ = ("schema", "ids", "diagnoses", "X")

    def __init__(
        self,
        schema: Sequence[str],
        ids: Sequence[str],
        diagnoses: Sequence[Diagnosis | str],
        X,
    ):
        schema = tuple(str(s) for s in schema)
        ids = tuple(str(i) for i in ids)
        diagnoses = tuple(Diagnosis(d) for d in diagnoses)
        X = np.array(X, dtype=float, copy=True)
        if X.ndim != 2:
            raise DataError("feature matrix must be two-dimensional")
        if len(ids) < 1:
            raise DataError("dataset must contain at least one sample")
        if len(schema) < 1:
            raise DataError("schema must name at least one feature")
        if len(set(schema)) != len(schema):
            raise DataError("duplicate feature name in schema")
        if X.shape != (len(ids), len(schema)):
            raise DataError(
                f"feature matrix shape {X.shape} does not match "
                f"{len(ids)} samples x {len(schema)} features"
            )
        if len(diagnoses) != len(ids):
            raise DataError("one diagnosis per sample is required")
        if len(set(ids)) != len(ids):
            raise DataError("sample ids must be unique")
        if not np.all(np.isfinite(X)):
            raise DataError("feature values must be finite")
        X.setflags(write=False)
        object.__setattr__(self, "schema", schema)
        object.__setattr__(self, "ids", ids)
        object.__setattr__(self, "diagnoses", diagnoses)
        object.__setattr__(self, "X", X)

    def __setattr__(self, name, value):
        raise AttributeError("Dataset is immutable")

    def __len__(self):
        return len(self.ids)

    def __eq__(self, other):
        if not isinstance(other, Dataset):
            return NotImplemented
        return (
            self.schema == other.schema
            and self.ids == other.ids
            and self.diagnoses == other.diagnoses
            and np.array_equal(self.X, other.X)
        )

    def __repr__(self):
        return f"Dataset(n={len(self)}, schema={list(self.schema)})"

    @property
    def width(self) -> int:
        return len(self.schema)

    @property
    def y(self) -> np.ndarray:
        return np.array([d is Diagnosis.A for d in self.diagnoses], dtype=int)

    @property
    def samples(self) -> tuple[Sample, ...]:
        return tuple(
            Sample(i, d, tuple(float(v) for v in row))
            for i, d, row in zip(self.ids, self.diagnoses, self.X)
        )

    def column(self, name: str) -> np.ndarray:
        return self.X[:, self.feature_index(name)]

    def feature_index(self, name: str) -> int:
        try:
            return self.schema.index(name)
        except ValueError:
            raise DataError(f"unknown feature {name!r}") from None

    def subset(self, indices: Iterable[int]) -> Dataset:
        idx = np.asarray(list(indices), dtype=int)
        return Dataset(
            self.schema,
            [self.ids[i] for i in idx],
            [self.diagnoses[i] for i in idx],
            self.X[idx],
        )

    def with_values(self, X) -> Dataset:
        """Same samples and schema, new feature values."""
        return Dataset(self.schema, self.ids, self.diagnoses, X)

    def with_feature(self, name: str, values) -> Dataset:
        if name in self.schema:
            raise DataError(f"feature name collision: {name!r}")
        values = np.asarray(values, dtype=float).reshape(-1, 1)
        return Dataset(
            self.schema + (name,),
            self.ids,
            self.diagnoses,
            np.hstack([self.X, values]),
        )


@dataclass(frozen=True)
class DataSplit:
    train: Dataset
    test: Dataset
    seed: int
    method: str = "stratified"


def load_wdbc(source: BinaryIO | bytes | str | Path) -> Dataset:
    """Parse a UCI ``wdbc.data`` file, keeping the ten mean features.

    ``source`` may be a binary stream, raw bytes, or a filesystem path.
    Errors carry the 1-based record number.
    """
    if isinstance(source, (str, Path)):
        with open(source, "rb") as fh:
            raw = fh.read()
    elif isinstance(source, (bytes, bytearray)):
        raw = bytes(source)
    else:
        raw = source.read()
    text = raw.decode("utf-8") if isinstance(raw, (bytes, bytearray)) else raw
    lines = text.splitlines()
    while lines and not lines[-1].strip():
        lines.pop()
    if not lines:
        raise DataError("empty source")

    ids, diagnoses, rows = [], [], []
    seen = set()
    for recno, line in enumerate(lines, start=1):
        fields = [f.strip() for f in line.split(",")]
        if len(fields) != WDBC_FIELDS:
            raise DataError(
                f"record {recno}: expected {WDBC_FIELDS} fields, got {len(fields)}"
            )
        rid = fields[0]
        if rid in seen:
            raise DataError(f"record {recno}: duplicate id {rid!r}")
        seen.add(rid)
        try:
            diagnosis = Diagnosis.from_code(fields[1])
        except DataError as exc:
            raise DataError(f"record {recno}: {exc}") from None
        row = []
        for col, text_value in enumerate(fields[2:12], start=3):
            try:
                value = float(text_value)
            except ValueError:
                raise DataError(
                    f"record {recno}: field {col} is not a real number: {text_value!r}"
                ) from None
            if not math.isfinite(value):
                raise DataError(f"record {recno}: field {col} is not finite")
            row.append(value)
        for col, text_value in enumerate(fields[12:], start=13):
            try:
                float(text_value)
            except ValueError:
                raise DataError(
                    f"record {recno}: field {col} is not a real number: {text_value!r}"
                ) from None
        ids.append(rid)
        diagnoses.append(diagnosis)
        rows.append(row)
    return Dataset(WDBC_FEATURES, ids, diagnoses, np.array(rows, dtype=float))


def read_wdbc(path: str | Path) -> Dataset:
    with open(path, "rb") as fh:
        return load_wdbc(fh)


def bundled_wdbc_path() -> Path:
    """Location of the WDBC copy shipped with the package."""
    return Path(__file__).with_name("data") / "wdbc.data"


def load_bundled_wdbc() -> Dataset:
    return load_wdbc(io.BytesIO(bundled_wdbc_path().read_bytes()))


def _class_quotas(class_sizes: Sequence[int], train_count: int) -> list[int]:
    total = sum(class_sizes)
    exact = [train_count * size / total for size in class_sizes]
    quotas = [int(math.floor(e + 0.5)) for e in exact]
    # nudge the classes with the largest rounding error until the sum matches
    while sum(quotas) != train_count:
        if sum(quotas) < train_count:
            order = sorted(
                range(len(quotas)), key=lambda c: (quotas[c] - exact[c], c)
            )
            c = next(c for c in order if quotas[c] < class_sizes[c])
            quotas[c] += 1
        else:
            order = sorted(
                range(len(quotas)), key=lambda c: (exact[c] - quotas[c], c)
            )
            c = next(c for c in order if quotas[c] > 0)
            quotas[c] -= 1
    return quotas


def train_test_split(ds: Dataset, train_count: int, seed: int) -> DataSplit:
    """Stratified-by-diagnosis random split with exactly ``train_count`` in train.

    Both partitions keep the source sample order.
    """
    n = len(ds)
    if not 0 < train_count < n:
        raise DataError(
            f"train_count must satisfy 0 < train_count < {n}, got {train_count}"
        )
    classes = (Diagnosis.A, Diagnosis.N)
    members = [
        np.array([i for i, d in enumerate(ds.diagnoses) if d is c], dtype=int)
        for c in classes
    ]
    for c, idx in zip(classes, members):
        if len(idx) == 0:
            raise DataError(f"class {c.value} has no samples")
    quotas = _class_quotas([len(m) for m in members], train_count)

    rng = np.random.default_rng(seed)
    chosen = []
    for idx, quota in zip(members, quotas):
        chosen.append(rng.permutation(idx)[:quota])
    train_mask = np.zeros(n, dtype=bool)
    train_mask[np.concatenate(chosen)] = True
    return DataSplit(
        train=ds.subset(np.flatnonzero(train_mask)),
        test=ds.subset(np.flatnonzero(~train_mask)),
        seed=seed,
    )


def select_features(ds: Dataset, keep: Sequence[str]) -> Dataset:
    keep = list(keep)
    if not keep:
        raise DataError("keep must name at least one feature")
    if len(set(keep)) != len(keep):
        raise DataError("duplicated feature name in keep")
    idx = [ds.feature_index(name) for name in keep]
    return Dataset(keep, ds.ids, ds.diagnoses, ds.X[:, idx])

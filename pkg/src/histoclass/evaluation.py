"""Confusion matrices and error-rate arithmetic.

Rates are exact :class:`fractions.Fraction` values. ``fnr_paper`` and
``fpr_paper`` divide by *predicted*-class totals (FN / predicted N and
FP / predicted A), i.e. the false omission and false discovery rates; the
usual miss and fall-out rates are available through ``sensitivity`` and
``specificity``. A rate whose denominator is zero is ``None``.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, fields
from fractions import Fraction
from typing import Iterable, Mapping

from .data import Diagnosis
from .errors import DataError


@dataclass(frozen=True)
class ConfusionMatrix:
    """Counts indexed as ``[actual][predicted]`` with A before N."""

    aa: int
    an: int
    na: int
    nn: int

    def __post_init__(self):
        if min(self.aa, self.an, self.na, self.nn) < 0:
            raise DataError("confusion counts must be non-negative")

    @classmethod
    def from_matrix(cls, m) -> ConfusionMatrix:
        (aa, an), (na, nn) = m
        return cls(int(aa), int(an), int(na), int(nn))

    @property
    def matrix(self) -> list[list[int]]:
        return [[self.aa, self.an], [self.na, self.nn]]

    @property
    def total(self) -> int:
        return self.aa + self.an + self.na + self.nn

    @property
    def tp(self) -> int:
        return self.aa

    @property
    def fn(self) -> int:
        return self.an

    @property
    def fp(self) -> int:
        return self.na

    @property
    def tn(self) -> int:
        return self.nn

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["actual", "A", "N"])
        w.writerow(["A", self.aa, self.an])
        w.writerow(["N", self.na, self.nn])
        return buf.getvalue()


def confusion(pairs: Iterable[tuple[Diagnosis | str, Diagnosis | str]]) -> ConfusionMatrix:
    counts = {(a, p): 0 for a in Diagnosis for p in Diagnosis}
    n = 0
    for actual, predicted in pairs:
        counts[Diagnosis(actual), Diagnosis(predicted)] += 1
        n += 1
    if n == 0:
        raise DataError("confusion matrix needs at least one pair")
    A, N = Diagnosis.A, Diagnosis.N
    return ConfusionMatrix(counts[A, A], counts[A, N], counts[N, A], counts[N, N])


def _ratio(num: int, den: int) -> Fraction | None:
    return Fraction(num, den) if den else None


@dataclass(frozen=True)
class RateReport:
    overall_error: Fraction
    fnr_paper: Fraction | None
    fpr_paper: Fraction | None
    sensitivity: Fraction | None
    specificity: Fraction | None

    @property
    def false_omission_rate(self):
        return self.fnr_paper

    @property
    def false_discovery_rate(self):
        return self.fpr_paper


def rates(cm: ConfusionMatrix) -> RateReport:
    if cm.total == 0:
        raise DataError("rates need a non-empty confusion matrix")
    return RateReport(
        overall_error=Fraction(cm.fp + cm.fn, cm.total),
        fnr_paper=_ratio(cm.fn, cm.an + cm.nn),
        fpr_paper=_ratio(cm.fp, cm.aa + cm.na),
        sensitivity=_ratio(cm.tp, cm.aa + cm.an),
        specificity=_ratio(cm.tn, cm.na + cm.nn),
    )


def round_half_away(value: Fraction, decimals: int = 2) -> Fraction:
    scale = 10**decimals
    scaled = abs(value) * scale
    rounded = math.floor(scaled + Fraction(1, 2))
    return Fraction(rounded if value >= 0 else -rounded, scale)


def format_rate(value: Fraction | None, decimals: int = 2) -> str:
    if value is None:
        return "undefined"
    r = round_half_away(Fraction(value), decimals)
    sign = "-" if r < 0 else ""
    units = abs(r.numerator) * 10**decimals // r.denominator
    whole, frac = divmod(units, 10**decimals)
    return f"{sign}{whole}.{frac:0{decimals}d}" if decimals else f"{sign}{whole}"


def full_precision(value: Fraction | None) -> str:
    return "undefined" if value is None else format(float(value), ".17g")


RATE_ROWS = (
    ("overall_error", "Overall Error Rate"),
    ("fnr_paper", "False Negative Rate"),
    ("fpr_paper", "False Positive Rate"),
    ("sensitivity", "Sensitivity"),
    ("specificity", "Specificity"),
)

FOOTNOTE = (
    "Values are exact ratios rounded half away from zero to 2 decimals; "
    "full precision is in the CSV.\n"
    "False Negative Rate = FN / predicted N; False Positive Rate = FP / predicted A."
)


def rates_csv(report: RateReport) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["rate", "value", "numerator", "denominator"])
    for f in fields(report):
        v = getattr(report, f.name)
        if v is None:
            w.writerow([f.name, "undefined", "", ""])
        else:
            w.writerow([f.name, full_precision(v), v.numerator, v.denominator])
    return buf.getvalue()


@dataclass(frozen=True)
class ComparisonTable:
    models: tuple[str, ...]
    reports: tuple[RateReport, ...]

    def rows(self):
        for attr, label in RATE_ROWS:
            yield attr, label, [getattr(r, attr) for r in self.reports]

    def to_text(self) -> str:
        header = ["Error", *self.models]
        body = [[label, *(format_rate(v) for v in vals)] for _, label, vals in self.rows()]
        widths = [max(len(row[i]) for row in [header, *body]) for i in range(len(header))]
        lines = ["  ".join(c.ljust(w) for c, w in zip(row, widths)).rstrip() for row in [header, *body]]
        return "\n".join(lines) + "\n\n" + FOOTNOTE + "\n"

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["rate", *self.models])
        for attr, _, vals in self.rows():
            w.writerow([attr, *(full_precision(v) for v in vals)])
        return buf.getvalue()


def compare_models(reports: Mapping[str, RateReport] | Iterable[tuple[str, RateReport]]) -> ComparisonTable:
    items = list(reports.items() if isinstance(reports, Mapping) else reports)
    if not items:
        raise DataError("compare_models needs at least one report")
    names, reps = zip(*items)
    return ComparisonTable(tuple(names), tuple(reps))

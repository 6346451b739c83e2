"""End-to-end experiment: EDA, preprocessing, clustering, training, evaluation.

Stage order: load -> split -> EDA -> scaler (train only) -> correlation
pruning -> k-means -> CART + logistic -> CART / logistic / ensemble
evaluation on the test partition. Every stage failure is re-raised with the
stage name prefixed to its message.
"""

from __future__ import annotations

import contextlib
import csv
import io
import os
from dataclasses import dataclass, replace
from datetime import datetime, timezone
from pathlib import Path
from typing import Iterable, Sequence

from . import scaler as minmax
from .cart import cart_train, extract_rules
from .config import HIST_BINS, NORMALITY_BOUND, OUTLIER_Z, PipelineConfig
from .data import Dataset, DataSplit, load_bundled_wdbc, read_wdbc, select_features, train_test_split
from .ensemble import EvaluatedPrediction, evaluate_classifier
from .evaluation import (
    ComparisonTable,
    ConfusionMatrix,
    RateReport,
    compare_models,
    confusion,
    full_precision,
    rates,
    rates_csv,
)
from .kmeans import (
    CLUSTER_FEATURE,
    ClusterImportance,
    ClusterPurity,
    KMeansModel,
    assign_all,
    cluster_purity,
    feature_importance,
    kmeans_fit,
)
from .logistic import logit_fit
from .stats import (
    CorrelationMatrix,
    DropRecommendation,
    FeatureStats,
    NormalityScreen,
    OutlierReport,
    compute_stats,
    correlation_matrix,
    detect_outliers,
    histogram,
    normality_screen,
    recommend_drops,
)
from .store import ModelBundle, Provenance, dumps, num

MODEL_NAMES = ("cart", "logistic", "ensemble")


@contextlib.contextmanager
def stage(name: str):
    try:
        yield
    except Exception as exc:
        exc.args = (f"{name} stage: {exc}",) + exc.args[1:]
        raise


def _csv(rows: Iterable[Sequence], header: Sequence[str]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def write_text(path: Path, text: str):
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


def load_input(path: str | os.PathLike | None) -> Dataset:
    return load_bundled_wdbc() if path is None else read_wdbc(path)


def resolve_created(cfg: PipelineConfig) -> str:
    if cfg.created is not None:
        return cfg.created
    epoch = os.environ.get("SOURCE_DATE_EPOCH")
    moment = (
        datetime.fromtimestamp(int(epoch), tz=timezone.utc)
        if epoch
        else datetime.now(tz=timezone.utc).replace(microsecond=0)
    )
    return moment.isoformat().replace("+00:00", "Z")


# --- EDA -------------------------------------------------------------------


@dataclass(frozen=True)
class EdaReport:
    stats: dict[str, FeatureStats]
    outliers: OutlierReport
    normality: NormalityScreen
    correlation: CorrelationMatrix
    histograms: dict[str, list[tuple[float, float, int]]]

    def stats_csv(self) -> str:
        rows = []
        for name, s in self.stats.items():
            r = self.normality.features[name]
            rows.append(
                [name, num(s.mean), num(s.std), num(s.min), num(s.max),
                 num(r.skewness), num(r.kurtosis), str(r.passed).lower()]
            )
        return _csv(rows, ["feature", "mean", "std", "min", "max", "skew", "kurt", "pass"])

    def outliers_csv(self) -> str:
        rows = [[e.id, e.feature, num(e.value), num(e.z)] for e in self.outliers.entries]
        return _csv(rows, ["id", "feature", "value", "z"])

    def correlation_csv(self) -> str:
        names = self.correlation.names
        rows = [[n, *(num(v) for v in self.correlation.r[i])] for i, n in enumerate(names)]
        return _csv(rows, ["feature", *names])

    def histogram_csv(self, name: str) -> str:
        rows = [[num(lo), num(hi), c] for lo, hi, c in self.histograms[name]]
        return _csv(rows, ["bin_lo", "bin_hi", "count"])

    def write(self, out: Path):
        out = Path(out)
        write_text(out / "stats.csv", self.stats_csv())
        write_text(out / "outliers.csv", self.outliers_csv())
        write_text(out / "correlation.csv", self.correlation_csv())
        for name in self.histograms:
            write_text(out / "histograms" / f"{name}.csv", self.histogram_csv(name))


def run_eda(
    ds: Dataset,
    outlier_z: float = OUTLIER_Z,
    bound: float = NORMALITY_BOUND,
    bins: int = HIST_BINS,
) -> EdaReport:
    return EdaReport(
        stats={name: compute_stats(ds.X[:, j]) for j, name in enumerate(ds.schema)},
        outliers=detect_outliers(ds, outlier_z),
        normality=normality_screen(ds, bound),
        correlation=correlation_matrix(ds),
        histograms={name: histogram(ds.X[:, j], bins) for j, name in enumerate(ds.schema)},
    )


# --- preprocessing and clustering -------------------------------------------


@dataclass(frozen=True)
class Preprocessed:
    split: DataSplit
    scaler: minmax.MinMaxScaler
    scaled_train: Dataset
    scaled_test: Dataset
    drops: DropRecommendation
    selected: tuple[str, ...]

    def model_inputs(self, scale: bool = True) -> tuple[Dataset, Dataset]:
        train = self.scaled_train if scale else self.split.train
        test = self.scaled_test if scale else self.split.test
        return select_features(train, self.selected), select_features(test, self.selected)

    def write(self, out: Path, scale: bool = True):
        out = Path(out)
        train, test = self.model_inputs(scale)
        for name, part in (("train", train), ("test", test)):
            rows = [[i, d.value, *(num(v) for v in row)] for i, d, row in zip(part.ids, part.diagnoses, part.X)]
            write_text(out / f"{name}.csv", _csv(rows, ["id", "diagnosis", *part.schema]))
        s = self.scaler
        write_text(out / "scaler.csv", _csv(
            [[n, num(lo), num(hi)] for n, lo, hi in zip(s.names, s.mins, s.maxs)],
            ["feature", "min", "max"],
        ))
        write_text(out / "drops.csv", _csv(
            [[n, num(r)] for n, r in self.drops.dropped.items()], ["feature", "abs_r"]
        ))


def preprocess(ds: Dataset, cfg: PipelineConfig) -> Preprocessed:
    """Split, fit the scaler on the training partition and choose features.

    Correlation pruning uses the pooled, label-free feature matrix so the
    retained feature set does not depend on the split seed.
    """
    with stage("split"):
        split = train_test_split(ds, cfg.train_count, cfg.seed)
    with stage("scaler"):
        s = minmax.fit(split.train)
        scaled_train = minmax.transform(s, split.train)
        scaled_test = minmax.transform(s, split.test)
    with stage("correlation"):
        drops = recommend_drops(correlation_matrix(ds), cfg.pivot, cfg.tau)
    return Preprocessed(split, s, scaled_train, scaled_test, drops, tuple(drops.keep(ds.schema)))


@dataclass(frozen=True)
class ClusterReport:
    model: KMeansModel
    purity: list[ClusterPurity]
    importance: ClusterImportance

    def centroids_csv(self) -> str:
        rows = [[j, *(num(v) for v in c)] for j, c in enumerate(self.model.centroids)]
        return _csv(rows, ["cluster", *self.model.names])

    def purity_csv(self) -> str:
        rows = [[p.cluster, p.count_A, p.count_N, num(p.share_A), num(p.share_N)] for p in self.purity]
        return _csv(rows, ["cluster", "count_A", "count_N", "share_A", "share_N"])

    def importance_csv(self) -> str:
        rows = [[n, num(s)] for n, s in zip(self.importance.names, self.importance.shares)]
        return _csv(rows, ["feature", "share"])

    def write(self, out: Path):
        out = Path(out)
        write_text(out / "centroids.csv", self.centroids_csv())
        write_text(out / "purity.csv", self.purity_csv())
        write_text(out / "importance.csv", self.importance_csv())


def run_clustering(scaled_train: Dataset, seed: int) -> ClusterReport:
    """Two-cluster k-means on every normalised source feature of the training partition."""
    with stage("cluster"):
        m = kmeans_fit(scaled_train, seed=seed)
        return ClusterReport(m, cluster_purity(m, scaled_train), feature_importance(m, scaled_train))


# --- training and evaluation -------------------------------------------------


def train_bundle(pre: Preprocessed, cluster: ClusterReport | None, cfg: PipelineConfig) -> ModelBundle:
    train, _ = pre.model_inputs(cfg.scale)
    kmeans = cluster.model if (cfg.with_cluster_feature and cluster is not None) else None
    if kmeans is not None:
        labels = assign_all(kmeans, select_features(pre.scaled_train, kmeans.names))
        train = train.with_feature(CLUSTER_FEATURE, labels.astype(float))
    with stage("cart"):
        cart = cart_train(train, cfg.cart)
    with stage("logistic"):
        logistic = logit_fit(train, cfg.logistic)
    return ModelBundle(
        source_schema=pre.split.train.schema,
        scaler=pre.scaler,
        scale_inputs=cfg.scale,
        selected=pre.selected,
        kmeans=kmeans,
        cart=cart,
        logistic=logistic,
        provenance=Provenance(cfg.seed, cfg.train_count, resolve_created(cfg), pre.split.method),
    )


@dataclass(frozen=True)
class ModelEvaluation:
    name: str
    predictions: list[EvaluatedPrediction]
    confusion: ConfusionMatrix
    rates: RateReport

    def predictions_csv(self) -> str:
        rows = [
            [p.id, p.actual.value, p.prediction.label.value, num(p.prediction.confidence), p.prediction.member]
            for p in self.predictions
        ]
        return _csv(rows, ["id", "actual", "predicted", "confidence", "winning_member"])


def evaluate_bundle(bundle: ModelBundle, raw: Dataset, models: Sequence[str] = MODEL_NAMES) -> dict[str, ModelEvaluation]:
    """Score raw (unscaled, full-schema) samples with the bundle's models."""
    with stage("evaluate"):
        inputs = bundle.prepare(raw)
        out = {}
        for name in models:
            preds = evaluate_classifier(bundle.model(name), inputs)
            cm = confusion((p.actual, p.prediction.label) for p in preds)
            out[name] = ModelEvaluation(name, preds, cm, rates(cm))
        return out


def write_evaluations(evals: dict[str, ModelEvaluation], out: Path) -> ComparisonTable:
    out = Path(out)
    for name, ev in evals.items():
        write_text(out / f"predictions_{name}.csv", ev.predictions_csv())
        write_text(out / f"confusion_{name}.csv", ev.confusion.to_csv())
        write_text(out / f"rates_{name}.csv", rates_csv(ev.rates))
    table = compare_models({name: ev.rates for name, ev in evals.items()})
    write_text(out / "comparison.txt", table.to_text())
    write_text(out / "comparison.csv", table.to_csv())
    return table


@dataclass(frozen=True)
class Experiment:
    config: PipelineConfig
    eda: EdaReport
    pre: Preprocessed
    cluster: ClusterReport
    bundle: ModelBundle
    evaluations: dict[str, ModelEvaluation]

    @property
    def rules(self) -> str:
        return extract_rules(self.bundle.cart)

    @property
    def comparison(self) -> ComparisonTable:
        return compare_models({n: ev.rates for n, ev in self.evaluations.items()})

    def write(self, out: Path):
        out = Path(out)
        self.eda.write(out / "eda")
        self.pre.write(out / "preprocess", self.config.scale)
        self.cluster.write(out / "cluster")
        write_text(out / "model.json", dumps(self.bundle))
        write_text(out / "rules.txt", self.rules + "\n")
        write_evaluations(self.evaluations, out / "evaluation")


def run_experiment(cfg: PipelineConfig, ds: Dataset | None = None) -> Experiment:
    if ds is None:
        with stage("load"):
            ds = load_input(cfg.input)
    pre = preprocess(ds, cfg)
    with stage("eda"):
        eda = run_eda(ds)
    cluster = run_clustering(pre.scaled_train, cfg.seed)
    bundle = train_bundle(pre, cluster, cfg)
    evals = evaluate_bundle(bundle, pre.split.test)
    return Experiment(cfg, eda, pre, cluster, bundle, evals)


SUMMARY_HEADER = [
    "seed", "model", "tp", "fn", "fp", "tn",
    "overall_error", "fnr_paper", "fpr_paper", "sensitivity", "specificity",
]


def summary_rows(exp: Experiment) -> list[list]:
    rows = []
    for name, ev in exp.evaluations.items():
        cm, r = ev.confusion, ev.rates
        rows.append([
            exp.config.seed, name, cm.tp, cm.fn, cm.fp, cm.tn,
            full_precision(r.overall_error), full_precision(r.fnr_paper), full_precision(r.fpr_paper),
            full_precision(r.sensitivity), full_precision(r.specificity),
        ])
    return rows


def run_batch(cfg: PipelineConfig, seeds: Iterable[int], ds: Dataset | None = None) -> list[Experiment]:
    """One experiment per seed, in seed order."""
    if ds is None:
        with stage("load"):
            ds = load_input(cfg.input)
    return [run_experiment(replace(cfg, seed=s), ds) for s in seeds]


def batch_summary_csv(experiments: Sequence[Experiment]) -> str:
    rows = [row for exp in experiments for row in summary_rows(exp)]
    return _csv(rows, SUMMARY_HEADER)

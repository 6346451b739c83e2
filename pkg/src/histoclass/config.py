"""Pipeline defaults and the experiment configuration object.

Every constant the pipeline depends on lives here so the CLI flags and the
library defaults cannot drift apart.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

TRAIN_COUNT = 448
OUTLIER_Z = 4.0
NORMALITY_BOUND = 2.0
CORRELATION_TAU = 0.65
CORRELATION_PIVOT = "radius"
N_CLUSTERS = 2
KMEANS_RESTARTS = 10
KMEANS_MAX_ITER = 100
KMEANS_TOL = 1e-6
HIST_BINS = 20

CART_MAX_DEPTH = 5
CART_MIN_LEAF = 5
CART_MIN_GINI_DECREASE = 1e-4

LOGIT_MAX_ITER = 200
LOGIT_GRAD_TOL = 1e-6
LOGIT_L2 = 1e-6

BUNDLE_VERSION = 1


@dataclass(frozen=True)
class CartParams:
    max_depth: int = CART_MAX_DEPTH
    min_leaf: int = CART_MIN_LEAF
    min_gini_decrease: float = CART_MIN_GINI_DECREASE

    def __post_init__(self):
        if self.max_depth < 0:
            raise ValueError("max_depth must be >= 0")
        if self.min_leaf < 1:
            raise ValueError("min_leaf must be >= 1")
        if self.min_gini_decrease < 0:
            raise ValueError("min_gini_decrease must be >= 0")


@dataclass(frozen=True)
class LogisticFitParams:
    max_iter: int = LOGIT_MAX_ITER
    grad_tol: float = LOGIT_GRAD_TOL
    l2: float = LOGIT_L2

    def __post_init__(self):
        if self.max_iter < 1:
            raise ValueError("max_iter must be >= 1")
        if self.grad_tol <= 0:
            raise ValueError("grad_tol must be > 0")
        if self.l2 < 0:
            raise ValueError("l2 must be >= 0")


@dataclass(frozen=True)
class PipelineConfig:
    """Everything needed to run one seeded experiment end to end.

    ``created`` is the provenance timestamp written into the model bundle.
    Leave it as ``None`` to take ``SOURCE_DATE_EPOCH`` (if set) or the wall
    clock; pin it when byte-identical bundles are required.
    """

    input: Path | None = None
    seed: int = 0
    train_count: int = TRAIN_COUNT
    pivot: str = CORRELATION_PIVOT
    tau: float = CORRELATION_TAU
    scale: bool = True
    with_cluster_feature: bool = False
    cart: CartParams = field(default_factory=CartParams)
    logistic: LogisticFitParams = field(default_factory=LogisticFitParams)
    out: Path | None = None
    created: str | None = None

"""Tissue-abnormality classification: EDA, min-max scaling, k-means, CART,
logistic regression and a highest-confidence voting ensemble, on the
Wisconsin diagnostic breast cancer (WDBC) data.
"""

from .cart import CartModel, cart_predict, cart_train, extract_rules, parse_rules
from .config import CartParams, LogisticFitParams, PipelineConfig
from .data import (
    Dataset,
    DataSplit,
    Diagnosis,
    Sample,
    load_bundled_wdbc,
    load_wdbc,
    read_wdbc,
    select_features,
    train_test_split,
)
from .ensemble import EnsembleModel, ScoredPrediction, ensemble_evaluate, ensemble_predict
from .errors import BundleFormatError, DataError, HistoclassError, NumericalError
from .evaluation import ConfusionMatrix, RateReport, compare_models, confusion, rates
from .kmeans import KMeansModel, attach_cluster_feature, cluster_purity, feature_importance, kmeans_fit
from .logistic import LogisticModel, logit_fit, logit_predict, predict_proba
from .pipeline import evaluate_bundle, run_batch, run_experiment
from .scaler import MinMaxScaler
from .stats import (
    compute_stats,
    correlation_matrix,
    detect_outliers,
    normality_screen,
    pearson,
    recommend_drops,
)
from .store import ModelBundle, dumps, load_bundle, loads, save_bundle

__version__ = "0.1.0"

"""Versioned JSON persistence for fitted pipelines.

Floats are written as decimal strings with 17 significant digits, which
round-trips every IEEE double exactly. Output is deterministic: the same
bundle always serialises to the same bytes.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any

import numpy as np

from .cart import CartModel, CartNode
from .config import BUNDLE_VERSION, CartParams
from .data import Dataset, select_features
from .ensemble import PREFER_A, EnsembleModel
from .errors import BundleFormatError, DataError
from .kmeans import CLUSTER_FEATURE, KMeansModel, assign_all
from .logistic import LogisticModel
from .scaler import MinMaxScaler, transform

FORMAT_NAME = "histoclass-bundle"


def num(x: float) -> str:
    return format(float(x), ".17g")


def _float(text: Any, where: str) -> float:
    if not isinstance(text, str):
        raise BundleFormatError(f"{where}: expected decimal text, got {type(text).__name__}")
    try:
        return float(text)
    except ValueError:
        raise BundleFormatError(f"{where}: not a decimal number: {text!r}") from None


@dataclass(frozen=True)
class Provenance:
    seed: int
    train_count: int
    created: str
    split_method: str = "stratified"


@dataclass(frozen=True)
class ModelBundle:
    """A fitted pipeline: preprocessing plus the CART, logistic and ensemble models.

    ``source_schema`` is the raw input schema; ``schema`` is what the models
    consume (selected features, plus ``cluster`` when ``kmeans`` is set).
    """

    source_schema: tuple[str, ...]
    scaler: MinMaxScaler
    scale_inputs: bool
    selected: tuple[str, ...]
    kmeans: KMeansModel | None
    cart: CartModel
    logistic: LogisticModel
    provenance: Provenance
    tie_policy: str = PREFER_A
    version: int = BUNDLE_VERSION
    schema: tuple[str, ...] = field(init=False)

    def __post_init__(self):
        schema = self.selected + ((CLUSTER_FEATURE,) if self.kmeans is not None else ())
        object.__setattr__(self, "schema", schema)
        if self.scaler.names != self.source_schema:
            raise DataError("scaler schema differs from source schema")
        if not set(self.selected) <= set(self.source_schema):
            raise DataError("selected features are not a subset of the source schema")
        if self.kmeans is not None and not set(self.kmeans.names) <= set(self.source_schema):
            raise DataError("k-means features are not a subset of the source schema")
        for member in (self.cart, self.logistic):
            if tuple(member.schema) != schema:
                raise DataError(
                    f"{member.name} schema {list(member.schema)} differs from bundle schema {list(schema)}"
                )

    @property
    def ensemble(self) -> EnsembleModel:
        return EnsembleModel((self.cart, self.logistic), self.tie_policy)

    def model(self, name: str):
        try:
            return {"cart": self.cart, "logistic": self.logistic, "ensemble": self.ensemble}[name]
        except KeyError:
            raise DataError(f"unknown model {name!r}") from None

    def prepare(self, ds: Dataset) -> Dataset:
        """Turn a raw dataset into the models' input schema."""
        if ds.schema != self.source_schema:
            raise DataError(
                f"schema mismatch: bundle expects {list(self.source_schema)}, got {list(ds.schema)}"
            )
        scaled = transform(self.scaler, ds)
        base = scaled if self.scale_inputs else ds
        out = select_features(base, self.selected)
        if self.kmeans is not None:
            labels = assign_all(self.kmeans, select_features(scaled, self.kmeans.names))
            out = out.with_feature(CLUSTER_FEATURE, labels.astype(float))
        return out


def _node_doc(node: CartNode) -> dict:
    doc: dict[str, Any] = {"counts": [node.n_a, node.n_n]}
    if not node.is_leaf:
        doc["feature"] = node.feature
        doc["threshold"] = num(node.threshold)
        doc["left"] = _node_doc(node.left)
        doc["right"] = _node_doc(node.right)
    return doc


def _node_from(doc: dict, where: str = "cart.root") -> CartNode:
    n_a, n_n = doc["counts"]
    if "feature" not in doc:
        return CartNode(int(n_a), int(n_n))
    left = _node_from(doc["left"], where + ".left")
    right = _node_from(doc["right"], where + ".right")
    if (left.n_a + right.n_a, left.n_n + right.n_n) != (n_a, n_n):
        raise BundleFormatError(f"{where}: child counts do not sum to parent counts")
    return CartNode(
        int(n_a),
        int(n_n),
        feature=str(doc["feature"]),
        threshold=_float(doc["threshold"], where + ".threshold"),
        left=left,
        right=right,
    )


def bundle_to_doc(b: ModelBundle) -> dict:
    km = None
    if b.kmeans is not None:
        m = b.kmeans
        km = {
            "features": list(m.names),
            "centroids": [[num(v) for v in row] for row in m.centroids],
            "seed": m.seed,
            "wcss": num(m.wcss),
            "iterations": m.iterations,
            "restarts": m.restarts,
            "converged": bool(m.converged),
        }
    return {
        "format": FORMAT_NAME,
        "version": b.version,
        "source_schema": list(b.source_schema),
        "scaler": {
            "features": [
                {"name": n, "min": num(lo), "max": num(hi)}
                for n, lo, hi in zip(b.scaler.names, b.scaler.mins, b.scaler.maxs)
            ]
        },
        "scale_inputs": b.scale_inputs,
        "selected_features": list(b.selected),
        "kmeans": km,
        "schema": list(b.schema),
        "cart": {
            "params": {
                "max_depth": b.cart.params.max_depth,
                "min_leaf": b.cart.params.min_leaf,
                "min_gini_decrease": num(b.cart.params.min_gini_decrease),
            },
            "n_train": b.cart.n_train,
            "root": _node_doc(b.cart.root),
        },
        "logistic": {
            "weights": {n: num(w) for n, w in zip(b.logistic.schema, b.logistic.weights)},
            "intercept": num(b.logistic.intercept),
            "converged": bool(b.logistic.converged),
            "iterations": b.logistic.iterations,
            "grad_norm": num(b.logistic.grad_norm),
        },
        "ensemble": {"tie_policy": b.tie_policy},
        "provenance": {
            "seed": b.provenance.seed,
            "train_count": b.provenance.train_count,
            "split_method": b.provenance.split_method,
            "created": b.provenance.created,
        },
    }


def dumps(b: ModelBundle) -> str:
    return json.dumps(bundle_to_doc(b), indent=2, ensure_ascii=False) + "\n"


def save_bundle(b: ModelBundle, sink) -> None:
    """Write to a path or a text stream."""
    text = dumps(b)
    if hasattr(sink, "write"):
        sink.write(text)
    else:
        with open(sink, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)


def bundle_from_doc(doc: dict) -> ModelBundle:
    if not isinstance(doc, dict) or doc.get("format") != FORMAT_NAME:
        raise BundleFormatError("not a model bundle document")
    version = doc.get("version")
    if version != BUNDLE_VERSION:
        raise BundleFormatError(f"unknown bundle version {version!r}")
    try:
        source_schema = tuple(doc["source_schema"])
        sc = doc["scaler"]["features"]
        scaler = MinMaxScaler(
            tuple(f["name"] for f in sc),
            tuple(_float(f["min"], f"scaler.{f['name']}.min") for f in sc),
            tuple(_float(f["max"], f"scaler.{f['name']}.max") for f in sc),
        )
        km_doc = doc["kmeans"]
        kmeans = None
        if km_doc is not None:
            centroids = np.array(
                [[_float(v, "kmeans.centroids") for v in row] for row in km_doc["centroids"]]
            )
            centroids.setflags(write=False)
            kmeans = KMeansModel(
                names=tuple(km_doc["features"]),
                centroids=centroids,
                seed=int(km_doc["seed"]),
                wcss=_float(km_doc["wcss"], "kmeans.wcss"),
                iterations=int(km_doc["iterations"]),
                restarts=int(km_doc["restarts"]),
                converged=bool(km_doc["converged"]),
            )
        schema = tuple(doc["schema"])
        cd = doc["cart"]
        params = CartParams(
            max_depth=int(cd["params"]["max_depth"]),
            min_leaf=int(cd["params"]["min_leaf"]),
            min_gini_decrease=_float(cd["params"]["min_gini_decrease"], "cart.params.min_gini_decrease"),
        )
        cart = CartModel(_node_from(cd["root"]), schema, params, int(cd["n_train"]))
        ld = doc["logistic"]
        weights = ld["weights"]
        if tuple(weights) != schema:
            raise BundleFormatError("logistic weights do not match the bundle schema")
        logistic = LogisticModel(
            schema=schema,
            weights=tuple(_float(weights[n], f"logistic.weights.{n}") for n in schema),
            intercept=_float(ld["intercept"], "logistic.intercept"),
            converged=bool(ld["converged"]),
            iterations=int(ld["iterations"]),
            grad_norm=_float(ld["grad_norm"], "logistic.grad_norm"),
        )
        pd = doc["provenance"]
        bundle = ModelBundle(
            source_schema=source_schema,
            scaler=scaler,
            scale_inputs=bool(doc["scale_inputs"]),
            selected=tuple(doc["selected_features"]),
            kmeans=kmeans,
            cart=cart,
            logistic=logistic,
            provenance=Provenance(
                int(pd["seed"]), int(pd["train_count"]), str(pd["created"]), str(pd["split_method"])
            ),
            tie_policy=doc["ensemble"]["tie_policy"],
            version=version,
        )
    except BundleFormatError:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise BundleFormatError(f"malformed bundle: {type(exc).__name__}: {exc}") from exc
    if bundle.schema != schema:
        raise BundleFormatError("bundle schema inconsistent with its selected features")
    return bundle


def loads(text: str) -> ModelBundle:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise BundleFormatError(
            f"malformed bundle at line {exc.lineno} column {exc.colno} (char {exc.pos}): {exc.msg}"
        ) from None
    return bundle_from_doc(doc)


def load_bundle(source) -> ModelBundle:
    """Read from a path or a text stream."""
    if hasattr(source, "read"):
        return loads(source.read())
    with open(source, encoding="utf-8") as fh:
        return loads(fh.read())

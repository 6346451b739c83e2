"""Binary CART classifier: Gini splits, Laplace-smoothed leaves, rule listings."""

from __future__ import annotations

import re
from dataclasses import dataclass

import numpy as np

from .config import CartParams
from .data import Dataset, Diagnosis
from .errors import DataError

# Two rational split scores closer than this are treated as equal. Scores are
# sums of fractions with denominators <= n**2, so genuine differences are far
# larger for any realistic n.
_TIE_EPS = 1e-12


@dataclass(frozen=True)
class CartNode:
    n_a: int
    n_n: int
    feature: str | None = None
    threshold: float | None = None
    left: CartNode | None = None
    right: CartNode | None = None

    @property
    def is_leaf(self) -> bool:
        return self.feature is None

    @property
    def n(self) -> int:
        return self.n_a + self.n_n

    @property
    def label(self) -> Diagnosis:
        # ties favour the abnormal call
        return Diagnosis.A if self.n_a >= self.n_n else Diagnosis.N

    @property
    def confidence(self) -> float:
        return (max(self.n_a, self.n_n) + 1) / (self.n + 2)

    def depth(self) -> int:
        if self.is_leaf:
            return 0
        return 1 + max(self.left.depth(), self.right.depth())

    def leaves(self):
        if self.is_leaf:
            yield self
        else:
            yield from self.left.leaves()
            yield from self.right.leaves()


@dataclass(frozen=True)
class CartModel:
    root: CartNode
    schema: tuple[str, ...]
    params: CartParams
    n_train: int

    @property
    def name(self) -> str:
        return "cart"

    def predict(self, x) -> tuple[Diagnosis, float]:
        return cart_predict(self, x)


def gini(n_a, n_n):
    """Gini impurity ``1 - pA**2 - pN**2``; works elementwise on arrays."""
    n = n_a + n_n
    with np.errstate(invalid="ignore", divide="ignore"):
        return np.where(n > 0, 1.0 - (n_a**2 + n_n**2) / np.maximum(n, 1) ** 2, 0.0)


def _midpoint(lo: float, hi: float) -> float:
    mid = (lo + hi) / 2.0
    # adjacent floats can round the midpoint up onto ``hi``
    return lo if mid >= hi else mid


def best_split(X: np.ndarray, y: np.ndarray, min_leaf: int = 1):
    """Exhaustive search for the Gini-optimal split of one node.

    Candidates are midpoints between consecutive distinct sorted values of
    every feature whose children both hold at least ``min_leaf`` samples.
    Returns ``(feature_index, threshold, decrease)`` or ``None``. Ties go
    to the lower feature index, then the smaller threshold.
    """
    n = len(y)
    n_a = int(y.sum())
    parent = float(gini(n_a, n - n_a))
    best = None
    best_score = -np.inf
    for j in range(X.shape[1]):
        order = np.argsort(X[:, j], kind="stable")
        xs = X[order, j]
        ys = y[order]
        left_n = np.arange(1, n)
        left_a = np.cumsum(ys)[:-1]
        valid = (xs[:-1] < xs[1:]) & (left_n >= min_leaf) & (n - left_n >= min_leaf)
        if not valid.any():
            continue
        left_n = left_n[valid].astype(float)
        left_a = left_a[valid].astype(float)
        right_n = n - left_n
        right_a = n_a - left_a
        # maximising this is equivalent to minimising weighted child impurity
        score = (left_a**2 + (left_n - left_a) ** 2) / left_n + (
            right_a**2 + (right_n - right_a) ** 2
        ) / right_n
        top = score.max()
        if top > best_score + _TIE_EPS:
            pos = np.flatnonzero(valid)[np.flatnonzero(score >= top - _TIE_EPS)[0]]
            best_score = top
            best = (j, _midpoint(float(xs[pos]), float(xs[pos + 1])))
    if best is None:
        return None
    decrease = parent - (n - best_score) / n
    return best[0], best[1], float(decrease)


def _grow(X, y, depth, params: CartParams, schema) -> CartNode:
    n_a = int(y.sum())
    n_n = len(y) - n_a
    if n_a == 0 or n_n == 0 or depth >= params.max_depth:
        return CartNode(n_a, n_n)
    split = best_split(X, y, params.min_leaf)
    if split is None or split[2] < params.min_gini_decrease:
        return CartNode(n_a, n_n)
    j, thr, _ = split
    go_left = X[:, j] <= thr
    return CartNode(
        n_a,
        n_n,
        feature=schema[j],
        threshold=thr,
        left=_grow(X[go_left], y[go_left], depth + 1, params, schema),
        right=_grow(X[~go_left], y[~go_left], depth + 1, params, schema),
    )


def cart_train(train: Dataset, params: CartParams | None = None) -> CartModel:
    params = params or CartParams()
    if len(train) == 0:
        raise DataError("empty training set")
    root = _grow(train.X, train.y, 0, params, train.schema)
    return CartModel(root, train.schema, params, len(train))


def _leaf_for(m: CartModel, x) -> CartNode:
    x = np.asarray(x, dtype=float).ravel()
    if x.size != len(m.schema):
        raise DataError(
            f"schema mismatch: model expects {len(m.schema)} features, got {x.size}"
        )
    node = m.root
    index = {name: i for i, name in enumerate(m.schema)}
    while not node.is_leaf:
        node = node.left if x[index[node.feature]] <= node.threshold else node.right
    return node


def cart_predict(m: CartModel, sample) -> tuple[Diagnosis, float]:
    leaf = _leaf_for(m, sample)
    return leaf.label, leaf.confidence


def cart_predict_dataset(m: CartModel, ds: Dataset) -> list[tuple[Diagnosis, float]]:
    if ds.schema != m.schema:
        raise DataError(f"schema mismatch: model {list(m.schema)}, data {list(ds.schema)}")
    return [cart_predict(m, row) for row in ds.X]


def extract_rules(m: CartModel | CartNode, decimals: int = 3) -> str:
    """Render the tree as an indented rule listing.

    Each branch prints as ``feature <= t [ Mode: X ]`` or ``feature > t
    [ Mode: X ]``; branches ending in a leaf carry a ``⇒ X`` suffix. A
    single-leaf tree prints ``[ Mode: X ] ⇒ X``.
    """
    root = m.root if isinstance(m, CartModel) else m
    if root.is_leaf:
        return f"[ Mode: {root.label} ] ⇒ {root.label}"
    lines: list[str] = []

    def branch(node: CartNode, prefix: str, top: bool):
        kids = (("<=", node.left), (">", node.right))
        for pos, (op, child) in enumerate(kids):
            last = pos == 1
            if top:
                lead, nested = "", "    " if last else "│   "
            else:
                lead = prefix + ("└── " if last else "├── ")
                nested = prefix + ("    " if last else "│   ")
            text = f"{node.feature} {op} {node.threshold:.{decimals}f} [ Mode: {child.label} ]"
            if child.is_leaf:
                text += f" ⇒ {child.label}"
            lines.append(lead + text)
            if not child.is_leaf:
                branch(child, nested if not top else "", False)

    branch(root, "", True)
    return "\n".join(lines)


_RULE = re.compile(
    r"^(?P<indent>(?:[│ ]   |[├└]── )*)"
    r"(?:(?P<feature>\S+) (?P<op><=|>) (?P<thr>-?\d+(?:\.\d+)?) )?"
    r"\[ Mode: (?P<mode>[AN]) \](?: ⇒ (?P<leaf>[AN]))?$"
)


@dataclass(frozen=True)
class RuleLine:
    depth: int
    feature: str | None
    op: str | None
    threshold: float | None
    mode: str
    leaf: str | None


def parse_rules(text: str) -> list[RuleLine]:
    """Parse a listing produced by :func:`extract_rules` back into lines."""
    out = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        match = _RULE.match(line)
        if match is None:
            raise ValueError(f"line {lineno}: not a rule line: {line!r}")
        indent = match["indent"]
        out.append(
            RuleLine(
                depth=len(indent) // 4,
                feature=match["feature"],
                op=match["op"],
                threshold=float(match["thr"]) if match["thr"] else None,
                mode=match["mode"],
                leaf=match["leaf"],
            )
        )
    return out

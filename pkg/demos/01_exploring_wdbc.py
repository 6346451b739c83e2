"""
Exploring the WDBC cytology features
====================================

Descriptive statistics, outliers, a kurtosis screen and the correlation
structure that drives feature pruning.
"""

# %%
# The bundled copy of the dataset holds 569 biopsies with ten mean features.
import numpy as np

from histoclass import (
    compute_stats,
    correlation_matrix,
    detect_outliers,
    load_bundled_wdbc,
    normality_screen,
    recommend_drops,
)

ds = load_bundled_wdbc()
counts = {d.value: int(np.sum([x is d for x in ds.diagnoses])) for d in set(ds.diagnoses)}
print(len(ds), "samples", counts)

# %%
# Per-feature moments. Sample std uses n-1, skewness and excess kurtosis use
# the population moments.
for name in ds.schema:
    s = compute_stats(ds.column(name))
    print(f"{name:15s} mean {s.mean:10.4f}  std {s.std:9.4f}  skew {s.skewness:6.2f}  kurt {s.kurtosis:6.2f}")

# %%
# Cells more than four standard deviations from their feature mean.
outliers = detect_outliers(ds)
print(len(outliers.entries), "outlier cells")

# %%
# Features whose excess kurtosis leaves [-2, 2] are flagged.
print("fail the screen:", normality_screen(ds).failing())

# %%
# radius is strongly tied to the other size measures; anything with
# |r| >= 0.65 against it is redundant.
cm = correlation_matrix(ds)
for name in ("perimeter", "area", "concave_points", "concavity"):
    print(f"r(radius, {name}) = {cm['radius', name]:.3f}")
drops = recommend_drops(cm, "radius")
print("dropped:", list(drops.dropped))
print("kept:", drops.keep(ds.schema))

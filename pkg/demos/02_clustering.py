"""
Two-cluster structure in the scaled features
============================================

k-means with k = 2 on the min-max scaled training partition, cluster purity
against the diagnosis and which features separate the centroids.
"""

# %%
from histoclass import cluster_purity, feature_importance, kmeans_fit, load_bundled_wdbc, train_test_split
from histoclass.scaler import fit, transform

ds = load_bundled_wdbc()
split = train_test_split(ds, 448, seed=0)
scaler = fit(split.train)
train = transform(scaler, split.train)

# %%
# Ten seeded restarts, keep the lowest within-cluster sum of squares.
m = kmeans_fit(train, seed=0)
print(f"wcss {m.wcss:.3f} after {m.iterations} iterations, converged={m.converged}")

# %%
# One cluster is almost entirely benign.
for p in cluster_purity(m, train):
    print(f"cluster {p.cluster}: {p.count_A:3d} A {p.count_N:3d} N  N-share {p.share_N:.3f}")

# %%
# Separation per feature, in units of the feature's spread.
imp = feature_importance(m, train)
for name, share in sorted(zip(imp.names, imp.shares), key=lambda t: -t[1]):
    print(f"{name:15s} {share:.3f}")

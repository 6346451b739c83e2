"""
CART, logistic regression and their confidence vote
===================================================

Train both models on the pruned, scaled features, print the tree as rules and
compare error rates on the held-out 121 samples.
"""

# %%
from histoclass import PipelineConfig, extract_rules, run_experiment

exp = run_experiment(PipelineConfig(seed=0, created="demo"))
print("features:", exp.bundle.schema)

# %%
# The tree as nested rules. Each branch shows the majority class of the
# subset it leads to.
print(extract_rules(exp.bundle.cart))

# %%
# Logistic weights on the scaled features; positive pushes toward A.
lm = exp.bundle.logistic
for name, w in zip(lm.schema, lm.weights):
    print(f"{name:15s} {w:+8.3f}")
print(f"intercept       {lm.intercept:+8.3f}")

# %%
# The ensemble takes whichever member is more confident. Ties go to A.
for name, ev in exp.evaluations.items():
    print(name, ev.confusion.matrix)
print(exp.comparison.to_text())

# %%
# Who won each test case.
from collections import Counter

print(Counter(p.prediction.member for p in exp.evaluations["ensemble"].predictions))

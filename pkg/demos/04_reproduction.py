"""
How stable are the headline numbers?
====================================

A single split is noisy with 121 test cases, so run twenty seeds and look at
the distribution of error rates. Also shows that a saved bundle reloads to
the same predictions.
"""

# %%
import statistics

from histoclass import PipelineConfig, dumps, evaluate_bundle, loads, run_batch

exps = run_batch(PipelineConfig(created="demo"), range(20))
errors = {n: [float(e.evaluations[n].rates.overall_error) for e in exps] for n in ("cart", "logistic", "ensemble")}
for name, errs in errors.items():
    print(f"{name:9s} median {statistics.median(errs):.4f}  min {min(errs):.4f}  max {max(errs):.4f}")

# %%
# False negatives are the costly mistake. How often does the vote have no
# more of them than either member?
fn = {n: [e.evaluations[n].confusion.fn for e in exps] for n in errors}
wins = sum(e <= c and e <= l for e, c, l in zip(fn["ensemble"], fn["cart"], fn["logistic"]))
print(f"ensemble FN <= both members on {wins}/20 splits")

# %%
# Round trip through the JSON bundle.
exp = exps[0]
text = dumps(exp.bundle)
again = loads(text)
print(again == exp.bundle, len(text), "bytes")
print(evaluate_bundle(again, exp.pre.split.test)["ensemble"].confusion.matrix)

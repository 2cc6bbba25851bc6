"""
Three classifiers under one cross-validation harness
====================================================

Random forest, Gaussian naive Bayes, and k-nearest-neighbours share a
fit/predict interface, so the repeated stratified k-fold harness treats
them uniformly. Per-case accuracies combine into one channel-count
weighted average.
"""

import numpy as np

from eegstrata import (CVConfig, FeatureMatrix, run_cv, weighted_accuracy)

# two overlapping classes in five dimensions
rng = np.random.default_rng(5)
n_per_class = 40
values = np.vstack([
    rng.normal(0.0, 1.0, size=(n_per_class, 5)),
    rng.normal(1.6, 1.0, size=(n_per_class, 5)),
])
labels = np.array([0] * n_per_class + [1] * n_per_class)
fm = FeatureMatrix(names=tuple(f"f{i}" for i in range(5)), values=values, labels=labels)

# 5 folds, 5 reshuffled repeats; accuracy is pooled over folds per repeat
cfg = CVConfig(n_folds=5, n_repeats=5, seed=1)

for spec in (("rf", {"n_trees": 50}), "nb", ("knn", {"k": 3})):
    kind = spec if isinstance(spec, str) else spec[0]
    result = run_cv(fm, spec, cfg, select="off")
    print(f"{kind:4s} accuracy: {result.mean:5.2f} +/- {result.std:.2f} %")

# per-fold selection re-picks features inside each training split, so the
# held-out fold never leaks into the choice
result = run_cv(fm, ("rf", {"n_trees": 50}), cfg, select="per-fold")
print(f"rf + per-fold selection: {result.mean:5.2f} +/- {result.std:.2f} %")

# combining several cases: each case's accuracy is weighted by how many
# channels it contains
cases = {"small": (98.5, 300), "medium": (96.0, 300), "large": (97.1, 500)}
means = [m for m, _ in cases.values()]
weights = [w for _, w in cases.values()]
print("weighted average accuracy:", round(weighted_accuracy(means, weights), 2))

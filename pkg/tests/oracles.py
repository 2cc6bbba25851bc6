"""Independent reference implementations used to cross-check the library.

Everything here is written from the textbook definition with plain loops,
no code shared with the package. Slow on purpose; only tests import this.
"""

import itertools
import math

import numpy as np


def moment_stats(x):
    """Mean, sample std, population-moment skewness g1 and kurtosis m4/m2^2."""
    x = [float(v) for v in x]
    n = len(x)
    mean = sum(x) / n
    m2 = sum((v - mean) ** 2 for v in x) / n
    m3 = sum((v - mean) ** 3 for v in x) / n
    m4 = sum((v - mean) ** 4 for v in x) / n
    var_sample = sum((v - mean) ** 2 for v in x) / (n - 1)
    skew = m3 / m2 ** 1.5 if m2 > 0 else 0.0
    kurt = m4 / m2 ** 2 if m2 > 0 else 0.0
    return {"mean": mean, "std": math.sqrt(var_sample), "skewness": skew, "kurtosis": kurt}


def quantile_linear(x, q):
    """Linear interpolation at position (n-1)*q of the sorted values."""
    s = sorted(float(v) for v in x)
    pos = (len(s) - 1) * q
    lo = math.floor(pos)
    hi = math.ceil(pos)
    frac = pos - lo
    return s[lo] * (1 - frac) + s[hi] * frac


def shannon_entropy_direct(x, bins=64):
    x = [float(v) for v in x]
    lo, hi = min(x), max(x)
    if lo == hi:
        return 0.0
    counts = [0] * bins
    width = (hi - lo) / bins
    for v in x:
        k = int((v - lo) / width)
        if k == bins:  # rightmost edge belongs to the last bin
            k = bins - 1
        counts[k] += 1
    h = 0.0
    for c in counts:
        if c:
            p = c / len(x)
            h -= p * math.log2(p)
    return h


def sample_entropy_slow(x, m=2, r_factor=0.2):
    """Triple-loop sample entropy, ordered template pairs over [0, n-m),
    Chebyshev distance, with the same documented caps as the library."""
    x = [float(v) for v in x]
    n = len(x)
    mean = sum(x) / n
    r = r_factor * math.sqrt(sum((v - mean) ** 2 for v in x) / n)
    n_m = n - m
    a = 0
    b = 0
    for i in range(n_m):
        for j in range(n_m):
            if i == j:
                continue
            dm = max(abs(x[i + k] - x[j + k]) for k in range(m))
            if dm <= r:
                b += 1
                if max(dm, abs(x[i + m] - x[j + m])) <= r:
                    a += 1
    if b == 0:
        return math.log(n_m * (n_m - 1))
    if a == 0:
        return math.log(b * (n_m - 1))
    return -math.log(a / b)


def fluctuation_index_direct(x):
    x = [float(v) for v in x]
    return sum(abs(x[i + 1] - x[i]) for i in range(len(x) - 1)) / (len(x) - 1)


def pearson_direct(a, b):
    """Textbook n*Sxy form of the sample correlation."""
    a = [float(v) for v in a]
    b = [float(v) for v in b]
    n = len(a)
    sx, sy = sum(a), sum(b)
    sxy = sum(u * v for u, v in zip(a, b))
    sxx = sum(u * u for u in a)
    syy = sum(v * v for v in b)
    return (n * sxy - sx * sy) / math.sqrt((n * sxx - sx * sx) * (n * syy - sy * sy))


def merit_direct(indices, feature_class, feature_feature):
    """CFS merit from raw correlation tables."""
    k = len(indices)
    r_cf = sum(abs(feature_class[i]) for i in indices) / k
    if k == 1:
        r_ff = 0.0
    else:
        pairs = list(itertools.combinations(indices, 2))
        r_ff = sum(abs(feature_feature[i][j]) for i, j in pairs) / len(pairs)
    return k * r_cf / math.sqrt(k + k * (k - 1) * r_ff)


def exhaustive_best_subset(feature_class, feature_feature):
    """Argmax of merit over every non-empty subset; merit ties resolve to
    the lexicographically smallest index tuple."""
    d = len(feature_class)
    best = None
    best_merit = -1.0
    for size in range(1, d + 1):
        for combo in itertools.combinations(range(d), size):
            merit = merit_direct(combo, feature_class, feature_feature)
            if merit > best_merit or (merit == best_merit and combo < best):
                best = combo
                best_merit = merit
    return best, best_merit


def in_range_fraction_direct(values, lo, hi):
    values = [float(v) for v in values]
    return sum(1 for v in values if lo <= v <= hi) / len(values)


def knn_brute(train_x, train_y, query, k):
    """All-pairs distances, sorted by (distance, train index), majority vote
    with ties to the smaller label."""
    dists = []
    for i, row in enumerate(train_x):
        d = math.sqrt(sum((float(u) - float(v)) ** 2 for u, v in zip(row, query)))
        dists.append((d, i))
    dists.sort()
    votes = [train_y[i] for _, i in dists[:k]]
    ones = sum(votes)
    return 1 if ones > k - ones else 0


def nb_log_scores(train_x, train_y, query, var_floor=1e-9):
    """Direct Gaussian density log-scores per class."""
    train_x = np.asarray(train_x, dtype=float)
    train_y = np.asarray(train_y)
    scores = []
    for c in (0, 1):
        rows = train_x[train_y == c]
        prior = math.log(rows.shape[0] / train_x.shape[0])
        total = prior
        for j in range(train_x.shape[1]):
            col = rows[:, j]
            mu = col.mean()
            var = max(col.var(), var_floor)
            v = float(query[j])
            total += -0.5 * math.log(2 * math.pi * var) - (v - mu) ** 2 / (2 * var)
        scores.append(total)
    return scores


class RefNode:
    def __init__(self, feature=None, threshold=None, left=None, right=None, label=None):
        self.feature = feature
        self.threshold = threshold
        self.left = left
        self.right = right
        self.label = label


def _gini_counts(labels):
    n = len(labels)
    ones = sum(labels)
    p1 = ones / n
    p0 = 1 - p1
    return 1 - p0 * p0 - p1 * p1


def reference_tree(x, y):
    """Plain decision tree by exhaustive split search over all features.

    Same conventions as the library tree with subsampling and bootstrap
    off: midpoint thresholds, best Gini decrease, first candidate wins
    ties (features in natural order, thresholds ascending), leaves when
    pure or below two rows or no feature varies.
    """
    x = [[float(v) for v in row] for row in x]
    y = [int(v) for v in y]
    n = len(y)
    if n < 2 or len(set(y)) == 1:
        return RefNode(label=1 if sum(y) > n - sum(y) else 0)
    parent = _gini_counts(y)
    best = None
    best_gain = -1.0
    for f in range(len(x[0])):
        values = sorted(set(row[f] for row in x))
        for lo, hi in zip(values, values[1:]):
            t = (lo + hi) / 2
            left = [y[i] for i in range(n) if x[i][f] <= t]
            right = [y[i] for i in range(n) if x[i][f] > t]
            gain = parent - (len(left) * _gini_counts(left) + len(right) * _gini_counts(right)) / n
            if gain > best_gain:
                best_gain = gain
                best = (f, t)
    if best is None:
        return RefNode(label=1 if sum(y) > n - sum(y) else 0)
    f, t = best
    left_idx = [i for i in range(n) if x[i][f] <= t]
    right_idx = [i for i in range(n) if x[i][f] > t]
    return RefNode(feature=f, threshold=t,
                   left=reference_tree([x[i] for i in left_idx], [y[i] for i in left_idx]),
                   right=reference_tree([x[i] for i in right_idx], [y[i] for i in right_idx]))


def reference_tree_predict(node, row):
    while node.label is None:
        node = node.left if float(row[node.feature]) <= node.threshold else node.right
    return node.label


def weighted_mean_direct(values, weights):
    num = sum(v * w for v, w in zip(values, weights))
    return num / sum(weights)

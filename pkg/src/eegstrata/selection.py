"""Correlation-driven feature selection with a range-based second pass.

Stage one scores candidate subsets by the classic correlation-based merit
(high feature-class correlation, low feature-feature redundancy) explored
with a best-first search. Stage two drops selected features whose values
rarely fall inside a band derived from their own min and max.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigError, DataError, DegenerateDataError
from .features import FeatureMatrix

RANGE_THRESHOLD = 0.8
STALL_LIMIT = 5


def pearson(a, b) -> float:
    """Sample Pearson correlation of two equal-length sequences."""
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.shape != b.shape or a.ndim != 1:
        raise DataError(f"pearson expects two equal-length 1-d sequences, got {a.shape} and {b.shape}")
    if a.size < 2:
        raise DataError("pearson needs at least 2 points")
    ac = a - a.mean()
    bc = b - b.mean()
    denom = np.sqrt((ac ** 2).sum() * (bc ** 2).sum())
    if denom == 0.0:
        raise DegenerateDataError("correlation of a constant sequence is undefined")
    return float(np.clip((ac * bc).sum() / denom, -1.0, 1.0))


@dataclass(frozen=True)
class CorrelationMatrix:
    names: tuple
    feature_feature: np.ndarray = field(repr=False)
    feature_class: np.ndarray = field(repr=False)

    def __post_init__(self):
        object.__setattr__(self, "names", tuple(self.names))
        ff = np.asarray(self.feature_feature, dtype=np.float64)
        fc = np.asarray(self.feature_class, dtype=np.float64)
        object.__setattr__(self, "feature_feature", ff)
        object.__setattr__(self, "feature_class", fc)
        d = len(self.names)
        if ff.shape != (d, d) or fc.shape != (d,):
            raise DataError("correlation matrix shapes do not match the feature names")
        if not np.allclose(ff, ff.T, atol=1e-12, rtol=0.0):
            raise DataError("feature-feature correlations must be symmetric")
        if not np.allclose(np.diag(ff), 1.0, atol=1e-12, rtol=0.0):
            raise DataError("feature-feature diagonal must be 1")
        if np.abs(ff).max() > 1.0 + 1e-12 or (fc.size and np.abs(fc).max() > 1.0 + 1e-12):
            raise DataError("correlations must lie in [-1, 1]")

    @property
    def n_features(self) -> int:
        return len(self.names)

    def index(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise ConfigError(f"unknown feature {name!r}") from None


def correlation_matrix(fm: FeatureMatrix) -> CorrelationMatrix:
    """Feature-feature and feature-class Pearson correlations.

    The class enters as numeric 0/1 (point-biserial). Constant columns
    have no defined correlation and get 0 against everything, which
    removes them from selection without erroring the pipeline.
    """
    if fm.n_rows < 2:
        raise DataError("correlations need at least 2 rows")
    classes = np.unique(fm.labels)
    if classes.size < 2:
        raise DataError("correlation against a single-class label is undefined")

    x = fm.values
    centered = x - x.mean(axis=0)
    norms = np.sqrt((centered ** 2).sum(axis=0))
    constant = norms == 0.0
    safe = np.where(constant, 1.0, norms)
    z = centered / safe
    ff = z.T @ z
    ff = np.clip((ff + ff.T) / 2.0, -1.0, 1.0)
    ff[constant, :] = 0.0
    ff[:, constant] = 0.0
    np.fill_diagonal(ff, 1.0)

    y = fm.labels.astype(np.float64)
    yc = y - y.mean()
    ynorm = np.sqrt((yc ** 2).sum())
    fc = np.clip(z.T @ (yc / ynorm), -1.0, 1.0)
    fc[constant] = 0.0

    return CorrelationMatrix(names=fm.names, feature_feature=ff, feature_class=fc)


def cfs_merit(subset, cm: CorrelationMatrix) -> float:
    """Merit of a feature subset: k * mean|r_cf| / sqrt(k + k(k-1) * mean|r_ff|),
    where the feature-feature mean runs over distinct pairs and is 0 for k=1."""
    idx = [cm.index(n) for n in subset]
    k = len(idx)
    if k == 0:
        raise ConfigError("merit of the empty subset is undefined")
    r_cf = np.abs(cm.feature_class[idx]).mean()
    if k == 1:
        r_ff = 0.0
    else:
        sub = np.abs(cm.feature_feature[np.ix_(idx, idx)])
        r_ff = (sub.sum() - k) / (k * (k - 1))
    return float(k * r_cf / np.sqrt(k + k * (k - 1) * r_ff))


def _merit_by_indices(idx, cm: CorrelationMatrix) -> float:
    k = len(idx)
    r_cf = np.abs(cm.feature_class[list(idx)]).mean()
    if k == 1:
        r_ff = 0.0
    else:
        sub = np.abs(cm.feature_feature[np.ix_(list(idx), list(idx))])
        r_ff = (sub.sum() - k) / (k * (k - 1))
    return float(k * r_cf / np.sqrt(k + k * (k - 1) * r_ff))


def best_first_search(cm: CorrelationMatrix, stall_limit: int | None = STALL_LIMIT) -> tuple:
    """Best-first search over feature subsets under the merit score.

    Starts from the empty set; each expansion pops the most promising open
    subset (highest merit, ties to the lexicographically smaller index
    tuple) and evaluates all one-feature extensions. The best subset seen
    so far is returned once stall_limit consecutive expansions fail to
    improve it (stall_limit=None exhausts the whole lattice). If nothing
    beats the empty set, the single feature with the highest class
    correlation is returned instead.
    """
    d = cm.n_features
    if d < 1:
        raise ConfigError("search needs at least one feature")
    if stall_limit is not None and stall_limit < 1:
        raise ConfigError(f"stall_limit must be positive or None, got {stall_limit}")

    best_idx: tuple = ()
    best_merit = 0.0
    open_heap = [(-0.0, ())]
    seen = {()}
    stall = 0
    while open_heap:
        _, current = heapq.heappop(open_heap)
        improved = False
        for f in range(d):
            if f in current:
                continue
            child = tuple(sorted(current + (f,)))
            if child in seen:
                continue
            seen.add(child)
            merit = _merit_by_indices(child, cm)
            heapq.heappush(open_heap, (-merit, child))
            if merit > best_merit or (merit == best_merit and child < best_idx):
                best_idx = child
                best_merit = merit
                improved = True
        if improved:
            stall = 0
        else:
            stall += 1
            if stall_limit is not None and stall >= stall_limit:
                break

    if not best_idx:
        best_idx = (int(np.argmax(np.abs(cm.feature_class))),)
    return tuple(cm.names[i] for i in best_idx)


def range_bounds(values) -> tuple:
    """Band (lo, hi) centered at (max+min)/2 with half-width (max+min)/4,
    swapped when the half-width is negative."""
    arr = np.asarray(values, dtype=np.float64)
    if arr.size == 0:
        raise DataError("range_bounds of an empty sequence")
    center = (arr.max() + arr.min()) / 2.0
    half = (arr.max() + arr.min()) / 4.0
    lo, hi = center - half, center + half
    if lo > hi:
        lo, hi = hi, lo
    return float(lo), float(hi)


@dataclass(frozen=True)
class FeatureSubset:
    """Outcome of selection: the kept features plus everything needed to
    audit the range filter (bounds, in-range fractions, casualties) and
    the pre-filter subset for comparison."""

    names: tuple
    merit: float
    range_bounds: dict
    eliminated_by_range: tuple
    in_range_fraction: dict
    prefilter_names: tuple
    prefilter_merit: float

    def __post_init__(self):
        object.__setattr__(self, "names", tuple(self.names))
        object.__setattr__(self, "eliminated_by_range", tuple(self.eliminated_by_range))
        object.__setattr__(self, "prefilter_names", tuple(self.prefilter_names))
        if not self.names:
            raise DataError("a feature subset cannot be empty")
        if set(self.names) & set(self.eliminated_by_range):
            raise DataError("kept and eliminated feature sets overlap")

    def to_dict(self) -> dict:
        return {
            "selected": list(self.names),
            "merit": self.merit,
            "prefilter_selected": list(self.prefilter_names),
            "prefilter_merit": self.prefilter_merit,
            "eliminated_by_range": list(self.eliminated_by_range),
            "range_bounds": {n: list(b) for n, b in self.range_bounds.items()},
            "in_range_fraction": dict(self.in_range_fraction),
        }


def range_filter(fm: FeatureMatrix, subset, threshold: float = RANGE_THRESHOLD,
                 cm: CorrelationMatrix | None = None) -> FeatureSubset:
    """Drop features whose in-band fraction falls below 1 - threshold.

    Bounds come from each feature's pooled values over all instances,
    endpoints inclusive. Should every feature fail the test, the one with
    the highest class correlation is kept so the subset stays usable.
    """
    subset = tuple(subset)
    if not subset:
        raise ConfigError("range filter needs a non-empty subset")
    if not 0.0 <= threshold <= 1.0:
        raise ConfigError(f"threshold must be in [0, 1], got {threshold}")
    for n in subset:
        if n not in fm.names:
            raise ConfigError(f"unknown feature {n!r}")
    if cm is None:
        cm = correlation_matrix(fm)

    bounds = {}
    fractions = {}
    kept = []
    eliminated = []
    for name in subset:
        col = fm.column(name)
        lo, hi = range_bounds(col)
        bounds[name] = (lo, hi)
        frac = float(np.mean((col >= lo) & (col <= hi)))
        fractions[name] = frac
        if frac < 1.0 - threshold:
            eliminated.append(name)
        else:
            kept.append(name)

    if not kept:
        # nothing survived; keep the most class-correlated candidate
        ranked = max(subset, key=lambda n: (abs(cm.feature_class[cm.index(n)]), -cm.index(n)))
        kept = [ranked]
        eliminated = [n for n in subset if n != ranked]

    return FeatureSubset(
        names=tuple(kept),
        merit=cfs_merit(kept, cm),
        range_bounds=bounds,
        eliminated_by_range=tuple(eliminated),
        in_range_fraction=fractions,
        prefilter_names=subset,
        prefilter_merit=cfs_merit(subset, cm),
    )


def select_features(fm: FeatureMatrix, stall_limit: int | None = STALL_LIMIT,
                    threshold: float = RANGE_THRESHOLD) -> FeatureSubset:
    """Full selection: correlations, best-first merit search, range filter."""
    cm = correlation_matrix(fm)
    prefilter = best_first_search(cm, stall_limit=stall_limit)
    return range_filter(fm, prefilter, threshold=threshold, cm=cm)

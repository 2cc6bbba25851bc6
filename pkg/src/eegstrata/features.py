"""Per-stratum statistical features and feature-vector assembly.

Fifteen features are computed per stratum in a fixed order; a channel cut
into k strata yields a vector of 15*k named values ("s1_min" .. "s4_kurtosis"
for k=4). Degenerate inputs (constant strata) map to finite documented
values instead of NaN so downstream selection never sees missing data.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field

import numpy as np

from .corpus import Channel
from .errors import ConfigError, DataError
from .sampler import StratificationPlan

FEATURE_ORDER = (
    "min", "max", "skewness", "mean", "std", "mode", "iqr", "q1", "q3",
    "shannon_entropy", "hurst", "fluctuation_index", "sample_entropy",
    "median", "kurtosis",
)

ENTROPY_BINS = 64
MODE_DECIMALS = 6
# strata must be long enough for the rescaled-range estimator
MIN_STRATUM_LENGTH = 64


def _as_floats(x, min_len: int, what: str) -> np.ndarray:
    arr = np.asarray(x, dtype=np.float64)
    if arr.ndim != 1:
        raise DataError(f"{what} expects a 1-d sequence, got shape {arr.shape}")
    if arr.size < min_len:
        raise DataError(f"{what} needs at least {min_len} samples, got {arr.size}")
    return arr


def basic_stats(x) -> dict:
    """Min, max, mean, median, mode, std (n-1), skewness, kurtosis.

    Skewness is g1 = m3 / m2^1.5 and kurtosis is m4 / m2^2 (Pearson, so a
    normal distribution sits near 3), both from population moments. A
    constant input has m2 = 0; both ratios are defined as 0 in that case.
    The mode is the most frequent value after rounding to 6 decimals,
    ties broken toward the smallest value.
    """
    arr = _as_floats(x, 2, "basic_stats")
    centered = arr - arr.mean()
    m2 = np.mean(centered ** 2)
    if m2 > 0.0:
        skewness = np.mean(centered ** 3) / m2 ** 1.5
        kurtosis = np.mean(centered ** 4) / m2 ** 2
    else:
        skewness = 0.0
        kurtosis = 0.0
    rounded = np.round(arr, MODE_DECIMALS)
    uniq, counts = np.unique(rounded, return_counts=True)
    return {
        "min": float(arr.min()),
        "max": float(arr.max()),
        "mean": float(arr.mean()),
        "median": float(np.median(arr)),
        "mode": float(uniq[np.argmax(counts)]),
        "std": float(arr.std(ddof=1)),
        "skewness": float(skewness),
        "kurtosis": float(kurtosis),
    }


def quartiles(x) -> dict:
    """First and third quartile by linear interpolation at position (n-1)*q,
    plus their difference."""
    arr = _as_floats(x, 4, "quartiles")
    q1, q3 = np.quantile(arr, [0.25, 0.75])
    return {"q1": float(q1), "q3": float(q3), "iqr": float(q3 - q1)}


def shannon_entropy(x, bins: int = ENTROPY_BINS) -> float:
    """Entropy in bits of the equal-width histogram over [min, max].

    Bounded by log2(bins); a constant signal has no spread and returns 0.
    """
    arr = _as_floats(x, 2, "shannon_entropy")
    lo, hi = arr.min(), arr.max()
    if lo == hi:
        return 0.0
    counts, _ = np.histogram(arr, bins=bins, range=(lo, hi))
    p = counts[counts > 0] / arr.size
    return float(-(p * np.log2(p)).sum())


def sample_entropy(x, m: int = 2, r_factor: float = 0.2) -> float:
    """Sample entropy: -ln(A/B) where B counts ordered template pairs of
    length m within Chebyshev distance r = r_factor * std(x) (self-matches
    excluded) and A counts the same pairs extended to length m+1.

    Both template sets are indexed over [0, n-m) so A and B draw from the
    same pairs. Caps keep the value finite: A = 0 maps to ln(B*(n-m-1)),
    and B = 0 maps to ln((n-m)*(n-m-1)).
    """
    arr = _as_floats(x, m + 2, "sample_entropy")
    n = arr.size
    r = r_factor * arr.std()
    n_m = n - m
    a = 0
    b = 0
    for i in range(n_m - 1):
        d = np.abs(arr[i] - arr[i + 1:n_m])
        for k in range(1, m):
            np.maximum(d, np.abs(arr[i + k] - arr[i + 1 + k:n_m + k]), out=d)
        b += int(np.count_nonzero(d <= r))
        np.maximum(d, np.abs(arr[i + m] - arr[i + 1 + m:n_m + m]), out=d)
        a += int(np.count_nonzero(d <= r))
    # counts above cover j > i only; ordered pairs double both, ratio intact
    a *= 2
    b *= 2
    if b == 0:
        return float(np.log(n_m * (n_m - 1)))
    if a == 0:
        return float(np.log(b * (n_m - 1)))
    return float(-np.log(a / b) + 0.0)


def hurst_exponent(x) -> float:
    """Rescaled-range estimate of the Hurst exponent.

    The signal is split into non-overlapping windows of dyadic sizes
    8..n/2; each window contributes R/S where R is the range of the
    cumulative mean-adjusted sum and S the window's standard deviation
    (constant windows are skipped). The slope of log(R/S) against
    log(size) is clamped to [0, 1]; if no window size yields a valid
    average the neutral 0.5 is returned.
    """
    arr = _as_floats(x, MIN_STRATUM_LENGTH, "hurst_exponent")
    n = arr.size
    log_sizes = []
    log_rs = []
    w = 8
    while w <= n // 2:
        chunks = arr[: (n // w) * w].reshape(-1, w)
        means = chunks.mean(axis=1, keepdims=True)
        z = np.cumsum(chunks - means, axis=1)
        ranges = z.max(axis=1) - z.min(axis=1)
        stds = chunks.std(axis=1)
        valid = stds > 0.0
        if np.any(valid):
            log_sizes.append(np.log(w))
            log_rs.append(np.log(np.mean(ranges[valid] / stds[valid])))
        w *= 2
    if len(log_sizes) < 2:
        return 0.5
    slope = np.polyfit(log_sizes, log_rs, 1)[0]
    return float(min(max(slope, 0.0), 1.0))


def fluctuation_index(x) -> float:
    """Mean absolute first difference."""
    arr = _as_floats(x, 2, "fluctuation_index")
    return float(np.mean(np.abs(np.diff(arr))))


@dataclass(frozen=True)
class FeatureVector:
    names: tuple
    values: np.ndarray
    label: int | None = None

    def __post_init__(self):
        values = np.asarray(self.values, dtype=np.float64)
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "names", tuple(self.names))
        if len(self.names) != values.size:
            raise DataError("feature names and values must have the same length")
        if len(set(self.names)) != len(self.names):
            raise DataError("feature names must be unique")
        if not np.all(np.isfinite(values)):
            raise DataError("feature values must be finite")


@dataclass(frozen=True)
class FeatureMatrix:
    """Channels as rows, features as named columns, one label per row."""

    names: tuple
    values: np.ndarray
    labels: np.ndarray = field(repr=False)

    def __post_init__(self):
        object.__setattr__(self, "names", tuple(self.names))
        values = np.asarray(self.values, dtype=np.float64)
        labels = np.asarray(self.labels, dtype=np.int64)
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "labels", labels)
        if values.ndim != 2 or values.shape[1] != len(self.names):
            raise DataError(
                f"values of shape {values.shape} do not match {len(self.names)} feature names"
            )
        if labels.shape != (values.shape[0],):
            raise DataError("one label per row is required")
        if len(set(self.names)) != len(self.names):
            raise DataError("feature names must be unique")
        if not np.all(np.isfinite(values)):
            raise DataError("feature values must be finite")

    @classmethod
    def from_vectors(cls, vectors) -> "FeatureMatrix":
        vectors = list(vectors)
        if not vectors:
            raise DataError("a feature matrix needs at least one row")
        names = vectors[0].names
        for v in vectors:
            if v.names != names:
                raise DataError("all rows must share the same feature names")
            if v.label is None:
                raise DataError("matrix rows must be labelled")
        values = np.stack([v.values for v in vectors])
        labels = np.array([v.label for v in vectors], dtype=np.int64)
        return cls(names=names, values=values, labels=labels)

    @property
    def n_rows(self) -> int:
        return self.values.shape[0]

    @property
    def n_features(self) -> int:
        return self.values.shape[1]

    def column(self, name: str) -> np.ndarray:
        return self.values[:, self.names.index(name)]

    def select(self, names) -> "FeatureMatrix":
        idx = [self.names.index(n) for n in names]
        return FeatureMatrix(names=tuple(names), values=self.values[:, idx], labels=self.labels)

    def to_csv(self, path) -> None:
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(list(self.names) + ["label"])
            for row, label in zip(self.values, self.labels):
                writer.writerow([format(v, ".12g") for v in row] + [int(label)])

    @classmethod
    def from_csv(cls, path) -> "FeatureMatrix":
        with open(path, newline="") as fh:
            reader = csv.reader(fh)
            try:
                header = next(reader)
            except StopIteration:
                raise DataError(f"{path}: empty feature file") from None
            if not header or header[-1] != "label":
                raise DataError(f"{path}: last column must be 'label'")
            names = tuple(header[:-1])
            values = []
            labels = []
            for lineno, row in enumerate(reader, start=2):
                if not row:
                    continue
                if len(row) != len(header):
                    raise DataError(f"{path}:{lineno}: expected {len(header)} columns, got {len(row)}")
                try:
                    values.append([float(v) for v in row[:-1]])
                    labels.append(int(row[-1]))
                except ValueError as exc:
                    raise DataError(f"{path}:{lineno}: {exc}") from None
        if not values:
            raise DataError(f"{path}: no data rows")
        return cls(names=names, values=np.array(values), labels=np.array(labels))


def stratum_features(x) -> dict:
    """All 15 features of one stratum keyed by feature name."""
    out = basic_stats(x)
    out.update(quartiles(x))
    out["shannon_entropy"] = shannon_entropy(x)
    out["hurst"] = hurst_exponent(x)
    out["fluctuation_index"] = fluctuation_index(x)
    out["sample_entropy"] = sample_entropy(x)
    return out


def extract_vector(channel: Channel, plan: StratificationPlan,
                   label: int | None = None) -> FeatureVector:
    """Feature vector of one channel under a stratification plan: 15
    features per stratum, named s{i}_{feature} with strata numbered from 1."""
    if len(channel) != plan.length:
        raise DataError(
            f"channel {channel.id!r} has length {len(channel)}, plan covers {plan.length}"
        )
    for start, end in plan.boundaries:
        if end - start < MIN_STRATUM_LENGTH:
            raise ConfigError(
                f"stratum [{start}, {end}) is shorter than {MIN_STRATUM_LENGTH} samples; "
                "lower n_strata or raise the confidence level"
            )
    names = []
    values = []
    for i, (start, end) in enumerate(plan.boundaries, start=1):
        feats = stratum_features(channel.samples[start:end])
        for feature in FEATURE_ORDER:
            names.append(f"s{i}_{feature}")
            values.append(feats[feature])
    return FeatureVector(names=tuple(names), values=np.array(values), label=label)

"""Dataset ingestion, rating-to-bucket mapping, standardization, and splits.

The flow for a raw agency-ratings CSV is:

    load_csv(path)            -> Dataset whose classes are the raw rating strings
    map_ratings(...)          -> bucket labels (Low/Medium/High/Highest by default)
    relabel(dataset, map)     -> Dataset in risk-bucket space
    fit/apply_standardizer    -> zero-mean unit-variance features (Sector exempt)
    train_test_split / stratified_k_fold -> deterministic stratified partitions

`Dataset` is immutable: its arrays are copied on construction and marked
read-only, so it is safe to share across threads and between pipeline stages.
"""

from __future__ import annotations

import csv
import os
import warnings
from dataclasses import dataclass, field

import numpy as np

from ._seeds import derive_seed


class DataError(Exception):
    """Raised for malformed input files, uncovered ratings, or bad partitions."""


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a, copy=True)
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class Dataset:
    """Feature matrix with named columns plus integer class labels.

    Invariants enforced on construction: features are finite (no missing
    values survive ingestion), feature names are unique, every label lies in
    [0, k), and every class index is occupied by at least one row.
    """

    features: np.ndarray
    feature_names: tuple[str, ...]
    labels: np.ndarray
    class_names: tuple[str, ...]

    def __post_init__(self):
        X = np.asarray(self.features, dtype=np.float64)
        y = np.asarray(self.labels, dtype=np.int64)
        names = tuple(str(s) for s in self.feature_names)
        classes = tuple(str(s) for s in self.class_names)
        if X.ndim != 2:
            raise ValueError(f"features must be 2-D, got shape {X.shape}")
        if len(names) != X.shape[1]:
            raise ValueError(f"{len(names)} feature names for {X.shape[1]} columns")
        if len(set(names)) != len(names):
            raise ValueError("feature names must be unique")
        if y.shape != (X.shape[0],):
            raise ValueError(f"labels shape {y.shape} does not match {X.shape[0]} rows")
        if not np.isfinite(X).all():
            raise ValueError("features contain non-finite values")
        k = len(classes)
        if X.shape[0] > 0:
            if y.min() < 0 or y.max() >= k:
                raise ValueError(f"labels must lie in [0, {k})")
            if np.bincount(y, minlength=k).min() == 0:
                missing = [classes[i] for i in np.flatnonzero(np.bincount(y, minlength=k) == 0)]
                raise ValueError(f"classes never observed: {missing}")
        object.__setattr__(self, "features", _frozen(X))
        object.__setattr__(self, "labels", _frozen(y))
        object.__setattr__(self, "feature_names", names)
        object.__setattr__(self, "class_names", classes)

    @property
    def n(self) -> int:
        return self.features.shape[0]

    @property
    def p(self) -> int:
        return self.features.shape[1]

    @property
    def k(self) -> int:
        return len(self.class_names)

    def take_rows(self, idx: np.ndarray) -> "Dataset":
        """Row subset keeping names; every class must remain represented."""
        return Dataset(self.features[idx], self.feature_names,
                       self.labels[idx], self.class_names)


@dataclass(frozen=True)
class RatingMap:
    """Ordered rating-string -> bucket-index mapping with named buckets."""

    pairs: tuple[tuple[str, int], ...]
    bucket_names: tuple[str, ...]

    def __post_init__(self):
        buckets = tuple(str(b) for b in self.bucket_names)
        pairs = tuple((str(r), int(i)) for r, i in self.pairs)
        if len(set(buckets)) != len(buckets) or not buckets:
            raise ValueError("bucket names must be unique and non-empty")
        seen = set()
        for rating, idx in pairs:
            if not 0 <= idx < len(buckets):
                raise ValueError(f"bucket index {idx} for rating {rating!r} out of range")
            if rating in seen:
                raise ValueError(f"rating {rating!r} mapped twice")
            seen.add(rating)
        object.__setattr__(self, "pairs", pairs)
        object.__setattr__(self, "bucket_names", buckets)

    def lookup(self) -> dict[str, int]:
        return dict(self.pairs)

    @classmethod
    def from_names(cls, rating_to_bucket: dict[str, str], bucket_names) -> "RatingMap":
        order = {b: i for i, b in enumerate(bucket_names)}
        return cls(tuple((r, order[b]) for r, b in rating_to_bucket.items()),
                   tuple(bucket_names))

    @classmethod
    def identity(cls, class_names) -> "RatingMap":
        """Each class name maps to its own index (used for CSV round-trips)."""
        return cls(tuple((c, i) for i, c in enumerate(class_names)), tuple(class_names))

    @classmethod
    def default(cls) -> "RatingMap":
        """Shipped four-bucket default: investment-grade tiers split into
        Low/Medium, speculative tiers into High/Highest."""
        spec = {
            "AAA": "Low", "AA+": "Low", "AA": "Low", "AA-": "Low",
            "A+": "Medium", "A": "Medium", "A-": "Medium",
            "BBB+": "Medium", "BBB": "Medium", "BBB-": "Medium",
            "BB+": "High", "BB": "High", "BB-": "High",
            "B+": "High", "B": "High", "B-": "High",
            "CCC+": "Highest", "CCC": "Highest", "CCC-": "Highest",
            "CC": "Highest", "C": "Highest", "D": "Highest",
        }
        return cls.from_names(spec, ("Low", "Medium", "High", "Highest"))


def parse_rating_map(path) -> RatingMap:
    """Parse the key-value rating map format.

    First directive line declares buckets in index order, remaining lines map
    one rating each::

        buckets = Low, Medium, High, Highest
        AAA = Low
        BB = High
    """
    try:
        with open(path, encoding="utf-8") as fh:
            lines = fh.read().splitlines()
    except OSError as exc:
        raise DataError(f"cannot read rating map {path}: {exc}") from exc
    buckets: tuple[str, ...] | None = None
    pairs: list[tuple[str, int]] = []
    for lineno, raw in enumerate(lines, start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise DataError(f"{path}:{lineno}: expected KEY=VALUE, got {raw!r}")
        key, value = (s.strip() for s in line.split("=", 1))
        if buckets is None:
            if key.lower() != "buckets":
                raise DataError(f"{path}:{lineno}: first entry must declare buckets")
            buckets = tuple(s.strip() for s in value.split(",") if s.strip())
            continue
        if key.lower() == "buckets":
            raise DataError(f"{path}:{lineno}: duplicate buckets declaration")
        if value not in buckets:
            raise DataError(f"{path}:{lineno}: unknown bucket {value!r} for rating {key!r}")
        pairs.append((key, buckets.index(value)))
    if buckets is None:
        raise DataError(f"{path}: empty rating map")
    return RatingMap(tuple(pairs), buckets)


def write_rating_map(rating_map: RatingMap, path) -> None:
    lines = ["buckets = " + ", ".join(rating_map.bucket_names)]
    lines += [f"{r} = {rating_map.bucket_names[i]}" for r, i in rating_map.pairs]
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(lines) + "\n")


def map_ratings(raw_ratings, rating_map: RatingMap):
    """Map rating strings to bucket labels.

    Returns (labels, class_names) where class_names is the full declared
    bucket list in index order. Raises DataError naming any uncovered rating.
    """
    table = rating_map.lookup()
    labels = np.empty(len(raw_ratings), dtype=np.int64)
    for i, rating in enumerate(raw_ratings):
        try:
            labels[i] = table[rating]
        except KeyError:
            raise DataError(f"rating {rating!r} not covered by the rating map") from None
    if len(labels) and np.unique(labels).size == 1:
        warnings.warn("all ratings map to a single bucket; downstream training "
                      "will reject single-class data", RuntimeWarning, stacklevel=2)
    return labels, rating_map.bucket_names


def relabel(data: Dataset, rating_map: RatingMap) -> Dataset:
    """Re-express a rating-labeled Dataset in bucket space.

    Buckets that never occur are dropped (with a warning) so the Dataset
    every-class-occupied invariant holds; remaining buckets keep their order.
    """
    raw = [data.class_names[i] for i in data.labels]
    labels, buckets = map_ratings(raw, rating_map)
    counts = np.bincount(labels, minlength=len(buckets))
    if (counts == 0).any():
        empty = [buckets[i] for i in np.flatnonzero(counts == 0)]
        warnings.warn(f"dropping empty buckets: {empty}", RuntimeWarning, stacklevel=2)
        keep = np.flatnonzero(counts > 0)
        remap = {old: new for new, old in enumerate(keep)}
        labels = np.array([remap[v] for v in labels], dtype=np.int64)
        buckets = tuple(buckets[i] for i in keep)
    return Dataset(data.features, data.feature_names, labels, buckets)


DEFAULT_RATING_COLUMN = "Rating"
DEFAULT_CATEGORICAL_COLUMNS = ("Sector",)
# Identifier columns commonly present in agency-ratings exports.
DEFAULT_DROP_COLUMNS = ("Name", "Symbol", "Rating Agency Name", "Date", "CIK",
                        "Ticker", "Rating Date", "Binary Rating")


def load_csv(path, schema=None, rating_column: str = DEFAULT_RATING_COLUMN,
             categorical_columns=DEFAULT_CATEGORICAL_COLUMNS,
             drop_columns=DEFAULT_DROP_COLUMNS) -> Dataset:
    """Load a ratings CSV into a Dataset.

    The rating column is withheld from the feature matrix: the returned
    Dataset uses the distinct rating strings (first-appearance order) as its
    classes, ready for `relabel` with a RatingMap. Categorical feature
    columns (by default just Sector) are integer-coded in first-appearance
    order; all other feature columns must parse as numbers.

    `schema`, when given, is the expected header (order-insensitive); any
    missing or extra columns are reported. Unparsable or missing cells are
    reported with their row and column.
    """
    if not os.path.exists(path):
        raise DataError(f"file not found: {path}")
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise DataError(f"{path}: empty file") from None
        rows = list(reader)
    header = [h.strip() for h in header]
    if schema is not None:
        expected, got = set(schema), set(header)
        if expected != got:
            missing = sorted(expected - got)
            extra = sorted(got - expected)
            raise DataError(f"{path}: header mismatch; missing columns {missing}, "
                            f"unexpected columns {extra}")
    if rating_column not in header:
        raise DataError(f"{path}: rating column {rating_column!r} not in header")
    if len(set(header)) != len(header):
        raise DataError(f"{path}: duplicate column names in header")

    dropped = set(drop_columns) | {rating_column}
    feature_names = [h for h in header if h not in dropped]
    if not feature_names:
        raise DataError(f"{path}: no feature columns left after dropping {sorted(dropped)}")
    col_of = {h: i for i, h in enumerate(header)}
    categorical = set(categorical_columns) & set(feature_names)

    n, p = len(rows), len(feature_names)
    X = np.empty((n, p), dtype=np.float64)
    codes: dict[str, dict[str, int]] = {c: {} for c in categorical}
    ratings: list[str] = []
    for r, row in enumerate(rows):
        if len(row) != len(header):
            raise DataError(f"{path}: row {r + 2} has {len(row)} cells, expected {len(header)}")
        ratings.append(row[col_of[rating_column]].strip())
        for j, name in enumerate(feature_names):
            cell = row[col_of[name]].strip()
            if cell == "":
                raise DataError(f"{path}: missing value at row {r + 2}, column {name!r}")
            if name in categorical:
                table = codes[name]
                X[r, j] = table.setdefault(cell, len(table))
            else:
                try:
                    X[r, j] = float(cell)
                except ValueError:
                    raise DataError(f"{path}: unparsable numeric cell {cell!r} at "
                                    f"row {r + 2}, column {name!r}") from None
        if ratings[-1] == "":
            raise DataError(f"{path}: missing rating at row {r + 2}")

    rating_codes: dict[str, int] = {}
    labels = np.array([rating_codes.setdefault(s, len(rating_codes)) for s in ratings],
                      dtype=np.int64)
    class_names = tuple(rating_codes)
    return Dataset(X, tuple(feature_names), labels, class_names)


def save_csv(data: Dataset, path, rating_column: str = DEFAULT_RATING_COLUMN) -> None:
    """Write a Dataset back to CSV; floats use round-trip repr so a reload is
    bit-identical."""
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(list(data.feature_names) + [rating_column])
        for i in range(data.n):
            writer.writerow([repr(float(v)) for v in data.features[i]]
                            + [data.class_names[data.labels[i]]])


def load_dataset(path, rating_map: RatingMap | None = None, schema=None,
                 rating_column: str = DEFAULT_RATING_COLUMN,
                 categorical_columns=DEFAULT_CATEGORICAL_COLUMNS,
                 drop_columns=DEFAULT_DROP_COLUMNS) -> Dataset:
    """load_csv + relabel in one step (default four-bucket map when none given)."""
    raw = load_csv(path, schema=schema, rating_column=rating_column,
                   categorical_columns=categorical_columns, drop_columns=drop_columns)
    return relabel(raw, rating_map or RatingMap.default())


@dataclass(frozen=True)
class StandardizationStats:
    """Per-feature location/scale fitted on training rows only.

    Population convention (denominator n); constant columns record std 1 so
    applying the stats never divides by zero. Exempt columns (integer-coded
    Sector) pass through untouched.
    """

    mean: np.ndarray
    std: np.ndarray
    exempt_columns: frozenset[int] = field(default_factory=frozenset)

    def __post_init__(self):
        object.__setattr__(self, "mean", _frozen(np.asarray(self.mean, dtype=np.float64)))
        object.__setattr__(self, "std", _frozen(np.asarray(self.std, dtype=np.float64)))
        object.__setattr__(self, "exempt_columns", frozenset(int(i) for i in self.exempt_columns))
        if self.mean.shape != self.std.shape or self.mean.ndim != 1:
            raise ValueError("mean/std must be matching 1-D vectors")
        if (self.std <= 0).any():
            raise ValueError("std entries must be positive")


def sector_exempt_columns(data: Dataset,
                          categorical_columns=DEFAULT_CATEGORICAL_COLUMNS) -> frozenset[int]:
    """Indices of integer-coded categorical columns present in this dataset."""
    return frozenset(i for i, name in enumerate(data.feature_names)
                     if name in set(categorical_columns))


def fit_standardizer(train: Dataset, exempt=frozenset()) -> StandardizationStats:
    """Fit per-feature mean/std (population, denominator n) on training rows."""
    if train.n == 0:
        raise ValueError("cannot fit standardizer on empty data")
    mean = train.features.mean(axis=0)
    std = train.features.std(axis=0)
    std = np.where(std == 0.0, 1.0, std)
    return StandardizationStats(mean, std, frozenset(exempt))


def apply_standardizer(data: Dataset, stats: StandardizationStats) -> Dataset:
    """(x - mean) / std on non-exempt columns; exempt columns unchanged."""
    if stats.mean.shape[0] != data.p:
        raise ValueError(f"stats fitted on {stats.mean.shape[0]} columns, data has {data.p}")
    X = (data.features - stats.mean) / stats.std
    for j in stats.exempt_columns:
        X[:, j] = data.features[:, j]
    return Dataset(X, data.feature_names, data.labels, data.class_names)


@dataclass(frozen=True)
class ClipStats:
    """Per-feature clipping bounds from training-row quantiles.

    Off by default in every pipeline; when enabled it tames the heavy outlier
    tails of raw financial ratios without dropping rows. Exempt (categorical)
    columns pass through.
    """

    lower: np.ndarray
    upper: np.ndarray
    exempt_columns: frozenset[int] = field(default_factory=frozenset)

    def __post_init__(self):
        object.__setattr__(self, "lower", _frozen(np.asarray(self.lower, dtype=np.float64)))
        object.__setattr__(self, "upper", _frozen(np.asarray(self.upper, dtype=np.float64)))
        object.__setattr__(self, "exempt_columns", frozenset(int(i) for i in self.exempt_columns))
        if self.lower.shape != self.upper.shape or self.lower.ndim != 1:
            raise ValueError("lower/upper must be matching 1-D vectors")
        if (self.lower > self.upper).any():
            raise ValueError("lower bound above upper bound")


def fit_clipper(train: Dataset, quantile: float, exempt=frozenset()) -> ClipStats:
    """Bounds at the (quantile, 1 - quantile) training quantiles per column."""
    if not 0.0 < quantile < 0.5:
        raise ValueError("quantile must be in (0, 0.5)")
    lower = np.quantile(train.features, quantile, axis=0)
    upper = np.quantile(train.features, 1.0 - quantile, axis=0)
    return ClipStats(lower, upper, frozenset(exempt))


def apply_clipper(data: Dataset, stats: ClipStats) -> Dataset:
    if stats.lower.shape[0] != data.p:
        raise ValueError(f"clipper fitted on {stats.lower.shape[0]} columns, data has {data.p}")
    X = np.clip(data.features, stats.lower, stats.upper)
    for j in stats.exempt_columns:
        X[:, j] = data.features[:, j]
    return Dataset(X, data.feature_names, data.labels, data.class_names)


@dataclass(frozen=True)
class FoldAssignment:
    """Stratified fold indices: assignment[i] in [0, k_folds) for every row."""

    k_folds: int
    assignment: np.ndarray

    def __post_init__(self):
        a = np.asarray(self.assignment, dtype=np.int64)
        if self.k_folds < 2:
            raise ValueError("k_folds must be >= 2")
        if a.size and (a.min() < 0 or a.max() >= self.k_folds):
            raise ValueError("fold indices out of range")
        object.__setattr__(self, "assignment", _frozen(a))

    def train_rows(self, fold: int) -> np.ndarray:
        return np.flatnonzero(self.assignment != fold)

    def test_rows(self, fold: int) -> np.ndarray:
        return np.flatnonzero(self.assignment == fold)


def _per_class_rows(data: Dataset):
    return [np.flatnonzero(data.labels == c) for c in range(data.k)]


def train_test_split(data: Dataset, train_fraction: float, seed: int):
    """Deterministic stratified split.

    Per class, floor(train_fraction * count) rows seed the training side;
    remaining train slots up to round(train_fraction * n) go to the classes
    with the largest fractional remainders (ties toward the lower class
    index). Every class keeps at least one row on each side.
    """
    if not 0.0 < train_fraction < 1.0:
        raise ValueError("train_fraction must be in (0, 1)")
    by_class = _per_class_rows(data)
    for c, rows in enumerate(by_class):
        if rows.size < 2:
            raise DataError(f"class {data.class_names[c]!r} has fewer than 2 samples; "
                            "it cannot appear in both partitions")
    counts = np.array([rows.size for rows in by_class], dtype=np.int64)
    targets = train_fraction * counts
    sizes = np.floor(targets).astype(np.int64)
    sizes = np.clip(sizes, 1, counts - 1)
    total = int(round(train_fraction * data.n))
    total = min(max(total, data.k), int((counts - 1).sum()))
    remainders = targets - np.floor(targets)
    order_add = sorted(range(data.k), key=lambda c: (-remainders[c], c))
    order_remove = sorted(range(data.k), key=lambda c: (remainders[c], -c))
    while sizes.sum() < total:
        for c in order_add:
            if sizes.sum() >= total:
                break
            if sizes[c] < counts[c] - 1:
                sizes[c] += 1
    while sizes.sum() > total:
        for c in order_remove:
            if sizes.sum() <= total:
                break
            if sizes[c] > 1:
                sizes[c] -= 1
    rng = np.random.default_rng(derive_seed(seed, "train_test_split"))
    train_idx, test_idx = [], []
    for c, rows in enumerate(by_class):
        shuffled = rows[rng.permutation(rows.size)]
        train_idx.append(shuffled[:sizes[c]])
        test_idx.append(shuffled[sizes[c]:])
    train_idx = np.sort(np.concatenate(train_idx))
    test_idx = np.sort(np.concatenate(test_idx))
    return data.take_rows(train_idx), data.take_rows(test_idx)


def stratified_k_fold(data: Dataset, k_folds: int, seed: int) -> FoldAssignment:
    """Deterministic stratified fold assignment.

    Within each class the shuffled members are dealt into folds in balanced
    chunks; the fold receiving each class's remainder rotates so overall fold
    sizes differ by at most one.
    """
    if k_folds < 2:
        raise ValueError("k_folds must be >= 2")
    by_class = _per_class_rows(data)
    for c, rows in enumerate(by_class):
        if rows.size < k_folds:
            raise DataError(f"class {data.class_names[c]!r} has {rows.size} samples, "
                            f"fewer than k_folds={k_folds}")
    rng = np.random.default_rng(derive_seed(seed, "stratified_k_fold"))
    assignment = np.empty(data.n, dtype=np.int64)
    offset = 0
    for rows in by_class:
        shuffled = rows[rng.permutation(rows.size)]
        base, extra = divmod(rows.size, k_folds)
        start = 0
        for f in range(k_folds):
            size = base + (1 if (f - offset) % k_folds < extra else 0)
            assignment[shuffled[start:start + size]] = f
            start += size
        offset = (offset + extra) % k_folds
    return FoldAssignment(k_folds, assignment)

"""Feature assembly: z-score normalized numeric vectors for map training.

Raw attribute scales (degrees, meters, grades, scores) differ by orders of
magnitude, so every attribute is standardized with the population mean/std.
Constant attributes get std 1 and are flagged, which zeroes their column and
removes them from distance computations.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ContractError
from .records import TouristRecord

FEATURE_SCHEMA = ["lat", "lon", "alt", "evaluation", "tfidf_max", "tfidf_sum"]


@dataclass(frozen=True)
class FeatureVector:
    values: tuple[float, ...]
    schema: tuple[str, ...]

    def __post_init__(self):
        if len(self.values) != len(self.schema):
            raise ContractError(
                f"feature vector has {len(self.values)} values for {len(self.schema)} attributes"
            )
        if not all(np.isfinite(self.values)):
            raise ContractError("feature values must be finite")


@dataclass(frozen=True)
class Normalization:
    """Per-attribute population (mean, std); constant attributes flagged."""

    mean: tuple[float, ...]
    std: tuple[float, ...]
    constant: tuple[bool, ...]


class Dataset:
    """Index-aligned records and normalized feature vectors.

    ``matrix`` is the float64 feature matrix consumed by map training; a row
    per record, z-scored per attribute. Immutable after construction.
    """

    def __init__(self, records, raw, schema):
        raw = np.asarray(raw, dtype=np.float64)
        if records is not None and len(records) != raw.shape[0]:
            raise ContractError(
                f"{len(records)} records but {raw.shape[0]} feature rows"
            )
        if raw.ndim != 2:
            raise ContractError("feature matrix must be 2-dimensional")
        if not np.isfinite(raw).all():
            raise ContractError("raw features must be finite")
        if raw.shape[0] == 0:  # empty datasets exist only to be rejected downstream
            mean = np.zeros(raw.shape[1])
            std = np.zeros(raw.shape[1])
        else:
            mean = raw.mean(axis=0)
            std = raw.std(axis=0)  # population std, deterministic on tiny datasets
        constant = std == 0.0
        safe_std = np.where(constant, 1.0, std)
        self.records: list[TouristRecord] | None = records
        self.schema: tuple[str, ...] = tuple(schema)
        self.raw = raw
        self.raw.setflags(write=False)
        self.matrix = (raw - mean) / safe_std
        self.matrix.setflags(write=False)
        self.normalization = Normalization(
            mean=tuple(mean.tolist()),
            std=tuple(safe_std.tolist()),
            constant=tuple(bool(c) for c in constant),
        )

    def __len__(self) -> int:
        return self.matrix.shape[0]

    @property
    def dim(self) -> int:
        return self.matrix.shape[1]

    def feature_vector(self, index: int) -> FeatureVector:
        return FeatureVector(values=tuple(self.matrix[index].tolist()), schema=self.schema)

    def denormalize(self, row: np.ndarray) -> np.ndarray:
        """Inverse of the z-score mapping (constant attributes come back as their mean)."""
        mean = np.asarray(self.normalization.mean)
        std = np.asarray(self.normalization.std)
        return row * std + mean

    @classmethod
    def from_matrix(cls, values, schema) -> "Dataset":
        """Build a record-free dataset from an (n, d) array (demo/benchmark data)."""
        return cls(records=None, raw=values, schema=schema)


def build_features(
    records: list[TouristRecord],
    tfidf_per_record: list[tuple[float, float]],
    attributes: list[str] | None = None,
) -> Dataset:
    """Assemble the [lat, lon, alt, evaluation, tfidf_max, tfidf_sum] dataset.

    ``tfidf_per_record`` carries one (max, sum) pair per record, index-aligned.
    ``attributes`` optionally masks the schema down to a subset (same order).
    """
    if len(records) != len(tfidf_per_record):
        raise ContractError(
            f"{len(records)} records but {len(tfidf_per_record)} tfidf pairs"
        )
    if not records:
        raise ContractError("cannot build features for an empty record list")
    schema = list(FEATURE_SCHEMA)
    if attributes is not None:
        unknown = [a for a in attributes if a not in FEATURE_SCHEMA]
        if unknown:
            raise ContractError(f"unknown attributes {unknown}; valid: {FEATURE_SCHEMA}")
        schema = [a for a in FEATURE_SCHEMA if a in attributes]
    rows = []
    for r, (tmax, tsum) in zip(records, tfidf_per_record):
        full = {
            "lat": r.lat,
            "lon": r.lon,
            "alt": r.alt,
            "evaluation": float(r.evaluation),
            "tfidf_max": tmax,
            "tfidf_sum": tsum,
        }
        rows.append([full[a] for a in schema])
    return Dataset(records=records, raw=rows, schema=schema)

"""PCA projection of unit weights to RGB, plus hue-angle computation.

The basis is fitted on the dataset features, not the unit weights, so a
refine does not reshuffle the palette. Each weight's three projections are
min-max scaled over the rendering pass to 0..255 channel values.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .dataset import Dataset

_EIGENVALUE_TOL = 1e-9


@dataclass(frozen=True)
class RgbColor:
    r: int
    g: int
    b: int

    def __post_init__(self):
        for channel in (self.r, self.g, self.b):
            if not 0 <= channel <= 255:
                raise ValueError(f"channel {channel} outside [0, 255]")

    def to_hex(self) -> str:
        return f"#{self.r:02x}{self.g:02x}{self.b:02x}"


@dataclass(frozen=True)
class PcaBasis:
    mean: np.ndarray        # (d,)
    components: np.ndarray  # (3, d) rows, descending eigenvalue order
    eigenvalues: np.ndarray  # (3,)
    degenerate: bool


def fit_pca(data: Dataset) -> PcaBasis:
    """Top-3 eigenvectors of the population covariance of the feature matrix.

    Rank below 3 (few samples, constant attributes, or dim < 3) degrades
    gracefully: missing directions are padded with orthonormal completions
    (zero vectors once the ambient dimension is exhausted) and flagged.
    """
    x = data.matrix
    n, d = x.shape
    centered = x - x.mean(axis=0)
    cov = centered.T @ centered / n
    eigenvalues, eigenvectors = np.linalg.eigh(cov)
    order = np.argsort(eigenvalues)[::-1]
    eigenvalues = np.clip(eigenvalues[order], 0.0, None)
    eigenvectors = eigenvectors[:, order].T  # rows now, descending

    components = []
    values = []
    scale = max(1.0, float(eigenvalues[0]) if len(eigenvalues) else 1.0)
    for i in range(min(3, d)):
        if eigenvalues[i] > _EIGENVALUE_TOL * scale:
            components.append(_sign_fixed(eigenvectors[i]))
            values.append(float(eigenvalues[i]))
    degenerate = len(components) < 3
    _pad_orthonormal(components, d)
    values.extend([0.0] * (3 - len(values)))
    return PcaBasis(
        mean=x.mean(axis=0),
        components=np.array(components),
        eigenvalues=np.array(values),
        degenerate=degenerate,
    )


def _sign_fixed(v: np.ndarray) -> np.ndarray:
    """Deterministic eigenvector orientation: largest-magnitude entry positive."""
    pivot = int(np.argmax(np.abs(v)))
    return -v if v[pivot] < 0 else v


def _pad_orthonormal(components: list[np.ndarray], d: int) -> None:
    """Extend to 3 rows: Gram-Schmidt over identity candidates, zeros past rank d."""
    for e in np.eye(d):
        if len(components) >= 3:
            break
        v = e.copy()
        for c in components:
            v -= (v @ c) * c
        norm = np.linalg.norm(v)
        if norm > 1e-9:
            components.append(v / norm)
    while len(components) < 3:
        components.append(np.zeros(d))


def project(weight: np.ndarray, basis: PcaBasis) -> np.ndarray:
    """The weight's coordinates along the three basis components."""
    return basis.components @ (np.asarray(weight, dtype=np.float64) - basis.mean)


def channel_ranges(projections: list[np.ndarray]) -> list[tuple[float, float]]:
    """Per-component (min, max) over all unit projections of a rendering pass."""
    stacked = np.array(projections)
    return [(float(stacked[:, i].min()), float(stacked[:, i].max())) for i in range(3)]


def unit_color(
    weight: np.ndarray, basis: PcaBasis, ranges: list[tuple[float, float]]
) -> RgbColor:
    """Min-max scale the weight's projections to 0..255, rounding half-up."""
    p = project(weight, basis)
    channels = []
    for value, (lo, hi) in zip(p, ranges):
        if hi == lo:
            channels.append(128)
            continue
        scaled = (value - lo) / (hi - lo) * 255.0
        channels.append(int(math.floor(scaled + 0.5)))
    return RgbColor(*channels)


def hue(color: RgbColor) -> float:
    """Hue angle in degrees [0, 360); achromatic input maps to 0 by convention."""
    r, g, b = color.r, color.g, color.b
    if r == g == b:
        return 0.0
    angle = math.degrees(math.atan2(math.sqrt(3.0) * (g - b), 2 * r - g - b))
    return angle % 360.0

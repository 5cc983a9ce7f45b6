"""Single rectangular SOM: training, BMU search, quantization errors, growth.

Conventions used throughout the hierarchy code:

* a unit's quantization error ``qe`` is the SUM of Euclidean distances from
  its weight to its mapped samples (0 when nothing is mapped);
* ``MQE`` is the mean of qe over the winner set (units with mapped samples);
* BMU ties break toward the lowest (row, col) in row-major order.

Training is online (per-sample) with a Gaussian neighborhood; learning rate
and radius decay linearly per epoch to (0.01, 0.5).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ContractError

FINAL_LEARNING_RATE = 0.01
FINAL_RADIUS = 0.5


@dataclass(frozen=True)
class TrainConfig:
    epochs: int = 100
    initial_learning_rate: float = 0.5
    initial_radius: float | None = None  # None: half the larger grid dimension
    rng_seed: int = 0

    def __post_init__(self):
        if self.epochs <= 0:
            raise ContractError(f"epochs must be positive, got {self.epochs}")
        if not 0.0 < self.initial_learning_rate <= 1.0:
            raise ContractError(
                f"initial_learning_rate must be in (0, 1], got {self.initial_learning_rate}"
            )
        if self.initial_radius is not None and self.initial_radius < FINAL_RADIUS:
            raise ContractError(f"initial_radius must be >= {FINAL_RADIUS}")


@dataclass
class Unit:
    """Read view of one map unit."""

    row: int
    col: int
    weight: np.ndarray
    mapped: list[int]
    qe: float

    @property
    def n(self) -> int:
        return len(self.mapped)


class SomMapGrid:
    """A rows x cols grid of weight vectors with sample assignments.

    Exclusively owned during train/insert; queries are safe between
    mutations. ``mapped[r][c]`` holds dataset-level sample indices.
    """

    def __init__(self, weights: np.ndarray):
        if weights.ndim != 3:
            raise ContractError("weights must have shape (rows, cols, dim)")
        self.weights = weights.astype(np.float64, copy=True)
        self.mapped: list[list[list[int]]] = [
            [[] for _ in range(self.cols)] for _ in range(self.rows)
        ]
        self.qe = np.zeros((self.rows, self.cols), dtype=np.float64)

    @property
    def rows(self) -> int:
        return self.weights.shape[0]

    @property
    def cols(self) -> int:
        return self.weights.shape[1]

    @property
    def dim(self) -> int:
        return self.weights.shape[2]

    @classmethod
    def initialize(
        cls, rows: int, cols: int, matrix: np.ndarray, indices: list[int], seed: int
    ) -> "SomMapGrid":
        """Seed weights with random samples drawn from the map's own training data."""
        if len(indices) == 0:
            raise ContractError("cannot initialize a map from an empty data slice")
        rng = np.random.Generator(np.random.PCG64(seed))
        picks = rng.integers(0, len(indices), size=rows * cols)
        chosen = matrix[np.asarray(indices)[picks]]
        return cls(chosen.reshape(rows, cols, matrix.shape[1]))

    def unit(self, row: int, col: int) -> Unit:
        return Unit(
            row=row,
            col=col,
            weight=self.weights[row, col],
            mapped=self.mapped[row][col],
            qe=float(self.qe[row, col]),
        )

    def units(self) -> list[Unit]:
        return [self.unit(r, c) for r in range(self.rows) for c in range(self.cols)]

    def winner_set(self) -> list[Unit]:
        return [u for u in self.units() if u.mapped]

    def total_mapped(self) -> int:
        return sum(len(self.mapped[r][c]) for r in range(self.rows) for c in range(self.cols))

    def mqe(self) -> float:
        winners = self.winner_set()
        if not winners:
            raise ContractError("MQE undefined: no samples assigned")
        return float(sum(u.qe for u in winners) / len(winners))


def bmu(grid: SomMapGrid, x: np.ndarray) -> tuple[int, int]:
    """Coordinates of the unit nearest to x (row-major tie-break)."""
    x = np.asarray(x, dtype=np.float64)
    if x.shape != (grid.dim,):
        raise ContractError(f"input has dim {x.shape}, map has dim {grid.dim}")
    diff = grid.weights - x
    d2 = np.einsum("rcd,rcd->rc", diff, diff)
    flat = int(np.argmin(d2))  # first minimum in row-major order
    return divmod(flat, grid.cols)


def assign(grid: SomMapGrid, matrix: np.ndarray, indices: list[int]) -> None:
    """Map every sample to its BMU and recompute all unit qe values."""
    grid.mapped = [[[] for _ in range(grid.cols)] for _ in range(grid.rows)]
    grid.qe = np.zeros((grid.rows, grid.cols), dtype=np.float64)
    if not indices:
        return
    flat_w = grid.weights.reshape(-1, grid.dim)
    x = matrix[np.asarray(indices)]
    d2 = ((x[:, None, :] - flat_w[None, :, :]) ** 2).sum(axis=2)
    winners = np.argmin(d2, axis=1)
    dists = np.sqrt(d2[np.arange(len(indices)), winners])
    for i, sample_idx in enumerate(indices):
        r, c = divmod(int(winners[i]), grid.cols)
        grid.mapped[r][c].append(sample_idx)
        grid.qe[r, c] += dists[i]


def train(
    grid: SomMapGrid, matrix: np.ndarray, indices: list[int], cfg: TrainConfig
) -> SomMapGrid:
    """Run cfg.epochs of online updates, then assign samples and score qe."""
    if not indices:
        raise ContractError("cannot train on an empty data slice")
    if matrix.shape[1] != grid.dim:
        raise ContractError(f"data dim {matrix.shape[1]} != map dim {grid.dim}")
    rng = np.random.Generator(np.random.PCG64(cfg.rng_seed))
    radius0 = (
        cfg.initial_radius
        if cfg.initial_radius is not None
        else max(max(grid.rows, grid.cols) / 2.0, FINAL_RADIUS)
    )
    rows_idx, cols_idx = np.indices((grid.rows, grid.cols))
    idx = np.asarray(indices)
    denom = max(cfg.epochs - 1, 1)
    for epoch in range(cfg.epochs):
        f = epoch / denom
        lr = cfg.initial_learning_rate + (FINAL_LEARNING_RATE - cfg.initial_learning_rate) * f
        sigma = radius0 + (FINAL_RADIUS - radius0) * f
        order = rng.permutation(len(idx))
        for pos in order:
            x = matrix[idx[pos]]
            diff = x - grid.weights
            d2 = np.einsum("rcd,rcd->rc", diff, diff)
            br, bc = divmod(int(np.argmin(d2)), grid.cols)
            grid_d2 = (rows_idx - br) ** 2 + (cols_idx - bc) ** 2
            h = np.exp(-grid_d2 / (2.0 * sigma * sigma))
            grid.weights += (lr * h)[..., None] * diff
    assign(grid, matrix, indices)
    return grid


def insert_row_or_col(grid: SomMapGrid) -> SomMapGrid:
    """Grow the grid between the max-qe unit and its most dissimilar neighbor.

    The inserted row/column takes the elementwise mean of its two flanking
    lines. Sample assignments are invalidated; callers must retrain.
    """
    if grid.total_mapped() == 0:
        raise ContractError("insertion requires assigned samples (train first)")
    er, ec = divmod(int(np.argmax(grid.qe)), grid.cols)
    neighbors = [
        (r, c)
        for r, c in ((er - 1, ec), (er, ec - 1), (er, ec + 1), (er + 1, ec))
        if 0 <= r < grid.rows and 0 <= c < grid.cols
    ]
    w_e = grid.weights[er, ec]
    best = None
    best_dist = -1.0
    for r, c in neighbors:  # row-major scan keeps ties deterministic
        d = float(np.linalg.norm(grid.weights[r, c] - w_e))
        if d > best_dist:
            best_dist = d
            best = (r, c)
    dr, dc = best
    if dr == er:  # dissimilar neighbor in the same row: insert a column
        at = max(ec, dc)
        mean_col = (grid.weights[:, at - 1, :] + grid.weights[:, at, :]) / 2.0
        new_weights = np.insert(grid.weights, at, mean_col, axis=1)
    else:
        at = max(er, dr)
        mean_row = (grid.weights[at - 1, :, :] + grid.weights[at, :, :]) / 2.0
        new_weights = np.insert(grid.weights, at, mean_row, axis=0)
    grid.weights = new_weights
    grid.mapped = [[[] for _ in range(grid.cols)] for _ in range(grid.rows)]
    grid.qe = np.zeros((grid.rows, grid.cols), dtype=np.float64)
    return grid

"""Hierarchical map growth and bracket-path addressing.

A trained hierarchy is a tree of nodes: the root owns the top map, every
unit of every map owns a child node, and a child node may own its own map
when the unit's quantization error warranted vertical expansion. Nodes are
addressed by labels like ``[R][01][10]:12`` where each bracket block is
column digit then row digit and the optional suffix is a sample count.
"""

from __future__ import annotations

import hashlib
import re
import warnings
from dataclasses import dataclass, field

import numpy as np

from .dataset import Dataset
from .errors import ContractError, PathNotFoundError, PathSyntaxError
from .som import SomMapGrid, TrainConfig, train, insert_row_or_col

# Single-digit unit coordinates keep bracket blocks two characters wide, so
# grids never grow past 10 on a side.
MAX_SIDE = 10

PATH_RE = re.compile(r"^\[R\](\[[0-9][0-9]\])*(:[0-9]+)?$")


@dataclass(frozen=True)
class GrowthParams:
    """Growth thresholds: tau1 horizontal, tau2 vertical, alpha/beta interactive."""

    tau1: float = 0.1
    tau2: float = 0.01
    lam: int = 100  # training epochs per growth step
    alpha: float = 0.03
    beta: float = 2.0
    max_depth: int = 6
    max_insertions: int = 20  # structural cap per map, logged when hit

    def __post_init__(self):
        if not 0.0 < self.tau1 < 1.0:
            raise ContractError(f"tau1 must be in (0, 1), got {self.tau1}")
        if not 0.0 < self.tau2 < 1.0:
            raise ContractError(f"tau2 must be in (0, 1), got {self.tau2}")
        if self.tau2 > self.tau1:
            warnings.warn(
                f"tau2 {self.tau2} > tau1 {self.tau1}: hierarchy will be unusually flat",
                stacklevel=2,
            )
        if self.lam <= 0:
            raise ContractError(f"lambda (epochs) must be positive, got {self.lam}")
        if not 0.0 <= self.alpha <= 1.0:
            raise ContractError(f"alpha must be in [0, 1], got {self.alpha}")
        if self.beta <= 0:
            raise ContractError(f"beta must be positive, got {self.beta}")
        if self.max_depth <= 0:
            raise ContractError(f"max_depth must be positive, got {self.max_depth}")

    def replace(self, **overrides) -> "GrowthParams":
        fields = {
            "tau1": self.tau1, "tau2": self.tau2, "lam": self.lam,
            "alpha": self.alpha, "beta": self.beta,
            "max_depth": self.max_depth, "max_insertions": self.max_insertions,
        }
        fields.update(overrides)
        return GrowthParams(**fields)


Hop = tuple[int, int]  # (row, col)


@dataclass
class HierarchyNode:
    path: tuple[Hop, ...]
    sample_indices: list[int]
    child_map: SomMapGrid | None = None
    children: dict[Hop, "HierarchyNode"] = field(default_factory=dict)

    @property
    def depth(self) -> int:
        return len(self.path)

    def label(self, with_count: bool = False) -> str:
        return format_path(self.path, count=len(self.sample_indices) if with_count else None)

    def walk(self):
        yield self
        for hop in sorted(self.children):
            yield from self.children[hop].walk()


def format_path(path: tuple[Hop, ...], count: int | None = None) -> str:
    label = "[R]" + "".join(f"[{col}{row}]" for row, col in path)
    if count is not None:
        label += f":{count}"
    return label


def path_label(node: HierarchyNode, with_count: bool = False) -> str:
    return node.label(with_count=with_count)


def parse_path(label: str) -> tuple[Hop, ...]:
    """Parse a bracket-path label; any trailing :count is accepted and ignored."""
    if not PATH_RE.match(label):
        raise PathSyntaxError(f"malformed path label: {label!r}")
    hops = []
    for col, row in re.findall(r"\[([0-9])([0-9])\]", label):
        hops.append((int(row), int(col)))
    return tuple(hops)


def derive_seed(*parts) -> int:
    """Stable RNG seed from structured parts (never Python's randomized hash)."""
    key = ":".join(str(p) for p in parts).encode("utf-8")
    return int.from_bytes(hashlib.sha256(key).digest()[:8], "big")


class Hierarchy:
    """Root node plus the layer-0 statistics every growth decision references."""

    def __init__(self, data: Dataset, params: GrowthParams, seed: int):
        self.data = data
        self.params = params
        self.seed = seed
        self.mean0 = data.matrix.mean(axis=0)
        self.qe0 = float(np.linalg.norm(data.matrix - self.mean0, axis=1).sum())
        self.root = HierarchyNode(path=(), sample_indices=list(range(len(data))))
        self.audit: list[dict] = []

    def nodes(self):
        yield from self.root.walk()

    def node_count(self) -> int:
        return sum(1 for _ in self.nodes())

    def depth(self) -> int:
        return max(n.depth for n in self.nodes())

    def leaves(self):
        return [n for n in self.nodes() if n.child_map is None]

    def leaf_labels(self) -> dict[int, str]:
        """Map every sample index to the path label of its leaf node."""
        out: dict[int, str] = {}
        for leaf in self.leaves():
            for i in leaf.sample_indices:
                out[i] = leaf.label()
        return out

    def subtree_depth(self, node: HierarchyNode) -> int:
        return max(n.depth for n in node.walk()) - node.depth


def resolve_path(h: Hierarchy, label: str) -> HierarchyNode:
    node = h.root
    for hop in parse_path(label):
        child = node.children.get(hop)
        if child is None:
            raise PathNotFoundError(f"no node at {label!r} (missing hop {hop})")
        node = child
    return node


def grow(data: Dataset, params: GrowthParams, seed: int) -> Hierarchy:
    """Grow a full hierarchy: tau1 drives map growth, tau2 vertical expansion."""
    if len(data) == 0:
        raise ContractError("cannot grow a hierarchy over an empty dataset")
    h = Hierarchy(data, params, seed)
    _grow_subtree(h, h.root, qe_ref=h.qe0, params=params, seed=seed)
    return h


def _grow_subtree(h, node, qe_ref, params, seed) -> None:
    state = grow_trained_map(h, node, qe_ref, params, seed)
    attach_children(node, state.grid)
    for unit in state.grid.units():
        child = node.children[(unit.row, unit.col)]
        if expansion_eligible(h, unit, child_depth=child.depth, params=params):
            h.audit.append(expansion_event(h, child.label(), unit, params))
            _grow_subtree(h, child, qe_ref=unit.qe, params=params,
                          seed=derive_seed(seed, child.label()))


@dataclass
class MapGrowth:
    """A trained grid plus its insertion budget accounting."""

    grid: SomMapGrid
    insertions: int
    capped: str | None

    def can_insert(self, params: GrowthParams) -> bool:
        if self.insertions >= params.max_insertions:
            self.capped = "max_insertions"
            return False
        if self.grid.rows >= MAX_SIDE or self.grid.cols >= MAX_SIDE:
            self.capped = "max_side"
            return False
        return True


def train_cfg(params: GrowthParams, seed: int) -> TrainConfig:
    return TrainConfig(epochs=params.lam, rng_seed=seed)


def grow_trained_map(h, node, qe_ref, params, seed) -> MapGrowth:
    """2x2 start, train, then insert+retrain while MQE >= tau1 * qe_ref."""
    label = format_path(node.path)
    indices = node.sample_indices
    grid = SomMapGrid.initialize(2, 2, h.data.matrix, indices,
                                 seed=derive_seed(seed, label, "init"))
    train(grid, h.data.matrix, indices,
          train_cfg(params, derive_seed(seed, label, "train", 0)))
    state = MapGrowth(grid=grid, insertions=0, capped=None)
    while qe_ref > 0 and grid.mqe() >= params.tau1 * qe_ref and state.can_insert(params):
        insert_row_or_col(grid)
        state.insertions += 1
        train(grid, h.data.matrix, indices,
              train_cfg(params, derive_seed(seed, label, "train", state.insertions)))
    h.audit.append({
        "event": "map_grown",
        "path": label,
        "rows": grid.rows,
        "cols": grid.cols,
        "mqe": grid.mqe(),
        "threshold": params.tau1 * qe_ref,
        "insertions": state.insertions,
        "capped": state.capped,
    })
    return state


def attach_children(node: HierarchyNode, grid: SomMapGrid) -> None:
    node.child_map = grid
    node.children = {}
    for unit in grid.units():
        node.children[(unit.row, unit.col)] = HierarchyNode(
            path=node.path + ((unit.row, unit.col),),
            sample_indices=list(unit.mapped),
        )


def expansion_eligible(h: Hierarchy, unit, child_depth: int, params: GrowthParams) -> bool:
    """True when a unit's node should get a child map under normal GHSOM rules."""
    if unit.n <= 1:
        return False  # a child map over one sample is meaningless
    if unit.qe <= params.tau2 * h.qe0:
        return False
    if child_depth + 1 > params.max_depth:
        h.audit.append({
            "event": "depth_cap",
            "depth": child_depth,
            "n_k": unit.n,
            "qe_k": unit.qe,
        })
        return False
    return True


def expansion_event(h: Hierarchy, label: str, unit, params: GrowthParams) -> dict:
    return {
        "event": "expand",
        "path": label,
        "qe_k": unit.qe,
        "threshold": params.tau2 * h.qe0,
        "n_k": unit.n,
    }

"""User-triggered re-clustering with the two interactive growth criteria.

Criterion 1 (stratification stop): a winner unit holding at most an
alpha-fraction of all input samples is not divided further; the map gets an
extra in-place unit insertion round instead.

Criterion 2 (error-driven insertion): a winner unit whose quantization
error reaches beta * tau1 times the summed winner errors of its map forces
a row/column insertion.

A refine regrows the parent map of the touched node: the whole subtree
under that parent is discarded and regrown over the same samples with both
criteria active. Everything outside that parent's subtree is untouched.
"""

from __future__ import annotations

import time
from dataclasses import dataclass

from .errors import ContractError
from .hierarchy import (
    GrowthParams,
    Hierarchy,
    HierarchyNode,
    attach_children,
    derive_seed,
    expansion_eligible,
    expansion_event,
    grow_trained_map,
    resolve_path,
    train_cfg,
)
from .som import insert_row_or_col, train


def case1_stop(n_k: int, n_i: int, alpha: float) -> bool:
    """Stop stratifying below a winner unit holding n_k of the n_i samples."""
    if n_i < 1:
        raise ContractError(f"n_i must be >= 1, got {n_i}")
    if not 0 <= n_k <= n_i:
        raise ContractError(f"n_k must be in [0, n_i], got {n_k} of {n_i}")
    if not 0.0 <= alpha <= 1.0:
        raise ContractError(f"alpha must be in [0, 1], got {alpha}")
    return n_k <= alpha * n_i


def case2_insert(qe_k: float, winner_qes: list[float], beta: float, tau1: float) -> bool:
    """Insert new units when one winner's error dominates the map's total."""
    if not winner_qes:
        raise ContractError("winner set is empty")
    if qe_k not in winner_qes:
        raise ContractError(f"qe_k {qe_k} is not one of the winner errors")
    if beta <= 0 or tau1 <= 0:
        raise ContractError(f"beta and tau1 must be positive, got {beta}, {tau1}")
    return qe_k >= beta * tau1 * sum(winner_qes)


@dataclass(frozen=True)
class RefineRequest:
    target: str  # path label of the touched node
    params: GrowthParams
    seed: int


@dataclass(frozen=True)
class RefineReport:
    scope_size: int
    depth_before: int
    depth_after: int
    case1_stops: int  # every consult-and-suppress event, including re-checks
    case2_insertions: int
    duration_ms: float


class _RefineCounters:
    def __init__(self):
        self.case1 = 0
        self.case2 = 0


def refine(h: Hierarchy, req: RefineRequest) -> tuple[Hierarchy, RefineReport]:
    """Regrow the parent map of the target node with both criteria active."""
    started = time.perf_counter()
    target = resolve_path(h, req.target)
    scope = h.root
    for hop in target.path[:-1]:
        scope = scope.children[hop]
    depth_before = h.subtree_depth(scope)
    scope_size = len(scope.sample_indices)
    seed = derive_seed(req.seed, req.target)
    qe_ref = h.qe0 if scope is h.root else _parent_unit_qe(h, scope)
    counters = _RefineCounters()
    h.audit.append({
        "event": "refine_start",
        "target": req.target,
        "scope": scope.label(),
        "scope_size": scope_size,
    })
    _regrow_subtree(h, scope, qe_ref, req.params, seed, counters)
    report = RefineReport(
        scope_size=len(scope.sample_indices),
        depth_before=depth_before,
        depth_after=h.subtree_depth(scope),
        case1_stops=counters.case1,
        case2_insertions=counters.case2,
        duration_ms=(time.perf_counter() - started) * 1000.0,
    )
    h.audit.append({
        "event": "refine_done",
        "target": req.target,
        "scope": scope.label(),
        "case1_stops": report.case1_stops,
        "case2_insertions": report.case2_insertions,
    })
    return h, report


def _parent_unit_qe(h: Hierarchy, node: HierarchyNode) -> float:
    parent = h.root
    for hop in node.path[:-1]:
        parent = parent.children[hop]
    r, c = node.path[-1]
    return parent.child_map.unit(r, c).qe


def _regrow_subtree(
    h: Hierarchy,
    node: HierarchyNode,
    qe_ref: float,
    params: GrowthParams,
    seed: int,
    counters: _RefineCounters,
) -> None:
    """Per map: train, tau1 growth, criterion-2 insertions, gated expansion."""
    label = node.label()
    indices = node.sample_indices
    state = grow_trained_map(h, node, qe_ref, params, seed)
    grid = state.grid
    n_i = len(h.data)

    # Criterion 2: a single corrective insertion when one winner dominates
    # the map's summed error. The error unit picked by insert_row_or_col is
    # the argmax violator by construction. One round per map: with k equal
    # winners the test fires whenever k <= 1/(beta*tau1), so looping to a
    # fixed point would balloon every small map to the structural cap.
    qes = [u.qe for u in grid.winner_set()]
    worst = max(qes)
    if case2_insert(worst, qes, params.beta, params.tau1) and state.can_insert(params):
        h.audit.append({
            "event": "case2_insert",
            "path": label,
            "qe_k": worst,
            "winner_qes": qes,
            "beta": params.beta,
            "tau1": params.tau1,
        })
        insert_row_or_col(grid)
        state.insertions += 1
        counters.case2 += 1
        train(grid, h.data.matrix, indices,
              train_cfg(params, derive_seed(seed, label, "case2")))

    # Criterion 1 gate before stratification; one extra insertion round when
    # anything was suppressed ("insert new units in the map again").
    extra_granted = False
    while True:
        expand_hops: list[tuple[int, int]] = []
        suppressed = 0
        for unit in grid.units():
            if not expansion_eligible(h, unit, child_depth=node.depth + 1, params=params):
                continue
            if case1_stop(unit.n, n_i, params.alpha):
                suppressed += 1
                counters.case1 += 1
                h.audit.append({
                    "event": "case1_stop",
                    "path": label,
                    "unit": [unit.row, unit.col],
                    "n_k": unit.n,
                    "n_i": n_i,
                    "alpha": params.alpha,
                })
            else:
                expand_hops.append((unit.row, unit.col))
        if suppressed and not extra_granted and state.can_insert(params):
            extra_granted = True
            h.audit.append({"event": "case1_reinsert", "path": label})
            insert_row_or_col(grid)
            state.insertions += 1
            train(grid, h.data.matrix, indices,
                  train_cfg(params, derive_seed(seed, label, "case1")))
            continue
        break

    attach_children(node, grid)
    for hop in expand_hops:
        unit = grid.unit(*hop)
        child = node.children[hop]
        h.audit.append(expansion_event(h, child.label(), unit, params))
        _regrow_subtree(h, child, qe_ref=unit.qe, params=params,
                        seed=derive_seed(seed, child.label()), counters=counters)

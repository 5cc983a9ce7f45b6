"""Bit-exact hierarchy snapshots: export to JSON-able dicts and back.

Floating-point payloads (weights, qe values, layer-0 statistics) travel as
base64-encoded little-endian float64 bytes so import reproduces the
hierarchy exactly, not merely to printed precision.
"""

from __future__ import annotations

import base64
import hashlib
import json

import numpy as np

from .colors import channel_ranges, fit_pca, project, unit_color
from .dataset import Dataset
from .errors import ContractError, FingerprintMismatchError
from .hierarchy import GrowthParams, Hierarchy, HierarchyNode, parse_path
from .records import render_csv
from .som import SomMapGrid

SNAPSHOT_VERSION = 1


def _encode_floats(array: np.ndarray) -> str:
    return base64.b64encode(np.ascontiguousarray(array, dtype="<f8").tobytes()).decode("ascii")


def _decode_floats(blob: str, shape: tuple[int, ...]) -> np.ndarray:
    return np.frombuffer(base64.b64decode(blob), dtype="<f8").reshape(shape).copy()


def dataset_fingerprint(data: Dataset) -> str:
    """Content hash of the dataset: records (canonical CSV) or the raw matrix."""
    digest = hashlib.sha256()
    digest.update(",".join(data.schema).encode("utf-8"))
    if data.records is not None:
        digest.update(render_csv(data.records).encode("utf-8"))
    else:
        digest.update(np.ascontiguousarray(data.raw, dtype="<f8").tobytes())
    return digest.hexdigest()


def export_snapshot(h: Hierarchy) -> dict:
    """Serialize the node tree with weights, assignments, qe values, colors."""
    basis = fit_pca(h.data)
    weights = [u.weight for n in h.nodes() if n.child_map is not None for u in n.child_map.units()]
    ranges = channel_ranges([project(w, basis) for w in weights]) if weights else []

    nodes = []
    for node in h.nodes():
        entry: dict = {
            "path": node.label(),
            "samples": node.sample_indices,
        }
        if node.child_map is not None:
            grid = node.child_map
            entry["grid"] = {
                "rows": grid.rows,
                "cols": grid.cols,
                "weights": _encode_floats(grid.weights),
                "qe": _encode_floats(grid.qe),
                "mapped": [
                    [grid.mapped[r][c] for c in range(grid.cols)] for r in range(grid.rows)
                ],
                "colors": [
                    [
                        unit_color(grid.weights[r, c], basis, ranges).to_hex()
                        for c in range(grid.cols)
                    ]
                    for r in range(grid.rows)
                ],
            }
        nodes.append(entry)

    p = h.params
    return {
        "version": SNAPSHOT_VERSION,
        "seed": h.seed,
        "params": {
            "tau1": p.tau1, "tau2": p.tau2, "lam": p.lam,
            "alpha": p.alpha, "beta": p.beta,
            "max_depth": p.max_depth, "max_insertions": p.max_insertions,
        },
        "qe0": _encode_floats(np.array([h.qe0])),
        "mean0": _encode_floats(h.mean0),
        "fingerprint": dataset_fingerprint(h.data),
        "nodes": nodes,
    }


def snapshot_bytes(snapshot: dict) -> bytes:
    """Canonical JSON encoding; equal snapshots give equal bytes."""
    return json.dumps(snapshot, sort_keys=True, separators=(",", ":")).encode("utf-8")


def import_snapshot(snapshot: dict, data: Dataset) -> Hierarchy:
    """Rebuild a hierarchy; refuses datasets that don't match the fingerprint."""
    if snapshot.get("version") != SNAPSHOT_VERSION:
        raise ContractError(f"unsupported snapshot version {snapshot.get('version')!r}")
    expected = dataset_fingerprint(data)
    actual = snapshot["fingerprint"]
    if expected != actual:
        raise FingerprintMismatchError(expected, actual)

    params = GrowthParams(**snapshot["params"])
    h = Hierarchy(data, params, seed=snapshot["seed"])
    h.qe0 = float(_decode_floats(snapshot["qe0"], (1,))[0])
    h.mean0 = _decode_floats(snapshot["mean0"], (len(data.schema),))

    by_path: dict[tuple, HierarchyNode] = {}
    for entry in snapshot["nodes"]:
        path = parse_path(entry["path"])
        node = HierarchyNode(path=path, sample_indices=list(entry["samples"]))
        by_path[path] = node
        if path == ():
            h.root = node
        elif path[:-1] not in by_path:
            raise ContractError(f"snapshot node {entry['path']} arrives before its parent")
        else:
            by_path[path[:-1]].children[path[-1]] = node
        grid_entry = entry.get("grid")
        if grid_entry:
            rows, cols = grid_entry["rows"], grid_entry["cols"]
            dim = len(data.schema)
            grid = SomMapGrid(_decode_floats(grid_entry["weights"], (rows, cols, dim)))
            grid.qe = _decode_floats(grid_entry["qe"], (rows, cols))
            grid.mapped = [
                [list(grid_entry["mapped"][r][c]) for c in range(cols)] for r in range(rows)
            ]
            node.child_map = grid
    if () not in by_path:
        raise ContractError("snapshot has no root node")
    return h


def node_count(snapshot: dict) -> int:
    return len(snapshot["nodes"])

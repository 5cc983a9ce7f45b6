import numpy as np
import pytest

from ghsom_workbench.errors import ContractError, FingerprintMismatchError
from ghsom_workbench.hierarchy import GrowthParams, grow
from ghsom_workbench.snapshot import (
    dataset_fingerprint,
    export_snapshot,
    import_snapshot,
    snapshot_bytes,
)

from conftest import gaussian_clusters

FAST = GrowthParams(lam=20)


@pytest.fixture(scope="module")
def hierarchy_and_data():
    data = gaussian_clusters(seed=2)
    return grow(data, FAST, seed=21), data


def test_roundtrip_is_bit_identical(hierarchy_and_data):
    h, data = hierarchy_and_data
    snap = export_snapshot(h)
    restored = import_snapshot(snap, data)
    assert snapshot_bytes(export_snapshot(restored)) == snapshot_bytes(snap)
    # spot-check exact floats, not just encodings
    assert restored.qe0 == h.qe0
    for a, b in zip(h.nodes(), restored.nodes()):
        assert a.label(with_count=True) == b.label(with_count=True)
        assert a.sample_indices == b.sample_indices
        if a.child_map is not None:
            assert np.array_equal(a.child_map.weights, b.child_map.weights)
            assert np.array_equal(a.child_map.qe, b.child_map.qe)


def test_node_count_preserved(hierarchy_and_data):
    h, data = hierarchy_and_data
    snap = export_snapshot(h)
    assert len(snap["nodes"]) == h.node_count()
    assert import_snapshot(snap, data).node_count() == h.node_count()


def test_import_against_other_dataset_refused(hierarchy_and_data):
    h, _ = hierarchy_and_data
    other = gaussian_clusters(seed=3)
    snap = export_snapshot(h)
    with pytest.raises(FingerprintMismatchError) as err:
        import_snapshot(snap, other)
    assert err.value.expected == dataset_fingerprint(other)
    assert err.value.actual == snap["fingerprint"]


def test_unknown_version_rejected(hierarchy_and_data):
    h, data = hierarchy_and_data
    snap = dict(export_snapshot(h))
    snap["version"] = 99
    with pytest.raises(ContractError):
        import_snapshot(snap, data)


def test_snapshot_carries_params_and_colors(hierarchy_and_data):
    h, _ = hierarchy_and_data
    snap = export_snapshot(h)
    assert snap["params"]["tau1"] == FAST.tau1
    root_entry = next(n for n in snap["nodes"] if n["path"] == "[R]")
    colors = root_entry["grid"]["colors"]
    assert all(c.startswith("#") and len(c) == 7 for row in colors for c in row)

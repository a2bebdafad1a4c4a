import json

import pytest

from netcut.netmodel import (
    BlockBoundary,
    DescriptorError,
    LayerRecord,
    NetworkDescriptor,
    TrimmedNetworkSpec,
    block_cutpoints,
    descriptor_from_json,
    descriptor_to_json,
    enumerate_blockwise,
    enumerate_layerwise,
    load_descriptor,
    remove_layers,
    save_descriptor,
)


def make_net(n_layers, block_sizes=(), name="net"):
    blocks = []
    idx = 0
    for k, size in enumerate(block_sizes):
        blocks.append(BlockBoundary(f"b{k}", idx, idx + size - 1))
        idx += size
    layers = []
    for i in range(n_layers):
        owner = next((b.block_id for b in blocks if b.first_index <= i <= b.last_index), None)
        layers.append(LayerRecord(i, f"l{i}", "conv", 10.0 * (i + 1), 5.0, 3.0, owner))
    return NetworkDescriptor(name=name, layers=tuple(layers), blocks=tuple(blocks))


def test_minimal_descriptor_roundtrip(tmp_path):
    net = make_net(3)
    path = tmp_path / "net.json"
    save_descriptor(net, path)
    assert load_descriptor(path) == net


def test_load_valid_three_layer_file(tmp_path):
    obj = {
        "name": "tiny",
        "head_note": "",
        "layers": [
            {"index": i, "name": f"l{i}", "kind": "conv", "flops": 1, "params": 1, "filter_size": 0, "block_id": None}
            for i in range(3)
        ],
        "blocks": [],
    }
    path = tmp_path / "tiny.json"
    path.write_text(json.dumps(obj))
    net = load_descriptor(path)
    assert [l.index for l in net.layers] == [0, 1, 2]


def test_duplicate_index_rejected(tmp_path):
    obj = {
        "name": "dup",
        "layers": [
            {"index": 0, "name": "a", "kind": "conv"},
            {"index": 1, "name": "b", "kind": "conv"},
            {"index": 1, "name": "c", "kind": "conv"},
        ],
        "blocks": [],
    }
    path = tmp_path / "dup.json"
    path.write_text(json.dumps(obj))
    with pytest.raises(DescriptorError, match="duplicate layer index"):
        load_descriptor(path)


def test_noncontiguous_indices_rejected():
    layers = (LayerRecord(0, "a", "conv"), LayerRecord(2, "b", "conv"))
    with pytest.raises(DescriptorError, match="contiguous"):
        NetworkDescriptor(name="gap", layers=layers)


def test_overlapping_blocks_rejected():
    layers = tuple(LayerRecord(i, f"l{i}", "conv", block_id="b0") for i in range(4))
    blocks = (BlockBoundary("b0", 0, 2), BlockBoundary("b1", 2, 3))
    with pytest.raises(DescriptorError):
        NetworkDescriptor(name="overlap", layers=layers, blocks=blocks)


def test_layer_block_mismatch_rejected():
    layers = (
        LayerRecord(0, "a", "conv", block_id="nope"),
        LayerRecord(1, "b", "conv"),
    )
    with pytest.raises(DescriptorError, match="unknown block"):
        NetworkDescriptor(name="badref", layers=layers, blocks=())


def test_inceptionlike_block_structure_roundtrips(tmp_path):
    # 11 repeating modules of 3 layers each plus a 2-layer stem.
    net = make_net(35, block_sizes=(3,) * 11, name="inception_like")
    assert len(net.blocks) == 11
    path = tmp_path / "incep.json"
    save_descriptor(net, path)
    again = load_descriptor(path)
    assert again == net
    assert descriptor_from_json(descriptor_to_json(net)) == net


class TestRemoveLayers:
    def test_cutpoint_zero_is_identity(self):
        spec = remove_layers(make_net(5), 0)
        assert spec.removed_indices == frozenset()
        assert spec.cutpoint == 0

    def test_cutpoint_two(self):
        spec = remove_layers(make_net(5), 2)
        assert spec.removed_indices == {0, 1}

    def test_out_of_range(self):
        with pytest.raises(DescriptorError, match="out of range"):
            remove_layers(make_net(5), 6)

    def test_all_removed_rejected(self):
        with pytest.raises(DescriptorError, match="no layers"):
            remove_layers(make_net(5), 5)

    def test_monotone_removed_sets(self):
        net = make_net(10)
        prev = frozenset()
        for cp in range(1, 10):
            cur = remove_layers(net, cp).removed_indices
            assert prev < cur
            prev = cur


class TestEnumerate:
    def test_blockwise_two_blocks_cover_all(self):
        net = make_net(6, block_sizes=(3, 3))
        cps = [s.cutpoint for s in enumerate_blockwise(net)]
        assert cps == [0, 3]  # cutpoint 6 would leave nothing

    def test_blockwise_no_blocks(self):
        specs = enumerate_blockwise(make_net(4))
        assert [s.cutpoint for s in specs] == [0]

    def test_blockwise_whole_block_invariant(self):
        net = make_net(9, block_sizes=(2, 3, 2))
        for spec in enumerate_blockwise(net):
            for b in net.blocks:
                inside = {i for i in spec.removed_indices if b.first_index <= i <= b.last_index}
                assert inside in (set(), set(range(b.first_index, b.last_index + 1)))

    def test_layerwise_counts(self):
        assert len(enumerate_layerwise(make_net(3))) == 3
        assert len(enumerate_layerwise(make_net(1))) == 1
        cps = [s.cutpoint for s in enumerate_layerwise(make_net(100))]
        assert cps == sorted(cps) and len(set(cps)) == 100

    def test_blockwise_subset_of_layerwise(self):
        net = make_net(9, block_sizes=(2, 3, 2))
        bw = {s.cutpoint for s in enumerate_blockwise(net)}
        lw = {s.cutpoint for s in enumerate_layerwise(net)}
        assert bw <= lw
        assert len(bw) <= len(net.blocks) + 1


def test_family_has_148_blockwise_candidates(family):
    nets, _, _ = family
    total = sum(len(enumerate_blockwise(net)) for net in nets.values())
    assert total == 148
    assert len(nets) == 7


def test_trn_spec_rejects_inconsistent_removed_set():
    with pytest.raises(DescriptorError):
        TrimmedNetworkSpec(source="x", cutpoint=2, removed_indices=frozenset({0, 2}))

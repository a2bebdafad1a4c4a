import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from netcut.netmodel import TrimmedNetworkSpec
from netcut.profiles import (
    ProfileError,
    ProfileTable,
    estimate_profiler,
    load_profile,
    profile_from_json,
    profiler_overhead_ratio,
    save_profile,
)

from test_netmodel import make_net


def make_table(latencies, measured, network="net"):
    return ProfileTable(
        network=network,
        device="dev",
        measured_latency=measured,
        layer_latencies=dict(enumerate(latencies)),
    )


def trn(cutpoint, source="net"):
    return TrimmedNetworkSpec(source=source, cutpoint=cutpoint)


class TestLoad:
    def test_json_roundtrip(self, tmp_path):
        net = make_net(3)
        table = make_table([2.0, 3.0, 5.0], 10.0)
        path = tmp_path / "p.json"
        save_profile(table, path)
        assert load_profile(path, net) == table

    def test_csv_with_sidecar(self, tmp_path):
        net = make_net(2)
        (tmp_path / "p.csv").write_text("index,latency_ms\n0,1.5\n1,2.5\n")
        (tmp_path / "p.meta.json").write_text(
            json.dumps({"network": "net", "device": "dev", "measured_latency_ms": 3.8})
        )
        table = load_profile(tmp_path / "p.csv", net)
        assert table.layer_latencies[1] == 2.5
        assert table.measured_latency == 3.8

    def test_missing_index_reported(self, tmp_path):
        net = make_net(3)
        save_profile(make_table([1.0, 1.0], 2.0), tmp_path / "p.json")
        with pytest.raises(ProfileError, match="incomplete at index 2"):
            load_profile(tmp_path / "p.json", net)

    def test_zero_measured_latency_rejected(self):
        with pytest.raises(ProfileError, match="measured_latency"):
            make_table([1.0], 0.0)

    def test_non_numeric_latency_rejected(self):
        with pytest.raises(ProfileError):
            profile_from_json(
                {
                    "network": "net",
                    "device": "dev",
                    "measured_latency_ms": 1.0,
                    "layer_latencies": {"0": "fast"},
                }
            )


class TestEstimate:
    def test_cutpoint_zero_returns_measured(self):
        table = make_table([2.0, 3.0, 5.0], 10.0)
        assert estimate_profiler(table, trn(0)).value == 10.0

    def test_hand_example_remove_two(self):
        # measured 10, layers {2,3,5}: removing {0,1} leaves 5/10 of the sum.
        table = make_table([2.0, 3.0, 5.0], 10.0)
        assert estimate_profiler(table, trn(2)).value == pytest.approx(5.0, abs=1e-12)

    def test_hand_example_half_removed(self):
        table = make_table([1.0, 1.0, 2.0], 8.0)
        assert estimate_profiler(table, trn(2)).value == pytest.approx(4.0, abs=1e-12)

    def test_network_mismatch(self):
        table = make_table([1.0, 2.0], 3.0)
        with pytest.raises(ProfileError, match="does not match"):
            estimate_profiler(table, trn(1, source="other"))

    def test_removed_index_absent(self):
        table = make_table([1.0, 2.0], 3.0)
        with pytest.raises(ProfileError, match="absent"):
            estimate_profiler(table, trn(3))

    @given(
        st.lists(st.floats(min_value=0.0, max_value=100.0), min_size=1, max_size=20),
        st.floats(min_value=0.01, max_value=1000.0),
    )
    @settings(max_examples=200)
    def test_bounds_and_monotonicity(self, latencies, measured):
        if sum(latencies) == 0:
            latencies = latencies + [1.0]
        table = make_table(latencies, measured)
        n = len(table.layer_latencies)
        estimates = [estimate_profiler(table, trn(cp)).value for cp in range(n)]
        assert estimates[0] == measured
        for a, b in zip(estimates, estimates[1:]):
            assert b <= a + 1e-12
        assert all(0.0 <= e <= measured + 1e-12 for e in estimates)

    @given(st.floats(min_value=0.001, max_value=1000.0))
    def test_scale_invariance_of_ratio(self, scale):
        base = make_table([2.0, 3.0, 5.0], 10.0)
        scaled = make_table([2.0 * scale, 3.0 * scale, 5.0 * scale], 10.0)
        for cp in range(3):
            assert estimate_profiler(scaled, trn(cp)).value == pytest.approx(
                estimate_profiler(base, trn(cp)).value, rel=1e-9
            )


class TestOverheadRatio:
    def test_exact(self):
        assert profiler_overhead_ratio(make_table([4.0, 6.0], 10.0)) == 1.0
        assert profiler_overhead_ratio(make_table([5.0, 6.0], 10.0)) == pytest.approx(1.1)

    def test_five_percent_event_overhead(self):
        # each layer's recorded latency carries 5% instrumentation overhead
        true_layers = [1.0, 2.0, 3.0, 4.0]
        recorded = [1.05 * v for v in true_layers]
        table = make_table(recorded, sum(true_layers))
        assert profiler_overhead_ratio(table) == pytest.approx(1.05, rel=1e-12)

    def test_family_profiles_exceed_one(self, family):
        _, tables, _ = family
        for table in tables.values():
            assert profiler_overhead_ratio(table) >= 1.0

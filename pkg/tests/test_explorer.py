import itertools

import pytest

from netcut.evaluator import AccuracyTable, Evaluator, EvaluatorConfig
from netcut.explorer import (
    Deadline,
    ExplorerError,
    ParetoPoint,
    explore_blockwise,
    first_feasible,
    gap_analysis,
    make_estimator,
    netcut,
    pareto_frontier,
)
from netcut.netmodel import TrimmedNetworkSpec, block_cutpoints
from netcut.profiles import ProfileTable, estimate_profiler

from test_netmodel import make_net


def make_table(net, latencies, measured):
    return ProfileTable(
        network=net.name,
        device="dev",
        measured_latency=measured,
        layer_latencies=dict(enumerate(latencies)),
    )


def table_evaluator(tmp_path, rows):
    path = tmp_path / "acc.csv"
    lines = ["network,cutpoint,accuracy"] + [f"{n},{c},{a}" for n, c, a in rows]
    path.write_text("\n".join(lines) + "\n")
    return Evaluator(EvaluatorConfig(backend="table", table_path=str(path)))


def pt(lat, acc, name="n", cp=0):
    return ParetoPoint(
        trn=TrimmedNetworkSpec(source=name, cutpoint=cp), latency=lat, accuracy=acc
    )


class TestFirstFeasible:
    def test_matches_exhaustive_enumeration(self):
        net = make_net(12, block_sizes=(3, 3, 3))
        table = make_table(net, [1.0] * 12, 12.0)
        estimate = make_estimator("profiler")
        for deadline_ms in [0.5, 3.0, 6.5, 9.0, 12.0, 20.0]:
            deadline = Deadline(deadline_ms)
            hit = first_feasible(net, table, estimate, deadline, "blockwise")
            # brute-force oracle over all blockwise cutpoints in order
            oracle = None
            for cp in block_cutpoints(net):
                trn = TrimmedNetworkSpec(net.name, cp, granularity="blockwise")
                if estimate_profiler(table, trn).value <= deadline_ms:
                    oracle = cp
                    break
            if oracle is None:
                assert hit is None
            else:
                assert hit is not None and hit[0].cutpoint == oracle

    def test_unmodified_network_already_fast(self):
        net = make_net(4)
        table = make_table(net, [1.0] * 4, 2.0)
        hit = first_feasible(net, table, make_estimator("profiler"), Deadline(5.0), "layerwise")
        assert hit[0].cutpoint == 0
        assert hit[1].value == 2.0

    def test_infeasible_returns_none(self):
        net = make_net(2)
        table = make_table(net, [1.0, 9.0], 10.0)
        # even the deepest cut keeps 9/10 of the latency
        hit = first_feasible(net, table, make_estimator("profiler"), Deadline(1.0), "layerwise")
        assert hit is None


class TestNetcut:
    def family(self, tmp_path):
        slow = make_net(6, block_sizes=(2, 2, 2), name="slow")
        fast = make_net(4, block_sizes=(2, 2), name="fast")
        tables = {
            "slow": make_table(slow, [1.0] * 6, 6.0),
            "fast": make_table(fast, [0.5] * 4, 2.0),
        }
        rows = [
            ("slow", 0, 0.90), ("slow", 2, 0.85), ("slow", 4, 0.70),
            ("fast", 0, 0.80), ("fast", 2, 0.60),
        ]
        return [slow, fast], tables, table_evaluator(tmp_path, rows)

    def test_one_candidate_per_network(self, tmp_path):
        nets, tables, ev = self.family(tmp_path)
        report = netcut(nets, tables, Deadline(2.5), ev)
        assert report.candidates_trained == 2
        # slow needs cutpoint 4 (2/6 of 6ms = 2.0), fast fits unmodified
        by_name = {c.network: c for c in report.chosen}
        assert by_name["slow"].trn.cutpoint == 4
        assert by_name["fast"].trn.cutpoint == 0

    def test_winner_is_most_accurate_feasible(self, tmp_path):
        nets, tables, ev = self.family(tmp_path)
        report = netcut(nets, tables, Deadline(2.5), ev)
        assert report.winner.network == "fast"
        assert report.winner.accuracy == 0.80
        assert report.slack_ms == pytest.approx(0.5)

    def test_generous_deadline_picks_best_unmodified(self, tmp_path):
        nets, tables, ev = self.family(tmp_path)
        report = netcut(nets, tables, Deadline(10.0), ev)
        assert report.winner.network == "slow"
        assert report.winner.trn.cutpoint == 0
        assert report.gap_closed_pct == pytest.approx(0.0)

    def test_all_infeasible(self, tmp_path):
        nets, tables, ev = self.family(tmp_path)
        report = netcut(nets, tables, Deadline(0.1), ev)
        assert not report.feasible
        assert report.winner is None
        assert report.cost is None
        assert report.candidates_trained == 0

    def test_missing_table_is_error(self, tmp_path):
        nets, tables, ev = self.family(tmp_path)
        with pytest.raises(ExplorerError, match="no profile table"):
            netcut(nets, {"slow": tables["slow"]}, Deadline(2.5), ev)

    def test_random_families_match_bruteforce(self, tmp_path):
        import random

        rng = random.Random(42)
        for trial in range(15):
            n_layers = rng.randint(2, 10)
            net = make_net(n_layers, name=f"t{trial}")
            lats = [rng.uniform(0.1, 2.0) for _ in range(n_layers)]
            measured = sum(lats) * rng.uniform(1.0, 1.2)
            table = make_table(net, lats, measured)
            rows = [(net.name, cp, round(0.9 - 0.05 * cp, 4)) for cp in range(n_layers)]
            (tmp_path / f"d{trial}").mkdir(exist_ok=True)
            ev = table_evaluator(tmp_path / f"d{trial}", rows)
            deadline = Deadline(rng.uniform(0.1, measured * 1.1))
            report = netcut([net], {net.name: table}, deadline, ev, granularity="layerwise")
            feasible_cps = [
                cp
                for cp in range(n_layers)
                if estimate_profiler(table, TrimmedNetworkSpec(net.name, cp)).value
                <= deadline.value
            ]
            if not feasible_cps:
                assert not report.feasible
            else:
                assert report.winner.trn.cutpoint == min(feasible_cps)


class TestExploreBlockwise:
    def test_candidate_counts(self, tmp_path):
        net = make_net(6, block_sizes=(2, 2, 2), name="slow")
        table = make_table(net, [1.0] * 6, 6.0)
        rows = [("slow", cp, 0.9 - 0.1 * cp) for cp in (0, 2, 4)]
        ev = table_evaluator(tmp_path, rows)
        points = explore_blockwise([net], {"slow": table}, ev)
        assert len(points) == 3
        assert points[0].latency_source == "measured"
        assert all(p.latency_source == "estimated" for p in points[1:])

    def test_family_winner_never_beats_exhaustive(self, family, data_dir):
        nets, tables, ev = family
        report = netcut(list(nets.values()), tables, Deadline(0.9), ev)
        points = explore_blockwise(list(nets.values()), tables, ev)
        feasible = [p for p in points if p.latency <= 0.9]
        assert report.winner.accuracy <= max(p.accuracy for p in feasible) + 1e-12


class TestParetoFrontier:
    def test_hand_example(self):
        points = [pt(1.0, 0.8, "a"), pt(2.0, 0.9, "b"), pt(1.5, 0.7, "c")]
        frontier = pareto_frontier(points)
        assert [(p.latency, p.accuracy) for p in frontier] == [(1.0, 0.8), (2.0, 0.9)]

    def test_matches_quadratic_dominance_filter(self):
        import random

        rng = random.Random(7)
        points = [
            pt(round(rng.uniform(0.5, 5.0), 3), round(rng.uniform(0.1, 0.99), 3), f"n{i}", 0)
            for i in range(120)
        ]

        def dominated(q):
            return any(
                p.latency <= q.latency
                and p.accuracy >= q.accuracy
                and (p.latency < q.latency or p.accuracy > q.accuracy)
                for p in points
            )

        oracle = sorted(
            {(p.latency, p.accuracy) for p in points if not dominated(p)}
        )
        got = [(p.latency, p.accuracy) for p in pareto_frontier(points)]
        assert got == oracle

    def test_duplicates_collapse_to_first_by_identity(self):
        points = [pt(1.0, 0.8, "zeta", 3), pt(1.0, 0.8, "alpha", 1)]
        frontier = pareto_frontier(points)
        assert len(frontier) == 1
        assert frontier[0].trn.source == "alpha"

    def test_chain_is_strictly_increasing(self):
        import random

        rng = random.Random(11)
        points = [pt(rng.uniform(0.1, 9), rng.uniform(0, 1), f"n{i}") for i in range(200)]
        frontier = pareto_frontier(points)
        for a, b in itertools.pairwise(frontier):
            assert a.latency < b.latency
            assert a.accuracy < b.accuracy


class TestGapAnalysis:
    def test_two_point_frontier(self):
        frontier = [pt(0.36, 0.81, "m"), pt(1.2, 0.88, "i")]
        gap = gap_analysis(frontier, Deadline(0.9))
        assert gap.feasible
        assert gap.best.latency == 0.36
        assert gap.slack_ms == pytest.approx(0.54)
        assert gap.accuracy_gap == pytest.approx(0.07)

    def test_boundary_point_is_feasible(self):
        frontier = [pt(0.9, 0.8, "m")]
        gap = gap_analysis(frontier, Deadline(0.9))
        assert gap.feasible
        assert gap.slack_ms == 0.0
        assert gap.accuracy_gap == 0.0

    def test_all_above_deadline(self):
        frontier = [pt(1.0, 0.8), pt(2.0, 0.9, "b")]
        gap = gap_analysis(frontier, Deadline(0.5))
        assert not gap.feasible
        assert gap.best is None
        assert gap.slack_ms is None

    def test_empty_frontier_error(self):
        with pytest.raises(ExplorerError):
            gap_analysis([], Deadline(1.0))


def test_deadline_must_be_positive():
    with pytest.raises(ExplorerError):
        Deadline(0.0)
    with pytest.raises(ExplorerError):
        Deadline(-1.0)


def test_make_estimator_unknown():
    with pytest.raises(ExplorerError):
        make_estimator("psychic")
    with pytest.raises(ExplorerError):
        make_estimator("analytical")  # needs a model

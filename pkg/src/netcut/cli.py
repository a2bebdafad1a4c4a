"""Command-line entry point.

Runs are driven by a JSON config file; every config field has a matching
command-line flag that takes precedence. Exit codes: 0 success (an
infeasible exploration result is still a success), 1 usage or config
error, 2 data validation error, 3 evaluator failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import analytical
from .analytical import (
    SvrModel,
    extract_features,
    grid_search_cv,
    load_model,
    load_truth,
    relative_error,
    save_model,
    split_train_test,
    tuning_report_to_json,
)
from .evaluator import Evaluator, EvaluatorConfig, EvaluatorError
from .explorer import Deadline, explore_blockwise, gap_analysis, netcut, pareto_frontier
from .netmodel import (
    DescriptorError,
    NetworkDescriptor,
    TrimmedNetworkSpec,
    enumerate_blockwise,
    load_descriptor,
    remove_layers,
)
from .profiles import ProfileError, estimate_profiler, load_profile
from .reporting import (
    pareto_svg,
    report_summary,
    report_to_json,
    write_pareto_csv,
    write_report_json,
)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_EVALUATOR = 3


class ConfigError(ValueError):
    pass


@dataclass
class RunConfig:
    descriptors: list[str]
    profiles: list[str]
    evaluator: EvaluatorConfig | None = None
    estimator: str = "profiler"  # profiler | analytical | both
    deadline_ms: float | None = None
    granularity: str = "blockwise"
    output_dir: str = "out"
    truth_path: str | None = None
    model_path: str | None = None
    unit_hours: float = 1.0
    gamma_grid: list[float] = field(default_factory=lambda: list(analytical.DEFAULT_GAMMA_GRID))
    c_grid: list[float] = field(default_factory=lambda: list(analytical.DEFAULT_C_GRID))
    epsilon: float = analytical.DEFAULT_EPSILON
    folds: int = analytical.DEFAULT_FOLDS
    train_fraction: float = analytical.DEFAULT_TRAIN_FRACTION
    seed: int = 0  # reserved; all defaults are deterministic
    base_dir: Path = field(default_factory=Path)
    out_dir_from_cli: bool = False

    def resolve(self, path: str) -> Path:
        p = Path(path)
        return p if p.is_absolute() else self.base_dir / p


def load_config(path: str | Path) -> RunConfig:
    path = Path(path)
    try:
        obj = json.loads(path.read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    try:
        ev = None
        if "evaluator" in obj:
            ev = EvaluatorConfig(**obj["evaluator"])
        training = obj.get("training", {})
        return RunConfig(
            descriptors=list(obj["descriptors"]),
            profiles=list(obj["profiles"]),
            evaluator=ev,
            estimator=obj.get("estimator", "profiler"),
            deadline_ms=obj.get("deadline_ms"),
            granularity=obj.get("granularity", "blockwise"),
            output_dir=obj.get("output_dir", "out"),
            truth_path=obj.get("truth_path"),
            model_path=obj.get("model_path"),
            unit_hours=float(obj.get("unit_hours", 1.0)),
            gamma_grid=list(training.get("gamma_grid", analytical.DEFAULT_GAMMA_GRID)),
            c_grid=list(training.get("c_grid", analytical.DEFAULT_C_GRID)),
            epsilon=float(training.get("epsilon", analytical.DEFAULT_EPSILON)),
            folds=int(training.get("folds", analytical.DEFAULT_FOLDS)),
            train_fraction=float(
                training.get("train_fraction", analytical.DEFAULT_TRAIN_FRACTION)
            ),
            seed=int(obj.get("seed", 0)),
            base_dir=path.parent,
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigError(f"bad config {path}: {exc}") from exc


def _apply_overrides(cfg: RunConfig, args: argparse.Namespace) -> RunConfig:
    if getattr(args, "deadline_ms", None) is not None:
        cfg.deadline_ms = args.deadline_ms
    if getattr(args, "estimator", None):
        cfg.estimator = args.estimator
    if getattr(args, "granularity", None):
        cfg.granularity = {"layer": "layerwise", "block": "blockwise"}[args.granularity]
    if getattr(args, "out", None):
        cfg.output_dir = args.out
        cfg.out_dir_from_cli = True  # CLI-supplied out dir is relative to cwd
    if getattr(args, "jobs", None) and cfg.evaluator is not None:
        ev = cfg.evaluator
        cfg.evaluator = EvaluatorConfig(
            backend=ev.backend,
            table_path=ev.table_path,
            interpolate=ev.interpolate,
            command=ev.command,
            timeout_s=ev.timeout_s,
            jobs=args.jobs,
        )
    return cfg


def _load_inputs(cfg: RunConfig):
    nets: dict[str, NetworkDescriptor] = {}
    for d in cfg.descriptors:
        net = load_descriptor(cfg.resolve(d))
        if net.name in nets:
            raise DescriptorError(f"duplicate descriptor for network {net.name!r}")
        nets[net.name] = net
    tables = {}
    for p in cfg.profiles:
        path = cfg.resolve(p)
        obj = json.loads(Path(path).read_text(encoding="utf-8"))
        name = obj.get("network")
        if name not in nets:
            raise ProfileError(f"profile {path} references unknown network {name!r}")
        tables[name] = load_profile(path, nets[name])
    return nets, tables


def _make_evaluator(cfg: RunConfig) -> Evaluator:
    if cfg.evaluator is None:
        raise ConfigError("config has no evaluator section")
    ev = cfg.evaluator
    if ev.backend == "table" and ev.table_path:
        ev = EvaluatorConfig(
            backend="table",
            table_path=str(cfg.resolve(ev.table_path)),
            interpolate=ev.interpolate,
            timeout_s=ev.timeout_s,
            jobs=ev.jobs,
        )
    return Evaluator(ev)


def _out_dir(cfg: RunConfig) -> Path:
    out = Path(cfg.output_dir)
    if not out.is_absolute() and not cfg.out_dir_from_cli:
        out = cfg.base_dir / out
    out.mkdir(parents=True, exist_ok=True)
    return out


def cmd_validate(cfg: RunConfig) -> int:
    """Cross-validate all referenced inputs; print every violation."""
    problems: list[str] = []
    nets: dict[str, NetworkDescriptor] = {}
    for d in cfg.descriptors:
        try:
            net = load_descriptor(cfg.resolve(d))
            nets[net.name] = net
        except DescriptorError as exc:
            problems.append(str(exc))
    for p in cfg.profiles:
        path = cfg.resolve(p)
        try:
            obj = json.loads(Path(path).read_text(encoding="utf-8"))
            name = obj.get("network")
            if name not in nets:
                problems.append(f"profile {path} references unknown network {name!r}")
                continue
            load_profile(path, nets[name])
        except (OSError, json.JSONDecodeError, ProfileError) as exc:
            problems.append(str(exc))
    if cfg.evaluator is not None and cfg.evaluator.backend == "table":
        try:
            _make_evaluator(cfg)
        except (ValueError, OSError) as exc:
            problems.append(str(exc))
    if cfg.truth_path:
        try:
            load_truth(cfg.resolve(cfg.truth_path))
        except ValueError as exc:
            problems.append(str(exc))
    for msg in problems:
        print(f"invalid: {msg}")
    if problems:
        return EXIT_DATA
    print(f"ok: {len(nets)} descriptors, {len(cfg.profiles)} profiles consistent")
    return EXIT_OK


def _analytical_model(cfg: RunConfig) -> SvrModel:
    if not cfg.model_path:
        raise ConfigError("analytical estimation requires model_path in the config")
    return load_model(cfg.resolve(cfg.model_path))


def cmd_estimate(cfg: RunConfig, network: str, cutpoint: int) -> int:
    nets, tables = _load_inputs(cfg)
    if network not in nets:
        raise ConfigError(f"unknown network {network!r}")
    net = nets[network]
    trn = remove_layers(net, cutpoint)
    truth = load_truth(cfg.resolve(cfg.truth_path)) if cfg.truth_path else {}
    actual = truth.get((network, cutpoint))

    methods = ["profiler", "analytical"] if cfg.estimator == "both" else [cfg.estimator]
    for method in methods:
        if method == "profiler":
            est = estimate_profiler(tables[network], trn)
        else:
            model = _analytical_model(cfg)
            est = analytical.predict(model, extract_features(net, tables[network], trn), trn)
        line = f"{network} cutpoint {cutpoint} [{method}]: {est.value:.6f} ms"
        if actual is not None:
            line += (
                f" (truth {actual:.6f} ms, "
                f"relative error {relative_error(est.value, actual):.2f}%)"
            )
        print(line)
    return EXIT_OK


def cmd_explore(cfg: RunConfig) -> int:
    if cfg.deadline_ms is None:
        raise ConfigError("explore requires a deadline (deadline_ms / --deadline-ms)")
    nets, tables = _load_inputs(cfg)
    evaluator = _make_evaluator(cfg)
    deadline = Deadline(cfg.deadline_ms)
    out = _out_dir(cfg)

    methods = ["profiler", "analytical"] if cfg.estimator == "both" else [cfg.estimator]
    for method in methods:
        model = _analytical_model(cfg) if method == "analytical" else None
        report = netcut(
            list(nets.values()),
            tables,
            deadline,
            evaluator,
            granularity=cfg.granularity,
            estimator=method,
            model=model,
            unit_hours=cfg.unit_hours,
        )
        suffix = f"_{method}" if len(methods) > 1 else ""
        write_report_json(report, out / f"report{suffix}.json")
        points = explore_blockwise(list(nets.values()), tables, evaluator)
        frontier = pareto_frontier(points)
        write_pareto_csv(points, frontier, out / f"pareto{suffix}.csv")
        summary = report_summary(report)
        (out / f"summary{suffix}.txt").write_text(summary, encoding="utf-8")
        print(summary, end="")
    print(f"reports written to {out}")
    return EXIT_OK


def cmd_pareto(cfg: RunConfig, svg: bool = False) -> int:
    nets, tables = _load_inputs(cfg)
    evaluator = _make_evaluator(cfg)
    out = _out_dir(cfg)
    points = explore_blockwise(list(nets.values()), tables, evaluator)
    frontier = pareto_frontier(points)
    write_pareto_csv(points, frontier, out / "pareto.csv")
    deadline = Deadline(cfg.deadline_ms) if cfg.deadline_ms else None
    if deadline is not None and frontier:
        gap = gap_analysis(frontier, deadline)
        if gap.feasible:
            print(
                f"best feasible: {gap.best.trn.label} "
                f"({gap.best.latency:.4f} ms, accuracy {gap.best.accuracy:.4f}), "
                f"slack {gap.slack_ms:.4f} ms, accuracy gap {gap.accuracy_gap:.4f}"
            )
        else:
            print("no frontier point meets the deadline")
    if svg and points:
        (out / "pareto.svg").write_text(
            pareto_svg(points, frontier, deadline), encoding="utf-8"
        )
    print(f"{len(points)} points, {len(frontier)} on the frontier -> {out / 'pareto.csv'}")
    return EXIT_OK


def cmd_train_model(cfg: RunConfig) -> int:
    if not cfg.truth_path:
        raise ConfigError("train-model requires truth_path in the config")
    nets, tables = _load_inputs(cfg)
    truth = load_truth(cfg.resolve(cfg.truth_path))
    rows, targets = [], []
    for (name, cutpoint), latency in sorted(truth.items()):
        if name not in nets:
            raise ConfigError(f"truth file references unknown network {name!r}")
        trn = remove_layers(nets[name], cutpoint)
        fv = extract_features(nets[name], tables[name], trn)
        rows.append(fv.to_array())
        targets.append(latency)
    x = np.array(rows)
    y = np.array(targets)

    train_idx, test_idx = split_train_test(y, cfg.train_fraction)
    report, model = grid_search_cv(
        x[train_idx],
        y[train_idx],
        gamma_grid=cfg.gamma_grid,
        c_grid=cfg.c_grid,
        epsilon=cfg.epsilon,
        folds=min(cfg.folds, len(train_idx)),
    )
    preds = model.decision(x[test_idx])
    test_err = float(
        np.mean([relative_error(p, t) for p, t in zip(preds, y[test_idx])])
    )

    out = _out_dir(cfg)
    save_model(model, out / "model.json")
    (out / "tuning.json").write_text(
        json.dumps(tuning_report_to_json(report), indent=2, sort_keys=True) + "\n",
        encoding="utf-8",
    )
    print(
        f"selected gamma={report.selected[0]:g} c={report.selected[1]:g} "
        f"(CV error {report.selected_error:.2f}%)"
    )
    print(
        f"test error on {len(test_idx)} held-out samples: {test_err:.2f}% "
        f"(trained on {len(train_idx)})"
    )
    print(f"model written to {out / 'model.json'}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="netcut",
        description="Deadline-aware selection of trimmed networks",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--config", required=True, help="run config JSON")
        p.add_argument("--deadline-ms", type=float, default=None)
        p.add_argument(
            "--estimator", choices=["profiler", "analytical", "both"], default=None
        )
        p.add_argument("--granularity", choices=["layer", "block"], default=None)
        p.add_argument("--jobs", type=int, default=None)
        p.add_argument("--out", default=None, help="output directory")

    common(sub.add_parser("validate", help="cross-check all configured inputs"))

    p_est = sub.add_parser("estimate", help="estimate one TRN's latency")
    common(p_est)
    p_est.add_argument("--network", required=True)
    p_est.add_argument("--cutpoint", type=int, required=True)

    common(sub.add_parser("explore", help="run the deadline-aware search"))

    p_par = sub.add_parser("pareto", help="emit all blockwise points and the frontier")
    common(p_par)
    p_par.add_argument("--svg", action="store_true", help="also write an SVG scatter")

    common(sub.add_parser("train-model", help="tune and persist the analytical model"))
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = _apply_overrides(load_config(args.config), args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        if args.command == "validate":
            return cmd_validate(cfg)
        if args.command == "estimate":
            return cmd_estimate(cfg, args.network, args.cutpoint)
        if args.command == "explore":
            return cmd_explore(cfg)
        if args.command == "pareto":
            return cmd_pareto(cfg, svg=args.svg)
        if args.command == "train-model":
            return cmd_train_model(cfg)
        parser.error(f"unknown command {args.command!r}")
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except EvaluatorError as exc:
        print(f"evaluator error: {exc}", file=sys.stderr)
        return EXIT_EVALUATOR
    except (DescriptorError, ProfileError, ValueError, OSError) as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())

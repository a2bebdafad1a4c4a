import json
from pathlib import Path

import pytest

from netcut import load_descriptor, load_profile
from netcut.evaluator import Evaluator, EvaluatorConfig

DATA_DIR = Path(__file__).parent / "data"


@pytest.fixture(scope="session")
def data_dir() -> Path:
    return DATA_DIR


@pytest.fixture(scope="session")
def run_config(data_dir, tmp_path_factory) -> Path:
    """A copy of the bundled run config with absolute paths and a temp out dir."""
    out = tmp_path_factory.mktemp("run")
    cfg = json.loads((data_dir / "config.json").read_text())
    cfg["descriptors"] = [str(data_dir / p) for p in cfg["descriptors"]]
    cfg["profiles"] = [str(data_dir / p) for p in cfg["profiles"]]
    cfg["evaluator"]["table_path"] = str(data_dir / cfg["evaluator"]["table_path"])
    cfg["truth_path"] = str(data_dir / cfg["truth_path"])
    cfg["output_dir"] = str(out / "out")
    cfg["model_path"] = str(out / "out" / "model.json")
    path = out / "config.json"
    path.write_text(json.dumps(cfg, indent=2))
    return path


@pytest.fixture(scope="session")
def trained_out(run_config) -> Path:
    """Run config dir after `train-model` has produced model.json/tuning.json."""
    from netcut.cli import main

    rc = main(["train-model", "--config", str(run_config)])
    assert rc == 0
    out = json.loads(run_config.read_text())["output_dir"]
    return Path(out)


@pytest.fixture(scope="session")
def family(data_dir):
    """The bundled 7-network fixture family: (nets, tables, evaluator)."""
    cfg = json.loads((data_dir / "config.json").read_text())
    nets = {}
    for p in cfg["descriptors"]:
        net = load_descriptor(data_dir / p)
        nets[net.name] = net
    tables = {}
    for p in cfg["profiles"]:
        obj = json.loads((data_dir / p).read_text())
        tables[obj["network"]] = load_profile(data_dir / p, nets[obj["network"]])
    evaluator = Evaluator(
        EvaluatorConfig(backend="table", table_path=str(data_dir / "accuracy.csv"))
    )
    return nets, tables, evaluator

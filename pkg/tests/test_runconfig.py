import json
import logging
import math
import os

import pytest

from selfsim.errors import ConfigError
from selfsim.logger import configure_logging
from selfsim.output import sanitize, to_json, write_csv
from selfsim.runconfig import load_run_config, parse_key_values

REFERENCE = os.path.join(os.path.dirname(__file__), "..", "configs", "born_infeld_reference.cfg")


def test_parse_key_values():
    values = parse_key_values("# comment\nequation = born-infeld\n\nfamily=log # inline\n")
    assert values == {"equation": "born-infeld", "family": "log"}


@pytest.mark.parametrize("text, line", [
    ("equation = born-infeld\nfamily", 2),
    ("= log", 1),
    ("equation = born-infeld\nspeed = 3", 2),
    ("k = 1\nk = 2", 2),
])
def test_parse_errors_name_the_line(text, line):
    with pytest.raises(ConfigError) as excinfo:
        parse_key_values(text)
    assert excinfo.value.line == line
    assert str(excinfo.value).startswith(f"line {line}:")


def test_overrides_win(tmp_path):
    path = tmp_path / "run.cfg"
    path.write_text("equation = born-infeld\nfamily = log\nn = 200\n")
    cfg = load_run_config(str(path), {"n": 400, "t_end": None})
    assert cfg.n == 400
    assert cfg.lo == -0.75
    assert cfg.evolution_config().T_blowup_hint == cfg.T


def test_invalid_values_become_config_errors(tmp_path):
    path = tmp_path / "run.cfg"
    path.write_text("equation = membrane\nfamily = log\n")
    with pytest.raises(ConfigError):
        load_run_config(str(path))
    with pytest.raises(ConfigError):
        load_run_config(None, {"equation": "born-infeld", "family": "log", "fit_lo": 0.5})


def test_reference_config_loads():
    cfg = load_run_config(REFERENCE)
    assert cfg.family == "log"
    assert cfg.excision_rho == 0.5
    assert (cfg.lo, cfg.hi) == (-0.5, 0.5)
    assert cfg.edge_data == "exact"
    with pytest.raises(ConfigError):
        load_run_config(REFERENCE, {"edge_data": "mirror"})


def test_third_party_loggers_are_quieted():
    configure_logging()
    assert logging.getLogger("dotenv").level == logging.ERROR


def test_json_replaces_non_finite_values():
    data = {"a": float("nan"), "b": [1.0, float("inf")], "c": "text"}
    assert sanitize(data)["a"] == {"value": None, "reason": "nan"}
    decoded = json.loads(to_json(data))
    assert decoded["b"][1] == {"value": None, "reason": "+inf"}
    assert decoded["c"] == "text"


def test_csv_round_trips_full_precision(tmp_path):
    path = write_csv(str(tmp_path / "out" / "table.csv"), ["x", "y"], [(0.1, math.pi)])
    lines = open(path).read().splitlines()
    assert lines[0] == "x,y"
    assert float(lines[1].split(",")[1]) == math.pi
    with pytest.raises(ValueError):
        write_csv(str(tmp_path / "bad.csv"), ["x"], [(1.0, 2.0)])

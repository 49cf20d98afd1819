import json

import pytest

from timesmn import __version__, acceptance
from timesmn.cli import main
from timesmn.config import DEFAULTS, load_config_text, parse_config
from timesmn.errors import ConfigError
from timesmn.measures import fourier_1d, make_beta


def write(tmp_path, cfg, name="cfg.json"):
    p = tmp_path / name
    p.write_text(json.dumps(cfg) if isinstance(cfg, dict) else cfg, encoding="utf-8")
    return p


def test_defaults():
    cfg = parse_config({"kind": "fourier", "seed": 1, "measure": {"type": "beta", "m": 2}})
    assert (cfg.tol, cfg.F, cfg.G, cfg.r, cfg.window) == (1e-12, 8, 64, 2, 50)
    assert DEFAULTS["tol"] == cfg.tol


@pytest.mark.parametrize("raw, field", [
    ({"kind": "fourier", "measure": {"type": "beta", "m": 2}}, "seed"),
    ({"kind": "nope", "seed": 1, "measure": {"type": "beta", "m": 2}}, "kind"),
    ({"kind": "equidist", "seed": 1, "m": 2, "n": 3, "measure": {"type": "beta", "m": 2}}, "m"),
    ({"kind": "equidist", "seed": 1, "m": 3, "n": 2, "schedule": [10, 5], "measure": {"type": "beta", "m": 2}},
     "schedule"),
    ({"kind": "fourier", "seed": 1, "measure": {"type": "digit", "base": 2, "probs": ["1/2", "1/3"]}}, "probs"),
    ({"kind": "fourier", "seed": 1, "bogus": 3, "measure": {"type": "beta", "m": 2}}, "bogus"),
])
def test_validation_names_field(raw, field):
    with pytest.raises(ConfigError) as exc:
        parse_config(raw)
    assert exc.value.field == field and field in str(exc.value)


def test_config_round_trip():
    raw = {"kind": "equidist", "seed": 3, "m": 3, "n": 2, "schedule": [10, 20],
           "f": {"scale": "1/2", "offset": "1/4"}, "measure": {"type": "beta", "m": 2}}
    cfg = parse_config(raw)
    echo = cfg.to_dict()
    echo = {k: v for k, v in echo.items() if v is not None}
    assert parse_config(json.loads(json.dumps(echo))) == cfg


def test_cli_fourier(tmp_path, capsys):
    out = tmp_path / "run" / "fourier.json"
    text = json.dumps({"kind": "fourier", "seed": 0, "measure": {"type": "beta", "m": 2}, "output": str(out)})
    assert main(["run", str(write(tmp_path, text))]) == 0
    record = json.loads(out.read_text())
    assert record["config_text"] == text and record["version"] == __version__ and record["kind"] == "fourier"
    table = record["payload"]["coefficients"]
    assert len(table) == 17
    re, im = table["3"]
    assert abs(complex(re, im) - fourier_1d(make_beta(2), 3)) < 1e-12
    assert out.with_suffix(".csv").read_text().startswith("k,re,im")
    assert "fourier" in capsys.readouterr().out


def test_cli_bad_probs_exit_2(tmp_path, capsys):
    cfg = {"kind": "fourier", "seed": 0, "measure": {"type": "digit", "base": 2, "probs": ["1/3", "1/3"]}}
    assert main(["run", str(write(tmp_path, cfg))]) == 2
    assert "probs" in capsys.readouterr().err


def test_cli_invalid_json_exit_2(tmp_path):
    assert main(["run", str(write(tmp_path, "{not json"))]) == 2


def test_cli_runtime_error_exit_3(tmp_path, capsys):
    # 1-D fourier of a push-forward that leaves the integer lattice
    cfg = {"kind": "fourier", "seed": 0, "F": 2, "measure": {"type": "affine", "child": {"type": "beta", "m": 2},
                                                            "scale": "1/2", "offset": "1/4"}}
    assert main(["run", str(write(tmp_path, cfg))]) == 3
    assert "UnsupportedExactError" in capsys.readouterr().err


def test_cli_payload_deterministic(tmp_path):
    outs = []
    for i in range(2):
        out = tmp_path / f"r{i}.json"
        cfg = {"kind": "equidist", "seed": 4, "m": 3, "n": 2, "ensemble": 2, "schedule": [50, 200], "F": 3,
               "measure": {"type": "beta", "m": 2}, "output": str(out)}
        assert main(["run", str(write(tmp_path, cfg, f"c{i}.json"))]) == 0
        rec = json.loads(out.read_text())
        outs.append(json.dumps(rec["payload"], sort_keys=True))
    assert outs[0] == outs[1]


@pytest.mark.parametrize("cfg", [
    {"kind": "dimension", "seed": 0, "measure": {"type": "beta", "m": 2}},
    {"kind": "convdim", "seed": 0, "q_max": 3, "levels": [4], "measure": {"type": "beta", "m": 2}},
    {"kind": "density", "seed": 0, "m": 3, "n": 2, "ensemble": 2, "K": 60, "D": ["1/4", "3/4"],
     "measure": {"type": "beta", "m": 2}},
    {"kind": "scenery", "seed": 0, "ensemble": 1, "W": 20, "measure": {"type": "beta", "m": 2}},
])
def test_cli_other_kinds(tmp_path, cfg):
    out = tmp_path / "o.json"
    cfg = dict(cfg, output=str(out))
    assert main(["run", str(write(tmp_path, cfg))]) == 0
    assert json.loads(out.read_text())["kind"] == cfg["kind"]


def test_print_schema(capsys):
    assert main(["print-schema"]) == 0
    schema = json.loads(capsys.readouterr().out)
    assert "measure" in schema["fields"] and schema["defaults"]["F"] == 8


def test_load_config_text_error():
    with pytest.raises(ConfigError) as exc:
        load_config_text("[1, 2")
    assert exc.value.field == "config"


@pytest.mark.parametrize("name, value, number", [
    ("DIMENSION_TOL", 0.0, 4),
    ("CONV_IDENTITY_TOL", 0.0, 2),
    ("ALPHA_FLOOR", 1.0, 3),
])
def test_tampered_tolerance_fails_named_criterion(monkeypatch, name, value, number):
    assert acceptance.run_criterion(number).passed
    monkeypatch.setattr(acceptance, name, value)
    assert not acceptance.run_criterion(number).passed

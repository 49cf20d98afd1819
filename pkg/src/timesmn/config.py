"""Experiment configuration: parsing, validation and defaults.

Every tolerance and cutoff lives here once; the pipelines read them from the
parsed config.
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field
from typing import Any

from .errors import ConfigError, InvalidMeasureError
from .measures import MeasureExpr, measure_from_dict, measure_to_dict
from .orbits import AffineMap

KINDS = ("equidist", "fourier", "dimension", "scenery", "density", "convdim")

DEFAULTS: dict[str, Any] = {
    "tol": 1e-12,
    "F": 8,
    "G": 64,
    "r": 2,
    "window": 50,
    "W": 500,
    "K": 200,
    "ensemble": 20,
    "schedule": [5000, 20000],
    "case": "part1",
    "q_max": 4,
    "levels": [6, 8],
    "t0": {"log_base": 2},
}

SCHEMA: dict[str, Any] = {
    "kind": {"type": "string", "enum": list(KINDS), "required": True},
    "seed": {"type": "integer", "required": True, "doc": "master seed; point i uses SeedSequence([seed, i])"},
    "measure": {"type": "object", "required": True,
                "doc": "measure JSON, e.g. {\"type\":\"digit\",\"base\":2,\"probs\":[\"1/3\",\"2/3\"]}"},
    "m": {"type": "integer", "doc": "first-coordinate factor (equidist, density)"},
    "n": {"type": "integer", "doc": "second-coordinate factor, m > n > 1"},
    "p": {"type": "integer", "doc": "base of mu; defaults to the measure's digit base"},
    "case": {"type": "string", "enum": ["part1", "part2"], "default": DEFAULTS["case"]},
    "f": {"type": "object", "doc": "affine map {\"scale\":\"1/2\",\"offset\":\"1/4\"}; default identity"},
    "g": {"type": "object", "doc": "affine map; default identity"},
    "schedule": {"type": "array", "items": "integer", "default": DEFAULTS["schedule"]},
    "ensemble": {"type": "integer", "default": DEFAULTS["ensemble"]},
    "F": {"type": "integer", "default": DEFAULTS["F"]},
    "G": {"type": "integer", "default": DEFAULTS["G"]},
    "r": {"type": "integer", "default": DEFAULTS["r"]},
    "K": {"type": "integer", "default": DEFAULTS["K"], "doc": "max index for density experiments"},
    "window": {"type": "integer", "default": DEFAULTS["window"]},
    "W": {"type": "integer", "default": DEFAULTS["W"], "doc": "stationarity window length"},
    "k_max": {"type": "integer", "doc": "scenery steps; default 2*W + 64"},
    "t0": {"type": ["number", "object"], "default": DEFAULTS["t0"],
           "doc": "scenery time step; {\"log_base\": b} means exactly log b"},
    "q_max": {"type": "integer", "default": DEFAULTS["q_max"]},
    "levels": {"type": "array", "items": "integer", "default": DEFAULTS["levels"]},
    "D": {"type": "array", "items": "rational", "doc": "interval for boundary-proximity density"},
    "tol": {"type": "number", "default": DEFAULTS["tol"]},
    "output": {"type": "string", "doc": "path of the JSON run record; CSV goes next to it"},
}


@dataclass
class ExperimentConfig:
    kind: str
    seed: int
    measure: MeasureExpr
    m: int | None = None
    n: int | None = None
    p: int | None = None
    case: str = DEFAULTS["case"]
    f: AffineMap = field(default_factory=AffineMap.identity)
    g: AffineMap = field(default_factory=AffineMap.identity)
    schedule: list[int] = field(default_factory=lambda: list(DEFAULTS["schedule"]))
    ensemble: int = DEFAULTS["ensemble"]
    F: int = DEFAULTS["F"]
    G: int = DEFAULTS["G"]
    r: int = DEFAULTS["r"]
    K: int = DEFAULTS["K"]
    window: int = DEFAULTS["window"]
    W: int = DEFAULTS["W"]
    k_max: int | None = None
    t0: Any = field(default_factory=lambda: dict(DEFAULTS["t0"]))
    q_max: int = DEFAULTS["q_max"]
    levels: list[int] = field(default_factory=lambda: list(DEFAULTS["levels"]))
    D: list[str] | None = None
    tol: float = DEFAULTS["tol"]
    output: str | None = None

    def to_dict(self) -> dict:
        d = asdict(self)
        d["measure"] = measure_to_dict(self.measure)
        d["f"] = self.f.to_dict()
        d["g"] = self.g.to_dict()
        return d


def _int(raw: dict, key: str, default=None, minimum: int | None = None) -> int | None:
    if key not in raw:
        return default
    v = raw[key]
    if isinstance(v, bool) or not isinstance(v, int):
        raise ConfigError(f"{key}: expected an integer, got {v!r}", key)
    if minimum is not None and v < minimum:
        raise ConfigError(f"{key}: must be at least {minimum}, got {v}", key)
    return v


def parse_config(raw: dict) -> ExperimentConfig:
    """Validate a decoded JSON config; raises :class:`ConfigError` naming the field."""
    if not isinstance(raw, dict):
        raise ConfigError("config must be a JSON object", "config")
    unknown = set(raw) - set(SCHEMA)
    if unknown:
        key = sorted(unknown)[0]
        raise ConfigError(f"{key}: unknown config field", key)
    kind = raw.get("kind")
    if kind not in KINDS:
        raise ConfigError(f"kind: expected one of {', '.join(KINDS)}, got {kind!r}", "kind")
    if "seed" not in raw:
        raise ConfigError("seed: a master seed is required", "seed")
    seed = _int(raw, "seed")
    if "measure" not in raw:
        raise ConfigError("measure: required", "measure")
    try:
        measure = measure_from_dict(raw["measure"])
    except InvalidMeasureError as exc:
        raise ConfigError(str(exc), exc.field or "measure") from exc
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"measure: {exc}", "measure") from exc

    cfg = ExperimentConfig(kind=kind, seed=seed, measure=measure)
    cfg.m = _int(raw, "m", minimum=2)
    cfg.n = _int(raw, "n", minimum=2)
    cfg.p = _int(raw, "p", getattr(measure, "base", None), minimum=2)
    cfg.ensemble = _int(raw, "ensemble", cfg.ensemble, minimum=1)
    cfg.F = _int(raw, "F", cfg.F, minimum=1)
    cfg.G = _int(raw, "G", cfg.G, minimum=1)
    cfg.r = _int(raw, "r", cfg.r, minimum=1)
    cfg.K = _int(raw, "K", cfg.K, minimum=0)
    cfg.window = _int(raw, "window", cfg.window, minimum=1)
    cfg.W = _int(raw, "W", cfg.W, minimum=1)
    cfg.k_max = _int(raw, "k_max", None, minimum=0)
    cfg.q_max = _int(raw, "q_max", cfg.q_max, minimum=1)

    if "case" in raw:
        if raw["case"] not in ("part1", "part2"):
            raise ConfigError(f"case: expected 'part1' or 'part2', got {raw['case']!r}", "case")
        cfg.case = raw["case"]
    for key in ("f", "g"):
        if key in raw:
            try:
                setattr(cfg, key, AffineMap.from_dict(raw[key]))
            except (ValueError, AttributeError, InvalidMeasureError) as exc:
                raise ConfigError(f"{key}: {exc}", key) from exc
    if "schedule" in raw:
        sched = raw["schedule"]
        if (not isinstance(sched, list) or not sched
                or not all(isinstance(v, int) and not isinstance(v, bool) and v > 0 for v in sched)):
            raise ConfigError("schedule: expected a non-empty list of positive integers", "schedule")
        if any(b <= a for a, b in zip(sched, sched[1:])):
            raise ConfigError("schedule: must be strictly increasing", "schedule")
        cfg.schedule = list(sched)
    if "levels" in raw:
        lv = raw["levels"]
        if not isinstance(lv, list) or not lv or not all(isinstance(v, int) and v >= 1 for v in lv):
            raise ConfigError("levels: expected a non-empty list of positive integers", "levels")
        cfg.levels = list(lv)
    if "t0" in raw:
        t0 = raw["t0"]
        ok = (isinstance(t0, dict) and set(t0) == {"log_base"} and isinstance(t0["log_base"], int)
              and t0["log_base"] >= 2) or (isinstance(t0, (int, float)) and not isinstance(t0, bool) and t0 > 0)
        if not ok:
            raise ConfigError("t0: expected a positive number or {\"log_base\": b}", "t0")
        cfg.t0 = t0
    if "D" in raw:
        D = raw["D"]
        if not isinstance(D, list) or len(D) != 2:
            raise ConfigError("D: expected [a, b] with rational endpoints", "D")
        cfg.D = D
    if "tol" in raw:
        tol = raw["tol"]
        if isinstance(tol, bool) or not isinstance(tol, (int, float)) or tol <= 0:
            raise ConfigError("tol: expected a positive number", "tol")
        cfg.tol = float(tol)
    if "output" in raw:
        if not isinstance(raw["output"], str):
            raise ConfigError("output: expected a path string", "output")
        cfg.output = raw["output"]

    _check_kind(cfg)
    return cfg


def _check_kind(cfg: ExperimentConfig) -> None:
    if cfg.kind in ("equidist", "density"):
        if cfg.m is None or cfg.n is None:
            raise ConfigError(f"{'m' if cfg.m is None else 'n'}: required for {cfg.kind}", "m" if cfg.m is None else "n")
        if not cfg.m > cfg.n > 1:
            raise ConfigError(f"m: requires m > n > 1, got m={cfg.m}, n={cfg.n}", "m")
    if cfg.kind in ("equidist", "scenery", "density") and cfg.measure.dim != 1:
        raise ConfigError("measure: must be a 1-D measure", "measure")
    if cfg.kind in ("dimension", "convdim") and type(cfg.measure).__name__ != "Digit":
        raise ConfigError("measure: must be a digit measure", "measure")


def load_config_text(text: str) -> ExperimentConfig:
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config: invalid JSON ({exc.msg} at line {exc.lineno})", "config") from exc
    return parse_config(raw)

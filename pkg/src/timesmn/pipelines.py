"""One pipeline per experiment kind: config in, JSON-ready payload (and CSV) out."""

from __future__ import annotations

import csv
import io
import math
import statistics

from .config import ExperimentConfig
from .convdim import convolution_growth, discretize, coarse_dimension, growth_csv
from .density import a_k_density, boundary_proximity_density
from .equidist import convergence_report
from .exact_num import required_precision
from .measures import Digit, entropy, fourier_1d, fourier_2d, sample
from .scenery import LogScale, non_uniform_fraction, scenery_series, stationarity_gap
from .seeding import point_rng


def _complex(z: complex) -> list[float]:
    return [float(z.real), float(z.imag)]


def run_equidist(cfg: ExperimentConfig) -> tuple[dict, str]:
    mu = cfg.measure
    if not isinstance(mu, Digit):
        raise ValueError("equidist needs a digit measure to sample typical points")
    K = required_precision(cfg.schedule[-1], max(cfg.m, cfg.n), mu.base)
    xs = [sample(mu, point_rng(cfg.seed, i), K) for i in range(cfg.ensemble)]
    report = convergence_report(xs, cfg.f, cfg.g, cfg.m, cfg.n, mu, cfg.case, cfg.schedule, cfg.F, cfg.G, cfg.tol)
    return report.to_dict(), report.to_csv()


def run_fourier(cfg: ExperimentConfig) -> tuple[dict, str]:
    mu, F = cfg.measure, cfg.F
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    if mu.dim == 1:
        table = {str(k): _complex(fourier_1d(mu, k, cfg.tol)) for k in range(-F, F + 1)}
        w.writerow(["k", "re", "im"])
        for k, (re, im) in table.items():
            w.writerow([k, repr(re), repr(im)])
    else:
        table = {f"{k},{j}": _complex(fourier_2d(mu, k, j, cfg.tol))
                 for k in range(-F, F + 1) for j in range(-F, F + 1)}
        w.writerow(["k", "j", "re", "im"])
        for key, (re, im) in table.items():
            w.writerow(key.split(",") + [repr(re), repr(im)])
    return {"F": F, "tol": cfg.tol, "coefficients": table}, buf.getvalue()


def run_dimension(cfg: ExperimentConfig) -> tuple[dict, str]:
    mu = cfg.measure
    h = entropy(mu.probs)
    rows = [(k, coarse_dimension(discretize(mu, k))) for k in cfg.levels]
    payload = {
        "entropy_nats": h,
        "dimension": h / math.log(mu.base),
        "coarse_dimension": {str(k): d for k, d in rows},
        "entropy_unit": "nats",
    }
    return payload, growth_csv([(1, k, d) for k, d in rows])


def _scenery_t0(cfg: ExperimentConfig):
    if isinstance(cfg.t0, dict):
        return LogScale(cfg.t0["log_base"])
    return float(cfg.t0)


def run_scenery(cfg: ExperimentConfig) -> tuple[dict, str]:
    mu = cfg.measure
    k_max = cfg.k_max if cfg.k_max is not None else 2 * cfg.W + 64
    t0 = _scenery_t0(cfg)
    digits = k_max + cfg.r + 64
    if not isinstance(t0, LogScale) and isinstance(mu, Digit):
        digits = math.ceil(k_max * float(t0) / math.log(mu.base)) + cfg.r + 64
    points = []
    buf = io.StringIO()
    for i in range(cfg.ensemble):
        x = sample(mu, point_rng(cfg.seed, i), digits)
        series = scenery_series(mu, x, t0, k_max, cfg.r)
        gap = stationarity_gap(series, cfg.W) if len(series) >= 2 * cfg.W else None
        points.append({
            "point_id": i,
            "samples": len(series),
            "skipped": series.skipped,
            "stationarity_gap": gap,
            "non_uniform_fraction": non_uniform_fraction(series),
        })
        text = series.to_csv()
        lines = text.splitlines()
        if i == 0:
            buf.write("point_id," + lines[0] + "\n")
        for line in lines[1:]:
            buf.write(f"{i},{line}\n")
    gaps = [p["stationarity_gap"] for p in points if p["stationarity_gap"] is not None]
    payload = {
        "k_max": k_max,
        "r": cfg.r,
        "W": cfg.W,
        "t0": cfg.t0,
        "points": points,
        "median_gap": statistics.median(gaps) if gaps else None,
    }
    return payload, buf.getvalue()


def run_density(cfg: ExperimentConfig) -> tuple[dict, str]:
    reports = [a_k_density(cfg.measure, cfg.m, cfg.n, cfg.K, (cfg.seed, i), cfg.window)
               for i in range(cfg.ensemble)]
    decreasing = [r.windows[-1][1] < r.windows[0][1] for r in reports if r.windows]
    payload = {
        "K": cfg.K,
        "window": cfg.window,
        "reports": [r.to_dict() for r in reports],
        "fraction_decreasing": sum(decreasing) / len(decreasing) if decreasing else None,
    }
    if cfg.D is not None:
        prox = []
        for i in range(cfg.ensemble):
            x = sample(cfg.measure, point_rng(cfg.seed, i), required_precision(cfg.K, cfg.n, getattr(cfg.measure, "base", 2)))
            prox.append(boundary_proximity_density(x, cfg.n, cfg.m, tuple(cfg.D), cfg.K, cfg.window).to_dict())
        payload["boundary_proximity"] = prox
    buf = io.StringIO()
    buf.write("point_id,window_start,density\n")
    for i, r in enumerate(reports):
        for start, frac in r.windows:
            buf.write(f"{i},{start},{frac!r}\n")
    return payload, buf.getvalue()


def run_convdim(cfg: ExperimentConfig) -> tuple[dict, str]:
    rows = []
    growth = {}
    for k in cfg.levels:
        dims = convolution_growth(cfg.measure, cfg.q_max, k)
        growth[str(k)] = dims
        rows.extend((q, k, d) for q, d in enumerate(dims, start=1))
    return {"q_max": cfg.q_max, "growth": growth}, growth_csv(rows)


PIPELINES = {
    "equidist": run_equidist,
    "fourier": run_fourier,
    "dimension": run_dimension,
    "scenery": run_scenery,
    "density": run_density,
    "convdim": run_convdim,
}


def run_experiment(cfg: ExperimentConfig) -> tuple[dict, str]:
    return PIPELINES[cfg.kind](cfg)

"""Run configuration, orchestration, and report emission.

A RunConfig pins everything that determines the numbers (model, angle,
sample count, seed, analysis parameters), so identical configs yield
identical reports apart from timestamps and wall-clock timings.  Reports
serialize to canonical JSON; CSV emission produces one file per result
table plus the CF curve data for plotting.
"""

from __future__ import annotations

import json
import math
import os
import platform
import time
from contextlib import contextmanager
from dataclasses import dataclass, field

import numpy as np

from . import __version__
from .cf import cf_scan, significance
from .errors import AnalysisError, PdsqError
from .matrices import bootstrap_min_eig_table, build_matrix, min_eig_dense
from .moments import hong_mandel_q
from .numerics import double_factorial
from .sampler import sample_quadratures
from .states import (StateModel, analytic_central_moment,
                     analytic_normally_ordered_moment, effective_variance)
from .witness import certify, verify_bound

__all__ = [
    "ANALYSES",
    "CATALOG_SEEDS",
    "RunConfig",
    "Report",
    "thread_cap",
    "noise_label",
    "analyze_dataset",
    "run",
    "run_catalog",
    "emit",
]

ANALYSES = ("cf", "moments", "matrices", "witness")
CATALOG_SEEDS = (7, 8, 9, 10, 11)
_WITNESS_BETAS = np.arange(1, 13) * 0.5


def thread_cap():
    """Worker-thread cap from PDSQ_THREADS; defaults to 1."""
    raw = os.environ.get("PDSQ_THREADS", "").strip()
    if not raw:
        return 1
    try:
        cap = int(raw)
    except ValueError:
        raise ValueError(f"PDSQ_THREADS must be a positive integer, got {raw!r}")
    if cap < 1:
        raise ValueError(f"PDSQ_THREADS must be a positive integer, got {raw!r}")
    return cap


def noise_label(noise):
    """Catalog-style label: Gaussian width in degrees, 'inf' for uniform."""
    if noise.kind == "delta":
        return "0.0"
    if noise.kind == "uniform":
        return "inf"
    return f"{math.degrees(noise.sigma):g}"


@dataclass(frozen=True)
class RunConfig:
    """Everything that determines a run's numbers, in one hashable record."""

    model: StateModel
    theta: float = 0.0
    n: int = 10_000_000
    seed: int = 0
    analyses: frozenset = frozenset(ANALYSES)
    grid_max: float = 4.0
    grid_points: int = 200
    max_order: int = 10
    dims: tuple = tuple(range(2, 11))
    replicates: int = 100
    threshold: float = 10.0
    output_dir: str | None = None

    def __post_init__(self):
        if not isinstance(self.model, StateModel):
            raise TypeError("model must be a StateModel")
        object.__setattr__(self, "theta", float(self.theta))
        if not math.isfinite(self.theta):
            raise ValueError("theta must be finite")
        object.__setattr__(self, "n", int(self.n))
        if self.n < 1:
            raise ValueError("n must be positive")
        object.__setattr__(self, "seed", int(self.seed))
        analyses = frozenset(self.analyses)
        unknown = analyses - set(ANALYSES)
        if unknown:
            raise ValueError(f"unknown analyses: {sorted(unknown)}")
        object.__setattr__(self, "analyses", analyses)
        object.__setattr__(self, "grid_max", float(self.grid_max))
        if not self.grid_max > 0.0:
            raise ValueError("grid_max must be positive")
        object.__setattr__(self, "grid_points", int(self.grid_points))
        if self.grid_points < 2:
            raise ValueError("grid_points must be at least 2")
        object.__setattr__(self, "max_order", int(self.max_order))
        if self.max_order < 2 or self.max_order % 2:
            raise ValueError("max_order must be an even integer >= 2")
        if self.max_order > 20:
            raise ValueError("max_order must be at most 20")
        dims = tuple(int(d) for d in self.dims)
        if not dims or any(d < 1 for d in dims):
            raise ValueError("dims must be a nonempty tuple of positive integers")
        object.__setattr__(self, "dims", dims)
        object.__setattr__(self, "replicates", int(self.replicates))
        if self.replicates < 2:
            raise ValueError("replicates must be at least 2")
        object.__setattr__(self, "threshold", float(self.threshold))
        if not self.threshold > 0.0:
            raise ValueError("threshold must be positive")
        if self.output_dir is not None:
            object.__setattr__(self, "output_dir", str(self.output_dir))

    def to_dict(self):
        return {
            "model": self.model.to_dict(),
            "theta": self.theta,
            "n": self.n,
            "seed": self.seed,
            "analyses": sorted(self.analyses),
            "grid": {"max": self.grid_max, "points": self.grid_points},
            "orders": {"max": self.max_order},
            "dims": list(self.dims),
            "replicates": self.replicates,
            "threshold": self.threshold,
            "output_dir": self.output_dir,
        }

    def to_json(self):
        return json.dumps(self.to_dict(), sort_keys=True, indent=2) + "\n"

    @classmethod
    def from_dict(cls, d):
        return cls(
            model=StateModel.from_dict(d["model"]),
            theta=d["theta"],
            n=d["n"],
            seed=d["seed"],
            analyses=frozenset(d["analyses"]),
            grid_max=d["grid"]["max"],
            grid_points=d["grid"]["points"],
            max_order=d["orders"]["max"],
            dims=tuple(d["dims"]),
            replicates=d["replicates"],
            threshold=d["threshold"],
            output_dir=d.get("output_dir"),
        )

    @classmethod
    def from_json(cls, text):
        return cls.from_dict(json.loads(text))


@dataclass
class Report:
    """Result blocks plus the config echo, versions, and timings."""

    config: dict
    results: dict
    versions: dict = field(default_factory=dict)
    timings: dict = field(default_factory=dict)

    def to_dict(self):
        return {
            "config": self.config,
            "results": self.results,
            "versions": self.versions,
            "timings": self.timings,
        }

    def to_json(self):
        return json.dumps(self.to_dict(), sort_keys=True, indent=2) + "\n"

    def write_json(self, path):
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(self.to_json())


@contextmanager
def _stage_context(stage):
    """Tag module errors with the analysis stage that raised them."""
    try:
        yield
    except PdsqError as exc:
        raise type(exc)(f"{stage} analysis: {exc}") from exc


def _versions():
    import numba
    import scipy

    return {
        "pdsq": __version__,
        "python": platform.python_version(),
        "numpy": np.__version__,
        "scipy": scipy.__version__,
        "numba": numba.__version__,
    }


def _oracle_q(model, orders):
    out = []
    for k in orders:
        moment = analytic_central_moment(model, int(k))
        out.append(moment / float(double_factorial(int(k) - 1)) - 1.0)
    return out


def _oracle_lambda(model, dims):
    kmax = 2 * max(dims) - 2
    moments = np.array(
        [analytic_normally_ordered_moment(model, k) for k in range(kmax + 1)]
    )
    return [float(min_eig_dense(build_matrix(moments, d))) for d in dims]


def analyze_dataset(data, analyses, model=None, *, grid_max=4.0, grid_points=200,
                    max_order=10, dims=tuple(range(2, 11)), replicates=100,
                    threshold=10.0, seed=0, workers=1):
    """Run the selected analyses on one dataset.

    model enables the analytic-oracle columns and the witness block; without
    it the witness analysis is unavailable (it certifies a model, not data).
    Returns (results, timings).
    """
    analyses = frozenset(analyses)
    unknown = analyses - set(ANALYSES)
    if unknown:
        raise ValueError(f"unknown analyses: {sorted(unknown)}")
    if "witness" in analyses and model is None:
        raise AnalysisError("witness analysis requires a state model")
    results = {}
    timings = {}

    x = data.samples
    m2 = float(x.var())
    m4 = float(np.mean((x - x.mean()) ** 4))
    summary = {
        "n": int(x.size),
        "theta": float(data.theta),
        "sample_variance": m2,
        "sample_variance_se": math.sqrt(max(m4 - m2 * m2, 0.0) / x.size),
    }
    if model is not None:
        summary["v_eff"] = float(effective_variance(model))
    results["summary"] = summary

    if "cf" in analyses:
        t0 = time.perf_counter()
        with _stage_context("cf"):
            grid = np.linspace(0.0, grid_max, grid_points)
            curve = cf_scan(data, grid, workers=workers)
            sig = significance(curve, threshold)
        results["cf"] = {
            "grid": {"max": grid_max, "points": grid_points},
            "points": [
                {"beta": b, "re": re, "im": im, "abs": ab, "sigma": sg}
                for b, re, im, ab, sg in curve.to_rows()
            ],
            "significance": sig.to_dict(),
        }
        timings["cf"] = time.perf_counter() - t0

    if "moments" in analyses:
        t0 = time.perf_counter()
        with _stage_context("moments"):
            degrees = hong_mandel_q(data, max_order // 2,
                                    replicates=replicates, seed=seed,
                                    workers=workers)
        block = {
            "orders": [int(k) for k in degrees.orders],
            "q": [float(v) for v in degrees.q],
            "sigma": [float(s) for s in degrees.sigma],
            "replicates": degrees.replicates,
        }
        if model is not None:
            block["oracle"] = _oracle_q(model, degrees.orders)
        results["moments"] = block
        timings["moments"] = time.perf_counter() - t0

    if "matrices" in analyses:
        t0 = time.perf_counter()
        with _stage_context("matrices"):
            table = bootstrap_min_eig_table(data, list(dims),
                                            replicates=replicates, seed=seed,
                                            workers=workers)
        block = {
            "dims": [r.dim for r in table],
            "lambda_min": [r.lambda_min for r in table],
            "sigma": [r.sigma for r in table],
            "replicates": replicates,
            "method": "empirical-resample",
        }
        if model is not None:
            block["oracle"] = _oracle_lambda(model, list(dims))
        results["matrices"] = block
        timings["matrices"] = time.perf_counter() - t0

    if "witness" in analyses:
        t0 = time.perf_counter()
        with _stage_context("witness"):
            cert = certify(model)
            ver = verify_bound(model, cert, _WITNESS_BETAS)
            finer = certify(model, order=cert.n + 1)
            ver_finer = verify_bound(model, finer, _WITNESS_BETAS)
        results["witness"] = {
            "certificate": cert.to_dict(),
            "verification": ver.to_dict()["points"],
            "next_order": {
                "certificate": finer.to_dict(),
                "verification": ver_finer.to_dict()["points"],
            },
        }
        timings["witness"] = time.perf_counter() - t0

    return results, timings


def run(config, workers=None):
    """Simulate per the config, run its analyses, and assemble the Report."""
    if not isinstance(config, RunConfig):
        raise TypeError("config must be a RunConfig")
    if workers is None:
        workers = thread_cap()
    timings = {}
    results = {}
    total0 = time.perf_counter()
    if config.analyses:
        t0 = time.perf_counter()
        data = sample_quadratures(config.model, config.theta, config.n,
                                  config.seed)
        timings["simulate"] = time.perf_counter() - t0
        results, stage_timings = analyze_dataset(
            data, config.analyses, model=config.model,
            grid_max=config.grid_max, grid_points=config.grid_points,
            max_order=config.max_order, dims=config.dims,
            replicates=config.replicates, threshold=config.threshold,
            seed=config.seed, workers=workers,
        )
        timings.update(stage_timings)
    timings["total"] = time.perf_counter() - total0
    return Report(config=config.to_dict(), results=results,
                  versions=_versions(), timings=timings)


def catalog_configs(n=10_000_000, seeds=CATALOG_SEEDS, **overrides):
    """The five reference states, one seed each, as RunConfigs."""
    from .states import PhaseNoise, SqueezingParams

    params = SqueezingParams(0.36, 5.28)
    noises = [
        PhaseNoise.delta(),
        PhaseNoise.gaussian(6.3, "deg"),
        PhaseNoise.gaussian(12.6, "deg"),
        PhaseNoise.gaussian(22.2, "deg"),
        PhaseNoise.uniform(),
    ]
    if len(seeds) != len(noises):
        raise ValueError(f"need {len(noises)} seeds, got {len(seeds)}")
    return [
        RunConfig(model=StateModel(params, noise), n=n, seed=seed, **overrides)
        for noise, seed in zip(noises, seeds)
    ]


def run_catalog(n=10_000_000, seeds=CATALOG_SEEDS, workers=None, **overrides):
    """Run every catalog state and gather the per-state results."""
    configs = catalog_configs(n=n, seeds=seeds, **overrides)
    states = {}
    timings = {}
    total0 = time.perf_counter()
    for config in configs:
        label = noise_label(config.model.noise)
        report = run(config, workers=workers)
        states[label] = report.results
        timings[label] = report.timings
    timings["total"] = time.perf_counter() - total0
    return Report(
        config={"catalog": [c.to_dict() for c in configs]},
        results={"states": states},
        versions=_versions(),
        timings=timings,
    )


def _fmt_uncertain(value, sigma):
    """The compact value(1±r%) style used in the result tables."""
    if value == 0.0:
        rel = "0" if sigma == 0.0 else "inf"
    else:
        rel = f"{abs(sigma / value) * 100.0:.0f}"
    return f"{value:.4f}(1±{rel}%)"


def _iter_states(report):
    results = report.results
    if "states" in results:
        return list(results["states"].items())
    label = "data"
    model = report.config.get("model")
    if model:
        label = noise_label(StateModel.from_dict(model).noise)
    return [(label, results)]


def _write_table1(states, path):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("sigma,v_eff,sample_variance,sample_variance_se,text\n")
        for label, res in states:
            s = res.get("summary")
            if not s:
                continue
            veff = repr(s["v_eff"]) if "v_eff" in s else ""
            fh.write(
                f"{label},{veff},{s['sample_variance']!r},"
                f"{s['sample_variance_se']!r},"
                f"{_fmt_uncertain(s['sample_variance'], s['sample_variance_se'])}\n"
            )


def _write_table2(states, path):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("sigma,order,q,q_sigma,oracle,text\n")
        for label, res in states:
            block = res.get("moments")
            if not block:
                continue
            oracle = block.get("oracle", [None] * len(block["orders"]))
            for k, order in enumerate(block["orders"]):
                q, sg = block["q"][k], block["sigma"][k]
                ora = "" if oracle[k] is None else repr(oracle[k])
                fh.write(f"{label},{order},{q!r},{sg!r},{ora},"
                         f"{_fmt_uncertain(q, sg)}\n")


def _write_table3(states, path):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("sigma,dim,lambda_min,lambda_sigma,oracle,method,text\n")
        for label, res in states:
            block = res.get("matrices")
            if not block:
                continue
            oracle = block.get("oracle", [None] * len(block["dims"]))
            for k, dim in enumerate(block["dims"]):
                lam, sg = block["lambda_min"][k], block["sigma"][k]
                ora = "" if oracle[k] is None else repr(oracle[k])
                fh.write(f"{label},{dim},{lam!r},{sg!r},{ora},"
                         f"{block['method']},{_fmt_uncertain(lam, sg)}\n")


def _write_curves(states, path):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("model,beta,abs,sigma\n")
        for label, res in states:
            block = res.get("cf")
            if not block:
                continue
            for point in block["points"]:
                fh.write(f"{label},{point['beta']!r},{point['abs']!r},"
                         f"{point['sigma']!r}\n")


def emit(report, fmt="json", out_dir="."):
    """Write a report to disk; returns the list of paths written.

    json: a single canonical report.json.  csv: one file per result table
    (only tables whose analyses ran are produced).
    """
    if not isinstance(report, Report):
        raise TypeError("report must be a Report")
    if fmt not in ("json", "csv"):
        raise ValueError("format must be 'json' or 'csv'")
    os.makedirs(out_dir, exist_ok=True)
    written = []
    if fmt == "json":
        path = os.path.join(out_dir, "report.json")
        report.write_json(path)
        return [path]
    states = _iter_states(report)
    tables = [
        ("table1.csv", _write_table1, "summary"),
        ("table2.csv", _write_table2, "moments"),
        ("table3.csv", _write_table3, "matrices"),
        ("cf_curves.csv", _write_curves, "cf"),
    ]
    for name, writer, key in tables:
        if not any(key in res for _, res in states):
            continue
        path = os.path.join(out_dir, name)
        writer(states, path)
        written.append(path)
    return written

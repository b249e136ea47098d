"""Config-driven experiment runner with seeded, bit-reproducible output.

An ExperimentConfig (JSON-serializable dataclass) names one of five
experiment kinds; run() executes it and returns an ExperimentReport whose
CSV rows and JSON sidecar are fully determined by (config, seed). All
randomness is drawn from streams keyed by (seed, kind, n, trial), so cells
can be evaluated in any order without changing a byte of the output.
"""

from __future__ import annotations

import dataclasses
import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

import numpy as np

from . import evolution as evo
from .linalg import as_matrix, mat_exp, op_norm
from .products import (BlockScheme, Permutation, choose_blocks, path_deviation,
                       uniform_permutation)
from .rows import (ArrayRow, RegimeSpec, gen_repeated, gen_riemann, gen_spiked,
                   gen_two_letter, row_stats, spiked_parameters)
from .tails import (block_bernstein_bound, block_deviation_samples, eps_grid,
                    lemma_random_bound)
from .words import random_word, tau, transposition_distance

PACKAGE_VERSION = "0.1.0"
SCHEMA_VERSION = 1

KINDS = ("converge", "tail", "regime", "words", "evolution")
_KIND_ID = {k: i + 1 for i, k in enumerate(KINDS)}

COLUMNS = {
    "converge": ["n", "trial", "k", "deviation", "deviation_target", "sup_dev", "slack"],
    "tail": ["n", "eps", "empirical_freq", "bernstein_bound", "lemma_bound", "trials"],
    "regime": ["n", "regime", "trial", "k_n", "linf", "l1", "norm_mean", "sup_dev", "slack"],
    "words": ["trial", "tau", "distance", "bound"],
    "evolution": ["n", "seed", "deviation"],
}

_NAMED_MATRICES = {
    "e12": [[0, 1], [0, 0]],
    "e21": [[0, 0], [1, 0]],
    "pauli_x": [[0, 1], [1, 0]],
    "pauli_z": [[1, 0], [0, -1]],
    "identity": [[1, 0], [0, 1]],
}


class ConfigError(ValueError):
    """Invalid experiment configuration; message carries field context."""


def parse_matrix(spec, what: str) -> np.ndarray:
    """A matrix given as a catalog name or nested lists of numbers / [re, im]."""
    if isinstance(spec, str):
        if spec not in _NAMED_MATRICES:
            raise ConfigError(f"{what}: unknown named matrix {spec!r}, "
                              f"expected one of {sorted(_NAMED_MATRICES)}")
        return as_matrix(_NAMED_MATRICES[spec], what)
    try:
        arr = np.asarray(spec, dtype=np.float64)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"{what}: cannot parse matrix: {exc}") from exc
    if arr.ndim == 3 and arr.shape[-1] == 2 and arr.shape[0] == arr.shape[1]:
        return as_matrix(arr[..., 0] + 1j * arr[..., 1], what)
    if arr.ndim == 2 and arr.shape[0] == arr.shape[1]:
        return as_matrix(arr, what)
    raise ConfigError(f"{what}: expected a square matrix of numbers or [re, im] pairs")


def _default_generator(kind: str) -> dict:
    if kind == "regime":
        return {"name": "spiked", "regime": "large_linf", "delta": 1.0}
    if kind == "words":
        return {"name": "multiset", "a": 5, "b": 8}
    if kind == "evolution":
        return {"name": "family", "fn": "step", "b": "e12", "c": "e21",
                "s": 0.0, "t": 1.0, "mode": "permuted"}
    return {"name": "two_letter", "b": "e12", "c": "e21", "order": "first_half_b"}


@dataclass
class ExperimentConfig:
    kind: str
    n_list: list[int] = field(default_factory=lambda: [1000])
    d: int = 2
    trials: int = 1
    seed: int = 0
    eps: float | None = None
    generator: dict = field(default_factory=dict)
    sigma_mode: str = "random"
    block_mode: str = "sqrt_default"
    out_path: str = "out.csv"
    target: Any = None

    def __post_init__(self):
        if not self.generator:
            self.generator = _default_generator(self.kind)
        self.validate()

    def validate(self) -> None:
        errors = []
        if self.kind not in KINDS:
            errors.append(f"kind: {self.kind!r} is not one of {KINDS}")
        if not self.n_list:
            errors.append("n_list: must be non-empty")
        elif any((not isinstance(n, int)) or n < 1 for n in self.n_list):
            errors.append(f"n_list: entries must be positive integers, got {self.n_list}")
        if not isinstance(self.trials, int) or self.trials < 1:
            errors.append(f"trials: must be >= 1, got {self.trials}")
        if not isinstance(self.seed, int) or self.seed < 0:
            errors.append(f"seed: must be a non-negative integer, got {self.seed}")
        if self.eps is not None and not self.eps > 0:
            errors.append(f"eps: must be positive when given, got {self.eps}")
        if self.sigma_mode not in ("random", "identity"):
            errors.append(f"sigma_mode: {self.sigma_mode!r} is not 'random' or 'identity'")
        if self.block_mode not in ("sqrt_default", "probability", "almost_sure"):
            errors.append(f"block_mode: unknown mode {self.block_mode!r}")
        if not isinstance(self.d, int) or self.d < 1:
            errors.append(f"d: must be a positive integer, got {self.d}")
        if not isinstance(self.generator, dict) or "name" not in self.generator:
            errors.append("generator: must be an object with a 'name' field")
        if not self.out_path:
            errors.append("out_path: must be non-empty")
        if errors:
            raise ConfigError("; ".join(errors))

    @classmethod
    def from_dict(cls, doc: dict) -> "ExperimentConfig":
        if not isinstance(doc, dict):
            raise ConfigError("config: expected a JSON object")
        known = {f.name for f in dataclasses.fields(cls)}
        unknown = set(doc) - known
        if unknown:
            raise ConfigError(f"unknown config fields: {sorted(unknown)}")
        if "kind" not in doc:
            raise ConfigError("kind: required field is missing")
        return cls(**doc)

    def to_dict(self) -> dict:
        return dataclasses.asdict(self)


@dataclass
class ExperimentReport:
    kind: str
    columns: list[str]
    csv_rows: list[list]
    records: list[dict]
    summary: dict
    provenance: dict


def _stream(*key: int) -> np.random.Generator:
    return np.random.default_rng(list(key))


def _quantiles(values) -> dict:
    arr = np.asarray(values, dtype=float)
    return {"p05": float(np.quantile(arr, 0.05)),
            "median": float(np.quantile(arr, 0.5)),
            "p95": float(np.quantile(arr, 0.95))}


def _build_family(gen: dict):
    name = gen.get("fn", "step")
    if name == "constant":
        return evo.constant_family(parse_matrix(gen.get("matrix", "pauli_x"), "generator.matrix"))
    if name == "linear_diagonal":
        return evo.linear_diagonal_family(gen.get("diag", [1.0, -1.0]))
    if name == "step":
        return evo.step_family(parse_matrix(gen.get("b", "e12"), "generator.b"),
                               parse_matrix(gen.get("c", "e21"), "generator.c"),
                               split=float(gen.get("split", 0.5)))
    if name == "rotation":
        return evo.rotation_family(scale=float(gen.get("scale", 1.0)))
    raise ConfigError(f"generator.fn: unknown family {name!r}, "
                      f"expected one of {sorted(evo.FAMILIES)}")


def _build_row(cfg: ExperimentConfig, n: int, rng: np.random.Generator) -> ArrayRow:
    gen = cfg.generator
    name = gen.get("name")
    if name == "two_letter":
        return gen_two_letter(n, parse_matrix(gen.get("b", "e12"), "generator.b"),
                              parse_matrix(gen.get("c", "e21"), "generator.c"),
                              order=gen.get("order", "first_half_b"),
                              unit_bound=bool(gen.get("unit_bound", False)))
    if name == "repeated":
        letters = [parse_matrix(m, f"generator.letters[{i}]")
                   for i, m in enumerate(gen.get("letters", ["e12", "e21"]))]
        return gen_repeated(letters, n, tail=gen.get("tail", "identity_fill"),
                            unit_bound=bool(gen.get("unit_bound", False)))
    if name == "constant":
        m = parse_matrix(gen.get("matrix", "pauli_x"), "generator.matrix")
        return gen_repeated([m], n)
    if name == "spiked":
        spec = _regime_spec(gen)
        return gen_spiked(n, spec, rng, d=cfg.d,
                          remainder=gen.get("remainder", "random_unit"),
                          fixed_direction=bool(gen.get("fixed_direction", False)))
    if name == "riemann":
        return gen_riemann(_build_family(gen), n, mode=gen.get("mode", "ordered"), seed=rng)
    raise ConfigError(f"generator.name: unknown generator {name!r}")


def _regime_spec(gen: dict) -> RegimeSpec:
    try:
        return RegimeSpec(regime=gen.get("regime", "large_linf"),
                          delta=float(gen.get("delta", 0.1)),
                          alpha=float(gen.get("alpha", 0.5)),
                          beta=float(gen.get("beta", 0.0)),
                          t=float(gen.get("t", 1.0)),
                          linf=(float(gen["linf"]) if gen.get("linf") is not None else None))
    except ValueError as exc:
        raise ConfigError(f"generator: {exc}") from exc


def _sigma(cfg: ExperimentConfig, n: int, rng: np.random.Generator) -> Permutation:
    if cfg.sigma_mode == "identity":
        return Permutation.identity(n)
    return uniform_permutation(n, rng)


def _grid_ks(n: int) -> list[int]:
    return sorted({round(m * n / 100) for m in range(101)})


def _run_converge(cfg: ExperimentConfig) -> ExperimentReport:
    kid = _KIND_ID[cfg.kind]
    target_user = parse_matrix(cfg.target, "target") if cfg.target is not None else None
    rows_csv: list[list] = []
    records: list[dict] = []
    sups: dict[int, list[float]] = {}
    finals: dict[int, list[float]] = {}
    for n in cfg.n_list:
        row = _build_row(cfg, n, _stream(cfg.seed, kid, n))
        mean = row_stats(row).mean
        ks = _grid_ks(n)
        for trial in range(cfg.trials):
            sigma = _sigma(cfg, n, _stream(cfg.seed, kid, n, trial))
            rep = path_deviation(row, sigma, mean)
            rep_t = path_deviation(row, sigma, target_user) if target_user is not None else None
            for k in ks:
                rows_csv.append([n, trial, k, float(rep.deviations[k]),
                                 float(rep_t.deviations[k]) if rep_t is not None else "",
                                 "", ""])
            rows_csv.append([n, trial, "", "", "", rep.sup_dev, rep.slack])
            rec = {"n": n, "trial": trial, "sup_dev": rep.sup_dev, "slack": rep.slack,
                   "final_dev": float(rep.deviations[-1])}
            if rep_t is not None:
                rec["sup_dev_target"] = rep_t.sup_dev
                rec["final_dev_target"] = float(rep_t.deviations[-1])
            records.append(rec)
            sups.setdefault(n, []).append(rep.sup_dev)
            finals.setdefault(n, []).append(rec["final_dev"])
    summary = {str(n): {"sup_dev": _quantiles(sups[n]), "final_dev": _quantiles(finals[n])}
               for n in cfg.n_list}
    return _report(cfg, rows_csv, records, summary)


def _run_tail(cfg: ExperimentConfig) -> ExperimentReport:
    kid = _KIND_ID[cfg.kind]
    rows_csv: list[list] = []
    records: list[dict] = []
    summary: dict = {}
    for n in cfg.n_list:
        row = _build_row(cfg, n, _stream(cfg.seed, kid, n))
        stats = row_stats(row)
        a_fixed = cfg.generator.get("a")
        if a_fixed:
            scheme = BlockScheme(a=int(a_fixed), b=n // int(a_fixed))
        else:
            scheme = choose_blocks(n, stats, eps=cfg.eps or 0.0, mode=cfg.block_mode)
        grid = eps_grid(stats.l1, floor=cfg.eps if cfg.eps else 0.05)
        mean_dev, _ = block_deviation_samples(row, scheme, cfg.trials, (cfg.seed, kid, n))
        freqs = []
        for e in grid:
            freq = float((mean_dev > e).mean())
            lemma = lemma_random_bound(n, scheme.a, scheme.b, float(e), stats, row.d)
            bern = block_bernstein_bound(row, scheme, float(e))
            rows_csv.append([n, float(e), freq, bern, lemma, cfg.trials])
            records.append({"n": n, "eps": float(e), "empirical_freq": freq,
                            "bernstein_bound": bern, "lemma_bound": lemma,
                            "trials": cfg.trials})
            freqs.append(freq)
        summary[str(n)] = {"a": scheme.a, "b": scheme.b, "l1": stats.l1,
                           "linf": stats.linf, "max_freq": max(freqs)}
    return _report(cfg, rows_csv, records, summary)


def _run_regime(cfg: ExperimentConfig) -> ExperimentReport:
    kid = _KIND_ID[cfg.kind]
    gen = cfg.generator
    regimes = gen.get("regimes") or [gen]
    rows_csv: list[list] = []
    records: list[dict] = []
    sups: dict[tuple, list[float]] = {}
    for n in cfg.n_list:
        for ri, rgen in enumerate(regimes):
            spec = _regime_spec({**gen, **rgen})
            k_n, linf = spiked_parameters(n, spec)
            sub = dataclasses.replace(cfg, generator={**gen, **rgen, "name": "spiked"})
            row = _build_row(sub, n, _stream(cfg.seed, kid, n, ri))
            stats = row_stats(row)
            for trial in range(cfg.trials):
                sigma = _sigma(cfg, n, _stream(cfg.seed, kid, n, ri, trial))
                rep = path_deviation(row, sigma, stats.mean)
                rows_csv.append([n, spec.regime, trial, k_n, linf, stats.l1,
                                 float(op_norm(stats.mean)), rep.sup_dev, rep.slack])
                records.append({"n": n, "regime": spec.regime, "trial": trial,
                                "k_n": k_n, "linf": linf, "l1": stats.l1,
                                "sup_dev": rep.sup_dev, "slack": rep.slack})
                sups.setdefault((n, spec.regime), []).append(rep.sup_dev)
    summary = {f"{n}:{reg}": _quantiles(v) for (n, reg), v in sups.items()}
    return _report(cfg, rows_csv, records, summary)


def _run_words(cfg: ExperimentConfig) -> ExperimentReport:
    kid = _KIND_ID[cfg.kind]
    a = int(cfg.generator.get("a", 5))
    b = int(cfg.generator.get("b", 8))
    if a < 1 or b < 1:
        raise ConfigError(f"generator: word shape a={a}, b={b} must be positive")
    length = a * b
    rows_csv: list[list] = []
    records: list[dict] = []
    taus = []
    for trial in range(cfg.trials):
        w = random_word(a, b, _stream(cfg.seed, kid, trial))
        tv = tau(w)
        dist = transposition_distance(w)
        bound = length * length * tv
        rows_csv.append([trial, tv, dist, bound])
        records.append({"trial": trial, "tau": tv, "distance": dist, "bound": bound})
        taus.append(tv)
    summary = {"tau": _quantiles(taus), "a": a, "b": b}
    return _report(cfg, rows_csv, records, summary)


def _run_evolution(cfg: ExperimentConfig) -> ExperimentReport:
    kid = _KIND_ID[cfg.kind]
    gen = cfg.generator
    fn = _build_family(gen)
    s = float(gen.get("s", 0.0))
    t = float(gen.get("t", 1.0))
    mode = gen.get("mode", "permuted")
    rows_csv: list[list] = []
    records: list[dict] = []
    devs: dict[int, list[float]] = {}
    for n in cfg.n_list:
        target = mat_exp((t - s) * riemann_reference(fn, n))
        for trial in range(cfg.trials):
            spec = evo.PropagatorSpec(fn=fn, s=s, t=t, n=n, mode=mode,
                                      seed=(cfg.seed, kid, n, trial))
            dev = float(op_norm(evo.propagate(spec) - target))
            rows_csv.append([n, trial, dev])
            records.append({"n": n, "seed": trial, "deviation": dev})
            devs.setdefault(n, []).append(dev)
    summary = {str(n): _quantiles(v) for n, v in devs.items()}
    return _report(cfg, rows_csv, records, summary)


def riemann_reference(fn, n: int) -> np.ndarray:
    """Time-average of the family on a grid 4x finer than the propagator's."""
    return evo.riemann_integral(fn, 4 * n)


def _report(cfg: ExperimentConfig, rows_csv, records, summary) -> ExperimentReport:
    provenance = {"config": cfg.to_dict(), "seed": cfg.seed,
                  "package_version": PACKAGE_VERSION, "schema_version": SCHEMA_VERSION,
                  "columns": COLUMNS[cfg.kind]}
    return ExperimentReport(kind=cfg.kind, columns=COLUMNS[cfg.kind], csv_rows=rows_csv,
                            records=records, summary=summary, provenance=provenance)


_RUNNERS = {
    "converge": _run_converge,
    "tail": _run_tail,
    "regime": _run_regime,
    "words": _run_words,
    "evolution": _run_evolution,
}


def run(cfg: ExperimentConfig) -> ExperimentReport:
    cfg.validate()
    return _RUNNERS[cfg.kind](cfg)


def _cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return repr(value)  # shortest round-trip decimal
    return str(value)


def emit(report: ExperimentReport, out_path: str | Path) -> Path:
    """Write the CSV (UTF-8, LF) and a sibling .json sidecar; returns the CSV path."""
    path = Path(out_path)
    try:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(",".join(report.columns) + "\n")
            for row in report.csv_rows:
                fh.write(",".join(_cell(v) for v in row) + "\n")
        sidecar = path.with_suffix(".json")
        doc = {**report.provenance, "summary": report.summary}
        with open(sidecar, "w", encoding="utf-8") as fh:
            json.dump(doc, fh, indent=2, sort_keys=True)
            fh.write("\n")
    except OSError as exc:
        raise OSError(f"cannot write report to {path}: {exc}") from exc
    return path

"""Command-line entry point: sweeps, oracle checks, single-measure
evaluation, channel discrimination, bound fitting and bundled reproduction
recipes. Outputs are CSV/JSON with 12-significant-digit floats and depend only
on the config content and seed."""
from __future__ import annotations

import argparse
import csv
import hashlib
import json
import os
import sys
import time
from dataclasses import dataclass, field

import numpy as np

from . import discrimination, oracles
from .channels import KINDS, make_channel, apply_uniform
from .correlators import correlator, distributed_cmax, genuine_max, parse_index
from .measures import LW_VARIANTS, MEASURE_KINDS, pair_measure, distributed_measure
from .sampling import (SamplerConfig, decay_rate, ensemble_sweep,
                       evaluate_ensemble, fit_bounds)
from .states import PureState, load_state, pure_to_density

VERSION = "0.1.0"
OUTPUT_ENV = "CCLAB_OUTPUT_DIR"

_CONFIG_KEYS = {"experiment", "sampler", "channels", "p_grid", "measures",
                "nodal", "direction", "bins", "output_dir", "threads"}
_SAMPLER_KEYS = {"n_qubits", "ensemble", "count", "master_seed",
                 "wclass_real_amplitudes"}


def fmt(x) -> str:
    return f"{float(x):.12g}"


@dataclass(frozen=True)
class ExperimentConfig:
    experiment: str
    sampler: SamplerConfig
    channels: tuple
    p_grid: tuple
    measures: tuple
    nodal: int = 1
    direction: str = "left"
    bins: int = 50
    output_dir: str = "."
    threads: int = 1

    def __post_init__(self):
        if not self.measures:
            raise ValueError("measure list must not be empty")
        for ch in self.channels:
            if ch not in KINDS and ch != "none":
                raise ValueError(f"unknown channel {ch!r}")
        for m in self.measures:
            if (m not in MEASURE_KINDS and m not in LW_VARIANTS
                    and m not in ("dcmax", "genuine_cmax")):
                raise ValueError(f"unknown measure {m!r}")
        for p in self.p_grid:
            if not 0 <= p <= 1:
                raise ValueError(f"p={p} outside [0, 1]")

    def canonical(self) -> str:
        obj = {
            "experiment": self.experiment,
            "sampler": {"n_qubits": self.sampler.n_qubits,
                        "ensemble": self.sampler.ensemble,
                        "count": self.sampler.count,
                        "master_seed": self.sampler.master_seed,
                        "wclass_real_amplitudes": self.sampler.wclass_real_amplitudes},
            "channels": list(self.channels), "p_grid": list(self.p_grid),
            "measures": list(self.measures), "nodal": self.nodal,
            "direction": self.direction, "bins": self.bins,
        }
        return json.dumps(obj, sort_keys=True)

    def config_hash(self) -> str:
        return hashlib.sha256(self.canonical().encode()).hexdigest()[:16]


def load_config(path: str) -> ExperimentConfig:
    with open(path) as fh:
        obj = json.load(fh)
    return config_from_dict(obj)


def config_from_dict(obj: dict) -> ExperimentConfig:
    unknown = set(obj) - _CONFIG_KEYS
    if unknown:
        raise ValueError(f"unknown config keys: {sorted(unknown)}")
    sam = obj.get("sampler", {})
    unknown = set(sam) - _SAMPLER_KEYS
    if unknown:
        raise ValueError(f"unknown sampler keys: {sorted(unknown)}")
    sampler = SamplerConfig(
        n_qubits=int(sam.get("n_qubits", 3)),
        ensemble=sam.get("ensemble", "haar"),
        count=int(sam.get("count", 1000)),
        master_seed=int(sam.get("master_seed", 0)),
        wclass_real_amplitudes=bool(sam.get("wclass_real_amplitudes", False)))
    return ExperimentConfig(
        experiment=obj.get("experiment", "sweep"),
        sampler=sampler,
        channels=tuple(obj.get("channels", ["pdc"])),
        p_grid=tuple(float(p) for p in obj.get("p_grid", [0.0])),
        measures=tuple(obj.get("measures", [])),
        nodal=int(obj.get("nodal", 1)),
        direction=obj.get("direction", "left"),
        bins=int(obj.get("bins", 50)),
        output_dir=obj.get("output_dir", os.environ.get(OUTPUT_ENV, ".")),
        threads=int(obj.get("threads", 1)))


@dataclass
class RunManifest:
    config_hash: str
    version: str
    started: float
    finished: float = 0.0
    outputs: list = field(default_factory=list)

    def write(self, path: str) -> None:
        with open(path, "w") as fh:
            json.dump({"config_hash": self.config_hash, "version": self.version,
                       "started": self.started, "finished": self.finished,
                       "outputs": self.outputs}, fh, indent=2)
            fh.write("\n")


def _write_csv(path: str, header, rows) -> None:
    tmp = path + ".tmp"
    with open(tmp, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(header)
        for row in rows:
            w.writerow([c if isinstance(c, str) else fmt(c) for c in row])
    os.replace(tmp, path)


def run_experiment(cfg: ExperimentConfig) -> RunManifest:
    os.makedirs(cfg.output_dir, exist_ok=True)
    manifest = RunManifest(cfg.config_hash(), VERSION, time.time())
    try:
        for channel in cfg.channels:
            summaries = ensemble_sweep(cfg.sampler, channel, cfg.p_grid,
                                       cfg.measures, cfg.nodal, cfg.direction,
                                       cfg.bins, cfg.threads)
            by_measure = {}
            for s in summaries:
                by_measure.setdefault(s.measure, []).append(s)
            for measure, ms in by_measure.items():
                path = os.path.join(cfg.output_dir,
                                    f"{cfg.experiment}_{measure}_{channel}.csv")
                _write_csv(path, ["p", "mean", "std", "median", "skewness",
                                  "moment_skewness", "count"],
                           [(s.p, s.mean, s.std_dev, s.median, s.skewness,
                             s.moment_skewness, s.n) for s in ms])
                manifest.outputs.append(path)
                for s in ms:
                    hpath = os.path.join(
                        cfg.output_dir,
                        f"{cfg.experiment}_{measure}_{channel}_hist_p{s.p:g}.csv")
                    _write_csv(hpath, ["bin_left", "bin_right", "frequency"],
                               [(s.bin_edges[i], s.bin_edges[i + 1], s.frequencies[i])
                                for i in range(len(s.frequencies))])
                    manifest.outputs.append(hpath)
    except Exception:
        for path in manifest.outputs:
            if os.path.exists(path):
                os.remove(path)
        raise
    manifest.finished = time.time()
    manifest.write(os.path.join(cfg.output_dir, f"{cfg.experiment}_manifest.json"))
    return manifest


# ---------------------------------------------------------------------------
# Recipes

def recipe_fig1_wstate(outdir: str, points: int = 21) -> str:
    """All-z genuine correlator of the 3-qubit W state vs noise strength,
    per channel, from the closed-form channel transforms."""
    w_amps = np.full(3, 1 / np.sqrt(3))
    rows = []
    for p in np.linspace(0.0, 1.0, points):
        rows.append((p, 1.0,
                     oracles.gw_adc_z_correlator(w_amps, 3, p),
                     abs(oracles.dpc_genuine_multiplier(3, p))))
    path = os.path.join(outdir, "fig1_wstate.csv")
    _write_csv(path, ["p", "pdc", "adc", "dpc"], rows)
    return path


def _table_recipe(channel: str, measure: str, count: int, seed: int,
                  threads: int) -> ExperimentConfig:
    return config_from_dict({
        "experiment": f"table_{measure}_{channel}", "channels": [channel],
        "p_grid": [0.2, 0.4, 0.6], "measures": [measure],
        "sampler": {"n_qubits": 3, "count": count, "master_seed": seed},
        "threads": threads})


def recipe_table(channel: str, measure: str, outdir: str, count: int,
                 seed: int, threads: int) -> RunManifest:
    """Table-style statistics for N in {3, 4, 5} and p in {0.2, 0.4, 0.6}."""
    rows = []
    for n in (3, 4, 5):
        cfg = SamplerConfig(n_qubits=n, count=count, master_seed=seed)
        for p in (0.2, 0.4, 0.6):
            values = evaluate_ensemble(cfg, channel, p, [measure],
                                       threads=threads)[:, 0]
            from .sampling import summarize
            s = summarize(values, measure, channel, p)
            rows.append((n, s.p, s.mean, s.std_dev, s.median, s.skewness,
                         s.moment_skewness))
    os.makedirs(outdir, exist_ok=True)
    path = os.path.join(outdir, f"table_{measure}_{channel}.csv")
    _write_csv(path, ["N", "p", "mean", "std", "median", "skewness",
                      "moment_skewness"],
               [(str(r[0]),) + r[1:] for r in rows])
    manifest = RunManifest(hashlib.sha256(
        f"table:{channel}:{measure}:{count}:{seed}".encode()).hexdigest()[:16],
        VERSION, time.time(), time.time(), [path])
    manifest.write(os.path.join(outdir, f"table_{measure}_{channel}_manifest.json"))
    return manifest


def recipe_ghzw_decay(channel: str, outdir: str, count: int, seed: int,
                      threads: int) -> str:
    """Average decay rate of D^Cmax for GHZ-class (Haar 3-qubit) vs W-class
    ensembles over p in {0.2, 0.4, 0.6}."""
    rows = []
    for label, ens in (("ghz_class", "haar"), ("w_class", "w_class")):
        cfg = SamplerConfig(n_qubits=3, ensemble=ens, count=count, master_seed=seed)
        means = []
        for p in (0.2, 0.4, 0.6):
            vals = evaluate_ensemble(cfg, channel, p, ["dcmax"], threads=threads)[:, 0]
            means.append((p, float(np.mean(vals))))
        rows.append((label, decay_rate(means)))
    os.makedirs(outdir, exist_ok=True)
    path = os.path.join(outdir, f"decay_rate_{channel}.csv")
    _write_csv(path, ["ensemble", "decay_rate"], rows)
    return path


def recipe_bound_fit(channel: str, outdir: str, count: int, seed: int,
                     threads: int, n_qubits: int = 3, p: float = 0.2,
                     bin_count: int = 16) -> str:
    """Fit the D^CD bound lines against D^I for one (channel, N, p) cell."""
    cfg = SamplerConfig(n_qubits=n_qubits, count=count, master_seed=seed)
    vals = evaluate_ensemble(cfg, channel, p, ["mi", "cd"], threads=threads)
    bf = fit_bounds(vals[:, 0], vals[:, 1], bin_count)
    os.makedirs(outdir, exist_ok=True)
    path = os.path.join(outdir, f"bounds_{channel}_N{n_qubits}_p{p:g}.csv")
    _write_csv(path, ["m_u", "c_u", "m_l", "c_l", "bins", "residual"],
               [(bf.m_u, bf.c_u, bf.m_l, bf.c_l, bf.bin_count, bf.residual)])
    return path


RECIPES = {
    "fig1_wstate": None,  # handled specially below
    "table1_pdc": ("pdc", "dcmax"), "table1_dpc": ("dpc", "dcmax"),
    "table1_adc": ("adc", "dcmax"),
    # table2 ships the lw_half variant, the one that tracks the published
    # per-pair values; plain "lw" (two-sided) remains available via sweep
    "table2_pdc": ("pdc", "lw_half"), "table2_dpc": ("dpc", "lw_half"),
    "table2_adc": ("adc", "lw_half"),
    "table3_pdc": ("pdc", "cd"), "table3_dpc": ("dpc", "cd"),
    "table3_adc": ("adc", "cd"),
    "ghzw_decay_pdc": ("pdc", None), "ghzw_decay_dpc": ("dpc", None),
    "ghzw_decay_adc": ("adc", None),
    "table4_pdc": ("pdc", "bounds"), "table4_adc": ("adc", "bounds"),
    "table4_dpc": ("dpc", "bounds"),
}


# ---------------------------------------------------------------------------
# Subcommands

def _cmd_sweep(args) -> int:
    cfg = load_config(args.config)
    if args.seed is not None:
        cfg = config_from_dict({**json.loads(cfg.canonical()),
                                "sampler": {**json.loads(cfg.canonical())["sampler"],
                                            "master_seed": args.seed},
                                "output_dir": cfg.output_dir,
                                "threads": args.threads or cfg.threads})
    manifest = run_experiment(cfg)
    print(f"wrote {len(manifest.outputs)} files (config {manifest.config_hash})")
    return 0


def _cmd_oracle(args) -> int:
    ch = args.channel
    if ch == "pdc":
        value = oracles.pdc_multiplier(args.N, args.k, args.p,
                                       "z" if args.plane == "z" else "xy")
    elif ch == "dpc":
        value = oracles.dpc_genuine_multiplier(args.N, args.p)
    else:
        value = oracles.adc_xy_multiplier(args.k, args.p)
    print(fmt(value))
    return 0


def _cmd_oracle_check(args) -> int:
    rows = oracles.oracle_equivalence_sweep(
        states_per_cell=args.states, seed=args.seed or 7,
        include_mixed_pauli_dpc=True)
    outdir = args.out or os.environ.get(OUTPUT_ENV, ".")
    os.makedirs(outdir, exist_ok=True)
    path = os.path.join(outdir, "oracle_check.csv")
    _write_csv(path, ["check", "N", "k", "p", "max_dev"],
               [(r["check"], str(r["N"]), str(r["k"]), r["p"], r["max_dev"])
                for r in rows])
    worst = max(r["max_dev"] for r in rows)
    print(f"{len(rows)} cells, worst deviation {worst:.3e}, wrote {path}")
    return 0 if worst <= 1e-10 else 1


def _cmd_measure(args) -> int:
    rho = load_state(args.state)
    kind = args.kind
    direction = args.direction
    if rho.n_qubits == 2 and kind != "dcmax":
        value = pair_measure(rho, kind, direction)
    elif kind == "dcmax":
        value = distributed_cmax(rho, args.nodal)
    else:
        value = distributed_measure(rho, kind, args.nodal, direction)
    print(json.dumps({"value": float(value), "kind": kind, "converged": True}))
    return 0


def _cmd_correlators(args) -> int:
    rho = load_state(args.state)
    if args.index:
        labels = parse_index(args.index)
        print(fmt(correlator(rho, labels)))
    else:
        mode = "full_search" if args.mode == "full" else "same_pauli"
        v, labels = genuine_max(rho, mode)
        print(json.dumps({"value": v, "argmax": "".join(labels).lower()}))
    return 0


def _cmd_discriminate(args) -> int:
    if args.trace:
        samples = []
        with open(args.trace, newline="") as fh:
            for row in csv.DictReader(fh):
                samples.append((float(row["p"]), float(row["c_before"]),
                                float(row["c_after"])))
        trace = discrimination.ProbeTrace(args.N, "gw", (), tuple(samples))
    else:
        probe = discrimination.gw_probe_state(args.alpha, args.beta,
                                              args.gamma1, args.gamma2)
        p_values = [float(x) for x in args.p.split(",")]
        trace = discrimination.generate_probe_trace(
            probe, make_channel(args.channel, p_values[0]), p_values,
            noise_sigma=args.sigma,
            rng=np.random.default_rng(args.seed or 0))
    verdict = discrimination.classify(trace, threshold=args.threshold)
    print(json.dumps({"label": verdict.label,
                      "residuals": {k: float(v) for k, v in verdict.residuals.items()}}))
    return 0


def _cmd_fit_bounds(args) -> int:
    xs, ys = [], []
    with open(args.csv, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        for row in reader:
            xs.append(float(row[0]))
            ys.append(float(row[1]))
    bf = fit_bounds(xs, ys, args.bins)
    print(json.dumps({"m_u": bf.m_u, "c_u": bf.c_u, "m_l": bf.m_l,
                      "c_l": bf.c_l, "residual": bf.residual}))
    return 0


def _cmd_recipe(args) -> int:
    name = args.name
    outdir = args.out or os.environ.get(OUTPUT_ENV, ".")
    os.makedirs(outdir, exist_ok=True)
    seed = args.seed if args.seed is not None else 1
    threads = args.threads or 1
    if name == "fig1_wstate":
        path = recipe_fig1_wstate(outdir)
        print(f"wrote {path}")
        return 0
    if name not in RECIPES:
        print(f"unknown recipe {name!r}; available: {sorted(RECIPES)}", file=sys.stderr)
        return 2
    channel, measure = RECIPES[name]
    if measure is None:
        path = recipe_ghzw_decay(channel, outdir, args.count or 2000, seed, threads)
        print(f"wrote {path}")
    elif measure == "bounds":
        path = recipe_bound_fit(channel, outdir, args.count or 1000, seed, threads)
        print(f"wrote {path}")
    else:
        default = 10000 if measure == "dcmax" else 1000
        manifest = recipe_table(channel, measure, outdir, args.count or default,
                                seed, threads)
        print(f"wrote {manifest.outputs[0]}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="cclab",
                                 description="Noisy-channel classical-correlation laboratory")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("sweep", help="run an ensemble sweep from a JSON config")
    p.add_argument("--config", required=True)
    p.add_argument("--seed", type=int)
    p.add_argument("--threads", type=int)
    p.set_defaults(func=_cmd_sweep)

    p = sub.add_parser("oracle", help="evaluate a closed-form correlator multiplier")
    p.add_argument("--channel", required=True, choices=KINDS)
    p.add_argument("--N", type=int, required=True)
    p.add_argument("--k", type=int, default=1)
    p.add_argument("--p", type=float, required=True)
    p.add_argument("--plane", choices=("xy", "z"), default="xy")
    p.set_defaults(func=_cmd_oracle)

    p = sub.add_parser("oracle-check", help="numeric-vs-analytic equivalence sweep")
    p.add_argument("--states", type=int, default=100)
    p.add_argument("--seed", type=int)
    p.add_argument("--out")
    p.set_defaults(func=_cmd_oracle_check)

    p = sub.add_parser("measure", help="evaluate a correlation measure on a state file")
    p.add_argument("--state", required=True)
    p.add_argument("--kind", required=True,
                   choices=MEASURE_KINDS + LW_VARIANTS + ("dcmax",))
    p.add_argument("--nodal", type=int, default=1)
    p.add_argument("--direction", choices=("left", "right"), default="left")
    p.set_defaults(func=_cmd_measure)

    p = sub.add_parser("correlators", help="evaluate correlators on a state file")
    p.add_argument("--state", required=True)
    p.add_argument("--index", help='Pauli index string, e.g. "zzz" or "xy.z"')
    p.add_argument("--mode", choices=("same", "full"), default="same")
    p.set_defaults(func=_cmd_correlators)

    p = sub.add_parser("discriminate", help="classify an unknown local channel")
    p.add_argument("--trace", help="CSV with columns p, c_before, c_after")
    p.add_argument("--N", type=int, default=3)
    p.add_argument("--simulate", action="store_true")
    p.add_argument("--channel", choices=KINDS)
    p.add_argument("--alpha", type=float, default=0.9)
    p.add_argument("--beta", type=float, default=0.7)
    p.add_argument("--gamma1", type=float, default=0.0)
    p.add_argument("--gamma2", type=float, default=0.0)
    p.add_argument("--p", default="0.05,0.1,0.15,0.2,0.25,0.3,0.35,0.4,0.45,0.5")
    p.add_argument("--sigma", type=float, default=0.0)
    p.add_argument("--threshold", type=float, default=0.02)
    p.add_argument("--seed", type=int)
    p.set_defaults(func=_cmd_discriminate)

    p = sub.add_parser("fit-bounds", help="fit bound lines to a two-column CSV")
    p.add_argument("--csv", required=True)
    p.add_argument("--bins", type=int, default=20)
    p.set_defaults(func=_cmd_fit_bounds)

    p = sub.add_parser("recipe", help="run a bundled reproduction recipe")
    p.add_argument("name")
    p.add_argument("--out")
    p.add_argument("--seed", type=int)
    p.add_argument("--count", type=int)
    p.add_argument("--threads", type=int)
    p.set_defaults(func=_cmd_recipe)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())

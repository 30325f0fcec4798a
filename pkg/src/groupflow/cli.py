"""Command-line entry points.

Subcommands: simulate (replicated trajectories), meanfield (equilibrium
prediction), classify (one density matrix or snapshot), phase (preference
grids), psstar (critical swap probability). Options resolve as defaults <
JSON config file < explicit flags; flags win.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

import numpy as np

from . import __version__
from ._jit import JIT_ENABLED
from .dynamics import run
from .graph import LabeledDigraph
from .meanfield import omega_predicted, z_fixed_points
from .metrics import (CommunityType, DensityMatrix, Normalization, classify,
                      density, density_degree_normalized_graph)
from .params import ModelParams
from .phase import (boundaries_to_json_dict, critical_swap, extract_boundaries,
                    scan_grid)


class CliError(Exception):
    pass


_PARAM_KEYS = ("p_swap", "p_assort", "alpha", "p_remove")
_SIM_DEFAULTS = {"p_remove": 0.5, "sweeps": 500, "sample_every": 1,
                 "replicas": 1, "seed": 0, "window_frac": 0.2,
                 "init_degree": None, "save_graphs": False}
_PHASE_DEFAULTS = {"resolution": 201, "p_remove": 0.5, "p_swap_values": [1.0],
                   "boundaries": False}
_PSSTAR_DEFAULTS = {"b_values": None, "c": None, "tol": 1e-10, "scan_step": 1e-3}


def _load_config(path, allowed: set) -> dict:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as e:
        raise CliError(f"cannot read config {path}: {e}")
    if not isinstance(data, dict):
        raise CliError(f"config {path} must hold a JSON object")
    unknown = sorted(set(data) - allowed)
    if unknown:
        raise CliError(f"unknown config keys: {', '.join(unknown)}")
    return data


def _resolve(args, keys, defaults) -> dict:
    """defaults < config file < explicit flags."""
    cfg = dict(defaults)
    allowed = set(keys) | set(defaults)
    if getattr(args, "config", None):
        cfg.update(_load_config(args.config, allowed))
    for k in allowed:
        v = getattr(args, k, None)
        if v is not None:
            cfg[k] = v
    return cfg


def _pair_from_cfg(cfg: dict, key: str):
    """Per-group value from 'key_0'/'key_1', falling back to scalar 'key'."""
    base = cfg.get(key)
    v0 = cfg.get(f"{key}_0", base)
    v1 = cfg.get(f"{key}_1", base)
    if v0 is None or v1 is None:
        raise CliError(f"missing required parameter {key} (or {key}_0/{key}_1)")
    return (float(v0), float(v1))


def _params_from_cfg(cfg: dict) -> ModelParams:
    if cfg.get("n0") is None or cfg.get("n1") is None:
        raise CliError("missing required parameters n0, n1")
    try:
        return ModelParams(p_swap=_pair_from_cfg(cfg, "p_swap"),
                           p_assort=_pair_from_cfg(cfg, "p_assort"),
                           alpha=_pair_from_cfg(cfg, "alpha"),
                           group_sizes=(int(cfg["n0"]), int(cfg["n1"])),
                           p_remove=_pair_from_cfg(cfg, "p_remove"))
    except ValueError as e:
        raise CliError(str(e))


def _require_out(args) -> Path:
    if not getattr(args, "out", None):
        raise CliError("this command writes files; pass --out DIR")
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    return out


# ----------------------------------------------------------------------
# simulate

def _simulate_replica(payload: dict) -> dict:
    params = ModelParams(**payload["params"])
    rng = np.random.default_rng(payload["seed"])
    g = LabeledDigraph.erdos_renyi(params.group_sizes[0], params.group_sizes[1],
                                   payload["q"], rng)
    rec = run(g, params, payload["sweeps"], payload["sample_every"], rng)
    t_min = (1.0 - payload["window_frac"]) * payload["sweeps"] - 1e-9
    sel = rec.times >= t_min
    omega = rec.omega[sel].mean(axis=0)
    z = rec.z_mean[sel].mean(axis=0)
    with np.errstate(invalid="ignore"):
        beta = np.nanmean(rec.beta[sel], axis=0)
    return {"rep": payload["rep"], "csv": rec.to_csv_text(),
            "snapshot": g.to_snapshot_text() if payload["save_graph"] else None,
            "omega": omega.tolist(), "z": z.tolist(),
            "beta": [None if math.isnan(x) else float(x) for x in beta],
            "t_min": max(t_min, 0.0), "n_window": int(sel.sum())}


def cmd_simulate(args) -> int:
    keys = {"n0", "n1", "p_swap", "p_swap_0", "p_swap_1", "p_assort",
            "p_assort_0", "p_assort_1", "alpha", "alpha_0", "alpha_1",
            "p_remove", "p_remove_0", "p_remove_1"}
    cfg = _resolve(args, keys, _SIM_DEFAULTS)
    params = _params_from_cfg(cfg)
    out = _require_out(args)
    sweeps = int(cfg["sweeps"])
    sample_every = int(cfg["sample_every"])
    replicas = int(cfg["replicas"])
    if sweeps < 1 or sample_every < 1 or replicas < 1:
        raise CliError("sweeps, sample_every and replicas must be >= 1")
    seed = int(cfg["seed"])
    n = params.node_count
    z = z_fixed_points(params)
    init_degree = cfg["init_degree"]
    if init_degree is None:
        n0, n1 = params.group_sizes
        init_degree = (n0 * z[0] + n1 * z[1]) / n
    q = float(init_degree) / (n - 1)
    payloads = [{"params": {"p_swap": params.p_swap, "p_assort": params.p_assort,
                            "alpha": params.alpha, "group_sizes": params.group_sizes,
                            "p_remove": params.p_remove},
                 "seed": seed + rep, "rep": rep, "q": q, "sweeps": sweeps,
                 "sample_every": sample_every, "window_frac": float(cfg["window_frac"]),
                 "save_graph": bool(cfg["save_graphs"])}
                for rep in range(replicas)]
    jobs = max(1, int(getattr(args, "jobs", 1) or 1))
    if jobs > 1 and replicas > 1:
        with ProcessPoolExecutor(max_workers=min(jobs, replicas)) as pool:
            results = sorted(pool.map(_simulate_replica, payloads),
                             key=lambda r: r["rep"])
    else:
        results = [_simulate_replica(p) for p in payloads]

    for res in results:
        (out / f"trajectory_r{res['rep']:03d}.csv").write_text(res["csv"], encoding="utf-8")
        if res["snapshot"] is not None:
            (out / f"graph_r{res['rep']:03d}.txt").write_text(res["snapshot"], encoding="utf-8")

    omega_avg = np.mean([r["omega"] for r in results], axis=0)
    z_avg = np.mean([r["z"] for r in results], axis=0)
    beta_avg = []
    for gidx in range(2):
        vals = [r["beta"][gidx] for r in results if r["beta"][gidx] is not None]
        beta_avg.append(float(np.mean(vals)) if vals else None)
    empirical = classify(DensityMatrix(omega_avg, Normalization.POSSIBLE_PAIRS,
                                       tuple(map(float, params.group_sizes))))
    prediction = omega_predicted(params)

    metadata = {"mode": "simulate", "params": params.to_json_dict(),
                "sweeps": sweeps, "sample_every": sample_every,
                "replicas": replicas, "seed": seed,
                "replica_seeds": [seed + r for r in range(replicas)],
                "init": {"kind": "erdos-renyi", "q": q, "mean_degree": float(init_degree)},
                "build": {"version": __version__, "jit": JIT_ENABLED}}
    (out / "metadata.json").write_text(json.dumps(metadata, indent=2) + "\n",
                                       encoding="utf-8")
    summary = {"window": {"fraction": float(cfg["window_frac"]),
                          "t_min": results[0]["t_min"],
                          "samples_per_replica": results[0]["n_window"]},
               "replicas": replicas,
               "omega": omega_avg.tolist(),
               "z": z_avg.tolist(),
               "beta": beta_avg,
               "classification": empirical.to_json_dict(),
               "prediction": prediction.to_json_dict()}
    (out / "summary.json").write_text(json.dumps(summary, indent=2) + "\n",
                                      encoding="utf-8")
    return 0


# ----------------------------------------------------------------------
# meanfield / classify

def cmd_meanfield(args) -> int:
    keys = {"n0", "n1", "p_swap", "p_swap_0", "p_swap_1", "p_assort",
            "p_assort_0", "p_assort_1", "alpha", "alpha_0", "alpha_1",
            "p_remove", "p_remove_0", "p_remove_1"}
    cfg = _resolve(args, keys, {"p_remove": 0.5})
    sol = omega_predicted(_params_from_cfg(cfg))
    text = json.dumps(sol.to_json_dict())
    print(text)
    if getattr(args, "out", None):
        out = _require_out(args)
        (out / "meanfield.json").write_text(text + "\n", encoding="utf-8")
    return 0


def cmd_classify(args) -> int:
    sources = [s for s in (args.matrix, args.matrix_file, args.edges) if s]
    if len(sources) != 1:
        raise CliError("pass exactly one of --matrix, --matrix-file, --edges")
    try:
        if args.matrix or args.matrix_file:
            raw = args.matrix or Path(args.matrix_file).read_text(encoding="utf-8")
            entries = json.loads(raw)
            norm = (Normalization.DEGREE_PRODUCT if args.degree_normalized
                    else Normalization.POSSIBLE_PAIRS)
            verdict = classify(DensityMatrix(entries, norm))
        else:
            g = LabeledDigraph.read_snapshot(args.edges)
            w = (density_degree_normalized_graph(g) if args.degree_normalized
                 else density(g))
            verdict = classify(w)
    except (ValueError, OSError, json.JSONDecodeError) as e:
        raise CliError(str(e))
    text = json.dumps(verdict.to_json_dict())
    print(text)
    if getattr(args, "out", None):
        out = _require_out(args)
        (out / "classification.json").write_text(text + "\n", encoding="utf-8")
    return 0


# ----------------------------------------------------------------------
# phase / psstar

def _phase_task(payload: dict) -> tuple:
    grid = scan_grid(payload["b"], payload["c"], payload["ps"],
                     payload["resolution"], payload["p_remove"])
    bjson = None
    if payload["boundaries"]:
        bjson = boundaries_to_json_dict(extract_boundaries(grid))
        bjson.update({"b": payload["b"], "c": payload["c"], "p_swap": payload["ps"]})
    return payload["ps"], grid.to_csv_text(), bjson


def cmd_phase(args) -> int:
    keys = {"b", "c"}
    cfg = _resolve(args, keys, _PHASE_DEFAULTS)
    if cfg.get("b") is None or cfg.get("c") is None:
        raise CliError("missing required parameters b, c")
    out = _require_out(args)
    ps_values = cfg["p_swap_values"]
    if np.isscalar(ps_values):
        ps_values = [ps_values]
    payloads = [{"b": float(cfg["b"]), "c": float(cfg["c"]), "ps": float(ps),
                 "resolution": int(cfg["resolution"]),
                 "p_remove": float(cfg["p_remove"]),
                 "boundaries": bool(cfg["boundaries"])}
                for ps in ps_values]
    try:
        jobs = max(1, int(getattr(args, "jobs", 1) or 1))
        if jobs > 1 and len(payloads) > 1:
            with ProcessPoolExecutor(max_workers=min(jobs, len(payloads))) as pool:
                results = list(pool.map(_phase_task, payloads))
        else:
            results = [_phase_task(p) for p in payloads]
    except ValueError as e:
        raise CliError(str(e))
    for ps, csv_text, bjson in results:
        (out / f"phase_ps{ps:g}.csv").write_text(csv_text, encoding="utf-8")
        if bjson is not None:
            (out / f"boundaries_ps{ps:g}.json").write_text(
                json.dumps(bjson) + "\n", encoding="utf-8")
    return 0


def cmd_psstar(args) -> int:
    cfg = _resolve(args, set(), _PSSTAR_DEFAULTS)
    if cfg["b_values"] is None or cfg["c"] is None:
        raise CliError("missing required parameters b, c")
    b_values = cfg["b_values"]
    if np.isscalar(b_values):
        b_values = [b_values]
    try:
        records = [critical_swap(float(b), float(cfg["c"]), tol=float(cfg["tol"]),
                                 scan_step=float(cfg["scan_step"])).to_json_dict()
                   for b in b_values]
    except ValueError as e:
        raise CliError(str(e))
    doc = records[0] if len(records) == 1 else {"c": float(cfg["c"]), "points": records}
    text = json.dumps(doc)
    print(text)
    if getattr(args, "out", None):
        out = _require_out(args)
        name = "psstar.json" if len(records) == 1 else "psstar_sweep.json"
        (out / name).write_text(text + "\n", encoding="utf-8")
    return 0


# ----------------------------------------------------------------------
# parser

def _add_common(sp) -> None:
    sp.add_argument("--config", help="JSON config file; flags override it")
    sp.add_argument("--out", help="output directory")
    sp.add_argument("--seed", type=int, help="base RNG seed (replica r uses seed+r)")
    sp.add_argument("--jobs", type=int, default=1, help="worker processes")


def _add_param_flags(sp) -> None:
    for key in _PARAM_KEYS:
        flag = key.replace("_", "-")
        sp.add_argument(f"--{flag}", type=float, help=f"{key} for both groups")
        sp.add_argument(f"--{flag}-0", type=float, dest=f"{key}_0")
        sp.add_argument(f"--{flag}-1", type=float, dest=f"{key}_1")
    sp.add_argument("--n0", type=int, help="size of group 0")
    sp.add_argument("--n1", type=int, help="size of group 1")


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="groupflow",
                                description="two-group directed network evolution toolkit")
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("simulate", help="run replicated trajectories")
    _add_common(sp)
    _add_param_flags(sp)
    sp.add_argument("--sweeps", type=int)
    sp.add_argument("--sample-every", type=int, dest="sample_every")
    sp.add_argument("--replicas", type=int)
    sp.add_argument("--window-frac", type=float, dest="window_frac")
    sp.add_argument("--init-degree", type=float, dest="init_degree",
                    help="mean in-degree of the initial random graph")
    sp.add_argument("--save-graphs", action=argparse.BooleanOptionalAction,
                    dest="save_graphs", default=None)
    sp.set_defaults(func=cmd_simulate)

    sp = sub.add_parser("meanfield", help="print the equilibrium prediction")
    _add_common(sp)
    _add_param_flags(sp)
    sp.set_defaults(func=cmd_meanfield)

    sp = sub.add_parser("classify", help="classify a density matrix or snapshot")
    _add_common(sp)
    sp.add_argument("--matrix", help="2x2 density matrix as inline JSON")
    sp.add_argument("--matrix-file", dest="matrix_file", help="file holding the matrix JSON")
    sp.add_argument("--edges", help="edge-list snapshot to measure and classify")
    sp.add_argument("--degree-normalized", action="store_true",
                    dest="degree_normalized",
                    help="use degree-product normalization")
    sp.set_defaults(func=cmd_classify)

    sp = sub.add_parser("phase", help="write preference-grid classification CSVs")
    _add_common(sp)
    sp.add_argument("--b", type=float, help="degree ratio z0/z1")
    sp.add_argument("--c", type=float, help="size ratio n0/n1")
    sp.add_argument("--resolution", type=int)
    sp.add_argument("--p-remove", type=float, dest="p_remove")
    sp.add_argument("--ps", type=float, action="append", dest="p_swap_values",
                    help="swap probability; repeat for several grids")
    sp.add_argument("--boundaries", action=argparse.BooleanOptionalAction,
                    default=None, help="also write boundary polyline JSON")
    sp.set_defaults(func=cmd_phase)

    sp = sub.add_parser("psstar", help="critical swap probability for given ratios")
    _add_common(sp)
    sp.add_argument("--b", type=float, action="append", dest="b_values",
                    help="degree ratio; repeat for a sweep")
    sp.add_argument("--c", type=float)
    sp.add_argument("--tol", type=float)
    sp.add_argument("--scan-step", type=float, dest="scan_step")
    sp.set_defaults(func=cmd_psstar)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except CliError as e:
        print(f"error: {e}", file=sys.stderr)
        return 1
    except (ValueError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())

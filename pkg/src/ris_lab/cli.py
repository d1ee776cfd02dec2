"""Command line interface: run scenarios, evaluate bounds, sweep placement."""

from __future__ import annotations

import argparse
import csv
import dataclasses
import os
import sys

import yaml

from . import bounds, harness, presets
from .model import dbm_to_watts


def _add_run(sub) -> None:
    p = sub.add_parser("run", help="run a scenario and write its result CSV")
    p.add_argument("--scenario", required=True, help="preset name or config file path")
    p.add_argument("--trials", type=int, default=None)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--out", default=None, help="output CSV path (default <name>.csv)")
    p.add_argument("--parallel", type=int, default=1, help="worker processes")


def _add_bound(sub) -> None:
    p = sub.add_parser("bound", help="minimum element count for a symmetric network")
    p.add_argument("--mode", required=True, choices=["centralized", "distributed"])
    p.add_argument("--config", required=True, help="YAML file of link statistics")
    p.add_argument("--target", type=float, default=None, help="SINR or score target")
    p.add_argument("--out", required=True, help="CSV of the trade-off grid")


def _add_presets(sub) -> None:
    sub.add_parser("presets", help="list available scenario presets")


def _add_sweep(sub) -> None:
    p = sub.add_parser("sweep-placement", help="required elements per surface position")
    p.add_argument("--preset", default="fig-placement")
    p.add_argument("--target", type=float, required=True, help="mean sum-rate target")
    p.add_argument("--out", required=True)
    p.add_argument("--x0", default=None, help="comma-separated surface x positions")
    p.add_argument("--trials", type=int, default=None)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--m-cap", type=int, default=64, dest="m_cap")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ris-lab", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)
    _add_run(sub)
    _add_bound(sub)
    _add_presets(sub)
    _add_sweep(sub)
    return parser


def _apply_overrides(scenario, trials, seed):
    fields = {}
    if trials is not None:
        fields["trials"] = trials
    if seed is not None:
        fields["seed"] = seed
    return dataclasses.replace(scenario, **fields) if fields else scenario


def _cmd_run(args) -> int:
    scenario = presets.resolve_scenario(args.scenario)
    scenario = _apply_overrides(scenario, args.trials, args.seed)
    parallel = args.parallel > 1
    if parallel:
        os.environ["RIS_LAB_THREADS"] = str(args.parallel)
    rows = harness.run(scenario, parallel=parallel)
    out = args.out or f"{scenario.name}.csv"
    harness.write_csv(rows, out)
    print(f"{len(rows)} rows -> {out}")
    return 0


def _symmetric_from_config(data: dict, mode: str) -> bounds.SymmetricScenario:
    data = dict(data)
    data.pop("target_sinr", None)
    data.pop("m_minus", None)
    data.pop("m_plus", None)
    if "p_dbm" in data:
        data["p_watts"] = dbm_to_watts(float(data.pop("p_dbm")))
    if "noise_dbm" in data:
        data["noise_watts"] = dbm_to_watts(float(data.pop("noise_dbm")))
    if mode == "centralized" and "m_h" not in data:
        raise ValueError("centralized bound needs m_h (mean cascade amplitude)")
    if mode == "distributed" and "sigma_h_tilde_sq" not in data:
        raise ValueError("distributed bound needs sigma_h_tilde_sq")
    return bounds.SymmetricScenario(**data)


def _cmd_bound(args) -> int:
    with open(args.config) as fh:
        data = yaml.safe_load(fh)
    if not isinstance(data, dict):
        raise ValueError(f"config {args.config} must hold a mapping")
    target = args.target if args.target is not None else data.get("target_sinr")
    if target is None:
        raise ValueError("give --target or put target_sinr in the config")
    m_minus = int(data.get("m_minus", bounds.M_MINUS))
    m_plus = int(data.get("m_plus", bounds.M_PLUS))
    sym = _symmetric_from_config(data, args.mode)
    solve = (
        bounds.min_elements_centralized if args.mode == "centralized" else bounds.min_elements_distributed
    )
    res = solve(sym, float(target), m_minus=m_minus, m_plus=m_plus)
    with open(args.out, "w", newline="\n") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["a", "bound"])
        for a, v in res.grid:
            writer.writerow([f"{a:.9g}", f"{v:.9g}"])
    if res.feasible:
        print(f"m_min={res.m_min} a_star={res.a_star:.6g} raw={res.raw_bound:.6g} clamped={res.clamped}")
    else:
        print("infeasible: no trade-off split satisfies the target at any element count")
    return 0


def _cmd_presets(_args) -> int:
    for name in presets.preset_names():
        s = presets.preset(name)
        mode = s.mode
        ms = ",".join(str(m) for m in s.m_values)
        print(f"{name}: K={s.k} N={s.n_levels} mode={mode} M={{{ms}}} trials={s.trials}")
    return 0


def _cmd_sweep(args) -> int:
    scenario = presets.resolve_scenario(args.preset)
    scenario = _apply_overrides(scenario, args.trials, args.seed)
    if args.x0 is not None:
        x0_values = [float(v) for v in args.x0.split(",")]
    else:
        x0_values = [float(v) for v in range(0, 31, 2)]
    entries = harness.placement_sweep(scenario, x0_values, args.target, m_cap=args.m_cap)
    harness.write_placement_csv(entries, args.out)
    print(f"{len(entries)} positions -> {args.out}")
    return 0


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    handlers = {
        "run": _cmd_run,
        "bound": _cmd_bound,
        "presets": _cmd_presets,
        "sweep-placement": _cmd_sweep,
    }
    return handlers[args.command](args)


if __name__ == "__main__":
    sys.exit(main())

"""Command line front end for the solvers, the exhaustive oracle, the gap
diagnostics, and the mixture study.

Input conventions, shared by every subcommand that takes them:

* ``--lattice``: ``set:N`` for the subset lattice on N items, ``vector:D``
  for the subspace lattice of R^D, or a path to a JSON file with either
  ``{"kind": "dictionary", "atoms": [[...], ...]}`` (the lattice is
  enumerated from the spans) or ``{"kind": "explicit", "n": ...,
  "cover_edges": [[lo, hi], ...], "labels": [...]}``.
* ``--objective``: ``pca`` or ``gpca`` read ``--data`` (CSV, one vector per
  row); ``qcut``/``cut`` read ``--graph`` (JSON with ``vertices`` and
  ``edges``); ``table`` reads ``--table`` (JSON with ``values``).
* ``--rho`` (gpca only): ``identity``, ``capped:THRESHOLD[:SLOPE]``,
  ``fractional[:FRACTION[:SLOPE]]`` (per-datum thresholds), or a JSON file.
* ``--strategy``: ``exhaustive``, ``exact-eigen``, ``grid[:WIDTH[:ROUNDS]]``,
  or ``random[:SAMPLES[:SEED]]``.
* ``--cost`` (knapsack/oracle): ``uniform[:STEP]`` or a JSON file
  ``{"base": 0.0, "increments": {"<element-id>": weight, ...}}`` keyed by
  join-irreducible element ids.
* ``--report FILE``: write the full JSON report; a short summary always
  goes to stdout. Report schemas mirror ``to_json_dict`` of SolveReport,
  BruteForceResult, and GapReport and are stable.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from .diagnostics import (
    check_coherence_bound,
    check_saturation_gap_bound,
    measure_downward_gap,
    measure_strong_gap,
    measure_upward_gap,
)
from .dictionary import Dictionary, enumerate_lattice
from .experiments import (
    MixtureSpec,
    generate_mixture,
    run_appendix_experiment,
    write_scatter_csvs,
    write_summary_json,
)
from .lattice import ExplicitLattice, NotALatticeError, SetLattice
from .objectives import (
    ConcaveRho,
    GeneralizedPCAObjective,
    ModularCost,
    PCAObjective,
    QuantumCutObjective,
    SaturatingFamily,
    TableObjective,
    WeightedDigraph,
    fractional_energy_family,
    rho_from_json_dict,
)
from .oracle import brute_force_max
from .solvers import (
    Grid,
    double_greedy,
    greedy_height,
    greedy_knapsack,
    strategy_from_name,
)
from .subspaces import VectorLattice, load_vectors_csv

_GAP_MEASURES = {
    "strong": measure_strong_gap,
    "downward": measure_downward_gap,
    "upward": measure_upward_gap,
}


def _read_json(path):
    return json.loads(Path(path).read_text())


def load_lattice(arg: str):
    if arg.startswith("set:"):
        return SetLattice(int(arg.split(":", 1)[1]))
    if arg.startswith("vector:"):
        return VectorLattice(int(arg.split(":", 1)[1]))
    doc = _read_json(arg)
    kind = doc.get("kind")
    if kind == "dictionary":
        return enumerate_lattice(Dictionary.from_json_dict(doc))
    if kind == "explicit":
        edges = [tuple(e) for e in doc["cover_edges"]]
        return ExplicitLattice.from_cover_edges(int(doc["n"]), edges,
                                                labels=doc.get("labels"))
    raise ValueError(f"unknown lattice kind {kind!r}")


def _load_rho(arg, data):
    if arg is None:
        return fractional_energy_family(data)
    if arg == "identity":
        return ConcaveRho.identity()
    parts = arg.split(":")
    if parts[0] == "capped":
        slope = float(parts[2]) if len(parts) > 2 else 0.1
        return ConcaveRho.capped(float(parts[1]), slope)
    if parts[0] == "fractional":
        fraction = float(parts[1]) if len(parts) > 1 else 0.01
        slope = float(parts[2]) if len(parts) > 2 else 0.1
        return fractional_energy_family(data, fraction, slope)
    doc = _read_json(arg)
    if doc.get("kind") == "saturating_family":
        return SaturatingFamily(np.asarray(doc["thresholds"], dtype=float),
                                float(doc.get("slope", 0.1)))
    return rho_from_json_dict(doc)


def load_objective(args):
    name = args.objective
    if name in ("pca", "gpca"):
        if not args.data:
            raise ValueError(f"--objective {name} requires --data")
        data = load_vectors_csv(args.data)
        if name == "pca":
            return PCAObjective(data)
        return GeneralizedPCAObjective(data, _load_rho(args.rho, data))
    if name in ("qcut", "cut"):
        if not args.graph:
            raise ValueError(f"--objective {name} requires --graph")
        return QuantumCutObjective(WeightedDigraph.from_json_dict(_read_json(args.graph)))
    if name == "table":
        if not args.table:
            raise ValueError("--objective table requires --table")
        return TableObjective(_read_json(args.table)["values"])
    raise ValueError(f"unknown objective {name!r}")


def _load_cost(arg, lat):
    arg = arg or "uniform"
    if arg.split(":")[0] == "uniform":
        parts = arg.split(":")
        step = float(parts[1]) if len(parts) > 1 else 1.0
        return ModularCost.uniform(lat, step=step)
    doc = _read_json(arg)
    incs = {int(k): float(v) for k, v in doc["increments"].items()}
    return ModularCost(lat, incs, base=float(doc.get("base", 0.0)))


def _emit(doc: dict, args, summary: str) -> None:
    print(summary)
    if getattr(args, "report", None):
        path = Path(args.report)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(json.dumps(doc, indent=2) + "\n")
        print(f"report written to {path}")


def cmd_greedy(args) -> int:
    lat = load_lattice(args.lattice)
    obj = load_objective(args)
    rep = greedy_height(obj, lat, args.k,
                        strategy=strategy_from_name(args.strategy),
                        seed=args.seed)
    where = f"element {rep.element}" if rep.element is not None else "basis in report"
    _emit(rep.to_json_dict(), args,
          f"greedy value {rep.value:.10g} after {len(rep.iterations)} steps ({where})")
    return 0


def cmd_knapsack(args) -> int:
    lat = load_lattice(args.lattice)
    if isinstance(lat, VectorLattice):
        raise TypeError("budgeted greedy runs on finite lattices")
    obj = load_objective(args)
    cost = _load_cost(args.cost, lat)
    rep = greedy_knapsack(obj, lat, cost, args.budget)
    _emit(rep.to_json_dict(), args,
          f"knapsack value {rep.value:.10g} at element {rep.element} "
          f"(winner: {rep.meta['winner']})")
    return 0


def cmd_double_greedy(args) -> int:
    lat = load_lattice(args.lattice)
    obj = load_objective(args)
    rep = double_greedy(obj, lat, strategy=strategy_from_name(args.strategy),
                        seed=args.seed)
    where = f"element {rep.element}" if rep.element is not None else "basis in report"
    _emit(rep.to_json_dict(), args,
          f"double-greedy value {rep.value:.10g} "
          f"in {rep.meta['iterations_used']} iterations ({where})")
    return 0


def cmd_oracle(args) -> int:
    lat = load_lattice(args.lattice)
    obj = load_objective(args)
    cost = _load_cost(args.cost, lat) if args.budget is not None else None
    res = brute_force_max(obj, lat, height_cap=args.k,
                          cost=cost, budget=args.budget)
    _emit(res.to_json_dict(), args,
          f"oracle optimum {res.value:.10g} at element {res.element} "
          f"({res.feasible_count} feasible)")
    return 0


def cmd_diagnose(args) -> int:
    lat = load_lattice(args.lattice)
    obj = load_objective(args)
    directions = list(_GAP_MEASURES) if args.direction == "all" else [args.direction]
    doc: dict = {"reports": {}, "checks": {}}
    failures = []
    for direction in directions:
        rep = _GAP_MEASURES[direction](obj, lat)
        doc["reports"][direction] = rep.to_json_dict()
        if args.max_delta is not None and rep.measured_delta > args.max_delta:
            failures.append(f"{direction} delta {rep.measured_delta:.3e} "
                            f"> {args.max_delta:.3e}")
    if args.check_saturation:
        check = check_saturation_gap_bound(obj, lat)
        doc["checks"]["saturation"] = check.to_json_dict()
        if not check.holds:
            failures.append("saturation bound violated")
    if args.check_coherence:
        dic = Dictionary.from_json_dict(_read_json(args.check_coherence))
        check = check_coherence_bound(dic)
        doc["checks"]["coherence"] = check.to_json_dict()
        if check.applicable and not check.holds:
            failures.append("coherence bound violated")
    doc["ok"] = not failures
    print(json.dumps(doc, indent=2))
    if getattr(args, "report", None):
        Path(args.report).write_text(json.dumps(doc, indent=2) + "\n")
    for line in failures:
        print(f"FAIL: {line}", file=sys.stderr)
    return 1 if failures else 0


def cmd_experiment(args) -> int:
    if args.which != "appendix":
        raise ValueError(f"unknown experiment {args.which!r}")
    spec = MixtureSpec(q=args.q, n_samples=args.samples, seed=args.seed)
    rho = None if args.rho is None else _load_rho(args.rho, generate_mixture(spec))
    report = run_appendix_experiment(spec, rho=rho,
                                     strategy=Grid(width=args.width))
    out = Path(args.out)
    paths = write_scatter_csvs(generate_mixture(spec), out)
    summary = write_summary_json(report, out / "summary.json")
    print(f"plain plane {report.plain.plane}, "
          f"generalized plane {report.generalized.plane}")
    for p in paths + [summary]:
        print(f"wrote {p}")
    return 0


def _add_instance_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--objective", required=True,
                   choices=["pca", "gpca", "qcut", "cut", "table"])
    p.add_argument("--lattice", required=True,
                   help="set:N, vector:D, or a lattice JSON file")
    p.add_argument("--data", help="CSV data file for pca/gpca")
    p.add_argument("--graph", help="JSON graph file for qcut/cut")
    p.add_argument("--table", help="JSON value-table file")
    p.add_argument("--rho", help="gpca reshaping (see module help)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--report", help="write the full JSON report here")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="latmax",
        description="Monotone objective maximization over finite and "
                    "subspace lattices.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("greedy", help="height-capped greedy ascent")
    _add_instance_flags(p)
    p.add_argument("--k", type=int, required=True, help="height budget")
    p.add_argument("--strategy", help="inner direction strategy")
    p.set_defaults(func=cmd_greedy)

    p = sub.add_parser("knapsack", help="budgeted density greedy")
    _add_instance_flags(p)
    p.add_argument("--budget", type=float, required=True)
    p.add_argument("--cost", help="uniform[:STEP] or a JSON cost file")
    p.set_defaults(func=cmd_knapsack)

    p = sub.add_parser("double-greedy", help="unconstrained ascent/descent")
    _add_instance_flags(p)
    p.add_argument("--strategy", help="inner direction strategy")
    p.set_defaults(func=cmd_double_greedy)

    p = sub.add_parser("oracle", help="exhaustive maximization")
    _add_instance_flags(p)
    p.add_argument("--k", type=int, help="height cap")
    p.add_argument("--budget", type=float, help="cost budget")
    p.add_argument("--cost", help="uniform[:STEP] or a JSON cost file")
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("diagnose", help="measure submodularity gaps")
    _add_instance_flags(p)
    p.add_argument("--direction", default="all",
                   choices=["all", "strong", "downward", "upward"])
    p.add_argument("--max-delta", type=float,
                   help="fail (exit 1) if a measured gap exceeds this")
    p.add_argument("--check-saturation", action="store_true",
                   help="also assert the coherence-scaled gap bound")
    p.add_argument("--check-coherence", metavar="DICT_JSON",
                   help="also assert the lattice-coherence bound for a dictionary")
    p.set_defaults(func=cmd_diagnose)

    p = sub.add_parser("experiment", help="canned studies")
    p.add_argument("which", choices=["appendix"])
    p.add_argument("--q", type=float, default=0.95)
    p.add_argument("--samples", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--width", type=float, default=0.025)
    p.add_argument("--rho", help="override the per-datum reshaping")
    p.add_argument("--out", default="appendix_out")
    p.set_defaults(func=cmd_experiment)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, TypeError, KeyError, NotALatticeError,
            FileNotFoundError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())

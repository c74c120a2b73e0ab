"""Command-line interface: run, sweep, verify, plan, pa.

Exit codes: 0 success (including clean protocol rejects), 1 suite or
internal failure, 2 usage error.  All output is byte-stable for a fixed
(config, seed).
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass

from . import analysis, verify
from .protocols import (ProtocolParams, Strategy, honest, qbc2, run_protocol)

GROUND_TRUTH_SCHEMA = "qbc2-ground-truth-v1"
DEFAULT_GROUND_TRUTH = "qbc2_ground_truth.json"


@dataclass(frozen=True)
class RunConfig:
    """Parsed command selection; mirrors the JSON config file layout."""

    command: str
    options: dict


class UsageError(ValueError):
    pass


def _parse_cheat(spec: str | None, role: str) -> Strategy:
    """Parse strategy flags like "qubit-lie,position=2" or "angle=0.3927".

    A bare key=value list for the receiver implies uniform-angle (the only
    receiver cheat); the committer must name a kind.
    """
    if spec is None:
        return honest(role)
    kind = None
    params: dict = {}
    for token in spec.split(","):
        token = token.strip()
        if not token:
            continue
        if "=" in token:
            key, raw = token.split("=", 1)
            try:
                value: object = int(raw)
            except ValueError:
                try:
                    value = float(raw)
                except ValueError:
                    value = raw
            params[key.strip()] = value
        elif kind is None:
            kind = token
        else:
            raise UsageError(f"two strategy kinds in {spec!r}")
    if kind is None:
        if role == "receiver":
            kind = "uniform-angle"
        else:
            raise UsageError("committer cheat needs a named kind")
    return Strategy(role, kind, params)


def _parse_grid(spec: str) -> list[int]:
    """Parse "2:8" (inclusive) or "2,4,6"."""
    if ":" in spec:
        lo, hi = spec.split(":", 1)
        return list(range(int(lo), int(hi) + 1))
    return [int(x) for x in spec.split(",") if x]


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qbclab",
        description="Bit-commitment protocol laboratory: runs, sweeps, "
                    "invariant suites, parameter planning.")
    parser.add_argument("--config", help="JSON file with default option values")
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="execute one protocol round")
    p_run.add_argument("--protocol", required=True)
    p_run.add_argument("--n", type=int)
    p_run.add_argument("--m", type=int)
    p_run.add_argument("--N", type=int, dest="big_n")
    p_run.add_argument("--overlap", type=float)
    p_run.add_argument("--eta", type=float)
    p_run.add_argument("--seed", type=int)
    p_run.add_argument("--bit", type=int, choices=(0, 1))
    p_run.add_argument("--adam-cheat", help="committer strategy, e.g. "
                                            "qubit-lie,position=2")
    p_run.add_argument("--babe-cheat", help="receiver strategy, e.g. "
                                            "angle=0.3927")
    p_run.add_argument("--measured-rule", choices=("strict", "literal"))

    p_sweep = sub.add_parser("sweep", help="exact security sweep over a grid")
    p_sweep.add_argument("--protocol", required=True, choices=("qbc0", "qbc2"))
    p_sweep.add_argument("--grid", required=True,
                         help="n (qbc0) or m (qbc2) values, 2:8 or 2,4,6")
    p_sweep.add_argument("--overlap", type=float)
    p_sweep.add_argument("--seed", type=int, default=0)
    p_sweep.add_argument("--format", choices=("csv", "json"), default="csv")
    p_sweep.add_argument("--out", help="output path (default stdout)")

    p_verify = sub.add_parser("verify", help="run named invariant suites")
    p_verify.add_argument("--suite", action="append",
                          help="suite name (repeatable; default all)")
    p_verify.add_argument("--trials", type=int)
    p_verify.add_argument("--n", type=int)
    p_verify.add_argument("--list", action="store_true",
                          help="list suite names and exit")

    p_plan = sub.add_parser("plan", help="permutation-protocol parameters "
                                         "for an epsilon target")
    p_plan.add_argument("--epsilon", type=float, required=True)
    p_plan.add_argument("--p-a", type=float)
    p_plan.add_argument("--p1-bar", type=float)
    p_plan.add_argument("--ground-truth", default=DEFAULT_GROUND_TRUTH)
    p_plan.add_argument("--out", help="update this ground-truth JSON file")

    p_pa = sub.add_parser("pa", help="compute and cache the permutation-"
                                     "identification optimum")
    p_pa.add_argument("--tol", type=float, default=1e-9)
    p_pa.add_argument("--out", help="ground-truth JSON path "
                                    f"(default {DEFAULT_GROUND_TRUTH})")
    return parser


def _apply_config(args: argparse.Namespace) -> None:
    if not getattr(args, "config", None):
        return
    with open(args.config, "r", encoding="utf-8") as fh:
        overrides = json.load(fh)
    if not isinstance(overrides, dict):
        raise UsageError("config file must hold a JSON object")
    for key, value in overrides.items():
        attr = key.replace("-", "_")
        if attr == "N":
            attr = "big_n"
        if not hasattr(args, attr):
            raise UsageError(f"config key {key!r} unknown for this command")
        if getattr(args, attr) in (None, False):
            setattr(args, attr, value)


def cmd_run(args: argparse.Namespace) -> int:
    if args.seed is None:
        raise UsageError("run requires --seed")
    try:
        params = ProtocolParams(args.protocol, args.n if args.n else 0,
                                args.seed, m=args.m, N=args.big_n,
                                overlap=args.overlap, eta=args.eta)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    try:
        adam = _parse_cheat(args.adam_cheat, "committer")
        babe = _parse_cheat(args.babe_cheat, "receiver")
        if args.bit is not None:
            adam = Strategy(adam.role, adam.kind,
                            dict(adam.params, bit=args.bit))
        kwargs = {}
        if args.protocol == "qbc3" and args.measured_rule:
            kwargs["measured_rule"] = args.measured_rule
        elif args.measured_rule:
            raise UsageError("--measured-rule applies only to qbc3")
        transcript = run_protocol(params, adam, babe, **kwargs)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    sys.stdout.write(transcript.render())
    return 0


def cmd_sweep(args: argparse.Namespace) -> int:
    try:
        grid = _parse_grid(args.grid)
    except ValueError as exc:
        raise UsageError(f"bad grid {args.grid!r}: {exc}") from exc
    reports = []
    for point in grid:
        try:
            reports.extend(analysis.us_ip_sweep(
                args.protocol, [point], overlap=args.overlap, seed=args.seed))
        except ValueError as exc:
            sys.stderr.write(f"grid point {point}: {exc}\n")
    fits = analysis.sweep_fits(reports)
    if args.format == "csv":
        text = analysis.render_csv(reports)
    else:
        text = analysis.render_json(reports, fits=fits)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


def cmd_verify(args: argparse.Namespace) -> int:
    if args.list:
        sys.stdout.write("\n".join(verify.SUITES) + "\n")
        return 0
    try:
        results, text = verify.run_suites(args.suite, args.trials, args.n)
    except KeyError as exc:
        raise UsageError(f"unknown suite {exc.args[0]!r}") from exc
    sys.stdout.write(text)
    return 0 if all(r.passed for r in results) else 1


def _load_ground_truth(path: str) -> dict:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except FileNotFoundError:
        return {}


def _write_ground_truth(path: str, payload: dict) -> None:
    payload["schema"] = GROUND_TRUTH_SCHEMA
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, sort_keys=True, indent=2)
        fh.write("\n")


def cmd_plan(args: argparse.Namespace) -> int:
    stored = _load_ground_truth(args.ground_truth)
    p_a = args.p_a if args.p_a is not None else stored.get("p_a")
    if p_a is None:
        raise UsageError("no --p-a given and no ground-truth p_a cached; "
                         "run `qbclab pa` first")
    p1_bar = args.p1_bar
    if p1_bar is None:
        p1_bar = stored.get("p1_bar", {}).get(repr(args.epsilon))
    try:
        if p1_bar is None:
            import math
            m = max(1, math.ceil(math.log(args.epsilon) / math.log(p_a) - 1e-12))
            if p_a ** m > args.epsilon:
                m += 1
            p1_bar = analysis.p1_max_search(min(m, 4), args.epsilon)
        result = analysis.qbc2_planner(args.epsilon, p_a, p1_bar)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    payload = {
        "epsilon": result.epsilon,
        "m": result.m,
        "n": result.n,
        "N": result.N,
        "p_a": p_a,
        "p1_bar": p1_bar,
        "pac_bound": result.pac_bound,
        "pu_bound": result.pu_bound,
        "p0_value": result.p0_value,
    }
    sys.stdout.write(json.dumps({"planner": payload}, sort_keys=True,
                                indent=2) + "\n")
    if args.out:
        stored = _load_ground_truth(args.out)
        stored.setdefault("planner", {})[repr(args.epsilon)] = payload
        stored.setdefault("p1_bar", {})[repr(args.epsilon)] = p1_bar
        _write_ground_truth(args.out, stored)
    return 0


def cmd_pa(args: argparse.Namespace) -> int:
    value, _, cert = qbc2.qbc2_pa_detail(args.tol)
    q, _, q_cert = qbc2.qbc2_partner_detail()
    payload = {
        "p_a": value,
        "p_a_certificate": cert,
        "tol": args.tol,
        "partner_q": q,
        "partner_q_certificate": q_cert,
        "name_lie_flat": qbc2.qbc2_name_lie_enumeration(),
        "measured_name_lie": qbc2.qbc2_measured_name_lie_value(),
        "p1_pi8": qbc2.qbc2_p1(0.39269908169872414),
    }
    sys.stdout.write(json.dumps(payload, sort_keys=True, indent=2) + "\n")
    out = args.out if args.out else DEFAULT_GROUND_TRUTH
    stored = _load_ground_truth(out)
    stored.update(payload)
    _write_ground_truth(out, stored)
    return 0


COMMANDS = {
    "run": cmd_run,
    "sweep": cmd_sweep,
    "verify": cmd_verify,
    "plan": cmd_plan,
    "pa": cmd_pa,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        _apply_config(args)
        return COMMANDS[args.command](args)
    except UsageError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2
    except Exception as exc:  # internal failure: report, distinct exit code
        sys.stderr.write(f"internal error: {exc}\n")
        return 1


if __name__ == "__main__":
    sys.exit(main())

"""Command-line front end: solve, reduce, verify, net, sweep.

Exit codes: 0 success (optimal where applicable), 1 parse or usage errors,
2 infeasible instance, 3 numerical failure, 4 cross-check mismatch (oracle
disagreement, equivalence gap, or a violated net bound).
"""

from __future__ import annotations

import argparse
import csv
import io
import random
import sys
import time
from concurrent.futures import ProcessPoolExecutor


from . import campaigns, iofmt
from .errors import DelsarteError, OracleTooLarge, ParseError
from .groups import make_group
from .lp import DelsarteInstance, Status, solve_delsarte, vertex_enum_oracle
from .nets import build_net, net_approximation_error, project_coeffs, quantize
from .reduction import reduce_instance, verify_equivalence

_STATUS_EXIT = {Status.OPTIMAL: 0, Status.INFEASIBLE: 2, Status.NUMERICAL_FAILURE: 3}


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="delsarte",
        description="Extremal problems for positive definite functions on finite abelian groups.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_solve = sub.add_parser("solve", help="solve an instance file")
    p_solve.add_argument("--instance", required=True, help="path to a JSON instance file")
    p_solve.add_argument("--out", default=None, help="write the result record here (default stdout)")
    p_solve.add_argument("--format", choices=("json", "csv"), default="json")
    p_solve.add_argument("--tolerance", type=float, default=None, help="feasibility tolerance override")
    p_solve.add_argument("--oracle", action="store_true", help="cross-check against vertex enumeration")

    p_reduce = sub.add_parser("reduce", help="reduce an instance to the subgroup generated by W")
    p_reduce.add_argument("--instance", required=True)
    p_reduce.add_argument("--out", default=None, help="write the reduced instance file here")
    p_reduce.add_argument("--report", default=None, help="write the reduction report here (default stdout)")
    p_reduce.add_argument("--verify", action="store_true", help="solve both instances and compare")

    p_verify = sub.add_parser("verify", help="run a property campaign")
    p_verify.add_argument("suite", help="one of: " + ", ".join(campaigns.SUITES))
    p_verify.add_argument("--seed", type=int, default=0)
    p_verify.add_argument("--count", type=int, default=None)

    p_net = sub.add_parser("net", help="build an approximation net for a solved instance")
    p_net.add_argument("--instance", required=True)
    p_net.add_argument("--epsilon", type=float, default=0.2)
    p_net.add_argument("--grain", type=int, default=None, help="granularity override (must exceed n/epsilon)")
    p_net.add_argument("--k-size", type=int, default=None, help="random sample-set size (default: whole group)")
    p_net.add_argument("--seed", type=int, default=0)
    p_net.add_argument("--out", default=None)

    p_sweep = sub.add_parser("sweep", help="solve a parametrized family and emit CSV")
    p_sweep.add_argument("--family", choices=("interval", "q-chain"), required=True)
    p_sweep.add_argument("--n-min", type=int, default=4)
    p_sweep.add_argument("--n-max", type=int, default=8)
    p_sweep.add_argument("--half-width", type=int, default=1)
    p_sweep.add_argument("--out", default=None)
    p_sweep.add_argument("--format", choices=("csv", "json"), default="csv")
    p_sweep.add_argument("--jobs", type=int, default=1)
    return parser


def _load(path: str, tolerance_flag: float | None) -> tuple[DelsarteInstance, float]:
    inst, file_tol = iofmt.load_instance(path)
    tol = tolerance_flag if tolerance_flag is not None else (file_tol if file_tol is not None else 1e-9)
    return inst, tol


def cmd_solve(args: argparse.Namespace) -> int:
    try:
        inst, tol = _load(args.instance, args.tolerance)
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    start = time.perf_counter()
    sol = solve_delsarte(inst, tol=tol)
    elapsed = time.perf_counter() - start

    oracle_info = None
    mismatch = False
    if args.oracle:
        try:
            oracle = vertex_enum_oracle(inst)
            gap = None
            if sol.status == Status.OPTIMAL and oracle.status == Status.OPTIMAL:
                gap = abs(sol.value - oracle.value)
                mismatch = gap > 1e-8 * (1.0 + abs(sol.value))
            else:
                mismatch = sol.status != oracle.status
            oracle_info = {
                "ran": True,
                "status": oracle.status.value,
                "value": oracle.value,
                "gap": gap,
                "ok": not mismatch,
            }
        except OracleTooLarge as exc:
            oracle_info = {"ran": False, "reason": str(exc)}

    record = iofmt.result_record(inst, sol, tolerance=tol, oracle=oracle_info, timing_seconds=elapsed)
    if args.format == "json":
        iofmt.write_json(args.out, record, sys.stdout)
    else:
        buf = io.StringIO()
        writer = csv.writer(buf)
        writer.writerow(["instance_digest", "status", "value", "certified_upper_bound"])
        writer.writerow(
            [
                record["instance_digest"],
                sol.status.value,
                "" if sol.value is None else repr(sol.value),
                "" if sol.dual is None else repr(sol.dual.certified_upper_bound),
            ]
        )
        if args.out is None:
            sys.stdout.write(buf.getvalue())
        else:
            with open(args.out, "w", encoding="utf-8") as fh:
                fh.write(buf.getvalue())
    if mismatch:
        print("error: oracle cross-check failed", file=sys.stderr)
        return 4
    return _STATUS_EXIT[sol.status]


def cmd_reduce(args: argparse.Namespace) -> int:
    try:
        inst, tol = _load(args.instance, None)
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    rinst = reduce_instance(inst)
    reduced_file = iofmt.instance_to_dict(rinst.reduced)
    report = {
        "version": iofmt.FORMAT_VERSION,
        "instance_digest": inst.digest(),
        "group": list(inst.group.orders),
        "subgroup": {
            "order": rinst.g0.order,
            "elements": [list(g.coords) for g in rinst.g0.elements],
            "generators": [list(g.coords) for g in rinst.g0.generators],
            "canonical_orders": list(rinst.g0.canonical_orders),
        },
        "reduced_instance": reduced_file,
        "qstar": [list(c.coords) for c in sorted(rinst.qstar, key=lambda c: c.index)],
        "q0": [list(c.coords) for c in sorted(rinst.q0, key=lambda c: c.index)],
    }
    gap_bad = False
    if args.verify:
        eq = verify_equivalence(inst, seed=0)
        report["equivalence"] = {
            "original_status": eq.original_status.value,
            "reduced_status": eq.reduced_status.value,
            "value_original": eq.value_original,
            "value_reduced": eq.value_reduced,
            "gap": eq.gap,
            "membership_samples": eq.membership_samples,
            "membership_agreements": eq.membership_agreements,
            "spectrum_transfer_error": eq.spectrum_transfer_error,
            "ok": eq.ok,
        }
        gap_bad = not eq.ok
    if args.out is not None:
        iofmt.write_json(args.out, reduced_file, sys.stdout)
    iofmt.write_json(args.report, report, sys.stdout)
    return 4 if gap_bad else 0


def cmd_verify(args: argparse.Namespace) -> int:
    if args.suite not in campaigns.SUITES:
        print(
            f"error: unknown suite {args.suite!r}; choose from {', '.join(campaigns.SUITES)}",
            file=sys.stderr,
        )
        return 1
    result = campaigns.run_campaign(args.suite, args.seed, args.count)
    for line in result.lines():
        print(line)
    return 0 if result.ok else 1


def cmd_net(args: argparse.Namespace) -> int:
    try:
        inst, tol = _load(args.instance, None)
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    sol = solve_delsarte(inst, tol=tol)
    if sol.status != Status.OPTIMAL:
        print(f"error: instance is {sol.status.value}; nothing to approximate", file=sys.stderr)
        return _STATUS_EXIT[sol.status]
    if args.k_size is None:
        k = list(inst.group.elements())
    else:
        rng = random.Random(args.seed)
        size = max(1, min(args.k_size, inst.group.order))
        k = rng.sample(list(inst.group.elements()), size)
    try:
        net = build_net(inst.q, k, args.epsilon, grain=args.grain)
    except (ValueError, DelsarteError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    coeffs = project_coeffs(sol.f, net)
    quantized = quantize(coeffs, net.m)
    err = net_approximation_error(sol.f, net)
    bound = 2.0 * args.epsilon
    record = {
        "version": iofmt.FORMAT_VERSION,
        "instance_digest": inst.digest(),
        "epsilon": args.epsilon,
        "m": net.m,
        "n_centers": net.n_centers,
        "k": [list(g.coords) for g in net.k],
        "centers": [list(c.coords) for c in net.centers],
        "cells": [[list(c.coords) for c in cell] for cell in net.partition],
        "coeffs": [float(x) for x in coeffs],
        "quantized": [float(x) for x in quantized],
        "approximation_error": err,
        "bound": bound,
        "within_bound": bool(err < bound),
    }
    iofmt.write_json(args.out, record, sys.stdout)
    return 0 if err < bound else 4


def _interval_instance_payload(n: int, half_width: int) -> tuple[list[int], list[list[int]], list[list[int]]]:
    w = sorted({c % n for k in range(half_width + 1) for c in (k, -k)})
    return [n], [[c] for c in w], [[c] for c in range(n)]


def _solve_payload(payload: tuple[list[int], list[list[int]], list[list[int]]]) -> tuple[str, float | None]:
    orders, w_coords, q_coords = payload
    spec = make_group(orders)
    inst = DelsarteInstance(
        spec,
        frozenset(spec.element(c) for c in w_coords),
        frozenset(spec.dual(c) for c in q_coords),
        allow_empty_q=True,
    )
    sol = solve_delsarte(inst)
    return sol.status.value, sol.value


def _sweep_rows(args: argparse.Namespace) -> list[dict]:
    jobs: list[tuple[dict, tuple]] = []
    if args.family == "interval":
        for n in range(args.n_min, args.n_max + 1):
            payload = _interval_instance_payload(n, args.half_width)
            meta = {
                "family": "interval",
                "n": n,
                "half_width": args.half_width,
                "step": "",
                "q_size": n,
            }
            jobs.append((meta, payload))
    else:  # q-chain: fixed group, support shrinking one orbit at a time
        n = args.n_max
        orders, w_coords, _ = _interval_instance_payload(n, args.half_width)
        spec = make_group(orders)
        orbits: dict[int, list] = {}
        for chi in spec.duals():
            key = min(chi.index, chi.conjugate().index)
            orbits.setdefault(key, []).append(chi)
        keys = sorted(orbits)
        for step in range(len(keys), 0, -1):
            q_coords = [list(c.coords) for key in keys[:step] for c in orbits[key]]
            meta = {
                "family": "q-chain",
                "n": n,
                "half_width": args.half_width,
                "step": step,
                "q_size": len(q_coords),
            }
            jobs.append((meta, (orders, w_coords, q_coords)))

    payloads = [payload for _, payload in jobs]
    if args.jobs > 1 and payloads:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            outcomes = list(pool.map(_solve_payload, payloads))
    else:
        outcomes = [_solve_payload(p) for p in payloads]

    rows = []
    for (meta, _), (status, value) in zip(jobs, outcomes):
        row = dict(meta)
        row["status"] = status
        row["value"] = value
        row["flag"] = ""
        rows.append(row)

    # cross-check monotonicity along the chain: shrinking support can only
    # lower the value, and feasibility can only be lost
    if args.family == "q-chain":
        prev_value = None
        prev_status = None
        for row in rows:
            if prev_status == "infeasible" and row["status"] == "optimal":
                row["flag"] = "feasibility_regained"
            if (
                row["status"] == "optimal"
                and prev_value is not None
                and row["value"] > prev_value + 1e-9 * (1.0 + abs(prev_value))
            ):
                row["flag"] = "monotonicity"
            if row["status"] == "optimal":
                prev_value = row["value"]
            prev_status = row["status"]
    else:
        for row in rows:
            if row["status"] == "optimal":
                upper = 2 * args.half_width + 1
                if not -1e-9 <= row["value"] <= min(upper, row["n"]) + 1e-9 * (1 + upper):
                    row["flag"] = "bounds"
    return rows


def cmd_sweep(args: argparse.Namespace) -> int:
    if args.n_min > args.n_max and args.family == "interval":
        rows: list[dict] = []
    else:
        try:
            rows = _sweep_rows(args)
        except DelsarteError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return 1
    header = ["family", "n", "half_width", "step", "q_size", "status", "value", "flag"]
    if args.format == "json":
        iofmt.write_json(args.out, rows, sys.stdout)
    else:
        buf = io.StringIO()
        writer = csv.writer(buf)
        writer.writerow(header)
        for row in rows:
            value = row["value"]
            writer.writerow(
                [row[k] for k in header[:5]]
                + [row["status"], "" if value is None else repr(value), row["flag"]]
            )
        if args.out is None:
            sys.stdout.write(buf.getvalue())
        else:
            with open(args.out, "w", encoding="utf-8") as fh:
                fh.write(buf.getvalue())
    flagged = [row for row in rows if row["flag"]]
    for row in flagged:
        print(f"warning: row {row} flagged {row['flag']}", file=sys.stderr)
    return 0


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "solve":
            return cmd_solve(args)
        if args.command == "reduce":
            return cmd_reduce(args)
        if args.command == "verify":
            return cmd_verify(args)
        if args.command == "net":
            return cmd_net(args)
        return cmd_sweep(args)
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except DelsarteError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())

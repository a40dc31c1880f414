"""Command-line entry point: ``magicsurgery {build,verify,teleport,mc,cost}``.

Every artifact records the package version, the seed and the full argument
set, so runs can be repeated from their output alone. Exit status is 0 only
when every requested check passes.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
import time
from pathlib import Path
from typing import Any

import numpy as np

from . import __version__, cost, css, diagonal, noise, protocol
from .color_code import build_code
from .kernels import BACKEND
from .surface_code import build_surface
from .surgery import merge, merged_to_dict

EXIT_FAIL = 1
EXIT_USAGE = 2
EXIT_PARTIAL = 3


class UsageError(Exception):
    pass


def _meta(args: argparse.Namespace) -> dict[str, Any]:
    config = {k: v for k, v in vars(args).items() if k != "func"}
    return {"version": __version__, "backend": BACKEND, "seed": getattr(args, "seed", None), "config": config}


def _dump_json(obj: Any) -> str:
    return json.dumps(obj, sort_keys=True, indent=1, default=str)


def _emit(args, payload: dict[str, Any], table: list[dict[str, Any]] | None = None) -> None:
    """Write ``payload`` as JSON or ``table`` as CSV to ``--out`` (or stdout)."""
    if args.format == "csv" and table is not None:
        buf = io.StringIO()
        buf.write("# " + json.dumps(payload.get("meta", {}), sort_keys=True, default=str) + "\n")
        if table:
            w = csv.DictWriter(buf, fieldnames=list(table[0]), lineterminator="\n")
            w.writeheader()
            w.writerows(table)
        text = buf.getvalue()
    else:
        text = _dump_json(payload) + "\n"
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
        print(_dump_json(payload.get("summary", {})))
    else:
        sys.stdout.write(text)


def _parse_grid(text: str) -> list[float]:
    try:
        grid = [float(v) for v in text.replace(",", " ").split()]
    except ValueError as exc:
        raise UsageError(f"bad grid {text!r}: {exc}") from None
    if not grid:
        raise UsageError("grid is empty")
    return grid


# build -------------------------------------------------------------------


def _build(kind: str, l: int | None, d: int | None):
    if kind == "color3d":
        if l is None:
            raise UsageError("build color3d needs --l")
        bundle = build_code(l)
        return bundle.code, {"interface": bundle.interface.to_dict(), "l": l}
    if kind == "surface":
        if d is None:
            raise UsageError("build surface needs --d")
        bundle = build_surface(d)
        return bundle.code, {"interface": bundle.interface.to_dict(), "d": d}
    if l is None:
        l = (d - 1) // 2 if d is not None else None
    if l is None:
        raise UsageError("build merged needs --l (or --d = 2l+1)")
    color = build_code(l)
    surf = build_surface(2 * l + 1)
    merged = merge(color.code, color.interface, surf.code, surf.interface)
    return merged.code, {"merged": merged_to_dict(merged), "l": l}


def cmd_build(args) -> int:
    code, extra = _build(args.kind, args.l, args.d)
    summary = {
        "kind": args.kind,
        "n": code.n,
        "x_checks": len(code.x_checks),
        "z_checks": len(code.z_checks),
        "rank_x": code.rank_x,
        "rank_z": code.rank_z,
        "k": css.num_logical(code),
    }
    if "merged" in extra:
        summary["new_z_checks"] = len(extra["merged"]["provenance"]["new_z_check_ids"])
        data = extra["merged"]
    else:
        data = css.code_to_dict(code)
        data["interface"] = extra["interface"]
    data["meta"] = _meta(args)
    data["summary"] = summary
    args.format = "json"
    _emit(args, data)
    return 0


# verify ------------------------------------------------------------------


def cmd_verify(args) -> int:
    try:
        raw = json.loads(Path(args.file).read_text(encoding="utf-8"))
        code = css.code_from_dict(raw)
    except (OSError, ValueError, KeyError) as exc:
        print(f"error: cannot read code file: {exc}", file=sys.stderr)
        return EXIT_FAIL
    report = css.validate(code)
    out: dict[str, Any] = {"meta": _meta(args), "n": code.n, "valid": report.ok}
    if not report.ok:
        out["problems"] = report.problems
        out["noncommuting"] = [list(p) for p in report.noncommuting]
        out["passed"] = False
        args.format = "json"
        _emit(args, {**out, "summary": out})
        return EXIT_FAIL
    out["k"] = css.num_logical(code)
    t0 = time.perf_counter()
    cert = css.distance_brute_force(code, args.wmax, budget=args.budget, jobs=args.jobs, partial_ok=True)
    out["certificate"] = {
        "checked_weight": cert.checked_weight,
        "found_weight": cert.found_weight,
        "witness": None if cert.witness is None else str(cert.witness),
        "witness_type": cert.witness_type,
        "partial": cert.partial,
        "summary": cert.summary(),
    }
    out["seconds"] = round(time.perf_counter() - t0, 3)
    ok = not cert.partial
    if args.expect_distance is not None:
        found = cert.found_weight
        ok = ok and (found == args.expect_distance if found is not None else cert.checked_weight < args.expect_distance)
    out["passed"] = ok
    args.format = "json"
    _emit(args, {**out, "summary": {"passed": ok, "certificate": cert.summary(), "partial": cert.partial}})
    if cert.partial:
        return EXIT_PARTIAL
    return 0 if ok else EXIT_FAIL


# teleport ------------------------------------------------------------------


def _teleport_dense(args) -> tuple[bool, list[dict[str, Any]]]:
    spec = diagonal.NAMED_SPECS[args.gate]()
    rng = np.random.default_rng(args.seed)
    target = spec.matrix()
    rows = []
    ok = True
    for m_zz, m_x in diagonal.all_outcomes(spec.n):
        worst = 1.0
        for _ in range(args.states):
            psi = diagonal.random_state(spec.n, rng)
            run = diagonal.simulate_teleport(spec, psi, forced=(m_zz, m_x))
            worst = min(worst, diagonal.fidelity(run.output, target @ psi))
        passed = worst >= 1 - args.tol
        ok &= passed
        outcome = diagonal.correction_operator(spec, m_zz, m_x)
        rows.append(
            {
                "branch": "".join(map(str, m_zz)) + ":" + "".join(map(str, m_x)),
                "correction": " ".join(outcome.labels(subscripts=spec.n > 1)) or "I",
                "min_fidelity": worst,
                "passed": passed,
            }
        )
    return ok, rows


def _teleport_physical(args) -> tuple[bool, list[dict[str, Any]], list[str]]:
    setup = protocol.default_setup(1)
    reports = protocol.teleport_all_branches(setup)
    rows = [
        {
            "branch": f"{r.input_state}:{r.m_zz}{r.m_x}",
            "input": r.input_state,
            "expected": r.expected_state,
            "m_zz": r.m_zz,
            "m_x": r.m_x,
            "seed": r.transcript.seed,
            "passed": r.passed,
        }
        for r in reports
    ]
    return all(r.passed for r in reports), rows, [r.transcript.to_jsonl() for r in reports]


def cmd_teleport(args) -> int:
    transcripts: list[str] = []
    if args.mode == "logical-dense":
        ok, rows = _teleport_dense(args)
    else:
        ok, rows, transcripts = _teleport_physical(args)
    failed = [r["branch"] for r in rows if not r["passed"]]
    gate = args.gate if args.mode == "logical-dense" else "S (resource T^2 on the color code)"
    summary = {"gate": gate, "mode": args.mode, "branches": len(rows), "passed": len(rows) - len(failed)}
    if args.mode == "logical-dense":
        summary["key_table"] = [[r.key, r.gate] for r in diagonal.correction_key_table(diagonal.NAMED_SPECS[args.gate]())]
    if args.transcript:
        Path(args.transcript).write_text("".join(transcripts) if transcripts else _dump_json(rows) + "\n", encoding="utf-8")
    _emit(args, {"meta": _meta(args), "summary": summary, "branches": rows}, rows)
    for b in failed:
        print(f"failed branch {b}", file=sys.stderr)
    return 0 if ok else EXIT_FAIL


# mc --------------------------------------------------------------------------


def cmd_mc(args) -> int:
    grid = _parse_grid(args.p_grid)
    l = args.l or 1
    color = build_code(l)
    surf = build_surface(2 * l + 1)
    code = merge(color.code, color.interface, surf.code, surf.interface).code
    audit = noise.weight_one_audit(code)
    results = []
    for p in grid:
        model = noise.NoiseModel(args.kind, p, args.seed)
        results.append(noise.run_mc(code, model, args.trials, jobs=args.jobs))
    rows = [{"kind": "mc", **noise.result_dict(r)} for r in results]
    for r in rows:
        r.pop("meta")
    summary: dict[str, Any] = {"n": code.n, "weight_one_accepted": audit.accepted, "weight_one_total": audit.total}
    try:
        slope, err = noise.slope_fit(grid, [r.post_selected_rate for r in results])
        summary["mc_exponent"] = {"slope": slope, "stderr": err, "ci95": [slope - 1.96 * err, slope + 1.96 * err]}
    except noise.InsufficientData as exc:
        summary["mc_exponent"] = {"error": str(exc)}
    if args.kind == "depolarizing":
        table = noise.stratified_table(code, seed=args.seed)
        strat = [table.rate(p) for p in grid]
        for s in strat:
            rows.append({"kind": "stratified", "p": s["p"], "post_selected_rate": s["rate"],
                         "ci_low": s["rate_low"], "ci_high": s["rate_high"]})
        slope, err = noise.slope_fit(grid, [s["rate"] for s in strat])
        summary["stratified_exponent"] = {"slope": slope, "stderr": err, "ci95": [slope - 1.96 * err, slope + 1.96 * err]}
        summary["strata"] = [[s.weight, s.total, s.accepted, s.failures, s.exhaustive] for s in table.strata]
    keys = sorted({k for r in rows for k in r})
    table_rows = [{k: r.get(k, "") for k in keys} for r in rows]
    _emit(args, {"meta": _meta(args), "summary": summary, "results": rows}, table_rows)
    return 0 if audit.accepted == 0 else EXIT_FAIL


# cost ------------------------------------------------------------------------


def cmd_cost(args) -> int:
    params = cost.CostModelParams.load(args.config) if args.config else cost.CostModelParams()
    grid = _parse_grid(args.eps_grid) if args.eps_grid is not None else list(cost.default_grid(args.points))
    rows = cost.emit_comparison(params, grid)
    exps = {s: vars(cost.asymptotic_exponent(params, s)) for s in cost.SCHEMES}
    star = cost.crossover(params, grid)
    summary = {
        "gamma": cost.gamma(params.n_d, params.k_d, params.d_d),
        "exponents": exps,
        "crossover_epsilon": star,
        "crossover_note": "model-dependent, depends on every constant in params",
    }
    meta = {**_meta(args), "params": params.to_dict()}
    _emit(args, {"meta": meta, "summary": summary, "rows": rows}, rows)
    return 0


# parser ---------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--out", help="output file (default: stdout)")
    common.add_argument("--jobs", type=int, default=1)
    common.add_argument("--format", choices=("json", "csv"), help="default: csv for mc and cost, else json")

    p = argparse.ArgumentParser(prog="magicsurgery", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__} ({BACKEND})")
    sub = p.add_subparsers(dest="command", required=True)

    b = sub.add_parser("build", parents=[common], help="construct a code and write it as JSON")
    b.add_argument("kind", choices=("color3d", "surface", "merged"))
    size = b.add_mutually_exclusive_group()
    size.add_argument("--l", type=int)
    size.add_argument("--d", type=int)
    b.set_defaults(func=cmd_build)

    v = sub.add_parser("verify", parents=[common], help="validate a code file and certify its distance")
    v.add_argument("file")
    v.add_argument("--wmax", type=int, default=3)
    v.add_argument("--budget", type=int, default=css.DEFAULT_DISTANCE_BUDGET)
    v.add_argument("--expect-distance", type=int)
    v.set_defaults(func=cmd_verify)

    t = sub.add_parser("teleport", parents=[common], help="check teleportation on every outcome branch")
    t.add_argument("--gate", choices=sorted(diagonal.NAMED_SPECS), default="T")
    t.add_argument("--mode", choices=("logical-dense", "physical-clifford-analog"), default="logical-dense")
    t.add_argument("--states", type=int, default=20, help="random inputs per branch")
    t.add_argument("--tol", type=float, default=1e-10)
    t.add_argument("--transcript", help="write per-branch transcripts here")
    t.set_defaults(func=cmd_teleport)

    m = sub.add_parser("mc", parents=[common], help="Monte Carlo on the merged code")
    m.add_argument("--l", type=int, default=1)
    m.add_argument("--p-grid", default="1e-3,3e-3,1e-2")
    m.add_argument("--trials", type=int, default=10**6)
    m.add_argument("--kind", choices=noise.KINDS, default="depolarizing")
    m.set_defaults(func=cmd_mc)

    c = sub.add_parser("cost", parents=[common], help="overhead comparison table")
    c.add_argument("--config", help="JSON file with cost parameters")
    c.add_argument("--eps-grid", help="comma-separated target errors")
    c.add_argument("--points", type=int, default=46, help="size of the default grid 1e-3..1e-15")
    c.set_defaults(func=cmd_cost)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "jobs", 1) < 1:
        parser.error("--jobs must be at least 1")
    if args.format is None:
        args.format = "csv" if args.command in ("mc", "cost") else "json"
    try:
        return args.func(args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"{parser.prog}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ValueError, cost.CostError, css.DistanceBudgetExceeded) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())

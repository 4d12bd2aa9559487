"""Command-line entry point.

One binary, subcommand style; all randomness flows from explicit --seed
flags.  Exit codes: 0 success, 1 invariant or construction failure,
2 usage or I/O error, 3 feasibility-guard refusal.  Machine outputs
(CSV, JSON, vertex-set files) are byte-identical across reruns and
worker counts; wall-clock is confined to manifests, whose timestamps
are the only fields allowed to differ between identical runs.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import logging
import math
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from datetime import datetime, timezone
from pathlib import Path

import numpy as np
import scipy

from . import __version__
from .bounds import union_bound_report
from .containers import ContainerParams, build_containers, check_invariants
from .enumeration import census, greedy_middle_layers, proposition_bracket
from .errors import (
    ConstructionError,
    FeasibilityError,
    InvariantViolation,
    PreconditionError,
)
from .experiments import run_trial, threshold_points, window_points
from .kleitman import (
    kleitman_min_edges,
    verify_kleitman_exhaustive,
    verify_kleitman_randomized,
)
from .lattice import (
    VertexSet,
    layer_vertex_set,
    read_vertex_set,
    write_vertex_set,
)
from .solver import max_antichain_exact

EXPERIMENT_CSV_HEADER = "mode,n,t,c_or_p,trial,sample_size,alpha,pm_t,ratio,millis"


@dataclass
class RunManifest:
    """Replay record written next to every experiment CSV."""

    command: list[str]
    seeds: list[int]
    versions: dict[str, str]
    started: str
    finished: str
    input_digests: dict[str, str] = field(default_factory=dict)
    output_digests: dict[str, str] = field(default_factory=dict)


def _versions() -> dict[str, str]:
    out = {"spernerlab": __version__, "numpy": np.__version__, "scipy": scipy.__version__}
    try:
        import numba

        out["numba"] = numba.__version__
    except ImportError:
        out["numba"] = "unavailable"
    return out


def _sha256(path: Path) -> str:
    return hashlib.sha256(path.read_bytes()).hexdigest()


def _utcnow() -> str:
    return datetime.now(timezone.utc).isoformat()


def _print_json(payload: object) -> None:
    print(json.dumps(payload, indent=2))


def _fmt(value: float) -> str:
    """Shortest round-trip decimal; deterministic across runs."""
    return repr(float(value))


def cmd_kleitman(args: argparse.Namespace) -> int:
    if args.r is None and not args.all_r:
        raise ValueError("pass --r <r> or --all-r")
    rs = range((1 << args.n) + 1) if args.all_r else [args.r]
    print("r,segment_edges,verified")
    for r in rs:
        edges = kleitman_min_edges(args.n, r)
        if args.exhaustive:
            verified = str(verify_kleitman_exhaustive(args.n, r)).lower()
        elif args.samples is not None:
            verified = str(
                verify_kleitman_randomized(args.n, r, args.samples, args.seed)
            ).lower()
        else:
            verified = ""
        print(f"{r},{edges},{verified}")
    return 0


def cmd_containers(args: argparse.Namespace) -> int:
    i_set = read_vertex_set(args.input)
    params = ContainerParams(
        n=args.n,
        t=args.t,
        eps=args.eps,
        tie_order=args.tie_order,
        allow_loose_eps=args.allow_loose_eps,
    )
    result = build_containers(i_set, params, want_trace=args.trace is not None)
    if args.trace is not None:
        with open(args.trace, "w", encoding="utf-8") as fh:
            for step in result.trace:
                fh.write(
                    json.dumps(
                        {
                            "step": step.step,
                            "phase": step.phase,
                            "vertex": step.vertex,
                            "degree": step.degree,
                            "branch": step.branch,
                        }
                    )
                    + "\n"
                )
    prefix = args.out_prefix
    for name, vs in (
        ("s1", result.s1),
        ("s2", result.s2),
        ("f", result.f_s1),
        ("g", result.g),
    ):
        write_vertex_set(vs, f"{prefix}.{name}.txt")
    failures = check_invariants(i_set, params, result)
    report = {
        "n": args.n,
        "t": args.t,
        "eps": args.eps,
        "tie_order": args.tie_order,
        "input_size": len(i_set),
        "sizes": {
            "s1": len(result.s1),
            "s2": len(result.s2),
            "f_s1": len(result.f_s1),
            "g": len(result.g),
        },
        "failures": list(failures),
        "ok": not failures,
    }
    report_path = Path(f"{prefix}.report.json")
    report_path.write_text(json.dumps(report, indent=2) + "\n", encoding="utf-8")
    print(
        f"containers: |S1|={len(result.s1)} |S2|={len(result.s2)} "
        f"|f|={len(result.f_s1)} |g|={len(result.g)} report={report_path}"
    )
    if failures:
        for line in failures:
            print(f"invariant failure: {line}", file=sys.stderr)
        return 1
    return 0


def cmd_maxantichain(args: argparse.Namespace) -> int:
    vs = read_vertex_set(args.input)
    start = time.perf_counter()
    witness = max_antichain_exact(vs)
    millis = (time.perf_counter() - start) * 1000.0
    print("alpha,matching_size,edges,millis")
    print(f"{witness.alpha},{witness.matching_size},{witness.edge_count},{millis:.3f}")
    if args.witness is not None:
        write_vertex_set(witness.antichain, args.witness)
    if args.certificate:
        _print_json(
            {
                "alpha": witness.alpha,
                "chain_count": len(witness.chain_cover),
                "chains": [list(chain) for chain in witness.chain_cover],
            }
        )
    return 0


def _experiment_rows(
    n: int,
    points: list[tuple[float, float]],
    t: int,
    trials: int,
    seed: int,
    jobs: int,
) -> list[tuple[float, int, int, int, float, float]]:
    tasks = [
        (label, p, trial) for label, p in points for trial in range(trials)
    ]
    if jobs <= 1:
        outcomes = [run_trial(n, p, t, seed, trial) for _, p, trial in tasks]
    else:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            futures = [
                pool.submit(run_trial, n, p, t, seed, trial) for _, p, trial in tasks
            ]
            outcomes = [f.result() for f in futures]
    m = math.comb(n, n // 2)
    rows = []
    for (label, p, trial), (size, alpha, ratio) in zip(tasks, outcomes):
        rows.append((label, trial, size, alpha, p * m * t, ratio))
    return rows


def cmd_experiment(args: argparse.Namespace) -> int:
    started = _utcnow()
    if args.mode == "threshold":
        c_values = [float(x) for x in args.c_list.split(",") if x]
        points = threshold_points(args.n, c_values)
        t = 1
    else:
        points = window_points(args.n, args.t, args.p)
        t = args.t
    if not points:
        raise FeasibilityError(
            "every requested experiment point was refused by the feasibility "
            "guard; see the logged reasons"
        )
    if args.trials < 1:
        raise ValueError(f"trials must be positive, got {args.trials}")
    jobs = args.jobs if args.jobs is not None else (os.cpu_count() or 1)
    rows = _experiment_rows(args.n, points, t, args.trials, args.seed, jobs)
    lines = [EXPERIMENT_CSV_HEADER]
    for label, trial, size, alpha, pm_t, ratio in rows:
        lines.append(
            f"{args.mode},{args.n},{t},{_fmt(label)},{trial},{size},{alpha},"
            f"{_fmt(pm_t)},{_fmt(ratio)},-1"
        )
    out = Path(args.out)
    out.write_text("\n".join(lines) + "\n", encoding="utf-8")
    manifest = RunManifest(
        command=list(args.raw_argv),
        seeds=[args.seed],
        versions=_versions(),
        started=started,
        finished=_utcnow(),
        output_digests={out.name: _sha256(out)},
    )
    manifest_path = out.with_name(out.name + ".manifest.json")
    manifest_path.write_text(
        json.dumps(asdict(manifest), indent=2) + "\n", encoding="utf-8"
    )
    print(f"experiment {args.mode}: wrote {len(rows)} rows to {out}")
    return 0


def cmd_bounds(args: argparse.Namespace) -> int:
    report = union_bound_report(args.n_exp, args.t, args.eps)
    payload = asdict(report)
    payload["closes"] = report.closes
    _print_json(payload)
    return 0


def cmd_census(args: argparse.Namespace) -> int:
    result = census(args.n)
    lines = ["s,count"] + [f"{s},{c}" for s, c in enumerate(result.counts)]
    Path(args.out).write_text("\n".join(lines) + "\n", encoding="utf-8")
    print(f"census n={args.n}: total {result.total} antichains, wrote {args.out}")
    return 0


def cmd_greedy(args: argparse.Namespace) -> int:
    vs = greedy_middle_layers(args.n, args.t, args.s, args.seed)
    write_vertex_set(vs, args.out)
    print(f"greedy: antichain of size {len(vs)} written to {args.out}")
    return 0


def cmd_bracket(args: argparse.Namespace) -> int:
    lower, upper = proposition_bracket(args.n, args.s, args.t, args.eps)
    _print_json(
        {
            "log_lower": lower if math.isfinite(lower) else None,
            "log_upper": upper,
            "lower_is_zero": not math.isfinite(lower),
        }
    )
    return 0


def cmd_selftest(args: argparse.Namespace) -> int:
    checks = 0

    def expect(condition: bool, label: str) -> None:
        nonlocal checks
        if not condition:
            raise InvariantViolation(f"selftest failed: {label}")
        checks += 1

    top_n = 8 if args.quick else 10
    for n in range(1, top_n + 1):
        full = VertexSet(n, tuple(range(1 << n)))
        expect(
            max_antichain_exact(full).alpha == math.comb(n, n // 2),
            f"Sperner value on P({n})",
        )
    for n in range(1, 4):
        for r in range((1 << n) + 1):
            expect(verify_kleitman_exhaustive(n, r), f"edge minimality n={n} r={r}")
    if not args.quick:
        expect(verify_kleitman_exhaustive(4, 7), "edge minimality n=4 r=7")
    frozen = {0: (1, 1), 1: (1, 2), 2: (1, 4, 1), 3: (1, 8, 9, 2)}
    for n, counts in frozen.items():
        expect(census(n).counts == counts, f"census n={n}")
    if not args.quick:
        expect(census(5).total == 7581, "census total n=5")
    params = ContainerParams(n=10, t=1, eps=0.2)
    mid = layer_vertex_set(10, 5)
    failures = check_invariants(mid, params, build_containers(mid, params))
    expect(not failures, "container postconditions on the middle layer of P(10)")
    print(f"selftest: {checks} checks passed")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="spernerlab",
        description="Antichains in the Boolean lattice: exact solvers, "
        "containers, censuses, and threshold experiments.",
    )
    parser.add_argument(
        "--version", action="version", version=f"spernerlab {__version__}"
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p = sub.add_parser("kleitman", help="edge-minimal initial segments")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--r", type=int)
    p.add_argument("--all-r", action="store_true")
    p.add_argument("--exhaustive", action="store_true")
    p.add_argument("--samples", type=int)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_kleitman)

    p = sub.add_parser("containers", help="two-phase container decomposition")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--t", type=int, required=True)
    p.add_argument("--eps", type=float, required=True)
    p.add_argument("--input", required=True)
    p.add_argument("--trace", help="write per-step JSONL trace here")
    p.add_argument("--tie-order", choices=["bitmask", "centrality"], default="bitmask")
    p.add_argument("--allow-loose-eps", action="store_true")
    p.add_argument("--out-prefix", required=True)
    p.set_defaults(func=cmd_containers)

    p = sub.add_parser("maxantichain", help="exact maximum antichain with certificate")
    p.add_argument("--input", required=True)
    p.add_argument("--witness", help="write the witness antichain here")
    p.add_argument("--certificate", action="store_true")
    p.set_defaults(func=cmd_maxantichain)

    p = sub.add_parser("experiment", help="Monte Carlo harnesses")
    mode = p.add_subparsers(dest="mode", required=True)
    pt = mode.add_parser("threshold", help="p = c/n sweep")
    pt.add_argument("--n", type=int, required=True)
    pt.add_argument("--c-list", required=True, help="comma-separated c values")
    pt.add_argument("--trials", type=int, required=True)
    pt.add_argument("--seed", type=int, required=True)
    pt.add_argument("--out", required=True)
    pt.add_argument("--jobs", type=int)
    pt.set_defaults(func=cmd_experiment)
    pw = mode.add_parser("window", help="single p, t middle layers")
    pw.add_argument("--n", type=int, required=True)
    pw.add_argument("--t", type=int, required=True)
    pw.add_argument("--p", type=float, required=True)
    pw.add_argument("--trials", type=int, required=True)
    pw.add_argument("--seed", type=int, required=True)
    pw.add_argument("--out", required=True)
    pw.add_argument("--jobs", type=int)
    pw.set_defaults(func=cmd_experiment)

    p = sub.add_parser("bounds", help="union-bound report (JSON)")
    p.add_argument("--t", type=int, required=True)
    p.add_argument("--eps", type=float, required=True)
    p.add_argument("--n-exp", type=int, required=True, help="n = 10^n_exp")
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("census", help="exact antichain counts, n <= 6")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_census)

    p = sub.add_parser("greedy", help="greedy antichain in the t middle layers")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--t", type=int, required=True)
    p.add_argument("--s", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_greedy)

    p = sub.add_parser("bracket", help="log-space antichain-count bracket")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--s", type=int, required=True)
    p.add_argument("--t", type=int, required=True)
    p.add_argument("--eps", type=float, required=True)
    p.set_defaults(func=cmd_bracket)

    p = sub.add_parser("selftest", help="tiny-n invariant suite")
    p.add_argument("--quick", action="store_true")
    p.set_defaults(func=cmd_selftest)

    return parser


def dispatch(argv: list[str] | None = None) -> int:
    """Run one command; return the documented exit code."""
    raw = list(sys.argv[1:] if argv is None else argv)
    logging.basicConfig(
        stream=sys.stderr, level=logging.WARNING, format="%(levelname)s: %(message)s"
    )
    parser = build_parser()
    try:
        args = parser.parse_args(raw)
    except SystemExit as exc:  # argparse already printed usage/version
        return int(exc.code or 0)
    args.raw_argv = raw
    try:
        return args.func(args)
    except (PreconditionError, InvariantViolation, ConstructionError, AssertionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except FeasibilityError as exc:
        print(f"refused: {exc}", file=sys.stderr)
        return 3
    except (ValueError, OSError) as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(dispatch())

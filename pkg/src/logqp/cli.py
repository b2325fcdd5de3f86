"""Command-line entry point: ``logqp solve`` and ``logqp bench``."""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .core import NumericalFailure, Status
from .instances import GeneratorSpec, QPFormatError, generate_random_qp, read_qp, write_qp
from .solvers import Algorithm, SolverConfig, initial_mu, solve

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_ITERATION_LIMIT = 2
EXIT_NUMERICAL_FAILURE = 3

_EXIT_CODES = {
    Status.SOLVED: EXIT_OK,
    Status.ITERATION_LIMIT: EXIT_ITERATION_LIMIT,
    Status.NUMERICAL_FAILURE: EXIT_NUMERICAL_FAILURE,
}

# Table 1 compares these three
DEFAULT_BENCH_ALGOS = ("longstep", "dual-barrier", "primal-barrier")
CSV_HEADER = ("n", "m", "rank_w", "algo", "mean_iters", "failures", "instances", "seed")

log = logging.getLogger("logqp")


class UsageError(Exception):
    pass


def _parse_mu0(text):
    if text == "ls":
        return None
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected 'ls' or a positive number, got {text!r}")
    if not value > 0:
        raise argparse.ArgumentTypeError("mu0 must be positive")
    return value


def _load_v0(spec, m):
    if spec == "zero":
        return np.zeros(m)
    try:
        data = json.loads(Path(spec).read_text(encoding="utf-8"))
        v0 = np.array(data, dtype=float)
    except (OSError, ValueError, TypeError) as exc:
        raise UsageError(f"cannot read v0 from {spec}: {exc}")
    if v0.shape != (m,) or not np.all(np.isfinite(v0)):
        raise UsageError(f"v0 in {spec} must be a list of {m} finite numbers")
    return v0


def _write_trace(path, trace):
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(("iteration", "mu", "d_inf", "gap"))
        for i, (mu, d_inf, gap) in enumerate(trace):
            writer.writerow((i, repr(mu), repr(d_inf), repr(gap)))


def cmd_solve(args) -> int:
    try:
        qp = read_qp(args.input)
        v0 = _load_v0(args.v0, qp.m)
        cfg = SolverConfig(beta=args.beta, mu_f=args.mu_f,
                           algorithm=Algorithm(args.algorithm))
    except (QPFormatError, UsageError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        mu0 = args.mu0 if args.mu0 is not None else initial_mu(qp, v0)
    except NumericalFailure as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL_FAILURE
    report = solve(qp, v0=v0, mu0=mu0, cfg=cfg)
    if args.trace:
        try:
            _write_trace(args.trace, report.trace)
        except OSError as exc:
            print(f"error: cannot write trace: {exc}", file=sys.stderr)
            return EXIT_USAGE
    objective = float(qp.objective(report.x))
    if args.json:
        out = {
            "status": report.status.value,
            "objective": objective,
            "gap": report.gap,
            "final_mu": report.final_mu,
            "iterations": report.newton_steps,
            "mu0": mu0,
            "x": report.x.tolist(),
            "s": report.s.tolist(),
            "lambda": report.lam.tolist(),
            "message": report.message,
        }
        print(json.dumps(out))
    else:
        print(f"status:     {report.status.value}")
        print(f"objective:  {objective:.10g}")
        print(f"gap:        {report.gap:.6g}")
        print(f"final mu:   {report.final_mu:.6g}")
        print(f"iterations: {report.newton_steps}")
        if report.message:
            print(f"message:    {report.message}")
    return _EXIT_CODES[report.status]


@dataclass(frozen=True)
class BenchRow:
    n: int
    m: int
    rank_w: int
    algo: str
    mean_iterations: float
    failures: int
    instances: int
    seed_base: int

    def as_tuple(self):
        mean = "nan" if np.isnan(self.mean_iterations) else f"{self.mean_iterations:.2f}"
        return (self.n, self.m, self.rank_w, self.algo, mean, self.failures,
                self.instances, self.seed_base)


def _thread_count():
    env = os.environ.get("LOGQP_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            log.warning("ignoring non-integer LOGQP_THREADS=%r", env)
    return os.cpu_count() or 1


def _run_instance(n, m, rank, seed, algos, mu_f, beta, dump_dir):
    qp = generate_random_qp(GeneratorSpec(n=n, m=m, r=rank, seed=seed))
    if dump_dir is not None:
        write_qp(qp, Path(dump_dir) / f"qp_n{n}_m{m}_r{rank}_seed{seed}.json")
    v0 = np.zeros(m)
    try:
        mu0 = initial_mu(qp, v0)
    except NumericalFailure:
        return {algo: None for algo in algos}
    out = {}
    for algo in algos:
        cfg = SolverConfig(beta=beta, mu_f=mu_f, algorithm=Algorithm(algo))
        report = solve(qp, v0=v0, mu0=mu0, cfg=cfg)
        out[algo] = report.newton_steps if report.solved else None
    return out


def run_bench(n, m, rank, instances=30, seed=0, algos=DEFAULT_BENCH_ALGOS, mu_f=1e-3,
              beta=0.5, dump_dir=None, threads=None) -> list[BenchRow]:
    """Mean iteration counts per algorithm on ``instances`` random QPs.

    Instance ``i`` uses seed ``seed + i`` and the same instance is solved by
    every algorithm.  Each run starts from ``v0 = 0`` and ``mu0`` = the
    least-squares ``mu``.  Failed runs are counted, not averaged.
    """
    algos = tuple(algos)
    threads = threads or _thread_count()
    seeds = [seed + i for i in range(instances)]

    def job(s):
        return _run_instance(n, m, rank, s, algos, mu_f, beta, dump_dir)

    if threads > 1 and instances > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(job, seeds))
    else:
        results = [job(s) for s in seeds]

    rows = []
    for algo in algos:
        iters = [r[algo] for r in results if r[algo] is not None]
        failures = len(results) - len(iters)
        mean = float(np.mean(iters)) if iters else float("nan")
        rows.append(BenchRow(n=n, m=m, rank_w=rank, algo=algo, mean_iterations=mean,
                             failures=failures, instances=len(iters), seed_base=seed))
    return rows


def format_rows(rows, fmt="csv") -> str:
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(CSV_HEADER)
        for row in rows:
            writer.writerow(row.as_tuple())
        return buf.getvalue()
    lines = ["| " + " | ".join(CSV_HEADER) + " |",
             "|" + "---|" * len(CSV_HEADER)]
    for row in rows:
        lines.append("| " + " | ".join(str(x) for x in row.as_tuple()) + " |")
    return "\n".join(lines) + "\n"


def cmd_bench(args) -> int:
    try:
        algos = [a.strip() for a in args.algos.split(",") if a.strip()]
        for a in algos:
            Algorithm(a)
        GeneratorSpec(n=args.n, m=args.m, r=args.rank, seed=args.seed)
        SolverConfig(beta=args.beta, mu_f=args.mu_f)
        if args.instances < 1:
            raise ValueError("--instances must be positive")
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if args.dump_instances:
        Path(args.dump_instances).mkdir(parents=True, exist_ok=True)
    rows = run_bench(args.n, args.m, args.rank, instances=args.instances, seed=args.seed,
                     algos=algos, mu_f=args.mu_f, beta=args.beta,
                     dump_dir=args.dump_instances)
    text = format_rows(rows, args.format)
    if args.out:
        try:
            Path(args.out).write_text(text, encoding="utf-8")
        except OSError as exc:
            print(f"error: cannot write {args.out}: {exc}", file=sys.stderr)
            return EXIT_USAGE
    else:
        sys.stdout.write(text)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="logqp", description="Log-domain interior-point QP solver")
    parser.add_argument("-v", "--verbose", action="store_true", help="debug logging to stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="solve a QP stored as JSON")
    p.add_argument("--input", required=True, help="QP JSON file")
    p.add_argument("--algorithm", default="longstep", choices=[a.value for a in Algorithm])
    p.add_argument("--mu-f", type=float, default=1e-3)
    p.add_argument("--beta", type=float, default=0.5)
    p.add_argument("--mu0", type=_parse_mu0, default=None,
                   help="'ls' (least-squares mu, default) or a positive number")
    p.add_argument("--v0", default="zero", help="'zero' or a JSON file holding a list of m floats")
    p.add_argument("--trace", help="write the per-iteration trace as CSV to this path")
    p.add_argument("--json", action="store_true", help="machine-readable report")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("bench", help="average iteration counts on random QPs")
    p.add_argument("--n", type=int, default=100)
    p.add_argument("--m", type=int, default=200)
    p.add_argument("--rank", type=int, default=0)
    p.add_argument("--instances", type=int, default=30)
    p.add_argument("--seed", type=int, default=0, help="seed of the first instance")
    p.add_argument("--algos", default=",".join(DEFAULT_BENCH_ALGOS))
    p.add_argument("--mu-f", type=float, default=1e-3)
    p.add_argument("--beta", type=float, default=0.5)
    p.add_argument("--format", choices=("csv", "md"), default="csv")
    p.add_argument("--out", help="write the table here instead of stdout")
    p.add_argument("--dump-instances", metavar="DIR", help="also write every instance as JSON")
    p.set_defaults(func=cmd_bench)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits with 2 on usage errors; 2 means IterationLimit here
        return EXIT_USAGE if exc.code else EXIT_OK
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())

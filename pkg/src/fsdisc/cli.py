"""Command-line entry point.

Runs experiments in-process by default. With ``--server URL`` (or
``FSDISC_SERVER``) the dataset is posted to a running service instead and the
finished report is written locally in the same layout.
"""

from __future__ import annotations

import argparse
import logging
import os
import sys
import time
from pathlib import Path

from .data import DataFormatError, read_manifest
from .experiment import ExperimentConfig, RunReport, emit_report, run_experiment
from .learners import LearnerKind
from .nsga2 import EngineConfig

OUT_ENV = "FSDISC_OUT"
SERVER_ENV = "FSDISC_SERVER"
LEARNERS = [k.value for k in LearnerKind]

log = logging.getLogger("fsdisc")


def _label(value: str):
    return int(value) if value.lstrip("-").isdigit() else value


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="fsdisc",
        description="Joint feature selection and binary discretization with NSGA-II.",
    )
    p.add_argument("--data", required=True, help="CSV file, one row per instance")
    p.add_argument("--label-col", type=_label, default=None, help="label column name or index (default: last)")
    p.add_argument("--manifest", help="JSON file declaring column kinds")
    p.add_argument("--learner", choices=LEARNERS, default="nb")
    p.add_argument("--wrapper", choices=["same"] + LEARNERS, default="same", help="learner inside the search")
    p.add_argument("--runs", type=int, default=10)
    p.add_argument("--folds", type=int, default=10)
    p.add_argument("--pop", type=int, default=50)
    p.add_argument("--gens", type=int, default=1000)
    p.add_argument("--cx-rate", type=float, default=0.8)
    p.add_argument("--mut-rate", type=float, default=None, help="per-gene rate (default: 1/attributes)")
    p.add_argument("--sigma", type=float, default=0.1, help="cut mutation step as a fraction of the range")
    p.add_argument("--tol", type=float, default=1e-3)
    p.add_argument("--stall-gens", type=int, default=50)
    p.add_argument("--stall-secs", type=float, default=600.0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default=os.environ.get(OUT_ENV, "results"), help=f"output directory (env {OUT_ENV})")
    p.add_argument("--emit-front", action="store_true", help="write per-run Pareto CSVs")
    p.add_argument("--log-generations", action="store_true", help="write per-generation TSV logs")
    p.add_argument(
        "--report-wrapper-score",
        action="store_true",
        help="report the search's own CV score instead of re-evaluating on fresh folds",
    )
    p.add_argument("--workers", type=int, default=1, help="parallel runs (local mode)")
    p.add_argument("--server", default=os.environ.get(SERVER_ENV), help=f"service URL (env {SERVER_ENV})")
    p.add_argument("--poll", type=float, default=2.0, help="seconds between status polls")
    p.add_argument("-v", "--verbose", action="store_true")
    return p


def _engine(args) -> EngineConfig:
    return EngineConfig(
        pop_size=args.pop,
        generations=args.gens,
        crossover_rate=args.cx_rate,
        mutation_rate=args.mut_rate,
        sigma_fraction=args.sigma,
        tolerance=args.tol,
        stall_generations=args.stall_gens,
        stall_seconds=args.stall_secs,
    )


def _check(args) -> None:
    for flag in ("runs", "folds", "workers"):
        if getattr(args, flag) < 1:
            raise ValueError(f"--{flag} must be positive")
    if args.tol <= 0 or args.stall_secs <= 0 or args.stall_gens < 1:
        raise ValueError("--tol, --stall-secs and --stall-gens must be positive")
    if not Path(args.data).is_file():
        raise FileNotFoundError(f"no such data file: {args.data}")


def run_local(args) -> RunReport:
    config = ExperimentConfig(
        data=args.data,
        learner=args.learner,
        label_column=args.label_col,
        manifest=args.manifest,
        wrapper=None if args.wrapper == "same" else args.wrapper,
        runs=args.runs,
        folds=args.folds,
        engine=_engine(args),
        seed=args.seed,
        out_dir=args.out,
        emit_front=args.emit_front,
        log_generations=args.log_generations,
        report_wrapper_score=args.report_wrapper_score,
        workers=args.workers,
    )

    def progress(run, rec):
        log.info(
            "run %d: proposed %.3f baseline %.3f selected %d discretized %d (%s after %d gens)",
            run, rec.proposed_accuracy, rec.baseline_accuracy, rec.selected, rec.discretized,
            rec.stop_reason, rec.generations,
        )

    return run_experiment(config, progress=progress)


def run_remote(args, client=None) -> RunReport:
    import httpx

    engine = _engine(args)
    payload = {
        "dataset": {
            "csv_text": Path(args.data).read_text(),
            "name": Path(args.data).stem,
            "label_column": args.label_col,
            "kinds": read_manifest(args.manifest) if args.manifest else None,
        },
        "learner": args.learner,
        "wrapper": None if args.wrapper == "same" else args.wrapper,
        "runs": args.runs,
        "folds": args.folds,
        "engine": {
            "pop_size": engine.pop_size,
            "generations": engine.generations,
            "crossover_rate": engine.crossover_rate,
            "mutation_rate": engine.mutation_rate,
            "sigma_fraction": engine.sigma_fraction,
            "tolerance": engine.tolerance,
            "stall_generations": engine.stall_generations,
            "stall_seconds": engine.stall_seconds,
        },
        "seed": args.seed,
        "report_wrapper_score": args.report_wrapper_score,
    }
    owns = client is None
    client = client or httpx.Client(base_url=args.server, timeout=30.0)
    try:
        r = client.post("/v1/experiments", json=payload)
        r.raise_for_status()
        job_id = r.json()["job_id"]
        log.info("submitted job %s", job_id)
        done = -1
        while True:
            st = client.get(f"/v1/experiments/{job_id}").json()
            if st["runs_done"] != done:
                done = st["runs_done"]
                log.info("job %s: %d/%d runs", job_id, done, st["runs_total"])
            if st["state"] == "failed":
                raise RuntimeError(f"server job failed: {st['error']}")
            if st["state"] == "done":
                break
            time.sleep(args.poll)
        r = client.get(f"/v1/experiments/{job_id}/report")
        r.raise_for_status()
        report = RunReport.from_dict(r.json())
    finally:
        if owns:
            client.close()
    emit_report(report, args.out, emit_front=args.emit_front)
    return report


def main(argv=None, client=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(asctime)s %(levelname)s %(message)s",
    )
    try:
        _check(args)
        if args.server or client is not None:
            if args.log_generations:
                log.warning("--log-generations is ignored in server mode")
            report = run_remote(args, client)
        else:
            report = run_local(args)
    except (DataFormatError, ValueError, OSError, RuntimeError) as exc:
        print(f"fsdisc: error: {exc}", file=sys.stderr)
        return 1
    except Exception as exc:  # HTTP or transport failures from the client
        print(f"fsdisc: error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    print("\t".join(report.summary_row()))
    print(f"wrote results to {args.out}", file=sys.stderr)
    return 0


if __name__ == "__main__":
    sys.exit(main())

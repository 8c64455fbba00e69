"""HTTP front end: scoring endpoints plus background experiment jobs."""

from __future__ import annotations

import argparse
import logging
import threading
import uuid
from contextlib import asynccontextmanager
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from importlib.metadata import PackageNotFoundError, version

import numpy as np
from fastapi import FastAPI, HTTPException

from .data import DataFormatError, Dataset, load_csv, parse_csv
from .encoding import Chromosome, decode
from .entropy import class_counts, class_entropy, info_gain, split_entropy
from .experiment import ExperimentConfig, RunReport, run_experiment
from .learners import LearnerSpec
from .nsga2 import EngineConfig, ObjectiveFunction
from .schemas import (
    DatasetSource,
    DecodeRequest,
    EvaluateRequest,
    EvaluateResponse,
    ExperimentRequest,
    GainRequest,
    GainResponse,
    HealthResponse,
    JobState,
    JobStatus,
    ParetoRow,
    ViewModel,
)
from .wrapper import WrapperConfig

logger = logging.getLogger(__name__)

try:
    __version__ = version("artifact")
except PackageNotFoundError:  # running from a source tree
    __version__ = "0.0.0"


def load_source(source: DatasetSource) -> Dataset:
    if source.path is not None:
        return load_csv(source.path, source.label_column, source.kinds)
    return parse_csv(source.csv_text, source.name, source.label_column, source.kinds)


def _chromosome(genes) -> Chromosome:
    return Chromosome.from_genes([(g.select, g.discretize, g.cut) for g in genes])


def _view_model(view) -> ViewModel:
    return ViewModel(selected=list(view.selected), discretized=list(view.discretized), cuts=list(view.cuts))


@dataclass
class _Job:
    request: ExperimentRequest
    state: JobState = JobState.queued
    runs_done: int = 0
    error: str | None = None
    report: RunReport | None = None
    lock: threading.Lock = field(default_factory=threading.Lock, repr=False)


def create_app(max_jobs: int = 1) -> FastAPI:
    """Build the application; ``max_jobs`` experiments run concurrently."""
    jobs: dict[str, _Job] = {}
    pool = ThreadPoolExecutor(max_workers=max_jobs, thread_name_prefix="fsdisc-job")

    @asynccontextmanager
    async def lifespan(_app):
        yield
        pool.shutdown(wait=False, cancel_futures=True)

    app = FastAPI(title="fsdisc", version=__version__, lifespan=lifespan)
    app.state.jobs = jobs
    app.state.pool = pool

    def get_job(job_id: str) -> _Job:
        job = jobs.get(job_id)
        if job is None:
            raise HTTPException(404, f"unknown job {job_id}")
        return job

    def execute(job: _Job) -> None:
        req = job.request
        with job.lock:
            job.state = JobState.running
        try:
            dataset = load_source(req.dataset)
            config = ExperimentConfig(
                data=req.dataset.path or req.dataset.name,
                learner=req.learner,
                wrapper=req.wrapper,
                runs=req.runs,
                folds=req.folds,
                engine=EngineConfig(**req.engine.model_dump()),
                seed=req.seed,
                out_dir=req.out_dir,
                emit_front=req.emit_front,
                report_wrapper_score=req.report_wrapper_score,
            )

            def progress(_run, _rec):
                with job.lock:
                    job.runs_done += 1

            report = run_experiment(config, dataset, progress)
        except Exception as exc:
            logger.exception("job failed")
            with job.lock:
                job.state = JobState.failed
                job.error = f"{type(exc).__name__}: {exc}"
            return
        with job.lock:
            job.report = report
            job.state = JobState.done

    @app.get("/health", response_model=HealthResponse)
    def health():
        return HealthResponse(version=__version__)

    @app.post("/v1/entropy/gain", response_model=GainResponse)
    def gain(req: GainRequest):
        _, codes = np.unique(np.array([str(v) for v in req.labels]), return_inverse=True)
        column = np.asarray(req.column, dtype=float)
        total = class_counts(codes)
        above = class_counts(codes[column > req.cut], len(total))
        return GainResponse(
            gain=info_gain(codes, column, req.cut),
            class_entropy=class_entropy(total),
            split_entropy=split_entropy(above, total - above),
            above=int(above.sum()),
            below=int(total.sum() - above.sum()),
        )

    @app.post("/v1/chromosomes/decode", response_model=ViewModel)
    def decode_genes(req: DecodeRequest):
        if req.nominal is not None and len(req.nominal) != len(req.genes):
            raise HTTPException(422, "nominal mask length must match the gene count")
        return _view_model(decode(_chromosome(req.genes), req.nominal))

    @app.post("/v1/objectives", response_model=EvaluateResponse)
    def objectives(req: EvaluateRequest):
        try:
            dataset = load_source(req.dataset)
        except (DataFormatError, OSError) as exc:
            raise HTTPException(422, str(exc)) from None
        if len(req.genes) != dataset.cols:
            raise HTTPException(422, f"{len(req.genes)} genes for {dataset.cols} attributes")
        try:
            fn = ObjectiveFunction(dataset, WrapperConfig(LearnerSpec(req.learner), req.folds, req.seed))
        except ValueError as exc:
            raise HTTPException(422, str(exc)) from None
        chrom = _chromosome(req.genes)
        obj, ok = fn(chrom)  # infeasible views come back as the sentinel pair
        return EvaluateResponse(feasible=ok, gain=-obj.f1, error=obj.f2, view=_view_model(fn.view(chrom)))

    @app.post("/v1/experiments", response_model=JobStatus, status_code=202)
    def submit(req: ExperimentRequest):
        job_id = uuid.uuid4().hex
        job = _Job(req)
        jobs[job_id] = job
        pool.submit(execute, job)
        return JobStatus(job_id=job_id, state=job.state, runs_total=req.runs)

    @app.get("/v1/experiments/{job_id}", response_model=JobStatus)
    def status(job_id: str):
        job = get_job(job_id)
        with job.lock:
            return JobStatus(
                job_id=job_id,
                state=job.state,
                runs_done=job.runs_done,
                runs_total=job.request.runs,
                error=job.error,
                summary=job.report.summary_row() if job.report else None,
            )

    def finished_report(job_id: str) -> RunReport:
        job = get_job(job_id)
        with job.lock:
            if job.state == JobState.failed:
                raise HTTPException(409, job.error)
            if job.report is None:
                raise HTTPException(409, f"job is {job.state.value}")
            return job.report

    @app.get("/v1/experiments/{job_id}/report")
    def report(job_id: str) -> dict:
        return finished_report(job_id).to_dict()

    @app.get("/v1/experiments/{job_id}/pareto/{run}", response_model=list[ParetoRow])
    def pareto(job_id: str, run: int):
        rep = finished_report(job_id)
        for rec in rep.runs:
            if rec.run == run:
                return rec.pareto
        raise HTTPException(404, f"no run {run}")

    return app


def serve(argv=None) -> None:
    import uvicorn

    ap = argparse.ArgumentParser(description="Serve the feature selection and discretization API.")
    ap.add_argument("--host", default="127.0.0.1")
    ap.add_argument("--port", type=int, default=8000)
    ap.add_argument("--jobs", type=int, default=1, help="experiments run concurrently")
    args = ap.parse_args(argv)
    uvicorn.run(create_app(args.jobs), host=args.host, port=args.port)

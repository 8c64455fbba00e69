"""Repeated optimization runs, best-solution choice, final scoring and reports."""

from __future__ import annotations

import csv
import json
import logging
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Callable, Sequence

import numpy as np

from .data import Dataset, load_csv, read_manifest, stratified_kfold
from .encoding import DecodedView
from .learners import LearnerKind, LearnerSpec
from .nsga2 import EngineConfig, Individual, ObjectiveFunction, evolve
from .wrapper import WrapperConfig, fold_accuracies

logger = logging.getLogger(__name__)

SUMMARY_HEADER = (
    "Data Name",
    "Features",
    "Selected Features",
    "Discretized",
    "No. of fronts",
    "Accuracy",
    "Std.",
    "Proposed Accuracy",
    "Std.",
)
PARETO_HEADER = ("rank", "gain", "error", "selected", "discretized")

# independent seed streams per run
_ENGINE, _WRAPPER_FOLDS, _OUTER_FOLDS = 0, 1, 2


@dataclass(frozen=True)
class ExperimentConfig:
    data: str
    learner: LearnerKind = LearnerKind.NAIVE_BAYES
    label_column: str | int | None = None
    manifest: str | None = None
    wrapper: LearnerKind | None = None  # None: wrap with the target learner
    runs: int = 10
    folds: int = 10
    engine: EngineConfig = field(default_factory=EngineConfig)
    seed: int = 0
    out_dir: str | None = None
    emit_front: bool = False
    log_generations: bool = False
    report_wrapper_score: bool = False
    workers: int = 1

    def __post_init__(self):
        object.__setattr__(self, "learner", LearnerKind(self.learner))
        if self.wrapper is not None:
            object.__setattr__(self, "wrapper", LearnerKind(self.wrapper))
        if self.runs < 1:
            raise ValueError("runs must be at least 1")
        if self.folds < 2:
            raise ValueError("folds must be at least 2")
        if self.workers < 1:
            raise ValueError("workers must be at least 1")

    @property
    def wrapper_kind(self) -> LearnerKind:
        return self.wrapper or self.learner


@dataclass
class RunRecord:
    run: int
    baseline_accuracy: float
    baseline_std: float
    proposed_accuracy: float
    proposed_std: float
    wrapper_accuracy: float
    gain: float
    selected: int
    discretized: int
    fronts: int
    generations: int
    evaluations: int
    stop_reason: str
    recipe: dict
    pareto: list[dict] = field(default_factory=list)


def _sample_std(values: Sequence[float]) -> float:
    return float(np.std(values, ddof=1)) if len(values) > 1 else 0.0


@dataclass
class RunReport:
    dataset: str
    learner: str
    wrapper: str
    features: int
    runs: list[RunRecord]

    @property
    def baseline_accuracy(self) -> float:
        return float(np.mean([r.baseline_accuracy for r in self.runs]))

    @property
    def baseline_std(self) -> float:
        return _sample_std([r.baseline_accuracy for r in self.runs])

    @property
    def proposed_accuracy(self) -> float:
        return float(np.mean([r.proposed_accuracy for r in self.runs]))

    @property
    def proposed_std(self) -> float:
        return _sample_std([r.proposed_accuracy for r in self.runs])

    @property
    def mean_selected(self) -> float:
        return float(np.mean([r.selected for r in self.runs]))

    @property
    def mean_discretized(self) -> float:
        return float(np.mean([r.discretized for r in self.runs]))

    @property
    def mean_fronts(self) -> float:
        return float(np.mean([r.fronts for r in self.runs]))

    def summary_row(self) -> list[str]:
        return [
            self.dataset,
            str(self.features),
            f"{self.mean_selected:.2f}",
            f"{self.mean_discretized:.2f}",
            f"{self.mean_fronts:.2f}",
            f"{self.baseline_accuracy:.3f}",
            f"{self.baseline_std:.3f}",
            f"{self.proposed_accuracy:.3f}",
            f"{self.proposed_std:.3f}",
        ]

    def to_dict(self) -> dict:
        return {
            "dataset": self.dataset,
            "learner": self.learner,
            "wrapper": self.wrapper,
            "features": self.features,
            "aggregate": {
                "baseline_accuracy": self.baseline_accuracy,
                "baseline_std": self.baseline_std,
                "proposed_accuracy": self.proposed_accuracy,
                "proposed_std": self.proposed_std,
                "mean_selected": self.mean_selected,
                "mean_discretized": self.mean_discretized,
                "mean_fronts": self.mean_fronts,
            },
            "runs": [asdict(r) for r in self.runs],
        }

    @classmethod
    def from_dict(cls, doc: dict) -> "RunReport":
        return cls(
            dataset=doc["dataset"],
            learner=doc["learner"],
            wrapper=doc["wrapper"],
            features=doc["features"],
            runs=[RunRecord(**r) for r in doc["runs"]],
        )


def select_best_solution(front1: Sequence[Individual], views: Sequence[DecodedView] | None = None) -> Individual:
    """Lowest error; ties go to higher gain, then fewer selected attributes, then order."""
    if not front1:
        raise ValueError("front is empty")

    def key(i):
        ind = front1[i]
        n_sel = len(views[i].selected) if views is not None else int(ind.chromosome.select.sum())
        return (ind.objectives.f2, ind.objectives.f1, n_sel, i)

    return front1[min(range(len(front1)), key=key)]


def evaluate_final(
    dataset: Dataset, view: DecodedView, learner: LearnerSpec | LearnerKind | str, folds: int, seed
) -> tuple[float, float]:
    """Mean and sample std of k-fold accuracy on the dataset reduced by ``view``."""
    if not isinstance(learner, LearnerSpec):
        learner = LearnerSpec.of(learner)
    plan = stratified_kfold(dataset.labels, folds, np.random.default_rng(seed))
    accs = fold_accuracies(dataset, view, learner, plan)
    return float(accs.mean()), _sample_std(accs)


def run_seeds(master: int, run: int) -> dict[str, np.random.SeedSequence]:
    return {
        "engine": np.random.SeedSequence([master, run, _ENGINE]),
        "wrapper": np.random.SeedSequence([master, run, _WRAPPER_FOLDS]),
        "outer": np.random.SeedSequence([master, run, _OUTER_FOLDS]),
    }


def run_single(
    dataset: Dataset,
    config: ExperimentConfig,
    run: int,
    log_line: Callable[[str], None] | None = None,
) -> RunRecord:
    seeds = run_seeds(config.seed, run)
    wrapper = WrapperConfig(
        LearnerSpec(config.wrapper_kind), config.folds, int(seeds["wrapper"].generate_state(1)[0])
    )
    objective = ObjectiveFunction(dataset, wrapper)
    result = evolve(
        dataset,
        config.engine,
        np.random.default_rng(seeds["engine"]),
        objective=objective,
        log_generations=log_line,
    )
    front1 = result.front1
    views = [objective.view(ind.chromosome) for ind in front1]
    best = select_best_solution(front1, views)
    view = objective.view(best.chromosome)
    learner = LearnerSpec(config.learner)
    outer_seed = int(seeds["outer"].generate_state(1)[0])
    base_acc, base_std = evaluate_final(dataset, DecodedView.identity(dataset.cols), learner, config.folds, outer_seed)
    wrapper_acc = 1.0 - best.objectives.f2
    if config.report_wrapper_score:
        prop_acc, prop_std = wrapper_acc, 0.0
    else:
        prop_acc, prop_std = evaluate_final(dataset, view, learner, config.folds, outer_seed)
    pareto = []
    for ind in result.population:
        v = objective.view(ind.chromosome)
        pareto.append(
            {
                "rank": ind.rank,
                "gain": -ind.objectives.f1,
                "error": ind.objectives.f2,
                "selected": len(v.selected),
                "discretized": len(v.discretized),
            }
        )
    pareto.sort(key=lambda row: (row["rank"], row["error"], -row["gain"]))
    return RunRecord(
        run=run,
        baseline_accuracy=base_acc,
        baseline_std=base_std,
        proposed_accuracy=prop_acc,
        proposed_std=prop_std,
        wrapper_accuracy=wrapper_acc,
        gain=-best.objectives.f1,
        selected=len(view.selected),
        discretized=len(view.discretized),
        fronts=result.merged_front_count,
        generations=result.generations_run,
        evaluations=result.evaluations,
        stop_reason=result.stop_reason,
        recipe=view.to_record(dataset.attributes),
        pareto=pareto,
    )


def _run_in_worker(args) -> RunRecord:
    dataset, config, run = args
    return run_single(dataset, config, run)


def run_experiment(
    config: ExperimentConfig,
    dataset: Dataset | None = None,
    progress: Callable[[int, RunRecord], None] | None = None,
) -> RunReport:
    """Execute ``config.runs`` independent runs and aggregate them.

    Any failing run aborts the whole experiment. Artifacts are written when
    ``config.out_dir`` is set.
    """
    if dataset is None:
        kinds = read_manifest(config.manifest) if config.manifest else None
        dataset = load_csv(config.data, config.label_column, kinds)
    records: list[RunRecord] = []
    if config.workers > 1 and config.runs > 1 and not config.log_generations:
        with ProcessPoolExecutor(config.workers) as pool:
            jobs = [(dataset, config, r) for r in range(config.runs)]
            for rec in pool.map(_run_in_worker, jobs):
                records.append(rec)
                if progress:
                    progress(rec.run, rec)
    else:
        for r in range(config.runs):
            log_line = _generation_logger(config, dataset.name, r)
            try:
                rec = run_single(dataset, config, r, log_line)
            finally:
                if log_line is not None:
                    log_line.close()
            records.append(rec)
            if progress:
                progress(r, rec)
    report = RunReport(
        dataset=dataset.name,
        learner=config.learner.value,
        wrapper=config.wrapper_kind.value,
        features=dataset.cols,
        runs=records,
    )
    if config.out_dir:
        emit_report(report, config.out_dir, emit_front=config.emit_front)
    return report


class _LineFile:
    def __init__(self, path: Path):
        path.parent.mkdir(parents=True, exist_ok=True)
        self._fh = open(path, "w")
        self._fh.write("generation\tfront1\tbest_error\tbest_gain\telapsed\n")

    def __call__(self, line: str) -> None:
        self._fh.write(line + "\n")

    def close(self) -> None:
        self._fh.close()


def _generation_logger(config: ExperimentConfig, name: str, run: int):
    if not config.log_generations:
        return None
    out = Path(config.out_dir or ".")
    return _LineFile(out / f"generations_{name}_{config.learner.value}_run{run:02d}.tsv")


def report_stem(report: RunReport) -> str:
    return f"{report.dataset}_{report.learner}"


def emit_report(report: RunReport, out_dir: str | os.PathLike, emit_front: bool = True) -> list[Path]:
    """Write the summary row, the full JSON dump and optional per-run Pareto CSVs."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    stem = report_stem(report)
    written = []

    summary = out / f"summary_{stem}.tsv"
    with open(summary, "w", newline="") as fh:
        w = csv.writer(fh, delimiter="\t", lineterminator="\n")
        w.writerow(SUMMARY_HEADER)
        w.writerow(report.summary_row())
    written.append(summary)

    full = out / f"report_{stem}.json"
    full.write_text(json.dumps(report.to_dict(), indent=2, sort_keys=True) + "\n")
    written.append(full)

    if emit_front:
        for rec in report.runs:
            path = out / f"pareto_{stem}_run{rec.run:02d}.csv"
            with open(path, "w", newline="") as fh:
                w = csv.DictWriter(fh, fieldnames=PARETO_HEADER, lineterminator="\n")
                w.writeheader()
                w.writerows(rec.pareto)
            written.append(path)
    return written

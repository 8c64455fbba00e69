"""Request and response models for the HTTP service."""

from __future__ import annotations

from enum import Enum
from typing import Optional, Union

from pydantic import BaseModel, ConfigDict, Field, model_validator

from .learners import LearnerKind


class GeneModel(BaseModel):
    select: bool
    discretize: bool
    cut: float


class DecodeRequest(BaseModel):
    genes: list[GeneModel] = Field(min_length=1)
    nominal: Optional[list[bool]] = None


class ViewModel(BaseModel):
    selected: list[int]
    discretized: list[int]
    cuts: list[float]


class GainRequest(BaseModel):
    labels: list[Union[int, str]] = Field(min_length=1)
    column: list[float] = Field(min_length=1)
    cut: float

    @model_validator(mode="after")
    def _same_length(self):
        if len(self.labels) != len(self.column):
            raise ValueError("labels and column must be equally long")
        return self


class GainResponse(BaseModel):
    gain: float
    class_entropy: float
    split_entropy: float
    above: int
    below: int


class DatasetSource(BaseModel):
    """Either a path readable by the server or the CSV text itself."""

    path: Optional[str] = None
    csv_text: Optional[str] = None
    name: str = "dataset"
    label_column: Optional[Union[int, str]] = None
    kinds: Optional[dict[str, str]] = None

    @model_validator(mode="after")
    def _one_source(self):
        if (self.path is None) == (self.csv_text is None):
            raise ValueError("give exactly one of path or csv_text")
        return self


class EvaluateRequest(BaseModel):
    dataset: DatasetSource
    genes: list[GeneModel] = Field(min_length=1)
    learner: LearnerKind = LearnerKind.NAIVE_BAYES
    folds: int = Field(10, ge=2)
    seed: int = 0


class EvaluateResponse(BaseModel):
    feasible: bool
    gain: float
    error: float
    view: ViewModel


class EngineSettings(BaseModel):
    pop_size: int = Field(50, ge=2)
    generations: int = Field(1000, ge=0)
    crossover_rate: float = Field(0.8, ge=0.0, le=1.0)
    mutation_rate: Optional[float] = Field(None, ge=0.0, le=1.0)
    sigma_fraction: float = Field(0.1, ge=0.0)
    tolerance: float = Field(1e-3, gt=0.0)
    stall_generations: int = Field(50, ge=1)
    stall_seconds: float = Field(600.0, gt=0.0)
    pareto_fraction: Optional[float] = Field(None, gt=0.0, le=1.0)


class ExperimentRequest(BaseModel):
    dataset: DatasetSource
    learner: LearnerKind = LearnerKind.NAIVE_BAYES
    wrapper: Optional[LearnerKind] = None
    runs: int = Field(10, ge=1)
    folds: int = Field(10, ge=2)
    engine: EngineSettings = Field(default_factory=EngineSettings)
    seed: int = 0
    out_dir: Optional[str] = None
    emit_front: bool = False
    report_wrapper_score: bool = False


class JobState(str, Enum):
    queued = "queued"
    running = "running"
    done = "done"
    failed = "failed"


class JobStatus(BaseModel):
    model_config = ConfigDict(use_enum_values=True)

    job_id: str
    state: JobState
    runs_done: int = 0
    runs_total: int
    error: Optional[str] = None
    summary: Optional[list[str]] = None


class ParetoRow(BaseModel):
    rank: int
    gain: float
    error: float
    selected: int
    discretized: int


class HealthResponse(BaseModel):
    status: str = "ok"
    version: str

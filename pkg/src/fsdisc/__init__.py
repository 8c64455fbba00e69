"""Multi-objective joint feature selection and binary discretization."""

from .data import AttributeMeta, DataFormatError, Dataset, FoldPlan, compute_bounds, load_csv, stratified_kfold
from .encoding import Chromosome, DecodedView, InfeasibleError, decode, random_chromosome, transform
from .entropy import class_entropy, discretization_fitness, info_gain, split_entropy
from .experiment import ExperimentConfig, RunReport, emit_report, evaluate_final, run_experiment, select_best_solution
from .learners import LearnerKind, LearnerSpec
from .nsga2 import EngineConfig, EvolutionResult, Individual, Objectives, evolve
from .wrapper import WrapperConfig, cv_accuracy, error_fitness

__all__ = [
    "AttributeMeta", "Chromosome", "DataFormatError", "Dataset", "DecodedView", "EngineConfig",
    "EvolutionResult", "ExperimentConfig", "FoldPlan", "Individual", "InfeasibleError", "LearnerKind",
    "LearnerSpec", "Objectives", "RunReport", "WrapperConfig", "class_entropy", "compute_bounds",
    "cv_accuracy", "decode", "discretization_fitness", "emit_report", "error_fitness", "evaluate_final",
    "evolve", "info_gain", "load_csv", "random_chromosome", "run_experiment", "select_best_solution",
    "split_entropy", "stratified_kfold", "transform",
]

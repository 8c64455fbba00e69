"""NSGA-II over hybrid chromosomes with two minimized objectives.

Objective 1 is the negated information-gain sum of the discretized
attributes, objective 2 the wrapper cross-validation error.
"""

from __future__ import annotations

import logging
import math
import time
from dataclasses import dataclass, field
from typing import Callable, NamedTuple, Sequence

import numpy as np

from .data import Dataset
from .encoding import Chromosome, DecodedView, decode, random_chromosome
from .entropy import discretization_fitness
from .wrapper import WrapperConfig, WrapperEvaluator

logger = logging.getLogger(__name__)

INFEASIBLE = (0.0, 1.0)


class Objectives(NamedTuple):
    f1: float  # -(sum of gains)
    f2: float  # cross-validation error


@dataclass
class Individual:
    chromosome: Chromosome
    objectives: Objectives
    rank: int = 0
    crowding: float = 0.0
    feasible: bool = True


def dominates(a: Sequence[float], b: Sequence[float]) -> bool:
    """Pareto dominance for minimization."""
    return all(x <= y for x, y in zip(a, b)) and any(x < y for x, y in zip(a, b))


def fast_nondominated_sort(objectives) -> list[list[int]]:
    """Partition indices into successive non-dominated fronts (front 1 first)."""
    F = np.asarray(objectives, dtype=float)
    n = len(F)
    if n == 0:
        raise ValueError("cannot sort an empty population")
    le = (F[:, None, :] <= F[None, :, :]).all(axis=2)
    lt = (F[:, None, :] < F[None, :, :]).any(axis=2)
    dom = le & lt  # dom[i, j]: i dominates j
    counts = dom.sum(axis=0)
    fronts = []
    current = np.flatnonzero(counts == 0)
    while len(current):
        fronts.append([int(i) for i in current])
        counts = counts - dom[current].sum(axis=0)
        counts[current] = -1
        current = np.flatnonzero(counts == 0)
    return fronts


def crowding_distance(front_objectives) -> np.ndarray:
    """Sum over objectives of the normalized gap between each point's neighbours.

    The extreme points of every objective get infinity; an objective with zero
    range adds nothing.
    """
    F = np.asarray(front_objectives, dtype=float)
    n, k = F.shape
    dist = np.zeros(n)
    if n <= 2:
        dist[:] = np.inf
        return dist
    for m in range(k):
        order = np.argsort(F[:, m], kind="stable")
        vals = F[order, m]
        dist[order[0]] = dist[order[-1]] = np.inf
        span = vals[-1] - vals[0]
        if span <= 0:
            continue
        dist[order[1:-1]] += (vals[2:] - vals[:-2]) / span
    return dist


def assign_rank_and_crowding(population: list[Individual]) -> list[list[int]]:
    fronts = fast_nondominated_sort([ind.objectives for ind in population])
    for r, front in enumerate(fronts, start=1):
        d = crowding_distance([population[i].objectives for i in front])
        for i, di in zip(front, d):
            population[i].rank = r
            population[i].crowding = float(di)
    return fronts


def _better(a: Individual, b: Individual) -> bool | None:
    if a.rank != b.rank:
        return a.rank < b.rank
    if a.crowding != b.crowding:
        return a.crowding > b.crowding
    return None


def tournament_select(population: Sequence[Individual], rng: np.random.Generator) -> Individual:
    """Binary tournament on (rank, crowding); full ties go to a coin flip."""
    i, j = rng.integers(len(population), size=2)
    a, b = population[i], population[j]
    verdict = _better(a, b)
    if verdict is None:
        verdict = bool(rng.random() < 0.5)
    return a if verdict else b


def scattered_crossover(p1: Chromosome, p2: Chromosome, rng: np.random.Generator, mask=None):
    """Uniform crossover moving whole genes; child 2 takes the complement."""
    if len(p1) != len(p2):
        raise ValueError("parents differ in length")
    mask = rng.random(len(p1)) < 0.5 if mask is None else np.asarray(mask, dtype=bool)
    c1 = Chromosome(
        np.where(mask, p1.select, p2.select),
        np.where(mask, p1.discretize, p2.discretize),
        np.where(mask, p1.cut, p2.cut),
    )
    c2 = Chromosome(
        np.where(mask, p2.select, p1.select),
        np.where(mask, p2.discretize, p1.discretize),
        np.where(mask, p2.cut, p1.cut),
    )
    return c1, c2


def gaussian_mutation(
    c: Chromosome,
    bounds,
    rng: np.random.Generator,
    rate: float,
    sigma_fraction: float = 0.1,
) -> Chromosome:
    """Per gene with probability ``rate``: jitter the cut and clip it to bounds.

    Each of the two bits flips independently with the same probability.
    """
    if not 0.0 <= rate <= 1.0:
        raise ValueError("mutation rate must lie in [0, 1]")
    bounds = np.asarray(bounds, dtype=float)
    lb, ub = bounds[:, 0], bounds[:, 1]
    n = len(c)
    hit = rng.random(n) < rate
    noise = rng.normal(0.0, 1.0, n) * sigma_fraction * (ub - lb)
    cut = np.clip(np.where(hit, c.cut + noise, c.cut), lb, ub)
    flip_sel = rng.random(n) < rate
    flip_disc = rng.random(n) < rate
    return Chromosome(c.select ^ flip_sel, c.discretize ^ flip_disc, cut)


@dataclass(frozen=True)
class EngineConfig:
    pop_size: int = 50
    generations: int = 1000
    crossover_rate: float = 0.8
    mutation_rate: float | None = None  # None -> 1 / n_attributes
    sigma_fraction: float = 0.1
    tolerance: float = 1e-3
    stall_generations: int = 50
    stall_seconds: float = 600.0
    pareto_fraction: float | None = None

    def __post_init__(self):
        if self.pop_size < 2:
            raise ValueError("population size must be at least 2")
        if self.generations < 0:
            raise ValueError("generations must be non-negative")
        if not 0.0 <= self.crossover_rate <= 1.0:
            raise ValueError("crossover rate must lie in [0, 1]")
        if self.mutation_rate is not None and not 0.0 <= self.mutation_rate <= 1.0:
            raise ValueError("mutation rate must lie in [0, 1]")
        if self.pareto_fraction is not None and not 0.0 < self.pareto_fraction <= 1.0:
            raise ValueError("pareto fraction must lie in (0, 1]")


class ObjectiveFunction:
    """Maps chromosomes to objective pairs, caching by decoded view."""

    def __init__(self, dataset: Dataset, wrapper: WrapperConfig):
        self.dataset = dataset
        self.evaluator = WrapperEvaluator(dataset, wrapper)
        self._nominal = dataset.nominal_mask
        self._cache: dict[DecodedView, Objectives] = {}
        self.evaluations = 0

    def view(self, chromosome: Chromosome) -> DecodedView:
        return decode(chromosome, self._nominal)

    def __call__(self, chromosome: Chromosome) -> tuple[Objectives, bool]:
        view = self.view(chromosome)
        if not view.is_feasible:
            return Objectives(*INFEASIBLE), False
        hit = self._cache.get(view)
        if hit is None:
            self.evaluations += 1
            gain = discretization_fitness(self.dataset, view)
            err = self.evaluator.error(view)
            hit = Objectives(-gain, err)
            self._cache[view] = hit
        return hit, True


@dataclass
class GenerationRecord:
    generation: int
    population: list[Individual]
    merged: list[Individual] | None
    merged_fronts: list[list[int]] | None
    elapsed: float


@dataclass
class EvolutionResult:
    population: list[Individual]
    fronts: list[list[int]]
    generations_run: int
    evaluations: int
    stop_reason: str
    history: list[tuple[float, float, int]] = field(default_factory=list)
    # fronts in the last parent+offspring pool (the initial population if no generation ran)
    merged_front_count: int = 0

    @property
    def front1(self) -> list[Individual]:
        return [self.population[i] for i in self.fronts[0]]


def environmental_selection(
    merged: list[Individual], fronts: list[list[int]], npop: int, pareto_fraction: float | None = None
) -> list[Individual]:
    """Fill the next population front by front, truncating by crowding distance."""
    chosen: list[int] = []
    cap = npop if pareto_fraction is None else max(1, math.ceil(pareto_fraction * npop))
    deferred: list[int] = []
    for r, front in enumerate(fronts):
        ordered = sorted(front, key=lambda i: (-merged[i].crowding, i))
        if r == 0 and len(ordered) > cap:
            ordered, extra = ordered[:cap], ordered[cap:]
            deferred.extend(extra)
        room = npop - len(chosen)
        if room <= 0:
            break
        chosen.extend(ordered[:room])
    if len(chosen) < npop:
        chosen.extend(deferred[: npop - len(chosen)])
    return [merged[i] for i in chosen]


def format_generation_line(gen: int, population: list[Individual], elapsed: float) -> str:
    front1 = [p for p in population if p.rank == 1]
    best_f2 = min(p.objectives.f2 for p in population)
    best_gain = -min(p.objectives.f1 for p in population)
    return f"{gen}\t{len(front1)}\t{best_f2:.6f}\t{best_gain:.6f}\t{elapsed:.3f}"


def evolve(
    dataset: Dataset,
    config: EngineConfig,
    rng: np.random.Generator,
    wrapper: WrapperConfig | None = None,
    objective: Callable[[Chromosome], tuple[Objectives, bool]] | None = None,
    observer: Callable[[GenerationRecord], None] | None = None,
    log_generations: Callable[[str], None] | None = None,
) -> EvolutionResult:
    """Run the elitist generation loop and return the final sorted population."""
    if objective is None:
        objective = ObjectiveFunction(dataset, wrapper or WrapperConfig())
    bounds = dataset.bounds
    n = dataset.cols
    mut_rate = config.mutation_rate if config.mutation_rate is not None else 1.0 / n
    npop = config.pop_size
    start = time.monotonic()

    def make(ch: Chromosome) -> Individual:
        obj, ok = objective(ch)
        return Individual(ch, obj, feasible=ok)

    population = [make(random_chromosome(bounds, rng)) for _ in range(npop)]
    fronts = assign_rank_and_crowding(population)
    history = [_front_summary(population, fronts)]
    if observer:
        observer(GenerationRecord(0, population, None, None, 0.0))
    if log_generations:
        log_generations(format_generation_line(0, population, 0.0))

    best = (min(p.objectives.f1 for p in population), min(p.objectives.f2 for p in population))
    last_improvement = start
    stop_reason = "generations"
    merged_front_count = len(fronts)
    gen = 0
    while gen < config.generations:
        offspring = _reproduce(population, npop, bounds, rng, config, mut_rate)
        merged = population + [make(ch) for ch in offspring]
        merged_fronts = assign_rank_and_crowding(merged)
        merged_front_count = len(merged_fronts)
        population = environmental_selection(merged, merged_fronts, npop, config.pareto_fraction)
        fronts = assign_rank_and_crowding(population)
        gen += 1
        elapsed = time.monotonic() - start
        history.append(_front_summary(population, fronts))
        if observer:
            observer(GenerationRecord(gen, population, merged, merged_fronts, elapsed))
        if log_generations:
            log_generations(format_generation_line(gen, population, elapsed))

        now_best = (min(p.objectives.f1 for p in population), min(p.objectives.f2 for p in population))
        if now_best[0] < best[0] or now_best[1] < best[1]:
            last_improvement = time.monotonic()
        best = (min(best[0], now_best[0]), min(best[1], now_best[1]))

        w = config.stall_generations
        if w and len(history) > w:
            old, new = history[-1 - w], history[-1]
            if max(abs(new[0] - old[0]), abs(new[1] - old[1])) < config.tolerance:
                stop_reason = "tolerance"
                break
        if time.monotonic() - last_improvement > config.stall_seconds:
            stop_reason = "stall_time"
            break

    evaluations = getattr(objective, "evaluations", 0)
    return EvolutionResult(population, fronts, gen, evaluations, stop_reason, history, merged_front_count)


def _front_summary(population: list[Individual], fronts: list[list[int]]) -> tuple[float, float, int]:
    f = np.array([population[i].objectives for i in fronts[0]])
    return float(f[:, 0].mean()), float(f[:, 1].mean()), len(fronts)


def _reproduce(population, npop, bounds, rng, config: EngineConfig, mut_rate: float) -> list[Chromosome]:
    children: list[Chromosome] = []
    while len(children) < npop:
        p1 = tournament_select(population, rng).chromosome
        p2 = tournament_select(population, rng).chromosome
        if rng.random() < config.crossover_rate:
            children.extend(scattered_crossover(p1, p2, rng))
        else:
            children.append(gaussian_mutation(p1, bounds, rng, mut_rate, config.sigma_fraction))
            children.append(gaussian_mutation(p2, bounds, rng, mut_rate, config.sigma_fraction))
    return children[:npop]

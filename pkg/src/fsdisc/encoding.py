"""Hybrid chromosomes: per-attribute (select bit, discretize bit, cut value) genes."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import NamedTuple, Sequence

import numpy as np

from .data import CONTINUOUS, AttributeMeta, Dataset


class InfeasibleError(ValueError):
    """The chromosome selects no attribute, so no reduced dataset exists."""


class Gene(NamedTuple):
    select: bool
    discretize: bool
    cut: float


@dataclass(frozen=True, eq=False)
class Chromosome:
    """Fixed-length gene sequence stored column-wise.

    The three arrays are read-only; genetic operators build new instances.
    """

    select: np.ndarray
    discretize: np.ndarray
    cut: np.ndarray

    def __post_init__(self):
        sel = np.array(self.select, dtype=bool)
        disc = np.array(self.discretize, dtype=bool)
        cut = np.array(self.cut, dtype=float)
        if not (sel.shape == disc.shape == cut.shape) or sel.ndim != 1:
            raise ValueError("gene arrays must be 1-D and equally long")
        for name, arr in (("select", sel), ("discretize", disc), ("cut", cut)):
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)

    @classmethod
    def from_genes(cls, genes: Sequence[Sequence]) -> "Chromosome":
        genes = [Gene(bool(s), bool(d), float(c)) for s, d, c in genes]
        return cls(
            np.array([g.select for g in genes], dtype=bool),
            np.array([g.discretize for g in genes], dtype=bool),
            np.array([g.cut for g in genes], dtype=float),
        )

    @property
    def genes(self) -> list[Gene]:
        return [Gene(bool(s), bool(d), float(c)) for s, d, c in zip(self.select, self.discretize, self.cut)]

    def __len__(self) -> int:
        return len(self.select)

    def __eq__(self, other):
        if not isinstance(other, Chromosome):
            return NotImplemented
        return (
            np.array_equal(self.select, other.select)
            and np.array_equal(self.discretize, other.discretize)
            and np.array_equal(self.cut, other.cut)
        )

    def __hash__(self):
        return hash((self.select.tobytes(), self.discretize.tobytes(), self.cut.tobytes()))


@dataclass(frozen=True)
class DecodedView:
    """Which attributes survive, and which of those are binarized at which cut."""

    selected: tuple[int, ...]
    discretized: tuple[int, ...] = ()
    cuts: tuple[float, ...] = field(default=())

    def __post_init__(self):
        if len(self.discretized) != len(self.cuts):
            raise ValueError("one cut value is required per discretized attribute")
        if not set(self.discretized) <= set(self.selected):
            raise ValueError("discretized attributes must be selected")

    @property
    def cut_map(self) -> dict[int, float]:
        return dict(zip(self.discretized, self.cuts))

    @property
    def is_feasible(self) -> bool:
        return len(self.selected) > 0

    @classmethod
    def identity(cls, n_attributes: int) -> "DecodedView":
        return cls(tuple(range(n_attributes)))

    def to_record(self, attributes: Sequence[AttributeMeta] | None = None) -> dict:
        """Plain-dict recipe for rebuilding the reduced dataset."""
        rec = {
            "selected": list(self.selected),
            "discretized": list(self.discretized),
            "cuts": [float(c) for c in self.cuts],
        }
        if attributes is not None:
            rec["selected_names"] = [attributes[j].name for j in self.selected]
            rec["discretized_names"] = [attributes[j].name for j in self.discretized]
        return rec

    @classmethod
    def from_record(cls, record: dict) -> "DecodedView":
        return cls(
            tuple(int(j) for j in record["selected"]),
            tuple(int(j) for j in record.get("discretized", ())),
            tuple(float(c) for c in record.get("cuts", ())),
        )


def random_chromosome(bounds, rng: np.random.Generator, max_retries: int = 100) -> Chromosome:
    """Uniform bits and uniform cuts within ``[lb, ub]``; never selects nothing."""
    bounds = np.asarray(bounds, dtype=float)
    n = len(bounds)
    lb, ub = bounds[:, 0], bounds[:, 1]
    for _ in range(max_retries):
        sel = rng.random(n) < 0.5
        disc = rng.random(n) < 0.5
        cut = lb + rng.random(n) * (ub - lb)
        if sel.any():
            return Chromosome(sel, disc, cut)
    sel = np.zeros(n, dtype=bool)
    sel[rng.integers(n)] = True
    return Chromosome(sel, disc, cut)


def decode(chromosome: Chromosome, nominal=None) -> DecodedView:
    """Read the selected set and, among those, the discretized set with cuts.

    ``nominal`` is an optional boolean mask; nominal attributes are never
    discretized whatever their gene says.
    """
    disc = chromosome.select & chromosome.discretize
    if nominal is not None:
        disc &= ~np.asarray(nominal, dtype=bool)
    discretized = np.flatnonzero(disc)
    return DecodedView(
        tuple(int(j) for j in np.flatnonzero(chromosome.select)),
        tuple(int(j) for j in discretized),
        tuple(float(chromosome.cut[j]) for j in discretized),
    )


def binarize(column: np.ndarray, cut: float) -> np.ndarray:
    """1 where the value lies strictly above the cut, else 0."""
    return (np.asarray(column) > cut).astype(float)


def transform_matrix(values: np.ndarray, view: DecodedView) -> np.ndarray:
    if not view.is_feasible:
        raise InfeasibleError("chromosome selects no attribute")
    out = values[:, list(view.selected)].copy()
    cuts = view.cut_map
    for pos, j in enumerate(view.selected):
        if j in cuts:
            out[:, pos] = binarize(values[:, j], cuts[j])
    return out


def transform(dataset: Dataset, view: DecodedView) -> Dataset:
    """Reduced dataset: selected columns in order, discretized ones as 0/1."""
    values = transform_matrix(dataset.values, view)
    cuts = view.cut_map
    attrs = []
    for pos, j in enumerate(view.selected):
        a = dataset.attributes[j]
        if j in cuts:
            col = values[:, pos]
            attrs.append(AttributeMeta(f"{a.name}>{cuts[j]:g}", CONTINUOUS, float(col.min()), float(col.max())))
        else:
            attrs.append(a)
    return Dataset(values, tuple(attrs), dataset.labels, dataset.class_names, dataset.name)

import os
from pathlib import Path

import numpy as np
import pytest

from fsdisc.data import Dataset, load_csv

DATA_DIR = Path(os.environ.get("FSDISC_DATA_DIR", Path(__file__).parent / "data"))


def data_path(name: str) -> Path:
    return DATA_DIR / f"{name}.csv"


@pytest.fixture(scope="session")
def iris() -> Dataset:
    return load_csv(data_path("iris"), "Flower")


@pytest.fixture(scope="session")
def wisconsin() -> Dataset:
    return load_csv(data_path("wisconsin"))


def label_plus_noise(m: int = 60, seed: int = 0) -> Dataset:
    """Attribute 0 equals the binary label, attribute 1 is uniform noise."""
    rng = np.random.default_rng(seed)
    y = np.repeat([0, 1], m // 2)
    X = np.column_stack([y.astype(float), rng.random(m)])
    return Dataset.from_arrays(X, y, names=["signal", "noise"])


@pytest.fixture
def toy() -> Dataset:
    return label_plus_noise()

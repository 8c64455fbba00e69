import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from fsdisc.data import Dataset
from fsdisc.encoding import (
    Chromosome,
    DecodedView,
    InfeasibleError,
    binarize,
    decode,
    random_chromosome,
    transform,
    transform_matrix,
)
from fsdisc.entropy import discretization_fitness
from fsdisc.learners import LearnerSpec
from fsdisc.wrapper import WrapperConfig, cv_accuracy

# gene 1 selected only, gene 2 selected and cut at 2.32, gene 3 off, gene 4 selected and cut at 1.69
IRIS_GENES = [(1, 0, 6.0), (1, 1, 2.32), (0, 0, 3.0), (1, 1, 1.69)]


def iris_view():
    return decode(Chromosome.from_genes(IRIS_GENES))


def test_decode_example():
    view = iris_view()
    assert view.selected == (0, 1, 3)
    assert view.cut_map == {1: 2.32, 3: 1.69}


def test_decode_all_off():
    view = decode(Chromosome.from_genes([(0, 0, 1.0)] * 3))
    assert view.selected == () and view.discretized == ()
    assert not view.is_feasible


def test_discretize_needs_select():
    view = decode(Chromosome.from_genes([(0, 1, 1.0)] * 3))
    assert view.discretized == ()


def test_nominal_never_discretized():
    view = decode(Chromosome.from_genes([(1, 1, 0.5), (1, 1, 0.5)]), nominal=[True, False])
    assert view.selected == (0, 1) and view.discretized == (1,)


@pytest.mark.parametrize(
    "row, expected",
    [
        ((5.1, 3.5, 1.4, 0.2), (5.1, 1, 0)),
        ((7.0, 3.2, 4.7, 1.4), (7.0, 1, 0)),
        # 2.7 lies above 2.32, and the Iris entropy counts only add up with this row on the 1-side
        ((5.8, 2.7, 5.1, 1.9), (5.8, 1, 1)),
    ],
)
def test_transform_rows(row, expected):
    out = transform_matrix(np.array([row]), iris_view())
    assert out[0].tolist() == list(expected)


def test_transform_dataset(iris):
    reduced = transform(iris, iris_view())
    assert reduced.cols == 3
    assert reduced.attributes[0] == iris.attributes[0]
    assert reduced.attributes[1].name == "SepalWidth>2.32"
    assert set(np.unique(reduced.values[:, 1])) <= {0.0, 1.0}
    np.testing.assert_array_equal(reduced.labels, iris.labels)


def test_identity_transform(iris):
    out = transform(iris, DecodedView.identity(iris.cols))
    assert out == iris


def test_empty_selection_is_infeasible(iris):
    with pytest.raises(InfeasibleError):
        transform(iris, DecodedView(()))


def test_view_validation():
    with pytest.raises(ValueError):
        DecodedView((0,), (1,), (0.5,))
    with pytest.raises(ValueError):
        DecodedView((0,), (0,), ())


def test_record_round_trip(iris):
    view = iris_view()
    rec = view.to_record(iris.attributes)
    assert rec["selected_names"] == ["SepalLength", "SepalWidth", "PetalWidth"]
    assert DecodedView.from_record(rec) == view


def test_random_cuts_in_bounds():
    rng = np.random.default_rng(0)
    bounds = np.tile([0.0, 1.0], (6, 1))
    for _ in range(200):
        c = random_chromosome(bounds, rng)
        assert np.all((c.cut >= 0) & (c.cut <= 1))
        assert c.select.any()


def test_degenerate_bound_cut():
    rng = np.random.default_rng(1)
    bounds = np.array([[5.0, 5.0], [0.0, 1.0]])
    assert all(random_chromosome(bounds, rng).cut[0] == 5.0 for _ in range(50))


def test_select_bit_frequency():
    # binomial sd at n=10000 is 0.005, so [0.45, 0.55] is a 10-sigma band
    rng = np.random.default_rng(2)
    bounds = np.tile([0.0, 1.0], (10, 1))
    freq = np.mean([random_chromosome(bounds, rng).select[0] for _ in range(10_000)])
    assert 0.45 <= freq <= 0.55


def test_single_attribute_always_selected():
    rng = np.random.default_rng(3)
    assert all(random_chromosome(np.array([[0.0, 1.0]]), rng).select[0] for _ in range(100))


def test_chromosome_immutable():
    c = Chromosome.from_genes(IRIS_GENES)
    with pytest.raises(ValueError):
        c.cut[0] = 1.0


genes_st = st.lists(st.tuples(st.booleans(), st.booleans(), st.floats(-5, 5)), min_size=1, max_size=8)


@settings(max_examples=100, deadline=None)
@given(genes=genes_st)
def test_decode_is_pure(genes):
    a, b = Chromosome.from_genes(genes), Chromosome.from_genes(list(genes))
    assert a == b and hash(a) == hash(b)
    assert decode(a) == decode(b)


@settings(max_examples=100, deadline=None)
@given(
    data=arrays(np.float64, st.tuples(st.integers(2, 20), st.just(4)), elements=st.floats(-10, 10)),
    genes=st.lists(st.tuples(st.booleans(), st.booleans(), st.floats(-10, 10)), min_size=4, max_size=4),
)
def test_width_and_binarization_laws(data, genes):
    view = decode(Chromosome.from_genes(genes))
    if not view.is_feasible:
        return
    out = transform_matrix(data, view)
    assert out.shape[1] == len(view.selected)
    for pos, j in enumerate(view.selected):
        if j in view.cut_map:
            assert set(np.unique(out[:, pos])) <= {0.0, 1.0}
            np.testing.assert_array_equal(out[:, pos] == 1.0, data[:, j] > view.cut_map[j])
        else:
            np.testing.assert_array_equal(out[:, pos], data[:, j])


@pytest.mark.parametrize("kind", ["nb", "c45"])
def test_flipped_binarization_keeps_objectives(iris, kind):
    view = iris_view()
    X = transform_matrix(iris.values, view)
    flipped = X.copy()
    flipped[:, 1] = 1.0 - flipped[:, 1]
    flipped[:, 2] = 1.0 - flipped[:, 2]
    config = WrapperConfig(LearnerSpec.of(kind), 10, 0)
    identity = DecodedView.identity(3)
    a = cv_accuracy(Dataset.from_arrays(X, iris.labels), identity, config)
    b = cv_accuracy(Dataset.from_arrays(flipped, iris.labels), identity, config)
    assert a == pytest.approx(b, abs=1e-12)
    # gain of a flipped 0/1 column at cut 0.5 equals the gain of the original cut
    fit = discretization_fitness(iris, view)
    cuts = DecodedView((0, 1, 2), (1, 2), (0.5, 0.5))
    assert discretization_fitness(Dataset.from_arrays(flipped, iris.labels), cuts) == pytest.approx(fit, abs=1e-12)


def test_binarize_boundary():
    assert binarize(np.array([1.0, 2.0, 3.0]), 2.0).tolist() == [0.0, 0.0, 1.0]

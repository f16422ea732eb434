import random

import pytest
from hypothesis import given, settings, strategies as st

from pltcost.builders import WeightProfile, entropy_lower_bound
from pltcost.cost import total_cost
from pltcost.labels import LabelMatrix
from pltcost.oracle import (
    OracleRangeError,
    count_trees_recurrence,
    enumerate_trees,
    iter_costs,
    optimal_tree,
    restricted_optimal_cost,
)
from pltcost.tree import LabelTree, star, validate_tree

from conftest import (
    multiclass_matrix,
    nested_matrix,
    random_matrix,
    random_multiclass,
    random_nested,
    random_nested_spec,
)

COUNTS = [1, 1, 4, 26, 236, 2752, 39208, 660032]


@pytest.mark.parametrize("m", range(1, 7))
def test_enumeration_counts_and_uniqueness(m):
    trees = list(enumerate_trees(m))
    assert len(trees) == COUNTS[m - 1] == count_trees_recurrence(m)
    assert len({T.canonical() for T in trees}) == len(trees)
    for T in trees[:: max(1, len(trees) // 200)]:
        assert validate_tree(T, m) == []
        if m > 1:
            assert all(T.degree(v) >= 2 for v in T.internal_nodes)


def test_recurrence_large():
    assert [count_trees_recurrence(m) for m in range(1, 9)] == COUNTS


def test_m8_gated():
    with pytest.raises(OracleRangeError):
        next(enumerate_trees(8))
    with pytest.raises(OracleRangeError):
        next(enumerate_trees(9, allow_large=True))
    assert sum(1 for _ in iter_costs(LabelMatrix.from_rows([[0]], 8), allow_large=True)) == COUNTS[7]


def test_multiclass_example():
    Y = multiclass_matrix([1, 1, 2])
    costs = sorted(c for c, _ in iter_costs(Y))
    assert len(costs) == 4 and costs[0] == 16
    assert total_cost(star(3), Y) == 16
    T, c = optimal_tree(Y)
    assert c == 16 == total_cost(T, Y)


def test_nested_example():
    Y = nested_matrix([1, 1, 2, 4], 4)
    assert optimal_tree(Y)[1] == 4 + 14


def test_m1_convention():
    Y = LabelMatrix.from_rows([[0], [], [0]], 1)
    T, c = optimal_tree(Y)
    assert T.size == 2 and c == 3 + 2 == total_cost(T, Y)


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 5), st.integers(1, 12), st.integers(0, 10**9))
def test_optimum_is_minimum_and_lower_bounded(m, n, seed):
    rng = random.Random(seed)
    Y = random_matrix(n, m, rng, density=rng.random())
    T, best = optimal_tree(Y)
    assert total_cost(T, Y) == best
    for U in enumerate_trees(m):
        assert total_cost(U, Y) >= best
    assert best >= Y.n + sum(len(c) for c in Y.cols)


def test_shape_restriction_keeps_optimum():
    rng = random.Random(21)
    for _ in range(12):
        m = rng.randint(2, 6)
        Y = random_multiclass(m, rng.randint(m, 20), rng)
        assert restricted_optimal_cost(Y) == optimal_tree(Y)[1]


def test_entropy_bound_below_optimum():
    rng = random.Random(22)
    for _ in range(25):
        m = rng.randint(1, 5)
        Y = random_multiclass(m, rng.randint(m, 30), rng)
        bound = entropy_lower_bound(WeightProfile.from_matrix(Y)).lower_bound
        assert optimal_tree(Y)[1] >= bound - 1e-9


@settings(max_examples=50)
@given(st.integers(2, 7), st.integers(1, 15), st.integers(0, 10**9))
def test_unary_node_never_helps(m, n, seed):

    rng = random.Random(seed)
    Y = random_matrix(n, m, rng) if seed % 2 else random_nested(m, n, rng)
    spec = random_nested_spec(range(m), rng)
    base = total_cost(LabelTree.from_nested(spec), Y)

    def wrap_each(s):
        if isinstance(s, int):
            yield [s]
            return
        yield [s]
        for k, c in enumerate(s):
            for w in wrap_each(c):
                yield s[:k] + [w] + s[k + 1:]

    for variant in wrap_each(spec):
        assert total_cost(LabelTree.from_nested(variant), Y) >= base

import itertools
import random

import pytest
from hypothesis import given, settings, strategies as st

from pltcost.cost import (
    assign_to_nodes,
    binarize,
    compute_node_weights,
    cost_upper_bound,
    dataset_cost,
    example_cost,
    expected_cost,
    node_probabilities,
    sensitivity,
    total_cost,
)
from pltcost.labels import LabelMatrix
from pltcost.scenario import Scenario
from pltcost.tree import LabelTree, star, validate_tree

from conftest import multiclass_matrix, nested_matrix, random_matrix, random_tree

BAL4 = LabelTree.from_nested([[0, 1], [2, 3]])


def all_subsets(m):
    for k in range(m + 1):
        yield from itertools.combinations(range(m), k)


def test_node_weights_examples():
    Y = multiclass_matrix([2, 3])
    z = compute_node_weights(star(2), Y).z_weight
    assert z[0] == 5
    Y = nested_matrix([2, 3], 3)
    assert compute_node_weights(star(2), Y).z_weight[0] == 3
    Y = LabelMatrix.from_rows([[0, 2], [1], []], 3)
    z = compute_node_weights(star(3), Y).z_weight
    assert z == (2, 1, 1, 1)


def test_assign_star():
    a = assign_to_nodes(star(3), [0])
    assert a.positives == {0, 1} and a.negatives == {2, 3}


def test_assign_empty():
    a = assign_to_nodes(BAL4, [])
    assert a.positives == frozenset() and a.negatives == {BAL4.root}


def test_assign_balanced_binary():
    # hand evaluation: root, both inner nodes and leaves 0, 3 positive; leaves 1, 2 negative
    a = assign_to_nodes(BAL4, [0, 3])
    assert a.positives == {0, 1, 2, 4, 6} and a.negatives == {3, 5}
    assert a.size == 7
    assert example_cost(BAL4, [0, 3]) == 7
    assert cost_upper_bound(BAL4, 2) == 9


def test_example_cost_trivial():
    for j in range(3):
        assert example_cost(star(3), [j]) == 4
    assert example_cost(BAL4, []) == 1


def test_dataset_cost_star():
    Y = LabelMatrix.from_rows([[0, 2], [1], []], 3)
    r = dataset_cost(star(3), Y)
    assert r.total == 9 and r.per_row == (4, 4, 1)
    assert Y.n + sum(r.per_node) == 9


def test_dataset_cost_closed_forms():
    rng = random.Random(3)
    T = random_tree(6, rng)
    assert dataset_cost(T, LabelMatrix.from_rows([[]] * 5, 6)).total == 5
    Y = LabelMatrix.from_rows([[rng.randrange(6)] for _ in range(7)], 6)
    assert dataset_cost(star(6), Y).total == 7 + 7 * 6


def test_expected_cost_examples():
    assert expected_cost(star(2), Scenario.of(2, [([0], 0.5), ([], 0.5)])) == 2.0
    S = Scenario.of(5, [([0, 1, 2, 3, 4], 0.5), ([], 0.5)])
    assert expected_cost(star(5), S) == 3.5
    for y in ([], [1], [0, 2, 3]):
        assert expected_cost(BAL4, Scenario.point(4, y)) == example_cost(BAL4, y)


def test_sensitivity_examples():
    assert [sensitivity(BAL4, i) for i in range(4)] == [4] * 4
    assert all(sensitivity(star(7), i) == 7 for i in range(7))
    m = 5
    spec = 0
    for j in range(1, m):
        spec = [spec, j]
    path = LabelTree.from_nested(spec)
    assert sensitivity(path, 0) == 2 * (m - 1)
    # exhaustive flip check on the balanced tree: the bound 4 is attained
    worst = max(
        abs(example_cost(BAL4, y) - example_cost(BAL4, set(y) ^ {i}))
        for y in all_subsets(4) for i in range(4)
    )
    assert worst == 4


def test_binarize_examples():
    T = BAL4
    assert binarize(T) == T
    Y = multiclass_matrix([1, 1, 1, 1])
    B = binarize(star(4), Y)
    assert total_cost(star(4), Y) == 20
    assert total_cost(B, Y) == 22
    assert all(B.degree(v) == 2 for v in B.internal_nodes)


def test_degree_one_node_counts():
    # a unary internal node is legal input; its cost is its weight times one
    T = LabelTree.from_nested([[0], 1])
    Y = LabelMatrix.from_rows([[0], [1], [0, 1]], 2)
    assert validate_tree(T, 2) == []
    r = dataset_cost(T, Y)
    assert r.total == 3 + 3 * 2 + 2 * 1


def test_invalid_label_rejected():
    with pytest.raises(ValueError):
        example_cost(star(3), [3])


tree_and_seed = st.tuples(st.integers(1, 5), st.integers(0, 10**9))


@settings(max_examples=60)
@given(tree_and_seed)
def test_assignment_matches_cost_exhaustive(ms):
    m, seed = ms
    T = random_tree(m, random.Random(seed))
    for y in all_subsets(m):
        a = assign_to_nodes(T, y)
        assert a.positives.isdisjoint(a.negatives)
        assert example_cost(T, y) == a.size
        assert example_cost(T, y) <= cost_upper_bound(T, len(y))


@settings(max_examples=60)
@given(st.integers(1, 64), st.integers(1, 64), st.integers(0, 10**9))
def test_decomposition(n, m, seed):
    rng = random.Random(seed)
    T = random_tree(m, rng)
    Y = random_matrix(n, m, rng, density=rng.random())
    r = dataset_cost(T, Y)
    assert sum(r.per_row) == Y.n + sum(r.per_node) == r.total == total_cost(T, Y)


@settings(max_examples=60)
@given(st.integers(2, 20), st.integers(1, 30), st.integers(0, 10**9))
def test_weight_sandwich(m, n, seed):
    rng = random.Random(seed)
    T = random_tree(m, rng)
    for Y, kind in (
        (random_matrix(n, m, rng), "general"),
        (LabelMatrix.from_rows([[rng.randrange(m)] for _ in range(n)], m), "multi"),
        (nested_matrix(sorted(rng.randint(0, n) for _ in range(m)), n), "nested"),
    ):
        z = compute_node_weights(T, Y).z_weight
        for v in T.internal_nodes:
            ch = [z[c] for c in T.children[v]]
            assert max(ch) <= z[v] <= min(n, sum(ch))
            if kind == "multi":
                assert z[v] == sum(ch)
            if kind == "nested":
                assert z[v] == max(ch)


@settings(max_examples=40)
@given(st.integers(1, 8), st.integers(0, 10**9))
def test_sensitivity_bounded_difference(m, seed):
    T = random_tree(m, random.Random(seed))
    d = [sensitivity(T, i) for i in range(m)]
    for y in all_subsets(m):
        c = example_cost(T, y)
        for i in range(m):
            assert abs(c - example_cost(T, set(y) ^ {i})) <= d[i]


@settings(max_examples=60)
@given(st.integers(1, 40), st.integers(1, 30), st.integers(0, 10**9))
def test_binarize_factor_two(m, n, seed):
    rng = random.Random(seed)
    T = random_tree(m, rng)
    Y = random_matrix(n, m, rng, density=rng.random())
    B = binarize(T, Y)
    assert validate_tree(B, m) == []
    assert sorted(B.label[v] for v in B.leaf_of) == list(range(m))
    assert all(B.degree(v) <= 2 for v in B.internal_nodes)
    assert total_cost(B, Y) <= 2 * total_cost(T, Y)


@settings(max_examples=40)
@given(st.integers(1, 6), st.integers(0, 10**9))
def test_expected_cost_is_mixture_of_example_costs(m, seed):
    rng = random.Random(seed)
    T = random_tree(m, rng)
    subsets = list(all_subsets(m))
    chosen = rng.sample(subsets, rng.randint(1, len(subsets)))
    raw = [rng.randint(1, 8) for _ in chosen]
    S = Scenario.of(m, [(y, w / sum(raw)) for y, w in zip(chosen, raw)])
    direct = sum(p * example_cost(T, y) for y, p in S.support)
    assert expected_cost(T, S) == pytest.approx(direct, abs=1e-12)
    probs = node_probabilities(T, S)
    for v in T.internal_nodes:
        ch = [probs[c] for c in T.children[v]]
        assert max(ch) <= probs[v] + 1e-12
        assert probs[v] <= min(1.0, sum(ch)) + 1e-12

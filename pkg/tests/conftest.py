import random

import pytest

from pltcost.labels import LabelMatrix, matrix_from_columns
from pltcost.tree import LabelTree

ACCEPTANCE_LINES = []


def random_nested_spec(labels, rng, max_degree=None):
    """Random tree over ``labels`` by repeatedly merging 2..k random subtrees."""
    items = list(labels)
    rng.shuffle(items)
    if len(items) == 1:
        return [items[0]]
    while len(items) > 1:
        hi = len(items) if max_degree is None else min(len(items), max_degree)
        k = rng.randint(2, hi)
        rng.shuffle(items)
        merged, items = items[:k], items[k:]
        items.append(merged)
    return items[0]


def random_tree(m, rng, max_degree=None):
    return LabelTree.from_nested(random_nested_spec(range(m), rng, max_degree))


def random_matrix(n, m, rng, density=0.3):
    rows = [[j for j in range(m) if rng.random() < density] for _ in range(n)]
    return LabelMatrix.from_rows(rows, m)


def multiclass_matrix(weights):
    rows = []
    for j, w in enumerate(weights):
        rows.extend([[j]] * w)
    return LabelMatrix.from_rows(rows, len(weights))


def random_multiclass(m, n, rng):
    """Multi-class matrix with every label used at least once (n >= m)."""
    labels = list(range(m)) + [rng.randrange(m) for _ in range(n - m)]
    rng.shuffle(labels)
    return LabelMatrix.from_rows([[j] for j in labels], m)


def nested_matrix(weights, n, perm=None):
    """Column j covers rows 0..weights[j]-1, so columns are nested by weight."""
    cols = [range(w) for w in weights]
    if perm is not None:
        cols = [cols[p] for p in perm]
    return matrix_from_columns(cols, n)


def random_nested(m, n, rng):
    weights = sorted(rng.randint(1, n) for _ in range(m))
    perm = list(range(m))
    rng.shuffle(perm)
    return nested_matrix(weights, n, perm)


@pytest.fixture
def rng():
    return random.Random(12345)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)

"""Training cost of a label tree: node weights, per-example assignment, totals.

The cost of one example is the number of nodes whose classifier sees it:
the root, plus every node whose parent has a positive label below it. Summed
over a dataset this decomposes into ``n + sum_v |z_v| * deg_v`` where
``|z_v|`` is the number of rows with at least one label under ``v``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

from .labels import LabelMatrix
from .scenario import Scenario
from .tree import InvalidTreeError, LabelTree, contract_unary, validate_tree


@dataclass(frozen=True)
class NodeStats:
    z_weight: tuple[int, ...]
    z_fraction: tuple[Fraction, ...]
    node_cost: tuple[int, ...]


@dataclass(frozen=True)
class Assignment:
    positives: frozenset[int]
    negatives: frozenset[int]

    @property
    def size(self) -> int:
        return len(self.positives) + len(self.negatives)


@dataclass(frozen=True)
class CostReport:
    total: int
    per_row: tuple[int, ...]
    per_node: tuple[int, ...]
    upper_bound: tuple[int, ...]


def _require(T: LabelTree, m: int) -> None:
    errors = validate_tree(T, m)
    if errors:
        raise InvalidTreeError(errors)


def _check_labels(T: LabelTree, y: Iterable[int]) -> list[int]:
    y = list(y)
    m = T.num_labels
    for j in y:
        if not 0 <= j < m:
            raise ValueError(f"unknown label id {j}")
    return y


def node_masks(T: LabelTree, Y: LabelMatrix) -> list[int]:
    """z_v as an int bitset over examples, computed bottom-up by union."""
    if T.num_labels != Y.m:
        raise ValueError(f"tree has {T.num_labels} labels, matrix has {Y.m}")
    cols = Y.col_masks
    masks = [0] * T.size
    for v in T.postorder:
        lab = T.label[v]
        if lab >= 0:
            masks[v] = cols[lab]
        else:
            acc = 0
            for c in T.children[v]:
                acc |= masks[c]
            masks[v] = acc
    return masks


def compute_node_weights(T: LabelTree, Y: LabelMatrix) -> NodeStats:
    _require(T, Y.m)
    weights = tuple(mask.bit_count() for mask in node_masks(T, Y))
    if Y.n:
        fracs = tuple(Fraction(w, Y.n) for w in weights)
    else:
        fracs = tuple(Fraction(0) for _ in weights)
    costs = tuple(w * T.degree(v) for v, w in enumerate(weights))
    return NodeStats(weights, fracs, costs)


def assign_to_nodes(T: LabelTree, y: Iterable[int]) -> Assignment:
    """Positive and negative nodes for one example (walks up from each label)."""
    y = _check_labels(T, y)
    P: set[int] = set()
    N: set[int] = {T.root}
    for j in y:
        v = T.leaf_of[j]
        while v != -1 and v not in P:
            P.add(v)
            N.discard(v)
            for c in T.children[v]:
                if c not in P:
                    N.add(c)
            v = T.parent[v]
    return Assignment(frozenset(P), frozenset(N))


def positive_nodes(T: LabelTree, y: Iterable[int]) -> set[int]:
    """Nodes with z_v = 1: every ancestor (inclusive) of a positive leaf."""
    on: set[int] = set()
    for j in y:
        v = T.leaf_of[j]
        while v != -1 and v not in on:
            on.add(v)
            v = T.parent[v]
    return on


def example_cost(T: LabelTree, y: Iterable[int]) -> int:
    """c(T, y) = 1 + number of non-root nodes whose parent has z = 1."""
    y = _check_labels(T, y)
    on = positive_nodes(T, y)
    root = T.root
    return 1 + sum(1 for v, p in enumerate(T.parent) if v != root and p in on)


def _row_cost(T: LabelTree, y: Iterable[int]) -> int:
    return 1 + sum(T.degree(v) for v in positive_nodes(T, y))


def cost_upper_bound(T: LabelTree, y_size: int) -> int:
    """1 + |y| * depth_T * deg_T."""
    return 1 + y_size * T.depth * T.max_degree


def dataset_cost(T: LabelTree, Y: LabelMatrix) -> CostReport:
    stats = compute_node_weights(T, Y)
    total = Y.n + sum(stats.node_cost)
    per_row = tuple(_row_cost(T, r) for r in Y.rows)
    if sum(per_row) != total:
        raise AssertionError(f"row-sum cost {sum(per_row)} != node decomposition {total}")
    bounds = tuple(cost_upper_bound(T, len(r)) for r in Y.rows)
    return CostReport(total, per_row, stats.node_cost, bounds)


def total_cost(T: LabelTree, Y: LabelMatrix) -> int:
    """n + sum_v |z_v| deg_v without validation or per-row work."""
    masks = node_masks(T, Y)
    return Y.n + sum(mask.bit_count() * len(ch) for mask, ch in zip(masks, T.children))


def node_probabilities(T: LabelTree, S: Scenario) -> list[float]:
    """P(z_v = 1) under the scenario, for every node."""
    if S.m != T.num_labels:
        raise ValueError(f"scenario has {S.m} labels, tree has {T.num_labels}")
    probs = [0.0] * T.size
    for subset, p in S.support:
        for v in positive_nodes(T, subset):
            probs[v] += p
    return probs


def expected_cost(T: LabelTree, S: Scenario) -> float:
    """C_P(T) = 1 + sum_v P(z_v = 1) deg_v."""
    probs = node_probabilities(T, S)
    return 1.0 + sum(p * T.degree(v) for v, p in enumerate(probs))


def sensitivity(T: LabelTree, i: int) -> int:
    """d_i: sum of parent degrees along the path from leaf i (root adds 0)."""
    if not 0 <= i < T.num_labels:
        raise ValueError(f"unknown label id {i}")
    d = 0
    v = T.leaf_of[i]
    while T.parent[v] != -1:
        d += T.degree(T.parent[v])
        v = T.parent[v]
    return d


def binarize(T: LabelTree, Y: LabelMatrix | None = None) -> LabelTree:
    """Replace every node of degree > 2 by a right comb of binary nodes.

    Children go into the comb by descending z-weight (heaviest shallowest,
    ties by node id) when ``Y`` is given, otherwise by node id. Unary
    internal nodes are contracted. A tree that is already full binary is
    returned unchanged.
    """
    internal = T.internal_nodes
    if all(T.degree(v) == 2 for v in internal):
        return T
    if Y is not None:
        weights = [mask.bit_count() for mask in node_masks(T, Y)]
    else:
        weights = [0] * T.size

    def build(v):
        if T.label[v] >= 0:
            return T.label[v]
        ch = sorted(T.children[v], key=lambda c: (-weights[c], c))
        subs = [build(c) for c in ch]
        if len(subs) <= 2:
            return subs
        comb = [subs[-2], subs[-1]]
        for s in reversed(subs[:-2]):
            comb = [s, comb]
        return comb

    return contract_unary(LabelTree.from_nested(build(T.root)))

"""Exhaustive search over all rooted leaf-labeled trees for small m.

Trees with m labeled leaves and every internal degree >= 2 are produced by
recursive set partitioning: the root's children are the blocks of a
partition of the label set into at least two blocks, singleton blocks are
leaves and larger blocks recurse. Counts for m = 1..8 are
1, 1, 4, 26, 236, 2752, 39208, 660032.
"""

from __future__ import annotations

import itertools
from math import comb
from functools import lru_cache
from typing import Iterator

from .labels import LabelMatrix
from .tree import LabelTree

MAX_M = 7
HARD_MAX_M = 8


class OracleRangeError(ValueError):
    pass


def _check_m(m: int, allow_large: bool) -> None:
    limit = HARD_MAX_M if allow_large else MAX_M
    if not 1 <= m <= limit:
        hint = "" if allow_large or m > HARD_MAX_M else " (pass allow_large=True for m = 8)"
        raise OracleRangeError(f"oracle supports 1 <= m <= {limit}, got m={m}{hint}")


def _partitions(items: tuple[int, ...]) -> list[list[tuple[int, ...]]]:
    if not items:
        return [[]]
    first, rest = items[0], items[1:]
    out = []
    for part in _partitions(rest):
        # first in its own block, or added to one of the existing blocks
        out.append([(first,)] + part)
        for k in range(len(part)):
            out.append(part[:k] + [(first,) + part[k]] + part[k + 1:])
    return out


@lru_cache(maxsize=None)
def _shapes(labels: tuple[int, ...]) -> tuple:
    """Every tree over ``labels`` as nested tuples (ints are leaves)."""
    if len(labels) == 1:
        return (labels[0],)
    out = []
    for part in _partitions(labels):
        if len(part) < 2:
            continue
        part = sorted(part)
        for combo in itertools.product(*(_shapes(block) for block in part)):
            out.append(combo)
    return tuple(out)


def _tolist(t):
    return t if isinstance(t, int) else [_tolist(c) for c in t]


def enumerate_nested(m: int, allow_large: bool = False) -> Iterator:
    """Trees as nested tuples, each shape+labeling exactly once."""
    _check_m(m, allow_large)
    if m == 1:
        yield (0,)
        return
    yield from _shapes(tuple(range(m)))


def enumerate_trees(m: int, allow_large: bool = False) -> Iterator[LabelTree]:
    for t in enumerate_nested(m, allow_large):
        yield LabelTree.from_nested(_tolist(t))


def count_trees_recurrence(m: int) -> int:
    """Number of trees via a recurrence on set partitions (no enumeration).

    Q(k) counts partitions of a k-set into blocks each carrying a tree,
    grouped by the block containing a fixed element. A tree on k >= 2
    leaves is such a partition with at least two blocks.
    """
    T = [0, 1]
    P = [1, 1]  # P[k]: partitions of a k-set with a tree on each block
    for k in range(2, m + 1):
        q = sum(comb(k - 1, s - 1) * T[s] * P[k - s] for s in range(1, k))
        T.append(q)
        P.append(q + T[k])
    return T[m]


def _subtree_costs(Y: LabelMatrix):
    masks = Y.col_masks

    @lru_cache(maxsize=None)
    def subtrees(labels: tuple[int, ...]):
        """(cost of internal nodes, mask, tree) for every tree over labels."""
        if len(labels) == 1:
            j = labels[0]
            return ((0, masks[j], j),)
        out = []
        for part in _partitions(labels):
            if len(part) < 2:
                continue
            part = sorted(part)
            mask = 0
            for block in part:
                for j in block:
                    mask |= masks[j]
            own = mask.bit_count() * len(part)
            for combo in itertools.product(*(subtrees(block) for block in part)):
                out.append((own + sum(c[0] for c in combo), mask, tuple(c[2] for c in combo)))
        return tuple(out)

    return subtrees


def iter_costs(Y: LabelMatrix, allow_large: bool = False) -> Iterator[tuple[int, tuple]]:
    """(c(T, Y), nested tree) for every tree, in enumeration order."""
    _check_m(Y.m, allow_large)
    if Y.m == 1:
        yield Y.n + len(Y.cols[0]), (0,)
        return
    for cost, _, t in _subtree_costs(Y)(tuple(range(Y.m))):
        yield Y.n + cost, t


def optimal_tree(Y: LabelMatrix, allow_large: bool = False) -> tuple[LabelTree, int]:
    """First tree in enumeration order attaining the minimum cost."""
    best = None
    for cost, t in iter_costs(Y, allow_large):
        if best is None or cost < best[0]:
            best = (cost, t)
    cost, t = best
    return LabelTree.from_nested(_tolist(t)), cost


def optimal_cost(Y: LabelMatrix, allow_large: bool = False) -> int:
    return optimal_tree(Y, allow_large)[1]


def _restricted_ok(t, weights) -> bool:
    """Internal degrees 2 or 3, and deeper leaves never heavier than shallower ones."""
    depth_of: dict[int, int] = {}
    stack = [(t, 0)]
    while stack:
        node, d = stack.pop()
        if isinstance(node, int):
            depth_of[node] = d
            continue
        if len(node) not in (2, 3):
            return False
        stack.extend((c, d + 1) for c in node)
    leaves = sorted(depth_of, key=lambda j: weights[j])
    for x, y in itertools.combinations(leaves, 2):
        if weights[x] < weights[y] and depth_of[x] < depth_of[y]:
            return False
    return True


def restricted_optimal_cost(Y: LabelMatrix) -> int:
    """Minimum over trees of the shape an optimal multi-class tree can take."""
    weights = [len(c) for c in Y.cols]
    if Y.m == 1:
        return Y.n + weights[0]
    best = None
    for cost, t in iter_costs(Y):
        if (best is None or cost < best) and _restricted_ok(t, weights):
            best = cost
    return best

"""Exact solver for nested (Matryoshka) label matrices.

When the label columns form a chain under inclusion, some optimal tree is a
chain of internal nodes, each holding the previous one plus a contiguous run
of leaves in weight order. Choosing the runs is a least-weight subsequence
problem over ``w(i, j)``, the cost of the node holding positions i+1..j::

    w(0, j) = j * a_j                 (bottom node, leaves only)
    w(i, j) = (j - i + 1) * a_j       (i > 0: leaves plus the node below)

``w`` satisfies the quadrangle inequality, so the best predecessor of j is
monotone in j and the recurrence can be solved in O(m log m).
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .labels import Kind, LabelMatrix, detect_structure
from .tree import LabelTree

MODES = ("dp_quadratic", "lws_fast")


class NotNestedError(ValueError):
    pass


@dataclass(frozen=True)
class NestedInstance:
    a: tuple[int, ...]
    perm: tuple[int, ...]
    n: int

    def __post_init__(self):
        if any(x > y for x, y in zip(self.a, self.a[1:])):
            raise ValueError("weights must be nondecreasing")
        if len(self.a) != len(self.perm):
            raise ValueError("perm and weights differ in length")

    @classmethod
    def from_weights(cls, a: Sequence[int], n: int | None = None) -> "NestedInstance":
        a = tuple(int(x) for x in a)
        return cls(a, tuple(range(len(a))), max(a, default=0) if n is None else n)

    @classmethod
    def from_matrix(cls, Y: LabelMatrix) -> "NestedInstance":
        sk = detect_structure(Y)
        if sk.kind is Kind.MULTI_CLASS and Y.m == 1:
            order = (0,)
        elif sk.kind is not Kind.NESTED:
            raise NotNestedError(f"label columns are not nested (structure: {sk.kind.value})")
        else:
            order = sk.nested_order
        a = tuple(len(Y.cols[j]) for j in order)
        if a and a[0] < 1:
            raise NotNestedError(f"label {order[0]} has no positive examples")
        return cls(a, tuple(order), Y.n)

    @property
    def m(self) -> int:
        return len(self.a)


@dataclass(frozen=True)
class Partition:
    """Block boundaries 0 = l_0 < l_1 < ... < l_k = m over weight positions."""

    boundaries: tuple[int, ...]
    structure_cost: int

    @property
    def blocks(self) -> list[range]:
        b = self.boundaries
        return [range(b[t] + 1, b[t + 1] + 1) for t in range(len(b) - 1)]


def lws_weight(i: int, j: int, inst: NestedInstance | Sequence[int]) -> int:
    a = inst.a if isinstance(inst, NestedInstance) else inst
    if not 0 <= i < j <= len(a):
        raise IndexError(f"need 0 <= i < j <= {len(a)}, got i={i}, j={j}")
    if i == 0:
        return j * a[j - 1]
    return (j - i + 1) * a[j - 1]


def partition_cost(boundaries: Sequence[int], a: Sequence[int]) -> int:
    """|S_1| max S_1 + sum_{j >= 2} (|S_j| + 1) max S_j."""
    return sum(lws_weight(boundaries[t], boundaries[t + 1], a) for t in range(len(boundaries) - 1))


def _check(inst: NestedInstance) -> None:
    if inst.m == 0:
        raise ValueError("empty instance")


def _dp_quadratic(a: Sequence[int]) -> Partition:
    m = len(a)
    A = np.zeros(m + 1, dtype=np.int64)
    A[1:] = a
    idx = np.arange(m + 1, dtype=np.int64)
    f = np.zeros(m + 1, dtype=np.int64)
    for j in range(1, m + 1):
        aj = A[j]
        best = j * aj
        if j > 1:
            cand = f[1:j] - idx[1:j] * aj
            best = min(best, int(cand.min()) + (j + 1) * aj)
        f[j] = best

    # fewest blocks among optimal partitions, then lexicographically smallest
    big = np.iinfo(np.int64).max
    g = np.full(m + 1, big, dtype=np.int64)
    g[m] = 0
    for i in range(m - 1, -1, -1):
        js = idx[i + 1:]
        w = js * A[i + 1:] if i == 0 else (js - i + 1) * A[i + 1:]
        tight = (f[i] + w == f[i + 1:]) & (g[i + 1:] < big)
        if tight.any():
            g[i] = 1 + g[i + 1:][tight].min()
    bounds = [0]
    cur = 0
    while cur < m:
        js = idx[cur + 1:]
        w = js * A[cur + 1:] if cur == 0 else (js - cur + 1) * A[cur + 1:]
        ok = (f[cur] + w == f[cur + 1:]) & (g[cur + 1:] == g[cur] - 1)
        cur = int(js[np.argmax(ok)])
        bounds.append(cur)
    return Partition(tuple(bounds), int(f[m]))


def _lws_fast(a: Sequence[int]) -> Partition:
    m = len(a)
    f = [0] * (m + 1)
    arg = [0] * (m + 1)

    def value(i: int, j: int) -> int:
        if i == 0:
            return j * a[j - 1]
        return f[i] + (j - i + 1) * a[j - 1]

    # each entry [candidate, first j it is responsible for]; starts increase
    queue: deque[list[int]] = deque([[0, 1]])
    for j in range(1, m + 1):
        while len(queue) > 1 and queue[1][1] <= j:
            queue.popleft()
        i = queue[0][0]
        f[j] = value(i, j)
        arg[j] = i
        if j == m:
            break
        # candidate j takes over every position from the first one where it is strictly better
        while queue:
            c, s = queue[-1]
            s = max(s, j + 1)
            if value(j, s) < value(c, s):
                queue.pop()
                continue
            lo, hi = s + 1, m + 1
            while lo < hi:
                mid = (lo + hi) // 2
                if value(j, mid) < value(c, mid):
                    hi = mid
                else:
                    lo = mid + 1
            if lo <= m:
                queue.append([j, lo])
            break
        else:
            queue.append([j, j + 1])
    bounds = [m]
    while bounds[-1] > 0:
        bounds.append(arg[bounds[-1]])
    return Partition(tuple(reversed(bounds)), f[m])


def solve_nested(inst: NestedInstance, mode: str = "lws_fast") -> Partition:
    """Minimum-cost contiguous partition of the sorted weights."""
    _check(inst)
    if mode == "dp_quadratic":
        return _dp_quadratic(inst.a)
    if mode == "lws_fast":
        return _lws_fast(inst.a)
    raise ValueError(f"unknown mode {mode!r}, expected one of {MODES}")


def partition_to_tree(P: Partition, inst: NestedInstance) -> LabelTree:
    """Chain tree: the first block hangs under the bottom node, each later
    node holds the node below it followed by the leaves of its block."""
    b = P.boundaries
    if len(b) < 2 or b[0] != 0 or b[-1] != inst.m or any(x >= y for x, y in zip(b, b[1:])):
        raise ValueError(f"malformed partition {b} for m={inst.m}")
    node = None
    for block in P.blocks:
        leaves = [inst.perm[pos - 1] for pos in block]
        node = leaves if node is None else [node] + leaves
    return LabelTree.from_nested(node)


def solve_matrix(Y: LabelMatrix, mode: str = "lws_fast") -> tuple[LabelTree, Partition]:
    inst = NestedInstance.from_matrix(Y)
    P = solve_nested(inst, mode)
    return partition_to_tree(P, inst), P

"""Tree builders with cost guarantees.

* complete ternary tree: within a log factor of optimal on any instance
* ternary Huffman and ternary Shannon trees: within 3n of optimal on
  multi-class instances
* greedy binary set merging: heuristic for general multi-label data
"""

from __future__ import annotations

import bisect
import math
from collections import deque
from dataclasses import dataclass

from .labels import LabelMatrix, is_multiclass
from .tree import LabelTree, contract_unary

LOG2_3 = math.log2(3)
MERGE_CANDIDATES = 32


class StructureError(ValueError):
    """Input does not have the label structure a builder requires."""


class ZeroWeightError(StructureError):
    """A label has no positive examples where every p_j > 0 is required."""


@dataclass(frozen=True)
class WeightProfile:
    """Label weights sorted ascending; ``order[k]`` is the label of ``weights[k]``."""

    weights: tuple[int, ...]
    order: tuple[int, ...]
    n: int

    @classmethod
    def from_weights(cls, weights, n: int) -> "WeightProfile":
        order = tuple(sorted(range(len(weights)), key=lambda j: (weights[j], j)))
        return cls(tuple(weights[j] for j in order), order, n)

    @classmethod
    def from_matrix(cls, Y: LabelMatrix) -> "WeightProfile":
        """Profile of a multi-class matrix; rejects other structures and empty labels."""
        if not is_multiclass(Y):
            raise StructureError("multi-class input required: every row must hold exactly one label")
        return cls.from_weights([len(c) for c in Y.cols], Y.n)

    @property
    def m(self) -> int:
        return len(self.weights)

    def require_positive(self) -> None:
        if self.m == 0:
            raise ValueError("no labels")
        if self.weights[0] < 1:
            raise ZeroWeightError(f"label {self.order[0]} has zero weight")

    def require_multiclass_mass(self) -> None:
        if sum(self.weights) != self.n:
            raise StructureError(f"weights sum to {sum(self.weights)}, multi-class needs n = {self.n}")


@dataclass(frozen=True)
class EntropyBound:
    entropy: float
    lower_bound: float


def build_complete_ternary(m: int) -> LabelTree:
    """All leaves at depth ceil(log3 m), labels left to right in id order.

    Each level groups the level below into ceil(x/3) nodes of near-equal
    size, so internal degrees are 2 or 3 and no padding leaves are needed.
    """
    if m < 1:
        raise ValueError("m must be at least 1")
    level: list = list(range(m))
    while True:
        groups = -(-len(level) // 3)
        q, r = divmod(len(level), groups)
        nxt, start = [], 0
        for g in range(groups):
            size = q + (1 if g < r else 0)
            nxt.append(level[start:start + size])
            start += size
        level = nxt
        if len(level) == 1:
            return LabelTree.from_nested(level[0])


def build_ternary_huffman(W: WeightProfile) -> LabelTree:
    """Merge the three lightest subtrees until one remains.

    When m - 1 is odd the first merge takes two, so every later merge is
    ternary. Weights are small integers, so the priority queue is an array
    of FIFO buckets scanned once from left to right; FIFO order within a
    bucket is creation order, which is the tie-break.
    """
    W.require_positive()
    m = W.m
    if m == 1:
        return LabelTree.from_nested([W.order[0]])
    buckets: list[deque] = [deque() for _ in range(sum(W.weights) + 1)]
    for w, lab in zip(W.weights, W.order):
        buckets[w].append(lab)
    ptr = W.weights[0]

    def pop():
        nonlocal ptr
        while not buckets[ptr]:
            ptr += 1
        return ptr, buckets[ptr].popleft()

    take = 2 if (m - 1) % 2 else 3
    alive = m
    while True:
        parts = [pop() for _ in range(take)]
        merged_w = sum(w for w, _ in parts)
        node = [sub for _, sub in parts]
        alive -= take - 1
        if alive == 1:
            return LabelTree.from_nested(node)
        buckets[merged_w].append(node)
        take = 3


def shannon_depths(W: WeightProfile) -> list[int]:
    """ceil(log3(n / w)) per profile position, at least 1; exact integer arithmetic."""
    depths = []
    for w in W.weights:
        d = 0
        power = 1
        while power * w < W.n:
            power *= 3
            d += 1
        depths.append(max(d, 1))
    return depths


def build_ternary_shannon(W: WeightProfile) -> LabelTree:
    """Place label i at depth ceil(log3(1/p_i)), filling levels top-down.

    At each level the leaves of that depth take the first free slots
    (heaviest first) and just enough internal nodes are opened to hold the
    deeper leaves; Kraft's inequality guarantees the slots suffice. Internal
    nodes left with a single child are contracted afterwards, which only
    moves leaves up.
    """
    W.require_positive()
    W.require_multiclass_mass()
    if W.m == 1:
        return LabelTree.from_nested([W.order[0]])
    depths = shannon_depths(W)
    # heaviest (shallowest) first, ties by label id
    items = sorted(zip(depths, W.order, W.weights), key=lambda t: (t[0], -t[2], t[1]))
    max_d = items[-1][0]
    root: list = []
    parents = [root]
    pos = 0
    for d in range(1, max_d + 1):
        slots = [p for p in parents for _ in range(3)]
        used = 0
        while pos < len(items) and items[pos][0] == d:
            slots[used].append(items[pos][1])
            used += 1
            pos += 1
        need = sum(3 ** (max_d - dd) for dd, _, _ in items[pos:])
        unit = 3 ** (max_d - d)
        k = -(-need // unit)
        if used + k > len(slots):
            raise AssertionError("Kraft inequality violated")
        parents = []
        for s in range(used, used + k):
            child: list = []
            slots[s].append(child)
            parents.append(child)
    return contract_unary(LabelTree.from_nested(root))


def build_binary_merge(Y: LabelMatrix, candidates: int = MERGE_CANDIDATES) -> LabelTree:
    """Greedy set merging: join the two roots whose union covers the fewest rows.

    Only the ``candidates`` lightest roots are considered at each step.
    Ties go to the pair with the smaller creation ids.
    """
    m = Y.m
    if m < 1:
        raise ValueError("m must be at least 1")
    if m == 1:
        return LabelTree.from_nested([0])
    masks = Y.col_masks
    # (weight, creation id) keys are unique, so mask and subtree never get compared
    active = sorted((masks[j].bit_count(), j, masks[j], j) for j in range(m))
    next_id = m
    while len(active) > 1:
        pool = active[:candidates]
        best = None
        for a in range(len(pool)):
            wa, ida, ma, _ = pool[a]
            for b in range(a + 1, len(pool)):
                wb, idb, mb, _ = pool[b]
                key = ((ma | mb).bit_count(), min(ida, idb), max(ida, idb))
                if best is None or key < best[0]:
                    best = (key, a, b)
        _, a, b = best
        first, second = sorted((pool[a], pool[b]), key=lambda t: t[1])
        del active[b]
        del active[a]
        mask = first[2] | second[2]
        bisect.insort(active, (mask.bit_count(), next_id, mask, [first[3], second[3]]))
        next_id += 1
    return LabelTree.from_nested(active[0][3])


def entropy(probs) -> float:
    """H(p_1..p_k) = sum p log2(1/p), no normalisation."""
    return sum(p * math.log2(1.0 / p) for p in probs if p > 0)


def entropy_lower_bound(W: WeightProfile) -> EntropyBound:
    """n + (3n / log2 3) * H(p): no tree costs less on a multi-class instance."""
    W.require_positive()
    H = entropy(w / W.n for w in W.weights)
    return EntropyBound(H, W.n + 3 * W.n / LOG2_3 * H)

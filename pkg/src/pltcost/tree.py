"""Rooted leaf-labeled trees and their tab-separated text format.

A tree is stored as two parallel tuples indexed by node id: ``parent``
(``-1`` at the root) and ``label`` (``-1`` at internal nodes). Children are
ordered by node id, so builders that number nodes in preorder get a stable
child order for free.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Sequence, Union

Nested = Union[int, Sequence["Nested"]]


class TreeFormatError(ValueError):
    pass


class InvalidTreeError(ValueError):
    def __init__(self, errors: list[str]):
        super().__init__("; ".join(errors))
        self.errors = errors


@dataclass(frozen=True)
class LabelTree:
    parent: tuple[int, ...]
    label: tuple[int, ...]

    # -- construction -------------------------------------------------

    @classmethod
    def from_nested(cls, spec: Nested) -> "LabelTree":
        """Build from a nested list: an int is a leaf label, a list an internal node.

        Nodes are numbered in preorder. ``[0]`` is a root with a single leaf.
        """
        parent: list[int] = []
        label: list[int] = []

        stack = [(spec, -1)]
        while stack:
            node, par = stack.pop()
            vid = len(parent)
            parent.append(par)
            if isinstance(node, int):
                label.append(node)
            else:
                label.append(-1)
                for child in reversed(list(node)):
                    stack.append((child, vid))
        return cls(tuple(parent), tuple(label))

    def to_nested(self, v: int | None = None):
        """Inverse of :meth:`from_nested` (lists for internal nodes)."""
        if v is None:
            v = self.root
        if self.label[v] >= 0:
            return self.label[v]
        return [self.to_nested(c) for c in self.children[v]]

    # -- structure ----------------------------------------------------

    @property
    def size(self) -> int:
        return len(self.parent)

    @cached_property
    def children(self) -> tuple[tuple[int, ...], ...]:
        ch: list[list[int]] = [[] for _ in self.parent]
        for v, p in enumerate(self.parent):
            if 0 <= p < len(ch):
                ch[p].append(v)
        return tuple(tuple(c) for c in ch)

    @cached_property
    def root(self) -> int:
        roots = [v for v, p in enumerate(self.parent) if p == -1]
        if len(roots) != 1:
            raise InvalidTreeError([f"expected one root, found {len(roots)}"])
        return roots[0]

    @cached_property
    def num_labels(self) -> int:
        return sum(1 for lab in self.label if lab >= 0)

    @cached_property
    def leaf_of(self) -> tuple[int, ...]:
        """leaf_of[j] is the node carrying label j."""
        out = [-1] * self.num_labels
        for v, lab in enumerate(self.label):
            if lab >= 0:
                out[lab] = v
        return tuple(out)

    def degree(self, v: int) -> int:
        return len(self.children[v])

    def is_leaf(self, v: int) -> bool:
        return self.label[v] >= 0

    @cached_property
    def preorder(self) -> tuple[int, ...]:
        out = []
        stack = [self.root]
        while stack:
            v = stack.pop()
            out.append(v)
            stack.extend(reversed(self.children[v]))
        return tuple(out)

    @cached_property
    def postorder(self) -> tuple[int, ...]:
        # reversed preorder visits every child before its parent
        return tuple(reversed(self.preorder))

    @cached_property
    def path_len(self) -> tuple[int, ...]:
        """len_v: number of nodes on the path from v to the root (root -> 1)."""
        out = [0] * self.size
        for v in self.preorder:
            p = self.parent[v]
            out[v] = 1 if p == -1 else out[p] + 1
        return tuple(out)

    @cached_property
    def depth(self) -> int:
        """depth_T = max over leaves of len_v - 1."""
        return max((self.path_len[v] - 1 for v in self.leaf_of), default=0)

    @cached_property
    def max_degree(self) -> int:
        return max(len(c) for c in self.children)

    def path(self, v: int) -> list[int]:
        """Path(v): v and its ancestors up to and including the root."""
        out = []
        while v != -1:
            out.append(v)
            v = self.parent[v]
        return out

    @cached_property
    def leaf_labels(self) -> tuple[frozenset[int], ...]:
        """L(v) for every node."""
        out: list[frozenset[int]] = [frozenset()] * self.size
        for v in self.postorder:
            if self.label[v] >= 0:
                out[v] = frozenset((self.label[v],))
            else:
                out[v] = frozenset().union(*(out[c] for c in self.children[v]))
        return tuple(out)

    @cached_property
    def inner_counts(self) -> tuple[int, ...]:
        """|T(v)|: number of internal nodes in the subtree rooted at v."""
        out = [0] * self.size
        for v in self.postorder:
            if self.label[v] < 0:
                out[v] = 1 + sum(out[c] for c in self.children[v])
        return tuple(out)

    @property
    def internal_nodes(self) -> list[int]:
        return [v for v in range(self.size) if self.label[v] < 0]

    # -- canonical comparison ------------------------------------------

    def canonical(self):
        """Shape+labeling key independent of node numbering and child order."""

        def key(v):
            if self.label[v] >= 0:
                return (0, self.label[v])
            return (1, tuple(sorted(key(c) for c in self.children[v])))

        return key(self.root)

    # -- text format ----------------------------------------------------

    def to_tsv(self) -> str:
        return "".join(f"{v}\t{p}\t{lab}\n" for v, (p, lab) in enumerate(zip(self.parent, self.label)))


def parse_tree(text: str) -> LabelTree:
    """Parse ``node_id<TAB>parent_id<TAB>label`` lines; ids must be dense."""
    entries: dict[int, tuple[int, int]] = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        parts = line.split("\t")
        if len(parts) != 3:
            raise TreeFormatError(f"line {lineno}: expected 3 tab-separated fields")
        try:
            v, p, lab = (int(x) for x in parts)
        except ValueError:
            raise TreeFormatError(f"line {lineno}: non-integer field") from None
        if v in entries:
            raise TreeFormatError(f"line {lineno}: duplicate node id {v}")
        entries[v] = (p, lab)
    if sorted(entries) != list(range(len(entries))):
        raise TreeFormatError("node ids are not dense in [0, |V|)")
    parent = tuple(entries[v][0] for v in range(len(entries)))
    label = tuple(entries[v][1] for v in range(len(entries)))
    return LabelTree(parent, label)


def read_tree(path) -> LabelTree:
    with open(path, encoding="ascii") as fh:
        return parse_tree(fh.read())


def validate_tree(T: LabelTree, m: int) -> list[str]:
    """Return a list of violated invariants (empty list means valid)."""
    errors: list[str] = []
    size = T.size
    if size == 0:
        return ["empty tree"]
    roots = [v for v, p in enumerate(T.parent) if p == -1]
    if len(roots) != 1:
        errors.append(f"expected exactly one root, found {len(roots)}")
    for v, p in enumerate(T.parent):
        if p == v:
            errors.append(f"cycle: node {v} is its own parent")
        elif p < -1 or p >= size:
            errors.append(f"node {v}: parent {p} out of range")
    # every node must reach a root without revisiting
    state = [0] * size  # 0 unknown, 1 on stack, 2 reaches root
    for start in range(size):
        trail = []
        v = start
        while v != -1 and 0 <= v < size and state[v] == 0:
            state[v] = 1
            trail.append(v)
            v = T.parent[v]
        if v != -1 and 0 <= v < size and state[v] == 1:
            errors.append(f"cycle through node {v}")
        for u in trail:
            state[u] = 2
    seen: dict[int, int] = {}
    for v, lab in enumerate(T.label):
        if lab < -1:
            errors.append(f"node {v}: invalid label {lab}")
        elif lab >= 0:
            if lab >= m:
                errors.append(f"node {v}: label {lab} out of range [0, {m})")
            if lab in seen:
                errors.append(f"duplicate label {lab} on nodes {seen[lab]} and {v}")
            seen.setdefault(lab, v)
    for j in range(m):
        if j not in seen:
            errors.append(f"missing label {j}")
    children = T.children
    for v, lab in enumerate(T.label):
        if lab >= 0 and children[v]:
            errors.append(f"labeled internal node {v}")
        if lab == -1 and not children[v]:
            errors.append(f"unlabeled leaf {v}")
    return errors


def check_tree(T: LabelTree, m: int) -> LabelTree:
    errors = validate_tree(T, m)
    if errors:
        raise InvalidTreeError(errors)
    return T


def contract_unary(T: LabelTree) -> LabelTree:
    """Remove internal nodes with a single child (the child takes their place).

    A root whose only child is a leaf is kept: that is how a one-label tree
    is represented.
    """

    def build(v):
        ch = T.children[v]
        if T.label[v] >= 0:
            return T.label[v]
        if len(ch) == 1:
            return build(ch[0])
        return [build(c) for c in ch]

    spec = build(T.root)
    if isinstance(spec, int):
        spec = [spec]
    return LabelTree.from_nested(spec)


def relabel(T: LabelTree, mapping: Sequence[int]) -> LabelTree:
    """Replace every leaf label j by mapping[j]."""
    return LabelTree(T.parent, tuple(mapping[lab] if lab >= 0 else -1 for lab in T.label))


def star(m: int) -> LabelTree:
    return LabelTree.from_nested(list(range(m)))

"""Finite conditional label distributions P(y | x) for a fixed x."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable

MASS_TOL = 1e-9


class ScenarioError(ValueError):
    pass


@dataclass(frozen=True)
class Scenario:
    """Explicit support of P(y | x): distinct label subsets with probabilities."""

    m: int
    support: tuple[tuple[frozenset[int], float], ...]

    def __post_init__(self):
        seen = set()
        total = 0.0
        for subset, p in self.support:
            if not (0.0 <= p <= 1.0) or math.isnan(p):
                raise ScenarioError(f"probability {p} outside [0, 1]")
            if subset in seen:
                raise ScenarioError(f"subset {sorted(subset)} listed twice")
            seen.add(subset)
            if any(j < 0 or j >= self.m for j in subset):
                raise ScenarioError(f"subset {sorted(subset)} has labels outside [0, {self.m})")
            total += p
        if abs(total - 1.0) > MASS_TOL:
            raise ScenarioError(f"probabilities sum to {total}, expected 1")

    @classmethod
    def of(cls, m: int, pairs: Iterable[tuple[Iterable[int], float]]) -> "Scenario":
        return cls(m, tuple((frozenset(s), float(p)) for s, p in pairs))

    @classmethod
    def point(cls, m: int, labels: Iterable[int]) -> "Scenario":
        return cls.of(m, [(labels, 1.0)])

    def label_marginals(self) -> list[float]:
        """eta_j = P(y_j = 1)."""
        eta = [0.0] * self.m
        for subset, p in self.support:
            for j in subset:
                eta[j] += p
        return eta

    def to_text(self) -> str:
        lines = [f"{self.m} {len(self.support)}"]
        for subset, p in self.support:
            lines.append(" ".join([repr(p)] + [str(j) for j in sorted(subset)]))
        return "\n".join(lines) + "\n"


def parse_scenario(text: str) -> Scenario:
    """Parse ``"m k"`` then k lines ``"p id id ..."``."""
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise ScenarioError("empty scenario file")
    head = lines[0].split()
    if len(head) != 2:
        raise ScenarioError(f"malformed header {lines[0]!r}")
    try:
        m, k = int(head[0]), int(head[1])
    except ValueError:
        raise ScenarioError(f"malformed header {lines[0]!r}") from None
    if len(lines) - 1 != k:
        raise ScenarioError(f"expected {k} support lines, found {len(lines) - 1}")
    pairs = []
    for line in lines[1:]:
        toks = line.split()
        try:
            p = float(toks[0])
            ids = [int(t) for t in toks[1:]]
        except ValueError:
            raise ScenarioError(f"malformed support line {line!r}") from None
        if len(set(ids)) != len(ids):
            raise ScenarioError(f"duplicate label in support line {line!r}")
        pairs.append((ids, p))
    return Scenario.of(m, pairs)


def read_scenario(path) -> Scenario:
    with open(path, encoding="ascii") as fh:
        return parse_scenario(fh.read())

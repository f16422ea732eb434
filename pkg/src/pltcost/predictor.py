"""Threshold prediction on a label tree with simulated node classifiers.

Node classifiers are replaced by the exact conditional probabilities of a
:class:`~pltcost.scenario.Scenario`, optionally perturbed by a per-node
error, then normalised so that every internal node satisfies
``max child <= parent <= min(1, sum children)``.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from typing import Sequence

from .cost import expected_cost, node_probabilities
from .scenario import Scenario
from .tree import LabelTree


@dataclass(frozen=True)
class NodeProbabilities:
    tree: LabelTree
    marginal: tuple[float, ...]      # eta_v(x) = P(z_v = 1 | x)
    conditional: tuple[float, ...]   # eta(x, v) = P(z_v = 1 | z_pa(v) = 1, x)


@dataclass(frozen=True)
class NodeEstimates:
    tree: LabelTree
    estimate: tuple[float, ...]      # normalised conditional estimates
    marginal: tuple[float, ...]      # normalised marginal estimates
    eps: tuple[float, ...]           # |eta(x, v) - estimate(x, v)| after normalisation
    tau: float


@dataclass(frozen=True)
class PredictionResult:
    predicted: frozenset[int]
    calls: int
    call_bound: int


@dataclass(frozen=True)
class BoundReport:
    p_true: float
    p_hat: float
    p_hat_bound: float
    calls: int
    calls_bound: int
    training_cost: float
    expected_calls_bound: float
    residuals: tuple[float, ...]
    residual_bounds: tuple[float, ...]

    @property
    def ok(self) -> bool:
        tol = 1e-9
        return (
            self.calls <= self.calls_bound
            and self.p_hat <= self.p_hat_bound + tol
            and all(r <= b + tol for r, b in zip(self.residuals, self.residual_bounds))
        )


def _ratio(num: float, den: float) -> float:
    return num / den if den > 0 else 0.0


def scenario_node_probabilities(T: LabelTree, S: Scenario) -> NodeProbabilities:
    marg = node_probabilities(T, S)
    cond = [
        marg[v] if p == -1 else _ratio(marg[v], marg[p])
        for v, p in enumerate(T.parent)
    ]
    return NodeProbabilities(T, tuple(marg), tuple(cond))


def normalize_children(parent: float, children: Sequence[float]) -> list[float]:
    """Clamp each child to the parent, then scale up if the parent exceeds their sum.

    If every child is zero under a positive parent the parent is split evenly.
    """
    out = [min(c, parent) for c in children]
    s = sum(out)
    if parent > s:
        if s > 0:
            out = [c * parent / s for c in out]
        elif out:
            out = [parent / len(out)] * len(out)
    return out


def normalize_marginals(T: LabelTree, raw: Sequence[float]) -> list[float]:
    """Top-down normalisation of marginal estimates (each parent fixed before its children)."""
    marg = list(raw)
    for v in T.preorder:
        ch = T.children[v]
        if ch:
            fixed = normalize_children(marg[v], [marg[c] for c in ch])
            for c, val in zip(ch, fixed):
                marg[c] = val
    return marg


def perturb_and_normalize(
    probs: NodeProbabilities,
    magnitude: float | Sequence[float] = 0.0,
    seed: int = 0,
    tau: float = 0.5,
) -> NodeEstimates:
    """Shift every conditional by +-magnitude (random sign), clamp to [0, 1], normalise.

    Errors are measured after normalisation, on the conditionals implied by
    the normalised marginals.
    """
    T = probs.tree
    if not 0.0 < tau <= 1.0:
        raise ValueError("tau must lie in (0, 1]")
    if isinstance(magnitude, (int, float)):
        mags = [float(magnitude)] * T.size
    else:
        mags = [float(x) for x in magnitude]
        if len(mags) != T.size:
            raise ValueError("need one error magnitude per node")
    if any(not 0.0 <= x <= 1.0 for x in mags):
        raise ValueError("error magnitudes must lie in [0, 1]")

    rng = random.Random(seed)
    cond_hat = []
    for v in range(T.size):
        sign = 1.0 if rng.random() < 0.5 else -1.0
        cond_hat.append(min(1.0, max(0.0, probs.conditional[v] + sign * mags[v])))

    marg = [0.0] * T.size
    exact = [False] * T.size
    for v in T.preorder:
        p = T.parent[v]
        if p == -1:
            marg[v] = cond_hat[v]
            exact[v] = marg[v] == probs.marginal[v]
            continue
        if exact[p] and cond_hat[v] == probs.conditional[v]:
            # untouched node under an untouched parent keeps its true marginal exactly
            marg[v] = probs.marginal[v]
        else:
            marg[v] = marg[p] * cond_hat[v]
    raw = list(marg)
    marg = normalize_marginals(T, raw)
    for v in T.preorder:
        p = T.parent[v]
        exact[v] = marg[v] == probs.marginal[v] and (p == -1 or exact[p])

    est = []
    for v, p in enumerate(T.parent):
        if p == -1:
            est.append(marg[v])
        elif exact[v] and exact[p]:
            est.append(probs.conditional[v])
        else:
            est.append(_ratio(marg[v], marg[p]))
    eps = tuple(abs(c - e) for c, e in zip(probs.conditional, est))
    return NodeEstimates(T, tuple(est), tuple(marg), eps, tau)


def exact_estimates(probs: NodeProbabilities, tau: float = 0.5) -> NodeEstimates:
    return perturb_and_normalize(probs, 0.0, 0, tau)


def predict(T: LabelTree, E: NodeEstimates) -> PredictionResult:
    """Depth-first threshold search from the root.

    A popped node whose estimate reaches tau either sets its label (leaf) or
    pushes all children with their estimates; every push is one classifier
    call, plus one for the root. Child estimates are read from the
    normalised marginal table, which is where the product
    ``parent estimate * child conditional`` is materialised.
    """
    tau = E.tau
    predicted = set()
    calls = 1
    stack = [(T.root, E.marginal[T.root])]
    while stack:
        v, est = stack.pop()
        if est >= tau:
            if T.label[v] >= 0:
                predicted.add(T.label[v])
            else:
                for c in T.children[v]:
                    stack.append((c, E.marginal[c]))
                    calls += 1
    p_hat = sum(E.marginal[v] for v in T.leaf_of)
    return PredictionResult(frozenset(predicted), calls, calls_upper_bound(T, p_hat, tau))


def calls_closed_form(T: LabelTree, E: NodeEstimates) -> int:
    return 1 + sum(T.degree(v) for v in range(T.size) if E.marginal[v] >= E.tau)


def calls_upper_bound(T: LabelTree, p_hat: float, tau: float) -> int:
    return 1 + math.floor(p_hat / tau) * T.depth * T.max_degree


def _parent_marginal(T: LabelTree, probs: NodeProbabilities, v: int) -> float:
    p = T.parent[v]
    return 1.0 if p == -1 else probs.marginal[p]


def prediction_cost_bounds(T: LabelTree, S: Scenario, E: NodeEstimates) -> BoundReport:
    probs = scenario_node_probabilities(T, S)
    tau = E.tau
    result = predict(T, E)
    p_true = sum(probs.marginal[v] for v in T.leaf_of)
    p_hat = sum(E.marginal[v] for v in T.leaf_of)
    weighted = [_parent_marginal(T, probs, v) * E.eps[v] for v in range(T.size)]
    p_hat_bound = p_true + sum(len(T.leaf_labels[v]) * weighted[v] for v in range(T.size))

    path_sum = [0.0] * T.size
    for v in T.preorder:
        p = T.parent[v]
        path_sum[v] = weighted[v] + (0.0 if p == -1 else path_sum[p])
    residuals = tuple(abs(probs.marginal[v] - E.marginal[v]) for v in range(T.size))

    c_p = expected_cost(T, S)
    extra = sum(weighted[v] * T.inner_counts[v] * T.degree(v) for v in range(T.size))
    rhs = (c_p + extra) / tau - (1 - tau) / tau
    return BoundReport(
        p_true=p_true,
        p_hat=p_hat,
        p_hat_bound=p_hat_bound,
        calls=result.calls,
        calls_bound=result.call_bound,
        training_cost=c_p,
        expected_calls_bound=rhs,
        residuals=residuals,
        residual_bounds=tuple(path_sum),
    )


@dataclass(frozen=True)
class ExpectedCosts:
    prediction: float   # C_{P(x), tau}(T)
    training: float     # C_P(T)
    expected_calls_bound: float


def expected_costs(
    T: LabelTree, cases: Sequence[tuple[float, Scenario, NodeEstimates]]
) -> ExpectedCosts:
    """Exact expectations over a finite list of (weight, scenario, estimates) instances."""
    total_w = sum(w for w, _, _ in cases)
    if abs(total_w - 1.0) > 1e-9:
        raise ValueError(f"instance weights sum to {total_w}, expected 1")
    taus = {E.tau for _, _, E in cases}
    if len(taus) != 1:
        raise ValueError("all instances must share one threshold")
    tau = taus.pop()
    pred = train = extra = 0.0
    for w, S, E in cases:
        probs = scenario_node_probabilities(T, S)
        pred += w * predict(T, E).calls
        train += w * expected_cost(T, S)
        extra += w * sum(
            _parent_marginal(T, probs, v) * E.eps[v] * T.inner_counts[v] * T.degree(v)
            for v in range(T.size)
        )
    return ExpectedCosts(pred, train, (train + extra) / tau - (1 - tau) / tau)

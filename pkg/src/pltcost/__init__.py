"""Training- and prediction-cost tools for probabilistic label trees."""

from .builders import (
    EntropyBound,
    WeightProfile,
    build_binary_merge,
    build_complete_ternary,
    build_ternary_huffman,
    build_ternary_shannon,
    entropy_lower_bound,
)
from .cost import (
    Assignment,
    CostReport,
    NodeStats,
    assign_to_nodes,
    binarize,
    compute_node_weights,
    dataset_cost,
    example_cost,
    expected_cost,
    sensitivity,
)
from .labels import LabelMatrix, column_stats, detect_structure, parse_dataset
from .matryoshka import NestedInstance, Partition, lws_weight, partition_to_tree, solve_nested
from .oracle import enumerate_trees, optimal_tree
from .predictor import (
    perturb_and_normalize,
    predict,
    prediction_cost_bounds,
    scenario_node_probabilities,
)
from .scenario import Scenario, parse_scenario
from .tree import LabelTree, parse_tree, validate_tree

__version__ = "0.1.0"

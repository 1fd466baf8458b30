"""Fixed-point forests on permutations, Poisson bump trees and their moment identities."""

from ._core import (
    bound_double_complete,
    bump_value,
    bump_word,
    children,
    count_complete_fillings,
    count_double_complete,
    count_leaf_fillings,
    desc_tree,
    double_complete_product,
    estimate_bump_moments,
    exact_depth_expectations,
    expected_leaves,
    expected_size,
    fixed_points,
    forest_summary,
    gw_moments,
    is_complete,
    local_limit_check,
    recover_order,
    second_moment_bounds,
    separation_config,
    simulate_gw,
    tail_diagnostic,
    tau,
    tree_of_word,
    truncated_factorial,
    verify,
    verify_suite_names,
    vertex_count_via_subsets,
)

__all__ = [
    "bound_double_complete",
    "bump_value",
    "bump_word",
    "children",
    "count_complete_fillings",
    "count_double_complete",
    "count_leaf_fillings",
    "desc_tree",
    "double_complete_product",
    "estimate_bump_moments",
    "exact_depth_expectations",
    "expected_leaves",
    "expected_size",
    "fixed_points",
    "forest_summary",
    "gw_moments",
    "is_complete",
    "local_limit_check",
    "recover_order",
    "second_moment_bounds",
    "separation_config",
    "simulate_gw",
    "tail_diagnostic",
    "tau",
    "tree_of_word",
    "truncated_factorial",
    "verify",
    "verify_suite_names",
    "vertex_count_via_subsets",
]

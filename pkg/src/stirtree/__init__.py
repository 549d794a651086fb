"""Plane recursive trees, Stirling permutations and the ascent/descent/plateau urn."""

from .oracles import (
    ExactDist,
    asymptotic_sigma,
    beta_moment,
    cov_pair,
    double_factorial,
    eulerian_row,
    joint_pmf,
    mean_L,
    pmf_L,
    simplified_model_variance,
    var_L,
)
from .structures import (
    InvalidStirlingError,
    InvalidStructureError,
    PlaneRecursiveTree,
    StirlingPermutation,
    TrapezoidalWord,
    attach_leaf,
    code_to_tree,
    insert_pair,
    tree_to_code,
    validate_stirling,
)

__version__ = "0.1.0"

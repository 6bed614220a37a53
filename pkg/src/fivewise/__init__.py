"""Exact sampler and verification lab for a strictly stationary, causal,
5-tuplewise independent sign process built on a six-cycle renewal
hierarchy.

Quick start::

    from fivewise import SamplerConfig, sample_path

    path = sample_path((0, 999), SamplerConfig(seed=1))
    path.signs          # +-1 values
    path.depths         # block-hierarchy depth per position

The `campaigns` module holds the named verification suites; the
`fivewise` console script drives everything from the command line.
"""

from .chain import (
    BudgetExceededError,
    derive_transition_matrix,
    identity_pattern_probability,
    literal_level1_sampler,
    return_time_samples,
    sample_stationary_path,
    sample_stationary_path_cftp,
)
from .engine import BatchResolution, SamplerConfig
from .hierarchy import (
    HierarchyWindow,
    build,
    double_one_probability,
    literal_build,
)
from .measures import (
    enumerate_key_vectors,
    exact_distribution,
    exact_moments,
    sample_key,
    sample_level,
    sixth_moment_gap,
    sum_distribution,
)
from .process import (
    audit_block_contents,
    audit_window,
    covering_of,
    decompose_blocks,
    sample_path,
)

__version__ = "0.1.0"

__all__ = [
    "BatchResolution", "BudgetExceededError", "HierarchyWindow",
    "SamplerConfig", "audit_block_contents", "audit_window", "build",
    "covering_of", "decompose_blocks", "derive_transition_matrix",
    "double_one_probability", "enumerate_key_vectors",
    "exact_distribution", "exact_moments", "identity_pattern_probability",
    "literal_build", "literal_level1_sampler", "return_time_samples",
    "sample_key", "sample_level", "sample_path", "sample_stationary_path",
    "sample_stationary_path_cftp", "sixth_moment_gap", "sum_distribution",
]

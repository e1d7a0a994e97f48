"""Two-sided matching under hereditary constraints with ER-k / NW-k guarantees."""

__version__ = "0.1.0"

from .algorithms import compute_cutoff, construct_er_nw, k_admissible, k_cutoff, k_spda, update_cutoff
from .core import Instance, Matching, load_vector, prefers, score_of, validate_instance
from .feasibility import (
    Capacities,
    Conjunction,
    Explicit,
    Multidimensional,
    RegionalCaps,
    conjunction,
    is_feasible,
    matching_feasible,
    verify_hereditary,
)
from .generator import GenConfig, generate_instance
from .metrics import MetricsRecord, compute_metrics
from .properties import (
    claims_of,
    envied_by_set,
    envy_set,
    is_ef_k,
    is_er_k,
    is_nw_k,
    is_stable,
    min_er_index,
)

"""Exact tools for polyhedral surrogate losses: embeddings, links and calibration."""
from .discrete import DiscreteLoss, bayes_risk, cell_complex, level_set, redundancy_report, trim
from .embedding import EmbeddingMap, analyze, conjugate_surrogate, verify_embedding
from .errors import PolyembedError
from .geometry import Polyhedron, distance, minmax_distance
from .links import (
    build_link,
    diagnose_consistency,
    envelope,
    epsilon_max,
    indirect_elicitation_check,
    link,
    verify_proposed_link,
)
from .rational import Q
from .regret import empirical_transfer_check, hoffman_estimate, max_loss_gap, regret_bound_constant
from .surrogate import PolyhedralLoss, optimal_set, optimal_set_range, quotient, representative_set, surrogate_risk

__version__ = "0.1.0"

"""Full-connectivity probability of dense wireless networks in convex right prisms.

Closed-form boundary-aware analytics (per-corner/edge/face/bulk terms of a
first-order high-density expansion) cross-checked against a Monte Carlo
random-geometric-graph simulator, for SISO / SIMO / MISO / MIMO / unit-disk
link models.
"""

__version__ = "0.1.0"

from .connmass import (
    MassResult,
    error_order_fit,
    mass_mimo_closed,
    mass_mimo_n2_specialization,
    mass_quadrature,
    mass_scaling_leading,
    mass_simo_closed,
    mass_step_approx,
    step_error,
)
from .errors import CapabilityError, ConvergenceError, DomainError, InvalidPrismError
from .geometry import (
    BoundaryFeature,
    RightPrism,
    cube_prism,
    distance,
    enumerate_features,
    house_prism,
    load_prism,
    preset_prism,
    sample_uniform,
)
from .linkmodels import (
    ConnectionModel,
    Mimo,
    PathLossParams,
    SimoMiso,
    Siso,
    UnitDisk,
    mimo_gamma_form,
    pair_connectedness,
    pair_connectedness_many,
    pair_connectedness_mimo_det,
)
from .mc_sim import (
    McConfig,
    McEstimate,
    connection_field,
    connectivity_check,
    edge_resampling_estimate,
    exact_connectivity_probability,
    run_trials,
    wilson_interval,
)
from .pfc_analytic import (
    FeatureContribution,
    PfcBreakdown,
    assemble,
    bulk_contribution,
    corner_contribution,
    edge_contribution,
    face_contribution,
    feature_table,
    homogeneous_mass_mimo2,
)

__all__ = [
    "BoundaryFeature",
    "CapabilityError",
    "ConnectionModel",
    "ConvergenceError",
    "DomainError",
    "FeatureContribution",
    "InvalidPrismError",
    "MassResult",
    "McConfig",
    "McEstimate",
    "Mimo",
    "PathLossParams",
    "PfcBreakdown",
    "RightPrism",
    "SimoMiso",
    "Siso",
    "UnitDisk",
    "assemble",
    "bulk_contribution",
    "connection_field",
    "connectivity_check",
    "corner_contribution",
    "cube_prism",
    "distance",
    "edge_contribution",
    "edge_resampling_estimate",
    "enumerate_features",
    "error_order_fit",
    "exact_connectivity_probability",
    "face_contribution",
    "feature_table",
    "homogeneous_mass_mimo2",
    "house_prism",
    "load_prism",
    "mass_mimo_closed",
    "mass_mimo_n2_specialization",
    "mass_quadrature",
    "mass_scaling_leading",
    "mass_simo_closed",
    "mass_step_approx",
    "mimo_gamma_form",
    "pair_connectedness",
    "pair_connectedness_many",
    "pair_connectedness_mimo_det",
    "preset_prism",
    "run_trials",
    "sample_uniform",
    "step_error",
    "wilson_interval",
]

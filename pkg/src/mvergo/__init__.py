"""Ergodic optimization for finite multi-valued dynamical systems and
piecewise-affine expanding circle correspondences."""

from ._numbers import NEG_INF
from .bounds import (
    BarycentrePoint,
    CosWave,
    NegDistance,
    SweepRow,
    barycentre_hull,
    beta_lower,
    beta_upper,
    theta_sweep,
)
from .circle import (
    Branch,
    NotExpandingError,
    PeriodicOrbit,
    PiecewiseAffineMVSystem,
    barycentre,
    doubling_map,
    enumerate_periodic_orbits,
    expansion_certificate,
    is_sturmian,
    orbit_average,
    pq_correspondence,
    three_branch_doubling,
)
from .mea import (
    MeaReport,
    NoCycleError,
    NoPathError,
    alpha_state,
    brute_force_alpha,
    delta_finite_horizon,
    epsilon_witness,
    max_mean_cycle,
    maximizing_measures,
    mea_report,
)
from .measures import (
    Cycle,
    EdgeCirculation,
    VertexMeasure,
    cycle_measure,
    extreme_invariant_measures,
    is_invariant,
    marginals,
)
from .subaction import (
    PositiveCycleError,
    SubactionResult,
    ViolatedEdgeError,
    compute_phi,
    compute_v,
    subaction_for_state_function,
    verify_mane,
)
from .system import (
    FiniteMVSystem,
    eventual_domain,
    graph_system,
    inverse,
    iterate_image,
    lift_function,
    orbit_space_nonempty,
)

__all__ = [
    "NEG_INF",
    "BarycentrePoint",
    "Branch",
    "CosWave",
    "Cycle",
    "EdgeCirculation",
    "FiniteMVSystem",
    "MeaReport",
    "NegDistance",
    "NoCycleError",
    "NoPathError",
    "NotExpandingError",
    "PeriodicOrbit",
    "PiecewiseAffineMVSystem",
    "PositiveCycleError",
    "SubactionResult",
    "SweepRow",
    "VertexMeasure",
    "ViolatedEdgeError",
    "alpha_state",
    "barycentre",
    "barycentre_hull",
    "beta_lower",
    "beta_upper",
    "brute_force_alpha",
    "compute_phi",
    "compute_v",
    "cycle_measure",
    "delta_finite_horizon",
    "doubling_map",
    "enumerate_periodic_orbits",
    "epsilon_witness",
    "eventual_domain",
    "expansion_certificate",
    "extreme_invariant_measures",
    "graph_system",
    "inverse",
    "is_invariant",
    "is_sturmian",
    "iterate_image",
    "lift_function",
    "marginals",
    "max_mean_cycle",
    "maximizing_measures",
    "mea_report",
    "orbit_average",
    "orbit_space_nonempty",
    "pq_correspondence",
    "subaction_for_state_function",
    "theta_sweep",
    "three_branch_doubling",
    "verify_mane",
]

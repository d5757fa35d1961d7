"""heteroswitch: followability of finite paths near quasi-simple heteroclinic
networks with real eigenvalues, decided exactly through the cusp calculus in
log coordinates, plus direct ODE verification of the verdicts."""

__version__ = "0.1.0"

from .cone import Certificate, Const, Ineq, decide_near_origin, replay_certificate
from .fields import VectorField, build_field
from .fixtures import available_fixtures, fixture_path, load_fixture, resolve_network
from .maps import (
    CrossSection,
    LogAffineMap,
    LocalMap,
    PathTransfer,
    RegionSystem,
    compose_path,
    cross_section,
    domain_C,
    followable,
    global_map,
    image_F,
    local_map,
)
from .network import (
    Connection,
    Eigenvalue,
    HeteroclinicNetwork,
    Node,
    ValidationReport,
    classify_global,
    distribution_nodes,
    enumerate_cycles,
    load_network,
    serialize_network,
    validate_quasi_simple,
)
from .regions import (
    FeasibilityVerdict,
    LogConeSystem,
    OracleResult,
    PairwiseOutcome,
    PowerRegion,
    count_guarantee,
    intersects_near_origin,
    pairwise_rule,
    sample_oracle,
    to_log_system,
)
from .report import NetworkReport, analyze_network, render_json, render_text
from .simulate import (
    Itinerary,
    SimConfig,
    Trajectory,
    empirical_switching_test,
    ensemble_itineraries,
    integrate,
    integrate_until,
    record_itinerary,
)
from .switching import (
    DepthBound,
    SwitchingVerdict,
    connection_criterion,
    depth_bound,
    enumerate_followable,
    node_criterion,
    sequence_criterion,
)

__all__ = [name for name in dir() if not name.startswith("_")]

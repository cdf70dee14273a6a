"""Capacity-region toolkit for the two-user broadcast channel with
degraded message sets and an unreliable conference link.

Modules:
    probability  finite-alphabet pmfs, entropies, mutual informations
    channel      channel law, auxiliary joints, the eight rate functionals
    polytope     3-D half-space intersection, vertex enumeration, hulls
    regions      inner/outer rate polytopes, special cases, equivalence check
    awgn         closed-form Gaussian region over power splits
    simulator    superposition coding with binning, typicality decoders
    cli          command-line front end (region / check / awgn / simulate)
"""

from .probability import (
    JointPmf,
    Pmf,
    conditional_mutual_information,
    entropy,
    marginalize,
    mutual_information,
)
from .channel import (
    AuxJoint,
    ChannelLaw,
    MIVector,
    compose_full_joint,
    independent_bsc_pair,
    load_channel,
    mi_vector,
    random_aux,
    random_channel,
    save_channel,
)
from .polytope import (
    HalfSpace3,
    HPolytope3,
    VertexSet,
    contains,
    convex_hull,
    enumerate_vertices,
    hull_contains,
    write_vertices_csv,
)
from .regions import (
    RateTriple,
    RegionApprox,
    RegionSample,
    check_equivalence,
    inner_polytope,
    outer_polytope,
    region_report,
    sample_region,
    special_region,
)
from .awgn import (
    AwgnParams,
    AwgnRegion,
    PowerSplit,
    awgn_bounds,
    awgn_region,
    gaussian_capacity,
    write_boundary_csv,
)
from .simulator import (
    CodeParams,
    Codebook,
    ErrorStats,
    ResourceBudgetError,
    conference_map,
    converse_witness_lower_bound,
    decode1,
    decode2_conf,
    decode2_no_conf,
    estimate_errors,
    generate_codebook,
    transmit,
)

__version__ = "0.1.0"

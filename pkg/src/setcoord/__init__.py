"""Zero-error set coordination: capacities, Rényi characterizations and linear codes."""

from .cover import (
    asymptotic_capacity,
    disjoint_neighborhood_packing,
    fractional_cover_lp,
    min_cover_ip,
    n_letter_rate,
    one_shot_capacity,
)
from .errors import (
    InfeasibleError,
    InputError,
    PreconditionError,
    ResourceError,
    SetCoordError,
    UncoordinatableError,
)
from .graph import CoordinationGraph, from_action_sets, pentagon, tensor_power, tensor_product
from .infotheory import hide_and_seek_value, maxmin_characterization, renyi_mutual_information
from .lincoord import (
    LinearCoordProblem,
    bc_region_check,
    linear_capacity,
    mac_region_check,
    nonlinear_equals_linear_check,
    synthesize_code,
    verify_code,
)
from .sideinfo import SideInfoProblem, asymptotic_capacity_side, n_letter_rate_side, one_shot_capacity_side

__version__ = "0.1.0"

"""Local public goods games with capacity-constrained sharing ("Netflix games")."""

from .dynamics import Trace, best_action_response, best_reply_step, evolve, is_action_stable, settles_in
from .equilibrium import (
    DPSubgraph,
    construct_complete_max,
    construct_complete_min,
    find_dp_subgraph,
    validate_dp_subgraph,
)
from .game import (
    ProfileClass,
    StrategyProfile,
    UtilitySpec,
    build_profile,
    classify,
    inflow,
    is_nash,
    make_netflix_spec,
    make_spec,
    utility,
    validate_spec,
)
from .graph import Graph, GraphError, is_connected, parse_capacity, parse_graph
from .oracle import DSetReport, bound_formulas, bound_table, enumerate_d_sets, is_d_set, verify_delta_monotonicity

__version__ = "0.1.0"

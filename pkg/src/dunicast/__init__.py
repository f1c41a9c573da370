"""Double-unicast network coding: rate-(1,1) feasibility and XOR code synthesis."""

from .codec import Gf2Vec2, NetworkCode, simulate, simulate_schedule, verify
from .errors import DoubleUnicastError
from .feasibility import (blocking_edges, capacity_region, feasible_11, pair_connectivity,
                          symmetric_capacity, time_share_schedule)
from .graph import Dag, DoubleUnicastNet, Edge, Path, find_path, reachable_from
from .instances import GeneratorParams, canned, random_net
from .oracle import OracleConfig, agreement_check, exhaustive_scalar_codes
from .synthesis import synthesize, synthesize_trace

__all__ = [
    "Dag", "DoubleUnicastNet", "DoubleUnicastError", "Edge", "GeneratorParams", "Gf2Vec2",
    "NetworkCode", "OracleConfig", "Path", "agreement_check", "blocking_edges", "canned",
    "capacity_region", "exhaustive_scalar_codes", "feasible_11", "find_path",
    "pair_connectivity", "random_net", "reachable_from", "simulate", "simulate_schedule",
    "symmetric_capacity", "synthesize", "synthesize_trace", "time_share_schedule", "verify",
]

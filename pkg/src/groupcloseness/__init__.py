"""Greedy group-closeness maximisation on unweighted graphs."""

from importlib import resources

from .baselines import OverlapReport, degree_group, greedy_reference, overlap_percent, overlap_report, topk_group
from .bitgreedy import BitLevelState, advance_levels, bit_greedy_pp, bit_marginal_gain, level_history
from .errors import CapacityError, DisconnectedGraphError, GraphFormatError, UndefinedMeasureError
from .exact import ExactResult, approximation_ratio, exact_group_enumeration, export_ilp
from .graph import (
    DistanceArray,
    Graph,
    IngestionReport,
    bfs_distances,
    largest_connected_component,
    load_edge_list,
    read_edge_list,
)
from .greedy import DistanceToSet, GainCache, GroupResult, augment, group_closeness, greedy_pp, pruned_sssp_gain
from .topk import TopKState, bfs_cut, closeness, run_top_k, top_k_closeness

__version__ = "0.1.0"


def bundled_graph(name: str) -> Graph:
    """Load one of the small graphs shipped with the package: 'karate' or 'contiguous-usa'."""
    with resources.files(__package__).joinpath("data", f"{name}.txt").open("rb") as fh:
        return load_edge_list(fh)

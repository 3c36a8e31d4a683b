"""Morgenstern Ramanujan graphs: construction, distances, spectra, lower-bound runs."""

from .cayley import (
    CayleyGraph,
    ConstructionError,
    bfs,
    build_graph,
    default_nu,
    determinant_classes,
    determinant_flip_check,
    diameter,
    distance,
    generators,
    group_orders,
    is_connected,
    is_symmetric,
    norm_one_pairs,
    t_is_square,
    two_coloring,
)
from .export import edges, read_edge_list, write_edge_list
from .lowerbound import PROFILES, LowerBoundReport, find_suitable_g, lower_bound_experiment, norm_witnesses
from .pgl import PGL2, ProjMat
from .spectrum import SpectralReport, adjacency, second_eigenvalue, spectral_report, spectrum

__all__ = [
    "PGL2",
    "PROFILES",
    "CayleyGraph",
    "ConstructionError",
    "LowerBoundReport",
    "ProjMat",
    "SpectralReport",
    "adjacency",
    "bfs",
    "build_graph",
    "default_nu",
    "determinant_classes",
    "determinant_flip_check",
    "diameter",
    "distance",
    "edges",
    "find_suitable_g",
    "generators",
    "group_orders",
    "is_connected",
    "is_symmetric",
    "lower_bound_experiment",
    "norm_one_pairs",
    "norm_witnesses",
    "read_edge_list",
    "second_eigenvalue",
    "spectral_report",
    "spectrum",
    "t_is_square",
    "two_coloring",
    "write_edge_list",
]

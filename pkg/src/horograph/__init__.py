"""Horospherical random graphs: layered soft geometric graphs, their
spectral and combinatorial statistics, and random-walk spread."""

from ._backend import NAME as backend
from .connection import ConnectionFunction, discretize, preset, uniform_square_functions
from .graphgen import Graph, LayeredGraph, annulus_pairs, generate, is_connected
from .pointset import CitySpec, Point, PointSet, france_model, make_grid, sample_city_mixture, sample_uniform
from .spectral import SpectralReport, cheeger_check, conductance_bruteforce, dense_spectrum, lambda1
from .stats import GraphSummary, average_clustering, local_clustering, sparsity, summarize, valency_stats
from .walks import batch_walk_stats, replicating_walk, simple_walk, trace_distance_stats

__version__ = "0.1.0"

"""Matroid minors, frame matroids of biased graphs, and towers."""

from .config import CapExceeded
from .frame import BiasedGraph, blow_up, dowling, frame_matroid, frame_rank
from .graphs import SimpleGraph, density_threshold, graph_clique_minor, kostochka_family
from .linear import affine_geometry, coupled_example, crown, linear_matroid, projective_geometry
from .matroid import MatroidHandle, clique_matroid, eps, graphic, simplify, uniform
from .minors import MinorWitness, has_clique_minor, has_line_minor, line_count
from .towers import Tower, count_w, enumerate_towers, find_tower, is_tower

__all__ = [
    "BiasedGraph", "CapExceeded", "MatroidHandle", "MinorWitness", "SimpleGraph", "Tower",
    "affine_geometry", "blow_up", "clique_matroid", "count_w", "coupled_example", "crown",
    "density_threshold", "dowling", "enumerate_towers", "eps", "find_tower", "frame_matroid",
    "frame_rank", "graph_clique_minor", "graphic", "has_clique_minor", "has_line_minor",
    "is_tower", "kostochka_family", "line_count", "linear_matroid", "projective_geometry",
    "simplify", "uniform",
]

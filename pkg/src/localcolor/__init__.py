"""Local versus global colourability of graphs.

Tools for r-balls of random graphs: exact colouring and degeneracy solvers,
a reveal-driven 2-degeneracy certifier, deletion surgeries that force small
local chromatic number, clique expansion, bound calculators and seeded Monte
Carlo campaigns.
"""

from .errors import InputError, InvariantViolation, ParseError, SessionStateError, Undecided
from .graph import Ball, Graph, ball, delete_vertices, induced_subgraph, parse_graph, serialize_graph
from .kernels import BACKEND
from .coloring import (
    chromatic_number,
    degeneracy,
    find_k_coloring,
    independence_number,
    is_k_colorable,
    is_k_degenerate,
    local_chromatic_number,
)
from .random_models import RngStream, begin_reveal, reveal_to_ball, sample_gnp
from .checker import CheckerParams, Verdict, check_two_degenerate
from .constructions import (
    bounds,
    clique_expand,
    construct_local5,
    paper_parameters,
    surgery_local3,
    surgery_local4,
)

__all__ = [
    "BACKEND",
    "Ball",
    "CheckerParams",
    "Graph",
    "InputError",
    "InvariantViolation",
    "ParseError",
    "RngStream",
    "SessionStateError",
    "Undecided",
    "Verdict",
    "ball",
    "begin_reveal",
    "bounds",
    "check_two_degenerate",
    "chromatic_number",
    "clique_expand",
    "construct_local5",
    "degeneracy",
    "delete_vertices",
    "find_k_coloring",
    "independence_number",
    "induced_subgraph",
    "is_k_colorable",
    "is_k_degenerate",
    "local_chromatic_number",
    "paper_parameters",
    "parse_graph",
    "reveal_to_ball",
    "sample_gnp",
    "serialize_graph",
    "surgery_local3",
    "surgery_local4",
]

__version__ = "0.1.0"

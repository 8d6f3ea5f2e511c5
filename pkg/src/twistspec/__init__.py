"""Twisted adjacency spectra, L-functions and circuit counts by homology class."""

from .errors import (
    BudgetExceeded,
    InputError,
    NumericalError,
    TwistspecError,
)
from .graph import Graph, cycle_graph, k4, load_graph, spanning_tree, theta_graph
from .homology import Character, OneForm, homology_data, quotient_group

__all__ = [
    "BudgetExceeded",
    "Character",
    "Graph",
    "InputError",
    "NumericalError",
    "OneForm",
    "TwistspecError",
    "cycle_graph",
    "homology_data",
    "k4",
    "load_graph",
    "quotient_group",
    "spanning_tree",
    "theta_graph",
]

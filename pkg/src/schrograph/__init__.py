"""Discrete Schrodinger operators on weighted graphs.

Machinery for the operator

    (L_V f)(x) = (1/mu(x)) * sum_y b(x,y) (f(x) - f(y)) + V(x) f(x)

on a weighted graph (X, b, mu): graph construction and axioms, intrinsic
path metrics, Green's-formula checks, certificates for the hypotheses of
the perturbation-type self-adjointness theorem, the Golenia weighted-degree
criterion, a small graph zoo including the triangular example family, and
heuristic finite-section spectral probes.
"""

__version__ = "0.1.0"

from .certificates import Certificate, Witness, PASS, FAIL, INCONCLUSIVE
from .graph_core import (
    FiniteGraph,
    WeightedGraph,
    Ball,
    weighted_degree,
    check_edge_axioms,
    ball_enumerate,
    is_connected,
)

__all__ = [
    "__version__",
    "Certificate",
    "Witness",
    "PASS",
    "FAIL",
    "INCONCLUSIVE",
    "FiniteGraph",
    "WeightedGraph",
    "Ball",
    "weighted_degree",
    "check_edge_axioms",
    "ball_enumerate",
    "is_connected",
]

"""Semi-inducibility of two-coloured 4-vertex patterns: exact counts, blow-up
optimisation, closed-form extremal values, symmetrisation and small
flag-algebra certificates."""
from .graphs import Graph, canonical_form, decode_graph6, encode_graph6, enumerate_graphs
from .semi_inducibility import (
    BUILTIN,
    TABLE1,
    GammaFunction,
    TwoColoredGraph,
    brute_force_max,
    builtin_h,
    count_embeddings,
    gamma_from_h,
    lambda_gamma,
)

__version__ = "0.1.0"

__all__ = [
    "BUILTIN",
    "TABLE1",
    "GammaFunction",
    "Graph",
    "TwoColoredGraph",
    "brute_force_max",
    "builtin_h",
    "canonical_form",
    "count_embeddings",
    "decode_graph6",
    "encode_graph6",
    "enumerate_graphs",
    "gamma_from_h",
    "lambda_gamma",
]

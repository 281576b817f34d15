"""Exact combinatorial topology for basepointed cactus graphs.

Enumerates reduced cactus graphs, evaluates the cactus height function,
builds descending links and the orbit complexes of cactus space, and
computes their rational homology with exact integer arithmetic.
"""

__version__ = "0.1.0"

from cactus_morse.graphs import (
    CactusGraph,
    Cycle,
    HalfEdgeGraph,
    canonical_code,
    enumerate_cactus_graphs,
    from_code,
    rose,
)
from cactus_morse.complexes import BettiVector, CellComplex, betti

__all__ = [
    "BettiVector",
    "CactusGraph",
    "CellComplex",
    "Cycle",
    "HalfEdgeGraph",
    "betti",
    "canonical_code",
    "enumerate_cactus_graphs",
    "from_code",
    "rose",
]

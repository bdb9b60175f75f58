"""Equivariant K-theory structure constants of Grassmannians.

Three independent computations of the same numbers: puzzles, edge-labeled
genomic tableaux, and localization at torus fixed points.  A bijection between
puzzles and tableaux is implemented and checked.
"""

from .grcore import GrIndex, Partition, ShapeError, coerce_index
from .kring import LaurentPoly
from .oracle import oracle_coeff, oracle_coeffs
from .puzzle import enumerate_puzzles, puzzle_sum, puzzle_weight
from .tableau import GenomicTableau, enumerate_tableaux, tableau_sum, tableau_weight
from .tracks import puzzle_to_tableau, tableau_to_puzzle, verify_bijection

__version__ = "0.1.0"

__all__ = [
    "GenomicTableau",
    "GrIndex",
    "LaurentPoly",
    "Partition",
    "ShapeError",
    "coerce_index",
    "enumerate_puzzles",
    "enumerate_tableaux",
    "oracle_coeff",
    "oracle_coeffs",
    "puzzle_sum",
    "puzzle_to_tableau",
    "puzzle_weight",
    "tableau_sum",
    "tableau_to_puzzle",
    "tableau_weight",
    "verify_bijection",
]

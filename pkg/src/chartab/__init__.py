"""Exact character table machinery.

Cyclotomic arithmetic, character tables and class functions, fusion and
power map solvers, exact lattice reduction, permutation character search,
table head construction, a brute-force table oracle, and a scripted
pipeline runner with a command line front end.
"""

__version__ = "0.1.0"

from .cyclo import Cyclotomic, atlas_sqrt, cyc, field_contains_sqrt, root_of_unity

__all__ = [
    "Cyclotomic",
    "atlas_sqrt",
    "cyc",
    "field_contains_sqrt",
    "root_of_unity",
]

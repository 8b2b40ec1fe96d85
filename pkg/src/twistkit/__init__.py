"""Exact-arithmetic descent data for complexes of free modules.

Submodules: simplex_core (combinatorics), homalg (complexes and maps),
dg_nerve (dg-nerve simplices), cech_mc (bigraded Cech algebra and MC
elements), gtt (labellings of pair subdivisions), descent (points and paths
of the descent presheaves), serialize and cli.
"""

from .errors import TwistkitError
from .homalg import Complex, GradedMap, ElementaryDecl
from .dg_nerve import DgSimplex

__version__ = "0.1.0"

__all__ = ["Complex", "GradedMap", "ElementaryDecl", "DgSimplex", "TwistkitError", "__version__"]

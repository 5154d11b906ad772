"""Induced poset saturation in the hypergrid [t]^n."""

from .errors import GridsatError
from .family import Certificate, Family, Verdict, is_induced_p_free, is_saturated
from .grid import GridShape
from .poset import Poset, antichain, chain, named_poset, poset_from_hasse, poset_sum

__version__ = "0.1.0"

__all__ = [
    "Certificate",
    "Family",
    "GridShape",
    "GridsatError",
    "Poset",
    "Verdict",
    "antichain",
    "chain",
    "is_induced_p_free",
    "is_saturated",
    "named_poset",
    "poset_from_hasse",
    "poset_sum",
]

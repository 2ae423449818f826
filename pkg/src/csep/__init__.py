"""Clique/stable-set separators assembled along graph decompositions.

The usual entry points::

    from csep import Graph, capfree_separator, verify_separator
    report, family = capfree_separator(g)
    assert verify_separator(g, family)
"""

from .errors import (ClassAssumptionError, CsepError, EnumerationOverflow, GenerationError,
                     InputError)
from .graph import Graph, parse_dimacs, read_dimacs, write_dimacs
from .oracle import verify_separator, verify_separator_exhaustive, verify_separator_sampled
from .pipelines import applefree_separator, capfree_separator, engine_nearly
from .separators import CutFamily, maxclique_separator

__version__ = "0.1.0"

__all__ = [
    "ClassAssumptionError", "CsepError", "CutFamily", "EnumerationOverflow", "GenerationError",
    "Graph", "InputError", "applefree_separator", "capfree_separator", "engine_nearly",
    "maxclique_separator", "parse_dimacs", "read_dimacs", "verify_separator",
    "verify_separator_exhaustive", "verify_separator_sampled", "write_dimacs",
]

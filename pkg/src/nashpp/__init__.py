"""Exact detection of singularities through higher-order Nash blow-up fibers.

The package builds the order-n module of principal parts of an affine
variety at a chosen rational point in two independent presentations,
passes to the torsion-free quotient, and compares fiber dimensions
against the smooth benchmark binom(n+d, d) - 1.  Supporting machinery
(jets over truncated power series, arc-induced injectivity tests,
tangent-cone comparisons) is exposed both as a library and through the
`nashpp` command line tool.
"""

from .fields import GF, QQ
from .orders import GREVLEX, GRLEX, LEX, MonomialOrder
from .poly import Polynomial, PolyRing, parse_polynomial

__all__ = [
    "GF",
    "QQ",
    "GREVLEX",
    "GRLEX",
    "LEX",
    "MonomialOrder",
    "Polynomial",
    "PolyRing",
    "parse_polynomial",
]

__version__ = "0.1.0"

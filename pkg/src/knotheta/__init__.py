"""knotheta: Jones and HOMFLY-PT polynomials from link diagrams.

Three independent routes compute each invariant: classical state sums,
skein recursion over descending diagrams, and graded intersection models on
a combinatorial shadow of a punctured surface.  They are expected to agree
exactly, and the test suite checks that they do.
"""

from .diagram import (
    LinkDiagram,
    add_kink,
    connected_sum,
    disjoint_union,
    from_braid,
    mirror,
    parse_gauss,
    parse_pd,
    resolve,
    reverse,
    to_pd,
    unlink,
)
from .errors import CrossingLimitExceeded, DiagramError, KnothetaError, PolynomialError
from .homfly import (
    CONVENTION,
    apply_convention,
    homfly_recursive,
    homfly_state_sum,
    specialize_to_alexander,
    specialize_to_jones,
)
from .kauffman import apply_state, jones_reduced, jones_unreduced
from .polynomial import LaurentPoly
from .theta import theta_homfly, theta_jones

__version__ = "0.1.0"

__all__ = [
    "CONVENTION",
    "CrossingLimitExceeded",
    "DiagramError",
    "KnothetaError",
    "LaurentPoly",
    "LinkDiagram",
    "PolynomialError",
    "add_kink",
    "apply_convention",
    "apply_state",
    "connected_sum",
    "disjoint_union",
    "from_braid",
    "homfly_recursive",
    "homfly_state_sum",
    "jones_reduced",
    "jones_unreduced",
    "mirror",
    "parse_gauss",
    "parse_pd",
    "resolve",
    "reverse",
    "specialize_to_alexander",
    "specialize_to_jones",
    "theta_homfly",
    "theta_jones",
    "to_pd",
    "unlink",
]

"""Exact arithmetic toolkit for 3-Lie algebras, their representations and
2-cocycles, twisted O-operators, 3-NS-Lie algebras and trace-map induction."""

from .errors import (
    ContainmentViolation,
    FormulaDisagreement,
    NotAdmissible,
    NotInvertible,
    NotNijenhuis,
    NotTrace,
    ParseError,
    ShapeMismatch,
    ThreeLieError,
    TooLarge,
    UnresolvedReference,
    ValidationFailure,
)
from .exactla import Mat
from .report import Report, Violation
from .structures import (
    LieAlgebra,
    Representation3,
    RepresentationLie,
    ThreeLieAlgebra,
    TwoCocycle3,
    TwoCocycleLie,
    check_cocycle3,
    check_filippov,
    check_rep3,
    semidirect_twisted,
)
from .twistop import (
    TwistedOperator,
    check_twisted,
    coboundary_shift,
    gauge_transform,
    induced_bracket,
    nijenhuis_check,
    nijenhuis_package,
)
from .cohomology import Bivector, Cochain, ce_diff, cohomology_dims, twisted_diff
from .deform import DeformationFamily, EquivalencePair, formal_check, order_conditions
from .nslie import NSLieAlgebra, ThreeNSLieAlgebra, check_3ns, from_nijenhuis_ns, from_twisted_ns, subadjacent
from .induce import BinaryTwistedOperator, TraceMap, diagram_check, induce_3lie, induced_twisted

__version__ = "0.1.0"

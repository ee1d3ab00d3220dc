"""Exact local analysis of formal meromorphic connections.

Chevalley-basis simple Lie algebras, Laurent and Puiseux series with
truncation tracking, the rigid connection family and its gauge theory,
Newton polygon invariants, canonical form reduction, level spaces of
differentials on the line, and a claim-level verification suite.
"""

from .chevalley import (
    SimpleAlgebra,
    build_algebra,
    coxeter_fixed_space,
    is_principal_nilpotent,
    is_regular_semisimple,
)
from .connection import (
    FormalConnection,
    GaugeElement,
    frenkel_gross_connection,
    monodromy_type,
)
from .errors import (
    FormalConnError,
    NotAnOperError,
    PrecisionError,
    TowerMismatchError,
    UnsupportedConnectionError,
    UnsupportedTypeError,
)
from .newton import (
    NewtonPolygon,
    adjoint_irregularity,
    connection_slope,
    irregular_branches,
)
from .opers import OperForm, canonicalize, oper_is_regular_singular
from .scalars import CyclotomicTower, QuadraticTower, QQ, Scalar
from .series import LaurentSeries
from .suite import run_suite, suite_passed

__version__ = "0.1.0"

__all__ = [
    "SimpleAlgebra",
    "build_algebra",
    "coxeter_fixed_space",
    "is_principal_nilpotent",
    "is_regular_semisimple",
    "FormalConnection",
    "GaugeElement",
    "frenkel_gross_connection",
    "monodromy_type",
    "FormalConnError",
    "NotAnOperError",
    "PrecisionError",
    "TowerMismatchError",
    "UnsupportedConnectionError",
    "UnsupportedTypeError",
    "NewtonPolygon",
    "adjoint_irregularity",
    "connection_slope",
    "irregular_branches",
    "OperForm",
    "canonicalize",
    "oper_is_regular_singular",
    "CyclotomicTower",
    "QuadraticTower",
    "QQ",
    "Scalar",
    "LaurentSeries",
    "run_suite",
    "suite_passed",
    "__version__",
]

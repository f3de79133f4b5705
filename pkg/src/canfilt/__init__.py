"""Canonical filtrations of finite-dimensional algebras over Q.

Algebras are given by structure constants.  The destabilizing filtration of
an unstable algebra is found as the optimum of a convex quadratic program
over the cone of compatible weight vectors, solved and certified in exact
rational arithmetic.
"""
from .algebra import Algebra, Grouping, Kind, Violation, change_of_basis, direct_sum, validate
from .canonical import (
    CanonicalResult,
    Method,
    automorphism_invariance_check,
    canonical_direct_sum,
    canonical_filtration,
    canonical_graded,
    canonical_lie_via_radical,
    canonical_semisimple,
    canonical_trivial_extension,
    canonical_triangular,
    canonical_zero_product,
    verify_canonical,
)
from .filtration import (
    INF,
    AdaptedFiltration,
    FlagFiltration,
    NuValue,
    associated_graded,
    from_flag,
    is_compatible,
    norm_sq_of,
    nu,
    split_filtration,
    to_flag,
    weight_of,
)
from .linalg import Subspace
from .qp import (
    ConstraintSystem,
    QpCertificate,
    build_constraints,
    enumerate_active_sets_oracle,
    farkas_certificate,
    normalize_to_cone,
    solve,
    verify_kkt,
)

__version__ = "0.1.0"

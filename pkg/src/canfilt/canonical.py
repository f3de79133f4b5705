"""Canonical filtrations: the graded QP route, closed forms and certification."""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Sequence

from . import linalg as la
from . import qp
from .algebra import Algebra, Grouping, Kind, change_of_basis, direct_sum, restrict
from .builders import ABELIAN_REASON, Bimodule, trivial_extension, triangular_algebra
from .filtration import (
    AdaptedFiltration,
    NuValue,
    associated_graded,
    nu,
    to_flag,
    weight_of,
)
from .linalg import format_frac
from .radical import is_semistable, lie_radical, radical


class Method(str, Enum):
    SEMISTABLE = "Semistable"
    GRADED_QP = "GradedQp"
    DIRECT_SUM = "DirectSum"
    CLOSED_FORM = "ClosedForm"
    RADICAL_REDUCTION = "RadicalReduction"


class GroupingError(ValueError):
    """The grouping does not justify solving on a single adapted basis."""


class NotComputable(ValueError):
    pass


ADAPTED_ONLY = "adapted-basis-relative optimum, not certified canonical"


@dataclass(frozen=True)
class CanonicalResult:
    algebra: Algebra
    filtration: AdaptedFiltration
    nu: NuValue | None
    certificate: qp.QpCertificate | None
    method: Method
    certified: bool = True
    note: str = ""
    system: qp.ConstraintSystem | None = None

    @property
    def weights(self) -> tuple:
        return tuple(int(w) for w in self.filtration.weights)

    @property
    def is_trivial(self) -> bool:
        return self.filtration.is_trivial

    def weight_by_label(self) -> dict:
        return dict(zip(self.algebra.labels, self.weights))

    def to_json(self) -> dict:
        out = {
            "method": self.method.value,
            "weights": list(self.weights),
            "labels": list(self.algebra.labels),
            "certified": self.certified,
        }
        if self.filtration.basis is not None:
            out["basis"] = [[format_frac(x) for x in r] for r in self.filtration.basis]
        if self.nu is not None:
            out["wt"] = format_frac(self.nu.wt)
            out["norm_sq"] = format_frac(self.nu.norm_sq)
            out["nu_sq_signed"] = format_frac(self.nu.signed_square)
        else:
            out["wt"], out["norm_sq"], out["nu_sq_signed"] = "0", "0", None
        if self.certificate is not None:
            out["certificate"] = self.certificate.to_json()
        if self.note:
            out["note"] = self.note
        return out


def default_grouping(a: Algebra) -> Grouping:
    return a.grouping if a.grouping is not None else Grouping.identity(a.dim)


def check_grouping(a: Algebra, g: Grouping) -> None:
    """Every class inside one homogeneous component; unjustified classes must be whole 1-dim components."""
    if a.grading is None:
        raise ValueError("algebra has no grading")
    if len(g.classes) != a.dim:
        raise GroupingError("grouping length does not match the algebra")
    comps = a.homogeneous_components()
    for c in range(g.n_classes):
        members = g.members(c)
        degs = {a.grading[i] for i in members}
        if len(degs) != 1:
            raise GroupingError(f"class {c} mixes homogeneous components {sorted(degs)}")
        if not g.reason and len(comps[degs.pop()]) != 1:
            raise GroupingError(
                f"class {c} sits in a homogeneous component of dimension > 1 and no symmetry is declared; "
                f"use adapted_basis_optimum for an {ADAPTED_ONLY}"
            )


def _per_basis(g: Grouping, w_classes: Sequence) -> list:
    return [w_classes[c] for c in g.classes]


def _trivial(a: Algebra, method: Method, cert=None, note: str = "", system=None) -> CanonicalResult:
    f = AdaptedFiltration(a, [0] * a.dim)
    return CanonicalResult(a, f, None, cert, method, True, note, system)


def _from_qp(a: Algebra, g: Grouping, cs: qp.ConstraintSystem, cert: qp.QpCertificate,
             method: Method, certified: bool, note: str) -> CanonicalResult:
    if not any(cert.w_star):
        return _trivial(a, Method.SEMISTABLE, cert, note, cs)
    f = AdaptedFiltration(a, _per_basis(g, cert.w_star)).primitive()
    return CanonicalResult(a, f, nu(a, f), cert, method, certified and cert.kkt_ok, note, cs)


def canonical_graded(a: Algebra, grouping: Grouping | None = None) -> CanonicalResult:
    """Solve the weight QP on the graded basis under a justified grouping."""
    g = grouping if grouping is not None else default_grouping(a)
    check_grouping(a, g)
    cs = qp.build_constraints(a, g)
    cert = qp.solve(cs)
    note = f"declared symmetry: {g.reason}" if g.reason else "torus grading with one-dimensional components"
    return _from_qp(a, g, cs, cert, Method.GRADED_QP, True, note)


def adapted_basis_optimum(a: Algebra, grouping: Grouping | None = None) -> CanonicalResult:
    """QP optimum on the given basis with no symmetry claim."""
    g = grouping if grouping is not None else Grouping.identity(a.dim)
    cs = qp.build_constraints(a, g)
    cert = qp.solve(cs)
    return _from_qp(a, g, cs, cert, Method.GRADED_QP, False, ADAPTED_ONLY)


def canonical_semisimple(a: Algebra) -> CanonicalResult:
    if radical(a).dim:
        raise ValueError("algebra has a nonzero radical")
    return _trivial(a, Method.SEMISTABLE, note="semisimple")


def _joint_system(s1: qp.ConstraintSystem, s2: qp.ConstraintSystem) -> qp.ConstraintSystem:
    n1, n2 = s1.n_vars, s2.n_vars
    rows = [tuple(r) + (0,) * n2 for r in s1.rows] + [(0,) * n1 + tuple(r) for r in s2.rows]
    fixed = set(s1.fixed_zero) | {i + n1 for i in s2.fixed_zero}
    return qp.ConstraintSystem(n1 + n2, tuple(rows), frozenset(fixed), s1.dims + s2.dims, s1.labels + s2.labels)


def _concat_cert(r1: CanonicalResult, r2: CanonicalResult):
    if None in (r1.system, r2.system, r1.certificate, r2.certificate):
        return None, None
    cs = _joint_system(r1.system, r2.system)
    w = r1.certificate.w_star + r2.certificate.w_star
    lam = r1.certificate.lam + r2.certificate.lam
    return cs, qp.make_certificate(cs, w, lam)


def canonical_direct_sum(r1: CanonicalResult, r2: CanonicalResult) -> CanonicalResult:
    """Combine the canonical filtrations of two summands."""
    a = direct_sum(r1.algebra, r2.algebra)
    cs, cert = _concat_cert(r1, r2)
    certified = r1.certified and r2.certified
    if r1.is_trivial and r2.is_trivial:
        f = AdaptedFiltration(a, [0] * a.dim)
        return CanonicalResult(a, f, None, cert, Method.SEMISTABLE, certified, "both summands semistable", cs)
    w1 = [Fraction(x) for x in r1.weights]
    w2 = [Fraction(x) for x in r2.weights]
    if r1.is_trivial or r2.is_trivial:
        weights, note = w1 + w2, "one summand semistable"
    else:
        l1, b1 = r1.nu.wt, r1.nu.norm_sq
        l2, b2 = r2.nu.wt, r2.nu.norm_sq
        # rescale both sides to a common point on the optimal ray
        weights = [b2 * l1 * x for x in w1] + [b1 * l2 * x for x in w2]
        note = "both summands unstable"
    if r1.filtration.basis is not None or r2.filtration.basis is not None:
        basis = _block_basis(r1.filtration.basis_rows(), r2.filtration.basis_rows())
    else:
        basis = None
    f = AdaptedFiltration(a, weights, basis).primitive()
    if cert is not None:
        certified = certified and cert.kkt_ok
    return CanonicalResult(a, f, nu(a, f), cert, Method.DIRECT_SUM, certified, note, cs)


def _block_basis(b1, b2) -> list:
    d1, d2 = len(b1), len(b2)
    return [tuple(r) + (0,) * d2 for r in b1] + [(0,) * d1 + tuple(r) for r in b2]


def radical_algebra(l: Algebra) -> tuple:
    """(rad L as a subspace, rad L as a standalone algebra in its echelon basis)."""
    rad = lie_radical(l)
    if rad.dim == 0:
        return rad, None
    sub = restrict(l, rad)
    # keep the grading and grouping when the radical is a coordinate subspace
    coords = []
    for r in rad.rows:
        nz = [j for j, x in enumerate(r) if x]
        coords.append(nz[0] if len(nz) == 1 and r[nz[0]] == 1 else None)
    if None not in coords and l.grading is not None:
        grading = [l.grading[c] for c in coords]
        grouping = None
        if l.grouping is not None:
            grouping = Grouping.from_keys([l.grouping.classes[c] for c in coords], reason=l.grouping.reason)
        sub = sub.replace(grading=grading, grouping=grouping)
    return rad, sub


def canonical_lie_via_radical(l: Algebra, radical_result: CanonicalResult | None = None) -> CanonicalResult:
    """Radical weights from radical_result, weight 0 on a complement."""
    if l.kind is not Kind.LIE:
        raise ValueError("expected a Lie algebra")
    rad, sub = radical_algebra(l)
    if rad.dim == 0:
        return canonical_semisimple(l)
    if not l.is_ideal(rad):
        raise ValueError("radical is not an ideal")
    if radical_result is None:
        radical_result = canonical_filtration(sub)
    if radical_result.algebra != sub:
        raise ValueError("radical_result was not computed on the radical's echelon basis")
    rad_w = radical_result.filtration
    rows = [la.vecmat(c, rad.rows) for c in rad_w.basis_rows()]
    comp = rad.complement_basis()
    basis = rows + list(comp)
    weights = list(rad_w.weights) + [0] * len(comp)
    f = AdaptedFiltration(l, weights, basis).primitive()
    if f.is_trivial:
        return _trivial(l, Method.SEMISTABLE, radical_result.certificate, "radical semistable")
    return CanonicalResult(
        l, f, nu(l, f), radical_result.certificate, Method.RADICAL_REDUCTION,
        radical_result.certified, "weights of the radical, complement at 0", radical_result.system,
    )


def _certify_direction(a: Algebra, g: Grouping, weights: Sequence):
    """KKT certificate for a weight direction constant on grouping classes."""
    cls_w = [None] * g.n_classes
    for i, c in enumerate(g.classes):
        if cls_w[c] is None:
            cls_w[c] = Fraction(weights[i])
        elif cls_w[c] != weights[i]:
            raise ValueError("weights are not constant on grouping classes")
    cs = qp.build_constraints(a, g)
    w = qp.normalize_to_cone(cs, cls_w)
    if not cs.is_feasible(w):
        return cs, qp.QpCertificate(tuple(w), (Fraction(0),) * len(cs.rows), (), cs.objective(w), False)
    fk = qp.farkas_certificate(cs, w)
    lam = fk.lam if fk.kind == "lambda" else (Fraction(0),) * len(cs.rows)
    return cs, qp.make_certificate(cs, w, lam)


def _module_closed_form(a: Algebra, parts: Sequence[Algebra], note: str) -> CanonicalResult:
    for p in parts:
        if not is_semistable(p):
            raise ValueError("input part is not semisimple")
    m_dim = a.dim - sum(p.dim for p in parts)
    if m_dim == 0:
        return _trivial(a, Method.SEMISTABLE, note="no bimodule part")
    weights = [0] * (a.dim - m_dim) + [1] * m_dim
    f = AdaptedFiltration(a, weights)
    cs, cert = _certify_direction(a, a.grouping, weights)
    return CanonicalResult(a, f, nu(a, f), cert, Method.CLOSED_FORM, cert.kkt_ok, note, cs)


def canonical_trivial_extension(a_ss: Algebra, m: Bimodule) -> CanonicalResult:
    """A semisimple, M a bimodule: weight 1 on M, 0 on A."""
    return _module_closed_form(trivial_extension(a_ss, m), [a_ss], "trivial extension")


def canonical_triangular(a_ss: Algebra, b_ss: Algebra, m: Bimodule) -> CanonicalResult:
    """T(A, M, B) with A, B semisimple: weight 1 on M, 0 on A and B."""
    return _module_closed_form(triangular_algebra(a_ss, b_ss, m), [a_ss, b_ss], "triangular algebra")


def canonical_zero_product(a: Algebra) -> CanonicalResult:
    """Zero product: every basis is adapted and the optimum is weight 1 everywhere."""
    if a.nnz:
        raise ValueError("algebra has a nonzero product")
    g = Grouping.identity(a.dim, reason=ABELIAN_REASON)
    cs = qp.build_constraints(a, g)
    return _from_qp(a, g, cs, qp.solve(cs), Method.CLOSED_FORM, True, ABELIAN_REASON)


def canonical_filtration(a: Algebra, grouping: Grouping | None = None) -> CanonicalResult:
    """Pick a route: semisimple, zero product, graded QP, or (Lie) reduction to the radical."""
    if is_semistable(a):
        return canonical_semisimple(a)
    if a.nnz == 0 and a.grading is None:
        return canonical_zero_product(a)
    if a.grading is not None:
        return canonical_graded(a, grouping)
    if a.kind is Kind.LIE:
        rad, sub = radical_algebra(a)
        if sub is not None and sub.dim < a.dim:
            return canonical_lie_via_radical(a, canonical_filtration(sub))
    raise NotComputable(f"no grading or declared symmetry; adapted_basis_optimum gives an {ADAPTED_ONLY}")


# -- certification --------------------------------------------------------


def _path_a(a: Algebra, f: AdaptedFiltration) -> bool:
    """One-dimensional graded pieces: KKT on the filtration's own adapted basis."""
    if len(set(f.weights)) != a.dim:
        return False
    src = f.adapted_algebra()
    cs = qp.build_constraints(src, Grouping.identity(a.dim))
    w = qp.normalize_to_cone(cs, f.weights)
    if not cs.is_feasible(w):
        return False
    return qp.farkas_certificate(cs, w).kind == "lambda"


def verify_canonical(a: Algebra, f: AdaptedFiltration) -> bool:
    """True when f is certified canonical; False means not certified.

    Incompatible weights give False.  A filtration that is not destabilizing
    raises ValueError.
    """
    from .grade import is_graded_semistable

    if not f.is_compatible():
        return False
    if weight_of(a, f) <= 0:
        raise ValueError("filtration is not destabilizing (wt <= 0)")
    if _path_a(a, f):
        return True
    gr = associated_graded(a, f.primitive())
    if gr.grouping is None:
        return False
    try:
        return is_graded_semistable(gr)
    except (GroupingError, NotComputable):
        return False


def is_automorphism(a: Algebra, p: Sequence[Sequence]) -> bool:
    try:
        return change_of_basis(a, p).table == a.table
    except ValueError:
        return False


def automorphism_invariance_check(a: Algebra, f: AdaptedFiltration, p: Sequence[Sequence]) -> bool:
    """True iff the automorphism with rows phi(e_i) maps every step of f onto itself."""
    if not is_automorphism(a, p):
        raise ValueError("matrix is not an automorphism of the algebra")
    p = [la.vec(r) for r in p]
    return all(s.image(p) == s for s, _ in to_flag(f).steps)

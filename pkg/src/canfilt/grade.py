"""Graded semistability, grading operators and the structure of semistable gradings."""
from __future__ import annotations

from dataclasses import dataclass

from . import linalg as la
from .algebra import Algebra, Grouping, Kind
from .canonical import canonical_graded
from .filtration import split_filtration
from .linalg import Subspace
from .radical import annihilator, center, jacobson_radical


@dataclass(frozen=True)
class GradingOperator:
    """A diagonal grading operator, stored by its degree on each basis vector."""

    degrees: tuple

    def __post_init__(self):
        object.__setattr__(self, "degrees", tuple(int(m) for m in self.degrees))

    def __len__(self):
        return len(self.degrees)

    @property
    def is_trivial(self) -> bool:
        return not any(self.degrees)

    def is_compatible(self, a: Algebra) -> bool:
        m = self.degrees
        return len(m) == a.dim and all(m[k] == m[i] + m[j] for i, j, k, _ in a.entries())

    @classmethod
    def of(cls, a: Algebra) -> "GradingOperator":
        if a.grading is None or a.grading_rank != 1:
            raise ValueError("need a Z-graded algebra")
        return cls(tuple(g[0] for g in a.grading))


def grading_trace(g: GradingOperator) -> int:
    return sum(g.degrees)


def grading_form(g1: GradingOperator, g2: GradingOperator) -> int:
    """B(g1, g2) = trace of the composite, sum of degree products."""
    if len(g1) != len(g2):
        raise ValueError("grading operators act on spaces of different dimension")
    return sum(a * b for a, b in zip(g1.degrees, g2.degrees))


def diagonal_grading_lattice(a: Algebra) -> list:
    """Integer basis of the degree vectors m with m_k = m_i + m_j whenever c_ij^k != 0."""
    rows = set()
    for i, j, k, _ in a.entries():
        r = [0] * a.dim
        r[i] += 1
        r[j] += 1
        r[k] -= 1
        rows.add(tuple(r))
    basis = la.nullspace(sorted(rows), a.dim) if rows else la.identity(a.dim)
    return [GradingOperator(la.integer_primitive(v)) for v in basis]


def is_graded_semistable(a: Algebra, grouping: Grouping | None = None) -> bool:
    """Whether the canonical filtration coincides with the split filtration."""
    split = split_filtration(a)
    res = canonical_graded(a, grouping)
    if res.is_trivial or split.is_trivial:
        return res.is_trivial and split.is_trivial
    return tuple(res.weights) == la.integer_primitive(split.weights)


class DualityInconsistent(ValueError):
    pass


def check_gtrace_duality(a: Algebra, phi_can: GradingOperator, psi: GradingOperator,
                         check_semistable: bool = False) -> bool:
    """B(phi, psi) * GTrace(phi) == |phi|_B^2 * GTrace(psi), exactly."""
    if not phi_can.is_compatible(a) or not psi.is_compatible(a):
        raise ValueError("grading operator is not compatible with the algebra")
    if check_semistable and not is_graded_semistable(a):
        raise ValueError("algebra is not graded-semistable")
    tr = grading_trace(phi_can)
    if tr == 0 and not phi_can.is_trivial:
        raise DualityInconsistent("nontrivial canonical grading with zero grading trace")
    return grading_form(phi_can, psi) * tr == grading_form(phi_can, phi_can) * grading_trace(psi)


@dataclass(frozen=True)
class StructuralReport:
    negative_in_radical_and_center: bool
    positive_in_radical: bool
    negative_annihilator_zero: bool

    @property
    def ok(self) -> bool:
        return self.negative_in_radical_and_center and self.positive_in_radical and self.negative_annihilator_zero

    def to_json(self) -> dict:
        return {
            "negative_in_radical_and_center": self.negative_in_radical_and_center,
            "positive_in_radical": self.positive_in_radical,
            "negative_annihilator_zero": self.negative_annihilator_zero,
            "ok": self.ok,
        }


def structural_checks(a: Algebra) -> StructuralReport:
    """Radical, center and annihilator tests for a graded-semistable associative algebra."""
    if a.kind is not Kind.ASSOCIATIVE:
        raise ValueError("structural checks apply to associative algebras")
    m = GradingOperator.of(a).degrees
    d = a.dim
    neg = Subspace.coordinate(d, [i for i in range(d) if m[i] < 0])
    pos = Subspace.coordinate(d, [i for i in range(d) if m[i] > 0])
    j = jacobson_radical(a)
    positive_ok = pos <= j
    if neg.dim == 0:
        # nothing of negative degree: both negative-part checks hold vacuously
        return StructuralReport(True, positive_ok, True)
    neg_ok = neg <= (j & center(a))
    ann_ok = (annihilator(a) & neg).dim == 0
    return StructuralReport(neg_ok, positive_ok, ann_ok)

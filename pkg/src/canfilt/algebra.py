"""Finite-dimensional algebras given by structure constants over Q."""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Mapping, Sequence

from . import linalg as la
from .linalg import Subspace, frac, format_frac


class Kind(str, Enum):
    ASSOCIATIVE = "associative"
    LIE = "lie"


@dataclass(frozen=True)
class Grouping:
    """Assignment of basis vectors to weight variables.

    ``classes[i]`` is the variable shared by basis vector ``i``; ``pinned``
    lists variables forced to weight 0.  ``reason`` names the symmetry that
    justifies merging basis vectors, or sharing a homogeneous component
    between several classes; it is empty when every class is a single
    one-dimensional homogeneous component.
    """

    classes: tuple
    pinned: frozenset = frozenset()
    reason: str = ""

    def __post_init__(self):
        classes = tuple(int(c) for c in self.classes)
        object.__setattr__(self, "classes", classes)
        object.__setattr__(self, "pinned", frozenset(int(p) for p in self.pinned))
        if classes and sorted(set(classes)) != list(range(max(classes) + 1)):
            raise ValueError("grouping classes must be numbered 0..g-1 without gaps")
        if any(p < 0 or p >= self.n_classes for p in self.pinned):
            raise ValueError("pinned class out of range")

    @property
    def n_classes(self) -> int:
        return max(self.classes) + 1 if self.classes else 0

    @property
    def sizes(self) -> tuple:
        out = [0] * self.n_classes
        for c in self.classes:
            out[c] += 1
        return tuple(out)

    def members(self, cls: int) -> list:
        return [i for i, c in enumerate(self.classes) if c == cls]

    @classmethod
    def identity(cls, d: int, pinned=(), reason: str = "") -> "Grouping":
        return cls(tuple(range(d)), frozenset(pinned), reason)

    @classmethod
    def from_keys(cls, keys: Sequence, pinned_keys=(), reason: str = "") -> "Grouping":
        """Group basis vectors with equal keys, numbering classes by first use."""
        ids: dict = {}
        classes = []
        for k in keys:
            if k not in ids:
                ids[k] = len(ids)
            classes.append(ids[k])
        pinned = {ids[k] for k in pinned_keys if k in ids}
        return cls(tuple(classes), frozenset(pinned), reason)

    def to_json(self) -> dict:
        return {"classes": list(self.classes), "pinned": sorted(self.pinned), "reason": self.reason}

    @classmethod
    def from_json(cls, obj: Mapping) -> "Grouping":
        return cls(tuple(obj["classes"]), frozenset(obj.get("pinned", ())), obj.get("reason", ""))


def _normalize_table(dim: int, table) -> dict:
    acc: dict = {}
    if isinstance(table, Mapping):
        items = []
        for (i, j), prod in table.items():
            if isinstance(prod, Mapping):
                prod = prod.items()
            for k, c in prod:
                items.append((i, j, k, c))
    else:
        items = list(table)
    for i, j, k, c in items:
        for idx in (i, j, k):
            if not (isinstance(idx, int) and 0 <= idx < dim):
                raise ValueError(f"structure constant index {idx!r} outside [0, {dim})")
        c = frac(c)
        if c:
            slot = acc.setdefault((i, j), {})
            slot[k] = slot.get(k, Fraction(0)) + c
    out = {}
    for key in sorted(acc):
        prod = tuple((k, c) for k, c in sorted(acc[key].items()) if c)
        if prod:
            out[key] = prod
    return out


class Algebra:
    """An algebra structure on Q^d, mu(e_i, e_j) = sum_k c_ij^k e_k.

    Instances are treated as immutable.  ``grading`` is an optional list of
    integer degree vectors (one per basis vector, all of equal length r);
    ``grouping`` is optional builder metadata consumed by the canonical
    filtration solver.
    """

    __slots__ = ("dim", "kind", "table", "labels", "grading", "grouping", "_rows")

    def __init__(self, dim: int, kind, table=(), labels=None, grading=None, grouping=None):
        if not isinstance(dim, int) or dim < 1:
            raise ValueError("dimension must be a positive integer")
        self.dim = dim
        self.kind = Kind(kind)
        self.table = _normalize_table(dim, table)
        self.labels = tuple(labels) if labels is not None else tuple(f"e{i}" for i in range(dim))
        if len(self.labels) != dim:
            raise ValueError("need one label per basis vector")
        if grading is not None:
            grading = tuple(tuple(int(x) for x in g) for g in grading)
            if len(grading) != dim or len({len(g) for g in grading}) != 1:
                raise ValueError("grading must give one degree vector of common length per basis vector")
        self.grading = grading
        if grouping is not None and len(grouping.classes) != dim:
            raise ValueError("grouping length does not match dimension")
        self.grouping = grouping
        rows: dict = {}
        for (i, j), prod in self.table.items():
            rows.setdefault(i, []).append((j, prod))
        self._rows = rows

    # -- basic access -----------------------------------------------------

    def __repr__(self) -> str:
        return f"Algebra(dim={self.dim}, kind={self.kind.value}, nnz={self.nnz})"

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Algebra)
            and self.dim == other.dim
            and self.kind == other.kind
            and self.table == other.table
        )

    def __hash__(self):
        return hash((self.dim, self.kind, tuple(self.table.items())))

    @property
    def nnz(self) -> int:
        return sum(len(p) for p in self.table.values())

    @property
    def grading_rank(self) -> int | None:
        return None if self.grading is None else len(self.grading[0])

    def entries(self):
        """Iterate over ``(i, j, k, c)`` for every nonzero structure constant."""
        for (i, j), prod in self.table.items():
            for k, c in prod:
                yield i, j, k, c

    def basis_product(self, i: int, j: int) -> tuple:
        return self.table.get((i, j), ())

    def replace(self, **kw) -> "Algebra":
        args = dict(
            dim=self.dim, kind=self.kind, table=self.table, labels=self.labels,
            grading=self.grading, grouping=self.grouping,
        )
        args.update(kw)
        return Algebra(**args)

    # -- arithmetic -------------------------------------------------------

    def multiply(self, u: Sequence, v: Sequence) -> tuple:
        if len(u) != self.dim or len(v) != self.dim:
            raise ValueError(f"expected vectors of length {self.dim}")
        out = [Fraction(0)] * self.dim
        for i, ui in enumerate(u):
            if not ui or i not in self._rows:
                continue
            ui = frac(ui)
            for j, prod in self._rows[i]:
                vj = v[j]
                if vj:
                    s = ui * frac(vj)
                    for k, c in prod:
                        out[k] += s * c
        return tuple(out)

    def left_matrix(self, x: Sequence) -> list:
        """Matrix of y -> x y; entry [k][j] is the e_k coefficient of x e_j."""
        cols = [self.multiply(x, la.unit(self.dim, j)) for j in range(self.dim)]
        return la.transpose(cols)

    def right_matrix(self, x: Sequence) -> list:
        cols = [self.multiply(la.unit(self.dim, j), x) for j in range(self.dim)]
        return la.transpose(cols)

    def _sparse_multiply(self, u: dict, v: dict) -> dict:
        out: dict = {}
        for i, ui in u.items():
            for j, prod in self._rows.get(i, ()):
                vj = v.get(j)
                if vj:
                    s = ui * vj
                    for k, c in prod:
                        out[k] = out.get(k, 0) + s * c
        return {k: x for k, x in out.items() if x}

    def product_space(self, u: Subspace, v: Subspace) -> Subspace:
        """Span of all products u_a v_b."""
        su = [{j: x for j, x in enumerate(r) if x} for r in u.rows]
        sv = [{j: x for j, x in enumerate(r) if x} for r in v.rows]
        prods = (self._sparse_multiply(x, y) for x in su for y in sv)
        return Subspace.from_sparse(self.dim, (p for p in prods if p))

    def is_ideal(self, s: Subspace) -> bool:
        full = Subspace.full(self.dim)
        return self.product_space(full, s) <= s and self.product_space(s, full) <= s

    def is_subalgebra(self, s: Subspace) -> bool:
        return self.product_space(s, s) <= s

    def homogeneous_components(self) -> dict:
        """Map degree vector -> list of basis indices (requires a grading)."""
        if self.grading is None:
            raise ValueError("algebra has no grading")
        comps: dict = {}
        for i, g in enumerate(self.grading):
            comps.setdefault(g, []).append(i)
        return comps


# -- validation -----------------------------------------------------------


@dataclass(frozen=True)
class Violation:
    kind: str
    indices: tuple
    residual: tuple = field(default=())

    @property
    def message(self) -> str:
        idx = ",".join(str(i) for i in self.indices)
        return f"{self.kind} fails at ({idx})"

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "indices": list(self.indices),
            "residual": [format_frac(x) for x in self.residual],
            "message": self.message,
        }


def _as_vector(dim: int, prod) -> list:
    out = [Fraction(0)] * dim
    for k, c in prod:
        out[k] += c
    return out


def validate(a: Algebra) -> list:
    """List every axiom violation of ``a``; an empty list means valid."""
    d = a.dim
    out: list = []
    if a.kind is Kind.LIE:
        for i in range(d):
            if a.basis_product(i, i):
                out.append(Violation("alternating", (i, i), tuple(_as_vector(d, a.basis_product(i, i)))))
        for i in range(d):
            for j in range(i + 1, d):
                s = la.add(_as_vector(d, a.basis_product(i, j)), _as_vector(d, a.basis_product(j, i)))
                if any(s):
                    out.append(Violation("antisymmetry", (i, j), s))
        out.extend(_jacobi_violations(a))
    else:
        out.extend(_associator_violations(a))
    if a.grading is not None:
        for i, j, k, c in a.entries():
            gi, gj, gk = a.grading[i], a.grading[j], a.grading[k]
            if tuple(x + y for x, y in zip(gi, gj)) != gk:
                out.append(Violation("grading", (i, j, k), (c,)))
    return out


def _basis_mul(a: Algebra, prod_vec_sparse, q: int, left: bool) -> dict:
    """Multiply a sparse vector {k: c} by e_q on the right (left=False) or left."""
    out: dict = {}
    for k, c in prod_vec_sparse.items():
        pr = a.basis_product(k, q) if not left else a.basis_product(q, k)
        for m, c2 in pr:
            out[m] = out.get(m, Fraction(0)) + c * c2
    return out


def _associator_violations(a: Algebra) -> list:
    d = a.dim
    # triples where either (e_i e_j) e_q or e_i (e_j e_q) can be nonzero
    triples = set()
    for (i, j) in a.table:
        for q in range(d):
            triples.add((i, j, q))
    for (j, q) in a.table:
        for i in range(d):
            triples.add((i, j, q))
    out = []
    for i, j, q in sorted(triples):
        left = _basis_mul(a, dict(a.basis_product(i, j)), q, left=False)
        right = _basis_mul(a, dict(a.basis_product(j, q)), i, left=True)
        res = [Fraction(0)] * d
        for m, c in left.items():
            res[m] += c
        for m, c in right.items():
            res[m] -= c
        if any(res):
            out.append(Violation("associativity", (i, j, q), tuple(res)))
    return out


def _jacobi_violations(a: Algebra) -> list:
    d = a.dim
    out = []
    touched = {i for key in a.table for i in key}
    for i in range(d):
        for j in range(i + 1, d):
            for q in range(j + 1, d):
                if not ({i, j, q} & touched):
                    continue
                res = [Fraction(0)] * d
                for x, y, z in ((i, j, q), (j, q, i), (q, i, j)):
                    # [e_x, [e_y, e_z]]
                    inner = dict(a.basis_product(y, z))
                    for m, c in _basis_mul(a, inner, x, left=True).items():
                        res[m] += c
                if any(res):
                    out.append(Violation("jacobi", (i, j, q), tuple(res)))
    return out


def check_grading(a: Algebra) -> bool:
    return not any(v.kind == "grading" for v in validate(a))


# -- constructions --------------------------------------------------------


def direct_sum(a1: Algebra, a2: Algebra) -> Algebra:
    if a1.kind != a2.kind:
        raise ValueError("cannot sum algebras of different kinds")
    d1 = a1.dim
    table = list(a1.entries()) + [(i + d1, j + d1, k + d1, c) for i, j, k, c in a2.entries()]
    labels = list(a1.labels) + list(a2.labels)
    if len(set(labels)) < len(labels):
        labels = [f"{l}_1" for l in a1.labels] + [f"{l}_2" for l in a2.labels]
    grading = None
    if a1.grading is not None and a2.grading is not None:
        r1, r2 = a1.grading_rank, a2.grading_rank
        grading = [tuple(g) + (0,) * r2 for g in a1.grading] + [(0,) * r1 + tuple(g) for g in a2.grading]
    grouping = None
    if a1.grouping is not None and a2.grouping is not None:
        g1, g2 = a1.grouping, a2.grouping
        off = g1.n_classes
        reasons = [r for r in (g1.reason, g2.reason) if r]
        grouping = Grouping(
            g1.classes + tuple(c + off for c in g2.classes),
            g1.pinned | {p + off for p in g2.pinned},
            "; ".join(["direct sum of adapted bases"] + reasons),
        )
    return Algebra(d1 + a2.dim, a1.kind, table, labels, grading, grouping)


def _monomial_perm(p: Sequence[Sequence]):
    """If every row of p has exactly one nonzero entry, return the column map."""
    cols = []
    for row in p:
        nz = [j for j, x in enumerate(row) if x]
        if len(nz) != 1:
            return None
        cols.append(nz[0])
    return cols if len(set(cols)) == len(cols) else None


def change_of_basis(a: Algebra, p: Sequence[Sequence]) -> Algebra:
    """Express ``a`` in the basis whose vectors are the rows of ``p``.

    The result is isomorphic to ``a``; when the rows of ``p`` are the images
    phi(e_i) of an automorphism phi, the result has the same table as ``a``.
    """
    d = a.dim
    p = [la.vec(r) for r in p]
    if len(p) != d or any(len(r) != d for r in p):
        raise ValueError("change of basis needs a d x d matrix")
    pinv = la.inverse(p)  # raises on singular input
    table = []
    for i in range(d):
        for j in range(d):
            prod = a.multiply(p[i], p[j])
            if any(prod):
                for k, c in enumerate(la.vecmat(prod, pinv)):
                    if c:
                        table.append((i, j, k, c))
    perm = _monomial_perm(p)
    labels = [a.labels[c] for c in perm] if perm is not None else [f"f{i}" for i in range(d)]
    grading = None
    if a.grading is not None:
        degs = []
        for r in p:
            support = {a.grading[j] for j, x in enumerate(r) if x}
            if len(support) != 1:
                degs = None
                break
            degs.append(support.pop())
        grading = degs
    grouping = None
    if perm is not None and a.grouping is not None:
        g = a.grouping
        grouping = Grouping.from_keys([g.classes[c] for c in perm], g.pinned, g.reason)
    return Algebra(d, a.kind, table, labels, grading, grouping)


def restrict(a: Algebra, s: Subspace, labels=None) -> Algebra:
    """The subalgebra ``s`` as a standalone algebra in its echelon basis.

    A coordinate subspace keeps the grading of its basis vectors.  Groupings
    are not inherited: a symmetry of ``a`` need not act on the subalgebra.
    """
    if not a.is_subalgebra(s):
        raise ValueError("subspace is not closed under the product")
    if s.dim == 0:
        return None
    rows = s.rows
    table = []
    for i, u in enumerate(rows):
        for j, v in enumerate(rows):
            prod = a.multiply(u, v)
            if any(prod):
                for k, c in enumerate(s.coordinates(prod)):
                    if c:
                        table.append((i, j, k, c))
    coords = _monomial_perm(rows) if all(sum(r) == 1 for r in rows) else None
    grading = None
    if coords is not None and a.grading is not None:
        grading = [a.grading[c] for c in coords]
    if labels is None:
        labels = [a.labels[c] for c in coords] if coords is not None else [f"v{i}" for i in range(s.dim)]
    return Algebra(s.dim, a.kind, table, labels, grading)


def quotient(a: Algebra, ideal: Subspace) -> Algebra | None:
    """The quotient algebra a/ideal on a complement spanned by coordinate-like vectors."""
    if not a.is_ideal(ideal):
        raise ValueError("subspace is not an ideal")
    comp = ideal.complement_basis()
    if not comp:
        return None
    basis = list(comp) + list(ideal.rows)
    binv = la.inverse(basis)
    n = len(comp)
    table = []
    for i, u in enumerate(comp):
        for j, v in enumerate(comp):
            prod = a.multiply(u, v)
            if any(prod):
                coords = la.vecmat(prod, binv)[:n]
                for k, c in enumerate(coords):
                    if c:
                        table.append((i, j, k, c))
    labels = []
    for r in comp:
        nz = [j for j, x in enumerate(r) if x]
        labels.append(a.labels[nz[0]] if len(nz) == 1 else f"q{len(labels)}")
    return Algebra(n, a.kind, table, labels)


# -- JSON -----------------------------------------------------------------


def to_json_dict(a: Algebra) -> dict:
    out = {
        "dim": a.dim,
        "kind": a.kind.value,
        "labels": list(a.labels),
        "table": [[i, j, k, format_frac(c)] for i, j, k, c in a.entries()],
        "grading": [list(g) for g in a.grading] if a.grading is not None else None,
    }
    if a.grouping is not None:
        out["grouping"] = a.grouping.to_json()
    return out


def from_json_dict(obj: Mapping) -> Algebra:
    try:
        dim = obj["dim"]
        kind = Kind(obj["kind"])
        raw = obj.get("table", [])
    except KeyError as exc:
        raise ValueError(f"algebra JSON is missing key {exc.args[0]!r}") from None
    except ValueError:
        raise ValueError(f"unknown algebra kind {obj.get('kind')!r}") from None
    entries = []
    for pos, e in enumerate(raw):
        if not (isinstance(e, list) and len(e) == 4):
            raise ValueError(f"table entry #{pos} must be [i, j, k, \"p/q\"]")
        i, j, k, c = e
        try:
            c = frac(c)
        except (TypeError, ValueError, ZeroDivisionError):
            raise ValueError(f"table entry #{pos}: bad rational {c!r}") from None
        entries.append((i, j, k, c))
    if kind is Kind.LIE:
        listed = {(i, j) for i, j, _, _ in entries}
        entries += [(j, i, k, -c) for i, j, k, c in entries if i < j and (j, i) not in listed]
    grouping = Grouping.from_json(obj["grouping"]) if obj.get("grouping") else None
    return Algebra(dim, kind, entries, obj.get("labels"), obj.get("grading"), grouping)


def dumps(a: Algebra) -> str:
    return json.dumps(to_json_dict(a), indent=1)


def loads(text: str) -> Algebra:
    return from_json_dict(json.loads(text))

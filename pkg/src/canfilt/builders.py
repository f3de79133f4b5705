"""Generators for the standard example families."""
from __future__ import annotations

import itertools
from fractions import Fraction
from math import comb
from typing import Sequence

from .algebra import Algebra, Grouping, Kind, direct_sum, validate

# Reasons attached to groupings that merge basis vectors or leave several
# classes inside one homogeneous component.
DEGREE_REASON = "GL_n acts on the generators; canonical steps contain whole degree pieces"
BLOCK_REASON = "block-diagonal conjugation; canonical steps are sums of blocks with diagonal blocks at weight 0"
FILIFORM_REASON = "torus x0 -> c x0 and xi -> c^i xi plus x0 + a x1 shears; canonical steps are spanned by x0..xn"
MODULE_REASON = "semisimple part at weight 0, bimodule block kept whole"
ABELIAN_REASON = "every basis is adapted for an abelian algebra"


def _var_names(n: int) -> list:
    return ["x", "y", "z"][:n] if n <= 3 else [f"x{i + 1}" for i in range(n)]


def _monomial_label(exps: Sequence[int], names: Sequence[str]) -> str:
    parts = [(v if e == 1 else f"{v}^{e}") for v, e in zip(names, exps) if e]
    if not parts:
        return "1"
    sep = "" if all(len(v) == 1 for v in names) else "*"
    return sep.join(parts)


def standard_monomials(n_vars: int, generators: Sequence[Sequence[int]]) -> list:
    """Monomials outside the ideal, degree-lexicographic order (x before y)."""
    gens = [tuple(g) for g in generators]
    if any(len(g) != n_vars for g in gens):
        raise ValueError("every generator needs one exponent per variable")
    bounds = []
    for v in range(n_vars):
        pure = [g[v] for g in gens if all(g[u] == 0 for u in range(n_vars) if u != v) and g[v] > 0]
        if not pure and not any(sum(g) == 0 for g in gens):
            raise ValueError("quotient is infinite-dimensional: a variable has no pure power in the ideal")
        bounds.append(min(pure) if pure else 0)

    def in_ideal(m):
        return any(all(a >= b for a, b in zip(m, g)) for g in gens)

    monos = [m for m in itertools.product(*(range(b) for b in bounds)) if not in_ideal(m)]
    monos.sort(key=lambda m: (sum(m), tuple(-e for e in m)))
    return monos


def monomial_quotient(n_vars: int, generators: Sequence[Sequence[int]], names=None) -> Algebra:
    """k[x_1..x_n] / (monomials), Z^n-graded by exponent vectors."""
    if n_vars < 1:
        raise ValueError("need at least one variable")
    monos = standard_monomials(n_vars, generators)
    if not monos:
        raise ValueError("the quotient is zero")
    names = list(names) if names is not None else _var_names(n_vars)
    index = {m: i for i, m in enumerate(monos)}
    table = []
    for i, m1 in enumerate(monos):
        for j, m2 in enumerate(monos):
            prod = tuple(a + b for a, b in zip(m1, m2))
            k = index.get(prod)
            if k is not None:
                table.append((i, j, k, 1))
    labels = [_monomial_label(m, names) for m in monos]
    unit = index.get((0,) * n_vars)
    grouping = Grouping.identity(len(monos), pinned=() if unit is None else (unit,))
    return Algebra(len(monos), Kind.ASSOCIATIVE, table, labels, monos, grouping)


def truncated_poly(n: int, r: int) -> Algebra:
    """S_{n,r} = k[x_1..x_n] / m^r, Z-graded by total degree, one weight variable per degree."""
    if n < 1 or r < 2:
        raise ValueError("truncated_poly needs n >= 1 and r >= 2")
    gens = [m for m in itertools.product(range(r + 1), repeat=n) if sum(m) == r]
    a = monomial_quotient(n, gens)
    degrees = [sum(g) for g in a.grading]
    reason = DEGREE_REASON if n > 1 else ""
    grouping = Grouping.from_keys(degrees, pinned_keys=(0,), reason=reason)
    return a.replace(grading=[(d,) for d in degrees], grouping=grouping)


def truncated_poly_dims(n: int, r: int) -> tuple:
    return tuple(comb(n - 1 + i, i) for i in range(r))


def _unit_label(a: int, b: int, big: bool) -> str:
    return f"E{a + 1},{b + 1}" if big else f"E{a + 1}{b + 1}"


def block_triangular(n_list: Sequence[int]) -> Algebra:
    """Block upper-triangular matrices, Z^t-graded by deg E_ab = e_block(b) - e_block(a)."""
    n_list = [int(x) for x in n_list]
    if not n_list or any(x < 1 for x in n_list):
        raise ValueError("block sizes must be positive")
    t = len(n_list)
    block = [bi for bi, size in enumerate(n_list) for _ in range(size)]
    size = len(block)
    big = size >= 10
    basis = [(a, b) for a in range(size) for b in range(size) if block[a] <= block[b]]
    index = {ab: i for i, ab in enumerate(basis)}
    table = []
    for i, (a, b) in enumerate(basis):
        for j, (c, e) in enumerate(basis):
            if b == c:
                table.append((i, j, index[(a, e)], 1))
    grading = []
    for a, b in basis:
        g = [0] * t
        g[block[b]] += 1
        g[block[a]] -= 1
        grading.append(tuple(g))
    keys = [(block[a], block[b]) for a, b in basis]
    diag = [(k, k) for k in range(t)]
    reason = BLOCK_REASON if size > 1 else ""
    grouping = Grouping.from_keys(keys, pinned_keys=diag, reason=reason)
    return Algebra(len(basis), Kind.ASSOCIATIVE, table, [_unit_label(a, b, big) for a, b in basis], grading, grouping)


def full_matrix(m: int) -> Algebra:
    return block_triangular((m,))


def upper_triangular(n: int) -> Algebra:
    return block_triangular((1,) * n)


def matrix_unit_basis(n_list: Sequence[int]) -> list:
    """(row, col) pairs of the block-triangular basis, in basis order."""
    block = [bi for bi, size in enumerate(n_list) for _ in range(size)]
    size = len(block)
    return [(a, b) for a in range(size) for b in range(size) if block[a] <= block[b]]


def model_filiform(n: int) -> Algebra:
    """M_n on x0..xn with [x0, xi] = x(i+1) for 1 <= i <= n-1."""
    if n < 2:
        raise ValueError("model_filiform needs n >= 2")
    table = []
    for i in range(1, n):
        table.append((0, i, i + 1, 1))
        table.append((i, 0, i + 1, -1))
    grading = [(1,)] + [(i,) for i in range(1, n + 1)]
    labels = [f"x{i}" for i in range(n + 1)]
    return Algebra(n + 1, Kind.LIE, table, labels, grading, Grouping.identity(n + 1, reason=FILIFORM_REASON))


def strictly_upper_basis(n: int) -> list:
    size = n + 1
    return [(i, j) for i in range(size) for j in range(i + 1, size)]


def sl_nilpotent(n: int) -> Algebra:
    """Strictly upper-triangular (n+1)x(n+1) matrices under the commutator."""
    if n < 1:
        raise ValueError("sl_nilpotent needs n >= 1")
    basis = strictly_upper_basis(n)
    index = {ab: i for i, ab in enumerate(basis)}
    big = n + 1 >= 10
    table = []
    for p, (i, j) in enumerate(basis):
        for q, (k, l) in enumerate(basis):
            if j == k:
                table.append((p, q, index[(i, l)], 1))
            if l == i:
                table.append((p, q, index[(k, j)], -1))
    grading = []
    for i, j in basis:
        g = [0] * (n + 1)
        g[i] += 1
        g[j] -= 1
        grading.append(tuple(g))
    labels = [_unit_label(i, j, big) for i, j in basis]
    return Algebra(len(basis), Kind.LIE, table, labels, grading, Grouping.identity(len(basis)))


def heisenberg() -> Algebra:
    table = [(0, 1, 2, 1), (1, 0, 2, -1)]
    return Algebra(3, Kind.LIE, table, ["x", "y", "z"], [(1, 0), (0, 1), (1, 1)], Grouping.identity(3))


def abelian(n: int) -> Algebra:
    if n < 1:
        raise ValueError("abelian needs n >= 1")
    grading = [tuple(1 if k == i else 0 for k in range(n)) for i in range(n)]
    return Algebra(n, Kind.LIE, (), [f"a{i}" for i in range(n)], grading, Grouping.identity(n, reason=ABELIAN_REASON))


def sl2() -> Algebra:
    table = [
        (0, 1, 1, 2), (1, 0, 1, -2),
        (0, 2, 2, -2), (2, 0, 2, 2),
        (1, 2, 0, 1), (2, 1, 0, -1),
    ]
    return Algebra(3, Kind.LIE, table, ["h", "e", "f"], [(0,), (1,), (-1,)], Grouping.identity(3))


def nonabelian2() -> Algebra:
    """The two-dimensional Lie algebra [x, y] = y."""
    return Algebra(2, Kind.LIE, [(0, 1, 1, 1), (1, 0, 1, -1)], ["x", "y"], [(0,), (1,)], Grouping.identity(2))


def field() -> Algebra:
    return Algebra(1, Kind.ASSOCIATIVE, [(0, 0, 0, 1)], ["1"], [(0,)], Grouping.identity(1, pinned=(0,)))


# -- bimodule constructions -----------------------------------------------


class Bimodule:
    """Actions on Q^m: ``left`` entries (i, p, q, c) mean e_i m_p = ... + c m_q,
    ``right`` entries (p, i, q, c) mean m_p f_i = ... + c m_q."""

    def __init__(self, dim: int, left=(), right=(), labels=None):
        self.dim = dim
        self.left = tuple((int(i), int(p), int(q), Fraction(c)) for i, p, q, c in left)
        self.right = tuple((int(p), int(i), int(q), Fraction(c)) for p, i, q, c in right)
        self.labels = tuple(labels) if labels is not None else tuple(f"m{i}" for i in range(dim))


def regular_bimodule(a: Algebra) -> Bimodule:
    entries = list(a.entries())
    return Bimodule(a.dim, entries, entries, [f"m_{l}" for l in a.labels])


def matrix_bimodule(p: int, q: int) -> Bimodule:
    """p x q matrices as a (Mat_p, Mat_q)-bimodule, bases in row-major matrix units."""
    lbasis = [(a, b) for a in range(p) for b in range(p)]
    rbasis = [(a, b) for a in range(q) for b in range(q)]
    mbasis = [(a, b) for a in range(p) for b in range(q)]
    mi = {ab: i for i, ab in enumerate(mbasis)}
    left = [(i, mi[(c, e)], mi[(a, e)], 1) for i, (a, b) in enumerate(lbasis) for (c, e) in mbasis if b == c]
    right = [(mi[(a, b)], i, mi[(a, e)], 1) for i, (c, e) in enumerate(rbasis) for (a, b) in mbasis if b == c]
    return Bimodule(p * q, left, right, [f"M{a + 1}{b + 1}" for a, b in mbasis])


def _act(entries_by_key: dict, key) -> dict:
    return entries_by_key.get(key, {})


def _index(entries) -> dict:
    out: dict = {}
    for x, y, q, c in entries:
        slot = out.setdefault((x, y), {})
        slot[q] = slot.get(q, Fraction(0)) + c
    return out


def _left_apply(a: Algebra, lidx: dict, vec_a: dict, vec_m: dict) -> dict:
    """Left action of sum vec_a on the module vector vec_m."""
    out: dict = {}
    for i, ci in vec_a.items():
        for p, cp in vec_m.items():
            for q, c in _act(lidx, (i, p)).items():
                out[q] = out.get(q, Fraction(0)) + ci * cp * c
    return {k: v for k, v in out.items() if v}


def _right_apply(b: Algebra, ridx: dict, vec_m: dict, vec_b: dict) -> dict:
    out: dict = {}
    for p, cp in vec_m.items():
        for i, ci in vec_b.items():
            for q, c in _act(ridx, (p, i)).items():
                out[q] = out.get(q, Fraction(0)) + ci * cp * c
    return {k: v for k, v in out.items() if v}


def check_bimodule(a: Algebra, b: Algebra, m: Bimodule) -> list:
    """Violations of (xy)m = x(ym), (xm)y = x(my), m(xy) = (mx)y over basis triples."""
    for i, p, q, _ in m.left:
        if not (0 <= i < a.dim and 0 <= p < m.dim and 0 <= q < m.dim):
            raise ValueError("left action index out of range")
    for p, i, q, _ in m.right:
        if not (0 <= i < b.dim and 0 <= p < m.dim and 0 <= q < m.dim):
            raise ValueError("right action index out of range")
    lidx, ridx = _index(m.left), _index(m.right)
    bad = []
    for p in range(m.dim):
        mp = {p: Fraction(1)}
        for i in range(a.dim):
            for j in range(a.dim):
                xy = dict(a.basis_product(i, j))
                lhs = _left_apply(a, lidx, xy, mp)
                rhs = _left_apply(a, lidx, {i: Fraction(1)}, _left_apply(a, lidx, {j: Fraction(1)}, mp))
                if lhs != rhs:
                    bad.append(("left", i, j, p))
        for i in range(b.dim):
            for j in range(b.dim):
                xy = dict(b.basis_product(i, j))
                lhs = _right_apply(b, ridx, mp, xy)
                rhs = _right_apply(b, ridx, _right_apply(b, ridx, mp, {i: Fraction(1)}), {j: Fraction(1)})
                if lhs != rhs:
                    bad.append(("right", i, j, p))
        for i in range(a.dim):
            for j in range(b.dim):
                lhs = _right_apply(b, ridx, _left_apply(a, lidx, {i: Fraction(1)}, mp), {j: Fraction(1)})
                rhs = _left_apply(a, lidx, {i: Fraction(1)}, _right_apply(b, ridx, mp, {j: Fraction(1)}))
                if lhs != rhs:
                    bad.append(("middle", i, j, p))
    return bad


def trivial_extension(a: Algebra, m: Bimodule) -> Algebra:
    """A x M with (a, m)(a', m') = (aa', am' + ma')."""
    if a.kind is not Kind.ASSOCIATIVE:
        raise ValueError("trivial extension needs an associative algebra")
    bad = check_bimodule(a, a, m)
    if bad:
        raise ValueError(f"bimodule axioms fail at {bad[0]}")
    d = a.dim
    table = list(a.entries())
    table += [(i, d + p, d + q, c) for i, p, q, c in m.left]
    table += [(d + p, i, d + q, c) for p, i, q, c in m.right]
    grading = [(0,)] * d + [(1,)] * m.dim
    grouping = Grouping((0,) * d + (1,) * m.dim, frozenset({0}), MODULE_REASON)
    return Algebra(d + m.dim, Kind.ASSOCIATIVE, table, list(a.labels) + list(m.labels), grading, grouping)


def triangular_algebra(a: Algebra, b: Algebra, m: Bimodule) -> Algebra:
    """T(A, M, B) = [[A, M], [0, B]] on the basis A, B, M."""
    if a.kind is not Kind.ASSOCIATIVE or b.kind is not Kind.ASSOCIATIVE:
        raise ValueError("triangular algebra needs associative algebras")
    bad = check_bimodule(a, b, m)
    if bad:
        raise ValueError(f"bimodule axioms fail at {bad[0]}")
    da, db = a.dim, b.dim
    off = da + db
    table = list(a.entries())
    table += [(da + i, da + j, da + k, c) for i, j, k, c in b.entries()]
    table += [(i, off + p, off + q, c) for i, p, q, c in m.left]
    table += [(off + p, da + i, off + q, c) for p, i, q, c in m.right]
    grading = [(0,)] * (da + db) + [(1,)] * m.dim
    grouping = Grouping((0,) * da + (1,) * db + (2,) * m.dim, frozenset({0, 1}), MODULE_REASON)
    labels = list(a.labels) + list(b.labels) + list(m.labels)
    if len(set(labels)) < len(labels):
        labels = [f"a_{l}" for l in a.labels] + [f"b_{l}" for l in b.labels] + list(m.labels)
    return Algebra(off + m.dim, Kind.ASSOCIATIVE, table, labels, grading, grouping)


def unit_bimodule() -> Bimodule:
    """k as a (k, k)-bimodule."""
    return Bimodule(1, [(0, 0, 0, 1)], [(0, 0, 0, 1)], ["m"])


# -- named families -------------------------------------------------------

FAMILIES = {
    "truncated-poly": (truncated_poly, "n r"),
    "monomial": (None, "n_vars exps... (exponent vectors as comma lists, e.g. 4,0 2,1)"),
    "block-triangular": (lambda *ns: block_triangular(ns), "n1 n2 ..."),
    "full-matrix": (full_matrix, "m"),
    "upper-triangular": (upper_triangular, "n"),
    "model-filiform": (model_filiform, "n"),
    "sl-nilpotent": (sl_nilpotent, "n"),
    "heisenberg": (heisenberg, ""),
    "abelian": (abelian, "n"),
    "sl2": (sl2, ""),
    "nonabelian2": (nonabelian2, ""),
    "trivial-extension": (lambda m: trivial_extension(full_matrix(m), regular_bimodule(full_matrix(m))), "m"),
    "triangular": (lambda p, q: triangular_algebra(full_matrix(p), full_matrix(q), matrix_bimodule(p, q)), "p q"),
}


def build(family: str, params: Sequence[str]) -> Algebra:
    """Build a family member from string parameters (as given on a command line)."""
    if family not in FAMILIES:
        raise ValueError(f"unknown family {family!r}; known: {', '.join(sorted(FAMILIES))}")
    if family == "monomial":
        if not params:
            raise ValueError("monomial needs n_vars and exponent vectors")
        n = int(params[0])
        gens = [tuple(int(x) for x in p.split(",")) for p in params[1:]]
        return monomial_quotient(n, gens)
    fn, _ = FAMILIES[family]
    return fn(*(int(p) for p in params))


def sum_of(*algebras: Algebra) -> Algebra:
    out = algebras[0]
    for a in algebras[1:]:
        out = direct_sum(out, a)
    return out


def check_builder(a: Algebra) -> Algebra:
    bad = validate(a)
    if bad:
        raise AssertionError(f"builder produced an invalid algebra: {bad[0].message}")
    return a

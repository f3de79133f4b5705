"""The weight-cone quadratic program and its certificates.

Variables are weight groups.  For a cone {C w <= 0} and multiplicities d,
minimize g_d(w) = 1/2 sum d_i (w_i - 1)^2 with some variables pinned to 0.
Everything is exact over Fraction.
"""
from __future__ import annotations

import heapq
import os
from math import gcd
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from . import linalg as la
from .algebra import Algebra, Grouping
from .linalg import format_frac, frac


@dataclass(frozen=True)
class ConstraintSystem:
    """Rows r with r.w <= 0 over ``n_vars`` group variables.

    Rows are integer tuples of length ``n_vars`` with zeros in the pinned
    columns (pinned variables are eliminated, not kept as equality rows).
    """

    n_vars: int
    rows: tuple
    fixed_zero: frozenset = frozenset()
    dims: tuple = ()
    labels: tuple = ()

    def __post_init__(self):
        dims = tuple(self.dims) if self.dims else (1,) * self.n_vars
        if len(dims) != self.n_vars or any(int(x) < 1 for x in dims):
            raise ValueError("dims must list a positive multiplicity per variable")
        object.__setattr__(self, "dims", tuple(int(x) for x in dims))
        fixed = frozenset(int(i) for i in self.fixed_zero)
        if any(i < 0 or i >= self.n_vars for i in fixed):
            raise ValueError("pinned variable out of range")
        object.__setattr__(self, "fixed_zero", fixed)
        seen, rows = set(), []
        for r in self.rows:
            r = tuple(int(x) for x in r)
            if len(r) != self.n_vars:
                raise ValueError("row length does not match n_vars")
            r = tuple(0 if i in fixed else x for i, x in enumerate(r))
            if any(r) and r not in seen:
                seen.add(r)
                rows.append(r)
        object.__setattr__(self, "rows", tuple(rows))
        if not self.labels:
            object.__setattr__(self, "labels", tuple(f"w{i}" for i in range(self.n_vars)))

    @property
    def free(self) -> tuple:
        return tuple(i for i in range(self.n_vars) if i not in self.fixed_zero)

    def reduced(self) -> "ConstraintSystem":
        """The same system over the free variables only."""
        free = self.free
        return ConstraintSystem(
            len(free),
            tuple(tuple(r[i] for i in free) for r in self.rows),
            frozenset(),
            tuple(self.dims[i] for i in free),
            tuple(self.labels[i] for i in free),
        )

    def expand(self, w_free: Sequence) -> tuple:
        out = [Fraction(0)] * self.n_vars
        for i, x in zip(self.free, w_free):
            out[i] = frac(x)
        return tuple(out)

    def objective(self, w: Sequence) -> Fraction:
        return sum((Fraction(d) * (frac(x) - 1) ** 2 for d, x in zip(self.dims, w)), Fraction(0)) / 2

    def residuals(self, w: Sequence) -> tuple:
        return tuple(la.dot(r, w) for r in self.rows)

    def is_feasible(self, w: Sequence) -> bool:
        return all(frac(w[i]) == 0 for i in self.fixed_zero) and all(x <= 0 for x in self.residuals(w))

    def add_row(self, row: Sequence) -> "ConstraintSystem":
        return ConstraintSystem(self.n_vars, self.rows + (tuple(row),), self.fixed_zero, self.dims, self.labels)

    def to_json(self) -> dict:
        return {
            "n_vars": self.n_vars,
            "rows": [list(r) for r in self.rows],
            "fixed_zero": sorted(self.fixed_zero),
            "dims": list(self.dims),
            "labels": list(self.labels),
        }


def build_constraints(a: Algebra, grouping: Grouping | None = None) -> ConstraintSystem:
    """One row e_g(i) + e_g(j) - e_g(k) per nonzero c_ij^k, groups collapsed."""
    g = grouping if grouping is not None else Grouping.identity(a.dim)
    if len(g.classes) != a.dim:
        raise ValueError("grouping length does not match the algebra")
    n = g.n_classes
    rows = []
    for i, j, k, _ in a.entries():
        r = [0] * n
        r[g.classes[i]] += 1
        r[g.classes[j]] += 1
        r[g.classes[k]] -= 1
        rows.append(tuple(r))
    labels = []
    for c in range(n):
        members = g.members(c)
        labels.append(a.labels[members[0]] if len(members) == 1 else "{" + ",".join(a.labels[m] for m in members) + "}")
    return ConstraintSystem(n, tuple(rows), g.pinned, g.sizes, tuple(labels))


@dataclass(frozen=True)
class QpCertificate:
    w_star: tuple
    lam: tuple
    active_set: tuple
    objective: Fraction
    kkt_ok: bool

    def to_json(self) -> dict:
        return {
            "w": [format_frac(x) for x in self.w_star],
            "lambda": [format_frac(x) for x in self.lam],
            "active": list(self.active_set),
            "objective": format_frac(self.objective),
            "kkt_ok": self.kkt_ok,
        }


def make_certificate(cs: ConstraintSystem, w: Sequence, lam: Sequence) -> QpCertificate:
    w = la.vec(w)
    lam = la.vec(lam)
    active = tuple(i for i, x in enumerate(cs.residuals(w)) if x == 0)
    cert = QpCertificate(w, lam, active, cs.objective(w), False)
    return QpCertificate(w, lam, active, cert.objective, verify_kkt(cs, cert))


def verify_kkt(cs: ConstraintSystem, cert: QpCertificate) -> bool:
    """Re-check feasibility, lambda >= 0, complementary slackness and stationarity."""
    w, lam = cert.w_star, cert.lam
    if len(w) != cs.n_vars or len(lam) != len(cs.rows):
        return False
    if any(frac(w[i]) != 0 for i in cs.fixed_zero):
        return False
    res = cs.residuals(w)
    if any(x > 0 for x in res) or any(l < 0 for l in lam):
        return False
    if any(l * x != 0 for l, x in zip(lam, res)):
        return False
    grad = la.vecmat(lam, cs.rows) if cs.rows else (Fraction(0),) * cs.n_vars
    for i in cs.free:
        if cs.dims[i] * (w[i] - 1) + grad[i] != 0:
            return False
    return cert.objective == cs.objective(w)


def _eqp(rows: Sequence, dims: Sequence, n: int) -> tuple:
    """Minimize g_d subject to r.w = 0 for each (independent, integer) row."""
    if not rows:
        return (Fraction(1),) * n, ()
    big = 1
    for d in dims:
        big = big * d // gcd(big, d)
    scale = [big // d for d in dims]
    # (C D^-1 C^T) lam = C 1, multiplied through by lcm(d)
    gram = [[sum(a * b * s for a, b, s in zip(r, q, scale) if a and b) for q in rows] for r in rows]
    rhs = [big * sum(r) for r in rows]
    lam = la.solve_int(gram, rhs)
    ctl = la.vecmat(lam, rows)
    w = tuple(1 - x / d for d, x in zip(dims, ctl))
    return w, lam


class SolverError(RuntimeError):
    pass


def solve(cs: ConstraintSystem, max_iter: int = 10000) -> QpCertificate:
    """Primal active-set method from w = 0 with lowest-index tie-breaking."""
    red = cs.reduced()
    n, rows, dims = red.n_vars, red.rows, red.dims
    w = (Fraction(0),) * n
    work: list = []
    lam_w: tuple = ()
    for _ in range(max_iter):
        target, lam_w = _eqp([rows[i] for i in work], dims, n)
        p = la.sub(target, w)
        if not any(p):
            neg = [(l, idx) for l, idx in zip(lam_w, work) if l < 0]
            if not neg:
                break
            drop = min(neg)[1]
            work.remove(drop)
            continue
        alpha, block = Fraction(1), None
        for i, r in enumerate(rows):
            if i in work:
                continue
            rp = la.dot(r, p)
            if rp > 0:
                step = -la.dot(r, w) / rp
                if step < alpha:
                    alpha, block = step, i
        w = tuple(x + alpha * y for x, y in zip(w, p))
        if block is not None:
            work.append(block)
            work.sort()
    else:
        raise SolverError("active-set iteration limit reached")
    lam_full = [Fraction(0)] * len(cs.rows)
    for l, idx in zip(lam_w, work):
        lam_full[idx] = l
    return make_certificate(cs, cs.expand(w), lam_full)


# -- exact phase-1 simplex and the Farkas alternative ---------------------


def _phase1(a_cols: Sequence, b: Sequence):
    """Find x >= 0 with sum_j x_j a_cols[j] = b, or duals proving none exists.

    Returns (x, None) on success, (None, y) with y.a_j <= 0 for all j and
    y.b > 0 otherwise.  Bland's rule throughout.
    """
    m = len(b)
    ncols = len(a_cols)
    sign = [1 if frac(bi) >= 0 else -1 for bi in b]
    # tableau rows: [structural | artificial | rhs]
    tab = []
    for i in range(m):
        row = [sign[i] * frac(a_cols[j][i]) for j in range(ncols)]
        row += [Fraction(1 if k == i else 0) for k in range(m)]
        row.append(sign[i] * frac(b[i]))
        tab.append(row)
    basis = [ncols + i for i in range(m)]
    cost = [Fraction(0)] * ncols + [Fraction(1)] * m
    width = ncols + m
    while True:
        # reduced costs c_j - c_B B^-1 A_j
        reduced = []
        for j in range(width):
            z = sum((cost[basis[i]] * tab[i][j] for i in range(m)), Fraction(0))
            reduced.append(cost[j] - z)
        enter = next((j for j in range(width) if reduced[j] < 0), None)
        if enter is None:
            break
        best = None
        for i in range(m):
            if tab[i][enter] > 0:
                ratio = tab[i][-1] / tab[i][enter]
                key = (ratio, basis[i])
                if best is None or key < best[0]:
                    best = (key, i)
        if best is None:
            raise SolverError("phase-1 problem unbounded")
        r = best[1]
        piv = tab[r][enter]
        tab[r] = [x / piv for x in tab[r]]
        for i in range(m):
            if i != r and tab[i][enter]:
                f = tab[i][enter]
                tab[i] = [x - f * y for x, y in zip(tab[i], tab[r])]
        basis[r] = enter
    value = sum((cost[basis[i]] * tab[i][-1] for i in range(m)), Fraction(0))
    if value == 0:
        x = [Fraction(0)] * ncols
        for i, bv in enumerate(basis):
            if bv < ncols:
                x[bv] = tab[i][-1]
        return tuple(x), None
    # artificial columns of the tableau hold B^-1
    u = [sum((cost[basis[i]] * tab[i][ncols + k] for i in range(m)), Fraction(0)) for k in range(m)]
    return None, tuple(s * x for s, x in zip(sign, u))


@dataclass(frozen=True)
class FarkasResult:
    """Either multipliers (kind 'lambda') or a separating direction (kind 'witness')."""

    kind: str
    lam: tuple = ()
    y: tuple = ()
    tight: tuple = ()

    def to_json(self) -> dict:
        out = {"kind": self.kind, "tight": list(self.tight)}
        if self.kind == "lambda":
            out["lambda"] = [format_frac(x) for x in self.lam]
        else:
            out["y"] = [format_frac(x) for x in self.y]
        return out


def farkas_certificate(cs: ConstraintSystem, w: Sequence) -> FarkasResult:
    """Decide whether D(1 - w) lies in the cone of the rows tight at w.

    Exactly one holds: lambda >= 0 on the tight rows with C^T lambda = D(1-w)
    (so w is optimal), or y with C_T y <= 0 and y.D(1-w) > 0 (an improving
    feasible direction).  Only the free variables take part.
    """
    w = la.vec(w)
    if len(w) != cs.n_vars:
        raise ValueError("weight vector length does not match the system")
    if not cs.is_feasible(w):
        raise ValueError("w is not feasible for the constraint system")
    res = cs.residuals(w)
    tight = tuple(i for i, x in enumerate(res) if x == 0)
    free = cs.free
    b = [cs.dims[i] * (1 - w[i]) for i in free]
    cols = [[cs.rows[t][i] for i in free] for t in tight]
    x, y = _phase1(cols, b)
    if x is not None:
        lam = [Fraction(0)] * len(cs.rows)
        for t, v in zip(tight, x):
            lam[t] = v
        lam = tuple(lam)
        check = la.vecmat(lam, cs.rows) if cs.rows else (Fraction(0),) * cs.n_vars
        if any(check[i] != bi for i, bi in zip(free, b)) or any(v < 0 for v in lam):
            raise SolverError("phase-1 multipliers failed verification")
        return FarkasResult("lambda", lam=lam, tight=tight)
    yfull = cs.expand(y)
    if any(la.dot(cs.rows[t], yfull) > 0 for t in tight) or la.dot(y, b) <= 0:
        raise SolverError("phase-1 witness failed verification")
    return FarkasResult("witness", y=yfull, tight=tight)


# -- rescaling to the cone ------------------------------------------------


def inner_d(cs: ConstraintSystem, u: Sequence, v: Sequence) -> Fraction:
    return sum((d * frac(a) * frac(b) for d, a, b in zip(cs.dims, u, v)), Fraction(0))


def normalize_to_cone(cs: ConstraintSystem, y: Sequence) -> tuple:
    """Scale y by <1,y>_d / |y|_d^2, the closest point to 1 on its ray."""
    y = la.vec(y)
    nsq = inner_d(cs, y, y)
    if nsq == 0:
        raise ValueError("cannot normalize the zero vector")
    s = inner_d(cs, (1,) * cs.n_vars, y)
    if s < 0:
        raise ValueError("<1, y>_d must be nonnegative")
    return tuple(s / nsq * x for x in y)


def f_signed_square(cs: ConstraintSystem, y: Sequence) -> Fraction:
    """sign(f) f^2 for f_d(y) = <1,y>_d / |y|_d, an exact ordering key."""
    y = la.vec(y)
    s = inner_d(cs, (1,) * cs.n_vars, y)
    q = s * s / inner_d(cs, y, y)
    return q if s >= 0 else -q


# -- brute-force oracle ---------------------------------------------------


def max_oracle_rows() -> int:
    return int(os.environ.get("CANFILT_MAX_ORACLE_ROWS", "20"))


class OracleTooLarge(ValueError):
    pass


def _int_reduce(v: Sequence[int], basis: Sequence) -> list:
    """Fraction-free reduction of an integer row against an echelon basis."""
    v = list(v)
    for p, b in basis:
        if v[p]:
            bp, vp = b[p], v[p]
            v = [bp * x - vp * y for x, y in zip(v, b)]
            g = 0
            for x in v:
                g = gcd(g, x)
            if g > 1:
                v = [x // g for x in v]
    return v


class _Flat:
    """A span-closed row set with its echelon basis.

    The equality-problem minimizer ``w`` and its objective are computed on
    first use, so duplicate flats met during the search cost only a span test.
    """

    __slots__ = ("members", "basis", "_red", "_w", "_obj")

    def __init__(self, red: "ConstraintSystem", basis: list):
        self.basis = basis
        self.members = frozenset(i for i, r in enumerate(red.rows) if not any(_int_reduce(r, basis)))
        self._red = red
        self._w = None

    @property
    def w(self) -> tuple:
        if self._w is None:
            red = self._red
            self._w, _ = _eqp([b for _, b in self.basis], red.dims, red.n_vars)
            self._obj = red.objective(self._w)
        return self._w

    @property
    def objective(self) -> Fraction:
        self.w
        return self._obj

    def __lt__(self, other):
        return sorted(self.members) < sorted(other.members)

    def extend(self, red: "ConstraintSystem", row: Sequence[int]) -> "_Flat":
        v = _int_reduce(row, self.basis)
        p = next(i for i, x in enumerate(v) if x)
        if v[p] < 0:
            v = [-x for x in v]
        return _Flat(red, sorted(self.basis + [(p, tuple(v))]))


def _children(red: "ConstraintSystem", flat: _Flat):
    for idx, r in enumerate(red.rows):
        if idx not in flat.members:
            yield flat.extend(red, r)


def _top_flat(red: "ConstraintSystem") -> _Flat:
    flat = _Flat(red, [])
    for idx, r in enumerate(red.rows):
        if idx not in flat.members:
            flat = flat.extend(red, r)
    return flat


def enumerate_flats(rows: Sequence) -> list:
    """Every set of rows closed under linear span, in breadth-first order."""
    n = len(rows[0]) if rows else 0
    red = ConstraintSystem(n, tuple(rows))
    root = _Flat(red, [])
    seen = {root.members}
    frontier, out = [root], [root.members]
    while frontier:
        nxt = []
        for flat in frontier:
            for child in _children(red, flat):
                if child.members not in seen:
                    seen.add(child.members)
                    nxt.append(child)
                    out.append(child.members)
        frontier = nxt
    return out


def _kkt_lambda(red: "ConstraintSystem", w) -> tuple | None:
    if not red.is_feasible(w):
        return None
    fk = farkas_certificate(red, w)
    return fk.lam if fk.kind == "lambda" else None


def enumerate_active_sets_oracle(
    cs: ConstraintSystem, max_rows: int | None = None, exhaustive: bool = False
) -> QpCertificate:
    """Brute-force search over candidate active sets, independent of ``solve``.

    Each subset S of rows gives the equality problem min g_d on {C_S w = 0};
    its minimizer depends only on the span of S, so one candidate per flat
    (span-closed row set) covers every subset.  A candidate survives when it
    is feasible and admits multipliers lambda >= 0 on its tight rows.

    Since g_d is strictly convex a survivor is the global minimizer, so by
    default the search stops at the first one: the flat of all rows is tried
    first, then flats in increasing order of objective (enlarging a flat can
    only raise it).  ``exhaustive=True`` visits every flat and checks that
    all survivors coincide.
    """
    limit = max_oracle_rows() if max_rows is None else max_rows
    if len(cs.rows) > limit:
        raise OracleTooLarge(f"oracle limited to {limit} rows, system has {len(cs.rows)}")
    red = cs.reduced()
    survivors: dict = {}
    if not exhaustive:
        top = _top_flat(red)
        lam = _kkt_lambda(red, top.w)
        if lam is not None:
            return make_certificate(cs, cs.expand(top.w), lam)
    root = _Flat(red, [])
    seen = {root.members}
    heap = [(root.objective, root)]
    best = None
    while heap:
        obj, flat = heapq.heappop(heap)
        if flat.w not in survivors:
            lam = _kkt_lambda(red, flat.w)
            if lam is not None:
                survivors[flat.w] = lam
                best = obj if best is None else min(best, obj)
                if not exhaustive:
                    break
        for child in _children(red, flat):
            if child.members not in seen:
                seen.add(child.members)
                heapq.heappush(heap, (child.objective, child))
    if len(survivors) != 1:
        raise SolverError(f"oracle found {len(survivors)} surviving candidates")
    (w, lam), = survivors.items()
    # rows of the reduced system line up with the full system's rows
    return make_certificate(cs, cs.expand(w), lam)

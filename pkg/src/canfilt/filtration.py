"""Weighted filtrations of algebras: adapted bases, flags, nu and Gr."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import total_ordering
from typing import Callable, Sequence

from . import linalg as la
from .algebra import Algebra, Grouping, change_of_basis
from .linalg import Subspace, frac


class IncompatibleFiltration(ValueError):
    pass


class TrivialFiltration(ValueError):
    """nu is undefined on the trivial filtration."""


class _Infinity:
    """Weight of the zero vector. Compares above every rational."""

    _inst = None

    def __new__(cls):
        if cls._inst is None:
            cls._inst = super().__new__(cls)
        return cls._inst

    def __repr__(self):
        return "INF"

    def __eq__(self, other):
        return other is self

    def __hash__(self):
        return hash("canfilt-inf")

    def __lt__(self, other):
        return False

    def __le__(self, other):
        return other is self

    def __gt__(self, other):
        return other is not self

    def __ge__(self, other):
        return True


INF = _Infinity()


def is_compatible(a: Algebra, weights: Sequence) -> bool:
    """Weight inequality: c_ij^k != 0 forces w_k >= w_i + w_j."""
    w = [frac(x) for x in weights]
    if len(w) != a.dim:
        raise ValueError("need one weight per basis vector")
    return all(w[k] >= w[i] + w[j] for i, j, k, _ in a.entries())


def _coordinate_order(rows) -> list | None:
    """Column of each row if the rows are distinct standard unit vectors."""
    order = []
    for r in rows:
        nz = [j for j, x in enumerate(r) if x]
        if len(nz) != 1 or r[nz[0]] != 1:
            return None
        order.append(nz[0])
    return order if len(set(order)) == len(order) else None


class AdaptedFiltration:
    """Weights on an adapted basis.

    ``basis`` holds the adapted basis as rows in the algebra's coordinates;
    ``None`` means the standard basis.  F_m is spanned by the basis vectors
    of weight >= m.
    """

    __slots__ = ("algebra", "weights", "basis", "_adapted")

    def __init__(self, algebra: Algebra, weights: Sequence, basis=None):
        self.algebra = algebra
        weights = la.vec(weights)
        if len(weights) != algebra.dim:
            raise ValueError("need one weight per basis vector")
        if basis is not None:
            basis = [la.vec(r) for r in basis]
            if len(basis) != algebra.dim:
                raise ValueError("adapted basis needs one row per basis vector")
            perm = _coordinate_order(basis)
            if perm is not None:
                # a reordering of the standard basis: store weights in standard order
                w = [None] * algebra.dim
                for idx, x in zip(perm, weights):
                    w[idx] = x
                weights, basis = tuple(w), None
        self.weights = weights
        self.basis = None if basis is None else tuple(basis)
        self._adapted = None

    def __repr__(self):
        return f"AdaptedFiltration({[la.format_frac(w) for w in self.weights]})"

    def __eq__(self, other):
        if not isinstance(other, AdaptedFiltration) or other.algebra.dim != self.algebra.dim:
            return False
        return to_flag(self) == to_flag(other)

    def __hash__(self):
        return hash(self.weights)

    def adapted_algebra(self) -> Algebra:
        """The algebra rewritten in the adapted basis."""
        if self.basis is None:
            return self.algebra
        if self._adapted is None:
            self._adapted = change_of_basis(self.algebra, self.basis)
        return self._adapted

    def basis_rows(self) -> list:
        return list(self.basis) if self.basis is not None else la.identity(self.algebra.dim)

    @property
    def is_trivial(self) -> bool:
        return not any(self.weights)

    def is_compatible(self) -> bool:
        return is_compatible(self.adapted_algebra(), self.weights)

    def scaled(self, c) -> "AdaptedFiltration":
        c = frac(c)
        if c <= 0:
            raise ValueError("scaling factor must be positive")
        return AdaptedFiltration(self.algebra, [c * w for w in self.weights], self.basis)

    def primitive(self) -> "AdaptedFiltration":
        return AdaptedFiltration(self.algebra, la.integer_primitive(self.weights), self.basis)

    def integer_weights(self) -> tuple:
        return la.integer_primitive(self.weights)

    def step(self, m) -> Subspace:
        """F_m = span of adapted basis vectors with weight >= m."""
        m = frac(m)
        rows = self.basis_rows()
        return Subspace(self.algebra.dim, [r for r, w in zip(rows, self.weights) if w >= m])

    def weight_function(self) -> "WeightFunction":
        return WeightFunction(self)


@dataclass(frozen=True)
class FlagFiltration:
    """Strictly decreasing subspaces G_(1) = A > G_(2) > ... with increasing weights."""

    algebra: Algebra
    steps: tuple  # ((Subspace, Fraction), ...)

    def __post_init__(self):
        steps = tuple((s, frac(w)) for s, w in self.steps)
        object.__setattr__(self, "steps", steps)
        d = self.algebra.dim
        if not steps or steps[0][0] != Subspace.full(d):
            raise ValueError("first flag step must be the whole algebra")
        for (s1, w1), (s2, w2) in zip(steps, steps[1:]):
            if not (w1 < w2):
                raise ValueError("flag weights must increase strictly")
            if not (s2 <= s1 and s2.dim < s1.dim):
                raise ValueError("flag subspaces must decrease strictly")
        if steps[-1][0].dim == 0:
            raise ValueError("the zero subspace is not a flag step")

    def __eq__(self, other):
        return isinstance(other, FlagFiltration) and self.steps == other.steps

    def __hash__(self):
        return hash(self.steps)

    @property
    def weights(self) -> tuple:
        return tuple(w for _, w in self.steps)

    def graded_dims(self) -> tuple:
        dims = [s.dim for s, _ in self.steps] + [0]
        return tuple(a - b for a, b in zip(dims, dims[1:]))

    def is_compatible(self) -> bool:
        """Weight condition: mu(G_i, G_j) lies in G_p for the least p with w_i + w_j <= w_p."""
        a = self.algebra
        zero = Subspace(a.dim)
        for i, (gi, wi) in enumerate(self.steps):
            for j, (gj, wj) in enumerate(self.steps):
                target = next((g for g, wp in self.steps if wi + wj <= wp), zero)
                if not a.product_space(gi, gj) <= target:
                    return False
        return True


def _check(a: Algebra, f) -> None:
    if f.algebra.dim != a.dim:
        raise ValueError("filtration belongs to an algebra of different dimension")
    if not f.is_compatible():
        raise IncompatibleFiltration("filtration does not satisfy the weight inequalities")


def weight_of(a: Algebra, f) -> Fraction:
    _check(a, f)
    if isinstance(f, FlagFiltration):
        return sum((w * n for w, n in zip(f.weights, f.graded_dims())), Fraction(0))
    return sum(f.weights, Fraction(0))


def norm_sq_of(a: Algebra, f) -> Fraction:
    _check(a, f)
    if isinstance(f, FlagFiltration):
        return sum((w * w * n for w, n in zip(f.weights, f.graded_dims())), Fraction(0))
    return sum((w * w for w in f.weights), Fraction(0))


@total_ordering
@dataclass(frozen=True, eq=False)
class NuValue:
    """nu = -wt / sqrt(norm_sq), kept as the exact pair (wt, norm_sq).

    Ordering and equality go through ``signed_square`` = sign(nu) * nu^2,
    which is monotone in nu and rational.
    """

    wt: Fraction
    norm_sq: Fraction

    def __post_init__(self):
        if self.norm_sq <= 0:
            raise TrivialFiltration("nu needs a filtration with positive norm")

    @property
    def signed_square(self) -> Fraction:
        wt = frac(self.wt)
        q = wt * wt / frac(self.norm_sq)
        return -q if wt > 0 else q

    def __eq__(self, other):
        return isinstance(other, NuValue) and self.signed_square == other.signed_square

    def __lt__(self, other):
        if not isinstance(other, NuValue):
            return NotImplemented
        return self.signed_square < other.signed_square

    def __hash__(self):
        return hash(self.signed_square)

    def __float__(self):
        return -float(self.wt) / float(self.norm_sq) ** 0.5

    @property
    def destabilizing(self) -> bool:
        return self.wt > 0


def nu(a: Algebra, f) -> NuValue:
    wt, nsq = weight_of(a, f), norm_sq_of(a, f)
    if nsq == 0:
        raise TrivialFiltration("nu is undefined on the trivial filtration")
    return NuValue(wt, nsq)


class WeightFunction:
    """w(v) = least weight among the adapted coordinates of v; w(0) = INF."""

    def __init__(self, f: AdaptedFiltration):
        self.filtration = f
        self._inv = None if f.basis is None else la.inverse(list(f.basis))

    def coordinates(self, v: Sequence) -> tuple:
        v = la.vec(v)
        return v if self._inv is None else la.vecmat(v, self._inv)

    def __call__(self, v: Sequence):
        coords = self.coordinates(v)
        ws = [w for c, w in zip(coords, self.filtration.weights) if c]
        return min(ws) if ws else INF


def to_weight_function(a: Algebra, f: AdaptedFiltration) -> WeightFunction:
    return WeightFunction(f)


def from_weight_function(a: Algebra, wf: Callable, basis=None) -> AdaptedFiltration:
    rows = [la.vec(r) for r in basis] if basis is not None else la.identity(a.dim)
    ws = []
    for r in rows:
        w = wf(r)
        if w is INF:
            raise ValueError("basis vector has infinite weight")
        ws.append(w)
    return AdaptedFiltration(a, ws, basis)


def to_flag(f: AdaptedFiltration) -> FlagFiltration:
    levels = sorted(set(f.weights))
    return FlagFiltration(f.algebra, tuple((f.step(w), w) for w in levels))


def from_flag(a: Algebra, flag: FlagFiltration) -> AdaptedFiltration:
    """Build an adapted basis from echelon bases of the flag steps."""
    d = a.dim
    pieces = []
    below = Subspace(d)
    for g, w in reversed(flag.steps):
        pieces.append((below.complement_basis(g), w))
        below = g
    rows, ws = [], []
    for vecs, w in reversed(pieces):
        rows.extend(vecs)
        ws.extend([w] * len(vecs))
    return AdaptedFiltration(a, ws, rows)


def split_filtration(a: Algebra) -> AdaptedFiltration:
    if a.grading is None:
        raise ValueError("algebra has no grading")
    if a.grading_rank != 1:
        raise ValueError("split filtration needs a Z-grading (rank 1)")
    return AdaptedFiltration(a, [g[0] for g in a.grading])


def _gr_grouping(src: Algebra, weights: Sequence) -> Grouping | None:
    g = src.grouping
    if g is None:
        if src.grading is None:
            return None
        comps = src.homogeneous_components()
        if any(len(v) > 1 for v in comps.values()):
            return None
        # each source degree is a one-dimensional torus weight space
        return Grouping.identity(src.dim, reason="inherited torus grading")
    keys = [(g.classes[i], weights[i]) for i in range(src.dim)]
    reason = g.reason or "inherited torus grading"
    return Grouping.from_keys(keys, reason=reason)


def associated_graded(a: Algebra, f: AdaptedFiltration) -> Algebra:
    """Gr(F) in the adapted basis, Z-graded by the weights.

    A product e_i e_j keeps only its components of weight exactly w_i + w_j.
    """
    _check(a, f)
    if any(w.denominator != 1 for w in f.weights):
        raise ValueError("associated graded needs integer weights; clear denominators first")
    src = f.adapted_algebra()
    w = [int(x) for x in f.weights]
    entries = [(i, j, k, c) for i, j, k, c in src.entries() if w[k] == w[i] + w[j]]
    grouping = _gr_grouping(src, w) if f.basis is None else None
    return Algebra(a.dim, a.kind, entries, src.labels, [(x,) for x in w], grouping)

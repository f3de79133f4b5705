"""Radicals, standard ideal series, centers and annihilators over Q."""
from __future__ import annotations

from fractions import Fraction

from . import linalg as la
from .algebra import Algebra, Kind
from .filtration import AdaptedFiltration, FlagFiltration, from_flag
from .linalg import Subspace


class RadicalCheckFailed(RuntimeError):
    """The a posteriori check on a computed radical did not pass."""


def _require(a: Algebra, kind: Kind) -> None:
    if a.kind is not kind:
        raise ValueError(f"expected a {kind.value} algebra, got {a.kind.value}")


def powers(a: Algebra, s: Subspace, limit: int | None = None) -> list:
    """s, s^2, s^3, ... up to the first repeat (s^m = s^(m+1))."""
    out = [s]
    limit = limit or a.dim + 1
    cur = s
    for _ in range(limit):
        nxt = a.product_space(cur, s)
        if nxt == cur:
            break
        out.append(nxt)
        cur = nxt
    return out


def is_nilpotent_ideal(a: Algebra, s: Subspace) -> bool:
    return a.is_ideal(s) and powers(a, s)[-1].dim == 0


def jacobson_radical(a: Algebra) -> Subspace:
    """J(A) as the kernel of the trace form (x, y) -> Tr(L_xy) on the unitization."""
    _require(a, Kind.ASSOCIATIVE)
    d = a.dim
    # traces of left multiplication on A# = A + Q.1; the unit sits at index d
    t = [Fraction(0)] * d
    for i, j, k, c in a.entries():
        if j == k:
            t[i] += c
    gram = [[Fraction(0)] * (d + 1) for _ in range(d + 1)]
    for (p, q), prod in a.table.items():
        gram[p][q] = sum((c * t[k] for k, c in prod), Fraction(0))
    for p in range(d):
        gram[p][d] = gram[d][p] = t[p]
    gram[d][d] = Fraction(d + 1)
    ker = Subspace(d + 1, la.nullspace(gram, d + 1)) & Subspace.coordinate(d + 1, range(d))
    j = Subspace(d, [r[:d] for r in ker.rows])
    if not is_nilpotent_ideal(a, j):
        raise RadicalCheckFailed("trace-form kernel is not a nilpotent ideal")
    return j


def killing_form(l: Algebra) -> list:
    d = l.dim
    ads = [l.left_matrix(la.unit(d, i)) for i in range(d)]
    form = [[Fraction(0)] * d for _ in range(d)]
    for i in range(d):
        for j in range(i, d):
            mi, mj = ads[i], ads[j]
            tr = Fraction(0)
            for p in range(d):
                row = mi[p]
                for q in range(d):
                    if row[q] and mj[q][p]:
                        tr += row[q] * mj[q][p]
            form[i][j] = form[j][i] = tr
    return form


def is_solvable(a: Algebra, s: Subspace) -> bool:
    return derived_series(a, s)[-1].dim == 0


def lie_radical(l: Algebra) -> Subspace:
    """Solvable radical: the Killing-orthogonal complement of [L, L]."""
    _require(l, Kind.LIE)
    d = l.dim
    full = Subspace.full(d)
    derived = l.product_space(full, full)
    kappa = killing_form(l)
    cons = [la.matvec(kappa, v) for v in derived.rows]
    rad = Subspace(d, la.nullspace(cons, d)) if cons else full
    if not (l.is_ideal(rad) and is_solvable(l, rad)):
        raise RadicalCheckFailed("Killing complement of [L,L] is not a solvable ideal")
    return rad


def radical(a: Algebra) -> Subspace:
    return jacobson_radical(a) if a.kind is Kind.ASSOCIATIVE else lie_radical(a)


def derived_series(a: Algebra, start: Subspace | None = None) -> list:
    """I, I.I, (I.I).(I.I), ... until it stabilizes."""
    cur = start if start is not None else Subspace.full(a.dim)
    out = [cur]
    for _ in range(a.dim + 1):
        nxt = a.product_space(cur, cur)
        if nxt == cur:
            break
        out.append(nxt)
        cur = nxt
    return out


def lower_central_series(a: Algebra) -> list:
    """A, A.A, A.(A.A), ... until it stabilizes."""
    full = Subspace.full(a.dim)
    cur = full
    out = [cur]
    for _ in range(a.dim + 1):
        nxt = a.product_space(full, cur)
        if nxt == cur:
            break
        out.append(nxt)
        cur = nxt
    return out


def _kernel_of(a: Algebra, maps) -> Subspace:
    """Common kernel of linear maps z -> f(z), each given on basis vectors."""
    d = a.dim
    cons = []
    for f in maps:
        images = [f(la.unit(d, i)) for i in range(d)]
        cons.extend(la.transpose(images))
    cons = [r for r in cons if any(r)]
    return Subspace(d, la.nullspace(cons, d)) if cons else Subspace.full(d)


def center(a: Algebra) -> Subspace:
    d = a.dim
    basis = [la.unit(d, j) for j in range(d)]
    if a.kind is Kind.LIE:
        maps = [lambda z, x=x: a.multiply(z, x) for x in basis]
    else:
        maps = [lambda z, x=x: la.sub(a.multiply(z, x), a.multiply(x, z)) for x in basis]
    return _kernel_of(a, maps)


def annihilator(a: Algebra) -> Subspace:
    d = a.dim
    basis = [la.unit(d, j) for j in range(d)]
    maps = [lambda z, x=x: a.multiply(z, x) for x in basis]
    maps += [lambda z, x=x: a.multiply(x, z) for x in basis]
    return _kernel_of(a, maps)


def is_semistable(a: Algebra) -> bool:
    return radical(a).dim == 0


def destabilizing_witness(a: Algebra) -> AdaptedFiltration | None:
    """A filtration with wt > 0, or None when the algebra is semisimple.

    Associative: the radical-adic filtration F_m = J^m.  Lie: weight 1 on the
    last nonzero term of the derived series of the radical (an abelian ideal).
    """
    if a.kind is Kind.ASSOCIATIVE:
        j = jacobson_radical(a)
        if j.dim == 0:
            return None
        steps = []
        for m, s in enumerate([Subspace.full(a.dim)] + powers(a, j)):
            if s.dim == 0:
                break
            if steps and steps[-1][0] == s:
                steps.pop()
            steps.append((s, m))
        return from_flag(a, FlagFiltration(a, tuple(steps)))
    rad = lie_radical(a)
    if rad.dim == 0:
        return None
    ideal = [s for s in derived_series(a, rad) if s.dim][-1]
    full = Subspace.full(a.dim)
    steps = ((full, 0), (ideal, 1)) if ideal != full else ((full, 1),)
    return from_flag(a, FlagFiltration(a, steps))

"""Exact linear algebra over the rationals.

Matrices are lists of rows, rows are sequences of ``Fraction``.  Everything
here is small and dense; the algebras we handle have dimension well below a
hundred, so plain Gaussian elimination is fast enough and keeps all
arithmetic exact.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence

Vector = tuple  # tuple of Fraction
Matrix = list  # list of rows


def frac(x) -> Fraction:
    """Coerce ints, Fractions and ``"p/q"`` strings to ``Fraction``."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x.strip())
    raise TypeError(f"cannot interpret {x!r} as an exact rational")


def format_frac(x: Fraction) -> str:
    x = frac(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def vec(xs: Iterable) -> Vector:
    return tuple(frac(x) for x in xs)


def zeros(n: int) -> Vector:
    return (Fraction(0),) * n


def unit(n: int, i: int) -> Vector:
    v = [Fraction(0)] * n
    v[i] = Fraction(1)
    return tuple(v)


def identity(n: int) -> Matrix:
    return [unit(n, i) for i in range(n)]


def dot(u: Sequence, v: Sequence) -> Fraction:
    return sum((a * b for a, b in zip(u, v) if a and b), Fraction(0))


def add(u: Sequence, v: Sequence) -> Vector:
    return tuple(a + b for a, b in zip(u, v))


def sub(u: Sequence, v: Sequence) -> Vector:
    return tuple(a - b for a, b in zip(u, v))


def scale(c, u: Sequence) -> Vector:
    c = frac(c)
    return tuple(c * a for a in u)


def is_zero(u: Sequence) -> bool:
    return not any(u)


def transpose(m: Sequence[Sequence]) -> Matrix:
    if not m:
        return []
    return [tuple(col) for col in zip(*m)]


def matmul(a: Sequence[Sequence], b: Sequence[Sequence]) -> Matrix:
    bt = transpose(b)
    return [tuple(dot(row, col) for col in bt) for row in a]


def matvec(a: Sequence[Sequence], v: Sequence) -> Vector:
    return tuple(dot(row, v) for row in a)


def vecmat(v: Sequence, a: Sequence[Sequence]) -> Vector:
    """Row vector times matrix."""
    if not a:
        return ()
    out = [Fraction(0)] * len(a[0])
    for c, row in zip(v, a):
        if c:
            for j, x in enumerate(row):
                if x:
                    out[j] += c * x
    return tuple(out)


def rref(m: Sequence[Sequence], ncols: int | None = None) -> tuple[Matrix, list[int]]:
    """Reduced row echelon form and pivot columns. Zero rows are dropped."""
    rows = [list(map(frac, r)) for r in m]
    if ncols is None:
        ncols = len(rows[0]) if rows else 0
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        p = next((i for i in range(r, len(rows)) if rows[i][c] != 0), None)
        if p is None:
            continue
        rows[r], rows[p] = rows[p], rows[r]
        inv = 1 / rows[r][c]
        rows[r] = [x * inv for x in rows[r]]
        pr = rows[r]
        for i in range(len(rows)):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [a - f * b for a, b in zip(rows[i], pr)]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    return [tuple(x) for x in rows[:r]], pivots


def span_rref(vectors: Iterable[Sequence], ncols: int) -> tuple[Matrix, list[int]]:
    """Reduced echelon basis of the span, built incrementally on sparse rows.

    Suited to many mostly-zero or redundant vectors (products of basis
    vectors and the like), where dense elimination would be wasteful.
    """
    piv_rows: dict[int, dict[int, Fraction]] = {}
    for v in vectors:
        # dict vectors are taken as already sparse {column: Fraction}
        r = dict(v) if isinstance(v, dict) else {j: frac(x) for j, x in enumerate(v) if x}
        while r:
            c = min(r)
            pr = piv_rows.get(c)
            if pr is None:
                inv = 1 / r[c]
                piv_rows[c] = {j: x * inv for j, x in r.items()}
                break
            f = r[c]
            for j, x in pr.items():
                y = r.get(j, 0) - f * x
                if y:
                    r[j] = y
                else:
                    r.pop(j, None)
        if len(piv_rows) == ncols:
            break
    order = sorted(piv_rows)
    # back substitution to reduced form, last pivot first
    for c in reversed(order):
        pr = piv_rows[c]
        for c2 in order:
            if c2 >= c:
                break
            r = piv_rows[c2]
            f = r.get(c)
            if f:
                for j, x in pr.items():
                    y = r.get(j, 0) - f * x
                    if y:
                        r[j] = y
                    else:
                        r.pop(j, None)
    zero = Fraction(0)
    rows = []
    for c in order:
        dense = [zero] * ncols
        for j, x in piv_rows[c].items():
            dense[j] = x
        rows.append(tuple(dense))
    return rows, order


def rank(m: Sequence[Sequence]) -> int:
    return len(rref(m)[0])


def nullspace(m: Sequence[Sequence], ncols: int) -> Matrix:
    """Basis of {x : m x = 0}, one basis vector per free column."""
    red, pivots = rref(m, ncols)
    free = [c for c in range(ncols) if c not in set(pivots)]
    basis = []
    for f in free:
        x = [Fraction(0)] * ncols
        x[f] = Fraction(1)
        for row, p in zip(red, pivots):
            x[p] = -row[f]
        basis.append(tuple(x))
    return basis


def solve(a: Sequence[Sequence], b: Sequence) -> Vector:
    """Solve the square nonsingular system a x = b."""
    n = len(a)
    aug = [list(map(frac, row)) + [frac(bi)] for row, bi in zip(a, b)]
    red, pivots = rref(aug, n + 1)
    if pivots != list(range(n)):
        raise ValueError("singular system")
    return tuple(row[n] for row in red)


def solve_int(a: Sequence[Sequence[int]], b: Sequence[int]) -> Vector:
    """Solve a square nonsingular integer system by fraction-free elimination."""
    n = len(a)
    m = [list(row) + [bi] for row, bi in zip(a, b)]
    prev = 1
    for k in range(n):
        p = next((i for i in range(k, n) if m[i][k]), None)
        if p is None:
            raise ValueError("singular system")
        m[k], m[p] = m[p], m[k]
        pk = m[k]
        for i in range(k + 1, n):
            mi = m[i]
            f = mi[k]
            m[i] = [(pk[k] * mi[j] - f * pk[j]) // prev if j > k else 0 for j in range(n + 1)]
        prev = pk[k]
    x = [Fraction(0)] * n
    for k in range(n - 1, -1, -1):
        s = Fraction(m[k][n])
        for j in range(k + 1, n):
            if m[k][j]:
                s -= m[k][j] * x[j]
        x[k] = s / m[k][k]
    return tuple(x)


def inverse(a: Sequence[Sequence]) -> Matrix:
    n = len(a)
    if any(len(row) != n for row in a):
        raise ValueError("matrix is not square")
    aug = [list(map(frac, row)) + list(unit(n, i)) for i, row in enumerate(a)]
    red, pivots = rref(aug, 2 * n)
    if pivots[:n] != list(range(n)) or len(red) < n:
        raise ValueError("matrix is singular")
    return [tuple(row[n:]) for row in red]


def integer_primitive(v: Sequence) -> tuple[int, ...]:
    """Scale a rational vector to coprime integers, preserving signs."""
    from math import gcd, lcm

    v = [frac(x) for x in v]
    if not any(v):
        return tuple(0 for _ in v)
    den = 1
    for x in v:
        den = lcm(den, x.denominator)
    ints = [int(x * den) for x in v]
    g = 0
    for x in ints:
        g = gcd(g, abs(x))
    return tuple(x // g for x in ints)


class Subspace:
    """A subspace of Q^n stored by its reduced row echelon basis.

    Two equal subspaces have identical ``rows``; equality and hashing use it.
    """

    __slots__ = ("ambient_dim", "rows", "pivots")

    def __init__(self, ambient_dim: int, vectors: Iterable[Sequence] = ()):
        def checked():
            for v in vectors:
                if len(v) != ambient_dim:
                    raise ValueError("vector length does not match ambient dimension")
                yield v

        red, piv = span_rref(checked(), ambient_dim)
        self.ambient_dim = ambient_dim
        self.rows = tuple(red)
        self.pivots = tuple(piv)

    @classmethod
    def from_sparse(cls, n: int, vectors: Iterable[dict]) -> "Subspace":
        """Span of sparse vectors {column: Fraction} with columns in range(n)."""
        out = cls.__new__(cls)
        red, piv = span_rref(vectors, n)
        out.ambient_dim = n
        out.rows = tuple(red)
        out.pivots = tuple(piv)
        return out

    @classmethod
    def zero(cls, n: int) -> "Subspace":
        return cls(n)

    @classmethod
    def full(cls, n: int) -> "Subspace":
        return cls(n, identity(n))

    @classmethod
    def coordinate(cls, n: int, indices: Iterable[int]) -> "Subspace":
        return cls(n, [unit(n, i) for i in indices])

    @property
    def dim(self) -> int:
        return len(self.rows)

    def __len__(self) -> int:
        return self.dim

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Subspace)
            and self.ambient_dim == other.ambient_dim
            and self.rows == other.rows
        )

    def __hash__(self) -> int:
        return hash((self.ambient_dim, self.rows))

    def __repr__(self) -> str:
        return f"Subspace(dim={self.dim}, ambient={self.ambient_dim})"

    def contains(self, v: Sequence) -> bool:
        v = list(vec(v))
        for row, p in zip(self.rows, self.pivots):
            if v[p]:
                c = v[p]
                v = [a - c * b for a, b in zip(v, row)]
        return not any(v)

    def __contains__(self, v) -> bool:
        return self.contains(v)

    def issubspace(self, other: "Subspace") -> bool:
        return all(other.contains(r) for r in self.rows)

    def __le__(self, other: "Subspace") -> bool:
        return self.issubspace(other)

    def __add__(self, other: "Subspace") -> "Subspace":
        return Subspace(self.ambient_dim, list(self.rows) + list(other.rows))

    def intersect(self, other: "Subspace") -> "Subspace":
        n = self.ambient_dim
        if self.dim == 0 or other.dim == 0:
            return Subspace(n)
        # x in self with x . a = 0 for every a in the annihilator of other
        ann = nullspace(other.rows, n)
        if not ann:
            return self
        m = [tuple(dot(r, a) for r in self.rows) for a in ann]
        coeffs = nullspace(m, self.dim)
        return Subspace(n, [vecmat(c, self.rows) for c in coeffs])

    def __and__(self, other: "Subspace") -> "Subspace":
        return self.intersect(other)

    def complement_basis(self, inside: "Subspace | None" = None) -> Matrix:
        """Vectors extending this basis to a basis of ``inside`` (default Q^n).

        Candidates are taken from the echelon rows of ``inside`` in order, so
        coordinate subspaces get coordinate complements.
        """
        inside = inside if inside is not None else Subspace.full(self.ambient_dim)
        if not self.issubspace(inside):
            raise ValueError("subspace is not contained in the target")
        chosen: list[Vector] = []
        current = self
        for r in inside.rows:
            if not current.contains(r):
                chosen.append(r)
                current = Subspace(self.ambient_dim, list(current.rows) + [r])
        return chosen

    def coordinates(self, v: Sequence) -> Vector:
        """Coordinates of v in the echelon basis (v must lie in the subspace)."""
        v = vec(v)
        c = tuple(v[p] for p in self.pivots)
        if vecmat(c, self.rows) != v:
            raise ValueError("vector is not in the subspace")
        return c

    def image(self, p: Sequence[Sequence]) -> "Subspace":
        """Image under the row-vector map x -> x p."""
        return Subspace(len(p[0]) if p else 0, [vecmat(r, p) for r in self.rows])

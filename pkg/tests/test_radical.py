import pytest

from canfilt import builders as b
from canfilt.algebra import direct_sum, quotient, restrict
from canfilt.canonical import canonical_filtration
from canfilt.filtration import nu, weight_of
from canfilt.linalg import Subspace
from canfilt.radical import (
    annihilator,
    center,
    derived_series,
    destabilizing_witness,
    is_nilpotent_ideal,
    is_semistable,
    is_solvable,
    jacobson_radical,
    killing_form,
    lie_radical,
    lower_central_series,
    radical,
)

from strategies import small_graded


def test_jacobson_examples():
    assert jacobson_radical(b.full_matrix(2)).dim == 0
    assert jacobson_radical(b.truncated_poly(1, 3)) == Subspace.coordinate(3, [1, 2])
    ut = b.upper_triangular(2)  # E11, E12, E22
    assert jacobson_radical(ut) == Subspace.coordinate(3, [1])
    with pytest.raises(ValueError):
        jacobson_radical(b.sl2())


def test_jacobson_non_unital():
    # span(x, x^2, x^3) inside k[x]/(x^4): nilpotent, so J is everything
    a = b.truncated_poly(1, 4)
    n = restrict(a, Subspace.coordinate(4, [1, 2, 3]))
    assert jacobson_radical(n) == Subspace.full(3)


def test_jacobson_radical_properties():
    for a in [b.truncated_poly(2, 3), b.block_triangular([1, 2]), b.upper_triangular(4),
              b.monomial_quotient(2, [(2, 0), (0, 2)])]:
        j = jacobson_radical(a)
        assert a.is_ideal(j) and is_nilpotent_ideal(a, j)
        q = quotient(a, j)
        assert q is None or jacobson_radical(q).dim == 0


def test_lie_radical_examples():
    assert lie_radical(b.sl2()).dim == 0
    assert lie_radical(b.abelian(3)) == Subspace.full(3)
    assert lie_radical(b.nonabelian2()) == Subspace.full(2)
    s = direct_sum(b.sl2(), b.heisenberg())
    r = lie_radical(s)
    assert r == Subspace.coordinate(6, [3, 4, 5])
    assert s.is_ideal(r) and is_solvable(s, r)
    assert lie_radical(quotient(s, r)).dim == 0
    with pytest.raises(ValueError):
        lie_radical(b.truncated_poly(1, 2))


def test_killing_form_sl2():
    k = killing_form(b.sl2())  # basis h, e, f
    assert [list(r) for r in k] == [[8, 0, 0], [0, 0, 4], [0, 4, 0]]


def test_series_examples():
    ab = b.abelian(2)
    assert [s.dim for s in derived_series(ab)] == [2, 0]
    assert [s.dim for s in lower_central_series(b.model_filiform(3))] == [4, 2, 1, 0]
    h = b.heisenberg()
    series = derived_series(h)
    assert [s.dim for s in series] == [3, 1, 0]
    assert series[1] == Subspace.coordinate(3, [2])


def test_center_and_annihilator():
    # the non-unital span(x, x^2) of k[x]/(x^3)
    n = restrict(b.truncated_poly(1, 3), Subspace.coordinate(3, [1, 2]))
    assert annihilator(n) == Subspace.coordinate(2, [1])
    mat = b.full_matrix(2)  # E11, E12, E21, E22
    assert center(mat) == Subspace(4, [[1, 0, 0, 1]])
    for a in (mat, b.truncated_poly(1, 4), b.upper_triangular(3)):
        assert annihilator(a).dim == 0
    assert center(b.heisenberg()) == Subspace.coordinate(3, [2])


def test_semistability_examples():
    assert is_semistable(b.full_matrix(3))
    assert not is_semistable(b.truncated_poly(1, 2))
    assert not is_semistable(b.abelian(1))
    assert is_semistable(b.sl2())


def test_destabilizing_witness():
    for a in [b.truncated_poly(1, 3), b.upper_triangular(3), b.abelian(3), b.heisenberg(),
              b.nonabelian2(), direct_sum(b.sl2(), b.abelian(1)), b.model_filiform(4)]:
        f = destabilizing_witness(a)
        assert f.is_compatible()
        assert weight_of(a, f) > 0 and nu(a, f).destabilizing
    assert destabilizing_witness(b.full_matrix(2)) is None
    # J = A: nilpotent algebra with J^1 = A
    n = restrict(b.truncated_poly(1, 4), Subspace.coordinate(4, [1, 2, 3]))
    assert weight_of(n, destabilizing_witness(n)) > 0


def test_semistability_agrees_with_canonical():
    for a in small_graded():
        assert is_semistable(a) == canonical_filtration(a).is_trivial


def test_radical_dispatch():
    assert radical(b.sl2()).dim == 0
    assert radical(b.truncated_poly(1, 3)).dim == 2

from fractions import Fraction as F

import pytest
from hypothesis import given, strategies as st

from canfilt import builders as b
from canfilt import linalg as la
from canfilt.algebra import (
    Algebra,
    Grouping,
    Kind,
    change_of_basis,
    check_grading,
    direct_sum,
    dumps,
    from_json_dict,
    loads,
    quotient,
    restrict,
    to_json_dict,
    validate,
)
from canfilt.canonical import canonical_filtration, verify_canonical
from canfilt.filtration import AdaptedFiltration, nu
from canfilt.linalg import Subspace

from strategies import small_graded, unimodular

X3 = b.truncated_poly(1, 3)


def test_truncated_poly_valid():
    assert validate(X3) == []


def test_alternating_violation_message():
    a = Algebra(3, Kind.LIE, [(1, 1, 2, 1)])
    msgs = [v.message for v in validate(a)]
    assert "alternating fails at (1,1)" in msgs


def test_antisymmetry_and_jacobi_violations():
    a = Algebra(2, Kind.LIE, [(0, 1, 1, 1)])
    assert [v.kind for v in validate(a)] == ["antisymmetry"]
    # [x,y]=y, [x,z]=y, [y,z]=x breaks Jacobi
    bad = Algebra(3, "lie", [(0, 1, 1, 1), (1, 0, 1, -1), (1, 2, 0, 1), (2, 1, 0, -1)])
    assert any(v.kind == "jacobi" for v in validate(bad))


def test_associativity_violation():
    # e0 e0 = e1, e1 e0 = e0 is not associative
    a = Algebra(2, "associative", [(0, 0, 1, 1), (1, 0, 0, 1)])
    assert any(v.kind == "associativity" for v in validate(a))


def test_grading_violation():
    a = Algebra(2, "associative", [(0, 0, 1, 1)], grading=[(1,), (1,)])
    assert [v.kind for v in validate(a)] == ["grading"]
    assert not check_grading(a)


def test_filiform_m3_valid():
    assert validate(b.model_filiform(3)) == []


def test_index_bounds_checked():
    with pytest.raises(ValueError):
        Algebra(2, "associative", [(0, 2, 0, 1)])


def test_multiply_examples():
    assert X3.multiply([0, 1, 0], [0, 1, 0]) == (0, 0, 1)
    m = b.model_filiform(4)
    assert not any(m.multiply(la.unit(5, 1), la.unit(5, 2)))
    mat = b.full_matrix(2)
    e11, e12 = la.unit(4, 0), la.unit(4, 1)
    assert mat.multiply(e11, e12) == tuple(e12)
    with pytest.raises(ValueError):
        X3.multiply([1, 0], [1, 0, 0])


vec3 = st.lists(st.integers(-5, 5), min_size=3, max_size=3)


@given(vec3, vec3, vec3, st.integers(-3, 3), st.integers(-3, 3))
def test_multiply_bilinear(u, u2, v, al, be):
    a = b.heisenberg()
    lhs = a.multiply(la.add(la.scale(al, u), la.scale(be, u2)), v)
    rhs = la.add(la.scale(al, a.multiply(u, v)), la.scale(be, a.multiply(u2, v)))
    assert lhs == rhs
    lhs = X3.multiply(v, la.add(la.scale(al, u), la.scale(be, u2)))
    rhs = la.add(la.scale(al, X3.multiply(v, u)), la.scale(be, X3.multiply(v, u2)))
    assert lhs == rhs


def test_direct_sum_blocks():
    x2 = b.truncated_poly(1, 2)
    s = direct_sum(x2, x2)
    assert s.dim == 4 and validate(s) == []
    assert restrict(s, Subspace.coordinate(4, [0, 1])).table == x2.table
    assert restrict(s, Subspace.coordinate(4, [2, 3])).table == x2.table
    assert s.grading_rank == 2


def test_direct_sum_abelian_and_semisimple():
    s = direct_sum(b.abelian(2), b.abelian(1))
    assert s.kind is Kind.LIE and s.nnz == 0
    from canfilt.radical import radical
    t = direct_sum(b.full_matrix(2), b.field())
    assert t.dim == 5 and validate(t) == [] and radical(t).dim == 0
    with pytest.raises(ValueError):
        direct_sum(b.sl2(), X3)


def test_change_of_basis_identity_and_permutation():
    assert change_of_basis(X3, la.identity(3)) == X3
    # swap x and x^2: new e1 = x^2, e2 = x, so e2 * e2 = e1
    p = [[1, 0, 0], [0, 0, 1], [0, 1, 0]]
    c = change_of_basis(X3, p)
    assert c.basis_product(2, 2) == ((1, F(1)),)
    assert c.labels == ("1", "x^2", "x")
    with pytest.raises(ValueError):
        change_of_basis(X3, [[1, 0, 0], [0, 1, 0], [0, 1, 0]])


@given(st.sampled_from(small_graded()), st.data())
def test_change_of_basis_preserves_validity(a, data):
    if a.dim > 6:
        return
    p = data.draw(unimodular(a.dim))
    assert validate(change_of_basis(a, p)) == []


@given(unimodular(4))
def test_change_of_basis_keeps_the_canonical_nu(p):
    # M_3 in a scrambled basis: the transported canonical filtration has the
    # same nu and is still certified canonical
    m3 = b.model_filiform(3)
    res = canonical_filtration(m3)
    c = change_of_basis(m3, p)
    pinv = la.inverse(p)
    f = AdaptedFiltration(c, res.filtration.weights, pinv)
    assert nu(c, f) == res.nu
    assert verify_canonical(c, f)


def test_graded_builders_pass_grading_check():
    for a in (b.monomial_quotient(2, [(2, 0), (0, 3)]), b.sl_nilpotent(4), b.block_triangular([2, 1, 1])):
        assert a.grading is not None and check_grading(a)


def test_grouping_from_keys():
    g = Grouping.from_keys(["b", "a", "b"], pinned_keys=["a"], reason="r")
    assert g.classes == (0, 1, 0) and g.pinned == {1} and g.sizes == (2, 1)
    assert Grouping.from_json(g.to_json()) == g
    with pytest.raises(ValueError):
        Grouping((0, 2), frozenset())


def test_json_round_trip():
    for a in small_graded():
        assert loads(dumps(a)) == a
        assert loads(dumps(a)).grading == a.grading


def test_json_lie_completes_antisymmetry():
    obj = {"dim": 3, "kind": "lie", "table": [[0, 1, 2, "1"]]}
    a = from_json_dict(obj)
    assert a == b.heisenberg()
    assert to_json_dict(a)["table"] == [[0, 1, 2, "1"], [1, 0, 2, "-1"]]


def test_json_errors():
    with pytest.raises(ValueError):
        from_json_dict({"kind": "lie"})
    with pytest.raises(ValueError):
        from_json_dict({"dim": 1, "kind": "jordan"})
    with pytest.raises(ValueError):
        from_json_dict({"dim": 1, "kind": "lie", "table": [[0, 0, "x"]]})
    with pytest.raises(ValueError):
        from_json_dict({"dim": 1, "kind": "lie", "table": [[0, 0, 0, "1/0"]]})


def test_restrict_and_quotient():
    j = Subspace.coordinate(3, [1, 2])
    sub = restrict(X3, j)
    assert sub.dim == 2 and sub.basis_product(0, 0) == ((1, F(1)),)
    q = quotient(X3, Subspace.coordinate(3, [2]))
    assert q == b.truncated_poly(1, 2)
    assert restrict(X3, Subspace.zero(3)) is None

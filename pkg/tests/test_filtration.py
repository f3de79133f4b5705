from fractions import Fraction as F

import pytest
from hypothesis import given, strategies as st

from canfilt import builders as b
from canfilt import linalg as la
from canfilt.algebra import check_grading, direct_sum, validate
from canfilt.filtration import (
    INF,
    AdaptedFiltration,
    FlagFiltration,
    IncompatibleFiltration,
    NuValue,
    TrivialFiltration,
    associated_graded,
    from_flag,
    from_weight_function,
    is_compatible,
    norm_sq_of,
    nu,
    split_filtration,
    to_flag,
    to_weight_function,
    weight_of,
)
from canfilt.linalg import Subspace

from strategies import small_graded

X3 = b.truncated_poly(1, 3)
X5 = b.truncated_poly(1, 5)
EX63 = b.monomial_quotient(2, [(4, 0), (2, 1), (1, 2), (0, 4)])
EX63_W = {"1": 0, "x": 3, "x^2": 6, "x^3": 9, "y": 3, "y^2": 6, "y^3": 9, "xy": 7}


def ex63_filtration():
    return AdaptedFiltration(EX63, [EX63_W[l] for l in EX63.labels])


def test_weight_and_norm_examples():
    assert weight_of(X5, AdaptedFiltration(X5, [0] * 5)) == 0
    f = AdaptedFiltration(X5, range(5))
    assert weight_of(X5, f) == 10 and norm_sq_of(X5, f) == 30
    ut = b.upper_triangular(3)
    g = AdaptedFiltration(ut, [j - i for i, j in ((1, 1), (1, 2), (1, 3), (2, 2), (2, 3), (3, 3))])
    assert weight_of(ut, g) == 4
    assert norm_sq_of(X5, f.scaled(3)) == 9 * 30


def test_incompatible_filtration_errors():
    f = AdaptedFiltration(X3, [0, 2, 1])
    with pytest.raises(IncompatibleFiltration):
        weight_of(X3, f)
    with pytest.raises(IncompatibleFiltration):
        nu(X3, f)


def test_nu_examples():
    x2 = b.truncated_poly(1, 2)
    v = nu(x2, AdaptedFiltration(x2, [0, 1]))
    assert v == NuValue(F(1), F(1)) and float(v) == -1.0
    ab = b.abelian(4)
    v = nu(ab, AdaptedFiltration(ab, [1] * 4))
    assert (v.wt, v.norm_sq) == (4, 4) and v.signed_square == -4 and float(v) == -2.0
    with pytest.raises(TrivialFiltration):
        nu(X3, AdaptedFiltration(X3, [0, 0, 0]))


def test_nu_ordering():
    a = NuValue(F(1), F(1))  # nu = -1
    c = NuValue(F(-1), F(4))  # nu = 1/2
    d = NuValue(F(3), F(4))  # nu = -3/2
    assert d < a < c
    assert NuValue(F(2), F(4)) == NuValue(F(1), F(1))
    assert a.destabilizing and not c.destabilizing


@given(st.sampled_from(small_graded()), st.data())
def test_nu_scale_invariance(a, data):
    if a.grading is None or a.grading_rank != 1:
        return
    f = split_filtration(a)
    if f.is_trivial or not f.is_compatible():
        return
    c = data.draw(st.sampled_from([2, 3, 5]))
    assert nu(a, f.scaled(c)) == nu(a, f)


def test_is_compatible_examples():
    assert is_compatible(X3, [0, 0, 0])
    assert is_compatible(X3, [0, 1, 2])
    assert not is_compatible(X3, [0, 2, 1])
    with pytest.raises(ValueError):
        is_compatible(X3, [0, 1])


def test_weight_function():
    wf = to_weight_function(X3, AdaptedFiltration(X3, [0, 1, 2]))
    assert wf([0, 0, 0]) is INF
    assert wf([1, 0, 1]) == 0
    assert wf([0, 1, 1]) == 1
    f = from_weight_function(X3, wf)
    assert f.weights == (0, 1, 2)


def test_weight_function_nonstandard_basis():
    basis = [[1, 0, 0], [0, 1, 1], [0, 0, 1]]
    f = AdaptedFiltration(X3, [0, 1, 2], basis)
    wf = to_weight_function(X3, f)
    assert wf([0, 1, 0]) == 1  # x = (x + x^2) - x^2
    assert from_weight_function(X3, wf, basis) == f


def test_to_flag_examples():
    flag = to_flag(AdaptedFiltration(X3, [0, 0, 0]))
    assert flag.weights == (0,) and flag.steps[0][0] == Subspace.full(3)
    flag = to_flag(AdaptedFiltration(X3, [0, 1, 2]))
    assert flag.weights == (0, 1, 2)
    assert [s.dim for s, _ in flag.steps] == [3, 2, 1]
    assert flag.steps[2][0] == Subspace.coordinate(3, [2])
    assert flag.is_compatible()


def test_flag_of_staircase_quotient():
    f = ex63_filtration()
    back = from_flag(EX63, to_flag(f))
    wf = back.weight_function()
    for i, lab in enumerate(EX63.labels):
        assert wf(la.unit(8, i)) == EX63_W[lab]
    assert weight_of(EX63, back) == weight_of(EX63, f) == 43


def test_flag_validation():
    with pytest.raises(ValueError):
        FlagFiltration(X3, ((Subspace.coordinate(3, [1, 2]), 0),))
    with pytest.raises(ValueError):
        FlagFiltration(X3, ((Subspace.full(3), 1), (Subspace.coordinate(3, [2]), 1)))
    bad = FlagFiltration(X3, ((Subspace.full(3), 0), (Subspace.coordinate(3, [1, 2]), 2), (Subspace.coordinate(3, [2]), 3)))
    assert not bad.is_compatible()


@given(st.sampled_from(small_graded()), st.data())
def test_flag_round_trip(a, data):
    w = data.draw(st.lists(st.integers(0, 4), min_size=a.dim, max_size=a.dim))
    f = AdaptedFiltration(a, w)
    back = from_flag(a, to_flag(f))
    assert back == f
    assert sorted(back.weights) == sorted(f.weights)
    if f.is_compatible():
        assert weight_of(a, back) == weight_of(a, f)
        assert norm_sq_of(a, back) == norm_sq_of(a, f)


def test_split_filtration():
    assert split_filtration(X5).weights == (0, 1, 2, 3, 4)
    with pytest.raises(ValueError):
        split_filtration(EX63)
    with pytest.raises(ValueError):
        split_filtration(b.full_matrix(2).replace(grading=None))


def test_gr_of_split_is_the_same_algebra():
    gr = associated_graded(X5, split_filtration(X5))
    assert gr.table == X5.table


def test_gr_truncates_jumps():
    gr = associated_graded(X3, AdaptedFiltration(X3, [0, 1, 3]))
    assert not any(gr.multiply([0, 1, 0], [0, 1, 0]))
    assert gr.grading == ((0,), (1,), (3,))
    with pytest.raises(IncompatibleFiltration):
        associated_graded(X3, AdaptedFiltration(X3, [0, 1, 1]))
    with pytest.raises(ValueError):
        associated_graded(X3, AdaptedFiltration(X3, [0, F(1, 2), 1]))


def test_gr_of_staircase_quotient():
    gr = associated_graded(EX63, ex63_filtration())
    lab = {l: i for i, l in enumerate(EX63.labels)}
    xy = la.unit(8, lab["xy"])
    for l in EX63.labels[1:]:
        assert not any(gr.multiply(xy, la.unit(8, lab[l])))
    # x*y = xy drops out because w(xy) = 7 > 6
    assert not any(gr.multiply(la.unit(8, lab["x"]), la.unit(8, lab["y"])))
    assert gr.multiply(la.unit(8, lab["x"]), la.unit(8, lab["x"])) == la.unit(8, lab["x^2"])


@given(st.sampled_from(small_graded()), st.data())
def test_gr_is_valid(a, data):
    # random compatible weights: positive combinations of lattice gradings plus slack
    w = data.draw(st.lists(st.integers(0, 6), min_size=a.dim, max_size=a.dim))
    for _ in range(a.dim):
        changed = False
        for i, j, k, _c in a.entries():
            if w[k] < w[i] + w[j]:
                w[k] = w[i] + w[j]
                changed = True
        if not changed:
            break
    if not is_compatible(a, w):
        return
    gr = associated_graded(a, AdaptedFiltration(a, w))
    assert validate(gr) == [] and check_grading(gr)


def test_direct_sum_additivity():
    a1, a2 = b.truncated_poly(1, 3), b.truncated_poly(1, 4)
    f1, f2 = AdaptedFiltration(a1, [0, 1, 2]), AdaptedFiltration(a2, [0, 2, 4, 6])
    s = direct_sum(a1, a2)
    fs = AdaptedFiltration(s, list(f1.weights) + list(f2.weights))
    assert weight_of(s, fs) == weight_of(a1, f1) + weight_of(a2, f2)
    assert norm_sq_of(s, fs) == norm_sq_of(a1, f1) + norm_sq_of(a2, f2)


def test_permuted_standard_basis_is_normalized():
    f = AdaptedFiltration(X3, [2, 0, 1], [[0, 0, 1], [1, 0, 0], [0, 1, 0]])
    assert f.basis is None and f.weights == (0, 1, 2)

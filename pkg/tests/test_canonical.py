from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

from canfilt import builders as b
from canfilt import linalg as la
from canfilt.algebra import Grouping, Kind, change_of_basis, direct_sum
from canfilt.canonical import (
    ADAPTED_ONLY,
    GroupingError,
    Method,
    NotComputable,
    adapted_basis_optimum,
    automorphism_invariance_check,
    canonical_direct_sum,
    canonical_filtration,
    canonical_graded,
    canonical_lie_via_radical,
    canonical_semisimple,
    canonical_trivial_extension,
    canonical_triangular,
    is_automorphism,
    verify_canonical,
)
from canfilt.filtration import AdaptedFiltration, nu, to_flag
from canfilt.linalg import Subspace

EX63 = b.monomial_quotient(2, [(4, 0), (2, 1), (1, 2), (0, 4)])


def test_power_algebra():
    r = canonical_filtration(b.truncated_poly(1, 5))
    assert r.weights == (0, 1, 2, 3, 4)
    assert r.method is Method.GRADED_QP and r.certified and r.certificate.kkt_ok
    assert r.nu.wt > 0


def test_staircase_quotient():
    r = canonical_filtration(EX63)
    assert r.weight_by_label() == {"1": 0, "x": 3, "x^2": 6, "x^3": 9, "y": 3, "y^2": 6, "y^3": 9, "xy": 7}


def test_truncated_poly_degree_grouping():
    r = canonical_filtration(b.truncated_poly(2, 4))
    degree = {0: set(), 1: set(), 2: set(), 3: set()}
    for g, w in zip(r.algebra.grading, r.weights):
        degree[g[0]].add(w)
    assert all(len(v) == 1 for v in degree.values())


@pytest.mark.parametrize("n", [2, 3, 4])
def test_upper_triangular(n):
    a = b.upper_triangular(n)
    idx = [(i, j) for i in range(1, n + 1) for j in range(i, n + 1)]
    assert canonical_filtration(a).weights == la.integer_primitive([j - i for i, j in idx])


def test_model_filiform_4():
    assert canonical_filtration(b.model_filiform(4)).weights == la.integer_primitive([12, 54, 66, 78, 90])


def test_sl_nilpotent_3():
    a = b.sl_nilpotent(3)
    r = canonical_filtration(a)
    assert r.weights == tuple(j - i for i, j in ((1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4)))


def test_semisimple_examples():
    for a in (b.field(), b.full_matrix(2), b.full_matrix(3), b.sl2(), direct_sum(b.field(), b.field())):
        r = canonical_filtration(a)
        assert r.is_trivial and r.method is Method.SEMISTABLE and r.nu is None
    with pytest.raises(ValueError):
        canonical_semisimple(b.truncated_poly(1, 2))


def test_direct_sum_examples():
    x2, x3, mat2 = b.truncated_poly(1, 2), b.truncated_poly(1, 3), b.full_matrix(2)
    r = canonical_direct_sum(canonical_filtration(x2), canonical_filtration(x2))
    assert r.weights == (0, 1, 0, 1)
    r = canonical_direct_sum(canonical_filtration(x2), canonical_filtration(x3))
    assert r.weights == (0, 5, 0, 3, 6) and r.method is Method.DIRECT_SUM and r.certified
    joint = canonical_graded(direct_sum(x2, x3))
    assert joint.weights == r.weights and joint.nu == r.nu
    r = canonical_direct_sum(canonical_filtration(mat2), canonical_filtration(x2))
    assert r.weights == (0, 0, 0, 0, 0, 1)
    r = canonical_direct_sum(canonical_filtration(mat2), canonical_filtration(b.field()))
    assert r.is_trivial


def test_lie_via_radical():
    r = canonical_filtration(direct_sum(b.sl2(), b.abelian(1)).replace(grading=None, grouping=None))
    assert r.weights == (0, 0, 0, 1) and r.method is Method.RADICAL_REDUCTION
    s = direct_sum(b.heisenberg(), b.sl2())
    r = canonical_lie_via_radical(s)
    assert r.weights == (1, 1, 2, 0, 0, 0)
    assert list(canonical_filtration(b.heisenberg()).weights) == [1, 1, 2]
    assert canonical_lie_via_radical(b.sl2()).is_trivial
    with pytest.raises(ValueError):
        canonical_lie_via_radical(b.truncated_poly(1, 2))


def test_closed_forms():
    mat2 = b.full_matrix(2)
    r = canonical_trivial_extension(mat2, b.regular_bimodule(mat2))
    assert r.weights == (0, 0, 0, 0, 1, 1, 1, 1) and r.method is Method.CLOSED_FORM and r.certified
    r = canonical_triangular(b.field(), b.field(), b.unit_bimodule())
    assert r.weights == (0, 0, 1) and r.certified
    assert canonical_trivial_extension(mat2, b.Bimodule(0)).is_trivial
    with pytest.raises(ValueError):
        canonical_trivial_extension(b.truncated_poly(1, 2), b.regular_bimodule(b.truncated_poly(1, 2)))


def test_closed_form_agrees_with_qp():
    t = b.triangular_algebra(b.full_matrix(2), b.full_matrix(1), b.matrix_bimodule(2, 1))
    assert canonical_graded(t).weights == canonical_triangular(b.full_matrix(2), b.field(), b.matrix_bimodule(2, 1)).weights


def test_grouping_refusal():
    a = b.truncated_poly(2, 3).replace(grouping=Grouping.identity(6, pinned=[0]))
    with pytest.raises(GroupingError):
        canonical_graded(a)
    r = adapted_basis_optimum(a)
    assert not r.certified and r.note == ADAPTED_ONLY
    mixed = Grouping((0, 1, 1, 2, 2, 1), frozenset({0}), "bogus")
    with pytest.raises(GroupingError):
        canonical_graded(b.truncated_poly(2, 3), mixed)


def test_not_computable_without_grading():
    a = EX63.replace(grading=None, grouping=None)
    with pytest.raises(NotComputable):
        canonical_filtration(a)


def _unit(a):
    if "1" in a.labels:
        return la.unit(a.dim, a.labels.index("1"))
    return tuple(1 if l[1] == l[2] else 0 for l in a.labels)  # sum of E_ii


def test_unit_weight_zero():
    for a in [b.truncated_poly(1, 4), EX63, b.upper_triangular(3), b.block_triangular([1, 2]), b.truncated_poly(2, 3)]:
        u = _unit(a)
        assert all(a.multiply(u, x) == x == a.multiply(x, u) for x in la.identity(a.dim))
        r = canonical_filtration(a)
        if all(a.is_ideal(s) for s, _ in to_flag(r.filtration).steps):
            assert r.filtration.weight_function()(u) == 0


def test_monomial_filtrations_by_ideals():
    for gens in ([(5,)], [(4, 0), (2, 1), (1, 2), (0, 4)], [(2, 0), (0, 3)], [(3, 0, 0), (0, 2, 0), (0, 0, 2), (1, 1, 0)]):
        a = b.monomial_quotient(len(gens[0]), gens)
        r = canonical_filtration(a)
        assert all(a.is_ideal(s) for s, _ in to_flag(r.filtration).steps)
        assert r.weights[0] == 0


def test_lie_filtrations_by_ideals():
    for a in (b.heisenberg(), b.model_filiform(4), b.sl_nilpotent(3), b.abelian(2), b.nonabelian2()):
        r = canonical_filtration(a)
        assert min(r.weights) >= 0
        assert all(a.is_ideal(s) for s, _ in to_flag(r.filtration).steps)


def test_verify_canonical_examples():
    r = canonical_filtration(EX63)
    assert verify_canonical(EX63, r.filtration)
    x3 = b.truncated_poly(1, 3)
    assert not verify_canonical(x3, AdaptedFiltration(x3, [0, 1, 1]))  # incompatible
    assert not verify_canonical(x3, AdaptedFiltration(x3, [0, 1, 3]))  # compatible, not optimal
    assert verify_canonical(x3, AdaptedFiltration(x3, [0, 2, 4]))
    with pytest.raises(ValueError):
        verify_canonical(x3, AdaptedFiltration(x3, [0, 0, 0]))


def test_verify_canonical_path_b():
    # repeated weights: certified through graded-semistability of Gr
    for a in (b.truncated_poly(2, 3), b.upper_triangular(3), b.model_filiform(4)):
        assert verify_canonical(a, canonical_filtration(a).filtration)


def test_automorphism_examples():
    r = canonical_filtration(EX63)
    torus = [la.scale(2 ** g[0] * 3 ** g[1], la.unit(8, i)) for i, g in enumerate(EX63.grading)]
    assert is_automorphism(EX63, torus)
    assert automorphism_invariance_check(EX63, r.filtration, torus)
    a = b.block_triangular([2, 1])  # E11 E12 E13 E22 E23 E32 E33 ... see labels
    lab = {l: i for i, l in enumerate(a.labels)}
    sigma = {1: 2, 2: 1, 3: 3}
    perm = [la.unit(a.dim, lab[f"E{sigma[int(l[1])]}{sigma[int(l[2])]}"]) for l in a.labels]
    assert is_automorphism(a, perm)
    assert automorphism_invariance_check(a, canonical_filtration(a).filtration, perm)
    x2 = b.truncated_poly(1, 2)
    s = direct_sum(x2, x2)
    swap = [la.unit(4, i) for i in (2, 3, 0, 1)]
    assert automorphism_invariance_check(s, canonical_filtration(s).filtration, swap)
    with pytest.raises(ValueError):
        automorphism_invariance_check(s, canonical_filtration(s).filtration, [la.unit(4, i) for i in (1, 0, 2, 3)])


def test_non_invariant_filtration_detected():
    x2 = b.truncated_poly(1, 2)
    s = direct_sum(x2, x2)
    f = AdaptedFiltration(s, [0, 1, 0, 2])
    swap = [la.unit(4, i) for i in (2, 3, 0, 1)]
    assert not automorphism_invariance_check(s, f, swap)


@given(st.integers(-5, 5).filter(bool))
@settings(max_examples=10)
def test_filiform_shear_invariance(c):
    for n in (3, 4):
        a = b.model_filiform(n)
        phi = [la.add(la.unit(n + 1, 0), la.scale(c, la.unit(n + 1, 1)))] + [la.unit(n + 1, i) for i in range(1, n + 1)]
        assert automorphism_invariance_check(a, canonical_filtration(a).filtration, phi)


def test_result_json():
    out = canonical_filtration(b.truncated_poly(1, 3)).to_json()
    assert out["weights"] == [0, 1, 2] and out["method"] == "GradedQp"
    assert out["certificate"]["kkt_ok"] is True
    assert out["wt"] == "3" and out["norm_sq"] == "5" and out["nu_sq_signed"] == "-9/5"

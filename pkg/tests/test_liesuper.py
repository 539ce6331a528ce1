from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from g3super.liesuper import (GradedLSA, RootDatumG3, centralizer, derivations_gr,
                              from_vector_fields, identify_system, odd_even_reflections,
                              parabolic_growth, parse_parabolic, parse_parabolic_type,
                              simple_system, tanaka_prolongation)
from g3super.modelszoo import load_model, shc_algebra

HEIS = GradedLSA([("e1", 0, -1), ("e2", 0, -1), ("f", 0, -2)], {(0, 1): {2: 1}})
# odd Heisenberg: two odd generators with [t, t] = f
SUPER_HEIS = GradedLSA([("t", 1, -1), ("f", 0, -2)], {(0, 0): {1: 2}})


def test_brackets_fill_in_the_opposite_order():
    assert HEIS.bracket_basis(1, 0) == {2: -1}
    assert SUPER_HEIS.bracket_basis(0, 0) == {1: 2}
    assert not HEIS.antisymmetry_violations()


def test_grading_is_checked():
    with pytest.raises(ValueError):
        GradedLSA([("a", 0, -1), ("b", 0, -1)], {(0, 1): {0: 1}})


def test_json_round_trip():
    A = shc_algebra()
    B = GradedLSA.from_json(A.to_json())
    assert B.br == A.br and B.basis == A.basis


def test_g3_jacobi_and_dims():
    A = shc_algebra()
    assert A.dim == (17, 14)
    assert not A.jacobi_violations()


def test_derivations_of_heisenberg():
    # degree-0 derivations: gl(2) on the generators
    assert derivations_gr(HEIS).dim == (4, 0)


def test_heisenberg_prolongs_to_the_contact_algebra():
    # contact fields on R^3 <-> functions of weighted degree k + 2 in (x, p | u of weight 2)
    P = tanaka_prolongation(HEIS, max_degree=2)
    assert P.dims[0] == (4, 0)
    assert P.dims[1] == (6, 0)
    assert P.dims[2] == (9, 0)
    assert not P.terminated


def test_prolongation_rejects_bad_g0():
    with pytest.raises(ValueError):
        # e1 -> e1 with f fixed breaks [e1, e2] = f
        tanaka_prolongation(HEIS, g0=[({0: {0: 1}}, 0)])


def test_centralizer():
    A = shc_algebra()
    # the centre of G(3) is trivial
    assert centralizer(A, [{i: 1} for i in range(len(A))]) == []


def test_parabolic_examples():
    assert parabolic_growth("IV", {2})[0] == [(2, 4), (1, 2), (2, 0)]
    assert parabolic_growth("IV", {1})[0] == [(4, 4), (1, 0)]
    assert parse_parabolic("I:1,3") == ("I", {1, 3})
    assert parse_parabolic_type("P13^II") == ("II", {1, 3})
    with pytest.raises(ValueError):
        parse_parabolic("V:1")
    with pytest.raises(ValueError):
        parabolic_growth("I", {4})


def test_root_datum():
    R = RootDatumG3()
    R.positive_roots(simple_system("IV"))
    ev = sum(1 for r in R.roots if R.parity(r) == 0)
    od = len(R.roots) - ev
    # even roots: 12 of G(2) and 2 of sl(2); odd roots: the 7 x 2 weights
    assert (ev, od) == (14, 14)


def test_odd_reflections_connect_the_four_systems():
    seen = {"I"}
    frontier = ["I"]
    while frontier:
        s = frontier.pop()
        for i in range(3):
            for kind in ("odd", "even"):
                try:
                    _, name = odd_even_reflections(s, i, kind)
                except ValueError:
                    continue
                if name and name not in seen:
                    seen.add(name)
                    frontier.append(name)
    assert seen == {"I", "II", "III", "IV"}
    assert identify_system(simple_system("II")) == ("II", [0, 1, 2])


# ----------------------------------------------------- permutation invariance

HC = load_model("hc-classical")
HC_FIELDS = [(n, d, X) for n, d, X in HC.symmetries]
SHC = load_model("shc")
SHC_FIELDS = [(n, d, X) for n, d, X in SHC.symmetries]


def _algebra(items):
    return from_vector_fields([X for _, _, X in items], [n for n, _, _ in items],
                              degrees=[d for _, d, _ in items])


HC_REF = _algebra(HC_FIELDS)
SHC_REF = _algebra(SHC_FIELDS)


def _check_permuted(ref, items, perm):
    L = _algebra([items[i] for i in perm])
    assert L.dim == ref.dim
    assert L.graded_dims() == ref.graded_dims()
    for a in range(len(perm)):
        for b in range(len(perm)):
            got = {perm[k]: v for k, v in L.bracket_basis(a, b).items()}
            assert got == ref.bracket_basis(perm[a], perm[b])


@settings(max_examples=30, deadline=None)
@given(st.permutations(range(len(HC_FIELDS))))
def test_from_vector_fields_permutation_invariance(perm):
    _check_permuted(HC_REF, HC_FIELDS, perm)


@settings(max_examples=5, deadline=None)
@given(st.permutations(range(len(SHC_FIELDS))))
def test_from_vector_fields_permutation_invariance_super(perm):
    _check_permuted(SHC_REF, SHC_FIELDS, perm)


@settings(max_examples=30, deadline=None)
@given(st.lists(st.integers(-3, 3).filter(bool), min_size=3, max_size=3))
def test_rescaling_changes_structure_constants_covariantly(cs):
    # rescale three fields; [c_a X_a, c_b X_b] = c_a c_b [X_a, X_b]
    items = list(HC_FIELDS)
    scale = [Fraction(1)] * len(items)
    for i, c in zip((0, 4, 9), cs):
        n, d, X = items[i]
        items[i] = (n, d, X.scale(c))
        scale[i] = Fraction(c)
    L = _algebra(items)
    for a in range(len(items)):
        for b in range(len(items)):
            want = {k: v * scale[a] * scale[b] / scale[k]
                    for k, v in HC_REF.bracket_basis(a, b).items()}
            assert L.bracket_basis(a, b) == want

from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from g3super.geometry import (Distribution, SuperOneForm, SuperVectorField,
                              annihilator_from_graph, cauchy_characteristics, derived_flag,
                              exterior_d, format_growth, frame_rank, insert, lie_bracket,
                              lie_derivative_form, monomials_of_weight, symmetry_residues)
from g3super.grassmann import EVEN, ODD, SuperPolynomial, VariableTable
from g3super.modelszoo import load_model

T = VariableTable([("x", EVEN, 1), ("y", EVEN, 1), ("a", ODD, 1), ("b", ODD, 1)])
PROP = settings(max_examples=100, deadline=None)


def poly(parity):
    term = st.tuples(st.integers(-3, 3), st.integers(0, 2), st.integers(0, 2), st.integers(0, 3))

    def build(ts):
        out = {}
        for c, ex, ey, mask in ts:
            if bin(mask).count("1") % 2 == parity:
                out[((ex, ey), mask)] = out.get(((ex, ey), mask), 0) + Fraction(c)
        return SuperPolynomial(T, out)
    return st.lists(term, max_size=3).map(build)


def field(parity):
    return st.tuples(*(poly((parity + T.parity[c]) % 2) for c in T.names)).map(
        lambda cs: SuperVectorField(T, dict(zip(T.names, cs)), parity))


def form(parity):
    return st.tuples(*(poly((parity + T.parity[c]) % 2) for c in T.names)).map(
        lambda cs: SuperOneForm(T, dict(zip(T.names, cs)), parity))


def any_field():
    return st.sampled_from([EVEN, ODD]).flatmap(field)


def any_poly():
    return st.sampled_from([EVEN, ODD]).flatmap(poly)


def sgn(p, q):
    return -1 if (p & q) else 1


# ---------------------------------------------------------------- examples

def test_bracket_of_coordinate_fields():
    t = T
    X = SuperVectorField.from_strings(t, {"y": "x"})        # x d_y
    Y = SuperVectorField.partial(t, "x")
    assert lie_bracket(Y, X) == SuperVectorField.partial(t, "y")
    A = SuperVectorField.from_strings(t, {"a": "1", "x": "b"})
    B = SuperVectorField.from_strings(t, {"b": "1", "x": "a"})
    # [A, B] = A(a) d_x + B(b) d_x for two odd fields
    assert lie_bracket(A, B) == SuperVectorField.from_strings(t, {"x": "2"})


def test_field_parity_is_checked():
    with pytest.raises(ValueError):
        SuperVectorField.from_strings(T, {"x": "1", "a": "1"})
    with pytest.raises(ValueError):
        SuperVectorField.from_strings(T, {"x": "a"}, EVEN)


def test_hilbert_cartan_growth():
    # classical z' = (u'')^2: growth (2,1,2) on a 5-manifold
    m = load_model("hc-classical")
    fl = derived_flag(m.distribution, m.point())
    assert fl.growth_str() == "(2|0,1|0,2|0)"
    assert fl.regular


def test_shc_growth():
    m = load_model("shc")
    fl = derived_flag(m.distribution, m.point())
    assert format_growth(fl.growth) == "(2|4,1|2,2|0)"


def test_frame_rank_splits_parity():
    assert frame_rank([{"x": 1}, {"x": 2}, {"a": 1}], [EVEN, EVEN, ODD]) == (1, 1)


def test_annihilator_from_graph():
    t = VariableTable([("x", EVEN), ("u", EVEN), ("p", EVEN)])
    D = Distribution(t, [SuperVectorField.from_strings(t, {"x": "1", "u": "p"}),
                         SuperVectorField.partial(t, "p")])
    ann = annihilator_from_graph(D)
    assert len(ann) == 1
    assert not ann.annihilates(D)


def test_contact_plane_has_no_cauchy_characteristic_but_a_trivial_factor_does():
    t = VariableTable([("x", EVEN, 1), ("u", EVEN, 2), ("p", EVEN, 1), ("w", EVEN, 1)])
    Dx = SuperVectorField.from_strings(t, {"x": "1", "u": "p"})
    dp, dw = SuperVectorField.partial(t, "p"), SuperVectorField.partial(t, "w")
    assert cauchy_characteristics(Distribution(t, [Dx, dp]), 2) == []
    found = cauchy_characteristics(Distribution(t, [Dx, dp, dw]), 2)
    assert found == [dw]


def test_monomials_of_weight():
    keys = monomials_of_weight(T, 2)
    # x^2, xy, y^2, x a, x b, y a, y b, a b
    assert len(keys) == 8
    assert len(monomials_of_weight(T, 2, ODD)) == 4


def test_symmetry_residue_witness():
    m = load_model("hc-classical")
    X = SuperVectorField.from_strings(m.table, {"u": "x"})
    assert symmetry_residues(X, m.distribution, m.annihilator)


# -------------------------------------------------------------- properties

@PROP
@given(any_field(), any_field(), any_poly())
def test_bracket_is_the_supercommutator_of_derivations(X, Y, f):
    lhs = lie_bracket(X, Y)(f)
    rhs = X(Y(f)) - Y(X(f)).scale(sgn(X.parity, Y.parity))
    assert lhs == rhs


@PROP
@given(any_field(), any_poly(), any_poly())
def test_fields_are_derivations(X, f, g):
    p = f.parity()
    assert X(f * g) == X(f) * g + (f * X(g)).scale(sgn(X.parity, p))


@PROP
@given(any_field(), any_field())
def test_bracket_supersymmetry(X, Y):
    assert lie_bracket(X, Y) == lie_bracket(Y, X).scale(-sgn(X.parity, Y.parity))


@settings(max_examples=40, deadline=None)
@given(any_field(), any_field(), any_field())
def test_field_super_jacobi(X, Y, Z):
    lhs = lie_bracket(X, lie_bracket(Y, Z))
    rhs = lie_bracket(lie_bracket(X, Y), Z) + \
        lie_bracket(Y, lie_bracket(X, Z)).scale(sgn(X.parity, Y.parity))
    assert lhs == rhs


@PROP
@given(any_field(), any_field(), st.sampled_from([EVEN, ODD]).flatmap(form))
def test_cartan_identity(X, Y, s):
    # L_X i_Y - (-1)^{|X||Y|} i_Y L_X = i_[X,Y]
    lhs = X(insert(Y, s)) - insert(Y, lie_derivative_form(X, s)).scale(sgn(X.parity, Y.parity))
    assert lhs == insert(lie_bracket(X, Y), s)


@PROP
@given(any_field(), any_poly())
def test_exterior_d_pairs_to_the_derivative(X, f):
    assert insert(X, exterior_d(f)) == X(f)


SHC = load_model("shc")
SHC_SYMS = {p: [X for _, _, X in SHC.symmetries if X.parity == p] for p in (EVEN, ODD)}


def combo(parity):
    n = len(SHC_SYMS[parity])
    return st.lists(st.integers(-2, 2), min_size=n, max_size=n).map(
        lambda cs: sum((X.scale(c) for X, c in zip(SHC_SYMS[parity], cs) if c),
                       SuperVectorField(SHC.table, {}, parity)))


@settings(max_examples=25, deadline=None)
@given(st.sampled_from([EVEN, ODD]).flatmap(combo), st.sampled_from([EVEN, ODD]).flatmap(combo))
def test_symmetries_close_under_brackets(X, Y):
    D, ann = SHC.distribution, SHC.annihilator
    assert not symmetry_residues(X, D, ann)
    assert not symmetry_residues(lie_bracket(X, Y), D, ann)

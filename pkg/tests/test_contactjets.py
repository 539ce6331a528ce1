from fractions import Fraction

import pytest

from g3super.contactjets import (JetChart, build_equation, contact_field, contact_g3,
                                 g3_chart, kaplansky_table, lagrange_bracket, lagrangian_check,
                                 load_generating_functions, normal_space_dims, osp32_checks,
                                 prolong, tangency_check, verify_g3contact,
                                 verify_key_identities)
from g3super.geometry import insert, lie_bracket, lie_derivative_form
from g3super.grassmann import EVEN, ODD

CHART = g3_chart(2)


def test_chart_shape():
    t = CHART.table
    # x y u u_x u_y, then u_xx u_xy u_yy u_nutau
    assert len(t.even) == 5 + 4
    # nu tau u_nu u_tau, then u_xnu u_xtau u_ynu u_ytau
    assert len(t.odd) == 4 + 4
    assert CHART.u2(2, 2) == (0, None)    # u_nunu = 0
    s, name = CHART.u2(3, 2)
    assert name == "u_nutau" and s == -1


def test_lagrange_bracket_normalisation():
    f = CHART.f
    assert lagrange_bracket(CHART, f("x"), f("u_x")) == 1
    assert lagrange_bracket(CHART, f("nu"), f("u_nu")) == -1
    assert lagrange_bracket(CHART, f("1"), f("u")) == 1


def test_contact_fields_preserve_the_contact_form():
    chart = JetChart([("x", EVEN), ("nu", ODD)])
    sigma = chart.sigma()
    for text in ("u", "x*u_x", "nu*u_nu", "u*nu", "u_x^2", "x*nu", "u_nu"):
        f = chart.f(text)
        S = contact_field(chart, f)
        L = lie_derivative_form(S, sigma)
        # L_S sigma = sigma * (d_u f)
        g = f.partial("u")
        assert L.coeffs == {c: v * g for c, v in sigma.coeffs.items() if v * g}, text
        assert insert(S, sigma) == f


def test_lagrange_bracket_is_a_homomorphism():
    chart, fs = load_generating_functions()
    polys = [r["poly"] for r in fs][::4]
    for f in polys:
        for g in polys:
            lhs = contact_field(chart, lagrange_bracket(chart, f, g))
            assert lhs == lie_bracket(contact_field(chart, f), contact_field(chart, g))


def test_prolongation_preserves_the_cartan_system():
    chart = g3_chart(2)
    sysm = chart.cartan_system()
    f = chart.f("x*u_nu + nu*u_y")
    X = prolong(chart, f)
    # L_X sigma_k lies in the span of the Cartan forms: it kills the total derivatives
    for s in sysm.forms:
        L = lie_derivative_form(X, s)
        for i in range(chart.n):
            assert not insert(chart.Dt_field(i), L)


def test_tangency_positive_and_negative():
    eq = build_equation("hatV")
    _, fs = load_generating_functions()
    assert all(tangency_check(r["poly"], eq) for r in fs)
    # x^2 generates a contact field that does not preserve the equation
    assert not tangency_check(CHART.f("x^2"), eq)


def test_goursat_family_needs_parameters():
    G = build_equation("goursat")
    assert G.parameters == ("lam", "th", "ph")
    with pytest.raises(ValueError):
        build_equation("nope")


def test_contact_grading():
    A = contact_g3()
    assert A.dim == (17, 14)
    assert A.graded_dims() == {-2: (1, 0), -1: (4, 4), 0: (7, 6), 1: (4, 4), 2: (1, 0)}
    assert verify_g3contact()["passed"]


def test_key_identities():
    assert verify_key_identities()["pass"]


@pytest.mark.parametrize("c1,c2,ok", [
    (Fraction(1, 36), -216, True),
    (Fraction(1, 6), -36, True),        # only the product c1 c2 = -6 matters for invariance
    (Fraction(1, 36), 36, False),
    (Fraction(1, 36), 216, False),
])
def test_eta_invariance_depends_on_c1c2(c1, c2, ok):
    rep = osp32_checks(c1, c2)
    assert rep["invariant"] is ok
    assert Fraction(rep["witness"]["value"]) == Fraction(rep["witness"]["expected"])
    assert (Fraction(rep["witness"]["value"]) == 0) is ok


def test_osp32_matrices():
    rep = osp32_checks()
    assert rep["matrices_match"] and rep["eta_matches"] and rep["closed"]
    assert rep["dim"] == [6, 6]


def test_kaplansky_product_is_supercommutative():
    K = kaplansky_table()
    par = {"w1": 0, "w2": 1, "w3": 1}
    for a in par:
        for b in par:
            s = -1 if (par[a] & par[b]) else 1
            ab = {k: Fraction(v) for k, v in K["%s*%s" % (a, b)].items()}
            ba = {k: s * Fraction(v) for k, v in K["%s*%s" % (b, a)].items()}
            assert ab == ba


def test_normal_spaces_and_lagrangian_family():
    assert normal_space_dims() == [[1, 0], [1, 2], [1, 2], [1, 0]]
    assert lagrangian_check()["isotropic"]

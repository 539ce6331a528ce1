from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from g3super.grassmann import (EVEN, ODD, ParseError, SuperPolynomial, VariableTable, as_scalar,
                               mask_sign, parse)

T = VariableTable([("x", EVEN, 1), ("y", EVEN, 2), ("a", ODD, 1), ("b", ODD, 1), ("c", ODD, 0)])
# same variables, odd ones in another order
T_PERM = VariableTable([("y", EVEN, 2), ("c", ODD, 0), ("x", EVEN, 1), ("b", ODD, 1),
                        ("a", ODD, 1)])


def P(text, table=T):
    return parse(text, table)


def polys(parity=None, max_terms=4):
    term = st.tuples(st.integers(-3, 3), st.integers(0, 2), st.integers(0, 2), st.integers(0, 7))
    terms = st.lists(term, max_size=max_terms)

    def build(ts):
        out = {}
        for c, ex, ey, mask in ts:
            if parity is not None and bin(mask).count("1") % 2 != parity:
                continue
            key = ((ex, ey), mask)
            out[key] = out.get(key, 0) + Fraction(c)
        return SuperPolynomial(T, out)
    return terms.map(build)


homog = st.sampled_from([EVEN, ODD]).flatmap(lambda p: polys(p).map(lambda f: (f, p)))
names = st.sampled_from(["x", "y", "a", "b", "c"])

PROP = settings(max_examples=150, deadline=None)


# ---------------------------------------------------------------- examples

def test_odd_variables_anticommute_and_square_to_zero():
    assert P("a*b") == -P("b*a")
    assert P("a*a") == 0
    assert P("a") * P("a") == 0
    assert P("x*a") == P("a*x")


def test_parse_print_round_trip():
    p = P("1/3*x^2*a*b - b*a + 2*y*c + 3")
    assert str(p) == "3 + 2*y*c + a*b + 1/3*x^2*a*b"
    assert P(str(p)) == p


def test_left_odd_derivative():
    p = P("a*b*c")
    assert p.partial("a") == P("b*c")
    assert p.partial("b") == P("-a*c")
    assert p.partial("c") == P("a*b")


def test_weights_and_parity():
    assert P("x*a").weighted_degree() == 2
    assert P("x + y").weighted_degree() is None
    assert P("x*a").parity() == ODD
    assert P("x + a").parity() is None
    assert P("0").parity() == EVEN


def test_evaluate_drops_odd_part():
    assert P("3 + x*y + a*b").evaluate({"x": 2, "y": Fraction(1, 2)}) == 4


def test_substitute_even_variable():
    assert P("x^2*a").substitute({"x": P("y + 1")}) == P("y^2*a + 2*y*a + a")


def test_mask_sign():
    # a * b = a b, b * a = -a b with a = bit 0, b = bit 1
    assert mask_sign(0b01, 0b10) == 1
    assert mask_sign(0b10, 0b01) == -1
    assert mask_sign(0b01, 0b01) == 0


def test_as_scalar_refuses_floats():
    assert as_scalar("2/6") == Fraction(1, 3)
    with pytest.raises(TypeError):
        as_scalar(0.5)


@pytest.mark.parametrize("text,pos", [
    ("a^2", 1), ("x^-1", 2), ("x +", 3), ("x $ y", 2), ("1/0", 2), ("q", 0),
])
def test_parse_errors_are_position_tagged(text, pos):
    with pytest.raises(ParseError) as e:
        P(text)
    assert e.value.position == pos
    assert "position %d" % pos in str(e.value)


def test_table_validation():
    with pytest.raises(ValueError):
        VariableTable([("x", EVEN), ("x", ODD)])
    with pytest.raises(ValueError):
        VariableTable([("x", EVEN, Fraction(1, 2))])
    with pytest.raises(ValueError):
        P("x") + P("x", T_PERM)


# -------------------------------------------------------------- properties

@PROP
@given(homog, homog)
def test_supercommutativity(fa, fb):
    (f, p), (g, q) = fa, fb
    sign = -1 if (p & q) else 1
    assert f * g == (g * f).scale(sign)


@PROP
@given(polys(), polys(), polys())
def test_ring_laws(f, g, h):
    assert (f * g) * h == f * (g * h)
    assert f * (g + h) == f * g + f * h
    assert (f + g) - g == f


@PROP
@given(polys(ODD))
def test_odd_elements_square_to_zero(f):
    assert f * f == 0


@PROP
@given(homog, polys(), names)
def test_leibniz_rule(fa, g, v):
    f, p = fa
    sign = -1 if (p & T.parity[v]) else 1
    assert (f * g).partial(v) == f.partial(v) * g + (f * g.partial(v)).scale(sign)


@PROP
@given(polys(), names, names)
def test_partials_supercommute(f, v, w):
    sign = -1 if (T.parity[v] & T.parity[w]) else 1
    assert f.partial(v).partial(w) == f.partial(w).partial(v).scale(sign)


@PROP
@given(polys(), polys())
def test_retable_is_a_ring_map(f, g):
    assert (f * g).retable(T_PERM) == f.retable(T_PERM) * g.retable(T_PERM)
    assert f.retable(T_PERM).retable(T) == f


@PROP
@given(polys(), polys(), polys(EVEN))
def test_substitution_is_a_ring_map(f, g, q):
    s = {"x": q}
    assert (f * g).substitute(s) == f.substitute(s) * g.substitute(s)


@PROP
@given(polys())
def test_print_parse_round_trip(f):
    assert P(str(f)) == f

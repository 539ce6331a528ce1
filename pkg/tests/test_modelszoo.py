import json
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from g3super.geometry import derived_flag, symbol_components, symmetry_residues
from g3super.grassmann import ParseError
from g3super.liesuper import GradedLSA
from g3super.linalg import Span
from g3super.modelszoo import (FGHKData, SYMBOL_MODELS, classify_symbol, fghk_distribution,
                               fghk_shc_constraints, lift_to_m12, load_model,
                               load_symbol_fixture, model_from_dict, monge_data, shipped_models,
                               shc_data, solve_symmetries, submax_model, submax_weights,
                               symbol_report_from_algebra, system_dist_characteristic,
                               verify_submaximal_generators)


def point(table, **vals):
    pt = {c: Fraction(0) for c in table.even}
    pt.update({k: Fraction(v) for k, v in vals.items()})
    return pt


def test_shipped_models_load_and_listed_fields_are_symmetries():
    names = shipped_models()
    assert set(names) >= {"shc", "g3contact", "hc-classical", "fghk-template",
                          "submax-m2", "submax-m3", "submax-m4", "submax-m5"}
    for name in names:
        m = load_model(name)
        assert not m.annihilator.annihilates(m.distribution), name
        for n, d, X in m.symmetries:
            assert not symmetry_residues(X, m.distribution, m.annihilator), (name, n)
            if d is not None:
                assert X.weighted_degree() == d, (name, n)


def test_model_file_errors(tmp_path):
    bad = {"name": "bad", "chart": [["x", "even", 1], ["u", "even", 1]],
           "distribution": [{"name": "X", "field": {"x": "1 +* u"}}]}
    with pytest.raises(ParseError):
        model_from_dict(bad)
    bad["distribution"][0]["field"] = {"x": "1"}
    bad["annihilator"] = [{"name": "s", "form": {"x": "1"}}]
    with pytest.raises(ValueError, match="does not kill"):
        model_from_dict(bad)
    with pytest.raises(KeyError):
        load_model("no-such-model")
    p = tmp_path / "m.json"
    del bad["annihilator"]
    p.write_text(json.dumps(bad))
    assert load_model(str(p)).name == "bad"


# ------------------------------------------------------------- FGHK family

@pytest.mark.parametrize("m", [2, 3])
def test_monge_data_is_of_shc_type(m):
    d = monge_data(m)
    assert fghk_shc_constraints(d).passed
    D = fghk_distribution(d)
    pt = point(D.table, u_xx=1)
    assert derived_flag(D, pt).growth_str() == "(2|4,1|2,2|0)"
    assert classify_symbol(symbol_components(D, pt)) == "M1"


@pytest.mark.parametrize("m", [0, 1])
def test_degenerate_monge_data_fails_only_invertibility(m):
    rep = fghk_shc_constraints(monge_data(m))
    assert rep.failed == ["d2F_invertible"]


def test_constraints_detect_a_broken_identity():
    d = shc_data()
    broken = FGHKData(d.F, d.G + d.table.var("u_x") * d.table.var("tau"), d.H, d.K)
    assert "d2F_invertible" not in fghk_shc_constraints(broken).failed
    assert fghk_shc_constraints(broken).failed


def test_constraints_match_growth_and_tag_on_shipped_data():
    # on the shipped FGHK data: constraints hold <=> growth (2|4,1|2,2|0) and tag M1
    for name in ("fghk-template", "submax-m2", "submax-m3", "submax-m4", "submax-m5"):
        m = load_model(name)
        ok = fghk_shc_constraints(m.fghk, m.point()).passed
        fl = derived_flag(m.distribution, m.point())
        shc_type = fl.growth_str() == "(2|4,1|2,2|0)" and \
            classify_symbol(symbol_components(m.distribution, m.point(), fl)) == "M1"
        assert ok and shc_type, name
    # the degenerate Monge data: both sides fail (same growth, but the symbol is M2)
    for m in (0, 1):
        d = monge_data(m)
        D = fghk_distribution(d)
        pt = point(D.table, u_xx=1)
        fl = derived_flag(D, pt)
        assert not fghk_shc_constraints(d).passed
        assert classify_symbol(symbol_components(D, pt, fl)) == "M2"


def test_lift():
    L = lift_to_m12(shc_data())
    fl = derived_flag(L, point(L.table, u_xx=1, lam=1))
    assert fl.growth_str() == "(2|2,1|2,1|2,1|0,1|0)"
    with pytest.raises(ValueError):
        lift_to_m12(monge_data(1))


# ------------------------------------------------------ submaximal models

def test_submax_weights_for_m2_are_the_shc_weights():
    w = submax_weights(2)
    assert w == {"x": 1, "u": 3, "u_x": 2, "u_xx": 1, "z": 3,
                 "tau": 1, "nu": 1, "u_tau": 2, "u_nu": 2, "u_xtau": 1, "u_xnu": 1}


@pytest.mark.parametrize("m", [2, 3, 4, 5])
def test_submaximal_generators(m):
    rep = verify_submaximal_generators(m)
    assert rep.passed, rep.to_json()
    assert rep.dims == (10, 8)


@pytest.mark.parametrize("m", [0, 1, -1])
def test_submax_rejects_degenerate_m(m):
    with pytest.raises(ValueError):
        submax_model(m)


def test_solver_on_hilbert_cartan_with_workers():
    m = load_model("hc-classical")
    a = solve_symmetries(m, 6, (-3, 3), workers=1)
    b = solve_symmetries(m, 6, (-3, 3), workers=2)
    assert a.dims == b.dims
    assert a.total == (14, 0)
    assert a.transitive and a.closure_ok


def test_solver_flags_truncation():
    r = solve_symmetries(load_model("hc-classical"), 2, (-3, 3))
    assert r.truncated
    assert r.to_json()["status"] == "truncated"


def test_cauchy_characteristic_of_system_dist():
    rep = system_dist_characteristic()
    assert rep["passed"] and rep["is_symmetry"]


# ---------------------------------------------------- symbol classification

@pytest.mark.parametrize("name", SYMBOL_MODELS)
def test_fixtures_classify_to_their_own_name(name):
    rep = symbol_report_from_algebra(load_symbol_fixture(name))
    assert classify_symbol(rep) == name


def test_symbol_of_wrong_shape_is_rejected():
    L = GradedLSA([("e", 0, -1)], {})
    with pytest.raises(ValueError):
        symbol_report_from_algebra(L)


def rebased(L, mats):
    """Structure constants of L in a new basis, one invertible block per (degree, parity)."""
    blocks = {}
    for i, (p, d) in enumerate(zip(L.par, L.deg)):
        blocks.setdefault((d, p), []).append(i)
    new = [None] * len(L)
    for key, idx in sorted(blocks.items()):
        M = mats(len(idx))
        for a, i in enumerate(idx):
            new[i] = {idx[b]: Fraction(M[a][b]) for b in range(len(idx)) if M[a][b]}
    sp = Span()
    for i, v in enumerate(new):
        if not sp.add(v, i):
            return None
    br = {}
    for i in range(len(L)):
        for j in range(len(L)):
            c = sp.coordinates(L.bracket(new[i], new[j]))
            if c:
                br[(i, j)] = c
    return GradedLSA(L.basis, br)


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(SYMBOL_MODELS), st.randoms(use_true_random=False))
def test_classification_is_invariant_under_rebasing(name, rnd):
    def mats(n):
        return [[rnd.randint(-3, 3) for _ in range(n)] for _ in range(n)]
    L = rebased(load_symbol_fixture(name), mats)
    if L is None:
        return
    assert not L.jacobi_violations(limit=1)
    assert classify_symbol(symbol_report_from_algebra(L)) == name

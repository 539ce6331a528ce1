"""
Concrete models: the SHC distribution and its symmetries, the FGHK family,
the submaximal models, classical Hilbert-Cartan, the lift of type M_12^IV,
symbol classification and a per-degree symmetry solver.

Model files are JSON with keys
  chart         [[name, "even"|"odd", weight], ...]
  aliases       optional {alias: coordinate} used only while parsing
  distribution  [{"name", "field": {coordinate: expr}}]
  annihilator   optional [{"name", "form": {coordinate: expr}}]
  points        {name: {coordinate: value}} (unlisted coordinates are 0)
  symmetries    optional [{"name", "parity", "degree", "field"}]
  expected      optional data (never used by the solver)
"""

import json
import os
import re
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources
from pathlib import Path

from .geometry import (Distribution, PfaffianSystem, SuperOneForm, SuperVectorField,
                       SymbolReport, annihilator_from_graph, frame_rank, insert, lie_bracket,
                       monomials_of_weight, symbol_components, symmetry_residues,
                       _field_vec, _rows_from, _symbol_checks)
from .grassmann import EVEN, ODD, SuperPolynomial, VariableTable, parse
from .liesuper import GradedLSA, centralizer, from_vector_fields
from .linalg import Span, nullspace

_IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")


def _parity(p):
    if p in (0, 1):
        return p
    return {"even": EVEN, "odd": ODD}[p]


def _expand_aliases(text, aliases):
    if not aliases:
        return text
    return _IDENT.sub(lambda m: aliases.get(m.group(0), m.group(0)), text)


@dataclass
class ModelSpec:
    name: str
    table: VariableTable
    distribution: Distribution
    annihilator: PfaffianSystem
    points: dict
    symmetries: list = field(default_factory=list)    # (name, degree, field)
    expected: dict = field(default_factory=dict)
    default_point: str = None
    description: str = ""
    aliases: dict = field(default_factory=dict)
    fghk: "FGHKData" = None

    def point(self, name=None):
        name = name or self.default_point
        if name is None:
            return {}
        if name not in self.points:
            raise KeyError("model %s has no point %r" % (self.name, name))
        return self.points[name]

    def parse(self, text):
        return parse(_expand_aliases(str(text), self.aliases), self.table)


def model_from_dict(data):
    table = VariableTable([(n, _parity(p), w) for n, p, w in data["chart"]])
    aliases = data.get("aliases", {})

    def P(text):
        return parse(_expand_aliases(str(text), aliases), table)

    fghk = None
    if "fghk" in data:
        fghk = FGHKData(*(P(data["fghk"][k]) for k in "FGHK"))
        D = fghk_distribution(fghk)
    else:
        gens, names = [], []
        for g in data["distribution"]:
            gens.append(SuperVectorField(table, {c: P(e) for c, e in g["field"].items()}))
            names.append(g["name"])
        D = Distribution(table, gens, names)
    if data.get("annihilator"):
        ann = PfaffianSystem(table, [SuperOneForm(table, {c: P(e) for c, e in f["form"].items()})
                                     for f in data["annihilator"]])
    else:
        ann = annihilator_from_graph(D)
    bad = ann.annihilates(D)
    if bad:
        i, j, r = bad[0]
        raise ValueError("annihilator form %d does not kill generator %d: %s" % (i, j, r))
    points = {}
    for pn, vals in data.get("points", {}).items():
        pt = {c: Fraction(0) for c in table.even}
        for c, v in vals.items():
            table.check(c)
            pt[c] = Fraction(v)
        points[pn] = pt
    syms = []
    for s in data.get("symmetries", []):
        X = SuperVectorField(table, {c: P(e) for c, e in s["field"].items()}, _parity(s["parity"]))
        syms.append((s["name"], s.get("degree"), X))
    return ModelSpec(data["name"], table, D, ann, points, syms, data.get("expected", {}),
                     data.get("default_point"), data.get("description", ""), aliases, fghk)


def shipped_models():
    root = resources.files("g3super.data").joinpath("models")
    return sorted(p.name[:-5] for p in root.iterdir() if p.name.endswith(".json"))


def load_model(ref):
    """A shipped model by name, or a model file path."""
    p = Path(str(ref))
    if p.suffix == ".json" and p.exists():
        data = json.loads(p.read_text())
    else:
        res = resources.files("g3super.data").joinpath("models").joinpath("%s.json" % ref)
        if not res.is_file():
            raise KeyError("unknown model %r" % (ref,))
        data = json.loads(res.read_text())
    return model_from_dict(data)


# ------------------------------------------------------------ FGHK family

ODD_ALIASES = {"t1": "tau", "t2": "nu", "t3": "u_tau", "t4": "u_nu", "t5": "u_xtau", "t6": "u_xnu"}


def fghk_chart(weights=None):
    """The (5|6) chart x, u, u_x, u_xx, z | tau, nu, u_tau, u_nu, u_xtau, u_xnu.

    Default weights are those of the SHC grading.
    """
    w = {"x": 1, "u": 3, "u_x": 2, "u_xx": 1, "z": 3,
         "tau": 1, "nu": 1, "u_tau": 2, "u_nu": 2, "u_xtau": 1, "u_xnu": 1}
    w.update(weights or {})
    names = [("x", EVEN), ("u", EVEN), ("u_x", EVEN), ("u_xx", EVEN), ("z", EVEN),
             ("tau", ODD), ("nu", ODD), ("u_tau", ODD), ("u_nu", ODD), ("u_xtau", ODD), ("u_xnu", ODD)]
    return VariableTable([(n, p, w[n]) for n, p in names])


@dataclass
class FGHKData:
    """Right-hand sides of z_x = F, z_nu = G, z_tau = H, u_nu_tau = K."""
    F: SuperPolynomial
    G: SuperPolynomial
    H: SuperPolynomial
    K: SuperPolynomial

    def __post_init__(self):
        for name, want in (("F", EVEN), ("G", ODD), ("H", ODD), ("K", EVEN)):
            p = getattr(self, name)
            if p and p.parity() != want:
                raise ValueError("%s must be %s" % (name, "odd" if want else "even"))
        if len({self.F.table, self.G.table, self.H.table, self.K.table}) != 1:
            raise ValueError("F, G, H, K must share one chart")

    @property
    def table(self):
        return self.F.table

    @classmethod
    def from_strings(cls, F, G, H, K, table=None):
        table = table or fghk_chart()
        return cls(*(parse(_expand_aliases(str(e), ODD_ALIASES), table) for e in (F, G, H, K)))

    def to_strings(self):
        return {k: str(getattr(self, k)) for k in "FGHK"}


def monge_data(m, table=None):
    """Super-extension of z_x = f(u_xx) with f(s) = s^m/m (f(s) = 1 when m = 0)."""
    m = int(m)
    if m < 0:
        raise ValueError("negative exponents are outside the polynomial engine")
    if m == 0:
        return FGHKData.from_strings("1 + t6*t5", "0", "0", "0", table)
    return FGHKData.from_strings("(%s)*u_xx^%d + t6*t5" % (Fraction(1, m), m),
                                 "u_xx^%d*t6" % (m - 1), "u_xx^%d*t5" % (m - 1),
                                 "-u_xx^%d" % (m - 1), table)


def shc_data(table=None):
    return monge_data(2, table)


def _fghk_fields(d):
    t = d.table
    v = t.var
    one = t.one()
    Dx = SuperVectorField(t, {"x": one, "u": v("u_x"), "u_x": v("u_xx"), "z": d.F,
                              "u_nu": v("u_xnu"), "u_tau": v("u_xtau")}, EVEN)
    Dnu = SuperVectorField(t, {"nu": one, "u": v("u_nu"), "u_x": v("u_xnu"), "z": d.G,
                               "u_tau": d.K}, ODD)
    Dtau = SuperVectorField(t, {"tau": one, "u": v("u_tau"), "u_x": v("u_xtau"), "z": d.H,
                                "u_nu": -d.K}, ODD)
    return Dx, Dnu, Dtau


def fghk_distribution(d):
    """Cartan superdistribution of the FGHK system: <D_x, d_u_xx | D_nu, d_u_xnu, D_tau, d_u_xtau>."""
    t = d.table
    Dx, Dnu, Dtau = _fghk_fields(d)
    P = SuperVectorField.partial
    return Distribution(t, [Dx, P(t, "u_xx"), Dnu, P(t, "u_xnu"), Dtau, P(t, "u_xtau")],
                        ["D_x", "d_u_xx", "D_nu", "d_u_xnu", "D_tau", "d_u_xtau"])


@dataclass
class ConstraintReport:
    identities: dict          # name -> residue (zero polynomial when the identity holds)
    d2F: SuperPolynomial
    d2F_value: Fraction
    point: dict

    @property
    def failed(self):
        out = [k for k, r in self.identities.items() if r]
        if not self.d2F_value:
            out.append("d2F_invertible")
        return out

    @property
    def passed(self):
        return not self.failed

    def to_json(self):
        return {"identities": {k: (not r) for k, r in self.identities.items()},
                "residues": {k: str(r) for k, r in self.identities.items() if r},
                "d2F": str(self.d2F), "d2F_at_point": str(self.d2F_value),
                "d2F_invertible": bool(self.d2F_value), "passed": self.passed}


def fghk_shc_constraints(d, point=None):
    """Differential conditions for the FGHK distribution to be of SHC type.

    Invertibility of d^2F/du_xx^2 is tested by its classical value at `point`
    (default u_xx = 1, all other even coordinates 0).
    """
    F, G, H, K = d.F, d.G, d.H, d.K
    Dx, Dnu, Dtau = _fghk_fields(d)
    dF = {c: F.partial(c) for c in ("u_xx", "u_xnu", "u_xtau")}
    DxK = Dx(K)
    dK = K.partial("u_xx")
    ids = {
        "DxG = DnuF + (DxK)(F_uxtau)": Dx(G) - Dnu(F) - DxK * dF["u_xtau"],
        "DxH = DtauF - (DxK)(F_uxnu)": Dx(H) - Dtau(F) + DxK * dF["u_xnu"],
        "DnuG = 0": Dnu(G),
        "DtauH = 0": Dtau(H),
        "DtauG + DnuH = 0": Dtau(G) + Dnu(H),
        "DnuK = 0": Dnu(K),
        "DtauK = 0": Dtau(K),
        "G_uxnu = F_uxx": G.partial("u_xnu") - dF["u_xx"],
        "H_uxtau = F_uxx": H.partial("u_xtau") - dF["u_xx"],
        "G_uxtau = 0": G.partial("u_xtau"),
        "H_uxnu = 0": H.partial("u_xnu"),
        "K_uxnu = 0": K.partial("u_xnu"),
        "K_uxtau = 0": K.partial("u_xtau"),
        "G_uxx = K_uxx F_uxtau": G.partial("u_xx") - dK * dF["u_xtau"],
        "H_uxx = -K_uxx F_uxnu": H.partial("u_xx") + dK * dF["u_xnu"],
    }
    if point is None:
        point = {"u_xx": Fraction(1)}
    d2F = dF["u_xx"].partial("u_xx")
    return ConstraintReport(ids, d2F, d2F.evaluate(point), dict(point))


def lift_to_m12(d, point=None):
    """Rank (2|2) distribution on the (6|6) line bundle with fibre coordinate lam.

    The even part is spanned by the line l = D_x + lam d_u_xx and d_lam; the
    odd part is the kernel of Xi(l, -), which is spanned by
    D_nu + L d_u_xtau and D_tau - L d_u_xnu with L = D_x K + lam dK/du_xx.
    Raises ValueError when the SHC-type constraints fail.
    """
    rep = fghk_shc_constraints(d, point)
    if not rep.passed:
        raise ValueError("FGHK data is not of SHC type: " + ", ".join(rep.failed))
    t = d.table.extend([("lam", EVEN, 0)])
    Dx, Dnu, Dtau = (X.retable(t) for X in _fghk_fields(d))
    K = d.K.retable(t)
    lam = t.var("lam")
    L = Dx(K) + lam * K.partial("u_xx")
    P = SuperVectorField.partial
    gens = [Dx + P(t, "u_xx").lmul(lam), P(t, "lam"),
            Dnu + P(t, "u_xtau").lmul(L), Dtau - P(t, "u_xnu").lmul(L)]
    return Distribution(t, gens, ["D_x+lam*d_u_xx", "d_lam", "D_nu+L*d_u_xtau", "D_tau-L*d_u_xnu"])


# ------------------------------------------------------- submaximal models

_SUBMAX_EVEN = [
    ("V1", {"x": "1"}),
    ("V2", {"z": "1"}),
    ("V3", {"u_x": "1", "u": "x"}),
    ("V4", {"u": "1"}),
    ("V5", {"x": "x", "u": "2*u", "u_x": "u_x", "z": "z", "tau": "2*t1", "u_nu": "2*t4",
            "u_xtau": "-t5", "u_xnu": "t6"}),
    ("V6", {"u": "u", "u_x": "u_x", "u_xx": "u_xx", "z": "{m}*z", "tau": "t1",
            "nu": "-{m1}*t2", "u_nu": "{m}*t4", "u_xnu": "{m}*t6"}),
    ("V7", {"x": "u_xx^{e1}", "u": "-(z - u_x*u_xx^{e1} + t3*t6 - t4*t5)",
            "u_x": "{r}*u_xx^{e} - t5*t6", "z": "u_xx^{e1}*({s}*u_xx^{e} - t5*t6)",
            "tau": "t6", "nu": "-t5", "u_tau": "u_xx^{e1}*t5", "u_nu": "u_xx^{e1}*t6"}),
    ("V8", {"tau": "t1", "nu": "-t2", "u_tau": "-t3", "u_nu": "t4", "u_xtau": "-t5", "u_xnu": "t6"}),
    ("V9", {"tau": "t2", "u_nu": "-t3", "u_xnu": "-t5"}),
    ("V10", {"nu": "t1", "u_tau": "-t4", "u_xtau": "-t6"}),
]

_SUBMAX_ODD = [
    ("U1", {"u_tau": "1", "u": "-t1"}),
    ("U2", {"u_nu": "1", "u": "-t2"}),
    ("U3", {"tau": "1"}),
    ("U4", {"nu": "1"}),
    ("U5", {"u_xtau": "1", "u_tau": "x", "u": "-x*t1", "u_x": "-t1", "z": "-t4"}),
    ("U6", {"u_xnu": "1", "u_nu": "x", "u": "-x*t2", "u_x": "-t2", "z": "t3"}),
    ("U7", {"x": "t4 - {c}*u_xx^{e1}*t1",
            "u": "u_x*t4 + {c}*((z - u_x*u_xx^{e1})*t1 + t1*t3*t6 - t1*t4*t5)",
            "u_x": "-{c}*({r}*u_xx^{e}*t1 - t1*t5*t6)",
            "u_xx": "-2*u_xx*t6",
            "z": "-u_xx^{e1}*({r}*u_xx^{e}*t1 - {c}*t1*t5*t6)",
            "tau": "-{c}*t1*t6",
            "nu": "u_x + {c}*t1*t5",
            "u_xtau": "-({r}*u_xx^{e} - {tm}*t5*t6)",
            "u_tau": "-{c}*(z + u_xx^{e1}*t1*t5)",
            "u_nu": "-{c}*u_xx^{e1}*t1*t6"}),
    ("U8", {"x": "t3 + {c}*u_xx^{e1}*t2",
            "u": "u_x*t3 + {c}*((u_x*u_xx^{e1} - z)*t2 + t2*t4*t5 - t2*t3*t6)",
            "u_x": "{c}*({r}*u_xx^{e}*t2 - t2*t5*t6)",
            "u_xx": "-2*u_xx*t5",
            "z": "u_xx^{e1}*({r}*u_xx^{e}*t2 - {c}*t2*t5*t6)",
            "tau": "u_x + {c}*t2*t6",
            "nu": "-{c}*t2*t5",
            "u_xnu": "{r}*u_xx^{e} - {tm}*t5*t6",
            "u_tau": "{c}*u_xx^{e1}*t2*t5",
            "u_nu": "{c}*(z + u_xx^{e1}*t2*t6)"}),
]


def submax_weights(m):
    """Positive even weights making the m-model homogeneous.

    They are the eigenvalues of a V5 + V6 - m V8 with a = ceil(m/2), which
    is diagonal and acts on every generator by a scalar.
    """
    a = (m + 1) // 2
    return {"x": a, "u": 2 * a + 1, "u_x": a + 1, "u_xx": 1, "z": a + m,
            "tau": 2 * a + 1 - m, "nu": 1, "u_tau": m, "u_nu": 2 * a,
            "u_xtau": m - a, "u_xnu": a}


def _check_submax_m(m):
    if int(m) != m:
        raise ValueError("m must be an integer")
    m = int(m)
    if m in (0, 1):
        raise ValueError("m = %d gives a distribution of infinite type" % m)
    if m < 2:
        raise ValueError("m must be at least 2 for the polynomial engine")
    return m


def submax_generators(m):
    """Expression dicts of the (10|8) generators for f(s) = s^m/m, as [(name, parity, field)]."""
    m = _check_submax_m(m)
    q = lambda x: "(%s)" % Fraction(x)
    vals = {"m": m, "m1": m - 1, "e": m, "e1": m - 1, "c": 2 * m - 1, "tm": 2 * m,
            "r": q(Fraction(m - 1, m)), "s": q(Fraction(m - 1, m * (2 * m - 1)))}
    out = []
    for par, lst in (("even", _SUBMAX_EVEN), ("odd", _SUBMAX_ODD)):
        for name, f in lst:
            out.append((name, par, {c: e.format(**vals) for c, e in f.items()}))
    return out


def submax_model_dict(m):
    m = _check_submax_m(m)
    w = submax_weights(m)
    d = monge_data(m)
    t = fghk_chart(w)
    spec = {
        "name": "submax-m%d" % m,
        "description": "Super-extension of the Monge equation z_x = u_xx^%d/%d with its "
                       "listed internal symmetries." % (m, m),
        "chart": [[n, "odd" if p else "even", wt] for n, p, wt in t.entries],
        "aliases": ODD_ALIASES,
        "fghk": d.to_strings(),
        "points": {"uxx1": {"u_xx": "1"}},
        "default_point": "uxx1",
        "symmetries": [],
        "expected": {"growth": "(2|4,1|2,2|0)", "symbol": "M1",
                     "symmetry_dim": [17, 14] if m == 2 else [10, 8]},
    }
    model = model_from_dict(spec)
    degs = {}
    for name, par, fld in submax_generators(m):
        X = SuperVectorField(t, {c: model.parse(e) for c, e in fld.items()}, _parity(par))
        deg = X.weighted_degree()
        spec["symmetries"].append({"name": name, "parity": par, "degree": deg, "field": fld})
        e, o = degs.get(deg, (0, 0))
        degs[deg] = (e + (par == "odd" and 0 or 1), o + (par == "odd" and 1 or 0))
    spec["expected"]["listed_dims"] = {str(k): list(v) for k, v in sorted(degs.items())}
    return spec


def submax_model(m):
    return model_from_dict(submax_model_dict(m))


@dataclass
class SubmaxReport:
    m: int
    residues: dict            # generator -> number of nonzero residues
    dims: tuple
    jacobi_violations: int
    sp2: dict
    graded_dims: dict
    info: dict = field(default_factory=dict)

    @property
    def passed(self):
        return (not any(self.residues.values()) and self.dims == (10, 8)
                and self.jacobi_violations == 0 and all(self.sp2.values()))

    def to_json(self):
        return {"m": self.m, "residues": self.residues, "dim": list(self.dims),
                "jacobi_violations": self.jacobi_violations, "sp2_split": self.sp2,
                "graded_dims": {str(k): list(v) for k, v in sorted(self.graded_dims.items())},
                "info": self.info, "passed": self.passed}


def _span_of(vecs):
    sp = Span()
    for v in vecs:
        sp.add(v)
    return sp


def verify_submaximal_generators(m):
    """Symmetry check, closure, dimension and the sp(2) split of the listed generators."""
    model = submax_model(m)
    D, ann = model.distribution, model.annihilator
    names = [n for n, _, _ in model.symmetries]
    fields = [X for _, _, X in model.symmetries]
    res = {n: len(symmetry_residues(X, D, ann)) for n, X in zip(names, fields)}
    L = from_vector_fields(fields, names, closure_check=True,
                           degrees=[d for _, d, _ in model.symmetries])
    jv = len(L.jacobi_violations())
    ix = {n: i for i, n in enumerate(names)}
    sp = [ix["V8"], ix["V9"], ix["V10"]]
    rest = [ix["V%d" % i] for i in range(1, 8)]

    def inside(i, j, S):
        return set(L.bracket_basis(i, j)) <= set(S)

    # <V1..V7> is a complementary subalgebra; the complementary ideal is the
    # centralizer of sp(2) in the even part, which must be 7-dimensional
    cent = centralizer(L, [{i: 1} for i in sp])
    cent_even = [v for v in cent if all(L.par[i] == EVEN for i in v)]
    sp2 = {
        "sp2_closed": all(inside(i, j, sp) for i in sp for j in sp),
        "sp2_simple": _is_sl2(L, *sp),
        "complement_closed": all(inside(i, j, rest) for i in rest for j in rest),
        "centralizer_dim_7": len(cent_even) == 7,
        "even_split": len(_span_of([{i: 1} for i in sp] + cent_even)) == L.dim[0],
    }
    info = {"V1..V7_commute_with_sp2": all(not L.bracket_basis(i, j) for i in sp for j in rest)}
    return SubmaxReport(int(m), res, L.dim, jv, sp2, L.graded_dims(), info)


def _is_sl2(L, h, e, f):
    he, hf, ef = L.bracket_basis(h, e), L.bracket_basis(h, f), L.bracket_basis(e, f)
    if set(he) != {e} or set(hf) != {f} or set(ef) != {h}:
        return False
    return he[e] == -hf[f] and he[e] != 0


# ------------------------------------------------------- symmetry solver

@dataclass
class SymmetryResult:
    model: str
    dims: dict                # degree -> (even, odd)
    basis: dict               # degree -> [SuperVectorField]
    truncated: list
    closure_ok: bool
    closure_unchecked: int
    contains_listed: dict     # name -> bool
    transitive: bool

    @property
    def total(self):
        return (sum(e for e, _ in self.dims.values()), sum(o for _, o in self.dims.values()))

    def to_json(self):
        return {"model": self.model, "total": list(self.total),
                "dims": {str(k): list(v) for k, v in sorted(self.dims.items())},
                "truncated": sorted(self.truncated), "closure_ok": self.closure_ok,
                "closure_unchecked": self.closure_unchecked,
                "contains_listed": dict(sorted(self.contains_listed.items())),
                "transitive": self.transitive,
                "status": "truncated" if self.truncated else "pass"}


def _solve_block(table, gens, forms, k, par, bound):
    """Homogeneous symmetries of weighted degree k and parity par."""
    unknowns = []
    truncated = False
    for c in table.names:
        w = k + table.weight[c]
        if w < 0:
            continue
        if w > bound:
            truncated = True
            continue
        cp = (par + table.parity[c]) % 2
        for key in monomials_of_weight(table, w, cp):
            unknowns.append((c, key))
    checks = {}
    for u, (c, key) in enumerate(unknowns):
        X = SuperVectorField(table, {c: SuperPolynomial(table, {key: Fraction(1)})}, par)
        ch = {}
        for j, V in enumerate(gens):
            B = lie_bracket(X, V)
            if not B:
                continue
            for i, s in enumerate(forms):
                r = insert(B, s)
                if r:
                    ch[(j, i)] = r
        checks[u] = ch
    out = []
    for vec in nullspace(_rows_from(checks), range(len(unknowns))):
        coeffs = {}
        for u, a in vec.items():
            c, key = unknowns[u]
            coeffs.setdefault(c, {})[key] = a
        out.append(SuperVectorField(table, {c: SuperPolynomial(table, t) for c, t in coeffs.items()}, par))
    return k, par, out, truncated


def _worker_count(workers):
    if workers is None:
        workers = int(os.environ.get("G3SUPER_WORKERS", "1") or 1)
    return max(1, workers)


def solve_symmetries(model, bound, degrees, workers=None, point=None):
    """Infinitesimal symmetries, solved one weighted degree at a time.

    For each degree k and parity, the ansatz is a field whose coefficient of
    d/dc has weight k + w(c); the conditions sigma([X, V]) = 0 are linear in
    the unknown coefficients.  Coefficients of weight above `bound` are left
    out and the block is flagged as truncated (its dimension is then a
    lower bound).
    """
    t = model.table
    gens, forms = model.distribution.generators, model.annihilator.forms
    lo, hi = degrees
    tasks = [(t, gens, forms, k, par, bound) for k in range(lo, hi + 1) for par in (EVEN, ODD)]
    nw = _worker_count(workers)
    if nw > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(nw) as ex:
            results = list(ex.map(_solve_block, *zip(*tasks)))
    else:
        results = [_solve_block(*a) for a in tasks]
    basis, dims, truncated = {}, {}, set()
    for k, par, fields, trunc in results:
        basis.setdefault(k, []).extend(fields)
        e, o = dims.get(k, (0, 0))
        dims[k] = (e + len(fields), o) if par == EVEN else (e, o + len(fields))
        if trunc:
            truncated.add(k)
    spans = {}
    for k, fs in basis.items():
        for X in fs:
            spans.setdefault((k, X.parity), Span()).add(_field_vec(X))
    ok, unchecked = True, 0
    flat = [(k, X) for k in sorted(basis) for X in basis[k]]
    for a in range(len(flat)):
        for b in range(a, len(flat)):
            (ka, X), (kb, Y) = flat[a], flat[b]
            B = lie_bracket(X, Y)
            if not B:
                continue
            k = ka + kb
            if not lo <= k <= hi:
                unchecked += 1
                continue
            sp = spans.get((k, B.parity))
            if sp is None or sp.coordinates(_field_vec(B)) is None:
                ok = False
    listed = {}
    for name, deg, X in model.symmetries:
        d = deg if deg is not None else X.weighted_degree()
        if d is None or not lo <= d <= hi:
            continue
        sp = spans.get((d, X.parity))
        listed[name] = sp is not None and sp.coordinates(_field_vec(X)) is not None
    pt = point if point is not None else model.point()
    neg = [X for k in basis if k < 0 for X in basis[k]]
    trans = frame_rank([X.evaluate(pt) for X in neg], [X.parity for X in neg]) == \
        (len(t.even), len(t.odd))
    return SymmetryResult(model.name, dims, basis, sorted(truncated), ok, unchecked, listed, trans)


# ------------------------------------------------------ symbol classification

SYMBOL_MODELS = ("M1", "M2", "M3", "M4")


def classify_symbol(rep):
    """Tag M1..M4 from the invariants of a (2|4,1|2,2|0) symbol, else 'other'."""
    inv = rep.invariants
    bad = [k for k, v in rep.checks.items() if not v]
    tag = "other"
    if not bad:
        rb, rq = inv["rank_beta"], inv["rank_q"]
        if rb == 2 and rq == 4 and inv["omega_nonzero"]:
            tag = "M1"
        elif rb == 1:
            tag = "M2"
        elif rq == 0 and inv["Theta_zero"]:
            tag = "M3"
        elif rb == 2 and rq == 4 and not inv["omega_nonzero"]:
            tag = "M4"
    rep.classification = tag
    if tag == "other":
        rep.invariants["diagnostics"] = ("failed checks: %s" % ", ".join(bad) if bad else
                                         "invariants outside the M1-M4 table")
    return tag


def symbol_report_from_algebra(L):
    """SymbolReport of a graded LSA m = m_-1 + m_-2 + m_-3 given by structure constants."""
    gd = L.graded_dims()
    growth = [tuple(gd.get(-d, (0, 0))) for d in (1, 2, 3)]
    if growth != [(2, 4), (1, 2), (2, 0)] or set(gd) != {-1, -2, -3}:
        raise ValueError("graded dims %s are not (2|4,1|2,2|0)" % gd)
    idx = {}
    for i, (p, d) in enumerate(zip(L.par, L.deg)):
        idx.setdefault((d, p), []).append(i)
    e, th, h, rho, f = idx[(-1, 0)], idx[(-1, 1)], idx[(-2, 0)], idx[(-2, 1)], idx[(-3, 0)]

    def comp(A, B, C):
        return [[[L.bracket_basis(a, b).get(c, Fraction(0)) for c in C] for b in B] for a in A]

    maps = {"omega": comp(e, e, h), "q": comp(th, th, h), "Xi": comp(e, th, rho),
            "Theta": comp(th, rho, f), "beta": comp(e, h, f)}
    rep = SymbolReport(growth, list(L.labels), list(L.par), list(L.deg), dict(L.br), maps)
    _symbol_checks(rep)
    return rep


def load_symbol_fixture(name):
    res = resources.files("g3super.data").joinpath("symbols").joinpath("%s.json" % name.lower())
    return GradedLSA.from_json(json.loads(res.read_text()))


def model_symbol(model, point=None):
    """Symbol components of a model at a point, classified."""
    pt = point if point is not None else model.point()
    rep = symbol_components(model.distribution, pt)
    classify_symbol(rep)
    return rep


# ---------------------------------------------------------- SHC solutions

@dataclass
class SolutionsReport:
    residues: dict            # relation -> residue string ("0" when it vanishes)
    c3_zero: dict
    free_parameters: int
    ansatz_unknowns: int
    branches: int

    @property
    def passed(self):
        return (all(r == "0" for r in self.residues.values()) and self.c3_zero["ok"]
                and self.free_parameters == 5 and self.branches == 1)

    def to_json(self):
        return {"residues": self.residues, "c3_zero": self.c3_zero,
                "free_parameters": self.free_parameters, "ansatz_unknowns": self.ansatz_unknowns,
                "branches": self.branches, "passed": self.passed}


def _shc_relations(u, z):
    P = lambda f, *vs: _chain_partial(f, vs)
    uxx = P(u, "x", "x")
    uxn, uxt = P(u, "x", "nu"), P(u, "x", "tau")
    half = Fraction(1, 2)
    return {
        "z_x = 1/2 u_xx^2 + u_xnu u_xtau": P(z, "x") - uxx * uxx * half - uxn * uxt,
        "z_nu = u_xx u_xnu": P(z, "nu") - uxx * uxn,
        "z_tau = u_xx u_xtau": P(z, "tau") - uxx * uxt,
        "u_nutau = -u_xx": P(u, "nu", "tau") + uxx,
    }


def _chain_partial(f, names):
    # u_{ij} = d_i d_j u: the innermost derivative is the last index
    for n in reversed(names):
        f = f.partial(n)
    return f


def verify_solutions():
    """The five-constant family solves the SHC system, and a cubic ansatz has no other solutions."""
    import sympy

    t = VariableTable([("x", EVEN), ("c0", EVEN), ("c1", EVEN), ("c2", EVEN), ("c3", EVEN),
                       ("c4", EVEN), ("nu", ODD), ("tau", ODD)])
    u = parse("c0 + c1*x + 1/2*c2*x^2 + 1/6*c3*x^3 + (c2 + c3*x)*nu*tau", t)
    z = parse("c4 + 1/2*c2^2*x + 1/2*c2*c3*x^2 + 1/6*c3^2*x^3 + c3*(c2 + c3*x)*nu*tau", t)
    residues = {k: str(r) for k, r in _shc_relations(u, z).items()}
    zero = {"c3": t.zero()}
    z0 = z.substitute(zero)
    c3 = {"z": str(z0), "u": str(u.substitute(zero)),
          "ok": not z0.partial("nu").partial("x") and not z0.partial("x").partial("x")}

    # converse: u = A(x) + B(x) nu tau, z = C(x) + E(x) nu tau, all cubic in x
    names = ["%s%d" % (s, i) for s in "abpq" for i in range(4)]
    ta = VariableTable([("x", EVEN)] + [(n, EVEN) for n in names] + [("nu", ODD), ("tau", ODD)])

    def cubic(s):
        return " + ".join("%s%d*x^%d" % (s, i, i) for i in range(4))
    ua = parse("%s + (%s)*nu*tau" % (cubic("a"), cubic("b")), ta)
    za = parse("%s + (%s)*nu*tau" % (cubic("p"), cubic("q")), ta)
    syms = {n: sympy.Symbol(n) for n in names}
    eqs = set()
    xs = ta.even.index("x")
    for r in _shc_relations(ua, za).values():
        coeff = {}
        for (exps, mask), c in r.terms.items():
            key = (exps[xs], mask)
            mono = sympy.Rational(c.numerator, c.denominator)
            for n, e in zip(ta.even, exps):
                if e and n != "x":
                    mono *= syms[n] ** e
            coeff[key] = coeff.get(key, 0) + mono
        eqs.update(sympy.expand(v) for v in coeff.values())
    eqs.discard(0)
    sols = sympy.solve(sorted(eqs, key=str), [syms[n] for n in names], dict=True)
    # sympy solves for dependent unknowns in terms of the remaining (free) ones
    free = [sum(1 for n in names if syms[n] not in s) for s in sols]
    return SolutionsReport(residues, c3, free[0] if len(set(free)) == 1 else -1,
                           len(names), len(sols))


# ------------------------------------------------------------ SHC algebra

def shc_algebra(model=None):
    """G(3) in the SHC grading, as the structure constants of the listed SHC symmetries."""
    model = model or load_model("shc")
    return from_vector_fields([X for _, _, X in model.symmetries],
                              [n for n, _, _ in model.symmetries],
                              degrees=[d for _, d, _ in model.symmetries])


def verify_shc(model=None):
    """Symmetry residues, closure, super-Jacobi and graded dims of the listed SHC fields."""
    model = model or load_model("shc")
    D, ann = model.distribution, model.annihilator
    res = {n: len(symmetry_residues(X, D, ann)) for n, _, X in model.symmetries}
    degs = {n: (d, X.weighted_degree()) for n, d, X in model.symmetries}
    L = shc_algebra(model)
    jv = L.jacobi_violations()
    want = {int(k): tuple(v) for k, v in model.expected.get("symmetry_dims", {}).items()}
    got = L.graded_dims()
    return {
        "residues": res,
        "degrees_match": all(a == b for a, b in degs.values()),
        "dim": list(L.dim),
        "jacobi_violations": len(jv),
        "graded_dims": {str(k): list(v) for k, v in sorted(got.items())},
        "graded_dims_match": {k: tuple(v) for k, v in got.items()} == want,
        "passed": (not any(res.values()) and all(a == b for a, b in degs.values())
                   and not jv and {k: tuple(v) for k, v in got.items()} == want),
    }


# ------------------------------------------------- Cauchy characteristics

def system_dist_characteristic(model=None, bound=1):
    """Cauchy characteristics of the (3|4) distribution on the G(3)-contact super-PDE.

    Returns the fields found and whether they span exactly the line of
    C = D_x - lam D_y - th D_nu - ph D_tau.
    """
    from .geometry import cauchy_characteristics
    model = model or load_model("g3contact")
    D = model.distribution
    t = D.table
    g = dict(zip(D.names, D.generators))
    C = g["D_x"] - g["D_y"].lmul(t.var("lam")) - g["D_nu"].lmul(t.var("th")) \
        - g["D_tau"].lmul(t.var("ph"))
    found = cauchy_characteristics(D, bound, model.annihilator)
    sp = _span_of([_field_vec(X) for X in found])
    ok = len(found) == 1 and len(sp) == 1 and sp.coordinates(_field_vec(C)) is not None
    return {"found": [str(X) for X in found], "expected": str(C), "rank": len(found),
            "is_symmetry": not symmetry_residues(C, D, model.annihilator), "passed": ok}

"""
Supervector fields, one-forms and distributions on coordinate superdomains.

Conventions: a field is X = sum_c X^c d/dq^c with coefficients on the left,
acting on functions through left derivatives.  A one-form is stored as
sigma = sum_c (dq^c) a_c with coefficients on the right, and insertion is
i_X sigma = sum_c X^c a_c.  With these choices the Darboux form
du - sum (dx^i) u_i is killed by every total derivative D_{x^i}.
"""

import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product

from .grassmann import EVEN, ODD, SuperPolynomial, parse
from .linalg import Span, nullspace


class SuperVectorField:
    __slots__ = ("table", "coeffs", "parity")

    def __init__(self, table, coeffs, parity=None):
        self.table = table
        cs = {}
        for c, v in coeffs.items():
            table.check(c)
            if not isinstance(v, SuperPolynomial):
                v = table.const(v)
            elif v.table != table:
                raise ValueError("coefficient of d/d%s lives in another table" % c)
            if v:
                cs[c] = v
        inferred = None
        for c, v in cs.items():
            vp = v.parity()
            if vp is None:
                raise ValueError("coefficient of d/d%s is not parity-homogeneous" % c)
            fp = (vp + table.parity[c]) % 2
            if inferred is None:
                inferred = fp
            elif inferred != fp:
                raise ValueError("field is not parity-homogeneous")
        if parity is None:
            parity = inferred if inferred is not None else EVEN
        elif inferred is not None and inferred != parity:
            raise ValueError("declared parity %d does not match coefficients" % parity)
        self.coeffs = {c: cs[c] for c in table.names if c in cs}
        self.parity = parity

    @classmethod
    def from_strings(cls, table, comps, parity=None):
        return cls(table, {c: parse(str(e), table) for c, e in comps.items()}, parity)

    @classmethod
    def partial(cls, table, name):
        return cls(table, {name: table.one()})

    def __call__(self, f):
        return self.apply(f)

    def apply(self, f):
        """X(f) = sum_c X^c (d_c f)."""
        out = self.table.zero()
        for c, a in self.coeffs.items():
            d = f.partial(c)
            if d:
                out = out + a * d
        return out

    def is_zero(self):
        return not self.coeffs

    def __bool__(self):
        return bool(self.coeffs)

    def __eq__(self, other):
        if not isinstance(other, SuperVectorField):
            return NotImplemented
        return self.table == other.table and self.coeffs == other.coeffs and (
            self.parity == other.parity or not self.coeffs)

    def __hash__(self):
        return hash((self.table, tuple(self.coeffs.items())))

    def _combine(self, other, sign):
        if other.table != self.table:
            raise ValueError("chart mismatch")
        if self.coeffs and other.coeffs and self.parity != other.parity:
            raise ValueError("cannot add fields of different parity")
        cs = dict(self.coeffs)
        for c, v in other.coeffs.items():
            v = v if sign > 0 else -v
            cs[c] = cs[c] + v if c in cs else v
        par = self.parity if self.coeffs else other.parity
        return SuperVectorField(self.table, cs, par)

    def __add__(self, other):
        return self._combine(other, 1)

    def __sub__(self, other):
        return self._combine(other, -1)

    def __neg__(self):
        return SuperVectorField(self.table, {c: -v for c, v in self.coeffs.items()}, self.parity)

    def scale(self, c):
        return SuperVectorField(self.table, {k: v.scale(c) for k, v in self.coeffs.items()}, self.parity)

    def lmul(self, f):
        """The field f*X (function on the left)."""
        fp = f.parity()
        if fp is None:
            raise ValueError("multiplier is not parity-homogeneous")
        return SuperVectorField(self.table, {k: f * v for k, v in self.coeffs.items()},
                                (self.parity + fp) % 2)

    def __rmul__(self, f):
        if isinstance(f, SuperPolynomial):
            return self.lmul(f)
        return self.scale(f)

    def evaluate(self, point):
        """Value at a classical point (odd coordinates zero)."""
        out = {}
        for c, v in self.coeffs.items():
            x = v.evaluate(point)
            if x:
                out[c] = x
        return out

    def weighted_degree(self):
        t = self.table
        ws = set()
        for c, v in self.coeffs.items():
            for key in v.terms:
                ws.add(t.term_weight(key) - t.weight[c])
        return ws.pop() if len(ws) == 1 else None

    def substitute(self, bindings):
        target = None
        cs = {}
        for c, v in self.coeffs.items():
            w = v.substitute(bindings)
            cs[c] = w
            target = w.table
        return SuperVectorField(target or self.table, cs, self.parity)

    def retable(self, table):
        return SuperVectorField(table, {c: v.retable(table) for c, v in self.coeffs.items()}, self.parity)

    def to_strings(self):
        return {c: str(v) for c, v in self.coeffs.items()}

    def __repr__(self):
        if not self.coeffs:
            return "0"
        return " + ".join("(%s)*d_%s" % (v, c) for c, v in self.coeffs.items())


def lie_bracket(X, Y):
    """[X,Y]^c = X(Y^c) - (-1)^{|X||Y|} Y(X^c)."""
    if X.table != Y.table:
        raise ValueError("chart mismatch")
    t = X.table
    sign = -1 if (X.parity & Y.parity) else 1
    cs = {}
    for c in t.names:
        a = Y.coeffs.get(c)
        b = X.coeffs.get(c)
        v = t.zero()
        if a is not None:
            v = v + X.apply(a)
        if b is not None:
            w = Y.apply(b)
            v = v - w if sign > 0 else v + w
        if v:
            cs[c] = v
    return SuperVectorField(t, cs, (X.parity + Y.parity) % 2)


class SuperOneForm:
    """sigma = sum_c (dq^c) a_c."""

    __slots__ = ("table", "coeffs", "parity")

    def __init__(self, table, coeffs, parity=None):
        self.table = table
        cs = {}
        inferred = None
        for c, v in coeffs.items():
            table.check(c)
            if not isinstance(v, SuperPolynomial):
                v = table.const(v)
            if not v:
                continue
            vp = v.parity()
            if vp is None:
                raise ValueError("coefficient of d%s is not parity-homogeneous" % c)
            fp = (vp + table.parity[c]) % 2
            if inferred is None:
                inferred = fp
            elif fp != inferred:
                raise ValueError("form is not parity-homogeneous")
            cs[c] = v
        if parity is None:
            parity = inferred if inferred is not None else EVEN
        elif inferred is not None and inferred != parity:
            raise ValueError("declared parity does not match coefficients")
        self.coeffs = {c: cs[c] for c in table.names if c in cs}
        self.parity = parity

    @classmethod
    def from_strings(cls, table, comps, parity=None):
        return cls(table, {c: parse(str(e), table) for c, e in comps.items()}, parity)

    def __repr__(self):
        return " + ".join("(d%s)*(%s)" % (c, v) for c, v in self.coeffs.items()) or "0"

    def to_strings(self):
        return {c: str(v) for c, v in self.coeffs.items()}


def insert(X, sigma):
    if X.table != sigma.table:
        raise ValueError("chart mismatch")
    out = X.table.zero()
    for c, a in sigma.coeffs.items():
        xc = X.coeffs.get(c)
        if xc is not None:
            out = out + xc * a
    return out


def exterior_d(f):
    """df = sum_b (dq^b) d_b f."""
    t = f.table
    return SuperOneForm(t, {b: f.partial(b) for b in t.names})


def lie_derivative_form(X, sigma):
    """L_X sigma via the Cartan formula on coordinate differentials.

    L_X dq^c = d(i_X dq^c) = d(X^c), and X passes the differential dq^c with
    the sign (-1)^{|X||c|}.
    """
    t = X.table
    cs = {}

    def acc(c, v):
        if v:
            cs[c] = cs[c] + v if c in cs else v

    for c, a in sigma.coeffs.items():
        xc = X.coeffs.get(c)
        if xc is not None:
            for b in t.names:
                d = xc.partial(b)
                if d:
                    acc(b, d * a)
        xa = X.apply(a)
        if xa:
            acc(c, -xa if (X.parity & t.parity[c]) else xa)
    return SuperOneForm(t, cs, (X.parity + sigma.parity) % 2)


class Distribution:
    def __init__(self, table, generators, names=None):
        self.table = table
        self.generators = list(generators)
        for g in self.generators:
            if g.table != table:
                raise ValueError("generator on another chart")
        self.names = list(names) if names else ["V%d" % (i + 1) for i in range(len(self.generators))]

    def __len__(self):
        return len(self.generators)

    def rank_at(self, point):
        return frame_rank([g.evaluate(point) for g in self.generators],
                          [g.parity for g in self.generators])


class PfaffianSystem:
    def __init__(self, table, forms):
        self.table = table
        self.forms = list(forms)

    def __len__(self):
        return len(self.forms)

    def annihilates(self, D):
        """List of (form index, generator index, residue) where sigma(V) != 0."""
        bad = []
        for i, s in enumerate(self.forms):
            for j, V in enumerate(D.generators):
                r = insert(V, s)
                if r:
                    bad.append((i, j, r))
        return bad


def annihilator_from_graph(D):
    """Annihilator of a distribution given in graph form.

    Each generator must contain exactly one 'leading' coordinate field d_a with
    coefficient 1 such that no other generator involves d_a.  Then
    sigma_c = dq^c - sum_g (dq^{a_g}) V_g^c for the remaining coordinates c.
    """
    t = D.table
    leads = []
    for g in D.generators:
        found = None
        for c, v in g.coeffs.items():
            if v == 1 and all(c not in h.coeffs for h in D.generators if h is not g):
                found = c
                break
        if found is None:
            raise ValueError("distribution is not in graph form; supply an annihilator")
        leads.append(found)
    forms = []
    for c in t.names:
        if c in leads:
            continue
        cs = {c: t.one()}
        for a, g in zip(leads, D.generators):
            v = g.coeffs.get(c)
            if v is not None:
                cs[a] = -v
        forms.append(SuperOneForm(t, cs))
    return PfaffianSystem(t, forms)


def symmetry_residues(X, D, ann):
    """Nonzero sigma([X,V]) values as (form index, generator index, residue)."""
    out = []
    for j, V in enumerate(D.generators):
        B = lie_bracket(X, V)
        for i, s in enumerate(ann.forms):
            r = insert(B, s)
            if r:
                out.append((i, j, r))
    return out


def annihilator_symmetry_check(X, D, ann, check_pair=True):
    if check_pair:
        bad = ann.annihilates(D)
        if bad:
            i, j, r = bad[0]
            raise ValueError("form %d does not annihilate generator %d: %s" % (i, j, r))
    for j, V in enumerate(D.generators):
        B = lie_bracket(X, V)
        for s in ann.forms:
            if insert(B, s):
                return False
    return True


# ----------------------------------------------------------- pointwise ranks

def frame_rank(values, parities):
    ev, od = Span(), Span()
    for v, p in zip(values, parities):
        (od if p else ev).add(v)
    return (len(ev), len(od))


def sample_points(table, n, seed=0, base=None):
    rng = random.Random(seed)
    pts = []
    for _ in range(n):
        pt = dict(base or {})
        for c in table.even:
            pt[c] = Fraction(rng.randint(-7, 7), rng.randint(1, 3))
        pts.append(pt)
    return pts


@dataclass
class FlagResult:
    growth: list
    frames: list          # per depth: list of (label, field)
    regular: bool
    samples: list = field(default_factory=list)
    rank_drop: bool = False

    def growth_str(self):
        return format_growth(self.growth)


def format_growth(g):
    return "(" + ",".join("%d|%d" % (a, b) for a, b in g) + ")"


def _flag_at(D, point, max_depth):
    t = D.table
    span = {0: Span(), 1: Span()}
    frames = []
    first = []
    for name, g in zip(D.names, D.generators):
        if span[g.parity].add(g.evaluate(point)):
            first.append((name, g))
    frames.append(first)
    growth = [tuple(sum(1 for _, g in first if g.parity == p) for p in (0, 1))]
    total = len(t.even) + len(t.odd)
    newest = first
    while len(frames) < max_depth:
        new = []
        for (an, a), (bn, b) in product(first, newest):
            B = lie_bracket(a, b)
            if B and span[B.parity].add(B.evaluate(point)):
                new.append(("[%s,%s]" % (an, bn), B))
        if not new:
            break
        frames.append(new)
        growth.append(tuple(sum(1 for _, g in new if g.parity == p) for p in (0, 1)))
        newest = new
        if len(span[0]) + len(span[1]) == total:
            break
    return growth, frames


def derived_flag(D, point, max_depth=12, samples=3, seed=0):
    """Weak derived flag ranks at a classical point.

    Regularity is witnessed by recomputing the growth at pseudo-random
    sample points; a smaller growth at `point` is reported as a rank drop.
    """
    growth, frames = _flag_at(D, point, max_depth)
    others = []
    for pt in sample_points(D.table, samples, seed):
        g, _ = _flag_at(D, pt, max_depth)
        others.append(g)
    regular = all(g == growth for g in others)
    drop = any(sum(map(sum, g)) > sum(map(sum, growth)) or g != growth and _dominates(g, growth)
               for g in others)
    return FlagResult(growth, frames, regular, others, drop)


def _dominates(a, b):
    # a reaches at least the ranks of b at every depth (cumulatively), and somewhere more
    ca = cb = (0, 0)
    more = False
    for i in range(max(len(a), len(b))):
        x = a[i] if i < len(a) else (0, 0)
        y = b[i] if i < len(b) else (0, 0)
        ca = (ca[0] + x[0], ca[1] + x[1])
        cb = (cb[0] + y[0], cb[1] + y[1])
        if ca[0] < cb[0] or ca[1] < cb[1]:
            return False
        if ca != cb:
            more = True
    return more


# ------------------------------------------------------- Cauchy characteristics

def monomials_of_weight(table, w, parity=None):
    """All monomial keys of exact weighted degree w (and optional parity)."""
    even = table.even
    ew = [table.weight[n] for n in even]
    if any(x <= 0 for x in ew):
        raise ValueError("even weights must be positive for a finite ansatz")
    odd_w = [table.weight[n] for n in table.odd]
    out = []
    nodd = len(odd_w)
    odd_by_w = {}
    for mask in range(1 << nodd):
        if parity is not None and (mask.bit_count() & 1) != parity:
            continue
        s = sum(odd_w[k] for k in range(nodd) if mask >> k & 1)
        odd_by_w.setdefault(s, []).append(mask)

    def even_parts(i, rem):
        if i == len(even):
            if rem == 0:
                yield ()
            return
        e = 0
        while e * ew[i] <= rem:
            for rest in even_parts(i + 1, rem - e * ew[i]):
                yield (e,) + rest
            e += 1

    cache = {}
    for s, masks in sorted(odd_by_w.items()):
        rem = w - s
        if rem < 0:
            continue
        if rem not in cache:
            cache[rem] = list(even_parts(0, rem))
        for ex in cache[rem]:
            for m in masks:
                out.append((ex, m))
    out.sort()
    return out


def _mono(table, key):
    return SuperPolynomial(table, {key: Fraction(1)})


def _rows_from(polys_by_unknown):
    """Collect linear conditions: sum_u x_u * P_u,k = 0 for all check keys k and monomials."""
    rows = {}
    for u, checks in polys_by_unknown.items():
        for ck, p in checks.items():
            for mono, c in p.terms.items():
                rows.setdefault((ck, mono), {})[u] = c
    return list(rows.values())


def cauchy_characteristics(D, weighted_degree_bound, ann=None):
    """Module generators of the Cauchy characteristic fields found with the ansatz.

    The ansatz is X = sum_i a_i V_i, where a_i runs over polynomials whose
    weighted degree lies between 0 and the bound.  The conditions are
    sigma([X, V_j]) = 0 for every generator V_j and annihilator form sigma.
    Solutions that are polynomial multiples of earlier ones are dropped.
    """
    if weighted_degree_bound < 0:
        raise ValueError("bound must be nonnegative")
    t = D.table
    if ann is None:
        ann = annihilator_from_graph(D)
    gens = D.generators
    gdeg = [g.weighted_degree() for g in gens]
    homogeneous = all(d is not None for d in gdeg)
    unknowns = []   # (group, parity of X, gen index, monomial key)
    for par in (EVEN, ODD):
        for i, g in enumerate(gens):
            cp = (par + g.parity) % 2
            for w in range(0, weighted_degree_bound + 1):
                for key in monomials_of_weight(t, w, cp):
                    grp = (par, gdeg[i] + w) if homogeneous else (par, None)
                    unknowns.append((grp, i, key))
    groups = {}
    for u in unknowns:
        groups.setdefault(u[0], []).append(u)
    found = []
    for grp in sorted(groups, key=lambda g: (g[0], g[1] if g[1] is not None else 0)):
        us = groups[grp]
        checks = {}
        fields = {}
        for idx, (_, i, key) in enumerate(us):
            X = gens[i].lmul(_mono(t, key))
            fields[idx] = X
            ch = {}
            for j, V in enumerate(gens):
                B = lie_bracket(X, V)
                for k, s in enumerate(ann.forms):
                    r = insert(B, s)
                    if r:
                        ch[(j, k)] = r
            checks[idx] = ch
        rows = _rows_from(checks)
        basis = nullspace(rows, range(len(us)))
        sols = []
        for v in basis:
            X = None
            for idx, c in v.items():
                term = fields[idx].scale(c)
                X = term if X is None else X + term
            sols.append(X)
        # drop module multiples of generators already found
        if found and sols:
            mult = Span()
            for G in found:
                p2 = (grp[0] + G.parity) % 2
                dw = None if grp[1] is None else grp[1] - G.weighted_degree()
                if dw is None or dw < 0:
                    continue
                for key in monomials_of_weight(t, dw, p2):
                    mult.add(_field_vec(G.lmul(_mono(t, key))))
            kept = []
            for X in sols:
                if mult.add(_field_vec(X)):
                    kept.append(X)
            sols = kept
        found.extend(sols)
    return found


def _field_vec(X):
    v = {}
    for c, p in X.coeffs.items():
        for k, a in p.terms.items():
            v[(c, k)] = a
    return v


# ------------------------------------------------------------ symbol data

@dataclass
class SymbolReport:
    growth: list
    labels: list                  # basis labels of m (depth-graded, adapted frame)
    parities: list
    degrees: list
    brackets: dict                # (i, j) -> {k: value}
    maps: dict = field(default_factory=dict)
    checks: dict = field(default_factory=dict)
    invariants: dict = field(default_factory=dict)
    classification: str = None
    regular: bool = True

    def algebra(self):
        from .liesuper import GradedLSA
        return GradedLSA([(l, p, d) for l, p, d in zip(self.labels, self.parities, self.degrees)],
                         self.brackets)

    def to_json(self):
        def mat(m):
            return [[[str(x) for x in cell] for cell in row] for row in m]
        return {
            "growth": format_growth(self.growth),
            "basis": [{"label": l, "parity": p, "degree": d}
                      for l, p, d in zip(self.labels, self.parities, self.degrees)],
            "maps": {k: mat(v) for k, v in sorted(self.maps.items())},
            "checks": dict(sorted(self.checks.items())),
            "invariants": {k: (str(v) if isinstance(v, Fraction) else v)
                           for k, v in sorted(self.invariants.items())},
            "classification": self.classification,
            "regular": self.regular,
        }


def symbol_algebra(D, point, flag=None):
    """Graded symbol m = g_-1 + g_-2 + ... at a point, as structure constants."""
    if flag is None:
        flag = derived_flag(D, point)
    frames = flag.frames
    labels, pars, degs, fields = [], [], [], []
    for depth, fr in enumerate(frames, start=1):
        for lab, X in fr:
            labels.append(lab)
            pars.append(X.parity)
            degs.append(-depth)
            fields.append(X)
    # span of lower filtrands, tagged by basis index
    brackets = {}
    n = len(fields)
    for i in range(n):
        for j in range(i, n):
            d = degs[i] + degs[j]
            if -d > len(frames):
                continue
            B = lie_bracket(fields[i], fields[j])
            if not B:
                continue
            val = B.evaluate(point)
            sp = Span()
            for k in range(n):
                if degs[k] >= d and pars[k] == B.parity:
                    sp.add(fields[k].evaluate(point), k)
            coords = sp.coordinates(val)
            if coords is None:
                raise ValueError("bracket leaves the flag at the point")
            out = {k: c for k, c in coords.items() if degs[k] == d}
            if out:
                brackets[(i, j)] = out
                sgn = 1 if (pars[i] & pars[j]) else -1
                if i != j:
                    brackets[(j, i)] = {k: sgn * c for k, c in out.items()}
    return labels, pars, degs, brackets, flag


def symbol_components(D, point, flag=None):
    """Bracket components of a (2|4,1|2,2|0) symbol in the adapted frame."""
    labels, pars, degs, br, flag = symbol_algebra(D, point, flag)
    if [tuple(g) for g in flag.growth] != [(2, 4), (1, 2), (2, 0)]:
        raise ValueError("growth %s is not (2|4,1|2,2|0)" % format_growth(flag.growth))
    idx = {}
    for i, (p, d) in enumerate(zip(pars, degs)):
        idx.setdefault((d, p), []).append(i)
    e, th = idx[(-1, 0)], idx[(-1, 1)]
    h, rho = idx[(-2, 0)], idx[(-2, 1)]
    f = idx[(-3, 0)]

    def comp(A, B, C):
        return [[[br.get((a, b), {}).get(c, Fraction(0)) for c in C] for b in B] for a in A]

    maps = {
        "omega": comp(e, e, h),
        "q": comp(th, th, h),
        "Xi": comp(e, th, rho),
        "Theta": comp(th, rho, f),
        "beta": comp(e, h, f),
    }
    rep = SymbolReport(flag.growth, labels, pars, degs, br, maps)
    rep.regular = flag.regular
    _symbol_checks(rep)
    return rep


def _vec_rank(rows):
    sp = Span()
    for r in rows:
        sp.add({i: x for i, x in enumerate(r) if x})
    return len(sp)


def _symbol_checks(rep):
    m = rep.maps
    om, q, Xi, Th, be = m["omega"], m["q"], m["Xi"], m["Theta"], m["beta"]
    ne, nt = len(om), len(q)
    zero = Fraction(0)

    def nz(M):
        return any(x for a in M for b in a for x in b)

    # Jacobi identity Theta(t1, Xi(e,t2)) + Theta(t2, Xi(e,t1)) = beta(e, q(t1,t2))
    ji = True
    for a in range(ne):
        for i in range(nt):
            for j in range(nt):
                for k in range(2):
                    lhs = sum((Th[i][r][k] * Xi[a][j][r] + Th[j][r][k] * Xi[a][i][r]
                               for r in range(2)), zero)
                    rhs = sum((be[a][0][k] * q[i][j][0],), zero)
                    if lhs != rhs:
                        ji = False
    im_xi = _vec_rank([Xi[a][i] for a in range(ne) for i in range(nt)])
    im_f = _vec_rank([be[a][0] for a in range(ne)] +
                     [Th[i][r] for i in range(nt) for r in range(2)])
    n1 = _vec_rank([[om[a][b][0] for b in range(ne)] + [x for i in range(nt) for x in Xi[a][i]]
                    for a in range(ne)]) == ne
    n2 = _vec_rank([[q[i][j][0] for j in range(nt)] + [x for a in range(ne) for x in Xi[a][i]]
                    for i in range(nt)]) == nt
    rep.checks = {
        "jacobi": ji,
        "F1": nz(om) or nz(q),
        "F2": im_xi == 2,
        "F3": im_f == 2,
        "N1": n1,
        "N2": n2,
    }
    rep.invariants = {
        "rank_beta": _vec_rank([be[a][0] for a in range(ne)]),
        "rank_q": _vec_rank([[q[i][j][0] for j in range(nt)] for i in range(nt)]),
        "omega_nonzero": nz(om),
        "Theta_zero": not nz(Th),
    }
    return rep

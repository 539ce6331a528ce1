"""
Graded Lie superalgebras over Q given by structure constants.

Elements are sparse dicts {basis index: Fraction}.  Brackets are stored for
both orders of each basis pair.  Also here: construction from vector fields,
graded derivations, Tanaka prolongation, and the G(3) root data with its
four simple systems and parabolic gradings.
"""

import json
import re
from dataclasses import dataclass
from fractions import Fraction
from importlib import resources

from .geometry import format_growth
from .linalg import Span, nullspace


def _sign(p, q):
    return -1 if (p & q) else 1


def _addto(acc, vec, c=1):
    for k, v in vec.items():
        x = acc.get(k, 0) + c * v
        if x:
            acc[k] = x
        else:
            acc.pop(k, None)
    return acc


class GradedLSA:
    def __init__(self, basis, brackets, check=True):
        self.basis = [(str(l), int(p), int(d)) for l, p, d in basis]
        self.labels = [b[0] for b in self.basis]
        self.par = [b[1] for b in self.basis]
        self.deg = [b[2] for b in self.basis]
        self.br = {}
        for (i, j), vec in brackets.items():
            vec = {k: Fraction(v) for k, v in vec.items() if v}
            if vec:
                self.br[(i, j)] = vec
        # fill in the opposite order where missing
        for (i, j), vec in list(self.br.items()):
            if (j, i) not in self.br and i != j:
                s = -_sign(self.par[i], self.par[j])
                self.br[(j, i)] = {k: s * v for k, v in vec.items()}
        self.maps = None
        if check:
            bad = self.grading_violations()
            if bad:
                raise ValueError("structure constants violate grading: %r" % (bad[:3],))

    def __len__(self):
        return len(self.basis)

    @property
    def dim(self):
        e = sum(1 for p in self.par if p == 0)
        return (e, len(self.par) - e)

    def bracket_basis(self, i, j):
        return self.br.get((i, j), {})

    def bracket(self, x, y):
        out = {}
        for i, a in x.items():
            for j, b in y.items():
                v = self.br.get((i, j))
                if v:
                    _addto(out, v, a * b)
        return out

    def ad(self, x):
        """Matrix of ad x as {column j: {row k: value}}."""
        return {j: self.bracket(x, {j: 1}) for j in range(len(self))}

    def grading_violations(self):
        bad = []
        for (i, j), vec in self.br.items():
            for k in vec:
                if self.deg[k] != self.deg[i] + self.deg[j]:
                    bad.append(("degree", i, j, k))
                if self.par[k] != (self.par[i] + self.par[j]) % 2:
                    bad.append(("parity", i, j, k))
        return bad

    def antisymmetry_violations(self):
        bad = []
        for (i, j), vec in self.br.items():
            other = self.br.get((j, i), {})
            s = -_sign(self.par[i], self.par[j])
            if {k: s * v for k, v in vec.items()} != other:
                bad.append((i, j))
        return bad

    def jacobi_violations(self, limit=None):
        """Triples (a,b,c) where [a,[b,c]] != [[a,b],c] + (-1)^{|a||b|}[b,[a,c]]."""
        n = len(self)
        bad = []
        for a in range(n):
            for b in range(a, n):
                ab = self.br.get((a, b), {})
                for c in range(n):
                    lhs = self.bracket({a: 1}, self.br.get((b, c), {}))
                    rhs = self.bracket(ab, {c: 1})
                    s = _sign(self.par[a], self.par[b])
                    _addto(rhs, self.bracket({b: 1}, self.br.get((a, c), {})), s)
                    if lhs != rhs:
                        bad.append((a, b, c))
                        if limit and len(bad) >= limit:
                            return bad
        return bad

    def graded_dims(self):
        out = {}
        for p, d in zip(self.par, self.deg):
            e, o = out.get(d, (0, 0))
            out[d] = (e + 1, o) if p == 0 else (e, o + 1)
        return dict(sorted(out.items()))

    def indices(self, degrees=None, parity=None):
        return [i for i in range(len(self))
                if (degrees is None or self.deg[i] in degrees)
                and (parity is None or self.par[i] == parity)]

    def restrict(self, idx):
        """Subalgebra on a set of basis indices (must be closed)."""
        idx = list(idx)
        pos = {i: n for n, i in enumerate(idx)}
        br = {}
        for a in idx:
            for b in idx:
                v = self.br.get((a, b))
                if v:
                    if any(k not in pos for k in v):
                        raise ValueError("indices do not span a subalgebra")
                    br[(pos[a], pos[b])] = {pos[k]: c for k, c in v.items()}
        return GradedLSA([self.basis[i] for i in idx], br)

    def negative_part(self):
        return self.restrict(self.indices([d for d in set(self.deg) if d < 0]))

    def regrade(self, degrees):
        return GradedLSA([(l, p, d) for (l, p, _), d in zip(self.basis, degrees)], self.br)

    def killing_rank(self):
        """Rank of the supertrace form str(ad x ad y)."""
        n = len(self)
        ads = [self.ad({i: 1}) for i in range(n)]
        rows = []
        for i in range(n):
            row = {}
            for j in range(n):
                # str(ad_i ad_j) = sum_k (-1)^{|k|} (ad_i ad_j)_{kk}
                t = Fraction(0)
                for k in range(n):
                    mid = ads[j][k]
                    s = 0
                    for m, v in mid.items():
                        w = ads[i][m].get(k)
                        if w:
                            s += v * w
                    if s:
                        t += -s if self.par[k] else s
                if t:
                    row[j] = t
            rows.append(row)
        return n - len(nullspace(rows, range(n)))

    def fingerprint(self):
        """Basis-independent data: graded dims, Killing rank, dims of derived series."""
        return {
            "graded_dims": {str(k): list(v) for k, v in self.graded_dims().items()},
            "killing_rank": self.killing_rank(),
            "derived_dim": _span_dim([v for v in self.br.values()]),
        }

    def to_records(self):
        recs = []
        for (i, j), vec in sorted(self.br.items()):
            if i <= j:
                for k, v in sorted(vec.items()):
                    recs.append([i, j, k, str(v)])
        return recs

    def to_json(self):
        return {"basis": [list(b) for b in self.basis], "brackets": self.to_records()}

    @classmethod
    def from_json(cls, data):
        br = {}
        for i, j, k, v in data["brackets"]:
            br.setdefault((i, j), {})[k] = Fraction(v)
        return cls([tuple(b) for b in data["basis"]], br)


def _span_dim(vecs):
    s = Span()
    for v in vecs:
        s.add(v)
    return len(s)


def graded_dims(L):
    return L.graded_dims()


def from_elements(elements, bracket, tovec, parities, degrees, labels=None, closure_check=True):
    """Structure constants of the span of `elements` under `bracket`.

    `tovec` flattens an element into a sparse coefficient dict used for the
    exact linear solve.
    """
    n = len(elements)
    labels = labels or ["X%d" % (i + 1) for i in range(n)]
    span = Span()
    for i, e in enumerate(elements):
        if not span.add(tovec(e), i):
            raise ValueError("element %s is linearly dependent on the previous ones" % labels[i])
    br = {}
    for i in range(n):
        for j in range(i, n):
            B = bracket(elements[i], elements[j])
            v = tovec(B)
            if not v:
                continue
            coords = span.coordinates(v)
            if coords is None:
                if closure_check:
                    raise ValueError("bracket [%s,%s] leaves the span" % (labels[i], labels[j]))
                continue
            br[(i, j)] = coords
    return GradedLSA(list(zip(labels, parities, degrees)), br)


def from_vector_fields(fields, labels=None, closure_check=True, degrees=None):
    from .geometry import lie_bracket, _field_vec
    if degrees is None:
        degrees = []
        for X in fields:
            d = X.weighted_degree()
            if d is None:
                raise ValueError("field is not weighted-homogeneous; pass degrees explicitly")
            degrees.append(d)
    return from_elements(fields, lie_bracket, _field_vec, [X.parity for X in fields],
                         degrees, labels, closure_check)


# ------------------------------------------------------------- derivations

def _apply_map(mp, vec):
    out = {}
    for a, c in vec.items():
        v = mp.get(a)
        if v:
            _addto(out, v, c)
    return out


def derivation_residue(m, mp, parity):
    """Nonzero D[a,b] - [Da,b] - (-1)^{|D||a|}[a,Db] over basis pairs."""
    bad = []
    n = len(m)
    for a in range(n):
        for b in range(a, n):
            lhs = _apply_map(mp, m.bracket_basis(a, b))
            rhs = m.bracket(mp.get(a, {}), {b: 1})
            _addto(rhs, m.bracket({a: 1}, mp.get(b, {})), _sign(parity, m.par[a]))
            if lhs != rhs:
                bad.append((a, b))
    return bad


def derivations_gr(m):
    """Degree-0 derivations of a graded LSA, as a GradedLSA with `.maps`."""
    n = len(m)
    maps, pars = [], []
    for P in (0, 1):
        unknowns = [(a, t) for a in range(n) for t in range(n)
                    if m.deg[t] == m.deg[a] and m.par[t] == (m.par[a] + P) % 2]
        uidx = {u: i for i, u in enumerate(unknowns)}
        rows = {}
        for a in range(n):
            for b in range(a, n):
                # D[a,b]
                for c, v in m.bracket_basis(a, b).items():
                    for t in range(n):
                        u = uidx.get((c, t))
                        if u is not None:
                            for k in (t,):
                                rows.setdefault((a, b, k), {})
                                rows[(a, b, k)][u] = rows[(a, b, k)].get(u, 0) + v
                # -[Da,b]
                for t in range(n):
                    u = uidx.get((a, t))
                    if u is None:
                        continue
                    for k, v in m.bracket_basis(t, b).items():
                        r = rows.setdefault((a, b, k), {})
                        r[u] = r.get(u, 0) - v
                # -(-1)^{P|a|}[a,Db]
                s = _sign(P, m.par[a])
                for t in range(n):
                    u = uidx.get((b, t))
                    if u is None:
                        continue
                    for k, v in m.bracket_basis(a, t).items():
                        r = rows.setdefault((a, b, k), {})
                        r[u] = r.get(u, 0) - s * v
        for vec in nullspace(list(rows.values()), range(len(unknowns))):
            mp = {}
            for u, c in vec.items():
                a, t = unknowns[u]
                mp.setdefault(a, {})[t] = c
            maps.append(mp)
            pars.append(P)
    return algebra_of_maps(maps, pars, [0] * len(maps), ["d%d" % (i + 1) for i in range(len(maps))])


def _compose(f, g):
    # (f o g)(a) = f(g(a))
    return {a: w for a, w in ((a, _apply_map(f, v)) for a, v in g.items()) if w}


def map_bracket(f, pf, g, pg):
    out = _compose(f, g)
    s = _sign(pf, pg)
    for a, v in _compose(g, f).items():
        out[a] = _addto(dict(out.get(a, {})), v, -s)
        if not out[a]:
            del out[a]
    return out


def _map_vec(mp):
    return {(a, t): c for a, v in mp.items() for t, c in v.items()}


def algebra_of_maps(maps, parities, degrees, labels):
    """LSA spanned by linear maps under the supercommutator."""
    L = from_elements(list(zip(maps, parities)),
                      lambda x, y: (map_bracket(x[0], x[1], y[0], y[1]), (x[1] + y[1]) % 2),
                      lambda x: _map_vec(x[0]), parities, degrees, labels)
    L.maps = maps
    return L


# ------------------------------------------------------------- prolongation

@dataclass
class Prolongation:
    algebra: GradedLSA
    dims: dict
    terminated: bool
    max_degree: int


def tanaka_prolongation(m, g0=None, max_degree=4):
    """Tanaka prolongation of a negatively graded m, degree by degree.

    g0 is a list of (map, parity) pairs of degree-0 derivations of m, or a
    GradedLSA carrying `.maps`; if omitted all graded derivations are used.
    Elements of g_k (k >= 0) are stored as maps on m.
    """
    if any(d >= 0 for d in m.deg):
        raise ValueError("m must be negatively graded")
    n = len(m)
    if g0 is None:
        D = derivations_gr(m)
        g0 = list(zip(D.maps, D.par))
    elif isinstance(g0, GradedLSA):
        g0 = list(zip(g0.maps, g0.par))
    g0 = [({a: {t: Fraction(c) for t, c in v.items()} for a, v in mp.items()}, p) for mp, p in g0]
    for mp, p in g0:
        for a, v in mp.items():
            if any(m.deg[t] != m.deg[a] or m.par[t] != (m.par[a] + p) % 2 for t in v):
                raise ValueError("g0 element is not a degree-0 map of the right parity")
        if derivation_residue(m, mp, p):
            raise ValueError("g0 element is not a derivation of m")
    sp = Span()
    for i, (mp, p) in enumerate(g0):
        if not sp.add(_map_vec(mp), i):
            raise ValueError("g0 elements are linearly dependent")
    for (f, pf) in g0:
        for (g, pg) in g0:
            if sp.coordinates(_map_vec(map_bracket(f, pf, g, pg))) is None:
                raise ValueError("g0 is not closed under brackets")

    # levels[k] = list of (map, parity) with map: a -> vector in component g_{k+deg a}
    # component g_j for j<0 is indexed by m indices, for j>=0 by positions in levels[j]
    levels = {0: g0}

    def elem_on(k, e, b):
        """[e, b] for e basis position in g_k and b an m index."""
        return levels[k][e][0].get(b, {})

    def comp_bracket_m(j, vec, b):
        """[x, b] for x a vector in component g_j and b an m index; result in g_{j+deg b}."""
        if j < 0:
            return m.bracket(vec, {b: 1})
        out = {}
        for e, c in vec.items():
            _addto(out, elem_on(j, e, b), c)
        return out

    def comp_par(j, t):
        return m.par[t] if j < 0 else levels[j][t][1]

    terminated = False
    k = 1
    while k <= max_degree:
        new = []
        for P in (0, 1):
            unknowns = []
            for a in range(n):
                j = k + m.deg[a]
                size = n if j < 0 else len(levels[j])
                for t in range(size):
                    if j < 0 and m.deg[t] != j:
                        continue
                    if comp_par(j, t) == (m.par[a] + P) % 2:
                        unknowns.append((a, t))
            uidx = {u: i for i, u in enumerate(unknowns)}
            by_a = {}
            for (a, t), i in uidx.items():
                by_a.setdefault(a, []).append((t, i))
            rows = {}

            def add(key, u, v):
                r = rows.setdefault(key, {})
                x = r.get(u, 0) + v
                if x:
                    r[u] = x
                else:
                    r.pop(u, None)

            for a in range(n):
                ja = k + m.deg[a]
                for b in range(a, n):
                    jb = k + m.deg[b]
                    # X[a,b]
                    for c, v in m.bracket_basis(a, b).items():
                        for t, u in by_a.get(c, ()):
                            add((a, b, t), u, v)
                    # -[Xa, b]
                    for t, u in by_a.get(a, ()):
                        for kk, v in comp_bracket_m(ja, {t: 1}, b).items():
                            add((a, b, kk), u, -v)
                    # -(-1)^{P|a|}[a, Xb] = +(-1)^{P|a|}(-1)^{|a||t|}[Xb_t, a]
                    s = _sign(P, m.par[a])
                    for t, u in by_a.get(b, ()):
                        s2 = s * _sign(m.par[a], comp_par(jb, t))
                        for kk, v in comp_bracket_m(jb, {t: 1}, a).items():
                            add((a, b, kk), u, s2 * v)
            for vec in nullspace([r for r in rows.values() if r], range(len(unknowns))):
                mp = {}
                for u, c in vec.items():
                    a, t = unknowns[u]
                    mp.setdefault(a, {})[t] = c
                new.append((mp, P))
        levels[k] = new
        if not new:
            terminated = True
            break
        k += 1
    top = max(levels)
    algebra = _assemble(m, levels, top, terminated)
    dims = {}
    for j, lev in sorted(levels.items()):
        e = sum(1 for _, p in lev if p == 0)
        dims[j] = (e, len(lev) - e)
    return Prolongation(algebra, dims, terminated, max_degree)


def _assemble(m, levels, top, terminated):
    """Full graded algebra m + g_0 + ... with brackets recovered by Jacobi."""
    n = len(m)
    basis = list(m.basis)
    offset = {}
    pos = n
    for j in sorted(levels):
        offset[j] = pos
        for i, (_, p) in enumerate(levels[j]):
            basis.append(("g%d_%d" % (j, i + 1), p, j))
        pos += len(levels[j])
    spans = {}
    for j, lev in levels.items():
        s = Span()
        for i, (mp, _) in enumerate(lev):
            s.add(_map_vec(mp), i)
        spans[j] = s
    deg = [b[2] for b in basis]
    par = [b[1] for b in basis]

    def split(x):
        # global index -> (degree, local index)
        d = deg[x]
        return (d, x) if d < 0 else (d, x - offset[d])

    def glob(j, t):
        return t if j < 0 else offset[j] + t

    cache = {}

    def br(x, y):
        """Bracket of two global basis indices as a global vector."""
        key = (x, y)
        if key in cache:
            return cache[key]
        dx, lx = split(x)
        dy, ly = split(y)
        if dx < 0 and dy < 0:
            res = dict(m.bracket_basis(x, y))
        elif dx >= 0 and dy < 0:
            j = dx + dy
            res = {glob(j, t): c for t, c in levels[dx][lx][0].get(y, {}).items()}
        elif dx < 0 and dy >= 0:
            s = -_sign(par[x], par[y])
            res = {k: s * v for k, v in br(y, x).items()}
        else:
            j = dx + dy
            if j not in levels:
                if terminated:
                    res = {}
                else:
                    cache[key] = None
                    return None
            else:
                # ([x,y])(a) = [x,[y,a]] - (-1)^{|x||y|} [y,[x,a]]
                mp = {}
                s = _sign(par[x], par[y])
                ok = True
                for a in range(n):
                    v = {}
                    ya = br(y, a)
                    xa = br(x, a)
                    if ya is None or xa is None:
                        ok = False
                        break
                    for z, c in ya.items():
                        w = br(x, z)
                        if w is None:
                            ok = False
                            break
                        _addto(v, w, c)
                    for z, c in xa.items():
                        w = br(y, z)
                        if w is None:
                            ok = False
                            break
                        _addto(v, w, -s * c)
                    if not ok:
                        break
                    if v:
                        mp[a] = {split(z)[1]: c for z, c in v.items()}
                if not ok:
                    cache[key] = None
                    return None
                coords = spans[j].coordinates(_map_vec(mp))
                if coords is None:
                    raise ValueError("prolongation bracket leaves g_%d" % j)
                res = {glob(j, t): c for t, c in coords.items()}
        cache[key] = res
        return res

    N = len(basis)
    brackets = {}
    for x in range(N):
        for y in range(x, N):
            v = br(x, y)
            if v:
                brackets[(x, y)] = v
    return GradedLSA(basis, brackets)


# ------------------------------------------------------------- centralizers

def centralizer(L, S):
    """Basis of {x : [x, s] = 0 for s in S}, split by parity, for homogeneous S."""
    out = []
    for P in (0, 1):
        idx = L.indices(parity=P)
        rows = {}
        for si, s in enumerate(S):
            for x in idx:
                for k, v in L.bracket({x: 1}, s).items():
                    r = rows.setdefault((si, k), {})
                    r[x] = r.get(x, 0) + v
        out.extend(nullspace(list(rows.values()), idx))
    return out


def parity_dims(L, vecs):
    e = o = 0
    for v in vecs:
        if all(L.par[i] == 0 for i in v):
            e += 1
        else:
            o += 1
    return (e, o)


# ------------------------------------------------------------- root data

class RootDatumG3:
    """Roots a*delta + b*eps1 + c*eps2 (eps3 = -eps1 - eps2) as integer triples."""

    DELTA = (1, 0, 0)
    EPS = {1: (0, 1, 0), 2: (0, 0, 1), 3: (0, -1, -1)}

    def __init__(self):
        d, e = self.DELTA, self.EPS
        even = [self.scale(d, 2), self.scale(d, -2)]
        for i in (1, 2, 3):
            even += [e[i], self.scale(e[i], -1)]
            for j in (1, 2, 3):
                if i != j:
                    even.append(self.add(e[i], self.scale(e[j], -1)))
        odd = [d, self.scale(d, -1)]
        for s in (1, -1):
            for i in (1, 2, 3):
                for t in (1, -1):
                    odd.append(self.add(self.scale(d, s), self.scale(e[i], t)))
        self.even = sorted(set(even))
        self.odd = sorted(set(odd))
        self.roots = self.even + self.odd

    @staticmethod
    def add(x, y):
        return tuple(a + b for a, b in zip(x, y))

    @staticmethod
    def scale(x, c):
        return tuple(c * a for a in x)

    @staticmethod
    def pair(x, y):
        # <d,d>=2, <e1,e1>=<e2,e2>=-2, <e1,e2>=1, <d,e_i>=0
        return 2 * x[0] * y[0] - 2 * x[1] * y[1] - 2 * x[2] * y[2] + x[1] * y[2] + x[2] * y[1]

    def is_even(self, r):
        return r in self.even

    def parity(self, r):
        return 0 if r in self.even else 1

    def is_isotropic(self, r):
        return self.pair(r, r) == 0

    def even_reflection(self, alpha, beta):
        if alpha not in self.even:
            raise ValueError("even reflection needs an even root")
        c = Fraction(2 * self.pair(beta, alpha), self.pair(alpha, alpha))
        if c.denominator != 1:
            raise ValueError("non-integral reflection coefficient")
        return self.add(beta, self.scale(alpha, -int(c)))

    def odd_reflection(self, simple, i):
        alpha = simple[i]
        if alpha not in self.odd or not self.is_isotropic(alpha):
            raise ValueError("odd reflection needs an odd isotropic simple root")
        out = []
        for j, b in enumerate(simple):
            if j == i:
                out.append(self.scale(alpha, -1))
            elif self.pair(alpha, b):
                out.append(self.add(b, alpha))
            else:
                out.append(b)
        return out

    def coordinates(self, simple, r):
        """Coefficients of r in the simple basis (exact)."""
        from .linalg import nullspace as _ns
        # solve sum c_i s_i = r via the nullspace of [s_1 s_2 s_3 -r]
        rows = []
        for comp in range(3):
            row = {i: simple[i][comp] for i in range(3) if simple[i][comp]}
            if r[comp]:
                row[3] = -r[comp]
            rows.append(row)
        ns = _ns(rows, range(4))
        for v in ns:
            if v.get(3):
                s = v[3]
                return tuple(v.get(i, 0) / s for i in range(3))
        raise ValueError("root not in the span of the simple system")

    def positive_roots(self, simple):
        pos = []
        for r in self.roots:
            c = self.coordinates(simple, r)
            if any(x.denominator != 1 for x in c):
                raise ValueError("simple system does not generate integrally")
            if all(x >= 0 for x in c):
                pos.append(r)
            elif not all(x <= 0 for x in c):
                raise ValueError("root %r is neither positive nor negative" % (r,))
        return pos


SIMPLE_SYSTEMS = {
    "I": [(1, -1, -1), (0, 1, 0), (0, -1, 1)],      # d+e3, e1, e2-e1
    "II": [(-1, 1, 1), (1, 0, -1), (0, -1, 1)],     # -d-e3, d-e2, e2-e1
    "III": [(-1, 0, 1), (1, -1, 0), (0, 1, 0)],     # -d+e2, d-e1, e1
    "IV": [(0, -1, 1), (-1, 1, 0), (1, 0, 0)],      # e2-e1, e1-d, d
}


def simple_system(name):
    return list(SIMPLE_SYSTEMS[name])


def identify_system(simple):
    """Name of the listed system equal to `simple` up to ordering, with the permutation."""
    for name, sys_ in SIMPLE_SYSTEMS.items():
        if sorted(sys_) == sorted(simple):
            return name, [sys_.index(r) for r in simple]
    return None, None


def odd_even_reflections(system, index, kind="odd"):
    """Apply the reflection at simple root `index` (0-based) of a named system."""
    R = RootDatumG3()
    simple = simple_system(system)
    if kind == "odd":
        new = R.odd_reflection(simple, index)
    else:
        a = simple[index]
        new = [R.even_reflection(a, b) for b in simple]
    name, perm = identify_system(new)
    return new, name


def parabolic_growth(system, subset):
    """Parity-split dims of g_-1, g_-2, ... for Z = sum of dual basis elements in subset."""
    subset = set(subset)
    if not subset or not subset <= {1, 2, 3}:
        raise ValueError("subset must be a nonempty part of {1,2,3}")
    R = RootDatumG3()
    simple = simple_system(system)
    R.positive_roots(simple)
    depth = {}
    zero = [3, 0]     # Cartan
    for r in R.roots:
        c = R.coordinates(simple, r)
        d = sum(c[i - 1] for i in subset)
        if d < 0:
            depth.setdefault(int(-d), [0, 0])[R.parity(r)] += 1
        elif d == 0:
            zero[R.parity(r)] += 1
    mu = max(depth)
    growth = [tuple(depth.get(k, [0, 0])) for k in range(1, mu + 1)]
    return growth, tuple(zero)


def parse_parabolic(text):
    """'IV:2' or 'I:1,3' -> ('IV', {2}) / ('I', {1,3})."""
    try:
        sysname, rest = text.split(":")
        sysname = sysname.strip().upper()
        subset = {int(x) for x in rest.replace("{", "").replace("}", "").split(",") if x.strip()}
    except ValueError:
        raise ValueError("parabolic must look like IV:2 or I:1,3, got %r" % text)
    if sysname not in SIMPLE_SYSTEMS:
        raise ValueError("unknown simple system %r" % sysname)
    return sysname, subset


def load_parabolic_table():
    with resources.files("g3super").joinpath("data/parabolic_table.json").open() as fh:
        return json.load(fh)


_TYPE = re.compile(r"^P([123]+)\^(I|II|III|IV)$")


def parse_parabolic_type(text):
    """'P13^II' -> ('II', {1, 3})."""
    mt = _TYPE.match(text.strip())
    if not mt:
        raise ValueError("parabolic type must look like P13^II, got %r" % text)
    return mt.group(2), {int(c) for c in mt.group(1)}


def parabolic_atlas(table=None):
    """Recompute every row of the parabolic table from root data; one record per type."""
    rows = table if table is not None else load_parabolic_table()
    out = []
    for i, row in enumerate(rows):
        for ty in row["types"]:
            growth, _ = parabolic_growth(*parse_parabolic_type(ty))
            ev, od = sum(a for a, _ in growth), sum(b for _, b in growth)
            got = {"growth": format_growth(growth), "depth": len(growth), "dim": "%d|%d" % (ev, od)}
            want = {k: row[k] for k in ("growth", "depth", "dim")}
            out.append({"row": i + 1, "type": ty, "computed": got, "expected": want,
                        "match": got == want})
    return out

"""
Chevalley-Eilenberg cohomology H^{d,n}(m, g) with m = g_{<0} acting on g by
the adjoint action, computed block by block with exact ranks.

A basis cochain is a pair (slots, target): `slots` is a canonical tuple of
m-indices (nondecreasing, no repeated even index) and `target` a g-index.
Its value on other orderings follows from
phi(.., X, Y, ..) = -(-1)^{|X||Y|} phi(.., Y, X, ..).
"""

from dataclasses import dataclass, field
from itertools import combinations_with_replacement

from .linalg import nullspace, rank


def _sign(p, q):
    return -1 if (p & q) else 1


@dataclass
class CohomologyResult:
    dims: dict = field(default_factory=dict)      # (d, n) -> (even, odd)
    cochain_dims: dict = field(default_factory=dict)
    representatives: dict = field(default_factory=dict)

    def to_json(self):
        return {
            "dims": {"%d,%d" % k: list(v) for k, v in sorted(self.dims.items())},
            "cochain_dims": {"%d,%d" % k: list(v) for k, v in sorted(self.cochain_dims.items())},
        }


class SpencerComplex:
    def __init__(self, g, restricted=False):
        self.g = g
        self.m = [i for i in range(len(g)) if g.deg[i] < 0]
        self.mset = set(self.m)
        self.restricted = restricted
        self._tuples = {}

    # -- canonical tuples
    def tuples(self, n):
        if n not in self._tuples:
            g = self.g
            out = []
            for t in combinations_with_replacement(self.m, n):
                if any(t[i] == t[i + 1] and g.par[t[i]] == 0 for i in range(n - 1)):
                    continue
                if self.restricted and n > 0 and all(g.par[i] == 0 for i in t):
                    continue
                out.append(t)
            self._tuples[n] = out
        return self._tuples[n]

    def canonical(self, t):
        """(sign, sorted tuple) or (0, None) for a vanishing ordering."""
        g = self.g
        t = list(t)
        sign = 1
        n = len(t)
        for i in range(n):
            for j in range(n - 1 - i):
                a, b = t[j], t[j + 1]
                if a > b:
                    t[j], t[j + 1] = b, a
                    sign *= -_sign(g.par[a], g.par[b])
        for i in range(n - 1):
            if t[i] == t[i + 1] and g.par[t[i]] == 0:
                return 0, None
        t = tuple(t)
        if self.restricted and n > 0 and all(g.par[i] == 0 for i in t):
            return 0, None
        return sign, t

    def basis(self, n, d, parity):
        """Cochain basis of C^{d,n} with the given parity."""
        if self.restricted and n == 0:
            return []
        g = self.g
        out = []
        for s in self.tuples(n):
            sd = sum(g.deg[i] for i in s)
            sp = sum(g.par[i] for i in s)
            for t in range(len(g)):
                if g.deg[t] - sd == d and (g.par[t] + sp) % 2 == parity:
                    out.append((s, t))
        return out

    # -- the differential
    def differential_keyed(self, n, d, parity):
        """Matrix of d: C^{d,n} -> C^{d,n+1} as {(out slots, target): {column: value}}."""
        if n > 2:
            raise ValueError("only n = 0, 1, 2 are supported")
        g = self.g
        src = self.basis(n, d, parity)
        by_slots = {}
        for i, (s, t) in enumerate(src):
            by_slots.setdefault(s, []).append((t, i))
        P = parity
        rows = {}

        def add(key, c, v):
            r = rows.setdefault(key, {})
            x = r.get(c, 0) + v
            if x:
                r[c] = x
            else:
                r.pop(c, None)

        def act(out, X, sgn, args):
            # sgn * X . phi(args)
            s, canon = self.canonical(args)
            if not s:
                return
            for t, c in by_slots.get(canon, ()):
                for k, v in g.bracket_basis(X, t).items():
                    add((out, k), c, sgn * s * v)

        def phi_of(out, sgn, vec, rest):
            # sgn * phi(vec, *rest) with vec a combination of m elements
            for e, a in vec.items():
                s, canon = self.canonical((e,) + rest)
                if not s:
                    continue
                for t, c in by_slots.get(canon, ()):
                    add((out, t), c, sgn * s * a)

        if src:
            for out in self.tuples(n + 1):
                if n == 0:
                    (X,) = out
                    act(out, X, _sign(g.par[X], P), ())
                elif n == 1:
                    X, Y = out
                    x, y = g.par[X], g.par[Y]
                    act(out, X, _sign(x, P), (Y,))
                    act(out, Y, -_sign(y, x + P), (X,))
                    phi_of(out, -1, g.bracket_basis(X, Y), ())
                else:
                    X, Y, Z = out
                    x, y, z = g.par[X], g.par[Y], g.par[Z]
                    act(out, X, _sign(x, P), (Y, Z))
                    act(out, Y, -_sign(y, x + P), (X, Z))
                    act(out, Z, _sign(z, x + y + P), (X, Y))
                    phi_of(out, -1, g.bracket_basis(X, Y), (Z,))
                    phi_of(out, -_sign(x, y + z), g.bracket_basis(Y, Z), (X,))
                    phi_of(out, -_sign(z, x + y), g.bracket_basis(Z, X), (Y,))
        return {k: r for k, r in rows.items() if r}, src

    def differential(self, n, d, parity):
        rows, src = self.differential_keyed(n, d, parity)
        return list(rows.values()), src

    def _rank(self, n, d, parity):
        if n < 0 or (self.restricted and n == 0):
            return 0
        rows, src = self.differential(n, d, parity)
        return rank(rows, range(len(src)))

    def H(self, d, n, parity):
        dimC = len(self.basis(n, d, parity))
        r_out = self._rank(n, d, parity)
        r_in = self._rank(n - 1, d, parity) if n >= 1 else 0
        return dimC - r_out - r_in

    def H_dims(self, d, n):
        return (self.H(d, n, 0), self.H(d, n, 1))

    def cocycles(self, d, n, parity):
        rows, src = self.differential(n, d, parity)
        return [{src[c]: v for c, v in vec.items()} for vec in nullspace(rows, range(len(src)))]

    def square_check(self, n, d, parity):
        """True if d o d vanishes on C^{d,n} (n <= 1)."""
        first, _ = self.differential_keyed(n, d, parity)
        second, src2 = self.differential_keyed(n + 1, d, parity)
        pos2 = {b: i for i, b in enumerate(src2)}
        cols = {}
        for key, row in first.items():
            j = pos2.get(key)
            if j is None:
                return False
            for c, v in row.items():
                cols.setdefault(c, {})[j] = v
        for vec in cols.values():
            for r in second.values():
                if sum(r.get(j, 0) * v for j, v in vec.items()):
                    return False
        return True


def spencer_H(g, d, n):
    return SpencerComplex(g).H_dims(d, n)


def restricted_H(g, d, n):
    return SpencerComplex(g, restricted=True).H_dims(d, n)


def cohomology_table(g, degrees, orders, restricted=False):
    cx = SpencerComplex(g, restricted)
    res = CohomologyResult()
    for n in orders:
        for d in degrees:
            res.dims[(d, n)] = cx.H_dims(d, n)
            res.cochain_dims[(d, n)] = (len(cx.basis(n, d, 0)), len(cx.basis(n, d, 1)))
    return res

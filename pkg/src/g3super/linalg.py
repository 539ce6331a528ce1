"""
Exact sparse linear algebra over the rationals.

Rows are dicts {column: coefficient}.  Kernels are computed by Gauss-Jordan
elimination modulo a large prime, lifted by rational reconstruction and then
checked against the original rational rows.  A passing check certifies the
result: the modular nullity bounds the rational nullity from above and the
verified vectors bound it from below.  If lifting fails we redo the
elimination with Fractions.
"""

from fractions import Fraction
from math import gcd, isqrt

PRIME = (1 << 61) - 1


def _lcm(a, b):
    return a // gcd(a, b) * b


def integer_rows(rows):
    """Scale each row to coprime integers (row spaces are unchanged)."""
    out = []
    for row in rows:
        row = {c: v for c, v in row.items() if v}
        if not row:
            continue
        den = 1
        for v in row.values():
            if isinstance(v, Fraction):
                den = _lcm(den, v.denominator)
        r = {c: int(v * den) for c, v in row.items()}
        g = 0
        for v in r.values():
            g = gcd(g, v)
        if g > 1:
            r = {c: v // g for c, v in r.items()}
        out.append(r)
    return out


class _Elim:
    """Incremental reduced row echelon form, either mod p or over Q (p=None)."""

    def __init__(self, p=None):
        self.p = p
        self.piv = {}      # pivot column -> row dict (pivot entry 1)
        self.where = {}    # column -> set of pivot columns whose row touches it

    def _norm(self, v):
        return v % self.p if self.p else v

    def _inv(self, v):
        return pow(v, -1, self.p) if self.p else 1 / Fraction(v)

    def reduce(self, row):
        p = self.p
        row = dict(row)
        hits = [c for c in row if c in self.piv]
        for c in hits:
            a = row.get(c)
            if not a:
                continue
            for k, v in self.piv[c].items():
                x = row.get(k, 0) - a * v
                if p:
                    x %= p
                if x:
                    row[k] = x
                else:
                    row.pop(k, None)
        return row

    def add(self, row):
        """Insert a row; returns the new pivot column or None if dependent."""
        p = self.p
        if p:
            row = {c: v % p for c, v in row.items() if v % p}
        row = self.reduce(row)
        if not row:
            return None
        col = min(row, key=lambda c: (len(self.where.get(c, ())), c))
        inv = self._inv(row[col])
        if p:
            row = {k: v * inv % p for k, v in row.items()}
        else:
            row = {k: v * inv for k, v in row.items()}
        # clear the new pivot column from the existing pivot rows
        for pc in list(self.where.get(col, ())):
            prow = self.piv[pc]
            a = prow[col]
            for k, v in row.items():
                x = prow.get(k, 0) - a * v
                if p:
                    x %= p
                if x:
                    if k not in prow:
                        self.where.setdefault(k, set()).add(pc)
                    prow[k] = x
                else:
                    if k in prow:
                        del prow[k]
                        self.where[k].discard(pc)
        self.piv[col] = row
        for k in row:
            if k != col:
                self.where.setdefault(k, set()).add(col)
        self.where.pop(col, None)
        return col


def _ratrec(a, m):
    """Rational reconstruction of a mod m with |num|, den <= sqrt(m/2)."""
    a %= m
    bound = isqrt(m // 2)
    r0, r1 = m, a
    s0, s1 = 0, 1
    while r1 > bound:
        q = r0 // r1
        r0, r1 = r1, r0 - q * r1
        s0, s1 = s1, s0 - q * s1
    if s1 == 0 or abs(s1) > bound:
        return None
    return Fraction(r1, s1)


def _kernel_from(el, columns):
    piv = el.piv
    free = [c for c in columns if c not in piv]
    vecs = []
    for f in free:
        v = {f: 1}
        for pc in el.where.get(f, ()):
            v[pc] = -piv[pc][f]
        vecs.append(v)
    return vecs


def _verify(irows, vecs):
    # integer check of A v = 0 for every candidate vector
    scaled = []
    for v in vecs:
        den = 1
        for x in v.values():
            den = _lcm(den, x.denominator)
        scaled.append({c: int(x * den) for c, x in v.items()})
    colmap = {}
    for i, v in enumerate(scaled):
        for c, x in v.items():
            colmap.setdefault(c, []).append((i, x))
    for row in irows:
        acc = {}
        for c, a in row.items():
            for i, x in colmap.get(c, ()):
                acc[i] = acc.get(i, 0) + a * x
        if any(acc.values()):
            return False
    return True


def nullspace(rows, columns):
    """Basis of {v : row . v = 0 for all rows}, as sparse Fraction dicts.

    `columns` lists every column key (its order fixes pivot tie-breaks and
    the order of the returned basis).
    """
    columns = list(columns)
    irows = integer_rows(rows)
    el = _Elim(PRIME)
    for r in irows:
        el.add(r)
    cand = _kernel_from(el, columns)
    lifted = []
    ok = True
    for v in cand:
        w = {}
        for c, x in v.items():
            q = _ratrec(x, PRIME)
            if q is None:
                ok = False
                break
            if q:
                w[c] = q
        if not ok:
            break
        lifted.append(w)
    if ok and _verify(irows, lifted):
        return lifted
    el = _Elim(None)
    for r in irows:
        el.add(r)
    return [{c: Fraction(x) for c, x in v.items() if x} for v in _kernel_from(el, columns)]


def rank(rows, columns):
    columns = list(columns)
    return len(columns) - len(nullspace(rows, columns))


def rank_modp(rows):
    """Fast rank modulo the prime; a lower bound for the rational rank."""
    el = _Elim(PRIME)
    for r in integer_rows(rows):
        el.add(r)
    return len(el.piv)


class Span:
    """Exact echelon basis of tagged vectors with arbitrary hashable keys.

    reduce() returns the remainder and the coefficients expressing the
    reduced part in terms of the tags that were added.
    """

    def __init__(self):
        self.rows = []     # (pivot key, vector, combination over tags)
        self.tags = []

    def __len__(self):
        return len(self.rows)

    def reduce(self, vec):
        vec = {k: Fraction(v) for k, v in vec.items() if v}
        comb = {}
        for pk, row, rc in self.rows:
            a = vec.get(pk)
            if not a:
                continue
            for k, v in row.items():
                x = vec.get(k, 0) - a * v
                if x:
                    vec[k] = x
                else:
                    vec.pop(k, None)
            for t, v in rc.items():
                x = comb.get(t, 0) + a * v
                if x:
                    comb[t] = x
                else:
                    comb.pop(t, None)
        return vec, comb

    def add(self, vec, tag=None):
        """Add a vector; returns False when it is already in the span."""
        if tag is None:
            tag = len(self.tags)
        rem, comb = self.reduce(vec)
        if not rem:
            return False
        comb = {t: -v for t, v in comb.items()}
        comb[tag] = comb.get(tag, 0) + 1
        pk = min(rem, key=_keyorder)
        inv = 1 / rem[pk]
        rem = {k: v * inv for k, v in rem.items()}
        comb = {t: v * inv for t, v in comb.items()}
        # keep rows fully reduced on their pivot keys
        new = []
        for qk, row, rc in self.rows:
            a = row.get(pk)
            if a:
                row = dict(row)
                for k, v in rem.items():
                    x = row.get(k, 0) - a * v
                    if x:
                        row[k] = x
                    else:
                        row.pop(k, None)
                rc = dict(rc)
                for t, v in comb.items():
                    x = rc.get(t, 0) - a * v
                    if x:
                        rc[t] = x
                    else:
                        rc.pop(t, None)
            new.append((qk, row, rc))
        new.append((pk, rem, comb))
        self.rows = new
        self.tags.append(tag)
        return True

    def coordinates(self, vec):
        """Coefficients over tags, or None when vec is outside the span."""
        rem, comb = self.reduce(vec)
        if rem:
            return None
        return comb


def _keyorder(k):
    return repr(k)


def rank_of_vectors(vecs):
    s = Span()
    for v in vecs:
        s.add(v)
    return len(s)

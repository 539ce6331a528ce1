"""
Supercommutative polynomial arithmetic over the rationals.

A SuperPolynomial lives over a VariableTable: an ordered list of
coordinates, each with a parity (0 even, 1 odd) and an integer weight.
Even variables carry exponents; odd variables square to zero and
anticommute.  A term is keyed by (exponent tuple, odd bitmask) where bit
k of the mask refers to the k-th odd variable in table order, and the
stored odd monomial is always the ordered product of its odd variables.

Derivatives with respect to odd variables act from the left.
"""

from fractions import Fraction
from functools import lru_cache
from numbers import Rational
from types import MappingProxyType


EVEN, ODD = 0, 1


def as_scalar(x):
    """Exact rational from int, Fraction or a 'p/q' string.  Floats are refused."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        return Fraction(int(x))
    if isinstance(x, (int, Rational)):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x.strip())
    raise TypeError("no exact rational for %r" % (x,))


def _parity(p):
    if p in (0, 1):
        return int(p)
    if p in ("even", "0", "e"):
        return EVEN
    if p in ("odd", "1", "o"):
        return ODD
    raise ValueError("bad parity %r" % (p,))


@lru_cache(maxsize=1 << 16)
def _mask_sign(a, b):
    # sign of (odd monomial a) * (odd monomial b) brought to sorted order
    s = 0
    while b:
        low = b & -b
        j = low.bit_length() - 1
        s += (a >> (j + 1)).bit_count()
        b ^= low
    return -1 if s & 1 else 1


def mask_sign(a, b):
    """Sign of the product of two sorted odd monomials, 0 if they share a variable."""
    if a & b:
        return 0
    return _mask_sign(a, b)


class VariableTable:
    """Ordered coordinates with parity and weight."""

    __slots__ = ("entries", "names", "parity", "weight", "even", "odd", "slot", "_key", "_hash")

    def __init__(self, entries):
        ents = []
        for e in entries:
            name, par = e[0], _parity(e[1])
            w = as_scalar(e[2]) if len(e) > 2 else Fraction(0)
            if w.denominator != 1:
                raise ValueError("weight of %s must be an integer" % name)
            ents.append((str(name), par, int(w)))
        names = [e[0] for e in ents]
        if len(set(names)) != len(names):
            raise ValueError("duplicate variable names")
        self.entries = tuple(ents)
        self.names = tuple(names)
        self.parity = {n: p for n, p, _ in ents}
        self.weight = {n: w for n, _, w in ents}
        self.even = tuple(n for n, p, _ in ents if p == EVEN)
        self.odd = tuple(n for n, p, _ in ents if p == ODD)
        self.slot = {}
        for i, n in enumerate(self.even):
            self.slot[n] = i
        for i, n in enumerate(self.odd):
            self.slot[n] = i
        self._key = self.entries
        self._hash = hash(self._key)

    def __eq__(self, other):
        return self is other or (isinstance(other, VariableTable) and self._key == other._key)

    def __hash__(self):
        return self._hash

    def __len__(self):
        return len(self.entries)

    def __contains__(self, name):
        return name in self.parity

    def __repr__(self):
        return "VariableTable(%s)" % ", ".join(
            "%s:%s:%d" % (n, "odd" if p else "even", w) for n, p, w in self.entries)

    def extend(self, entries):
        return VariableTable(list(self.entries) + list(entries))

    def reweight(self, weights):
        return VariableTable([(n, p, weights.get(n, w)) for n, p, w in self.entries])

    def check(self, name):
        if name not in self.parity:
            raise KeyError("unknown variable %r" % (name,))
        return name

    def zero_exps(self):
        return (0,) * len(self.even)

    def var(self, name):
        self.check(name)
        if self.parity[name] == EVEN:
            e = [0] * len(self.even)
            e[self.slot[name]] = 1
            key = (tuple(e), 0)
        else:
            key = (self.zero_exps(), 1 << self.slot[name])
        return SuperPolynomial(self, {key: Fraction(1)})

    def const(self, c):
        c = as_scalar(c)
        if not c:
            return SuperPolynomial(self, {})
        return SuperPolynomial(self, {(self.zero_exps(), 0): c})

    def zero(self):
        return SuperPolynomial(self, {})

    def one(self):
        return self.const(1)

    def vars(self):
        return {n: self.var(n) for n in self.names}

    def parse(self, text):
        return parse(text, self)

    def term_weight(self, key):
        exps, mask = key
        w = 0
        for n, e in zip(self.even, exps):
            if e:
                w += e * self.weight[n]
        k = 0
        while mask:
            if mask & 1:
                w += self.weight[self.odd[k]]
            mask >>= 1
            k += 1
        return w

    def monomial_str(self, key):
        exps, mask = key
        parts = []
        for n, e in zip(self.even, exps):
            if e == 1:
                parts.append(n)
            elif e:
                parts.append("%s^%d" % (n, e))
        k = 0
        while mask:
            if mask & 1:
                parts.append(self.odd[k])
            mask >>= 1
            k += 1
        return "*".join(parts)


def _fmt(c):
    if c.denominator == 1:
        return str(c.numerator)
    return "%d/%d" % (c.numerator, c.denominator)


class SuperPolynomial:
    """Immutable exact polynomial with even and odd variables."""

    __slots__ = ("table", "_terms", "_hash")

    def __init__(self, table, terms):
        self.table = table
        self._terms = {k: v for k, v in terms.items() if v}
        self._hash = None

    # -- basics
    @property
    def terms(self):
        return MappingProxyType(self._terms)

    def __len__(self):
        return len(self._terms)

    def __bool__(self):
        return bool(self._terms)

    def is_zero(self):
        return not self._terms

    def items(self):
        return self._terms.items()

    def __iter__(self):
        return iter(self._terms.items())

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.table, frozenset(self._terms.items())))
        return self._hash

    def __eq__(self, other):
        if isinstance(other, SuperPolynomial):
            return self.table == other.table and self._terms == other._terms
        try:
            c = as_scalar(other)
        except TypeError:
            return NotImplemented
        return self._terms == self.table.const(c)._terms

    def _coerce(self, other):
        if isinstance(other, SuperPolynomial):
            if other.table != self.table:
                raise ValueError("mismatched variable tables")
            return other
        return self.table.const(as_scalar(other))

    def parity(self):
        """0 or 1 for homogeneous polynomials (zero counts as even), None if mixed."""
        ps = {mask.bit_count() & 1 for (_, mask) in self._terms}
        if not ps:
            return EVEN
        if len(ps) == 1:
            return ps.pop()
        return None

    def parity_part(self, p):
        return SuperPolynomial(self.table, {k: v for k, v in self._terms.items()
                                            if (k[1].bit_count() & 1) == p})

    def constant_term(self):
        return self._terms.get((self.table.zero_exps(), 0), Fraction(0))

    def is_constant(self):
        z = (self.table.zero_exps(), 0)
        return all(k == z for k in self._terms)

    # -- ring operations
    def __add__(self, other):
        other = self._coerce(other)
        out = dict(self._terms)
        for k, v in other._terms.items():
            s = out.get(k, 0) + v
            if s:
                out[k] = s
            else:
                out.pop(k, None)
        return SuperPolynomial(self.table, out)

    __radd__ = __add__

    def __neg__(self):
        return SuperPolynomial(self.table, {k: -v for k, v in self._terms.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def scale(self, c):
        c = as_scalar(c)
        if not c:
            return SuperPolynomial(self.table, {})
        return SuperPolynomial(self.table, {k: v * c for k, v in self._terms.items()})

    def __mul__(self, other):
        if not isinstance(other, SuperPolynomial):
            return self.scale(other)
        return mul(self, other)

    def __rmul__(self, other):
        return self.scale(other)

    def __pow__(self, n):
        if not isinstance(n, int) or n < 0:
            raise ValueError("exponent must be a nonnegative integer")
        out = self.table.one()
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    # -- calculus and structure
    def partial(self, name):
        return partial_left(self, name)

    def substitute(self, bindings):
        return substitute(self, bindings)

    def weighted_degree_split(self):
        return weighted_degree_split(self)

    def weighted_degree(self):
        """Common weight of all terms, or None when not homogeneous (zero gives None)."""
        ws = {self.table.term_weight(k) for k in self._terms}
        return ws.pop() if len(ws) == 1 else None

    def evaluate(self, point):
        """Classical value: odd variables set to zero, even ones from `point` (default 0)."""
        total = Fraction(0)
        vals = [as_scalar(point.get(n, 0)) for n in self.table.even]
        for (exps, mask), c in self._terms.items():
            if mask:
                continue
            t = c
            for v, e in zip(vals, exps):
                if e:
                    t *= v ** e
                    if not t:
                        break
            total += t
        return total

    def classical_part(self):
        return SuperPolynomial(self.table, {k: v for k, v in self._terms.items() if not k[1]})

    def retable(self, table):
        """Re-express in a table that contains all variables used here."""
        if table == self.table:
            return self
        src = self.table
        emap = [table.slot[n] for n in src.even]
        omap = [table.slot[n] for n in src.odd]
        for n in src.names:
            if table.parity.get(n) != src.parity[n]:
                raise ValueError("variable %s missing or of wrong parity" % n)
        out = {}
        ne = len(table.even)
        for (exps, mask), c in self._terms.items():
            e = [0] * ne
            for i, x in enumerate(exps):
                if x:
                    e[emap[i]] = x
            # odd variables keep their relative order only if omap is increasing
            sign = 1
            newmask = 0
            k = 0
            m = mask
            while m:
                if m & 1:
                    bit = 1 << omap[k]
                    sign *= mask_sign(newmask, bit)
                    newmask |= bit
                m >>= 1
                k += 1
            out[(tuple(e), newmask)] = out.get((tuple(e), newmask), 0) + sign * c
        return SuperPolynomial(table, out)

    def __repr__(self):
        return "SuperPolynomial(%s)" % str(self)

    def __str__(self):
        if not self._terms:
            return "0"
        out = []
        for k in sorted(self._terms, key=_sort_key):
            c = self._terms[k]
            mono = self.table.monomial_str(k)
            if not mono:
                s = _fmt(c)
            elif c == 1:
                s = mono
            elif c == -1:
                s = "-" + mono
            else:
                s = "%s*%s" % (_fmt(c), mono)
            out.append(s)
        text = " + ".join(out)
        return text.replace("+ -", "- ")


def _sort_key(key):
    exps, mask = key
    return (sum(exps) + mask.bit_count(), [-e for e in exps], mask)


def mul(a, b):
    """Supercommutative product."""
    if a.table != b.table:
        raise ValueError("mismatched variable tables")
    out = {}
    bt = list(b._terms.items())
    for (ea, ma), ca in a._terms.items():
        for (eb, mb), cb in bt:
            if ma & mb:
                continue
            s = _mask_sign(ma, mb) if mb and ma else 1
            key = (tuple(x + y for x, y in zip(ea, eb)), ma | mb)
            v = out.get(key, 0) + (ca * cb if s > 0 else -(ca * cb))
            if v:
                out[key] = v
            else:
                out.pop(key, None)
    return SuperPolynomial(a.table, out)


def partial_left(p, name):
    """Left derivative; for odd v the variable is first moved to the front."""
    t = p.table
    t.check(name)
    out = {}
    if t.parity[name] == EVEN:
        i = t.slot[name]
        for (exps, mask), c in p._terms.items():
            e = exps[i]
            if e:
                ne = exps[:i] + (e - 1,) + exps[i + 1:]
                out[(ne, mask)] = c * e
    else:
        k = t.slot[name]
        bit = 1 << k
        below = bit - 1
        for (exps, mask), c in p._terms.items():
            if mask & bit:
                c = -c if (mask & below).bit_count() & 1 else c
                out[(exps, mask ^ bit)] = c
    return SuperPolynomial(t, out)


def substitute(p, bindings):
    """Ring-homomorphic substitution.  Unbound variables stay as they are.

    Bindings may live in another table; the result lives in the binding
    table (all bindings must share it).
    """
    t = p.table
    target = None
    for name, val in bindings.items():
        t.check(name)
        if not isinstance(val, SuperPolynomial):
            raise TypeError("binding for %s is not a SuperPolynomial" % name)
        if target is None:
            target = val.table
        elif val.table != target:
            raise ValueError("bindings live in different tables")
        vp = val.parity()
        if vp is None or (vp != t.parity[name] and not val.is_zero()):
            raise ValueError("parity mismatch in binding for %s" % name)
    if target is None:
        return p
    images = {}
    for n in t.names:
        if n in bindings:
            images[n] = bindings[n]
        else:
            if n not in target.parity or target.parity[n] != t.parity[n]:
                raise ValueError("variable %s has no image in the target table" % n)
            images[n] = target.var(n)
    powcache = {}

    def power(n, e):
        key = (n, e)
        if key not in powcache:
            powcache[key] = images[n] ** e
        return powcache[key]

    out = target.zero()
    for (exps, mask), c in p._terms.items():
        term = target.const(c)
        for n, e in zip(t.even, exps):
            if e:
                term = term * power(n, e)
        k = 0
        m = mask
        while m:
            if m & 1:
                term = term * images[t.odd[k]]
            m >>= 1
            k += 1
        out = out + term
    return out


def weighted_degree_split(p):
    parts = {}
    for key, c in p._terms.items():
        w = p.table.term_weight(key)
        parts.setdefault(w, {})[key] = c
    return [(w, SuperPolynomial(p.table, parts[w])) for w in sorted(parts)]


# ---------------------------------------------------------------- parser

class ParseError(ValueError):
    def __init__(self, message, position, text=""):
        self.position = position
        self.text = text
        super().__init__("%s at position %d" % (message, position))


def _tokenize(text):
    toks = []
    i, n = 0, len(text)
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
        elif ch.isdigit():
            j = i
            while j < n and text[j].isdigit():
                j += 1
            toks.append(("num", text[i:j], i))
            i = j
        elif ch.isalpha() or ch == "_":
            j = i
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            toks.append(("id", text[i:j], i))
            i = j
        elif ch in "+-*^()/":
            toks.append((ch, ch, i))
            i += 1
        else:
            raise ParseError("unexpected character %r" % ch, i, text)
    toks.append(("end", "", n))
    return toks


class _Parser:
    def __init__(self, text, table):
        self.text = text
        self.table = table
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.toks[self.i]

    def take(self, kind=None):
        tok = self.toks[self.i]
        if kind is not None and tok[0] != kind:
            raise ParseError("expected %s, found %r" % (kind, tok[1] or "end of input"), tok[2], self.text)
        self.i += 1
        return tok

    def parse(self):
        if self.peek()[0] == "end":
            raise ParseError("empty expression", 0, self.text)
        p = self.expr()
        tok = self.peek()
        if tok[0] != "end":
            raise ParseError("unexpected %r" % tok[1], tok[2], self.text)
        return p

    def expr(self):
        p = self.term()
        while self.peek()[0] in "+-" and self.peek()[0] != "end":
            op = self.take()[0]
            q = self.term()
            p = p + q if op == "+" else p - q
        return p

    def term(self):
        p = self.unary()
        while self.peek()[0] == "*":
            self.take()
            p = p * self.unary()
        return p

    def unary(self):
        kind = self.peek()[0]
        if kind == "-":
            self.take()
            return -self.unary()
        if kind == "+":
            self.take()
            return self.unary()
        return self.power()

    def power(self):
        start = self.peek()
        p = self.atom()
        if self.peek()[0] == "^":
            hat = self.take()
            tok = self.peek()
            if tok[0] != "num":
                raise ParseError("exponent must be a nonnegative integer", tok[2], self.text)
            self.take()
            e = int(tok[1])
            if start[0] == "id" and self.table.parity.get(start[1]) == ODD and e > 1:
                raise ParseError("odd variable %s raised to power %d" % (start[1], e), hat[2], self.text)
            p = p ** e
        return p

    def atom(self):
        tok = self.peek()
        if tok[0] == "num":
            self.take()
            num = int(tok[1])
            if self.peek()[0] == "/":
                self.take()
                den = self.take("num")
                if int(den[1]) == 0:
                    raise ParseError("zero denominator", den[2], self.text)
                return self.table.const(Fraction(num, int(den[1])))
            return self.table.const(num)
        if tok[0] == "id":
            self.take()
            if tok[1] not in self.table:
                raise ParseError("unknown variable %r" % tok[1], tok[2], self.text)
            return self.table.var(tok[1])
        if tok[0] == "(":
            self.take()
            p = self.expr()
            self.take(")")
            return p
        if tok[0] == "/":
            raise ParseError("division is only allowed inside rational literals p/q", tok[2], self.text)
        raise ParseError("unexpected %r" % (tok[1] or "end of input"), tok[2], self.text)


def parse(text, table):
    """Parse `p/q`, identifiers, + - * ^ and parentheses into a SuperPolynomial."""
    return _Parser(text, table).parse()

"""Exact multivariate polynomials over Q or GF(p).

A `Polynomial` is an immutable term map {exponent tuple: nonzero coeff}
bound to a `PolyRing` (field, variable names, monomial order).  Arithmetic
is exact; zero coefficients are never stored; the zero polynomial has an
empty term map.  Hasse derivatives realize characteristic-free Taylor
coefficients: D^(alpha)(x^beta) = prod binom(beta_i, alpha_i) x^(beta-alpha).
"""

from __future__ import annotations

from math import comb

from .errors import InputError
from .fields import QQ
from .orders import GREVLEX, MonomialOrder, mono_deg

__all__ = ["PolyRing", "Polynomial", "parse_polynomial"]


class PolyRing:
    """Descriptor of k[x_1..x_s] with a monomial order."""

    def __init__(self, field, names, order: MonomialOrder = GREVLEX):
        names = tuple(names)
        if len(set(names)) != len(names):
            raise InputError(f"duplicate variable names: {names}")
        self.field = field
        self.names = names
        self.nvars = len(names)
        self.order = order
        self._index = {n: i for i, n in enumerate(names)}
        self.zero = Polynomial(self, {})
        self.one = Polynomial(self, {(0,) * self.nvars: field.one})

    def var(self, name):
        i = self._index.get(name)
        if i is None:
            raise InputError(f"unknown variable {name!r} in ring {self.names}")
        mono = tuple(1 if j == i else 0 for j in range(self.nvars))
        return Polynomial(self, {mono: self.field.one})

    def gens(self):
        return [self.var(n) for n in self.names]

    def const(self, c):
        if isinstance(c, int):
            c = self.field.from_int(c)
        if self.field.is_zero(c):
            return self.zero
        return Polynomial(self, {(0,) * self.nvars: c})

    def monomial(self, mono, coeff=None):
        coeff = self.field.one if coeff is None else coeff
        if self.field.is_zero(coeff):
            return self.zero
        return Polynomial(self, {tuple(mono): coeff})

    def from_terms(self, terms):
        return Polynomial(self, {m: c for m, c in terms.items() if not self.field.is_zero(c)})

    def with_order(self, order):
        if order == self.order:
            return self
        return PolyRing(self.field, self.names, order)

    def extend(self, extra_names, order=None):
        return PolyRing(self.field, self.names + tuple(extra_names), order or self.order)

    def key(self, mono):
        return self.order.key(mono)

    def __eq__(self, other):
        return (
            isinstance(other, PolyRing)
            and self.field == other.field
            and self.names == other.names
            and self.order == other.order
        )

    def __hash__(self):
        return hash((self.field, self.names, self.order))

    def __repr__(self):
        return f"{self.field!r}[{', '.join(self.names)}; {self.order.kind}]"


class Polynomial:
    __slots__ = ("ring", "terms", "_hash", "_lead")

    def __init__(self, ring, terms):
        self.ring = ring
        self.terms = terms
        self._hash = None
        self._lead = None

    # ----- basic structure -------------------------------------------------

    def is_zero(self):
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def leading(self):
        """(monomial, coeff) maximal under the ring order."""
        if self._lead is None:
            if not self.terms:
                raise ValueError("zero polynomial has no leading term")
            key = self.ring.key
            m = max(self.terms, key=key)
            self._lead = (m, self.terms[m])
        return self._lead

    def leading_monomial(self):
        return self.leading()[0]

    def leading_coeff(self):
        return self.leading()[1]

    def total_degree(self):
        if not self.terms:
            return -1
        return max(mono_deg(m) for m in self.terms)

    def min_degree(self):
        if not self.terms:
            return -1
        return min(mono_deg(m) for m in self.terms)

    def constant_term(self):
        return self.terms.get((0,) * self.ring.nvars, self.ring.field.zero)

    def is_homogeneous(self):
        if not self.terms:
            return True
        degs = {mono_deg(m) for m in self.terms}
        return len(degs) == 1

    def sorted_terms(self):
        """Terms sorted descending by the ring order (canonical listing)."""
        key = self.ring.key
        return sorted(self.terms.items(), key=lambda t: key(t[0]), reverse=True)

    # ----- arithmetic -------------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, Polynomial):
            if other.ring != self.ring:
                raise InputError(f"ring mismatch: {self.ring!r} vs {other.ring!r}")
            return other
        return self.ring.const(other)

    def __add__(self, other):
        other = self._coerce(other)
        field = self.ring.field
        out = dict(self.terms)
        for m, c in other.terms.items():
            if m in out:
                s = field.add(out[m], c)
                if field.is_zero(s):
                    del out[m]
                else:
                    out[m] = s
            else:
                out[m] = c
        return Polynomial(self.ring, out)

    __radd__ = __add__

    def __neg__(self):
        neg = self.ring.field.neg
        return Polynomial(self.ring, {m: neg(c) for m, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        other = self._coerce(other)
        field = self.ring.field
        if not self.terms or not other.terms:
            return self.ring.zero
        out = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = tuple(a + b for a, b in zip(m1, m2))
                p = field.mul(c1, c2)
                if m in out:
                    s = field.add(out[m], p)
                    if field.is_zero(s):
                        del out[m]
                    else:
                        out[m] = s
                else:
                    out[m] = p
        return Polynomial(self.ring, out)

    __rmul__ = __mul__

    def __pow__(self, e):
        if not isinstance(e, int) or e < 0:
            raise ValueError("polynomial power must be a non-negative int")
        result = self.ring.one
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base if e > 1 else base
            e >>= 1
        return result

    def scale(self, c):
        field = self.ring.field
        if not isinstance(c, Polynomial):
            if isinstance(c, int):
                c = field.from_int(c)
            if field.is_zero(c):
                return self.ring.zero
            mul = field.mul
            return Polynomial(self.ring, {m: mul(v, c) for m, v in self.terms.items()})
        return self * c

    def monomial_mul(self, mono, coeff):
        """self * coeff*x^mono, the hot path of reduction loops."""
        mul = self.ring.field.mul
        return Polynomial(
            self.ring,
            {tuple(a + b for a, b in zip(m, mono)): mul(c, coeff) for m, c in self.terms.items()},
        )

    # ----- ring maps --------------------------------------------------------

    def evaluate(self, point):
        """Exact value at a tuple of field elements."""
        if len(point) != self.ring.nvars:
            raise InputError("point arity does not match ring arity")
        field = self.ring.field
        modulus = getattr(field, "p", None)
        acc = field.zero
        for m, c in self.terms.items():
            v = c
            for e, p in zip(m, point):
                if e:
                    pe = pow(p, e, modulus) if modulus else p**e
                    v = field.mul(v, pe)
            acc = field.add(acc, v)
        return acc

    def substitute(self, images):
        """Ring homomorphism sending variable i to images[i] (Polynomial or
        field element); every variable must be assigned."""
        if len(images) != self.ring.nvars:
            raise InputError("substitution must assign every variable")
        target = None
        for im in images:
            if isinstance(im, Polynomial):
                target = im.ring
                break
        if target is None:
            return self.evaluate(images)
        imgs = [im if isinstance(im, Polynomial) else target.const(im) for im in images]
        pow_cache = [{0: target.one} for _ in imgs]

        def power(i, e):
            cache = pow_cache[i]
            if e not in cache:
                cache[e] = imgs[i] ** e
            return cache[e]

        acc = target.zero
        for m, c in self.terms.items():
            part = target.const(c)
            for i, e in enumerate(m):
                if e:
                    part = part * power(i, e)
            acc = acc + part
        return acc

    def rename(self, target):
        """Reinterpret in `target`, matching variables by name (target may
        have more variables, e.g. the doubled or homogenized ring)."""
        pos = []
        for n in self.ring.names:
            if n not in target._index:
                raise InputError(f"variable {n} missing from target ring")
            pos.append(target._index[n])
        out = {}
        for m, c in self.terms.items():
            mm = [0] * target.nvars
            for i, e in enumerate(m):
                mm[pos[i]] = e
            out[tuple(mm)] = c
        return Polynomial(target, out)

    # ----- calculus on terms -----------------------------------------------

    def hasse_derivative(self, alpha):
        """D^(alpha): coefficient of eps^alpha in f(x + eps); in char 0 this
        is (1/alpha!) d^alpha f.  Characteristic-free."""
        alpha = tuple(alpha)
        if len(alpha) != self.ring.nvars:
            raise InputError("multi-index arity mismatch")
        field = self.ring.field
        out = {}
        for m, c in self.terms.items():
            coef = 1
            ok = True
            for e, a in zip(m, alpha):
                if e < a:
                    ok = False
                    break
                if a:
                    coef *= comb(e, a)
            if not ok:
                continue
            v = field.mul(c, field.from_int(coef))
            if field.is_zero(v):
                continue
            mm = tuple(e - a for e, a in zip(m, alpha))
            w = field.add(out.get(mm, field.zero), v)
            if field.is_zero(w):
                out.pop(mm, None)
            else:
                out[mm] = w
        return Polynomial(self.ring, out)

    def initial_form(self):
        """Homogeneous component of minimal total degree (the In map)."""
        if not self.terms:
            raise InputError("initial form of the zero polynomial")
        d = self.min_degree()
        return Polynomial(self.ring, {m: c for m, c in self.terms.items() if mono_deg(m) == d})

    def translate(self, point):
        """f(x + p); translate(translate(f, p), -p) == f."""
        if len(point) != self.ring.nvars:
            raise InputError("point arity does not match ring arity")
        images = []
        for i, name in enumerate(self.ring.names):
            images.append(self.ring.var(name) + self.ring.const(point[i]))
        return self.substitute(images)

    def homogenize(self, target, hname):
        """Homogenize with variable `hname` of `target` (same field)."""
        if not self.terms:
            return target.zero
        d = self.total_degree()
        hidx = target._index[hname]
        pos = [target._index[n] for n in self.ring.names]
        out = {}
        for m, c in self.terms.items():
            mm = [0] * target.nvars
            for i, e in enumerate(m):
                mm[pos[i]] = e
            mm[hidx] = d - mono_deg(m)
            out[tuple(mm)] = c
        return Polynomial(target, out)

    # ----- comparisons / hashing / printing ---------------------------------

    def __eq__(self, other):
        if isinstance(other, Polynomial):
            return self.ring == other.ring and self.terms == other.terms
        if isinstance(other, int):
            return self == self.ring.const(other)
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.ring, frozenset(self.terms.items())))
        return self._hash

    def _term_str(self, m, c, lead=False):
        field = self.ring.field
        parts = []
        for name, e in zip(self.ring.names, m):
            if e == 1:
                parts.append(name)
            elif e > 1:
                parts.append(f"{name}^{e}")
        cs = field.to_str(c)
        neg = cs.startswith("-")
        mag = cs[1:] if neg else cs
        if not parts:
            body = mag
        elif mag == "1":
            body = "*".join(parts)
        else:
            body = "*".join([mag] + parts)
        sign = "-" if neg else ("+" if not lead else "")
        return sign, body

    def __str__(self):
        if not self.terms:
            return "0"
        out = []
        for i, (m, c) in enumerate(self.sorted_terms()):
            sign, body = self._term_str(m, c, lead=(i == 0))
            if i == 0:
                out.append(f"{sign}{body}" if sign == "-" else body)
            else:
                out.append(f" {sign or '+'} {body}")
        return "".join(out)

    def __repr__(self):
        return f"<{self} in {self.ring!r}>"


# ----- text syntax -----------------------------------------------------------
#
# variables are identifiers; operators + - * ^; integer and a/b rational
# literals; implicit multiplication is not allowed.


class _Tokenizer:
    def __init__(self, text):
        self.text = text
        self.pos = 0
        self.tokens = []
        self._scan()
        self.i = 0

    def _scan(self):
        t, n = self.text, len(self.text)
        i = 0
        while i < n:
            ch = t[i]
            if ch.isspace():
                i += 1
                continue
            if ch.isdigit():
                j = i
                while j < n and t[j].isdigit():
                    j += 1
                self.tokens.append(("int", t[i:j], i))
                i = j
                continue
            if ch.isalpha() or ch == "_":
                j = i
                while j < n and (t[j].isalnum() or t[j] == "_"):
                    j += 1
                self.tokens.append(("name", t[i:j], i))
                i = j
                continue
            if ch in "+-*^()/":
                self.tokens.append((ch, ch, i))
                i += 1
                continue
            raise InputError(f"unexpected character {ch!r} at column {i + 1}")
        self.tokens.append(("end", "", n))

    def peek(self):
        return self.tokens[self.i]

    def next(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok


def parse_polynomial(ring, text) -> Polynomial:
    """Parse the package-wide polynomial syntax into `ring`."""
    tz = _Tokenizer(text)

    def parse_expr():
        kind, _, _ = tz.peek()
        sign = 1
        while kind in ("+", "-"):
            if kind == "-":
                sign = -sign
            tz.next()
            kind, _, _ = tz.peek()
        acc = parse_term()
        if sign < 0:
            acc = -acc
        while True:
            kind, _, _ = tz.peek()
            if kind == "+":
                tz.next()
                acc = acc + parse_term()
            elif kind == "-":
                tz.next()
                acc = acc - parse_term()
            else:
                return acc

    def parse_term():
        acc = parse_factor()
        while tz.peek()[0] == "*":
            tz.next()
            acc = acc * parse_factor()
        return acc

    def parse_factor():
        base = parse_base()
        while tz.peek()[0] == "^":
            tz.next()
            kind, val, col = tz.next()
            if kind != "int":
                raise InputError(f"exponent must be an integer at column {col + 1}")
            base = base ** int(val)
        return base

    def parse_base():
        kind, val, col = tz.next()
        if kind == "(":
            inner = parse_expr()
            kind2, _, col2 = tz.next()
            if kind2 != ")":
                raise InputError(f"expected ')' at column {col2 + 1}")
            return inner
        if kind == "-":
            return -parse_base()
        if kind == "int":
            num = int(val)
            if tz.peek()[0] == "/":
                tz.next()
                kind2, val2, col2 = tz.next()
                if kind2 != "int":
                    raise InputError(f"expected integer denominator at column {col2 + 1}")
                return ring.const(ring.field.from_fraction(num, int(val2)))
            return ring.const(num)
        if kind == "name":
            if val not in ring._index:
                raise InputError(f"unknown variable {val!r} at column {col + 1}")
            return ring.var(val)
        raise InputError(f"unexpected token {val!r} at column {col + 1}")

    result = parse_expr()
    kind, val, col = tz.peek()
    if kind != "end":
        raise InputError(f"trailing input {val!r} at column {col + 1}")
    return result


def binomial_coefficient(n, k):
    return comb(n, k)


def make_qq_ring(names, order=GREVLEX):
    return PolyRing(QQ, names, order)

"""Rational functions over a multivariate polynomial ring.

These are the scalars of the transcendental coefficient field
L = Frac(k[u_1..u_m]) used by the jet machinery.  Fractions are kept
reduced (gcd of numerator and denominator is a unit) with a monic
denominator; gcds are computed by the primitive polynomial remainder
sequence, recursing on the largest variable present.
"""

from __future__ import annotations

from .errors import InputError
from .poly import Polynomial, PolyRing

__all__ = ["RationalFunction", "poly_gcd", "exact_poly_div", "FractionField"]


def _max_var(f, g):
    """Largest variable index appearing in f or g, or None for constants."""
    best = None
    for p in (f, g):
        for m in p.terms:
            for i in range(len(m) - 1, -1, -1):
                if m[i]:
                    if best is None or i > best:
                        best = i
                    break
    return best


def _univariate(f, v):
    """f as {degree in v: coefficient polynomial free of v}."""
    parts = {}
    ring = f.ring
    for m, c in f.terms.items():
        j = m[v]
        mm = m[:v] + (0,) + m[v + 1 :]
        part = parts.setdefault(j, {})
        part[mm] = c
    return {j: ring.from_terms(t) for j, t in parts.items()}


def _deg_in(f, v):
    return max((m[v] for m in f.terms), default=-1)


def _shift(f, v, j):
    """f * v^j."""
    out = {}
    for m, c in f.terms.items():
        out[m[:v] + (m[v] + j,) + m[v + 1 :]] = c
    return Polynomial(f.ring, out)


def exact_poly_div(f, g):
    """f / g when g divides f exactly; raises ValueError otherwise."""
    if g.is_zero():
        raise ZeroDivisionError("exact division by zero polynomial")
    ring = f.ring
    field = ring.field
    q = ring.zero
    r = f
    gm, gc = g.leading() if g.terms else ((), None)
    while not r.is_zero():
        rm, rc = r.leading()
        step = tuple(a - b for a, b in zip(rm, gm))
        if any(e < 0 for e in step):
            raise ValueError("inexact polynomial division")
        c = field.div(rc, gc)
        t = ring.monomial(step, c)
        q = q + t
        r = r - g.monomial_mul(step, c)
    return q


def _monic(f):
    if f.is_zero():
        return f
    lc = f.leading_coeff()
    if f.ring.field.is_zero(f.ring.field.sub(lc, f.ring.field.one)):
        return f
    inv = f.ring.field.inv(lc)
    return f.scale(inv)


def _pseudo_rem(f, g, v):
    """Pseudo-remainder of f by g in the variable v."""
    dg = _deg_in(g, v)
    guni = _univariate(g, v)
    glc = guni[dg]
    r = f
    while not r.is_zero():
        dr = _deg_in(r, v)
        if dr < dg:
            break
        runi = _univariate(r, v)
        rlc = runi[dr]
        r = r * glc - _shift(rlc * g, v, dr - dg)
    return r


def _content(f, v):
    """gcd of the v-coefficients of f (a polynomial free of v)."""
    parts = _univariate(f, v)
    c = f.ring.zero
    for j in sorted(parts):
        c = poly_gcd(c, parts[j])
        if c == f.ring.one:
            break
    return c


def poly_gcd(f, g):
    """Monic gcd in k[u_1..u_m]; gcd(0, 0) = 0."""
    if f.is_zero():
        return _monic(g)
    if g.is_zero():
        return _monic(f)
    v = _max_var(f, g)
    if v is None:
        return f.ring.one
    cf = _content(f, v)
    cg = _content(g, v)
    c = poly_gcd(cf, cg)
    fp = exact_poly_div(f, cf)
    gp = exact_poly_div(g, cg)
    if _deg_in(fp, v) < _deg_in(gp, v):
        fp, gp = gp, fp
    while True:
        if _deg_in(gp, v) <= 0 and not gp.is_zero():
            # primitive and free of v: coprime to fp in v
            return _monic(c)
        r = _pseudo_rem(fp, gp, v)
        if r.is_zero():
            return _monic(c * exact_poly_div(gp, _content(gp, v)))
        fp, gp = gp, exact_poly_div(r, _content(r, v))


class RationalFunction:
    """num/den with den monic and gcd(num, den) = 1."""

    __slots__ = ("num", "den", "_hash")

    def __init__(self, num, den=None, _reduced=False):
        ring = num.ring
        if den is None:
            den = ring.one
        if den.is_zero():
            raise InputError("rational function with zero denominator")
        if num.is_zero():
            den = ring.one
        elif not _reduced and den != ring.one:
            g = poly_gcd(num, den)
            if g != ring.one and not g.is_zero():
                num = exact_poly_div(num, g)
                den = exact_poly_div(den, g)
        if not den.is_zero() and not num.is_zero():
            lc = den.leading_coeff()
            if lc != ring.field.one:
                inv = ring.field.inv(lc)
                num = num.scale(inv)
                den = den.scale(inv)
        elif num.is_zero():
            den = ring.one
        self.num = num
        self.den = den
        self._hash = None

    @property
    def ring(self):
        return self.num.ring

    def is_zero(self):
        return self.num.is_zero()

    def __bool__(self):
        return not self.num.is_zero()

    def _coerce(self, other):
        if isinstance(other, RationalFunction):
            return other
        if isinstance(other, Polynomial):
            return RationalFunction(other)
        return RationalFunction(self.ring.const(other))

    def __add__(self, other):
        # Henrici: gcds only on inputs already reduced, never on big products.
        other = self._coerce(other)
        ring = self.ring
        one = ring.one
        if self.den == other.den:
            return RationalFunction(self.num + other.num, self.den)
        g = poly_gcd(self.den, other.den)
        if g == one:
            num = self.num * other.den + other.num * self.den
            return RationalFunction(num, self.den * other.den, _reduced=True)
        d1 = exact_poly_div(self.den, g)
        d2 = exact_poly_div(other.den, g)
        t = self.num * d2 + other.num * d1
        if t.is_zero():
            return RationalFunction(ring.zero)
        g2 = poly_gcd(t, g)
        if g2 == one:
            return RationalFunction(t, self.den * d2, _reduced=True)
        return RationalFunction(
            exact_poly_div(t, g2), d1 * exact_poly_div(other.den, g2), _reduced=True
        )

    __radd__ = __add__

    def __neg__(self):
        return RationalFunction(-self.num, self.den, _reduced=True)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        other = self._coerce(other)
        ring = self.ring
        if self.is_zero() or other.is_zero():
            return RationalFunction(ring.zero)
        n1, d1, n2, d2 = self.num, self.den, other.num, other.den
        g1 = poly_gcd(n1, d2)
        if g1 != ring.one:
            n1 = exact_poly_div(n1, g1)
            d2 = exact_poly_div(d2, g1)
        g2 = poly_gcd(n2, d1)
        if g2 != ring.one:
            n2 = exact_poly_div(n2, g2)
            d1 = exact_poly_div(d1, g2)
        return RationalFunction(n1 * n2, d1 * d2, _reduced=True)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._coerce(other)
        if other.is_zero():
            raise ZeroDivisionError("division by zero rational function")
        return self * RationalFunction(other.den, other.num)

    def __rtruediv__(self, other):
        return self._coerce(other) / self

    def inv(self):
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero")
        return RationalFunction(self.den, self.num)

    def __eq__(self, other):
        if isinstance(other, (Polynomial, int)):
            other = self._coerce(other)
        if not isinstance(other, RationalFunction):
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.num, self.den))
        return self._hash

    def __str__(self):
        if self.den == self.ring.one:
            return str(self.num)
        return f"({self.num})/({self.den})"

    def __repr__(self):
        return f"RationalFunction({self})"


class FractionField:
    """Field-protocol adapter so generic linear algebra can run over
    Frac(k[u_1..u_m]) the same way it runs over k."""

    def __init__(self, ring: PolyRing):
        self.ring = ring
        self.characteristic = ring.field.characteristic
        self.zero = RationalFunction(ring.zero)
        self.one = RationalFunction(ring.one)

    def from_int(self, n):
        return RationalFunction(self.ring.const(n))

    def from_poly(self, p):
        return RationalFunction(p)

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def mul(self, a, b):
        return a * b

    def neg(self, a):
        return -a

    def inv(self, a):
        return a.inv()

    def div(self, a, b):
        return a / b

    def is_zero(self, a):
        return a.is_zero()

    def to_str(self, a):
        return str(a)

    def __eq__(self, other):
        return isinstance(other, FractionField) and other.ring == self.ring

    def __hash__(self):
        return hash(("Frac", self.ring))

    def __repr__(self):
        return f"Frac({self.ring!r})"

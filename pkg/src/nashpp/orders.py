"""Monomial orders as sort-key factories.

A monomial is a bare tuple of non-negative integer exponents.  An order
turns it into a Python tuple such that bigger key == bigger monomial;
all comparisons in the engine go through these keys.  Every order here
is total and multiplicative; lex/grlex/grevlex are the classical ones,
`weighted` compares a weight degree first and delegates ties (this is
how elimination and homogenization orders are realized).
"""

from __future__ import annotations


class MonomialOrder:
    """One of lex | grlex | grevlex | weighted, with a variable permutation.

    `perm` lists variable indices from most to least significant; identity
    when omitted.  For `weighted`, `weights` is a per-variable integer
    vector and `tiebreak` another MonomialOrder deciding equal-weight
    comparisons.
    """

    def __init__(self, kind="grevlex", perm=None, weights=None, tiebreak=None):
        if kind not in ("lex", "grlex", "grevlex", "weighted"):
            raise ValueError(f"unknown monomial order kind: {kind}")
        self.kind = kind
        self.perm = tuple(perm) if perm is not None else None
        self.weights = tuple(weights) if weights is not None else None
        self.tiebreak = tiebreak
        if kind == "weighted":
            if self.weights is None:
                raise ValueError("weighted order needs weights")
            if self.tiebreak is None:
                self.tiebreak = MonomialOrder("grevlex")

    def _permuted(self, mono):
        if self.perm is None:
            return mono
        return tuple(mono[i] for i in self.perm)

    def key(self, mono):
        """Sort key; max(key) is the leading monomial."""
        if self.kind == "lex":
            return self._permuted(mono)
        if self.kind == "grlex":
            return (sum(mono), self._permuted(mono))
        if self.kind == "grevlex":
            p = self._permuted(mono)
            return (sum(mono), tuple(-e for e in reversed(p)))
        w = self.weights
        wdeg = sum(w[i] * e for i, e in enumerate(mono))
        return (wdeg, self.tiebreak.key(mono))

    def _ident(self):
        tb = self.tiebreak._ident() if self.tiebreak is not None else None
        return (self.kind, self.perm, self.weights, tb)

    def __eq__(self, other):
        return isinstance(other, MonomialOrder) and self._ident() == other._ident()

    def __hash__(self):
        return hash(self._ident())

    def __repr__(self):
        if self.kind == "weighted":
            return f"MonomialOrder(weighted, w={self.weights}, tie={self.tiebreak!r})"
        if self.perm is not None:
            return f"MonomialOrder({self.kind}, perm={self.perm})"
        return f"MonomialOrder({self.kind})"


GREVLEX = MonomialOrder("grevlex")
LEX = MonomialOrder("lex")
GRLEX = MonomialOrder("grlex")


def elimination_order(nvars, eliminate):
    """Order making every monomial containing an eliminated variable larger
    than every monomial free of them; ties broken by grevlex."""
    w = [0] * nvars
    for i in eliminate:
        w[i] = 1
    return MonomialOrder("weighted", weights=w, tiebreak=GREVLEX)


def mono_mul(a, b):
    return tuple(x + y for x, y in zip(a, b))


def mono_div(a, b):
    """a / b, or None when b does not divide a."""
    q = []
    for x, y in zip(a, b):
        if x < y:
            return None
        q.append(x - y)
    return tuple(q)


def mono_divides(b, a):
    return all(x >= y for x, y in zip(a, b))


def mono_lcm(a, b):
    return tuple(max(x, y) for x, y in zip(a, b))


def mono_deg(a):
    return sum(a)

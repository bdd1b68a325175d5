"""The order-n module of principal parts, built two independent ways.

Doubled presentation: k[x, xi] / (I(x) + I(xi) + (x - xi)^{n+1}), whose
fiber at the (translated) origin is k[xi]/(I(xi) + (xi)^{n+1}).

Module presentation: the positive part P^n_+ over B = S/I on generators
e_alpha (1 <= |alpha| <= n) with one Hasse-Taylor relation vector
(D^(alpha)(x^beta f_i))_alpha for every generator f_i and multiplier
x^beta, |beta| <= n.  Expanding x^beta f_i at a nearby point is exactly
the statement that these vanish on the variety, so the two fiber
dimensions must satisfy doubled = 1 + module (the unit summand).
"""

from __future__ import annotations

from math import comb

from .errors import ConsistencyError, InputError
from .groebner import Ideal, alpha_indices, exponents_up_to
from .modgb import ModulePresentation, Vec
from .poly import PolyRing

__all__ = [
    "expected_rank",
    "PrincipalPartsDoubled",
    "build_doubled",
    "fiber_dim_doubled",
    "build_module",
    "cross_check_fibers",
    "fiber_dim_doubled_at",
]

XI_PREFIX = "xi_"


def expected_rank(n, d):
    """D = binom(n+d, d): the principal-parts fiber dimension at a smooth
    point of a d-dimensional variety."""
    if n < 1 or d < 1:
        raise InputError("expected_rank needs n >= 1 and d >= 1")
    return comb(n + d, d)


class PrincipalPartsDoubled:
    """Doubled-variable data of P^n at a point (translated to the origin)."""

    def __init__(self, order_n, base_ideal, doubled_ideal, point):
        self.n = order_n
        self.base_ideal = base_ideal  # translated: the point sits at 0
        self.doubled = doubled_ideal
        self.point = tuple(point)

    def xi_names(self):
        base = self.base_ideal.ring.names
        return tuple(XI_PREFIX + n for n in base)


def _check_point(I: Ideal, point):
    if len(point) != I.ring.nvars:
        raise InputError("point arity does not match ring arity")
    if not I.vanishes_at(point):
        raise InputError("point does not lie on the variety")


def build_doubled(I: Ideal, n, point) -> PrincipalPartsDoubled:
    """J = <f_i(x)> + <f_i(xi)> + <x - xi>^{n+1} after translating the
    point to the origin."""
    _check_point(I, point)
    I0 = I.translate(point)
    ring = I0.ring
    names = ring.names
    xi_names = tuple(XI_PREFIX + nm for nm in names)
    dring = PolyRing(ring.field, names + xi_names, ring.order)
    gens = [g.rename(dring) for g in I0.gens]
    xi_vars = [dring.var(nm) for nm in xi_names]
    gens += [g.substitute(xi_vars) for g in I0.gens]
    diffs = [dring.var(nm) - xv for nm, xv in zip(names, xi_vars)]
    for beta in exponents_up_to(ring.nvars, n + 1, mindeg=n + 1):
        prod = dring.one
        for d_var, e in zip(diffs, beta):
            if e:
                prod = prod * d_var**e
        gens.append(prod)
    return PrincipalPartsDoubled(n, I0, Ideal(dring, gens), point)


def fiber_dim_doubled(P: PrincipalPartsDoubled) -> int:
    """dim_k P^n (x) k(p): substitute x -> 0 in the doubled ideal, leaving
    k[xi]/(I(xi) + (xi)^{n+1}); count its standard monomials."""
    dring = P.doubled.ring
    base = P.base_ideal.ring
    s = base.nvars
    xi_ring = PolyRing(base.field, P.xi_names(), base.order)
    images = [xi_ring.zero] * s + list(xi_ring.gens())
    substituted = []
    for g in P.doubled.gens:
        h = g.substitute(images)
        if not h.is_zero():
            substituted.append(h)
    fiber_ideal = Ideal(xi_ring, substituted)
    return len(fiber_ideal.standard_monomials_truncated(P.n))


def fiber_dim_doubled_at(I: Ideal, n, point) -> int:
    return fiber_dim_doubled(build_doubled(I, n, point))


def build_module(I: Ideal, n, point) -> ModulePresentation:
    """P^n_+ over B at the point: generators e_alpha, 1 <= |alpha| <= n,
    relation vectors (D^(alpha)(x^beta f_i)) for |beta| <= n."""
    _check_point(I, point)
    I0 = I.translate(point)
    ring = I0.ring
    s = ring.nvars
    labels = alpha_indices(s, n)
    pos = {a: i for i, a in enumerate(labels)}
    gb = I0.groebner()
    relations = []
    for g in I0.gens:
        for beta in exponents_up_to(s, n):
            h = g.monomial_mul(beta, ring.field.one)
            if not gb.normal_form(h).is_zero():
                raise ConsistencyError(
                    "relation multiplier left the ideal: truncation is inconsistent"
                )
            comps = {}
            for a in labels:
                entry = gb.normal_form(h.hasse_derivative(a))
                if not entry.is_zero():
                    comps[pos[a]] = entry
            relations.append(Vec(ring, len(labels), comps))
    return ModulePresentation(I0, len(labels), relations, labels)


class CrossCheck:
    """Agreement record between the two fiber computations at one point."""

    def __init__(self, n, point, doubled_dim, module_plus_dim):
        self.n = n
        self.point = tuple(point)
        self.doubled_dim = doubled_dim
        self.module_plus_dim = module_plus_dim

    @property
    def consistent(self):
        return self.doubled_dim == 1 + self.module_plus_dim

    def __repr__(self):
        return (
            f"CrossCheck(n={self.n}, doubled={self.doubled_dim}, "
            f"module={self.module_plus_dim})"
        )


def cross_check_fibers(I: Ideal, n, point, module=None) -> CrossCheck:
    """Assert that the doubled fiber equals 1 + the module fiber (the unit
    summand of P^n = B + P^n_+); mismatch is a hard failure."""
    doubled = fiber_dim_doubled_at(I, n, point)
    M = module if module is not None else build_module(I, n, point)
    origin = (I.ring.field.zero,) * I.ring.nvars
    mod_dim = M.fiber_dimension(origin)
    check = CrossCheck(n, point, doubled, mod_dim)
    if not check.consistent:
        raise ConsistencyError(
            f"presentation adequacy violated at point {point}, n={n}: "
            f"doubled fiber {doubled} != 1 + {mod_dim}"
        )
    return check

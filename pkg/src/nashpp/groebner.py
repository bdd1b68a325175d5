"""Buchberger engine for polynomial ideals.

Normal forms, ideal membership, elimination, colon/saturation, Krull
dimension by independent sets, truncated standard monomials, tangent
cones via homogenization, and the Jacobian smoothness criterion.

The pair queue uses the normal strategy (minimal lcm degree) with
Buchberger's product and chain criteria; bases are fully auto-reduced
with monic leading coefficients, so a Groebner basis is canonical for
its (ideal, order) pair and all downstream results are deterministic.
"""

from __future__ import annotations

import heapq
import itertools
import os

from .errors import BudgetExceededError, InputError
from .linalg import rank as matrix_rank
from .orders import (
    GREVLEX,
    MonomialOrder,
    mono_deg,
    mono_div,
    mono_lcm,
    mono_mul,
)
from .poly import Polynomial, PolyRing

__all__ = [
    "Budget",
    "GroebnerBasis",
    "Ideal",
    "buchberger",
    "normal_form",
    "exponents_of_degree",
    "exponents_up_to",
    "alpha_indices",
]

BUDGET_ENV = "NASHPP_GB_BUDGET"


class Budget:
    """Resource cap for basis computations; exceeding it raises, never
    silently truncates."""

    def __init__(self, max_basis=5000, max_degree=200):
        self.max_basis = max_basis
        self.max_degree = max_degree

    @classmethod
    def from_env(cls):
        raw = os.environ.get(BUDGET_ENV)
        if not raw:
            return cls()
        parts = [p.strip() for p in raw.split(",")]
        try:
            if len(parts) == 1:
                return cls(max_basis=int(parts[0]))
            return cls(max_basis=int(parts[0]), max_degree=int(parts[1]))
        except ValueError as exc:
            raise InputError(f"malformed {BUDGET_ENV}={raw!r}") from exc

    def check(self, basis_size, degree):
        if basis_size > self.max_basis:
            raise BudgetExceededError(
                f"basis size {basis_size} exceeds budget {self.max_basis}"
            )
        if degree > self.max_degree:
            raise BudgetExceededError(
                f"element degree {degree} exceeds budget {self.max_degree}"
            )


def _resolve_budget(budget):
    return budget if budget is not None else Budget.from_env()


# ----- enumeration helpers ----------------------------------------------------


def exponents_of_degree(nvars, d):
    """All exponent tuples of total degree d, deterministic order."""
    if nvars == 0:
        return [()] if d == 0 else []
    out = []
    for hd in range(d, -1, -1):
        for rest in exponents_of_degree(nvars - 1, d - hd):
            out.append((hd,) + rest)
    return out


def exponents_up_to(nvars, d, mindeg=0):
    out = []
    for deg in range(mindeg, d + 1):
        out.extend(exponents_of_degree(nvars, deg))
    return out


def alpha_indices(nvars, n):
    """Multi-indices 1 <= |alpha| <= n ordered by degree, then with the
    first variables leading; fixes generator positions package-wide."""
    return exponents_up_to(nvars, n, mindeg=1)


# ----- reduction --------------------------------------------------------------


def _reduce_full(f, reducers, ring):
    """Full normal form of f against monic reducers [(lead, tail_terms)].

    Every term of the remainder is divisible by no reducer lead; the map
    f -> NF(f) is k-linear for a fixed reducer list.
    """
    field = ring.field
    key = ring.key
    work = dict(f.terms)
    rem = {}
    while work:
        m = max(work, key=key)
        c = work.pop(m)
        hit = None
        for lead, tail in reducers:
            q = mono_div(m, lead)
            if q is not None:
                hit = (q, tail)
                break
        if hit is None:
            rem[m] = c
            continue
        q, tail = hit
        for gm, gc in tail.items():
            mm = mono_mul(gm, q)
            v = field.mul(c, gc)
            cur = work.get(mm)
            if cur is None:
                work[mm] = field.neg(v)
            else:
                s = field.sub(cur, v)
                if field.is_zero(s):
                    del work[mm]
                else:
                    work[mm] = s
    return Polynomial(ring, rem)


def _monic(f):
    lc = f.leading_coeff()
    if lc == f.ring.field.one:
        return f
    return f.scale(f.ring.field.inv(lc))


def _prepare(g):
    lead = g.leading_monomial()
    tail = {m: c for m, c in g.terms.items() if m != lead}
    return (lead, tail)


def buchberger(gens, ring, budget=None):
    """Reduced Groebner basis of <gens> in `ring` (its order)."""
    budget = _resolve_budget(budget)
    G = []
    for g in gens:
        if not g.is_zero():
            G.append(_monic(g))
    if not G:
        return []
    reducers = [_prepare(g) for g in G]
    leads = [g.leading_monomial() for g in G]
    heap = []
    pending = set()
    for i in range(len(G)):
        for j in range(i + 1, len(G)):
            lcm = mono_lcm(leads[i], leads[j])
            heapq.heappush(heap, (mono_deg(lcm), ring.key(lcm), i, j))
            pending.add((i, j))

    field = ring.field
    while heap:
        _, _, i, j = heapq.heappop(heap)
        if (i, j) not in pending:
            continue
        pending.discard((i, j))
        li, lj = leads[i], leads[j]
        lcm = mono_lcm(li, lj)
        # product criterion: coprime leading monomials
        if mono_deg(lcm) == mono_deg(li) + mono_deg(lj):
            continue
        # chain criterion: some k with lead | lcm and both pairs done
        skip = False
        for k in range(len(G)):
            if k in (i, j):
                continue
            if mono_div(lcm, leads[k]) is None:
                continue
            a = (min(i, k), max(i, k))
            b = (min(j, k), max(j, k))
            if a not in pending and b not in pending:
                skip = True
                break
        if skip:
            continue
        qi = mono_div(lcm, li)
        qj = mono_div(lcm, lj)
        s = G[i].monomial_mul(qi, field.one) - G[j].monomial_mul(qj, field.one)
        h = _reduce_full(s, reducers, ring)
        if h.is_zero():
            continue
        h = _monic(h)
        budget.check(len(G) + 1, h.total_degree())
        G.append(h)
        reducers.append(_prepare(h))
        leads.append(h.leading_monomial())
        t = len(G) - 1
        for i2 in range(t):
            lcm2 = mono_lcm(leads[i2], leads[t])
            heapq.heappush(heap, (mono_deg(lcm2), ring.key(lcm2), i2, t))
            pending.add((i2, t))
    return _autoreduce(G, ring)


def _autoreduce(G, ring):
    """Minimalize, fully inter-reduce, sort by leading monomial."""
    key = ring.key
    G = sorted(G, key=lambda g: key(g.leading_monomial()))
    minimal = []
    for g in G:
        lm = g.leading_monomial()
        if any(mono_div(lm, h.leading_monomial()) is not None for h in minimal):
            continue
        minimal.append(g)
    reduced = []
    for idx, g in enumerate(minimal):
        others = [_prepare(h) for k, h in enumerate(minimal) if k != idx]
        r = _reduce_full(g, others, ring)
        if not r.is_zero():
            reduced.append(_monic(r))
    return sorted(reduced, key=lambda g: key(g.leading_monomial()))


class GroebnerBasis:
    """A reduced Groebner basis: monic, auto-reduced, sorted."""

    def __init__(self, ring, polys):
        self.ring = ring
        self.order = ring.order
        self.polys = tuple(polys)
        self._reducers = [_prepare(g) for g in self.polys]

    def normal_form(self, f):
        if f.ring != self.ring:
            f = f.rename(self.ring)
        return _reduce_full(f, self._reducers, self.ring)

    def contains(self, f):
        return self.normal_form(f).is_zero()

    def leading_monomials(self):
        return [g.leading_monomial() for g in self.polys]

    def __iter__(self):
        return iter(self.polys)

    def __len__(self):
        return len(self.polys)

    def __eq__(self, other):
        return (
            isinstance(other, GroebnerBasis)
            and self.ring == other.ring
            and self.polys == other.polys
        )

    def __repr__(self):
        return f"GroebnerBasis({[str(g) for g in self.polys]})"


def normal_form(f, gb: GroebnerBasis):
    return gb.normal_form(f)


class Ideal:
    """Generators plus cached Groebner bases, one per monomial order."""

    def __init__(self, ring: PolyRing, gens):
        self.ring = ring
        cleaned = []
        for g in gens:
            if isinstance(g, Polynomial) and g.ring != ring:
                g = g.rename(ring)
            if not g.is_zero():
                cleaned.append(g)
        self.gens = tuple(cleaned)
        self._gb_cache = {}

    # ----- basics ------------------------------------------------------------

    def groebner(self, order=None, budget=None) -> GroebnerBasis:
        order = order or self.ring.order
        gb = self._gb_cache.get(order)
        if gb is None:
            ring = self.ring.with_order(order)
            gens = [g.rename(ring) if ring != self.ring else g for g in self.gens]
            gb = GroebnerBasis(ring, buchberger(gens, ring, budget))
            self._gb_cache[order] = gb
        return gb

    def normal_form(self, f, order=None):
        return self.groebner(order).normal_form(f)

    def contains(self, f):
        return self.normal_form(f).is_zero()

    def contains_ideal(self, other: "Ideal"):
        return all(self.contains(g) for g in other.gens)

    def equals(self, other: "Ideal"):
        return self.contains_ideal(other) and other.contains_ideal(self)

    def is_zero(self):
        return not self.gens

    def is_unit(self):
        gb = self.groebner()
        return len(gb) == 1 and gb.polys[0].total_degree() == 0

    def is_homogeneous(self):
        return all(g.is_homogeneous() for g in self.gens)

    def vanishes_at(self, point):
        field = self.ring.field
        return all(field.is_zero(g.evaluate(point)) for g in self.gens)

    def translate(self, point):
        """Ideal of f(x + p): moves the point p to the origin."""
        return Ideal(self.ring, [g.translate(point) for g in self.gens])

    # ----- elimination, colon, saturation -------------------------------------

    def eliminate(self, keep, budget=None) -> "Ideal":
        """Generators of I `intersect` k[keep], by a weight elimination order.

        Returns an ideal of the subring on `keep` (original relative
        variable order); with keep = all variables this is I itself.
        """
        keep = list(keep)
        unknown = [n for n in keep if n not in self.ring._index]
        if unknown:
            raise InputError(f"unknown variables in keep-set: {unknown}")
        if set(keep) == set(self.ring.names):
            return self
        elim_idx = [i for i, n in enumerate(self.ring.names) if n not in set(keep)]
        order = MonomialOrder(
            "weighted",
            weights=[1 if i in elim_idx else 0 for i in range(self.ring.nvars)],
            tiebreak=GREVLEX,
        )
        gb = self.groebner(order, budget)
        keep_names = tuple(n for n in self.ring.names if n in set(keep))
        sub = PolyRing(self.ring.field, keep_names, GREVLEX)
        kept = []
        for g in gb:
            if all(
                all(m[i] == 0 for i in elim_idx) for m in g.terms
            ):
                out = {}
                keep_pos = [self.ring._index[n] for n in keep_names]
                for m, c in g.terms.items():
                    out[tuple(m[i] for i in keep_pos)] = c
                kept.append(Polynomial(sub, out))
        return Ideal(sub, kept)

    def saturate(self, f, budget=None) -> "Ideal":
        """(I : f^infinity) via the extra-variable trick <I, 1 - w f>."""
        if not isinstance(f, Polynomial):
            raise InputError("saturation needs a polynomial")
        if f.is_zero():
            raise InputError("saturation by zero")
        wname = "_w"
        while wname in self.ring.names:
            wname += "w"
        ext = self.ring.extend((wname,), GREVLEX)
        w = ext.var(wname)
        gens = [g.rename(ext) for g in self.gens]
        gens.append(ext.one - w * f.rename(ext))
        extended = Ideal(ext, gens)
        elim = extended.eliminate(self.ring.names, budget)
        return Ideal(self.ring, [g.rename(self.ring) for g in elim.gens])

    # ----- dimension and fibers ------------------------------------------------

    def krull_dimension(self, budget=None) -> int:
        """dim V(I): the largest variable subset U with in(I) meeting k[U]
        only in 0 (independent sets of the initial ideal)."""
        gb = self.groebner(None, budget)
        if len(gb) == 1 and gb.polys[0].total_degree() == 0:
            raise InputError("Krull dimension of the unit ideal")
        leads = gb.leading_monomials()
        s = self.ring.nvars
        for size in range(s, -1, -1):
            for combo in itertools.combinations(range(s), size):
                cset = set(combo)
                independent = True
                for lm in leads:
                    if all((e == 0 or i in cset) for i, e in enumerate(lm)):
                        independent = False
                        break
                if independent:
                    return size
        raise InputError("Krull dimension of the unit ideal")

    def truncation(self, n) -> "Ideal":
        """I + m^{n+1}, m the irrelevant ideal at the origin."""
        ring = self.ring
        gens = list(self.gens)
        for e in exponents_of_degree(ring.nvars, n + 1):
            gens.append(ring.monomial(e))
        return Ideal(ring, gens)

    def standard_monomials_truncated(self, n, budget=None):
        """Monomials of degree <= n outside LT(I + m^{n+1}); their count is
        dim_k k[x]/(I + m^{n+1})."""
        gb = self.truncation(n).groebner(None, budget)
        leads = gb.leading_monomials()
        out = []
        for m in exponents_up_to(self.ring.nvars, n):
            if not any(mono_div(m, lm) is not None for lm in leads):
                out.append(m)
        return out

    # ----- tangent cone ---------------------------------------------------------

    def tangent_cone(self, budget=None) -> "Ideal":
        """In(I), the ideal of lowest-degree forms of all elements.

        Homogenize a degree-compatible Groebner basis with a fresh
        variable h, recompute a basis under an h-dominant order, then
        dehomogenize and take initial forms.
        """
        field = self.ring.field
        for g in self.gens:
            if not field.is_zero(g.constant_term()):
                raise InputError(
                    "tangent cone needs generators vanishing at the origin"
                )
        if not self.gens:
            return self
        if self.is_homogeneous():
            return Ideal(self.ring, self.gens)
        gb = self.groebner(GREVLEX, budget)
        hname = "_h"
        while hname in self.ring.names:
            hname += "h"
        hidx = self.ring.nvars
        order = MonomialOrder(
            "weighted",
            weights=[0] * self.ring.nvars + [1],
            tiebreak=GREVLEX,
        )
        ext = PolyRing(field, self.ring.names + (hname,), order)
        homog = [g.homogenize(ext, hname) for g in gb]
        basis = buchberger(homog, ext, _resolve_budget(budget))
        forms = []
        seen = set()
        for b in basis:
            out = {}
            for m, c in b.terms.items():
                mm = m[:hidx]
                out[mm] = field.add(out.get(mm, field.zero), c)
            deh = Polynomial(self.ring, {m: c for m, c in out.items() if not field.is_zero(c)})
            if deh.is_zero():
                continue
            form = deh.initial_form()
            if form not in seen:
                seen.add(form)
                forms.append(form)
        # canonical minimal-ish generators: the reduced basis of the cone
        reduced = buchberger(forms, self.ring.with_order(GREVLEX), _resolve_budget(budget))
        cone = Ideal(self.ring, [g.rename(self.ring) for g in reduced])
        cone._gb_cache[GREVLEX] = GroebnerBasis(
            self.ring.with_order(GREVLEX), [g.rename(self.ring.with_order(GREVLEX)) for g in reduced]
        )
        return cone

    def is_standard_basis(self, gens, budget=None) -> bool:
        """Whether <initial_form(g) : g in gens> equals In(I); `gens` must
        generate I (checked)."""
        cand = Ideal(self.ring, gens)
        if not (self.contains_ideal(cand) and cand.contains_ideal(self)):
            raise InputError("candidate set does not generate the ideal")
        in_gens = Ideal(self.ring, [g.initial_form() for g in gens if not g.is_zero()])
        cone = self.tangent_cone(budget)
        return in_gens.equals(cone)

    # ----- smoothness -------------------------------------------------------------

    def jacobian_matrix_at(self, point):
        ring = self.ring
        rows = []
        for g in self.gens:
            row = []
            for j in range(ring.nvars):
                e = tuple(1 if i == j else 0 for i in range(ring.nvars))
                row.append(g.hasse_derivative(e).evaluate(point))
            rows.append(row)
        return rows

    def jacobian_smooth_at(self, point, dimension=None) -> bool:
        """Classical criterion: rank of the Jacobian at the point equals
        s - d.  The point must lie on V(I)."""
        if not self.vanishes_at(point):
            raise InputError("point does not lie on the variety")
        d = dimension if dimension is not None else (
            self.krull_dimension() if self.gens else self.ring.nvars
        )
        rows = self.jacobian_matrix_at(point)
        r = matrix_rank(rows, self.ring.field, self.ring.nvars) if rows else 0
        return r == self.ring.nvars - d

    def __repr__(self):
        return f"Ideal({[str(g) for g in self.gens]})"

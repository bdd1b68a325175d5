"""Groebner machinery for submodules of free modules over B = S/I.

Vectors live in S^r with sparse position -> polynomial components.  The
module order is term-over-position: monomials compare by the ring order
and ties go to the position of smaller index, so the low-order generator
positions lead.  Module Buchberger uses the chain criterion only (the
coprimality shortcut is not valid for vectors).

First syzygies are computed by tracking representations through a
Buchberger run and then applying Schreyer's construction to every
same-position pair of the final basis; colon modules (N : f) come from
syzygies of (f e_1, .., f e_r, gens N), and saturation (N : f^oo)
iterates the colon until two consecutive reduced module bases agree.
"""

from __future__ import annotations

import itertools

from .errors import BudgetExceededError, InputError, NashppError
from .groebner import Ideal, _resolve_budget
from .linalg import rank as matrix_rank
from .orders import mono_deg, mono_div, mono_lcm, mono_mul
from .poly import Polynomial

__all__ = ["Vec", "ModulePresentation", "module_groebner", "syzygies", "colon_module", "saturate_module"]


class Vec:
    """Sparse vector in S^r (free module over the polynomial ring)."""

    __slots__ = ("ring", "r", "comps")

    def __init__(self, ring, r, comps=None):
        self.ring = ring
        self.r = r
        self.comps = {}
        if comps:
            for p, poly in comps.items():
                if not poly.is_zero():
                    self.comps[p] = poly

    @classmethod
    def unit(cls, ring, r, pos, poly=None):
        return cls(ring, r, {pos: poly if poly is not None else ring.one})

    def is_zero(self):
        return not self.comps

    def __add__(self, other):
        out = dict(self.comps)
        for p, poly in other.comps.items():
            s = out.get(p)
            s = poly if s is None else s + poly
            if s.is_zero():
                out.pop(p, None)
            else:
                out[p] = s
        return Vec(self.ring, self.r, out)

    def __sub__(self, other):
        return self + other.scale(-1)

    def scale(self, c):
        if isinstance(c, Polynomial):
            return Vec(self.ring, self.r, {p: poly * c for p, poly in self.comps.items()})
        return Vec(self.ring, self.r, {p: poly.scale(c) for p, poly in self.comps.items()})

    def monomial_mul(self, mono, coeff):
        return Vec(
            self.ring,
            self.r,
            {p: poly.monomial_mul(mono, coeff) for p, poly in self.comps.items()},
        )

    def component(self, p):
        return self.comps.get(p, self.ring.zero)

    def leading(self):
        """(mono, pos, coeff): maximal term under term-over-position."""
        if not self.comps:
            raise ValueError("zero vector has no leading term")
        key = self.ring.key
        best = None
        for p, poly in self.comps.items():
            m, c = poly.leading()
            cand = (key(m), -p)
            if best is None or cand > best[0]:
                best = (cand, m, p, c)
        return best[1], best[2], best[3]

    def map_components(self, fn):
        return Vec(self.ring, self.r, {p: fn(poly) for p, poly in self.comps.items()})

    def __eq__(self, other):
        return (
            isinstance(other, Vec)
            and self.ring == other.ring
            and self.r == other.r
            and self.comps == other.comps
        )

    def __hash__(self):
        return hash((self.r, frozenset((p, poly) for p, poly in self.comps.items())))

    def __repr__(self):
        parts = [f"e{p}*({poly})" for p, poly in sorted(self.comps.items())]
        return "Vec(" + (" + ".join(parts) if parts else "0") + ")"


def _vec_monic(v):
    _, _, c = v.leading()
    field = v.ring.field
    if c == field.one:
        return v, field.one
    inv = field.inv(c)
    return v.scale(inv), inv


def _flatten(v):
    out = {}
    for p, poly in v.comps.items():
        for m, c in poly.terms.items():
            out[(p, m)] = c
    return out


def _unflatten(ring, r, flat):
    per_pos = {}
    for (p, m), c in flat.items():
        per_pos.setdefault(p, {})[m] = c
    return Vec(ring, r, {p: Polynomial(ring, t) for p, t in per_pos.items()})


def _prepare_vec(g):
    lead_m, lead_p, _ = g.leading()
    tail = []
    for p, poly in g.comps.items():
        for m, c in poly.terms.items():
            if p == lead_p and m == lead_m:
                continue
            tail.append((p, m, c))
    return (lead_p, lead_m, tail)


def vec_divide(v, basis, prepared=None, want_quotients=False):
    """Full division of v by monic `basis`: v = sum q_k basis_k + rem, no
    remainder term divisible by a basis lead (in its position)."""
    ring = v.ring
    field = ring.field
    key = ring.key
    if prepared is None:
        prepared = [_prepare_vec(g) for g in basis]
    work = _flatten(v)
    rem = {}
    quots = [dict() for _ in basis] if want_quotients else None
    while work:
        (p, m) = max(work, key=lambda t: (key(t[1]), -t[0]))
        c = work.pop((p, m))
        hit = None
        for k, (lp, lm, tail) in enumerate(prepared):
            if lp != p:
                continue
            q = mono_div(m, lm)
            if q is not None:
                hit = (k, q, tail)
                break
        if hit is None:
            rem[(p, m)] = c
            continue
        k, q, tail = hit
        if want_quotients:
            quots[k][q] = field.add(quots[k].get(q, field.zero), c)
        for (tp, tm, tc) in tail:
            mm = mono_mul(tm, q)
            v2 = field.mul(c, tc)
            cur = work.get((tp, mm))
            if cur is None:
                work[(tp, mm)] = field.neg(v2)
            else:
                s = field.sub(cur, v2)
                if field.is_zero(s):
                    del work[(tp, mm)]
                else:
                    work[(tp, mm)] = s
    remainder = _unflatten(ring, v.r, rem)
    if want_quotients:
        qpolys = [Polynomial(ring, {m: c for m, c in qd.items() if not field.is_zero(c)}) for qd in quots]
        return qpolys, remainder
    return remainder


def _max_vec_degree(v):
    return max((poly.total_degree() for poly in v.comps.values()), default=-1)


def _module_buchberger(vectors, ring, r, budget, tracked=False, ninputs=None):
    """Groebner basis of the submodule generated by `vectors` in S^r.

    With tracked=True each basis element carries its representation in
    terms of the inputs, as a Vec in S^m (m = len(vectors)).
    """
    budget = _resolve_budget(budget)
    m = ninputs if ninputs is not None else len(vectors)
    G, reps = [], []
    for i, v in enumerate(vectors):
        if v.is_zero():
            continue
        g, factor = _vec_monic(v)
        G.append(g)
        if tracked:
            reps.append(Vec.unit(ring, m, i, ring.const(factor)))
    prepared = [_prepare_vec(g) for g in G]
    leads = [(g.leading()[1], g.leading()[0]) for g in G]  # (pos, mono)

    heap = []
    pending = set()

    def push(i, j):
        if leads[i][0] != leads[j][0]:
            return
        lcm = mono_lcm(leads[i][1], leads[j][1])
        heap.append((mono_deg(lcm), ring.key(lcm), i, j))
        pending.add((i, j))

    for i in range(len(G)):
        for j in range(i + 1, len(G)):
            push(i, j)
    heap.sort()
    import heapq

    heapq.heapify(heap)
    while heap:
        _, _, i, j = heapq.heappop(heap)
        if (i, j) not in pending:
            continue
        pending.discard((i, j))
        (pi, mi), (pj, mj) = leads[i], leads[j]
        lcm = mono_lcm(mi, mj)
        # chain criterion (no coprimality shortcut for modules)
        skip = False
        for k in range(len(G)):
            if k in (i, j) or leads[k][0] != pi:
                continue
            if mono_div(lcm, leads[k][1]) is None:
                continue
            a, b = (min(i, k), max(i, k)), (min(j, k), max(j, k))
            if a not in pending and b not in pending:
                skip = True
                break
        if skip:
            continue
        ui = mono_div(lcm, mi)
        uj = mono_div(lcm, mj)
        s = G[i].monomial_mul(ui, ring.field.one) - G[j].monomial_mul(uj, ring.field.one)
        if tracked:
            quots, h = vec_divide(s, G, prepared, want_quotients=True)
            rep = reps[i].monomial_mul(ui, ring.field.one) - reps[j].monomial_mul(uj, ring.field.one)
            for k, q in enumerate(quots):
                if not q.is_zero():
                    rep = rep - reps[k].scale(q)
        else:
            h = vec_divide(s, G, prepared)
        if h.is_zero():
            continue
        h, factor = _vec_monic(h)
        budget.check(len(G) + 1, _max_vec_degree(h))
        G.append(h)
        prepared.append(_prepare_vec(h))
        leads.append((h.leading()[1], h.leading()[0]))
        if tracked:
            reps.append(rep.scale(factor))
        t = len(G) - 1
        for i2 in range(t):
            if leads[i2][0] != leads[t][0]:
                continue
            lcm2 = mono_lcm(leads[i2][1], leads[t][1])
            heapq.heappush(heap, (mono_deg(lcm2), ring.key(lcm2), i2, t))
            pending.add((i2, t))
    return G, reps


def _module_autoreduce(G, reps, ring, tracked=False):
    """Minimalize and fully inter-reduce; canonical result sorted by lead."""
    key = ring.key
    order = sorted(range(len(G)), key=lambda i: (key(G[i].leading()[0]), -G[i].leading()[1]))
    G = [G[i] for i in order]
    reps = [reps[i] for i in order] if tracked else reps
    kept, kept_reps = [], []
    for idx, g in enumerate(G):
        m, p, _ = g.leading()
        redundant = any(
            h.leading()[1] == p and mono_div(m, h.leading()[0]) is not None for h in kept
        )
        if redundant:
            continue
        kept.append(g)
        if tracked:
            kept_reps.append(reps[idx])
    out, out_reps = [], []
    for idx, g in enumerate(kept):
        others = [h for k, h in enumerate(kept) if k != idx]
        if tracked:
            quots, r = vec_divide(g, others, want_quotients=True)
        else:
            r = vec_divide(g, others)
        if r.is_zero():
            continue
        r2, factor = _vec_monic(r)
        out.append(r2)
        if tracked:
            rep = kept_reps[idx]
            oi = 0
            for k in range(len(kept)):
                if k == idx:
                    continue
                if not quots[oi].is_zero():
                    rep = rep - kept_reps[k].scale(quots[oi])
                oi += 1
            out_reps.append(rep.scale(factor))
    idxs = sorted(range(len(out)), key=lambda i: (key(out[i].leading()[0]), -out[i].leading()[1]))
    return [out[i] for i in idxs], ([out_reps[i] for i in idxs] if tracked else [])


def module_groebner(vectors, ring, r, budget=None):
    """Reduced module Groebner basis (canonical for the input module)."""
    G, _ = _module_buchberger(vectors, ring, r, budget)
    G, _ = _module_autoreduce(G, [], ring)
    return G


def syzygies(vectors, ring, r, budget=None):
    """Generators of {(a_1..a_m) in S^m : sum a_i v_i = 0} (first syzygies).

    Schreyer: track a basis G = V A through Buchberger, divide the inputs
    back (V = G C), then the tracked reductions of every same-position
    S-pair of G give Syz(G); Syz(V) = A Syz(G) + Im(I - A C).
    """
    m = len(vectors)
    nonzero = [(i, v) for i, v in enumerate(vectors) if not v.is_zero()]
    syz = [Vec.unit(ring, m, i) for i, v in enumerate(vectors) if v.is_zero()]
    if not nonzero:
        return syz
    vs = [v for _, v in nonzero]
    back = [i for i, _ in nonzero]
    G, reps = _module_buchberger(vs, ring, r, budget, tracked=True, ninputs=len(vs))
    G, reps = _module_autoreduce(G, reps, ring, tracked=True)
    prepared = [_prepare_vec(g) for g in G]

    def to_input_coords(rep):
        # rep lives in S^len(vs); re-index into S^m
        return Vec(ring, m, {back[p]: poly for p, poly in rep.comps.items()})

    # C: inputs divided by the final basis (remainders are zero)
    C = []
    for v in vs:
        quots, rem = vec_divide(v, G, prepared, want_quotients=True)
        if not rem.is_zero():
            raise NashppError("input does not reduce to zero against its own basis")
        C.append(quots)

    out = list(syz)
    # columns of I - A C
    for j in range(len(vs)):
        col = Vec.unit(ring, m, back[j])
        for k in range(len(G)):
            if not C[j][k].is_zero():
                col = col - to_input_coords(reps[k].scale(C[j][k]))
        if not col.is_zero():
            out.append(col)
    # Schreyer syzygies of G, mapped through A
    leads = [(g.leading()[1], g.leading()[0]) for g in G]
    for a in range(len(G)):
        for b in range(a + 1, len(G)):
            if leads[a][0] != leads[b][0]:
                continue
            lcm = mono_lcm(leads[a][1], leads[b][1])
            ua = mono_div(lcm, leads[a][1])
            ub = mono_div(lcm, leads[b][1])
            s = G[a].monomial_mul(ua, ring.field.one) - G[b].monomial_mul(ub, ring.field.one)
            quots, rem = vec_divide(s, G, prepared, want_quotients=True)
            if not rem.is_zero():
                raise NashppError("S-vector of a Groebner basis failed to reduce to zero")
            comb = reps[a].monomial_mul(ua, ring.field.one) - reps[b].monomial_mul(
                ub, ring.field.one
            )
            for k, q in enumerate(quots):
                if not q.is_zero():
                    comb = comb - reps[k].scale(q)
            mapped = to_input_coords(comb)
            if not mapped.is_zero():
                out.append(mapped)
    # dedupe while preserving order
    seen = set()
    result = []
    for v in out:
        if v not in seen:
            seen.add(v)
            result.append(v)
    return result


def colon_module(gens, f, ring, r, budget=None):
    """(N :_{S^r} f) = projection to the first block of the syzygies of
    (f e_1, .., f e_r, n_1, .., n_k)."""
    if f.is_zero():
        raise InputError("colon by zero")
    inputs = [Vec.unit(ring, r, i, f) for i in range(r)] + list(gens)
    syz = syzygies(inputs, ring, r + 0, budget)
    out = []
    for s in syz:
        proj = Vec(ring, r, {p: poly for p, poly in s.comps.items() if p < r})
        if not proj.is_zero():
            out.append(proj)
    return out


def saturate_module(gens, f, ring, r, budget=None, max_iter=32):
    """(N : f^oo) by iterated colon until two consecutive reduced module
    bases agree; returns the canonical module basis of the saturation."""
    cur = module_groebner(list(gens), ring, r, budget)
    for _ in range(max_iter):
        nxt_gens = colon_module(cur, f, ring, r, budget)
        nxt = module_groebner(nxt_gens, ring, r, budget)
        if nxt == cur:
            return cur
        cur = nxt
    raise BudgetExceededError("module saturation did not stabilize within the iteration cap")


# -------------------------------------------------------------------------------


class ModulePresentation:
    """Finitely presented module over B = S/I: cokernel of the relation
    vectors inside B^r, positions labelled by module generators."""

    def __init__(self, ideal: Ideal, r, relations, labels=None):
        self.ideal = ideal
        self.ring = ideal.ring
        self.r = r
        if r < 1:
            raise InputError("module rank must be >= 1")
        gb = ideal.groebner()
        rels = []
        for v in relations:
            nf = v.map_components(gb.normal_form)
            if not nf.is_zero():
                rels.append(nf)
        self.relations = rels
        self.labels = tuple(labels) if labels is not None else tuple(range(r))
        self._generic_rank = None
        self._elim = None

    # ----- fibers ------------------------------------------------------------

    def relation_matrix_at(self, point):
        return [[v.component(p).evaluate(point) for p in range(self.r)] for v in self.relations]

    def fiber_dimension(self, point):
        """dim_k (M tensor B/m_point) = r - rank of the evaluated relations."""
        if not self.ideal.vanishes_at(point):
            raise InputError("point does not lie on the variety")
        rows = self.relation_matrix_at(point)
        rk = matrix_rank(rows, self.ring.field, self.r) if rows else 0
        return self.r - rk

    # ----- generic rank --------------------------------------------------------

    def _rows_mod_ideal(self):
        gb = self.ideal.groebner()
        return [[gb.normal_form(v.component(p)) for p in range(self.r)] for v in self.relations]

    def _elimination(self):
        """Cached fraction-free elimination of the relation matrix mod I:
        (rank, pivot rows, pivot cols), all deterministic."""
        if self._elim is None:
            rows = self._rows_mod_ideal()
            if not rows:
                self._elim = (0, (), ())
            else:
                self._elim = _quick_rank(rows, self.ideal.groebner(), self.r)
        return self._elim

    def relation_rank(self):
        """Rank of the relation matrix over Frac(B); needs I prime (asserted).

        Fraction-free elimination in the domain B with normal-form entry
        reduction; deterministic pivot choice (fewest terms, lowest degree).
        """
        return self._elimination()[0]

    def generic_rank(self):
        """rank_Frac(B) of the module: r minus the relation matrix rank."""
        if self._generic_rank is None:
            self._generic_rank = self.r - self.relation_rank()
        return self._generic_rank

    # ----- witness minor ----------------------------------------------------------

    def _det_mod(self, rows, gb):
        n = len(rows)
        memo = {}

        def rec(level, cols):
            if level == n:
                return self.ring.one
            key = (level, cols)
            got = memo.get(key)
            if got is not None:
                return got
            acc = self.ring.zero
            sign = 1
            for idx, j in enumerate(cols):
                e = rows[level][j]
                if not e.is_zero():
                    sub = rec(level + 1, cols[:idx] + cols[idx + 1 :])
                    term = gb.normal_form(e * sub)
                    acc = acc + (term if sign > 0 else -term)
                sign = -sign
            acc = gb.normal_form(acc)
            memo[key] = acc
            return acc

        return rec(0, tuple(range(n)))

    def witness_minor(self):
        """A nonzero-mod-I minor of size equal to the relation matrix rank
        (1 for a free presentation), taken on the deterministic pivot rows
        and columns of the elimination; the saturation result does not
        depend on which maximal minor serves as the witness."""
        rho = self.r - self.generic_rank()
        if rho == 0:
            return self.ring.one
        rows = self._rows_mod_ideal()
        gb = self.ideal.groebner()
        _, prow, pcol = self._elimination()
        mat = [[rows[i][j] for j in pcol] for i in prow]
        d = self._det_mod(mat, gb)
        if not d.is_zero():
            return d
        # unreachable for a prime ideal; scan lexicographically as a fallback
        for rowset in itertools.combinations(range(len(rows)), rho):
            sub = [rows[i] for i in rowset]
            if _quick_rank(sub, gb, self.r)[0] < rho:
                continue
            for colset in itertools.combinations(range(self.r), rho):
                mat = [[rows[i][j] for j in colset] for i in rowset]
                d = self._det_mod(mat, gb)
                if not d.is_zero():
                    return d
        raise InputError("degenerate presentation: no nonzero maximal minor")

    # ----- torsion ------------------------------------------------------------------

    def _lifted_generators(self):
        gens = list(self.relations)
        for g in self.ideal.gens:
            for p in range(self.r):
                gens.append(Vec.unit(self.ring, self.r, p, g))
        return gens

    def module_basis(self, budget=None):
        """Canonical module Groebner basis of relations + I e_i in S^r."""
        return module_groebner(self._lifted_generators(), self.ring, self.r, budget)

    def contains_vector(self, v, budget=None):
        basis = self.module_basis(budget)
        return vec_divide(v, basis).is_zero()

    def torsion_free_quotient(self, budget=None, witness=None):
        """Presentation of M / tors(M) via module saturation at a witness f
        (a maximal nonzero minor, making M_f free of rank = generic rank)."""
        f = witness if witness is not None else self.witness_minor()
        if f.is_zero():
            raise InputError("zero saturation witness")
        sat = saturate_module(self._lifted_generators(), f, self.ring, self.r, budget)
        return ModulePresentation(self.ideal, self.r, sat, self.labels)

    def truncate(self, keep_positions):
        """Quotient by the submodule generated by the dropped positions:
        keep those coordinates of every relation."""
        keep = list(keep_positions)
        index = {p: i for i, p in enumerate(keep)}
        rels = []
        for v in self.relations:
            comps = {index[p]: poly for p, poly in v.comps.items() if p in index}
            w = Vec(self.ring, len(keep), comps)
            if not w.is_zero():
                rels.append(w)
        labels = tuple(self.labels[p] for p in keep)
        return ModulePresentation(self.ideal, len(keep), rels, labels)

    def __repr__(self):
        return (
            f"ModulePresentation(r={self.r}, {len(self.relations)} relations "
            f"over {self.ring!r} mod {self.ideal!r})"
        )


def _quick_rank(rows, gb, ncols):
    """Fraction-free elimination of a matrix of B-elements (I prime, so B
    is a domain and pivoting is rank-safe): (rank, pivot rows, pivot cols),
    deterministic pivot choice (fewest terms, lowest degree, position)."""
    rows = [list(r) for r in rows]
    active = list(range(len(rows)))
    used = set()
    prows, pcols = [], []
    while True:
        pivot = None
        for i in active:
            for j in range(ncols):
                if j in used:
                    continue
                e = rows[i][j]
                if e.is_zero():
                    continue
                meas = (len(e.terms), e.total_degree(), i, j)
                if pivot is None or meas < pivot[0]:
                    pivot = (meas, i, j)
        if pivot is None:
            break
        _, pi, pj = pivot
        piv = rows[pi][pj]
        for i in active:
            if i == pi:
                continue
            e = rows[i][pj]
            if e.is_zero():
                continue
            rows[i] = [gb.normal_form(piv * rows[i][j] - e * rows[pi][j]) for j in range(ncols)]
        active.remove(pi)
        used.add(pj)
        prows.append(pi)
        pcols.append(pj)
        if not active:
            break
    return len(prows), tuple(sorted(prows)), tuple(sorted(pcols))

"""Arcs into truncated power series and the completed jet module.

An arc sends the ambient variables to polynomials in L[t] (exact, tail
zero) with L = Frac(k[u_1..u_m]); its jet images live in the completed
positive principal-parts module of L[[t]], which is free of rank n on
the powers of the universal symbol delta = d^n t.  A jet is therefore a
length-n vector of truncated series, multiplication is convolution with
powers beyond delta^n dropped, and the order-n differential of a series
is its vector of t-Hasse derivatives.

The HN test asks whether constants p_alpha over the base field can make
sum p_alpha dbeta(alpha) land in the L[[t]]-span N_L of the marked
generators.  Matching t-coefficients degree by degree up to a truncation
bound T turns that into exact linear algebra over L; the base-field
restriction is the final expansion in u-monomials.
"""

from __future__ import annotations

from math import comb

from .errors import InconclusiveError, InputError
from .groebner import Ideal, alpha_indices
from .linalg import kernel_basis, row_echelon
from .poly import Polynomial, PolyRing
from .ratfunc import FractionField, RationalFunction

__all__ = [
    "TruncSeries",
    "Jet",
    "Arc",
    "jet_of",
    "jet_mul",
    "graded_arc",
    "user_arc",
    "dbeta_images",
    "build_NL",
    "hn_test",
    "HnResult",
    "push_class",
    "rescale_arc",
]


class TruncSeries:
    """Element of L[[t]] known modulo t^T: a length-T coefficient list of
    rational functions.  T is fixed per computation session."""

    __slots__ = ("field", "coeffs", "T")

    def __init__(self, field, coeffs, T):
        if len(coeffs) > T:
            coeffs = coeffs[:T]
        self.field = field
        self.coeffs = list(coeffs) + [field.zero] * (T - len(coeffs))
        self.T = T

    @classmethod
    def zero(cls, field, T):
        return cls(field, [], T)

    def coeff(self, j):
        if 0 <= j < self.T:
            return self.coeffs[j]
        return self.field.zero

    def is_zero(self):
        return all(self.field.is_zero(c) for c in self.coeffs)

    def t_order(self):
        for j, c in enumerate(self.coeffs):
            if not self.field.is_zero(c):
                return j
        return None

    def _check(self, other):
        if self.T != other.T:
            raise InputError("truncation bound mismatch")

    def __add__(self, other):
        self._check(other)
        f = self.field
        return TruncSeries(f, [f.add(a, b) for a, b in zip(self.coeffs, other.coeffs)], self.T)

    def __sub__(self, other):
        self._check(other)
        f = self.field
        return TruncSeries(f, [f.sub(a, b) for a, b in zip(self.coeffs, other.coeffs)], self.T)

    def __neg__(self):
        f = self.field
        return TruncSeries(f, [f.neg(a) for a in self.coeffs], self.T)

    def __mul__(self, other):
        if not isinstance(other, TruncSeries):
            return self.scale(other)
        self._check(other)
        f = self.field
        out = [f.zero] * self.T
        for i, a in enumerate(self.coeffs):
            if f.is_zero(a):
                continue
            for j, b in enumerate(other.coeffs):
                if i + j >= self.T:
                    break
                if f.is_zero(b):
                    continue
                out[i + j] = f.add(out[i + j], f.mul(a, b))
        return TruncSeries(f, out, self.T)

    def scale(self, c):
        f = self.field
        return TruncSeries(f, [f.mul(a, c) for a in self.coeffs], self.T)

    def shift(self, k):
        """Multiply by t^k."""
        f = self.field
        return TruncSeries(f, [f.zero] * k + self.coeffs[: self.T - k], self.T)

    def hasse(self, k):
        """k-th Hasse derivative in t: coeff j picks binom(j+k, k) c_{j+k}."""
        f = self.field
        out = []
        for j in range(self.T):
            c = self.coeff(j + k)
            out.append(f.mul(c, f.from_int(comb(j + k, k))))
        return TruncSeries(f, out, self.T)

    def __eq__(self, other):
        return (
            isinstance(other, TruncSeries)
            and self.T == other.T
            and self.coeffs == other.coeffs
        )

    def __repr__(self):
        parts = []
        for j, c in enumerate(self.coeffs):
            if not self.field.is_zero(c):
                parts.append(f"({c})t^{j}" if j else f"({c})")
        return " + ".join(parts) if parts else "0"


class Jet:
    """Vector (J_1..J_n) of series: the coefficients on (d^n t)^k."""

    __slots__ = ("comps", "n", "T")

    def __init__(self, comps):
        self.comps = tuple(comps)
        self.n = len(self.comps)
        self.T = self.comps[0].T if self.comps else 0

    @classmethod
    def zero(cls, field, n, T):
        return cls([TruncSeries.zero(field, T) for _ in range(n)])

    def is_zero(self):
        return all(c.is_zero() for c in self.comps)

    def __add__(self, other):
        if self.n != other.n:
            raise InputError("jet order mismatch")
        return Jet([a + b for a, b in zip(self.comps, other.comps)])

    def __sub__(self, other):
        return self + Jet([-c for c in other.comps])

    def scale_series(self, g: TruncSeries):
        return Jet([c * g for c in self.comps])

    def __eq__(self, other):
        return isinstance(other, Jet) and self.comps == other.comps

    def __repr__(self):
        return "Jet(" + ", ".join(repr(c) for c in self.comps) + ")"


def jet_of(g: TruncSeries, n) -> Jet:
    """d^n(g) = sum_k D^(k)_t(g) (d^n t)^k, the universal differential."""
    return Jet([g.hasse(k) for k in range(1, n + 1)])


def jet_mul(p, q: Jet) -> Jet:
    """Module/algebra product; series act componentwise, jets convolve and
    powers of d^n t beyond n are truncated away."""
    if isinstance(p, TruncSeries):
        return q.scale_series(p)
    if p.n != q.n or p.T != q.T:
        raise InputError("jet order or truncation mismatch")
    n = p.n
    field = p.comps[0].field
    out = [TruncSeries.zero(field, p.T) for _ in range(n)]
    for i, a in enumerate(p.comps, start=1):
        if a.is_zero():
            continue
        for j, b in enumerate(q.comps, start=1):
            if i + j > n:
                break
            out[i + j - 1] = out[i + j - 1] + a * b
    return Jet(out)


def jet_pow(j: Jet, e) -> Jet:
    if e < 1:
        raise InputError("jet powers need e >= 1")
    out = j
    for _ in range(e - 1):
        out = jet_mul(out, j)
    return out


# ----- arcs -------------------------------------------------------------------


class Arc:
    """Validated arc data: polynomial images of the ambient variables in
    k[u_1..u_m][t], marked contact exponent a, provenance tag."""

    def __init__(self, ideal, uring, images, contact, provenance, proj_dim):
        self.ideal = ideal
        self.uring = uring  # k[u_1..u_m, t], t last
        self.images = tuple(images)
        self.a = contact
        self.provenance = provenance
        self.proj_dim = proj_dim
        self.u_ring = PolyRing(uring.field, uring.names[:-1], uring.order)
        self.coeff_field = FractionField(self.u_ring)

    def _t_index(self):
        return self.uring.nvars - 1

    def image_series(self, i, T) -> TruncSeries:
        """Exact image of variable i as a truncated series (tail zero)."""
        return _poly_to_series(self.images[i], self.u_ring, self.coeff_field, T)

    def push_polynomial(self, f: Polynomial, T) -> TruncSeries:
        """beta(f): substitute the arc images into an ambient polynomial."""
        img = f.substitute(list(self.images))
        return _poly_to_series(img, self.u_ring, self.coeff_field, T)

    def max_image_degree(self):
        t_idx = self._t_index()
        return max(
            (max((m[t_idx] for m in im.terms), default=0) for im in self.images),
            default=0,
        )

    def default_truncation(self, n):
        return self.a * (n + 1) + n * self.max_image_degree() + 4


def _poly_to_series(poly, u_ring, coeff_field, T):
    """Polynomial in k[u.., t] (t last) -> truncated series with rational
    function coefficients; tails beyond the polynomial degree are zero."""
    t_idx = poly.ring.nvars - 1
    buckets = {}
    for m, c in poly.terms.items():
        j = m[t_idx]
        if j >= T:
            continue
        buckets.setdefault(j, {})[m[:t_idx]] = c
    coeffs = [coeff_field.zero] * T
    for j, terms in buckets.items():
        coeffs[j] = RationalFunction(Polynomial(u_ring, terms))
    return TruncSeries(coeff_field, coeffs, T)


def _t_orders(images, t_idx):
    orders = []
    for im in images:
        if im.is_zero():
            orders.append(None)
            continue
        orders.append(min(m[t_idx] for m in im.terms))
    return orders


def graded_arc(I: Ideal, param) -> Arc:
    """Arc beta(x_i) = p_i(u) t for a homogeneous ideal, contact a = 1.

    `param` lists polynomials over k[u_1..u_m] with substitute(f, param) = 0
    for every generator f (a user-supplied dominant parametrization)."""
    for g in I.gens:
        if not g.is_homogeneous():
            raise InputError(f"graded arc needs a homogeneous ideal; offending generator: {g}")
    if len(param) != I.ring.nvars:
        raise InputError("parametrization must cover every ambient variable")
    pring = param[0].ring
    for f in I.gens:
        if not f.substitute(list(param)).is_zero():
            raise InputError(f"parametrization does not annihilate generator {f}")
    uring = PolyRing(pring.field, pring.names + ("t",), pring.order)
    t = uring.var("t")
    images = [p.rename(uring) * t for p in param]
    d = I.ring.nvars if I.is_zero() else I.krull_dimension()
    return Arc(I, uring, images, 1, "graded", d)


def user_arc(I: Ideal, images, proj_dim=None) -> Arc:
    """Validated arc from explicit t-polynomial images.

    Checks: images kill every generator exactly; the first d images are
    u_i t^a monomials in t with a common a; the remaining images have
    t-order >= a.  Requires characteristic zero when a >= 2."""
    if len(images) != I.ring.nvars:
        raise InputError("arc must give an image for every ambient variable")
    uring = images[0].ring
    if uring.names[-1] != "t":
        raise InputError("arc images live in k[u_1..u_m, t] with t last")
    t_idx = uring.nvars - 1
    for g in I.gens:
        pushed = g.substitute(list(images))
        if not pushed.is_zero():
            raise InputError(f"arc images do not annihilate generator {g}")
    orders = _t_orders(images, t_idx)
    for i, o in enumerate(orders):
        if o == 0:
            raise InputError(f"arc image of {I.ring.names[i]} has a constant term")
    d = proj_dim
    if d is None:
        d = I.ring.nvars if I.is_zero() else I.krull_dimension()
    contact = None
    for i in range(d):
        im = images[i]
        if im.is_zero():
            raise InputError(f"projection coordinate {I.ring.names[i]} maps to zero")
        degs = {m[t_idx] for m in im.terms}
        if len(degs) != 1:
            raise InputError(
                f"projection image of {I.ring.names[i]} must be a single power of t"
            )
        a_i = degs.pop()
        if contact is None:
            contact = a_i
        elif contact != a_i:
            raise InputError("projection images must share one contact exponent")
    if contact is None:
        raise InputError("arc needs at least one projection coordinate")
    for j in range(d, I.ring.nvars):
        o = orders[j]
        if o is not None and o < contact:
            raise InputError(
                f"image of {I.ring.names[j]} has t-order {o} below the contact {contact}"
            )
    if contact >= 2 and I.ring.field.characteristic != 0:
        raise InputError("contact exponent >= 2 requires characteristic zero")
    return Arc(I, uring, images, contact, "user", d)


def rescale_arc(arc: Arc, c) -> Arc:
    """The reparametrized arc t -> c t (c a nonzero base-field constant)."""
    uring = arc.uring
    field = uring.field
    if field.is_zero(field.from_int(c) if isinstance(c, int) else c):
        raise InputError("rescaling constant must be nonzero")
    images = []
    subs = [uring.var(nm) for nm in uring.names[:-1]] + [uring.var("t").scale(c)]
    for im in arc.images:
        images.append(im.substitute(subs))
    return Arc(arc.ideal, uring, images, arc.a, arc.provenance, arc.proj_dim)


# ----- dbeta and N_L -----------------------------------------------------------


def dbeta_images(arc: Arc, n, T=None):
    """alpha -> dbeta(d^n(x_1)^a_1 .. d^n(x_s)^a_s) = prod jet_of(beta x_i)^a_i
    for all multi-indices 1 <= |alpha| <= n over every ambient variable."""
    s = arc.ideal.ring.nvars
    T = T if T is not None else arc.default_truncation(n)
    base = [jet_of(arc.image_series(i, T), n) for i in range(s)]
    out = {}
    for alpha in alpha_indices(s, n):
        jet = None
        for i, e in enumerate(alpha):
            if not e:
                continue
            part = jet_pow(base[i], e)
            jet = part if jet is None else jet_mul(jet, part)
        out[alpha] = jet
    return out


def build_NL(arc: Arc, n, T=None):
    """Generators t^a dbeta(alpha) of N_L, every alpha over all variables."""
    T = T if T is not None else arc.default_truncation(n)
    images = dbeta_images(arc, n, T)
    gens = []
    for alpha in alpha_indices(arc.ideal.ring.nvars, n):
        jet = images[alpha]
        gens.append(Jet([c.shift(arc.a) for c in jet.comps]))
    return gens


def push_class(arc: Arc, coefficients, n, T=None) -> Jet:
    """Image of sum_alpha c_alpha e_alpha under dbeta: coefficients is a map
    alpha -> ambient polynomial (a principal-parts class)."""
    T = T if T is not None else arc.default_truncation(n)
    images = dbeta_images(arc, n, T)
    field = arc.coeff_field
    total = Jet.zero(field, n, T)
    for alpha, c in coefficients.items():
        if c.is_zero():
            continue
        series = arc.push_polynomial(c, T)
        total = total + jet_mul(series, images[alpha])
    return total


# ----- HN_n test -------------------------------------------------------------------


class HnResult:
    """Outcome of the injectivity test: 'injective' or a kernel witness
    (a base-field vector indexed by the projection multi-indices)."""

    def __init__(self, status, witness, T_used, n, d):
        self.status = status
        self.witness = witness
        self.T_used = T_used
        self.n = n
        self.d = d

    @property
    def injective(self):
        return self.status == "injective"

    def __repr__(self):
        if self.injective:
            return f"HnResult(injective, n={self.n}, T={self.T_used})"
        return f"HnResult(kernel-witness {self.witness}, n={self.n}, T={self.T_used})"


def _hn_solve_at(arc: Arc, n, d, T):
    """One truncation level: returns (status, witness)."""
    s = arc.ideal.ring.nvars
    field = arc.coeff_field
    base_field = arc.ideal.ring.field
    p_alphas = [a for a in alpha_indices(s, n) if all(e == 0 for e in a[d:])]
    images = dbeta_images(arc, n, T)
    A_cols = [images[a] for a in p_alphas]
    gens = build_NL(arc, n, T)

    ncols_B = len(gens) * T
    rows = []
    for k in range(n):
        for j in range(T):
            row = []
            for g in gens:
                comp = g.comps[k]
                for shift in range(T):
                    row.append(comp.coeff(j - shift) if j >= shift else field.zero)
            for jet in A_cols:
                row.append(jet.comps[k].coeff(j))
            if any(not field.is_zero(x) for x in row):
                rows.append(row)
    if not rows:
        # no constraints at all: every p works
        if p_alphas:
            witness = {p_alphas[0]: base_field.one}
            return "kernel", witness
        return "injective", None

    ech, pivots = row_echelon(rows, field, ncols_B + len(p_alphas))
    constraint_rows = []
    for r in ech:
        if all(field.is_zero(x) for x in r[:ncols_B]):
            tail = r[ncols_B:]
            if any(not field.is_zero(x) for x in tail):
                constraint_rows.append(tail)
    if not constraint_rows:
        if p_alphas:
            return "kernel", {p_alphas[0]: base_field.one}
        return "injective", None

    # restrict to base-field solutions: expand each constraint over the
    # u-monomials after clearing denominators
    qrows = []
    for crow in constraint_rows:
        denom = arc.u_ring.one
        for entry in crow:
            if not entry.is_zero() and entry.den != arc.u_ring.one:
                denom = denom * entry.den
        cleared = []
        for entry in crow:
            p = entry.num * exact_div_or_self(denom, entry.den)
            cleared.append(p)
        monos = set()
        for p in cleared:
            monos.update(p.terms.keys())
        for m in sorted(monos):
            qrows.append([p.terms.get(m, base_field.zero) for p in cleared])
    kern = kernel_basis(qrows, base_field, len(p_alphas)) if qrows else []
    if not qrows:
        kern = [[base_field.one] + [base_field.zero] * (len(p_alphas) - 1)] if p_alphas else []
    if kern:
        witness = {a: v for a, v in zip(p_alphas, kern[0]) if not base_field.is_zero(v)}
        return "kernel", witness
    return "injective", None


def exact_div_or_self(product, den):
    from .ratfunc import exact_poly_div

    if den == product.ring.one:
        return product
    return exact_poly_div(product, den)


def hn_test(I: Ideal, arc: Arc, n, d, T=None, max_doublings=3) -> HnResult:
    """Decide injectivity of the arc-induced map on principal-parts fibers.

    Sets up 'sum p_alpha dbeta(alpha) lies in N_L' with unknown base-field
    constants p_alpha (alpha supported in the first d projection
    coordinates) and unknown series coefficients, matches t-coefficients
    up to T, and solves exactly over L.  The verdict is certified by
    recomputing at doubled truncation; disagreement raises
    InconclusiveError (raise T)."""
    if arc.a >= 2 and I.ring.field.characteristic != 0:
        raise InputError("HN test with contact >= 2 requires characteristic zero")
    T0 = T if T is not None else arc.default_truncation(n)
    prev = None
    current = T0
    for _ in range(max_doublings + 1):
        status, witness = _hn_solve_at(arc, n, d, current)
        if prev is not None and prev[0] == status:
            return HnResult(status, witness, current, n, d)
        prev = (status, witness)
        current *= 2
    raise InconclusiveError(
        f"HN test not stable under truncation doubling up to T={current}; raise T"
    )

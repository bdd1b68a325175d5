"""End-to-end verdict pipeline: parse a problem file, decide whether the
order-n Nash blow-up criterion detects a singularity at each declared
point, and emit deterministic machine-readable reports.

Input format (line oriented, '#' comments):

    field Q            | field GF(7)
    vars x, y, z
    graded true|false
    normal true|false
    prime true|false          (assertion, default true)
    gen <polynomial>          (repeatable)
    point <c1>, <c2>, ...     (repeatable; rational literals)
    orders 1, 2               (optional, default 1, 2)
    param <p1(u..)>, ...      (optional: polynomials in u1..um)
    arc <s1>, ...             (optional: polynomials in u1..um and t)
"""

from __future__ import annotations

import json
import re
from .errors import ConsistencyError, InconclusiveError, InputError
from .fields import GF, QQ
from .groebner import Ideal
from .jets import graded_arc, hn_test, user_arc
from .poly import PolyRing, parse_polynomial
from .pparts import build_module, cross_check_fibers, expected_rank, fiber_dim_doubled_at

__all__ = [
    "ProblemSpec",
    "parse_problem",
    "run_verdict",
    "run_report",
    "graded_comparison",
    "emit_report",
]

_UVAR = re.compile(r"^u([1-9][0-9]*)$")


class ProblemSpec:
    """Validated problem: field, ambient ring, ideal, flags, points,
    orders, and the optional arc data."""

    def __init__(self, name, ring, ideal, graded, normal, prime, points, orders,
                 param, arc_images):
        self.name = name
        self.ring = ring
        self.ideal = ideal
        self.graded = graded
        self.normal = normal
        self.assumed_prime = prime
        self.points = points
        self.orders = orders
        self.param = param
        self.arc_images = arc_images
        self._dimension = None
        self._arc = None

    def dimension(self):
        if self._dimension is None:
            if self.ideal.is_zero():
                self._dimension = self.ring.nvars
            else:
                self._dimension = self.ideal.krull_dimension()
        return self._dimension

    def has_arc(self):
        return self.param is not None or self.arc_images is not None

    def arc(self):
        """Construct (once) the declared arc: graded parametrizations take
        the graded route, explicit images the validated user route."""
        if self._arc is None:
            if self.param is not None:
                self._arc = graded_arc(self.ideal, self.param)
            elif self.arc_images is not None:
                self._arc = user_arc(self.ideal, self.arc_images,
                                     proj_dim=self.dimension())
            else:
                raise InputError("problem declares no parametrization or arc")
        return self._arc

    def field_name(self):
        f = self.ring.field
        return "Q" if f.characteristic == 0 else f"GF({f.characteristic})"

    def point_strs(self, point):
        return [self.ring.field.to_str(c) for c in point]


def _parse_bool(value, lineno):
    v = value.strip().lower()
    if v in ("true", "yes", "1"):
        return True
    if v in ("false", "no", "0"):
        return False
    raise InputError(f"line {lineno}: expected true/false, got {value!r}")


def _parse_literal(field, text, lineno):
    t = text.strip()
    m = re.match(r"^(-?\d+)\s*/\s*(\d+)$", t)
    if m:
        return field.from_fraction(int(m.group(1)), int(m.group(2)))
    m = re.match(r"^-?\d+$", t)
    if m:
        return field.from_int(int(t))
    raise InputError(f"line {lineno}: bad coordinate literal {text!r}")


def _collect_unames(texts, lineno, allow_t):
    names = set()
    for text in texts:
        for ident in re.findall(r"[A-Za-z_][A-Za-z_0-9]*", text):
            if ident == "t":
                if not allow_t:
                    raise InputError(f"line {lineno}: 't' is reserved for arcs")
                continue
            m = _UVAR.match(ident)
            if not m:
                raise InputError(
                    f"line {lineno}: parameter variables must be u1, u2, ... (got {ident!r})"
                )
            names.add(int(m.group(1)))
    count = max(names) if names else 1
    return tuple(f"u{i}" for i in range(1, count + 1))


def parse_problem(text, name="problem") -> ProblemSpec:
    """Parse and validate one problem file; errors carry line numbers."""
    field = None
    ring = None
    gens = []
    graded = False
    normal = None
    prime = True
    points = []
    orders = None
    param_texts = None
    arc_texts = None

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if " " in line:
            keyword, rest = line.split(None, 1)
        else:
            keyword, rest = line, ""
        keyword = keyword.lower()
        if keyword == "field":
            spec = rest.strip()
            if spec == "Q":
                field = QQ
            else:
                m = re.match(r"^GF\((\d+)\)$", spec)
                if not m:
                    raise InputError(f"line {lineno}: field must be Q or GF(p)")
                field = GF(int(m.group(1)))
        elif keyword == "vars":
            if field is None:
                raise InputError(f"line {lineno}: declare the field before vars")
            names = tuple(v.strip() for v in rest.split(","))
            if any(not re.match(r"^[A-Za-z_][A-Za-z_0-9]*$", v) for v in names):
                raise InputError(f"line {lineno}: bad variable name in {rest!r}")
            reserved = [v for v in names if v == "t" or _UVAR.match(v)]
            if reserved:
                raise InputError(
                    f"line {lineno}: variable names {reserved} are reserved for arcs"
                )
            ring = PolyRing(field, names)
        elif keyword == "graded":
            graded = _parse_bool(rest, lineno)
        elif keyword == "normal":
            normal = _parse_bool(rest, lineno)
        elif keyword == "prime":
            prime = _parse_bool(rest, lineno)
        elif keyword == "gen":
            if ring is None:
                raise InputError(f"line {lineno}: declare vars before generators")
            try:
                gens.append(parse_polynomial(ring, rest))
            except InputError as exc:
                raise InputError(f"line {lineno}: {exc}") from exc
        elif keyword == "point":
            if ring is None:
                raise InputError(f"line {lineno}: declare vars before points")
            coords = [c for c in rest.split(",")]
            if len(coords) != ring.nvars:
                raise InputError(
                    f"line {lineno}: point needs {ring.nvars} coordinates"
                )
            points.append(tuple(_parse_literal(field, c, lineno) for c in coords))
        elif keyword == "orders":
            try:
                orders = [int(v.strip()) for v in rest.split(",")]
            except ValueError as exc:
                raise InputError(f"line {lineno}: bad orders list {rest!r}") from exc
            if any(n < 1 for n in orders):
                raise InputError(f"line {lineno}: orders must be >= 1")
        elif keyword == "param":
            param_texts = ([p.strip() for p in rest.split(",")], lineno)
        elif keyword == "arc":
            arc_texts = ([p.strip() for p in rest.split(",")], lineno)
        else:
            raise InputError(f"line {lineno}: unknown keyword {keyword!r}")

    if ring is None:
        raise InputError("missing vars declaration")
    ideal = Ideal(ring, gens)
    if graded:
        for g in ideal.gens:
            if not g.is_homogeneous():
                raise InputError(f"graded flag set but generator {g} is inhomogeneous")
    for p in points:
        if not ideal.vanishes_at(p):
            coords = ", ".join(field.to_str(c) for c in p)
            raise InputError(f"declared point ({coords}) does not lie on the variety")

    param = None
    if param_texts is not None:
        texts, lineno = param_texts
        if len(texts) != ring.nvars:
            raise InputError(f"line {lineno}: param needs {ring.nvars} entries")
        unames = _collect_unames(texts, lineno, allow_t=False)
        uring = PolyRing(field, unames)
        try:
            param = [parse_polynomial(uring, t) for t in texts]
        except InputError as exc:
            raise InputError(f"line {lineno}: {exc}") from exc
        for g in ideal.gens:
            if not g.substitute(param).is_zero():
                raise InputError(
                    f"line {lineno}: parametrization does not annihilate {g}"
                )
    arc_images = None
    if arc_texts is not None:
        texts, lineno = arc_texts
        if len(texts) != ring.nvars:
            raise InputError(f"line {lineno}: arc needs {ring.nvars} entries")
        unames = _collect_unames(texts, lineno, allow_t=True)
        uring = PolyRing(field, unames + ("t",))
        try:
            arc_images = [parse_polynomial(uring, t) for t in texts]
        except InputError as exc:
            raise InputError(f"line {lineno}: {exc}") from exc

    spec = ProblemSpec(
        name=name,
        ring=ring,
        ideal=ideal,
        graded=graded,
        normal=normal,
        prime=prime,
        points=points,
        orders=orders or [1, 2],
        param=param,
        arc_images=arc_images,
    )
    if arc_images is not None:
        spec.arc()  # validate shape conditions eagerly: bad arcs are input errors
    return spec


# ----- graded comparison -------------------------------------------------------


def graded_comparison(I: Ideal, n, budget=None):
    """Tangent-cone fiber comparison at the origin (ideal pre-translated).

    Computes In(I), checks the standard-basis property of the supplied
    generators, and when it holds compares dim k[x]/(<In(g_i)> + m^{n+1})
    with dim k[x]/(In(I + m^{n+1})); equality is asserted."""
    ring = I.ring
    cone = I.tangent_cone(budget)
    result = {
        "in_generators": [str(g) for g in cone.gens],
        "standard_basis": None,
        "fiber_initial_forms": None,
        "fiber_initial_ideal": None,
        "equal": None,
        "note": None,
    }
    if I.is_zero():
        result["standard_basis"] = True
        dim = len(Ideal(ring, []).standard_monomials_truncated(n))
        result["fiber_initial_forms"] = dim
        result["fiber_initial_ideal"] = dim
        result["equal"] = True
        return result
    sb = I.is_standard_basis(list(I.gens), budget)
    result["standard_basis"] = sb
    if not sb:
        result["note"] = "not applicable: generators are no standard basis"
        return result
    forms = Ideal(ring, [g.initial_form() for g in I.gens])
    side_forms = len(forms.standard_monomials_truncated(n))
    truncated_cone = I.truncation(n).tangent_cone(budget)
    side_ideal = len(truncated_cone.standard_monomials_truncated(n))
    result["fiber_initial_forms"] = side_forms
    result["fiber_initial_ideal"] = side_ideal
    result["equal"] = side_forms == side_ideal
    if not result["equal"]:
        raise ConsistencyError(
            f"graded comparison mismatch at n={n}: {side_forms} != {side_ideal}"
        )
    return result


# ----- verdict ---------------------------------------------------------------------


def _is_origin(point, field):
    return all(field.is_zero(c) for c in point)


def _hn_report(spec: ProblemSpec, n):
    if not spec.has_arc():
        return None
    try:
        arc = spec.arc()
    except InputError as exc:
        return {"status": "error", "detail": str(exc)}
    d = spec.dimension()
    try:
        res = hn_test(spec.ideal, arc, n, d)
    except InconclusiveError as exc:
        return {"status": "inconclusive", "detail": str(exc)}
    except InputError as exc:
        return {"status": "error", "detail": str(exc)}
    out = {
        "status": "injective" if res.injective else "kernel",
        "contact": arc.a,
        "truncation": res.T_used,
    }
    if not res.injective:
        out["witness"] = [
            ["*".join(f"d^{n}({spec.ring.names[i]})^{e}" for i, e in enumerate(a) if e),
             spec.ring.field.to_str(v)]
            for a, v in sorted(res.witness.items())
        ]
    return out


def run_verdict(spec: ProblemSpec, point_index, n, budget=None):
    """Assemble the full order-n verdict at one declared point.

    Chain: translate the point to the origin, build both principal-parts
    presentations, cross-check their fibers, saturate, compare the
    torsion-free fiber to D - 1 here and at the other declared points,
    and require agreement with the Jacobian criterion."""
    field = spec.ring.field
    point = spec.points[point_index]
    I = spec.ideal
    d = spec.dimension()
    D = expected_rank(n, d)

    doubled = fiber_dim_doubled_at(I, n, point)
    M = build_module(I, n, point)
    check = cross_check_fibers(I, n, point, module=M)
    origin = (field.zero,) * spec.ring.nvars
    grank = M.generic_rank()
    Mt = M.torsion_free_quotient(budget)
    fiber_tf = Mt.fiber_dimension(origin)

    jac = I.jacobian_smooth_at(point, dimension=d)
    sampled = []
    trivial_everywhere = fiber_tf == D - 1
    jac_everywhere = jac
    for qi, q in enumerate(spec.points):
        if qi == point_index:
            continue
        shifted = tuple(field.sub(qc, pc) for qc, pc in zip(q, point))
        fq = Mt.fiber_dimension(shifted)
        jq = I.jacobian_smooth_at(q, dimension=d)
        sampled.append(
            {
                "point": spec.point_strs(q),
                "fiber_torsion_free": fq,
                "jacobian_smooth": jq,
            }
        )
        if fq != D - 1:
            trivial_everywhere = False
        if not jq:
            jac_everywhere = False

    # free-implies-regular consistency (no counterexample permitted)
    if doubled == D and not jac:
        raise ConsistencyError(
            f"P^{n} fiber equals binom(n+d,d)={D} at a Jacobian-singular point"
        )

    anomaly = None
    if trivial_everywhere and not jac_everywhere:
        msg = (
            f"Nash_{n} trivial on all sampled points of {spec.name} "
            "but the Jacobian criterion reports a singular sampled point"
        )
        if spec.graded or n <= 2:
            raise ConsistencyError(msg)
        anomaly = msg
    elif jac_everywhere and not trivial_everywhere:
        anomaly = (
            f"all sampled points Jacobian-smooth but some torsion-free fiber "
            f"exceeds {D - 1}"
        )
    elif (fiber_tf == D - 1) != jac:
        anomaly = (
            f"pointwise mismatch: torsion-free fiber {fiber_tf} vs D-1={D - 1} "
            f"while Jacobian reports {'smooth' if jac else 'singular'}"
        )

    I0 = I.translate(point)
    cone_info = graded_comparison(I0, n, budget)

    hn = None
    if spec.has_arc() and _is_origin(point, field):
        hn = _hn_report(spec, n)

    verdict = {
        "point": spec.point_strs(point),
        "n": n,
        "d": d,
        "expected_rank_D": D,
        "fiber_dim_doubled": doubled,
        "fiber_dim_module_plus": check.module_plus_dim,
        "cross_check": "ok",
        "generic_rank": grank,
        "fiber_dim_torsion_free": fiber_tf,
        "nash_trivial_at_point": fiber_tf == D - 1,
        "sampled_points": sampled,
        "nash_trivial_locally": trivial_everywhere,
        "jacobian_smooth": jac,
        "jacobian_smooth_sampled": jac_everywhere,
        "consistent": trivial_everywhere == jac_everywhere and anomaly is None,
        "anomaly": anomaly,
        "tangent_cone": cone_info,
        "hn": hn,
    }
    return verdict


def run_report(spec: ProblemSpec, budget=None):
    """All declared points x all declared orders, plus problem metadata."""
    verdicts = []
    for point_index in range(len(spec.points)):
        for n in spec.orders:
            verdicts.append(run_verdict(spec, point_index, n, budget))
    notes = [
        "verdicts are computed at the declared rational points; certification "
        "over the algebraic closure is not asserted",
    ]
    if spec.assumed_prime:
        notes.append("the defining ideal is assumed prime (user assertion)")
    if spec.normal is not None:
        notes.append(f"normality asserted by the user: {spec.normal}")
    if spec.has_arc() and not any(_is_origin(p, spec.ring.field) for p in spec.points):
        notes.append("arc declared but no origin point listed; HN tests skipped")
    return {
        "problem": {
            "name": spec.name,
            "field": spec.field_name(),
            "vars": list(spec.ring.names),
            "generators": [str(g) for g in spec.ideal.gens],
            "graded": spec.graded,
            "normal": spec.normal,
            "assumed_prime": spec.assumed_prime,
            "dimension": spec.dimension(),
        },
        "orders": list(spec.orders),
        "points": [spec.point_strs(p) for p in spec.points],
        "verdicts": verdicts,
        "notes": notes,
    }


# ----- serialization -----------------------------------------------------------------


def emit_report(report, format="json") -> str:
    """Deterministic serialization: fixed key order, no timestamps."""
    if format == "json":
        return json.dumps(report, indent=2) + "\n"
    if format == "text":
        return _emit_text(report)
    raise InputError(f"unknown report format {format!r}")


def _emit_text(report) -> str:
    lines = []
    prob = report["problem"]
    lines.append(f"# problem\t{prob['name']}")
    lines.append(f"# field\t{prob['field']}")
    lines.append(f"# variety\t{'; '.join(prob['generators']) or '0'}")
    lines.append(f"# dimension\t{prob['dimension']}")
    header = [
        "point",
        "n",
        "D-1",
        "fiber_doubled",
        "fiber_plus",
        "generic_rank",
        "fiber_torsion_free",
        "nash_trivial",
        "jacobian_smooth",
        "hn",
    ]
    lines.append("\t".join(header))
    for v in report["verdicts"]:
        hn = v["hn"]["status"] if v["hn"] else "-"
        row = [
            "(" + ", ".join(v["point"]) + ")",
            str(v["n"]),
            str(v["expected_rank_D"] - 1),
            str(v["fiber_dim_doubled"]),
            str(v["fiber_dim_module_plus"]),
            str(v["generic_rank"]),
            str(v["fiber_dim_torsion_free"]),
            str(v["nash_trivial_locally"]).lower(),
            str(v["jacobian_smooth"]).lower(),
            hn,
        ]
        lines.append("\t".join(row))
    for note in report["notes"]:
        lines.append(f"# note\t{note}")
    return "\n".join(lines) + "\n"

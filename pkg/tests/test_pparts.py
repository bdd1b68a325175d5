"""Principal parts: doubled vs module presentation, fibers, expected ranks."""

from math import comb

import pytest

from nashpp.errors import InputError
from nashpp.fields import QQ
from nashpp.groebner import Ideal, exponents_up_to
from nashpp.linalg import rank
from nashpp.pparts import (
    build_doubled,
    build_module,
    cross_check_fibers,
    expected_rank,
    fiber_dim_doubled_at,
)
from nashpp.poly import PolyRing, parse_polynomial

R1 = PolyRing(QQ, ("x",))
R2 = PolyRing(QQ, ("x", "y"))
R3 = PolyRing(QQ, ("x", "y", "z"))


def ideal(ring, *texts):
    return Ideal(ring, [parse_polynomial(ring, t) for t in texts])


def origin(ring):
    return (ring.field.zero,) * ring.nvars


CUSP = ideal(R2, "y^2 - x^3")
NODAL = ideal(R2, "y^2 - x^3 - x^2")
CONE = ideal(R3, "x*y - z^2")
WHITNEY = ideal(R3, "x*y^2 - z^2")
MONOMIAL_CURVE = ideal(R3, "y^2 - x*z", "x^3 - y*z", "x^2*y - z^2")

SMOOTH_POINTS = {
    id(CUSP): (QQ.one, QQ.one),
    id(NODAL): (QQ.from_int(-1), QQ.zero),
    id(CONE): (QQ.one, QQ.one, QQ.one),
    id(WHITNEY): (QQ.one, QQ.one, QQ.one),
    id(MONOMIAL_CURVE): (QQ.one, QQ.one, QQ.one),
}


def macaulay_fiber_dim(I, n):
    """Independent Macaulay-matrix oracle for dim k[x]/(I + m^{n+1})."""
    ring = I.ring
    monos = exponents_up_to(ring.nvars, n)
    index = {m: i for i, m in enumerate(monos)}
    rows = []
    for g in I.gens:
        for mult in exponents_up_to(ring.nvars, n):
            prod = g.monomial_mul(mult, ring.field.one)
            row = [ring.field.zero] * len(monos)
            nz = False
            for m, c in prod.terms.items():
                if sum(m) <= n:
                    row[index[m]] = c
                    nz = True
            if nz:
                rows.append(row)
    r = rank(rows, ring.field, len(monos)) if rows else 0
    return len(monos) - r


# ----- expected rank ---------------------------------------------------------


def test_expected_rank_formula():
    assert expected_rank(1, 1) == 2
    assert expected_rank(2, 1) == 3
    assert expected_rank(2, 2) == 6
    assert expected_rank(3, 2) == 10
    with pytest.raises(InputError):
        expected_rank(0, 1)


# ----- doubled presentation -----------------------------------------------------


def test_build_doubled_affine_line():
    I = Ideal(R1, [])
    P = build_doubled(I, 1, (QQ.zero,))
    assert P.doubled.ring.names == ("x", "xi_x")
    # single generator (x - xi)^2
    assert len(P.doubled.gens) == 1
    assert str(P.doubled.gens[0]) == "x^2 - 2*x*xi_x + xi_x^2"


def test_build_doubled_cusp():
    P = build_doubled(CUSP, 1, origin(R2))
    names = P.doubled.ring.names
    assert names == ("x", "y", "xi_x", "xi_y")
    # ideal generators: f(x), f(xi), and the three quadratic differences
    assert len(P.doubled.gens) == 2 + 3


def test_build_doubled_quadric_cone_n2():
    P = build_doubled(CONE, 2, origin(R3))
    # 1 + 1 variety generators plus the rank-3 cubes of differences
    assert len(P.doubled.gens) == 2 + len(exponents_up_to(3, 3, mindeg=3))


def test_build_doubled_rejects_off_variety():
    with pytest.raises(InputError):
        build_doubled(CUSP, 1, (QQ.one, QQ.zero))


def test_fiber_dim_doubled_affine_space():
    pts = {
        1: [(QQ.zero,), (QQ.one,), (QQ.from_fraction(-2, 3),)],
        2: [(QQ.zero, QQ.zero), (QQ.one, QQ.from_int(2))],
        3: [(QQ.zero, QQ.zero, QQ.zero), (QQ.one, QQ.one, QQ.from_int(-1))],
    }
    for d, points in pts.items():
        ring = PolyRing(QQ, tuple(f"x{i}" for i in range(d)))
        I = Ideal(ring, [])
        for n in (1, 2, 3):
            for p in points:
                assert fiber_dim_doubled_at(I, n, p) == comb(n + d, d)


def test_fiber_dim_doubled_cusp_against_macaulay():
    for n, expected in [(1, 3), (2, 5)]:
        got = fiber_dim_doubled_at(CUSP, n, origin(R2))
        assert got == macaulay_fiber_dim(CUSP, n) == expected


def test_fiber_monotone_in_n():
    for I in (CUSP, CONE, WHITNEY, MONOMIAL_CURVE):
        dims = [fiber_dim_doubled_at(I, n, origin(I.ring)) for n in (1, 2, 3)]
        assert dims == sorted(dims)


# ----- module presentation ---------------------------------------------------------


def test_build_module_affine_line_free():
    I = Ideal(R1, [])
    M = build_module(I, 2, (QQ.zero,))
    assert M.r == 2 and M.relations == []
    assert M.generic_rank() == 2


def test_build_module_cusp_n1_jacobian_row():
    M = build_module(CUSP, 1, origin(R2))
    assert M.labels == ((1, 0), (0, 1))
    # the beta = 0 relation is the Jacobian row (-3x^2, 2y)
    x, y = R2.gens()
    first = M.relations[0]
    assert first.component(0) == -3 * x**2
    assert first.component(1) == 2 * y
    # relation count: one generator x three multipliers of degree <= 1
    assert len(M.relations) == 3


def test_build_module_cusp_n2_hasse_row():
    M = build_module(CUSP, 2, origin(R2))
    x, y = R2.gens()
    labels = list(M.labels)
    f_row = M.relations[0]
    expected = {
        (1, 0): -3 * x**2,
        (0, 1): 2 * y,
        (2, 0): -3 * x,
        (0, 2): R2.one,
    }
    for a, val in expected.items():
        assert f_row.component(labels.index(a)) == val
    assert f_row.component(labels.index((1, 1))).is_zero()
    # relations from f, xf, yf, x^2 f, xy f, y^2 f
    assert len(M.relations) == 6


def test_module_fiber_dims_cusp():
    M = build_module(CUSP, 1, origin(R2))
    assert M.fiber_dimension(origin(R2)) == 2
    M2 = build_module(CUSP, 1, (QQ.one, QQ.one))
    assert M2.fiber_dimension(origin(R2)) == 1


# ----- cross checks -------------------------------------------------------------------


def test_cross_check_a2_n2():
    I = Ideal(R2, [])
    c = cross_check_fibers(I, 2, origin(R2))
    assert (c.doubled_dim, c.module_plus_dim) == (6, 5)


def test_cross_check_cusp_n1():
    c = cross_check_fibers(CUSP, 1, origin(R2))
    assert (c.doubled_dim, c.module_plus_dim) == (3, 2)


def test_cross_check_quadric_cone_n1():
    c = cross_check_fibers(CONE, 1, origin(R3))
    assert (c.doubled_dim, c.module_plus_dim) == (4, 3)


def test_cross_check_full_corpus():
    corpus = [
        (Ideal(R1, []), (QQ.zero,), (QQ.from_int(2),)),
        (Ideal(R2, []), origin(R2), (QQ.one, QQ.from_int(-1))),
        (CUSP, origin(R2), SMOOTH_POINTS[id(CUSP)]),
        (NODAL, origin(R2), SMOOTH_POINTS[id(NODAL)]),
        (CONE, origin(R3), SMOOTH_POINTS[id(CONE)]),
        (WHITNEY, origin(R3), SMOOTH_POINTS[id(WHITNEY)]),
        (MONOMIAL_CURVE, origin(R3), SMOOTH_POINTS[id(MONOMIAL_CURVE)]),
    ]
    for I, p0, p1 in corpus:
        for n in (1, 2):
            for p in (p0, p1):
                check = cross_check_fibers(I, n, p)
                assert check.consistent
                # the doubled side agrees with the Macaulay oracle
                assert check.doubled_dim == macaulay_fiber_dim(I.translate(p), n)


def test_generic_rank_matches_expected_on_corpus():
    cases = [(CUSP, 1), (CUSP, 2), (NODAL, 1), (CONE, 1), (CONE, 2)]
    for I, n in cases:
        d = I.krull_dimension()
        M = build_module(I, n, origin(I.ring))
        assert M.generic_rank() == expected_rank(n, d) - 1


def test_smooth_point_fibers_equal_expected_rank():
    for I in (CUSP, NODAL, CONE, WHITNEY, MONOMIAL_CURVE):
        d = I.krull_dimension()
        p = SMOOTH_POINTS[id(I)]
        for n in (1, 2, 3):
            assert fiber_dim_doubled_at(I, n, p) == expected_rank(n, d)


def test_order_one_truncation_matches_direct_build():
    # killing the |alpha| >= 2 generators of P^n_+ presents Omega = P^1_+
    for I in (CUSP, CONE):
        s = I.ring.nvars
        M2 = build_module(I, 2, origin(I.ring))
        keep = [i for i, a in enumerate(M2.labels) if sum(a) == 1]
        truncated = M2.truncate(keep)
        M1 = build_module(I, 1, origin(I.ring))
        pts = [origin(I.ring), SMOOTH_POINTS[id(I)]]
        for p in pts:
            assert truncated.fiber_dimension(p) == M1.fiber_dimension(p)

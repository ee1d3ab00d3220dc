"""Newton polygons, slopes, irregularity, and leading spectral terms."""

from fractions import Fraction

import pytest
import sympy

from formalconn.connection import frenkel_gross_connection
from formalconn.errors import PrecisionError
from formalconn.newton import (
    NewtonPolygon,
    SpectralBranch,
    adjoint_irregularity,
    connection_slope,
    irregular_branches,
    matrix_charpoly,
    matrix_irregularity,
    matrix_slope,
    spectral_branches,
)
from formalconn.scalars import QQ
from formalconn.series import LaurentSeries

from conftest import SMALL_TYPES, random_laurent, seeded


def _s(terms, trunc=None):
    return LaurentSeries.from_terms(QQ, [(e, Fraction(c)) for e, c in terms], trunc=trunc)


def test_polygon_vertices_single_edge():
    # X^2 - v^-3: valuation -3/2 per root
    poly = NewtonPolygon([_s([(-3, -1)]), _s([]), _s([(0, 1)])])
    assert poly.vertices == [(0, Fraction(-3)), (2, Fraction(0))]
    [(x1, y1, x2, y2, mu, mult)] = poly.edges()
    assert mu == Fraction(-3, 2)
    assert mult == 2
    assert poly.zero_root_count() == 0


def test_polygon_two_edges():
    # (X - v^-2)(X - v^-1) = X^2 - (v^-1 + v^-2) X + v^-3
    coeffs = [_s([(-3, 1)]), _s([(-1, -1), (-2, -1)]), _s([(0, 1)])]
    poly = NewtonPolygon(coeffs)
    assert poly.vertices == [(0, Fraction(-3)), (1, Fraction(-2)), (2, Fraction(0))]
    mus = [e[4] for e in poly.edges()]
    assert mus == [Fraction(-1), Fraction(-2)]


def test_polygon_zero_roots():
    # X^3 + v X^2: two zero roots (coefficients 0 and 1 vanish exactly)
    coeffs = [_s([]), _s([]), _s([(1, 1)]), _s([(0, 1)])]
    poly = NewtonPolygon(coeffs)
    assert poly.zero_root_count() == 2


def test_polygon_phantom_precision_error():
    # constant coefficient known only to O(v^-3): a hidden pole there could
    # support an edge of slope 3/2, i.e. an irregular branch
    coeffs = [_s([], trunc=-3), _s([]), _s([(0, 1)])]
    with pytest.raises(PrecisionError):
        NewtonPolygon(coeffs)
    # a phantom that can only produce regular branches is tolerated
    ok = NewtonPolygon([_s([], trunc=-2), _s([]), _s([(0, 1)])])
    assert ok.zero_root_count() == 2
    # a phantom under the interior of the hull is never tolerated
    with pytest.raises(PrecisionError):
        NewtonPolygon([_s([(-4, 1)]), _s([], trunc=-3), _s([(0, 1)])])
    # every coefficient invisible
    with pytest.raises(PrecisionError):
        NewtonPolygon([_s([], trunc=5), _s([], trunc=5)])


def test_matrix_charpoly_against_sympy():
    rng = seeded(83)
    t = sympy.Symbol("t")
    x = sympy.Symbol("x")
    for _ in range(6):
        n = rng.randrange(2, 4)
        mat = [[random_laurent(rng, lo=-2, hi=2, nterms=3) for _ in range(n)]
               for _ in range(n)]
        coeffs = matrix_charpoly(mat)
        sm = sympy.Matrix([
            [sum(sympy.Rational(c) * t**int(e) for e, c in s.terms()) for s in row]
            for row in mat
        ])
        expect = sympy.expand(sm.charpoly(x).as_expr())
        ours = sympy.expand(sum(
            sum(sympy.Rational(c) * t**int(e) for e, c in s.terms()) * x**k
            for k, s in enumerate(coeffs)
        ))
        assert sympy.expand(ours - expect) == 0


def test_branch_slope_logarithmic_cutoff():
    # valuation exactly -1 is regular singular: slope 0
    b = SpectralBranch(Fraction(-1), 1, QQ, [QQ.from_rational(Fraction(-2)), QQ.one()])
    assert b.slope == 0 and not b.is_irregular
    b2 = SpectralBranch(Fraction(-3, 2), 2, QQ, [QQ.from_rational(Fraction(-1)),
                                                 QQ.zero(), QQ.one()])
    assert b2.slope == Fraction(1, 2) and b2.is_irregular


@pytest.mark.parametrize("name", SMALL_TYPES)
def test_rigid_connection_slope(name):
    # slope 1/h at infinity in the smallest faithful representation
    conn = frenkel_gross_connection(name, 1, at="infinity")
    h = conn.algebra.rs.coxeter_number
    assert connection_slope(conn) == Fraction(1, h)
    # regular singular at the origin
    at0 = frenkel_gross_connection(name, 1)
    assert connection_slope(at0) == 0


@pytest.mark.parametrize("name", SMALL_TYPES)
def test_rigid_connection_adjoint_irregularity(name):
    conn = frenkel_gross_connection(name, Fraction(5, 3), at="infinity")
    assert adjoint_irregularity(conn) == conn.algebra.rank


def test_rigid_a1_leading_terms():
    # char(A) = X^2 - lam/s^3 at infinity: branches +-sqrt(lam) s^{-3/2}
    conn = frenkel_gross_connection("A1", 4, at="infinity")
    branches = irregular_branches(conn)
    assert len(branches) == 1
    b = branches[0]
    assert b.root_valuation == Fraction(-3, 2)
    assert b.multiplicity == 2
    assert b.slope == Fraction(1, 2)
    assert b.leading_terms is not None
    leads = sorted(s.rep for s, _ in b.leading_terms)
    assert leads == [Fraction(-2), Fraction(2)]


def test_unsplit_edge_polynomial_is_reported_honestly():
    # Z^3 = 3 has no rational root and no quadratic/cyclotomic splitting
    conn = frenkel_gross_connection("A2", 3, at="infinity")
    branches = irregular_branches(conn)
    assert len(branches) == 1
    b = branches[0]
    assert b.multiplicity == 3
    assert b.leading_terms is None
    assert [QQ.as_rational(c) for c in b.edge_poly] == [
        Fraction(-3), Fraction(0), Fraction(0), Fraction(1)
    ]


def test_cube_root_splits_cyclotomically_for_unit_lambda():
    # Z^3 = 1 splits over the third cyclotomic field
    conn = frenkel_gross_connection("A2", 1, at="infinity")
    [b] = irregular_branches(conn)
    assert b.leading_terms is not None
    assert len(b.leading_terms) == 3
    assert all(mu == Fraction(-4, 3) for _, mu in b.leading_terms)


def test_matrix_slope_and_irregularity():
    t = LaurentSeries.variable()
    # diag(v^-2, v^-1): slopes 1 and 0, irregularity 1
    mat = [[t.invert() * t.invert(), LaurentSeries.zero()],
           [LaurentSeries.zero(), t.invert()]]
    assert matrix_slope(mat) == 1
    assert matrix_irregularity(mat) == 1
    zero = [[LaurentSeries.zero()]]
    assert matrix_slope(zero) == 0
    assert matrix_irregularity(zero) == 0


def test_spectral_branches_sorted_by_slope():
    t = LaurentSeries.variable()
    mat = [[t.invert() * t.invert(), LaurentSeries.zero()],
           [LaurentSeries.zero(), t.invert() * t.invert() * t.invert()]]
    slopes = [b.slope for b in spectral_branches(mat)]
    assert slopes == sorted(slopes, reverse=True)
    assert slopes == [2, 1]


def test_slope_gauge_stability():
    # Taylor-unipotent and cocharacter gauges leave slope and adjoint
    # irregularity of the rigid family unchanged
    from formalconn.connection import GaugeElement

    rng = seeded(97)
    for name in ("A1", "A2", "B2"):
        conn = frenkel_gross_connection(name, 2, at="infinity")
        alg = conn.algebra
        h = alg.rs.coxeter_number
        for _ in range(6):
            kind = rng.choice(["exponential", "torus"])
            if kind == "exponential":
                elem = {}
                sign = rng.choice([1, -1])
                for bta in alg.rs.positive_roots:
                    if rng.random() < 0.5:
                        s = random_laurent(rng, lo=1, hi=3, nterms=2)
                        if not s.is_exact_zero():
                            elem[("e", tuple(sign * x for x in bta))] = s
                if not elem:
                    continue
                g = GaugeElement.exponential(alg, elem)
            else:
                factors = [
                    LaurentSeries.one() + random_laurent(rng, lo=1, hi=3, nterms=2)
                    for _ in range(alg.rank)
                ]
                g = GaugeElement.torus_series(alg, factors)
            moved = conn.gauge(g)
            assert connection_slope(moved) == Fraction(1, h)
            assert adjoint_irregularity(moved) == alg.rank

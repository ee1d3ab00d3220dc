"""Formal connections, gauge actions, and the rigid family."""

from fractions import Fraction

import pytest

from formalconn.connection import (
    FormalConnection,
    GaugeElement,
    frenkel_gross_connection,
    monodromy_type,
    residue_is_nilpotent,
    residue_is_regular,
)
from formalconn.errors import UnsupportedConnectionError
from formalconn.scalars import QQ
from formalconn.series import LaurentSeries, SeriesRing
from formalconn.linalg import mat_add, mat_mul, mat_neg

from conftest import SMALL_TYPES, random_laurent, seeded


def _frozen(terms):
    return LaurentSeries.from_terms(QQ, [(e, Fraction(c)) for e, c in terms])


def test_a1_rigid_connection_matrix():
    conn = frenkel_gross_connection("A1", 3)
    mat = conn.matrix()
    assert mat[0][0].is_exact_zero()
    assert mat[1][1].is_exact_zero()
    assert mat[0][1] == _frozen([(0, 3)])
    assert mat[1][0] == _frozen([(-1, 1)])


def test_a1_rigid_connection_at_infinity():
    conn = frenkel_gross_connection("A1", 3, at="infinity")
    mat = conn.matrix()
    assert mat[0][1] == _frozen([(-2, -3)])
    assert mat[1][0] == _frozen([(-1, -1)])
    assert conn.pole_order() == 2
    assert not conn.is_regular_singular()


def test_change_to_infinity_matches_direct_construction(algebra):
    a = frenkel_gross_connection(algebra, Fraction(1, 3))
    b = a.change_to_infinity()
    c = frenkel_gross_connection(algebra, Fraction(1, 3), at="infinity")
    assert b.form == c.form
    assert b.variable == c.variable == "s"


def test_pole_orders(algebra):
    conn = frenkel_gross_connection(algebra, 1)
    assert conn.pole_order() == 1
    assert conn.is_regular_singular()
    inf = frenkel_gross_connection(algebra, 1, at="infinity")
    assert inf.pole_order() == 2


def test_monodromy_is_principal_unipotent(algebra):
    conn = frenkel_gross_connection(algebra, 2)
    m = monodromy_type(conn)
    assert m["regular_singular"]
    assert m["residue_nilpotent"]
    assert m["unipotent"]
    assert m["principal_unipotent"]


def test_monodromy_requires_regular_singularity():
    conn = frenkel_gross_connection("B2", 1, at="infinity")
    with pytest.raises(UnsupportedConnectionError):
        monodromy_type(conn)


def test_residue_classification():
    conn = frenkel_gross_connection("A2", 5)
    assert residue_is_nilpotent(conn)
    assert residue_is_regular(conn)
    # a connection with semisimple residue: d + rho_check dv/v
    from formalconn.chevalley import build_algebra

    alg = build_algebra("A2")
    vinv = LaurentSeries.monomial(-1)
    form = {k: vinv.scale(c) for k, c in alg.principal.two_rho.items()}
    semi = FormalConnection(variable="t", algebra=alg, form=form)
    assert not residue_is_nilpotent(semi)
    assert residue_is_regular(semi)


def test_matrix_connection_basics():
    t = LaurentSeries.variable()
    mat = [[t.invert(), LaurentSeries.one()], [LaurentSeries.zero(), t]]
    conn = FormalConnection(variable="t", matrix=mat)
    assert not conn.structured
    assert conn.pole_order() == 1
    from formalconn.chevalley import build_algebra

    g = GaugeElement.cocharacter(build_algebra("A1"), (1,))
    with pytest.raises(UnsupportedConnectionError):
        conn.gauge(g)
    with pytest.raises(ValueError):
        FormalConnection(variable="t")


def _random_gauge(rng, alg):
    kind = rng.choice(["cocharacter", "exponential", "torus", "product"])
    if kind == "cocharacter":
        mu = [rng.randrange(-2, 3) for _ in range(alg.rank)]
        return GaugeElement.cocharacter(alg, mu)
    if kind == "exponential":
        sign = rng.choice([1, -1])
        elem = {}
        for b in alg.rs.positive_roots:
            if rng.random() < 0.5:
                s = random_laurent(rng, lo=0, hi=3, nterms=2)
                if not s.is_exact_zero():
                    elem[("e", tuple(sign * x for x in b))] = s
        if not elem:
            elem[("e", alg.rs.positive_roots[0])] = LaurentSeries.variable()
        return GaugeElement.exponential(alg, elem)
    if kind == "torus":
        factors = []
        for _ in range(alg.rank):
            tail = random_laurent(rng, lo=1, hi=4, nterms=2)
            factors.append(LaurentSeries.one() + tail)
        return GaugeElement.torus_series(alg, factors)
    return GaugeElement.product(
        [_random_gauge(rng, alg) for _ in range(2)]
    )


@pytest.mark.parametrize("name", ["A1", "A2", "B2"])
def test_gauge_inverse_roundtrip(name):
    from formalconn.chevalley import build_algebra

    alg = build_algebra(name)
    rng = seeded(57)
    conn = frenkel_gross_connection(alg, Fraction(1, 2))
    for _ in range(12):
        g = _random_gauge(rng, alg)
        back = conn.gauge(g).gauge(g.inverse())
        for k in set(conn.form) | set(back.form):
            a = conn.form.get(k, LaurentSeries.zero())
            b = back.form.get(k, LaurentSeries.zero())
            assert a.agrees_with(b)


@pytest.mark.parametrize("name", ["A1", "B2"])
def test_gauge_action_matches_matrix_formula(name):
    # form-level action agrees with G A G^-1 - G' G^-1; run in the adjoint,
    # where every gauge kind has a single-valued matrix
    from formalconn.chevalley import build_algebra

    alg = build_algebra(name)
    rep = alg.representation("adjoint")
    ring = SeriesRing(QQ)
    rng = seeded(71)
    conn = frenkel_gross_connection(alg, 2)
    a = conn.matrix("adjoint")
    for _ in range(8):
        g = _random_gauge(rng, alg)
        gm, gi, gp = g.matrix_triple(rep)
        expect = mat_add(
            ring,
            mat_mul(ring, mat_mul(ring, gm, a), gi),
            mat_neg(ring, mat_mul(ring, gp, gi)),
        )
        got = conn.gauge(g).matrix("adjoint")
        for i in range(rep.dim):
            for j in range(rep.dim):
                assert got[i][j].agrees_with(expect[i][j])


def test_torus_gauge_needs_integral_weights():
    # in the defining rep of A1 the fundamental coweight acts by half-integers
    from formalconn.chevalley import build_algebra

    alg = build_algebra("A1")
    one = LaurentSeries.one()
    g = GaugeElement.torus_series(alg, [one + LaurentSeries.variable()])
    with pytest.raises(UnsupportedConnectionError):
        g.matrix_triple(alg.representation("defining"))


def test_gauge_rejects_bad_input():
    from formalconn.chevalley import build_algebra

    alg = build_algebra("A2")
    with pytest.raises(ValueError):
        GaugeElement.cocharacter(alg, (1,))
    with pytest.raises(ValueError):
        GaugeElement.exponential(alg, {("h", 0): LaurentSeries.one()})
    mixed = {
        ("e", (1, 0)): LaurentSeries.one(),
        ("e", (-1, 0)): LaurentSeries.one(),
    }
    with pytest.raises(ValueError):
        GaugeElement.exponential(alg, mixed)
    with pytest.raises(ValueError):
        GaugeElement.torus_series(alg, [LaurentSeries.variable()] * 2)
    with pytest.raises(ValueError):
        GaugeElement.product([])


def test_cocharacter_gauge_shifts_pole():
    # v^mu with mu = rho_check turns p_-1/v + lam E_theta into v^-2 leading
    from formalconn.chevalley import build_algebra

    alg = build_algebra("A1")
    conn = frenkel_gross_connection(alg, 1)
    g = GaugeElement.cocharacter(alg, (1,))
    moved = conn.gauge(g)
    assert moved.pole_order() == 2


def test_truncate_connection():
    conn = frenkel_gross_connection("A2", 1)
    cut = conn.truncate(3)
    assert cut.form
    for s in cut.form.values():
        assert s.trunc_order() == 3


@pytest.mark.parametrize("name", SMALL_TYPES)
def test_rigid_form_support(name):
    # support: the simple negative root vectors plus the highest root vector
    conn = frenkel_gross_connection(name, Fraction(7, 2))
    keys = set(conn.form)
    rs = conn.algebra.rs
    expect = {("e", tuple(-x for x in b)) for b in rs.positive_roots if sum(b) == 1}
    expect.add(("e", rs.highest_root))
    assert keys == expect

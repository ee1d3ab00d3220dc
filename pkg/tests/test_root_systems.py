"""Root system numerology against the classical tables."""

from fractions import Fraction

import pytest

from formalconn.errors import UnsupportedTypeError
from formalconn.roots import RootSystem, cartan_matrix, parse_type

# (type, |Phi+|, h, exponents).  Standard tables, frozen by hand.
TABLE = [
    ("A1", 1, 2, (1,)),
    ("A2", 3, 3, (1, 2)),
    ("A3", 6, 4, (1, 2, 3)),
    ("A4", 10, 5, (1, 2, 3, 4)),
    ("B2", 4, 4, (1, 3)),
    ("B3", 9, 6, (1, 3, 5)),
    ("C2", 4, 4, (1, 3)),
    ("C3", 9, 6, (1, 3, 5)),
    ("D4", 12, 6, (1, 3, 3, 5)),
    ("G2", 6, 6, (1, 5)),
]


@pytest.mark.parametrize("name,npos,h,exps", TABLE, ids=[r[0] for r in TABLE])
def test_classical_tables(name, npos, h, exps):
    rs = RootSystem(name)
    assert len(rs.positive_roots) == npos
    assert rs.coxeter_number == h
    assert rs.exponents == exps
    assert rs.degrees == tuple(e + 1 for e in exps)
    # sum of exponents = |Phi+|; h * rank = |Phi|
    assert sum(rs.exponents) == npos
    assert h * rs.rank == 2 * npos
    # highest root has height h - 1
    assert sum(rs.highest_root) == h - 1


def test_parse_type():
    assert parse_type("g2") == ("G", 2)
    assert parse_type(("A", 3)) == ("A", 3)
    assert parse_type(RootSystem("B2")) == ("B", 2)
    for bad in ("E8", "F4", "X1", "A", "", 7):
        with pytest.raises(UnsupportedTypeError):
            parse_type(bad)


def test_unsupported_ranks():
    for letter, rank in (("B", 1), ("C", 1), ("D", 2), ("G", 3)):
        with pytest.raises(UnsupportedTypeError):
            cartan_matrix(letter, rank)


@pytest.mark.parametrize("name", [r[0] for r in TABLE])
def test_cartan_matrix_shape(name):
    rs = RootSystem(name)
    c = rs.cartan
    n = rs.rank
    for i in range(n):
        assert c[i][i] == 2
        for j in range(n):
            if i != j:
                assert c[i][j] <= 0
                # c_ij = 0 iff c_ji = 0
                assert (c[i][j] == 0) == (c[j][i] == 0)


@pytest.mark.parametrize("name", [r[0] for r in TABLE])
def test_reflection_closure(name):
    # s_i(beta) = beta - <beta, alpha_i^vee> alpha_i stays a root
    rs = RootSystem(name)
    for beta in rs.all_roots():
        for i in range(rs.rank):
            k = rs.pairing(beta, i)
            img = tuple(
                b - (k if j == i else 0) for j, b in enumerate(beta)
            )
            assert rs.is_root(img)


@pytest.mark.parametrize("name", [r[0] for r in TABLE])
def test_root_lengths(name):
    rs = RootSystem(name)
    lengths = {rs.length_sq(b) for b in rs.positive_roots}
    ratio = {"A": 1, "D": 1, "B": 2, "C": 2, "G": 3}[name[0]]
    assert len(lengths) == (1 if ratio == 1 else 2)
    assert max(lengths) / min(lengths) == ratio
    # the highest root is always long
    assert rs.length_sq(rs.highest_root) == max(lengths)


@pytest.mark.parametrize("name", [r[0] for r in TABLE])
def test_inner_product_compatibility(name):
    # (beta, alpha_i) = <beta, alpha_i^vee> * (alpha_i, alpha_i)/2
    rs = RootSystem(name)
    simple = [
        tuple(1 if j == i else 0 for j in range(rs.rank)) for i in range(rs.rank)
    ]
    for beta in rs.positive_roots:
        for i, alpha in enumerate(simple):
            lhs = rs.inner(beta, alpha)
            rhs = Fraction(rs.pairing(beta, i)) * rs.length_sq(alpha) / 2
            assert lhs == rhs


@pytest.mark.parametrize("name", [r[0] for r in TABLE])
def test_coroots(name):
    rs = RootSystem(name)
    for beta in rs.positive_roots:
        cv = rs.coroot_coordinates(beta)
        # <beta, beta^vee> = 2, recovered through the coweight pairing
        cw = rs.coroot_to_coweight(cv)
        assert sum(b * w for b, w in zip(beta, cw)) == 2
    # simple coroots are unit vectors
    for i in range(rs.rank):
        alpha = tuple(1 if j == i else 0 for j in range(rs.rank))
        assert rs.coroot_coordinates(alpha) == alpha


@pytest.mark.parametrize("name", [r[0] for r in TABLE])
def test_marks_sum(name):
    # 2 rho^vee = sum of positive coroots; its height is h*rank - rank... no:
    # sum over i of <alpha_i, 2 rho^vee> = 2 * rank would be the weight read;
    # the honest frozen fact is sum of coordinates = number of positive coroots
    # weighted by height of the coroot in the dual system.  Keep the robust
    # invariant: pairing of 2 rho^vee with each simple root equals 2.
    rs = RootSystem(name)
    two_rho = rs.two_rho_check
    cw = rs.coroot_to_coweight(two_rho)
    assert cw == tuple([2] * rs.rank)


def test_positive_root_order_is_by_height():
    rs = RootSystem("G2")
    heights = [sum(b) for b in rs.positive_roots]
    assert heights == sorted(heights)
    assert rs.positive_roots[-1] == rs.highest_root


def test_g2_explicit_roots():
    # alpha_1 short: positive roots of G2 in simple-root coordinates
    rs = RootSystem("G2")
    assert set(rs.positive_roots) == {
        (1, 0), (0, 1), (1, 1), (2, 1), (3, 1), (3, 2)
    }
    assert rs.highest_root == (3, 2)


def test_d4_triality_symmetric_exponents():
    rs = RootSystem("D4")
    # exponent 3 appears twice; the degree multiset is {2, 4, 4, 6}
    assert sorted(rs.degrees) == [2, 4, 4, 6]

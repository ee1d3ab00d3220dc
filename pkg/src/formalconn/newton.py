"""Slopes and irregularity via the Newton polygon of the characteristic
polynomial.

For d/dv + A(v), an eigenvalue branch of A with valuation mu contributes
slope max(0, -mu - 1): only branches growing faster than the logarithmic
pole v^{-1} are irregular.  Root valuations are read off the lower hull
of the points (k, ord a_k) for char(A) = sum a_k X^k, and the monic edge
polynomial of each hull edge pins down the leading coefficients of the
branches on it.

This spectral reading is not invariant under arbitrary polar gauge
transformations; it is invariant on the families produced here (Kostant
normal forms and their Taylor-unipotent / cocharacter gauges), which is
what the verification suite exercises and what the tests pin down.
"""

from __future__ import annotations

from fractions import Fraction

from .errors import PrecisionError
from .linalg import charpoly
from .scalars import (
    CyclotomicTower,
    QQ,
    QuadraticTower,
    Scalar,
    join_towers,
    promote,
    rational_nth_root,
    rational_square_root,
    squarefree_kernel,
)
from .series import SeriesRing


def matrix_charpoly(matrix, tower=None):
    """Ascending coefficients of char(A) as Laurent series."""
    if tower is None:
        tower = QQ
        for row in matrix:
            for s in row:
                tower = join_towers(tower, s.tower)
    return charpoly(SeriesRing(tower), matrix)


def _lower_hull(points):
    hull = []
    for p in points:
        while len(hull) >= 2:
            (x1, y1), (x2, y2) = hull[-2], hull[-1]
            if (x2 - x1) * (p[1] - y1) - (y2 - y1) * (p[0] - x1) <= 0:
                hull.pop()
            else:
                break
        hull.append(p)
    return hull


class NewtonPolygon:
    """Lower hull of (k, ord a_k), with precision accounting.

    Truncated-zero coefficients are phantom points known only to lie at
    height >= their truncation order; the polygon raises PrecisionError
    whenever such a point could push the hull lower.
    """

    def __init__(self, coeffs):
        self.coeffs = list(coeffs)
        points = []
        phantoms = []
        for k, s in enumerate(self.coeffs):
            o = s.order()
            if o is not None:
                points.append((k, o))
            elif not s.is_exact():
                phantoms.append((k, s.trunc_order()))
        if not points:
            raise PrecisionError("all characteristic coefficients vanish "
                                 "to working precision")
        self.vertices = _lower_hull(points)
        self.points = points
        for k, bound in phantoms:
            h = self._hull_height(k)
            if h is None:
                # left of every known point: slope-type data only moves
                # if the phantom could support an edge of slope > 1 into
                # the leftmost vertex
                x0, y0 = self.vertices[0]
                if k < x0 and bound < y0 - (x0 - k):
                    raise PrecisionError(
                        f"coefficient of X^{k} only known to "
                        f"O(v^{bound}); the polygon is ambiguous"
                    )
            elif bound < h:
                raise PrecisionError(
                    f"coefficient of X^{k} only known to O(v^{bound}); "
                    f"the polygon is ambiguous"
                )

    def _hull_height(self, x):
        v = self.vertices
        if len(v) == 1:
            return v[0][1] if x == v[0][0] else None
        for (x1, y1), (x2, y2) in zip(v, v[1:]):
            if x1 <= x <= x2:
                return y1 + (y2 - y1) * Fraction(x - x1, x2 - x1)
        return None

    def edges(self):
        """(k1, v1, k2, v2, root_valuation, length) per hull edge."""
        out = []
        for (x1, y1), (x2, y2) in zip(self.vertices, self.vertices[1:]):
            sigma = Fraction(y2 - y1, x2 - x1)
            out.append((x1, y1, x2, y2, -sigma, x2 - x1))
        return out

    def zero_root_count(self) -> int:
        return self.vertices[0][0]


class SpectralBranch:
    """All eigenvalue branches sharing one hull edge.

    root_valuation mu, multiplicity m, and the monic edge polynomial
    P(Z) whose roots are the leading coefficients: each branch looks
    like c * v^mu + (higher order) with P(c) = 0.  leading_terms is the
    explicit list of (Scalar, mu) pairs when P splits over a supported
    coefficient tower, else None.
    """

    def __init__(self, root_valuation, multiplicity, tower, edge_poly):
        self.root_valuation = Fraction(root_valuation)
        self.multiplicity = multiplicity
        self.tower = tower
        self.edge_poly = edge_poly  # monic, ascending tower reps
        self.leading_terms = _split_edge_polynomial(tower, edge_poly,
                                                    self.root_valuation)

    @property
    def slope(self) -> Fraction:
        return max(Fraction(0), -self.root_valuation - 1)

    @property
    def is_irregular(self) -> bool:
        return self.slope > 0

    def __repr__(self):
        return (f"SpectralBranch(mu={self.root_valuation}, "
                f"mult={self.multiplicity}, slope={self.slope})")


def spectral_branches(matrix, tower=None):
    """SpectralBranch list for d/dv + A, sorted by decreasing slope."""
    coeffs = matrix_charpoly(matrix, tower)
    poly = NewtonPolygon(coeffs)
    out = []
    for x1, y1, x2, y2, mu, mult in poly.edges():
        sigma = -mu
        tower0 = coeffs[x2].tower
        for k in range(x1, x2 + 1):
            tower0 = join_towers(tower0, coeffs[k].tower)
        raw = []
        for k in range(x1, x2 + 1):
            line = y1 + sigma * (k - x1)
            c = coeffs[k].coefficient(line)
            raw.append(promote(tower0, coeffs[k].tower, c))
        lead_inv = tower0.inv(raw[-1])
        monic = [tower0.mul(c, lead_inv) for c in raw]
        out.append(SpectralBranch(mu, mult, tower0, monic))
    out.sort(key=lambda b: -b.slope)
    return out


def matrix_slope(matrix, tower=None) -> Fraction:
    """Largest branch slope; 0 for a regular singular point."""
    return max(
        (b.slope for b in spectral_branches(matrix, tower)),
        default=Fraction(0),
    )


def matrix_irregularity(matrix, tower=None) -> Fraction:
    """Sum of branch slopes with multiplicity."""
    return sum(
        (b.slope * b.multiplicity for b in spectral_branches(matrix, tower)),
        Fraction(0),
    )


def connection_slope(conn, rep_which=None) -> Fraction:
    return matrix_slope(conn.matrix(rep_which))


def adjoint_irregularity(conn) -> Fraction:
    return matrix_irregularity(conn.matrix("adjoint"))


def irregular_branches(conn, rep_which=None):
    return [
        b for b in spectral_branches(conn.matrix(rep_which)) if b.is_irregular
    ]


# ---- explicit splitting of edge polynomials ---------------------------


def _split_edge_polynomial(tower, poly, mu):
    """(Scalar, mu) leading terms if poly splits over a supported tower."""
    rat = [tower.as_rational(c) for c in poly]
    if any(q is None for q in rat):
        return None
    deg = len(poly) - 1
    if deg == 1:
        return [(Scalar.rational(-rat[0]), mu)]
    if deg == 2:
        return _split_quadratic(rat[0], rat[1], mu)
    if all(q == 0 for q in rat[1:-1]):
        return _split_binomial(-rat[0], deg, mu)
    return None


def _split_quadratic(c, b, mu):
    disc = b * b - 4 * c
    if disc == 0:
        r = Scalar.rational(-b / 2)
        return [(r, mu), (r, mu)]
    root = rational_square_root(disc) if disc > 0 else None
    if root is not None:
        return [
            (Scalar.rational((-b + root) / 2), mu),
            (Scalar.rational((-b - root) / 2), mu),
        ]
    d = squarefree_kernel(disc)
    f = rational_square_root(disc / d)
    tower = QuadraticTower(d)
    out = []
    for sign in (1, -1):
        rep = (-b / 2, sign * f / 2)  # (-b +/- f sqrt(d)) / 2
        out.append((Scalar(tower, rep), mu))
    return out


def _split_binomial(c, deg, mu):
    """Roots of Z^deg = c when |c| has a rational real deg-th root."""
    if c == 0:
        return None
    r = rational_nth_root(abs(c), deg)
    if r is None:
        return None
    if c > 0:
        tower = CyclotomicTower(deg)
        zeta = tower.zeta()
        exps = range(deg)  # r * zeta_deg^j
    else:
        tower = CyclotomicTower(2 * deg)
        zeta = tower.zeta()
        exps = range(1, 2 * deg, 2)  # r * zeta_{2 deg}^{odd}
    return [
        (Scalar(tower, tower.scale(tower.power(zeta, j), r)), mu)
        for j in exps
    ]

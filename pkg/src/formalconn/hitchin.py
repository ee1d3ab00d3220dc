"""Sections of powers of the canonical bundle on the projective line.

A d-differential with poles along a finite set of marked points is written

    f(t) (dt)^d,   f = P(t) / prod_x (t - x)^{m_x},

with P a polynomial.  At infinity the coordinate change s = 1/t turns
f (dt)^d into f(1/s) (-1)^d s^{-2d} (ds)^d, so the pole bound m at infinity
is the degree constraint deg P <= sum_x m_x + m - 2d.  The dimension of the
space of such sections is max(0, sum m - 2d + 1) over all marked points
including infinity, and the monomial numerators t^j give a basis.

The level spaces attached to a connection tie one such space to every
fundamental degree d_i of the algebra.  The base level has bounds d_i - 1
at 0 and d_i (top slot: d_h + 1) at infinity; adding a finite regular
singular point z raises the bound there to d_i.  The principal-part map at
z, the direct sum decomposition of the enlarged space, and the block shape
of the localized restriction map are verified here by exact rank
computations.
"""

from fractions import Fraction

from .errors import UnsupportedConnectionError
from .linalg import rank as _mat_rank, solve as _mat_solve
from .scalars import QQ


class _Infinity(object):
    """Marker for the point at infinity in pole-bound tables."""

    __slots__ = ()

    def __repr__(self):
        return "INFINITY"


INFINITY = _Infinity()


# ---------------------------------------------------------------------------
# polynomial scratchpads (dense Fraction lists, ascending degree)

def _poly_trim(p):
    while p and p[-1] == 0:
        p = p[:-1]
    return p


def _poly_mul(p, q):
    if not p or not q:
        return []
    out = [Fraction(0)] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if a == 0:
            continue
        for j, b in enumerate(q):
            out[i + j] += a * b
    return _poly_trim(out)


def _poly_pow(p, n):
    out = [Fraction(1)]
    for _ in range(n):
        out = _poly_mul(out, p)
    return out


def _poly_shift(p, z):
    # coefficients of P(z + u) as a polynomial in u
    out = [Fraction(0)] * len(p)
    for c in reversed(p):
        carry = Fraction(0)
        for k in range(len(out)):
            out[k], carry = carry + z * out[k], out[k]
        out[0] += c
    return out


def _series_inverse(p, length):
    """First `length` coefficients of 1/p for a unit power series p."""
    assert p and p[0] != 0
    inv0 = Fraction(1) / Fraction(p[0])
    out = [inv0]
    for n in range(1, length):
        acc = Fraction(0)
        for k in range(1, min(n, len(p) - 1) + 1):
            acc += Fraction(p[k]) * out[n - k]
        out.append(-inv0 * acc)
    return out


class Differential(object):
    """P(t) / prod (t - x)^{m_x} times (dt)^degree, all data exact rationals.

    numerator holds ascending coefficients of P; poles holds (x, m) pairs for
    the finite marked points only.  The bound at infinity is a property of
    the surrounding space, not of the section, so it is not stored.
    """

    __slots__ = ("degree", "numerator", "poles")

    def __init__(self, degree, numerator, poles):
        self.degree = int(degree)
        self.numerator = tuple(Fraction(c) for c in numerator)
        seen = set()
        cleaned = []
        for x, m in poles:
            x = Fraction(x)
            if x in seen:
                raise ValueError("repeated pole location %s" % (x,))
            seen.add(x)
            if int(m) < 0:
                raise ValueError("negative pole order")
            if int(m) > 0:
                cleaned.append((x, int(m)))
        self.poles = tuple(sorted(cleaned))

    def scaled(self, c):
        c = Fraction(c)
        return Differential(self.degree, [c * a for a in self.numerator], self.poles)

    def plus(self, other):
        # restricted to sections written over the same denominator
        if self.degree != other.degree or self.poles != other.poles:
            raise ValueError("sections not written over a common denominator")
        n = max(len(self.numerator), len(other.numerator))
        a = list(self.numerator) + [Fraction(0)] * (n - len(self.numerator))
        b = list(other.numerator) + [Fraction(0)] * (n - len(other.numerator))
        return Differential(self.degree, [x + y for x, y in zip(a, b)], self.poles)

    def laurent_at(self, z, upto):
        """Coefficients c_k of the expansion sum c_k u^k at t = z + u.

        Returns a dict k -> Fraction covering -m_z <= k <= upto exactly.
        """
        z = Fraction(z)
        order_here = 0
        unit = [Fraction(1)]
        for x, m in self.poles:
            if x == z:
                order_here = m
            else:
                unit = _poly_mul(unit, _poly_pow([z - x, Fraction(1)], m))
        length = upto + order_here + 1
        if length <= 0:
            return {}
        num = _poly_shift(list(self.numerator), z)
        ser = _poly_mul(num, _series_inverse(unit, length + len(num)))
        out = {}
        for k in range(-order_here, upto + 1):
            idx = k + order_here
            out[k] = ser[idx] if idx < len(ser) else Fraction(0)
        return out

    def principal_coefficients(self, z, depth):
        """[c_{-1}, c_{-2}, ..., c_{-depth}] of the expansion at z."""
        coeffs = self.laurent_at(z, -1)
        return [coeffs.get(-j, Fraction(0)) for j in range(1, depth + 1)]

    def infinity_expansion(self, length):
        """Leading coefficients at infinity after the (ds)^d twist.

        Writes f(1/s) (-1)^d s^{-2d} as sum c_k s^k and returns
        (v, [c_v, c_{v+1}, ...]) with `length` coefficients starting at the
        smallest exponent v that can carry a term.
        """
        total = sum(m for _, m in self.poles)
        # f(1/s) = s^{total - deg P} * revP(s) / prod (1 - x s)^{m_x}
        p = _poly_trim(list(self.numerator))
        if not p:
            return (0, [Fraction(0)] * length)
        rev = list(reversed(p))
        unit = [Fraction(1)]
        for x, m in self.poles:
            unit = _poly_mul(unit, _poly_pow([Fraction(1), -x], m))
        ser = _poly_mul(rev, _series_inverse(unit, length + len(rev)))
        v = total - (len(p) - 1) - 2 * self.degree
        sign = -1 if self.degree % 2 else 1
        out = [sign * (ser[k] if k < len(ser) else Fraction(0)) for k in range(length)]
        return (v, out)


def space_dimension(degree, bounds):
    """dim of degree-differentials with pole bound bounds[x] at each point."""
    total = sum(bounds.values())
    return max(0, total - 2 * degree + 1)


def space_basis(degree, bounds):
    """Monomial-numerator basis over the common denominator.

    bounds maps points (Fractions, or INFINITY) to pole orders.  The basis
    element with numerator t^j is regular wherever its bound is zero, and
    the list is empty exactly when the dimension formula vanishes.
    """
    finite = sorted((x, m) for x, m in bounds.items() if x is not INFINITY and m > 0)
    at_inf = bounds.get(INFINITY, 0)
    top = sum(m for _, m in finite) + at_inf - 2 * degree
    out = []
    for j in range(top + 1):
        numerator = [Fraction(0)] * j + [Fraction(1)]
        out.append(Differential(degree, numerator, finite))
    return out


class LevelSpec(object):
    """One pole-bound table per fundamental degree.

    degrees lists the d_i ascending; bounds maps each marked point to the
    per-slot bound tuple.  Points are exact rationals or INFINITY and the
    dict keys enforce distinctness.
    """

    def __init__(self, degrees, bounds):
        self.degrees = tuple(int(d) for d in degrees)
        if any(d < 1 for d in self.degrees):
            raise ValueError("degrees must be positive")
        table = {}
        for point, ms in bounds.items():
            if point is not INFINITY:
                point = Fraction(point)
            ms = tuple(int(m) for m in ms)
            if len(ms) != len(self.degrees):
                raise ValueError("bound tuple length must match the degree list")
            if any(m < 0 for m in ms):
                raise ValueError("pole bounds must be non-negative")
            table[point] = ms
        self.bounds = table

    def slot_bounds(self, i):
        return {point: ms[i] for point, ms in self.bounds.items() if ms[i] > 0}

    def slot_dimension(self, i):
        return space_dimension(self.degrees[i], self.slot_bounds(i))

    def dimensions(self):
        return tuple(self.slot_dimension(i) for i in range(len(self.degrees)))

    def total_dimension(self):
        return sum(self.dimensions())

    def slot_basis(self, i):
        return space_basis(self.degrees[i], self.slot_bounds(i))

    def basis(self):
        """All basis sections as (slot index, Differential), slot-major."""
        out = []
        for i in range(len(self.degrees)):
            for f in self.slot_basis(i):
                out.append((i, f))
        return out


def _check_point(z):
    z = Fraction(z)
    if z == 0:
        # 0 already carries the base-level bounds; the residue map there
        # would collide with them
        raise UnsupportedConnectionError("marked point must avoid 0 and infinity")
    return z


def base_spec(alg):
    """The level space whose total dimension is the number of Casimirs kept.

    Bounds d_i - 1 at 0 and d_i at infinity leave every slot
    zero-dimensional; the top slot gets one extra unit at infinity and
    contributes the single global section.
    """
    degrees = alg.rs.degrees
    ell = len(degrees)
    at_zero = tuple(d - 1 for d in degrees)
    at_inf = tuple(d + (1 if i == ell - 1 else 0) for i, d in enumerate(degrees))
    return LevelSpec(degrees, {Fraction(0): at_zero, INFINITY: at_inf})


def primed_spec(alg, z):
    """Sections acquiring at most a d_i-fold pole at the extra point z."""
    z = _check_point(z)
    degrees = alg.rs.degrees
    at_zero = tuple(d - 1 for d in degrees)
    at_z = tuple(degrees)
    at_inf = tuple(degrees)
    return LevelSpec(degrees, {Fraction(0): at_zero, z: at_z, INFINITY: at_inf})


def ambient_spec(alg, points):
    """Joint space containing the base level and every primed summand."""
    zs = []
    for z in points:
        z = _check_point(z)
        if z in zs:
            raise ValueError("marked points must be distinct")
        zs.append(z)
    degrees = alg.rs.degrees
    ell = len(degrees)
    bounds = {Fraction(0): tuple(d - 1 for d in degrees)}
    for z in zs:
        bounds[z] = tuple(degrees)
    bounds[INFINITY] = tuple(
        d + (1 if i == ell - 1 else 0) for i, d in enumerate(degrees))
    return LevelSpec(degrees, bounds)


def iota_matrix(alg, z):
    """Principal parts at z of the primed basis, as a square matrix.

    Rows run over (slot i, pole order j <= d_i) slot-major with j
    ascending; columns over the primed basis in the same slot-major order.
    The matrix is block diagonal because a slot-i section has no other
    components.
    """
    z = _check_point(z)
    spec = primed_spec(alg, z)
    degrees = spec.degrees
    n = sum(degrees)
    cols = []
    for i, f in spec.basis():
        pcs = f.principal_coefficients(z, degrees[i])
        col = []
        for k, d in enumerate(degrees):
            col.extend(pcs if k == i else [Fraction(0)] * d)
        cols.append(col)
    assert len(cols) == n
    return [[cols[c][r] for c in range(n)] for r in range(n)]


def verify_residue_map(alg, z):
    """Rank check for the principal-part map at z.

    Passes when the map from the primed level space to the z-local pole
    coefficients is a bijection, certified by a full-rank exact matrix.
    """
    mat = iota_matrix(alg, z)
    expected = len(mat)
    r = _mat_rank(QQ, [list(row) for row in mat]) if mat else 0
    return {
        "point": Fraction(z),
        "matrix": mat,
        "rank": r,
        "expected_rank": expected,
        "pass": r == expected,
    }


def _ambient_coordinates(ambient, slot, f):
    """Numerator coefficients of f rewritten over the slot's joint denominator."""
    bounds = ambient.slot_bounds(slot)
    cofactor = [Fraction(1)]
    have = dict(f.poles)
    for x, m in bounds.items():
        if x is INFINITY:
            continue
        extra = m - have.get(x, 0)
        assert extra >= 0, "section does not lie in the ambient space"
        if extra:
            cofactor = _poly_mul(cofactor, _poly_pow([-x, Fraction(1)], extra))
    num = _poly_mul(list(f.numerator), cofactor)
    width = sum(bounds.values()) - 2 * ambient.degrees[slot] + 1
    assert len(num) <= width, "numerator exceeds the ambient degree bound"
    return num + [Fraction(0)] * (width - len(num))


def _stack_in_ambient(ambient, members):
    """Coordinate vectors of (slot, section) pairs inside the ambient space."""
    widths = ambient.dimensions()
    offsets = [sum(widths[:i]) for i in range(len(widths))]
    total = sum(widths)
    rows = []
    for slot, f in members:
        coords = _ambient_coordinates(ambient, slot, f)
        row = [Fraction(0)] * total
        for k, c in enumerate(coords):
            row[offsets[slot] + k] = c
        rows.append(row)
    return rows


def verify_direct_sum(alg, points):
    """Certify that base and per-point primed sections span the joint space.

    The ambient dimension is 1 + (number of points) * sum d_i; the check
    stacks all candidate basis vectors in ambient coordinates and asserts
    full rank, which proves both spanning and pairwise independence.
    """
    ambient = ambient_spec(alg, points)
    members = list(base_spec(alg).basis())
    for z in points:
        members.extend(primed_spec(alg, z).basis())
    rows = _stack_in_ambient(ambient, members)
    expected = ambient.total_dimension()
    stated = 1 + len(list(points)) * sum(alg.rs.degrees)
    r = _mat_rank(QQ, rows) if rows else 0
    return {
        "points": [Fraction(z) for z in points],
        "ambient_dimension": expected,
        "counted_dimension": stated,
        "member_count": len(members),
        "rank": r,
        "expected_rank": expected,
        "pass": (r == expected == stated == len(members)),
    }


def corrected_basis(alg, z):
    """Primed sections whose principal parts at z are coordinate vectors.

    Solves the residue-map matrix exactly; entry j of the result has
    c_{-(j')} = delta_{j j'} in its slot and vanishing principal part in
    every other slot.
    """
    z = _check_point(z)
    spec = primed_spec(alg, z)
    mat = iota_matrix(alg, z)
    n = len(mat)
    sol = _mat_solve(QQ, [list(r) for r in mat],
                     [[Fraction(1) if i == j else Fraction(0) for j in range(n)]
                      for i in range(n)])
    if sol is None:
        raise UnsupportedConnectionError(
            "principal-part map is singular at %s" % (z,))
    basis = spec.basis()
    out = []
    for j in range(n):
        acc = {}
        for k in range(n):
            c = sol[k][j]
            if c == 0:
                continue
            slot, f = basis[k]
            if slot in acc:
                acc[slot] = acc[slot].plus(f.scaled(c))
            else:
                acc[slot] = f.scaled(c)
        assert len(acc) == 1, "corrected section must live in a single slot"
        ((slot, f),) = acc.items()
        out.append((slot, f))
    return out


def verify_local_splitting(alg, z, jet_order=None):
    """Exact block shape of the localized restriction map at z.

    In the basis (base sections, corrected primed sections) the map to
    (principal parts at z, regular jet coefficients at z) after subtracting
    each section's own principal-part correction is block diagonal: an
    identity on the pole coordinates and the bare jet restriction of the
    base sections.  Every entry of the two off-diagonal blocks is checked
    to vanish identically.
    """
    z = _check_point(z)
    degrees = alg.rs.degrees
    if jet_order is None:
        jet_order = max(degrees) + 2
    base_members = list(base_spec(alg).basis())
    prime_members = corrected_basis(alg, z)
    members = base_members + prime_members
    n_pole = sum(degrees)
    n_base = len(base_members)

    def localize(slot, f):
        coeffs = f.laurent_at(z, jet_order)
        pole = []
        for k, d in enumerate(degrees):
            if k == slot:
                pole.extend(coeffs.get(-j, Fraction(0)) for j in range(1, d + 1))
            else:
                pole.extend([Fraction(0)] * d)
        jets = []
        for k in range(len(degrees)):
            if k == slot:
                jets.extend(coeffs.get(m, Fraction(0)) for m in range(jet_order + 1))
            else:
                jets.extend([Fraction(0)] * (jet_order + 1))
        return pole, jets

    raw = [localize(slot, f) for slot, f in members]
    # corrected column j carries principal part e_j; subtract its own jet
    # image so the regular block empties out
    columns = []
    for idx, (pole, jets) in enumerate(raw):
        if idx < n_base:
            columns.append((pole, jets))
        else:
            shift = [Fraction(0)] * len(jets)
            for j in range(n_pole):
                if pole[j] == 0:
                    continue
                corr = raw[n_base + j][1]
                shift = [a + pole[j] * b for a, b in zip(shift, corr)]
            columns.append((pole, [a - b for a, b in zip(jets, shift)]))

    top_left_zero = all(
        c == 0 for pole, _ in columns[:n_base] for c in pole)
    identity_ok = all(
        columns[n_base + j][0] == [Fraction(1) if i == j else Fraction(0)
                                   for i in range(n_pole)]
        for j in range(n_pole))
    bottom_right_zero = all(
        c == 0 for _, jets in columns[n_base:] for c in jets)
    base_jets = [list(jets) for _, jets in columns[:n_base]]
    return {
        "point": z,
        "jet_order": jet_order,
        "pole_block_is_identity": identity_ok,
        "base_pole_block_is_zero": top_left_zero,
        "corrected_jet_block_is_zero": bottom_right_zero,
        "base_jet_block": base_jets,
        "pass": top_left_zero and identity_ok and bottom_right_zero,
    }

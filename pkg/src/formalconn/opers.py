"""Reduction to Kostant normal form and regular-singular oper data.

A connection d/dv + A is an oper when A = sum psi_i(v) E_{-alpha_i} + b(v)
with every psi_i nonzero and b valued in the non-negative part.  Such a
connection is gauged, in order, by

  (i)   a cocharacter power making each psi_i a unit,
  (ii)  a torus-valued series making each psi_i exactly 1,
  (iii) exponentials clearing the non-slice part degree by degree,

landing on d/dv + p_{-1} + sum v_i(v) q_i with q_i the slice vectors of
chevalley.py.  The v_i are a complete gauge invariant; everything else
here (pole bounds, residue class) is read off them.
"""

from __future__ import annotations

from fractions import Fraction

from .chevalley import SimpleAlgebra, build_algebra
from .connection import (
    FormalConnection,
    GaugeElement,
    form_add,
    scalar_form_ad_matrix,
)
from .errors import NotAnOperError, PrecisionError, UnsupportedConnectionError
from .linalg import charpoly, inverse
from .scalars import QQ, join_towers
from .series import LaurentSeries

ZERO = Fraction(0)
ONE = Fraction(1)


class OperForm:
    """p_{-1} + sum v_i q_i, one coefficient series per exponent slot."""

    def __init__(self, algebra: SimpleAlgebra, coefficients, variable="t"):
        self.algebra = algebra
        self.coefficients = list(coefficients)
        self.variable = variable
        if len(self.coefficients) != algebra.rank:
            raise ValueError("one coefficient per exponent")

    def __repr__(self):
        return f"OperForm({self.algebra.name}, d/d{self.variable})"

    def slots(self):
        """(exponent, coefficient series) pairs, lowest exponent first."""
        return [
            (d, s)
            for (d, _), s in zip(
                self.algebra.principal.slice_vectors, self.coefficients
            )
        ]

    def connection(self) -> FormalConnection:
        alg = self.algebra
        form = {
            k: LaurentSeries.rational_constant(c)
            for k, c in alg.principal.p_minus.items()
        }
        for (_, vec), s in zip(alg.principal.slice_vectors, self.coefficients):
            if s.is_exact_zero():
                continue
            part = {k: s.scale(c) for k, c in vec.items()}
            form = form_add(form, part)
        return FormalConnection(
            variable=self.variable, algebra=alg, form=form
        )

    def pole_profile(self):
        """-ord(v_i) per slot; None for an exact zero coefficient."""
        out = []
        for _, s in self.slots():
            o = s.order()
            if o is None and not s.is_exact():
                raise PrecisionError(
                    "a canonical coefficient vanishes to working precision"
                )
            out.append(None if o is None else -o)
        return out

    def slope(self) -> Fraction:
        """max(0, (n_i - d_i)/d_i) over slots, n_i the pole order of v_i.

        This is the weighted-homogeneous reading of the canonical form;
        tests cross-check it against the Newton polygon of the assembled
        matrix.
        """
        best = Fraction(0)
        for (e, _), n in zip(
            self.algebra.principal.slice_vectors, self.pole_profile()
        ):
            if n is None:
                continue
            d = e + 1
            cand = Fraction(n - d, d)
            if cand > best:
                best = cand
        return best


def _graded_solver(alg: SimpleAlgebra, d: int):
    """Invertible column block [slice vectors at d | ad(p_-1) of degree d+1].

    Caches, per algebra and degree, the data needed to split a degree-d
    component into its slice part and its cleared part.
    """
    cache = getattr(alg, "_oper_solver_cache", None)
    if cache is None:
        cache = alg._oper_solver_cache = {}
    got = cache.get(d)
    if got is not None:
        return got
    dst = alg.graded_keys(d)
    src = alg.graded_keys(d + 1)
    slices = [
        vec for (e, vec) in alg.principal.slice_vectors if e == d
    ]
    dst_index = {k: i for i, k in enumerate(dst)}
    cols = []
    for vec in slices:
        col = [ZERO] * len(dst)
        for k, c in vec.items():
            col[dst_index[k]] = c
        cols.append(col)
    for k in src:
        img = alg.bracket(alg.principal.p_minus, {k: ONE})
        col = [ZERO] * len(dst)
        for kk, c in img.items():
            col[dst_index[kk]] = c
        cols.append(col)
    mat = [[cols[j][i] for j in range(len(cols))] for i in range(len(dst))]
    assert len(cols) == len(dst)
    got = (dst, src, len(slices), inverse(QQ, mat))
    cache[d] = got
    return got


def canonicalize(conn: FormalConnection):
    """(OperForm, GaugeElement) with gauge * conn = canonical form.

    Raises NotAnOperError when the connection has components below
    degree -1 or a degenerate p_{-1}-part.
    """
    if not conn.structured:
        raise UnsupportedConnectionError(
            "canonicalization needs the algebra-valued form"
        )
    alg = conn.algebra
    rank = alg.rank
    form = conn.form
    for k, s in form.items():
        if alg.degree(k) < -1 and not s.is_exact_zero():
            raise NotAnOperError(
                f"component {k} has degree {alg.degree(k)} < -1"
            )

    # aligned with the coweight coordinates: slot i is -alpha_i
    simple_neg = [
        ("e", tuple(-1 if j == i else 0 for j in range(rank)))
        for i in range(rank)
    ]
    orders = []
    for k in simple_neg:
        s = form.get(k)
        if s is None or s.is_exact_zero():
            raise NotAnOperError(f"vanishing coefficient on {k}")
        o = s.order()
        if o is None:
            raise PrecisionError(
                f"coefficient on {k} vanishes to working precision"
            )
        if o.denominator != 1:
            raise NotAnOperError("ramified p_{-1}-part")
        orders.append(int(o))

    gauges = []

    # (i) shift each psi_i to a unit.  <-alpha_i, mu> = -mu_i, so the
    # coweight is exactly the vector of orders.
    mu = tuple(orders)
    if any(mu):
        g = GaugeElement.cocharacter(alg, mu)
        form = g.apply_to_form(form)
        gauges.append(g)

    # (ii) divide each psi_i down to 1
    factors = [form[k] for k in simple_neg]
    if any(f != LaurentSeries.one(f.tower) for f in factors):
        g = GaugeElement.torus_series(alg, factors)
        form = g.apply_to_form(form)
        gauges.append(g)

    # (iii) clear non-slice parts in increasing degree
    h = alg.rs.coxeter_number
    for d in range(0, h - 1):
        dst, src, n_slice, solver = _graded_solver(alg, d)
        b = [form.get(k) for k in dst]
        if all(s is None or s.is_exact_zero() for s in b):
            continue
        tower = QQ
        for s in b:
            if s is not None:
                tower = join_towers(tower, s.tower)
        zero = LaurentSeries.zero(tower)
        b = [zero if s is None else s for s in b]
        xi = []
        for j in range(n_slice, len(dst)):
            row = solver[j]
            acc = zero
            for c, s in zip(row, b):
                if c:
                    acc = acc + s.scale(c)
            xi.append(acc)
        if all(s.is_exact_zero() for s in xi):
            continue
        x = {k: s for k, s in zip(src, xi) if not s.is_exact_zero()}
        g = GaugeElement.exponential(alg, x)
        form = g.apply_to_form(form)
        gauges.append(g)

    # read off the slice coefficients, checking nothing else survives
    coeffs = []
    for e, vec in alg.principal.slice_vectors:
        dst, src, n_slice, solver = _graded_solver(alg, e)
        slot = [
            vec2 for (e2, vec2) in alg.principal.slice_vectors if e2 == e
        ].index(vec)
        b = [form.get(k, LaurentSeries.zero(QQ)) for k in dst]
        acc = LaurentSeries.zero(QQ)
        for c, s in zip(solver[slot], b):
            if c:
                acc = acc + s.scale(c)
        coeffs.append(acc)
    for k, s in form.items():
        d = alg.degree(k)
        if d == -1 or s.is_exact_zero():
            continue
        if d < 0:
            raise NotAnOperError(f"negative component {k} after reduction")
    oper = OperForm(alg, coeffs, variable=conn.variable)
    if not gauges:
        gauge = GaugeElement.cocharacter(alg, (0,) * rank)
    elif len(gauges) == 1:
        gauge = gauges[0]
    else:
        # product applies its rightmost factor first
        gauge = GaugeElement.product(list(reversed(gauges)))
    return oper, gauge


# ---- regular-singular opers and their residue class -------------------


def rs_pole_bounds(alg: SimpleAlgebra):
    """Slot-by-slot maximal pole orders d_i for a regular singularity."""
    return [e + 1 for e, _ in alg.principal.slice_vectors]


def oper_is_regular_singular(oper: OperForm) -> bool:
    """ord v_i >= -d_i for every slot, certified at working precision."""
    for (e, _), s in zip(oper.algebra.principal.slice_vectors,
                         oper.coefficients):
        bound = s.valuation_bound()
        if bound is None:
            continue
        if bound >= -(e + 1):
            continue
        if s.order() is not None:
            return False
        raise PrecisionError(
            "cannot certify the pole bound at working precision"
        )
    return True


def residue_normal_element(oper: OperForm):
    """(tower, elem): residue of the oper after the rho-check twist.

    Gauging by v^{rho_check} turns the canonical form into a first-order
    pole whose residue is p_{-1} - rho_check + sum_i v_i[-d_i] q_i; its
    conjugacy class is the standard residue invariant of a regular
    singular oper.
    """
    if not oper_is_regular_singular(oper):
        raise NotAnOperError("residue class needs a regular singular oper")
    alg = oper.algebra
    tower = QQ
    for s in oper.coefficients:
        tower = join_towers(tower, s.tower)
    elem = {}

    def put(k, rep):
        cur = elem.get(k, tower.zero())
        val = tower.add(cur, rep)
        if tower.is_zero(val):
            elem.pop(k, None)
        else:
            elem[k] = val

    for k, c in alg.principal.p_minus.items():
        put(k, tower.from_rational(c))
    for i, m in enumerate(alg.principal.marks):
        put(("h", i), tower.from_rational(Fraction(-m, 2)))
    for (e, vec), s in zip(alg.principal.slice_vectors, oper.coefficients):
        c = s.with_tower(tower).coefficient(Fraction(-(e + 1)))
        if tower.is_zero(c):
            continue
        for k, q in vec.items():
            put(k, tower.scale(c, q))
    return tower, elem


def adjoint_class_polynomial(alg: SimpleAlgebra, tower, elem):
    """char(ad elem): ascending coefficients; a complete class invariant
    for the semisimple-or-nilpotent residues compared here."""
    return charpoly(tower, scalar_form_ad_matrix(alg, tower, elem))


def cartan_class_polynomial(alg: SimpleAlgebra, mu):
    """char(ad mu) for mu = sum mu_i H_i given by rational coordinates."""
    mu = [Fraction(x) for x in mu]
    vals = []
    for b in alg.rs.positive_roots:
        v = sum(mu[i] * alg.rs.pairing(b, i) for i in range(alg.rank))
        vals.extend([v, -v])
    poly = [ONE]
    for v in vals:
        poly = [ZERO] + poly
        for i in range(len(poly) - 1):
            poly[i] -= v * poly[i + 1]
    return [ZERO] * alg.rank + poly


def residue_class_is_nilpotent(oper: OperForm) -> bool:
    tower, elem = residue_normal_element(oper)
    poly = adjoint_class_polynomial(oper.algebra, tower, elem)
    return all(tower.is_zero(c) for c in poly[:-1])


def residue_class_matches_cartan(oper: OperForm, mu) -> bool:
    alg = oper.algebra
    tower, elem = residue_normal_element(oper)
    got = adjoint_class_polynomial(alg, tower, elem)
    want = cartan_class_polynomial(alg, mu)
    return all(
        tower.eq(g, tower.from_rational(w)) for g, w in zip(got, want)
    )

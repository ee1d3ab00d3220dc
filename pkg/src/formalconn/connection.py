"""Formal meromorphic connections d/dv + A(v) and gauge transformations.

A connection is stored either as a bare matrix of Laurent series or, when
it comes from a Lie algebra, as an algebra-valued form: a dict mapping
Chevalley basis keys to series.  The structured representation is primary;
matrices in any available representation are derived from it on demand.

Gauge elements are kept in factored, group-structured form (cocharacter
powers, exponentials of nilpotent elements, torus-valued unit series, and
products of these) so both the form-level adjoint action and concrete
matrix realizations stay exact.
"""

from __future__ import annotations

from fractions import Fraction

from .chevalley import SimpleAlgebra, build_algebra
from .errors import UnsupportedConnectionError
from .linalg import rank as mat_rank
from .scalars import QQ, Scalar, join_towers
from .series import LaurentSeries, SeriesRing

ZERO = Fraction(0)


def _as_series(value, tower=None):
    if isinstance(value, LaurentSeries):
        return value
    if isinstance(value, Scalar):
        return LaurentSeries.from_terms(value.tower, [(0, value.rep)])
    t = tower if tower is not None else QQ
    return LaurentSeries.rational_constant(Fraction(value), t)


def form_add(x: dict, y: dict) -> dict:
    out = dict(x)
    for k, s in y.items():
        cur = out.get(k)
        out[k] = s if cur is None else cur + s
    return {k: s for k, s in out.items() if not s.is_exact_zero()}


def form_neg(x: dict) -> dict:
    return {k: -s for k, s in x.items()}


def form_scale(x: dict, q) -> dict:
    return {k: s.scale(q) for k, s in x.items()}


def form_bracket(alg: SimpleAlgebra, x: dict, y: dict) -> dict:
    out: dict = {}
    for k1, s1 in x.items():
        for k2, s2 in y.items():
            pairs = alg.pair_brackets(k1, k2)
            if not pairs:
                continue
            prod = s1 * s2
            for k, c in pairs:
                term = prod.scale(c)
                cur = out.get(k)
                out[k] = term if cur is None else cur + term
    return {k: s for k, s in out.items() if not s.is_exact_zero()}


def form_derivative(x: dict) -> dict:
    out = {k: s.derivative() for k, s in x.items()}
    return {k: s for k, s in out.items() if not s.is_exact_zero()}


def form_to_matrix(alg: SimpleAlgebra, rep, form: dict, tower=None):
    """Matrix of Laurent series realizing the form in the given representation."""
    n = rep.dim
    if tower is None:
        tower = QQ
        for s in form.values():
            tower = join_towers(tower, s.tower)
    ring = SeriesRing(tower)
    out = [[ring.zero() for _ in range(n)] for _ in range(n)]
    for k, s in form.items():
        m = rep.mats[k]
        for i in range(n):
            for j in range(n):
                if m[i][j]:
                    out[i][j] = out[i][j] + s.scale(m[i][j])
    return out


def scalar_form_ad_matrix(alg: SimpleAlgebra, tower, elem: dict):
    """ad(elem) over a tower, elem mapping keys to tower reps."""
    n = alg.dim
    mat = [[tower.zero()] * n for _ in range(n)]
    for j, k2 in enumerate(alg.keys):
        for k1, v in elem.items():
            for k, c in alg.pair_brackets(k1, (k2)):
                i = alg.key_index[k]
                mat[i][j] = tower.add(mat[i][j], tower.scale(v, c))
    return mat


def scalar_form_rep_matrix(alg: SimpleAlgebra, rep, tower, elem: dict):
    n = rep.dim
    mat = [[tower.zero()] * n for _ in range(n)]
    for k, v in elem.items():
        m = rep.mats[k]
        for i in range(n):
            for j in range(n):
                if m[i][j]:
                    mat[i][j] = tower.add(
                        mat[i][j], tower.scale(v, m[i][j])
                    )
    return mat


# ---- gauge elements ---------------------------------------------------


class GaugeElement:
    """A group element acting on connections by A |-> gAg^-1 - g'g^-1.

    kinds:
      cocharacter  v^mu for an integral coweight mu (coordinates in the
                   fundamental-coweight basis)
      exponential  exp(X) with X supported on root vectors of a single
                   sign, so ad(X) is structurally nilpotent
      torus        product of phi_j(a_j(v)) over the fundamental
                   coweights, each a_j a unit series
      product      composition; the rightmost factor acts first
    """

    def __init__(self, algebra: SimpleAlgebra, kind: str, payload):
        self.algebra = algebra
        self.kind = kind
        self.payload = payload

    @classmethod
    def cocharacter(cls, algebra, mu):
        mu = tuple(int(m) for m in mu)
        if len(mu) != algebra.rank:
            raise ValueError("coweight length must equal the rank")
        return cls(algebra, "cocharacter", mu)

    @classmethod
    def exponential(cls, algebra, elem):
        clean = {}
        signs = set()
        for k, v in elem.items():
            if k[0] != "e":
                raise ValueError("exponential gauges take root-vector support")
            s = _as_series(v)
            if s.is_exact_zero():
                continue
            signs.add(1 if sum(k[1]) > 0 else -1)
            clean[k] = s
        if len(signs) > 1:
            raise ValueError("root-vector support must have a single sign")
        return cls(algebra, "exponential", clean)

    @classmethod
    def torus_series(cls, algebra, factors):
        factors = [f if isinstance(f, LaurentSeries) else _as_series(f) for f in factors]
        if len(factors) != algebra.rank:
            raise ValueError("one unit series per fundamental coweight")
        for f in factors:
            if f.order() != 0:
                raise ValueError("torus gauge factors must be unit series")
        return cls(algebra, "torus", list(factors))

    @classmethod
    def product(cls, gauges):
        gauges = list(gauges)
        flat = []
        for g in gauges:
            if g.kind == "product":
                flat.extend(g.payload)
            else:
                flat.append(g)
        if not flat:
            raise ValueError("empty gauge product")
        return cls(flat[0].algebra, "product", flat)

    def __repr__(self):
        return f"GaugeElement({self.algebra.name}, {self.kind})"

    def inverse(self) -> "GaugeElement":
        if self.kind == "cocharacter":
            return GaugeElement.cocharacter(
                self.algebra, tuple(-m for m in self.payload)
            )
        if self.kind == "exponential":
            return GaugeElement(
                self.algebra, "exponential", {k: -s for k, s in self.payload.items()}
            )
        if self.kind == "torus":
            return GaugeElement(
                self.algebra, "torus", [f.invert() for f in self.payload]
            )
        return GaugeElement(
            self.algebra, "product", [g.inverse() for g in reversed(self.payload)]
        )

    # -- adjoint action on forms ---------------------------------------

    def _coweight_rows(self):
        return self.algebra.coweight_rows()

    def apply_to_form(self, form: dict) -> dict:
        if self.kind == "product":
            for g in reversed(self.payload):
                form = g.apply_to_form(form)
            return form
        if self.kind == "cocharacter":
            return self._cocharacter_action(form)
        if self.kind == "exponential":
            return self._exponential_action(form)
        return self._torus_action(form)

    def _cocharacter_action(self, form):
        mu = self.payload
        out = {}
        for k, s in form.items():
            if k[0] == "e":
                n = sum(m * b for m, b in zip(mu, k[1]))
                s = s.shift(n) if n else s
            if not s.is_exact_zero():
                out[k] = s
        rows = self._coweight_rows()
        vinv = LaurentSeries.monomial(-1)
        for i in range(self.algebra.rank):
            c = sum((mu[j] * rows[j][i] for j in range(len(mu))), ZERO)
            if c:
                key = ("h", i)
                term = vinv.scale(-c)
                cur = out.get(key)
                out[key] = term if cur is None else cur + term
        return {k: s for k, s in out.items() if not s.is_exact_zero()}

    def _exponential_action(self, form):
        alg = self.algebra
        x = self.payload
        cap = 4 * alg.rs.coxeter_number + 4
        acc = dict(form)
        term = form
        k = 0
        while term:
            k += 1
            if k > cap:
                raise RuntimeError("exponential gauge failed to terminate")
            term = form_scale(form_bracket(alg, x, term), Fraction(1, k))
            acc = form_add(acc, term)
        xp = form_derivative(x)
        dterm = xp
        dacc = dict(xp)
        k = 0
        while dterm:
            k += 1
            if k > cap:
                raise RuntimeError("exponential gauge failed to terminate")
            dterm = form_scale(form_bracket(alg, x, dterm), Fraction(1, k + 1))
            dacc = form_add(dacc, dterm)
        return form_add(acc, form_neg(dacc))

    def _torus_action(self, form):
        factors = self.payload
        inv = [f.invert() for f in factors]
        out = {}
        for k, s in form.items():
            if k[0] == "e":
                for j, b in enumerate(k[1]):
                    if b > 0:
                        s = s * factors[j] ** b
                    elif b < 0:
                        s = s * inv[j] ** (-b)
            if not s.is_exact_zero():
                out[k] = s
        rows = self._coweight_rows()
        for j, f in enumerate(factors):
            u = f.derivative() * inv[j]
            if u.is_exact_zero():
                continue
            for i in range(self.algebra.rank):
                c = rows[j][i]
                if c:
                    key = ("h", i)
                    term = u.scale(-c)
                    cur = out.get(key)
                    out[key] = term if cur is None else cur + term
        return {k: s for k, s in out.items() if not s.is_exact_zero()}

    # -- concrete matrices ---------------------------------------------

    def matrix_triple(self, rep):
        """(G, G^{-1}, G') as matrices of Laurent series."""
        if self.kind == "product":
            g0 = self.payload[0]
            g, gi, gp = g0.matrix_triple(rep)
            ring = SeriesRing(QQ)
            from .linalg import mat_add, mat_mul

            for other in self.payload[1:]:
                h, hi, hp = other.matrix_triple(rep)
                gp = mat_add(ring, mat_mul(ring, gp, h), mat_mul(ring, g, hp))
                g = mat_mul(ring, g, h)
                gi = mat_mul(ring, hi, gi)
            return g, gi, gp
        if self.kind == "cocharacter":
            return self._cocharacter_matrices(rep)
        if self.kind == "exponential":
            return self._exponential_matrices(rep)
        return self._torus_matrices(rep)

    def _basis_pairings(self, rep):
        """<weight_k, coweight_j> for each rep basis vector k.

        Fractional values are legitimate: adjoint-group cocharacters act
        on a non-adjoint representation through a ramified cover.  The
        gauged connection itself always lands back in integer powers.
        """
        rows = self._coweight_rows()
        out = []
        for wt in rep.weights():
            out.append(
                tuple(
                    sum(rows[j][i] * wt[i] for i in range(len(wt)))
                    for j in range(self.algebra.rank)
                )
            )
        return out

    def _cocharacter_matrices(self, rep):
        mu = self.payload
        pairs = self._basis_pairings(rep)
        n = rep.dim
        zero = LaurentSeries.zero(QQ)
        g = [[zero] * n for _ in range(n)]
        gi = [[zero] * n for _ in range(n)]
        gp = [[zero] * n for _ in range(n)]
        for k in range(n):
            e = sum(m * p for m, p in zip(mu, pairs[k]))
            g[k][k] = LaurentSeries.monomial(e)
            gi[k][k] = LaurentSeries.monomial(-e)
            gp[k][k] = g[k][k].derivative()
        return g, gi, gp

    def _exponential_matrices(self, rep):
        tower = QQ
        for s in self.payload.values():
            tower = join_towers(tower, s.tower)
        ring = SeriesRing(tower)
        from .linalg import identity, is_zero_matrix, mat_mul

        def expm(mat):
            n = len(mat)
            acc = identity(ring, n)
            term = identity(ring, n)
            for k in range(1, n + 1):
                term = mat_mul(ring, term, mat)
                if is_zero_matrix(ring, term):
                    break
                term = [[x.scale(Fraction(1, k)) for x in row] for row in term]
                from .linalg import mat_add

                acc = mat_add(ring, acc, term)
            return acc

        m = form_to_matrix(self.algebra, rep, self.payload, tower)
        g = expm(m)
        gi = expm([[-x for x in row] for row in m])
        gp = [[x.derivative() for x in row] for row in g]
        return g, gi, gp

    def _torus_matrices(self, rep):
        factors = self.payload
        inv = [f.invert() for f in factors]
        pairs = self._basis_pairings(rep)
        n = rep.dim
        zero = LaurentSeries.zero(QQ)
        g = [[zero] * n for _ in range(n)]
        gi = [[zero] * n for _ in range(n)]
        gp = [[zero] * n for _ in range(n)]
        for k in range(n):
            entry = LaurentSeries.one(QQ)
            entry_inv = LaurentSeries.one(QQ)
            for j, c in enumerate(pairs[k]):
                if c.denominator != 1:
                    raise UnsupportedConnectionError(
                        "torus gauge has no single-valued matrix in this "
                        "representation; use the adjoint"
                    )
                c = int(c)
                if c > 0:
                    entry = entry * factors[j] ** c
                    entry_inv = entry_inv * inv[j] ** c
                elif c < 0:
                    entry = entry * inv[j] ** (-c)
                    entry_inv = entry_inv * factors[j] ** (-c)
            g[k][k] = entry
            gi[k][k] = entry_inv
            gp[k][k] = entry.derivative()
        return g, gi, gp


# ---- connections ------------------------------------------------------


class FormalConnection:
    """d/dv + A(v) over the formal punctured disk in the variable v.

    Exactly one of (form + algebra) or matrix is the source of truth;
    matrices in named representations are derived from the form and
    cached.
    """

    def __init__(self, variable="t", algebra=None, form=None, matrix=None):
        if (form is None) == (matrix is None):
            raise ValueError("give either an algebra-valued form or a matrix")
        if form is not None and algebra is None:
            raise ValueError("an algebra-valued form needs its algebra")
        self.variable = variable
        self.algebra = algebra
        self.form = form
        self._matrix = matrix
        self._rep_cache = {}

    def __repr__(self):
        tag = self.algebra.name if self.algebra else "matrix"
        return f"FormalConnection({tag}, d/d{self.variable})"

    @property
    def structured(self) -> bool:
        return self.form is not None

    def matrix(self, rep_which=None):
        if not self.structured:
            return self._matrix
        which = rep_which or default_representation(self.algebra)
        got = self._rep_cache.get(which)
        if got is None:
            rep = self.algebra.representation(which)
            got = form_to_matrix(self.algebra, rep, self.form)
            self._rep_cache[which] = got
        return got

    def gauge(self, g: GaugeElement) -> "FormalConnection":
        if not self.structured:
            raise UnsupportedConnectionError(
                "gauge actions need the algebra-valued form"
            )
        return FormalConnection(
            variable=self.variable,
            algebra=self.algebra,
            form=g.apply_to_form(self.form),
        )

    def order(self):
        """Valuation of A: min over entries of the leading exponent."""
        entries = (
            list(self.form.values()) if self.structured
            else [x for row in self._matrix for x in row]
        )
        best = None
        for s in entries:
            o = s.order()
            if o is not None and (best is None or o < best):
                best = o
        return best

    def pole_order(self):
        o = self.order()
        if o is None:
            return 0
        return max(0, -int(o)) if Fraction(o).denominator == 1 else -o

    def is_regular_singular(self) -> bool:
        return self.pole_order() <= 1

    def truncate(self, order) -> "FormalConnection":
        if self.structured:
            return FormalConnection(
                variable=self.variable,
                algebra=self.algebra,
                form={k: s.truncate(order) for k, s in self.form.items()},
            )
        return FormalConnection(
            variable=self.variable,
            matrix=[[s.truncate(order) for s in row] for row in self._matrix],
        )

    def residue_pair(self):
        """(tower, dict key -> rep): the coefficient of v^{-1} in the form."""
        if not self.structured:
            raise UnsupportedConnectionError("residue needs the form")
        tower = QQ
        for s in self.form.values():
            tower = join_towers(tower, s.tower)
        out = {}
        for k, s in self.form.items():
            c = s.with_tower(tower).coefficient(-1)
            if not tower.is_zero(c):
                out[k] = c
        return tower, out

    def change_to_infinity(self, new_variable="s") -> "FormalConnection":
        """Rewrite in u = 1/v; only exact connections can be moved."""
        if self.structured:
            form = {}
            for k, s in self.form.items():
                f = s.invert_variable().shift(-2).scale(-1)
                if not f.is_exact_zero():
                    form[k] = f
            return FormalConnection(
                variable=new_variable, algebra=self.algebra, form=form
            )
        mat = [
            [s.invert_variable().shift(-2).scale(-1) for s in row]
            for row in self._matrix
        ]
        return FormalConnection(variable=new_variable, matrix=mat)


def default_representation(alg: SimpleAlgebra) -> str:
    return "defining" if alg.rs.letter in "ABCD" else "adjoint"


def frenkel_gross_connection(algebra, lam, at="zero") -> FormalConnection:
    """The rigid connection d + (p_{-1} + lam * v * E_theta) dv / v.

    At the origin the coefficient of dv is p_{-1}/v + lam*E_theta; at
    infinity (u = 1/v) it is -p_{-1}/u - lam*E_theta/u^2, pole order 2.
    """
    if not isinstance(algebra, SimpleAlgebra):
        algebra = build_algebra(algebra)
    lam = lam if isinstance(lam, Scalar) else Scalar.rational(Fraction(lam))
    lam_const = LaurentSeries.from_terms(lam.tower, [(0, lam.rep)])
    p_minus = algebra.principal.p_minus
    theta_key = ("e", algebra.rs.highest_root)
    if at == "zero":
        vinv = LaurentSeries.monomial(-1)
        form = {k: vinv.scale(c) for k, c in p_minus.items()}
        form[theta_key] = lam_const
        return FormalConnection(variable="t", algebra=algebra, form=form)
    if at != "infinity":
        raise ValueError("at must be 'zero' or 'infinity'")
    uinv = LaurentSeries.monomial(-1)
    form = {k: uinv.scale(-c) for k, c in p_minus.items()}
    form[theta_key] = LaurentSeries.monomial(-2).scale(-1) * lam_const
    return FormalConnection(variable="s", algebra=algebra, form=form)


# ---- residue classification ------------------------------------------


def residue_ad_matrix(conn: FormalConnection):
    tower, res = conn.residue_pair()
    return tower, scalar_form_ad_matrix(conn.algebra, tower, res)


def residue_is_nilpotent(conn) -> bool:
    from .linalg import matrix_power_is_zero

    tower, ad = residue_ad_matrix(conn)
    return matrix_power_is_zero(tower, ad)


def residue_is_regular(conn) -> bool:
    """Centralizer of the residue has the minimal dimension (the rank)."""
    tower, ad = residue_ad_matrix(conn)
    return mat_rank(tower, ad) == conn.algebra.dim - conn.algebra.rank


def monodromy_type(conn: FormalConnection) -> dict:
    """Formal monodromy data at a regular singular point.

    With a first-order pole and nilpotent residue R there is no
    resonance, so the connection is equivalent to d + R dv/v and the
    monodromy is exp(-2 pi i R): unipotent, and principal exactly when
    R is a regular nilpotent.
    """
    if not conn.is_regular_singular():
        raise UnsupportedConnectionError(
            f"pole order {conn.pole_order()} at d/d{conn.variable}: "
            "monodromy classification needs a regular singular point"
        )
    nilp = residue_is_nilpotent(conn)
    out = {
        "regular_singular": True,
        "residue_nilpotent": nilp,
        "unipotent": nilp or None,
        "principal_unipotent": None,
    }
    if nilp:
        out["principal_unipotent"] = residue_is_regular(conn)
    return out

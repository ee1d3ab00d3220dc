"""Truncation-aware Laurent series with optional ramified exponents.

A series is a finite sum of terms c * t**e with exact coefficients in one
scalar tower and exponents in (1/ram) * Z, known modulo O(t**trunc).
``trunc is None`` means the series is exact (a Laurent polynomial); this is
how global objects on P^1 minus a few points are stored.

Truncation bookkeeping is honest and pessimistic:

* add:        trunc = min of the operands' truncs,
* mul:        trunc = min(ord(a) + trunc(b), ord(b) + trunc(a)),
* derivative: trunc drops by exactly one, even when the leading term dies.

Internally exponents are stored as integers scaled by ram, so the common
unramified case works on plain ints.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd, lcm

from .errors import PrecisionError
from .scalars import QQ, join_towers, promote

#: default working order used when an inverse of an exact series is requested
#: without an explicit order
DEFAULT_TRUNC = 32


class LaurentSeries:
    __slots__ = ("tower", "ram", "coeffs", "trunc")

    def __init__(self, tower, coeffs, trunc=None, ram=1, _normalized=False):
        """coeffs maps scaled exponents (ints) to nonzero tower reps.

        Callers outside this module should prefer :meth:`from_terms`,
        :meth:`monomial` and friends, which take Fractions.
        """
        self.tower = tower
        self.ram = ram
        self.coeffs = coeffs
        self.trunc = trunc
        if not _normalized:
            self._normalize()

    def _normalize(self):
        t = self.tower
        dead = [k for k, c in self.coeffs.items() if t.is_zero(c)]
        for k in dead:
            del self.coeffs[k]
        if self.trunc is not None:
            for k in [k for k in self.coeffs if k >= self.trunc]:
                del self.coeffs[k]
        if self.ram > 1:
            g = self.ram
            for k in self.coeffs:
                g = gcd(g, k)
            if self.trunc is not None:
                g = gcd(g, self.trunc)
            if g > 1:
                self.coeffs = {k // g: c for k, c in self.coeffs.items()}
                if self.trunc is not None:
                    self.trunc //= g
                self.ram //= g

    # ---- constructors -------------------------------------------------

    @classmethod
    def from_terms(cls, tower, terms, trunc=None):
        """Build from (exponent, coefficient) pairs; exponents are Fractions."""
        exps = [Fraction(e) for e, _ in terms]
        r = 1
        for e in exps:
            r = lcm(r, e.denominator)
        if trunc is not None:
            trunc = Fraction(trunc)
            r = lcm(r, trunc.denominator)
        coeffs = {}
        for e, c in zip(exps, (c for _, c in terms)):
            k = int(e * r)
            if k in coeffs:
                c = tower.add(coeffs[k], c)
            coeffs[k] = c
        return cls(tower, coeffs, None if trunc is None else int(trunc * r), r)

    @classmethod
    def zero(cls, tower=QQ, trunc=None):
        return cls.from_terms(tower, [], trunc)

    @classmethod
    def one(cls, tower=QQ):
        return cls.monomial(0, tower.one(), tower)

    @classmethod
    def monomial(cls, exp, coeff=None, tower=QQ):
        if coeff is None:
            coeff = tower.one()
        return cls.from_terms(tower, [(Fraction(exp), coeff)])

    @classmethod
    def variable(cls, tower=QQ):
        return cls.monomial(1, tower=tower)

    @classmethod
    def rational_constant(cls, q, tower=QQ):
        return cls.from_terms(tower, [(0, tower.from_rational(Fraction(q)))])

    # ---- inspection ---------------------------------------------------

    def is_exact(self):
        return self.trunc is None

    def is_exact_zero(self):
        return self.trunc is None and not self.coeffs

    def terms(self):
        """Sorted (exponent, coefficient) pairs with Fraction exponents."""
        return [
            (Fraction(k, self.ram), self.coeffs[k]) for k in sorted(self.coeffs)
        ]

    def trunc_order(self):
        return None if self.trunc is None else Fraction(self.trunc, self.ram)

    def order(self):
        """Least exponent with a (known) nonzero coefficient, or None.

        None means no nonzero coefficient is visible: the series is exactly
        zero if it is exact, and indistinguishable from zero at the working
        truncation otherwise.
        """
        if not self.coeffs:
            return None
        return Fraction(min(self.coeffs), self.ram)

    def valuation_bound(self):
        """A lower bound for the valuation; None means +infinity (exact 0)."""
        if self.coeffs:
            return Fraction(min(self.coeffs), self.ram)
        return self.trunc_order()

    def coefficient(self, exp):
        """Coefficient of t**exp; PrecisionError if exp is beyond the truncation."""
        exp = Fraction(exp)
        if self.trunc is not None and exp >= self.trunc_order():
            raise PrecisionError(
                f"coefficient at t^{exp} requested but series only known to "
                f"O(t^{self.trunc_order()})"
            )
        k = exp * self.ram
        if k.denominator != 1:
            return self.tower.zero()
        return self.coeffs.get(int(k), self.tower.zero())

    def known_coefficient(self, exp):
        """Like coefficient() but returns 0 instead of raising beyond trunc."""
        k = Fraction(exp) * self.ram
        if k.denominator != 1:
            return self.tower.zero()
        return self.coeffs.get(int(k), self.tower.zero())

    # ---- helpers ------------------------------------------------------

    def _unify(self, other):
        tower = join_towers(self.tower, other.tower)
        r = lcm(self.ram, other.ram)

        def lift(s):
            f = r // s.ram
            coeffs = {k * f: promote(tower, s.tower, c) for k, c in s.coeffs.items()}
            trunc = None if s.trunc is None else s.trunc * f
            return coeffs, trunc

        (ca, ta), (cb, tb) = lift(self), lift(other)
        return tower, r, ca, ta, cb, tb

    def with_tower(self, tower):
        t = join_towers(self.tower, tower)
        coeffs = {k: promote(t, self.tower, c) for k, c in self.coeffs.items()}
        return LaurentSeries(t, coeffs, self.trunc, self.ram, _normalized=True)

    # ---- ring operations ----------------------------------------------

    def __add__(self, other):
        if not isinstance(other, LaurentSeries):
            return NotImplemented
        tower, r, ca, ta, cb, tb = self._unify(other)
        trunc = _min_trunc(ta, tb)
        out = dict(ca)
        for k, c in cb.items():
            if k in out:
                out[k] = tower.add(out[k], c)
            else:
                out[k] = c
        return LaurentSeries(tower, out, trunc, r)

    def __neg__(self):
        coeffs = {k: self.tower.neg(c) for k, c in self.coeffs.items()}
        return LaurentSeries(self.tower, coeffs, self.trunc, self.ram, _normalized=True)

    def __sub__(self, other):
        if not isinstance(other, LaurentSeries):
            return NotImplemented
        return self + (-other)

    def __mul__(self, other):
        if not isinstance(other, LaurentSeries):
            return NotImplemented
        tower, r, ca, ta, cb, tb = self._unify(other)
        va = min(ca) if ca else ta
        vb = min(cb) if cb else tb
        # truncation of the product: min over the finite candidates
        cands = []
        if ta is not None:
            if vb is None:
                pass  # other is exactly 0
            else:
                cands.append(ta + vb)
        if tb is not None:
            if va is None:
                pass
            else:
                cands.append(tb + va)
        if (ta is not None and vb is None) or (tb is not None and va is None):
            # one factor is exactly zero: product is exactly zero
            return LaurentSeries(tower, {}, None, 1, _normalized=True)
        trunc = min(cands) if cands else None
        out = {}
        for i, a in ca.items():
            for j, b in cb.items():
                k = i + j
                if trunc is not None and k >= trunc:
                    continue
                p = tower.mul(a, b)
                if k in out:
                    out[k] = tower.add(out[k], p)
                else:
                    out[k] = p
        return LaurentSeries(tower, out, trunc, r)

    def scale(self, q):
        """Multiply by a plain rational (fast path, no tower join)."""
        q = Fraction(q)
        if q == 0:
            return LaurentSeries(self.tower, {}, self.trunc, self.ram)
        coeffs = {k: self.tower.scale(c, q) for k, c in self.coeffs.items()}
        return LaurentSeries(self.tower, coeffs, self.trunc, self.ram, _normalized=True)

    def scale_rep(self, rep):
        """Multiply by an element of this series' own tower."""
        t = self.tower
        if t.is_zero(rep):
            return LaurentSeries(t, {}, self.trunc, self.ram)
        coeffs = {k: t.mul(c, rep) for k, c in self.coeffs.items()}
        return LaurentSeries(t, coeffs, self.trunc, self.ram)

    def shift(self, exp):
        """Multiply by t**exp."""
        exp = Fraction(exp)
        r = lcm(self.ram, exp.denominator)
        f = r // self.ram
        k0 = int(exp * r)
        coeffs = {k * f + k0: c for k, c in self.coeffs.items()}
        trunc = None if self.trunc is None else self.trunc * f + k0
        return LaurentSeries(self.tower, coeffs, trunc, r)

    def __pow__(self, n):
        if n < 0:
            return self.invert().__pow__(-n)
        out = LaurentSeries.one(self.tower)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base if n > 1 else base
            n >>= 1
        return out

    def derivative(self):
        """d/dt; the truncation order drops by exactly one."""
        t = self.tower
        r = self.ram
        coeffs = {}
        for k, c in self.coeffs.items():
            if k == 0:
                continue
            coeffs[k - r] = t.scale(c, Fraction(k, r))
        trunc = None if self.trunc is None else self.trunc - r
        return LaurentSeries(t, coeffs, trunc, r)

    def invert(self, order=None):
        """Multiplicative inverse g with self * g = 1 modulo t**order.

        order defaults to the honest precision carried by self, or to
        DEFAULT_TRUNC above the valuation for exact non-monomial input.
        The result of inverting an exact monomial is exact.
        """
        if not self.coeffs:
            raise ZeroDivisionError("cannot invert a series with no visible terms")
        t = self.tower
        r = self.ram
        v = min(self.coeffs)
        lead = self.coeffs[v]
        lead_inv = t.inv(lead)
        if len(self.coeffs) == 1 and self.trunc is None and order is None:
            return LaurentSeries(t, {-v: lead_inv}, None, r)
        # phi = self / (lead * t^(v/r)) = 1 + higher terms; if psi*phi = 1
        # mod t^(M/r) then self * result = 1 mod t^(M/r) as well.
        phi = {k - v: t.mul(c, lead_inv) for k, c in self.coeffs.items()}
        if order is not None:
            o = Fraction(order) * r
            n_phi = int(o) if o.denominator == 1 else int(o) + 1
        else:
            n_phi = None
        if self.trunc is not None:
            avail = self.trunc - v  # phi is known mod t^(avail/r)
            n_phi = avail if n_phi is None else min(n_phi, avail)
        elif n_phi is None:
            n_phi = DEFAULT_TRUNC * r
        if n_phi <= 0:
            raise PrecisionError("series carries no usable precision above its valuation")
        # psi * phi = 1 mod t^(n_phi/r), both with integer scaled exponents
        psi = {0: t.one()}
        phi_items = sorted((k, c) for k, c in phi.items() if k > 0)
        for k in range(1, n_phi):
            acc = None
            for j, c in phi_items:
                if j > k:
                    break
                p = psi.get(k - j)
                if p is None:
                    continue
                term = t.mul(c, p)
                acc = term if acc is None else t.add(acc, term)
            if acc is not None and not t.is_zero(acc):
                psi[k] = t.neg(acc)
        out = {k - v: t.mul(c, lead_inv) for k, c in psi.items()}
        return LaurentSeries(t, out, n_phi - v, r)

    # ---- coordinate moves ---------------------------------------------

    def ramified_pullback(self, b):
        """Substitute t = u**b: exponents scale by b, support renormalizes."""
        if b < 1:
            raise ValueError("ramification index must be a positive integer")
        coeffs = {k * b: c for k, c in self.coeffs.items()}
        trunc = None if self.trunc is None else self.trunc * b
        return LaurentSeries(self.tower, coeffs, trunc, self.ram)

    def invert_variable(self):
        """Substitute t = 1/s; only for exact Laurent polynomials."""
        if self.trunc is not None:
            raise PrecisionError(
                "t -> 1/s is only defined for exact Laurent polynomials"
            )
        coeffs = {-k: c for k, c in self.coeffs.items()}
        return LaurentSeries(self.tower, coeffs, None, self.ram)

    def truncate(self, order):
        """Forget terms at or above t**order and cap the truncation there."""
        k = int(Fraction(order) * self.ram)
        trunc = k if self.trunc is None else min(self.trunc, k)
        coeffs = {j: c for j, c in self.coeffs.items() if j < trunc}
        return LaurentSeries(self.tower, coeffs, trunc, self.ram)

    # ---- comparison ---------------------------------------------------

    def __eq__(self, other):
        if not isinstance(other, LaurentSeries):
            return NotImplemented
        tower, r, ca, ta, cb, tb = self._unify(other)
        if ta != tb or set(ca) != set(cb):
            return False
        return all(tower.eq(ca[k], cb[k]) for k in ca)

    def __hash__(self):
        return hash((self.ram, self.trunc, tuple(sorted(self.coeffs))))

    def agrees_with(self, other, order=None):
        """Equality of all terms below min(truncations, order)."""
        tower, r, ca, ta, cb, tb = self._unify(other)
        cut = _min_trunc(ta, tb)
        if order is not None:
            k = int(Fraction(order) * r)
            cut = k if cut is None else min(cut, k)
        for k in set(ca) | set(cb):
            if cut is not None and k >= cut:
                continue
            if not tower.eq(ca.get(k, tower.zero()), cb.get(k, tower.zero())):
                return False
        return True

    def __repr__(self):
        bits = []
        for e, c in self.terms()[:8]:
            q = self.tower.as_rational(c)
            bits.append(f"{q if q is not None else c}*t^{e}")
        if len(self.coeffs) > 8:
            bits.append("...")
        body = " + ".join(bits) if bits else "0"
        tail = "" if self.trunc is None else f" + O(t^{self.trunc_order()})"
        return f"<{body}{tail}>"


def _min_trunc(ta, tb):
    if ta is None:
        return tb
    if tb is None:
        return ta
    return min(ta, tb)


class SeriesRing:
    """Tower-protocol adapter whose elements are LaurentSeries.

    Lets the dense matrix routines in linalg.py (multiplication, trace,
    Faddeev-LeVerrier) run unchanged over series matrices.  is_zero is
    deliberately exact-zero only: a truncated zero still carries
    precision information that must clamp whatever it is added to.
    """

    def __init__(self, tower):
        self.tower = tower

    def zero(self):
        return LaurentSeries.zero(self.tower)

    def one(self):
        return LaurentSeries.one(self.tower)

    def from_rational(self, q):
        return LaurentSeries.rational_constant(q, self.tower)

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def neg(self, a):
        return -a

    def mul(self, a, b):
        return a * b

    def scale(self, a, q):
        return a.scale(q)

    def is_zero(self, a):
        return a.is_exact_zero()

    def eq(self, a, b):
        return a == b

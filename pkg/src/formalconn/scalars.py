"""Exact scalar arithmetic over a small tower of field extensions of Q.

Three tower shapes are supported:

* the rationals themselves (elements are ``fractions.Fraction``),
* a cyclotomic extension Q(zeta_m), elements stored as coefficient vectors
  of length deg Phi_m reduced modulo the m-th cyclotomic polynomial,
* a quadratic extension Q(sqrt(d)) for a non-square rational d, elements
  stored as pairs (a, b) meaning a + b*sqrt(d).

No compositum is formed: mixing two non-rational towers raises
:class:`TowerMismatchError`.  Rationals embed into everything.

The raw element representations (Fraction, tuple of Fractions) are what the
rest of the package works with in hot loops; :class:`Scalar` is a thin
operator-overloading wrapper around a (tower, rep) pair for API use and
serialization.

>>> t = CyclotomicTower(5)
>>> z = t.zeta()
>>> t.eq(t.power(z, 5), t.one())
True
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd, isqrt

from .errors import TowerMismatchError

ZERO = Fraction(0)
ONE = Fraction(1)


def _poly_trim(p):
    while p and p[-1] == 0:
        p.pop()
    return p


def _poly_divmod(num, den):
    """Quotient and remainder of dense Fraction polynomials (ascending)."""
    num = list(num)
    q = [ZERO] * max(0, len(num) - len(den) + 1)
    inv_lead = 1 / Fraction(den[-1])
    for k in range(len(num) - len(den), -1, -1):
        c = num[k + len(den) - 1] * inv_lead
        q[k] = c
        if c:
            for j, d in enumerate(den):
                num[k + j] -= c * d
    return _poly_trim(q), _poly_trim(num)


def cyclotomic_polynomial(m):
    """Coefficients of Phi_m, ascending, as Fractions.

    Computed by dividing x^m - 1 by the product of Phi_d over proper
    divisors d of m.  Exact and fast enough for the conductors that occur
    here (m bounded by a few dozen).
    """
    if m < 1:
        raise ValueError("conductor must be positive")
    num = [-ONE] + [ZERO] * (m - 1) + [ONE]
    for d in range(1, m):
        if m % d == 0:
            num, rem = _poly_divmod(num, cyclotomic_polynomial(d))
            assert not rem
    return num


def rational_square_root(x):
    """Return sqrt(x) as a Fraction if x is a perfect rational square, else None."""
    if x < 0:
        return None
    n, d = x.numerator, x.denominator
    rn, rd = isqrt(n), isqrt(d)
    if rn * rn == n and rd * rd == d:
        return Fraction(rn, rd)
    return None


def _integer_nth_root(n: int, k: int):
    if n < 0:
        return None
    if n in (0, 1):
        return n
    lo, hi = 1, 1 << (n.bit_length() // k + 1)
    while lo < hi:
        mid = (lo + hi + 1) // 2
        if mid**k <= n:
            lo = mid
        else:
            hi = mid - 1
    return lo if lo**k == n else None


def rational_nth_root(x, k):
    """Return the real k-th root of x as a Fraction if it exists, else None."""
    if k <= 0:
        raise ValueError("root index must be positive")
    if x < 0:
        if k % 2 == 0:
            return None
        r = rational_nth_root(-x, k)
        return None if r is None else -r
    rn = _integer_nth_root(x.numerator, k)
    rd = _integer_nth_root(x.denominator, k)
    if rn is None or rd is None:
        return None
    return Fraction(rn, rd)


def squarefree_kernel(x):
    """Largest squarefree integer s with x = s * (rational square), for x != 0.

    Used to pick a canonical radicand for quadratic towers.  Trial division
    is fine: the inputs here are small spectral data, not cryptographic.
    """
    n = x.numerator * x.denominator
    sign = -1 if n < 0 else 1
    n = abs(n)
    s = 1
    p = 2
    while p * p <= n:
        if n % p == 0:
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            if e % 2:
                s *= p
        p += 1 if p == 2 else 2
    return sign * s * n


class Tower:
    """Common interface of the three tower shapes.

    Element representations are plain immutable Python values; all
    arithmetic goes through the tower object so that the rational case can
    stay a bare Fraction with no wrapper overhead.
    """

    tag = None

    def zero(self):
        raise NotImplementedError

    def one(self):
        raise NotImplementedError

    def from_rational(self, q):
        raise NotImplementedError

    def add(self, a, b):
        raise NotImplementedError

    def neg(self, a):
        raise NotImplementedError

    def mul(self, a, b):
        raise NotImplementedError

    def inv(self, a):
        raise NotImplementedError

    def is_zero(self, a):
        raise NotImplementedError

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def eq(self, a, b):
        return self.is_zero(self.sub(a, b))

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def power(self, a, n):
        if n < 0:
            return self.power(self.inv(a), -n)
        out = self.one()
        while n:
            if n & 1:
                out = self.mul(out, a)
            a = self.mul(a, a)
            n >>= 1
        return out

    def scale(self, a, q):
        """Multiply by a plain rational; cheaper than promoting q first."""
        return self.mul(a, self.from_rational(q))

    def as_rational(self, a):
        """Return a as a Fraction if it lies in the prime field, else None."""
        raise NotImplementedError

    def rep_to_json(self, a):
        raise NotImplementedError

    def rep_from_json(self, obj):
        raise NotImplementedError

    def describe(self):
        raise NotImplementedError


class RationalTower(Tower):
    tag = "rational"

    def zero(self):
        return ZERO

    def one(self):
        return ONE

    def from_rational(self, q):
        return Fraction(q)

    def add(self, a, b):
        return a + b

    def neg(self, a):
        return -a

    def mul(self, a, b):
        return a * b

    def inv(self, a):
        return 1 / a

    def is_zero(self, a):
        return a == 0

    def eq(self, a, b):
        return a == b

    def scale(self, a, q):
        return a * q

    def as_rational(self, a):
        return a

    def rep_to_json(self, a):
        return [a.numerator, a.denominator]

    def rep_from_json(self, obj):
        return Fraction(obj[0], obj[1])

    def describe(self):
        return {"kind": "rational"}


QQ = RationalTower()


class CyclotomicTower(Tower):
    """Q(zeta_m) with zeta_m a primitive m-th root of unity.

    The minimal polynomial Phi_m is tracked explicitly; powers of the
    generator beyond the degree are pre-reduced once at construction.
    """

    tag = "cyclotomic"

    def __init__(self, m):
        if m < 2:
            raise ValueError("conductor must be at least 2")
        self.m = m
        phi = cyclotomic_polynomial(m)
        self.minpoly = tuple(phi)
        self.degree = len(phi) - 1
        # reduction[k] = x^(degree+k) mod Phi_m, for products of degree < 2*degree-1
        red = []
        cur = [-c for c in phi[:-1]]  # x^degree
        for _ in range(self.degree - 1):
            red.append(tuple(cur))
            cur = [ZERO] + cur
            top = cur.pop()
            if top:
                for i in range(self.degree):
                    cur[i] -= top * phi[i]
        self.reduction = red

    def zero(self):
        return (ZERO,) * self.degree

    def one(self):
        return (ONE,) + (ZERO,) * (self.degree - 1)

    def zeta(self):
        if self.degree == 1:
            # m = 2: zeta = -1
            return (-ONE,)
        v = [ZERO] * self.degree
        v[1] = ONE
        return tuple(v)

    def from_rational(self, q):
        return (Fraction(q),) + (ZERO,) * (self.degree - 1)

    def add(self, a, b):
        return tuple(x + y for x, y in zip(a, b))

    def neg(self, a):
        return tuple(-x for x in a)

    def mul(self, a, b):
        n = self.degree
        prod = [ZERO] * (2 * n - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    if y:
                        prod[i + j] += x * y
        out = prod[:n]
        for k in range(n, 2 * n - 1):
            c = prod[k]
            if c:
                row = self.reduction[k - n]
                for i in range(n):
                    out[i] += c * row[i]
        return tuple(out)

    def inv(self, a):
        """Inverse via extended gcd of a with Phi_m over Q."""
        if self.is_zero(a):
            raise ZeroDivisionError("inverse of zero in cyclotomic tower")
        # Maintain r = s * a mod Phi_m; classic xgcd on polynomials.
        r0, r1 = list(self.minpoly), _poly_trim(list(a))
        s0, s1 = [], [ONE]
        while len(r1) > 1:
            q, rem = _poly_divmod(r0, r1)
            r0, r1 = r1, rem
            # s_new = s0 - q*s1
            prod = [ZERO] * (len(q) + len(s1) - 1) if q and s1 else []
            for i, x in enumerate(q):
                for j, y in enumerate(s1):
                    prod[i + j] += x * y
            s_new = [ZERO] * max(len(s0), len(prod))
            for i, x in enumerate(s0):
                s_new[i] += x
            for i, x in enumerate(prod):
                s_new[i] -= x
            s0, s1 = s1, _poly_trim(s_new)
        assert r1, "minimal polynomial is irreducible, gcd must be a unit"
        c = 1 / r1[0]
        out = [x * c for x in s1]
        out += [ZERO] * (self.degree - len(out))
        # xgcd can overshoot the degree by multiples of Phi_m in principle;
        # reduce defensively.
        while len(out) > self.degree:
            top = out.pop()
            if top:
                for i in range(self.degree):
                    out[i] -= top * self.minpoly[i]
        return tuple(out)

    def is_zero(self, a):
        return all(x == 0 for x in a)

    def eq(self, a, b):
        return a == b

    def as_rational(self, a):
        if all(x == 0 for x in a[1:]):
            return a[0]
        return None

    def rep_to_json(self, a):
        return [[x.numerator, x.denominator] for x in a]

    def rep_from_json(self, obj):
        return tuple(Fraction(p, q) for p, q in obj)

    def describe(self):
        return {"kind": "cyclotomic", "m": self.m}


class QuadraticTower(Tower):
    """Q(sqrt(d)) for a fixed non-square rational d.

    The radicand is usually the spectral parameter of a connection (so the
    irregular exponents of the rank-one cover live here), but any non-square
    rational is accepted.
    """

    tag = "quadratic"

    def __init__(self, d):
        d = Fraction(d)
        if d == 0 or rational_square_root(d) is not None:
            raise ValueError("radicand must be a non-square rational")
        self.d = d

    def zero(self):
        return (ZERO, ZERO)

    def one(self):
        return (ONE, ZERO)

    def sqrt_param(self):
        return (ZERO, ONE)

    def from_rational(self, q):
        return (Fraction(q), ZERO)

    def add(self, a, b):
        return (a[0] + b[0], a[1] + b[1])

    def neg(self, a):
        return (-a[0], -a[1])

    def mul(self, a, b):
        return (a[0] * b[0] + self.d * a[1] * b[1], a[0] * b[1] + a[1] * b[0])

    def inv(self, a):
        n = a[0] * a[0] - self.d * a[1] * a[1]
        if n == 0:
            # only possible for a = 0 since d is not a square
            raise ZeroDivisionError("inverse of zero in quadratic tower")
        return (a[0] / n, -a[1] / n)

    def is_zero(self, a):
        return a[0] == 0 and a[1] == 0

    def eq(self, a, b):
        return a == b

    def as_rational(self, a):
        return a[0] if a[1] == 0 else None

    def rep_to_json(self, a):
        return [[x.numerator, x.denominator] for x in a]

    def rep_from_json(self, obj):
        return tuple(Fraction(p, q) for p, q in obj)

    def describe(self):
        return {"kind": "quadratic", "d": [self.d.numerator, self.d.denominator]}


def tower_from_description(desc):
    kind = desc.get("kind", "rational")
    if kind == "rational":
        return QQ
    if kind == "cyclotomic":
        return CyclotomicTower(desc["m"])
    if kind == "quadratic":
        return QuadraticTower(Fraction(desc["d"][0], desc["d"][1]))
    raise ValueError(f"unknown tower kind {kind!r}")


def join_towers(t1, t2):
    """Common tower for mixed arithmetic, or raise TowerMismatchError.

    Rationals embed everywhere; two towers of the same shape must agree on
    their defining data.  Anything else would need a compositum, which is
    deliberately out of scope.
    """
    if t1 is t2:
        return t1
    if t1.tag == "rational":
        return t2
    if t2.tag == "rational":
        return t1
    if t1.tag == t2.tag == "cyclotomic" and t1.m == t2.m:
        return t1
    if t1.tag == t2.tag == "quadratic" and t1.d == t2.d:
        return t1
    raise TowerMismatchError(
        f"cannot mix towers {t1.describe()} and {t2.describe()}"
    )


def promote(tower, src_tower, rep):
    """Re-express rep (an element of src_tower) in tower."""
    if src_tower is tower or src_tower.tag == tower.tag:
        return rep
    if src_tower.tag == "rational":
        return tower.from_rational(rep)
    raise TowerMismatchError(
        f"no embedding of {src_tower.describe()} into {tower.describe()}"
    )


class Scalar:
    """Operator-friendly wrapper around a (tower, rep) pair.

    Arithmetic between scalars joins the towers; plain ints and Fractions
    are accepted on either side.
    """

    __slots__ = ("tower", "rep")

    def __init__(self, tower, rep):
        self.tower = tower
        self.rep = rep

    @staticmethod
    def rational(q):
        return Scalar(QQ, Fraction(q))

    @staticmethod
    def _coerce(x):
        if isinstance(x, Scalar):
            return x
        if isinstance(x, (int, Fraction)):
            return Scalar(QQ, Fraction(x))
        return NotImplemented

    def _pair(self, other):
        other = Scalar._coerce(other)
        if other is NotImplemented:
            return None
        t = join_towers(self.tower, other.tower)
        return t, promote(t, self.tower, self.rep), promote(t, other.tower, other.rep)

    def __add__(self, other):
        p = self._pair(other)
        if p is None:
            return NotImplemented
        t, a, b = p
        return Scalar(t, t.add(a, b))

    __radd__ = __add__

    def __sub__(self, other):
        p = self._pair(other)
        if p is None:
            return NotImplemented
        t, a, b = p
        return Scalar(t, t.sub(a, b))

    def __rsub__(self, other):
        p = self._pair(other)
        if p is None:
            return NotImplemented
        t, a, b = p
        return Scalar(t, t.sub(b, a))

    def __mul__(self, other):
        p = self._pair(other)
        if p is None:
            return NotImplemented
        t, a, b = p
        return Scalar(t, t.mul(a, b))

    __rmul__ = __mul__

    def __truediv__(self, other):
        p = self._pair(other)
        if p is None:
            return NotImplemented
        t, a, b = p
        return Scalar(t, t.div(a, b))

    def __rtruediv__(self, other):
        p = self._pair(other)
        if p is None:
            return NotImplemented
        t, a, b = p
        return Scalar(t, t.div(b, a))

    def __neg__(self):
        return Scalar(self.tower, self.tower.neg(self.rep))

    def __pow__(self, n):
        return Scalar(self.tower, self.tower.power(self.rep, n))

    def __eq__(self, other):
        p = self._pair(other)
        if p is None:
            return NotImplemented
        t, a, b = p
        return t.eq(a, b)

    def __hash__(self):
        q = self.tower.as_rational(self.rep)
        if q is not None:
            return hash(q)
        return hash((self.tower.tag, self.rep))

    def is_zero(self):
        return self.tower.is_zero(self.rep)

    def as_rational(self):
        return self.tower.as_rational(self.rep)

    def __repr__(self):
        q = self.as_rational()
        if q is not None:
            return f"Scalar({q})"
        return f"Scalar({self.tower.describe()}, {self.rep})"

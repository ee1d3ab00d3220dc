"""Chevalley bases with explicit integer structure constants.

Basis keys are ("h", i) for the simple coroots and ("e", beta) for root
vectors, with beta a tuple in simple-root coordinates.  Elements are
dicts key -> Fraction.  Structure constants follow the extraspecial-pair
sign convention: N is +(p+1) on each extraspecial pair and everything
else is forced by Jacobi, so [E_b, E_-b] = H_b and N_{-a,-b} = -N_{a,b}
hold on the nose.  Tests check those identities exhaustively per type.
"""

from __future__ import annotations

from fractions import Fraction

from .errors import UnsupportedTypeError
from .linalg import kernel_basis, rref
from .roots import RootSystem, parse_type
from .scalars import QQ

ZERO = Fraction(0)
ONE = Fraction(1)


def _neg(beta):
    return tuple(-x for x in beta)


def _add(beta, gamma):
    return tuple(x + y for x, y in zip(beta, gamma))


def _sub(beta, gamma):
    return tuple(x - y for x, y in zip(beta, gamma))


def _string_depth(rs: RootSystem, alpha, beta) -> int:
    """Largest p with beta - p*alpha a root."""
    p = 0
    probe = _sub(beta, alpha)
    while rs.is_root(probe):
        p += 1
        probe = _sub(probe, alpha)
    return p


def _build_constants(rs: RootSystem):
    """N_{a,b} for ordered pairs of positive roots with a root sum.

    Pairs are filled in increasing height of the sum; a non-extraspecial
    pair is resolved against the extraspecial one through the four-term
    Jacobi identity, with mixed-sign constants folded back onto already
    known pairs via the zero-sum-triple relation.
    """
    pos = rs.positive_roots
    order = rs.root_index
    table: dict[tuple, Fraction] = {}

    def lookup(a, b):
        # both positive, a + b a positive root
        if order[a] < order[b]:
            return table[(a, b)]
        return -table[(b, a)]

    def n_signed(x, y):
        """N_{x,y} for arbitrary roots with x + y != 0."""
        s = _add(x, y)
        if not rs.is_root(s):
            return ZERO
        xpos = sum(x) > 0
        ypos = sum(y) > 0
        if xpos and ypos:
            return lookup(x, y)
        if not xpos and not ypos:
            return -n_signed(_neg(x), _neg(y))
        # mixed signs: rotate the zero-sum triple (x, y, -s) onto a
        # same-sign pair; lengths enter through H_b = 2 b / (b,b)
        z = _neg(s)
        if sum(s) > 0:
            return rs.length_sq(z) / rs.length_sq(x) * n_signed(y, z)
        return rs.length_sq(z) / rs.length_sq(y) * n_signed(z, x)

    for gamma in pos:
        if sum(gamma) < 2:
            continue
        decomps = []
        for a in pos:
            if sum(a) >= sum(gamma):
                break
            b = _sub(gamma, a)
            if b in order and order[a] < order[b]:
                decomps.append((a, b))
        xi, eta = decomps[0]  # minimal first member: the extraspecial pair
        n_extra = Fraction(_string_depth(rs, xi, eta) + 1)
        table[(xi, eta)] = n_extra
        for a, b in decomps[1:]:
            acc = ZERO
            if rs.is_root(_sub(eta, a)):
                acc += (
                    n_signed(eta, _neg(a))
                    * n_signed(xi, _neg(b))
                    / rs.length_sq(_sub(eta, a))
                )
            if rs.is_root(_sub(xi, a)):
                acc += (
                    n_signed(_neg(a), xi)
                    * n_signed(eta, _neg(b))
                    / rs.length_sq(_sub(xi, a))
                )
            val = rs.length_sq(gamma) / n_extra * acc
            assert val.denominator == 1 and val != 0
            table[(a, b)] = val

    return table, n_signed


class SimpleAlgebra:
    """A simple Lie algebra in its Chevalley basis, plus principal data."""

    def __init__(self, name):
        self.rs = RootSystem(name)
        self.table, self._n_signed = _build_constants(self.rs)
        rank = self.rs.rank
        self.keys = [("h", i) for i in range(rank)]
        self.keys += [("e", b) for b in self.rs.positive_roots]
        self.keys += [("e", _neg(b)) for b in self.rs.positive_roots]
        self.key_index = {k: i for i, k in enumerate(self.keys)}
        self.dim = len(self.keys)
        self._pair_cache = {}
        self._reps = {}
        self.principal = _PrincipalData(self)

    def __repr__(self):
        return f"SimpleAlgebra({self.rs.name})"

    @property
    def name(self):
        return self.rs.name

    @property
    def rank(self):
        return self.rs.rank

    def structure_constant(self, x, y) -> Fraction:
        return self._n_signed(x, y)

    def coroot_element(self, beta):
        """H_beta as a dict over the ("h", i) keys."""
        return {
            ("h", i): Fraction(c)
            for i, c in enumerate(self.rs.coroot_coordinates(beta))
            if c
        }

    def pair_brackets(self, k1, k2):
        """[basis k1, basis k2] as a tuple of (key, Fraction)."""
        got = self._pair_cache.get((k1, k2))
        if got is not None:
            return got
        out = ()
        if k1[0] == "h" and k2[0] == "e":
            c = self.rs.pairing(k2[1], k1[1])
            if c:
                out = ((k2, Fraction(c)),)
        elif k1[0] == "e" and k2[0] == "h":
            c = self.rs.pairing(k1[1], k2[1])
            if c:
                out = ((k1, Fraction(-c)),)
        elif k1[0] == "e" and k2[0] == "e":
            a, b = k1[1], k2[1]
            s = _add(a, b)
            if all(x == 0 for x in s):
                out = tuple(self.coroot_element(a).items())
            elif self.rs.is_root(s):
                out = ((("e", s), self._n_signed(a, b)),)
        self._pair_cache[(k1, k2)] = out
        return out

    def bracket(self, x: dict, y: dict) -> dict:
        out = {}
        for k1, v1 in x.items():
            if not v1:
                continue
            for k2, v2 in y.items():
                if not v2:
                    continue
                for k, c in self.pair_brackets(k1, k2):
                    w = out.get(k, ZERO) + v1 * v2 * c
                    if w:
                        out[k] = w
                    elif k in out:
                        del out[k]
        return out

    def ad_matrix(self, x: dict):
        """Matrix of ad(x) on the Chevalley basis, columns = inputs."""
        n = self.dim
        mat = [[ZERO] * n for _ in range(n)]
        for j, k in enumerate(self.keys):
            img = self.bracket(x, {k: ONE})
            for kk, v in img.items():
                mat[self.key_index[kk]][j] = v
        return mat

    def degree(self, key) -> int:
        """ad(rho_check) degree: 0 on the Cartan, height on root vectors."""
        if key[0] == "h":
            return 0
        return sum(key[1])

    def graded_keys(self, d: int):
        if d == 0:
            return [k for k in self.keys if k[0] == "h"]
        return [k for k in self.keys if k[0] == "e" and sum(k[1]) == d]

    def coweight_rows(self):
        """Row j = fundamental coweight j in the (H_0..H_{rank-1}) basis.

        Characterized by <alpha_k, w_j> = delta_jk, i.e. the rows of the
        inverse Cartan matrix.
        """
        if not hasattr(self, "_coweight_rows"):
            from .linalg import inverse

            c = [
                [Fraction(x) for x in row] for row in self.rs.cartan
            ]
            self._coweight_rows = inverse(QQ, c)
        return self._coweight_rows

    def representation(self, which: str) -> "Representation":
        got = self._reps.get(which)
        if got is None:
            got = _build_representation(self, which)
            self._reps[which] = got
        return got


class _PrincipalData:
    """Principal sl2 (p_-1, 2 rho_check, p_1) and the Kostant slice.

    marks m_i solve 2 rho_check = sum m_i alpha_i^vee; slice vectors are
    ker(ad p_1) inside the positive part, one per exponent, echelonized
    over the root-vector basis so the choice is deterministic.  The top
    slice vector is exactly the highest-root vector.
    """

    def __init__(self, alg: SimpleAlgebra):
        self.algebra = alg
        rs = alg.rs
        self.marks = rs.two_rho_check
        self.p_minus = {
            ("e", _neg(b)): ONE
            for b in rs.positive_roots
            if sum(b) == 1
        }
        self.p_plus = {
            ("e", b): Fraction(self.marks[b.index(1)])
            for b in rs.positive_roots
            if sum(b) == 1
        }
        self.two_rho = {("h", i): Fraction(m) for i, m in enumerate(self.marks)}
        self.rho = {("h", i): Fraction(m, 2) for i, m in enumerate(self.marks)}
        self.highest_root_vector = {("e", rs.highest_root): ONE}
        self.slice_vectors = self._kostant_slice()

    def _kostant_slice(self):
        alg = self.algebra
        out = []
        for d in sorted(set(alg.rs.exponents)):
            src = alg.graded_keys(d)
            dst = alg.graded_keys(d + 1)
            dst_index = {k: i for i, k in enumerate(dst)}
            mat = [[ZERO] * len(src) for _ in dst]
            for j, k in enumerate(src):
                img = alg.bracket(self.p_plus, {k: ONE})
                for kk, v in img.items():
                    mat[dst_index[kk]][j] = v
            if not dst:
                mat = [[ZERO] * len(src)]
            for vec in kernel_basis(QQ, mat):
                elem = {k: c for k, c in zip(src, vec) if c}
                out.append((d, elem))
        out.sort(key=lambda p: p[0])
        assert tuple(d for d, _ in out) == alg.rs.exponents
        return out


def element_in_span(alg, elem, vectors):
    """Coordinates of elem in span(vectors), or None."""
    keys = sorted(
        {k for v in vectors for k in v} | set(elem),
        key=lambda k: alg.key_index[k],
    )
    mat = [[v.get(k, ZERO) for v in vectors] for k in keys]
    rhs = [elem.get(k, ZERO) for k in keys]
    aug = [row + [r] for row, r in zip(mat, rhs)]
    red, pivots = rref(QQ, aug)
    n = len(vectors)
    if any(p >= n for p in pivots):
        return None
    coords = [ZERO] * n
    for r, p in enumerate(pivots):
        coords[p] = red[r][n]
    return coords


# ---- matrix representations ------------------------------------------


class Representation:
    """Concrete matrices for every Chevalley basis vector."""

    def __init__(self, algebra, which, dim, mats):
        self.algebra = algebra
        self.which = which
        self.dim = dim
        self.mats = mats  # key -> Fraction matrix

    def __repr__(self):
        return f"Representation({self.algebra.name}, {self.which}, dim={self.dim})"

    def weights(self):
        """Per basis vector, its values on (H_0, ..., H_{rank-1}).

        Requires the Cartan matrices to be diagonal, which holds for all
        representations constructed here; gauge actions by cocharacters
        and torus-valued series rely on it.
        """
        if not hasattr(self, "_weights"):
            rank = self.algebra.rank
            hs = [self.mats[("h", i)] for i in range(rank)]
            for m in hs:
                assert all(
                    not m[i][j]
                    for i in range(self.dim)
                    for j in range(self.dim)
                    if i != j
                ), "weight basis expected"
            self._weights = [
                tuple(hs[i][k][k] for i in range(rank)) for k in range(self.dim)
            ]
        return self._weights

    def matrix_of(self, elem: dict):
        n = self.dim
        out = [[ZERO] * n for _ in range(n)]
        for k, c in elem.items():
            if not c:
                continue
            m = self.mats[k]
            for i in range(n):
                mi = m[i]
                oi = out[i]
                for j in range(n):
                    if mi[j]:
                        oi[j] += c * mi[j]
        return out


def _build_representation(alg: SimpleAlgebra, which: str) -> Representation:
    if which == "adjoint":
        mats = {k: alg.ad_matrix({k: ONE}) for k in alg.keys}
        return Representation(alg, which, alg.dim, mats)
    if which != "defining":
        raise UnsupportedTypeError(f"unknown representation {which!r}")
    letter, rank = alg.rs.letter, alg.rs.rank
    if letter == "A":
        gens = _sl_generators(rank)
    elif letter == "B":
        gens = _so_odd_generators(rank)
    elif letter == "C":
        gens = _sp_generators(rank)
    elif letter == "D":
        gens = _so_even_generators(rank)
    else:
        raise UnsupportedTypeError(
            f"type {letter}{rank} has no defining representation here; "
            "use the adjoint"
        )
    return _extend_generators(alg, "defining", gens)


def _unit(n, i, j, c=ONE):
    m = [[ZERO] * n for _ in range(n)]
    m[i][j] = Fraction(c)
    return m


def _madd(*ms):
    n = len(ms[0])
    out = [[ZERO] * n for _ in range(n)]
    for m in ms:
        for i in range(n):
            for j in range(n):
                if m[i][j]:
                    out[i][j] += m[i][j]
    return out


def _mneg(m):
    return [[-x for x in row] for row in m]


def _mscale(m, c):
    return [[x * c for x in row] for row in m]


def _commutator(a, b):
    n = len(a)
    out = [[ZERO] * n for _ in range(n)]
    for i in range(n):
        for k in range(n):
            if a[i][k]:
                for j in range(n):
                    if b[k][j]:
                        out[i][j] += a[i][k] * b[k][j]
            if b[i][k]:
                for j in range(n):
                    if a[k][j]:
                        out[i][j] -= b[i][k] * a[k][j]
    return out


def _sl_generators(rank):
    n = rank + 1
    es = [_unit(n, i, i + 1) for i in range(rank)]
    fs = [_unit(n, i + 1, i) for i in range(rank)]
    hs = [
        _madd(_unit(n, i, i), _unit(n, i + 1, i + 1, -1)) for i in range(rank)
    ]
    return es, fs, hs


def _sp_generators(rank):
    # basis u_0..u_{l-1}, w_0..w_{l-1}; block form [[A, B], [C, -A^T]]
    l = rank
    n = 2 * l
    es, fs, hs = [], [], []
    for i in range(l - 1):
        es.append(_madd(_unit(n, i, i + 1), _unit(n, l + i + 1, l + i, -1)))
        fs.append(_madd(_unit(n, i + 1, i), _unit(n, l + i, l + i + 1, -1)))
        hs.append(
            _madd(
                _unit(n, i, i),
                _unit(n, i + 1, i + 1, -1),
                _unit(n, l + i, l + i, -1),
                _unit(n, l + i + 1, l + i + 1),
            )
        )
    es.append(_unit(n, l - 1, 2 * l - 1))
    fs.append(_unit(n, 2 * l - 1, l - 1))
    hs.append(_madd(_unit(n, l - 1, l - 1), _unit(n, 2 * l - 1, 2 * l - 1, -1)))
    return es, fs, hs


def _so_odd_generators(rank):
    # basis u_1..u_l, u_0, u_{-1}..u_{-l}; the form pairs u_i with u_{-i}
    # and is quadratic on u_0, so the short-root triple needs the factor 2
    l = rank
    n = 2 * l + 1

    def idx(label):
        if label > 0:
            return label - 1
        if label == 0:
            return l
        return l - label  # label < 0

    es, fs, hs = [], [], []
    for i in range(1, l):
        es.append(
            _madd(_unit(n, idx(i), idx(i + 1)), _unit(n, idx(-i - 1), idx(-i), -1))
        )
        fs.append(
            _madd(_unit(n, idx(i + 1), idx(i)), _unit(n, idx(-i), idx(-i - 1), -1))
        )
        hs.append(
            _madd(
                _unit(n, idx(i), idx(i)),
                _unit(n, idx(i + 1), idx(i + 1), -1),
                _unit(n, idx(-i - 1), idx(-i - 1)),
                _unit(n, idx(-i), idx(-i), -1),
            )
        )
    es.append(_madd(_unit(n, idx(l), idx(0)), _unit(n, idx(0), idx(-l), -1)))
    fs.append(
        _mscale(_madd(_unit(n, idx(0), idx(l)), _unit(n, idx(-l), idx(0), -1)), 2)
    )
    hs.append(_mscale(_madd(_unit(n, idx(l), idx(l)), _unit(n, idx(-l), idx(-l), -1)), 2))
    return es, fs, hs


def _so_even_generators(rank):
    l = rank
    n = 2 * l

    def idx(label):
        return label - 1 if label > 0 else l - label - 1

    es, fs, hs = [], [], []
    for i in range(1, l):
        es.append(
            _madd(_unit(n, idx(i), idx(i + 1)), _unit(n, idx(-i - 1), idx(-i), -1))
        )
        fs.append(
            _madd(_unit(n, idx(i + 1), idx(i)), _unit(n, idx(-i), idx(-i - 1), -1))
        )
        hs.append(
            _madd(
                _unit(n, idx(i), idx(i)),
                _unit(n, idx(i + 1), idx(i + 1), -1),
                _unit(n, idx(-i - 1), idx(-i - 1)),
                _unit(n, idx(-i), idx(-i), -1),
            )
        )
    es.append(_madd(_unit(n, idx(l - 1), idx(-l)), _unit(n, idx(l), idx(-l + 1), -1)))
    fs.append(_madd(_unit(n, idx(-l), idx(l - 1)), _unit(n, idx(-l + 1), idx(l), -1)))
    hs.append(
        _madd(
            _unit(n, idx(l - 1), idx(l - 1)),
            _unit(n, idx(l), idx(l)),
            _unit(n, idx(-l + 1), idx(-l + 1), -1),
            _unit(n, idx(-l), idx(-l), -1),
        )
    )
    return es, fs, hs


def _extend_generators(alg, which, gens):
    """Extend simple-root matrices to the whole basis via extraspecial pairs."""
    es, fs, hs = gens
    rs = alg.rs
    mats = {}
    for i in range(rs.rank):
        simple = tuple(1 if j == i else 0 for j in range(rs.rank))
        mats[("h", i)] = hs[i]
        mats[("e", simple)] = es[i]
        mats[("e", _neg(simple))] = fs[i]
    for gamma in rs.positive_roots:
        if sum(gamma) < 2:
            continue
        xi = next(
            a
            for a in rs.positive_roots
            if rs.is_root(_sub(gamma, a))
            and rs.root_index[a] < rs.root_index[_sub(gamma, a)]
        )
        eta = _sub(gamma, xi)
        n = alg.structure_constant(xi, eta)
        inv = ONE / n
        mats[("e", gamma)] = _mscale(
            _commutator(mats[("e", xi)], mats[("e", eta)]), inv
        )
        mats[("e", _neg(gamma))] = _mscale(
            _commutator(mats[("e", _neg(xi))], mats[("e", _neg(eta))]), -inv
        )
    return Representation(alg, which, len(es[0]), mats)


_ALGEBRA_CACHE: dict[tuple, SimpleAlgebra] = {}


def build_algebra(name) -> SimpleAlgebra:
    """Cached constructor; algebras are immutable once built."""
    key = parse_type(name)
    got = _ALGEBRA_CACHE.get(key)
    if got is None:
        got = SimpleAlgebra(key)
        _ALGEBRA_CACHE[key] = got
    return got


def is_regular_semisimple(alg: SimpleAlgebra, x: dict) -> bool:
    """Centralizer of minimal dimension and squarefree minimal polynomial.

    Both conditions are read off ad(x) over the rationals; semisimplicity
    over any extension field is equivalent to the squarefree test here
    because we are in characteristic zero.
    """
    from .linalg import is_semisimple_matrix, kernel_basis

    ad = alg.ad_matrix(x)
    if len(kernel_basis(QQ, ad)) != alg.rs.rank:
        return False
    return is_semisimple_matrix(QQ, ad)


def is_principal_nilpotent(alg: SimpleAlgebra, x: dict) -> bool:
    """Nilpotent with centralizer of dimension exactly the rank."""
    from .linalg import kernel_basis, matrix_power_is_zero

    ad = alg.ad_matrix(x)
    if not matrix_power_is_zero(QQ, ad):
        return False
    return len(kernel_basis(QQ, ad)) == alg.rs.rank


def coxeter_matrix(alg: SimpleAlgebra):
    """Product of all simple reflections acting on the Cartan subalgebra.

    The reflection in alpha_i sends H to H - alpha_i(H) H_i; the product
    over i in index order is a Coxeter element, and every choice of order
    gives a conjugate matrix, so the fixed-space dimension below does not
    depend on it.
    """
    from .linalg import identity, mat_mul

    rank = alg.rs.rank
    c = alg.rs.cartan
    w = identity(QQ, rank)
    for i in range(rank):
        refl = [
            [
                Fraction(1 if r == j else 0) - (Fraction(c[j][i]) if r == i else 0)
                for j in range(rank)
            ]
            for r in range(rank)
        ]
        w = mat_mul(QQ, w, refl)
    return w


def coxeter_fixed_space(alg: SimpleAlgebra) -> int:
    """dim ker(w - 1) for a Coxeter element w; zero for every simple type."""
    from .linalg import kernel_basis

    w = coxeter_matrix(alg)
    shifted = [
        [w[r][j] - Fraction(1 if r == j else 0) for j in range(len(w))]
        for r in range(len(w))
    ]
    return len(kernel_basis(QQ, shifted))

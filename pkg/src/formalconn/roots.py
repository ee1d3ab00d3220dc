"""Root systems of the supported simple types, in simple-root coordinates.

A root is a tuple of integers (coordinates in the simple-root basis), so
cocharacter pairings against fundamental coweights are literal coordinate
reads.  Positive roots are generated by the usual root-string closure and
kept in height-then-lexicographic order; that ordering is load-bearing
for the structure-constant construction in chevalley.py, so do not
re-sort them.
"""

from __future__ import annotations

from fractions import Fraction

from .errors import UnsupportedTypeError

# rows are coroots: CARTAN[i][j] = <alpha_j, alpha_i^vee>
_EXPLICIT_CARTAN = {
    ("G", 2): [[2, -3], [-1, 2]],  # alpha_1 short
}

SUPPORTED_TYPES = ("A", "B", "C", "D", "G")


def cartan_matrix(letter: str, rank: int):
    if (letter, rank) in _EXPLICIT_CARTAN:
        return [row[:] for row in _EXPLICIT_CARTAN[(letter, rank)]]
    n = rank
    c = [[2 if i == j else 0 for j in range(n)] for i in range(n)]
    if letter == "A":
        for i in range(n - 1):
            c[i][i + 1] = c[i + 1][i] = -1
    elif letter in ("B", "C"):
        if n < 2:
            raise UnsupportedTypeError(f"{letter}{rank} is not supported")
        for i in range(n - 1):
            c[i][i + 1] = c[i + 1][i] = -1
        if letter == "B":  # last simple root short
            c[n - 1][n - 2] = -2
        else:  # last simple root long
            c[n - 2][n - 1] = -2
    elif letter == "D":
        if n < 3:
            raise UnsupportedTypeError(f"D{rank} is not supported")
        for i in range(n - 2):
            c[i][i + 1] = c[i + 1][i] = -1
        c[n - 3][n - 1] = c[n - 1][n - 3] = -1
    else:
        raise UnsupportedTypeError(f"{letter}{rank} is not supported")
    return c


def parse_type(name) -> tuple[str, int]:
    """Accepts 'G2', ('G', 2), or a RootSystem and returns (letter, rank)."""
    if isinstance(name, RootSystem):
        return name.letter, name.rank
    if isinstance(name, (tuple, list)) and len(name) == 2:
        letter, rank = name
    else:
        s = str(name).strip()
        if len(s) < 2 or not s[1:].isdigit():
            raise UnsupportedTypeError(f"cannot parse type {name!r}")
        letter, rank = s[0], int(s[1:])
    letter = str(letter).upper()
    if letter not in SUPPORTED_TYPES:
        raise UnsupportedTypeError(f"type {letter}{rank} is not supported")
    return letter, int(rank)


class RootSystem:
    """Positive roots, lengths, coroots and the numerology derived from them."""

    def __init__(self, name):
        self.letter, self.rank = parse_type(name)
        self.cartan = cartan_matrix(self.letter, self.rank)
        self._half_lengths = self._compute_half_lengths()
        self.positive_roots = self._generate_positive()
        self.root_index = {b: i for i, b in enumerate(self.positive_roots)}
        self.highest_root = self.positive_roots[-1]
        self.coxeter_number = sum(self.highest_root) + 1
        self.exponents, self.degrees = self._exponents_from_heights()
        # 2*rho_vee in the simple-coroot basis; these are the marks m_i
        # with sum(m_i) = number of positive roots * 2 / ... (checked in tests)
        self.two_rho_check = self._sum_positive_coroots()

    def __repr__(self):
        return f"RootSystem({self.letter}{self.rank})"

    @property
    def name(self) -> str:
        return f"{self.letter}{self.rank}"

    def _compute_half_lengths(self):
        """d_i = (alpha_i, alpha_i)/2, shortest root normalized to 1."""
        n = self.rank
        d = [None] * n
        d[0] = Fraction(1)
        # propagate along the Dynkin diagram: d_j / d_i = c_ij / c_ji
        changed = True
        while changed:
            changed = False
            for i in range(n):
                if d[i] is None:
                    continue
                for j in range(n):
                    if d[j] is None and self.cartan[i][j] != 0:
                        d[j] = d[i] * Fraction(
                            self.cartan[i][j], self.cartan[j][i]
                        )
                        changed = True
        if any(x is None for x in d):
            raise UnsupportedTypeError(
                f"Dynkin diagram of {self.name} is not connected"
            )
        lo = min(d)
        return [x / lo for x in d]

    def pairing(self, beta, i: int) -> int:
        """<beta, alpha_i^vee> for beta in simple-root coordinates."""
        return sum(bj * self.cartan[i][j] for j, bj in enumerate(beta))

    def inner(self, beta, gamma) -> Fraction:
        acc = Fraction(0)
        for i, bi in enumerate(beta):
            if bi:
                for j, gj in enumerate(gamma):
                    if gj:
                        acc += bi * gj * self._half_lengths[i] * self.cartan[i][j]
        return acc

    def length_sq(self, beta) -> Fraction:
        return self.inner(beta, beta)

    def height(self, beta) -> int:
        return sum(beta)

    def is_root(self, beta) -> bool:
        if all(x <= 0 for x in beta):
            beta = tuple(-x for x in beta)
        return tuple(beta) in self.root_index

    def all_roots(self):
        return self.positive_roots + [
            tuple(-x for x in b) for b in self.positive_roots
        ]

    def coroot_coordinates(self, beta):
        """beta^vee in the simple-coroot basis (integer coordinates)."""
        half = self.length_sq(beta) / 2
        out = []
        for i, bi in enumerate(beta):
            c = bi * self._half_lengths[i] / half
            assert c.denominator == 1
            out.append(int(c))
        return tuple(out)

    def _sum_positive_coroots(self):
        tot = [0] * self.rank
        for b in self.positive_roots:
            for i, c in enumerate(self.coroot_coordinates(b)):
                tot[i] += c
        return tuple(tot)

    def coroot_to_coweight(self, coords):
        """Simple-coroot coordinates -> fundamental-coweight coordinates."""
        return tuple(
            sum(coords[i] * self.cartan[i][j] for i in range(self.rank))
            for j in range(self.rank)
        )

    def _generate_positive(self):
        simple = [
            tuple(1 if j == i else 0 for j in range(self.rank))
            for i in range(self.rank)
        ]
        found = set(simple)
        frontier = list(simple)
        while frontier:
            fresh = []
            for beta in frontier:
                for i, alpha in enumerate(simple):
                    # root string: beta + alpha is a root iff
                    # p - <beta, alpha_i^vee> >= 1 with p the depth below
                    p = 0
                    probe = tuple(b - a for b, a in zip(beta, alpha))
                    while probe in found or all(x == 0 for x in probe):
                        p += 1
                        probe = tuple(b - a for b, a in zip(probe, alpha))
                    if p - self.pairing(beta, i) >= 1:
                        cand = tuple(b + a for b, a in zip(beta, alpha))
                        if cand not in found:
                            found.add(cand)
                            fresh.append(cand)
            frontier = fresh
        return sorted(found, key=lambda b: (sum(b), b))

    def _exponents_from_heights(self):
        counts = {}
        for b in self.positive_roots:
            h = sum(b)
            counts[h] = counts.get(h, 0) + 1
        exps = []
        for j in range(1, self.rank + 1):
            exps.append(sum(1 for k in counts.values() if k >= j))
        exps.sort()
        return tuple(exps), tuple(e + 1 for e in exps)

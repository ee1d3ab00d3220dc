import random
from fractions import Fraction

import pytest

from formalconn.chevalley import build_algebra
from formalconn.scalars import QQ
from formalconn.series import LaurentSeries

SMALL_TYPES = ["A1", "A2", "A3", "B2", "C2", "G2"]
ALL_TYPES = SMALL_TYPES + ["D4"]


@pytest.fixture(scope="session", params=ALL_TYPES)
def algebra(request):
    return build_algebra(request.param)


@pytest.fixture(scope="session")
def a1():
    return build_algebra("A1")


@pytest.fixture(scope="session")
def a2():
    return build_algebra("A2")


@pytest.fixture(scope="session")
def b2():
    return build_algebra("B2")


def seeded(seed) -> random.Random:
    return random.Random(seed)


def random_fraction(rng, span=6, nonzero=False):
    while True:
        q = Fraction(rng.randint(-span, span), rng.randint(1, span))
        if q != 0 or not nonzero:
            return q


def random_laurent(rng, tower=QQ, lo=-3, hi=4, nterms=4, trunc=None):
    terms = []
    for _ in range(nterms):
        e = rng.randint(lo, hi)
        terms.append((Fraction(e), tower.from_rational(random_fraction(rng))))
    return LaurentSeries.from_terms(tower, terms, trunc=trunc)

import random
from fractions import Fraction

import pytest

from qbraid.qcomb import QContext, concrete_q, symbolic_q
from qbraid.scalar import QQ, Scalar, integer, q_symbol


@pytest.fixture(scope="session")
def qctx():
    """Symbolic q over Q."""
    return symbolic_q()


@pytest.fixture(scope="session")
def q1ctx():
    """Concrete q = 1 over Q."""
    return concrete_q(integer(1))


@pytest.fixture()
def rng():
    return random.Random(20260808)


def rand_fraction(rng, lo=-9, hi=9, max_den=7, nonzero=False):
    while True:
        f = Fraction(rng.randint(lo, hi), rng.randint(1, max_den))
        if not nonzero or f != 0:
            return f


def rand_scalar(rng, ctx=QQ, nonzero=False):
    return Scalar.of_fraction(rand_fraction(rng, nonzero=nonzero), ctx)


def random_factored_lambda(rng, n, ctx, wide=False):
    """A factored diagonal over Q: lambda_k lambda_(n-k) = c with c a square.

    wide=True samples from a large rational space so the tuple sits in generic
    position (no repeated or opposited entries), which is where the operator
    criteria are equivalences.
    """
    hi, den = (60, 13) if wide else (9, 5)
    t = rand_fraction(rng, 1, hi, den)
    c = t * t
    lam = [None] * (n + 1)
    for k in range(n // 2 + 1):
        if 2 * k == n:
            lam[k] = t if rng.random() < 0.5 else -t
        else:
            v = rand_fraction(rng, -hi if wide else -9, hi, den, nonzero=True)
            lam[k] = v
            lam[n - k] = c / v
    return tuple(Scalar.of_fraction(v, ctx) for v in lam)

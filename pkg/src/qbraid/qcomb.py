"""q-combinatorics: q-integers, q-factorials, q-shifted factorials, Gaussian
polynomials, the q-Pascal triangle, and machine verification of the binomial
identities the braid construction rests on.

Gaussian polynomials are always produced from a cached integer-coefficient
symbolic polynomial (built by exact polynomial division, which is guaranteed to
terminate without remainder); concrete q values, roots of unity included, are
obtained by evaluating that polynomial, never the factorial quotient.  The
suspected reducibility points are exactly the zeros of the quotient's
denominator, so this is what keeps every specialization well defined.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import comb

from fractions import Fraction

from .errors import ZeroQ
from .scalar import (
    FieldContext,
    LaurentPoly,
    RatFunc,
    Scalar,
    is_plain_q,
    laurent_exact_div,
)

_ONE = Fraction(1)


@dataclass(frozen=True)
class QContext:
    """The deformation parameter: a symbolic indeterminate or a concrete nonzero
    field element."""

    q: Scalar

    def __post_init__(self):
        if self.q.is_zero():
            raise ZeroQ("q must be nonzero")

    @property
    def ctx(self):
        return self.q.ctx

    def one(self):
        return Scalar.one(self.q.ctx)

    def zero(self):
        return Scalar.zero(self.q.ctx)


def symbolic_q(order=1):
    from .scalar import q_symbol
    return QContext(q_symbol(order))


def concrete_q(value):
    return QContext(value)


# ---------------------------------------------------------------------------
# Cached symbolic polynomials over Q.
# ---------------------------------------------------------------------------

@lru_cache(maxsize=None)
def _qint_poly(n):
    return LaurentPoly(1, {i: _ONE for i in range(n)})


@lru_cache(maxsize=None)
def _qfact_poly(n):
    p = LaurentPoly.one(1)
    for i in range(1, n + 1):
        p = p * _qint_poly(i)
    return p


@lru_cache(maxsize=None)
def _qbinom_poly(n, k):
    """Gaussian polynomial C_n^k(q) over Q, by factorial quotient with exact
    stepwise division: prod_i (n-k+i)_q / (i)_q."""
    if k < 0 or k > n:
        return LaurentPoly.zero(1)
    p = LaurentPoly.one(1)
    for i in range(1, k + 1):
        p = p * _qint_poly(n - k + i)
        p = laurent_exact_div(p, _qint_poly(i))
    return p


def _eval_poly(p, ctx):
    """Evaluate an integer-coefficient symbolic polynomial at ctx.q."""
    q = ctx.q
    if is_plain_q(q) and q.ctx.order == 1:
        return Scalar(q.ctx, RatFunc.from_laurent(p))
    if p.is_zero():
        return Scalar.zero(q.ctx)
    return Scalar(FieldContext(1, True), RatFunc.from_laurent(p)).substitute(q)


# ---------------------------------------------------------------------------
# Public operations.
# ---------------------------------------------------------------------------

def q_int(n, ctx):
    """(n)_q = 1 + q + ... + q^(n-1); (0)_q = 0."""
    if n < 0:
        raise ValueError("q-integers are defined for n >= 0")
    return _eval_poly(_qint_poly(n), ctx)


def q_factorial(n, ctx):
    """(n)!_q = (1)_q (2)_q ... (n)_q; (0)!_q = 1."""
    if n < 0:
        raise ValueError("q-factorials are defined for n >= 0")
    return _eval_poly(_qfact_poly(n), ctx)


def q_pochhammer(a, n, ctx):
    """(a; q)_n = (1-a)(1-aq)...(1-aq^(n-1)); (a; q)_0 = 1."""
    if n < 0:
        raise ValueError("q-shifted factorials are defined for n >= 0")
    one = ctx.one()
    out = one
    power = one
    for _ in range(n):
        out = out * (one - a * power)
        power = power * ctx.q
    return out


def tri_exponent(j):
    """The triangular exponent j(j-1)/2, defined for every integer j."""
    return j * (j - 1) // 2


def q_tri(j, ctx):
    """q_j = q^(j(j-1)/2) for any integer j (negative indices included)."""
    return ctx.q ** tri_exponent(j)


def q_triangular_power(n, ctx):
    """q_n = q^(n(n-1)/2) for natural n; also validates the exponent identity
    q_r q_(n-r) / q_n = q^(-(n-r)r) for every 0 <= r <= n."""
    if n < 0:
        raise ValueError("defined for n >= 0")
    for r in range(n + 1):
        if tri_exponent(r) + tri_exponent(n - r) - tri_exponent(n) != -(n - r) * r:
            raise AssertionError("triangular exponent identity failed")
    return q_tri(n, ctx)


def q_binomial(n, k, ctx):
    """Gaussian polynomial C_n^k(q); zero outside 0 <= k <= n."""
    if n < 0:
        raise ValueError("defined for n >= 0")
    return _eval_poly(_qbinom_poly(n, k), ctx)


def q_binomial_recursive(n, k, ctx, variant="first"):
    """C_n^k(q) computed purely by one of the two deformed Pascal recursions."""
    if variant not in ("first", "second"):
        raise ValueError("variant must be 'first' or 'second'")
    one, zero = ctx.one(), ctx.zero()
    memo = {}

    def rec(nn, kk):
        if kk < 0 or kk > nn:
            return zero
        if kk == 0 or kk == nn:
            return one
        key = (nn, kk)
        got = memo.get(key)
        if got is not None:
            return got
        if variant == "first":
            val = rec(nn - 1, kk - 1) + ctx.q ** kk * rec(nn - 1, kk)
        else:
            val = ctx.q ** (nn - kk) * rec(nn - 1, kk - 1) + rec(nn - 1, kk)
        memo[key] = val
        return val

    return rec(n, k)


def gauss_expand(k, ctx):
    """Coefficients of (1+x)(1+xq)...(1+xq^(k-1)) as a polynomial in x.

    Coefficient r equals q^(r(r-1)/2) C_k^r(q).
    """
    if k < 0:
        raise ValueError("defined for k >= 0")
    one = ctx.one()
    coeffs = [one]
    power = one
    for _ in range(k):
        nxt = coeffs + [ctx.zero()]
        for r in range(len(nxt) - 1, 0, -1):
            nxt[r] = nxt[r] + power * coeffs[r - 1]
        coeffs = nxt
        power = power * ctx.q
    return coeffs


@dataclass(frozen=True)
class QTriangleRow:
    """One row of the q-Pascal triangle, validated against both recursions."""

    n: int
    entries: tuple

    def __post_init__(self):
        if not (self.entries[0].is_one() and self.entries[self.n].is_one()):
            raise AssertionError("triangle row must start and end with 1")


def triangle_row(n, ctx):
    row = tuple(q_binomial(n, k, ctx) for k in range(n + 1))
    if n >= 1:
        prev = [q_binomial(n - 1, k, ctx) for k in range(n)]
        for k in range(1, n):
            first = prev[k - 1] + ctx.q ** k * prev[k]
            second = ctx.q ** (n - k) * prev[k - 1] + prev[k]
            if row[k] != first or row[k] != second:
                raise AssertionError("triangle row fails a Pascal recursion")
    return QTriangleRow(n, row)


# ---------------------------------------------------------------------------
# Identity verification.
# ---------------------------------------------------------------------------

IDENTITY_NAMES = ("bin1q", "bin2q", "qsymmetry", "bin1", "bin2")


@dataclass
class IdentityReport:
    identity: str
    n: int
    passed: bool
    checked: int
    first_failure: dict | None

    def to_payload(self):
        out = {"identity": self.identity, "n": self.n, "passed": self.passed,
               "checked": self.checked}
        if self.first_failure is not None:
            out["first_failure"] = self.first_failure
        return out


def verify_identity(identity, n, ctx):
    """Check one identity over its full index range at the given q.

    bin1q: sum_i C_m^i(q) (-1)^(i+j) q_(i-j) C_i^j(q) = delta_mj, both orderings.
    bin2q: sum_r C_(n-k)^(n-r)(q) (q_r q_(n-r)/q_n) (-1)^(n-r) q^-1_(r-m)
           C_r^m(q^-1) = (q_(k-(n-m))/q_k) C_k^(n-m)(q).
    qsymmetry: C_n^k(q) = (q_n/(q_k q_(n-k))) C_n^k(q^-1).
    bin1/bin2: the classical q=1 specializations over the integers.
    """
    if identity not in IDENTITY_NAMES:
        raise ValueError(f"unknown identity {identity!r}")
    checked = 0
    one = ctx.one()
    qinv_ctx = QContext(ctx.q.inverse()) if identity in ("bin2q", "qsymmetry") else None

    def fail(**kw):
        return IdentityReport(identity, n, False, checked, kw)

    if identity == "bin1q":
        for m in range(n + 1):
            for j in range(n + 1):
                first = ctx.zero()
                second = ctx.zero()
                for i in range(n + 1):
                    cmi = q_binomial(m, i, ctx)
                    cij = q_binomial(i, j, ctx)
                    if cmi.is_zero() or cij.is_zero():
                        continue
                    prod = cmi * cij
                    term = q_tri(i - j, ctx) * prod
                    first = first - term if (i + j) % 2 else first + term
                    term = q_tri(m - i, ctx) * prod
                    second = second - term if (i + m) % 2 else second + term
                expected = one if m == j else ctx.zero()
                checked += 1
                if first != expected or second != expected:
                    return fail(m=m, j=j, first=str(first), second=str(second),
                                expected=str(expected))
    elif identity == "bin2q":
        qn = q_tri(n, ctx)
        for k in range(n + 1):
            for m in range(n + 1):
                lhs = ctx.zero()
                for r in range(n + 1):
                    c1 = q_binomial(n - k, n - r, ctx)
                    c2 = q_binomial(r, m, qinv_ctx)
                    if c1.is_zero() or c2.is_zero():
                        continue
                    term = c1 * (q_tri(r, ctx) * q_tri(n - r, ctx) / qn) \
                        * q_tri(r - m, ctx).inverse() * c2
                    lhs = lhs - term if (n - r) % 2 else lhs + term
                ck = q_binomial(k, n - m, ctx)
                rhs = (q_tri(k - (n - m), ctx) / q_tri(k, ctx)) * ck \
                    if not ck.is_zero() else ctx.zero()
                checked += 1
                if lhs != rhs:
                    return fail(k=k, m=m, lhs=str(lhs), rhs=str(rhs))
    elif identity == "qsymmetry":
        for k in range(n + 1):
            lhs = q_binomial(n, k, ctx)
            rhs = (q_tri(n, ctx) / (q_tri(k, ctx) * q_tri(n - k, ctx))) \
                * q_binomial(n, k, qinv_ctx)
            checked += 1
            if lhs != rhs:
                return fail(k=k, lhs=str(lhs), rhs=str(rhs))
    elif identity == "bin1":
        for m in range(n + 1):
            for j in range(n + 1):
                total = sum((-1) ** (i + j) * comb(m, i) * comb(i, j)
                            for i in range(n + 1))
                checked += 1
                if total != (1 if m == j else 0):
                    return fail(m=m, j=j, total=total)
    else:  # bin2
        for m in range(n + 1):
            for j in range(n + 1):
                total = sum((-1) ** i * comb(m, i) * comb(n - i, n - j)
                            for i in range(n + 1) if n - i >= 0)
                checked += 1
                if total != comb(n - m, j):
                    return fail(m=m, j=j, total=total)
    return IdentityReport(identity, n, True, checked, None)

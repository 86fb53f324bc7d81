"""Exact field arithmetic: rationals, cyclotomic numbers, Laurent polynomials and
rational functions in the indeterminate q.

The field tower is Q -> Q(zeta_m) -> Q(zeta_m)(q).  Every value is a `Scalar`
carrying a `FieldContext`; binary operations require identical contexts and all
coercion is explicit.  Rationals are stdlib `fractions.Fraction`; cyclotomics are
residues modulo the m-th cyclotomic polynomial; q-field elements are canonical
quotients of Laurent polynomials.

Canonical form of a rational function: the denominator is an ordinary monic
polynomial with nonzero constant term (all q-power content is pushed into the
numerator, which may be a genuine Laurent polynomial), and numerator/denominator
are coprime.  Equality is componentwise equality of canonical forms.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd as _int_gcd

from .errors import (
    CoercionError,
    DegreeCapExceeded,
    DivisionByZero,
    FieldMismatch,
    NonPolynomialQuotient,
    ParseError,
    PoleAtPoint,
    ZeroSubstitution,
)

_ZERO = Fraction(0)
_ONE = Fraction(1)

# Safety valve for runaway symbolic degrees (set from QBRAID_MAX_DEGREE by the CLI).
_degree_cap = None


def set_degree_cap(cap):
    """Set (or clear, with None) the global symbolic-degree cap."""
    global _degree_cap
    _degree_cap = cap


def _check_degree(lo, hi):
    cap = _degree_cap
    if cap is not None and max(abs(lo), abs(hi)) > cap:
        raise DegreeCapExceeded(f"symbolic degree {max(abs(lo), abs(hi))} exceeds cap {cap}")


# ---------------------------------------------------------------------------
# Dense polynomials over Q (internal helpers for the cyclotomic layer).
# Representation: list of Fractions, ascending degree, no trailing zeros.
# ---------------------------------------------------------------------------

def _ptrim(p):
    while p and not p[-1]:
        p.pop()
    return p


def _pmul(a, b):
    if not a or not b:
        return []
    out = [_ZERO] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if not ai:
            continue
        for j, bj in enumerate(b):
            out[i + j] += ai * bj
    return _ptrim(out)


def _pdivmod(a, b):
    if not b:
        raise DivisionByZero("polynomial division by zero")
    rem = list(a)
    quo = [_ZERO] * max(len(a) - len(b) + 1, 0)
    lead = b[-1]
    while len(rem) >= len(b):
        c = rem[-1] / lead
        k = len(rem) - len(b)
        quo[k] = c
        for j, bj in enumerate(b):
            rem[k + j] -= c * bj
        _ptrim(rem)
    return _ptrim(quo), rem


@lru_cache(maxsize=None)
def cyclotomic_polynomial(m):
    """The m-th cyclotomic polynomial over Q, as an ascending coefficient tuple.

    Computed by exact division of x^m - 1 by Phi_d for all proper divisors d of m.
    """
    if m < 1:
        raise ValueError("order must be >= 1")
    if m == 1:
        return (Fraction(-1), _ONE)
    num = [_ZERO] * (m + 1)
    num[0], num[m] = Fraction(-1), _ONE
    p = num
    for d in range(1, m):
        if m % d == 0:
            q, r = _pdivmod(p, list(cyclotomic_polynomial(d)))
            if r:
                raise AssertionError("cyclotomic division left a remainder")
            p = q
    return tuple(p)


def euler_phi(m):
    return len(cyclotomic_polynomial(m)) - 1 if m > 1 else 1


@lru_cache(maxsize=None)
def _reduction_rows(m):
    # x^k mod Phi_m for phi(m) <= k <= 2*phi(m) - 2, as coefficient tuples.
    phi = euler_phi(m)
    mod = cyclotomic_polynomial(m)
    rows = []
    cur = [-c for c in mod[:phi]]  # x^phi = -(c_0 + ... + c_{phi-1} x^{phi-1})
    rows.append(tuple(cur))
    for _ in range(phi - 2):
        nxt = [_ZERO] + cur[:-1]
        top = cur[-1]
        if top:
            for i in range(phi):
                nxt[i] += top * rows[0][i]
        cur = nxt
        rows.append(tuple(cur))
    return tuple(rows)


class Cyclotomic:
    """An element of Q(zeta_m), m >= 3, reduced modulo Phi_m.

    Coefficients are Fractions in the power basis 1, zeta, ..., zeta^(phi(m)-1).
    """

    __slots__ = ("order", "coeffs")

    def __init__(self, order, coeffs):
        self.order = order
        self.coeffs = coeffs

    @classmethod
    def from_rational(cls, order, value):
        phi = euler_phi(order)
        return cls(order, (Fraction(value),) + (_ZERO,) * (phi - 1))

    @classmethod
    def zeta_power(cls, order, k):
        phi = euler_phi(order)
        k %= order
        if k < phi:
            coeffs = [_ZERO] * phi
            coeffs[k] = _ONE
            return cls(order, tuple(coeffs))
        # reduce zeta^k by repeated multiplication with zeta
        val = cls.zeta_power(order, phi - 1)
        for _ in range(k - phi + 1):
            val = val._shift()
        return val

    def _shift(self):
        # multiply by zeta
        phi = euler_phi(self.order)
        out = [_ZERO] + list(self.coeffs[:-1])
        top = self.coeffs[-1]
        if top:
            red = _reduction_rows(self.order)[0]
            for i in range(phi):
                out[i] += top * red[i]
        return Cyclotomic(self.order, tuple(out))

    def is_zero(self):
        return all(not c for c in self.coeffs)

    def _lift(self, other):
        if isinstance(other, Cyclotomic):
            if other.order != self.order:
                raise FieldMismatch("cyclotomic orders differ")
            return other
        if isinstance(other, (int, Fraction)):
            return Cyclotomic.from_rational(self.order, other)
        return NotImplemented

    def __add__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return NotImplemented
        return Cyclotomic(self.order, tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    __radd__ = __add__

    def __neg__(self):
        return Cyclotomic(self.order, tuple(-a for a in self.coeffs))

    def __sub__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return NotImplemented
        return Cyclotomic(self.order, tuple(a - b for a, b in zip(self.coeffs, other.coeffs)))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            f = Fraction(other)
            return Cyclotomic(self.order, tuple(a * f for a in self.coeffs))
        if not isinstance(other, Cyclotomic):
            return NotImplemented
        if other.order != self.order:
            raise FieldMismatch("cyclotomic orders differ")
        phi = len(self.coeffs)
        conv = [_ZERO] * (2 * phi - 1)
        for i, a in enumerate(self.coeffs):
            if not a:
                continue
            for j, b in enumerate(other.coeffs):
                if b:
                    conv[i + j] += a * b
        out = list(conv[:phi])
        rows = _reduction_rows(self.order)
        for k in range(phi, 2 * phi - 1):
            c = conv[k]
            if c:
                row = rows[k - phi]
                for i in range(phi):
                    out[i] += c * row[i]
        return Cyclotomic(self.order, tuple(out))

    __rmul__ = __mul__

    def inverse(self):
        """Inverse via the extended Euclidean algorithm modulo Phi_m."""
        if self.is_zero():
            raise DivisionByZero("inverse of zero cyclotomic")
        mod = list(cyclotomic_polynomial(self.order))
        a = _ptrim(list(self.coeffs))
        # extended gcd of a and mod over Q[x]
        r0, r1 = a, mod
        s0, s1 = [_ONE], []
        while r1:
            q, r = _pdivmod(r0, r1)
            r0, r1 = r1, r
            s0, s1 = s1, _psub(s0, _pmul(q, s1))
        if len(r0) != 1:
            raise DivisionByZero("element not invertible (unexpected)")
        inv = [c / r0[0] for c in s0]
        _, rem = _pdivmod(inv, mod)
        phi = euler_phi(self.order)
        rem = rem + [_ZERO] * (phi - len(rem))
        return Cyclotomic(self.order, tuple(rem[:phi]))

    def __truediv__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, n):
        if n < 0:
            return self.inverse() ** (-n)
        result = Cyclotomic.from_rational(self.order, 1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Cyclotomic.from_rational(self.order, other)
        if not isinstance(other, Cyclotomic):
            return NotImplemented
        return self.order == other.order and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.order, self.coeffs))

    def rational_part(self):
        """The value as a Fraction, if it lies in Q; otherwise None."""
        if all(not c for c in self.coeffs[1:]):
            return self.coeffs[0]
        return None

    def __str__(self):
        return format_cyclotomic(self)

    def __repr__(self):
        return f"Cyclotomic({self.order}, {self})"


def _psub(a, b):
    out = [(a[i] if i < len(a) else _ZERO) - (b[i] if i < len(b) else _ZERO)
           for i in range(max(len(a), len(b)))]
    return _ptrim(out)


def _base_zero(order):
    return _ZERO if order == 1 else Cyclotomic.from_rational(order, 0)


def _base_one(order):
    return _ONE if order == 1 else Cyclotomic.from_rational(order, 1)


def _base_is_zero(c):
    return c.is_zero() if isinstance(c, Cyclotomic) else not c


# ---------------------------------------------------------------------------
# Laurent polynomials in q over Q or Q(zeta_m).
# ---------------------------------------------------------------------------

class LaurentPoly:
    """Sparse Laurent polynomial: exponent -> nonzero base-field coefficient."""

    __slots__ = ("order", "terms")

    def __init__(self, order, terms):
        self.order = order
        self.terms = terms

    @classmethod
    def zero(cls, order=1):
        return cls(order, {})

    @classmethod
    def one(cls, order=1):
        return cls(order, {0: _base_one(order)})

    @classmethod
    def constant(cls, coeff, order=1):
        if _base_is_zero(coeff):
            return cls.zero(order)
        return cls(order, {0: coeff})

    @classmethod
    def q_power(cls, k, order=1):
        return cls(order, {k: _base_one(order)})

    def is_zero(self):
        return not self.terms

    def min_exp(self):
        return min(self.terms)

    def max_exp(self):
        return max(self.terms)

    def __add__(self, other):
        if self.order != other.order:
            raise FieldMismatch("base fields differ")
        terms = dict(self.terms)
        for e, c in other.terms.items():
            s = terms.get(e)
            s = c if s is None else s + c
            if _base_is_zero(s):
                terms.pop(e, None)
            else:
                terms[e] = s
        return LaurentPoly(self.order, terms)

    def __neg__(self):
        return LaurentPoly(self.order, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if self.order != other.order:
            raise FieldMismatch("base fields differ")
        if not self.terms or not other.terms:
            return LaurentPoly.zero(self.order)
        out = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = e1 + e2
                p = c1 * c2
                s = out.get(e)
                s = p if s is None else s + p
                if _base_is_zero(s):
                    out.pop(e, None)
                else:
                    out[e] = s
        if out:
            _check_degree(min(out), max(out))
        return LaurentPoly(self.order, out)

    def scale(self, coeff):
        if _base_is_zero(coeff):
            return LaurentPoly.zero(self.order)
        return LaurentPoly(self.order, {e: c * coeff for e, c in self.terms.items()})

    def shifted(self, k):
        if k == 0 or not self.terms:
            return self
        return LaurentPoly(self.order, {e + k: c for e, c in self.terms.items()})

    def __pow__(self, n):
        if n < 0:
            raise ValueError("LaurentPoly power must be nonnegative; invert via RatFunc")
        result = LaurentPoly.one(self.order)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __eq__(self, other):
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self.order == other.order and self.terms == other.terms

    def __hash__(self):
        return hash((self.order, tuple(sorted((e, _freeze(c)) for e, c in self.terms.items()))))

    def dense(self):
        """(shift, ascending coefficient list) with the shift removed."""
        if not self.terms:
            return 0, []
        lo, hi = self.min_exp(), self.max_exp()
        zero = _base_zero(self.order)
        coeffs = [zero] * (hi - lo + 1)
        for e, c in self.terms.items():
            coeffs[e - lo] = c
        return lo, coeffs

    @classmethod
    def from_dense(cls, order, shift, coeffs):
        terms = {shift + i: c for i, c in enumerate(coeffs) if not _base_is_zero(c)}
        return cls(order, terms)

    def __str__(self):
        return format_laurent(self)

    def __repr__(self):
        return f"LaurentPoly({self})"


def _freeze(c):
    return (c.order, c.coeffs) if isinstance(c, Cyclotomic) else c


def _lp_divmod(a, b):
    """Ordinary-polynomial divmod on dense forms; inputs must have min_exp >= 0."""
    sa, ca = a.dense()
    sb, cb = b.dense()
    if sa < 0 or sb < 0:
        raise ValueError("divmod requires ordinary polynomials")
    ca = ([_base_zero(a.order)] * sa) + ca
    cb = ([_base_zero(b.order)] * sb) + cb
    if not cb:
        raise DivisionByZero("polynomial division by zero")
    rem = list(ca)
    quo = [_base_zero(a.order)] * max(len(ca) - len(cb) + 1, 0)
    lead = cb[-1]
    while len(rem) >= len(cb):
        c = rem[-1] / lead
        k = len(rem) - len(cb)
        quo[k] = c
        for j, bj in enumerate(cb):
            rem[k + j] = rem[k + j] - c * bj
        while rem and _base_is_zero(rem[-1]):
            rem.pop()
    return (LaurentPoly.from_dense(a.order, 0, quo),
            LaurentPoly.from_dense(a.order, 0, rem))


def laurent_exact_div(a, b, error=None):
    """Exact division of Laurent polynomials; raises if a is not a multiple of b."""
    if b.is_zero():
        raise DivisionByZero("exact division by zero polynomial")
    if a.is_zero():
        return LaurentPoly.zero(a.order)
    sa = a.min_exp()
    sb = b.min_exp()
    q, r = _lp_divmod(a.shifted(-sa), b.shifted(-sb))
    if not r.is_zero():
        raise (error or NonPolynomialQuotient)("division left a remainder")
    return q.shifted(sa - sb)


def _lp_monic_gcd(a, b):
    """Monic gcd of two ordinary polynomials over the base field (plain Euclid)."""
    while not b.is_zero():
        _, r = _lp_divmod(a, b)
        a, b = b, r
    if a.is_zero():
        return a
    lead = a.terms[a.max_exp()]
    if isinstance(lead, Cyclotomic):
        return a.scale(lead.inverse())
    return a.scale(_ONE / lead)


# ---------------------------------------------------------------------------
# Rational functions in q (canonical quotients of Laurent polynomials).
# ---------------------------------------------------------------------------

class RatFunc:
    """Canonical quotient num/den of Laurent polynomials over Q or Q(zeta_m)."""

    __slots__ = ("order", "num", "den")

    def __init__(self, order, num, den):
        self.order = order
        self.num = num
        self.den = den

    @classmethod
    def make(cls, num, den):
        """Canonicalize num/den: monic ordinary denominator with nonzero constant
        term, q-power content moved into the numerator, coprime parts."""
        order = num.order
        if den.is_zero():
            raise DivisionByZero("zero denominator")
        if num.is_zero():
            return cls(order, LaurentPoly.zero(order), LaurentPoly.one(order))
        a = num.min_exp()
        b = den.min_exp()
        n_ord = num.shifted(-a)
        d_ord = den.shifted(-b)
        if d_ord.max_exp() > 0:
            g = _lp_monic_gcd(n_ord, d_ord)
            if g.max_exp() > 0:
                n_ord = laurent_exact_div(n_ord, g)
                d_ord = laurent_exact_div(d_ord, g)
        lead = d_ord.terms[d_ord.max_exp()]
        if not (lead == _base_one(order)):
            inv = lead.inverse() if isinstance(lead, Cyclotomic) else _ONE / lead
            d_ord = d_ord.scale(inv)
            n_ord = n_ord.scale(inv)
        return cls(order, n_ord.shifted(a - b), d_ord)

    @classmethod
    def from_laurent(cls, p):
        return cls(p.order, p, LaurentPoly.one(p.order))

    def is_zero(self):
        return self.num.is_zero()

    def is_polynomial(self):
        return self.den.max_exp() == 0 if not self.den.is_zero() else False

    def _poly_fast(self, other):
        return self.is_polynomial() and other.is_polynomial() \
            and self.den == LaurentPoly.one(self.order) and other.den == LaurentPoly.one(self.order)

    def __add__(self, other):
        if self.order != other.order:
            raise FieldMismatch("base fields differ")
        if self._poly_fast(other):
            return RatFunc.from_laurent(self.num + other.num)
        return RatFunc.make(self.num * other.den + other.num * self.den,
                            self.den * other.den)

    def __neg__(self):
        return RatFunc(self.order, -self.num, self.den)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if self.order != other.order:
            raise FieldMismatch("base fields differ")
        if self._poly_fast(other):
            return RatFunc.from_laurent(self.num * other.num)
        return RatFunc.make(self.num * other.num, self.den * other.den)

    def __truediv__(self, other):
        if other.is_zero():
            raise DivisionByZero("division by zero rational function")
        return RatFunc.make(self.num * other.den, self.den * other.num)

    def inverse(self):
        if self.is_zero():
            raise DivisionByZero("inverse of zero rational function")
        return RatFunc.make(self.den, self.num)

    def __pow__(self, n):
        if n < 0:
            return self.inverse() ** (-n)
        result = RatFunc.from_laurent(LaurentPoly.one(self.order))
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __eq__(self, other):
        if not isinstance(other, RatFunc):
            return NotImplemented
        return self.order == other.order and self.num == other.num and self.den == other.den

    def __hash__(self):
        return hash((self.order, self.num, self.den))

    def __str__(self):
        return format_ratfunc(self)

    def __repr__(self):
        return f"RatFunc({self})"


# ---------------------------------------------------------------------------
# Field contexts and the Scalar wrapper.
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class FieldContext:
    """Ambient field: Q(zeta_order), optionally extended by the indeterminate q.

    Orders 1 and 2 both denote plain Q (zeta_2 = -1 is rational).
    """

    order: int = 1
    with_q: bool = False

    def __post_init__(self):
        if self.order < 1:
            raise ValueError("order must be >= 1")
        if self.order == 2:
            object.__setattr__(self, "order", 1)

    def describe(self):
        base = "QQ" if self.order == 1 else f"QQ(zeta{self.order})"
        return base + "(q)" if self.with_q else base


QQ = FieldContext()


def cyclotomic_field(m):
    return FieldContext(1 if m <= 2 else m, False)


def function_field(order=1):
    return FieldContext(order, True)


def join_context(a, b):
    order = a.order * b.order // _int_gcd(a.order, b.order)
    return FieldContext(order, a.with_q or b.with_q)


class Scalar:
    """A field element with its context.  Immutable; all operations are pure."""

    __slots__ = ("ctx", "val")

    def __init__(self, ctx, val):
        self.ctx = ctx
        self.val = val

    # -- constructors -------------------------------------------------------

    @staticmethod
    def zero(ctx=QQ):
        return Scalar(ctx, _payload_const(ctx, _ZERO))

    @staticmethod
    def one(ctx=QQ):
        return Scalar(ctx, _payload_const(ctx, _ONE))

    @staticmethod
    def of_fraction(f, ctx=QQ):
        return Scalar(ctx, _payload_const(ctx, Fraction(f)))

    # -- predicates ----------------------------------------------------------

    def is_zero(self):
        return self.val.is_zero() if not isinstance(self.val, Fraction) else not self.val

    def is_one(self):
        return self == Scalar.one(self.ctx)

    def is_polynomial(self):
        if not self.ctx.with_q:
            return True
        return self.val.is_zero() or self.val.den == LaurentPoly.one(self.ctx.order)

    # -- arithmetic ----------------------------------------------------------

    def _need(self, other):
        if not isinstance(other, Scalar):
            return None
        if other.ctx != self.ctx:
            raise FieldMismatch(f"{self.ctx.describe()} vs {other.ctx.describe()}")
        return other

    def __add__(self, other):
        other = self._need(other)
        if other is None:
            return NotImplemented
        return Scalar(self.ctx, self.val + other.val)

    def __sub__(self, other):
        other = self._need(other)
        if other is None:
            return NotImplemented
        return Scalar(self.ctx, self.val - other.val)

    def __neg__(self):
        return Scalar(self.ctx, -self.val)

    def __mul__(self, other):
        other = self._need(other)
        if other is None:
            return NotImplemented
        return Scalar(self.ctx, self.val * other.val)

    def __truediv__(self, other):
        other = self._need(other)
        if other is None:
            return NotImplemented
        if other.is_zero():
            raise DivisionByZero("scalar division by zero")
        return Scalar(self.ctx, self.val / other.val)

    def inverse(self):
        if self.is_zero():
            raise DivisionByZero("inverse of zero scalar")
        v = self.val
        if isinstance(v, Fraction):
            return Scalar(self.ctx, _ONE / v)
        return Scalar(self.ctx, v.inverse())

    def __pow__(self, n):
        if not isinstance(n, int):
            raise TypeError("scalar powers are integer powers")
        if n < 0:
            return self.inverse() ** (-n)
        return Scalar(self.ctx, self.val ** n)

    def __eq__(self, other):
        if not isinstance(other, Scalar):
            return NotImplemented
        return self.ctx == other.ctx and self.val == other.val

    def __hash__(self):
        return hash((self.ctx, self.val))

    # -- conversions ---------------------------------------------------------

    def coerce(self, ctx):
        """Explicit embedding into a larger context (injective, never silent)."""
        if ctx == self.ctx:
            return self
        if ctx.order % self.ctx.order != 0 or (self.ctx.with_q and not ctx.with_q):
            raise CoercionError(f"no embedding {self.ctx.describe()} -> {ctx.describe()}")
        val = self.val
        if self.ctx.with_q:
            num = _lift_laurent(val.num, self.ctx.order, ctx.order)
            den = _lift_laurent(val.den, self.ctx.order, ctx.order)
            return Scalar(ctx, RatFunc(ctx.order, num, den))
        base = val if self.ctx.order == ctx.order else _lift_base(val, self.ctx.order, ctx.order)
        if ctx.with_q:
            return Scalar(ctx, RatFunc.from_laurent(LaurentPoly.constant(base, ctx.order)))
        return Scalar(ctx, base)

    def as_fraction(self):
        """The value as a Fraction; None when it is not rational."""
        v = self.val
        if isinstance(v, Fraction):
            return v
        if isinstance(v, Cyclotomic):
            return v.rational_part()
        if isinstance(v, RatFunc):
            if v.is_zero():
                return _ZERO
            if v.den == LaurentPoly.one(v.order) and set(v.num.terms) == {0}:
                c = v.num.terms[0]
                return c.rational_part() if isinstance(c, Cyclotomic) else c
        return None

    def substitute(self, q0):
        """Ring-homomorphism image under q -> q0 (q0 any nonzero scalar)."""
        if not self.ctx.with_q:
            raise ValueError("substitution applies to q-field scalars")
        if not isinstance(q0, Scalar):
            raise TypeError("substitution point must be a Scalar")
        if q0.is_zero():
            raise ZeroSubstitution("substitution at q = 0")
        target = join_context(FieldContext(self.ctx.order, q0.ctx.with_q), q0.ctx)
        q0 = q0.coerce(target)
        num = _eval_laurent(self.val.num, q0, target)
        den = _eval_laurent(self.val.den, q0, target)
        if den.is_zero():
            raise PoleAtPoint("denominator vanishes at the substitution point")
        return num / den

    evaluate = substitute

    def __str__(self):
        return format_scalar(self)

    def __repr__(self):
        return f"Scalar[{self.ctx.describe()}]({self})"


def _payload_const(ctx, f):
    if ctx.with_q:
        return RatFunc.from_laurent(LaurentPoly.constant(f, ctx.order))
    if ctx.order == 1:
        return f
    return Cyclotomic.from_rational(ctx.order, f)


def _lift_base(c, order_from, order_to):
    if order_from == order_to:
        return c
    if order_from == 1:
        return Fraction(c) if order_to == 1 else Cyclotomic.from_rational(order_to, c)
    step = order_to // order_from
    out = Cyclotomic.from_rational(order_to, 0)
    for k, a in enumerate(c.coeffs):
        if a:
            out = out + Cyclotomic.zeta_power(order_to, k * step) * a
    return out


def _lift_laurent(p, order_from, order_to):
    if order_from == order_to:
        return p
    return LaurentPoly(order_to, {e: _lift_base(c, order_from, order_to)
                                  for e, c in p.terms.items()})


def _eval_laurent(p, q0, target):
    acc = Scalar.zero(target)
    powers = {}
    for e, c in sorted(p.terms.items()):
        pw = powers.get(e)
        if pw is None:
            pw = q0 ** e
            powers[e] = pw
        coeff = Scalar(FieldContext(p.order, False), c).coerce(target)
        acc = acc + coeff * pw
    return acc


def integer(n, ctx=QQ):
    return Scalar.of_fraction(Fraction(n), ctx)


def rational(a, b=1, ctx=QQ):
    return Scalar.of_fraction(Fraction(a, b), ctx)


def zeta(m):
    """The primitive m-th root of unity, in its minimal context."""
    if m < 1:
        raise ValueError("order must be >= 1")
    if m == 1:
        return integer(1)
    if m == 2:
        return integer(-1)
    return Scalar(cyclotomic_field(m), Cyclotomic.zeta_power(m, 1))


def q_symbol(order=1):
    """The indeterminate q over Q(zeta_order)."""
    ctx = function_field(order)
    return Scalar(ctx, RatFunc.from_laurent(LaurentPoly.q_power(1, ctx.order)))


def is_plain_q(s):
    """True when s is exactly the generator q of its function field."""
    if not s.ctx.with_q:
        return False
    v = s.val
    return v.den == LaurentPoly.one(v.order) and list(v.num.terms.items()) == [(1, _base_one(v.order))]


# ---------------------------------------------------------------------------
# Canonical string format and its parser.
#
# Grammar (both emitted and accepted):
#   expr   := term {('+'|'-') term}
#   term   := unary {('*'|'/') unary}
#   unary  := '-' unary | factor
#   factor := atom ['^' ['-'] INT]
#   atom   := INT | 'q' | 'zeta' INT | 'zeta' '(' INT ')' | '(' expr ')'
# Terms are emitted sorted by ascending exponent with explicit signs,
# e.g. `1+q`, `-1-q^-1`, `q^-3`, `(1/2)*zeta6`.
# ---------------------------------------------------------------------------

def _fmt_coeff_atom(f, atom):
    """Render f * atom with f a Fraction and atom like 'q^2' (or None for 1)."""
    f = Fraction(f)
    if atom is None:
        if f.denominator == 1:
            return str(f)
        return f"-({-f})" if f < 0 else f"({f})"
    if f == 1:
        return atom
    if f == -1:
        return "-" + atom
    if f.denominator == 1:
        return f"{f}*{atom}"
    if f < 0:
        return f"-({-f})*{atom}"
    return f"({f})*{atom}"


def _zeta_atom(m, k):
    if k == 0:
        return None
    return f"zeta{m}" if k == 1 else f"zeta{m}^{k}"


def format_cyclotomic(c):
    parts = []
    for k, a in enumerate(c.coeffs):
        if a:
            parts.append(_fmt_coeff_atom(a, _zeta_atom(c.order, k)))
    return _join_signed(parts)


def _join_signed(parts):
    if not parts:
        return "0"
    out = parts[0]
    for p in parts[1:]:
        out += p if p.startswith("-") else "+" + p
    return out


def _q_atom(e):
    if e == 0:
        return None
    return "q" if e == 1 else f"q^{e}"


def _fmt_term(c, e):
    atom = _q_atom(e)
    if isinstance(c, Cyclotomic):
        r = c.rational_part()
        if r is not None:
            return _fmt_coeff_atom(r, atom)
        nz = [(k, a) for k, a in enumerate(c.coeffs) if a]
        if len(nz) == 1:
            k, a = nz[0]
            zatom = _zeta_atom(c.order, k)
            if atom is None:
                return _fmt_coeff_atom(a, zatom)
            if a == 1:
                return f"{zatom}*{atom}"
            if a == -1:
                return f"-{zatom}*{atom}"
            lead = _fmt_coeff_atom(a, zatom)
            return f"{lead}*{atom}"
        body = format_cyclotomic(c)
        if atom is None:
            return f"({body})"
        return f"({body})*{atom}"
    return _fmt_coeff_atom(c, atom)


def format_laurent(p):
    if not p.terms:
        return "0"
    return _join_signed([_fmt_term(c, e) for e, c in sorted(p.terms.items())])


def format_ratfunc(r):
    if r.den == LaurentPoly.one(r.order):
        return format_laurent(r.num)
    return f"({format_laurent(r.num)})/({format_laurent(r.den)})"


def format_scalar(s):
    v = s.val
    if isinstance(v, Fraction):
        return str(v)
    if isinstance(v, Cyclotomic):
        return format_cyclotomic(v)
    return format_ratfunc(v)


class _Tokens:
    def __init__(self, text):
        self.text = text
        self.pos = 0
        self.toks = []
        self._scan()
        self.i = 0

    def _scan(self):
        t, i, n = self.text, 0, len(self.text)
        while i < n:
            ch = t[i]
            if ch.isspace():
                i += 1
                continue
            if ch.isdigit():
                j = i
                while j < n and t[j].isdigit():
                    j += 1
                self.toks.append(("INT", int(t[i:j]), i))
                i = j
                continue
            if ch.isalpha():
                j = i
                while j < n and (t[j].isalpha() or t[j].isdigit()):
                    j += 1
                self.toks.append(("NAME", t[i:j], i))
                i = j
                continue
            if ch in "()^*/+-":
                self.toks.append((ch, ch, i))
                i += 1
                continue
            raise ParseError(f"unexpected character {ch!r}", i)

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else ("EOF", None, len(self.text))

    def next(self):
        tok = self.peek()
        self.i += 1
        return tok


def _scan_context(toks):
    saw_q = False
    orders = []
    i = 0
    while i < len(toks.toks):
        kind, value, pos = toks.toks[i]
        if kind == "NAME":
            if value == "q":
                saw_q = True
            elif value == "zeta":
                if i + 3 <= len(toks.toks) and toks.toks[i + 1][0] == "(" \
                        and toks.toks[i + 2][0] == "INT":
                    orders.append(toks.toks[i + 2][1])
                else:
                    raise ParseError("zeta needs an order, e.g. zeta(6) or zeta6", pos)
            elif value.startswith("zeta") and value[4:].isdigit():
                orders.append(int(value[4:]))
            else:
                raise ParseError(f"unknown name {value!r}", pos)
        i += 1
    order = 1
    for m in orders:
        if m < 1:
            raise ParseError("zeta order must be >= 1", 0)
        mm = 1 if m <= 2 else m
        order = order * mm // _int_gcd(order, mm)
    return FieldContext(order, saw_q)


def parse_scalar(text):
    """Parse the canonical scalar grammar into a Scalar in its minimal context."""
    toks = _Tokens(text)
    ctx = _scan_context(toks)

    def parse_expr():
        node = parse_term()
        while True:
            kind, _, _ = toks.peek()
            if kind == "+":
                toks.next()
                node = node + parse_term()
            elif kind == "-":
                toks.next()
                node = node - parse_term()
            else:
                return node

    def parse_term():
        node = parse_unary()
        while True:
            kind, _, _ = toks.peek()
            if kind == "*":
                toks.next()
                node = node * parse_unary()
            elif kind == "/":
                toks.next()
                d = parse_unary()
                if d.is_zero():
                    raise DivisionByZero("division by zero in scalar spec")
                node = node / d
            else:
                return node

    def parse_unary():
        kind, _, _ = toks.peek()
        if kind == "-":
            toks.next()
            return -parse_unary()
        return parse_factor()

    def parse_factor():
        node = parse_atom()
        kind, _, _ = toks.peek()
        if kind == "^":
            toks.next()
            sign = 1
            kind, value, pos = toks.next()
            if kind == "-":
                sign = -1
                kind, value, pos = toks.next()
            if kind != "INT":
                raise ParseError("exponent must be an integer", pos)
            node = node ** (sign * value)
        return node

    def parse_atom():
        kind, value, pos = toks.next()
        if kind == "INT":
            return integer(value, ctx)
        if kind == "(":
            node = parse_expr()
            kind, _, pos = toks.next()
            if kind != ")":
                raise ParseError("expected ')'", pos)
            return node
        if kind == "NAME":
            if value == "q":
                return q_symbol(ctx.order)
            if value == "zeta":
                kind, _, pos = toks.next()
                if kind != "(":
                    raise ParseError("zeta needs parentheses or an inline order", pos)
                kind, m, pos = toks.next()
                if kind != "INT":
                    raise ParseError("zeta order must be an integer", pos)
                kind, _, pos = toks.next()
                if kind != ")":
                    raise ParseError("expected ')'", pos)
                return zeta(m).coerce(ctx)
            if value.startswith("zeta") and value[4:].isdigit():
                return zeta(int(value[4:])).coerce(ctx)
            raise ParseError(f"unknown name {value!r}", pos)
        raise ParseError(f"unexpected token {value!r}", pos)

    node = parse_expr()
    kind, value, pos = toks.peek()
    if kind != "EOF":
        raise ParseError(f"trailing input {value!r}", pos)
    return node

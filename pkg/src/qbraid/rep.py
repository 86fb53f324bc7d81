"""The braid-group B3 representation family built from the q-Pascal triangle.

For size n+1, the bare generators are
    sigma_1(q,n)_km = C_(n-k)^(n-m)(q)           (upper triangular),
    sigma_2(q,n)    = (sigma_1(q^-1,n)^-1)^#     (lower triangular),
dressed by a diagonal parameter matrix Lambda.  Two parameter forms are
supported and cross-validated:

  raw       sigma_1 -> sigma_1(q,n) L,  sigma_2 -> L^# sigma_2(q,n), where L
            satisfies lambda_0 lambda_n q_r q_(n-r)/q_n = lambda_r lambda_(n-r)
            componentwise;
  factored  L = D_n^#(q) L' with L' L'^# = c I (c derived as lambda'_0
            lambda'_n, never supplied).

The braid identity verified is
    s1 s2 s1 = s2 s1 s2 = lambda_0 lambda_n S(q) L,
together with its bare equivalents
    sigma_1(q) Lam(q) sigma_2(q) = S(q) sigma_1^-1(q) = sigma_2^-1(q) S(q).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

from .errors import CondQViolated, NotUnitUpperTriangular
from .linalg import ExactMatrix
from .qcomb import QContext, q_binomial, q_tri
from .scalar import Scalar


@lru_cache(maxsize=256)
def sigma1_matrix(n, ctx):
    """sigma_1(q,n): entry (k,m) is the Gaussian polynomial C_(n-k)^(n-m)(q)."""
    return ExactMatrix.from_fn(
        n + 1, n + 1, ctx.q.ctx,
        lambda k, m: q_binomial(n - k, n - m, ctx))


@lru_cache(maxsize=256)
def sigma1_inverse_closed(n, ctx):
    """Closed form sigma_1^-1(q,n)_km = (-1)^(k+m) q_(m-k) C_(n-k)^(n-m)(q)."""
    zero = ctx.zero()

    def entry(k, m):
        if m < k:
            return zero
        val = q_tri(m - k, ctx) * q_binomial(n - k, n - m, ctx)
        return -val if (k + m) % 2 else val

    return ExactMatrix.from_fn(n + 1, n + 1, ctx.q.ctx, entry)


@lru_cache(maxsize=256)
def sigma2_closed(n, ctx):
    """Closed form sigma_2(q,n)_km = (-1)^(k+m) q_(k-m)^-1 C_k^m(q^-1), k >= m."""
    zero = ctx.zero()
    qinv = QContext(ctx.q.inverse())

    def entry(k, m):
        if m > k:
            return zero
        val = q_tri(k - m, ctx).inverse() * q_binomial(k, m, qinv)
        return -val if (k + m) % 2 else val

    return ExactMatrix.from_fn(n + 1, n + 1, ctx.q.ctx, entry)


@lru_cache(maxsize=256)
def sigma2_matrix(n, ctx):
    """sigma_2(q,n), built by the involution route (sigma_1(q^-1,n)^-1)^# and
    checked against the closed form; the two must agree entrywise."""
    qinv = QContext(ctx.q.inverse())
    via_involution = sigma1_matrix(n, qinv).inverse().sharp()
    closed = sigma2_closed(n, ctx)
    if via_involution != closed:
        raise AssertionError("sigma_2 involution route disagrees with closed form")
    return closed


@lru_cache(maxsize=256)
def sigma2_inverse_closed(n, ctx):
    """Closed form sigma_2^-1(q,n)_km = C_k^m(q^-1)."""
    qinv = QContext(ctx.q.inverse())
    return ExactMatrix.from_fn(
        n + 1, n + 1, ctx.q.ctx,
        lambda k, m: q_binomial(k, m, qinv))


@lru_cache(maxsize=256)
def s_matrix(n, ctx):
    """S(q)_km = q_k^-1 (-1)^k delta_(k+m,n); validates S(q) = D_n(q)^-1 S(1)."""
    zero = ctx.zero()

    def entry(k, m):
        if k + m != n:
            return zero
        val = q_tri(k, ctx).inverse()
        return -val if k % 2 else val

    out = ExactMatrix.from_fn(n + 1, n + 1, ctx.q.ctx, entry)
    plain = ExactMatrix.from_fn(
        n + 1, n + 1, ctx.q.ctx,
        lambda k, m: zero if k + m != n else (-ctx.one() if k % 2 else ctx.one()))
    if d_matrix(n, ctx).inverse() * plain != out:
        raise AssertionError("S(q) != D_n(q)^-1 S")
    return out


@lru_cache(maxsize=256)
def d_matrix(n, ctx):
    """D_n(q) = diag(q_r)_(r=0..n)."""
    return ExactMatrix.diagonal([q_tri(r, ctx) for r in range(n + 1)])


@lru_cache(maxsize=256)
def lambda_canonical(n, ctx):
    """Lambda_n(q) = diag(q^(-(n-r)r)); validates Lambda(q) = q_n^-1 D_n D_n^#."""
    out = ExactMatrix.diagonal([ctx.q ** (-(n - r) * r) for r in range(n + 1)])
    d = d_matrix(n, ctx)
    if q_tri(n, ctx).inverse() * (d * d.sharp()) != out:
        raise AssertionError("Lambda(q) != q_n^-1 D_n D_n^#")
    return out


@dataclass(frozen=True)
class RepSpec:
    """Parameter triple (n, q, lambda) with its validity constraints.

    form 'raw': lam is the full diagonal, checked against the compatibility
    condition.  form 'factored': lam is L' with L' L'^# = c I, c derived.
    """

    n: int
    ctx: QContext
    lam: tuple
    form: str = "factored"

    def __post_init__(self):
        if self.form not in ("raw", "factored"):
            raise ValueError("form must be 'raw' or 'factored'")
        if len(self.lam) != self.n + 1:
            raise CondQViolated(f"lambda needs {self.n + 1} entries")
        for k, v in enumerate(self.lam):
            if v.is_zero():
                raise CondQViolated(f"lambda_{k} must be nonzero", index=k)


def raw_spec(n, ctx, lam):
    return RepSpec(n, ctx, tuple(lam), "raw")


def factored_spec(n, ctx, lam_prime):
    return RepSpec(n, ctx, tuple(lam_prime), "factored")


@dataclass(frozen=True)
class Representation:
    """The realized pair with its cached canonical matrices."""

    spec: RepSpec
    sigma1: ExactMatrix
    sigma2: ExactMatrix
    s_matrix: ExactMatrix
    lambda_canonical: ExactMatrix
    d_matrix: ExactMatrix
    lam_raw: tuple
    c: Scalar | None = field(default=None)

    @property
    def n(self):
        return self.spec.n

    @property
    def ctx(self):
        return self.spec.ctx


def check_cond_q(n, ctx, lam):
    """Componentwise compatibility: lambda_0 lambda_n q_r q_(n-r)/q_n equals
    lambda_r lambda_(n-r) for every r; raises with the offending index."""
    l0ln = lam[0] * lam[n]
    for r in range(n + 1):
        lhs = l0ln * ctx.q ** (-(n - r) * r)
        if lhs != lam[r] * lam[n - r]:
            raise CondQViolated(
                f"cond_q fails at r={r}: lambda_0 lambda_n q_r q_(n-r)/q_n != "
                f"lambda_r lambda_(n-r)", index=r)


def build_representation(spec):
    """Realize a RepSpec as the dressed generator pair."""
    n, ctx = spec.n, spec.ctx
    d = d_matrix(n, ctx)
    if spec.form == "factored":
        c = spec.lam[0] * spec.lam[n]
        for k in range(n + 1):
            if spec.lam[k] * spec.lam[n - k] != c:
                raise CondQViolated(
                    f"factored form fails at k={k}: lambda'_k lambda'_(n-k) != c",
                    index=k)
        lam_raw = tuple(q_tri(n - k, ctx) * spec.lam[k] for k in range(n + 1))
    else:
        check_cond_q(n, ctx, spec.lam)
        lam_raw = spec.lam
        c = None
    lam_m = ExactMatrix.diagonal(list(lam_raw))
    sigma1 = sigma1_matrix(n, ctx) * lam_m
    sigma2 = lam_m.sharp() * sigma2_matrix(n, ctx)
    return Representation(spec, sigma1, sigma2, s_matrix(n, ctx),
                          lambda_canonical(n, ctx), d, lam_raw, c)


@dataclass
class BraidReport:
    """Outcome of the braid-identity verification, with a first-failure locator."""

    n: int
    passed: bool
    checks: list
    first_failure: dict | None

    def to_payload(self):
        out = {"n": self.n, "passed": self.passed, "checks": self.checks}
        if self.first_failure is not None:
            out["first_failure"] = self.first_failure
        return out


def _first_mismatch(a, b):
    for i in range(a.rows):
        for j in range(a.cols):
            if a[i, j] != b[i, j]:
                return {"entry": [i, j], "lhs": str(a[i, j]), "rhs": str(b[i, j])}
    return None


def verify_braid(rep):
    """Check s1 s2 s1 = s2 s1 s2 = lambda_0 lambda_n S(q) L exactly, plus the
    bare equivalent forms; failures are reported, never raised."""
    n, ctx = rep.n, rep.ctx
    t121 = rep.sigma1 * rep.sigma2 * rep.sigma1
    t212 = rep.sigma2 * rep.sigma1 * rep.sigma2
    scale = rep.lam_raw[0] * rep.lam_raw[n]
    rhs = (rep.s_matrix * ExactMatrix.diagonal(list(rep.lam_raw))).scale(scale)
    checks = []
    first = None
    for name, lhs, want in (("s1*s2*s1 == s2*s1*s2", t121, t212),
                            ("s1*s2*s1 == c*S(q)*Lambda", t121, rhs)):
        ok = lhs == want
        checks.append({"check": name, "passed": ok})
        if not ok and first is None:
            first = {"check": name, **_first_mismatch(lhs, want)}
    s1 = sigma1_matrix(n, ctx)
    s2 = sigma2_matrix(n, ctx)
    core = s1 * rep.lambda_canonical * s2
    for name, want in (("sigma1*Lam(q)*sigma2 == S(q)*sigma1^-1",
                        rep.s_matrix * sigma1_inverse_closed(n, ctx)),
                       ("sigma1*Lam(q)*sigma2 == sigma2^-1*S(q)",
                        sigma2_inverse_closed(n, ctx) * rep.s_matrix)):
        ok = core == want
        checks.append({"check": name, "passed": ok})
        if not ok and first is None:
            first = {"check": name, **_first_mismatch(core, want)}
    return BraidReport(n, all(c["passed"] for c in checks), checks, first)


def unipotent_inverse(x):
    """Inverse of a unit upper-triangular matrix by the alternating path-sum:
    entry (k,m) sums (-1)^t x_(k,i1) x_(i1,i2) ... x_(i_(t-1),m) over strictly
    increasing paths k < i1 < ... < m."""
    if not x.is_unit_upper_triangular():
        raise NotUnitUpperTriangular("path-sum inverse needs a unit upper-triangular matrix")
    from itertools import combinations
    n = x.rows
    ctx = x.ctx
    zero, one = Scalar.zero(ctx), Scalar.one(ctx)
    inv = [[zero] * n for _ in range(n)]
    for k in range(n):
        inv[k][k] = one
        for m in range(k + 1, n):
            acc = zero
            inner = range(k + 1, m)
            for t in range(m - k):
                for mid in combinations(inner, t):
                    path = (k,) + mid + (m,)
                    prod = one
                    for a, b in zip(path, path[1:]):
                        prod = prod * x[a, b]
                    acc = acc - prod if t % 2 == 0 else acc + prod
            inv[k][m] = acc
    return ExactMatrix.from_rows(inv)

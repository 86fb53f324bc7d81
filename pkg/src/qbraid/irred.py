"""Irreducibility and equivalence analysis for the dressed generator pairs.

The operator-irreducibility criterion tests, for each 0 <= r <= floor(n/2),
whether some (n-r)x(n-r) minor with fixed columns {r+1..n} of

    G_r = sigma_1(q,n) - q_(n-r) lambda_r (D_n^#(q) Lambda)^(-1)

is nonzero; G_r is the antidiagonal reflection of the shifted q-exponential

    F_(r,n)(q,lambda) = exp_(q)(sum (k+1)_q E_(k,k+1))
                        - q_(n-r) lambda_r (D_n(q) Lambda^#)^(-1),

and both routes are built and compared.  Two exact oracles accompany the
criterion: the commutant dimension (nullity of the stacked commutation system;
1 iff operator irreducible) and the dimension of the unital algebra generated
by the pair (full iff subspace irreducible over the algebraic closure).  Both
are ranks of linear systems, hence independent of field extension.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

from .errors import (
    AlphaDegenerate,
    ConstraintViolated,
    NotAReduciblePoint,
    ShapeMismatch,
    SingularDiagonal,
)
from .linalg import ExactMatrix
from .qcomb import QContext, concrete_q, q_int, q_tri
from .rep import (
    build_representation,
    factored_spec,
    raw_spec,
    sigma1_matrix,
    sigma2_matrix,
)
from .scalar import Scalar, integer, zeta
from .structure import q_exp_nilpotent, t_matrix


# ---------------------------------------------------------------------------
# The criterion matrices.
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class FMatrixSpec:
    """Parameters (r, n, q, lambda) of one shifted q-exponential matrix; lambda
    is the factored-form diagonal."""

    r: int
    n: int
    ctx: QContext
    lam: tuple

    def __post_init__(self):
        if not 0 <= self.r <= self.n // 2:
            raise ShapeMismatch("r must lie in 0..floor(n/2)")
        if len(self.lam) != self.n + 1:
            raise ShapeMismatch(f"lambda needs {self.n + 1} entries")
        if any(v.is_zero() for v in self.lam):
            raise SingularDiagonal("lambda entries must be nonzero")


def f_matrix(spec):
    """F_(r,n)(q,lambda) by the q-exponential route, validated against the
    reflected sigma route."""
    n, r, ctx = spec.n, spec.r, spec.ctx
    lam_sharp = [spec.lam[n - k] for k in range(n + 1)]
    d_diag = [q_tri(k, ctx) for k in range(n + 1)]
    scale = q_tri(n - r, ctx) * spec.lam[r]
    shift = ExactMatrix.diagonal(
        [scale / (d_diag[k] * lam_sharp[k]) for k in range(n + 1)])
    exp_route = q_exp_nilpotent(t_matrix(n, ctx), ctx) - shift
    sigma_route = _criterion_matrix_from(n, ctx, spec.lam, r).transpose_s()
    if exp_route != sigma_route:
        raise AssertionError("F matrix routes disagree")
    return exp_route


def _criterion_matrix_from(n, ctx, lam_factored, r):
    lam_raw = [q_tri(n - k, ctx) * lam_factored[k] for k in range(n + 1)]
    return _criterion_matrix_raw(n, ctx, lam_raw, r)


def _criterion_matrix_raw(n, ctx, lam_raw, r):
    # sigma_1(q,n) - lam_raw[r] * diag(lam_raw)^-1; eigenvalue-shifted generator
    shift = ExactMatrix.diagonal([lam_raw[r] / lam_raw[k] for k in range(n + 1)])
    return sigma1_matrix(n, ctx) - shift


def criterion_matrix(rep, r):
    """G_r for a built representation (the s-image of F_(r,n))."""
    return _criterion_matrix_raw(rep.n, rep.ctx, list(rep.lam_raw), r)


@dataclass
class MinorOutcome:
    r: int
    witness: tuple | None
    minor_value: str | None
    subsets_checked: int
    reduction_consistent: bool

    @property
    def exhausted(self):
        return self.witness is None

    def to_payload(self):
        out = {"r": self.r, "subsets_checked": self.subsets_checked,
               "reduction_consistent": self.reduction_consistent}
        if self.witness is None:
            out["exhausted"] = True
        else:
            out["witness"] = list(self.witness)
            out["minor"] = self.minor_value
        return out


def minor_criterion(rep, r):
    """Search row subsets of size n-r against columns {r+1..n} of G_r.

    Subsets are tried in lexicographic order, so the distinguished minor with
    rows {0..n-r-1} acts as the fast path; the full search decides exhaustion.
    The two-minor reduction (distinguished minor and entry (n,n)) is evaluated
    alongside and reported for consistency.
    """
    n = rep.n
    if not 0 <= r <= n // 2:
        raise ShapeMismatch("r must lie in 0..floor(n/2)")
    g = criterion_matrix(rep, r)
    cols = list(range(r + 1, n + 1))
    witness = None
    value = None
    checked = 0
    for rows in combinations(range(n + 1), n - r):
        checked += 1
        m = g.minor(list(rows), cols)
        if not m.is_zero():
            witness, value = rows, m
            break
    distinguished = g.minor(list(range(n - r)), cols)
    corner = g[n, n]
    reduced_says_exhausted = distinguished.is_zero() and corner.is_zero()
    consistent = reduced_says_exhausted == (witness is None)
    return MinorOutcome(r, witness, None if value is None else str(value),
                        checked, consistent)


# ---------------------------------------------------------------------------
# Exact oracles: commutant and generated-algebra dimensions.
# ---------------------------------------------------------------------------

def _commutation_system(mats, size, ctx):
    zero = Scalar.zero(ctx)
    rows = []
    for s in mats:
        for i in range(size):
            for j in range(size):
                row = [zero] * (size * size)
                for a in range(size):
                    # coefficient of X_(a,j) from (S X)_(i,j)
                    row[a * size + j] = row[a * size + j] + s[i, a]
                for b in range(size):
                    # coefficient of X_(i,b) from (X S)_(i,j)
                    row[i * size + b] = row[i * size + b] - s[b, j]
                rows.append(row)
    return ExactMatrix.from_rows(rows)


def commutant_dimension(rep):
    """Dimension and basis of {A : A sigma_i = sigma_i A, i = 1, 2}.

    Dimension 1 means operator irreducible.  Every returned basis element is
    re-verified to commute with both generators.
    """
    size = rep.n + 1
    ctx = rep.sigma1.ctx
    system = _commutation_system([rep.sigma1, rep.sigma2], size, ctx)
    basis = []
    for vec in system.nullspace():
        mat = ExactMatrix.from_rows([[vec[i * size + j] for j in range(size)]
                                     for i in range(size)])
        if mat * rep.sigma1 != rep.sigma1 * mat or mat * rep.sigma2 != rep.sigma2 * mat:
            raise AssertionError("commutant basis element fails to commute")
        basis.append(mat)
    return len(basis), basis


class _EchelonSpan:
    """Incremental exact span with echelon reduction (deterministic pivots)."""

    def __init__(self, ctx, width):
        self.ctx = ctx
        self.width = width
        self.rows = []   # list of (pivot index, vector) sorted by pivot
        self.dim = 0

    def reduce(self, vec):
        vec = list(vec)
        for pivot, row in self.rows:
            c = vec[pivot]
            if not c.is_zero():
                for k in range(pivot, self.width):
                    vec[k] = vec[k] - c * row[k]
        return vec

    def insert(self, vec):
        vec = self.reduce(vec)
        pivot = next((k for k, x in enumerate(vec) if not x.is_zero()), None)
        if pivot is None:
            return False
        inv = vec[pivot].inverse()
        vec = [inv * x for x in vec]
        self.rows.append((pivot, vec))
        self.rows.sort(key=lambda pr: pr[0])
        self.dim += 1
        return True


def burnside_dimension(rep, cap=None):
    """Dimension of the unital algebra generated by the two dressed generators,
    by breadth-first span growth (words explored in insertion order, left
    multiplication by sigma_1 then sigma_2)."""
    size = rep.n + 1
    full = size * size
    cap = full if cap is None else cap
    ctx = rep.sigma1.ctx

    def flat(m):
        return [m[i, j] for i in range(size) for j in range(size)]

    span = _EchelonSpan(ctx, full)
    queue = []
    for seed in (ExactMatrix.identity(size, ctx), rep.sigma1, rep.sigma2):
        if span.insert(flat(seed)):
            queue.append(seed)
    while queue and span.dim < cap:
        current = queue.pop(0)
        for gen in (rep.sigma1, rep.sigma2):
            product = gen * current
            if span.insert(flat(product)):
                queue.append(product)
    return span.dim


# ---------------------------------------------------------------------------
# Suspected-value catalog and reducibility witnesses.
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SuspectedCatalogEntry:
    """Lambda = lambda_0 diag(zeta_s^k) over Q(zeta_s), a candidate degenerate
    point of the q=1 family."""

    n: int
    s: int
    lam: tuple

    def to_payload(self):
        return {"n": self.n, "s": self.s, "lambda": [str(v) for v in self.lam],
                "field": self.lam[0].ctx.describe()}


def suspected_catalog(n, lam0=None):
    """All root-of-unity diagonals diag(zeta_s^k), 2 <= s <= n; lambda_0
    defaults to 1 in Q(zeta_s)."""
    if n < 2:
        raise ShapeMismatch("catalog starts at n = 2")
    entries = []
    for s in range(2, n + 1):
        z = zeta(s)
        ctx = z.ctx
        scale = Scalar.one(ctx) if lam0 is None else lam0.coerce(ctx)
        entries.append(SuspectedCatalogEntry(
            n, s, tuple(scale * z ** k for k in range(n + 1))))
    return entries


def catalog_rep(entry):
    """Build the q=1 representation at a catalog point."""
    ctx = entry.lam[0].ctx
    return build_representation(raw_spec(entry.n, concrete_q(Scalar.one(ctx)),
                                         entry.lam))


def d0_determinant(n, lam):
    """The distinguished r=0 minor of sigma_1(1,n) - lambda_0 Lambda^(-1):
    rows 0..n-1 against columns 1..n."""
    if n < 2:
        raise ShapeMismatch("defined for n >= 2")
    if len(lam) != n + 1 or any(v.is_zero() for v in lam):
        raise SingularDiagonal("lambda needs n+1 nonzero entries")
    ctx = concrete_q(Scalar.one(lam[0].ctx))
    g = _criterion_matrix_raw(n, ctx, list(lam), 0)
    return g.minor(list(range(n)), list(range(1, n + 1)))


def d0_starred_check(n, lam):
    """Compare the direct minor against the closed form
    (n-1)! lambda_0^(n-2) (sum_(k<n) lambda_k) / (prod_(0<k<n) lambda_k),
    valid under lambda_r lambda_(n-r) = c with lambda_0 = lambda_n; for n = 4
    the branch lambda_2 = -lambda_0 uses the two-term sum lambda_0 + lambda_2.
    """
    direct = d0_determinant(n, lam)
    c = lam[0] * lam[n]
    for r in range(n + 1):
        if lam[r] * lam[n - r] != c:
            raise ConstraintViolated(f"(*) fails at r={r}")
    if lam[0] != lam[n]:
        raise ConstraintViolated("starred closed form needs lambda_0 = lambda_n")
    from math import factorial
    ctx = lam[0].ctx
    branch = "principal"
    if n % 2 == 0 and lam[n // 2] == -lam[0]:
        if n == 2:
            pass  # principal formula already vanishes with lambda_1 = -lambda_0
        elif n == 4:
            branch = "second"
        else:
            raise ConstraintViolated(
                "second starred branch is only available for n = 4")
    coeff = Scalar.of_fraction(factorial(n - 1), ctx) * lam[0] ** (n - 2)
    denom = lam[1]
    for k in range(2, n):
        denom = denom * lam[k]
    if branch == "second":
        total = lam[0] + lam[2]
    else:
        total = lam[0]
        for k in range(1, n):
            total = total + lam[k]
    closed = coeff * total / denom
    return {"direct": direct, "closed": closed, "match": direct == closed,
            "branch": branch}


def eigenvector_closed_forms(alpha, n):
    """e_0(alpha) and f_0(alpha), the fixed vectors of sigma_1(1,n) Lambda(alpha)
    and Lambda^#(alpha) sigma_2(1,n) with Lambda(alpha) = diag(alpha^(n-k));
    verified by multiplication."""
    one = Scalar.one(alpha.ctx)
    if alpha.is_zero() or alpha == one:
        raise AlphaDegenerate("alpha must avoid 0 and 1")
    ctx = concrete_q(one)
    mu = (one - alpha).inverse()
    nu = one - alpha.inverse()
    e0 = tuple(mu ** (n - k) for k in range(n + 1))
    f0 = tuple(nu ** (n - k) for k in range(n + 1))
    lam = ExactMatrix.diagonal([alpha ** (n - k) for k in range(n + 1)])
    op1 = sigma1_matrix(n, ctx) * lam
    op2 = lam.sharp() * sigma2_matrix(n, ctx)
    if op1.apply(e0) != e0:
        raise AssertionError("e_0(alpha) is not fixed by sigma_1 Lambda(alpha)")
    if op2.apply(f0) != f0:
        raise AssertionError("f_0(alpha) is not fixed by Lambda^#(alpha) sigma_2")
    return e0, f0


@dataclass
class WitnessReport:
    name: str
    passed: bool
    detail: dict

    def to_payload(self):
        return {"name": self.name, "passed": self.passed, **self.detail}


def fixed_vector_check(rep, vec):
    """Check sigma_1 v = v and sigma_2 v = v exactly."""
    vec = tuple(vec)
    if len(vec) != rep.n + 1:
        raise ShapeMismatch("vector length mismatch")
    im1, im2 = rep.sigma1.apply(vec), rep.sigma2.apply(vec)
    ok1, ok2 = im1 == vec, im2 == vec
    return WitnessReport("fixed-vector", ok1 and ok2,
                         {"sigma1_fixes": ok1, "sigma2_fixes": ok2,
                          "vector": [str(v) for v in vec]})


def root_of_unity_reducibility(n, s):
    """At q = zeta_s with (n)_q = 0, exhibit the middle-coordinate subspace
    {(0, t_1, ..., t_(n-1), 0)} and verify its invariance under both dressed
    generators of the Lambda' = I family."""
    if s < 2:
        raise NotAReduciblePoint("s must be at least 2")
    q = zeta(s)
    ctx = concrete_q(q)
    if not q_int(n, ctx).is_zero():
        raise NotAReduciblePoint(f"(({n}))_q != 0 at q = zeta_{s}")
    one = Scalar.one(q.ctx)
    rep = build_representation(factored_spec(n, ctx, tuple(one for _ in range(n + 1))))
    zero = Scalar.zero(q.ctx)
    basis = []
    for k in range(1, n):
        v = [zero] * (n + 1)
        v[k] = one
        basis.append(tuple(v))
    invariant = True
    for v in basis:
        for image in (rep.sigma1.apply(v), rep.sigma2.apply(v)):
            if not (image[0].is_zero() and image[n].is_zero()):
                invariant = False
    return WitnessReport("root-of-unity-subspace", invariant,
                         {"n": n, "s": s, "invariant": invariant,
                          "basis": [[str(x) for x in v] for v in basis]})


def n1_subspace_test(lam0, lam1):
    """Size-2 subspace criterion: reducible iff alpha^2 - alpha + 1 = 0 for
    alpha = lambda_1/lambda_0 (equivalently lambda_0/lambda_1 +
    lambda_1/lambda_0 - 1 = 0); cross-checked against the algebra dimension."""
    if lam0.is_zero() or lam1.is_zero():
        raise SingularDiagonal("parameters must be nonzero")
    one = Scalar.one(lam0.ctx)
    alpha = lam1 / lam0
    reducible = (alpha * alpha - alpha + one).is_zero()
    det_criterion = lam0 / lam1 + lam1 / lam0 - one
    if det_criterion.is_zero() != reducible:
        raise AssertionError("the two size-2 criteria disagree")
    rep = build_representation(raw_spec(1, concrete_q(one), (lam0, lam1)))
    dim = burnside_dimension(rep)
    if (dim < 4) != reducible:
        raise AssertionError("algebra-dimension oracle disagrees with the criterion")
    return WitnessReport("n1-subspace", True,
                         {"verdict": "reducible" if reducible else "irreducible",
                          "burnside_dim": dim})


# ---------------------------------------------------------------------------
# Intertwiners and equivalence.
# ---------------------------------------------------------------------------

def _intertwiner_system(rep_a, rep_b):
    size = rep_a.n + 1
    ctx = rep_a.sigma1.ctx
    zero = Scalar.zero(ctx)
    rows = []
    for sa, sb in ((rep_a.sigma1, rep_b.sigma1), (rep_a.sigma2, rep_b.sigma2)):
        for i in range(size):
            for j in range(size):
                row = [zero] * (size * size)
                for a in range(size):
                    row[a * size + j] = row[a * size + j] + sa[i, a]
                for b in range(size):
                    row[i * size + b] = row[i * size + b] - sb[b, j]
                rows.append(row)
    return ExactMatrix.from_rows(rows)


def intertwiner_space(rep_a, rep_b):
    """Exact basis of {C : sigma_i^A C = C sigma_i^B}; equivalence holds iff the
    space contains an invertible element.

    Invertibility is probed on each basis element and then on a small
    deterministic family of rational combinations; when none of the tested
    combinations is invertible the result is reported as undecided rather than
    as a hard negative.
    """
    if rep_a.n != rep_b.n:
        raise ShapeMismatch("intertwiners need equal dimensions")
    if rep_a.sigma1.ctx != rep_b.sigma1.ctx:
        raise ShapeMismatch("intertwiners need one common field; coerce first")
    size = rep_a.n + 1
    system = _intertwiner_system(rep_a, rep_b)
    basis = []
    for vec in system.nullspace():
        mat = ExactMatrix.from_rows([[vec[i * size + j] for j in range(size)]
                                     for i in range(size)])
        if mat * rep_b.sigma1 != rep_a.sigma1 * mat or mat * rep_b.sigma2 != rep_a.sigma2 * mat:
            raise AssertionError("intertwiner basis element fails its equations")
        basis.append(mat)
    dim = len(basis)
    invertible = None
    if dim:
        ctx = rep_a.sigma1.ctx
        candidates = [tuple(1 if i == k else 0 for i in range(dim)) for k in range(dim)]
        candidates += [tuple(1 for _ in range(dim)),
                       tuple(i + 1 for i in range(dim)),
                       tuple((-1) ** i for i in range(dim)),
                       tuple(2 ** i for i in range(dim))]
        for coeffs in candidates:
            combo = ExactMatrix.zeros(size, size, ctx)
            for c, mat in zip(coeffs, basis):
                if c:
                    combo = combo + mat.scale(integer(c, ctx))
            if not combo.determinant().is_zero():
                invertible = combo
                break
    status = "inequivalent" if dim == 0 else (
        "equivalent" if invertible is not None else "undecided")
    return {"dimension": dim, "basis": basis, "invertible": invertible,
            "status": status}


# ---------------------------------------------------------------------------
# Combined report.
# ---------------------------------------------------------------------------

@dataclass
class IrreducibilityReport:
    n: int
    q: str
    lam: list
    per_r: list
    commutant_dim: int
    burnside_dim: int
    verdict: str

    def to_payload(self):
        return {"n": self.n, "q": self.q, "lambda": self.lam,
                "per_r": [o.to_payload() for o in self.per_r],
                "commutant_dim": self.commutant_dim,
                "burnside_dim": self.burnside_dim,
                "verdict": self.verdict}


def analyze(rep):
    """Run the minor criterion for every r with both oracles and classify.

    Verdicts: commutant dimension > 1 is operator-reducible; otherwise a
    deficient algebra dimension is subspace-reducible-witnessed (reducible over
    the closure even when operator irreducible); otherwise all-r witnesses give
    operator-irreducible; anything else is inconclusive.
    """
    n = rep.n
    per_r = [minor_criterion(rep, r) for r in range(n // 2 + 1)]
    cdim, _ = commutant_dimension(rep)
    bdim = burnside_dimension(rep)
    full = (n + 1) ** 2
    all_witnessed = all(o.witness is not None for o in per_r)
    if cdim > 1:
        verdict = "operator-reducible"
    elif bdim < full:
        verdict = "subspace-reducible-witnessed"
    elif all_witnessed or cdim == 1:
        verdict = "operator-irreducible"
    else:
        verdict = "inconclusive"
    return IrreducibilityReport(n, str(rep.ctx.q), [str(v) for v in rep.lam_raw],
                                per_r, cdim, bdim, verdict)

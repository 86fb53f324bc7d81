"""Dense exact linear algebra over any Scalar field.

Matrices are immutable, 0-indexed, row-major grids of Scalars sharing one
FieldContext.  Elimination uses plain Gauss-Jordan over the field with the
first nonzero entry down each column as pivot, so every basis and inverse is
deterministic and reproducible.

Index conventions for the three involutions on an (n+1)x(n+1) matrix:
t is the ordinary transpose, s reflects in the antidiagonal
(a^s_ij = a_{n-j,n-i}), and sharp rotates by a half turn
(a^#_ij = a_{n-i,n-j}); sharp = s . t = t . s.
"""

from __future__ import annotations

from itertools import permutations

from .errors import FieldMismatch, NonSquare, ShapeMismatch, Singular
from .scalar import Scalar


class ExactMatrix:
    """Immutable dense matrix of Scalars over a single field context."""

    __slots__ = ("rows", "cols", "ctx", "_e")

    def __init__(self, rows, cols, ctx, entries):
        self.rows = rows
        self.cols = cols
        self.ctx = ctx
        self._e = entries

    @classmethod
    def from_rows(cls, rows):
        rows = [list(r) for r in rows]
        if not rows or not rows[0]:
            raise ShapeMismatch("matrix needs at least one entry")
        width = len(rows[0])
        ctx = rows[0][0].ctx
        for r in rows:
            if len(r) != width:
                raise ShapeMismatch("ragged rows")
            for x in r:
                if x.ctx != ctx:
                    raise FieldMismatch("mixed field contexts in matrix")
        return cls(len(rows), width, ctx, tuple(tuple(r) for r in rows))

    @classmethod
    def from_fn(cls, rows, cols, ctx, fn):
        return cls(rows, cols, ctx, tuple(tuple(fn(i, j) for j in range(cols))
                                          for i in range(rows)))

    @classmethod
    def identity(cls, n, ctx):
        one, zero = Scalar.one(ctx), Scalar.zero(ctx)
        return cls.from_fn(n, n, ctx, lambda i, j: one if i == j else zero)

    @classmethod
    def zeros(cls, rows, cols, ctx):
        zero = Scalar.zero(ctx)
        return cls(rows, cols, ctx, tuple((zero,) * cols for _ in range(rows)))

    @classmethod
    def diagonal(cls, entries):
        entries = list(entries)
        ctx = entries[0].ctx
        zero = Scalar.zero(ctx)
        n = len(entries)
        return cls.from_fn(n, n, ctx, lambda i, j: entries[i] if i == j else zero)

    # -- access ---------------------------------------------------------------

    def __getitem__(self, ij):
        i, j = ij
        return self._e[i][j]

    def row(self, i):
        return self._e[i]

    def col(self, j):
        return tuple(self._e[i][j] for i in range(self.rows))

    def entries(self):
        return self._e

    def to_lists(self):
        return [list(r) for r in self._e]

    def to_strs(self):
        return [[str(x) for x in r] for r in self._e]

    def diagonal_entries(self):
        return tuple(self._e[i][i] for i in range(min(self.rows, self.cols)))

    # -- structure predicates ---------------------------------------------------

    def is_square(self):
        return self.rows == self.cols

    def is_upper_triangular(self):
        return all(self._e[i][j].is_zero()
                   for i in range(self.rows) for j in range(min(i, self.cols)))

    def is_unit_upper_triangular(self):
        return self.is_square() and self.is_upper_triangular() \
            and all(self._e[i][i].is_one() for i in range(self.rows))

    def is_strictly_upper_triangular(self):
        return all(self._e[i][j].is_zero()
                   for i in range(self.rows) for j in range(min(i + 1, self.cols)))

    # -- arithmetic ---------------------------------------------------------------

    def _check_same_field(self, other):
        if self.ctx != other.ctx:
            raise FieldMismatch("matrices over different fields")

    def __add__(self, other):
        self._check_same_field(other)
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise ShapeMismatch("addition of different shapes")
        return ExactMatrix(self.rows, self.cols, self.ctx,
                           tuple(tuple(a + b for a, b in zip(ra, rb))
                                 for ra, rb in zip(self._e, other._e)))

    def __sub__(self, other):
        return self + (-other)

    def __neg__(self):
        return ExactMatrix(self.rows, self.cols, self.ctx,
                           tuple(tuple(-a for a in r) for r in self._e))

    def __mul__(self, other):
        if isinstance(other, Scalar):
            return self.scale(other)
        self._check_same_field(other)
        if self.cols != other.rows:
            raise ShapeMismatch(f"{self.rows}x{self.cols} times {other.rows}x{other.cols}")
        cols_b = [other.col(j) for j in range(other.cols)]
        out = []
        for i in range(self.rows):
            ra = self._e[i]
            out_row = []
            for j in range(other.cols):
                cb = cols_b[j]
                acc = ra[0] * cb[0]
                for k in range(1, self.cols):
                    acc = acc + ra[k] * cb[k]
                out_row.append(acc)
            out.append(tuple(out_row))
        return ExactMatrix(self.rows, other.cols, self.ctx, tuple(out))

    def __rmul__(self, other):
        if isinstance(other, Scalar):
            return self.scale(other)
        return NotImplemented

    def scale(self, s):
        if s.ctx != self.ctx:
            raise FieldMismatch("scalar from a different field")
        return ExactMatrix(self.rows, self.cols, self.ctx,
                           tuple(tuple(s * a for a in r) for r in self._e))

    def apply(self, vec):
        """Matrix-vector product; vec is a tuple of Scalars."""
        if len(vec) != self.cols:
            raise ShapeMismatch("vector length mismatch")
        out = []
        for i in range(self.rows):
            acc = self._e[i][0] * vec[0]
            for k in range(1, self.cols):
                acc = acc + self._e[i][k] * vec[k]
            out.append(acc)
        return tuple(out)

    def __eq__(self, other):
        if not isinstance(other, ExactMatrix):
            return NotImplemented
        return (self.rows, self.cols) == (other.rows, other.cols) \
            and self.ctx == other.ctx and self._e == other._e

    def __hash__(self):
        return hash((self.rows, self.cols, self._e))

    def map_entries(self, fn):
        return ExactMatrix.from_rows([[fn(x) for x in r] for r in self._e])

    def coerce(self, ctx):
        return self.map_entries(lambda x: x.coerce(ctx))

    # -- involutions -----------------------------------------------------------

    def transpose_t(self):
        return ExactMatrix(self.cols, self.rows, self.ctx,
                           tuple(tuple(self._e[i][j] for i in range(self.rows))
                                 for j in range(self.cols)))

    def transpose_s(self):
        if not self.is_square():
            raise NonSquare("antidiagonal transpose needs a square matrix")
        n = self.rows - 1
        return ExactMatrix.from_fn(self.rows, self.cols, self.ctx,
                                   lambda i, j: self._e[n - j][n - i])

    def sharp(self):
        if not self.is_square():
            raise NonSquare("sharp needs a square matrix")
        n = self.rows - 1
        return ExactMatrix.from_fn(self.rows, self.cols, self.ctx,
                                   lambda i, j: self._e[n - i][n - j])

    # -- elimination-based operations ------------------------------------------

    def inverse(self):
        """Gauss-Jordan inverse with first-nonzero pivoting."""
        if not self.is_square():
            raise NonSquare("inverse needs a square matrix")
        n = self.rows
        ctx = self.ctx
        aug = [list(self._e[i]) + list(ExactMatrix.identity(n, ctx).row(i))
               for i in range(n)]
        for col in range(n):
            piv = next((r for r in range(col, n) if not aug[r][col].is_zero()), None)
            if piv is None:
                raise Singular("matrix is singular")
            if piv != col:
                aug[col], aug[piv] = aug[piv], aug[col]
            inv = aug[col][col].inverse()
            aug[col] = [inv * x for x in aug[col]]
            for r in range(n):
                if r != col and not aug[r][col].is_zero():
                    f = aug[r][col]
                    aug[r] = [x - f * y for x, y in zip(aug[r], aug[col])]
        return ExactMatrix.from_rows([row[n:] for row in aug])

    def determinant(self):
        """Exact elimination determinant; the empty 0x0 determinant is 1."""
        if not self.is_square():
            raise NonSquare("determinant needs a square matrix")
        n = self.rows
        if n == 0:
            return Scalar.one(self.ctx)
        a = [list(r) for r in self._e]
        det = Scalar.one(self.ctx)
        for col in range(n):
            piv = next((r for r in range(col, n) if not a[r][col].is_zero()), None)
            if piv is None:
                return Scalar.zero(self.ctx)
            if piv != col:
                a[col], a[piv] = a[piv], a[col]
                det = -det
            det = det * a[col][col]
            inv = a[col][col].inverse()
            for r in range(col + 1, n):
                if not a[r][col].is_zero():
                    f = a[r][col] * inv
                    a[r] = [x - f * y for x, y in zip(a[r], a[col])]
        return det

    def submatrix(self, rows, cols):
        rows, cols = list(rows), list(cols)
        for i in rows:
            if not 0 <= i < self.rows:
                raise ShapeMismatch("row index out of bounds")
        for j in cols:
            if not 0 <= j < self.cols:
                raise ShapeMismatch("column index out of bounds")
        return ExactMatrix(len(rows), len(cols), self.ctx,
                           tuple(tuple(self._e[i][j] for j in cols) for i in rows))

    def minor(self, rows, cols):
        """Determinant of the selected submatrix; index sets must match in size."""
        rows, cols = _index_subset(rows, self.rows), _index_subset(cols, self.cols)
        if len(rows) != len(cols):
            raise ShapeMismatch("minor needs equally many rows and columns")
        return self.submatrix(rows, cols).determinant()

    def cofactor(self, rows, cols):
        """Signed complementary minor: (-1)^(sum rows + sum cols) times the minor
        of the complementary index sets."""
        rows, cols = _index_subset(rows, self.rows), _index_subset(cols, self.cols)
        if len(rows) != len(cols):
            raise ShapeMismatch("cofactor needs equally many rows and columns")
        crows = [i for i in range(self.rows) if i not in set(rows)]
        ccols = [j for j in range(self.cols) if j not in set(cols)]
        value = self.minor(crows, ccols)
        return -value if (sum(rows) + sum(cols)) % 2 else value

    def rref(self):
        """(reduced rows, pivot column list); rows include the zero tail."""
        m = [list(r) for r in self._e]
        pivots = []
        r = 0
        for col in range(self.cols):
            piv = next((i for i in range(r, self.rows) if not m[i][col].is_zero()), None)
            if piv is None:
                continue
            m[r], m[piv] = m[piv], m[r]
            inv = m[r][col].inverse()
            m[r] = [inv * x for x in m[r]]
            for i in range(self.rows):
                if i != r and not m[i][col].is_zero():
                    f = m[i][col]
                    m[i] = [x - f * y for x, y in zip(m[i], m[r])]
            pivots.append(col)
            r += 1
            if r == self.rows:
                break
        return m, pivots

    def rank(self):
        return len(self.rref()[1])

    def nullspace(self):
        """Exact basis of the right kernel, one vector per free column, each
        normalized so its first nonzero coordinate is 1."""
        m, pivots = self.rref()
        pivot_set = set(pivots)
        free = [j for j in range(self.cols) if j not in pivot_set]
        zero, one = Scalar.zero(self.ctx), Scalar.one(self.ctx)
        basis = []
        for f in free:
            vec = [zero] * self.cols
            vec[f] = one
            for r, pc in enumerate(pivots):
                vec[pc] = -m[r][f]
            lead = next(x for x in vec if not x.is_zero())
            if not lead.is_one():
                inv = lead.inverse()
                vec = [inv * x for x in vec]
            basis.append(tuple(vec))
        return basis

    # -- output -----------------------------------------------------------------

    def __str__(self):
        return "\n".join("  ".join(str(x) for x in r) for r in self._e)

    def __repr__(self):
        return f"ExactMatrix({self.rows}x{self.cols} over {self.ctx.describe()})\n{self}"


def _index_subset(indices, bound):
    out = list(indices)
    if any(not 0 <= i < bound for i in out):
        raise ShapeMismatch("index out of bounds")
    if any(b <= a for a, b in zip(out, out[1:])):
        raise ShapeMismatch("index subset must be strictly increasing")
    return out


def generalized_charpoly(c, lam):
    """det(C + sum_k lam_k E_kk), computed directly and by the cofactor-sum
    expansion over diagonal index subsets; the two routes must agree."""
    if not c.is_square():
        raise NonSquare("generalized characteristic polynomial needs a square matrix")
    m = c.rows
    if len(lam) != m:
        raise ShapeMismatch("diagonal shift length must match the matrix size")
    shifted = c + ExactMatrix.diagonal(list(lam)) if m else c
    direct = shifted.determinant()
    total = Scalar.zero(c.ctx)
    for mask in range(1 << m):
        subset = [k for k in range(m) if mask >> k & 1]
        coeff = Scalar.one(c.ctx)
        for k in subset:
            coeff = coeff * lam[k]
        complement = [k for k in range(m) if not mask >> k & 1]
        total = total + coeff * c.minor(complement, complement)
    if total != direct:
        raise AssertionError("generalized charpoly expansion disagrees with direct determinant")
    return direct


def superdiagonal_component(a, k):
    """The k-th diagonal component A_k of the decomposition A = sum_r A_r."""
    if not a.is_square():
        raise NonSquare("diagonal decomposition needs a square matrix")
    zero = Scalar.zero(a.ctx)
    return ExactMatrix.from_fn(a.rows, a.cols, a.ctx,
                               lambda i, j: a[i, j] if j - i == k else zero)


def det_by_permutations(a):
    """Brute-force Leibniz determinant (test oracle; factorial cost)."""
    if not a.is_square():
        raise NonSquare("determinant needs a square matrix")
    n = a.rows
    total = Scalar.zero(a.ctx)
    for perm in permutations(range(n)):
        sign = 1
        seen = [False] * n
        for i in range(n):
            if not seen[i]:
                j, length = i, 0
                while not seen[j]:
                    seen[j] = True
                    j = perm[j]
                    length += 1
                if length % 2 == 0:
                    sign = -sign
        term = a[0, perm[0]] if n else Scalar.one(a.ctx)
        for i in range(1, n):
            term = term * a[i, perm[i]]
        total = (total + term) if sign > 0 else (total - term)
    return total

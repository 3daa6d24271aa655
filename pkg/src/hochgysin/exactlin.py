"""Exact linear algebra over Z, Q and prime fields.

Everything downstream (cochain algebras, section packages, Hochschild
solves, cone cohomology) reduces to the operations in this module:
Smith normal form with recorded transforms, column Hermite form, exact
solvers, kernels/images, subquotient presentations, and sections of
surjections.  No floating point is used anywhere: scalars are Python
ints, ``fractions.Fraction``, or ints reduced mod p.

Matrices are stored densely as 2-D numpy arrays of dtype=object so that
row/column operations and products run through numpy's C loop while the
entries stay exact.

Pivot rule (fixed for reproducibility): among the nonzero candidates,
pick the smallest ``ring.pivot_size``; ties broken by lowest (row, col).
Over Z pivot_size is abs(); over fields every nonzero entry has size 1,
so the rule degenerates to first-nonzero in scan order.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np


class ExactLinearError(Exception):
    """Base class for errors raised by this module."""


class DimensionMismatchError(ExactLinearError):
    pass


class NotSurjectiveError(ExactLinearError):
    pass


class TargetNotProjectiveError(ExactLinearError):
    pass


class NotInSpanError(ExactLinearError):
    pass


# ---------------------------------------------------------------------------
# Coefficient rings
# ---------------------------------------------------------------------------

class Ring:
    """A supported coefficient ring: Z, Q or F_p (p prime).

    Scalars are plain Python values (int / Fraction / int in [0, p)),
    the Ring object only carries the arithmetic conventions.
    """

    __slots__ = ("tag", "p")

    def __init__(self, tag: str, p: int | None = None):
        if tag not in ("Z", "Q", "Fp"):
            raise ValueError(f"unknown ring tag {tag!r}")
        if tag == "Fp":
            if p is None or p < 2 or any(p % q == 0 for q in range(2, int(p ** 0.5) + 1)):
                raise ValueError(f"modulus {p} is not prime")
        self.tag = tag
        self.p = p

    # -- identity / naming

    @property
    def name(self) -> str:
        return {"Z": "Z", "Q": "Q"}.get(self.tag, f"F{self.p}")

    @property
    def is_field(self) -> bool:
        return self.tag != "Z"

    def __eq__(self, other):
        return isinstance(other, Ring) and self.tag == other.tag and self.p == other.p

    def __hash__(self):
        return hash((self.tag, self.p))

    def __repr__(self):
        return f"Ring({self.name})"

    # -- scalar arithmetic

    def normalize(self, x):
        if self.tag == "Q":
            return Fraction(x)
        if isinstance(x, Fraction):
            if x.denominator != 1:
                raise ValueError(f"{x} is not an integer")
            x = x.numerator
        return int(x) if self.tag == "Z" else int(x) % self.p

    def zero(self):
        return Fraction(0) if self.tag == "Q" else 0

    def one(self):
        return Fraction(1) if self.tag == "Q" else 1

    def neg(self, x):
        return self.normalize(-x)

    def is_unit(self, x) -> bool:
        x = self.normalize(x)
        if self.tag == "Z":
            return x in (1, -1)
        return x != 0

    def inv(self, x):
        x = self.normalize(x)
        if self.tag == "Z":
            if x in (1, -1):
                return x
            raise ZeroDivisionError(f"{x} is not a unit in Z")
        if self.tag == "Q":
            return Fraction(1) / x
        return pow(x, self.p - 2, self.p)

    def divides(self, a, b) -> bool:
        """True when a | b (for a = 0 this means b = 0)."""
        a, b = self.normalize(a), self.normalize(b)
        if a == self.zero():
            return b == self.zero()
        if self.tag == "Z":
            return b % a == 0
        return True

    def exact_div(self, b, a):
        """b / a, defined only when a | b."""
        a, b = self.normalize(a), self.normalize(b)
        if self.tag == "Z":
            if a == 0 or b % a != 0:
                raise ZeroDivisionError(f"{a} does not divide {b} in Z")
            return b // a
        if a == self.zero():
            raise ZeroDivisionError("division by zero")
        if self.tag == "Q":
            return b / a
        return (b * self.inv(a)) % self.p

    def pivot_size(self, x) -> int:
        if self.tag == "Z":
            return abs(x)
        return 1

    def canonical_unit(self, x):
        """Unit u with u*x 'positive': over Z the sign, over fields x itself."""
        if x == self.zero():
            return self.one()
        if self.tag == "Z":
            return 1 if x > 0 else -1
        return self.inv(x)

    # -- array helpers (dtype=object everywhere)

    def reduce_array(self, arr: np.ndarray) -> np.ndarray:
        if self.tag == "Fp":
            return arr % self.p
        return arr

    # -- serialization of scalars

    def scalar_to_json(self, x):
        x = self.normalize(x)
        if self.tag == "Q":
            return int(x) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"
        return int(x)

    def scalar_from_json(self, v):
        if isinstance(v, str):
            num, _, den = v.partition("/")
            return self.normalize(Fraction(int(num), int(den or 1)))
        return self.normalize(v)

    def to_json(self) -> str:
        return self.name

    @staticmethod
    def from_json(name: str) -> "Ring":
        return ring_from_name(name)


ZZ = Ring("Z")
QQ = Ring("Q")


def GF(p: int) -> Ring:
    return Ring("Fp", p)


def ring_from_name(name: str) -> Ring:
    if name == "Z":
        return ZZ
    if name == "Q":
        return QQ
    if name.startswith("F"):
        return GF(int(name[1:]))
    raise ValueError(f"unknown ring name {name!r}")


# ---------------------------------------------------------------------------
# Matrices and vectors
# ---------------------------------------------------------------------------

def as_vector(ring: Ring, entries) -> np.ndarray:
    """1-D object array of normalized scalars."""
    v = np.empty(len(entries), dtype=object)
    for i, x in enumerate(entries):
        v[i] = ring.normalize(x)
    return v


def zero_vector(ring: Ring, n: int) -> np.ndarray:
    v = np.empty(n, dtype=object)
    v[:] = ring.zero()
    return v


def vec_is_zero(v: np.ndarray) -> bool:
    return all(x == 0 for x in v)


class ExactMatrix:
    """Dense matrix over a Ring; entries are exact scalars (dtype=object)."""

    __slots__ = ("ring", "data")

    def __init__(self, ring: Ring, data: np.ndarray):
        if data.dtype != object or data.ndim != 2:
            raise ValueError("ExactMatrix wants a 2-D object array")
        self.ring = ring
        self.data = data

    # -- constructors

    @staticmethod
    def from_rows(ring: Ring, rows) -> "ExactMatrix":
        rows = list(rows)
        ncols = len(rows[0]) if rows else 0
        m = np.empty((len(rows), ncols), dtype=object)
        for i, row in enumerate(rows):
            if len(row) != ncols:
                raise ValueError("ragged rows")
            for j, x in enumerate(row):
                m[i, j] = ring.normalize(x)
        return ExactMatrix(ring, m)

    @staticmethod
    def zeros(ring: Ring, rows: int, cols: int) -> "ExactMatrix":
        m = np.empty((rows, cols), dtype=object)
        m[:] = ring.zero()
        return ExactMatrix(ring, m)

    @staticmethod
    def identity(ring: Ring, n: int) -> "ExactMatrix":
        m = ExactMatrix.zeros(ring, n, n)
        one = ring.one()
        for i in range(n):
            m.data[i, i] = one
        return m

    @staticmethod
    def from_columns(ring: Ring, cols, nrows: int | None = None) -> "ExactMatrix":
        cols = list(cols)
        if not cols:
            if nrows is None:
                raise ValueError("need nrows for an empty column list")
            return ExactMatrix.zeros(ring, nrows, 0)
        n = len(cols[0])
        m = ExactMatrix.zeros(ring, n, len(cols))
        for j, c in enumerate(cols):
            for i, x in enumerate(c):
                m.data[i, j] = ring.normalize(x)
        return m

    # -- shape

    @property
    def rows(self) -> int:
        return self.data.shape[0]

    @property
    def cols(self) -> int:
        return self.data.shape[1]

    def copy(self) -> "ExactMatrix":
        return ExactMatrix(self.ring, self.data.copy())

    # -- arithmetic

    def __matmul__(self, other):
        if isinstance(other, ExactMatrix):
            if self.cols != other.rows:
                raise DimensionMismatchError(
                    f"{self.rows}x{self.cols} @ {other.rows}x{other.cols}")
            if self.cols == 0:
                return ExactMatrix.zeros(self.ring, self.rows, other.cols)
            return ExactMatrix(self.ring, self.ring.reduce_array(self.data @ other.data))
        raise TypeError("use matvec for vectors")

    def matvec(self, v: np.ndarray) -> np.ndarray:
        if self.cols != len(v):
            raise DimensionMismatchError(f"{self.rows}x{self.cols} @ len-{len(v)}")
        if self.cols == 0:
            return zero_vector(self.ring, self.rows)
        return self.ring.reduce_array(self.data @ v)

    def __add__(self, other: "ExactMatrix") -> "ExactMatrix":
        return ExactMatrix(self.ring, self.ring.reduce_array(self.data + other.data))

    def __sub__(self, other: "ExactMatrix") -> "ExactMatrix":
        return ExactMatrix(self.ring, self.ring.reduce_array(self.data - other.data))

    def __neg__(self) -> "ExactMatrix":
        return ExactMatrix(self.ring, self.ring.reduce_array(-self.data))

    def scale(self, c) -> "ExactMatrix":
        c = self.ring.normalize(c)
        return ExactMatrix(self.ring, self.ring.reduce_array(c * self.data))

    def transpose(self) -> "ExactMatrix":
        return ExactMatrix(self.ring, self.data.T.copy())

    def hstack(self, other: "ExactMatrix") -> "ExactMatrix":
        if self.rows != other.rows:
            raise DimensionMismatchError("hstack row mismatch")
        return ExactMatrix(self.ring, np.hstack([self.data, other.data]))

    def column(self, j: int) -> np.ndarray:
        return self.data[:, j].copy()

    def take_columns(self, idx) -> "ExactMatrix":
        return ExactMatrix(self.ring, self.data[:, list(idx)].copy())

    def take_rows(self, idx) -> "ExactMatrix":
        return ExactMatrix(self.ring, self.data[list(idx), :].copy())

    # -- predicates

    def is_zero(self) -> bool:
        return all(x == 0 for x in self.data.flat)

    def __eq__(self, other):
        return (isinstance(other, ExactMatrix) and self.ring == other.ring
                and self.data.shape == other.data.shape
                and all(a == b for a, b in zip(self.data.flat, other.data.flat)))

    def __hash__(self):
        return hash((self.ring, self.data.shape,
                     tuple(self.ring.scalar_to_json(x) for x in self.data.flat)))

    def __repr__(self):
        return f"ExactMatrix({self.ring.name}, {self.rows}x{self.cols})"

    # -- serialization

    def to_lists(self):
        return [[self.ring.scalar_to_json(x) for x in row] for row in self.data]

    @staticmethod
    def from_lists(ring: Ring, rows, shape=None) -> "ExactMatrix":
        if shape is not None and not rows:
            return ExactMatrix.zeros(ring, shape[0], shape[1])
        return ExactMatrix.from_rows(ring, [[ring.scalar_from_json(x) for x in row]
                                            for row in rows])


def kron(a: ExactMatrix, b: ExactMatrix) -> ExactMatrix:
    """Kronecker product, row/col indices flattened row-major."""
    ring = a.ring
    out = np.empty((a.rows * b.rows, a.cols * b.cols), dtype=object)
    for i in range(a.rows):
        for j in range(a.cols):
            out[i * b.rows:(i + 1) * b.rows, j * b.cols:(j + 1) * b.cols] = a.data[i, j] * b.data
    return ExactMatrix(ring, ring.reduce_array(out))


# ---------------------------------------------------------------------------
# Smith normal form
# ---------------------------------------------------------------------------

@dataclass
class SNFResult:
    """U @ M @ V == D with U, V invertible over the ring.

    divisors = the nonzero diagonal of D (d_i | d_{i+1}); rank = len(divisors).
    Uinv/Vinv are maintained alongside so callers get exact inverses for free.
    """

    U: ExactMatrix
    D: ExactMatrix
    V: ExactMatrix
    Uinv: ExactMatrix
    Vinv: ExactMatrix
    rank: int
    divisors: list

    def __iter__(self):
        return iter((self.U, self.D, self.V))


def _find_pivot(ring: Ring, M: np.ndarray, start: int):
    """Smallest pivot_size among M[start:, start:], ties by lowest (row, col)."""
    best = None
    rows, cols = M.shape
    for i in range(start, rows):
        row = M[i]
        for j in range(start, cols):
            x = row[j]
            if x != 0:
                s = ring.pivot_size(x)
                if best is None or s < best[0]:
                    best = (s, i, j)
                    if s == 1:
                        return best  # nothing beats a unit-size pivot...
        # ...except an earlier one in scan order, which we already prefer
    return best


def smith_normal_form(M: ExactMatrix) -> SNFResult:
    """Diagonalize M by invertible row/column operations, tracking transforms."""
    ring = M.ring
    A = M.data.copy()
    rows, cols = A.shape
    U = ExactMatrix.identity(ring, rows).data
    Uinv = ExactMatrix.identity(ring, rows).data
    V = ExactMatrix.identity(ring, cols).data
    Vinv = ExactMatrix.identity(ring, cols).data

    def row_axpy(dst, src, q):
        # row_dst -= q * row_src on A and U; column op on Uinv
        A[dst] = ring.reduce_array(A[dst] - q * A[src])
        U[dst] = ring.reduce_array(U[dst] - q * U[src])
        Uinv[:, src] = ring.reduce_array(Uinv[:, src] + q * Uinv[:, dst])

    def col_axpy(dst, src, q):
        A[:, dst] = ring.reduce_array(A[:, dst] - q * A[:, src])
        V[:, dst] = ring.reduce_array(V[:, dst] - q * V[:, src])
        Vinv[src] = ring.reduce_array(Vinv[src] + q * Vinv[dst])

    def row_swap(i, j):
        if i != j:
            A[[i, j]] = A[[j, i]]
            U[[i, j]] = U[[j, i]]
            Uinv[:, [i, j]] = Uinv[:, [j, i]]

    def col_swap(i, j):
        if i != j:
            A[:, [i, j]] = A[:, [j, i]]
            V[:, [i, j]] = V[:, [j, i]]
            Vinv[[i, j]] = Vinv[[j, i]]

    def row_scale(i, u):
        # multiply row i by the unit u
        A[i] = ring.reduce_array(u * A[i])
        U[i] = ring.reduce_array(u * U[i])
        Uinv[:, i] = ring.reduce_array(ring.inv(u) * Uinv[:, i])

    t = 0
    while True:
        piv = _find_pivot(ring, A, t)
        if piv is None:
            break
        _, pi, pj = piv
        row_swap(t, pi)
        col_swap(t, pj)
        while True:
            # clear column t below the pivot
            progress = False
            for i in range(t + 1, rows):
                x = A[i, t]
                if x != 0:
                    if ring.is_field:
                        q = ring.exact_div(x, A[t, t])
                        row_axpy(i, t, q)
                    else:
                        q = x // A[t, t]  # floor division keeps |remainder| < |pivot|
                        if q:
                            row_axpy(i, t, q)
                        if A[i, t] != 0:
                            row_swap(t, i)  # remainder is strictly smaller: Euclid
                            progress = True
            if progress:
                continue
            for j in range(t + 1, cols):
                x = A[t, j]
                if x != 0:
                    if ring.is_field:
                        q = ring.exact_div(x, A[t, t])
                        col_axpy(j, t, q)
                    else:
                        q = x // A[t, t]
                        if q:
                            col_axpy(j, t, q)
                        if A[t, j] != 0:
                            col_swap(t, j)
                            progress = True
            if progress:
                continue
            # pivot must divide every remaining entry; if not, fold the
            # offending row in and restart the euclidean reduction
            if not ring.is_field:
                offender = None
                p = A[t, t]
                for i in range(t + 1, rows):
                    for j in range(t + 1, cols):
                        if A[i, j] % p != 0:
                            offender = i
                            break
                    if offender is not None:
                        break
                if offender is not None:
                    row_axpy(t, offender, ring.normalize(-1))
                    continue
            break
        u = ring.canonical_unit(A[t, t])
        if u != ring.one():
            row_scale(t, u)
        t += 1

    divisors = [A[i, i] for i in range(min(rows, cols)) if A[i, i] != 0]
    return SNFResult(ExactMatrix(ring, U), ExactMatrix(ring, A), ExactMatrix(ring, V),
                     ExactMatrix(ring, Uinv), ExactMatrix(ring, Vinv),
                     len(divisors), divisors)


# ---------------------------------------------------------------------------
# Column Hermite form (independent span oracle), solve, kernel, image
# ---------------------------------------------------------------------------

def column_hermite(M: ExactMatrix) -> ExactMatrix:
    """Canonical column echelon form of M (column operations only).

    Over Z: pivots positive, entries left of a pivot in its row reduced to
    [0, pivot); over a field: pivots 1, other entries in pivot rows 0.
    Zero columns are dropped.  Two matrices have equal column span iff
    their forms are equal, which is the independent oracle behind solve().
    """
    ring = M.ring
    A = M.data.copy()
    rows, cols = A.shape
    pivot_col = 0
    pivots = []
    for r in range(rows):
        if pivot_col >= cols:
            break
        # euclidean elimination across columns pivot_col.. in row r
        while True:
            nz = [j for j in range(pivot_col, cols) if A[r, j] != 0]
            if len(nz) <= 1:
                break
            nz.sort(key=lambda j: (ring.pivot_size(A[r, j]), j))
            p = nz[0]
            for j in nz[1:]:
                if ring.is_field:
                    q = ring.exact_div(A[r, j], A[r, p])
                else:
                    q = A[r, j] // A[r, p]
                if q:
                    A[:, j] = ring.reduce_array(A[:, j] - q * A[:, p])
        nz = [j for j in range(pivot_col, cols) if A[r, j] != 0]
        if not nz:
            continue
        j = nz[0]
        if j != pivot_col:
            A[:, [pivot_col, j]] = A[:, [j, pivot_col]]
        u = ring.canonical_unit(A[r, pivot_col])
        if u != ring.one():
            A[:, pivot_col] = ring.reduce_array(u * A[:, pivot_col])
        # reduce earlier columns against this pivot for canonicity
        for j in range(pivot_col):
            x = A[r, j]
            if x != 0:
                if ring.is_field:
                    q = ring.exact_div(x, A[r, pivot_col])
                else:
                    q = x // A[r, pivot_col]  # leaves remainder in [0, pivot)
                if q:
                    A[:, j] = ring.reduce_array(A[:, j] - q * A[:, pivot_col])
        pivots.append(pivot_col)
        pivot_col += 1
    return ExactMatrix(ring, A[:, :pivot_col].copy() if pivot_col else
                       np.empty((rows, 0), dtype=object))


@dataclass
class NoSolutionCertificate:
    """Witness that M x = b has no solution over the ring.

    row @ M is divisible by `divisor` entrywise-in-the-lattice sense
    (row @ M == divisor * integral row), while row @ b is not divisible
    by `divisor` (divisor == 0 encodes: row @ M == 0 but row @ b != 0).
    """

    row: np.ndarray
    divisor: object
    value: object

    def check(self, M: ExactMatrix, b: np.ndarray) -> bool:
        ring = M.ring
        lhs = ring.reduce_array(self.row @ M.data) if M.cols else zero_vector(ring, 0)
        val = ring.normalize(sum(self.row * b, ring.zero()))
        if self.divisor == 0:
            return all(x == 0 for x in lhs) and val != 0
        return (all(ring.divides(self.divisor, x) for x in lhs)
                and not ring.divides(self.divisor, val))


class _Solver:
    """Reusable exact solver for M x = b with many right-hand sides."""

    def __init__(self, M: ExactMatrix):
        self.M = M
        self.snf = smith_normal_form(M)
        self.ring = M.ring

    def solve(self, b: np.ndarray):
        ring, s = self.ring, self.snf
        if len(b) != self.M.rows:
            raise DimensionMismatchError("rhs length mismatch")
        c = s.U.matvec(b)
        y = zero_vector(ring, self.M.cols)
        for i in range(self.M.rows):
            if i < s.rank:
                d = s.divisors[i]
                if not ring.divides(d, c[i]):
                    return None
                y[i] = ring.exact_div(c[i], d)
            elif c[i] != 0:
                return None
        return s.V.matvec(y)

    def certificate(self, b: np.ndarray) -> NoSolutionCertificate | None:
        ring, s = self.ring, self.snf
        c = s.U.matvec(b)
        for i in range(self.M.rows):
            if i < s.rank:
                if not ring.divides(s.divisors[i], c[i]):
                    return NoSolutionCertificate(s.U.data[i].copy(), s.divisors[i], c[i])
            elif c[i] != 0:
                return NoSolutionCertificate(s.U.data[i].copy(), ring.zero(), c[i])
        return None


def solve(M: ExactMatrix, b: np.ndarray):
    """One exact solution of M x = b, or None.  Deterministic."""
    return _Solver(M).solve(b)


def solve_with_certificate(M: ExactMatrix, b: np.ndarray):
    """(solution, None) or (None, NoSolutionCertificate)."""
    s = _Solver(M)
    x = s.solve(b)
    if x is not None:
        return x, None
    return None, s.certificate(b)


def solve_matrix(M: ExactMatrix, B: ExactMatrix):
    """X with M @ X == B (columnwise), or None."""
    s = _Solver(M)
    cols = []
    for j in range(B.cols):
        x = s.solve(B.column(j))
        if x is None:
            return None
        cols.append(x)
    return ExactMatrix.from_columns(M.ring, cols, nrows=M.cols)


def kernel_basis(M: ExactMatrix) -> ExactMatrix:
    """Columns form a basis of Ker(M) (over Z: a basis of the full lattice)."""
    s = smith_normal_form(M)
    return s.V.take_columns(range(s.rank, M.cols))


def image_basis(M: ExactMatrix) -> ExactMatrix:
    """Columns form a basis of the column span (over Z: column Hermite form)."""
    return column_hermite(M)


# ---------------------------------------------------------------------------
# Subquotients
# ---------------------------------------------------------------------------

@dataclass
class Subquotient:
    """A subquotient span(generators)/span(relations) of a free ambient module.

    reduced_gens / orders give a normalized presentation: the class group is
    the direct sum of cyclic groups of the listed orders (0 = free summand);
    order-1 generators are dropped.  classify() writes the class of an
    ambient vector in these coordinates, canonically.
    """

    ring: Ring
    ambient_rank: int
    generators: ExactMatrix
    relations: ExactMatrix
    invariant_factors: list = field(default_factory=list)
    reduced_gens: ExactMatrix = None
    orders: list = field(default_factory=list)
    _basis: ExactMatrix = None      # canonical basis of span(generators)
    _gen_solver: _Solver = None
    _coord_map: ExactMatrix = None  # basis-coords -> reduced coords (U of rel SNF)
    _kept: list = field(default_factory=list)

    @staticmethod
    def from_gens_rels(ring: Ring, generators: ExactMatrix,
                       relations: ExactMatrix | None = None) -> "Subquotient":
        ambient = generators.rows
        if relations is None:
            relations = ExactMatrix.zeros(ring, ambient, 0)
        sq = Subquotient(ring, ambient, generators, relations)
        sq._build()
        return sq

    def _build(self):
        # generators may be dependent; present the module on a basis of
        # their span so the invariant factors describe the actual group
        self._basis = column_hermite(self.generators)
        g = self._basis.cols
        self._gen_solver = _Solver(self._basis)
        X = []
        for j in range(self.relations.cols):
            x = self._gen_solver.solve(self.relations.column(j))
            if x is None:
                raise NotInSpanError("relations not contained in span(generators)")
            X.append(x)
        Xm = ExactMatrix.from_columns(self.ring, X, nrows=g)
        s = smith_normal_form(Xm)
        # presentation matrix diag: the invariant factors of gens/rels
        facs = list(s.divisors) + [self.ring.zero()] * (g - s.rank)
        self.invariant_factors = facs
        # new generator basis: basis @ Uinv; relations become d_i * (new gen i)
        newgens = self._basis @ s.Uinv
        kept = [i for i in range(g)
                if facs[i] == 0 or not self.ring.is_unit(facs[i])]
        self._kept = kept
        self.reduced_gens = newgens.take_columns(kept)
        self.orders = [facs[i] for i in kept]
        self._coord_map = s.U

    # -- queries

    @property
    def free_rank(self) -> int:
        return sum(1 for d in self.orders if d == 0)

    @property
    def torsion(self) -> list:
        return [d for d in self.orders if d != 0]

    def is_member(self, v: np.ndarray) -> bool:
        return self._gen_solver.solve(v) is not None

    def classify(self, v: np.ndarray):
        """Coordinates of [v] on reduced_gens (torsion coords reduced mod order).

        Raises NotInSpanError when v is not in span(generators).
        """
        x = self._gen_solver.solve(v)
        if x is None:
            raise NotInSpanError("vector not in span(generators)")
        y = self._coord_map.matvec(x)
        out = []
        for pos, i in enumerate(self._kept):
            c = y[i]
            d = self.orders[pos]
            if d != 0:
                c = c % d if self.ring.tag == "Z" else self.ring.normalize(c)
            out.append(c)
        return as_vector(self.ring, out)

    def class_is_zero(self, v: np.ndarray) -> bool:
        return vec_is_zero(self.classify(v))

    def classes_equal(self, v: np.ndarray, w: np.ndarray) -> bool:
        return vec_is_zero(self.ring.reduce_array(self.classify(v) - self.classify(w)))

    def lift(self, coords: np.ndarray) -> np.ndarray:
        """Ambient representative of the class with the given reduced coords."""
        return self.reduced_gens.matvec(coords)

    def describe(self) -> dict:
        return {"free_rank": self.free_rank,
                "torsion": [self.ring.scalar_to_json(d) for d in self.torsion]}


def quotient_presentation(gens: ExactMatrix, rels: ExactMatrix) -> Subquotient:
    """Subquotient span(gens)/span(rels); raises NotInSpanError when invalid."""
    if gens.rows != rels.rows:
        raise DimensionMismatchError("gens/rels ambient mismatch")
    return Subquotient.from_gens_rels(gens.ring, gens, rels)


def section_of_surjection(f: ExactMatrix, target: Subquotient) -> ExactMatrix:
    """Right inverse s of f onto the target submodule: f @ s = reduced_gens.

    Columns of s are preimages of the target's reduced generators; over Z a
    torsion target is rejected (no projective splitting exists).
    """
    if any(d != 0 for d in target.orders):
        raise TargetNotProjectiveError(
            f"target has torsion orders {target.torsion}")
    solver = _Solver(f)
    cols = []
    for j in range(target.reduced_gens.cols):
        x = solver.solve(target.reduced_gens.column(j))
        if x is None:
            raise NotSurjectiveError(f"generator {j} has no preimage")
        cols.append(x)
    return ExactMatrix.from_columns(f.ring, cols, nrows=f.cols)

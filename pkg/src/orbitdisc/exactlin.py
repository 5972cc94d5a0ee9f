"""Exact linear algebra over the rationals.

Everything in this module works with ``fractions.Fraction`` entries and is
fully deterministic: elimination always pivots on the first nonzero column
with the smallest row index, so ranks, kernels and eigenspace bases come out
identical on every run.
"""

from __future__ import annotations

from fractions import Fraction
from math import isqrt

Rat = Fraction

Vec = list  # list[Fraction]


class NonRationalSpectrum(Exception):
    """The matrix has no full rational eigenvalue decomposition."""


class DependentInput(Exception):
    """Gram-Schmidt received linearly dependent input vectors."""


def _rat(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    raise TypeError(f"cannot build an exact rational from {type(x).__name__}")


class QMatrix:
    """Dense rational matrix, stored row-major."""

    __slots__ = ("rows",)

    def __init__(self, rows):
        self.rows = [[_rat(x) for x in row] for row in rows]
        if self.rows:
            width = len(self.rows[0])
            if any(len(row) != width for row in self.rows):
                raise ValueError("ragged rows")

    @classmethod
    def identity(cls, n: int) -> "QMatrix":
        return cls([[Fraction(int(i == j)) for j in range(n)] for i in range(n)])

    @classmethod
    def zeros(cls, m: int, n: int) -> "QMatrix":
        return cls([[Fraction(0)] * n for _ in range(m)])

    @classmethod
    def diagonal(cls, entries) -> "QMatrix":
        entries = [_rat(e) for e in entries]
        n = len(entries)
        out = cls.zeros(n, n)
        for i in range(n):
            out.rows[i][i] = entries[i]
        return out

    @classmethod
    def from_columns(cls, cols) -> "QMatrix":
        if not cols:
            return cls([])
        return cls([[col[i] for col in cols] for i in range(len(cols[0]))])

    @property
    def nrows(self) -> int:
        return len(self.rows)

    @property
    def ncols(self) -> int:
        return len(self.rows[0]) if self.rows else 0

    def copy(self) -> "QMatrix":
        return QMatrix([row[:] for row in self.rows])

    def column(self, j: int) -> Vec:
        return [row[j] for row in self.rows]

    def columns(self):
        return [self.column(j) for j in range(self.ncols)]

    def transpose(self) -> "QMatrix":
        return QMatrix([[self.rows[i][j] for i in range(self.nrows)]
                        for j in range(self.ncols)])

    def trace(self) -> Fraction:
        if self.nrows != self.ncols:
            raise ValueError("trace of a non-square matrix")
        return sum((self.rows[i][i] for i in range(self.nrows)), Fraction(0))

    def matvec(self, v: Vec) -> Vec:
        if len(v) != self.ncols:
            raise ValueError("dimension mismatch in matvec")
        return [sum((a * b for a, b in zip(row, v) if a), Fraction(0))
                for row in self.rows]

    def is_zero(self) -> bool:
        return all(x == 0 for row in self.rows for x in row)

    def is_symmetric(self) -> bool:
        n = self.nrows
        return self.ncols == n and all(
            self.rows[i][j] == self.rows[j][i]
            for i in range(n) for j in range(i + 1, n))

    def __eq__(self, other) -> bool:
        return isinstance(other, QMatrix) and self.rows == other.rows

    def __neg__(self) -> "QMatrix":
        return QMatrix([[-x for x in row] for row in self.rows])

    def __add__(self, other: "QMatrix") -> "QMatrix":
        if (self.nrows, self.ncols) != (other.nrows, other.ncols):
            raise ValueError("shape mismatch in addition")
        return QMatrix([[a + b for a, b in zip(r1, r2)]
                        for r1, r2 in zip(self.rows, other.rows)])

    def __sub__(self, other: "QMatrix") -> "QMatrix":
        return self + (-other)

    def scale(self, c) -> "QMatrix":
        c = _rat(c)
        return QMatrix([[c * x for x in row] for row in self.rows])

    def __mul__(self, other: "QMatrix") -> "QMatrix":
        if self.ncols != other.nrows:
            raise ValueError("shape mismatch in multiplication")
        cols = other.transpose().rows
        return QMatrix([[sum((a * b for a, b in zip(row, col) if a), Fraction(0))
                         for col in cols] for row in self.rows])

    def __repr__(self) -> str:
        body = "; ".join(" ".join(str(x) for x in row) for row in self.rows)
        return f"QMatrix[{body}]"


def rref(rows: list[Vec]) -> tuple[list[Vec], list[int]]:
    """Reduced row echelon form; pivot rule: first nonzero column, smallest
    row index.  Returns (reduced rows, pivot column indices)."""
    work = [row[:] for row in rows]
    m = len(work)
    n = len(work[0]) if work else 0
    pivots = []
    r = 0
    for c in range(n):
        p = next((i for i in range(r, m) if work[i][c] != 0), None)
        if p is None:
            continue
        work[r], work[p] = work[p], work[r]
        inv = Fraction(1) / work[r][c]
        work[r] = [x * inv for x in work[r]]
        lead = work[r]
        for i in range(m):
            if i != r and work[i][c] != 0:
                f = work[i][c]
                work[i] = [a - f * b for a, b in zip(work[i], lead)]
        pivots.append(c)
        r += 1
        if r == m:
            break
    return work, pivots


def rank_kernel(M: QMatrix) -> tuple[int, list[Vec]]:
    """Rank and a deterministic kernel basis of M (as a map on columns).

    The kernel basis is in reduced echelon form: one vector per free column,
    carrying 1 in that coordinate.
    """
    reduced, pivots = rref(M.rows)
    rank = len(pivots)
    n = M.ncols
    pivot_set = set(pivots)
    kernel = []
    for free in range(n):
        if free in pivot_set:
            continue
        v = [Fraction(0)] * n
        v[free] = Fraction(1)
        for i, pc in enumerate(pivots):
            v[pc] = -reduced[i][free]
        kernel.append(v)
    assert rank + len(kernel) == n
    return rank, kernel


def solve(M: QMatrix, b: Vec) -> Vec | None:
    """One exact solution of M x = b, or None if the system is inconsistent.

    Free variables are set to zero, so the answer is deterministic.
    """
    aug = [row[:] + [bb] for row, bb in zip(M.rows, b)]
    reduced, pivots = rref(aug)
    n = M.ncols
    for i in range(len(pivots)):
        if pivots[i] == n:  # pivot in the constant column
            return None
    x = [Fraction(0)] * n
    for i, pc in enumerate(pivots):
        x[pc] = reduced[i][n]
    return x


def det(M: QMatrix) -> Fraction:
    """Determinant by exact Gaussian elimination."""
    n = M.nrows
    if n != M.ncols:
        raise ValueError("determinant of a non-square matrix")
    work = [row[:] for row in M.rows]
    sign = 1
    out = Fraction(1)
    for c in range(n):
        p = next((i for i in range(c, n) if work[i][c] != 0), None)
        if p is None:
            return Fraction(0)
        if p != c:
            work[c], work[p] = work[p], work[c]
            sign = -sign
        out *= work[c][c]
        inv = Fraction(1) / work[c][c]
        for i in range(c + 1, n):
            if work[i][c] != 0:
                f = work[i][c] * inv
                work[i] = [a - f * b for a, b in zip(work[i], work[c])]
    return out * sign


def inverse(M: QMatrix) -> QMatrix:
    """Exact inverse via Gauss-Jordan; raises ValueError on singular input."""
    n = M.nrows
    if n != M.ncols:
        raise ValueError("inverse of a non-square matrix")
    aug = [row[:] + [Fraction(int(i == j)) for j in range(n)]
           for i, row in enumerate(M.rows)]
    reduced, pivots = rref(aug)
    if pivots != list(range(n)):
        raise ValueError("matrix is singular")
    return QMatrix([row[n:] for row in reduced])


def is_spd(M: QMatrix) -> bool:
    """Symmetric positive definite test: symmetric and all elimination pivots
    positive (no pivoting is needed exactly when that holds)."""
    if not M.is_symmetric():
        return False
    work = [row[:] for row in M.rows]
    n = M.nrows
    for c in range(n):
        if work[c][c] <= 0:
            return False
        inv = Fraction(1) / work[c][c]
        for i in range(c + 1, n):
            if work[i][c] != 0:
                f = work[i][c] * inv
                work[i] = [a - f * b for a, b in zip(work[i], work[c])]
    return True


def char_poly(M: QMatrix) -> list[Fraction]:
    """Coefficients of det(t I - M), ascending in t, computed by the
    Faddeev-LeVerrier recursion (only exact divisions by step counts)."""
    n = M.nrows
    if n != M.ncols:
        raise ValueError("characteristic polynomial of a non-square matrix")
    coeffs = [Fraction(0)] * (n + 1)
    coeffs[n] = Fraction(1)
    Mk = M.copy()
    ident = QMatrix.identity(n)
    for k in range(1, n + 1):
        ck = Mk.trace() / k
        coeffs[n - k] = -ck
        if k < n:
            Mk = M * (Mk - ident.scale(ck))
    return coeffs


def elementary_symmetric(M: QMatrix) -> list[Fraction]:
    """e_0 .. e_n of the eigenvalues of M, from the characteristic polynomial:
    det(tI - M) = sum_k (-1)^k e_k t^(n-k)."""
    cp = char_poly(M)
    n = M.nrows
    return [cp[n - k] if k % 2 == 0 else -cp[n - k] for k in range(n + 1)]


# ---------------------------------------------------------------------------
# univariate polynomial helpers over the rationals (ascending coefficients)

def _poly_trim(p: list[Fraction]) -> list[Fraction]:
    while len(p) > 1 and p[-1] == 0:
        p = p[:-1]
    return p


def _poly_mul(a, b):
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                if y:
                    out[i + j] += x * y
    return _poly_trim(out)


def _poly_divmod(a, b):
    a = a[:]
    b = _poly_trim(b)
    if b == [Fraction(0)]:
        raise ZeroDivisionError("polynomial division by zero")
    q = [Fraction(0)] * max(1, len(a) - len(b) + 1)
    while len(a) >= len(b) and _poly_trim(a) != [Fraction(0)]:
        a = _poly_trim(a)
        if len(a) < len(b):
            break
        shift = len(a) - len(b)
        f = a[-1] / b[-1]
        q[shift] = f
        for i, y in enumerate(b):
            a[shift + i] -= f * y
    return _poly_trim(q), _poly_trim(a)


def _poly_monic(p):
    p = _poly_trim(p)
    lead = p[-1]
    if lead == 0:
        return p
    return [x / lead for x in p]


def _poly_gcd(a, b):
    a, b = _poly_trim(a), _poly_trim(b)
    while b != [Fraction(0)]:
        _, r = _poly_divmod(a, b)
        a, b = b, r
    return _poly_monic(a)


def _poly_lcm(a, b):
    g = _poly_gcd(a, b)
    q, r = _poly_divmod(_poly_mul(a, b), g)
    assert r == [Fraction(0)]
    return _poly_monic(q)


def _poly_eval(p, x: Fraction) -> Fraction:
    acc = Fraction(0)
    for c in reversed(p):
        acc = acc * x + c
    return acc


def minimal_polynomial(M: QMatrix) -> list[Fraction]:
    """Monic minimal polynomial (ascending coefficients) via Krylov sequences
    started at standard basis vectors."""
    n = M.nrows
    mp = [Fraction(1)]  # constant 1
    for s in range(n):
        seed = [Fraction(int(i == s)) for i in range(n)]
        # skip seeds already annihilated by the current candidate
        if _apply_poly_to_vector(mp, M, seed) == [Fraction(0)] * n:
            continue
        ann = _vector_annihilator(M, seed)
        mp = _poly_lcm(mp, ann)
    return mp


def _apply_poly_to_vector(p, M: QMatrix, v: Vec) -> Vec:
    out = [p[0] * x for x in v]
    power = v
    for c in p[1:]:
        power = M.matvec(power)
        if c:
            out = [a + c * b for a, b in zip(out, power)]
    return out


def _vector_annihilator(M: QMatrix, v: Vec) -> list[Fraction]:
    """Monic polynomial of least degree with p(M) v = 0."""
    krylov = [v]
    while True:
        w = M.matvec(krylov[-1])
        A = QMatrix.from_columns(krylov)
        x = solve(A, w)
        if x is not None:
            # w = sum x_j M^j v  =>  annihilator t^k - sum x_j t^j
            k = len(krylov)
            p = [-xx for xx in x] + [Fraction(1)]
            return _poly_trim(p)
        krylov.append(w)


def _factorize(n: int) -> dict[int, int]:
    """Prime factorization by trial division.  Divisors beyond 10^6 are not
    probed; a composite remainder past that bound is treated as prime, which
    can only make the divisor list incomplete for adversarially rough
    integers (never for the structured spectra this module works with)."""
    n = abs(n)
    out: dict[int, int] = {}
    d = 2
    while d * d <= n and d <= 1_000_000:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1 if d == 2 else 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def _int_divisors(n: int) -> list[int]:
    if n == 0:
        raise ValueError("divisors of zero")
    divs = [1]
    for prime, mult in _factorize(n).items():
        power = 1
        extended = list(divs)
        for _ in range(mult):
            power *= prime
            extended.extend(d * power for d in divs)
        divs = extended
    return sorted(divs)


def rational_roots(p: list[Fraction]) -> list[Fraction]:
    """All rational roots (with multiplicity) of p; raises NonRationalSpectrum
    if a nonconstant factor with no rational root remains."""
    p = _poly_trim(p)
    roots = []
    # factor out powers of t
    while p[0] == 0 and len(p) > 1:
        roots.append(Fraction(0))
        p = p[1:]
    while len(p) > 1:
        den = 1
        for c in p:
            den = den * c.denominator // _gcd(den, c.denominator)
        ip = [int(c * den) for c in p]
        cands = []
        for num in _int_divisors(ip[0]):
            for dv in _int_divisors(ip[-1]):
                cands.append(Fraction(num, dv))
                cands.append(Fraction(-num, dv))
        cands = sorted(set(cands))
        root = next((c for c in cands if _poly_eval(p, c) == 0), None)
        if root is None:
            raise NonRationalSpectrum(
                f"no rational root of a degree-{len(p) - 1} factor")
        roots.append(root)
        p, r = _poly_divmod(p, [-root, Fraction(1)])
        assert r == [Fraction(0)]
    return sorted(roots)


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return a


def rational_eigenspaces(M: QMatrix) -> list[tuple[Fraction, list[Vec]]]:
    """Eigenvalues with exact eigenspace bases, sorted by eigenvalue.

    Requires the minimal polynomial to split into distinct linear factors
    over the rationals (i.e. M diagonalizable with rational spectrum);
    otherwise raises NonRationalSpectrum.
    """
    n = M.nrows
    if n == 0:
        return []
    mp = minimal_polynomial(M)
    roots = rational_roots(mp)
    if len(set(roots)) != len(roots):
        raise NonRationalSpectrum(
            "repeated factor in the minimal polynomial: "
            "matrix is not diagonalizable over the rationals")
    out = []
    total = 0
    ident = QMatrix.identity(n)
    for lam in roots:
        _, kern = rank_kernel(M - ident.scale(lam))
        assert kern, "minimal polynomial root with empty eigenspace"
        out.append((lam, kern))
        total += len(kern)
    if total != n:
        raise NonRationalSpectrum(
            "eigenspace dimensions do not sum to the matrix size")
    return out


def inner_product(u: Vec, v: Vec, inner: QMatrix | None = None) -> Fraction:
    """<u, v> under an SPD bilinear form (identity when inner is None)."""
    if inner is None:
        return sum((a * b for a, b in zip(u, v) if a), Fraction(0))
    return sum((a * b for a, b in zip(u, inner.matvec(v)) if a), Fraction(0))


def gram_schmidt_weights(
    vectors: list[Vec], inner: QMatrix | None = None
) -> tuple[list[Vec], list[Fraction]]:
    """Orthogonalize without square roots.

    Returns (orthogonal vectors q_i, weights g_i) with g_i = <q_i, q_i> > 0,
    spanning the same flag as the input.  Raises DependentInput when the
    input is linearly dependent (detected by a vanishing weight).
    """
    qs: list[Vec] = []
    ws: list[Fraction] = []
    for k, v in enumerate(vectors):
        u = list(v)
        for q, w in zip(qs, ws):
            c = inner_product(v, q, inner) / w
            if c:
                u = [a - c * b for a, b in zip(u, q)]
        w = inner_product(u, u, inner)
        if w == 0:
            raise DependentInput(f"vector {k} depends on its predecessors")
        qs.append(u)
        ws.append(w)
    return qs, ws

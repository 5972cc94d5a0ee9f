"""Sparse multivariate polynomials over the rationals.

Terms are keyed by exponent tuples; zero coefficients are never stored, so
structural equality is polynomial equality.  The canonical term order used
for serialization and leading terms is graded lexicographic, largest first.
"""

from __future__ import annotations

from fractions import Fraction

from .exactlin import _rat

Expt = tuple  # tuple[int, ...]


class CapExceeded(Exception):
    """A symbolic computation would exceed the configured size cap."""


def _grlex_key(e: Expt):
    return (sum(e), e)


class MVPoly:
    """Sparse polynomial in ``nvars`` variables with Fraction coefficients."""

    __slots__ = ("nvars", "terms", "homdeg")

    def __init__(self, nvars: int, terms=None):
        self.nvars = nvars
        clean: dict[Expt, Fraction] = {}
        if terms:
            for e, c in (terms.items() if isinstance(terms, dict) else terms):
                e = tuple(int(x) for x in e)
                if len(e) != nvars or any(x < 0 for x in e):
                    raise ValueError(f"bad exponent tuple {e} for {nvars} variables")
                c = _rat(c)
                if c:
                    acc = clean.get(e)
                    c = c if acc is None else acc + c
                    if c:
                        clean[e] = c
                    elif acc is not None:
                        del clean[e]
        self.terms = clean
        degs = {sum(e) for e in clean}
        self.homdeg = degs.pop() if len(degs) == 1 else None

    # -- constructors -------------------------------------------------------

    @classmethod
    def zero(cls, nvars: int) -> "MVPoly":
        return cls(nvars, {})

    @classmethod
    def const(cls, nvars: int, c) -> "MVPoly":
        return cls(nvars, {(0,) * nvars: _rat(c)})

    @classmethod
    def variable(cls, i: int, nvars: int) -> "MVPoly":
        e = [0] * nvars
        e[i] = 1
        return cls(nvars, {tuple(e): Fraction(1)})

    # -- predicates ---------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def is_homogeneous(self, degree: int | None = None) -> bool:
        if not self.terms:
            return True
        if degree is None:
            return self.homdeg is not None
        return self.homdeg == degree

    def total_degree(self) -> int:
        return max((sum(e) for e in self.terms), default=0)

    def leading_term(self) -> tuple[Expt, Fraction]:
        if not self.terms:
            raise ValueError("leading term of the zero polynomial")
        e = max(self.terms, key=_grlex_key)
        return e, self.terms[e]

    def sorted_terms(self) -> list[tuple[Expt, Fraction]]:
        return [(e, self.terms[e])
                for e in sorted(self.terms, key=_grlex_key, reverse=True)]

    # -- arithmetic ---------------------------------------------------------

    def _check(self, other: "MVPoly"):
        if self.nvars != other.nvars:
            raise ValueError("operands live in different polynomial rings")

    def __eq__(self, other) -> bool:
        return (isinstance(other, MVPoly) and self.nvars == other.nvars
                and self.terms == other.terms)

    def __neg__(self) -> "MVPoly":
        return MVPoly(self.nvars, {e: -c for e, c in self.terms.items()})

    def __add__(self, other: "MVPoly") -> "MVPoly":
        self._check(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            s = out.get(e, Fraction(0)) + c
            if s:
                out[e] = s
            elif e in out:
                del out[e]
        return MVPoly(self.nvars, out)

    def __sub__(self, other: "MVPoly") -> "MVPoly":
        return self + (-other)

    def scale(self, c) -> "MVPoly":
        c = _rat(c)
        if not c:
            return MVPoly.zero(self.nvars)
        return MVPoly(self.nvars, {e: c * v for e, v in self.terms.items()})

    def __mul__(self, other: "MVPoly") -> "MVPoly":
        self._check(other)
        out: dict[Expt, Fraction] = {}
        if len(self.terms) > len(other.terms):
            a, b = other, self
        else:
            a, b = self, other
        for e1, c1 in a.terms.items():
            for e2, c2 in b.terms.items():
                e = tuple(x + y for x, y in zip(e1, e2))
                s = out.get(e, Fraction(0)) + c1 * c2
                if s:
                    out[e] = s
                elif e in out:
                    del out[e]
        return MVPoly(self.nvars, out)

    def square(self) -> "MVPoly":
        items = list(self.terms.items())
        out: dict[Expt, Fraction] = {}
        for i, (e1, c1) in enumerate(items):
            e = tuple(2 * x for x in e1)
            s = out.get(e, Fraction(0)) + c1 * c1
            if s:
                out[e] = s
            elif e in out:
                del out[e]
            for e2, c2 in items[i + 1:]:
                e = tuple(x + y for x, y in zip(e1, e2))
                s = out.get(e, Fraction(0)) + 2 * c1 * c2
                if s:
                    out[e] = s
                elif e in out:
                    del out[e]
        return MVPoly(self.nvars, out)

    def __pow__(self, k: int) -> "MVPoly":
        if k < 0:
            raise ValueError("negative power of a polynomial")
        out = MVPoly.const(self.nvars, 1)
        base = self
        while k:
            if k & 1:
                out = out * base
            k >>= 1
            if k:
                base = base.square()
        return out

    # -- calculus and evaluation -------------------------------------------

    def eval(self, point) -> Fraction:
        point = [_rat(x) for x in point]
        if len(point) != self.nvars:
            raise ValueError("evaluation point has the wrong dimension")
        total = Fraction(0)
        for e, c in self.terms.items():
            v = c
            for x, k in zip(point, e):
                if k:
                    v *= x ** k
            total += v
        return total

    def derivative(self, i: int) -> "MVPoly":
        out = {}
        for e, c in self.terms.items():
            if e[i]:
                ne = list(e)
                ne[i] -= 1
                out[tuple(ne)] = c * e[i]
        return MVPoly(self.nvars, out)

    def restrict_to_vars(self, indices: list[int]) -> "MVPoly":
        """Set every variable outside ``indices`` to zero and renumber the
        surviving ones in the given order."""
        keep = list(indices)
        keep_set = set(keep)
        out = {}
        for e, c in self.terms.items():
            if all(k == 0 or i in keep_set for i, k in enumerate(e)):
                out[tuple(e[i] for i in keep)] = c
        return MVPoly(len(keep), out)

    def __repr__(self) -> str:
        if not self.terms:
            return "MVPoly(0)"
        bits = []
        for e, c in self.sorted_terms():
            mono = "*".join(f"x{i}^{k}" for i, k in enumerate(e) if k) or "1"
            bits.append(f"{c}*{mono}")
        return "MVPoly(" + " + ".join(bits) + ")"


class LinForm:
    """Homogeneous linear form in d variables."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs):
        self.coeffs = [_rat(c) for c in coeffs]

    @property
    def nvars(self) -> int:
        return len(self.coeffs)

    def to_poly(self) -> MVPoly:
        n = len(self.coeffs)
        terms = {}
        for i, c in enumerate(self.coeffs):
            if c:
                e = [0] * n
                e[i] = 1
                terms[tuple(e)] = c
        return MVPoly(n, terms)

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coeffs)

    def __eq__(self, other) -> bool:
        return isinstance(other, LinForm) and self.coeffs == other.coeffs

    def __repr__(self) -> str:
        return f"LinForm({[str(c) for c in self.coeffs]})"


# ---------------------------------------------------------------------------
# determinants and characteristic coefficients over the polynomial ring

def det_linear_forms(mat: list[list[LinForm]]) -> MVPoly:
    """Determinant of a square matrix of linear forms.

    Division-free expansion along rows with memoization on the active column
    set, so each of the 2^n column subsets is expanded once.
    """
    n = len(mat)
    if any(len(row) != n for row in mat):
        raise ValueError("matrix of linear forms is not square")
    if n == 0:
        raise ValueError("empty determinant")
    nvars = mat[0][0].nvars
    entries = [[f.to_poly() for f in row] for row in mat]
    one = MVPoly.const(nvars, 1)
    memo: dict[tuple, MVPoly] = {(): one}

    def minor(cols: tuple) -> MVPoly:
        got = memo.get(cols)
        if got is not None:
            return got
        r = n - len(cols)
        acc = MVPoly.zero(nvars)
        for k, c in enumerate(cols):
            entry = entries[r][c]
            if not entry.terms:
                continue
            sub = minor(cols[:k] + cols[k + 1:])
            piece = entry * sub
            acc = acc + (piece if k % 2 == 0 else -piece)
        memo[cols] = acc
        return acc

    return minor(tuple(range(n)))


def det_laplace(mat: list[list[LinForm]]) -> MVPoly:
    """Naive cofactor expansion, kept as an independent oracle for tests."""
    n = len(mat)
    nvars = mat[0][0].nvars
    entries = [[f.to_poly() for f in row] for row in mat]

    def expand(r: int, cols: list[int]) -> MVPoly:
        if not cols:
            return MVPoly.const(nvars, 1)
        acc = MVPoly.zero(nvars)
        for k, c in enumerate(cols):
            piece = entries[r][c] * expand(r + 1, cols[:k] + cols[k + 1:])
            acc = acc + (piece if k % 2 == 0 else -piece)
        return acc

    return expand(0, list(range(n)))


def _pmat_mul(A, B, nvars):
    n = len(A)
    out = []
    for i in range(n):
        row = []
        for j in range(n):
            acc = MVPoly.zero(nvars)
            for k in range(n):
                if A[i][k].terms and B[k][j].terms:
                    acc = acc + A[i][k] * B[k][j]
            row.append(acc)
        out.append(row)
    return out


def char_coeffs_symbolic(mat: list[list[MVPoly]]) -> list[MVPoly]:
    """Elementary symmetric functions e_0..e_p of a p x p polynomial matrix,
    by the Faddeev-LeVerrier recursion over the ring.

    Every division in the recursion is by the integer step count, which is
    exact over the rationals; the result satisfies
    det(tI - M) = sum_k (-1)^k e_k t^(p-k).
    """
    p = len(mat)
    if any(len(row) != p for row in mat):
        raise ValueError("characteristic coefficients of a non-square matrix")
    nvars = mat[0][0].nvars
    es = [MVPoly.const(nvars, 1)]
    Mk = [row[:] for row in mat]
    for k in range(1, p + 1):
        tr = MVPoly.zero(nvars)
        for i in range(p):
            tr = tr + Mk[i][i]
        ck = tr.scale(Fraction(1, k))
        es.append(ck if k % 2 == 1 else -ck)
        if k < p:
            shifted = [[Mk[i][j] - ck if i == j else Mk[i][j] for j in range(p)]
                       for i in range(p)]
            Mk = _pmat_mul(mat, shifted, nvars)
    return es


def equal_mod_constant(f: MVPoly, g: MVPoly) -> Fraction | None:
    """The exact constant c with f = c*g, if one exists.

    Returns 0 when f is identically zero (whatever g is), and None when no
    constant works.  The verdict is fully symbolic.
    """
    if f.nvars != g.nvars:
        raise ValueError("polynomials live in different rings")
    if f.is_zero():
        return Fraction(0)
    if g.is_zero():
        return None
    eg, cg = g.leading_term()
    cf = f.terms.get(eg)
    if cf is None:
        return None
    c = cf / cg
    return c if (f - g.scale(c)).is_zero() else None


# ---------------------------------------------------------------------------
# text serialization

def poly_to_text(poly: MVPoly, var_names: list[str]) -> str:
    """Canonical text form: header, variable names, terms in descending
    graded-lex order, terminator.  Reading it back is bit-exact."""
    if len(var_names) != poly.nvars:
        raise ValueError("variable name list does not match nvars")
    for name in var_names:
        if not name or any(ch.isspace() for ch in name):
            raise ValueError(f"bad variable name {name!r}")
    lines = [f"poly {poly.nvars}", "vars " + " ".join(var_names)]
    for e, c in poly.sorted_terms():
        lines.append("term " + str(c) + " " + " ".join(str(k) for k in e))
    lines.append("end")
    return "\n".join(lines) + "\n"


def poly_from_text(text: str) -> tuple[MVPoly, list[str]]:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines or not lines[0].startswith("poly "):
        raise ValueError("missing poly header")
    nvars = int(lines[0].split()[1])
    if len(lines) < 3 or not lines[1].startswith("vars "):
        raise ValueError("missing vars line")
    names = lines[1].split()[1:]
    if len(names) != nvars:
        raise ValueError("vars line does not match the declared count")
    if lines[-1].strip() != "end":
        raise ValueError("missing end terminator")
    terms = {}
    for ln in lines[2:-1]:
        parts = ln.split()
        if parts[0] != "term" or len(parts) != nvars + 2:
            raise ValueError(f"bad term line: {ln!r}")
        e = tuple(int(x) for x in parts[2:])
        c = Fraction(parts[1])
        if e in terms:
            raise ValueError(f"duplicate exponent tuple {e}")
        terms[e] = c
    return MVPoly(nvars, terms), names

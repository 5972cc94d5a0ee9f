"""Catalog of orthogonal linear actions with exact rational data.

Each action stores the generator matrices of the acting Lie algebra on the
representation space V, together with invariant inner products on both; the
bases are chosen so that both Gram matrices are diagonal and every entry is
rational.  For the polar cases the catalog also carries Cartan data: a
section of coordinate directions meeting every orbit orthogonally, and the
restricted roots with multiplicities expressed in the coordinates dual to
that section.

Metric normalization.  For the symmetric-matrix cases the inner products are
<x, y> = -tr(xy)/2 on the algebra and <X, Y> = tr(XY)/2 on V (real trace in
the complex case).  With this pairing each root vector in the algebra and
its partner in V have equal norm, which is what makes the restricted-root
product reproduce the discriminant with constant exactly 1 on the real
family; the constant actually obtained is always recorded by callers rather
than assumed.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import comb

from .exactlin import (
    QMatrix,
    Vec,
    _rat,
    inner_product,
    inverse,
    is_spd,
    rank_kernel,
    rational_eigenspaces,
    rref,
    solve,
)
from .polyring import CapExceeded, LinForm

WEDGE_CAP = 100000

CATALOG_CASES = ("torus2", "nonpolar_so2", "sym_real", "sym_real_traceless",
                 "sym_complex")


class InvalidAction(Exception):
    """Action data violates a structural invariant."""


class NotPolar(Exception):
    """The requested operation needs Cartan data and the action has none."""


@dataclass
class CartanData:
    rank: int
    basis: list  # r coordinate-direction vectors in V
    indices: list  # the coordinate index each basis vector points along
    roots: list  # (functional: tuple[Fraction] of length rank, multiplicity)
    diagram: str


@dataclass
class LinearAction:
    name: str
    d: int
    p: int
    generators: list  # p QMatrices, d x d
    inner_g: QMatrix
    inner_V: QMatrix
    var_names: list
    cartan: CartanData | None = None
    meta: dict = field(default_factory=dict)

    @property
    def cartan_adapted(self) -> bool:
        """True when the Cartan section is spanned by coordinate directions."""
        if self.cartan is None:
            return False
        return all(_coordinate_direction(v) is not None for v in self.cartan.basis)

    @property
    def polar(self) -> bool:
        return self.cartan is not None


def _coordinate_direction(v: Vec) -> int | None:
    """Index i when v is a positive multiple of the i-th coordinate vector."""
    hits = [i for i, x in enumerate(v) if x != 0]
    if len(hits) == 1 and v[hits[0]] > 0:
        return hits[0]
    return None


# ---------------------------------------------------------------------------
# structural validation

def structure_constants(action: LinearAction):
    """c[i][j] = coordinates of [G_i, G_j] in the generator basis.

    Raises InvalidAction when some commutator leaves the span (the generator
    list would then not be a Lie algebra representation).
    """
    gens = action.generators
    p = action.p
    cols = [sum([list(r) for r in g.rows], []) for g in gens]
    A = QMatrix.from_columns(cols) if cols else QMatrix([])
    table = [[None] * p for _ in range(p)]
    for i in range(p):
        for j in range(p):
            if i == j:
                table[i][j] = [Fraction(0)] * p
                continue
            C = gens[i] * gens[j] - gens[j] * gens[i]
            b = sum([list(r) for r in C.rows], [])
            x = solve(A, b)
            if x is None:
                raise InvalidAction(
                    f"commutator of generators {i} and {j} leaves the span")
            table[i][j] = x
    return table


def validate_action(action: LinearAction) -> None:
    """Check every structural invariant; raise InvalidAction on failure."""
    d, p = action.d, action.p
    if len(action.generators) != p:
        raise InvalidAction(f"expected {p} generators, got {len(action.generators)}")
    if len(action.var_names) != d:
        raise InvalidAction("variable names do not match the dimension")
    if (action.inner_g.nrows, action.inner_g.ncols) != (p, p):
        raise InvalidAction("inner_g has the wrong shape")
    if (action.inner_V.nrows, action.inner_V.ncols) != (d, d):
        raise InvalidAction("inner_V has the wrong shape")
    if p and not is_spd(action.inner_g):
        raise InvalidAction("inner_g is not symmetric positive definite")
    if not is_spd(action.inner_V):
        raise InvalidAction("inner_V is not symmetric positive definite")
    S = action.inner_V
    for k, G in enumerate(action.generators):
        if (G.nrows, G.ncols) != (d, d):
            raise InvalidAction(f"generator {k} has the wrong shape")
        if not (G.transpose() * S + S * G).is_zero():
            raise InvalidAction(
                f"generator {k} is not skew-adjoint for inner_V")
    structure_constants(action)
    cd = action.cartan
    if cd is None:
        return
    if len(cd.basis) != cd.rank or len(cd.indices) != cd.rank:
        raise InvalidAction("Cartan data has inconsistent rank")
    for a in range(cd.rank):
        v = cd.basis[a]
        if _coordinate_direction(v) != cd.indices[a]:
            raise InvalidAction(f"Cartan basis vector {a} is not the "
                                "declared coordinate direction")
        for b in range(a + 1, cd.rank):
            if inner_product(cd.basis[a], cd.basis[b], S) != 0:
                raise InvalidAction(
                    f"Cartan basis vectors {a} and {b} are not orthogonal")
    # each orbit through the section is met orthogonally
    for k, G in enumerate(action.generators):
        for a in range(cd.rank):
            img = G.matvec(cd.basis[a])
            for b in range(cd.rank):
                if inner_product(img, cd.basis[b], S) != 0:
                    raise InvalidAction(
                        f"generator {k} moves Cartan vector {a} "
                        "non-orthogonally to the section")
    for lam, mult in cd.roots:
        if len(lam) != cd.rank:
            raise InvalidAction("root functional has the wrong arity")
        if all(c == 0 for c in lam):
            raise InvalidAction("zero restricted root")
        if mult < 1:
            raise InvalidAction("restricted root with multiplicity < 1")


# ---------------------------------------------------------------------------
# dense rational matrix helpers for building the catalog

def _zeros(n):
    return [[Fraction(0)] * n for _ in range(n)]


def _mat_E(n, i, j):
    m = _zeros(n)
    m[i][j] = Fraction(1)
    return m


def _mat_add(a, b):
    return [[x + y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def _mat_sub(a, b):
    return [[x - y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def _mat_mul(a, b):
    n = len(a)
    return [[sum((a[i][k] * b[k][j] for k in range(n) if a[i][k]), Fraction(0))
             for j in range(n)] for i in range(n)]


def _mat_T(a):
    n = len(a)
    return [[a[j][i] for j in range(n)] for i in range(n)]


# complex matrices as (real part, imaginary part)

def _cmat_mul(a, b):
    return (_mat_sub(_mat_mul(a[0], b[0]), _mat_mul(a[1], b[1])),
            _mat_add(_mat_mul(a[0], b[1]), _mat_mul(a[1], b[0])))


def _cmat_add(a, b):
    return (_mat_add(a[0], b[0]), _mat_add(a[1], b[1]))


def _cmat_T(a):
    return (_mat_T(a[0]), _mat_T(a[1]))


# ---------------------------------------------------------------------------
# case builders

def _so_n_generators(n):
    """Basis E_ij - E_ji (i < j, row-major); orthonormal for -tr(xy)/2."""
    return [(i, j) for i in range(n) for j in range(i + 1, n)]


def _sym_pairs(n):
    return [(i, j) for i in range(n) for j in range(i, n)]


def _build_torus2() -> LinearAction:
    J1 = QMatrix([[0, -1, 0, 0], [1, 0, 0, 0], [0, 0, 0, 0], [0, 0, 0, 0]])
    J2 = QMatrix([[0, 0, 0, 0], [0, 0, 0, 0], [0, 0, 0, -1], [0, 0, 1, 0]])
    e0 = [Fraction(1), Fraction(0), Fraction(0), Fraction(0)]
    e2 = [Fraction(0), Fraction(0), Fraction(1), Fraction(0)]
    cartan = CartanData(
        rank=2,
        basis=[e0, e2],
        indices=[0, 2],
        roots=[((Fraction(1), Fraction(0)), 1), ((Fraction(0), Fraction(1)), 1)],
        diagram="A1xA1",
    )
    return LinearAction(
        name="torus2", d=4, p=2, generators=[J1, J2],
        inner_g=QMatrix.identity(2), inner_V=QMatrix.identity(4),
        var_names=["a1", "a2", "b1", "b2"], cartan=cartan)


def _build_nonpolar_so2() -> LinearAction:
    J = QMatrix([[0, -1, 0, 0], [1, 0, 0, 0], [0, 0, 0, -1], [0, 0, 1, 0]])
    return LinearAction(
        name="nonpolar_so2", d=4, p=1, generators=[J],
        inner_g=QMatrix.identity(1), inner_V=QMatrix.identity(4),
        var_names=["a1", "a2", "b1", "b2"], cartan=None)


def _sym_real_basis(n):
    """Symmetric matrices: diagonals E_ii first, then E_ij + E_ji row-major."""
    basis = [_mat_E(n, i, i) for i in range(n)]
    names = [f"t{i + 1}" for i in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            basis.append(_mat_add(_mat_E(n, i, j), _mat_E(n, j, i)))
            names.append(f"s{i + 1}{j + 1}")
    return basis, names


def sym_matrix_to_coords(n: int, m) -> Vec:
    """Coordinates of a symmetric matrix in the sym_real basis."""
    coords = [m[i][i] for i in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            if m[i][j] != m[j][i]:
                raise ValueError("matrix is not symmetric")
            coords.append(m[i][j])
    return coords


def sym_coords_to_matrix(n: int, v: Vec):
    m = _zeros(n)
    for i in range(n):
        m[i][i] = _rat(v[i])
    k = n
    for i in range(n):
        for j in range(i + 1, n):
            m[i][j] = m[j][i] = _rat(v[k])
            k += 1
    return m


def _build_sym_real(n: int) -> LinearAction:
    if n < 1:
        raise ValueError("sym_real needs n >= 1")
    _check_wedge_cap(n * (n + 1) // 2, n)
    basis, names = _sym_real_basis(n)
    d = len(basis)
    pairs = _so_n_generators(n)
    gens = []
    for (i, j) in pairs:
        x = _mat_sub(_mat_E(n, i, j), _mat_E(n, j, i))
        cols = []
        for B in basis:
            C = _mat_sub(_mat_mul(x, B), _mat_mul(B, x))
            cols.append(sym_matrix_to_coords(n, C))
        gens.append(QMatrix.from_columns(cols))
    inner_V = QMatrix.diagonal([Fraction(1, 2)] * n + [Fraction(1)] * (d - n))
    roots = []
    for i in range(n):
        for j in range(i + 1, n):
            lam = [Fraction(0)] * n
            lam[i], lam[j] = Fraction(1), Fraction(-1)
            roots.append((tuple(lam), 1))
    cartan = CartanData(
        rank=n,
        basis=[[Fraction(int(k == i)) for k in range(d)] for i in range(n)],
        indices=list(range(n)),
        roots=roots,
        diagram=f"A{n - 1}",
    )
    return LinearAction(
        name="sym_real", d=d, p=len(pairs), generators=gens,
        inner_g=QMatrix.identity(len(pairs)), inner_V=inner_V,
        var_names=names, cartan=cartan, meta={"n": n})


def _traceless_diag_basis(n):
    """Integer orthogonal basis of the traceless diagonal: y_k has k ones
    then -k (k = 1..n-1)."""
    out = []
    for k in range(1, n):
        y = [Fraction(1)] * k + [Fraction(-k)] + [Fraction(0)] * (n - k - 1)
        out.append(y)
    return out


def traceless_matrix_to_coords(n: int, m) -> Vec:
    diag = [m[i][i] for i in range(n)]
    if sum(diag) != 0:
        raise ValueError("matrix is not traceless")
    ys = _traceless_diag_basis(n)
    coords = []
    for y in ys:
        num = sum(a * b for a, b in zip(diag, y))
        den = sum(a * a for a in y)
        coords.append(num / den)
    for i in range(n):
        for j in range(i + 1, n):
            if m[i][j] != m[j][i]:
                raise ValueError("matrix is not symmetric")
            coords.append(m[i][j])
    return coords


def traceless_coords_to_matrix(n: int, v: Vec):
    ys = _traceless_diag_basis(n)
    m = _zeros(n)
    for k, y in enumerate(ys):
        for i in range(n):
            m[i][i] += _rat(v[k]) * y[i]
    idx = n - 1
    for i in range(n):
        for j in range(i + 1, n):
            m[i][j] = m[j][i] = _rat(v[idx])
            idx += 1
    return m


def _build_sym_real_traceless(n: int) -> LinearAction:
    if n < 2:
        raise ValueError("sym_real_traceless needs n >= 2")
    d = n * (n + 1) // 2 - 1
    _check_wedge_cap(d, n - 1)
    ys = _traceless_diag_basis(n)
    names = [f"c{k + 1}" for k in range(n - 1)]
    basis = []
    for y in ys:
        m = _zeros(n)
        for i in range(n):
            m[i][i] = y[i]
        basis.append(m)
    for i in range(n):
        for j in range(i + 1, n):
            basis.append(_mat_add(_mat_E(n, i, j), _mat_E(n, j, i)))
            names.append(f"s{i + 1}{j + 1}")
    pairs = _so_n_generators(n)
    gens = []
    for (i, j) in pairs:
        x = _mat_sub(_mat_E(n, i, j), _mat_E(n, j, i))
        cols = []
        for B in basis:
            C = _mat_sub(_mat_mul(x, B), _mat_mul(B, x))
            cols.append(traceless_matrix_to_coords(n, C))
        gens.append(QMatrix.from_columns(cols))
    diag_norms = [Fraction(k * (k + 1), 2) for k in range(1, n)]
    inner_V = QMatrix.diagonal(diag_norms + [Fraction(1)] * (d - (n - 1)))
    roots = []
    for i in range(n):
        for j in range(i + 1, n):
            lam = tuple(y[i] - y[j] for y in ys)
            roots.append((lam, 1))
    cartan = CartanData(
        rank=n - 1,
        basis=[[Fraction(int(k == a)) for k in range(d)] for a in range(n - 1)],
        indices=list(range(n - 1)),
        roots=roots,
        diagram=f"A{n - 1}",
    )
    return LinearAction(
        name="sym_real_traceless", d=d, p=len(pairs), generators=gens,
        inner_g=QMatrix.identity(len(pairs)), inner_V=inner_V,
        var_names=names, cartan=cartan, meta={"n": n})


def _u_n_generators(n):
    """Basis of u(n): iE_kk, then E_kl - E_lk, then i(E_kl + E_lk), each
    block row-major.  Diagonal Gram for -Re tr(xy)/2: 1/2 on the first block,
    1 on the others."""
    gens = []
    for k in range(n):
        gens.append((_zeros(n), _mat_E(n, k, k)))  # i E_kk
    for k in range(n):
        for l in range(k + 1, n):
            gens.append((_mat_sub(_mat_E(n, k, l), _mat_E(n, l, k)), _zeros(n)))
    for k in range(n):
        for l in range(k + 1, n):
            gens.append((_zeros(n), _mat_add(_mat_E(n, k, l), _mat_E(n, l, k))))
    norms = [Fraction(1, 2)] * n + [Fraction(1)] * (n * (n - 1))
    return gens, norms


def complex_sym_to_coords(n: int, m) -> Vec:
    """Realified coordinates (Re z_ij, Im z_ij interleaved, pairs i <= j
    row-major) of a complex symmetric matrix given as (re, im)."""
    re, im = m
    coords = []
    for (i, j) in _sym_pairs(n):
        if re[i][j] != re[j][i] or im[i][j] != im[j][i]:
            raise ValueError("matrix is not complex symmetric")
        coords.append(re[i][j])
        coords.append(im[i][j])
    return coords


def complex_coords_to_sym(n: int, v: Vec):
    re, im = _zeros(n), _zeros(n)
    for q, (i, j) in enumerate(_sym_pairs(n)):
        re[i][j] = re[j][i] = _rat(v[2 * q])
        im[i][j] = im[j][i] = _rat(v[2 * q + 1])
    return re, im


def _build_sym_complex(n: int) -> LinearAction:
    if n < 2:
        raise ValueError("sym_complex needs n >= 2")
    d = n * (n + 1)
    _check_wedge_cap(d, n)
    pairs = _sym_pairs(n)
    names = []
    for (i, j) in pairs:
        names.append(f"x{i + 1}{j + 1}")
        names.append(f"y{i + 1}{j + 1}")
    # complex basis element for each real coordinate
    vbasis = []
    for (i, j) in pairs:
        u = _mat_E(n, i, j) if i == j else _mat_add(_mat_E(n, i, j), _mat_E(n, j, i))
        vbasis.append((u, _zeros(n)))           # real direction
        vbasis.append((_zeros(n), u))           # imaginary direction
    cgens, gnorms = _u_n_generators(n)
    gens = []
    for g in cgens:
        gT = _cmat_T(g)
        cols = []
        for B in vbasis:
            C = _cmat_add(_cmat_mul(g, B), _cmat_mul(B, gT))
            cols.append(complex_sym_to_coords(n, C))
        gens.append(QMatrix.from_columns(cols))
    vnorms = []
    for (i, j) in pairs:
        w = Fraction(1, 2) if i == j else Fraction(1)
        vnorms.extend([w, w])
    inner_V = QMatrix.diagonal(vnorms)
    action = LinearAction(
        name="sym_complex", d=d, p=len(cgens), generators=gens,
        inner_g=QMatrix.diagonal(gnorms), inner_V=inner_V,
        var_names=names, cartan=None, meta={"n": n})
    diag_positions = [2 * q for q, (i, j) in enumerate(pairs) if i == j]
    basis = [[Fraction(int(k == pos)) for k in range(d)] for pos in diag_positions]
    roots = compute_roots_by_diagonalization(action, basis)
    expected = _c_type_roots(n)
    if sorted(roots) != sorted(expected):
        raise InvalidAction("computed restricted roots do not form C_n")
    action.cartan = CartanData(rank=n, basis=basis, indices=diag_positions,
                               roots=roots, diagram=f"C{n}")
    return action


def _c_type_roots(n):
    out = []
    for i in range(n):
        lam = [Fraction(0)] * n
        lam[i] = Fraction(2)
        out.append((tuple(lam), 1))
    for i in range(n):
        for j in range(i + 1, n):
            for sgn in (Fraction(-1), Fraction(1)):
                lam = [Fraction(0)] * n
                lam[i], lam[j] = Fraction(1), sgn
                out.append((tuple(lam), 1))
    return out


def _check_wedge_cap(d, r):
    if comb(d, r) > WEDGE_CAP:
        raise CapExceeded(
            f"wedge space dimension C({d},{r}) = {comb(d, r)} exceeds "
            f"the cap {WEDGE_CAP}")


# ---------------------------------------------------------------------------
# restricted roots by diagonalization at a generic section point

def compute_roots_by_diagonalization(action: LinearAction, basis: list) -> list:
    """Restricted roots with multiplicities from exact spectral data.

    For a section point a the self-adjoint operator  B^{-1} rho(a)^T S rho(a)
    on the algebra acts on each root space as the scalar lambda(a)^2.  A
    generic rational point separates the root spaces; the quadratic form
    lambda(t)^2 in the section coordinates is then read off by evaluating on
    eigenvectors, and its rank-one square root recovers lambda up to sign.
    Signs are normalized so the first nonzero coefficient is positive.
    """
    r = len(basis)
    Binv = inverse(action.inner_g)
    S = action.inner_V

    def sq_operator(point: Vec) -> QMatrix:
        R = rho_at(action, point)
        return Binv * (R.transpose() * (S * R))

    base = 4
    for attempt in range(6):
        weights = [Fraction(base) ** k for k in range(r)]
        a_star = [sum((w * b[i] for w, b in zip(weights, basis)), Fraction(0))
                  for i in range(action.d)]
        A_star = sq_operator(a_star)
        spaces = rational_eigenspaces(A_star)
        roots = []
        ok = True
        for lam_sq, vecs in spaces:
            if lam_sq == 0:
                continue  # centralizer directions carry no root
            x = vecs[0]
            Q = _eigen_quadratic(sq_operator, basis, x)
            if Q is None:
                ok = False
                break
            lam = _rank_one_root(Q)
            if lam is None:
                ok = False
                break
            roots.append((lam, len(vecs)))
        if ok and len({lam for lam, _ in roots}) == len(roots):
            return sorted(roots)
        base += 3  # retry with a more generic point
    raise InvalidAction("failed to separate restricted roots at a generic point")


def _eigen_quadratic(sq_operator, basis, x):
    """Values Q(t) = lambda(t)^2 of the root square on eigenvector x, as a
    symmetric r x r coefficient matrix; None when x stops being an
    eigenvector (non-generic point)."""
    r = len(basis)
    d = len(basis[0])

    def value_at(point):
        y = sq_operator(point).matvec(x)
        i = next((k for k, c in enumerate(x) if c != 0))
        mu = y[i] / x[i]
        if y != [mu * c for c in x]:
            return None
        return mu

    Q = [[Fraction(0)] * r for _ in range(r)]
    for k in range(r):
        mu = value_at(basis[k])
        if mu is None:
            return None
        Q[k][k] = mu
    for k in range(r):
        for l in range(k + 1, r):
            point = [basis[k][i] + basis[l][i] for i in range(d)]
            mu = value_at(point)
            if mu is None:
                return None
            Q[k][l] = Q[l][k] = (mu - Q[k][k] - Q[l][l]) / 2
    return Q


def _rank_one_root(Q) -> tuple | None:
    """Write the PSD matrix Q as c c^T with rational c, or return None."""
    r = len(Q)
    k0 = next((k for k in range(r) if Q[k][k] != 0), None)
    if k0 is None:
        return None
    c0 = _rat_sqrt(Q[k0][k0])
    if c0 is None:
        return None
    c = [Q[k0][l] / c0 for l in range(r)]
    for k in range(r):
        for l in range(r):
            if c[k] * c[l] != Q[k][l]:
                return None
    lead = next((x for x in c if x != 0))
    if lead < 0:
        c = [-x for x in c]
    return tuple(c)


def _rat_sqrt(q: Fraction) -> Fraction | None:
    if q < 0:
        return None
    from math import isqrt
    rn, rd = isqrt(q.numerator), isqrt(q.denominator)
    if rn * rn == q.numerator and rd * rd == q.denominator:
        return Fraction(rn, rd)
    return None


# ---------------------------------------------------------------------------
# public catalog interface

def build_case(case: str, n: int | None = None) -> LinearAction:
    """Construct a catalog action; validates every invariant before return."""
    if case == "torus2":
        action = _build_torus2()
    elif case == "nonpolar_so2":
        action = _build_nonpolar_so2()
    elif case == "sym_real":
        if n is None:
            raise ValueError("sym_real needs the size n")
        action = _build_sym_real(n)
    elif case == "sym_real_traceless":
        if n is None:
            raise ValueError("sym_real_traceless needs the size n")
        action = _build_sym_real_traceless(n)
    elif case == "sym_complex":
        if n is None:
            raise ValueError("sym_complex needs the size n")
        action = _build_sym_complex(n)
    else:
        raise ValueError(f"unknown case {case!r}; choose from {CATALOG_CASES}")
    validate_action(action)
    return action


def cartan_data(action: LinearAction) -> CartanData:
    if action.cartan is None:
        raise NotPolar(f"action {action.name} carries no Cartan section")
    return action.cartan


def rho_at(action: LinearAction, v: Vec) -> QMatrix:
    """The d x p matrix rho(v) whose column j is generator j applied to v."""
    v = [_rat(x) for x in v]
    cols = [G.matvec(v) for G in action.generators]
    if not cols:
        return QMatrix([[ ] for _ in range(action.d)])
    return QMatrix.from_columns(cols)


def rho_symbolic(action: LinearAction) -> list:
    """rho(v) with symbolic coordinates: a d x p matrix of linear forms."""
    return [[LinForm(G.rows[i]) for G in action.generators]
            for i in range(action.d)]


def discriminant_irreducible(cd: CartanData) -> bool:
    """Irreducibility of the discriminant from the root diagram: connected,
    simply-laced of type A/D/E, and every multiplicity 1."""
    if any(m != 1 for _, m in cd.roots):
        return False
    label = cd.diagram
    if "x" in label:
        return False
    if len(label) < 2 or label[0] not in "ADE":
        return False
    try:
        rank = int(label[1:])
    except ValueError:
        return False
    if label[0] == "A":
        return rank >= 1
    if label[0] == "D":
        return rank >= 4
    return rank in (6, 7, 8)


def regular_point(action: LinearAction, seed: int = 0) -> Vec:
    """A rational point with principal (maximal-rank) orbit, verified."""
    import random

    name = action.name
    if name == "torus2":
        point = [_rat(x) for x in (1, 0, 1, 0)]
    elif name == "nonpolar_so2":
        point = [_rat(x) for x in (1, 0, 1, 0)]
    elif name == "sym_real":
        n = action.meta["n"]
        m = _zeros(n)
        for i in range(n):
            m[i][i] = Fraction(i + 1)
        point = sym_matrix_to_coords(n, m)
    elif name == "sym_real_traceless":
        n = action.meta["n"]
        m = _zeros(n)
        for i in range(n):
            m[i][i] = Fraction(2 * (i + 1) - (n + 1))
        point = traceless_matrix_to_coords(n, m)
    elif name == "sym_complex":
        n = action.meta["n"]
        rng = random.Random(seed)
        point = None
        for _ in range(32):
            K = _zeros(n)
            for i in range(n):
                for j in range(i + 1, n):
                    K[i][j] = Fraction(rng.randint(-5, 5), rng.randint(1, 3))
                    K[j][i] = -K[i][j]
            try:
                X = _cayley_conjugated_diag(n, K)
            except ValueError:
                continue
            point = complex_sym_to_coords(n, (X, _zeros(n)))
            break
        if point is None:
            raise InvalidAction("could not build a regular point")
    else:
        raise ValueError(f"no regular point construction for {name!r}")
    rank, _ = rank_kernel(rho_at(action, point))
    expected = _generic_rank(action, seed)
    if rank != expected:
        raise InvalidAction(
            f"constructed point has orbit rank {rank}, expected {expected}")
    return point


def _cayley_conjugated_diag(n, K):
    """X = O^T Z O with O the Cayley transform of the skew matrix K and
    Z = diag(1..n); the first column of O must be cyclic for Z."""
    I = QMatrix.identity(n)
    KQ = QMatrix(K)
    O = (I - KQ) * inverse(I + KQ)
    w = O.column(0)
    if any(x == 0 for x in w):
        raise ValueError("first column is not cyclic")
    Z = QMatrix.diagonal([Fraction(i + 1) for i in range(n)])
    X = O.transpose() * Z * O
    return X.rows


def _generic_rank(action: LinearAction, seed: int = 0) -> int:
    import random
    rng = random.Random(1_000_003 * seed + 17)
    best = 0
    for _ in range(3):
        v = [Fraction(rng.randint(-9, 9), rng.randint(1, 4))
             for _ in range(action.d)]
        rank, _ = rank_kernel(rho_at(action, v))
        best = max(best, rank)
    return best


# ---------------------------------------------------------------------------
# text serialization

def save_action(action: LinearAction, path: str) -> None:
    with open(path, "w", encoding="ascii") as fh:
        fh.write(action_to_text(action))


def load_action(path: str) -> LinearAction:
    with open(path, encoding="ascii") as fh:
        return action_from_text(fh.read())


def action_to_text(action: LinearAction) -> str:
    lines = [f"action {action.name}"]
    if "n" in action.meta:
        lines.append(f"size {action.meta['n']}")
    lines.append(f"dims {action.d} {action.p}")
    lines.append("vars " + " ".join(action.var_names))
    for k, G in enumerate(action.generators):
        lines.append(f"generator {k}")
        for row in G.rows:
            lines.append("row " + " ".join(str(x) for x in row))
    lines.append("inner_g")
    for row in action.inner_g.rows:
        lines.append("row " + " ".join(str(x) for x in row))
    lines.append("inner_V")
    for row in action.inner_V.rows:
        lines.append("row " + " ".join(str(x) for x in row))
    cd = action.cartan
    if cd is not None:
        lines.append(f"cartan {cd.rank} {cd.diagram}")
        for v in cd.basis:
            lines.append("basis " + " ".join(str(x) for x in v))
        for lam, mult in cd.roots:
            lines.append(f"root {mult} " + " ".join(str(x) for x in lam))
    lines.append("end")
    return "\n".join(lines) + "\n"


def action_from_text(text: str) -> LinearAction:
    lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
    pos = 0

    def take():
        nonlocal pos
        ln = lines[pos]
        pos += 1
        return ln

    head = take().split()
    if head[0] != "action" or len(head) != 2:
        raise ValueError("missing action header")
    name = head[1]
    meta = {}
    if lines[pos].startswith("size "):
        meta["n"] = int(take().split()[1])
    dims = take().split()
    if dims[0] != "dims":
        raise ValueError("missing dims line")
    d, p = int(dims[1]), int(dims[2])
    vars_line = take().split()
    if vars_line[0] != "vars" or len(vars_line) != d + 1:
        raise ValueError("vars line does not match the dimension")
    var_names = vars_line[1:]

    def read_rows(count, width):
        out = []
        for _ in range(count):
            parts = take().split()
            if parts[0] != "row" or len(parts) != width + 1:
                raise ValueError(f"bad matrix row: {' '.join(parts)!r}")
            out.append([Fraction(x) for x in parts[1:]])
        return out

    generators = []
    for k in range(p):
        tag = take().split()
        if tag[0] != "generator" or int(tag[1]) != k:
            raise ValueError(f"expected generator {k}")
        generators.append(QMatrix(read_rows(d, d)))
    if take() != "inner_g":
        raise ValueError("missing inner_g block")
    inner_g = QMatrix(read_rows(p, p)) if p else QMatrix([])
    if take() != "inner_V":
        raise ValueError("missing inner_V block")
    inner_V = QMatrix(read_rows(d, d))
    cartan = None
    nxt = take()
    if nxt.startswith("cartan"):
        parts = nxt.split()
        rank, diagram = int(parts[1]), parts[2]
        basis = []
        for _ in range(rank):
            row = take().split()
            if row[0] != "basis":
                raise ValueError("missing Cartan basis vector")
            basis.append([Fraction(x) for x in row[1:]])
        roots = []
        while lines[pos].startswith("root "):
            row = take().split()
            roots.append((tuple(Fraction(x) for x in row[2:]), int(row[1])))
        indices = []
        for v in basis:
            idx = _coordinate_direction(v)
            if idx is None:
                raise ValueError("Cartan basis vector is not a coordinate "
                                 "direction")
            indices.append(idx)
        cartan = CartanData(rank=rank, basis=basis, indices=indices,
                            roots=roots, diagram=diagram)
        nxt = take()
    if nxt != "end":
        raise ValueError("missing end terminator")
    action = LinearAction(name=name, d=d, p=p, generators=generators,
                          inner_g=inner_g, inner_V=inner_V,
                          var_names=var_names, cartan=cartan, meta=meta)
    validate_action(action)
    return action

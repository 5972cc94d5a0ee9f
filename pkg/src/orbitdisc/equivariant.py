"""Wedge-space equivariance and sum-of-squares certificates.

The minor map Phi sends a wedge of m generators tensored with a wedge of
m coordinate directions to the corresponding m x m minor of the weighted
matrix S rho(v), a homogeneous polynomial of degree m.  The map
intertwines the natural action on its domain (adjoint action on the
algebra factor, derivation action on the wedge factor) with the action
on polynomials, so every invariant subspace W of the domain produces an
invariant weighted sum of squares

    f_W = sum_i (1/g_i) Phi(q_i)^2

over any orthogonal basis {q_i} of W with squared norms g_i; the
polynomial does not depend on the basis.  For polar actions every such
f_W is a nonnegative rational multiple of the discriminant, so searching
the invariant components in ascending dimension yields discriminant
certificates with few squares.  Invariant components are obtained from
the rational eigenspaces of the Casimir operator, refined where needed
by further exactly-computed operators commuting with the action (center
products, the quartic trace invariant, and a symmetric-commutant solve
on small blocks).

For maximal-rank polar actions (m = p, all restricted-root
multiplicities 1) the module also builds the bracket contraction map A
from degree-r wedges of V to g tensor degree-(r-2) wedges and its metric
adjoint A*; the composition of the minor map with A* vanishes, and the
maximal eigenvalue of the normalized Casimir operator on the degree-r
wedge space equals r.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from math import comb

from .actions import (
    WEDGE_CAP,
    InvalidAction,
    LinearAction,
    NotPolar,
    cartan_data,
    structure_constants,
)
from .discriminant import discriminant_charcoeff, orbit_dim
from .exactlin import (
    NonRationalSpectrum,
    QMatrix,
    det,
    gram_schmidt_weights,
    inner_product,
    inverse,
    rank_kernel,
    rational_eigenspaces,
    solve,
)
from .polyring import (
    CapExceeded,
    LinForm,
    MVPoly,
    det_linear_forms,
    equal_mod_constant,
    poly_from_text,
    poly_to_text,
)

Vec = list


class NoComponentFound(Exception):
    """No invariant component yielded a positive multiple of delta."""


# ---------------------------------------------------------------------------
# wedge spaces
# ---------------------------------------------------------------------------


def wedge_indices(n: int, k: int) -> list[tuple[int, ...]]:
    """Increasing k-element multi-indices of range(n), graded-lex order."""
    if k < 0 or k > n:
        return []
    return list(combinations(range(n), k))


def shuffle_sign(seq) -> int:
    """Sign of the permutation sorting the given distinct integers."""
    s = 1
    seq = list(seq)
    for i in range(len(seq)):
        for j in range(i + 1, len(seq)):
            if seq[i] > seq[j]:
                s = -s
    return s


def complement_index(I: tuple, n: int) -> tuple[tuple, int]:
    """Complementary multi-index and the sign of the shuffle (I, I^c)."""
    inside = set(I)
    comp = tuple(x for x in range(n) if x not in inside)
    return comp, shuffle_sign(list(I) + list(comp))


def wedge_matrix(M: QMatrix, k: int, basis=None) -> QMatrix:
    """Derivation extension of a linear map to the k-th wedge power:
    x.(u_1 ^ ... ^ u_k) = sum_i u_1 ^ ... ^ (x.u_i) ^ ... ^ u_k."""
    n = M.nrows
    if basis is None:
        basis = wedge_indices(n, k)
    pos = {I: c for c, I in enumerate(basis)}
    N = len(basis)
    rows = [[Fraction(0)] * N for _ in range(N)]
    for col, I in enumerate(basis):
        members = set(I)
        for a, ia in enumerate(I):
            for t in range(n):
                c = M.rows[t][ia]
                if not c:
                    continue
                if t != ia and t in members:
                    continue
                seq = I[:a] + (t,) + I[a + 1:]
                target = tuple(sorted(seq))
                rows[pos[target]][col] += shuffle_sign(seq) * c
    return QMatrix(rows)


def induced_wedge_action(action: LinearAction, k: int,
                         cap: int = WEDGE_CAP) -> list[QMatrix]:
    """Generator matrices on the k-th wedge power of V."""
    if comb(action.d, k) > cap:
        raise CapExceeded(
            f"wedge space of dimension {comb(action.d, k)} exceeds cap {cap}")
    basis = wedge_indices(action.d, k)
    return [wedge_matrix(G, k, basis) for G in action.generators]


def adjoint_matrices(action: LinearAction) -> list[QMatrix]:
    """ad_i on the algebra itself: column j holds the coordinates of
    the commutator of generators i and j."""
    table = structure_constants(action)
    p = action.p
    if p == 0:
        return []
    return [QMatrix.from_columns([table[i][j] for j in range(p)])
            for i in range(p)]


def kron(A: QMatrix, B: QMatrix) -> QMatrix:
    ra, ca = A.nrows, A.ncols
    rb, cb = B.nrows, B.ncols
    rows = [[Fraction(0)] * (ca * cb) for _ in range(ra * rb)]
    for i in range(ra):
        arow = A.rows[i]
        for j in range(ca):
            a = arow[j]
            if not a:
                continue
            for s in range(rb):
                brow = B.rows[s]
                out = rows[i * rb + s]
                for t in range(cb):
                    if brow[t]:
                        out[j * cb + t] = a * brow[t]
    return QMatrix(rows)


def wedge_gram(M: QMatrix, k: int, basis=None) -> QMatrix:
    """Gram matrix induced on the k-th wedge power: entry (I, J) is the
    k x k minor of M with rows I and columns J."""
    if k == 0:
        return QMatrix([[Fraction(1)]])
    n = M.nrows
    if basis is None:
        basis = wedge_indices(n, k)
    N = len(basis)
    diagonal = all(M.rows[i][j] == 0
                   for i in range(n) for j in range(n) if i != j)
    rows = [[Fraction(0)] * N for _ in range(N)]
    if diagonal:
        for c, I in enumerate(basis):
            w = Fraction(1)
            for i in I:
                w *= M.rows[i][i]
            rows[c][c] = w
        return QMatrix(rows)
    for a, I in enumerate(basis):
        for b, J in enumerate(basis):
            rows[a][b] = det(QMatrix([[M.rows[i][j] for j in J] for i in I]))
    return QMatrix(rows)


# ---------------------------------------------------------------------------
# the minor map Phi on Lambda^m(g) (x) Lambda^m(V)
# ---------------------------------------------------------------------------


@dataclass
class LinMap:
    """A linear map together with labels naming its bases."""
    domain: str
    codomain: str
    matrix: QMatrix


@dataclass
class PhiContext:
    """Precomputed wedge data for one action: the minor-map images of
    the domain basis, the induced generators, and the domain Gram."""
    action: LinearAction
    m: int
    gwedges: list
    vwedges: list
    polys: list
    gens: list
    gram: QMatrix
    mono_basis: list
    mono_pos: dict
    _central: list | None = field(default=None, repr=False)

    @property
    def dim(self) -> int:
        return len(self.gwedges) * len(self.vwedges)

    def pair_index(self, J: tuple, I: tuple) -> int:
        return (self.gwedges.index(J) * len(self.vwedges)
                + self.vwedges.index(I))


def _weighted_rho(action: LinearAction) -> list:
    """The d x p matrix of linear forms S rho(v)."""
    d, p = action.d, action.p
    srows = action.inner_V.rows
    out = []
    for i in range(d):
        row = []
        for j in range(p):
            coeffs = [Fraction(0)] * d
            for k in range(d):
                s = srows[i][k]
                if s:
                    gcol = action.generators[j].rows[k]
                    for t in range(d):
                        if gcol[t]:
                            coeffs[t] += s * gcol[t]
            row.append(LinForm(coeffs))
        out.append(row)
    return out


def _monomials(nvars: int, degree: int) -> list[tuple]:
    """Exponent tuples of the given total degree, descending graded-lex."""
    out = []

    def rec(prefix, rest, budget):
        if rest == 1:
            out.append(prefix + (budget,))
            return
        for e in range(budget, -1, -1):
            rec(prefix + (e,), rest - 1, budget - e)

    if nvars == 0:
        return [()] if degree == 0 else []
    rec((), nvars, degree)
    out.sort(key=lambda e: e, reverse=True)
    return out


def phi_context(action: LinearAction, seed: int = 0,
                cap: int = WEDGE_CAP) -> PhiContext:
    d, p = action.d, action.p
    m = orbit_dim(action, seed)
    ng, nv = comb(p, m), comb(d, m)
    if ng * nv > cap or comb(d, max(m, 1)) > cap:
        raise CapExceeded(
            f"minor-map domain of dimension {ng * nv} exceeds cap {cap}")
    gwedges = wedge_indices(p, m)
    vwedges = wedge_indices(d, m)
    if m == 0:
        polys = [MVPoly.const(d, Fraction(1))]
    else:
        wrho = _weighted_rho(action)
        polys = []
        for J in gwedges:
            for I in vwedges:
                sub = [[wrho[i][j] for j in J] for i in I]
                polys.append(det_linear_forms(sub))
    ads = adjoint_matrices(action)
    gbasis = wedge_indices(p, m)
    adw = [wedge_matrix(A, m, gbasis) for A in ads]
    vw = [wedge_matrix(G, m, vwedges) for G in action.generators]
    ig = QMatrix.identity(ng)
    iv = QMatrix.identity(nv)
    gens = [kron(adw[k], iv) + kron(ig, vw[k]) for k in range(p)]
    gram = kron(wedge_gram(action.inner_g, m, gwedges),
                wedge_gram(action.inner_V, m, vwedges))
    mono = _monomials(d, m)
    return PhiContext(action=action, m=m, gwedges=gwedges, vwedges=vwedges,
                      polys=polys, gens=gens, gram=gram, mono_basis=mono,
                      mono_pos={e: i for i, e in enumerate(mono)})


def phi_apply(ctx: PhiContext, vec: Vec) -> MVPoly:
    acc = MVPoly.zero(ctx.action.d)
    for c, poly in zip(vec, ctx.polys):
        if c and not poly.is_zero():
            acc = acc + poly.scale(c)
    return acc


def phi_matrix(action: LinearAction, ctx: PhiContext | None = None,
               cap: int = WEDGE_CAP) -> LinMap:
    """Matrix of the minor map: rows indexed by degree-m monomials in
    descending graded-lex order, columns by (generator wedge, coordinate
    wedge) pairs."""
    ctx = ctx or phi_context(action, cap=cap)
    rows = [[Fraction(0)] * ctx.dim for _ in ctx.mono_basis]
    for col, poly in enumerate(ctx.polys):
        for e, c in poly.terms.items():
            rows[ctx.mono_pos[e]][col] = c
    return LinMap(
        domain=f"L{ctx.m}(g)*L{ctx.m}(V)[{action.name}]",
        codomain=f"monomials deg {ctx.m} in {action.d} vars",
        matrix=QMatrix(rows))


def polynomial_action_matrices(ctx: PhiContext) -> list[QMatrix]:
    """Generator action on degree-m polynomials, (x.f)(v) = -grad f . (Gv),
    in the monomial basis of the context."""
    action = ctx.action
    d = action.d
    out = []
    for G in action.generators:
        gforms = [LinForm(G.rows[i]).to_poly() for i in range(d)]
        rows = [[Fraction(0)] * len(ctx.mono_basis)
                for _ in ctx.mono_basis]
        for col, e in enumerate(ctx.mono_basis):
            mono = MVPoly(d, {e: Fraction(1)})
            acc = MVPoly.zero(d)
            for i in range(d):
                di = mono.derivative(i)
                if di.is_zero() or gforms[i].is_zero():
                    continue
                acc = acc - di * gforms[i]
            for ee, c in acc.terms.items():
                rows[ctx.mono_pos[ee]][col] = c
        out.append(QMatrix(rows))
    return out


def equivariance_check(action: LinearAction,
                       ctx: PhiContext | None = None) -> bool:
    """Exact matrix identity: Phi composed with the domain action equals
    the polynomial action composed with Phi, for every generator."""
    ctx = ctx or phi_context(action)
    phi = phi_matrix(action, ctx).matrix
    pol = polynomial_action_matrices(ctx)
    for k in range(action.p):
        if not (phi * ctx.gens[k] - pol[k] * phi).is_zero():
            return False
    return True


def special_element(ctx: PhiContext) -> Vec:
    """The distinguished domain vector: the wedge of the first m
    generators tensored with the wedge of all non-Cartan coordinate
    directions."""
    action = ctx.action
    cd = cartan_data(action)
    J = tuple(range(ctx.m))
    I = tuple(i for i in range(action.d) if i not in set(cd.indices))
    if len(I) != ctx.m:
        raise InvalidAction(
            "Cartan section dimension is inconsistent with the orbit "
            f"dimension: {action.d} - {cd.rank} != {ctx.m}")
    vec = [Fraction(0)] * ctx.dim
    vec[ctx.pair_index(J, I)] = Fraction(1)
    return vec


# ---------------------------------------------------------------------------
# Casimir operator and invariant components
# ---------------------------------------------------------------------------


def casimir_on(action: LinearAction, mats: list[QMatrix]) -> QMatrix:
    """Unnormalized Casimir sum_{ij} (B^{-1})_{ij} T_i T_j on the space
    the given generator images act on."""
    if not mats:
        raise InvalidAction("Casimir needs at least one generator")
    p = action.p
    binv = inverse(action.inner_g)
    n = mats[0].nrows
    acc = QMatrix.zeros(n, n)
    for i in range(p):
        mixed = QMatrix.zeros(n, n)
        for j in range(p):
            c = binv.rows[i][j]
            if c:
                mixed = mixed + mats[j].scale(c)
        acc = acc + mats[i] * mixed
    return acc


def _is_scalar(M: QMatrix) -> Fraction | None:
    lam = M.rows[0][0] if M.nrows else Fraction(0)
    for i in range(M.nrows):
        for j in range(M.ncols):
            want = lam if i == j else 0
            if M.rows[i][j] != want:
                return None
    return lam


def casimir(action: LinearAction, mats: list[QMatrix],
            normalize: bool = True) -> tuple[QMatrix, Fraction | None]:
    """Casimir operator on a space, normalized so that the operator acts
    as the identity on V itself.  When the Casimir on V is not scalar
    (reducible V) the unnormalized operator is returned with None as the
    scale, signalling that normalization was skipped."""
    omega = casimir_on(action, mats)
    if not normalize:
        return omega, None
    kappa = _is_scalar(casimir_on(action, action.generators))
    if kappa is None or kappa == 0:
        return omega, None
    return omega.scale(Fraction(1) / kappa), kappa


class _Echelon:
    """Canonical reduced row-echelon basis of a growing subspace."""

    def __init__(self):
        self.rows: list[Vec] = []
        self.pivots: list[int] = []

    def reduce(self, v: Vec) -> Vec:
        v = list(v)
        for r, pc in zip(self.rows, self.pivots):
            c = v[pc]
            if c:
                v = [a - c * b for a, b in zip(v, r)]
        return v

    def add(self, v: Vec) -> bool:
        v = self.reduce(v)
        pc = next((i for i, c in enumerate(v) if c), None)
        if pc is None:
            return False
        inv = Fraction(1) / v[pc]
        v = [c * inv for c in v]
        for i, r in enumerate(self.rows):
            c = r[pc]
            if c:
                self.rows[i] = [a - c * b for a, b in zip(r, v)]
        at = next((i for i, q in enumerate(self.pivots) if q > pc),
                  len(self.pivots))
        self.rows.insert(at, v)
        self.pivots.insert(at, pc)
        return True

    def contains(self, v: Vec) -> bool:
        return all(c == 0 for c in self.reduce(v))


def _canonical_basis(vectors: list[Vec]) -> list[Vec]:
    ech = _Echelon()
    for v in vectors:
        ech.add(v)
    return ech.rows


def casimir_split(omega: QMatrix,
                  gens: list[QMatrix]) -> list[tuple[Fraction, list[Vec]]]:
    """Rational eigenspaces of the Casimir matrix, each verified to be
    closed under every generator, sorted by ascending dimension then
    eigenvalue."""
    out = []
    for lam, kern in rational_eigenspaces(omega):
        basis = _canonical_basis(kern)
        ech = _Echelon()
        for b in basis:
            ech.add(b)
        for X in gens:
            for b in basis:
                if not ech.contains(X.matvec(b)):
                    raise InvalidAction(
                        "Casimir eigenspace is not invariant; the operator "
                        "does not commute with the action")
        out.append((lam, basis))
    out.sort(key=lambda t: (len(t[1]), t[0]))
    return out


def generated_submodule(seed_vec: Vec, gens: list[QMatrix]) -> list[Vec]:
    """Canonical basis of the smallest invariant subspace containing the
    seed: closure under repeated generator application."""
    ech = _Echelon()
    if not ech.add(seed_vec):
        return []
    queue = list(ech.rows)
    while queue:
        v = queue.pop()
        for X in gens:
            w = X.matvec(v)
            if ech.add(w):
                queue.append(w)
    return ech.rows


@dataclass
class Component:
    """An invariant subspace tagged with its Casimir eigenvalue."""
    eigenvalue: Fraction
    basis: list

    @property
    def dim(self) -> int:
        return len(self.basis)


def _restrict_operator(T: QMatrix, basis: list[Vec]) -> QMatrix:
    cols = QMatrix.from_columns(basis)
    out = []
    for b in basis:
        x = solve(cols, T.matvec(b))
        if x is None:
            raise InvalidAction("operator does not preserve the block")
        out.append(x)
    return QMatrix.from_columns(out)


def _center_coords(action: LinearAction) -> list[Vec]:
    """Basis of the center of the acting algebra (coordinates in the
    generator basis): elements whose commutator with every generator
    vanishes."""
    p = action.p
    if p == 0:
        return []
    ads = adjoint_matrices(action)
    stacked = QMatrix([row for A in ads for row in A.rows])
    _, kern = rank_kernel(stacked)
    return _canonical_basis(kern)


def _central_operators(ctx: PhiContext) -> list[QMatrix]:
    """Exactly computed operators commuting with the whole action on the
    context space: pairwise products of central generators plus, for
    nonabelian algebras, the quartic trace invariant."""
    if ctx._central is not None:
        return ctx._central
    action = ctx.action
    p = action.p
    ads = adjoint_matrices(action)
    ops: list[QMatrix] = []
    center = _center_coords(action)
    zmats = []
    for z in center:
        Z = QMatrix.zeros(ctx.dim, ctx.dim)
        for c, g in zip(z, ctx.gens):
            if c:
                Z = Z + g.scale(c)
        zmats.append(Z)
    for i in range(len(zmats)):
        for j in range(i, len(zmats)):
            ops.append(zmats[i] * zmats[j])
    if any(not A.is_zero() for A in ads):
        binv = inverse(action.inner_g)
        duals = []
        for i in range(p):
            Dm = QMatrix.zeros(ctx.dim, ctx.dim)
            for j in range(p):
                c = binv.rows[j][i]
                if c:
                    Dm = Dm + ctx.gens[j].scale(c)
            duals.append(Dm)
        prods = [[duals[i] * duals[j] for j in range(p)] for i in range(p)]
        ff = [[ads[i] * ads[j] for j in range(p)] for i in range(p)]

        def tr_prod(A: QMatrix, B: QMatrix) -> Fraction:
            return sum((A.rows[r][s] * B.rows[s][r]
                        for r in range(A.nrows) for s in range(A.ncols)
                        if A.rows[r][s]), Fraction(0))

        quartic = QMatrix.zeros(ctx.dim, ctx.dim)
        for i in range(p):
            for j in range(p):
                mixed = QMatrix.zeros(ctx.dim, ctx.dim)
                for k in range(p):
                    for l in range(p):
                        t = tr_prod(ff[i][j], ff[k][l])
                        if t:
                            mixed = mixed + prods[k][l].scale(t)
                if not mixed.is_zero():
                    quartic = quartic + prods[i][j] * mixed
        if not quartic.is_zero():
            ops.append(quartic)
    ctx._central = ops
    return ops


def _symmetric_commutant(basis: list[Vec], gens_r: list[QMatrix],
                         gram_r: QMatrix) -> list[QMatrix]:
    """Basis of {T : T commutes with every restricted generator and T is
    self-adjoint for the restricted Gram}, as k x k matrices."""
    k = len(basis)
    rows = []
    for X in gens_r:
        for r in range(k):
            for c in range(k):
                coef = [Fraction(0)] * (k * k)
                for s in range(k):
                    coef[r * k + s] += X.rows[s][c]
                    coef[s * k + c] -= X.rows[r][s]
                rows.append(coef)
    G = gram_r
    for r in range(k):
        for c in range(k):
            coef = [Fraction(0)] * (k * k)
            for s in range(k):
                coef[s * k + c] += G.rows[r][s]
                coef[s * k + r] -= G.rows[s][c]
            rows.append(coef)
    _, kern = rank_kernel(QMatrix(rows))
    return [QMatrix([v[r * k:(r + 1) * k] for r in range(k)]) for v in kern]


def _restricted_gram(ctx: PhiContext, basis: list[Vec]) -> QMatrix:
    k = len(basis)
    rows = [[inner_product(basis[a], basis[b], ctx.gram) for b in range(k)]
            for a in range(k)]
    return QMatrix(rows)


_COMMUTANT_DIM_LIMIT = 14


def _split_by(basis: list[Vec], Tr: QMatrix) -> list[list[Vec]] | None:
    """Split the block along the rational eigenspaces of the restricted
    operator; None when the operator is scalar, has irrational spectrum,
    or fails to split."""
    if _is_scalar(Tr) is not None:
        return None
    try:
        spaces = rational_eigenspaces(Tr)
    except NonRationalSpectrum:
        return None
    if len(spaces) <= 1:
        return None
    cols = QMatrix.from_columns(basis)
    pieces = []
    for _, kern in spaces:
        lifted = [cols.matvec(w) for w in kern]
        pieces.append(_canonical_basis(lifted))
    return pieces


def _refine_block(ctx: PhiContext, basis: list[Vec], ops: list[QMatrix],
                  seed: int, depth: int = 0) -> list[list[Vec]]:
    if len(basis) <= 1 or depth >= 5:
        return [basis]
    for T in ops:
        pieces = _split_by(basis, _restrict_operator(T, basis))
        if pieces:
            out = []
            for piece in pieces:
                out.extend(_refine_block(ctx, piece, ops, seed, depth + 1))
            return out
    if len(basis) <= _COMMUTANT_DIM_LIMIT:
        gens_r = [_restrict_operator(X, basis) for X in ctx.gens]
        sols = _symmetric_commutant(basis, gens_r, _restricted_gram(ctx, basis))
        candidates = [S for S in sols if _is_scalar(S) is None]
        if len(sols) > 1:
            candidates.append(
                sum((S.scale(i + 1) for i, S in enumerate(sols[1:], 1)),
                    sols[0]))
            rng = random.Random(1_000_003 * seed + 7 * len(basis))
            for _ in range(4):
                combo = QMatrix.zeros(len(basis), len(basis))
                for S in sols:
                    combo = combo + S.scale(rng.randint(1, 9))
                candidates.append(combo)
        for Tr in candidates:
            pieces = _split_by(basis, Tr)
            if pieces:
                out = []
                for piece in pieces:
                    out.extend(
                        _refine_block(ctx, piece, ops, seed, depth + 1))
                return out
    return [basis]


def invariant_components(ctx: PhiContext, seed: int = 0) -> list[Component]:
    """Casimir eigenspaces refined into isotypic-or-finer invariant
    blocks, sorted by ascending dimension, then Casimir eigenvalue, then
    pivot pattern (a deterministic total order)."""
    omega, _ = casimir(ctx.action, ctx.gens)
    ops = _central_operators(ctx)
    out = []
    for lam, basis in casimir_split(omega, ctx.gens):
        for piece in _refine_block(ctx, basis, ops, seed):
            out.append(Component(eigenvalue=lam, basis=piece))

    def pivot_key(comp: Component):
        return tuple(next(i for i, c in enumerate(row) if c)
                     for row in comp.basis)

    out.sort(key=lambda comp: (comp.dim, comp.eigenvalue, pivot_key(comp)))
    return out


# ---------------------------------------------------------------------------
# weighted sums of squares and certificates
# ---------------------------------------------------------------------------


@dataclass
class SosCertificate:
    """A verified identity sum_i w_i q_i^2 = c * delta with positive
    rational weights and constant."""
    case: str
    n: int | None
    constant: Fraction
    squares: list
    component_dim: int
    component_eigenvalue: Fraction | None
    verified: bool = False

    @property
    def num_squares(self) -> int:
        return len(self.squares)


def f_W(ctx: PhiContext, basis: list[Vec]) -> tuple[MVPoly, list]:
    """The invariant polynomial of a subspace: orthogonalize the basis
    under the domain Gram and sum the weighted squared minor images.
    Returns the polynomial and the (weight, square) list; squares whose
    minor image vanishes are dropped since they contribute nothing."""
    qs, ws = gram_schmidt_weights(basis, inner=ctx.gram)
    total = MVPoly.zero(ctx.action.d)
    squares = []
    for q, g in zip(qs, ws):
        pq = phi_apply(ctx, q)
        if pq.is_zero():
            continue
        w = Fraction(1) / g
        squares.append((w, pq))
        total = total + pq.square().scale(w)
    return total, squares


def project_onto(ctx: PhiContext, vec: Vec, basis: list[Vec]) -> Vec:
    """Gram-orthogonal projection of a vector onto the span of basis."""
    qs, ws = gram_schmidt_weights(basis, inner=ctx.gram)
    out = [Fraction(0)] * len(vec)
    for q, g in zip(qs, ws):
        c = inner_product(vec, q, ctx.gram) / g
        if c:
            out = [a + c * b for a, b in zip(out, q)]
    return out


def verify_certificate(cert: SosCertificate, delta: MVPoly) -> bool:
    """Exact symbolic check of the certificate identity; sets the
    verified flag on success."""
    if cert.constant <= 0 or any(w <= 0 for w, _ in cert.squares):
        cert.verified = False
        return False
    acc = MVPoly.zero(delta.nvars)
    for w, q in cert.squares:
        acc = acc + q.square().scale(w)
    ok = (acc - delta.scale(cert.constant)).is_zero()
    cert.verified = ok
    return ok


def component_certificate(ctx: PhiContext, comp: Component,
                          delta: MVPoly) -> SosCertificate | None:
    """Certificate from one invariant component, or None when its
    invariant polynomial is not a positive multiple of delta."""
    poly, squares = f_W(ctx, comp.basis)
    c = equal_mod_constant(poly, delta)
    if c is None or c <= 0:
        return None
    cert = SosCertificate(
        case=ctx.action.name, n=ctx.action.meta.get("n"), constant=c,
        squares=squares, component_dim=comp.dim,
        component_eigenvalue=comp.eigenvalue)
    if not verify_certificate(cert, delta):
        raise InvalidAction("internal error: certificate failed verification")
    return cert


def sos_search(action: LinearAction, seed: int = 0,
               cap: int = WEDGE_CAP) -> SosCertificate:
    """Search invariant components in ascending dimension; within each,
    generate the submodule of the projected special element and accept
    the first whose invariant polynomial is a positive multiple of the
    discriminant.  The returned certificate is verified symbolically."""
    if not action.polar:
        raise NotPolar(f"{action.name} admits no Cartan section")
    ctx = phi_context(action, seed=seed, cap=cap)
    delta = discriminant_charcoeff(action, seed)
    theta = special_element(ctx)
    for comp in invariant_components(ctx, seed):
        proj = project_onto(ctx, theta, comp.basis)
        if all(c == 0 for c in proj):
            continue
        W = generated_submodule(proj, ctx.gens)
        cert = component_certificate(
            ctx, Component(eigenvalue=comp.eigenvalue, basis=W), delta)
        if cert is not None:
            return cert
    raise NoComponentFound(
        f"no invariant component certifies the discriminant of {action.name}")


# ---------------------------------------------------------------------------
# certificate serialization
# ---------------------------------------------------------------------------


def cert_to_text(cert: SosCertificate, var_names: list[str]) -> str:
    lines = [f"certificate {cert.case}"]
    lines.append(f"n {cert.n if cert.n is not None else '-'}")
    lines.append(f"constant {cert.constant}")
    eig = cert.component_eigenvalue
    lines.append(f"component {cert.component_dim} "
                 f"{eig if eig is not None else '-'}")
    lines.append(f"verified {'true' if cert.verified else 'false'}")
    lines.append(f"squares {len(cert.squares)}")
    for w, q in cert.squares:
        lines.append(f"square {w}")
        lines.append(poly_to_text(q, var_names).rstrip("\n"))
    lines.append("end")
    return "\n".join(lines) + "\n"


def cert_from_text(text: str) -> SosCertificate:
    lines = text.splitlines()
    idx = 0

    def take(prefix: str) -> str:
        nonlocal idx
        if idx >= len(lines) or not lines[idx].startswith(prefix + " "):
            raise ValueError(f"expected a '{prefix}' line at line {idx + 1}")
        val = lines[idx][len(prefix) + 1:]
        idx += 1
        return val

    case = take("certificate")
    nval = take("n")
    n = None if nval == "-" else int(nval)
    constant = Fraction(take("constant"))
    dim_s, eig_s = take("component").split()
    eig = None if eig_s == "-" else Fraction(eig_s)
    verified = take("verified") == "true"
    count = int(take("squares"))
    squares = []
    for _ in range(count):
        w = Fraction(take("square"))
        block = []
        while idx < len(lines):
            block.append(lines[idx])
            idx += 1
            if block[-1] == "end":
                break
        poly, _ = poly_from_text("\n".join(block) + "\n")
        squares.append((w, poly))
    if idx >= len(lines) or lines[idx] != "end":
        raise ValueError("missing final end line")
    return SosCertificate(case=case, n=n, constant=constant, squares=squares,
                          component_dim=int(dim_s), component_eigenvalue=eig,
                          verified=verified)


# ---------------------------------------------------------------------------
# the bracket contraction maps A and A*
# ---------------------------------------------------------------------------


def v_bracket_table(action: LinearAction) -> list[list[Vec]]:
    """Brackets of coordinate directions of V, landing in the algebra:
    table[a][b] solves <[e_a, e_b], x_j> = <G_j e_a, e_b> for all j."""
    d, p = action.d, action.p
    S = action.inner_V
    binv = inverse(action.inner_g)
    table = [[None] * d for _ in range(d)]
    for a in range(d):
        ea = [Fraction(1) if i == a else Fraction(0) for i in range(d)]
        images = [G.matvec(ea) for G in action.generators]
        for b in range(d):
            eb = [Fraction(1) if i == b else Fraction(0) for i in range(d)]
            t = [inner_product(img, eb, S) for img in images]
            table[a][b] = binv.matvec(t) if p else []
    return table


def _require_maximal_rank(action: LinearAction) -> int:
    cd = cartan_data(action)
    if action.p != action.d - cd.rank:
        raise InvalidAction(
            "bracket contraction needs a maximal-rank action (orbit "
            "dimension equal to the number of generators)")
    if cd.rank < 2:
        raise InvalidAction("bracket contraction needs rank at least 2")
    return cd.rank


def a_map(action: LinearAction, cap: int = WEDGE_CAP) -> LinMap:
    """The alternating bracket contraction from degree-r wedges of V to
    g tensor degree-(r-2) wedges: each ordered pair of wedge slots is
    contracted into its bracket with the sign that makes the map
    well-defined on wedges."""
    r = _require_maximal_rank(action)
    d, p = action.d, action.p
    if comb(d, r) > cap:
        raise CapExceeded(f"wedge dimension {comb(d, r)} exceeds cap {cap}")
    dom = wedge_indices(d, r)
    codw = wedge_indices(d, r - 2)
    codpos = {K: i for i, K in enumerate(codw)}
    table = v_bracket_table(action)
    nrows = p * len(codw)
    rows = [[Fraction(0)] * len(dom) for _ in range(nrows)]
    for col, Y in enumerate(dom):
        for a in range(r):
            for b in range(a + 1, r):
                xi = table[Y[a]][Y[b]]
                if all(c == 0 for c in xi):
                    continue
                sign = -1 if (a + b) % 2 == 0 else 1
                rest = Y[:a] + Y[a + 1:b] + Y[b + 1:]
                rpos = codpos[rest]
                for k, c in enumerate(xi):
                    if c:
                        rows[k * len(codw) + rpos][col] += sign * c
    return LinMap(domain=f"L{r}(V)[{action.name}]",
                  codomain=f"g*L{r - 2}(V)[{action.name}]",
                  matrix=QMatrix(rows))


def a_star(action: LinearAction, amap: LinMap | None = None,
           cap: int = WEDGE_CAP) -> LinMap:
    """Adjoint of the bracket contraction for the wedge-extended inner
    products: A* = Gdom^{-1} A^T Gcod."""
    r = _require_maximal_rank(action)
    amap = amap or a_map(action, cap)
    gdom = wedge_gram(action.inner_V, r)
    gcod = kron(action.inner_g, wedge_gram(action.inner_V, r - 2))
    mat = inverse(gdom) * amap.matrix.transpose() * gcod
    return LinMap(domain=amap.codomain, codomain=amap.domain, matrix=mat)


def lambda_r_to_domain(ctx: PhiContext, vec_r: Vec) -> Vec:
    """Transport a degree-r wedge vector to the minor-map domain through
    the metric identification: lower with the wedge Gram of the inner
    product, then pair each r-wedge K with the complementary m-wedge via
    the volume form (sign of the shuffle (K, K^c)), tensored with the
    full generator wedge.  Up to one global scalar this is the Hodge
    correspondence, so orthogonality is preserved."""
    action = ctx.action
    d = action.d
    r = d - ctx.m
    if len(ctx.gwedges) != 1:
        raise InvalidAction("complement transport needs a maximal-rank "
                            "action (one-dimensional top generator wedge)")
    rw = wedge_indices(d, r)
    lowered = wedge_gram(action.inner_V, r, rw).matvec(list(vec_r))
    out = [Fraction(0)] * ctx.dim
    vpos = {I: i for i, I in enumerate(ctx.vwedges)}
    for c, K in zip(lowered, rw):
        if not c:
            continue
        compI, sign = complement_index(K, d)
        out[vpos[compI]] += sign * c
    return out


def check_phi_astar_zero(action: LinearAction,
                         ctx: PhiContext | None = None,
                         cap: int = WEDGE_CAP) -> bool:
    """Exact check that the minor map annihilates the image of the
    bracket-contraction adjoint."""
    ast = a_star(action, cap=cap)
    ctx = ctx or phi_context(action, cap=cap)
    ncols = ast.matrix.ncols
    for j in range(ncols):
        col = ast.matrix.column(j)
        vec = lambda_r_to_domain(ctx, col)
        if not phi_apply(ctx, vec).is_zero():
            return False
    return True


def kostant_report(action: LinearAction, cap: int = WEDGE_CAP) -> dict:
    """Spectral data of the normalized Casimir operator on the degree-r
    wedge space: its maximal eigenvalue (expected to equal r), the
    dimension of the top eigenspace, and the kernel dimension of the
    bracket contraction (the top eigenspace always sits inside it)."""
    r = _require_maximal_rank(action)
    gens_r = induced_wedge_action(action, r, cap)
    omega, kappa = casimir(action, gens_r)
    spectrum = rational_eigenspaces(omega)
    top, top_basis = max(spectrum, key=lambda t: t[0])
    amat = a_map(action, cap).matrix
    _, kern = rank_kernel(amat)
    return {
        "rank": r,
        "normalized": kappa is not None,
        "kappa": kappa,
        "max_eigenvalue": top,
        "top_dim": len(top_basis),
        "ker_a_dim": len(kern),
    }


# ---------------------------------------------------------------------------
# predictions and regularity
# ---------------------------------------------------------------------------


def predicted_component(case: str, n: int) -> tuple[str, int]:
    """Highest-weight label and real dimension of the component that is
    guaranteed to certify the discriminant for the two matrix families."""
    if case == "sym_real_traceless":
        dim = comb(2 * n - 1, n - 1) - comb(2 * n - 3, n - 1)
    elif case == "sym_complex":
        dim = 2 * comb(2 * n - 1, n)
    else:
        raise ValueError(f"no component prediction for case {case!r}")
    return f"{n}*theta1", dim


def cycle_matrix(n: int) -> list[list[Fraction]]:
    """The n-cycle permutation matrix sending, with l = n // 2,
    e_1 -> e_{l+1} -> e_{l+2} -> ... -> e_n -> e_l -> ... -> e_2 -> e_1.
    Its first column powers make it a regular element for both matrix
    families."""
    if n < 2:
        raise ValueError("cycle matrix needs n >= 2")
    half = n // 2
    seq = [0] + list(range(half, n)) + list(range(half - 1, 0, -1))
    rows = [[Fraction(0)] * n for _ in range(n)]
    for t, src in enumerate(seq):
        rows[seq[(t + 1) % n]][src] = Fraction(1)
    return rows


def _to_complex_entry(x) -> tuple[Fraction, Fraction]:
    if isinstance(x, tuple):
        return Fraction(x[0]), Fraction(x[1])
    return Fraction(x), Fraction(0)


def _cmul(A, B):
    n = len(A)
    out = [[(Fraction(0), Fraction(0))] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            re = Fraction(0)
            im = Fraction(0)
            for k in range(n):
                ar, ai = A[i][k]
                br, bi = B[k][j]
                re += ar * br - ai * bi
                im += ar * bi + ai * br
            out[i][j] = (re, im)
    return out


def regularity_test(case: str, X) -> bool:
    """Regularity of a matrix for the two matrix families, by the
    power-independence criterion coming from the differentials of the
    basic trace invariants.  For the complex family the invariants are
    the traces of the first n powers, so the matrix is regular exactly
    when I, X, ..., X^{n-1} are linearly independent.  For the traceless
    family the invariants start at the second power and the differentials
    pair against traceless directions only, so the powers X, ..., X^{n-1}
    are first projected to trace zero and regularity means those
    projections are independent.  Complex entries may be given as
    (real, imaginary) pairs."""
    if case not in ("sym_real_traceless", "sym_complex"):
        raise ValueError(f"no regularity criterion for case {case!r}")
    n = len(X)
    if n < 2 or any(len(row) != n for row in X):
        raise ValueError("regularity test needs a square matrix, n >= 2")
    cm = [[_to_complex_entry(x) for x in row] for row in X]
    ident = [[(Fraction(1 if i == j else 0), Fraction(0)) for j in range(n)]
             for i in range(n)]
    powers = [ident]
    for _ in range(n - 1):
        powers.append(_cmul(powers[-1], cm))
    if case == "sym_real_traceless":
        family = []
        for P in powers[1:]:
            tr_re = sum(P[i][i][0] for i in range(n))
            tr_im = sum(P[i][i][1] for i in range(n))
            family.append([[(P[i][j][0] - (tr_re / n if i == j else 0),
                             P[i][j][1] - (tr_im / n if i == j else 0))
                            for j in range(n)] for i in range(n)])
    else:
        family = powers
    vecs = []
    for P in family:
        flat = []
        for row in P:
            for re, _ in row:
                flat.append(re)
        for row in P:
            for _, im in row:
                flat.append(im)
        vecs.append(flat)
    rank, _ = rank_kernel(QMatrix(vecs))
    return rank == len(family)

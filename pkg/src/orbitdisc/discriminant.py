"""Squared-volume discriminants of linear Lie algebra actions.

For an action of a compact Lie algebra g on a Euclidean space V, the
principal orbits through generic points are m-dimensional submanifolds,
and the square of their m-dimensional volume (suitably normalized) is a
polynomial delta on V, homogeneous of degree 2m.  This module computes
delta exactly, by two independent routes, and compares its restriction
to a Cartan section against the product of restricted roots.

Route one (`discriminant_minors`) expands delta as a weighted sum of
squared m x m minors of the d x p matrix rho(v) whose columns are the
generator images G_j v:

    delta = sum_{I, J} (sV_I / gG_J) * det(rho(v)_{I,J})^2

where sV_I is the product of the diagonal metric weights of V over the
row subset I and gG_J the product of the diagonal metric weights of g
over the column subset J.  This requires both inner products to be
diagonal in the chosen bases, which holds for every catalog case.

Route two (`discriminant_charcoeff`) computes delta as the m-th
characteristic coefficient e_m of the p x p matrix

    M(v) = rho(v)^T S rho(v) B^{-1}

with S, B the Gram matrices of V and g.  This works for arbitrary
(non-diagonal) inner products and avoids enumerating minors.  The two
routes agree because of the Cauchy-Binet expansion of the principal
minors of rho^T S rho.

When both metrics are Euclidean (S = B = I) the two formulas reduce to
the plain sum of squared minors and e_m(rho^T rho).
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations
from math import comb

from .actions import (
    WEDGE_CAP,
    InvalidAction,
    LinearAction,
    _generic_rank,
    cartan_data,
    rho_symbolic,
)
from .exactlin import inverse
from .polyring import (
    CapExceeded,
    LinForm,
    MVPoly,
    char_coeffs_symbolic,
    det_linear_forms,
    equal_mod_constant,
)


def orbit_dim(action: LinearAction, seed: int = 0) -> int:
    """Dimension m of a principal orbit: the generic rank of rho(v).

    Sampled at a few seeded rational points; the rank of rho can only
    drop on a proper Zariski-closed subset, so the maximum over samples
    is correct with overwhelming probability and is certified later by
    the vanishing of the characteristic coefficients above m.
    """
    return _generic_rank(action, seed)


def _diagonal_weights(M, what: str) -> list[Fraction]:
    n = M.nrows
    for i in range(n):
        for j in range(n):
            if i != j and M.rows[i][j] != 0:
                raise InvalidAction(
                    f"{what} inner product is not diagonal; "
                    "use discriminant_charcoeff instead")
    return [M.rows[i][i] for i in range(n)]


def discriminant_minors(action: LinearAction, seed: int = 0,
                        cap: int = WEDGE_CAP) -> MVPoly:
    """Discriminant via the weighted sum of squared m x m minors."""
    m = orbit_dim(action, seed)
    if m == 0:
        return MVPoly.const(action.d, Fraction(1))
    terms = comb(action.d, m) * comb(action.p, m)
    if terms > cap:
        raise CapExceeded(
            f"minor expansion needs {terms} determinants (cap {cap}); "
            "use discriminant_charcoeff instead")
    sv = _diagonal_weights(action.inner_V, "V")
    gg = _diagonal_weights(action.inner_g, "g")
    rho = rho_symbolic(action)
    total = MVPoly.zero(action.d)
    for cols in combinations(range(action.p), m):
        gw = Fraction(1)
        for j in cols:
            gw *= gg[j]
        for rows in combinations(range(action.d), m):
            sub = [[rho[i][j] for j in cols] for i in rows]
            minor = det_linear_forms(sub)
            if minor.is_zero():
                continue
            sw = Fraction(1)
            for i in rows:
                sw *= sv[i]
            total = total + minor.square().scale(sw / gw)
    return total


def char_coeffs(action: LinearAction) -> list[MVPoly]:
    """Characteristic coefficients [e_0, ..., e_p] of rho^T S rho B^{-1}.

    Entries of the p x p matrix are quadratic forms in the coordinates
    of V; e_k is homogeneous of degree 2k (or zero).
    """
    d, p = action.d, action.p
    if p == 0:
        return [MVPoly.const(d, Fraction(1))]
    rho = rho_symbolic(action)
    srows = action.inner_V.rows
    # U = S * rho, still a matrix of linear forms.
    U = []
    for i in range(d):
        row = []
        for j in range(p):
            coeffs = [Fraction(0)] * d
            for k in range(d):
                s = srows[i][k]
                if s:
                    rk = rho[k][j].coeffs
                    for t in range(d):
                        if rk[t]:
                            coeffs[t] += s * rk[t]
            row.append(LinForm(coeffs))
        U.append(row)
    # T = rho^T U, quadratic forms.
    T = [[MVPoly.zero(d) for _ in range(p)] for _ in range(p)]
    for k in range(p):
        for l in range(k, p):
            acc = MVPoly.zero(d)
            for i in range(d):
                a, b = rho[i][k], U[i][l]
                if a.is_zero() or b.is_zero():
                    continue
                acc = acc + a.to_poly() * b.to_poly()
            T[k][l] = acc
            if l != k:
                T[l][k] = acc
    binv = inverse(action.inner_g)
    M = [[MVPoly.zero(d) for _ in range(p)] for _ in range(p)]
    for k in range(p):
        for l in range(p):
            acc = MVPoly.zero(d)
            for j in range(p):
                w = binv.rows[j][l]
                if w and not T[k][j].is_zero():
                    acc = acc + T[k][j].scale(w)
            M[k][l] = acc
    return char_coeffs_symbolic(M)


def discriminant_charcoeff(action: LinearAction, seed: int = 0) -> MVPoly:
    """Discriminant as the m-th characteristic coefficient.

    Also certifies the sampled orbit dimension: every coefficient above
    m must vanish identically, otherwise the rank samples missed the
    generic stratum.
    """
    m = orbit_dim(action, seed)
    es = char_coeffs(action)
    for k in range(m + 1, len(es)):
        if not es[k].is_zero():
            raise InvalidAction(
                f"characteristic coefficient e_{k} is nonzero although "
                f"the sampled generic rank is {m}")
    return es[m]


def restrict_cartan(action: LinearAction, poly: MVPoly) -> MVPoly:
    """Restrict a polynomial on V to the Cartan section.

    Coordinates not belonging to the section are set to zero and the
    remaining ones are renumbered, so the result lives in rank-many
    variables ordered like the Cartan basis.
    """
    cd = cartan_data(action)
    return poly.restrict_to_vars(cd.indices)


def root_product(action: LinearAction) -> MVPoly:
    """Product of squared restricted roots, with multiplicities.

    Returns prod_lambda lambda^(2 mult_lambda) as a polynomial in the
    Cartan coordinates; the empty product (rank-zero root system) is
    the constant 1.
    """
    cd = cartan_data(action)
    acc = MVPoly.const(cd.rank, Fraction(1))
    for coeffs, mult in cd.roots:
        lf = LinForm([Fraction(c) for c in coeffs]).to_poly()
        acc = acc * lf ** (2 * mult)
    return acc


def verify_roots(action: LinearAction, method: str = "charpoly",
                 seed: int = 0) -> tuple[Fraction | None, MVPoly, MVPoly]:
    """Compare the restricted discriminant with the root product.

    Returns (c, restricted, product) where c is the constant with
    restricted == c * product, or None if no such constant exists.
    A successful comparison yields c > 0.
    """
    if method == "charpoly":
        delta = discriminant_charcoeff(action, seed)
    elif method == "minors":
        delta = discriminant_minors(action, seed)
    else:
        raise ValueError(f"unknown method {method!r}")
    restricted = restrict_cartan(action, delta)
    product = root_product(action)
    return equal_mod_constant(restricted, product), restricted, product


def lie_derivative(action: LinearAction, poly: MVPoly, k: int) -> MVPoly:
    """Derivative of poly along the flow of generator k.

    (L_k f)(v) = sum_i (G_k v)_i * df/dv_i.  Invariant polynomials are
    exactly those annihilated by every generator.
    """
    G = action.generators[k]
    acc = MVPoly.zero(action.d)
    for i in range(action.d):
        row = G.rows[i]
        if all(c == 0 for c in row):
            continue
        di = poly.derivative(i)
        if di.is_zero():
            continue
        acc = acc + di * LinForm(list(row)).to_poly()
    return acc


def is_invariant(action: LinearAction, poly: MVPoly) -> bool:
    """Exact infinitesimal invariance under every generator."""
    return all(lie_derivative(action, poly, k).is_zero()
               for k in range(action.p))

"""Exact linear algebra: determinants, kernels, spectra, Gram-Schmidt."""

import random
from fractions import Fraction

import pytest

from orbitdisc.exactlin import (
    DependentInput,
    NonRationalSpectrum,
    QMatrix,
    char_poly,
    det,
    gram_schmidt_weights,
    inner_product,
    inverse,
    is_spd,
    minimal_polynomial,
    rank_kernel,
    rational_eigenspaces,
    rational_roots,
    rref,
    solve,
)


def rand_matrix(rng, m, n, lo=-6, hi=6, den=3):
    return QMatrix([[Fraction(rng.randint(lo, hi), rng.randint(1, den))
                     for _ in range(n)] for _ in range(m)])


def det_cofactor(M):
    """Independent oracle: Laplace expansion along the first row."""
    n = M.nrows
    if n == 1:
        return M.rows[0][0]
    total = Fraction(0)
    for j in range(n):
        c = M.rows[0][j]
        if c == 0:
            continue
        sub = QMatrix([[M.rows[i][k] for k in range(n) if k != j]
                       for i in range(1, n)])
        total += (-1) ** j * c * det_cofactor(sub)
    return total


def test_det_matches_cofactor_expansion():
    rng = random.Random(11)
    for _ in range(40):
        n = rng.randint(1, 5)
        M = rand_matrix(rng, n, n)
        assert det(M) == det_cofactor(M)


def test_det_multiplicative():
    rng = random.Random(12)
    for _ in range(25):
        n = rng.randint(1, 4)
        A = rand_matrix(rng, n, n)
        B = rand_matrix(rng, n, n)
        assert det(A * B) == det(A) * det(B)


def test_inverse_roundtrip_and_singular():
    rng = random.Random(13)
    found = 0
    while found < 20:
        n = rng.randint(1, 5)
        A = rand_matrix(rng, n, n)
        if det(A) == 0:
            continue
        found += 1
        assert (A * inverse(A) - QMatrix.identity(n)).is_zero()
    singular = QMatrix([[Fraction(1), Fraction(2)], [Fraction(2), Fraction(4)]])
    with pytest.raises(ValueError):
        inverse(singular)


def test_rank_nullity_and_kernel_is_kernel():
    rng = random.Random(14)
    for _ in range(30):
        m, n = rng.randint(1, 5), rng.randint(1, 6)
        M = rand_matrix(rng, m, n, lo=-2, hi=2, den=1)
        rank, kern = rank_kernel(M)
        assert rank + len(kern) == n
        for v in kern:
            assert all(c == 0 for c in M.matvec(v))


def test_rref_idempotent():
    rng = random.Random(15)
    for _ in range(20):
        m, n = rng.randint(1, 4), rng.randint(1, 5)
        M = rand_matrix(rng, m, n, lo=-3, hi=3, den=1)
        reduced, pivots = rref(M.rows)
        again, pivots2 = rref(reduced)
        assert reduced == again and pivots == pivots2


def test_solve_consistent_and_inconsistent():
    rng = random.Random(16)
    for _ in range(25):
        m, n = rng.randint(1, 5), rng.randint(1, 5)
        M = rand_matrix(rng, m, n, lo=-3, hi=3, den=2)
        x0 = [Fraction(rng.randint(-4, 4)) for _ in range(n)]
        b = M.matvec(x0)
        x = solve(M, b)
        assert x is not None and M.matvec(x) == b
    M = QMatrix([[Fraction(1), Fraction(1)], [Fraction(1), Fraction(1)]])
    assert solve(M, [Fraction(0), Fraction(1)]) is None


def test_cayley_hamilton_up_to_8x8():
    rng = random.Random(17)
    for n in range(1, 9):
        M = rand_matrix(rng, n, n, lo=-3, hi=3, den=2)
        cp = char_poly(M)
        acc = QMatrix.zeros(n, n)
        power = QMatrix.identity(n)
        for c in cp:
            acc = acc + power.scale(c)
            power = power * M
        assert acc.is_zero()


def test_char_poly_constant_term_is_det():
    rng = random.Random(18)
    for _ in range(15):
        n = rng.randint(1, 5)
        M = rand_matrix(rng, n, n)
        cp = char_poly(M)
        assert cp[0] == (-1) ** n * det(M)
        assert cp[n] == 1


def test_minimal_polynomial_annihilates_and_divides():
    rng = random.Random(19)
    for _ in range(15):
        n = rng.randint(1, 5)
        M = rand_matrix(rng, n, n, lo=-2, hi=2, den=1)
        mp = minimal_polynomial(M)
        acc = QMatrix.zeros(n, n)
        power = QMatrix.identity(n)
        for c in mp:
            acc = acc + power.scale(c)
            power = power * M
        assert acc.is_zero()
        assert len(mp) <= n + 1 and mp[-1] == 1


def test_rational_roots_with_multiplicity():
    # (t - 2)^2 (t + 1/3) = t^3 - 11/3 t^2 + 8/3 t + 4/3
    p = [Fraction(4, 3), Fraction(8, 3), Fraction(-11, 3), Fraction(1)]
    assert sorted(rational_roots(p)) == [Fraction(-1, 3),
                                         Fraction(2), Fraction(2)]
    with pytest.raises(NonRationalSpectrum):
        rational_roots([Fraction(-2), Fraction(0), Fraction(1)])  # t^2 = 2


def test_rational_eigenspaces_exact():
    rng = random.Random(20)
    for _ in range(10):
        n = rng.randint(2, 4)
        lams = sorted(rng.sample(range(-5, 6), n))
        D = QMatrix.diagonal([Fraction(l) for l in lams])
        while True:
            P = rand_matrix(rng, n, n, lo=-2, hi=2, den=1)
            if det(P) != 0:
                break
        M = P * D * inverse(P)
        spaces = rational_eigenspaces(M)
        seen = []
        for lam, kern in spaces:
            seen.extend([lam] * len(kern))
            for v in kern:
                assert M.matvec(v) == [lam * c for c in v]
        assert sorted(seen) == [Fraction(l) for l in lams]


def test_rational_eigenspaces_refuses_rotation_and_nilpotent():
    rot = QMatrix([[Fraction(0), Fraction(-1)], [Fraction(1), Fraction(0)]])
    with pytest.raises(NonRationalSpectrum):
        rational_eigenspaces(rot)
    nil = QMatrix([[Fraction(0), Fraction(1)], [Fraction(0), Fraction(0)]])
    with pytest.raises(NonRationalSpectrum):
        rational_eigenspaces(nil)


def test_is_spd():
    assert is_spd(QMatrix.diagonal([Fraction(1, 2), Fraction(3)]))
    assert not is_spd(QMatrix.diagonal([Fraction(1), Fraction(-1)]))
    asym = QMatrix([[Fraction(1), Fraction(2)], [Fraction(0), Fraction(1)]])
    assert not is_spd(asym)


def test_gram_schmidt_known_answer():
    vectors = [[Fraction(1), Fraction(1)], [Fraction(0), Fraction(1)]]
    qs, ws = gram_schmidt_weights(vectors)
    assert qs[0] == [Fraction(1), Fraction(1)]
    assert qs[1] == [Fraction(-1, 2), Fraction(1, 2)]
    assert ws == [Fraction(2), Fraction(1, 2)]


def test_gram_schmidt_orthogonal_under_random_spd():
    rng = random.Random(21)
    for _ in range(10):
        n = rng.randint(2, 5)
        A = rand_matrix(rng, n, n, lo=-2, hi=2, den=1)
        G = A.transpose() * A + QMatrix.identity(n)
        assert is_spd(G)
        k = rng.randint(1, n)
        while True:
            vs = [[Fraction(rng.randint(-3, 3)) for _ in range(n)]
                  for _ in range(k)]
            if rank_kernel(QMatrix(vs))[0] == k:
                break
        qs, ws = gram_schmidt_weights(vs, inner=G)
        for i in range(k):
            assert inner_product(qs[i], qs[i], G) == ws[i] > 0
            for j in range(i):
                assert inner_product(qs[i], qs[j], G) == 0


def test_gram_schmidt_rejects_dependent():
    vs = [[Fraction(1), Fraction(2)], [Fraction(2), Fraction(4)]]
    with pytest.raises(DependentInput):
        gram_schmidt_weights(vs)


def test_cauchy_binet_numeric():
    """det(A A^t) equals the sum of squared maximal minors of A."""
    from itertools import combinations
    rng = random.Random(22)
    for _ in range(10):
        m, n = 3, 5
        A = rand_matrix(rng, m, n, lo=-3, hi=3, den=2)
        lhs = det(A * A.transpose())
        rhs = Fraction(0)
        for J in combinations(range(n), m):
            sub = QMatrix([[A.rows[i][j] for j in J] for i in range(m)])
            rhs += det(sub) ** 2
        assert lhs == rhs

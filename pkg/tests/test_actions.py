"""The built-in catalog of orthogonal linear actions and its root data."""

from fractions import Fraction

import pytest

from orbitdisc.actions import (
    CATALOG_CASES,
    CartanData,
    InvalidAction,
    LinearAction,
    NotPolar,
    action_from_text,
    action_to_text,
    build_case,
    cartan_data,
    discriminant_irreducible,
    regular_point,
    rho_at,
    structure_constants,
    sym_matrix_to_coords,
    traceless_coords_to_matrix,
    traceless_matrix_to_coords,
    validate_action,
)
from orbitdisc.exactlin import QMatrix, rank_kernel


ALL_INSTANCES = [
    ("torus2", None), ("nonpolar_so2", None),
    ("sym_real", 2), ("sym_real", 3),
    ("sym_real_traceless", 2), ("sym_real_traceless", 3),
    ("sym_complex", 2),
]


def test_catalog_builds_and_validates():
    for case, n in ALL_INSTANCES:
        action = build_case(case, n)
        assert action.name == case
        validate_action(action)


def test_unknown_case_and_missing_n():
    with pytest.raises(ValueError):
        build_case("octonions")
    for case in ("sym_real", "sym_real_traceless", "sym_complex"):
        with pytest.raises(ValueError):
            build_case(case)


def test_generators_skew_adjoint():
    for case, n in ALL_INSTANCES:
        action = build_case(case, n)
        S = action.inner_V
        for G in action.generators:
            assert (G.transpose() * S + S * G).is_zero()


def test_structure_constants_close_under_jacobi():
    for case, n in ALL_INSTANCES:
        action = build_case(case, n)
        p = action.p
        table = structure_constants(action)

        def bracket_coords(x, y):
            """[x, y] in generator coordinates for coordinate vectors."""
            out = [Fraction(0)] * p
            for i in range(p):
                if not x[i]:
                    continue
                for j in range(p):
                    if not y[j]:
                        continue
                    for k in range(p):
                        out[k] += x[i] * y[j] * table[i][j][k]
            return out

        basis = [[Fraction(int(i == t)) for i in range(p)] for t in range(p)]
        for i in range(p):
            for j in range(p):
                for k in range(p):
                    jac = bracket_coords(basis[i], bracket_coords(basis[j], basis[k]))
                    term2 = bracket_coords(basis[j], bracket_coords(basis[k], basis[i]))
                    term3 = bracket_coords(basis[k], bracket_coords(basis[i], basis[j]))
                    total = [a + b + c for a, b, c in zip(jac, term2, term3)]
                    assert all(x == 0 for x in total)


def test_validator_reports_broken_generator_by_index():
    action = build_case("torus2")
    bad = [G.copy() for G in action.generators]
    rows = [row[:] for row in bad[1].rows]
    rows[0][0] = Fraction(5)
    bad[1] = QMatrix(rows)
    broken = LinearAction(
        name="torus2", d=action.d, p=action.p, generators=bad,
        inner_g=action.inner_g, inner_V=action.inner_V,
        var_names=action.var_names, cartan=action.cartan)
    with pytest.raises(InvalidAction, match="generator 1"):
        validate_action(broken)


def hand_sym_real_2():
    """so(2) acting on 2x2 symmetric matrices, built from first principles.

    Coordinates (t1, t2, s12) for [[t1, s12], [s12, t2]]; the rotation
    generator E12 - E21 = [[0,1],[-1,0]] acts by X -> JX - XJ.
    """
    J = [[Fraction(0), Fraction(1)], [Fraction(-1), Fraction(0)]]

    def act(X):
        JX = [[sum(J[i][k] * X[k][j] for k in range(2)) for j in range(2)]
              for i in range(2)]
        XJ = [[sum(X[i][k] * J[k][j] for k in range(2)) for j in range(2)]
              for i in range(2)]
        return [[JX[i][j] - XJ[i][j] for j in range(2)] for i in range(2)]

    basis = [
        [[Fraction(1), Fraction(0)], [Fraction(0), Fraction(0)]],  # t1
        [[Fraction(0), Fraction(0)], [Fraction(0), Fraction(1)]],  # t2
        [[Fraction(0), Fraction(1)], [Fraction(1), Fraction(0)]],  # s12
    ]

    def coords(X):
        return [X[0][0], X[1][1], X[0][1]]

    cols = [coords(act(B)) for B in basis]
    return QMatrix.from_columns(cols)


def test_sym_real_2_matches_hand_construction():
    action = build_case("sym_real", 2)
    G = hand_sym_real_2()
    assert len(action.generators) == 1
    assert (action.generators[0] - G).is_zero()
    # trace form convention: <X, Y> = tr(XY)/2 is diag(1/2, 1/2, 1)
    expect = QMatrix.diagonal([Fraction(1, 2), Fraction(1, 2), Fraction(1)])
    assert (action.inner_V - expect).is_zero()


def test_root_data_diagrams_and_multiplicities():
    cd = cartan_data(build_case("torus2"))
    assert cd.diagram == "A1xA1"
    assert sorted(m for _, m in cd.roots) == [1, 1]

    cd = cartan_data(build_case("sym_real", 2))
    assert cd.diagram == "A1"
    assert [m for _, m in cd.roots] == [1]

    cd = cartan_data(build_case("sym_real", 3))
    assert cd.diagram == "A2"
    assert sorted(m for _, m in cd.roots) == [1, 1, 1]

    cd = cartan_data(build_case("sym_real_traceless", 3))
    assert cd.diagram == "A2"

    cd = cartan_data(build_case("sym_complex", 2))
    assert cd.diagram == "C2"
    assert sorted(m for _, m in cd.roots) == [1, 1, 1, 1]


def test_roots_restrict_correctly():
    """Each root with multiplicity mu contributes mu to d - r, and the
    restricted rho has full generic rank on the section."""
    for case, n in ALL_INSTANCES:
        action = build_case(case, n)
        if action.cartan is None:
            continue
        cd = action.cartan
        total = sum(2 * m for _, m in cd.roots)
        # positive roots each appear once in the catalog data
        assert total == 2 * (action.d - cd.rank)


def test_nonpolar_has_no_cartan():
    action = build_case("nonpolar_so2")
    with pytest.raises(NotPolar):
        cartan_data(action)


def test_regular_points_have_principal_rank():
    for case, n in ALL_INSTANCES:
        action = build_case(case, n)
        point = regular_point(action)
        rank, _ = rank_kernel(rho_at(action, point))
        if action.cartan is not None:
            assert rank == action.d - action.cartan.rank


def test_regular_point_deterministic():
    for seed in (0, 1):
        a = regular_point(build_case("sym_complex", 2), seed=seed)
        b = regular_point(build_case("sym_complex", 2), seed=seed)
        assert a == b


def test_irreducibility_predicate():
    # simply-laced connected diagrams with multiplicity one: irreducible
    assert discriminant_irreducible(cartan_data(build_case("sym_real", 2)))
    assert discriminant_irreducible(cartan_data(build_case("sym_real", 3)))
    assert discriminant_irreducible(
        cartan_data(build_case("sym_real_traceless", 2)))
    assert discriminant_irreducible(
        cartan_data(build_case("sym_real_traceless", 3)))
    # disconnected diagram: reducible
    assert not discriminant_irreducible(cartan_data(build_case("torus2")))
    # C-type diagram: reducible
    assert not discriminant_irreducible(
        cartan_data(build_case("sym_complex", 2)))
    # any multiplicity >= 2: reducible, independent of the label
    cd = cartan_data(build_case("sym_real", 2))
    fake = CartanData(rank=cd.rank, basis=cd.basis, indices=cd.indices,
                      roots=[(lf, 2) for lf, _ in cd.roots],
                      diagram=cd.diagram)
    assert not discriminant_irreducible(fake)


def test_action_text_roundtrip():
    for case, n in ALL_INSTANCES:
        action = build_case(case, n)
        text = action_to_text(action)
        back = action_from_text(text)
        assert action_to_text(back) == text
        validate_action(back)
        assert back.name == action.name and back.d == action.d


def test_coordinate_embeddings_invert():
    m = [[Fraction(3), Fraction(1)], [Fraction(1), Fraction(-3)]]
    v = sym_matrix_to_coords(2, m)
    assert v == [Fraction(3), Fraction(-3), Fraction(1)]
    x = [[Fraction(1), Fraction(0), Fraction(0)],
         [Fraction(0), Fraction(0), Fraction(0)],
         [Fraction(0), Fraction(0), Fraction(-1)]]
    assert traceless_coords_to_matrix(
        3, traceless_matrix_to_coords(3, x)) == x

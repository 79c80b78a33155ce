import pytest

from reflharm.errors import DomainError, VerificationError
from reflharm.groups import ReflectionGroup, catalog
from reflharm.harmonics import (
    GradedBasis,
    action_matrix,
    fixed_point_basis,
    free_generators,
    harmonic_basis,
    ideal_component,
    invariant_basis,
    invariant_degrees,
    molien,
    project_to_H,
    reynolds,
)
from reflharm.mpoly import CONTRAVARIANT, COVARIANT, MPoly, diff_apply
from reflharm.scalars import CycloScalar, RatPoly, RatSeries, qq

ONE = CycloScalar.rational(1)


def P(nvars, *terms):
    return MPoly(CONTRAVARIANT, nvars,
                 {tuple(e): CycloScalar.coerce(c) for e, c in terms})


def test_reynolds_b2():
    b2 = catalog("weyl:B:2")
    x2 = P(2, ((2, 0), 1))
    avg = reynolds(b2, x2)
    assert avg == P(2, ((2, 0), qq("1/2")), ((0, 2), qq("1/2")))
    assert reynolds(b2, avg) == avg
    assert reynolds(b2, P(2, ((1, 0), 1))).is_zero()


def test_molien_oracles():
    ident = ReflectionGroup([[[ONE, ONE * 0], [ONE * 0, ONE]]])
    series = molien(ident, 6)
    assert list(series.coeffs) == [d + 1 for d in range(7)]

    mu5 = catalog("cyclic:5")
    series = molien(mu5, 12)
    assert list(series.coeffs) == [1 if d % 5 == 0 else 0 for d in range(13)]

    b2 = catalog("weyl:B:2")
    series = molien(b2, 8)
    # 1/((1-t^2)(1-t^4)) by direct expansion
    want = RatSeries([1], 8)
    want = want.divide(RatSeries([1, 0, -1], 8))          # 1 - t^2
    want = want.divide(RatSeries([1, 0, 0, 0, -1], 8))    # 1 - t^4
    assert list(series.coeffs) == list(want.coeffs)


def test_invariant_degrees():
    cases = [
        ("weyl:B:2", [2, 4]),
        ("cyclic:7", [7]),
        ("weyl:A:2", [2, 3]),
        ("gmpn:3:1:2", [3, 6]),
        ("weyl:C:3", [2, 4, 6]),
        ("weyl:G2:2", [2, 6]),
        ("weyl:D:3", [2, 3, 4]),
        ("weyl:D:4", [2, 4, 4, 6]),
        ("gmpn:1:1:3", [1, 2, 3]),
        ("gmpn:4:2:2", [4, 4]),
        ("gmpn:3:3:2", [2, 3]),
    ]
    for name, want in cases:
        assert invariant_degrees(catalog(name)) == want, name


def test_invariant_basis_fixtures():
    b2 = catalog("weyl:B:2")
    assert invariant_basis(b2, 2) == [P(2, ((2, 0), 1), ((0, 2), 1))]
    assert invariant_basis(b2, 1) == []
    mu4 = catalog("cyclic:4")
    assert invariant_basis(mu4, 4) == [P(1, ((4,), 1))]
    cov = invariant_basis(b2, 2, COVARIANT)
    assert len(cov) == 1 and cov[0].space == COVARIANT
    assert [e for e, _ in cov[0].sorted_terms()] == [(2, 0), (0, 2)]


def test_free_generators():
    b2 = catalog("weyl:B:2")
    gens = free_generators(b2)
    assert [g.homogeneous_degree() for g in gens] == [2, 4]
    assert gens[0] == P(2, ((2, 0), 1), ((0, 2), 1))
    mu6 = catalog("cyclic:6")
    assert free_generators(mu6) == [P(1, ((6,), 1))]
    g312 = catalog("gmpn:3:1:2")
    assert [g.homogeneous_degree() for g in free_generators(g312)] == [3, 6]
    d4 = catalog("weyl:D:4")
    assert [g.homogeneous_degree() for g in free_generators(d4)] == [2, 4, 4, 6]


def test_ideal_component_fixtures():
    b2 = catalog("weyl:B:2")
    f3 = ideal_component(b2, 3)
    assert f3 == [P(2, ((3, 0), 1), ((1, 2), 1)),
                  P(2, ((2, 1), 1), ((0, 3), 1))]
    assert ideal_component(b2, 0) == []
    mu5 = catalog("cyclic:5")
    assert ideal_component(mu5, 5) == [P(1, ((5,), 1))]
    # dim F_d + dim H_d = dim S_d
    H = harmonic_basis(b2)
    for d in range(5):
        assert len(ideal_component(b2, d)) + H.dim(d) == d + 1


def test_harmonics_b2():
    b2 = catalog("weyl:B:2")
    for method in ("perp", "derivative"):
        H = harmonic_basis(b2, method)
        assert [H.dim(d) for d in range(5)] == [1, 2, 2, 2, 1]
        assert H.dimension() == 8
        deg3 = H.basis(3)
        want = [P(2, ((3, 0), 1), ((1, 2), -3)),
                P(2, ((2, 1), 1), ((0, 3), qq("-1/3")))]
        assert deg3 == want
    assert list(harmonic_basis(b2).poincare().coeffs) == [1, 2, 2, 2, 1]


def test_harmonics_cyclic():
    mu6 = catalog("cyclic:6")
    H = harmonic_basis(mu6)
    for d in range(6):
        assert H.basis(d) == [P(1, ((d,), 1))]
    assert H.dimension() == 6


def test_perp_matches_derivative_small():
    for name in ["weyl:B:2", "cyclic:6", "gmpn:3:1:2", "gmpn:3:3:2",
                 "weyl:A:2", "weyl:G2:2", "weyl:D:2", "gmpn:4:2:2",
                 "gmpn:1:1:3"]:
        g = catalog(name)
        assert harmonic_basis(g, "perp") == harmonic_basis(g, "derivative"), name


def test_harmonics_covariant_side():
    b2 = catalog("weyl:B:2")
    Hc = harmonic_basis(b2, "perp", COVARIANT)
    assert [Hc.dim(d) for d in range(5)] == [1, 2, 2, 2, 1]
    assert Hc == harmonic_basis(b2, "derivative", COVARIANT)
    assert next(iter(Hc.basis(1))).space == COVARIANT


def test_harmonic_dimension_is_group_order():
    for name in ["weyl:A:3", "gmpn:4:1:2", "gmpn:2:2:3", "weyl:G2:2"]:
        g = catalog(name)
        H = harmonic_basis(g)
        assert H.dimension() == g.order, name
        degs = invariant_degrees(g)
        want = RatPoly([1])
        for d in degs:
            want = want * RatPoly([1] * d)
        assert H.poincare() == want, name


def test_harmonics_killed_by_invariant_operators():
    for name in ["weyl:B:2", "gmpn:3:1:2"]:
        g = catalog(name)
        H = harmonic_basis(g)
        gens = free_generators(g, COVARIANT)
        x = MPoly.variable(COVARIANT, g.dim, 0)
        for d in range(H.max_degree + 1):
            for h in H.basis(d):
                for f in gens:
                    assert diff_apply(f, h).is_zero()
                    assert diff_apply(f * x, h).is_zero()


def test_project_to_H_b2():
    b2 = catalog("weyl:B:2")
    p = P(2, ((3, 0), 1), ((1, 2), -1))           # X^3 - X Y^2
    h, f = project_to_H(b2, p)
    assert h == P(2, ((3, 0), qq("1/2")), ((1, 2), qq("-3/2")))
    assert f == P(2, ((3, 0), qq("1/2")), ((1, 2), qq("1/2")))
    assert h + f == p

    harm = P(2, ((2, 1), 3), ((0, 3), -1))        # 3 X^2 Y - Y^3
    assert project_to_H(b2, harm) == (harm, MPoly.zero(CONTRAVARIANT, 2))

    inv = P(2, ((2, 0), 1), ((0, 2), 1))
    h, f = project_to_H(b2, inv)
    assert h.is_zero() and f == inv


def test_fixed_point_basis_fixtures():
    b2 = catalog("weyl:B:2")
    H = harmonic_basis(b2)
    rx = [[-ONE, ONE * 0], [ONE * 0, ONE]]
    ry = [[ONE, ONE * 0], [ONE * 0, -ONE]]
    sub = b2.subgroup_from_matrices([rx, ry])
    fixed = fixed_point_basis(H, sub)
    assert fixed.dim(0) == 1
    assert fixed.basis(2) == [P(2, ((2, 0), 1), ((0, 2), -1))]
    assert fixed.dimension() == b2.order // sub.order

    mu12 = catalog("cyclic:12")
    mu4 = catalog("cyclic:4")
    fixed = fixed_point_basis(harmonic_basis(mu12), mu4)
    assert [d for d in sorted(fixed.degrees)] == [0, 4, 8]

    top = fixed_point_basis(H, b2)
    assert top.dimension() == 1 and top.dim(0) == 1


def test_fixed_poincare_equals_molien_ratio():
    b2 = catalog("weyl:B:2")
    rx = [[-ONE, ONE * 0], [ONE * 0, ONE]]
    ry = [[ONE, ONE * 0], [ONE * 0, -ONE]]
    sub = b2.subgroup_from_matrices([rx, ry])
    nn = b2.skew_degree() - sub.skew_degree()
    ratio = molien(sub, nn).divide(molien(b2, nn))
    fixed = fixed_point_basis(harmonic_basis(b2), sub)
    assert list(ratio.coeffs) == list(fixed.poincare().coeffs) + [0] * (
        nn + 1 - len(fixed.poincare().coeffs))


def test_action_matrix():
    b2 = catalog("weyl:B:2")
    H = harmonic_basis(b2)
    swap = [[ONE * 0, ONE], [ONE, ONE * 0]]
    mat = action_matrix(H.basis(1), swap)
    assert mat == [[ONE * 0, ONE], [ONE, ONE * 0]]
    shear = [[ONE, ONE], [ONE * 0, ONE]]
    with pytest.raises(VerificationError):
        action_matrix(H.basis(2), shear)


def test_graded_basis_json_roundtrip():
    b2 = catalog("weyl:B:2")
    H = harmonic_basis(b2)
    data = H.to_json()
    assert set(data) == {"degrees"}
    back = GradedBasis.from_json(data)
    assert back == H


def test_degree_extraction_rejects_non_reflection_group():
    zi = CycloScalar.root_of_unity(4)
    g = ReflectionGroup([[[zi, ONE * 0], [ONE * 0, zi]]])  # scalar i, no reflections
    with pytest.raises(DomainError):
        invariant_degrees(g)

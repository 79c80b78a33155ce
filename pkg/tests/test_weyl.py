"""Split and twisted counting polynomials."""

import pytest

from reflharm.errors import CapError, DomainError, UsageError
from reflharm.rootdata import build_root_datum, subsystem, subsystem_preset
from reflharm.scalars import QQ, CycloScalar, RatPoly
from reflharm.weyl import (
    TwistData,
    count_split,
    count_twisted,
    f_classes,
    split_report,
    stabilizes_ambient_simples,
    twisted_report,
)

IDENT2 = [[1, 0], [0, 1]]
SWAP2 = [[0, 1], [1, 0]]


@pytest.fixture(scope="module")
def c2_long():
    datum = build_root_datum("C", 2)
    return datum, subsystem(datum, [(2, 0), (0, 2)])


@pytest.fixture(scope="module")
def c3_a1c2():
    sub = subsystem_preset("C3:A1C2")
    return sub.datum, sub


def test_split_c2_long(c2_long):
    datum, sub = c2_long
    poly = count_split(datum, sub)
    assert poly == RatPoly.monomial(4)


def test_split_c2_short(c2_long):
    datum, _ = c2_long
    sub = subsystem(datum, [(1, -1), (1, 1)])
    assert count_split(datum, sub) == RatPoly.monomial(4)


def test_split_c3_a1c2(c3_a1c2):
    datum, sub = c3_a1c2
    poly = count_split(datum, sub)
    assert poly == RatPoly([0, 0, 0, 0, 1, 0, 1, 0, 1])
    assert poly(1) == 3


def test_split_g2_long_a2():
    datum = build_root_datum("G2", 2)
    sub = subsystem(datum, [(1, 0), (1, 3)])
    assert count_split(datum, sub) == RatPoly.monomial(6)


def test_split_full_subsystem():
    datum = build_root_datum("C", 2)
    sub = subsystem(datum, datum.simples)
    assert count_split(datum, sub) == RatPoly([1])


def test_split_value_at_one_counts_cosets(c3_a1c2):
    # at q=1 the polynomial counts |W| / |W'C|
    datum, sub = c3_a1c2
    assert count_split(datum, sub)(1) == QQ(datum.group.order, 16)


def test_split_report_fields(c2_long):
    datum, sub = c2_long
    report = split_report(datum, sub)
    assert report["datum"] == "C2"
    assert report["N"] == 4 and report["Nprime"] == 2
    assert report["C_order"] == 2
    assert RatPoly.from_json(report["polynomial"]) == RatPoly.monomial(4)


def test_twisted_identity_weight_one_equals_split(c2_long):
    datum, sub = c2_long
    twist = TwistData(IDENT2)
    assert count_twisted(datum, sub, twist) == count_split(datum, sub)


def test_twisted_identity_indicators(c2_long):
    datum, sub = c2_long
    half = QQ(1, 2)
    plus = count_twisted(datum, sub, TwistData.indicator(IDENT2, IDENT2))
    minus = count_twisted(datum, sub, TwistData.indicator(IDENT2, SWAP2))
    assert plus == RatPoly([0, 0, half, 0, half])
    assert minus == RatPoly([0, 0, -half, 0, half])
    assert plus + minus == count_split(datum, sub)


def test_twisted_swap_frobenius(c2_long):
    datum, sub = c2_long
    assert count_twisted(datum, sub, TwistData(SWAP2)) == RatPoly.monomial(4)
    half = QQ(1, 2)
    at_swap = count_twisted(datum, sub, TwistData.indicator(SWAP2, SWAP2))
    at_id = count_twisted(datum, sub, TwistData.indicator(SWAP2, IDENT2))
    assert at_swap == RatPoly([0, 0, half, 0, half])
    assert at_id == RatPoly([0, 0, -half, 0, half])
    assert at_swap + at_id == RatPoly.monomial(4)


def test_twisted_explicit_values_match_indicator(c2_long):
    datum, sub = c2_long
    values = [(IDENT2, 1), (SWAP2, 0)]
    twist = TwistData(IDENT2, "values", values)
    assert count_twisted(datum, sub, twist) == \
        count_twisted(datum, sub, TwistData.indicator(IDENT2, IDENT2))


def test_twisted_nonrational_weight_rejected(c2_long):
    datum, sub = c2_long
    values = [(IDENT2, 1), (SWAP2, CycloScalar.root_of_unity(4))]
    with pytest.raises(DomainError):
        count_twisted(datum, sub, TwistData(IDENT2, "values", values))


def test_twisted_values_must_cover_complement(c2_long):
    datum, sub = c2_long
    with pytest.raises(UsageError):
        count_twisted(datum, sub,
                      TwistData(IDENT2, "values", [(IDENT2, 1)]))


def test_twisted_indicator_must_lie_in_complement(c2_long):
    datum, sub = c2_long
    flip = [[-1, 0], [0, 1]]
    with pytest.raises(UsageError):
        count_twisted(datum, sub, TwistData.indicator(IDENT2, flip))


def test_twist_requires_simple_system_stability(c2_long):
    datum, sub = c2_long
    # inside W' itself, but moves (2,0) to (-2,0)
    flip = [[-1, 0], [0, 1]]
    with pytest.raises(UsageError):
        count_twisted(datum, sub, TwistData(flip))


def test_twist_requires_normalizing(c2_long):
    datum, sub = c2_long
    # order two, but reflects across a line outside the group's geometry
    skew = [[QQ(3, 5), QQ(4, 5)], [QQ(4, 5), QQ(-3, 5)]]
    with pytest.raises(UsageError):
        count_twisted(datum, sub, TwistData(skew))


def test_twist_requires_finite_order(c2_long):
    datum, sub = c2_long
    shear = [[1, 1], [0, 1]]
    with pytest.raises(CapError):
        count_twisted(datum, sub, TwistData(shear))


def test_twist_kind_validation():
    with pytest.raises(UsageError):
        TwistData(IDENT2, "mystery")


def test_twist_from_json(c2_long):
    datum, sub = c2_long
    twist = TwistData.from_json({"F0": IDENT2})
    assert twist.g_kind == "one"
    twist = TwistData.from_json({"F0": SWAP2, "g": {"indicator": SWAP2}})
    assert count_twisted(datum, sub, twist) == \
        RatPoly([0, 0, QQ(1, 2), 0, QQ(1, 2)])
    twist = TwistData.from_json({
        "F0": IDENT2,
        "g": {"values": [{"element": IDENT2, "value": 1},
                         {"element": SWAP2, "value": 0}]},
    })
    assert count_twisted(datum, sub, twist) == \
        RatPoly([0, 0, QQ(1, 2), 0, QQ(1, 2)])
    with pytest.raises(UsageError):
        TwistData.from_json({"g": "one"})
    with pytest.raises(UsageError):
        TwistData.from_json({"F0": IDENT2, "g": {"mystery": 1}})


def test_f_classes_of_abelian_complement(c2_long):
    datum, sub = c2_long
    from reflharm.rootdata import complement_group
    cgroup = complement_group(datum, sub)
    ident = [[CycloScalar.rational(1), CycloScalar.rational(0)],
             [CycloScalar.rational(0), CycloScalar.rational(1)]]
    classes = f_classes(cgroup, ident)
    assert len(classes) == 2
    assert all(len(cls) == 1 for cls in classes)


def test_twisted_report_metadata(c2_long):
    datum, sub = c2_long
    report = twisted_report(datum, sub, TwistData(SWAP2))
    assert report["N"] == 4 and report["Nprime"] == 2
    assert report["C_order"] == 2
    assert "coset_action" in report
    # the swap permutes the subsystem's simples but not the ambient ones
    assert report["stabilizes_ambient_simples"] is False
    ident_report = twisted_report(datum, sub, TwistData(IDENT2))
    assert ident_report["stabilizes_ambient_simples"] is True
    assert stabilizes_ambient_simples(datum, SWAP2) is False

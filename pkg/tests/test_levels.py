import itertools

import pytest

from matra.errors import EmptyAggregation
from matra.levels import Level, RiskLabel, RiskRating, level_max, level_min

L, M, H = Level.LOW, Level.MODERATE, Level.HIGH


def test_total_order():
    assert L < M < H
    assert H > M > L
    assert sorted([H, L, M]) == [L, M, H]


def test_level_max_examples():
    assert level_max([H, H, H, M]) is H
    assert level_max([L]) is L
    assert level_max([L, M]) is M


def test_level_min_examples():
    assert level_min([H, L]) is L
    assert level_min([M, H]) is M
    assert level_min([H, H]) is H


@pytest.mark.parametrize("op", [level_max, level_min])
def test_empty_aggregation(op):
    with pytest.raises(EmptyAggregation):
        op([])


def test_scale_algebra_exhaustive():
    for a, b in itertools.product(Level, Level):
        lo, hi = level_min([a, b]), level_max([a, b])
        assert lo <= a <= hi
        assert lo <= b <= hi
        assert level_min([b, a]) is lo and level_max([b, a]) is hi
    for a, b, c in itertools.product(Level, Level, Level):
        assert level_min([level_min([a, b]), c]) is level_min([a, level_min([b, c])])
        assert level_max([level_max([a, b]), c]) is level_max([a, level_max([b, c])])
    for a in Level:
        assert level_min([a, a]) is a and level_max([a, a]) is a


def test_parse_and_display():
    assert Level.parse("moderate") is M
    assert M.short == "Mod" and M.display == "Moderate"
    with pytest.raises(ValueError):
        Level.parse("medium")


def test_risk_rating_sanctioned_pairs():
    for label, score in [
        (RiskLabel.VERY_LOW, 1),
        (RiskLabel.LOW, 2),
        (RiskLabel.MODERATE, 3),
        (RiskLabel.MODERATE, 4),
        (RiskLabel.HIGH, 6),
        (RiskLabel.VERY_HIGH, 9),
    ]:
        assert RiskRating(label, score).score == score


@pytest.mark.parametrize(
    "label, score",
    [
        (RiskLabel.MODERATE, 5),
        (RiskLabel.HIGH, 9),
        (RiskLabel.VERY_HIGH, 6),
        (RiskLabel.LOW, 1),
        (RiskLabel.VERY_LOW, 0),
    ],
)
def test_risk_rating_rejects_unsanctioned_pairs(label, score):
    with pytest.raises(ValueError):
        RiskRating(label, score)


def test_risk_rating_display():
    assert RiskRating(RiskLabel.VERY_HIGH, 9).display == "Very High (9)"
    assert RiskRating(RiskLabel.MODERATE, 3).display == "Moderate (3)"

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from histoclass.data import Diagnosis
from histoclass.errors import DataError
from histoclass.evaluation import (
    ConfusionMatrix,
    compare_models,
    confusion,
    format_rate,
    rates,
    rates_csv,
    round_half_away,
)

from conftest import PROPERTY_EXAMPLES

A, N = Diagnosis.A, Diagnosis.N


def pairs_for(cm):
    return [(A, A)] * cm.aa + [(A, N)] * cm.an + [(N, A)] * cm.na + [(N, N)] * cm.nn


def test_matrix_from_pairs():
    cm = ConfusionMatrix.from_matrix([[40, 1], [4, 76]])
    assert confusion(pairs_for(cm)) == cm
    assert cm.matrix == [[40, 1], [4, 76]] and cm.total == 121
    assert (cm.tp, cm.fn, cm.fp, cm.tn) == (40, 1, 4, 76)


@pytest.mark.parametrize(
    "m, exact, shown",
    [
        ([[40, 1], [4, 76]], (Fraction(5, 121), Fraction(1, 77), Fraction(4, 44)), ("0.04", "0.01", "0.09")),
        ([[39, 2], [4, 76]], (Fraction(6, 121), Fraction(2, 78), Fraction(4, 43)), ("0.05", "0.03", "0.09")),
    ],
)
def test_rate_goldens(m, exact, shown):
    r = rates(ConfusionMatrix.from_matrix(m))
    assert (r.overall_error, r.fnr_paper, r.fpr_paper) == exact
    assert tuple(format_rate(v) for v in exact) == shown
    assert r.false_omission_rate == r.fnr_paper and r.false_discovery_rate == r.fpr_paper


def test_perfect_matrix():
    r = rates(ConfusionMatrix(10, 0, 0, 20))
    assert r.overall_error == r.fnr_paper == r.fpr_paper == 0
    assert r.sensitivity == r.specificity == 1


def test_undefined_rates():
    r = rates(ConfusionMatrix(0, 0, 0, 5))
    assert r.fpr_paper is None and r.sensitivity is None
    assert format_rate(r.fpr_paper) == "undefined"
    assert "fpr_paper,undefined" in rates_csv(r)


def test_invalid_inputs():
    with pytest.raises(DataError):
        confusion([])
    with pytest.raises(DataError):
        ConfusionMatrix(-1, 0, 0, 0)
    with pytest.raises(ValueError):
        confusion([("A", "X")])


@pytest.mark.parametrize(
    "value, expected",
    [
        (Fraction(5, 1000), "0.01"),
        (Fraction(15, 1000), "0.02"),
        (Fraction(25, 1000), "0.03"),
        (Fraction(-5, 1000), "-0.01"),
        (Fraction(4, 1000), "0.00"),
        (Fraction(1), "1.00"),
    ],
)
def test_round_half_away(value, expected):
    assert format_rate(value) == expected


def test_compare_models_text_and_csv():
    t = compare_models(
        {
            "cart": rates(ConfusionMatrix(40, 1, 4, 76)),
            "logistic": rates(ConfusionMatrix(39, 2, 4, 76)),
        }
    )
    text = t.to_text()
    assert text.splitlines()[0].split() == ["Error", "cart", "logistic"]
    rows = {line.rsplit(None, 2)[0]: line.split()[-2:] for line in text.splitlines()[1:6]}
    assert rows["Overall Error Rate"] == ["0.04", "0.05"]
    assert rows["False Negative Rate"] == ["0.01", "0.03"]
    assert rows["False Positive Rate"] == ["0.09", "0.09"]
    csv_lines = t.to_csv().splitlines()
    assert csv_lines[0] == "rate,cart,logistic"
    assert csv_lines[1].startswith("overall_error,0.04132231404958")
    with pytest.raises(DataError):
        compare_models({})


counts = st.integers(0, 200)


@settings(max_examples=PROPERTY_EXAMPLES)
@given(counts, counts, counts, counts, st.randoms(use_true_random=False))
def test_confusion_permutation_invariant(aa, an, na, nn, rnd):
    cm = ConfusionMatrix(aa, an, na, nn)
    if cm.total == 0:
        return
    pairs = pairs_for(cm)
    rnd.shuffle(pairs)
    assert confusion(pairs) == cm


@settings(max_examples=PROPERTY_EXAMPLES)
@given(counts, counts, counts, counts)
def test_rate_identities(aa, an, na, nn):
    cm = ConfusionMatrix(aa, an, na, nn)
    if cm.total == 0:
        return
    r = rates(cm)
    assert 0 <= r.overall_error <= 1
    assert r.overall_error * cm.total == cm.fn + cm.fp
    assert r.overall_error == 1 - Fraction(cm.tp + cm.tn, cm.total)
    # overall error is the predicted-class weighted mix of the two predicted-column rates
    mix = Fraction(0)
    if r.fnr_paper is not None:
        mix += r.fnr_paper * (cm.an + cm.nn)
    if r.fpr_paper is not None:
        mix += r.fpr_paper * (cm.aa + cm.na)
    assert mix == cm.fn + cm.fp


@settings(max_examples=PROPERTY_EXAMPLES)
@given(st.fractions(min_value=-10, max_value=10))
def test_rounding_within_half_unit(value):
    r = round_half_away(value)
    assert abs(r - value) <= Fraction(1, 200)
    assert round_half_away(-value) == -r

import math

import pytest

from core.errors import PreconditionError
from core.parser import parse
from corpus.entries import load_corpus
from growth.estimators import OrderEstimate
from odelab.classify import (
    COUNTEREXAMPLE,
    HYPOTHESIS_VIOLATED,
    NONE_MATCHED,
    HypothesisClassifier,
    HypothesisReport,
    PropOrdbigVerdict,
)
from odelab.instance import OdeInstance


@pytest.fixture(scope="module")
def corpus_instances():
    return {entry.label: entry.instance for entry in load_corpus(build_factorization=False)}


@pytest.fixture(scope="module")
def classifier():
    return HypothesisClassifier()


def _estimate(value):
    if value is None:
        return OrderEstimate("order", None, (10.0, 1e6), 0.0, 24, exceeds_threshold=True)
    return OrderEstimate("order", value, (10.0, 1e6), 0.0, 24)


def test_report_helpers_without_sampling():
    report = HypothesisReport(
        label="synthetic",
        orders={"A": _estimate(1.0), "B": _estimate(None), "H": _estimate(0.0)},
        hyper_order_f=None,
        convergence_f=None,
        orders_distinct=True,
        h_subordinate=False,
        factorization_given=False,
        b_transcendental=True,
    )
    assert report.order_value("B") == math.inf
    assert math.isnan(report.order_value("f"))
    assert report.max_ab == math.inf
    assert report.failed_hypotheses() == ["H"]
    assert report.matched_statements == [NONE_MATCHED]
    assert report.to_dict()["orders"]["B"]["value"] == "exceeds-threshold"


def test_verdict_tags():
    violated = PropOrdbigVerdict("x", HYPOTHESIS_VIOLATED, ("orders", "H"), 1.0, 1.0, (0.0,))
    assert violated.tag == "hypothesis-violated(orders+H)"
    flagged = PropOrdbigVerdict("x", COUNTEREXAMPLE, (), 0.5, 2.0, (0.0,))
    assert flagged.to_dict()["verdict"] == "counterexample-flag"


def test_missing_candidate_is_rejected(classifier):
    inst = OdeInstance("no-f", parse("exp(z)"), parse("exp(z^2)"))
    with pytest.raises(PreconditionError) as excinfo:
        classifier.prop_ordbig_check(inst)
    assert "E403" in str(excinfo.value)


def test_candidate_with_large_residual_is_rejected(classifier, corpus_instances):
    inst = corpus_instances["eg1"].with_changes(H=parse("3"))
    with pytest.raises(PreconditionError) as excinfo:
        classifier.prop_ordbig_check(inst)
    assert "E404" in str(excinfo.value)


@pytest.mark.slow
@pytest.mark.parametrize(
    "label, distinct, subordinate, failed",
    [
        ("eg1", False, True, ["orders"]),
        ("eg2", True, False, ["H"]),
        ("nex", True, False, ["H"]),
    ],
)
def test_flags_for_worked_examples(classifier, corpus_instances, label, distinct, subordinate, failed):
    report = classifier.classify(corpus_instances[label])
    assert report.orders_distinct is distinct
    assert report.h_subordinate is subordinate
    assert report.failed_hypotheses() == failed
    assert report.hyper_order_bound is True


@pytest.mark.slow
def test_orders_of_first_example(classifier, corpus_instances):
    report = classifier.classify(corpus_instances["eg1"])
    assert report.order_value("A") == pytest.approx(1.0, abs=0.05)
    assert report.order_value("B") == pytest.approx(1.0, abs=0.05)
    assert report.order_value("H") == 0.0
    assert report.order_value("f") == pytest.approx(1.0, abs=0.05)
    assert report.hyper_order_f.value == 0.0
    assert report.b_transcendental
    assert "Thm1a" not in report.matched_statements


@pytest.mark.slow
@pytest.mark.parametrize(
    "label, tag",
    [
        ("eg2", "hypothesis-violated(H)"),
        ("ex7", "hypothesis-violated(orders)"),
        ("eg1", "hypothesis-violated(orders)"),
    ],
)
def test_prop_verdicts(classifier, corpus_instances, label, tag):
    verdict = classifier.prop_ordbig_check(corpus_instances[label])
    assert verdict.tag == tag
    assert all(value <= 1e-9 for value in verdict.residuals)


@pytest.mark.slow
def test_classification_is_deterministic(classifier, corpus_instances):
    first = classifier.classify(corpus_instances["eg2"]).to_dict()
    second = classifier.classify(corpus_instances["eg2"]).to_dict()
    assert first == second

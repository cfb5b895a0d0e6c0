import pytest

from app.operations import constructors as c
from app.operations.bogomolov import b0
from app.operations.verification import (
    CORPUS,
    FROBENIUS,
    corpus,
    criterion_groups,
    criterion_suite,
    frobenius_suite,
    gz_suite,
    rationality_cases,
    rationality_suite,
    verify_all,
)
from app.schemas.reports import VerificationReport


def _failures(report: VerificationReport) -> list[str]:
    return [f"{ch.name}: {ch.detail}" for ch in report.checks if not ch.passed]


def test_corpus_names(small_corpus):
    """Test that every corpus group is built and labelled."""
    assert set(small_corpus) == set(CORPUS)
    assert all(g.name == name for name, g in small_corpus.items())
    assert FROBENIUS <= set(CORPUS)


def test_corpus_subset():
    """Test building a subset of the corpus."""
    groups = corpus(["S3", "Q8"])
    assert {name: g.order for name, g in groups.items()} == {"S3": 6, "Q8": 8}


def test_frobenius_suite(small_corpus):
    report = frobenius_suite(small_corpus)
    assert report.all_passed, _failures(report)
    assert report.result("C17:C8_partition_kernel") is True


def test_gz_suite(small_corpus):
    report = gz_suite(small_corpus)
    assert report.all_passed, _failures(report)
    assert len(report.checks) == len(small_corpus)


def test_criterion_suite():
    groups = criterion_groups()
    report = criterion_suite(groups)
    assert report.all_passed, _failures(report)
    assert report.result("C7xSL2(F5)_criterion") is True


def test_rationality_suite():
    report = rationality_suite(include_slow=False)
    assert report.all_passed, _failures(report)
    assert len(report.checks) == len(rationality_cases(include_slow=False))


def test_suite_reports_failures():
    """Test that a wrong expectation shows up as a failed check, not an exception."""
    groups = {"S3": (c.metacyclic(3, 2, 2).group, True)}
    report = criterion_suite(groups)
    assert not report.all_passed
    assert report.result("S3_criterion") is False


@pytest.mark.parametrize("name", [n for n in CORPUS if n not in ("C11:C5", "C17:C8", "(C3xC3):C4")])
def test_b0_maximal_bicyclic_suffice(small_corpus, name):
    """Test that restricting to maximal bicyclic subgroups gives the same B0 as all of them."""
    g = small_corpus[name]
    assert b0(g).invariants == b0(g, maximal_only=False).invariants


def test_matrix_checks():
    for report in (c.verify_binary_icosahedral(), c.verify_g_plus(), c.verify_representations(1)):
        assert report.all_passed, (report.subject, _failures(report))


@pytest.mark.slow
def test_verify_all():
    reports = verify_all(include_slow=True)
    assert len(reports) == 8
    for report in reports:
        assert report.all_passed, (report.subject, _failures(report))

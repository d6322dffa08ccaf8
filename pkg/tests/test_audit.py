import pytest

from selfsim.audit.claims import claim_linearization_gap, claim_mode_roots, claim_spacelike_solution, run_audit
from selfsim.output import to_json
from selfsim.schema.audit import AuditClaim, Verdict


@pytest.fixture(scope="module")
def audit_report():
    return run_audit(samples=4, seed=1)


def test_audit_reproduces_recorded_verdicts(audit_report):
    regressed = [c.id for c in audit_report.claims if c.regressed]
    assert audit_report.passed, f"regressed claims: {regressed}"
    assert len(audit_report.claims) == 14


def test_audit_verdicts(audit_report):
    assert audit_report.claim("1").verdict == Verdict.MATCH
    assert audit_report.claim("4").verdict == Verdict.MISMATCH
    assert audit_report.claim("4").secondary_verdict == Verdict.QUALITATIVE_MATCH
    assert audit_report.claim("9").verdict == Verdict.MEASURED_NO_CLAIM
    assert audit_report.claim("x3").verdict == Verdict.MATCH
    assert audit_report.claim("x3").location == "similarity-frame equations"
    with pytest.raises(ValueError):
        audit_report.claim("42")


def test_spacelike_claim_carries_the_corrected_family():
    claim = claim_spacelike_solution(4)
    assert claim.verdict == Verdict.MISMATCH
    assert claim.secondary_verdict == Verdict.MATCH
    assert claim.deviation == pytest.approx(0.4472136, abs=1e-6)


def test_mode_claim_is_qualitative():
    claim = claim_mode_roots()
    assert claim.verdict == Verdict.MISMATCH
    assert claim.secondary_verdict == Verdict.QUALITATIVE_MATCH


def test_linearization_claim_is_flagged():
    claim = claim_linearization_gap()
    assert claim.verdict == Verdict.MEASURED_NO_CLAIM
    assert claim.note is not None


def test_match_needs_deviation_within_tolerance():
    with pytest.raises(ValueError):
        AuditClaim(id="t", description="", location="", claimed="", computed="", verdict=Verdict.MATCH, expected=Verdict.MATCH, deviation=1.0, tolerance=0.1)


def test_audit_is_reproducible(audit_report):
    again = run_audit(samples=4, seed=1)
    assert to_json(again.model_dump(mode="json")) == to_json(audit_report.model_dump(mode="json"))

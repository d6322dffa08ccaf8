from enum import Enum
from typing import List, Optional

from pydantic import BaseModel, model_validator


class Verdict(str, Enum):
    MATCH = "match"
    MISMATCH = "mismatch"
    QUALITATIVE_MATCH = "qualitative-match"
    MEASURED_NO_CLAIM = "measured-no-claim"


class AuditClaim(BaseModel):
    id: str
    description: str
    location: str
    claimed: str
    computed: str
    verdict: Verdict
    expected: Verdict # verdict recorded when the numerics were last checked by hand
    secondary_verdict: Optional[Verdict] = None # e.g. the rate agrees while the amplitude does not
    deviation: Optional[float] = None
    tolerance: Optional[float] = None
    note: Optional[str] = None

    @model_validator(mode='after')
    def check_match_is_numeric(self):
        if self.verdict == Verdict.MATCH and self.deviation is not None and self.tolerance is not None:
            if not self.deviation <= self.tolerance:
                raise ValueError(f'claim {self.id} marked match with deviation {self.deviation} above tolerance {self.tolerance}')
        return self

    @property
    def regressed(self):
        return self.verdict != self.expected


class AuditReport(BaseModel):
    claims: List[AuditClaim]
    precision: str
    seed: int

    @property
    def passed(self):
        return not any(c.regressed for c in self.claims)

    def claim(self, claim_id: str) -> AuditClaim:
        for c in self.claims:
            if c.id == claim_id:
                return c
        raise ValueError(f"Unknown claim {claim_id}")

"""Crowd-vote agreement semantics.

A statement's agreement is resolved by a two-vote majority: whichever
decision leads must lead by at least two votes, otherwise the statement
is undecided.  With no votes at all it is unvoted.  The rule is total
and symmetric under swapping Agree/Disagree.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from geomove.corpus.types import AgreementStatus, Decision, Statement, Vote

MAJORITY_MARGIN = 2


def resolve_agreement(votes: Sequence[Vote]) -> AgreementStatus:
    """Resolve a vote multiset to an agreement status.

    Let ``a`` be the number of Agree votes and ``d`` the number of
    Disagree votes:

    * ``a + d == 0``  -> UNVOTED
    * ``a - d >= 2``  -> AGREED
    * ``d - a >= 2``  -> DISAGREED
    * otherwise       -> UNDECIDED
    """
    agree = sum(1 for v in votes if v.decision is Decision.AGREE)
    disagree = len(votes) - agree
    if agree + disagree == 0:
        return AgreementStatus.UNVOTED
    if agree - disagree >= MAJORITY_MARGIN:
        return AgreementStatus.AGREED
    if disagree - agree >= MAJORITY_MARGIN:
        return AgreementStatus.DISAGREED
    return AgreementStatus.UNDECIDED


@dataclass(frozen=True)
class AgreementSummary:
    agreed: int = 0
    disagreed: int = 0
    undecided: int = 0
    unvoted: int = 0

    @property
    def total(self) -> int:
        return self.agreed + self.disagreed + self.undecided + self.unvoted

    def to_dict(self) -> dict:
        return {
            "agreed": self.agreed,
            "disagreed": self.disagreed,
            "undecided": self.undecided,
            "unvoted": self.unvoted,
        }


def agreement_summary(statements: Iterable[Statement]) -> AgreementSummary:
    """Count statements by agreement status; counts partition the input."""
    counts = {status: 0 for status in AgreementStatus}
    for stmt in statements:
        counts[stmt.agreement] += 1
    return AgreementSummary(
        agreed=counts[AgreementStatus.AGREED],
        disagreed=counts[AgreementStatus.DISAGREED],
        undecided=counts[AgreementStatus.UNDECIDED],
        unvoted=counts[AgreementStatus.UNVOTED],
    )

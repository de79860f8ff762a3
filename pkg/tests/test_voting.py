"""Agreement-rule tests: the two-vote majority and its summary counts."""

import random

import pytest

from geomove.corpus import AgreementStatus, agreement_summary, resolve_agreement

from helpers import make_statement, votes


def brute_force_margin_rule(agree: int, disagree: int) -> AgreementStatus:
    """Independent restatement of the rule, used as the oracle."""
    if agree + disagree == 0:
        return AgreementStatus.UNVOTED
    if agree - disagree >= 2:
        return AgreementStatus.AGREED
    if disagree - agree >= 2:
        return AgreementStatus.DISAGREED
    return AgreementStatus.UNDECIDED


class TestResolveAgreement:
    def test_unanimous_five(self):
        assert resolve_agreement(votes(5, 0)) == AgreementStatus.AGREED

    def test_three_two_is_undecided(self):
        # margin 1 < 2 under the two-vote-majority rule
        assert resolve_agreement(votes(3, 2)) == AgreementStatus.UNDECIDED

    def test_one_four_is_disagreed(self):
        assert resolve_agreement(votes(1, 4)) == AgreementStatus.DISAGREED

    def test_no_votes_is_unvoted(self):
        assert resolve_agreement(()) == AgreementStatus.UNVOTED

    def test_all_multisets_up_to_seven_match_oracle(self):
        for total in range(0, 8):
            for agree in range(0, total + 1):
                disagree = total - agree
                assert resolve_agreement(votes(agree, disagree)) == brute_force_margin_rule(
                    agree, disagree
                ), (agree, disagree)

    def test_symmetry_under_decision_swap(self):
        swap = {
            AgreementStatus.AGREED: AgreementStatus.DISAGREED,
            AgreementStatus.DISAGREED: AgreementStatus.AGREED,
            AgreementStatus.UNDECIDED: AgreementStatus.UNDECIDED,
            AgreementStatus.UNVOTED: AgreementStatus.UNVOTED,
        }
        for total in range(0, 8):
            for agree in range(0, total + 1):
                disagree = total - agree
                assert resolve_agreement(votes(disagree, agree)) == swap[
                    resolve_agreement(votes(agree, disagree))
                ]


class TestAgreementSummary:
    def test_empty(self):
        summary = agreement_summary([])
        assert summary.to_dict() == {"agreed": 0, "disagreed": 0, "undecided": 0, "unvoted": 0}

    def test_three_patterns(self):
        stmts = [
            make_statement(doc_id="d1", votes=votes(5, 0)),
            make_statement(doc_id="d2", votes=votes(2, 3)),
            make_statement(doc_id="d3", votes=votes(4, 1)),
        ]
        summary = agreement_summary(stmts)
        assert summary.agreed == 2
        assert summary.disagreed == 0
        assert summary.undecided == 1
        assert summary.unvoted == 0

    def test_counts_sum_to_input_length(self):
        rng = random.Random(7)
        stmts = [
            make_statement(doc_id=f"d{i}", votes=votes(rng.randint(0, 4), rng.randint(0, 3)))
            for i in range(60)
        ]
        assert agreement_summary(stmts).total == 60

    def test_seed_round_crowd_split(self):
        """175 five-vote statements sampled to land on the 124/4/47 split."""
        rng = random.Random(20200417)
        patterns = (
            [rng.choice([(5, 0), (4, 1)]) for _ in range(124)]
            + [rng.choice([(0, 5), (1, 4)]) for _ in range(4)]
            + [rng.choice([(3, 2), (2, 3)]) for _ in range(47)]
        )
        rng.shuffle(patterns)
        stmts = [
            make_statement(doc_id=f"doc{i}", votes=votes(a, d))
            for i, (a, d) in enumerate(patterns)
        ]
        summary = agreement_summary(stmts)
        assert summary.agreed == 124
        assert summary.disagreed == 4
        assert summary.undecided == 47
        assert summary.unvoted == 0
        assert summary.total == 175


def test_duplicate_worker_vote_rejected():
    with pytest.raises(ValueError):
        make_statement(votes=votes(2, 0) + votes(1, 0))

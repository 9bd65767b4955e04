"""Sentence BLEU identities and ranking behavior."""

import random

import pytest

from reflattice import Sentence
from reflattice.bleu import rank_by_bleu, sentence_bleu


def sent(text):
    return Sentence.from_text(text)


class TestIdentities:
    def test_identical_candidate_scores_100(self):
        refs = [sent("the cat sat on the mat"), sent("a cat was sitting there")]
        score = sentence_bleu(sent("the cat sat on the mat"), refs)
        assert score.value == 100.0
        assert score.precisions == (1.0, 1.0, 1.0, 1.0)
        assert score.brevity_penalty == 1.0

    def test_disjoint_unigrams_score_0(self):
        score = sentence_bleu(sent("x y z w"), [sent("a b c d")])
        assert score.value == 0.0
        assert score.precisions[0] == 0.0

    def test_hand_computed_fixture(self):
        score = sentence_bleu(sent("a b c d e"), [sent("a b c d f")])
        assert score.precisions == (4 / 5, 3 / 4, 2 / 3, 1 / 2)
        assert score.brevity_penalty == 1.0
        assert score.value == pytest.approx(66.87, abs=0.01)

    def test_multi_reference_clipping_allows_100_for_new_string(self):
        refs = [sent("x a b c y"), sent("z a b c w")]
        candidate = sent("x a b c w")
        assert candidate.text() not in {r.text() for r in refs}
        assert sentence_bleu(candidate, refs).value == 100.0


class TestProperties:
    def test_permuting_refs_is_invariant(self):
        refs = [sent("a b c d"), sent("b c d e"), sent("c d e f")]
        cand = sent("a c d f")
        expect = sentence_bleu(cand, refs).value
        rng = random.Random(1)
        for _ in range(10):
            shuffled = refs[:]
            rng.shuffle(shuffled)
            assert sentence_bleu(cand, shuffled).value == expect

    def test_adding_reference_never_lowers_score(self):
        rng = random.Random(42)
        vocab = list("abcdefgh")
        for _ in range(300):
            cand = sent(" ".join(rng.choice(vocab) for _ in range(rng.randint(1, 8))))
            refs = []
            prev = None
            for _ in range(4):
                refs.append(sent(" ".join(rng.choice(vocab) for _ in range(rng.randint(1, 8)))))
                cur = sentence_bleu(cand, refs).value
                if prev is not None:
                    assert cur >= prev
                prev = cur

    def test_score_in_range(self):
        rng = random.Random(9)
        vocab = list("abcd")
        for _ in range(200):
            cand = sent(" ".join(rng.choice(vocab) for _ in range(rng.randint(1, 6))))
            refs = [sent(" ".join(rng.choice(vocab) for _ in range(rng.randint(1, 6))))]
            score = sentence_bleu(cand, refs)
            assert 0.0 <= score.value <= 100.0
            assert 0.0 < score.brevity_penalty <= 1.0

    def test_brevity_penalty_uses_shortest_reference(self):
        cand = sent("a b c d")
        mixed = sentence_bleu(cand, [sent("a b c"), sent("a b c d e f")])
        # shortest reference (3) is not longer than the candidate: no penalty
        assert mixed.brevity_penalty == 1.0
        long = sentence_bleu(cand, [sent("a b c d e f")])
        assert long.brevity_penalty < 1.0

    def test_smoothing_only_above_unigram_order(self):
        # shares unigrams but no bigrams: p2..p4 get the epsilon floor
        score = sentence_bleu(sent("a c"), [sent("a b c")])
        assert score.precisions[0] == 1.0
        assert score.precisions[1] == 0.5  # 0.5 / max(2-2+1, 1)
        assert score.value > 0.0

    def test_empty_reference_list_rejected(self):
        with pytest.raises(ValueError):
            sentence_bleu(sent("a"), [])


class TestRanking:
    def test_best_first_with_lexicographic_ties(self):
        refs = [sent("a b c d")]
        cands = [sent("z z z z"), sent("a b c d"), sent("y y y y")]
        ranked = rank_by_bleu(cands, refs)
        assert ranked[0][0].text() == "a b c d"
        # the two zero-scoring candidates tie and sort lexicographically
        assert [c.text() for c, _ in ranked[1:]] == ["y y y y", "z z z z"]

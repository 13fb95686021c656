import random
import unicodedata

import pytest
from hypothesis import given
from hypothesis import strategies as st

from claimcheck.textproc import (
    RougeScore,
    load_abbreviations,
    rouge1,
    rouge_l,
    split_sentences,
    tokenize,
)
from oracles import clipped_unigram_overlap, lcs_length_full_table, precision_recall_f1

# Latin through Latin Extended-B keeps lowercasing total; the tokenizer is
# built for news text, not for exotic cased symbols.
_text_strategy = st.text(
    alphabet=st.characters(min_codepoint=32, max_codepoint=0x24F), max_size=200
)

_ascii_prose = st.text(alphabet=" .!?,;ABCDEFabcdefgh0123\n\t", max_size=200)


class TestTokenize:
    def test_empty(self):
        assert tokenize("") == []

    def test_punctuation_dropped(self):
        assert tokenize("The cat, sat.") == ["the", "cat", "sat"]

    def test_digits_kept(self):
        assert tokenize("42 cats in 2017") == ["42", "cats", "in", "2017"]

    @given(_text_strategy)
    def test_tokens_lowercase_and_punctuation_free(self, text):
        # Character-scan oracle over every produced token.
        for token in tokenize(text):
            assert token
            for ch in token:
                assert not ch.isupper()
                assert unicodedata.category(ch)[0] not in ("P", "Z", "S", "C")


class TestSplitSentences:
    def test_terminator_mix(self):
        assert split_sentences("A. B? C!") == ["A.", "B?", "C!"]

    def test_abbreviation_guard(self):
        assert split_sentences("Dr. Smith spoke. He left.") == ["Dr. Smith spoke.", "He left."]

    def test_no_terminator_is_one_sentence(self):
        assert split_sentences("no terminators here") == ["no terminators here"]

    def test_empty(self):
        assert split_sentences("") == []
        assert split_sentences("   \n ") == []

    def test_lowercase_after_period_does_not_split(self):
        text = "version 2.5 shipped. next stop"
        assert split_sentences(text) == [text]

    def test_custom_guard_list(self, tmp_path):
        path = tmp_path / "abbrev.txt"
        path.write_text("Fig.\n# comment\nca\n", encoding="utf-8")
        guard = load_abbreviations(path)
        assert guard == frozenset({"fig", "ca"})
        assert split_sentences("See Fig. 2 now. Done.", guard) == ["See Fig. 2 now.", "Done."]
        # "Dr" is not in the custom guard, so it splits there.
        assert split_sentences("Dr. Smith spoke.", guard) == ["Dr.", "Smith spoke."]

    @given(_ascii_prose)
    def test_token_conservation(self, text):
        rejoined = [token for sentence in split_sentences(text) for token in tokenize(sentence)]
        assert rejoined == tokenize(text)


class TestRouge1:
    def test_identity(self):
        assert rouge1(["a", "b"], ["a", "b"]) == RougeScore(1.0, 1.0, 1.0)

    def test_hand_case(self):
        # Clipped multiset count by hand: only "a" matches.
        score = rouge1(["a", "b", "c"], ["a", "d"])
        assert score.precision == pytest.approx(1 / 3, abs=1e-12)
        assert score.recall == pytest.approx(1 / 2, abs=1e-12)
        assert score.f1 == pytest.approx(0.4, abs=1e-12)

    def test_empty_candidate(self):
        assert rouge1([], ["a"]) == RougeScore(0.0, 0.0, 0.0)
        assert rouge1(["a"], []) == RougeScore(0.0, 0.0, 0.0)

    def test_clipping(self):
        # "a" appears twice in the candidate but only once in the reference.
        score = rouge1(["a", "a"], ["a"])
        assert score.precision == pytest.approx(0.5)
        assert score.recall == pytest.approx(1.0)


class TestRougeL:
    def test_identity(self):
        assert rouge_l(["x", "y", "z"], ["x", "y", "z"]).f1 == pytest.approx(1.0)

    def test_hand_case(self):
        score = rouge_l(["the", "cat", "sat"], ["the", "cat", "ran"])
        assert score.precision == pytest.approx(2 / 3, abs=1e-12)
        assert score.recall == pytest.approx(2 / 3, abs=1e-12)
        assert score.f1 == pytest.approx(2 / 3, abs=1e-12)

    def test_disjoint(self):
        assert rouge_l(["a", "b"], ["c", "d"]) == RougeScore(0.0, 0.0, 0.0)


_token_lists = st.lists(st.sampled_from([f"w{i}" for i in range(10)]), max_size=20)


@given(_token_lists, _token_lists)
def test_swap_symmetry(candidate, reference):
    for scorer in (rouge1, rouge_l):
        forward = scorer(candidate, reference)
        backward = scorer(reference, candidate)
        assert forward.precision == pytest.approx(backward.recall, abs=1e-12)
        assert forward.recall == pytest.approx(backward.precision, abs=1e-12)
        assert forward.f1 == pytest.approx(backward.f1, abs=1e-12)


@given(_token_lists, _token_lists)
def test_overlap_bounded_by_min_length(candidate, reference):
    bound = min(len(candidate), len(reference))
    assert clipped_unigram_overlap(candidate, reference) <= bound
    assert lcs_length_full_table(candidate, reference) <= bound


def test_randomized_equivalence_against_oracles():
    rng = random.Random(1234)
    vocabulary = [f"w{i}" for i in range(10)]
    for _ in range(250):
        candidate = [rng.choice(vocabulary) for _ in range(rng.randint(0, 20))]
        reference = [rng.choice(vocabulary) for _ in range(rng.randint(0, 20))]

        expected_1 = precision_recall_f1(
            clipped_unigram_overlap(candidate, reference), len(candidate), len(reference)
        )
        got_1 = rouge1(candidate, reference)
        assert got_1.precision == pytest.approx(expected_1[0], abs=1e-9)
        assert got_1.recall == pytest.approx(expected_1[1], abs=1e-9)
        assert got_1.f1 == pytest.approx(expected_1[2], abs=1e-9)

        expected_l = precision_recall_f1(
            lcs_length_full_table(candidate, reference), len(candidate), len(reference)
        )
        got_l = rouge_l(candidate, reference)
        assert got_l.precision == pytest.approx(expected_l[0], abs=1e-9)
        assert got_l.recall == pytest.approx(expected_l[1], abs=1e-9)
        assert got_l.f1 == pytest.approx(expected_l[2], abs=1e-9)

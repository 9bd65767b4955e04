"""Domain type validation and the corpus file format."""

import json

import numpy as np
import pytest

from reflattice import (
    Alignment,
    CorpusFormatError,
    Lattice,
    LatticeCycleError,
    ReferenceSet,
    Sentence,
    SubstitutionMatrix,
    Token,
    ValidationError,
    parse_corpus,
    serialize_corpus,
)
from reflattice.core import parse_corpus_line, sentence_id, serialize_reference_set


class TestToken:
    def test_plain_token(self):
        assert Token("hello").text == "hello"

    @pytest.mark.parametrize("bad", ["", " ", "a b", "a\tb", "a\n"])
    def test_rejects_whitespace_and_empty(self, bad):
        with pytest.raises(ValidationError):
            Token(bad)

    def test_case_sensitive_equality(self):
        assert Token("Indonesia") != Token("indonesia")
        assert Token("a") == Token("a")


class TestSentence:
    def test_from_text_splits_on_whitespace(self):
        s = Sentence.from_text("a  b\tc", id="s")
        assert s.words == ("a", "b", "c")
        assert s.text() == "a b c"

    def test_never_lowercases(self):
        assert Sentence.from_text("Foo BAR").words == ("Foo", "BAR")

    def test_splits_on_ascii_whitespace_only(self):
        # U+00A0 is not a split point and may live inside a token
        s = Sentence.from_text("a b c")
        assert s.words == ("a b", "c")

    def test_empty_rejected(self):
        with pytest.raises(ValidationError):
            Sentence(tokens=())


class TestReferenceSet:
    def test_requires_refs(self):
        with pytest.raises(ValidationError):
            ReferenceSet(example_id="x", refs=())

    def test_requires_example_id(self):
        with pytest.raises(ValidationError):
            ReferenceSet(example_id="", refs=(Sentence.from_text("a"),))


class TestSubstitutionMatrix:
    def test_scores_are_raw_minus_penalty(self):
        m = SubstitutionMatrix(np.array([[1.0, 0.0], [0.25, 0.5]]), penalty=0.5)
        assert np.allclose(m.scores, [[0.5, -0.5], [-0.25, 0.0]])
        assert m.rows == 2 and m.cols == 2

    def test_raw_range_checked(self):
        with pytest.raises(ValidationError):
            SubstitutionMatrix(np.array([[1.5]]), penalty=0.5)
        with pytest.raises(ValidationError):
            SubstitutionMatrix(np.array([[-0.1]]), penalty=0.5)

    def test_penalty_range_checked(self):
        with pytest.raises(ValidationError):
            SubstitutionMatrix(np.array([[0.5]]), penalty=1.5)


class TestAlignment:
    def test_monotone_ok(self):
        a = Alignment(pairs=((0, 0), (2, 1)), score=1.0)
        assert a.pairs == ((0, 0), (2, 1))

    @pytest.mark.parametrize("pairs", [((0, 0), (0, 1)), ((0, 1), (1, 1)), ((1, 1), (0, 0))])
    def test_non_monotone_rejected(self, pairs):
        with pytest.raises(ValidationError):
            Alignment(pairs=pairs, score=0.0)


class TestLattice:
    def test_unify_keeps_lower_id_and_unions_variants(self):
        lat = Lattice()
        a = lat.add_node({"x"})
        b = lat.add_node({"y"})
        lat.add_edge(lat.start_id, a)
        lat.add_edge(lat.start_id, b)
        lat.add_edge(a, lat.end_id)
        lat.add_edge(b, lat.end_id)
        kept = lat.unify(a, b)
        assert kept == a
        assert lat.nodes[a] == {"x", "y"}
        assert b not in lat.nodes
        # duplicate edges collapsed into a plain set
        assert lat.edges == {(lat.start_id, a), (a, lat.end_id)}

    def test_unify_connected_nodes_raises(self):
        lat = Lattice()
        a = lat.add_node({"x"})
        b = lat.add_node({"y"})
        lat.add_edge(lat.start_id, a)
        lat.add_edge(a, b)
        lat.add_edge(b, lat.end_id)
        with pytest.raises(LatticeCycleError):
            lat.unify(a, b)

    def test_topological_sort_detects_cycle(self):
        lat = Lattice()
        a = lat.add_node({"x"})
        b = lat.add_node({"y"})
        lat.add_edge(a, b)
        lat.edges.add((b, a))  # force a cycle behind the API's back
        with pytest.raises(LatticeCycleError):
            lat.topological_order()


class TestCorpusFormat:
    LINES = [
        '{"example_id": "e1", "refs": ["a b c", "a c"]}',
        '{"example_id": "e2", "source": "src text", "refs": ["x y"]}',
    ]

    def test_parse_basic(self):
        corpus = parse_corpus(self.LINES)
        assert [rs.example_id for rs in corpus] == ["e1", "e2"]
        assert corpus[0].refs[0].words == ("a", "b", "c")
        assert corpus[0].refs[1].id == sentence_id("e1", 1)
        assert corpus[1].source == "src text"

    def test_round_trip_byte_identical(self):
        corpus = parse_corpus(self.LINES)
        once = serialize_corpus(corpus)
        again = serialize_corpus(parse_corpus(once.splitlines()))
        assert once == again

    def test_key_order_fixed(self):
        rs = parse_corpus_line('{"refs": ["a"], "source": "s", "example_id": "e"}', 1)
        line = serialize_reference_set(rs)
        assert list(json.loads(line).keys()) == ["example_id", "source", "refs"]

    def test_source_omitted_when_absent(self):
        rs = parse_corpus_line('{"example_id": "e", "refs": ["a"]}', 1)
        assert "source" not in json.loads(serialize_reference_set(rs))

    def test_unicode_preserved(self):
        line = '{"example_id": "u", "refs": ["café über 中文"]}'
        (rs,) = parse_corpus([line])
        assert rs.refs[0].words == ("café", "über", "中文")
        assert "café" in serialize_reference_set(rs)

    @pytest.mark.parametrize(
        "line,fragment",
        [
            ("{not json", "invalid JSON"),
            ('{"refs": ["a"]}', "example_id"),
            ('{"example_id": "e", "refs": []}', "refs"),
            ('{"example_id": "e", "refs": [42]}', "not a string"),
            ('{"example_id": "e", "refs": [" "]}', "ref 0"),
        ],
    )
    def test_malformed_records(self, line, fragment):
        with pytest.raises(CorpusFormatError) as err:
            parse_corpus_line(line, 7)
        assert "line 7" in str(err.value)
        assert fragment in str(err.value)

    def test_duplicate_example_id(self):
        lines = ['{"example_id": "e", "refs": ["a"]}'] * 2
        with pytest.raises(CorpusFormatError) as err:
            parse_corpus(lines)
        assert "duplicate" in str(err.value) and "line 2" in str(err.value)

    def test_blank_lines_skipped(self):
        assert len(parse_corpus(["", self.LINES[0], "   "])) == 1

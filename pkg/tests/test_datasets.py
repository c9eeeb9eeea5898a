import pytest

from kpgen.candidates import count_contiguous
from kpgen.datasets import (
    build_synthetic_corpus,
    documents_from_records,
    load_keyphrase_jsonl,
    load_sample_corpus,
    normalize_keywords,
    read_corpus_jsonl,
    synthetic_gold_split,
    write_jsonl,
)
from kpgen.textproc import stem


class TestReadCorpus:
    def test_valid_lines(self, tmp_path):
        p = tmp_path / "c.jsonl"
        p.write_text(
            '{"id": "a", "title": "T", "abstract": "B"}\n'
            '{"id": "b", "title": "U", "abstract": "C", "keywords": ["x; y"]}\n',
            encoding="utf-8",
        )
        res = read_corpus_jsonl(p)
        assert [r["id"] for r in res.records] == ["a", "b"]
        assert res.skipped == []

    def test_missing_id_skipped_with_lineno(self, tmp_path):
        p = tmp_path / "c.jsonl"
        p.write_text('{"title": "no id"}\n{"id": "ok"}\n', encoding="utf-8")
        res = read_corpus_jsonl(p)
        assert [r["id"] for r in res.records] == ["ok"]
        assert res.skipped == [(1, "missing id")]

    def test_malformed_json_skipped(self, tmp_path):
        p = tmp_path / "c.jsonl"
        p.write_text('{"id": "a"}\nnot json at all\n', encoding="utf-8")
        res = read_corpus_jsonl(p)
        assert len(res.records) == 1
        assert res.skipped[0][0] == 2

    def test_duplicate_id_errors_naming_it(self, tmp_path):
        p = tmp_path / "c.jsonl"
        p.write_text('{"id": "dup"}\n{"id": "dup"}\n', encoding="utf-8")
        with pytest.raises(ValueError, match="duplicate id 'dup'"):
            read_corpus_jsonl(p)


class TestKeywords:
    def test_list_form(self):
        assert normalize_keywords({"keywords": ["a", " b "]}) == ["a", "b"]

    def test_semicolon_string_form(self):
        assert normalize_keywords({"keyword": "a;b ; c"}) == ["a", "b", "c"]

    def test_loader_pairs_docs_and_gold(self, tmp_path):
        p = tmp_path / "c.jsonl"
        p.write_text(
            '{"id": "a", "title": "data mining", "abstract": "x", "keyword": "data mining;tools"}\n',
            encoding="utf-8",
        )
        docs, gold = load_keyphrase_jsonl(p)
        assert docs[0].id == "a"
        assert gold == [["data mining", "tools"]]


class TestSyntheticCorpus:
    def test_deterministic(self):
        assert build_synthetic_corpus(40) == build_synthetic_corpus(40)

    def test_planted_structure(self):
        records = build_synthetic_corpus(40)
        docs = documents_from_records(records)
        by_id = {d.id: d for d in docs}
        for i, rec in enumerate(records):
            doc = by_id[rec["id"]]
            present_gold, absent_gold = synthetic_gold_split(rec)
            for kw in present_gold:
                stems = [stem(w) for w in kw.split()]
                assert count_contiguous(doc, stems) >= 1
            (absent,) = absent_gold
            stems = [stem(w) for w in absent.split()]
            assert count_contiguous(doc, stems) == 0
            assert set(stems) <= doc.stem_set
            partner = docs[i + 1 if i % 2 == 0 else i - 1]
            assert count_contiguous(partner, stems) >= 1

    def test_absent_phrase_unique_to_partner(self):
        records = build_synthetic_corpus(36)
        docs = documents_from_records(records)
        for i, rec in enumerate(records):
            _, (absent,) = synthetic_gold_split(rec)
            stems = [stem(w) for w in absent.split()]
            holders = [d.id for d in docs if count_contiguous(d, stems) > 0]
            partner = records[i + 1 if i % 2 == 0 else i - 1]["id"]
            assert holders == [partner]

    def test_packaged_resource_matches_builder(self):
        packaged = load_sample_corpus()
        assert packaged == build_synthetic_corpus(200)

    def test_round_trip_via_jsonl(self, tmp_path):
        records = build_synthetic_corpus(36)
        p = tmp_path / "s.jsonl"
        write_jsonl(records, p)
        res = read_corpus_jsonl(p)
        assert [r["id"] for r in res.records] == [r["id"] for r in records]
        assert res.records[0]["keywords"] == records[0]["keywords"]

    def test_odd_count_rejected(self):
        with pytest.raises(ValueError, match="even"):
            build_synthetic_corpus(37)

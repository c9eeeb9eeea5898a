import json

import pytest

from kpgen.cli import main
from kpgen.datasets import build_synthetic_corpus, write_jsonl


@pytest.fixture(scope="module")
def workdir(tmp_path_factory):
    """Run the full stage chain once on a small corpus."""
    wd = tmp_path_factory.mktemp("cli")
    write_jsonl(build_synthetic_corpus(36), wd / "corpus.jsonl")
    fast_gen = [
        "--emb-dim", "16", "--hidden", "16", "--epochs", "3", "--beam", "8",
    ]
    assert main(["ingest", str(wd / "corpus.jsonl"), "--out", str(wd / "store.jsonl")]) == 0
    assert main(["build-bank", str(wd / "store.jsonl"), "--out", str(wd / "bank.tsv")]) == 0
    assert main([
        "embed", str(wd / "store.jsonl"), "--out", str(wd / "vectors.txt"),
        "--dim", "24", "--epochs", "2",
    ]) == 0
    base = [str(wd / "store.jsonl"), "--bank", str(wd / "bank.tsv"),
            "--vectors", str(wd / "vectors.txt")]
    assert main(["rank", *base, "--out", str(wd / "ranked.jsonl")]) == 0
    assert main(["make-silver", *base, "--out", str(wd / "silver.tsv")]) == 0
    assert main([
        "train-gen", str(wd / "store.jsonl"), "--silver", str(wd / "silver.tsv"),
        "--out", str(wd / "model.npz"), "--loss-log", str(wd / "loss.csv"), *fast_gen,
    ]) == 0
    assert main([
        "generate", *base, "--model", str(wd / "model.npz"),
        "--out", str(wd / "preds.jsonl"), "--beam", "8",
    ]) == 0
    assert main([
        "evaluate", str(wd / "preds.jsonl"), "--gold", str(wd / "store.jsonl"),
        "--out", str(wd / "report.csv"), "--table", str(wd / "report.txt"),
        "--dataset", "synthetic",
    ]) == 0
    return wd


class TestPipelineChain:
    def test_artifacts_exist(self, workdir):
        for name in [
            "store.jsonl", "bank.tsv", "vectors.txt", "ranked.jsonl",
            "silver.tsv", "model.npz", "loss.csv", "preds.jsonl", "report.csv",
        ]:
            assert (workdir / name).exists(), name

    def test_predictions_schema(self, workdir):
        lines = (workdir / "preds.jsonl").read_text().splitlines()
        assert len(lines) == 36
        row = json.loads(lines[0])
        assert set(row) == {"id", "present", "absent"}

    def test_report_contents(self, workdir):
        text = (workdir / "report.csv").read_text()
        assert text.startswith("dataset,metric,value\n")
        assert "synthetic,present_f1@5," in text
        assert "synthetic,absent_r@10," in text

    def test_loss_log_header(self, workdir):
        assert (workdir / "loss.csv").read_text().splitlines()[0] == "epoch,step,mean_nll,lr"

    def test_ranked_jsonl_scores_sorted(self, workdir):
        for line in (workdir / "ranked.jsonl").read_text().splitlines()[:5]:
            row = json.loads(line)
            scores = [e["score"] for e in row["present"]]
            assert scores == sorted(scores, reverse=True)


class TestFailureModes:
    def test_missing_artifact_names_file_and_producer(self, workdir, capsys):
        rc = main([
            "rank", str(workdir / "store.jsonl"),
            "--bank", str(workdir / "nope.tsv"),
            "--vectors", str(workdir / "vectors.txt"),
            "--out", str(workdir / "x.jsonl"),
        ])
        assert rc == 2
        err = capsys.readouterr().err
        assert "nope.tsv" in err and "build-bank" in err

    def test_ingest_skips_and_warns(self, tmp_path, capsys):
        src = tmp_path / "bad.jsonl"
        src.write_text('{"id": "a", "title": "x"}\n{"title": "no id"}\nnot json\n')
        rc = main(["ingest", str(src), "--out", str(tmp_path / "store.jsonl")])
        assert rc == 0
        err = capsys.readouterr().err
        assert "missing id" in err and "invalid JSON" in err

    def test_ingest_zero_valid_fails(self, tmp_path, capsys):
        src = tmp_path / "empty.jsonl"
        src.write_text("not json\n")
        assert main(["ingest", str(src), "--out", str(tmp_path / "s.jsonl")]) == 1

    def test_ingest_duplicate_id_fails(self, tmp_path, capsys):
        src = tmp_path / "dup.jsonl"
        src.write_text('{"id": "z"}\n{"id": "z"}\n')
        rc = main(["ingest", str(src), "--out", str(tmp_path / "s.jsonl")])
        assert rc == 1
        assert "duplicate id 'z'" in capsys.readouterr().err


class TestUnseenDocuments:
    def test_generate_with_train_store(self, workdir, tmp_path):
        """Score new documents against the bank/vectors of the training
        corpus via --train-store."""
        unseen = tmp_path / "unseen.jsonl"
        records = build_synthetic_corpus(36)[:4]
        for r in records:
            r["id"] = "new-" + r["id"]
        write_jsonl(records, unseen)
        store = tmp_path / "unseen_store.jsonl"
        assert main(["ingest", str(unseen), "--out", str(store)]) == 0
        out = tmp_path / "unseen_preds.jsonl"
        rc = main([
            "generate", str(store),
            "--bank", str(workdir / "bank.tsv"),
            "--vectors", str(workdir / "vectors.txt"),
            "--train-store", str(workdir / "store.jsonl"),
            "--model", str(workdir / "model.npz"),
            "--out", str(out), "--beam", "8",
        ])
        assert rc == 0
        rows = [json.loads(l) for l in out.read_text().splitlines()]
        assert len(rows) == 4 and rows[0]["present"]


class TestAblationsAndConfig:
    def test_generate_without_model_via_no_genmodel(self, workdir):
        out = workdir / "preds_bankonly.jsonl"
        rc = main([
            "generate", str(workdir / "store.jsonl"),
            "--bank", str(workdir / "bank.tsv"),
            "--vectors", str(workdir / "vectors.txt"),
            "--out", str(out), "--no-genmodel",
        ])
        assert rc == 0 and out.exists()

    def test_rank_no_tfidf_changes_output(self, workdir):
        out = workdir / "ranked_embed_only.jsonl"
        rc = main([
            "rank", str(workdir / "store.jsonl"),
            "--bank", str(workdir / "bank.tsv"),
            "--vectors", str(workdir / "vectors.txt"),
            "--out", str(out), "--no-tfidf",
        ])
        assert rc == 0
        assert out.read_text() != (workdir / "ranked.jsonl").read_text()

    def test_config_file_defaults_and_flag_override(self, tmp_path):
        corpus = tmp_path / "c.jsonl"
        write_jsonl(build_synthetic_corpus(36), corpus)
        store = tmp_path / "store.jsonl"
        assert main(["ingest", str(corpus), "--out", str(store)]) == 0
        cfg = tmp_path / "cfg.json"
        cfg.write_text(json.dumps({"dim": 12, "epochs": 1}))
        out = tmp_path / "v.txt"
        assert main([
            "embed", str(store), "--out", str(out), "--config", str(cfg),
        ]) == 0
        assert out.read_text().splitlines()[0].endswith(" 12")
        out2 = tmp_path / "v2.txt"
        assert main([
            "embed", str(store), "--out", str(out2), "--config", str(cfg),
            "--dim", "6",
        ]) == 0
        assert out2.read_text().splitlines()[0].endswith(" 6")

    def test_config_unknown_key_rejected(self, tmp_path):
        cfg = tmp_path / "cfg.json"
        cfg.write_text(json.dumps({"bogus_key": 1}))
        rc = main([
            "sample-corpus", "--out", str(tmp_path / "x.jsonl"), "--config", str(cfg),
        ])
        assert rc == 2


class TestHelp:
    @pytest.mark.parametrize(
        "command",
        ["ingest", "sample-corpus", "build-bank", "embed", "rank",
         "make-silver", "train-gen", "generate", "evaluate", "coverage"],
    )
    def test_subcommand_help(self, command, capsys):
        with pytest.raises(SystemExit) as exc:
            main([command, "--help"])
        assert exc.value.code == 0
        out = capsys.readouterr().out
        assert "--config" in out


class TestCoverage:
    def test_coverage_on_synthetic(self, workdir, capsys):
        rc = main(["coverage", str(workdir / "store.jsonl"), "--bank", str(workdir / "bank.tsv")])
        assert rc == 0
        out = capsys.readouterr().out
        assert "bank_hit_rate: 1.0000" in out
        assert "token_hit_rate: 1.0000" in out

    def test_coverage_builds_bank_when_not_given(self, workdir, capsys):
        rc = main(["coverage", str(workdir / "store.jsonl")])
        assert rc == 0
        assert "bank_hit_rate: 1.0000" in capsys.readouterr().out

    def test_coverage_undefined_without_absent_gold(self, tmp_path, capsys):
        src = tmp_path / "c.jsonl"
        src.write_text(
            '{"id": "a", "title": "data mining", "keywords": ["data mining"]}\n'
        )
        rc = main(["coverage", str(src)])
        assert rc == 0
        assert "undefined" in capsys.readouterr().out

import json

import pytest

from claimcheck.cli import main
from claimcheck.corpus import VeracityLabel, load_store
from claimcheck.pipeline import read_records, records_label_distribution


def test_run_smoke(tmp_path, capsys):
    out = tmp_path / "records.jsonl"
    code = main(["run", "--pipeline", "p2", "--corpus", "fixture", "--provider", "fixture",
                 "--out", str(out)])
    assert code == 0
    records = read_records(out)
    assert len(records) == 12
    assert "12 records" in capsys.readouterr().out


def test_unknown_pipeline_is_a_usage_error(capsys):
    with pytest.raises(SystemExit) as excinfo:
        main(["run", "--pipeline", "p9"])
    assert excinfo.value.code == 2


def test_missing_subcommand_is_a_usage_error():
    with pytest.raises(SystemExit) as excinfo:
        main([])
    assert excinfo.value.code == 2


def test_ingest_writes_store(tmp_path, capsys):
    out = tmp_path / "store.jsonl"
    code = main(["ingest", "--path", "fixture", "--dataset", "fixture", "--out", str(out)])
    assert code == 0
    articles = load_store(out)
    assert len(articles) == 12
    assert all(a.label is not None for a in articles)
    assert "articles stored" in capsys.readouterr().out


def test_run_accepts_store_file(tmp_path):
    store = tmp_path / "store.jsonl"
    assert main(["ingest", "--out", str(store)]) == 0
    out = tmp_path / "records.jsonl"
    assert main(["run", "--pipeline", "p1", "--corpus", str(store), "--out", str(out)]) == 0
    assert len(read_records(out)) == 12


def test_stats_matches_recount(tmp_path, capsys):
    out = tmp_path / "records.jsonl"
    main(["run", "--pipeline", "p3", "--out", str(out)])
    capsys.readouterr()
    assert main(["stats", "--records", str(out)]) == 0
    printed = capsys.readouterr().out
    counts = records_label_distribution(read_records(out))
    for label in VeracityLabel:
        assert f"{label.name.lower():<14}{counts[label]:>8}" in printed


def test_stats_on_corpus(capsys):
    assert main(["stats"]) == 0
    out = capsys.readouterr().out
    assert "label" in out and "count" in out


def test_gist_eval_prints_table(capsys):
    assert main(["gist-eval"]) == 0
    out = capsys.readouterr().out
    assert "sample size: 12" in out
    assert "headline" in out
    assert "summary:lead" in out


def test_train_then_evaluate(tmp_path, capsys):
    records = tmp_path / "records.jsonl"
    model = tmp_path / "model.json"
    annotated = tmp_path / "annotated.jsonl"
    assert main(["run", "--pipeline", "p2", "--out", str(records)]) == 0
    assert main(["train", "--records", str(records), "--out", str(model), "--seed", "3"]) == 0
    out = capsys.readouterr().out
    assert "epoch 1" in out and "best epoch" in out
    assert model.exists()

    code = main([
        "evaluate", "--records", str(records), "--model", str(model), "--seed", "3",
        "--annotated-out", str(annotated),
    ])
    assert code == 0
    out = capsys.readouterr().out
    assert "label accuracy" in out and "macro F1" in out
    assert all(json.loads(line)["predicted_label"] is not None
               for line in annotated.read_text().splitlines())


def test_content_features_without_corpus_is_an_error(tmp_path, capsys):
    records = tmp_path / "records.jsonl"
    main(["run", "--pipeline", "p1", "--out", str(records)])
    code = main(["train", "--records", str(records), "--features", "content",
                 "--out", str(tmp_path / "m.json")])
    assert code == 1
    assert "require --corpus" in capsys.readouterr().err


def test_config_file_round(tmp_path):
    config = tmp_path / "config.json"
    config.write_text(json.dumps({"claims_k": 2, "encoder": {"dimension": 128}}), encoding="utf-8")
    out = tmp_path / "records.jsonl"
    assert main(["run", "--pipeline", "p1", "--config", str(config), "--out", str(out)]) == 0
    records = read_records(out)
    # claims_k=2 limits claim sets to two sentences even for long articles.
    longest = max(records, key=lambda r: len(r.ranked))
    claim_texts = [s.text for s in sorted(longest.ranked, key=lambda s: s.rank)][:2]
    assert longest.claim == " ".join(claim_texts)


def test_bad_config_key_is_reported(tmp_path, capsys):
    config = tmp_path / "config.json"
    config.write_text(json.dumps({"no_such_key": 1}), encoding="utf-8")
    assert main(["run", "--pipeline", "p1", "--config", str(config)]) == 1
    assert "unknown config keys" in capsys.readouterr().err

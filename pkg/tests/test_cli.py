"""CLI smoke tests driving the real subcommands in-process."""

import json

import pytest

from geomove.cli import main
from geomove.corpus import CharSpan, CorpusStore, Label, Origin


@pytest.fixture()
def ingested_store(tmp_path):
    docs_dir = tmp_path / "docs"
    docs_dir.mkdir()
    (docs_dir / "a.txt").write_text(
        "Hawks migrate from Nova Scotia to Georgia. Salmon migrate toward Idaho. "
        "Clerks in Boston filed documents. A museum in Lisbon shows maps.",
        encoding="utf-8",
    )
    (docs_dir / "b.txt").write_text(
        "Cranes migrate from Texas to Canada. Geese migrate from Alaska to Mexico. "
        "An office in Georgia stores records. Students in Boston read quietly.",
        encoding="utf-8",
    )
    (docs_dir / "single_place.txt").write_text("Only Georgia is mentioned here.", encoding="utf-8")
    store_dir = tmp_path / "store"
    rc = main(["ingest", "--source", str(docs_dir), "--store", str(store_dir)])
    assert rc == 0
    return store_dir


def test_ingest_filters_and_persists(ingested_store, capsys):
    store = CorpusStore(ingested_store)
    docs = store.documents()
    assert len(docs) == 3
    kept = [d for d in docs if d.ingest_status.value == "Filtered-In"]
    dropped = [d for d in docs if d.ingest_status.value == "Filtered-Out"]
    assert len(kept) == 2 and len(dropped) == 1


def _label_seeds(store_dir):
    store = CorpusStore(store_dir)
    for doc in store.documents():
        if doc.ingest_status.value != "Filtered-In":
            continue
        for i, span in enumerate(doc.sentences):
            label = Label.MOVEMENT if i < 2 else Label.NOT_MOVEMENT
            store.create_statement(
                doc.doc_id,
                CharSpan(span.start, span.end),
                label=label,
                origin=Origin.EXPERT_SEED,
            )
    return store


def test_sweep_and_committee(ingested_store, tmp_path):
    _label_seeds(ingested_store)
    config = tmp_path / "config.yaml"
    config.write_text(
        "committee: {k: 2}\n"
        "sweep_grid:\n"
        "  - {model: logreg, features: count, hyper: {epochs: 30, lr: 0.5}}\n"
        "  - {model: random_forest, features: tfidf_word, hyper: {trees: 5, max_depth: 3}}\n"
        "  - {model: mlp1, features: count, hyper: {hidden: 0}}\n",  # deliberately failing combo
        encoding="utf-8",
    )
    out = tmp_path / "results.json"
    rc = main(["sweep", "--corpus", str(ingested_store), "--out", str(out), "--config", str(config)])
    assert rc == 0
    results = json.loads(out.read_text(encoding="utf-8"))
    statuses = {r["combo_id"].split("#")[0]: r["status"] for r in results["results"]}
    assert statuses["logreg+count"] == "ok"
    assert statuses["mlp1+count"] == "failed"

    committee_out = tmp_path / "committee.json"
    rc = main(["committee", "--sweep", str(out), "--k", "2", "--out", str(committee_out)])
    assert rc == 0
    spec = json.loads(committee_out.read_text(encoding="utf-8"))
    assert len(spec["members"]) == 2


def test_export_gold_cli(ingested_store, tmp_path):
    _label_seeds(ingested_store)
    out = tmp_path / "gold.jsonl"
    rc = main(["export", "--store", str(ingested_store), "--kind", "gold", "--out", str(out)])
    assert rc == 0
    lines = out.read_text(encoding="utf-8").splitlines()
    meta = json.loads(lines[0])
    assert meta["total"] == len(lines) - 1 > 0


def test_simulate_cli(tmp_path, capsys):
    out = tmp_path / "records.json"
    rc = main([
        "simulate", "--pool", "1200", "--rate", "0.04", "--iterations", "2",
        "--seed", "3", "--batch", "8", "--out", str(out),
    ])
    assert rc == 0
    records = json.loads(out.read_text(encoding="utf-8"))
    assert len(records) == 2
    printed = capsys.readouterr().out
    assert "iter" in printed and "total" in printed


def test_iterate_oracle_needs_truth(tmp_path):
    rc = main(["iterate", "--store", str(tmp_path / "s"), "--reviewer", "oracle"])
    assert rc == 2

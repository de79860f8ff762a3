"""Command-line umbrella: ingest, sweep, committee, iterate, export,
simulate, serve."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from geomove.committee import SweepResult, default_grid, run_sweep, select_top_k
from geomove.config import load_config
from geomove.corpus.catalog import EntityTypeCatalog
from geomove.corpus.store import CorpusStore
from geomove.errors import GeomoveError
from geomove.features.cleaning import load_contractions
from geomove.features.embeddings import EmbeddingProvider
from geomove.ingest import Gazetteer, filter_multi_place, ingest_document, load_abbreviations
from geomove.loop import (
    GeneratorConfig,
    export_gold,
    reported_precision,
    simulate_loop,
)
from geomove.loop.exports import export_silver
from geomove.loop.pipeline import corpus_rows_from_store
from geomove.service.runner import LoopRunner
from geomove.service.sessions import WorkerRegistry


def _embedding_provider(config):
    sentence_file = config.optional_path("sentence_vectors")
    token_file = config.optional_path("token_vectors")
    if sentence_file is None and token_file is None:
        return None
    return EmbeddingProvider.from_files(sentence_file=sentence_file, token_file=token_file)


def _grid(config, provider):
    grid = default_grid(config.sweep_grid)
    if provider is None:
        grid = [c for c in grid if c.feature_spec != "embedding"]
    return grid


def cmd_ingest(args) -> int:
    config = load_config(args.config)
    store = CorpusStore(args.store)
    gazetteer = Gazetteer.from_tsv(args.gazetteer or config.paths.get("gazetteer"))
    abbreviations = load_abbreviations(config.optional_path("abbreviations"))
    source = Path(args.source)
    if source.is_dir():
        sources = sorted(p for p in source.iterdir() if p.is_file())
    elif args.url_list:
        sources = [line.strip() for line in source.read_text(encoding="utf-8").splitlines()
                   if line.strip() and not line.startswith("#")]
    else:
        sources = [source]
    docs = []
    for src in sources:
        media = args.media
        if media == "auto":
            media = "html" if str(src).lower().endswith((".html", ".htm")) or str(src).startswith("http") else "plain"
        try:
            docs.append(ingest_document(src, media, gazetteer, abbreviations))
        except GeomoveError as exc:
            print(f"skip {src}: {exc}", file=sys.stderr)
    kept, dropped = filter_multi_place(docs, min_places=args.min_places or config.min_places)
    for doc in kept + dropped:
        store.add_document(doc)
    print(f"ingested {len(docs)} documents: {len(kept)} filtered in, {len(dropped)} filtered out")
    print(f"store: {store.root} (journal seq {store.last_seq})")
    return 0


def cmd_sweep(args) -> int:
    config = load_config(args.config)
    store = CorpusStore(args.corpus)
    contractions = load_contractions(config.optional_path("contractions"))
    rows = corpus_rows_from_store(store, contractions, config.undecided_policy)
    provider = _embedding_provider(config)
    combos = _grid(config, provider)
    sweep = run_sweep(
        rows,
        combos,
        seed=config.seed,
        split_ratio=config.split_ratio,
        oversample=config.oversample,
        smote_k=config.smote_k,
        min_df=config.min_df,
        embedding_provider=provider,
    )
    sweep.save(args.out)
    ok = sweep.successful()
    print(f"swept {len(sweep.entries)} combos ({len(ok)} ok) -> {args.out}")
    for entry in sorted(ok, key=lambda e: -(e.metrics.f_measure or 0)):
        m = entry.metrics
        print(f"  {entry.combo.combo_id:40s} P={m.precision if m.precision is not None else 'n/a'} F={m.f_measure}")
    return 0


def cmd_committee(args) -> int:
    sweep = SweepResult.load(args.sweep)
    combos = select_top_k(sweep, k=args.k)
    spec = {"rule": args.rule, "members": [c.to_dict() for c in combos]}
    if args.out:
        Path(args.out).write_text(json.dumps(spec, indent=2), encoding="utf-8")
    print(json.dumps(spec, indent=2))
    return 0


class TerminalReviewer:
    """Interactive reviewer prompting on stdin."""

    def decide(self, candidate):
        from geomove.loop.engine import ReviewDecision

        print(f"\n[{candidate.mean_prob:.3f}] {candidate.row.text}")
        answer = input("confirm as movement? [y/N] ").strip().lower()
        if answer not in ("y", "yes"):
            return ReviewDecision(confirmed=False)
        entity = input("entity type (blank to skip): ").strip() or None
        return ReviewDecision(confirmed=True, entity_type=entity)


class TruthFileReviewer:
    """Oracle reviewer backed by a JSONL file of {statement_id, label}."""

    def __init__(self, path: str):
        self.truth = {}
        for line in Path(path).read_text(encoding="utf-8").splitlines():
            if not line.strip():
                continue
            record = json.loads(line)
            self.truth[record["statement_id"]] = record["label"] == "Movement"

    def decide(self, candidate):
        from geomove.loop.engine import ReviewDecision

        return ReviewDecision(confirmed=self.truth.get(candidate.statement_id, False))


def cmd_iterate(args) -> int:
    from geomove.loop.engine import IterationConfig, LoopState, run_iteration
    from geomove.loop.pipeline import pool_rows_from_store, store_materializer

    if args.reviewer == "oracle" and not args.truth:
        print("error: --reviewer oracle needs --truth <jsonl>", file=sys.stderr)
        return 2
    config = load_config(args.config)
    store = CorpusStore(args.store)
    contractions = load_contractions(config.optional_path("contractions"))
    provider = _embedding_provider(config)
    state = LoopState(
        corpus_rows=corpus_rows_from_store(store, contractions, config.undecided_policy),
        pool_rows=pool_rows_from_store(store, contractions),
        records=store.iterations(),
    )
    reviewer = TerminalReviewer() if args.reviewer == "interactive" else TruthFileReviewer(args.truth)
    iteration_config = IterationConfig(
        combos=_grid(config, provider),
        batch_size=args.batch or config.batch_size,
        committee_k=config.committee_k,
        rule=config.committee_rule,
        oversample=config.oversample,
        smote_k=config.smote_k,
        min_df=config.min_df,
        seed=config.seed,
        embedding_provider=provider,
    )
    record = run_iteration(state, iteration_config, reviewer, materializer=store_materializer(store))
    store.record_iteration(record)
    print(
        f"iteration {record.iter_num}: {record.candidates_predicted} reviewed, "
        f"{record.tp} TP / {record.fp} FP, precision "
        f"{reported_precision(record.tp, record.fp)}, corpus now {record.corpus_total_after}"
    )
    return 0


def cmd_export(args) -> int:
    config = load_config(args.config)
    store = CorpusStore(args.store)
    if args.kind == "gold":
        meta = export_gold(store.statements(), args.out)
    else:
        runner = LoopRunner(store=store, config=config, embedding_provider=_embedding_provider(config))
        ranked = runner.predict_pool()
        meta = export_silver(
            ranked,
            args.out,
            threshold=args.threshold,
            negative_ceiling=config.negative_ceiling,
            seed=args.seed,
        )
    print(json.dumps(meta))
    return 0


def cmd_simulate(args) -> int:
    generator = GeneratorConfig(
        pool_size=args.pool,
        positive_rate=args.rate,
        noise=args.noise,
        batch_size=args.batch,
    )
    records = simulate_loop(generator, iterations=args.iterations, seed=args.seed)
    print(f"{'iter':>4} {'cands':>6} {'tp':>5} {'fp':>5} {'P':>6} {'total':>7}")
    for r in records:
        p = reported_precision(r.tp, r.fp)
        print(f"{r.iter_num:>4} {r.candidates_predicted:>6} {r.tp:>5} {r.fp:>5} "
              f"{p if p is not None else 'n/a':>6} {r.corpus_total_after:>7}")
    if args.out:
        Path(args.out).write_text(
            json.dumps([r.to_dict() for r in records], indent=2), encoding="utf-8"
        )
    return 0


def cmd_serve(args) -> int:
    import uvicorn

    from geomove.service.app import create_app

    config = load_config(args.config)
    store = CorpusStore(args.store)
    registry = WorkerRegistry.from_tsv(args.workers or config.optional_path("workers"))
    catalog = EntityTypeCatalog.from_file(config.path_or_bundled("entity_types", "entity_types.txt"))
    app = create_app(store, config, registry, catalog, _embedding_provider(config))
    uvicorn.run(app, host=args.host, port=args.port, log_level="info")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="geomove", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ingest", help="load, extract, segment, tag, and filter documents")
    p.add_argument("--source", required=True, help="file, directory, or URL-list file")
    p.add_argument("--gazetteer", help="gazetteer TSV (default: bundled)")
    p.add_argument("--min-places", type=int, default=None)
    p.add_argument("--media", choices=("auto", "plain", "html"), default="auto")
    p.add_argument("--url-list", action="store_true", help="treat --source as a list of URLs")
    p.add_argument("--store", required=True)
    p.add_argument("--config")
    p.set_defaults(func=cmd_ingest)

    p = sub.add_parser("sweep", help="train and evaluate every configured combo")
    p.add_argument("--config")
    p.add_argument("--corpus", required=True, help="corpus store directory")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("committee", help="select the top-k combos from sweep results")
    p.add_argument("--sweep", required=True)
    p.add_argument("--k", type=int, default=5)
    p.add_argument("--rule", choices=("mean_prob", "max_vote"), default="mean_prob")
    p.add_argument("--out")
    p.set_defaults(func=cmd_committee)

    p = sub.add_parser("iterate", help="run one expand-review iteration")
    p.add_argument("--store", required=True)
    p.add_argument("--batch", type=int, default=None)
    p.add_argument("--reviewer", choices=("interactive", "oracle"), default="interactive")
    p.add_argument("--truth", help="JSONL of {statement_id, label} for the oracle reviewer")
    p.add_argument("--config")
    p.set_defaults(func=cmd_iterate)

    p = sub.add_parser("export", help="write the gold or silver corpus")
    p.add_argument("--store", required=True)
    p.add_argument("--kind", choices=("gold", "silver"), required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--threshold", type=float, default=0.77)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--config")
    p.set_defaults(func=cmd_export)

    p = sub.add_parser("simulate", help="run the loop on a synthetic pool")
    p.add_argument("--pool", type=int, default=20_000)
    p.add_argument("--rate", type=float, default=0.01)
    p.add_argument("--noise", type=float, default=0.05)
    p.add_argument("--iterations", type=int, default=8)
    p.add_argument("--batch", type=int, default=12)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("serve", help="run the annotation/review HTTP API")
    p.add_argument("--store", required=True)
    p.add_argument("--port", type=int, default=8077)
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--workers", help="worker registry TSV (default: bundled dev registry)")
    p.add_argument("--config")
    p.set_defaults(func=cmd_serve)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except GeomoveError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())

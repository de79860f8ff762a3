"""Gold and silver corpus exports as JSONL with a metadata header line.

Gold files round-trip byte-identically: records are sorted by statement
id, keys are sorted, and separators are fixed, so export -> import ->
export reproduces the same bytes.  Silver files carry the committee's
mean probability and per-member votes on every record as the error-
likelihood metadata.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Optional, Sequence, TextIO

import numpy as np

from geomove.committee import Candidate
from geomove.corpus.types import CharSpan, Label, ModelVote, Origin, Statement
from geomove.errors import InsufficientNegativesError

GOLD_SCHEMA = "geomove-gold-v1"
SILVER_SCHEMA = "geomove-silver-v1"


def _dump(obj: dict) -> str:
    return json.dumps(obj, ensure_ascii=False, sort_keys=True, separators=(",", ":"))


def _write_lines(target: str | Path | TextIO, lines: list[str]) -> None:
    if hasattr(target, "write"):
        target.write("\n".join(lines) + "\n")
    else:
        Path(target).write_text("\n".join(lines) + "\n", encoding="utf-8")


def export_gold(statements: Sequence[Statement], target: str | Path | TextIO) -> dict:
    """Write the gold corpus; returns the metadata that headed the file."""
    ordered = sorted(statements, key=lambda s: s.statement_id)
    positives = sum(1 for s in ordered if s.label is Label.MOVEMENT)
    meta = {
        "kind": "meta",
        "schema": GOLD_SCHEMA,
        "total": len(ordered),
        "positives": positives,
    }
    lines = [_dump(meta)] + [_dump(s.to_dict()) for s in ordered]
    _write_lines(target, lines)
    return meta


def import_gold(path: str | Path) -> tuple[dict, list[Statement]]:
    """Read a gold file back; validates the header counts."""
    lines = Path(path).read_text(encoding="utf-8").splitlines()
    if not lines:
        raise ValueError("empty gold file")
    meta = json.loads(lines[0])
    if meta.get("kind") != "meta" or meta.get("schema") != GOLD_SCHEMA:
        raise ValueError("gold file must start with its metadata line")
    statements = [Statement.from_dict(json.loads(line)) for line in lines[1:] if line]
    if len(statements) != meta["total"]:
        raise ValueError(f"meta says {meta['total']} records, file has {len(statements)}")
    return meta, statements


def silver_statement(candidate: Candidate, label: Label) -> Statement:
    """Materialize one pool candidate as a silver-corpus statement."""
    row = candidate.row
    span = CharSpan(*row.span) if row.span is not None else CharSpan(0, max(1, len(row.text or "x")))
    text = row.text if row.text is not None else ""
    return Statement(
        statement_id=row.statement_id,
        doc_id=row.doc_id or "pool",
        span=span,
        text=text,
        label=label,
        origin=Origin.MODEL_PREDICTED if label is Label.MOVEMENT else Origin.RANDOM_NEGATIVE,
        mean_probability=candidate.mean_prob,
        model_votes={
            combo_id: ModelVote(
                label=Label.MOVEMENT if candidate.member_classes[combo_id] else Label.NOT_MOVEMENT,
                probability=prob,
            )
            for combo_id, prob in candidate.member_probs.items()
        },
    )


def export_silver(
    ranked: Sequence[Candidate],
    target: str | Path | TextIO,
    threshold: float = 0.77,
    negative_ceiling: float = 0.2,
    seed: int = 0,
) -> dict:
    """Write the silver corpus from committee predictions over the pool.

    Positives are every candidate at or above ``threshold``; an equal
    number of negatives is sampled (seeded, uniform) from candidates at
    or below ``negative_ceiling``.  Raises InsufficientNegativesError
    (with the shortfall) when the confidently-negative pool is too small.
    """
    positives = [c for c in ranked if c.mean_prob >= threshold]
    negative_pool = [c for c in ranked if c.mean_prob <= negative_ceiling]
    if len(negative_pool) < len(positives):
        raise InsufficientNegativesError(
            f"need {len(positives)} negatives at mean_prob <= {negative_ceiling}, "
            f"pool has {len(negative_pool)}",
            shortfall=len(positives) - len(negative_pool),
        )
    rng = np.random.default_rng(seed)
    chosen = rng.choice(len(negative_pool), size=len(positives), replace=False)
    negatives = [negative_pool[i] for i in sorted(chosen)]
    meta = {
        "kind": "meta",
        "schema": SILVER_SCHEMA,
        "threshold": threshold,
        "negative_ceiling": negative_ceiling,
        "positives": len(positives),
        "negatives": len(negatives),
    }
    records = [silver_statement(c, Label.MOVEMENT) for c in positives] + [
        silver_statement(c, Label.NOT_MOVEMENT) for c in negatives
    ]
    records.sort(key=lambda s: s.statement_id)
    lines = [_dump(meta)] + [_dump(s.to_dict()) for s in records]
    _write_lines(target, lines)
    return meta

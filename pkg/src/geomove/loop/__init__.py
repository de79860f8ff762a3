"""The bootstrapping loop: iterate, review, record, export."""

from geomove.loop.engine import (
    CONFIRMED,
    PENDING,
    REJECTED,
    IterationConfig,
    LoopState,
    OracleReviewer,
    ReviewDecision,
    ReviewQueue,
    ReviewerPort,
    iteration_precision,
    reported_precision,
    run_iteration,
)
from geomove.loop.exports import (
    GOLD_SCHEMA,
    SILVER_SCHEMA,
    export_gold,
    export_silver,
    import_gold,
    silver_statement,
)
from geomove.loop.pipeline import (
    corpus_rows_from_store,
    pool_row_id,
    pool_rows_from_store,
    store_materializer,
)
from geomove.loop.simulate import (
    GeneratorConfig,
    generate_pool,
    simulate_loop,
    simulation_combos,
)

__all__ = [
    "CONFIRMED",
    "GOLD_SCHEMA",
    "GeneratorConfig",
    "IterationConfig",
    "LoopState",
    "OracleReviewer",
    "PENDING",
    "REJECTED",
    "ReviewDecision",
    "ReviewQueue",
    "ReviewerPort",
    "SILVER_SCHEMA",
    "corpus_rows_from_store",
    "export_gold",
    "export_silver",
    "generate_pool",
    "import_gold",
    "iteration_precision",
    "pool_row_id",
    "pool_rows_from_store",
    "reported_precision",
    "run_iteration",
    "silver_statement",
    "simulate_loop",
    "simulation_combos",
    "store_materializer",
]

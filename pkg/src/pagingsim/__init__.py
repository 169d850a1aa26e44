"""Paging-channel cost and queueing analysis for multi-carrier cellular systems.

Compares flood paging (duplicate every page onto all carriers) against a
priority-ordered concurrent search (probe the most likely carrier first),
with absorbing-chain cost analysis, Erlang C delay formulas, and
discrete-event simulation at matching and mechanistic fidelities.
"""

__version__ = "0.1.0"

from .erlang import (
    QueueMetrics,
    QueueParams,
    avg_wait_all,
    avg_wait_delayed,
    erlang_b,
    erlang_c,
    queue_metrics,
    scenario_params,
    time_in_system,
)
from .markov import (
    AbsorbingChain,
    SearchDistribution,
    absorption_probabilities,
    build_paging_chain,
    expected_steps,
    fundamental_matrix,
)
from .search import (
    Carrier,
    CarrierSystem,
    PriorityTable,
    SearchOutcome,
    batch_search,
    build_priority,
    concurrent_search,
    expected_pages,
    location_distribution,
    sequential_search,
)
from .simulate import (
    SimConfig,
    SimStats,
    SweepRow,
    confidence_interval,
    run_mechanistic,
    run_mmc,
    sweep,
)

__all__ = [
    "__version__",
    "AbsorbingChain",
    "SearchDistribution",
    "build_paging_chain",
    "fundamental_matrix",
    "expected_steps",
    "absorption_probabilities",
    "QueueParams",
    "QueueMetrics",
    "erlang_b",
    "erlang_c",
    "avg_wait_all",
    "avg_wait_delayed",
    "time_in_system",
    "queue_metrics",
    "scenario_params",
    "Carrier",
    "CarrierSystem",
    "PriorityTable",
    "SearchOutcome",
    "location_distribution",
    "build_priority",
    "sequential_search",
    "concurrent_search",
    "expected_pages",
    "batch_search",
    "SimConfig",
    "SimStats",
    "SweepRow",
    "run_mmc",
    "run_mechanistic",
    "sweep",
    "confidence_interval",
]

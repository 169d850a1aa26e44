"""Analytic M/M/C metrics for the paging-channel pool.

The delay probability is computed through the loss-system blocking
recurrence rather than the factorial ratio, which overflows past a few
dozen channels; the two agree to double precision wherever the factorial
form is representable.  Wait formulas follow the classic delay-system
results with the channel count generalized to ``channels_per_carrier *
n_carriers`` (14 for the stock two-carrier layout).
"""

from __future__ import annotations

from dataclasses import dataclass

from .search import CarrierSystem, build_priority, expected_pages, location_distribution

SCENARIOS = ("sequential", "concurrent")
INTERPRETATIONS = ("literal", "mechanistic-load")

_IDENTITY_TOL = 1e-12


@dataclass(frozen=True)
class QueueParams:
    """One M/M/C scenario: offered load A (erlangs), C channels, service rate."""

    offered_load: float
    channels: int
    service_rate: float

    def __post_init__(self):
        if self.offered_load <= 0:
            raise ValueError("offered load must be positive")
        if self.channels < 1:
            raise ValueError("need at least one channel")
        if self.service_rate <= 0:
            raise ValueError("service rate must be positive")

    @property
    def is_stable(self) -> bool:
        return self.offered_load < self.channels


@dataclass(frozen=True)
class QueueMetrics:
    p_delay: float
    avg_wait_all: float
    avg_wait_delayed: float
    time_in_system: float


def erlang_b(offered_load: float, channels: int) -> float:
    """Blocking probability of the C-channel loss system, by the stable recurrence."""
    if offered_load <= 0:
        raise ValueError("offered load must be positive")
    if channels < 0:
        raise ValueError("channel count must be >= 0")
    b = 1.0
    for c in range(1, channels + 1):
        b = offered_load * b / (c + offered_load * b)
    return b


def erlang_c(offered_load: float, channels: int) -> float:
    """Probability an arrival finds all C channels busy (and must queue)."""
    if offered_load <= 0:
        raise ValueError("offered load must be positive")
    if channels < 1:
        raise ValueError("need at least one channel")
    if offered_load >= channels:
        raise ValueError("unstable: offered load exceeds channels")
    b = erlang_b(offered_load, channels)
    c = channels * b / (channels - offered_load * (1.0 - b))
    if not -_IDENTITY_TOL <= c <= 1.0 + _IDENTITY_TOL:
        raise ArithmeticError(f"delay probability left [0, 1]: {c!r}")
    return min(max(c, 0.0), 1.0)


def _require_stable(params: QueueParams):
    if not params.is_stable:
        raise ValueError("unstable: offered load exceeds channels")


def avg_wait_all(params: QueueParams) -> float:
    """Mean wait over all arrivals (delayed or not)."""
    _require_stable(params)
    return erlang_c(params.offered_load, params.channels) / (
        params.service_rate * (params.channels - params.offered_load)
    )


def avg_wait_delayed(params: QueueParams) -> float:
    """Mean wait conditioned on having to wait."""
    _require_stable(params)
    return 1.0 / (params.service_rate * (params.channels - params.offered_load))


def time_in_system(params: QueueParams) -> float:
    """Mean sojourn: wait over all arrivals plus one mean service time."""
    return avg_wait_all(params) + 1.0 / params.service_rate


def queue_metrics(params: QueueParams) -> QueueMetrics:
    _require_stable(params)
    p = erlang_c(params.offered_load, params.channels)
    awd = avg_wait_delayed(params)
    awa = avg_wait_all(params)
    return QueueMetrics(
        p_delay=p,
        avg_wait_all=awa,
        avg_wait_delayed=awd,
        time_in_system=awa + 1.0 / params.service_rate,
    )


def descending_expected_steps(system: CarrierSystem) -> float:
    """Expected probes per user when carriers are tried most-likely-first."""
    dist = location_distribution(system)
    order = build_priority(dist).order
    return expected_pages(system, order)


def scenario_params(
    scenario: str,
    arrival_rate: float,
    base_rate: float,
    system: CarrierSystem,
    interpretation: str = "mechanistic-load",
) -> QueueParams:
    """Map a paging scenario onto M/M/C parameters (A, C, effective rate).

    C is always ``channels_per_carrier * n_carriers``.  Two interpretations:

    * ``mechanistic-load`` (default): offered load counts actual
      channel-work.  Flood paging duplicates every page onto all n
      carriers, so A = n * lambda / mu with per-page service rate mu;
      concurrent paging consumes E[probes] pages per user, so
      A = E * lambda / mu with per-user effective rate mu / E.
    * ``literal``: the queue is parameterized directly by per-scenario
      service rates, mu for sequential and E * mu for concurrent (E = 1.5
      for two equally loaded carriers), with A = lambda / rate.

    An offered load at or above C is not an error here; sweeps probe the
    unstable region and flag it (see ``QueueParams.is_stable``).
    """
    if scenario not in SCENARIOS:
        raise ValueError(f"unknown scenario {scenario!r}; expected one of {SCENARIOS}")
    if interpretation == "mechanistic":  # accepted alias
        interpretation = "mechanistic-load"
    if interpretation not in INTERPRETATIONS:
        raise ValueError(
            f"unknown interpretation {interpretation!r}; expected one of {INTERPRETATIONS}"
        )
    if arrival_rate <= 0 or base_rate <= 0:
        raise ValueError("arrival and service rates must be positive")

    channels = system.total_channels
    if interpretation == "literal":
        if scenario == "sequential":
            rate = base_rate
        else:
            rate = descending_expected_steps(system) * base_rate
        return QueueParams(
            offered_load=arrival_rate / rate, channels=channels, service_rate=rate
        )

    if scenario == "sequential":
        # one page per carrier, each an independent exponential(mu) job
        load = system.n_carriers * arrival_rate / base_rate
        rate = base_rate
    else:
        steps = descending_expected_steps(system)
        load = steps * arrival_rate / base_rate
        rate = base_rate / steps
    return QueueParams(offered_load=load, channels=channels, service_rate=rate)


__all__ = [
    "QueueParams",
    "QueueMetrics",
    "erlang_b",
    "erlang_c",
    "avg_wait_all",
    "avg_wait_delayed",
    "time_in_system",
    "queue_metrics",
    "scenario_params",
    "descending_expected_steps",
    "SCENARIOS",
    "INTERPRETATIONS",
]

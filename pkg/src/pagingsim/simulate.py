"""Discrete-event simulation of the paging-channel queueing system.

Two fidelities share one configuration:

* ``mmc``: the abstract M/M/C queue the analytic formulas describe --
  Poisson arrivals, exponential service at the scenario's effective rate,
  one FIFO queue over ``channels_per_carrier * n_carriers`` identical
  servers.  Estimates converge to the ``erlang`` module as the horizon
  grows.
* ``mechanistic``: page requests run the actual flood or priority search
  against live per-carrier channel pools, each probe holding one channel
  for an exponential service time.  This is the ground-truth model the
  M/M/C abstraction approximates.

Runs are bit-reproducible: a single PCG64 generator seeded from the
config drives every draw, and simultaneous events are ordered by a
monotone sequence number.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass, replace

import numpy as np
from scipy import stats as sps

from .erlang import (
    INTERPRETATIONS,
    SCENARIOS,
    descending_expected_steps,
    queue_metrics,
    scenario_params,
)
from .search import CarrierSystem, build_priority, location_distribution

MODES = ("mmc", "mechanistic")

_CI_BATCHES = 30


@dataclass(frozen=True)
class SimConfig:
    arrival_rate: float
    service_rate: float
    scenario: str
    carriers: CarrierSystem
    mode: str = "mmc"
    interpretation: str = "mechanistic-load"
    horizon: int = 100_000
    warmup: int = 10_000
    seed: int = 0

    def __post_init__(self):
        if self.arrival_rate <= 0 or self.service_rate <= 0:
            raise ValueError("arrival and service rates must be positive")
        if self.scenario not in SCENARIOS:
            raise ValueError(f"unknown scenario {self.scenario!r}")
        if self.mode not in MODES:
            raise ValueError(f"unknown mode {self.mode!r}")
        if self.interpretation not in INTERPRETATIONS:
            raise ValueError(f"unknown interpretation {self.interpretation!r}")
        if not (self.horizon > self.warmup >= 0):
            raise ValueError("need horizon > warmup >= 0")


@dataclass(frozen=True)
class SimStats:
    """Point estimates and 95% batch-means half-widths from one run."""

    p_delay_hat: float
    awa_hat: float
    awd_hat: float
    t_hat: float
    ci_p_delay: float
    ci_awa: float
    ci_awd: float
    ci_t: float
    pages_per_user_hat: float | None
    mean_in_system: float
    unstable: bool
    n_samples: int


def confidence_interval(samples, batches: int) -> float:
    """95% batch-means half-width (Student-t, batches - 1 degrees of freedom)."""
    samples = np.asarray(samples, dtype=float)
    if batches < 2:
        raise ValueError("need at least 2 batches")
    per_batch = samples.size // batches
    if per_batch < 2:
        raise ValueError("need at least 2 samples per batch")
    means = samples[: batches * per_batch].reshape(batches, per_batch).mean(axis=1)
    spread = means.std(ddof=1)
    quantile = sps.t.ppf(0.975, batches - 1)
    return float(quantile * spread / math.sqrt(batches))


def _ci_or_nan(samples) -> float:
    if len(samples) < 2 * _CI_BATCHES:
        return math.nan
    return confidence_interval(samples, _CI_BATCHES)


def _time_average_in_system(arrivals, departures) -> float:
    times = np.concatenate([arrivals, departures])
    steps = np.concatenate([np.ones(len(arrivals)), -np.ones(len(departures))])
    order = np.argsort(times, kind="stable")
    times = times[order]
    in_system = np.cumsum(steps[order])
    # system is empty on [0, first arrival), so integrate from 0 to the last event
    area = float(np.sum(in_system[:-1] * np.diff(times)))
    return area / float(times[-1])


def run_mmc(config: SimConfig) -> SimStats:
    """Simulate the scenario's M/M/C abstraction over ``horizon`` arrivals.

    Arrivals are assigned to the earliest-free of C identical channels,
    which is exactly FIFO service.  For flood paging the queue sees one
    job per channel-page (n per user); for concurrent paging one job per
    user at the aggregated per-user rate.
    """
    params = scenario_params(
        config.scenario,
        config.arrival_rate,
        config.service_rate,
        config.carriers,
        config.interpretation,
    )
    queue_rate = params.offered_load * params.service_rate
    channels = params.channels
    rng = np.random.default_rng(config.seed)
    arrivals = np.cumsum(rng.exponential(1.0 / queue_rate, size=config.horizon))
    services = rng.exponential(1.0 / params.service_rate, size=config.horizon)

    free_at = [0.0] * channels
    heapq.heapify(free_at)
    waits = np.empty(config.horizon)
    departures = np.empty(config.horizon)
    delayed = np.empty(config.horizon, dtype=bool)
    for i in range(config.horizon):
        t = arrivals[i]
        earliest = free_at[0]
        if earliest > t:
            delayed[i] = True
            start = earliest
        else:
            delayed[i] = False
            start = t
        waits[i] = start - t
        end = start + services[i]
        departures[i] = end
        heapq.heapreplace(free_at, end)
    assert np.all(departures >= arrivals), "event clock ran backwards"

    keep = slice(config.warmup, None)
    w = waits[keep]
    d = delayed[keep]
    t_sys = w + services[keep]
    awd_samples = w[d]
    return SimStats(
        p_delay_hat=float(d.mean()),
        awa_hat=float(w.mean()),
        awd_hat=float(awd_samples.mean()) if awd_samples.size else math.nan,
        t_hat=float(t_sys.mean()),
        ci_p_delay=_ci_or_nan(d.astype(float)),
        ci_awa=_ci_or_nan(w),
        ci_awd=_ci_or_nan(awd_samples),
        ci_t=_ci_or_nan(t_sys),
        pages_per_user_hat=None,
        mean_in_system=_time_average_in_system(arrivals, departures),
        unstable=not params.is_stable,
        n_samples=config.horizon - config.warmup,
    )


_ARRIVAL, _PROBE_END = 0, 1


def run_mechanistic(config: SimConfig) -> SimStats:
    """Simulate page requests against live per-carrier channel pools.

    Flood requests seize one channel on every carrier at once (waiting
    FIFO until all carriers have a free channel) and complete when the
    channel on the user's true carrier finishes.  Concurrent requests
    probe carriers most-likely-first, falling through to the next
    unvisited carrier with a free channel; a request with every unvisited
    carrier full waits FIFO and resumes on the first release it can use.
    """
    system = config.carriers
    params = scenario_params(
        config.scenario,
        config.arrival_rate,
        config.service_rate,
        config.carriers,
        config.interpretation,
    )
    order = build_priority(location_distribution(system)).order
    probs = np.asarray(location_distribution(system).probs)
    mean_service = 1.0 / config.service_rate
    n = system.n_carriers
    sequential = config.scenario == "sequential"

    rng = np.random.default_rng(config.seed)
    arrival_times = np.cumsum(rng.exponential(1.0 / config.arrival_rate, size=config.horizon))
    locations = rng.choice(n, size=config.horizon, p=probs) + 1

    free = {c.id: system.channels_per_carrier - c.busy_channels for c in system.carriers}
    if min(free.values()) < 1:
        # a permanently full pool blocks floods outright and strands any
        # concurrent request whose user sits on that carrier
        raise ValueError("every carrier needs at least one free channel to simulate")

    visited = [set() for _ in range(config.horizon)]
    start_time = np.full(config.horizon, math.nan)
    done_time = np.full(config.horizon, math.nan)
    pages = np.zeros(config.horizon, dtype=np.int64)
    waiting: list[int] = []  # FIFO of user ids with no usable free channel

    events = [(arrival_times[i], i, _ARRIVAL, i, 0) for i in range(config.horizon)]
    heapq.heapify(events)
    seq = config.horizon

    def push(t, kind, uid, cid):
        nonlocal seq
        heapq.heappush(events, (t, seq, kind, uid, cid))
        seq += 1

    def start_flood(uid, t):
        if any(free[cid] < 1 for cid in free):
            return False
        start_time[uid] = t
        pages[uid] = n
        for cid in free:
            free[cid] -= 1
            push(t + rng.exponential(mean_service), _PROBE_END, uid, cid)
        return True

    def start_probe_on(uid, t, cid):
        free[cid] -= 1
        pages[uid] += 1
        if math.isnan(start_time[uid]):
            start_time[uid] = t
        push(t + rng.exponential(mean_service), _PROBE_END, uid, cid)

    def try_probe(uid, t):
        for cid in order:
            if cid in visited[uid]:
                continue
            if free[cid] > 0:
                start_probe_on(uid, t, cid)
                return True
        return False

    last_t = 0.0
    while events:
        t, _, kind, uid, cid = heapq.heappop(events)
        assert t >= last_t, "event clock ran backwards"
        last_t = t
        if kind == _ARRIVAL:
            started = start_flood(uid, t) if sequential else try_probe(uid, t)
            if not started:
                waiting.append(uid)
            continue
        # probe completed on carrier cid
        free[cid] += 1
        if sequential:
            if cid == locations[uid]:
                done_time[uid] = t
            while waiting and start_flood(waiting[0], t):
                waiting.pop(0)
        else:
            if cid == locations[uid]:
                done_time[uid] = t
            else:
                visited[uid].add(cid)
                if not try_probe(uid, t):
                    waiting.append(uid)
            for pos, queued in enumerate(waiting):
                if cid not in visited[queued] and free[cid] > 0:
                    waiting.pop(pos)
                    start_probe_on(queued, t, cid)
                    break

    keep = slice(config.warmup, None)
    w = start_time[keep] - arrival_times[keep]
    d = w > 0.0
    t_sys = done_time[keep] - arrival_times[keep]
    awd_samples = w[d]
    return SimStats(
        p_delay_hat=float(d.mean()),
        awa_hat=float(w.mean()),
        awd_hat=float(awd_samples.mean()) if awd_samples.size else math.nan,
        t_hat=float(t_sys.mean()),
        ci_p_delay=_ci_or_nan(d.astype(float)),
        ci_awa=_ci_or_nan(w),
        ci_awd=_ci_or_nan(awd_samples),
        ci_t=_ci_or_nan(t_sys),
        pages_per_user_hat=float(pages[keep].mean()),
        mean_in_system=_time_average_in_system(arrival_times, done_time),
        unstable=not params.is_stable,
        n_samples=config.horizon - config.warmup,
    )


def run(config: SimConfig) -> SimStats:
    return run_mmc(config) if config.mode == "mmc" else run_mechanistic(config)


@dataclass(frozen=True)
class SweepRow:
    """One (arrival rate, scenario, source) cell; mirrors the CSV schema."""

    lam: float
    mu: float
    n_carriers: int
    channels: int
    scenario: str
    interpretation: str
    mode: str
    offered_load: float
    source: str  # "analytic" | "sim"
    p_delay: float | None
    awa: float | None
    awd: float | None
    total_time: float | None
    pages_per_user: float | None
    ci_p_delay: float | None
    ci_awa: float | None
    ci_awd: float | None
    ci_t: float | None
    unstable: bool
    seed: int | None


SweepResult = list[SweepRow]


def _cell_seeds(seed: int, count: int) -> list[int]:
    children = np.random.SeedSequence(seed).spawn(count)
    return [int(child.generate_state(1, np.uint64)[0]) for child in children]


def _nan_to_none(x: float) -> float | None:
    return None if x is None or (isinstance(x, float) and math.isnan(x)) else x


def sweep(
    base_config: SimConfig,
    arrival_grid,
    simulate: bool = False,
    scenarios=SCENARIOS,
) -> SweepResult:
    """Analytic (and optionally simulated) metrics over an arrival-rate grid.

    Every (rate, scenario) cell yields an ``analytic`` row; with
    ``simulate`` a ``sim`` row follows, run with a per-cell seed split
    deterministically from the base config's seed.  Cells whose offered
    load reaches the channel count are flagged unstable and carry no
    analytic wait metrics.
    """
    grid = [float(x) for x in arrival_grid]
    if not grid:
        raise ValueError("arrival grid must be non-empty")
    if any(x <= 0 for x in grid):
        raise ValueError("arrival rates must be positive")
    if any(b <= a for a, b in zip(grid, grid[1:])):
        raise ValueError("arrival grid must be strictly increasing")
    for s in scenarios:
        if s not in SCENARIOS:
            raise ValueError(f"unknown scenario {s!r}")

    system = base_config.carriers
    cells = [(lam, scen) for lam in grid for scen in scenarios]
    seeds = _cell_seeds(base_config.seed, len(cells))
    exp_steps = descending_expected_steps(system)
    rows: SweepResult = []
    for (lam, scen), cell_seed in zip(cells, seeds):
        params = scenario_params(
            scen, lam, base_config.service_rate, system, base_config.interpretation
        )
        pages = float(system.n_carriers) if scen == "sequential" else exp_steps
        common = dict(
            lam=lam,
            mu=base_config.service_rate,
            n_carriers=system.n_carriers,
            channels=params.channels,
            scenario=scen,
            interpretation=base_config.interpretation,
            mode=base_config.mode,
            offered_load=params.offered_load,
        )
        if params.is_stable:
            m = queue_metrics(params)
            rows.append(
                SweepRow(
                    **common,
                    source="analytic",
                    p_delay=m.p_delay,
                    awa=m.avg_wait_all,
                    awd=m.avg_wait_delayed,
                    total_time=m.time_in_system,
                    pages_per_user=pages,
                    ci_p_delay=None,
                    ci_awa=None,
                    ci_awd=None,
                    ci_t=None,
                    unstable=False,
                    seed=None,
                )
            )
        else:
            rows.append(
                SweepRow(
                    **common,
                    source="analytic",
                    p_delay=None,
                    awa=None,
                    awd=None,
                    total_time=None,
                    pages_per_user=pages,
                    ci_p_delay=None,
                    ci_awa=None,
                    ci_awd=None,
                    ci_t=None,
                    unstable=True,
                    seed=None,
                )
            )
        if simulate:
            cfg = replace(base_config, arrival_rate=lam, scenario=scen, seed=cell_seed)
            stats = run(cfg)
            rows.append(
                SweepRow(
                    **common,
                    source="sim",
                    p_delay=_nan_to_none(stats.p_delay_hat),
                    awa=_nan_to_none(stats.awa_hat),
                    awd=_nan_to_none(stats.awd_hat),
                    total_time=_nan_to_none(stats.t_hat),
                    pages_per_user=_nan_to_none(stats.pages_per_user_hat),
                    ci_p_delay=_nan_to_none(stats.ci_p_delay),
                    ci_awa=_nan_to_none(stats.ci_awa),
                    ci_awd=_nan_to_none(stats.ci_awd),
                    ci_t=_nan_to_none(stats.ci_t),
                    unstable=stats.unstable,
                    seed=cell_seed,
                )
            )
    return rows

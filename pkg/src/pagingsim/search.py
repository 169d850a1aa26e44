"""Flood paging and priority-ordered concurrent search over carrier pools.

Two ways to deliver a page in a multi-carrier system:

* sequential (flood): duplicate the page onto every carrier at once, one
  channel-page per carrier, and the user hears it wherever it listens;
* concurrent: probe carriers one per time slot, most likely carrier
  first, skipping carriers whose paging-channel pool is momentarily full.

Costs are counted in channel-pages (one message on one paging channel);
elapsed slots and deferred probes are tracked separately.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

import numpy as np

from .markov import SearchDistribution

DEFAULT_CHANNELS_PER_CARRIER = 7


@dataclass
class Carrier:
    """One carrier frequency: registered users plus current channel occupancy."""

    id: int
    population: int
    busy_channels: int = 0


@dataclass
class CarrierSystem:
    carriers: list[Carrier]
    channels_per_carrier: int = DEFAULT_CHANNELS_PER_CARRIER

    def __post_init__(self):
        if not self.carriers:
            raise ValueError("system needs at least one carrier")
        if self.channels_per_carrier < 1:
            raise ValueError("channels_per_carrier must be >= 1")
        for pos, c in enumerate(self.carriers, start=1):
            if c.id != pos:
                raise ValueError(f"carrier ids must be 1..n in order, got {c.id} at position {pos}")
            if c.population < 0:
                raise ValueError(f"carrier {c.id} has negative population")
            if not (0 <= c.busy_channels <= self.channels_per_carrier):
                raise ValueError(
                    f"carrier {c.id} busy_channels {c.busy_channels} "
                    f"outside 0..{self.channels_per_carrier}"
                )
        if all(c.population == 0 for c in self.carriers):
            raise ValueError("at least one carrier must have users")

    @classmethod
    def from_populations(
        cls, populations: Iterable[int], channels_per_carrier: int = DEFAULT_CHANNELS_PER_CARRIER
    ) -> "CarrierSystem":
        carriers = [Carrier(id=j + 1, population=int(u)) for j, u in enumerate(populations)]
        return cls(carriers=carriers, channels_per_carrier=channels_per_carrier)

    @property
    def n_carriers(self) -> int:
        return len(self.carriers)

    @property
    def total_channels(self) -> int:
        return self.channels_per_carrier * len(self.carriers)

    def carrier(self, carrier_id: int) -> Carrier:
        if not 1 <= carrier_id <= len(self.carriers):
            raise ValueError(f"no carrier with id {carrier_id}")
        return self.carriers[carrier_id - 1]


@dataclass
class PriorityTable:
    """Probe order for one user, plus which carriers were already paged."""

    order: tuple[int, ...]
    visited: set[int] = field(default_factory=set)

    def is_fresh(self) -> bool:
        return not self.visited


@dataclass(frozen=True)
class SearchOutcome:
    found_carrier: int
    channel_pages: int
    rounds: int
    blocked_attempts: int = 0

    def __post_init__(self):
        if self.channel_pages < 1 or self.rounds < 1:
            raise ValueError("a completed search consumes at least one page and one round")


def location_distribution(system: CarrierSystem) -> SearchDistribution:
    """Per-carrier location probabilities U_j / sum(U), in carrier-id order."""
    total = sum(c.population for c in system.carriers)
    if total == 0:
        raise ValueError("cannot form a location distribution from all-zero populations")
    return SearchDistribution(tuple(c.population / total for c in system.carriers))


def build_priority(dist: SearchDistribution) -> PriorityTable:
    """Sort carrier ids by descending location probability, ties by ascending id."""
    ids = range(1, dist.n + 1)
    order = tuple(sorted(ids, key=lambda cid: (-dist.probs[cid - 1], cid)))
    return PriorityTable(order=order)


def sequential_search(system: CarrierSystem, true_location: int) -> SearchOutcome:
    """Flood the page on every carrier in a single round: n channel-pages."""
    target = system.carrier(true_location)
    if target.population == 0:
        raise ValueError(f"carrier {true_location} has no users; user cannot be located there")
    return SearchOutcome(
        found_carrier=true_location,
        channel_pages=system.n_carriers,
        rounds=1,
        blocked_attempts=0,
    )


def concurrent_search(
    system: CarrierSystem,
    table: PriorityTable,
    true_location: int,
    free: Callable[[int, int], bool] | None = None,
) -> SearchOutcome:
    """Probe carriers one per round in ``table`` order until the user is hit.

    One probe (one channel-page) per round, issued to the highest-priority
    unvisited carrier with a free channel.  Carriers whose pool is full are
    skipped for that round (deferred, ``blocked_attempts`` incremented) and
    retried on later rounds; a probed carrier is never probed again.

    ``free(round, carrier_id)`` overrides the channel-availability check;
    by default a carrier is free while its busy_channels are below the
    per-carrier pool size.  The system itself is never mutated.
    """
    target = system.carrier(true_location)
    if target.population == 0:
        raise ValueError(f"carrier {true_location} has no users; user cannot be located there")

    static_occupancy = free is None
    if free is None:
        free = lambda rnd, cid: system.carrier(cid).busy_channels < system.channels_per_carrier

    visited = table.visited
    pages = 0
    blocked = 0
    rounds = 0
    while len(visited) < len(table.order):
        rounds += 1
        probe = None
        for cid in table.order:
            if cid in visited:
                continue
            if not free(rounds, cid):
                blocked += 1
                continue
            probe = cid
            break
        if probe is None:
            if static_occupancy:
                raise RuntimeError(
                    "all unvisited carriers are busy and occupancy is static; "
                    "the search cannot make progress"
                )
            continue  # every unvisited carrier deferred; retry next round
        pages += 1
        if probe == true_location:
            return SearchOutcome(
                found_carrier=probe,
                channel_pages=pages,
                rounds=rounds,
                blocked_attempts=blocked,
            )
        visited.add(probe)
    raise ValueError(
        f"all carriers in the priority table were paged without finding the user "
        f"(true location {true_location} not reachable from order {table.order})"
    )


def expected_pages(system: CarrierSystem, ordering: Sequence[int]) -> float:
    """Expected channel-pages per user when probing carriers in ``ordering``.

    Equals sum over positions j of j * P(user on the carrier probed j-th),
    i.e. the expected absorption time of the matching paging chain.
    """
    if sorted(ordering) != list(range(1, system.n_carriers + 1)):
        raise ValueError(f"ordering must be a permutation of 1..{system.n_carriers}")
    probs = location_distribution(system).probs
    return float(sum((j + 1) * probs[cid - 1] for j, cid in enumerate(ordering)))


def _sample_locations(system, users, seed):
    resolved = []
    rng = None
    probs = None
    for uid, loc in users:
        if loc is None:
            if rng is None:
                rng = np.random.default_rng(seed)
                probs = np.asarray(location_distribution(system).probs)
            loc = int(rng.choice(system.n_carriers, p=probs)) + 1
        elif system.carrier(loc).population == 0:
            raise ValueError(f"user {uid}: carrier {loc} has no users")
        resolved.append((uid, loc))
    return resolved


def batch_search(
    system: CarrierSystem,
    users: Sequence[tuple[int, int | None]],
    strategy: str,
    seed: int | None = None,
    orders: dict[int, Sequence[int]] | None = None,
    return_round_log: bool = False,
):
    """Page many users round-by-round against shared per-carrier channel pools.

    ``users`` is a list of (user id, true carrier id); a carrier of None is
    sampled from the system's location distribution with the seeded
    generator.  Per round each active user occupies at most one channel on
    its current target carrier, capped at ``channels_per_carrier`` pages
    per carrier per round (pre-existing busy_channels count against the
    cap); excess users are deferred to the next round, served in ascending
    user-id order.  Sequential users need a free channel on *every*
    carrier in the same round.

    Every user probes in descending-probability order by default; the
    scheduler may stagger equal-probability users across carriers by
    passing per-user permutations in ``orders``.

    Returns outcomes in input order; with ``return_round_log`` also returns
    the per-round page counts per carrier.
    """
    if strategy not in ("sequential", "concurrent"):
        raise ValueError(f"unknown strategy {strategy!r}")
    resolved = _sample_locations(system, users, seed)
    if len({uid for uid, _ in resolved}) != len(resolved):
        raise ValueError("user ids must be unique")

    default_order = build_priority(location_distribution(system)).order
    all_ids = sorted(default_order)
    orders = orders or {}
    for uid, custom in orders.items():
        if sorted(custom) != all_ids:
            raise ValueError(f"user {uid}: order must be a permutation of carrier ids")
    background = {c.id: c.busy_channels for c in system.carriers}
    capacity = {c.id: system.channels_per_carrier - c.busy_channels for c in system.carriers}

    state = {
        uid: {"loc": loc, "visited": set(), "blocked": 0, "outcome": None, "pages": 0}
        for uid, loc in resolved
    }
    active = sorted(state)
    round_log = []
    rnd = 0
    try:
        while active:
            rnd += 1
            used = {cid: 0 for cid in background}
            still_active = []
            for uid in active:
                st = state[uid]
                if strategy == "sequential":
                    if all(used[cid] < capacity[cid] for cid in background):
                        for cid in background:
                            used[cid] += 1
                        st["outcome"] = SearchOutcome(
                            found_carrier=st["loc"],
                            channel_pages=system.n_carriers,
                            rounds=rnd,
                            blocked_attempts=st["blocked"],
                        )
                    else:
                        st["blocked"] += 1
                        still_active.append(uid)
                else:
                    probe = None
                    for cid in orders.get(uid, default_order):
                        if cid in st["visited"]:
                            continue
                        if used[cid] >= capacity[cid]:
                            st["blocked"] += 1
                            continue
                        probe = cid
                        break
                    if probe is None:
                        if len(st["visited"]) == system.n_carriers:
                            raise ValueError(
                                f"user {uid}: all carriers paged without a hit "
                                f"(location {st['loc']})"
                            )
                        still_active.append(uid)
                        continue
                    used[probe] += 1
                    st["pages"] += 1
                    if probe == st["loc"]:
                        st["outcome"] = SearchOutcome(
                            found_carrier=probe,
                            channel_pages=st["pages"],
                            rounds=rnd,
                            blocked_attempts=st["blocked"],
                        )
                    else:
                        st["visited"].add(probe)
                        still_active.append(uid)
            if still_active and sum(used.values()) == 0:
                raise RuntimeError(
                    "no channel capacity available for the remaining users; "
                    "background occupancy leaves their target carriers permanently full"
                )
            # reflect this round's occupancy on the live system, then release
            for c in system.carriers:
                c.busy_channels = background[c.id] + used[c.id]
            round_log.append(dict(used))
            active = still_active
    finally:
        for c in system.carriers:
            c.busy_channels = background[c.id]

    outcomes = [state[uid]["outcome"] for uid, _ in resolved]
    if return_round_log:
        return outcomes, round_log
    return outcomes

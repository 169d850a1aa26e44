"""Channel contention: what happens when pools fill up.

Each carrier has only 7 paging channels, so at most 7 pages fit per
carrier per slot. These traces show a single search skipping a busy
carrier, a batch spilling into a second round, and the scheduler
staggering two users across carriers so both are paged at once.
"""

from pagingsim import (
    CarrierSystem,
    batch_search,
    build_priority,
    concurrent_search,
    location_distribution,
)


def main():
    # --- one user, carrier 1 busy for the first slot -------------------
    system = CarrierSystem.from_populations([5, 3, 2])
    table = build_priority(location_distribution(system))
    print("probe order:", table.order)

    def carrier_one_busy_first_round(rnd, cid):
        return not (rnd == 1 and cid == 1)

    out = concurrent_search(system, table, 3, free=carrier_one_busy_first_round)
    print(
        f"user on carrier 3, carrier 1 busy in slot 1: "
        f"{out.channel_pages} pages over {out.rounds} rounds, "
        f"{out.blocked_attempts} deferred probe(s)"
    )
    print("   (went 2 -> 1 -> 3: the busy carrier was skipped, then retried)\n")

    # --- eight users squeezing through one 7-channel pool --------------
    one_pool = CarrierSystem.from_populations([80])
    users = [(uid, 1) for uid in range(8)]
    outcomes, rounds = batch_search(one_pool, users, "concurrent", return_round_log=True)
    print("8 users, one 7-channel carrier:")
    for r, counts in enumerate(rounds, start=1):
        print(f"  round {r}: {counts[1]} pages on carrier 1")
    spilled = [uid for uid, o in enumerate(outcomes) if o.rounds == 2]
    print(f"  user {spilled[0]} was deferred once and found in round 2\n")

    # --- staggering equal-probability users across carriers ------------
    two = CarrierSystem.from_populations([5, 5])
    users = [(1, 1), (2, 2)]
    shared = batch_search(two, users, "concurrent")
    staggered = batch_search(two, users, "concurrent", orders={1: (1, 2), 2: (2, 1)})
    print("two users, two equal carriers:")
    print(
        "  same probe order:     "
        f"{sum(o.channel_pages for o in shared)} pages, "
        f"finished in rounds {[o.rounds for o in shared]}"
    )
    print(
        "  staggered probe order:"
        f" {sum(o.channel_pages for o in staggered)} pages, "
        f"finished in rounds {[o.rounds for o in staggered]}"
    )
    print("  -> staggering pages both users simultaneously in round 1\n")

    # --- flooding can serve at most 7 users per slot, anywhere ---------
    users = [(uid, 1 + uid % 2) for uid in range(9)]
    outcomes = batch_search(two, users, "sequential")
    by_round = {}
    for o in outcomes:
        by_round[o.rounds] = by_round.get(o.rounds, 0) + 1
    print("9 flooded users on two carriers (each takes a channel on both):")
    for rnd in sorted(by_round):
        print(f"  round {rnd}: {by_round[rnd]} users served")
    print("  -> the flood saturates at 7 users/slot no matter how many carriers")


if __name__ == "__main__":
    main()

"""Flood vs. probe across the whole load range, analytics against simulation.

Sweeps the user arrival rate for a two-carrier system and prints the four
delay metrics per scenario. At light load the flood is slightly faster
(one service time vs. 1.5 expected probe slots); as traffic grows the
probe's lighter channel load wins, and the flood hits its stability wall
first. Pass --simulate to overlay M/M/C simulation estimates, and --plot
to write capacity_sweep.png.
"""

import argparse

import numpy as np

from pagingsim import CarrierSystem, SimConfig, sweep


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--simulate", action="store_true", help="add simulated points")
    parser.add_argument("--plot", action="store_true", help="write capacity_sweep.png")
    args = parser.parse_args()

    system = CarrierSystem.from_populations([5, 5])
    base = SimConfig(
        arrival_rate=1.0,
        service_rate=1.0,
        scenario="sequential",
        carriers=system,
        mode="mmc",
        horizon=40_000,
        warmup=4_000,
        seed=7,
    )
    grid = list(np.linspace(0.25, 9.5, 38))
    rows = sweep(base, grid, simulate=args.simulate)

    print(f"{'lambda':>7} {'scenario':>10} {'src':>8} {'A':>6} {'P(delay)':>9} {'T':>8}")
    for r in rows:
        p_delay = "-" if r.p_delay is None else f"{r.p_delay:.4f}"
        total = "unstable" if r.total_time is None else f"{r.total_time:.4f}"
        print(
            f"{r.lam:>7.2f} {r.scenario:>10} {r.source:>8} "
            f"{r.offered_load:>6.2f} {p_delay:>9} {total:>8}"
        )

    analytic = [r for r in rows if r.source == "analytic"]
    stable_pairs = {}
    for r in analytic:
        stable_pairs.setdefault(r.lam, {})[r.scenario] = r.total_time
    crossover = next(
        (
            lam
            for lam, tt in sorted(stable_pairs.items())
            if tt.get("sequential") and tt.get("concurrent")
            and tt["concurrent"] < tt["sequential"]
        ),
        None,
    )
    print(f"\nprobing becomes faster than flooding above lambda ~ {crossover:.2f}")

    if args.plot:
        import matplotlib

        matplotlib.use("Agg")
        import matplotlib.pyplot as plt

        fig, axes = plt.subplots(1, 2, figsize=(11, 4))
        for scenario, style in (("sequential", "o-"), ("concurrent", "s-")):
            pts = [r for r in analytic if r.scenario == scenario and not r.unstable]
            axes[0].plot(
                [r.lam for r in pts], [r.p_delay for r in pts], style, label=scenario
            )
            axes[1].plot(
                [r.lam for r in pts], [r.total_time for r in pts], style, label=scenario
            )
        if args.simulate:
            for scenario, marker in (("sequential", "x"), ("concurrent", "+")):
                pts = [r for r in rows if r.source == "sim" and r.scenario == scenario]
                axes[1].plot(
                    [r.lam for r in pts],
                    [r.total_time for r in pts],
                    marker,
                    label=f"{scenario} (sim)",
                )
        axes[0].set_xlabel("user arrival rate")
        axes[0].set_ylabel("probability all channels busy")
        axes[1].set_xlabel("user arrival rate")
        axes[1].set_ylabel("time in system")
        for ax in axes:
            ax.legend()
            ax.grid(alpha=0.3)
        fig.tight_layout()
        fig.savefig("capacity_sweep.png", dpi=120)
        print("wrote capacity_sweep.png")


if __name__ == "__main__":
    main()

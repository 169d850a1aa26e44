"""End-to-end acceptance checks, one test per release criterion.

Each test prints a single pass line (visible with ``pytest -s`` or
``-rP``) after its assertions hold, including the measured runtime where
the criterion bounds it.  Run with::

    pytest tests/test_acceptance.py -v -s
"""

import itertools
import json
import math
import time
from fractions import Fraction

import numpy as np
import pytest

from pagingsim.cli import main
from pagingsim.erlang import QueueParams, avg_wait_delayed, erlang_c, queue_metrics
from pagingsim.markov import (
    SearchDistribution,
    absorption_probabilities,
    build_paging_chain,
    expected_steps,
)
from pagingsim.search import CarrierSystem, build_priority, expected_pages, location_distribution
from pagingsim.simulate import SimConfig, run_mechanistic, run_mmc, sweep

TWO_EQUAL = CarrierSystem.from_populations([5, 5])


def report(number, text):
    print(f"criterion {number}: PASS - {text}")


def cli_json(capsys, *argv):
    assert main(list(argv)) == 0
    return json.loads(capsys.readouterr().out)


def test_criterion_1_two_carrier_expected_cost(capsys):
    """Equal populations cost exactly 1.5 pages per user, in under 1 ms."""
    for k in (1, 5, 7, 123, 10**6):
        payload = cli_json(capsys, "markov", "--pop", f"{k},{k}")
        assert abs(payload["expected_steps"] - 1.5) <= 1e-12

    def compute():
        chain = build_paging_chain(SearchDistribution((0.5, 0.5)))
        return expected_steps(chain)[0]

    compute()  # warm any lazy allocations before timing
    start = time.perf_counter()
    value = compute()
    elapsed = time.perf_counter() - start
    assert abs(value - 1.5) <= 1e-12
    assert elapsed < 1e-3
    report(1, f"expected cost 1.5 exact for k,k populations ({elapsed * 1e6:.0f} us)")


def test_criterion_2_worked_example_two_users():
    """Two users, two equal carriers: 4 flood pages vs 3 expected concurrent."""
    start = time.perf_counter()
    order = build_priority(location_distribution(TWO_EQUAL)).order
    per_user = expected_pages(TWO_EQUAL, order)
    assert per_user == pytest.approx(1.5, abs=1e-12)
    assert 2 * per_user == pytest.approx(3.0, abs=1e-12)  # concurrent, 2 users
    assert 2 * TWO_EQUAL.n_carriers == 4  # flood, 2 users

    users = 100_000
    stats = run_mechanistic(
        SimConfig(
            arrival_rate=0.05,
            service_rate=1.0,
            scenario="concurrent",
            carriers=TWO_EQUAL,
            mode="mechanistic",
            horizon=users,
            warmup=0,
            seed=2024,
        )
    )
    sigma_mean = 0.5 / math.sqrt(users)  # page count is 1 or 2 with sd 1/2
    assert abs(stats.pages_per_user_hat - 1.5) <= 3 * sigma_mean
    elapsed = time.perf_counter() - start
    assert elapsed < 5.0
    report(
        2,
        f"4 vs 3 pages exact; simulated {stats.pages_per_user_hat:.4f} pages/user "
        f"within 3 sigma of 1.5 ({elapsed:.2f} s)",
    )


def test_criterion_3_erlang_identities_on_14_channels():
    """AWA = P0 * AWD to 1e-12 relative; AWD(7)=1/7; recurrence matches factorials."""

    def literal_delay_probability(load: Fraction, channels: int) -> Fraction:
        top = load**channels
        tail = sum(load**k / math.factorial(k) for k in range(channels))
        return top / (top + math.factorial(channels) * (1 - load / channels) * tail)

    loads = (1, 3, 5, 7, 9, 11, 13)
    literal = {a: float(literal_delay_probability(Fraction(a), 14)) for a in loads}

    queue_metrics(QueueParams(1.0, 14, 1.0))  # warm up before timing
    start = time.perf_counter()
    computed = {a: (queue_metrics(QueueParams(float(a), 14, 1.0)), erlang_c(float(a), 14)) for a in loads}
    awd_at_seven = avg_wait_delayed(QueueParams(7.0, 14, 1.0))
    elapsed = time.perf_counter() - start
    assert elapsed < 1e-3

    for a in loads:
        metrics, stable_c = computed[a]
        assert metrics.avg_wait_all == pytest.approx(
            metrics.p_delay * metrics.avg_wait_delayed, rel=1e-12
        )
        assert stable_c == pytest.approx(literal[a], rel=1e-10)
    assert awd_at_seven == 1.0 / 7.0
    report(3, f"wait identities and factorial agreement on 14 channels ({elapsed * 1e6:.0f} us)")


def test_criterion_4_simulation_matches_analytics():
    """M/M/14 run at A=7 over 1e6 arrivals lands within 2% or its own CI."""
    start = time.perf_counter()
    stats = run_mmc(
        SimConfig(
            arrival_rate=3.5,  # duplicated pages make the channel-level load 7
            service_rate=1.0,
            scenario="sequential",
            carriers=TWO_EQUAL,
            mode="mmc",
            horizon=1_000_000,
            warmup=100_000,
            seed=777,
        )
    )
    analytic = queue_metrics(QueueParams(7.0, 14, 1.0))
    pairs = [
        (stats.p_delay_hat, stats.ci_p_delay, analytic.p_delay),
        (stats.awa_hat, stats.ci_awa, analytic.avg_wait_all),
        (stats.awd_hat, stats.ci_awd, analytic.avg_wait_delayed),
        (stats.t_hat, stats.ci_t, analytic.time_in_system),
    ]
    for estimate, half_width, truth in pairs:
        within_two_percent = abs(estimate - truth) <= 0.02 * abs(truth)
        covered = math.isfinite(half_width) and abs(estimate - truth) <= half_width
        assert within_two_percent or covered, (estimate, half_width, truth)
    elapsed = time.perf_counter() - start
    assert elapsed < 60.0
    report(4, f"all four estimates within 2% or 95% CI of analytics ({elapsed:.1f} s)")


def test_criterion_5_qualitative_figure_reproduction():
    """Concurrent search delays less, costs a little time at low load, wins at high."""
    start = time.perf_counter()
    base = SimConfig(
        arrival_rate=1.0,
        service_rate=1.0,
        scenario="sequential",
        carriers=TWO_EQUAL,
        mode="mmc",
        interpretation="mechanistic-load",
        horizon=1000,
        warmup=100,
        seed=0,
    )
    grid = list(np.linspace(0.2, 10.0, 50))
    rows = sweep(base, grid)
    cells = {}
    for r in rows:
        cells.setdefault(r.lam, {})[r.scenario] = r
    lams = sorted(cells)

    # (a) lower delay probability wherever both scenarios are stable
    common_stable = [
        lam
        for lam in lams
        if not cells[lam]["sequential"].unstable and not cells[lam]["concurrent"].unstable
    ]
    assert common_stable
    for lam in common_stable:
        assert cells[lam]["concurrent"].p_delay < cells[lam]["sequential"].p_delay

    # (b) at vanishing load the flood's single service beats the probing walk
    first = lams[0]
    assert cells[first]["sequential"].total_time < cells[first]["concurrent"].total_time

    # (c) past some rate, probing wins for every remaining stable point
    winners = [
        lam
        for lam in common_stable
        if cells[lam]["concurrent"].total_time < cells[lam]["sequential"].total_time
    ]
    assert winners
    crossover = winners[0]
    assert all(lam in winners for lam in common_stable if lam >= crossover)

    # (d) flood destabilizes strictly earlier (2 lambda vs 1.5 lambda of load)
    first_unstable_seq = next(lam for lam in lams if cells[lam]["sequential"].unstable)
    first_unstable_conc = next(lam for lam in lams if cells[lam]["concurrent"].unstable)
    assert first_unstable_seq < first_unstable_conc

    elapsed = time.perf_counter() - start
    assert elapsed < 1.0
    report(
        5,
        f"delay ordering, low-load sacrifice, crossover at lambda~{crossover:.2f}, "
        f"instability {first_unstable_seq:.2f} < {first_unstable_conc:.2f} ({elapsed * 1e3:.0f} ms)",
    )


def test_criterion_6_descending_order_is_optimal():
    """Across 200 random systems (n <= 5), no permutation beats descending order."""
    start = time.perf_counter()
    rng = np.random.default_rng(20240601)
    for _ in range(200):
        n = int(rng.integers(1, 6))
        pops = rng.integers(0, 50, size=n)
        if pops.sum() == 0:
            pops[rng.integers(0, n)] = 1
        system = CarrierSystem.from_populations(pops)
        table = build_priority(location_distribution(system))
        cost = expected_pages(system, table.order)
        best = min(
            expected_pages(system, perm)
            for perm in itertools.permutations(range(1, n + 1))
        )
        assert cost <= best + 1e-12
    elapsed = time.perf_counter() - start
    assert elapsed < 10.0
    report(6, f"200 random instances brute-forced over all orders ({elapsed:.2f} s)")


def test_criterion_7_markov_self_consistency():
    """1000 random distributions: absorption mass and expected steps check out."""
    start = time.perf_counter()
    rng = np.random.default_rng(99)
    for _ in range(1000):
        n = int(rng.integers(1, 9))
        weights = rng.random(n) + 1e-3
        probs = tuple(weights / weights.sum())
        chain = build_paging_chain(SearchDistribution(probs))
        mass = absorption_probabilities(chain)[0]
        assert np.allclose(mass, probs, atol=1e-10)
        direct = sum((j + 1) * p for j, p in enumerate(probs))
        assert abs(expected_steps(chain)[0] - direct) <= 1e-10
    elapsed = time.perf_counter() - start
    assert elapsed < 1.0
    report(7, f"1000 random chains, n <= 8, at 1e-10 ({elapsed * 1e3:.0f} ms)")


def test_criterion_8_compare_is_reproducible(tmp_path, capsys):
    """Identical config and seed produce byte-identical CSV data sections."""
    cfg = tmp_path / "cfg.txt"
    cfg.write_text(
        "carriers = 5, 5\nmu = 1.0\nlambda_grid = 0.5, 2.0, 4.0\n"
        "horizon = 3000\nseed = 31\n",
        encoding="utf-8",
    )
    first = tmp_path / "first.csv"
    second = tmp_path / "second.csv"
    for out in (first, second):
        assert main(["compare", "--config", str(cfg), "--simulate", "--out", str(out)]) == 0
    capsys.readouterr()
    bytes_first = first.read_bytes()
    assert bytes_first == second.read_bytes()
    assert bytes_first.startswith(b"lambda,")
    data_rows = bytes_first.count(b"\n") - 1
    report(8, f"two simulated sweeps identical over {data_rows} rows")

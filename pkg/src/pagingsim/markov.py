"""Absorbing-chain model of a priority-ordered carrier search.

A paging search probes carriers one per time slot in a fixed order and
stops at the carrier where the user actually is.  Modelling each probe
position as a transient state (success at position j = absorption into
absorbing state j) turns the expected number of probes and the
per-position hit mass into standard fundamental-matrix quantities.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

# Construction-time tolerance; derived quantities are checked at 1e-10.
ROW_SUM_TOL = 1e-12


@dataclass(frozen=True)
class SearchDistribution:
    """Per-position success probabilities, in the order carriers are probed.

    Probabilities must sum to 1 (the user is somewhere in the network).
    Individual entries may be 0 for empty carriers; positions after the
    cumulative mass reaches 1 cannot be turned into a chain.
    """

    probs: tuple[float, ...]

    def __post_init__(self):
        if len(self.probs) == 0:
            raise ValueError("distribution needs at least one position")
        probs = tuple(float(p) for p in self.probs)
        for j, p in enumerate(probs):
            if not (-ROW_SUM_TOL <= p <= 1.0 + ROW_SUM_TOL):
                raise ValueError(f"probability at position {j} out of [0, 1]: {p}")
        total = float(sum(probs))
        if abs(total - 1.0) > ROW_SUM_TOL:
            raise ValueError(f"probabilities must sum to 1, got {total!r}")
        probs = tuple(min(max(p, 0.0), 1.0) for p in probs)
        object.__setattr__(self, "probs", probs)

    @property
    def n(self) -> int:
        return len(self.probs)


@dataclass(frozen=True)
class AbsorbingChain:
    """Canonical-form transition structure of one paging walk.

    ``q_block`` holds transient-to-transient one-step probabilities and
    ``r_block`` transient-to-absorbing ones; each row of ``[Q | R]`` is a
    probability distribution.  Chains produced by :func:`build_paging_chain`
    have a strictly upper-triangular Q (the search never revisits an
    earlier position), which guarantees ``I - Q`` is invertible; the
    constructor does not force triangularity so that malformed chains are
    caught by :func:`fundamental_matrix` instead of being unrepresentable.
    """

    transient_count: int
    q_block: np.ndarray = field(repr=False)
    r_block: np.ndarray = field(repr=False)

    def __post_init__(self):
        q = np.array(self.q_block, dtype=float)
        r = np.array(self.r_block, dtype=float)
        t = self.transient_count
        if t < 1:
            raise ValueError("need at least one transient state")
        if q.shape != (t, t):
            raise ValueError(f"q_block must be {t}x{t}, got {q.shape}")
        if r.ndim != 2 or r.shape[0] != t or r.shape[1] < 1:
            raise ValueError(f"r_block must have {t} rows, got {r.shape}")
        full = np.hstack([q, r])
        if np.any(full < -ROW_SUM_TOL) or np.any(full > 1.0 + ROW_SUM_TOL):
            raise ValueError("transition probabilities out of [0, 1]")
        row_sums = full.sum(axis=1)
        bad = np.flatnonzero(np.abs(row_sums - 1.0) > ROW_SUM_TOL)
        if bad.size:
            raise ValueError(
                f"row {bad[0]} of [Q | R] sums to {row_sums[bad[0]]!r}, expected 1"
            )
        np.clip(q, 0.0, 1.0, out=q)
        np.clip(r, 0.0, 1.0, out=r)
        q.setflags(write=False)
        r.setflags(write=False)
        object.__setattr__(self, "q_block", q)
        object.__setattr__(self, "r_block", r)


def build_paging_chain(dist: SearchDistribution) -> AbsorbingChain:
    """Build the linear absorbing chain for probing carriers in ``dist`` order.

    State j succeeds (absorbs into absorbing state j) with the conditional
    hazard ``q_j = p_j / (1 - sum_{l<j} p_l)`` and otherwise moves on to
    state j+1.  The last state absorbs with probability 1: the user must be
    found somewhere.

    Raises ValueError when a hazard denominator is not positive, which
    happens exactly when positions remain after the cumulative success mass
    has already reached 1 (e.g. trailing zero-probability carriers).
    """
    p = np.asarray(dist.probs, dtype=float)
    n = dist.n
    hazards = np.empty(n)
    remaining = 1.0
    for j in range(n - 1):
        if remaining <= 0.0:
            raise ValueError(
                f"no probability mass left for position {j}: "
                "distribution exhausted before the final carrier"
            )
        hazards[j] = min(p[j] / remaining, 1.0)
        remaining -= p[j]
    hazards[n - 1] = 1.0

    q = np.zeros((n, n))
    r = np.zeros((n, n))
    for j in range(n):
        r[j, j] = hazards[j]
        if j + 1 < n:
            q[j, j + 1] = 1.0 - hazards[j]
    return AbsorbingChain(transient_count=n, q_block=q, r_block=r)


def fundamental_matrix(chain: AbsorbingChain) -> np.ndarray:
    """Return ``N = (I - Q)^{-1}``; entry (i, j) is the expected number of
    visits to transient state j starting from i."""
    n = chain.transient_count
    system = np.eye(n) - chain.q_block
    try:
        return np.linalg.solve(system, np.eye(n))
    except np.linalg.LinAlgError as exc:
        raise ValueError(
            "(I - Q) is singular: the chain is not absorbing from every state"
        ) from exc


def expected_steps(chain: AbsorbingChain) -> np.ndarray:
    """Expected time slots until absorption from each transient state.

    Element 0 is the expected paging service time from the start of the
    search, in unit-time slots (one probe per slot).
    """
    return fundamental_matrix(chain).sum(axis=1)


def absorption_probabilities(chain: AbsorbingChain) -> np.ndarray:
    """Return ``B = N @ R``: probability of ending in each absorbing state.

    Row 0 of B reproduces the input success distribution, which makes it
    a handy mass-conservation self-check.
    """
    return fundamental_matrix(chain) @ chain.r_block

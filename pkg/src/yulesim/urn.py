"""Discrete-time Monte Carlo simulator of the recommendation/novelty process.

Each time step is one site visit.  With probability nu the visitor discovers
a brand-new site; otherwise an already-known site is chosen with probability
proportional to its current visitor count (urn reinforcement: draw a ball,
put it back with a copy).  Selection is O(1) via a flat "ball list" holding
one site index per recorded visit, so multi-million-step runs stay cheap.

The process starts at t = 1 with a single discovered site holding one
visitor: the very first event must be a discovery because the urn is empty.

Reproducibility contract
------------------------
All randomness comes from Python's ``random.Random`` (MT19937), whose output
for ``random()``/``randrange()`` is stable across platforms and CPython
releases.  Replica ``i`` of a configuration with seed ``s`` runs on an
independent stream seeded with ``splitmix64(s, i)``; a plain run is replica
0.  Identical configurations therefore evolve byte-for-byte identically
everywhere.

The quantity tracked per site is the model's visitor count: every step adds
one new visitor to the chosen site, matching the unique-visitor statistic
measured from access logs.
"""

from __future__ import annotations

import random
from array import array
from collections import Counter
from dataclasses import dataclass

import numpy as np

from .errors import DomainError

__all__ = [
    "SimConfig",
    "UrnState",
    "exact_first_site_distribution",
    "new_simulation",
    "replicate",
    "run",
    "run_replica",
    "splitmix64",
    "step",
]

_MASK64 = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15

#: Hard cap on SimConfig.steps.  The ball list costs one machine word per
#: step, so this bounds a single run at ~800 MB.
MAX_STEPS = 100_000_000


def splitmix64(seed: int, index: int) -> int:
    """``index``-th output of the splitmix64 stream started at ``seed``.

    Used to derive statistically independent 64-bit child seeds from one
    master seed; same inputs give the same output on every platform.
    """
    z = (seed + (index + 1) * _GOLDEN) & _MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return z ^ (z >> 31)


@dataclass(frozen=True)
class SimConfig:
    """Simulation parameters: novelty rate, horizon in time steps, RNG seed."""

    nu: float
    steps: int
    seed: int

    def __post_init__(self) -> None:
        if not (0.0 <= self.nu < 1.0):
            raise DomainError(f"novelty rate must lie in [0, 1), got {self.nu!r}")
        if self.steps < 1:
            raise DomainError(f"steps must be >= 1, got {self.steps!r}")
        if self.steps > MAX_STEPS:
            raise DomainError(f"steps capped at {MAX_STEPS} to bound memory, got {self.steps!r}")
        if not (0 <= self.seed < (1 << 64)):
            raise DomainError(f"seed must be a 64-bit unsigned integer, got {self.seed!r}")


class UrnState:
    """Mutable state of one urn-process run.

    Attributes
    ----------
    nu : float
        Novelty rate.
    visit_counts : list[int]
        Per-site visitor counts, indexed by discovery order.
    total_visits : int
        Elapsed time steps t; equals ``sum(visit_counts)``.

    A state is owned by a single execution context: :meth:`step` mutates it
    and must not be called concurrently on the same instance.  Independent
    replicas may run in parallel.
    """

    __slots__ = ("nu", "visit_counts", "total_visits", "_balls", "_rng")

    def __init__(self, nu: float, rng: random.Random):
        if not (0.0 <= nu < 1.0):
            raise DomainError(f"novelty rate must lie in [0, 1), got {nu!r}")
        self.nu = float(nu)
        self.visit_counts = [1]
        self.total_visits = 1
        # site index of every recorded visit, in step order; a raw int array
        # keeps this at one machine word per step
        self._balls = array("q", (0,))
        self._rng = rng

    @property
    def num_sites(self) -> int:
        return len(self.visit_counts)

    def step(self) -> "UrnState":
        """Advance one time step: discover a new site w.p. nu, else reinforce.

        With probability nu a new site with one visitor is appended; with
        probability 1 - nu an existing site gains a visitor, chosen with
        probability proportional to its current count via a uniform ball
        draw.  nu = 0 never discovers (the comparison is strict).
        """
        rng = self._rng
        if rng.random() < self.nu:
            site = len(self.visit_counts)
            self.visit_counts.append(1)
        else:
            site = self._balls[rng.randrange(self.total_visits)]
            self.visit_counts[site] += 1
        self._balls.append(site)
        self.total_visits += 1
        return self

    def histogram(self) -> Counter:
        """Visitor-count histogram: maps n to the number of sites with n visitors."""
        return Counter(self.visit_counts)

    def visit_sequence(self) -> list[int]:
        """Site index visited at each step so far, in step order."""
        return list(self._balls)


def new_simulation(config: SimConfig) -> UrnState:
    """Fresh state at t = 1 (one site, one visitor) on the replica-0 stream."""
    return UrnState(config.nu, random.Random(splitmix64(config.seed, 0)))


def step(state: UrnState) -> UrnState:
    """Advance ``state`` one time step in place; returns the same state."""
    return state.step()


def run_replica(config: SimConfig, index: int) -> UrnState:
    """Fully evolved state of replica ``index`` (replica 0 is the plain run)."""
    if index < 0:
        raise DomainError(f"replica index must be >= 0, got {index!r}")
    state = UrnState(config.nu, random.Random(splitmix64(config.seed, index)))
    for _ in range(config.steps - 1):
        state.step()
    return state


def run(config: SimConfig) -> Counter:
    """Run the full horizon and return the visitor-count histogram.

    The result maps each visitor count n to the number of sites with exactly
    n visitors; counts weighted by n sum to ``config.steps`` and plain counts
    sum to the number of discovered sites.
    """
    return run_replica(config, 0).histogram()


def replicate(config: SimConfig, replicas: int) -> list[Counter]:
    """Histograms of ``replicas`` independent runs, ordered by replica index.

    Seeds derive deterministically from (config.seed, index), so the output
    sequence is identical on every invocation; replica 0 equals ``run(config)``.
    """
    if replicas < 1:
        raise DomainError(f"replicas must be >= 1, got {replicas!r}")
    return [run_replica(config, i).histogram() for i in range(replicas)]


def exact_first_site_distribution(nu: float, t_max: int) -> list[np.ndarray]:
    """Exact law of the first site's visitor count for every t = 1..t_max.

    Entry ``[t-1]`` is a vector v of length t + 1 with ``v[k]`` the
    probability that the first-discovered site has k visitors at time t
    (``v[0] == 0``).  This is the dynamic program for the one-site growth
    law: between t and t + 1 a site holding k visitors gains one with
    probability (1 - nu) * k / t, independent of how the remaining visits
    are distributed.  O(t_max^2) time and memory; meant for small horizons.
    """
    if not (0.0 <= nu < 1.0):
        raise DomainError(f"novelty rate must lie in [0, 1), got {nu!r}")
    if t_max < 1:
        raise DomainError(f"t_max must be >= 1, got {t_max!r}")
    out = [np.array([0.0, 1.0])]
    p = out[0]
    for t in range(1, t_max):
        grow = (1.0 - nu) * np.arange(p.size) / t * p
        q = np.zeros(p.size + 1)
        q[: p.size] = p - grow
        q[1:] += grow
        out.append(q)
        p = q
    return out

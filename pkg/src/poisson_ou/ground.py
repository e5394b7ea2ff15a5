"""Finite atomic ground spaces, Poisson configurations, exact truncated laws.

The intensity measure is a finite atomic measure: ``m`` atoms with strictly
positive weights ``lam_i``. A configuration is the vector of per-atom counts,
so the Poisson random measure over the space is a vector of independent
Poisson(lam_i) counts.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy import stats

from . import grids
from .errors import BudgetExceededError, NonFiniteValueError
from .reports import make_report

DEFAULT_TAIL_MASS = 1e-12
DEFAULT_BUDGET = 10**6


@dataclass(frozen=True)
class GroundSpace:
    """Finite atomic measure space: atoms indexed 0..m-1 with weights lam_i."""

    weights: tuple[float, ...]

    def __post_init__(self):
        w = np.asarray(self.weights, dtype=float)
        if w.ndim != 1 or w.size == 0:
            raise ValueError("weights must be a non-empty 1-d sequence")
        if not np.all(np.isfinite(w)) or not np.all(w > 0):
            raise ValueError("all weights must be strictly positive and finite")
        object.__setattr__(self, "weights", tuple(float(x) for x in w))

    @property
    def atom_count(self) -> int:
        return len(self.weights)

    @property
    def total_mass(self) -> float:
        return float(sum(self.weights))

    def weight_array(self) -> np.ndarray:
        return np.asarray(self.weights, dtype=float)


@dataclass(frozen=True)
class Configuration:
    """A point configuration collapsed to per-atom counts."""

    counts: tuple[int, ...]

    def __post_init__(self):
        c = tuple(int(x) for x in self.counts)
        if any(x < 0 for x in c):
            raise ValueError("counts must be non-negative")
        object.__setattr__(self, "counts", c)

    @property
    def total(self) -> int:
        return sum(self.counts)

    def array(self) -> np.ndarray:
        return np.asarray(self.counts, dtype=np.int64)


def _min_cap(lam: float, per_atom_tail: float) -> int:
    """Smallest N with P[Poisson(lam) > N] <= per_atom_tail."""
    n = int(stats.poisson.ppf(1.0 - per_atom_tail, lam))
    while stats.poisson.sf(n, lam) > per_atom_tail:
        n += 1
    while n > 0 and stats.poisson.sf(n - 1, lam) <= per_atom_tail:
        n -= 1
    return n


@dataclass(frozen=True)
class TruncatedStateSpace:
    """Per-atom truncation caps N_i with a quantified bound on discarded mass."""

    space: GroundSpace
    caps: tuple[int, ...]
    tail_mass: float
    budget: int = DEFAULT_BUDGET

    def __post_init__(self):
        caps = tuple(int(n) for n in self.caps)
        if len(caps) != self.space.atom_count:
            raise ValueError("need one cap per atom")
        if any(n <= 0 for n in caps):
            raise ValueError("caps must be positive")
        object.__setattr__(self, "caps", caps)
        per_atom = self.tail_mass / self.space.atom_count
        for lam, n in zip(self.space.weights, caps):
            if stats.poisson.sf(n, lam) > per_atom:
                raise ValueError(
                    f"cap {n} leaves more than tail_mass/m probability for lam={lam}"
                )
        if self.state_count() > self.budget:
            raise BudgetExceededError(
                f"{self.state_count()} states exceed budget {self.budget}"
            )

    @classmethod
    def from_tail_mass(
        cls,
        space: GroundSpace,
        tail_mass: float = DEFAULT_TAIL_MASS,
        budget: int = DEFAULT_BUDGET,
    ) -> "TruncatedStateSpace":
        per_atom = tail_mass / space.atom_count
        caps = tuple(_min_cap(lam, per_atom) for lam in space.weights)
        return cls(space=space, caps=caps, tail_mass=tail_mass, budget=budget)

    def state_count(self) -> int:
        return math.prod(n + 1 for n in self.caps)

    @property
    def shape(self) -> tuple[int, ...]:
        return tuple(n + 1 for n in self.caps)


def sample_configuration(space: GroundSpace, seed) -> Configuration:
    """One configuration with independent Poisson(lam_i) counts per atom."""
    rng = np.random.default_rng(seed)
    return Configuration(tuple(rng.poisson(space.weight_array()).tolist()))


def sample_configurations(space: GroundSpace, n: int, seed) -> np.ndarray:
    """(n, m) array of independent configurations, deterministic given seed."""
    rng = np.random.default_rng(seed)
    return rng.poisson(space.weight_array(), size=(n, space.atom_count))


def poisson_law(space: GroundSpace, trunc: TruncatedStateSpace) -> np.ndarray:
    """Exact product-Poisson pmf table over all states with c_i <= N_i."""
    if trunc.space != space:
        raise ValueError("truncation was built for a different space")
    if trunc.state_count() > trunc.budget:
        raise BudgetExceededError("state budget exceeded")
    return grids.product_pmf(space.weights, trunc.shape)


def check_mecke(
    space: GroundSpace,
    h,
    trunc: TruncatedStateSpace | None = None,
    mode: str = "exact",
    replications: int = 100_000,
    seed=0,
    name: str = "mecke",
):
    """Verify E int h(eta, x) eta(dx) = E int h(eta + delta_x, x) lambda(dx).

    ``h`` maps (counts array, atom index) to a real. Exact mode sums over the
    truncated grid, extended internally by one level so the shifted side is
    never clipped; Monte Carlo mode averages both sides over sampled
    configurations and reports the standard error of their difference.
    """
    lam = space.weight_array()
    if mode == "exact":
        if trunc is None:
            trunc = TruncatedStateSpace.from_tail_mass(space)
        shape = tuple(n + 2 for n in trunc.caps)  # one extra level for eta+delta_x
        law = grids.product_pmf(space.weights, shape)
        lhs = 0.0
        rhs = 0.0
        sup_h = 1.0
        for i in range(space.atom_count):
            table = grids.tabulate_rule(lambda c, i=i: h(c, i), shape)
            if not np.all(np.isfinite(table)):
                raise NonFiniteValueError(f"h produced a non-finite value at atom {i}")
            lhs += float(np.sum(law * grids.counts_along(shape, i) * table))
            rhs += lam[i] * float(
                np.sum(grids.drop_top(law, i) * grids.shift_up(table, i))
            )
            sup_h = max(sup_h, float(np.max(np.abs(table))))
        tol = 10.0 * trunc.tail_mass * sup_h * (1.0 + space.total_mass)
        return make_report(
            name, lhs, rhs, tolerance=tol, equality_form=True,
            parameters={"mode": "exact"},
        )
    if mode != "mc":
        raise ValueError(f"unknown mode {mode!r}")
    samples = sample_configurations(space, replications, seed)
    diffs = np.empty(replications)
    for s, counts in enumerate(samples):
        left = sum(counts[i] * h(counts, i) for i in range(space.atom_count) if counts[i])
        right = 0.0
        for i in range(space.atom_count):
            bumped = counts.copy()
            bumped[i] += 1
            right += lam[i] * h(bumped, i)
        diffs[s] = left - right
    if not np.all(np.isfinite(diffs)):
        raise NonFiniteValueError("h produced a non-finite value")
    mean = float(diffs.mean())
    stderr = float(diffs.std(ddof=1) / np.sqrt(replications))
    return make_report(
        name, mean, 0.0, stderr=stderr, equality_form=True,
        parameters={"mode": "mc", "replications": replications},
    )

"""Shared fixtures: small spaces, exact engines, and random functional corpora."""

import numpy as np
import pytest

from poisson_ou import (
    GroundSpace,
    SemigroupEngine,
    TruncatedStateSpace,
    from_rule,
)


@pytest.fixture(scope="session")
def one_atom_space():
    return GroundSpace((1.0,))


@pytest.fixture(scope="session")
def one_atom_engine(one_atom_space):
    trunc = TruncatedStateSpace.from_tail_mass(one_atom_space)
    return SemigroupEngine(one_atom_space, trunc)


@pytest.fixture(scope="session")
def two_atom_space():
    return GroundSpace((1.0, 0.5))


@pytest.fixture(scope="session")
def two_atom_engine(two_atom_space):
    trunc = TruncatedStateSpace.from_tail_mass(two_atom_space)
    return SemigroupEngine(two_atom_space, trunc)


def engine_for(lam, seed=0, mode="exact", replications=100_000):
    """One-atom exact engine with default truncation for intensity lam."""
    space = GroundSpace((float(lam),))
    trunc = TruncatedStateSpace.from_tail_mass(space)
    return SemigroupEngine(space, trunc, mode=mode,
                           replications=replications, seed=seed)


def random_bounded_functional(rng, n_values=80, low=-1.0, high=1.0, name="F"):
    """One-atom functional n -> vals[min(n, N)], values iid uniform in [low, high].

    Total on all of N (constant beyond the table), so exact engines of any
    padded shape can tabulate it.
    """
    vals = rng.uniform(low, high, size=n_values)
    top = n_values - 1

    def rule(c):
        return float(vals[min(int(c[0]), top)])

    return from_rule(rule, name=name, bounded_by=max(abs(low), abs(high)))


def random_decreasing_functional(rng, n_values=80, name="F"):
    """Non-negative, non-increasing one-atom functional (cumulative of
    non-positive increments, floored at zero, constant beyond the table)."""
    drops = rng.uniform(0.0, 0.3, size=n_values - 1)
    vals = np.maximum(rng.uniform(0.5, 2.0) - np.concatenate([[0.0], np.cumsum(drops)]), 0.0)
    top = n_values - 1

    def rule(c):
        return float(vals[min(int(c[0]), top)])

    return from_rule(rule, name=name, bounded_by=float(vals[0]))

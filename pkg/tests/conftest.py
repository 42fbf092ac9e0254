import numpy as np
import pytest

from qsvtsim import SolverOptions, families, residual, solve_phases


@pytest.fixture(scope="session")
def family_solutions():
    """Lazily solved phases per family, shared across the whole session."""
    cache = {}

    def get(name, **args):
        key = (name, tuple(sorted(args.items())))
        if key not in cache:
            target = families.family_target(name, args)
            seq = solve_phases(target, SolverOptions())
            cache[key] = (target, seq, residual(seq, target))
        return cache[key]

    return get


@pytest.fixture
def rng():
    return np.random.default_rng(20240917)

import functools

import numpy as np
import pytest
from hypothesis import settings

from icphi.corpus import build_corpus, materialize, parse_recipe

settings.register_profile("default", max_examples=40, deadline=None)
settings.load_profile("default")


@functools.lru_cache(maxsize=None)
def corpus(max_order):
    return build_corpus(max_order)


@functools.lru_cache(maxsize=None)
def group(label):
    return materialize(parse_recipe(label))


def members(max_order, lo=1):
    return [m for m in corpus(max_order) if lo <= m.group.order <= max_order]


def closed_subsets_oracle(G):
    """Subgroups of ``G`` as frozensets, by brute force over subsets of divisor size."""
    from itertools import combinations

    n = G.order
    out = {frozenset([0])}
    rest = range(1, n)
    for d in range(2, n + 1):
        if n % d:
            continue
        for combo in combinations(rest, d - 1):
            S = np.array((0,) + combo)
            prods = G.table[np.ix_(S, S)]
            flags = np.zeros(n, dtype=bool)
            flags[S] = True
            if flags[prods].all():
                out.add(frozenset(S.tolist()))
    return out


@pytest.fixture(scope="session")
def corpus24():
    return corpus(24)


@pytest.fixture(scope="session")
def corpus48():
    return corpus(48)


@pytest.fixture(scope="session")
def corpus64():
    return corpus(64)

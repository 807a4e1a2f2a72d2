"""Seeded random instances for the oracle-agreement suites."""

from __future__ import annotations

import itertools
import random

from .algebra import KLEIN_FOUR, GroupTable, cyclic_group, group_make
from .frame import BiasedGraph, gain_biased_graph, to_explicit
from .graphs import SimpleGraph

GROUPS: tuple[GroupTable, ...] = (
    cyclic_group(1),
    cyclic_group(2),
    cyclic_group(3),
    cyclic_group(4),
    group_make("explicit", KLEIN_FOUR),
)


def random_biased_graph(
    rng: random.Random,
    max_vertices: int = 6,
    max_edges: int = 10,
    loop_rate: float = 0.25,
    explicit_rate: float = 0.3,
) -> BiasedGraph:
    """A random gain graph, sometimes rewritten with explicit balance."""
    n = rng.randint(1, max_vertices)
    m = rng.randint(1, max_edges)
    group = rng.choice(GROUPS)
    edges = []
    for i in range(m):
        u = rng.randrange(n)
        v = u if n == 1 or rng.random() < loop_rate else rng.choice([w for w in range(n) if w != u])
        edges.append((i, u, v, rng.randrange(group.order)))
    B = gain_biased_graph(range(n), edges, group)
    return to_explicit(B) if rng.random() < explicit_rate else B


def random_simple_graph(rng: random.Random, n: int, density: float | None = None) -> SimpleGraph:
    p = rng.uniform(0.3, 0.9) if density is None else density
    return SimpleGraph.make(n, [e for e in itertools.combinations(range(n), 2) if rng.random() < p])

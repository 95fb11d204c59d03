import random
from itertools import combinations

from pchyper.hypergraph import ColoredKGraph


def rainbow(n, k):
    E = list(combinations(range(n), k))
    return ColoredKGraph.from_edges(n, k, E, list(range(1, len(E) + 1)))


def mono(n, k):
    return ColoredKGraph.from_edges(n, k, combinations(range(n), k), 1)


def random_colored(n, k, p, ncolors, seed):
    rng = random.Random(seed)
    E = [e for e in combinations(range(n), k) if rng.random() < p]
    return ColoredKGraph.from_edges(n, k, E, [rng.randint(1, ncolors) for _ in E])


def random_partite(m, k, p, ncolors, seed):
    """Random k-partite k-graph with parts {i*m, ..., i*m+m-1}."""
    from itertools import product

    rng = random.Random(seed)
    parts = [list(range(i * m, (i + 1) * m)) for i in range(k)]
    E = [e for e in product(*parts) if rng.random() < p]
    H = ColoredKGraph.from_edges(k * m, k, E, [rng.randint(1, ncolors) for _ in E])
    return H, parts

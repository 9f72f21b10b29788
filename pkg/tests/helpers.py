"""Independent brute-force oracles and instance builders for the test suite.

Everything here is deliberately written from the definitions (plain loops and
enumeration over itertools), not by calling the library code paths it checks.
"""

from __future__ import annotations

import random
from fractions import Fraction
from itertools import combinations, permutations, product

from conflictcolor import Hypergraph


def conflict_colorable_brute(n, r, edges, tuples, k) -> bool:
    """Exhaustive search over all k^n colorings, straight from the definition."""
    for phi in product(range(1, k + 1), repeat=n):
        good = True
        for e, t in zip(edges, tuples):
            if all(phi[v] == c for v, c in zip(e, t)):
                good = False
                break
        if good:
            return True
    return False


def count_conflict_colorings_brute(n, edges, tuples, k) -> int:
    count = 0
    for phi in product(range(1, k + 1), repeat=n):
        if all(any(phi[v] != c for v, c in zip(e, t)) for e, t in zip(edges, tuples)):
            count += 1
    return count


def exact_p_brute(n, r, edges, k) -> Fraction:
    """Average colorability over every local k-partition, by double enumeration."""
    m = len(edges)
    space = list(product(range(1, k + 1), repeat=r))
    total = good = 0
    for tuples in product(space, repeat=m):
        total += 1
        if conflict_colorable_brute(n, r, edges, tuples, k):
            good += 1
    return Fraction(good, total) if total else Fraction(1)


def back_degree_profile(n, edges, order):
    """Back degrees of an explicit order, from the definition."""
    pos = {v: i for i, v in enumerate(order)}
    back = [0] * n
    for e in edges:
        back[max(pos[v] for v in e)] += 1
    return back


def degeneracy_brute(n, edges) -> int:
    """min over all n! orders of the max back degree."""
    best = None
    for order in permutations(range(n)):
        worst = max(back_degree_profile(n, edges, order), default=0)
        if best is None or worst < best:
            best = worst
    return best or 0


def max_density_brute(n, edges) -> Fraction:
    best = Fraction(0)
    for size in range(1, n + 1):
        for subset in combinations(range(n), size):
            s = set(subset)
            m_in = sum(1 for e in edges if all(v in s for v in e))
            best = max(best, Fraction(m_in, size))
    return best


def list_colorable_brute(n, edges, lists) -> bool:
    """Enumerate all list-respecting colorings; reject monochromatic edges."""
    if any(not lst for lst in lists):
        return False
    for phi in product(*lists):
        ok = True
        for e in edges:
            first = phi[e[0]]
            if all(phi[v] == first for v in e):
                ok = False
                break
        if ok:
            return True
    return False


def adapted_colorings_brute(n, edges, lists, alpha):
    """All list-respecting colorings in which no edge is monochromatic in its
    alpha color."""
    out = []
    for phi in product(*lists):
        if all(any(phi[v] != a for v in e) for e, a in zip(edges, alpha)):
            out.append(phi)
    return out


def random_graph(rng: random.Random, n_max: int = 10, m_factor: int = 2) -> Hypergraph:
    n = rng.randint(2, n_max)
    pool = list(combinations(range(n), 2))
    m = rng.randint(0, min(len(pool), m_factor * n))
    return Hypergraph(n, 2, tuple(rng.sample(pool, m)))


def random_uniform_hypergraph(
    rng: random.Random, n_max: int = 8, r: int = 3, m_max: int | None = None
) -> Hypergraph:
    n = rng.randint(r, n_max)
    pool = list(combinations(range(n), r))
    m = rng.randint(0, min(len(pool), m_max if m_max is not None else 2 * n))
    return Hypergraph(n, r, tuple(rng.sample(pool, m)))


# small named instances used across the suite
def single_edge() -> Hypergraph:
    return Hypergraph(2, 2, ((0, 1),))


def path3() -> Hypergraph:
    return Hypergraph(3, 2, ((0, 1), (1, 2)))


def triangle() -> Hypergraph:
    return Hypergraph(3, 2, ((0, 1), (0, 2), (1, 2)))

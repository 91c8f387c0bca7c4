"""
Admissible dyadic interactions: the index sets of pairs and triples whose product can
reach the shell k.
"""

from itertools import product


def _in_triple_set(k: int, indices: tuple[int, ...]) -> bool:
    ordered = sorted(indices)
    top, median = ordered[-1], ordered[-2]
    near = abs(top - k) <= 4
    high_high = top >= k + 4 and top - median <= 4
    return near or high_high


def interaction_triples(k: int, k_max: int) -> list[tuple[int, int, int]]:
    """Triples (k1, k2, k3) in [-1, k_max]^3 that may satisfy P_k(P_k1 f1 P_k2 f2 P_k3 f3) != 0."""
    if k < -1:
        raise ValueError(f"k must be >= -1, got {k}")
    shells = range(-1, k_max + 1)
    return [triple for triple in product(shells, repeat=3) if _in_triple_set(k, triple)]


def pair_interactions(k: int, k_max: int) -> list[tuple[int, int]]:
    """Pairs (k1, k2) in [-1, k_max]^2 that may satisfy P_k(P_k1 f1 P_k2 f2) != 0."""
    if k < -1:
        raise ValueError(f"k must be >= -1, got {k}")
    shells = range(-1, k_max + 1)
    pairs = []
    for k1, k2 in product(shells, repeat=2):
        top = max(k1, k2)
        if abs(top - k) <= 4 or (top >= k + 4 and abs(k1 - k2) <= 4):
            pairs.append((k1, k2))
    return pairs

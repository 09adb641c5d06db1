"""Brute-force ground truth for small intervals.

Everything here is deliberately independent of the simulator modules: parking
is replayed with its own plain-Python loop over explicit permutations, and the
trial-count mean comes from the absorbing-chain linear system. The rest of the
package is validated against these values, never the other way around.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import permutations
from math import factorial

ENUMERATION_CAP = 10  # (n-1)! permutations; 9! = 362880 is the practical limit
CHAIN_CAP = 12


@dataclass(frozen=True)
class OracleReport:
    """Exact aggregates over all (n-1)! slot orderings."""

    n: int
    permutations: int
    expected_M: Fraction
    distribution_M: dict[int, Fraction]
    per_site_vacancy: tuple[Fraction, ...]
    expected_T: Fraction


def _replay(order: tuple[int, ...], n: int) -> list[bool]:
    """Park greedily in the given slot order (0-based slots; slot s covers
    sites s and s+1) and return the jammed occupancy."""
    occ = [False] * n
    for s in order:
        if not occ[s] and not occ[s + 1]:
            occ[s] = True
            occ[s + 1] = True
    return occ


def enumerate_orderings(n: int) -> OracleReport:
    """Exhaustively replay every ordering of the n-1 slots.

    Returns exact rational aggregates: E[M_n], the full law of M_n, per-site
    vacancy probabilities, and E[T_n] from the absorbing chain. Raises
    ValueError above the enumeration cap (n > 10).
    """
    if not 2 <= n <= ENUMERATION_CAP:
        raise ValueError(f"oracle cap exceeded: need 2 <= n <= {ENUMERATION_CAP}, got {n}")
    m = n - 1
    total = factorial(m)
    m_counts: dict[int, int] = {}
    vacant_counts = [0] * n
    for order in permutations(range(m)):
        occ = _replay(order, n)
        parked = sum(occ)
        m_counts[parked] = m_counts.get(parked, 0) + 1
        for i in range(n):
            if not occ[i]:
                vacant_counts[i] += 1
    return OracleReport(
        n=n,
        permutations=total,
        expected_M=Fraction(sum(k * c for k, c in m_counts.items()), total),
        distribution_M={k: Fraction(c, total) for k, c in sorted(m_counts.items())},
        per_site_vacancy=tuple(Fraction(c, total) for c in vacant_counts),
        expected_T=expected_T_exact(n),
    )


def expected_T_exact(n: int) -> Fraction:
    """Exact E[T_n] for the uniform-draw process, T counting every draw up to
    and including the jamming one.

    Solves the absorbing-chain system over reachable occupancy states. Parking
    strictly adds cars, so after eliminating each state's rejection self-loop
    the system is triangular and back-substitution suffices:

        E[s] = ((n-1) + sum over parkable slots of E[park(s, slot)]) / #parkable
    """
    if not 2 <= n <= CHAIN_CAP:
        raise ValueError(f"oracle cap exceeded: need 2 <= n <= {CHAIN_CAP}, got {n}")
    m = n - 1

    @lru_cache(maxsize=None)
    def e_from(state: int) -> Fraction:
        children = []
        for s in range(m):
            if not state & (0b11 << s):
                children.append(state | (0b11 << s))
        if not children:
            return Fraction(0)
        return Fraction(m + sum(e_from(c) for c in children), len(children))

    return e_from(0)


def verify_lemma1(n: int, classify) -> list[tuple[tuple[int, ...], int]]:
    """Check a site classifier against the replay for every ordering of n-1 slots.

    classify(ranks, i) must predict occupancy of 1-based site i from the slot
    ranks alone (rank vector = marks; only the ordering matters). Returns the
    list of (permutation, site) counterexamples, expected empty.
    """
    if not 2 <= n <= ENUMERATION_CAP:
        raise ValueError(f"oracle cap exceeded: need 2 <= n <= {ENUMERATION_CAP}, got {n}")
    bad: list[tuple[tuple[int, ...], int]] = []
    for ranks in permutations(range(1, n)):
        # ranks[s] is the mark of 0-based slot s; attempt order = increasing rank
        order = sorted(range(n - 1), key=lambda s: ranks[s])
        occ = _replay(tuple(order), n)
        for i in range(1, n + 1):
            if bool(classify(ranks, i)) != occ[i - 1]:
                bad.append((ranks, i))
    return bad

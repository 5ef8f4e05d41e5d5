"""Rank over GF(2) with rows packed into Python integers."""
from __future__ import annotations


def rank(rows) -> int:
    pivots: dict = {}
    r = 0
    for row in rows:
        while row:
            top = row.bit_length() - 1
            pivot = pivots.get(top)
            if pivot is None:
                pivots[top] = row
                r += 1
                break
            row ^= pivot
    return r


def pack(indices) -> int:
    out = 0
    for i in indices:
        out ^= 1 << i
    return out


def betti_numbers(groups, facets_of) -> list:
    """Unreduced GF(2) Betti numbers of a regular cell complex.

    ``groups[i]`` lists the ``i``-cells; ``facets_of(cell)`` returns the
    ``(i-1)``-cells in its boundary.  Regular complexes have incidence
    numbers +-1 on facets, so mod 2 every facet appears with coefficient 1.
    """
    ranks = [0]
    for i in range(1, len(groups)):
        index = {c: j for j, c in enumerate(groups[i - 1])}
        ranks.append(rank(pack(index[f] for f in facets_of(c)) for c in groups[i]))
    ranks.append(0)
    return [len(groups[i]) - ranks[i] - ranks[i + 1] for i in range(len(groups))]

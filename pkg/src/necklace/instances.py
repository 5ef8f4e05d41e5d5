"""Seeded random instances and the JSON instance format."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import BudgetMismatch, NecklaceError
from .measures import GridDensity, MeasureSet, normalize


@dataclass(frozen=True)
class Instance:
    k: int
    m: tuple
    measures: MeasureSet

    def __post_init__(self):
        if self.k < 2:
            raise NecklaceError("k must be at least 2")
        if len(self.m) != self.measures.dimension:
            raise NecklaceError(
                f"m has {len(self.m)} entries for a {self.measures.dimension}-dimensional instance"
            )
        if any(x < 0 for x in self.m):
            raise NecklaceError("cut counts must be nonnegative")
        need = len(self.measures) * (self.k - 1)
        if sum(self.m) != need:
            raise BudgetMismatch(f"m sums to {sum(self.m)}, need n(k-1) = {need}")

    @classmethod
    def from_json(cls, obj: dict) -> "Instance":
        if not isinstance(obj, dict):
            raise NecklaceError("instance must be a JSON object")
        for key in ("k", "m", "measures"):
            if key not in obj:
                raise NecklaceError(f"missing key {key!r}")
        if not isinstance(obj["m"], list) or not all(isinstance(x, int) for x in obj["m"]):
            raise NecklaceError("'m' must be a list of integers")
        if not isinstance(obj["k"], int):
            raise NecklaceError("'k' must be an integer")
        measures = MeasureSet(tuple(GridDensity.from_json(o) for o in obj["measures"]))
        return cls(obj["k"], tuple(obj["m"]), measures)

    def to_json(self) -> dict:
        return {
            "k": self.k,
            "m": list(self.m),
            "measures": [mu.to_json() for mu in self.measures],
        }


def even_split(total: int, d: int) -> tuple:
    """Deal ``total`` cuts over ``d`` axes in consecutive blocks, earlier axes first."""
    base, extra = divmod(total, d)
    return tuple(base + (a < extra) for a in range(d))


def compositions(total: int, d: int):
    """All ``d``-tuples of nonnegative integers summing to ``total``."""
    if d == 1:
        yield (total,)
        return
    for first in range(total, -1, -1):
        for rest in compositions(total - first, d - 1):
            yield (first,) + rest


def random_density(rng: np.random.Generator, d: int, max_cells: int) -> GridDensity:
    bps = []
    for _ in range(d):
        cells = int(rng.integers(1, max_cells + 1))
        inner = np.sort(rng.uniform(0.0, 1.0, size=cells - 1))
        bps.append(np.concatenate(([0.0], inner, [1.0])))
    shape = [b.size - 1 for b in bps]
    values = rng.uniform(0.0, 1.0, size=int(np.prod(shape)))
    return normalize(GridDensity(tuple(bps), values))


def random_instance(seed: int, n: int, d: int, k: int, max_cells: int = 8, m=None) -> Instance:
    rng = np.random.default_rng(seed)
    measures = MeasureSet(tuple(random_density(rng, d, max_cells) for _ in range(n)))
    m = even_split(n * (k - 1), d) if m is None else tuple(m)
    return Instance(k, m, measures)


def _relabel(colors) -> tuple:
    """Rename colors 1, 2, ... in order of first appearance."""
    names: dict = {}
    return tuple(names.setdefault(c, len(names) + 1) for c in colors)


def bead_necklaces(max_beads: int, max_colors: int, k: int, up_to_reversal: bool = False):
    """Necklaces whose color counts are positive multiples of ``k``.

    One representative per class under renaming colors (first appearance
    order), and optionally under reading the string backwards.
    """
    for total in range(k, max_beads + 1, k):
        for n in range(1, max_colors + 1):
            yield from _necklaces_of(total, n, k, up_to_reversal)


def _necklaces_of(total, n, k, up_to_reversal):
    def extend(prefix, counts, used):
        if len(prefix) == total:
            if used == n and all(c % k == 0 for c in counts):
                word = tuple(prefix)
                if not up_to_reversal or word <= _relabel(reversed(word)):
                    yield word
            return
        left = total - len(prefix)
        # colors still missing must fit, and each count must be completable
        need = sum((-c) % k for c in counts[:used]) + k * (n - used)
        if need > left:
            return
        for c in range(1, min(used + 1, n) + 1):
            counts[c - 1] += 1
            yield from extend(prefix + [c], counts, max(used, c))
            counts[c - 1] -= 1

    yield from extend([], [0] * n, 0)

"""Piecewise-constant measures on the unit cube.

A :class:`GridDensity` is a density that is constant on the cells of an
axis-aligned grid.  Cell values are stored flat in row-major order (axis 1
most significant), which is numpy's C order for the shape
``(cells on axis 1, ..., cells on axis d)``.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import (
    NecklaceError,
    NegativeCell,
    OutOfRange,
    UnknownColor,
    ZeroTotalMass,
)

MASS_TOL = 1e-12


def _as_breakpoints(axis: Sequence[float]) -> np.ndarray:
    bp = np.asarray(axis, dtype=float)
    if bp.ndim != 1 or bp.size < 2:
        raise NecklaceError("each axis needs at least the breakpoints 0 and 1")
    if bp[0] != 0.0 or bp[-1] != 1.0:
        raise NecklaceError("breakpoints must start at 0.0 and end at 1.0")
    if np.any(np.diff(bp) <= 0):
        raise NecklaceError("breakpoints must be strictly increasing")
    bp.setflags(write=False)
    return bp


@dataclass(frozen=True, eq=False)
class GridDensity:
    breakpoints: tuple
    values: np.ndarray
    # prefix[i_1, ..., i_d] = mass of all cells with index < i_a on every axis
    prefix: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        bps = tuple(_as_breakpoints(b) for b in self.breakpoints)
        if not bps:
            raise NecklaceError("dimension must be positive")
        vals = np.array(self.values, dtype=float).ravel()
        shape = tuple(b.size - 1 for b in bps)
        if vals.size != int(np.prod(shape)):
            raise NecklaceError(
                f"expected {int(np.prod(shape))} cell values, got {vals.size}"
            )
        if not np.all(np.isfinite(vals)):
            raise NecklaceError("cell values must be finite")
        vals.setflags(write=False)
        object.__setattr__(self, "breakpoints", bps)
        object.__setattr__(self, "values", vals)

        masses = self.grid_values() * _cell_volumes(bps)
        prefix = np.zeros(tuple(s + 1 for s in shape))
        inner = masses
        for ax in range(len(shape)):
            inner = np.cumsum(inner, axis=ax)
        prefix[tuple(slice(1, None) for _ in shape)] = inner
        prefix.setflags(write=False)
        object.__setattr__(self, "prefix", prefix)

    @property
    def dimension(self) -> int:
        return len(self.breakpoints)

    @property
    def shape(self) -> tuple:
        return tuple(b.size - 1 for b in self.breakpoints)

    def grid_values(self) -> np.ndarray:
        return self.values.reshape(self.shape)

    def total_mass(self) -> float:
        return float(self.prefix[tuple(-1 for _ in self.shape)])

    def is_probability(self, tol: float = MASS_TOL) -> bool:
        return bool(np.all(self.values >= 0)) and abs(self.total_mass() - 1.0) <= tol

    def value_at(self, point) -> float:
        idx = tuple(
            min(int(np.searchsorted(b, x, side="right")) - 1, b.size - 2)
            for b, x in zip(self.breakpoints, point)
        )
        return float(self.grid_values()[idx])

    @classmethod
    def uniform(cls, d: int = 1) -> "GridDensity":
        return cls(tuple([0.0, 1.0] for _ in range(d)), [1.0])

    @classmethod
    def from_json(cls, obj: dict) -> "GridDensity":
        try:
            return cls(tuple(obj["breakpoints"]), obj["values"])
        except (KeyError, TypeError) as exc:
            raise NecklaceError(f"malformed density object: {exc}") from exc

    def to_json(self) -> dict:
        return {
            "breakpoints": [b.tolist() for b in self.breakpoints],
            "values": self.values.tolist(),
        }


def _cell_volumes(bps) -> np.ndarray:
    vol = np.ones(())
    for b in bps:
        vol = np.multiply.outer(vol, np.diff(b))
    return vol


@dataclass(frozen=True)
class Box:
    """Closed box ``[lo_1, hi_1] x ... x [lo_d, hi_d]`` inside the unit cube."""

    lo: tuple
    hi: tuple

    def __post_init__(self):
        lo = tuple(float(x) for x in self.lo)
        hi = tuple(float(x) for x in self.hi)
        if len(lo) != len(hi) or not lo:
            raise NecklaceError("box bounds must have equal positive length")
        for a, b in zip(lo, hi):
            if not (0.0 <= a <= b <= 1.0):
                raise OutOfRange(f"interval [{a}, {b}] not inside [0, 1]")
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)

    @property
    def dimension(self) -> int:
        return len(self.lo)

    def volume(self) -> float:
        return float(np.prod([b - a for a, b in zip(self.lo, self.hi)]))

    def is_degenerate(self) -> bool:
        return any(a == b for a, b in zip(self.lo, self.hi))


@dataclass(frozen=True)
class MeasureSet:
    densities: tuple

    def __post_init__(self):
        dens = tuple(self.densities)
        if not dens:
            raise NecklaceError("a measure set needs at least one measure")
        d = dens[0].dimension
        if any(m.dimension != d for m in dens):
            raise NecklaceError("all measures must share one dimension")
        object.__setattr__(self, "densities", dens)

    @property
    def dimension(self) -> int:
        return self.densities[0].dimension

    def __len__(self):
        return len(self.densities)

    def __iter__(self):
        return iter(self.densities)

    def __getitem__(self, i):
        return self.densities[i]

    def is_probability(self, tol: float = MASS_TOL) -> bool:
        return all(m.is_probability(tol) for m in self.densities)


def normalize(density: GridDensity, probability: bool = True) -> GridDensity:
    """Scale ``density`` to total mass one."""
    if probability and np.any(density.values < 0):
        raise NegativeCell("negative cell value in probability mode")
    total = density.total_mass()
    if abs(total) < MASS_TOL:
        raise ZeroTotalMass("cannot normalize a density of zero total mass")
    if total == 1.0:
        return density
    return GridDensity(density.breakpoints, density.values / total)


def _check_point(density: GridDensity, point) -> tuple:
    pt = tuple(float(x) for x in point)
    if len(pt) != density.dimension:
        raise NecklaceError(
            f"point has {len(pt)} coordinates, density has dimension {density.dimension}"
        )
    for x in pt:
        if not 0.0 <= x <= 1.0:
            raise OutOfRange(f"coordinate {x} outside [0, 1]")
    return pt


def cdf(density: GridDensity, point) -> float:
    """Mass of ``[0, x_1] x ... x [0, x_d]``.

    Whole cells below the point come from the prefix-sum table; the boundary
    layer is the cell containing each coordinate, weighted by the covered
    fraction of that cell.
    """
    pt = _check_point(density, point)
    d = density.dimension
    idx, frac = [], []
    for b, x in zip(density.breakpoints, pt):
        i = min(int(np.searchsorted(b, x, side="right")) - 1, b.size - 2)
        idx.append(i)
        frac.append((x - b[i]) / (b[i + 1] - b[i]))
    table = density.prefix
    total = 0.0
    for partial in itertools.product((False, True), repeat=d):
        weight = 1.0
        for a in range(d):
            if partial[a]:
                weight *= frac[a]
        if weight == 0.0:
            continue
        region = 0.0
        # inclusion-exclusion along the partial axes isolates the single cell
        for step in itertools.product((0, 1), repeat=d):
            if any(step[a] and not partial[a] for a in range(d)):
                continue
            sign = (-1) ** sum(1 for a in range(d) if partial[a] and not step[a])
            region += sign * table[tuple(idx[a] + step[a] for a in range(d))]
        total += weight * region
    return float(total)


def box_mass(density: GridDensity, box: Box) -> float:
    """Integral of ``density`` over ``box`` by inclusion-exclusion on corners."""
    if box.dimension != density.dimension:
        raise NecklaceError("box and density dimensions differ")
    if box.is_degenerate():
        return 0.0
    d = box.dimension
    total = 0.0
    for corner in itertools.product((0, 1), repeat=d):
        pt = [box.hi[a] if corner[a] else box.lo[a] for a in range(d)]
        sign = (-1) ** (d - sum(corner))
        total += sign * cdf(density, pt)
    return total


def parse_beads(beads, n: int | None = None) -> list:
    """Color ids (1-based) for a bead string like ``"AABB"`` or an int sequence."""
    if isinstance(beads, str):
        colors = []
        for ch in beads:
            if not ch.isalpha():
                raise UnknownColor(f"bead {ch!r} is not a letter")
            colors.append(ord(ch.upper()) - ord("A") + 1)
    else:
        colors = [int(c) for c in beads]
    if not colors:
        raise NecklaceError("empty necklace")
    if n is None:
        n = max(colors)
    for c in colors:
        if not 1 <= c <= n:
            raise UnknownColor(f"bead color {c} outside 1..{n}")
    return colors


def bead_necklace_to_measures(beads, n: int | None = None) -> MeasureSet:
    """Embed a discrete necklace in ``[0, 1]``: bead ``p`` of ``T`` covers ``[p/T, (p+1)/T]``."""
    colors = parse_beads(beads, n)
    if n is None:
        n = max(colors)
    total = len(colors)
    bp = np.arange(total + 1) / total
    col = np.asarray(colors)
    measures = []
    for c in range(1, n + 1):
        indicator = (col == c).astype(float)
        measures.append(normalize(GridDensity((bp,), indicator)))
    return MeasureSet(tuple(measures))

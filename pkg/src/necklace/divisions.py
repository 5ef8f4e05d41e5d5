"""Cut configurations, labelings and the fairness test map.

The residual matrix of a division has one row per measure and one column per
color, ``M[j, c] = mu_j(A_c) - 1/k`` where ``A_c`` is the union of elementary
boxes labelled ``c``.  A division is fair exactly when ``M`` vanishes.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from .errors import IndexOutOfRange, NecklaceError, NotTwoColors, ShapeMismatch
from .measures import Box, MeasureSet, box_mass


@dataclass(frozen=True)
class CutConfiguration:
    cuts: tuple

    def __post_init__(self):
        axes = []
        for axis in self.cuts:
            xs = tuple(float(x) for x in axis)
            if any(not 0.0 <= x <= 1.0 for x in xs):
                raise NecklaceError("cut positions must lie in [0, 1]")
            if any(a > b for a, b in zip(xs, xs[1:])):
                raise NecklaceError("cut positions must be sorted per axis")
            axes.append(xs)
        if not axes:
            raise NecklaceError("dimension must be positive")
        object.__setattr__(self, "cuts", tuple(axes))

    @classmethod
    def from_unsorted(cls, cuts) -> "CutConfiguration":
        return cls(tuple(sorted(float(x) for x in axis) for axis in cuts))

    @property
    def dimension(self) -> int:
        return len(self.cuts)

    @property
    def counts(self) -> tuple:
        return tuple(len(axis) for axis in self.cuts)

    @property
    def grid_shape(self) -> tuple:
        return tuple(len(axis) + 1 for axis in self.cuts)

    def edges(self, axis: int) -> tuple:
        """Cut positions on ``axis`` padded with 0 and 1."""
        return (0.0,) + self.cuts[axis] + (1.0,)


@dataclass(frozen=True)
class Labeling:
    k: int
    shape: tuple
    labels: tuple

    def __post_init__(self):
        labels = tuple(int(c) for c in np.asarray(self.labels).ravel())
        shape = tuple(int(s) for s in self.shape)
        if self.k < 1:
            raise NecklaceError("color count must be positive")
        if len(labels) != int(np.prod(shape)):
            raise ShapeMismatch(
                f"labeling has {len(labels)} entries, grid has {int(np.prod(shape))} boxes"
            )
        if any(not 1 <= c <= self.k for c in labels):
            raise NecklaceError(f"labels must lie in 1..{self.k}")
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "shape", shape)

    def __getitem__(self, index):
        return self.labels[int(np.ravel_multi_index(index, self.shape))]


@dataclass(frozen=True)
class Division:
    cuts: CutConfiguration
    labeling: Labeling
    k: int = field(init=False)

    def __post_init__(self):
        if self.cuts.grid_shape != self.labeling.shape:
            raise ShapeMismatch(
                f"labeling shape {self.labeling.shape} does not match "
                f"cut grid {self.cuts.grid_shape}"
            )
        object.__setattr__(self, "k", self.labeling.k)

    @classmethod
    def make(cls, k: int, cuts, labels) -> "Division":
        cc = cuts if isinstance(cuts, CutConfiguration) else CutConfiguration(cuts)
        return cls(cc, Labeling(k, cc.grid_shape, labels))

    @property
    def dimension(self) -> int:
        return self.cuts.dimension

    @property
    def labels(self) -> tuple:
        return self.labeling.labels

    def boxes(self):
        """Yield ``(multi-index, label)`` in row-major order."""
        for j, lab in zip(itertools.product(*map(range, self.cuts.grid_shape)), self.labels):
            yield j, lab

    @classmethod
    def from_json(cls, obj: dict) -> "Division":
        try:
            return cls.make(int(obj["k"]), obj["cuts"], obj["labels"])
        except (KeyError, TypeError) as exc:
            raise NecklaceError(f"malformed division object: {exc}") from exc

    def to_json(self) -> dict:
        return {
            "k": self.k,
            "cuts": [list(axis) for axis in self.cuts.cuts],
            "labels": list(self.labels),
        }


def elementary_box(cuts: CutConfiguration, j) -> Box:
    j = tuple(int(x) for x in j)
    if len(j) != cuts.dimension:
        raise IndexOutOfRange("multi-index length differs from the dimension")
    lo, hi = [], []
    for axis, ji in enumerate(j):
        if not 0 <= ji <= len(cuts.cuts[axis]):
            raise IndexOutOfRange(f"index {ji} out of range on axis {axis + 1}")
        edges = cuts.edges(axis)
        lo.append(edges[ji])
        hi.append(edges[ji + 1])
    return Box(tuple(lo), tuple(hi))


def color_masses(division: Division, measures: MeasureSet) -> np.ndarray:
    """``out[j, c-1] = mu_j(A_c)``, summed box by box."""
    if division.dimension != measures.dimension:
        raise ShapeMismatch(
            f"division has dimension {division.dimension}, "
            f"measures have dimension {measures.dimension}"
        )
    out = np.zeros((len(measures), division.k))
    for j, lab in division.boxes():
        box = elementary_box(division.cuts, j)
        if box.is_degenerate():
            continue
        for i, mu in enumerate(measures):
            out[i, lab - 1] += box_mass(mu, box)
    return out


def evaluate(division: Division, measures: MeasureSet) -> np.ndarray:
    """The residual matrix ``mu_j(A_c) - 1/k`` (rows: measures, columns: colors)."""
    return color_masses(division, measures) - 1.0 / division.k


def residual_norm(residual) -> float:
    m = np.asarray(residual, dtype=float)
    return float(np.max(np.abs(m))) if m.size else 0.0


@dataclass
class VerifyReport:
    cut_counts: tuple
    expected_counts: tuple | None
    counts_ok: bool
    residual: float
    tolerance: float
    masses: list
    passed: bool = field(init=False)

    def __post_init__(self):
        self.passed = self.counts_ok and self.residual <= self.tolerance

    def deviations(self, tol: float | None = None) -> list:
        """``(measure, color, deviation)`` triples exceeding ``tol`` (1-based ids)."""
        tol = self.tolerance if tol is None else tol
        k = len(self.masses[0]) if self.masses else 1
        out = []
        for j, row in enumerate(self.masses, start=1):
            for c, mass in enumerate(row, start=1):
                dev = mass - 1.0 / k
                if abs(dev) > tol:
                    out.append((j, c, dev))
        return out

    def to_json(self) -> dict:
        return {
            "passed": self.passed,
            "residual_norm": self.residual,
            "tolerance": self.tolerance,
            "cut_counts": list(self.cut_counts),
            "expected_counts": None if self.expected_counts is None else list(self.expected_counts),
            "counts_ok": self.counts_ok,
            "masses": self.masses,
            "deviations": [list(t) for t in self.deviations()],
        }


def verify(division: Division, measures: MeasureSet, tol: float = 1e-9,
           expected_m=None) -> VerifyReport:
    counts = division.cuts.counts
    expected = None if expected_m is None else tuple(int(x) for x in expected_m)
    try:
        masses = color_masses(division, measures)
    except ShapeMismatch:
        return VerifyReport(counts, expected, False, float("inf"), tol, [])
    return VerifyReport(
        cut_counts=counts,
        expected_counts=expected,
        counts_ok=expected is None or counts == expected,
        residual=residual_norm(masses - 1.0 / division.k),
        tolerance=tol,
        masses=masses.tolist(),
    )


def sign_representation(division: Division) -> tuple:
    """Hobby-Rice signs: color 1 is +1, color 2 is -1."""
    if division.k != 2:
        raise NotTwoColors(f"sign representation needs k=2, got k={division.k}")
    return tuple(1 if c == 1 else -1 for c in division.labels)


def hobby_rice_sums(division: Division, measures: MeasureSet) -> np.ndarray:
    """``sum_j eps_j mu_i(R_j)`` for each measure."""
    signs = sign_representation(division)
    out = np.zeros(len(measures))
    for (j, _), eps in zip(division.boxes(), signs):
        box = elementary_box(division.cuts, j)
        for i, mu in enumerate(measures):
            out[i] += eps * box_mass(mu, box)
    return out

"""Search for fair divisions.

``solve_base`` is a multi-start heuristic for a prime number of thieves:
labels are improved by local search with annealing, cut positions by a
pattern search followed by a damped Gauss-Newton polish.  ``solve`` handles
composite ``k`` by splitting off the smallest prime factor and recursing on
rescaled restrictions of the measures.  Every returned division is checked
against the original measures through :func:`necklace.divisions.verify`.

``solve_discrete_1d`` is an exhaustive solver for bead necklaces and serves as
the exact oracle for the continuous search.
"""
from __future__ import annotations

import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace

import numpy as np

from .divisions import CutConfiguration, Division, residual_norm, verify
from .errors import (
    BudgetMismatch,
    EmptyRegion,
    NecklaceError,
    NotDivisible,
    SearchExhausted,
    ShapeMismatch,
    TooLarge,
)
from .measures import GridDensity, MeasureSet, parse_beads

log = logging.getLogger(__name__)

NULL_MASS = 1e-9
DISCRETE_LIMIT = 10**8


@dataclass(frozen=True)
class SolverConfig:
    tolerance: float = 1e-6
    restarts: int = 32
    budget: int = 100_000
    seed: int = 0
    initial_temperature: float = 1e-2
    cooling: float = 0.9
    pattern_step: float = 0.05
    pattern_shrink: float = 0.5
    stall_rounds: int = 8
    composite_tolerance: float = 1e-4
    composite_attempts: int = 3
    workers: int = 1
    probability: bool = True

    def __post_init__(self):
        if not self.tolerance > 0:
            raise NecklaceError("tolerance must be positive")
        if self.restarts < 1 or self.budget < 1 or self.composite_attempts < 1:
            raise NecklaceError("restarts and budget must be positive")
        if not 0 < self.cooling < 1 or not 0 < self.pattern_shrink < 1:
            raise NecklaceError("cooling and shrink factors must lie in (0, 1)")


@dataclass(frozen=True)
class FactorPlan:
    k1: int
    k2: int
    outer: tuple
    inner: tuple  # k1 budget vectors, one per outer class


def smallest_prime_factor(k: int) -> int:
    for p in range(2, math.isqrt(k) + 1):
        if k % p == 0:
            return p
    return k


def is_prime(k: int) -> bool:
    return k >= 2 and smallest_prime_factor(k) == k


def allocate_cut_budgets(n: int, d: int, k1: int, k2: int, m) -> FactorPlan:
    """Split per-axis cut counts between one outer and ``k1`` inner problems.

    The ``sum(m)`` unit budgets are listed axis by axis and cut into
    consecutive blocks of sizes ``n(k1-1), n(k2-1), ..., n(k2-1)``.
    """
    m = tuple(int(x) for x in m)
    if len(m) != d:
        raise ShapeMismatch(f"expected {d} per-axis counts, got {len(m)}")
    if k1 < 2 or k2 < 2 or n < 1 or any(x < 0 for x in m):
        raise NecklaceError("need n >= 1, k1, k2 >= 2 and nonnegative counts")
    need = n * (k1 * k2 - 1)
    if sum(m) != need:
        raise BudgetMismatch(f"cut counts sum to {sum(m)}, need n(k1*k2-1) = {need}")
    units = [axis for axis, count in enumerate(m) for _ in range(count)]
    sizes = [n * (k1 - 1)] + [n * (k2 - 1)] * k1
    blocks, start = [], 0
    for size in sizes:
        tally = [0] * d
        for axis in units[start:start + size]:
            tally[axis] += 1
        blocks.append(tuple(tally))
        start += size
    return FactorPlan(k1, k2, blocks[0], tuple(blocks[1:]))


# -- evaluation kernel ------------------------------------------------------


def _overlap(edges: np.ndarray, grid: np.ndarray) -> np.ndarray:
    """``out[b, c]`` = length of ``[edges[b], edges[b+1]]`` inside grid cell ``c``."""
    lo = np.maximum(edges[:-1, None], grid[None, :-1])
    hi = np.minimum(edges[1:, None], grid[None, 1:])
    return np.clip(hi - lo, 0.0, None)


class _Kernel:
    """All measures resampled onto the common refinement of their grids."""

    def __init__(self, measures: MeasureSet):
        self.n = len(measures)
        self.d = measures.dimension
        self.grids = [
            np.unique(np.concatenate([mu.breakpoints[a] for mu in measures]))
            for a in range(self.d)
        ]
        mids = [(g[:-1] + g[1:]) / 2 for g in self.grids]
        stack = []
        for mu in measures:
            idx = [
                np.searchsorted(mu.breakpoints[a], mids[a], side="right") - 1
                for a in range(self.d)
            ]
            stack.append(mu.grid_values()[np.ix_(*idx)])
        self.values = np.array(stack)
        self.evaluations = 0

    def _contract(self, mats) -> np.ndarray:
        t = self.values
        for mat in mats:
            t = np.tensordot(t, mat, axes=([1], [1]))
        return t

    def masses(self, cuts) -> np.ndarray:
        """Piece masses, shape ``(n, pieces)`` with pieces in row-major order."""
        self.evaluations += 1
        mats = [
            _overlap(np.concatenate(([0.0], c, [1.0])), g)
            for c, g in zip(cuts, self.grids)
        ]
        return self._contract(mats).reshape(self.n, -1)

    def jacobian(self, cuts) -> np.ndarray:
        """``out[:, piece, t]`` = derivative of piece masses by flat cut ``t``."""
        self.evaluations += 1
        mats = [
            _overlap(np.concatenate(([0.0], c, [1.0])), g)
            for c, g in zip(cuts, self.grids)
        ]
        shape = tuple(len(c) + 1 for c in cuts)
        cols = []
        for a, c in enumerate(cuts):
            if len(c) == 0:
                continue
            g = self.grids[a]
            cell = np.clip(np.searchsorted(g, c, side="right") - 1, 0, g.size - 2)
            section = np.zeros((len(c), g.size - 1))
            section[np.arange(len(c)), cell] = 1.0
            probe = list(mats)
            probe[a] = section
            # s[n, ..., t, ...]: density integrated over the cut hyperplane slab
            s = self._contract(probe)
            for t in range(len(c)):
                col = np.zeros((self.n,) + shape)
                lower = [slice(None)] * (self.d + 1)
                upper = [slice(None)] * (self.d + 1)
                lower[a + 1] = t
                upper[a + 1] = t + 1
                sl = [slice(None)] * (self.d + 1)
                sl[a + 1] = t
                col[tuple(lower)] += s[tuple(sl)]
                col[tuple(upper)] -= s[tuple(sl)]
                cols.append(col.reshape(self.n, -1))
        if not cols:
            return np.zeros((self.n, int(np.prod(shape)), 0))
        return np.stack(cols, axis=-1)

    def label_jacobian(self, cuts, onehot) -> np.ndarray:
        """``out[:, color, t]`` = derivative of color masses by flat cut ``t``."""
        return np.einsum("npt,pc->nct", self.jacobian(cuts), onehot)


class _Kernel1D(_Kernel):
    """Interval specialisation: masses from the cumulative distribution."""

    def __init__(self, measures: MeasureSet):
        super().__init__(measures)
        self.grid = self.grids[0]
        self.dens = self.values.reshape(self.n, -1)
        widths = np.diff(self.grid)
        self.cum = np.concatenate(
            (np.zeros((self.n, 1)), np.cumsum(self.dens * widths, axis=1)), axis=1
        )

    def _cells(self, x):
        cell = np.searchsorted(self.grid, x, side="right") - 1
        return np.minimum(np.maximum(cell, 0), self.grid.size - 2)

    def masses(self, cuts) -> np.ndarray:
        self.evaluations += 1
        edges = np.concatenate(([0.0], cuts[0], [1.0]))
        cell = self._cells(edges)
        cdf = self.cum[:, cell] + self.dens[:, cell] * (edges - self.grid[cell])
        return np.diff(cdf, axis=1)

    def jacobian(self, cuts) -> np.ndarray:
        self.evaluations += 1
        c = cuts[0]
        s = self.dens[:, self._cells(c)]
        out = np.zeros((self.n, c.size + 1, c.size))
        t = np.arange(c.size)
        out[:, t, t] = s
        out[:, t + 1, t] = -s
        return out

    def label_jacobian(self, cuts, onehot) -> np.ndarray:
        # a cut only moves mass between its two neighbouring pieces
        self.evaluations += 1
        s = self.dens[:, self._cells(cuts[0])]
        return s[:, None, :] * (onehot[:-1] - onehot[1:]).T[None, :, :]


def _make_kernel(measures: MeasureSet) -> _Kernel:
    return _Kernel1D(measures) if measures.dimension == 1 else _Kernel(measures)


def _split(flat: np.ndarray, m) -> list:
    if len(m) == 1:
        return [np.sort(np.minimum(np.maximum(flat, 0.0), 1.0))]
    out, start = [], 0
    for count in m:
        out.append(np.sort(np.clip(flat[start:start + count], 0.0, 1.0)))
        start += count
    return out


def _residual(masses: np.ndarray, labels: np.ndarray, k: int) -> np.ndarray:
    res = np.zeros((masses.shape[0], k))
    np.add.at(res.T, labels, masses.T)
    return res - 1.0 / k


# -- local searches ---------------------------------------------------------


def _descend_labels(masses, labels, k, rng, config, max_sweeps=60):
    """Steepest descent on the squared residual with recolor and swap moves.

    Once stuck, a few annealed random moves perturb the labeling and the
    descent resumes; the best labeling seen is returned.
    """
    labels = labels.copy()
    pieces = masses.shape[1]
    p = masses.T
    norms = np.einsum("ij,ij->i", p, p)
    diff_norms = norms[:, None] + norms[None, :] - 2 * p @ p.T
    res = _residual(masses, labels, k)
    best = labels.copy()
    best_score = residual_norm(res)
    temperature = config.initial_temperature
    ar = np.arange(pieces)
    for _ in range(max_sweeps):
        q = p @ res  # q[c, b] = p_c . M_b
        own = q[ar, labels]
        recolor = 2 * (q - own[:, None]) + 2 * norms[:, None]
        recolor[ar, labels] = np.inf
        swap = 2 * ((q[:, labels].T - own[:, None]) + (q[:, labels] - own[None, :])) + 2 * diff_norms
        swap[labels[:, None] == labels[None, :]] = np.inf
        c, b = np.unravel_index(np.argmin(recolor), recolor.shape)
        c1, c2 = np.unravel_index(np.argmin(swap), swap.shape)
        if min(recolor[c, b], swap[c1, c2]) < -1e-18:
            if recolor[c, b] <= swap[c1, c2]:
                res[:, labels[c]] -= p[c]
                res[:, b] += p[c]
                labels[c] = b
            else:
                a1, a2 = labels[c1], labels[c2]
                delta = p[c1] - p[c2]
                res[:, a1] -= delta
                res[:, a2] += delta
                labels[c1], labels[c2] = a2, a1
            score = residual_norm(res)
            if score < best_score:
                best_score, best = score, labels.copy()
            continue
        if temperature < 1e-6 * config.initial_temperature:
            break
        # annealed perturbation: random recolor accepted by Metropolis rule
        c = int(rng.integers(pieces))
        b = int(rng.integers(k - 1))
        b = b + (b >= labels[c])
        delta_e = recolor[c, b] if np.isfinite(recolor[c, b]) else 0.0
        if delta_e <= 0 or rng.random() < math.exp(-delta_e / max(temperature, 1e-300)):
            res[:, labels[c]] -= p[c]
            res[:, b] += p[c]
            labels[c] = b
        temperature *= config.cooling
    return best, best_score


def _pattern_search(kernel, x, m, labels, k, config, evals_left, shrinks=4):
    """Coordinate pattern search on the max-norm residual."""
    def score(v):
        return residual_norm(_residual(kernel.masses(_split(v, m)), labels, k))

    x = np.concatenate(_split(x, m))
    cur = score(x)
    step = config.pattern_step
    floor = step * config.pattern_shrink ** shrinks
    used = 1
    while step > floor and used < evals_left and cur > config.tolerance:
        improved = False
        for t in range(x.size):
            for sign in (1.0, -1.0):
                trial = x.copy()
                trial[t] = trial[t] + sign * step
                trial = np.concatenate(_split(trial, m))
                val = score(trial)
                used += 1
                if val < cur:
                    x, cur, improved = trial, val, True
                    break
        if not improved:
            step *= config.pattern_shrink
    return x, cur, used


def _newton(kernel, x, m, labels, k, tol, max_iter=60):
    """Damped Gauss-Newton on the residual matrix with labels held fixed."""
    n = kernel.n
    onehot = np.zeros((labels.size, k))
    onehot[np.arange(labels.size), labels] = 1.0
    parts = _split(x, m)
    x = np.concatenate(parts)
    r = kernel.masses(parts) @ onehot - 1.0 / k
    cur = float(np.abs(r).max())
    if x.size == 0:
        return x, cur
    eye = np.eye(x.size)
    sq = float(np.sum(r * r))
    lam = 1e-10
    slow = 0
    for _ in range(max_iter):
        if cur <= tol or slow >= 3:
            break
        jm = kernel.label_jacobian(_split(x, m), onehot).reshape(n * k, -1)
        jtj = jm.T @ jm
        g = jm.T @ r.ravel()
        accepted = False
        for _ in range(8):
            try:
                step = np.linalg.solve(jtj + lam * eye, -g)
            except np.linalg.LinAlgError:
                lam = max(lam * 100, 1e-10)
                continue
            parts = _split(x + step, m)
            trial = np.concatenate(parts)
            rt = kernel.masses(parts) @ onehot - 1.0 / k
            st = float(np.sum(rt * rt))
            if st < sq:
                # on a piecewise linear residual a good basin converges in a few
                # steps; a long run of tiny gains means the labels are wrong
                slow = slow + 1 if st > 0.98 * sq else 0
                x, r, sq = trial, rt, st
                cur = float(np.abs(r).max())
                lam = max(lam / 100, 1e-12)
                accepted = True
                break
            lam = max(lam * 100, 1e-10)
        if not accepted:
            break
    return x, cur


# -- base case --------------------------------------------------------------


def _initial_cuts(m, rng, equispaced: bool) -> np.ndarray:
    parts = []
    for count in m:
        if equispaced:
            parts.append(np.arange(1, count + 1) / (count + 1))
        else:
            gaps = rng.dirichlet(np.ones(count + 1))
            parts.append(np.cumsum(gaps)[:-1])
    return np.concatenate(parts) if parts else np.zeros(0)


def _neighbors(labels, x, k, rng):
    """Candidate ``(labels, start cuts)`` moves in random order.

    Single-box recolors, a sample of box-pair color swaps, and for every cut a
    jump to a uniformly random position with the labels kept.
    """
    pieces = labels.size
    moves = [(c, b) for c in range(pieces) for b in range(k) if b != labels[c]]
    pairs = [(c1, c2) for c1 in range(pieces) for c2 in range(c1 + 1, pieces)
             if labels[c1] != labels[c2]]
    if len(pairs) > pieces:
        pairs = [pairs[i] for i in rng.choice(len(pairs), size=pieces, replace=False)]
    out = []
    for c, b in moves:
        nb = labels.copy()
        nb[c] = b
        out.append((nb, x))
    for c1, c2 in pairs:
        nb = labels.copy()
        nb[c1], nb[c2] = labels[c2], labels[c1]
        out.append((nb, x))
    for t in range(x.size):
        y = x.copy()
        y[t] = rng.random()
        out.append((labels, y))
    return [out[i] for i in rng.permutation(len(out))]


def _run_restart(kernel, k, m, config, index):
    """One restart; returns ``(residual, cuts_flat, labels)``.

    The state is a labeling together with the cut positions that best fit it.
    A neighbouring labeling is scored by re-fitting the cuts from the current
    position; improvements are always taken, worse neighbours are accepted by
    the Metropolis rule while the temperature cools.
    """
    rng = np.random.default_rng(np.random.SeedSequence([config.seed, index]))
    x = _initial_cuts(m, rng, equispaced=(index == 0))
    pieces = int(np.prod([c + 1 for c in m]))
    start = kernel.evaluations
    labels, _ = _descend_labels(kernel.masses(_split(x, m)), rng.integers(k, size=pieces),
                                k, rng, config)
    x, cur = _newton(kernel, x, m, labels, k, config.tolerance)
    if cur > config.tolerance:
        left = config.budget - (kernel.evaluations - start)
        x, cur, _ = _pattern_search(kernel, x, m, labels, k, config, min(left, 50 * max(x.size, 1)))
        x, cur = _newton(kernel, x, m, labels, k, config.tolerance)
    best = (cur, x.copy(), labels.copy())
    temperature = config.initial_temperature
    stalled = 0
    while cur > config.tolerance and kernel.evaluations - start < config.budget:
        moved = False
        scored = []
        for nb, x0 in _neighbors(labels, x, k, rng):
            if kernel.evaluations - start >= config.budget:
                break
            y, val = _newton(kernel, x0, m, nb, k, config.tolerance, max_iter=25)
            scored.append((val, y, nb))
            if val < cur:
                x, cur, labels, moved = y, val, nb, True
                break
        if cur < best[0]:
            best = (cur, x.copy(), labels.copy())
            stalled = 0
        else:
            stalled += 1
            if stalled >= config.stall_rounds:
                break
        if moved or not scored:
            continue
        val, y, nb = scored[int(rng.integers(len(scored)))]
        if rng.random() < math.exp(-(val - cur) / max(temperature, 1e-300)):
            x, cur, labels = y, val, nb
        temperature *= config.cooling
    return best


def _restart_task(args):
    measures, k, m, config, index = args
    return _run_restart(_make_kernel(measures), k, m, config, index)


def _as_division(k, m, x, labels) -> Division:
    cuts = [c.tolist() for c in _split(np.asarray(x, dtype=float), m)]
    return Division.make(k, cuts, (np.asarray(labels) + 1).tolist())


def _check_instance(measures: MeasureSet, k: int, m, config: SolverConfig) -> tuple:
    m = tuple(int(x) for x in m)
    if len(m) != measures.dimension:
        raise ShapeMismatch(
            f"{len(m)} cut counts for a {measures.dimension}-dimensional instance"
        )
    if k < 2 or any(x < 0 for x in m):
        raise NecklaceError("need k >= 2 and nonnegative cut counts")
    need = len(measures) * (k - 1)
    if sum(m) != need:
        raise BudgetMismatch(f"cut counts sum to {sum(m)}, need n(k-1) = {need}")
    for mu in measures:
        if config.probability and np.any(mu.values < 0):
            raise NecklaceError("negative density in probability mode")
        if abs(mu.total_mass() - 1.0) > 1e-9:
            raise NecklaceError("every measure must have total mass 1")
    return m


def solve_base(measures: MeasureSet, k: int, m, config: SolverConfig = SolverConfig()) -> Division:
    """Multi-start search for a fair ``k``-division with ``m[i]`` cuts on axis ``i``."""
    m = _check_instance(measures, k, m, config)
    kernel = _make_kernel(measures)
    best = (np.inf, None, None)

    def accept(result):
        cur, x, labels = result
        division = _as_division(k, m, x, labels)
        report = verify(division, measures, config.tolerance, m)
        return division, report

    if config.workers > 1:
        tasks = [(measures, k, m, config, i) for i in range(config.restarts)]
        with ProcessPoolExecutor(config.workers) as pool:
            results = list(pool.map(_restart_task, tasks))
        for i, result in enumerate(results):
            if result[0] <= config.tolerance:
                division, report = accept(result)
                if report.passed:
                    return division
            if result[0] < best[0]:
                best = result
    else:
        for i in range(config.restarts):
            result = _run_restart(kernel, k, m, config, i)
            log.debug("restart %d residual %.3g", i, result[0])
            if result[0] <= config.tolerance:
                division, report = accept(result)
                if report.passed:
                    return division
            if result[0] < best[0]:
                best = result
    best_div = None if best[1] is None else _as_division(k, m, best[1], best[2])
    raise SearchExhausted(
        f"no division within {config.tolerance:g} after {config.restarts} restarts "
        f"(best residual {best[0]:.3g})",
        best=best_div,
        best_residual=float(best[0]),
    )


# -- composite k ------------------------------------------------------------


def _outer_index(edges_cuts, point_axis_values) -> np.ndarray:
    return np.searchsorted(np.asarray(edges_cuts, dtype=float), point_axis_values, side="right")


def restrict_measure(density: GridDensity, cuts: CutConfiguration, region, scale: float) -> GridDensity:
    """``scale * density`` restricted to a union of elementary boxes of ``cuts``.

    The result lives on the original breakpoints refined by the cut positions
    and is renormalized; a region carrying (almost) no mass gets the uniform
    density on the region instead.
    """
    if cuts.dimension != density.dimension:
        raise ShapeMismatch("cut configuration and density dimensions differ")
    region = {tuple(int(i) for i in j) for j in region}
    grids = [
        np.unique(np.concatenate([density.breakpoints[a], np.asarray(cuts.cuts[a], dtype=float)]))
        for a in range(density.dimension)
    ]
    mids = [(g[:-1] + g[1:]) / 2 for g in grids]
    src = [np.searchsorted(density.breakpoints[a], mids[a], side="right") - 1
           for a in range(density.dimension)]
    box = [_outer_index(cuts.cuts[a], mids[a]) for a in range(density.dimension)]
    inside = np.zeros(tuple(g.size - 1 for g in grids), dtype=bool)
    for j in np.ndindex(inside.shape):
        inside[j] = tuple(int(box[a][j[a]]) for a in range(len(j))) in region
    vol = np.ones(())
    for g in grids:
        vol = np.multiply.outer(vol, np.diff(g))
    if float(np.sum(vol[inside])) <= 0.0:
        raise EmptyRegion("region has zero volume")
    values = np.where(inside, scale * density.grid_values()[np.ix_(*src)], 0.0)
    total = float(np.sum(values * vol))
    if abs(total) < NULL_MASS:
        values = inside.astype(float)
        total = float(np.sum(values * vol))
    return GridDensity(tuple(grids), (values / total).ravel())


def _merge_axis(outer_cuts, inner_cuts_list):
    """Merged cut list plus per-piece piece indices into each source."""
    items = [(x, 0, i) for i, x in enumerate(outer_cuts)]
    for src, cuts in enumerate(inner_cuts_list, start=1):
        items += [(x, src, i) for i, x in enumerate(cuts)]
    items.sort()
    sources = len(inner_cuts_list) + 1
    index = np.zeros((len(items) + 1, sources), dtype=int)
    for b, (_, src, _) in enumerate(items, start=1):
        index[b] = index[b - 1]
        index[b, src] += 1
    return [x for x, _, _ in items], index


def compose(outer: Division, inners, plan: FactorPlan) -> Division:
    """Combine an outer ``k1``-division with ``k1`` inner ``k2``-divisions."""
    inners = list(inners)
    if outer.k != plan.k1 or len(inners) != plan.k1:
        raise ShapeMismatch("outer color count or number of inner divisions differs from plan")
    if outer.cuts.counts != plan.outer:
        raise ShapeMismatch("outer cut counts differ from plan")
    for j, inner in enumerate(inners):
        if inner.k != plan.k2 or inner.cuts.counts != plan.inner[j]:
            raise ShapeMismatch(f"inner division {j + 1} does not match plan")
        if inner.dimension != outer.dimension:
            raise ShapeMismatch("dimensions differ")
    d = outer.dimension
    merged, index = [], []
    for a in range(d):
        cuts, idx = _merge_axis(outer.cuts.cuts[a], [inn.cuts.cuts[a] for inn in inners])
        merged.append(cuts)
        index.append(idx)
    shape = tuple(len(c) + 1 for c in merged)
    labels = []
    for cell in np.ndindex(shape):
        j1 = outer.labeling[tuple(index[a][cell[a], 0] for a in range(d))]
        inner = inners[j1 - 1]
        j2 = inner.labeling[tuple(index[a][cell[a], j1] for a in range(d))]
        labels.append((j1 - 1) * plan.k2 + j2)
    return Division.make(plan.k1 * plan.k2, merged, labels)


def _polish(measures, division: Division, tol: float) -> Division:
    kernel = _make_kernel(measures)
    m = division.cuts.counts
    x = np.concatenate([np.asarray(c, dtype=float) for c in division.cuts.cuts]) if sum(m) else np.zeros(0)
    labels = np.asarray(division.labels) - 1
    x, _ = _newton(kernel, x, m, labels, division.k, tol * 1e-6)
    return _as_division(division.k, m, x, labels)


def solve(measures: MeasureSet, k: int, m, config: SolverConfig = SolverConfig()) -> Division:
    """Fair division of ``measures`` among ``k`` thieves with ``m[i]`` cuts on axis ``i``."""
    m = _check_instance(measures, k, m, config)
    p = smallest_prime_factor(k)
    if p == k:
        return solve_base(measures, k, m, config)
    k1, k2 = p, k // p
    plan = allocate_cut_budgets(len(measures), measures.dimension, k1, k2, m)
    tol = max(config.tolerance, config.composite_tolerance)
    failure = None
    # A fair outer split can leave an inner problem that the heuristic search
    # misses; another outer split (fresh seed) usually avoids it.
    for attempt in range(config.composite_attempts):
        cfg = replace(config, seed=config.seed + 7919 * attempt)
        try:
            division, report = _solve_composite(measures, m, plan, cfg, tol)
        except SearchExhausted as exc:
            log.debug("composite attempt %d failed: %s", attempt, exc)
            failure = exc
            continue
        if report.passed:
            return division
        failure = SearchExhausted(
            f"composed division misses tolerance {tol:g} (residual {report.residual:.3g})",
            best=division,
            best_residual=report.residual,
        )
    raise failure


def _solve_composite(measures, m, plan: FactorPlan, config: SolverConfig, tol: float):
    outer = solve(measures, plan.k1, plan.outer, config)
    inners = []
    for j in range(1, plan.k1 + 1):
        region = [idx for idx, lab in outer.boxes() if lab == j]
        restricted = MeasureSet(
            tuple(restrict_measure(mu, outer.cuts, region, plan.k1) for mu in measures)
        )
        inners.append(solve(restricted, plan.k2, plan.inner[j - 1], config))
    division = compose(outer, inners, plan)
    report = verify(division, measures, tol, m)
    if report.residual > config.tolerance:
        polished = _polish(measures, division, config.tolerance)
        polished_report = verify(polished, measures, tol, m)
        if polished_report.residual < report.residual:
            division, report = polished, polished_report
    return division, report


# -- discrete necklaces -----------------------------------------------------


@dataclass(frozen=True)
class DiscreteSplit:
    cuts: tuple  # boundary positions p: a cut between beads p and p+1 (1-based)
    thieves: tuple  # thief (1..k) of each piece, left to right

    def shares(self, colors, k: int):
        bounds = (0,) + self.cuts + (len(colors),)
        out = [dict() for _ in range(k)]
        for piece, thief in enumerate(self.thieves):
            for c in colors[bounds[piece]:bounds[piece + 1]]:
                out[thief - 1][c] = out[thief - 1].get(c, 0) + 1
        return out

    def to_division(self, total: int, k: int) -> Division:
        return Division.make(k, [[p / total for p in self.cuts]], list(self.thieves))


def solve_discrete_1d(beads, k: int) -> DiscreteSplit:
    """Exhaustive search for a fair split of a bead necklace using the fewest cuts.

    Cut sets are tried by increasing size and then lexicographically; piece
    colorings are explored depth first with thieves introduced in order of
    first use, pruning as soon as a thief holds too many beads of a color.
    """
    colors = parse_beads(beads)
    n = max(colors)
    total = len(colors)
    counts = [colors.count(c) for c in range(1, n + 1)]
    if k < 2:
        raise NecklaceError("need at least two thieves")
    if any(c % k for c in counts):
        raise NotDivisible(f"color counts {counts} are not all divisible by k={k}")
    budget = n * (k - 1)
    if math.comb(total - 1, min(budget, total - 1)) * k ** (budget + 1) > DISCRETE_LIMIT:
        raise TooLarge(f"necklace of {total} beads is too large for exhaustive search")
    share = [c // k for c in counts]

    # prefix[p][c] = beads of color c among the first p
    prefix = [[0] * n]
    for col in colors:
        row = prefix[-1][:]
        row[col - 1] += 1
        prefix.append(row)

    def search(start, cuts_left, used, held, cuts, thieves):
        # choose the end of the piece starting at bead ``start``
        ends = [total] if cuts_left == 0 else range(start + 1, total - cuts_left + 1)
        for end in ends:
            piece = [prefix[end][c] - prefix[start][c] for c in range(n)]
            for thief in range(min(used + 1, k)):
                new = [h + q for h, q in zip(held[thief], piece)]
                if any(x > s for x, s in zip(new, share)):
                    continue
                held2 = held[:thief] + [new] + held[thief + 1:]
                if end == total:
                    if all(h == share for h in held2):
                        return tuple(cuts), tuple(thieves + [thief + 1])
                    continue
                found = search(end, cuts_left - 1, max(used, thief + 1), held2,
                               cuts + [end], thieves + [thief + 1])
                if found:
                    return found
        return None

    for ncuts in range(0, min(budget, total - 1) + 1):
        found = _search_exact(search, ncuts, n, k)
        if found:
            return DiscreteSplit(*found)
    raise AssertionError(
        f"no fair split with at most {budget} cuts, although one always exists"
    )


def _search_exact(search, ncuts, n, k):
    # ``search`` places exactly ``ncuts`` cuts; pieces ending early are cut points
    return search(0, ncuts, 0, [[0] * n for _ in range(k)], [], [])

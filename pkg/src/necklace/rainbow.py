"""Rainbow complexes: copies of a polytope with colored vertices, glued along faces.

A cell is a pair ``(F, h)`` of a face ``F`` of the base polytope and a coloring
``h`` of the vertices of ``F`` by ``1..k``.  The facets of ``(F, h)`` are the
pairs ``(G, h|G)`` for facets ``G`` of ``F``.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from . import gf2
from .errors import FixedCellFound, InvalidParameter, Mismatch, NotPrime, TooLarge
from .polytope import FaceLattice, product_of_simplices
from .solver import is_prime

MAX_CELLS = 2_000_000
MAX_TOP_CELLS = 10**6


def cell_count(base: FaceLattice, k: int) -> int:
    return sum(k ** len(f.vertices) for f in base.faces)


@dataclass(eq=False)
class RainbowComplex:
    base: FaceLattice
    k: int
    cells: list  # (face id, coloring tuple over the face's sorted vertices)
    dims: list
    index: dict
    facets: list

    @property
    def dimension(self) -> int:
        return self.base.dimension

    def by_dimension(self) -> list:
        groups = [[] for _ in range(self.dimension + 1)]
        for c, dim in enumerate(self.dims):
            groups[dim].append(c)
        return groups

    def counts(self) -> tuple:
        return tuple(len(g) for g in self.by_dimension())

    def alternating_count(self) -> int:
        return sum((-1) ** i * n for i, n in enumerate(self.counts()))

    def top_cells(self) -> list:
        return [c for c, (fid, _) in enumerate(self.cells) if fid == self.base.top]

    def is_pure(self) -> bool:
        """Every cell lies in the closure of some top-dimensional cell."""
        seen = set(self.top_cells())
        stack = list(seen)
        while stack:
            c = stack.pop()
            for f in self.facets[c]:
                if f not in seen:
                    seen.add(f)
                    stack.append(f)
        return len(seen) == len(self.cells)


def build(base: FaceLattice, k: int, max_cells: int = MAX_CELLS) -> RainbowComplex:
    if k < 1:
        raise InvalidParameter("k must be positive")
    total = cell_count(base, k)
    if total > max_cells:
        raise TooLarge(f"complex would have {total} cells (limit {max_cells})")
    cells, dims, index = [], [], {}
    for f in base.faces:
        for h in itertools.product(range(1, k + 1), repeat=len(f.vertices)):
            index[(f.id, h)] = len(cells)
            cells.append((f.id, h))
            dims.append(f.dim)
    facets = []
    for fid, h in cells:
        verts = base.faces[fid].vertices
        pos = {v: i for i, v in enumerate(verts)}
        out = []
        for gid in base.facets[fid]:
            restricted = tuple(h[pos[v]] for v in base.faces[gid].vertices)
            out.append(index[(gid, restricted)])
        facets.append(tuple(out))
    return RainbowComplex(base, k, cells, dims, index, facets)


def euler_direct(base: FaceLattice, k: int) -> int:
    """Alternating count of cells, straight from the face list."""
    return sum((-1) ** f.dim * k ** len(f.vertices) for f in base.faces)


def euler_paper_formula(fvec, k: int) -> int:
    """``f_0 k - f_1 k^2 + ... + (-1)^(d-1) f_(d-1) k^d + (-1)^d k^(d+1)``.

    ``fvec`` is the boundary f-vector ``(f_0, ..., f_(d-1))``.
    """
    fvec = list(fvec)
    d = len(fvec)
    return sum((-1) ** i * f * k ** (i + 1) for i, f in enumerate(fvec)) + (-1) ** d * k ** (d + 1)


@dataclass
class EulerReport:
    polytope: str
    k: int
    direct: int
    formula: int
    simplicial: bool
    agree: bool = field(init=False)

    def __post_init__(self):
        self.agree = self.direct == self.formula

    def to_json(self) -> dict:
        note = None
        if not self.agree:
            note = ("cell count and the f-vector expansion differ; they coincide only "
                    "when the polytope is a simplex (open question, not a failure)")
        return {
            "polytope": self.polytope,
            "k": self.k,
            "euler_direct": self.direct,
            "euler_formula": self.formula,
            "simplicial": self.simplicial,
            "agree": self.agree,
            "note": note,
        }


def euler_report(base: FaceLattice, k: int) -> EulerReport:
    return EulerReport(base.name, k, euler_direct(base, k),
                       euler_paper_formula(base.f_vector[:-1], k), base.is_simplicial())


@dataclass
class Homology:
    betti: list  # unreduced, degrees 0..dim

    @property
    def reduced(self) -> list:
        out = list(self.betti)
        if out:
            out[0] -= 1
        return out

    def euler(self) -> int:
        return sum((-1) ** i * b for i, b in enumerate(self.betti))


def homology_mod2(complex_: RainbowComplex, max_cells: int = MAX_CELLS) -> Homology:
    if len(complex_.cells) > max_cells:
        raise TooLarge(f"{len(complex_.cells)} cells exceed the limit {max_cells}")
    return Homology(gf2.betti_numbers(complex_.by_dimension(), lambda c: complex_.facets[c]))


def _face_homology(base: FaceLattice, face_ids) -> Homology:
    """Homology of the subcomplex of ``base`` made of the given closed faces."""
    ids = set(face_ids)
    if not ids:
        return Homology([])
    top = max(base.faces[i].dim for i in ids)
    groups = [[i for i in sorted(ids) if base.faces[i].dim == dim] for dim in range(top + 1)]
    return Homology(gf2.betti_numbers(groups, lambda i: base.facets[i]))


def _acyclic(h: Homology) -> bool:
    return bool(h.betti) and all(b == 0 for b in h.reduced)


@dataclass
class ShellingStep:
    labeling: tuple
    kind: str  # "first", "a" or "b"
    support_face: int | None


@dataclass
class ShellingReport:
    polytope: str
    k: int
    steps: list
    sphere_count: int
    failures: list

    @property
    def ok(self) -> bool:
        return not self.failures

    def kinds(self) -> dict:
        out = {"first": 0, "a": 0, "b": 0}
        for s in self.steps:
            out[s.kind] += 1
        return out

    def to_json(self, include_steps: bool = False) -> dict:
        out = {
            "polytope": self.polytope,
            "k": self.k,
            "top_cells": len(self.steps),
            "kinds": self.kinds(),
            "sphere_count": self.sphere_count,
            "verified": self.ok,
            "failures": self.failures,
        }
        if include_steps:
            out["steps"] = [
                {"labeling": list(s.labeling), "kind": s.kind, "support_face": s.support_face}
                for s in self.steps
            ]
        return out


def lex_shelling_check(base: FaceLattice, k: int, max_top_cells: int = MAX_TOP_CELLS) -> ShellingReport:
    """Classify every top cell of the lexicographic order and verify its attachment set.

    For each coloring ``g`` the attachment set ``L_g`` (the part of the cell
    already covered by earlier cells) is computed three ways and compared:

    * from the rule that a face ``F`` is covered iff it omits a vertex where
      ``g`` is not 1;
    * as the complement in the boundary of the open star of the face spanned
      by those vertices;
    * by brute force: ``F`` is covered iff the lexicographically least top
      cell containing ``(F, g|F)`` precedes ``g``.
    """
    nv = base.num_vertices
    if k ** nv > max_top_cells:
        raise TooLarge(f"{k ** nv} top cells exceed the limit {max_top_cells}")
    proper = base.proper_faces
    boundary = frozenset(f.id for f in proper)
    vsets = {f.id: frozenset(f.vertices) for f in base.faces}

    support_cache: dict = {}
    a_cache: dict = {}
    steps, failures, spheres = [], [], 0
    for g in itertools.product(range(1, k + 1), repeat=nv):
        s = frozenset(v for v in range(nv) if g[v] != 1)
        by_omission = frozenset(f.id for f in proper if not s <= vsets[f.id])
        brute = frozenset(
            f.id for f in proper
            if tuple(g[v] if v in vsets[f.id] else 1 for v in range(nv)) < g
        )
        if not s:
            steps.append(ShellingStep(g, "first", None))
            if by_omission or brute:
                failures.append(f"{g}: first cell has a nonempty attachment set")
            continue
        if s not in support_cache:
            support_cache[s] = base.minimal_face_containing(s).id
        fs = support_cache[s]
        predicted = frozenset(f.id for f in proper if not vsets[fs] <= vsets[f.id])
        if not by_omission == predicted == brute:
            failures.append(f"{g}: attachment set differs from boundary minus open star")
        if fs == base.top:
            kind = "b"
            spheres += 1
            if by_omission != boundary:
                failures.append(f"{g}: type (b) attachment is not the whole boundary")
        else:
            kind = "a"
            if fs not in a_cache:
                a_cache[fs] = bool(by_omission) and _acyclic(_face_homology(base, by_omission))
            if not a_cache[fs]:
                failures.append(f"{g}: type (a) attachment is empty, disconnected or not acyclic")
        steps.append(ShellingStep(g, kind, fs))
    return ShellingReport(base.name, k, steps, spheres, failures)


def sphere_count_crosscheck(base: FaceLattice, k: int, max_cells: int = MAX_CELLS) -> dict:
    """Shelling sphere count vs top Betti number vs Euler characteristic."""
    cx = build(base, k, max_cells)
    hom = homology_mod2(cx)
    shell = lex_shelling_check(base, k)
    d = base.dimension
    chi = euler_direct(base, k)
    reduced = hom.reduced
    from_euler = (-1) ** d * (chi - 1)
    report = {
        "polytope": base.name,
        "k": k,
        "sphere_count": shell.sphere_count,
        "top_betti": reduced[d],
        "from_euler": from_euler,
        "reduced_betti": reduced,
        "shelling_verified": shell.ok,
    }
    if not shell.sphere_count == reduced[d] == from_euler:
        raise Mismatch(f"sphere counts disagree: {report}")
    if any(reduced[i] for i in range(d)):
        raise Mismatch(f"lower reduced Betti numbers do not vanish: {report}")
    return report


def _shift(h, p):
    return tuple(c % p + 1 for c in h)


def zp_action_check(complex_: RainbowComplex, p: int) -> dict:
    """Check that cyclically shifting all colors is a free cellular action."""
    if not is_prime(p):
        raise NotPrime(f"{p} is not prime")
    if complex_.k != p:
        raise InvalidParameter(f"complex has k={complex_.k}, action needs k=p={p}")
    image = []
    for fid, h in complex_.cells:
        target = complex_.index.get((fid, _shift(h, p)))
        if target is None:
            raise Mismatch(f"shifted cell of {(fid, h)} is not a cell")
        image.append(target)
    for c, t in enumerate(image):
        if t == c:
            raise FixedCellFound(f"cell {complex_.cells[c]} is fixed by the action")
        if {image[f] for f in complex_.facets[c]} != set(complex_.facets[t]):
            raise Mismatch(f"action does not preserve the facets of cell {complex_.cells[c]}")
    seen = [False] * len(image)
    orbits = 0
    for c in range(len(image)):
        if seen[c]:
            continue
        orbits += 1
        size, x = 0, c
        while not seen[x]:
            seen[x] = True
            size += 1
            x = image[x]
        if size != p:
            raise Mismatch(f"orbit of cell {complex_.cells[c]} has size {size}, expected {p}")
    if orbits * p != len(image):
        raise Mismatch("orbit count does not divide the cell count")
    return {"polytope": complex_.base.name, "p": p, "cells": len(image),
            "orbits": orbits, "free": True}


def connectivity_report(m, k: int, max_cells: int = MAX_CELLS) -> dict:
    """Purity, dimension and vanishing of low reduced GF(2) homology for a product of simplices.

    Vanishing homology over GF(2) is necessary for (|m|-1)-connectedness but
    does not certify simple connectivity.
    """
    m = [int(x) for x in m]
    if not m or any(x < 0 for x in m):
        raise InvalidParameter("need a nonempty list of nonnegative simplex dimensions")
    base = product_of_simplices(m)
    cx = build(base, k, max_cells)
    hom = homology_mod2(cx)
    size = sum(m)
    reduced = hom.reduced
    return {
        "m": m,
        "k": k,
        "dimension": cx.dimension,
        "expected_dimension": size,
        "pure": cx.is_pure(),
        "reduced_betti": reduced,
        "low_homology_vanishes": all(b == 0 for b in reduced[:size]),
        "top_betti": reduced[size],
        "scope": "GF(2) homology only; simple connectivity is not certified",
    }

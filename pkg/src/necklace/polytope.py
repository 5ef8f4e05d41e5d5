"""Convex polytopes as purely combinatorial face lattices.

Faces are stored by their vertex sets; the empty face is implicit.  Vertex
order is fixed at construction and is the order used by the lexicographic
shelling in :mod:`necklace.rainbow`.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import networkx as nx

from .errors import InvalidParameter


@dataclass(frozen=True)
class Face:
    id: int
    dim: int
    vertices: tuple


@dataclass(frozen=True, eq=False)
class FaceLattice:
    num_vertices: int
    faces: tuple
    facets: tuple  # facets[i] = ids of the codimension-1 faces of face i
    top: int
    name: str = ""
    _by_vertices: dict = field(init=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "_by_vertices", {f.vertices: f.id for f in self.faces})

    @classmethod
    def from_faces(cls, num_vertices: int, faces, name: str = "") -> "FaceLattice":
        """Build from ``(dim, vertex set)`` pairs; facets are found by containment."""
        ordered = sorted({(int(dim), tuple(sorted(vs))) for dim, vs in faces})
        ordered.sort(key=lambda f: (f[0], f[1]))
        face_objs = tuple(Face(i, dim, vs) for i, (dim, vs) in enumerate(ordered))
        by_dim: dict = {}
        for f in face_objs:
            by_dim.setdefault(f.dim, []).append(f)
        facets = []
        for f in face_objs:
            vs = set(f.vertices)
            facets.append(tuple(g.id for g in by_dim.get(f.dim - 1, []) if vs.issuperset(g.vertices)))
        top_dim = max(f.dim for f in face_objs)
        tops = [f.id for f in face_objs if f.dim == top_dim]
        return cls(num_vertices, face_objs, tuple(facets), tops[0], name)

    @property
    def dimension(self) -> int:
        return self.faces[self.top].dim

    @property
    def f_vector(self) -> tuple:
        counts = [0] * (self.dimension + 1)
        for f in self.faces:
            counts[f.dim] += 1
        return tuple(counts)

    @property
    def proper_faces(self) -> list:
        return [f for f in self.faces if f.id != self.top]

    def face_id(self, vertices) -> int | None:
        return self._by_vertices.get(tuple(sorted(vertices)))

    def is_simplicial(self) -> bool:
        return all(len(f.vertices) == f.dim + 1 for f in self.proper_faces)

    def minimal_face_containing(self, vertices) -> Face:
        """Smallest face whose vertex set contains ``vertices``."""
        target = set(vertices)
        best = None
        for f in self.faces:
            if target.issubset(f.vertices) and (best is None or len(f.vertices) < len(best.vertices)):
                best = f
        return best

    def without_face(self, face_id: int) -> "FaceLattice":
        kept = [(f.dim, f.vertices) for f in self.faces if f.id != face_id]
        return FaceLattice.from_faces(self.num_vertices, kept, self.name + "-minus-face")

    def hasse_diagram(self) -> nx.DiGraph:
        g = nx.DiGraph()
        for f in self.faces:
            g.add_node(f.id, dim=f.dim)
        for f in self.faces:
            for sub in self.facets[f.id]:
                g.add_edge(sub, f.id)
        return g


def simplex(nu: int) -> FaceLattice:
    if nu < 0:
        raise InvalidParameter("simplex dimension must be nonnegative")
    faces = [
        (r - 1, vs)
        for r in range(1, nu + 2)
        for vs in itertools.combinations(range(nu + 1), r)
    ]
    return FaceLattice.from_faces(nu + 1, faces, f"simplex:{nu}")


def point() -> FaceLattice:
    return simplex(0)


def cube(d: int) -> FaceLattice:
    if d < 1:
        raise InvalidParameter("cube dimension must be at least 1")
    verts = list(itertools.product((0, 1), repeat=d))
    faces = []
    for pattern in itertools.product((0, 1, None), repeat=d):
        vs = [i for i, v in enumerate(verts)
              if all(p is None or p == x for p, x in zip(pattern, v))]
        faces.append((sum(p is None for p in pattern), vs))
    return FaceLattice.from_faces(len(verts), faces, f"cube:{d}")


def crosspolytope(d: int) -> FaceLattice:
    """Vertices ordered ``+e_1, -e_1, +e_2, -e_2, ...``."""
    if d < 1:
        raise InvalidParameter("crosspolytope dimension must be at least 1")
    faces = [(d, range(2 * d))]
    for choice in itertools.product((None, 0, 1), repeat=d):
        vs = [2 * a + c for a, c in enumerate(choice) if c is not None]
        if vs:
            faces.append((len(vs) - 1, vs))
    return FaceLattice.from_faces(2 * d, faces, f"xpoly:{d}")


def polygon(g: int) -> FaceLattice:
    if g < 3:
        raise InvalidParameter("a polygon needs at least 3 vertices")
    faces = [(0, [i]) for i in range(g)]
    faces += [(1, [i, (i + 1) % g]) for i in range(g)]
    faces.append((2, range(g)))
    return FaceLattice.from_faces(g, faces, f"polygon:{g}")


def product(p: FaceLattice, q: FaceLattice) -> FaceLattice:
    """Cartesian product; vertex ``(i, j)`` gets id ``i * |V(q)| + j``."""
    nq = q.num_vertices
    pairs = [(fp, fq) for fp in p.faces for fq in q.faces]
    index = {(fp.id, fq.id): i for i, (fp, fq) in enumerate(pairs)}
    faces, facets = [], []
    for i, (fp, fq) in enumerate(pairs):
        vs = tuple(sorted(a * nq + b for a in fp.vertices for b in fq.vertices))
        faces.append(Face(i, fp.dim + fq.dim, vs))
        facets.append(
            tuple(index[(s, fq.id)] for s in p.facets[fp.id])
            + tuple(index[(fp.id, s)] for s in q.facets[fq.id])
        )
    return FaceLattice(p.num_vertices * nq, tuple(faces), tuple(facets),
                       index[(p.top, q.top)], f"prod:{p.name},{q.name}")


def product_of_simplices(dims) -> FaceLattice:
    dims = list(dims)
    if not dims:
        raise InvalidParameter("need at least one factor")
    lattice = simplex(dims[0])
    for nu in dims[1:]:
        lattice = product(lattice, simplex(nu))
    return lattice


def is_isomorphic(p: FaceLattice, q: FaceLattice) -> bool:
    match = nx.algorithms.isomorphism.categorical_node_match("dim", None)
    return nx.is_isomorphic(p.hasse_diagram(), q.hasse_diagram(), node_match=match)


@dataclass
class ValidationReport:
    violations: list

    @property
    def ok(self) -> bool:
        return not self.violations


def validate(lattice: FaceLattice) -> ValidationReport:
    bad = []
    d = lattice.dimension
    faces = lattice.faces
    vsets = [frozenset(f.vertices) for f in faces]
    everything = frozenset(range(lattice.num_vertices))

    tops = [f for f in faces if f.dim == d]
    if len(tops) != 1:
        bad.append(f"expected one top face of dimension {d}, found {len(tops)}")
    if vsets[lattice.top] != everything:
        bad.append("top face does not contain every vertex")
    vertex_faces = {f.vertices[0] for f in faces if f.dim == 0 and len(f.vertices) == 1}
    if vertex_faces != set(everything):
        bad.append("not every vertex is a 0-face")

    for f in faces:
        expected = {g.id for g in faces if g.dim == f.dim - 1 and vsets[g.id] < vsets[f.id]}
        if expected != set(lattice.facets[f.id]):
            bad.append(f"facet relation of face {f.id} is inconsistent")

    for f, g in itertools.combinations(faces, 2):
        common = vsets[f.id] & vsets[g.id]
        if common and lattice.face_id(common) is None:
            bad.append(f"faces {f.id} and {g.id} meet in {sorted(common)}, which is not a face")

    for f in faces:
        if f.dim == 1 and len(f.vertices) != 2:
            bad.append(f"edge {f.id} does not have exactly 2 vertices")
    for lo in faces:
        for hi in faces:
            if hi.dim == lo.dim + 2 and vsets[lo.id] < vsets[hi.id]:
                middle = [g for g in faces if g.dim == lo.dim + 1
                          and vsets[lo.id] < vsets[g.id] < vsets[hi.id]]
                if len(middle) != 2:
                    bad.append(
                        f"diamond property fails between faces {lo.id} and {hi.id} "
                        f"({len(middle)} intermediate faces)"
                    )

    fv = lattice.f_vector
    euler = sum((-1) ** i * fv[i] for i in range(d))
    if euler != 1 - (-1) ** d:
        bad.append(f"boundary Euler sum {euler} differs from {1 - (-1) ** d}")
    return ValidationReport(bad)


def parse_polytope(spec: str) -> FaceLattice:
    """``simplex:2``, ``cube:3``, ``xpoly:2``, ``polygon:5``, ``square``, ``point``,
    ``prod:simplex:2,simplex:1``."""
    spec = spec.strip()
    if spec.startswith("prod:"):
        parts = [parse_polytope(s) for s in spec[len("prod:"):].split(",")]
        if len(parts) < 2:
            raise InvalidParameter("prod needs at least two factors")
        lattice = parts[0]
        for other in parts[1:]:
            lattice = product(lattice, other)
        return lattice
    if spec == "square":
        return cube(2)
    if spec == "point":
        return point()
    kind, _, arg = spec.partition(":")
    builders = {"simplex": simplex, "cube": cube, "xpoly": crosspolytope, "polygon": polygon}
    if kind not in builders or not arg:
        raise InvalidParameter(f"unknown polytope spec {spec!r}")
    try:
        value = int(arg)
    except ValueError:
        raise InvalidParameter(f"bad parameter in polytope spec {spec!r}") from None
    return builders[kind](value)

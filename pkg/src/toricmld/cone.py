"""Pointed rational polyhedral cones in ``N = Z^n``.

A :class:`Cone` keeps its primitive extreme rays in lexicographic order and
an exact H-representation: integer facet forms (nonnegative on the cone) and
integer equations cutting out its linear span.  It also keeps a lattice basis
of ``N`` intersected with the span, so that everything dimension-dependent
(facets, determinants, fundamental parallelepipeds) can be done in full
dimension.

Cones are cached by ``(rank, rays)``: building the same cone twice returns
the same object.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, lru_cache
from typing import FrozenSet, List, Sequence, Tuple

from .lattice import (
    IntMatrix,
    LatticeVector,
    cross,
    dot,
    adjugate,
    primitive,
    rank as matrix_rank,
    snf,
    unimodular_inverse,
)


class NotPointed(ValueError):
    """The generators span a cone containing a line."""


class NotSimplicial(ValueError):
    pass


@dataclass(frozen=True)
class BoxPoints:
    """Lattice points of the half-open fundamental parallelepiped."""

    points: Tuple[LatticeVector, ...]
    index: int


@dataclass(frozen=True, eq=False)
class Cone:
    rank: int
    rays: Tuple[LatticeVector, ...]
    dim: int
    facets: Tuple[LatticeVector, ...]
    span_equations: Tuple[LatticeVector, ...]
    # rows mapping a vector of N in the span to coordinates in a lattice basis
    # of N ∩ span, and the basis itself (as vectors of N)
    coord_map: Tuple[LatticeVector, ...] = field(repr=False)
    span_basis: Tuple[LatticeVector, ...] = field(repr=False)

    def __eq__(self, other):
        if self is other:
            return True
        if not isinstance(other, Cone):
            return NotImplemented
        return self.rank == other.rank and self.rays == other.rays

    def __hash__(self):
        return hash((self.rank, self.rays))

    def __lt__(self, other: "Cone") -> bool:
        return self.sort_key < other.sort_key

    def __repr__(self) -> str:
        return f"Cone(rank={self.rank}, rays={list(self.rays)})"

    @property
    def sort_key(self):
        return (self.dim, self.rays)

    @property
    def zero(self) -> LatticeVector:
        return (0,) * self.rank

    def coords(self, v: Sequence[int]) -> Tuple[int, ...]:
        """Coordinates of ``v`` (assumed in the span) in the span lattice basis."""
        return tuple(dot(row, v) for row in self.coord_map)

    def in_span(self, v: Sequence[int]) -> bool:
        return all(dot(e, v) == 0 for e in self.span_equations)

    def contains(self, v: Sequence) -> bool:
        return self.in_span(v) and all(dot(f, v) >= 0 for f in self.facets)

    @cached_property
    def ray_matrix(self) -> IntMatrix:
        """Square matrix of ray coordinates (columns) for a simplicial cone."""
        return IntMatrix.from_columns([self.coords(r) for r in self.rays], self.dim)

    @cached_property
    def _adjugate(self) -> Tuple[Tuple[int, ...], int]:
        # (A, D) with D = |det| > 0 and A = D * inverse, all integers
        if not is_simplicial(self):
            raise NotSimplicial(f"{self!r} is not simplicial")
        if self.dim == 0:
            return (), 1
        m = self.ray_matrix
        d = m.det()
        sign = 1 if d > 0 else -1
        adj = tuple(tuple(sign * x for x in row) for row in adjugate(m).rows)
        return adj, abs(d)

    def barycentric_numerators(self, v: Sequence[int]) -> Tuple[Tuple[int, ...], int]:
        """Integers ``(n, D)`` with barycentric coordinates ``t_i = n_i / D``."""
        adj, d = self._adjugate
        c = self.coords(v)
        return tuple(dot(row, c) for row in adj), d

    def barycentric(self, v: Sequence[int]) -> Tuple[Fraction, ...]:
        """Coefficients ``t`` with ``v = sum t_i rays[i]`` (simplicial cones only)."""
        nums, d = self.barycentric_numerators(v)
        return tuple(Fraction(x, d) for x in nums)

    @cached_property
    def _box(self) -> Tuple[Tuple[LatticeVector, Tuple[int, ...]], ...]:
        # box points with their barycentric numerators (all in [0, D))
        adj, d = self._adjugate
        if self.dim == 0:
            return ((self.zero, ()),)
        u, diag, _ = snf(self.ray_matrix)
        uinv = unimodular_inverse(u)
        out = []
        for ks in itertools.product(*(range(diag.rows[i][i]) for i in range(self.dim))):
            rep = uinv.apply(ks)
            nums = tuple(dot(row, rep) % d for row in adj)
            w = tuple(sum(x * r[j] for x, r in zip(nums, self.rays)) // d for j in range(self.rank))
            out.append((w, nums))
        out.sort()
        return tuple(out)

    @cached_property
    def face_ray_sets(self) -> FrozenSet[FrozenSet[int]]:
        """Faces as sets of ray indices: all intersections of facets."""
        everything = frozenset(range(len(self.rays)))
        facet_sets = [
            frozenset(i for i, r in enumerate(self.rays) if dot(f, r) == 0) for f in self.facets
        ]
        seen = {everything}
        todo = [everything]
        while todo:
            face = todo.pop()
            for s in facet_sets:
                g = face & s
                if g not in seen:
                    seen.add(g)
                    todo.append(g)
        return frozenset(seen)

    def face_containing(self, v: Sequence) -> "Cone":
        """Smallest face of ``self`` containing ``v`` (assumed to lie in the cone)."""
        tight = [f for f in self.facets if dot(f, v) == 0]
        return _cone_from_rays(self.rank, tuple(r for r in self.rays if all(dot(f, r) == 0 for f in tight)))

    def has_face(self, other: "Cone") -> bool:
        if other is self:
            return True
        mine = set(self.rays)
        if not mine.issuperset(other.rays):
            return False
        ids = frozenset(i for i, r in enumerate(self.rays) if r in set(other.rays))
        return ids in self.face_ray_sets

    @cached_property
    def faces(self) -> Tuple["Cone", ...]:
        out = [_cone_from_rays(self.rank, tuple(self.rays[i] for i in sorted(s))) for s in self.face_ray_sets]
        return tuple(sorted(out))


def _full_facets(points: Sequence[Sequence[int]], d: int) -> List[LatticeVector]:
    """Primitive inner normals of the facets of ``cone(points)`` in ``Z^d``.

    The cone is assumed full-dimensional but need not be pointed.  Every
    ``(d-1)``-subset of independent points defines a candidate hyperplane,
    which is kept when all points lie weakly on one side.
    """
    if d == 0:
        return []
    if d == 1:
        if all(p[0] > 0 for p in points):
            return [(1,)]
        if all(p[0] < 0 for p in points):
            return [(-1,)]
        return []
    found = set()
    for subset in itertools.combinations(points, d - 1):
        h = cross(subset)
        if not any(h):
            continue
        h = primitive(h)
        if h in found or tuple(-x for x in h) in found:
            continue
        vals = [dot(h, p) for p in points]
        if all(x >= 0 for x in vals):
            found.add(h)
        elif all(x <= 0 for x in vals):
            found.add(tuple(-x for x in h))
    return sorted(found)


@lru_cache(maxsize=None)
def _cone_from_rays(rank: int, gens: Tuple[LatticeVector, ...]) -> Cone:
    if not gens:
        ident = tuple(tuple(int(i == j) for j in range(rank)) for i in range(rank))
        return Cone(rank, (), 0, (), ident, (), ())
    u, d, _ = snf(IntMatrix.from_columns(gens, rank))
    k = sum(1 for i in range(min(d.shape)) if d.rows[i][i])
    coord_map = u.rows[:k]
    equations = u.rows[k:]
    uinv = unimodular_inverse(u)
    basis = tuple(uinv.column(j) for j in range(k))
    pts = [tuple(dot(row, g) for row in coord_map) for g in gens]
    if k == len(gens):
        # simplicial: the facet normals are the rows of the adjugate
        m = IntMatrix.from_columns(pts, k)
        sign = 1 if m.det() > 0 else -1
        normals = [primitive([sign * x for x in row]) for row in adjugate(m).rows]
        return _build_cone(rank, gens, k, normals, coord_map, equations, basis)
    normals = _full_facets(pts, k)
    if matrix_rank(normals) < k:
        raise NotPointed(f"cone generated by {list(gens)} contains a line")
    if k == 1:
        extreme = list(gens)
    else:
        extreme = []
        for g, p in zip(gens, pts):
            tight = [h for h in normals if dot(h, p) == 0]
            if len(tight) >= k - 1 and matrix_rank(tight) == k - 1:
                extreme.append(g)
    if tuple(extreme) != gens:
        return _cone_from_rays(rank, tuple(extreme))
    return _build_cone(rank, gens, k, normals, coord_map, equations, basis)


def _build_cone(rank, gens, k, normals, coord_map, equations, basis) -> Cone:
    # pull facet normals back from span coordinates to forms on N
    facets = tuple(
        sorted(tuple(sum(h[i] * coord_map[i][j] for i in range(k)) for j in range(rank)) for h in normals)
    )
    return Cone(rank, gens, k, facets, equations, coord_map, basis)


def make_cone(rank: int, generators: Sequence[Sequence[int]] = ()) -> Cone:
    """Cone in ``Z^rank`` generated by ``generators``.

    Generators are normalised to primitive vectors, redundant ones are
    dropped, and the remaining extreme rays are sorted lexicographically.
    Zero vectors are ignored; no generators gives the zero cone.
    """
    gens = set()
    for g in generators:
        g = tuple(int(x) for x in g)
        if len(g) != rank:
            raise ValueError(f"generator {g} does not have length {rank}")
        if any(g):
            gens.add(primitive(g))
    return _cone_from_rays(rank, tuple(sorted(gens)))


def faces(c: Cone) -> Tuple[Cone, ...]:
    return c.faces


def is_simplicial(c: Cone) -> bool:
    return len(c.rays) == c.dim


def index(c: Cone) -> int:
    """Index of the sublattice spanned by the rays in ``N ∩ span(c)``."""
    if not is_simplicial(c):
        raise NotSimplicial(f"{c!r} is not simplicial")
    return c._adjugate[1]


def box_points(c: Cone) -> BoxPoints:
    """Lattice points ``sum t_i v_i`` of ``N ∩ span(c)`` with all ``0 <= t_i < 1``.

    Coset representatives of ``(N ∩ span) / Z<rays>`` are read off the Smith
    normal form of the ray matrix and then reduced mod 1 in barycentric
    coordinates, so the work is proportional to the index.
    """
    if not is_simplicial(c):
        raise NotSimplicial(f"{c!r} is not simplicial")
    return BoxPoints(tuple(w for w, _ in c._box), c._adjugate[1])


def is_smooth_cone(c: Cone) -> bool:
    return is_simplicial(c) and c._adjugate[1] == 1


def relint_contains(c: Cone, v: Sequence) -> bool:
    return c.in_span(v) and all(dot(f, v) > 0 for f in c.facets)


def triangulate(c: Cone) -> Tuple[Cone, ...]:
    """Placing triangulation of ``c`` using its rays in canonical order.

    Rays are inserted one at a time.  A ray outside the current span is
    coned over every existing cell; otherwise it is joined to every
    boundary face of the current triangulation that it sees, i.e. that lies
    on a facet of the partial cone whose form is negative at the new ray.
    """
    if is_simplicial(c):
        return (c,)
    rays = c.rays
    cells = [frozenset([0])]
    for i in range(1, len(rays)):
        r = rays[i]
        partial = _cone_from_rays(c.rank, tuple(rays[:i]))
        if not partial.in_span(r):
            cells = [cell | {i} for cell in cells]
            continue
        seen = [f for f in partial.facets if dot(f, r) < 0]
        new = set()
        for cell in cells:
            for j in cell:
                wall = cell - {j}
                if any(all(dot(f, rays[x]) == 0 for x in wall) for f in seen):
                    new.add(wall | {i})
        cells.extend(sorted(new, key=sorted))
    out = [_cone_from_rays(c.rank, tuple(rays[x] for x in sorted(cell))) for cell in cells]
    return tuple(sorted(out))

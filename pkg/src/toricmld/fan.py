"""Fans, products of fans, stellar subdivision and toric resolution."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property
from collections import Counter
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .cone import (
    Cone,
    _full_facets,
    is_simplicial,
    is_smooth_cone,
    index,
    make_cone,
)
from .lattice import LatticeVector, primitive


class NotAFan(ValueError):
    """Two cones meet in something that is not a common face."""

    def __init__(self, msg: str, cones: Tuple[Cone, ...] = ()):
        super().__init__(msg)
        self.cones = cones


class NotInSupport(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class Fan:
    rank: int
    maximal_cones: Tuple[Cone, ...]

    def __eq__(self, other):
        if not isinstance(other, Fan):
            return NotImplemented
        return self.rank == other.rank and self.maximal_cones == other.maximal_cones

    def __hash__(self):
        return hash((self.rank, self.maximal_cones))

    def __repr__(self) -> str:
        return f"Fan(rank={self.rank}, maximal_cones={[list(c.rays) for c in self.maximal_cones]})"

    @cached_property
    def cones(self) -> Tuple[Cone, ...]:
        """Every cone of the fan, sorted by dimension then rays."""
        out = set()
        for m in self.maximal_cones:
            out.update(m.faces)
        return tuple(sorted(out))

    @cached_property
    def rays(self) -> Tuple[LatticeVector, ...]:
        return tuple(sorted({r for m in self.maximal_cones for r in m.rays}))

    @cached_property
    def ray_index(self) -> Dict[LatticeVector, int]:
        return {r: i for i, r in enumerate(self.rays)}

    @cached_property
    def parent(self) -> Dict[Cone, Cone]:
        """First maximal cone (canonical order) having each cone as a face."""
        out: Dict[Cone, Cone] = {}
        for m in self.maximal_cones:
            for f in m.faces:
                out.setdefault(f, m)
        return out

    def __contains__(self, c: Cone) -> bool:
        return c in self.parent

    def ray_ids(self, c: Cone) -> Tuple[int, ...]:
        return tuple(self.ray_index[r] for r in c.rays)

    def cone_containing(self, v: Sequence[int]) -> Optional[Cone]:
        """The unique cone whose relative interior contains ``v``, if any."""
        for m in self.maximal_cones:
            if m.contains(v):
                return m.face_containing(v)
        return None

    def in_support(self, v: Sequence[int]) -> bool:
        return any(m.contains(v) for m in self.maximal_cones)


def intersection_rays(s: Cone, t: Cone) -> Tuple[LatticeVector, ...]:
    """Primitive extreme rays of ``s ∩ t``.

    The dual of the intersection is ``s^v + t^v``, which is full-dimensional
    because ``s`` is pointed; its facets are the extreme rays of ``s ∩ t``.
    """
    gens = list(s.facets) + list(t.facets)
    for e in s.span_equations + t.span_equations:
        gens.append(e)
        gens.append(tuple(-x for x in e))
    return tuple(_full_facets(gens, s.rank))


def meet_is_common_face(s: Cone, t: Cone) -> bool:
    rays = set(intersection_rays(s, t))
    for c in (s, t):
        ids = frozenset(i for i, r in enumerate(c.rays) if r in rays)
        if len(ids) != len(rays) or ids not in c.face_ray_sets:
            return False
    return True


def _maximal(cones: Iterable[Cone]) -> Tuple[Cone, ...]:
    cones = sorted(set(cones))
    return tuple(c for c in cones if not any(d.dim > c.dim and d.has_face(c) for d in cones))


def fan_from_cones(rank: int, cones: Iterable[Cone], check: bool = True) -> Fan:
    cones = _maximal(cones)
    if check:
        for s, t in itertools.combinations(cones, 2):
            if not meet_is_common_face(s, t):
                raise NotAFan(f"{s!r} and {t!r} do not meet in a common face", (s, t))
    if not cones:
        cones = (make_cone(rank),)
    return Fan(rank, cones)


def make_fan(rank: int, generator_lists: Iterable[Sequence[Sequence[int]]], check: bool = True) -> Fan:
    """Fan generated by the given cones and all their faces.

    ``check`` validates that every two cones meet in a common face; it is the
    expensive part of construction and can be skipped for trusted input.
    """
    return fan_from_cones(rank, [make_cone(rank, g) for g in generator_lists], check)


def product(f: Fan, g: Fan) -> Fan:
    n, m = f.rank, g.rank
    cones = []
    for s in f.maximal_cones:
        for t in g.maximal_cones:
            gens = [r + (0,) * m for r in s.rays] + [(0,) * n + r for r in t.rays]
            cones.append(make_cone(n + m, gens))
    return fan_from_cones(n + m, cones, check=False)


@dataclass(frozen=True)
class Subdivision:
    source: Fan
    target: Fan
    # target maximal cone -> smallest source cone containing it
    containment_map: Dict[Cone, Cone]

    @property
    def new_rays(self) -> Tuple[LatticeVector, ...]:
        old = set(self.source.rays)
        return tuple(r for r in self.target.rays if r not in old)


def _containment(source: Fan, target: Fan) -> Dict[Cone, Cone]:
    out = {}
    for c in target.maximal_cones:
        centre = tuple(sum(col) for col in zip(*c.rays)) if c.rays else c.zero
        out[c] = source.cone_containing(centre)
    return out


def stellar_subdivide(f: Fan, v: Sequence[int]) -> Subdivision:
    """Star subdivision of ``f`` at the ray through ``v``.

    Every maximal cone containing ``v`` is replaced by the cones spanned by
    ``v`` and each of its facets not containing ``v``.
    """
    v = primitive(v)
    if len(v) != f.rank:
        raise ValueError("vector has the wrong length")
    if not f.in_support(v):
        raise NotInSupport(f"{v} is not in the support of the fan")
    if v in f.ray_index:
        return Subdivision(f, f, {c: c for c in f.maximal_cones})
    target = _stellar_target(f, v)
    return Subdivision(f, target, _containment(f, target))


def _star(rank: int, m: Cone, v: LatticeVector) -> List[Cone]:
    """Cones replacing the maximal cone ``m`` (which contains ``v``) in a star subdivision."""
    return [
        make_cone(rank, face.rays + (v,))
        for face in m.faces
        if face.dim == m.dim - 1 and not face.contains(v)
    ]


def _stellar_target(f: Fan, v: LatticeVector) -> Fan:
    # every new cone has the dimension of the maximal cone it came from and
    # lies in no other maximal cone, so the result needs no maximality filter
    cones = []
    for m in f.maximal_cones:
        cones.extend(_star(f.rank, m, v) if m.contains(v) else [m])
    return Fan(f.rank, tuple(sorted(set(cones))))


def _choose_centre(
    nonsimplicial: Iterable[Cone], singular: Iterable[Cone]
) -> Optional[Tuple[LatticeVector, Cone]]:
    # the centre together with the cone it was taken from
    nonsimplicial = list(nonsimplicial)
    if nonsimplicial:
        c = min(nonsimplicial)
        return primitive([sum(col) for col in zip(*c.rays)]), c
    singular = list(singular)
    if not singular:
        return None
    c = min(singular, key=lambda c: (-index(c), c.sort_key))
    pts = [(sum(nums), w) for w, nums in c._box if any(w)]
    return primitive(min(pts)[1]), c


def resolution_centre(f: Fan) -> Optional[LatticeVector]:
    """Next ray to insert when resolving ``f``, or ``None`` if ``f`` is smooth.

    Non-simplicial cones are handled first, lowest dimension first, by
    inserting the primitive sum of their rays.  Then among non-smooth cones
    the one of largest index is chosen and the nonzero box point with the
    smallest barycentric sum is inserted (ties: lexicographic).
    """
    found = _choose_centre(
        (c for c in f.cones if not is_simplicial(c)),
        (c for c in f.cones if not is_smooth_cone(c)),
    )
    return found[0] if found else None


def resolve(f: Fan) -> Subdivision:
    """Smooth refinement of ``f`` by iterated stellar subdivision.

    Same centres as repeatedly calling :func:`resolution_centre`, but the set
    of bad cones is maintained incrementally through face reference counts.
    """
    maximal = set(f.maximal_cones)
    refs: Counter = Counter()
    bad = set()
    by_ray: Dict[LatticeVector, set] = {}

    def add(m: Cone) -> None:
        maximal.add(m)
        for r in m.rays:
            by_ray.setdefault(r, set()).add(m)
        for c in m.faces:
            refs[c] += 1
            if refs[c] == 1 and not is_smooth_cone(c):
                bad.add(c)

    def remove(m: Cone) -> None:
        maximal.discard(m)
        for r in m.rays:
            by_ray[r].discard(m)
        for c in m.faces:
            refs[c] -= 1
            if refs[c] == 0:
                del refs[c]
                bad.discard(c)

    for m in f.maximal_cones:
        add(m)
    while True:
        found = _choose_centre((c for c in bad if not is_simplicial(c)), bad)
        if found is None:
            break
        v, c = found
        # the maximal cones containing v are those having the carrier of v as a face
        carrier = c.face_containing(v)
        hits = set.intersection(*(by_ray[r] for r in carrier.rays))
        for m in sorted(hits):
            remove(m)
            for new in _star(f.rank, m, v):
                add(new)
    target = Fan(f.rank, tuple(sorted(maximal))) if maximal != set(f.maximal_cones) else f
    return Subdivision(f, target, _containment(f, target))

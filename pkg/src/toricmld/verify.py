"""Seeded random toric log pairs and property checkers.

Random streams come from numpy's PCG64 generator.  Every instance gets its
own child stream spawned from ``SeedSequence(seed)``, so instance ``k`` of a
run does not depend on how many retries earlier instances needed.

Each checker returns a :class:`PropertyResult`; a violation carries the
serialized pair, the offending cones (as ray indices) and the exact values
involved, which is enough to replay it from the command line.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from .cone import (
    Cone,
    NotPointed,
    index,
    is_simplicial,
    is_smooth_cone,
    make_cone,
    relint_contains,
    triangulate,
)
from .fan import Fan, fan_from_cones, make_fan, meet_is_common_face, resolve, stellar_subdivide
from .lattice import dot, primitive
from .logpair import (
    NotRCartier,
    ToricLogPair,
    from_log_discrepancies,
    make_pair,
    mld_closed_point,
    mld_orbit,
    product_pair,
    pullback_boundary,
    report,
)
from .snc import SncPair, SncPoint, make_snc_pair, snc_mld

MODES = ("zero-boundary", "random", "all-ones")


class GenerationExhausted(RuntimeError):
    pass


@dataclass(frozen=True)
class GenConfig:
    rank: int = 3
    max_rays: int = 8
    coefficient_mode: str = "random"
    seed: int = 0
    count: int = 10
    coord_bound: int = 3
    max_cones: int = 4
    max_denominator: int = 12
    max_index: int = 500
    retries: int = 200

    def __post_init__(self):
        if not 2 <= self.rank <= 5:
            raise ValueError("rank must be between 2 and 5")
        if self.max_rays < self.rank:
            raise ValueError("max_rays must be at least the rank")
        if self.coefficient_mode not in MODES:
            raise ValueError(f"coefficient_mode must be one of {MODES}")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be a 64-bit unsigned integer")


@dataclass
class PropertyResult:
    name: str
    instances: int = 0
    violations: List[dict] = field(default_factory=list)
    notes: Dict[str, str] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return not self.violations

    def merge(self, other: "PropertyResult") -> "PropertyResult":
        notes = dict(self.notes)
        notes.update(other.notes)
        return PropertyResult(self.name, self.instances + other.instances, self.violations + other.violations, notes)


def rngs(seed: int, count: int) -> List[np.random.Generator]:
    return [np.random.Generator(np.random.PCG64(s)) for s in np.random.SeedSequence(seed).spawn(count)]


# -- generation ---------------------------------------------------------------


def _random_ray(rng: np.random.Generator, n: int, bound: int) -> Tuple[int, ...]:
    while True:
        v = tuple(int(x) for x in rng.integers(-bound, bound + 1, size=n))
        if any(v):
            return primitive(v)


def _acceptable(c: Cone, max_index: int) -> bool:
    cells = (c,) if is_simplicial(c) else triangulate(c)
    return all(index(cell) <= max_index for cell in cells)


def random_fan(rng: np.random.Generator, cfg: GenConfig) -> Optional[Fan]:
    """Greedy fan: add random cones that meet every earlier cone in a common face."""
    n = cfg.rank
    pool = sorted({_random_ray(rng, n, cfg.coord_bound) for _ in range(cfg.max_rays)})
    target = int(rng.integers(1, cfg.max_cones + 1))
    chosen: List[Cone] = []
    for _ in range(20 * target):
        if len(chosen) == target:
            break
        if chosen and rng.random() < 0.6:
            # glue a new ray onto a facet of an existing cone
            base = chosen[int(rng.integers(len(chosen)))]
            walls = [f for f in base.faces if f.dim == base.dim - 1]
            wall = walls[int(rng.integers(len(walls)))]
            gens = list(wall.rays) + [pool[int(rng.integers(len(pool)))]]
        else:
            size = int(rng.integers(1, n + 1))
            if rng.random() < 0.15:
                size = n + 1
            size = min(size, len(pool))
            gens = [pool[i] for i in rng.choice(len(pool), size=size, replace=False)]
        try:
            c = make_cone(n, gens)
        except NotPointed:
            continue
        if c in chosen or not _acceptable(c, cfg.max_index):
            continue
        if len({r for d in chosen for r in d.rays} | set(c.rays)) > cfg.max_rays:
            continue
        if all(meet_is_common_face(c, d) for d in chosen):
            chosen.append(c)
    if not chosen:
        return None
    return fan_from_cones(n, chosen, check=False)


def _random_coefficient(rng: np.random.Generator, max_den: int) -> Fraction:
    q = int(rng.integers(1, max_den + 1))
    return Fraction(int(rng.integers(0, q + 1)), q)


def _nonsimplicial_form(rng: np.random.Generator, c: Cone, max_den: int, tries: int = 50):
    """A form ``w / q`` with ``0 <= w(v) <= q`` on the rays of ``c``, or zero."""
    for _ in range(tries):
        q = int(rng.integers(1, max_den + 1))
        w = rng.integers(-q, q + 1, size=c.rank)
        if all(0 <= dot(w, r) <= q for r in c.rays):
            return [Fraction(int(x), q) for x in w]
    return [Fraction(0)] * c.rank


def random_boundary(rng: np.random.Generator, fan: Fan, cfg: GenConfig) -> Optional[ToricLogPair]:
    mode = cfg.coefficient_mode
    try:
        if mode == "zero-boundary":
            return make_pair(fan, [0] * len(fan.rays))
        if mode == "all-ones":
            return make_pair(fan, [1] * len(fan.rays))
    except NotRCartier:
        return None
    a = {r: _random_coefficient(rng, cfg.max_denominator) for r in fan.rays}
    for m in fan.maximal_cones:
        if not is_simplicial(m):
            phi = _nonsimplicial_form(rng, m, cfg.max_denominator)
            a.update({r: dot(phi, r) for r in m.rays})
    try:
        return make_pair(fan, {r: 1 - x for r, x in a.items()})
    except NotRCartier:
        # two non-simplicial cones disagreed on a shared ray
        for m in fan.maximal_cones:
            if not is_simplicial(m):
                a.update({r: Fraction(0) for r in m.rays})
        return make_pair(fan, {r: 1 - x for r, x in a.items()})


def gen_pair(rng: np.random.Generator, cfg: GenConfig) -> ToricLogPair:
    for _ in range(cfg.retries):
        fan = random_fan(rng, cfg)
        if fan is None:
            continue
        pair = random_boundary(rng, fan, cfg)
        if pair is not None:
            return pair
    raise GenerationExhausted(f"no valid pair within {cfg.retries} attempts")


def gen_pairs(cfg: GenConfig) -> List[ToricLogPair]:
    return [gen_pair(rng, cfg) for rng in rngs(cfg.seed, cfg.count)]


# -- checkers -----------------------------------------------------------------


def _serialize(p: ToricLogPair) -> str:
    from .pairfile import PairFile

    return PairFile.from_pair(p).to_text()


def _violation(p: ToricLogPair, cones: Sequence[Cone], **values) -> dict:
    return {
        "pair": _serialize(p),
        "cones": [list(p.fan.ray_ids(c)) for c in cones],
        "values": {k: str(v) for k, v in values.items()},
    }


def check_lsc(p: ToricLogPair) -> PropertyResult:
    """Closed-point mlds never jump up under specialisation: for ``tau`` a face of ``sigma``,
    ``a_sigma + codim sigma <= a_tau + codim tau``."""
    res = PropertyResult("lsc", 1)
    slack = None
    for s in p.fan.cones:
        lhs = mld_closed_point(p, s)
        for t in s.faces:
            if t == s:
                continue
            rhs = mld_closed_point(p, t)
            slack = rhs - lhs if slack is None else min(slack, rhs - lhs)
            if lhs > rhs:
                res.violations.append(_violation(p, (s, t), sigma_value=lhs, tau_value=rhs))
    if slack is not None:
        res.notes["min_slack"] = str(slack)
    return res


def check_face_chain(p: ToricLogPair) -> PropertyResult:
    """If ``a_tau + codim(tau, sigma) = a_sigma`` then every face in between attains it too."""
    res = PropertyResult("chain", 1)
    for s in p.fan.cones:
        a_s = mld_orbit(p, s)[0]
        for t in s.faces:
            if mld_orbit(p, t)[0] + (s.dim - t.dim) != a_s:
                continue
            for g in s.faces:
                if t in g.faces and mld_orbit(p, g)[0] + (s.dim - g.dim) != a_s:
                    res.violations.append(_violation(p, (t, g, s), sigma_value=a_s))
    return res


def check_bound(p: ToricLogPair) -> PropertyResult:
    """``0 <= a_sigma <= dim sigma``, and the equality case.

    Equality forces ``a_i = 1`` on every ray of ``sigma`` (each ray is a face
    attaining its own bound).  The converse only holds once
    ``a_sigma > dim sigma - 1``: the A1 cone with empty boundary has all
    ``a_i = 1`` but ``a_sigma = 1``.  See :func:`check_bound_literal` for the
    unrestricted version.
    """
    res = PropertyResult("bound", 1)
    for c in p.fan.cones:
        a = mld_orbit(p, c)[0]
        all_ones = all(p.a(r) == 1 for r in c.rays)
        bad = not 0 <= a <= c.dim
        bad = bad or (a == c.dim and not all_ones)
        bad = bad or (a > c.dim - 1 and all_ones and a != c.dim)
        if bad:
            res.violations.append(_violation(p, (c,), a_sigma=a, dim=c.dim, all_rays_one=all_ones))
    return res


def check_bound_literal(p: ToricLogPair) -> PropertyResult:
    """``0 <= a_sigma <= dim sigma`` with ``a_sigma = dim sigma`` iff all ``a_i = 1``, on every cone."""
    res = PropertyResult("bound-literal", 1)
    for c in p.fan.cones:
        a = mld_orbit(p, c)[0]
        all_ones = all(p.a(r) == 1 for r in c.rays)
        if not 0 <= a <= c.dim or (a == c.dim) != all_ones:
            res.violations.append(_violation(p, (c,), a_sigma=a, dim=c.dim, all_rays_one=all_ones))
    return res


def check_nonsingularity_criterion(p: ToricLogPair) -> PropertyResult:
    """A cone with ``a_sigma > dim sigma - 1`` is smooth."""
    res = PropertyResult("nonsingular", 1)
    for c in p.fan.cones:
        a = mld_orbit(p, c)[0]
        if a > c.dim - 1 and not is_smooth_cone(c):
            res.violations.append(_violation(p, (c,), a_sigma=a, dim=c.dim))
    return res


def check_smooth_closed_form(p: ToricLogPair) -> PropertyResult:
    """On smooth cones the mld is the sum of the ray log discrepancies."""
    res = PropertyResult("smooth", 1)
    for c in p.fan.cones:
        if not is_smooth_cone(c):
            continue
        a = mld_orbit(p, c)[0]
        expected = sum((p.a(r) for r in c.rays), Fraction(0))
        if a != expected:
            res.violations.append(_violation(p, (c,), a_sigma=a, ray_sum=expected))
    return res


def resolution_mlds(p: ToricLogPair) -> Dict[Cone, Fraction]:
    """Orbit mlds recomputed on a smooth resolution.

    ``relint(sigma)`` is the disjoint union of the relative interiors of the
    resolution cones it contains, and on a smooth cone the minimum of
    ``phi`` is the sum over its rays.
    """
    target = resolve(p.fan).target
    out = {}
    for s in p.fan.cones:
        phi = p.phi(s)
        best = None
        for g in target.cones:
            centre = tuple(sum(col) for col in zip(*g.rays)) if g.rays else g.zero
            if relint_contains(s, centre):
                value = sum((dot(phi, u) for u in g.rays), Fraction(0))
                best = value if best is None else min(best, value)
        out[s] = best
    return out


def check_resolution_oracle(p: ToricLogPair) -> PropertyResult:
    res = PropertyResult("resolution", 1)
    for s, value in resolution_mlds(p).items():
        a = mld_orbit(p, s)[0]
        if value != a:
            res.violations.append(_violation(p, (s,), a_sigma=a, resolution_value=value))
    return res


def check_witness(p: ToricLogPair) -> PropertyResult:
    """Blowing up the witness ray gives a divisor whose log discrepancy is the mld."""
    res = PropertyResult("witness", 1)
    for c in p.fan.cones:
        if c.dim == 0:
            continue
        a, w = mld_orbit(p, c)
        v = primitive(w)
        sub = stellar_subdivide(p.fan, v)
        new_a = 1 - pullback_boundary(p, sub.target)[sub.target.ray_index[v]]
        if not relint_contains(c, w) or dot(p.phi(c), w) != a or new_a != a:
            res.violations.append(_violation(p, (c,), a_sigma=a, witness=list(w), new_ray_a=new_a))
    return res


def check_strata(p: ToricLogPair) -> PropertyResult:
    """Spectrum is the image of the closed-point map and the strata partition the cones."""
    res = PropertyResult("strata", 1)
    r = report(p)
    members = [c for cs in r.strata.values() for c in cs]
    if (
        set(r.spectrum) != set(r.closed_point_mld.values())
        or len(members) != len(set(members))
        or set(members) != set(p.fan.cones)
        or any(r.closed_point_mld[c] != x for x, cs in r.strata.items() for c in cs)
    ):
        res.violations.append(_violation(p, (), spectrum=[str(x) for x in r.spectrum]))
    return res


def check_product(p: ToricLogPair, q: ToricLogPair) -> PropertyResult:
    """Orbit mlds add over products of cones, and closed-point spectra add."""
    res = PropertyResult("product", 1)
    pq = product_pair(p, q)
    n, m = p.rank, q.rank
    for s in p.fan.cones:
        for t in q.fan.cones:
            st = make_cone(n + m, [r + (0,) * m for r in s.rays] + [(0,) * n + r for r in t.rays])
            got = mld_orbit(pq, st)[0]
            want = mld_orbit(p, s)[0] + mld_orbit(q, t)[0]
            if got != want:
                res.violations.append(_violation(pq, (st,), product_value=got, sum_value=want))
    got_spectrum = set(report(pq).spectrum)
    want = {x + y for x in report(p).spectrum for y in report(q).spectrum}
    if got_spectrum != want:
        res.violations.append(
            _violation(pq, (), spectrum=sorted(got_spectrum), expected=sorted(want))
        )
    return res


SINGLE_CHECKS: Dict[str, Callable[[ToricLogPair], PropertyResult]] = {
    "lsc": check_lsc,
    "chain": check_face_chain,
    "bound": check_bound,
    "bound-literal": check_bound_literal,
    "nonsingular": check_nonsingularity_criterion,
    "smooth": check_smooth_closed_form,
    "resolution": check_resolution_oracle,
    "witness": check_witness,
    "strata": check_strata,
}
ALL_PROPS = tuple(SINGLE_CHECKS) + ("product",)


def run_checks(pairs: Sequence[ToricLogPair], props: Sequence[str]) -> Dict[str, PropertyResult]:
    """Run the named checkers; ``product`` pairs consecutive instances."""
    unknown = [x for x in props if x not in ALL_PROPS]
    if unknown:
        raise ValueError(f"unknown properties: {', '.join(unknown)}")
    out = {}
    for name in props:
        total = PropertyResult(name)
        if name == "product":
            for p, q in zip(pairs[::2], pairs[1::2]):
                total = total.merge(check_product(p, q))
        else:
            for p in pairs:
                total = total.merge(SINGLE_CHECKS[name](p))
        out[name] = total
    return out


# -- SNC realizations ---------------------------------------------------------


def random_unimodular(rng: np.random.Generator, n: int, steps: int = 8) -> List[List[int]]:
    g = [[int(i == j) for j in range(n)] for i in range(n)]
    for _ in range(steps):
        if n < 2:
            break
        i, j = (int(x) for x in rng.choice(n, size=2, replace=False))
        q = int(rng.integers(-2, 3))
        g[i] = [x + q * y for x, y in zip(g[i], g[j])]
    if n and rng.random() < 0.5:
        g[0] = [-x for x in g[0]]
    return g


def random_snc_pair(rng: np.random.Generator, max_components: int = 5, max_dim: int = 5) -> SncPair:
    """Random SNC pair whose nerve has a smooth toric realization.

    Either at most ``n`` components (coordinate hyperplanes), or exactly
    ``n + 1`` components meeting like the boundary of projective space.
    """
    n = int(rng.integers(1, max_dim + 1))
    m = int(rng.integers(0, min(max_components, n + 1) + 1))
    a = [_random_coefficient(rng, 12) for _ in range(m)]
    subsets = [frozenset(s) for k in range(1, min(n, m) + 1) for s in itertools.combinations(range(m), k)]
    gens = [s for s in subsets if rng.random() < 0.5]
    return make_snc_pair(n, a, [sorted(s) for s in gens])


def toric_realization(p: SncPair, rng: np.random.Generator) -> Tuple[ToricLogPair, List[Tuple[int, ...]]]:
    """Smooth toric pair with one ray per component and one cone per nerve set.

    Returns the pair and the ray of each component.  A random unimodular
    change of coordinates keeps the rays away from the standard basis.
    """
    n, m = p.ambient_dim, len(p.coefficients)
    basis = [tuple(int(i == j) for j in range(n)) for i in range(n)]
    if m == n + 1:
        basis.append(tuple(-1 for _ in range(n)))
    elif m > n + 1:
        raise ValueError("no smooth realization for this many components")
    g = random_unimodular(rng, n)
    rays = [tuple(sum(g[i][k] * e[k] for k in range(n)) for i in range(n)) for e in basis[:m]]
    top = [j for j in p.nerve if not any(j < k for k in p.nerve)]
    fan = make_fan(n, [[rays[i] for i in sorted(j)] for j in top])
    pair = make_pair(fan, {rays[i]: 1 - p.coefficients[i] for i in range(m)} if m else [])
    return pair, rays


def snc_toric_mld(p: SncPair, pt: SncPoint, pair: ToricLogPair, rays) -> Fraction:
    """The toric value at an SNC point type.

    At ``codim = |J|`` this is the orbit mld of the cone of ``J``; at
    ``codim = n`` the closed-point mld.  Intermediate codimensions use the
    local model: the cone of ``J`` in a lattice of rank ``codim``.
    """
    j = sorted(pt.incident)
    if pt.codim == p.ambient_dim or pt.codim == len(j):
        cone = make_cone(p.ambient_dim, [rays[i] for i in j])
        if pt.codim == len(j):
            return mld_orbit(pair, cone)[0]
        return mld_closed_point(pair, cone)
    c = pt.codim
    local_rays = [tuple(int(k == i) for k in range(c)) for i in range(len(j))]
    local = from_log_discrepancies(make_fan(c, [local_rays]), [p.coefficients[i] for i in j])
    top = make_cone(c, local_rays)
    return mld_closed_point(local, top)


def compare_snc_toric(p: SncPair, rng: np.random.Generator) -> List[dict]:
    pair, rays = toric_realization(p, rng)
    mismatches = []
    for pt in p.points():
        want = snc_mld(p, pt)
        got = snc_toric_mld(p, pt, pair, rays)
        if want != got:
            mismatches.append(
                {"incident": sorted(pt.incident), "codim": pt.codim, "snc": str(want), "toric": str(got)}
            )
    return mismatches

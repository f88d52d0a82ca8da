"""Toric log pairs and their minimal log discrepancies.

A pair is a fan plus a boundary coefficient ``b_i`` in ``[0, 1]`` on every
ray; ``a_i = 1 - b_i`` is the log discrepancy of the corresponding invariant
divisor.  ``K + B`` is R-Cartier exactly when every maximal cone carries a
linear form ``phi`` with ``phi(v_i) = a_i`` on its rays, and the log
discrepancy of the divisor of any primitive ``v`` in the support is
``phi(v)``.  The mld of the orbit of ``sigma`` is then the minimum of
``phi`` over the lattice points of the relative interior of ``sigma``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import lcm
from typing import Dict, Mapping, Optional, Sequence, Tuple

from .cone import Cone, relint_contains, triangulate
from .fan import Fan, product as fan_product
from .lattice import IntMatrix, LatticeVector, LinearForm, as_rational, dot, solve_rational


class NotRCartier(ValueError):
    def __init__(self, cone: Cone):
        super().__init__(f"K + B is not R-Cartier on {cone!r}")
        self.cone = cone


class CoefficientOutOfRange(ValueError):
    def __init__(self, ray_id: int, value: Fraction):
        super().__init__(f"boundary coefficient {value} of ray {ray_id} is outside [0, 1]")
        self.ray_id = ray_id
        self.value = value


class ConeNotInFan(KeyError):
    pass


@dataclass(frozen=True, eq=False)
class ToricLogPair:
    fan: Fan
    boundary: Tuple[Fraction, ...]
    cartier_data: Dict[Cone, LinearForm]
    _cache: dict = field(default_factory=dict, repr=False)

    @property
    def rank(self) -> int:
        return self.fan.rank

    @property
    def log_disc(self) -> Tuple[Fraction, ...]:
        return tuple(1 - b for b in self.boundary)

    def a(self, ray: LatticeVector) -> Fraction:
        return 1 - self.boundary[self.fan.ray_index[ray]]

    def phi(self, c: Cone) -> LinearForm:
        """A linear form with ``phi(v_i) = a_i`` on the rays of ``c``."""
        try:
            return self.cartier_data[self.fan.parent[c]]
        except KeyError:
            raise ConeNotInFan(c) from None

    def phi_at(self, v: Sequence[int]) -> Fraction:
        """``phi(v)`` for a point of the support, using a cone that contains it."""
        for m in self.fan.maximal_cones:
            if m.contains(v):
                return dot(self.cartier_data[m], v)
        raise ValueError(f"{tuple(v)} is not in the support of the fan")


def make_pair(fan: Fan, boundary: Sequence, *, check_range: bool = True) -> ToricLogPair:
    """Attach boundary coefficients and solve for ``phi`` on every maximal cone.

    ``boundary`` is either a sequence aligned with ``fan.rays`` or a mapping
    from ray to coefficient.  Coefficients may be ints, Fractions or ``"p/q"``
    strings.  ``check_range=False`` lets coefficients outside ``[0, 1]``
    through; that is only meant for crepant pullbacks.
    """
    if isinstance(boundary, Mapping):
        boundary = [boundary[r] for r in fan.rays]
    b = tuple(as_rational(x) for x in boundary)
    if len(b) != len(fan.rays):
        raise ValueError(f"expected {len(fan.rays)} boundary coefficients, got {len(b)}")
    if check_range:
        for i, x in enumerate(b):
            if not 0 <= x <= 1:
                raise CoefficientOutOfRange(i, x)
    cartier = {}
    for m in fan.maximal_cones:
        if m.dim == 0:
            cartier[m] = (Fraction(0),) * fan.rank
            continue
        rhs = [1 - b[fan.ray_index[r]] for r in m.rays]
        phi = solve_rational(IntMatrix.from_rows(m.rays), rhs)
        if phi is None:
            raise NotRCartier(m)
        cartier[m] = phi
    return ToricLogPair(fan, b, cartier)


def from_log_discrepancies(fan: Fan, a: Sequence) -> ToricLogPair:
    return make_pair(fan, [1 - as_rational(x) for x in a])


def interior_cells(sigma: Cone) -> Tuple[Cone, ...]:
    """Cones of a triangulation of ``sigma`` whose relative interiors lie in relint(sigma).

    Together their relative interiors partition ``relint(sigma)``: the full
    cells plus the interior walls between them.
    """
    seen = set()
    for cell in triangulate(sigma):
        seen.update(cell.faces)
    out = []
    for c in seen:
        centre = tuple(sum(col) for col in zip(*c.rays)) if c.rays else c.zero
        if relint_contains(sigma, centre):
            out.append(c)
    return tuple(sorted(out))


def relint_candidates(gamma: Cone):
    """Lattice points ``sum t_i u_i`` with every ``0 < t_i <= 1`` in a simplicial cone.

    Each such point is ``w + sum_{t_i(w) = 0} u_i`` for a unique box point ``w``.
    """
    for w, nums in gamma._box:
        extra = [u for x, u in zip(nums, gamma.rays) if x == 0]
        yield tuple(w[j] + sum(u[j] for u in extra) for j in range(gamma.rank)) if extra else w


def mld_orbit(p: ToricLogPair, sigma: Cone) -> Tuple[Fraction, LatticeVector]:
    """Minimal log discrepancy of the generic point of ``orb(sigma)`` and a minimiser.

    A relint lattice point with some barycentric coordinate above 1 in its
    cell can drop that ray and stay in the relative interior without raising
    ``phi`` (all ``a_i >= 0``), so it suffices to scan the points with
    coordinates in ``(0, 1]`` of every interior cell.  Ties go to the
    lexicographically smallest point.
    """
    phi = p.phi(sigma)
    key = ("orbit", sigma)
    if key in p._cache:
        return p._cache[key]
    if sigma.dim == 0:
        result = (Fraction(0), sigma.zero)
    else:
        # phi = psi / q with psi integral, so candidates compare as integers
        q = lcm(*(x.denominator for x in phi))
        psi = tuple(int(x * q) for x in phi)
        value, w = min(
            (dot(psi, v), v) for gamma in interior_cells(sigma) for v in relint_candidates(gamma)
        )
        result = (Fraction(value, q), w)
    p._cache[key] = result
    return result


def mld_closed_point(p: ToricLogPair, sigma: Cone) -> Fraction:
    """mld of any closed point of ``orb(sigma)``: the orbit value plus ``codim sigma``."""
    return mld_orbit(p, sigma)[0] + (p.rank - sigma.dim)


@dataclass(frozen=True)
class MldReport:
    orbit_mld: Dict[Cone, Fraction]
    closed_point_mld: Dict[Cone, Fraction]
    witness: Dict[Cone, LatticeVector]
    spectrum: Tuple[Fraction, ...]
    strata: Dict[Fraction, Tuple[Cone, ...]]


def report(p: ToricLogPair) -> MldReport:
    orbit, closed, witness = {}, {}, {}
    for c in p.fan.cones:
        value, w = mld_orbit(p, c)
        orbit[c] = value
        witness[c] = w
        closed[c] = value + (p.rank - c.dim)
    spectrum = tuple(sorted(set(closed.values())))
    strata = {x: tuple(c for c in p.fan.cones if closed[c] == x) for x in spectrum}
    return MldReport(orbit, closed, witness, spectrum, strata)


@dataclass(frozen=True)
class Classification:
    lc: bool
    klt: bool
    canonical: bool
    terminal: bool
    # first offending cone (canonical order) for every flag that is False
    violations: Dict[str, Cone]


def classify(p: ToricLogPair) -> Classification:
    tests = {
        "lc": lambda c, a: a >= 0,
        "klt": lambda c, a: c.dim == 0 or a > 0,
        "canonical": lambda c, a: c.dim < 2 or a >= 1,
        "terminal": lambda c, a: c.dim < 2 or a > 1,
    }
    violations = {}
    for name, ok in tests.items():
        for c in p.fan.cones:
            if not ok(c, mld_orbit(p, c)[0]):
                violations[name] = c
                break
    return Classification(
        lc="lc" not in violations,
        klt="klt" not in violations,
        canonical="canonical" not in violations,
        terminal="terminal" not in violations,
        violations=violations,
    )


def product_pair(p: ToricLogPair, q: ToricLogPair) -> ToricLogPair:
    fan = fan_product(p.fan, q.fan)
    n, m = p.rank, q.rank
    coeff = {r + (0,) * m: b for r, b in zip(p.fan.rays, p.boundary)}
    coeff.update({(0,) * n + r: b for r, b in zip(q.fan.rays, q.boundary)})
    return make_pair(fan, [coeff[r] for r in fan.rays])


def pullback_boundary(p: ToricLogPair, fan: Fan) -> Tuple[Fraction, ...]:
    """Crepant boundary ``1 - phi(v)`` on the rays of a refinement of ``p.fan``."""
    return tuple(1 - p.phi_at(r) for r in fan.rays)


def cone_by_ray_ids(fan: Fan, ids: Sequence[int]) -> Optional[Cone]:
    rays = sorted(fan.rays[i] for i in ids)
    for c in fan.cones:
        if list(c.rays) == rays:
            return c
    return None

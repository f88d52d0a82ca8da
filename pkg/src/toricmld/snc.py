"""Log pairs with normal crossings support, modelled combinatorially.

A pair is a smooth ambient space of dimension ``n`` with boundary components
``E_0, ..., E_{m-1}`` carrying log discrepancies ``a_i`` (the boundary
coefficient is ``1 - a_i``), and the nerve of the components: the index sets
``J`` with ``E_J`` nonempty.  A point is described only by the set of
components through it and its codimension, which is all the mld formula
needs.  Negative ``a_i`` are allowed.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import total_ordering
from typing import FrozenSet, Iterable, Optional, Sequence, Tuple, Union

from .lattice import as_rational


@total_ordering
class _MinusInfinity:
    """The value ``-inf`` of an mld; compares below every rational."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "MINUS_INFINITY"

    def __str__(self) -> str:
        return "-inf"

    def __eq__(self, other):
        return other is self

    def __hash__(self):
        return hash("-inf")

    def __lt__(self, other):
        return other is not self

    def __add__(self, other):
        return self

    __radd__ = __add__

    def __sub__(self, other):
        if other is self:
            raise ArithmeticError("-inf - (-inf) is undefined")
        return self


MINUS_INFINITY = _MinusInfinity()
Mld = Union[Fraction, _MinusInfinity]


class InvalidPoint(ValueError):
    pass


class NotSpecialization(ValueError):
    pass


@dataclass(frozen=True)
class SncPair:
    ambient_dim: int
    coefficients: Tuple[Fraction, ...]
    nerve: FrozenSet[FrozenSet[int]]

    def __post_init__(self):
        m = len(self.coefficients)
        if frozenset() not in self.nerve:
            raise ValueError("the nerve must contain the empty set")
        for j in self.nerve:
            if len(j) > self.ambient_dim:
                raise ValueError(f"{set(j)} has more than {self.ambient_dim} components")
            if any(not 0 <= i < m for i in j):
                raise ValueError(f"{set(j)} names an unknown component")
            for k in range(len(j)):
                for sub in itertools.combinations(j, k):
                    if frozenset(sub) not in self.nerve:
                        raise ValueError("the nerve is not closed under subsets")

    def a(self, j: Iterable[int]) -> Fraction:
        return sum((self.coefficients[i] for i in j), Fraction(0))

    def points(self):
        """Every valid point type ``(J, codim)``."""
        for j in sorted(self.nerve, key=lambda s: (len(s), sorted(s))):
            for c in range(len(j), self.ambient_dim + 1):
                yield SncPoint(j, c)


def make_snc_pair(n: int, coefficients: Sequence, nerve: Optional[Iterable[Iterable[int]]] = None) -> SncPair:
    """SNC pair; ``nerve`` lists generating sets and is closed under subsets here.

    Without a nerve every set of at most ``n`` components meets.
    """
    a = tuple(as_rational(x) for x in coefficients)
    if nerve is None:
        nerve = [s for k in range(min(n, len(a)) + 1) for s in itertools.combinations(range(len(a)), k)]
    closed = {frozenset()}
    for j in nerve:
        j = tuple(j)
        for k in range(len(j) + 1):
            closed.update(frozenset(s) for s in itertools.combinations(j, k))
    return SncPair(n, a, frozenset(closed))


@dataclass(frozen=True)
class SncPoint:
    incident: FrozenSet[int]
    codim: int

    def __init__(self, incident: Iterable[int], codim: int):
        object.__setattr__(self, "incident", frozenset(incident))
        object.__setattr__(self, "codim", codim)


def _check_point(p: SncPair, pt: SncPoint) -> None:
    if pt.incident not in p.nerve:
        raise InvalidPoint(f"components {set(pt.incident)} do not meet")
    if not len(pt.incident) <= pt.codim <= p.ambient_dim:
        raise InvalidPoint(f"codimension {pt.codim} impossible on {len(pt.incident)} components")


def snc_mld(p: SncPair, pt: SncPoint) -> Mld:
    """mld at a point: ``a_J + codim - |J|``, or ``-inf``.

    The value is ``-inf`` at any point of codimension at least 2 lying on a
    component with negative log discrepancy: repeatedly blowing up along that
    component drives the log discrepancy to ``-inf``
    (see :func:`blowup_divergence`).
    """
    _check_point(p, pt)
    if pt.codim >= 2 and any(p.coefficients[i] < 0 for i in pt.incident):
        return MINUS_INFINITY
    return p.a(pt.incident) + pt.codim - len(pt.incident)


def check_hypothesis(p: SncPair, eta: SncPoint, xi: SncPoint) -> Mld:
    """``a(eta) - a(xi) - codim(eta, xi)`` for a specialisation ``eta`` of ``xi``.

    For ``0 <= a_i <= 1`` this equals ``a_J - |J|`` with ``J = I(eta) - I(xi)``
    and is never positive.  Returns ``MINUS_INFINITY`` when ``a(eta)`` is.
    """
    _check_point(p, eta)
    _check_point(p, xi)
    if not xi.incident <= eta.incident or xi.codim > eta.codim:
        raise NotSpecialization(f"{eta} is not a specialisation of {xi}")
    top = snc_mld(p, eta)
    if top is MINUS_INFINITY:
        return MINUS_INFINITY
    bottom = snc_mld(p, xi)
    return top - bottom - (eta.codim - xi.codim)


def product(p: SncPair, q: SncPair) -> SncPair:
    """Product pair; the components of ``q`` are renumbered after those of ``p``."""
    shift = len(p.coefficients)
    nerve = frozenset(j | frozenset(i + shift for i in k) for j in p.nerve for k in q.nerve)
    return SncPair(p.ambient_dim + q.ambient_dim, p.coefficients + q.coefficients, nerve)


def product_point(p: SncPair, eta: SncPoint, xi: SncPoint) -> SncPoint:
    shift = len(p.coefficients)
    return SncPoint(eta.incident | {i + shift for i in xi.incident}, eta.codim + xi.codim)


def blowup_divergence(a_e, a_e1, k: int) -> Fraction:
    """Log discrepancy of ``E_{k+1}`` in the tower of blow-ups along a divisor ``E``.

    Blowing up a point of ``E`` gives ``E_1``; blowing up the component of
    ``E ∩ E_k`` over it gives ``E_{k+1}`` with discrepancy ``k a(E) + a(E_1)``.
    """
    if k < 1:
        raise ValueError("k must be a positive integer")
    return k * as_rational(a_e) + as_rational(a_e1)

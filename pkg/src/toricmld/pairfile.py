"""Pair files and JSON reports.

A pair file is line-oriented text, one record per line::

    # comment
    name A1
    rank 2
    ray 1 0
    ray 1 2
    cone 0 1
    boundary 0 0

``ray`` lines are numbered from 0 in file order; ``cone`` lines list the ray
numbers of one maximal cone; the single ``boundary`` line holds the
coefficients ``b_i`` aligned with the rays, as exact rationals ``p`` or
``p/q``.  The full grammar is in the README.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from . import __version__
from .cone import NotPointed, box_points, index, is_simplicial, is_smooth_cone, make_cone
from .fan import Fan, NotAFan, fan_from_cones
from .lattice import LatticeVector, as_rational, is_primitive
from .logpair import ToricLogPair, classify, make_pair, report


class ParseError(ValueError):
    """Malformed pair file (exit status 2)."""


class InvalidPair(ValueError):
    """Well-formed file that does not describe a valid fan or pair (exit status 3)."""


def _fmt(x: Fraction) -> str:
    return str(Fraction(x))


@dataclass(frozen=True)
class PairFile:
    name: str
    rank: int
    rays: Tuple[LatticeVector, ...]
    cones: Tuple[Tuple[int, ...], ...]
    boundary: Tuple[Fraction, ...]

    @classmethod
    def parse(cls, text: str) -> "PairFile":
        name = None
        rank = None
        rays: List[LatticeVector] = []
        cones: List[Tuple[int, ...]] = []
        boundary = None
        for lineno, raw in enumerate(text.splitlines(), 1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            key, *tail = line.split(None, 1)
            rest = tail[0] if tail else ""
            fields = rest.split()
            try:
                if key == "name":
                    if name is not None:
                        raise ParseError("duplicate name")
                    name = rest.strip()
                elif key == "rank":
                    if rank is not None or rays or cones:
                        raise ParseError("rank must come once, before rays and cones")
                    if len(fields) != 1:
                        raise ParseError("rank takes one integer")
                    rank = int(fields[0])
                    if rank < 0:
                        raise ParseError("rank must be nonnegative")
                elif key == "ray":
                    if rank is None:
                        raise ParseError("ray before rank")
                    v = tuple(int(x) for x in fields)
                    i = len(rays)
                    if len(v) != rank:
                        raise ParseError(f"ray {i} has {len(v)} coordinates, expected {rank}")
                    if not is_primitive(v):
                        raise ParseError(f"ray {i} {list(v)} is not primitive")
                    if v in rays:
                        raise ParseError(f"ray {i} duplicates ray {rays.index(v)}")
                    rays.append(v)
                elif key == "cone":
                    cones.append(tuple(int(x) for x in fields))
                elif key == "boundary":
                    if boundary is not None:
                        raise ParseError("duplicate boundary line")
                    boundary = tuple(as_rational(x) for x in fields)
                else:
                    raise ParseError(f"unknown record {key!r}")
            except ParseError as e:
                raise ParseError(f"line {lineno}: {e}") from None
            except (ValueError, TypeError) as e:
                raise ParseError(f"line {lineno}: {e}") from None
        if rank is None:
            raise ParseError("missing rank")
        if boundary is None:
            if rays:
                raise ParseError("missing boundary")
            boundary = ()
        if len(boundary) != len(rays):
            raise ParseError(f"{len(boundary)} boundary coefficients for {len(rays)} rays")
        used = set()
        for k, c in enumerate(cones):
            bad = [i for i in c if not 0 <= i < len(rays)]
            if bad:
                raise ParseError(f"cone {k} refers to unknown ray {bad[0]}")
            if len(set(c)) != len(c):
                raise ParseError(f"cone {k} repeats a ray")
            used.update(c)
        unused = [i for i in range(len(rays)) if i not in used]
        if unused:
            raise ParseError(f"ray {unused[0]} is not used by any cone")
        return cls(name or "", rank, tuple(rays), tuple(cones), boundary)

    def to_text(self) -> str:
        lines = [f"name {self.name}" if self.name else "name", f"rank {self.rank}"]
        lines += ["ray " + " ".join(map(str, r)) for r in self.rays]
        lines += ["cone " + " ".join(map(str, c)) for c in self.cones]
        lines.append("boundary " + " ".join(_fmt(b) for b in self.boundary))
        return "\n".join(line.rstrip() for line in lines) + "\n"

    def digest(self) -> str:
        return hashlib.sha256(self.to_text().encode()).hexdigest()

    def to_fan(self, check: bool = True) -> Fan:
        cones = []
        for k, ids in enumerate(self.cones):
            try:
                c = make_cone(self.rank, [self.rays[i] for i in ids])
            except NotPointed as e:
                raise InvalidPair(f"cone {k}: {e}") from None
            dropped = [i for i in ids if self.rays[i] not in c.rays]
            if dropped:
                raise InvalidPair(f"cone {k}: ray {dropped[0]} is not an extreme ray")
            cones.append(c)
        try:
            return fan_from_cones(self.rank, cones, check=check)
        except NotAFan as e:
            names = [self.cone_name(c) for c in e.cones]
            raise InvalidPair(f"cones {names[0]} and {names[1]} do not meet in a common face") from None

    def to_pair(self, check: bool = True) -> ToricLogPair:
        """Build the pair; raises the logpair errors for bad boundary data."""
        fan = self.to_fan(check)
        return make_pair(fan, dict(zip(self.rays, self.boundary)))

    def ray_ids(self, c) -> List[int]:
        lookup = {r: i for i, r in enumerate(self.rays)}
        return sorted(lookup[r] for r in c.rays)

    def cone_name(self, c) -> str:
        return "[" + ",".join(map(str, self.ray_ids(c))) + "]"

    @classmethod
    def from_fan(cls, fan: Fan, boundary: Sequence, name: str = "") -> "PairFile":
        """Canonical file: rays in lexicographic order, cones sorted."""
        cones = sorted(tuple(fan.ray_index[r] for r in m.rays) for m in fan.maximal_cones if m.dim)
        return cls(name, fan.rank, fan.rays, tuple(cones), tuple(Fraction(b) for b in boundary))

    @classmethod
    def from_pair(cls, p: ToricLogPair, name: str = "") -> "PairFile":
        return cls.from_fan(p.fan, p.boundary, name)


def read_pair_file(path) -> PairFile:
    with open(path, encoding="utf-8") as fh:
        return PairFile.parse(fh.read())


def cone_record(pf: PairFile, p: ToricLogPair, c, rep) -> Dict[str, object]:
    simplicial = is_simplicial(c)
    return {
        "rays": pf.ray_ids(c),
        "dim": c.dim,
        "orbit_mld": _fmt(rep.orbit_mld[c]),
        "closed_point_mld": _fmt(rep.closed_point_mld[c]),
        "witness": list(rep.witness[c]),
        "smooth": is_smooth_cone(c),
        "index": index(c) if simplicial else None,
        "box_points": len(box_points(c).points) if simplicial else None,
    }


def build_report(pf: PairFile, p: Optional[ToricLogPair] = None) -> Dict[str, object]:
    """Machine-readable report with a fixed key order."""
    if p is None:
        p = pf.to_pair()
    rep = report(p)
    cl = classify(p)
    return {
        "tool": "toricmld",
        "version": __version__,
        "input_digest": pf.digest(),
        "name": pf.name,
        "rank": pf.rank,
        "rays": [list(r) for r in pf.rays],
        "log_discrepancies": [_fmt(1 - b) for b in pf.boundary],
        "cones": [cone_record(pf, p, c, rep) for c in p.fan.cones],
        "spectrum": [_fmt(x) for x in rep.spectrum],
        "strata": [
            {"value": _fmt(x), "cones": [pf.ray_ids(c) for c in cs]} for x, cs in rep.strata.items()
        ],
        "classification": {
            "lc": cl.lc,
            "klt": cl.klt,
            "canonical": cl.canonical,
            "terminal": cl.terminal,
            "violations": {k: pf.ray_ids(c) for k, c in cl.violations.items()},
        },
    }


def dumps(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"

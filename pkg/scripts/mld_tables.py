"""Tables of mlds for classical cyclic quotient singularities.

    python scripts/mld_tables.py --max-index 10

Prints the orbit mld of the closed point for surface A_{r-1} singularities,
for the terminal threefold quotients 1/r(1,-1,1) and for 1/r(1,1,1),
together with the witness divisor and the classification.
"""

from __future__ import annotations

import argparse
from dataclasses import dataclass

from toricmld.cone import index
from toricmld.fan import make_fan
from toricmld.logpair import classify, from_log_discrepancies, mld_orbit


@dataclass(frozen=True)
class TableConfig:
    max_index: int = 10


def quotient_pair(rays):
    return from_log_discrepancies(make_fan(len(rays[0]), [rays]), [1] * len(rays))


FAMILIES = {
    "A_(r-1) surface": lambda r: [(1, 0), (1, r)],
    "1/r(1,-1,1)": lambda r: [(1, 0, 0), (0, 1, 0), (-1, 1, r)],
    "1/r(1,1,1)": lambda r: [(1, 0, 0), (0, 1, 0), (-1, -1, r)],
}


def rows(cfg: TableConfig):
    for family, rays_of in FAMILIES.items():
        for r in range(2, cfg.max_index + 1):
            p = quotient_pair(rays_of(r))
            top = p.fan.maximal_cones[0]
            value, witness = mld_orbit(p, top)
            cl = classify(p)
            kind = "terminal" if cl.terminal else "canonical" if cl.canonical else "klt" if cl.klt else "lc"
            yield family, r, index(top), value, witness, kind


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--max-index", type=int, default=TableConfig.max_index)
    cfg = TableConfig(max_index=ap.parse_args().max_index)
    current = None
    for family, r, idx, value, witness, kind in rows(cfg):
        if family != current:
            current = family
            print(f"\n{family}")
            print(f"{'r':>3}  {'index':>5}  {'mld':>6}  {'class':<9}  witness")
        print(f"{r:>3}  {idx:>5}  {str(value):>6}  {kind:<9}  {list(witness)}")


if __name__ == "__main__":
    main()

"""Command-line front end: ``toricmld <command> ...``.

Exit status is 0 on success, 1 when ``verify`` finds violations, 2 for
usage and parse errors and 3 for input that parses but is not a valid fan
or log pair.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import List, Optional, Sequence

from . import __version__
from .cone import NotPointed, box_points, index, is_simplicial, is_smooth_cone, make_cone
from .fan import Fan, resolve, stellar_subdivide
from .lattice import primitive
from .logpair import (
    CoefficientOutOfRange,
    NotRCartier,
    ToricLogPair,
    classify,
    make_pair,
    mld_orbit,
    product_pair,
    pullback_boundary,
    report,
)
from .pairfile import InvalidPair, PairFile, ParseError, build_report, cone_record, dumps, read_pair_file
from .verify import ALL_PROPS, MODES, GenConfig, GenerationExhausted, gen_pairs, run_checks

EXIT_OK, EXIT_VIOLATION, EXIT_USAGE, EXIT_INVALID = 0, 1, 2, 3
DEFAULT_PROPS = tuple(p for p in ALL_PROPS if p != "bound-literal")


class CliError(Exception):
    def __init__(self, msg: str, status: int):
        super().__init__(msg)
        self.status = status


def _out(text: str = "") -> None:
    sys.stdout.write(text + "\n")


def _note(text: str) -> None:
    sys.stderr.write(f"toricmld: {text}\n")


# -- loading ------------------------------------------------------------------


def _parse(path: str) -> PairFile:
    try:
        return read_pair_file(path)
    except OSError as e:
        raise CliError(f"{path}: {e.strerror}", EXIT_USAGE) from None
    except ParseError as e:
        raise CliError(f"{path}: {e}", EXIT_USAGE) from None


def _fan(pf: PairFile, path: str) -> Fan:
    try:
        return pf.to_fan()
    except InvalidPair as e:
        raise CliError(f"{path}: {e}", EXIT_INVALID) from None


def _pair(pf: PairFile, path: str) -> ToricLogPair:
    fan = _fan(pf, path)
    try:
        return make_pair(fan, dict(zip(pf.rays, pf.boundary)))
    except NotRCartier as e:
        raise CliError(f"{path}: K + B is not R-Cartier on cone {pf.cone_name(e.cone)}", EXIT_INVALID) from None
    except CoefficientOutOfRange as e:
        ray = pf.rays.index(fan.rays[e.ray_id])
        raise CliError(f"{path}: boundary coefficient {e.value} of ray {ray} is outside [0, 1]", EXIT_INVALID) from None


def _load(path: str):
    pf = _parse(path)
    return pf, _pair(pf, path)


def _ray_ids(text: str) -> List[int]:
    try:
        ids = [int(x) for x in text.replace(",", " ").split()]
    except ValueError:
        raise CliError(f"bad cone selector {text!r}", EXIT_USAGE) from None
    if not ids:
        raise CliError("empty cone selector", EXIT_USAGE)
    return ids


def _select_cone(pf: PairFile, p: ToricLogPair, text: str):
    ids = _ray_ids(text)
    bad = [i for i in ids if not 0 <= i < len(pf.rays)]
    if bad:
        raise CliError(f"cone selector names unknown ray {bad[0]}", EXIT_USAGE)
    try:
        c = make_cone(pf.rank, [pf.rays[i] for i in ids])
    except NotPointed:
        c = None
    if c is None or c not in p.fan or sorted(ids) != pf.ray_ids(c):
        raise CliError(f"rays {sorted(ids)} do not span a cone of the fan", EXIT_USAGE)
    return c


def _write(pf: PairFile, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(pf.to_text())


def _header(pf: PairFile) -> None:
    _out(f"# {pf.name or '(unnamed)'}  rank {pf.rank}")
    for i, (r, b) in enumerate(zip(pf.rays, pf.boundary)):
        _out(f"#   ray {i} {list(r)}  b = {b}  a = {1 - b}")


def _table(rows: Sequence[Sequence[str]]) -> None:
    widths = [max(len(r[k]) for r in rows) for k in range(len(rows[0]))]
    for r in rows:
        _out("  ".join(x.ljust(w) for x, w in zip(r, widths)).rstrip())


# -- commands -----------------------------------------------------------------


def cmd_mld(args) -> int:
    pf, p = _load(args.file)
    cones = [_select_cone(pf, p, args.cone)] if args.cone else list(p.fan.cones)
    rep = report(p)
    if args.json:
        doc = build_report(pf, p)
        doc["cones"] = [cone_record(pf, p, c, rep) for c in cones]
        for key in ("spectrum", "strata", "classification"):
            del doc[key]
        sys.stdout.write(dumps(doc))
        return EXIT_OK
    _header(pf)
    rows = [("cone", "dim", "mld_orbit", "mld_point", "witness")]
    for c in cones:
        rows.append(
            (
                pf.cone_name(c),
                str(c.dim),
                str(rep.orbit_mld[c]),
                str(rep.closed_point_mld[c]),
                str(list(rep.witness[c])),
            )
        )
    _table(rows)
    return EXIT_OK


def cmd_spectrum(args) -> int:
    pf, p = _load(args.file)
    rep = report(p)
    if args.json:
        doc = build_report(pf, p)
        sys.stdout.write(dumps({k: doc[k] for k in ("tool", "version", "input_digest", "spectrum")}))
        return EXIT_OK
    _out("spectrum: " + ", ".join(str(x) for x in rep.spectrum))
    return EXIT_OK


def cmd_stratify(args) -> int:
    pf, p = _load(args.file)
    rep = report(p)
    if args.json:
        doc = build_report(pf, p)
        sys.stdout.write(dumps({k: doc[k] for k in ("tool", "version", "input_digest", "spectrum", "strata")}))
        return EXIT_OK
    for x, cs in rep.strata.items():
        _out(f"{x}: " + " ".join(pf.cone_name(c) for c in cs))
    return EXIT_OK


def cmd_classify(args) -> int:
    pf, p = _load(args.file)
    cl = classify(p)
    if args.json:
        doc = build_report(pf, p)
        sys.stdout.write(dumps({k: doc[k] for k in ("tool", "version", "input_digest", "classification")}))
        return EXIT_OK
    for name in ("lc", "klt", "canonical", "terminal"):
        flag = getattr(cl, name)
        line = f"{name}: {'yes' if flag else 'no'}"
        if not flag:
            c = cl.violations[name]
            line += f"  (cone {pf.cone_name(c)}, mld_orbit {mld_orbit(p, c)[0]})"
        _out(line)
    return EXIT_OK


def _smooth_records(pf: PairFile, fan: Fan) -> List[dict]:
    out = []
    for c in fan.cones:
        simplicial = is_simplicial(c)
        out.append(
            {
                "rays": pf.ray_ids(c),
                "dim": c.dim,
                "smooth": is_smooth_cone(c),
                "simplicial": simplicial,
                "index": index(c) if simplicial else None,
                "box_points": len(box_points(c).points) if simplicial else None,
            }
        )
    return out


def cmd_smooth(args) -> int:
    pf = _parse(args.file)
    fan = _fan(pf, args.file)
    records = _smooth_records(pf, fan)
    if args.json:
        doc = {"tool": "toricmld", "version": __version__, "input_digest": pf.digest()}
        doc["smooth"] = all(r["smooth"] for r in records)
        doc["cones"] = records
        sys.stdout.write(dumps(doc))
        return EXIT_OK
    rows = [("cone", "dim", "smooth", "index", "box_points")]
    for r in records:
        dash = lambda x: "-" if x is None else str(x)  # noqa: E731
        rows.append(("[" + ",".join(map(str, r["rays"])) + "]", str(r["dim"]), str(r["smooth"]).lower(),
                     dash(r["index"]), dash(r["box_points"])))
    _table(rows)
    _out(f"fan smooth: {'yes' if all(r['smooth'] for r in records) else 'no'}")
    return EXIT_OK


def _crepant_file(p: ToricLogPair, fan: Fan, name: str) -> PairFile:
    boundary = pullback_boundary(p, fan)
    out = PairFile.from_fan(fan, boundary, name)
    outside = [i for i, b in enumerate(boundary) if not 0 <= b <= 1]
    if outside:
        _note(
            f"crepant boundary of output ray {outside[0]} is {boundary[outside[0]]}, outside [0, 1]; "
            "the output describes a fan with a non-effective pullback and only 'smooth' will accept it"
        )
    return out


def cmd_resolve(args) -> int:
    pf, p = _load(args.file)
    sub = resolve(p.fan)
    out = _crepant_file(p, sub.target, pf.name)
    _write(out, args.output)
    _out(f"{len(sub.new_rays)} new rays, {len(sub.target.maximal_cones)} maximal cones")
    for r in sub.new_rays:
        _out(f"  ray {out.rays.index(r)} {list(r)}  a = {1 - out.boundary[out.rays.index(r)]}")
    return EXIT_OK


def cmd_witness(args) -> int:
    pf, p = _load(args.file)
    c = _select_cone(pf, p, args.cone)
    a, w = mld_orbit(p, c)
    _out(f"cone {pf.cone_name(c)}: mld_orbit {a}, witness {list(w)}")
    if c.dim == 0:
        _note("the zero cone has no witness divisor; nothing to do")
        return EXIT_OK
    v = primitive(w)
    if v in p.fan.ray_index:
        _note(f"witness {list(v)} is already ray {pf.rays.index(v)}; no subdivision performed")
        _out(f"ray {list(v)}  a = {p.a(v)}")
        if args.output:
            _write(PairFile.from_pair(p, pf.name), args.output)
        return EXIT_OK
    sub = stellar_subdivide(p.fan, v)
    out = _crepant_file(p, sub.target, pf.name)
    new_a = 1 - out.boundary[out.rays.index(v)]
    _out(f"new ray {list(v)}  a = {new_a}  ({'equals' if new_a == a else 'DIFFERS FROM'} mld_orbit)")
    if args.output:
        _write(out, args.output)
    return EXIT_OK


def _props(text: Optional[str]) -> List[str]:
    if text is None:
        return list(DEFAULT_PROPS)
    props = [x.strip() for x in text.split(",")]
    if not all(props) or len(set(props)) != len(props):
        raise CliError(f"malformed property list {text!r}", EXIT_USAGE)
    unknown = [x for x in props if x not in ALL_PROPS]
    if unknown:
        raise CliError(f"unknown property {unknown[0]!r}; choose from {', '.join(ALL_PROPS)}", EXIT_USAGE)
    return props


def cmd_verify(args) -> int:
    props = _props(args.props)
    if args.random:
        try:
            cfg = GenConfig(
                rank=args.rank, max_rays=args.max_rays, coefficient_mode=args.mode, seed=args.seed, count=args.count
            )
        except ValueError as e:
            raise CliError(str(e), EXIT_USAGE) from None
        try:
            pairs = gen_pairs(cfg)
        except GenerationExhausted as e:
            raise CliError(str(e), EXIT_INVALID) from None
        source = {"random": True, "seed": cfg.seed, "rank": cfg.rank, "mode": cfg.coefficient_mode,
                  "prng": "numpy PCG64 (SeedSequence.spawn)"}
    else:
        pairs = [_load(f)[1] for f in args.file]
        source = {"random": False, "files": list(args.file)}
    results = run_checks(pairs, props)
    failed = any(not r.passed for r in results.values())
    if args.json:
        doc = {"tool": "toricmld", "version": __version__, "source": source, "instances": len(pairs),
               "passed": not failed, "properties": {}}
        for name, r in results.items():
            doc["properties"][name] = {"passed": r.passed, "instances": r.instances,
                                       "violations": r.violations, "notes": r.notes}
        sys.stdout.write(json.dumps(doc, indent=2) + "\n")
    else:
        if args.random:
            _out(f"seed {source['seed']}  rank {source['rank']}  mode {source['mode']}  prng {source['prng']}")
        _out(f"{len(pairs)} instances")
        for name, r in results.items():
            extra = "".join(f"  {k}={v}" for k, v in sorted(r.notes.items()))
            _out(f"{'PASS' if r.passed else 'FAIL'} {name}: {r.instances} checked, {len(r.violations)} violations{extra}")
            for v in r.violations:
                _out(f"  cones {v['cones']}  " + " ".join(f"{k}={x}" for k, x in v["values"].items()))
                for line in v["pair"].splitlines():
                    _out("    | " + line)
    return EXIT_VIOLATION if failed else EXIT_OK


def cmd_product(args) -> int:
    pa, p = _load(args.a)
    pb, q = _load(args.b)
    if pa.rank + pb.rank >= 8:
        _note(f"product has rank {pa.rank + pb.rank}; box enumeration may be slow")
    pq = product_pair(p, q)
    name = f"{pa.name or 'A'} x {pb.name or 'B'}"
    _write(PairFile.from_pair(pq, name), args.output)
    _out(f"wrote rank {pq.rank} pair with {len(pq.fan.rays)} rays and {len(pq.fan.maximal_cones)} maximal cones")
    return EXIT_OK


# -- argument parsing ---------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="toricmld", description="Exact minimal log discrepancies of toric log pairs.")
    ap.add_argument("--version", action="version", version=f"toricmld {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("mld", help="orbit and closed-point mlds with witnesses")
    p.add_argument("file")
    g = p.add_mutually_exclusive_group()
    g.add_argument("--cone", help="ray ids of one cone, e.g. 0,1")
    g.add_argument("--all", action="store_true", help="every cone of the fan (default)")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_mld)

    for name, func, text in (
        ("spectrum", cmd_spectrum, "sorted closed-point mld values"),
        ("stratify", cmd_stratify, "cones grouped by closed-point mld"),
        ("classify", cmd_classify, "lc / klt / canonical / terminal"),
        ("smooth", cmd_smooth, "smoothness, index and box size per cone (boundary ignored)"),
    ):
        p = sub.add_parser(name, help=text)
        p.add_argument("file")
        p.add_argument("--json", action="store_true")
        p.set_defaults(func=func)

    p = sub.add_parser("resolve", help="write a smooth refinement with the crepant boundary")
    p.add_argument("file")
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=cmd_resolve)

    p = sub.add_parser("witness", help="blow up the mld witness of one cone")
    p.add_argument("file")
    p.add_argument("--cone", required=True)
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_witness)

    p = sub.add_parser("verify", help="run property checkers")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--file", nargs="+")
    g.add_argument("--random", action="store_true")
    p.add_argument("--rank", type=int, default=3)
    p.add_argument("--count", type=int, default=10)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--max-rays", type=int, default=8)
    p.add_argument("--mode", choices=MODES, default="random")
    p.add_argument("--props", help=f"comma-separated subset of {','.join(ALL_PROPS)}")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("product", help="write the product of two pairs")
    p.add_argument("a")
    p.add_argument("b")
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=cmd_product)
    return ap


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except CliError as e:
        _note(str(e))
        return e.status


if __name__ == "__main__":
    sys.exit(main())

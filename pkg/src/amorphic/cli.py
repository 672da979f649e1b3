"""Command-line front end: construct, verify, fuse, export, charsum, lift-diagnostic."""

from __future__ import annotations

import argparse
import json
import logging
import sys
from collections import Counter

import numpy as np

from . import constructions as cons
from . import schemefile
from .groups import all_character_sums
from .pds import PdsPreconditionError
from .schemes import SchemeAxiomError, fuse, parse_partition

EXIT_OK = 0
EXIT_VERIFY = 1
EXIT_PARSE = 2
EXIT_PRECONDITION = 3

log = logging.getLogger("amorphic")


class _Fail(Exception):
    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


def _load(path) -> schemefile.SchemeFile:
    try:
        return schemefile.read(path)
    except schemefile.SchemeFileError as exc:
        raise _Fail(EXIT_PARSE, f"cannot read {path}: {exc}") from exc


def _chain(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(x) for x in text.split(","))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"chain must look like 4,2,1, got {text!r}") from exc


def _construct_params(args) -> dict:
    name = args.name
    need = {
        "cyclotomic": ("p", "s", "e"),
        "four_class": ("ell",),
        "lifted_four_class": ("ell",),
        "chain": ("q", "m", "ell", "chain"),
        "rotation": ("q", "ell"),
    }[name]
    params = {}
    for key in need:
        val = getattr(args, key)
        if val is None:
            raise _Fail(EXIT_PARSE, f"{name} needs --{key}")
        params[key] = list(val) if key == "chain" else val
    if name == "chain":
        params["form"] = args.form
    return params


def cmd_construct(args) -> int:
    params = _construct_params(args)
    try:
        c = cons.build(args.name, **params)
    except (cons.ConstructionError, PdsPreconditionError, SchemeAxiomError, ValueError) as exc:
        raise _Fail(EXIT_PRECONDITION, str(exc)) from exc
    sf = schemefile.SchemeFile.from_scheme(c.scheme, {"construction": c.name, "params": c.params,
                                                      "class_names": c.class_names})
    schemefile.write(sf, args.out)
    print(f"{c.name} {c.params}: {c.scheme.d} classes, sizes {c.sizes()}, group {c.group} -> {args.out}")
    return EXIT_OK


def cmd_verify(args) -> int:
    sf = _load(args.path)
    rep = schemefile.verify_file(sf, args.mode, args.amorphy)
    print(rep.to_text())
    if args.report:
        with open(args.report, "w") as fh:
            json.dump(rep.to_dict(), fh, indent=2, default=_jsonable)
            fh.write("\n")
    return EXIT_OK if rep.ok else EXIT_VERIFY


def _jsonable(obj):
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, (np.ndarray, tuple)):
        return list(obj)
    return str(obj)


def cmd_fuse(args) -> int:
    sf = _load(args.path)
    try:
        partition = parse_partition(args.partition)
        fused = fuse(sf.assemble(), partition)
    except SchemeAxiomError as exc:
        raise _Fail(EXIT_VERIFY, f"input is not a scheme: {exc}") from exc
    except ValueError as exc:
        raise _Fail(EXIT_PRECONDITION, str(exc)) from exc
    prov = dict(sf.provenance or {})
    prov["fusion"] = args.partition
    schemefile.write(schemefile.SchemeFile.from_scheme(fused, prov), args.out)
    print(f"fused by {args.partition}: {fused.d} classes, sizes {[len(c) for c in fused.classes]} -> {args.out}")
    return EXIT_OK


def cmd_export(args) -> int:
    sf = _load(args.path)
    try:
        edges = schemefile.export_edges(sf, args.cls)
    except IndexError as exc:
        raise _Fail(EXIT_PRECONDITION, str(exc)) from exc
    with open(args.out, "w") as fh:
        fh.writelines(f"{u} {v}\n" for u, v in edges)
    print(f"class {args.cls}: {len(edges)} edges -> {args.out}")
    return EXIT_OK


def cmd_charsum(args) -> int:
    sf = _load(args.path)
    if not 1 <= args.cls <= len(sf.classes):
        raise _Fail(EXIT_PRECONDITION, f"class index {args.cls} out of range 1..{len(sf.classes)}")
    S = sf.classes[args.cls - 1]
    sums = all_character_sums(S)
    print(f"class {args.cls} (size {len(S)}) in {sf.group}")
    if sums.all_rational():
        spectrum = Counter(int(x) for x in sums.integers()[1:])
        for value, count in sorted(spectrum.items()):
            print(f"  {value}: {count} nonprincipal characters")
    else:
        spectrum = Counter(str(sums[i]) for i in range(1, len(sums)))
        for value, count in sorted(spectrum.items()):
            print(f"  {value}: {count} nonprincipal characters")
    return EXIT_OK


def cmd_lift_diagnostic(args) -> int:
    try:
        rows = cons.lifted_diagnostic(args.ell)
    except cons.ConstructionError as exc:
        raise _Fail(EXIT_PRECONDITION, str(exc)) from exc
    target = 4 ** (args.ell - 1)
    tally = Counter((r.o0_sum, r.rest_sum, r.lifted_sum) for r in rows)
    print(f"{len(rows)} order-4 characters; expected O_0 sums +-{target}")
    for (o0, rest, lifted), n in sorted(tally.items()):
        print(f"  O_0 {o0:+d}, D_1\\O_0 {rest:+d}, L_1 {lifted:+d}: {n}")
    ok = all(abs(r.o0_sum) == target and (r.o0_sum < 0 or r.rest_sum == 0) and
             r.lifted_sum == r.o0_sum - r.rest_sum for r in rows)
    print("pattern holds" if ok else "pattern FAILS")
    return EXIT_OK if ok else EXIT_VERIFY


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="amorphic", description="Build and certify amorphic association schemes.")
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("construct", help="build a scheme and write it to a file")
    p.add_argument("name", choices=cons.CONSTRUCTION_NAMES)
    for key in ("ell", "q", "p", "s", "e", "m"):
        p.add_argument(f"--{key}", type=int)
    p.add_argument("--chain", type=_chain, help="divisor chain, e.g. 4,2,1")
    p.add_argument("--form", choices=("elliptic", "hyperbolic"), default="elliptic")
    p.add_argument("-o", "--out", required=True)
    p.set_defaults(func=cmd_construct)

    p = sub.add_parser("verify", help="verify every class and the amorphy of a scheme file")
    p.add_argument("path")
    p.add_argument("--mode", choices=("differences", "characters", "both"), default="both")
    p.add_argument("--amorphy", choices=("exhaustive", "vandam", "both"), default="both")
    p.add_argument("--report", help="also write a JSON report here")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("fuse", help="fuse classes along a partition such as 1|2,3,4")
    p.add_argument("path")
    p.add_argument("partition")
    p.add_argument("-o", "--out", required=True)
    p.set_defaults(func=cmd_fuse)

    p = sub.add_parser("export", help="write the Cayley graph of one class as an edge list")
    p.add_argument("path")
    p.add_argument("cls", type=int, metavar="class")
    p.add_argument("-o", "--out", required=True)
    p.set_defaults(func=cmd_export)

    p = sub.add_parser("charsum", help="print the character-sum spectrum of one class")
    p.add_argument("path")
    p.add_argument("cls", type=int, metavar="class")
    p.set_defaults(func=cmd_charsum)

    p = sub.add_parser("lift-diagnostic", help="restricted character sums behind the Galois-ring lift")
    p.add_argument("--ell", type=int, default=2)
    p.set_defaults(func=cmd_lift_diagnostic)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s: %(message)s")
    try:
        return args.func(args)
    except _Fail as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())

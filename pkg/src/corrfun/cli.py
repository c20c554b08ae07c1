"""Command-line interface.

Exit codes: 0 success, 1 input error, 2 guard exceeded, 3 verification failure.
Big integers are written as decimal strings in JSON.  The radical formula
assumes characteristic 0, where Σ (dim V)² over simple Aut-modules is |Aut|.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys

from .catalog import builtin_lattice, builtin_poset
from .correspondence import all_relations, compose, format_correspondence, parse_correspondence
from .dimension import (SimpleModuleDescriptor, dim_fundamental, dim_simple, example_table,
                        poset_label, radical_dim, table_records)
from .errors import CorrfunError, GuardError, InputError, VerificationError
from .functor import matrix_product, sign_rep, simple_module
from .lattice import parse_lattice
from .oracle import DEFAULT_GUARD_CELLS, corrupt_u, verify_basis
from .poset import down_ideal_lattice, enumerate_posets, parse_poset


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _read(path: str) -> str:
    try:
        with open(path) as fh:
            return fh.read()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None


def load_poset(spec: str):
    return parse_poset(_read(spec)) if os.path.exists(spec) else builtin_poset(spec)


def load_lattice(spec: str):
    return parse_lattice(_read(spec)) if os.path.exists(spec) else builtin_lattice(spec)


def _emit(records: list[dict], fmt: str, extra: dict | None = None) -> str:
    if fmt == "json":
        payload = {"rows": records, **(extra or {})} if extra else records
        return json.dumps(payload, sort_keys=True) + "\n"
    if not records:
        return ""
    fields = list(records[0])
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.DictWriter(buf, fieldnames=fields, lineterminator="\n")
        w.writeheader()
        w.writerows(records)
        return buf.getvalue()
    widths = {f: max(len(f), *(len(str(r[f])) for r in records)) for f in fields}
    lines = ["  ".join(f.rjust(widths[f]) for f in fields)]
    for r in records:
        lines.append("  ".join(str(r[f]).rjust(widths[f]) for f in fields))
    out = "\n".join(lines) + "\n"
    for k, v in (extra or {}).items():
        out += f"{k}: {v}\n"
    return out


def cmd_dims(args) -> str:
    p = load_poset(args.poset)
    d = SimpleModuleDescriptor.of(p, args.dim_v)
    fund = dim_fundamental(p.size, d.g_size, args.x) if args.x >= p.size else 0
    rec = {"e": p.size, "aut": d.aut_order, "g": d.g_size, "x": args.x,
           "fundamental": str(fund), "simple": str(dim_simple(d, args.x)), "dim_v": args.dim_v}
    return _emit([rec], args.format)


def cmd_radical(args) -> str:
    if not 0 <= args.n <= 8:
        raise GuardError("radical is limited to 0 <= n <= 8")
    value = radical_dim(args.n, args.threads)
    if args.table:
        rows = table_records(example_table(args.n, args.threads))
        return _emit(rows, args.format, {"radical": str(value), "n": args.n})
    return _emit([{"n": args.n, "radical": str(value)}], args.format)


def cmd_posets(args) -> str:
    recs = [{"index": i, "covers": poset_label(p), "aut": aut}
            for i, (p, aut) in enumerate(enumerate_posets(args.e, args.threads))]
    return _emit(recs, args.format)


def cmd_table(args) -> str:
    rows = example_table(args.n, args.threads)
    grand = sum(r.total for r in rows)
    return _emit(table_records(rows), args.format,
                 {"grand_total": str(grand), "algebra_dim": str(2 ** (args.n * args.n))})


def _module(args):
    p = load_poset(args.poset)
    module = simple_module(p, args.x)
    if args.vrep == "sign":
        module = simple_module(p, args.x, sign_rep(module.orbits.group))
    if args.dim_v != 1 and args.dim_v != module.dim_v:
        raise InputError("rep builds V itself; use --vrep instead of --dim-v")
    return module


def cmd_rep(args) -> str:
    module = _module(args)
    x = args.x
    if args.check or args.all:
        count = 1 << (x * x)
        if count * count > args.guard_cells:
            raise GuardError(f"{count} relations on {x} points exceed the guard")
    if args.check:
        rels = list(all_relations(x))
        mats = {r: module.matrix(r) for r in rels}
        for r in rels:
            for s in rels:
                if matrix_product(mats[r], mats[s]) != mats[compose(r, s)]:
                    raise VerificationError(
                        f"not a homomorphism at {format_correspondence(r)!r}, {format_correspondence(s)!r}")
    if args.relation:
        rels = [parse_correspondence(_read(args.relation))]
        if rels[0].source_size != x or rels[0].target_size != x:
            raise InputError(f"relation must be on {x} points")
    elif args.all:
        rels = list(all_relations(x))
    else:
        rels = []
    ob = module.orbits
    payload = {
        "basis": [list(m) for m in ob.basis.maps],
        "orbits": [list(ob.basis.maps[p]) for p in ob.representatives],
        "dimension": module.dimension,
    }
    if args.check:
        payload["check"] = "passed"
    mats = [[[str(v) for v in row] for row in module.matrix(r)] for r in rels]
    if args.relation:
        payload["matrix"] = mats[0]
    elif args.all:
        payload["matrices"] = [{"relation": [list(row) for row in r.to_matrix()], "matrix": m}
                               for r, m in zip(rels, mats)]
    if args.format == "json":
        return json.dumps(payload, sort_keys=True) + "\n"
    out = [f"dimension: {module.dimension}", f"orbits: {payload['orbits']}"]
    if args.check:
        out.append("check: passed")
    for r, m in zip(rels, mats):
        out.append("relation:")
        out.extend(" ".join(map(str, row)) for row in r.to_matrix())
        out.append("matrix:")
        out.extend(" ".join(row) for row in m)
    return "\n".join(out) + "\n"


def cmd_verify(args) -> str:
    if (args.lattice is None) == (args.poset is None):
        raise InputError("give exactly one of --lattice or --poset")
    lat = load_lattice(args.lattice) if args.lattice else down_ideal_lattice(load_poset(args.poset))
    override = corrupt_u(lat) if args.corrupt else None
    report = verify_basis(lat, args.x, args.guard_cells, override)
    if args.format == "json":
        text = report.to_json(timings=args.timings) + "\n"
    else:
        recs = [{"check": k, "passed": c.passed,
                 "detail": json.dumps(c.detail, sort_keys=True)}
                for k, c in report.checks.items()]
        text = _emit(recs, args.format)
    if not report.passed:
        raise _ReportFailure(text, report)
    return text


class _ReportFailure(VerificationError):
    def __init__(self, text, report):
        super().__init__(f"verification failed: {', '.join(report.failures())}")
        self.text = text


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--format", choices=("json", "csv", "text"), default="text")
    common.add_argument("--threads", type=int, default=1,
                        help="worker processes for poset enumeration")
    common.add_argument("--dim-v", type=int, default=1, help="dimension of V")
    common.add_argument("--guard-cells", type=int, default=DEFAULT_GUARD_CELLS)

    parser = _Parser(prog="corrfun", description=__doc__.split("\n")[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("dims", parents=[common], help="dimensions for one poset")
    p.add_argument("poset", help="builtin name (chainK, antichainK, V, ...) or poset file")
    p.add_argument("--x", type=int, required=True)
    p.set_defaults(func=cmd_dims)

    p = sub.add_parser("radical", parents=[common], help="Jacobson radical dimension")
    p.add_argument("n", type=int)
    p.add_argument("--table", action="store_true", help="also print the per-class table")
    p.set_defaults(func=cmd_radical)

    p = sub.add_parser("posets", parents=[common], help="posets up to isomorphism")
    p.add_argument("e", type=int)
    p.set_defaults(func=cmd_posets)

    p = sub.add_parser("table", parents=[common], help="per-class dimension table")
    p.add_argument("n", type=int)
    p.set_defaults(func=cmd_table)

    p = sub.add_parser("rep", parents=[common], help="representation matrices")
    p.add_argument("poset")
    p.add_argument("--x", type=int, required=True)
    p.add_argument("--relation", help="relation file ('X X' then rows of 0/1)")
    p.add_argument("--all", action="store_true", help="matrices of every relation")
    p.add_argument("--check", action="store_true", help="verify the homomorphism property")
    p.add_argument("--vrep", choices=("trivial", "sign"), default="trivial")
    p.set_defaults(func=cmd_rep)

    p = sub.add_parser("verify", parents=[common], help="oracle check of the basis")
    p.add_argument("--lattice", help="builtin lattice name or lattice file")
    p.add_argument("--poset", help="use the lattice of lower ideals of this poset")
    p.add_argument("--x", type=int, required=True)
    p.add_argument("--corrupt", action="store_true",
                   help="negative control: double a coefficient of the first u_a")
    p.add_argument("--timings", action="store_true")
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.threads < 1:
        parser.error("--threads must be positive")
    if args.dim_v < 1:
        parser.error("--dim-v must be positive")
    if getattr(args, "x", 0) < 0:
        parser.error("--x must be non-negative")
    try:
        sys.stdout.write(args.func(args))
    except _ReportFailure as exc:
        sys.stdout.write(exc.text)
        print(f"corrfun: {exc}", file=sys.stderr)
        return exc.exit_code
    except CorrfunError as exc:
        print(f"corrfun: {exc}", file=sys.stderr)
        return exc.exit_code
    return 0


if __name__ == "__main__":
    sys.exit(main())

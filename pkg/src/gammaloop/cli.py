"""Command-line entry point.

Every subcommand prints ``key=value`` lines whose first line is
``status=pass|fail|error``.  Exit code 0 means pass, 1 a property failure,
2 an input or precondition error.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path
from typing import Sequence, TextIO

from . import constructions as cons
from .errors import ClosureIncomplete, ConsistencyError, LoopInputError, PreconditionError
from .experiments import EXPERIMENTS
from .groups import FAMILIES, GroupSpec, build_group
from .report import Report, render_many
from .search import GAMMA_IDENTITIES, SearchSpec, search_loops
from .structure import (center, derived_series, hall_subloop, lagrange_cauchy_audit,
                        enumerate_subloops, sylow_subloop, upper_central_series)
from .table import CayleyTable, format_loop, is_isomorphic, read_loop, write_loop
from .terms import IdentitySyntaxError, parse_identity, parse_identity_file, verify_identity
from .varieties import VARIETIES

INPUT_ERRORS = (LoopInputError, PreconditionError, IdentitySyntaxError, OSError)


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"status=error\nerror={message}")
        sys.exit(2)


def _int_list(text: str) -> list[int]:
    try:
        return [int(v) for v in text.replace(",", " ").split()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="gammaloop", description="Γ-loops, Bruck loops and finite loop tools.")
    p.add_argument("--jobs", type=int, default=1, help="worker count (results do not depend on it)")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def loop_input(sp, required=True):
        sp.add_argument("--in", dest="input", required=required, help="loop file ('-' for stdin)")
        sp.add_argument("--normalize", action="store_true", help="relabel so the identity is 0")

    sp = sub.add_parser("construct", help="build a group from the corpus families")
    sp.add_argument("--family", required=True, choices=FAMILIES)
    sp.add_argument("--params", nargs="*", type=int, default=[])
    sp.add_argument("--out")

    sp = sub.add_parser("convert", help="read a loop file and write it back in canonical form")
    loop_input(sp)
    sp.add_argument("--out")

    sp = sub.add_parser("check", help="run variety checks and identities")
    loop_input(sp)
    sp.add_argument("--variety", default="", help=f"comma list from: {','.join(VARIETIES)}")
    sp.add_argument("--identity", action="append", default=[], help="extra identity, e.g. 'x*y = y*x'")
    sp.add_argument("--identities", help="identity file")

    sp = sub.add_parser("analyze", help="structure of a loop")
    loop_input(sp)
    sp.add_argument("--center", action="store_true")
    sp.add_argument("--series", action="store_true", help="upper central series")
    sp.add_argument("--derived", action="store_true", help="derived series")
    sp.add_argument("--subloops", action="store_true")
    sp.add_argument("--sylow", type=int, action="append", default=[])
    sp.add_argument("--hall", type=_int_list, action="append", default=[])
    sp.add_argument("--audit", action="store_true", help="Lagrange and Cauchy audit")

    sp = sub.add_parser("search", help="exhaustive loop search")
    sp.add_argument("--order", type=int, required=True)
    sp.add_argument("--identities", help="identity file")
    sp.add_argument("--gamma", action="store_true", help="use the Γ identity set (implies --commutative)")
    sp.add_argument("--commutative", action="store_true")
    sp.add_argument("--up-to-iso", action="store_true")
    sp.add_argument("--max-solutions", type=int)
    sp.add_argument("--budget-ms", type=int)
    sp.add_argument("--node-budget", type=int)
    sp.add_argument("--out-dir", help="write each solution as solution-NNN.loop")

    sp = sub.add_parser("iso", help="isomorphism test")
    loop_input(sp)
    sp.add_argument("--against", required=True, help="second loop file")

    sp = sub.add_parser("gamma", help="construct a Γ-loop")
    loop_input(sp)
    g = sp.add_mutually_exclusive_group(required=True)
    g.add_argument("--from-group", action="store_true")
    g.add_argument("--from-bruck", action="store_true")
    sp.add_argument("--out")

    sp = sub.add_parser("bruck", help="construct a Bruck loop")
    loop_input(sp)
    g = sp.add_mutually_exclusive_group(required=True)
    g.add_argument("--from-group", action="store_true")
    g.add_argument("--from-gamma", action="store_true")
    sp.add_argument("--out")

    sp = sub.add_parser("roundtrip", help="check a functor round trip")
    loop_input(sp)
    sp.add_argument("--as", dest="kind", required=True, choices=("gamma", "bruck"))

    sp = sub.add_parser("experiment", help="run a named experiment bundle")
    sp.add_argument("name", choices=sorted(EXPERIMENTS))
    return p


def _read(path: str, normalize: bool) -> CayleyTable:
    if path == "-":
        from .table import parse_loop
        return parse_loop(sys.stdin.read(), normalize)
    return read_loop(path, normalize)


def _emit_loop(t: CayleyTable, out: str | None, comment: str, stdout: TextIO) -> None:
    if out:
        write_loop(t, out, comment)
        stdout.write(f"status=pass\norder={t.n}\nout={out}\n")
    else:
        stdout.write(format_loop(t, comment))


def _cmd_construct(a, out):
    spec = GroupSpec(a.family, tuple(a.params))
    t = build_group(spec)
    _emit_loop(t, a.out, spec.name(), out)
    return 0


def _cmd_convert(a, out):
    _emit_loop(_read(a.input, a.normalize), a.out, None, out)
    return 0


def _cmd_check(a, out):
    t = _read(a.input, a.normalize)
    reports: list[Report] = []
    for name in filter(None, (v.strip() for v in a.variety.split(","))):
        if name not in VARIETIES:
            raise LoopInputError(f"unknown variety {name!r}; choose from {','.join(VARIETIES)}")
        reports.append(VARIETIES[name](t))
    idents = [parse_identity(s) for s in a.identity]
    if a.identities:
        idents += parse_identity_file(Path(a.identities).read_text())
    reports.extend(verify_identity(t, i) for i in idents)
    if not reports:
        raise LoopInputError("nothing to check; give --variety or --identity")
    if len(reports) == 1:
        out.write(reports[0].render())
    else:
        out.write(render_many(reports, "check"))
    return 0 if all(r.passed for r in reports) else 1


def _cmd_analyze(a, out):
    t = _read(a.input, a.normalize)
    t.require_loop()
    lines = [f"order={t.n}"]
    ok = True
    if a.center:
        z = center(t)
        lines.append(f"center.order={z.order}")
        lines.append(f"center.elements={','.join(map(str, z.elements))}")
    if a.series:
        s = upper_central_series(t)
        lines.append(f"upper_central.orders={','.join(map(str, s.orders))}")
        lines.append(f"upper_central.nilpotent={str(s.terminates).lower()}")
    if a.derived:
        s = derived_series(t)
        lines.append(f"derived.orders={','.join(map(str, s.orders))}")
        lines.append(f"derived.solvable={str(s.terminates).lower()}")
        lines.append(f"derived.reliable={str(s.reliable).lower()}")
    if a.subloops:
        e = enumerate_subloops(t)
        lines.append(f"subloops.count={len(e.subloops)}")
        lines.append(f"subloops.orders={','.join(map(str, e.orders))}")
        lines.append(f"subloops.complete={str(e.complete).lower()}")
    for p in a.sylow:
        h = sylow_subloop(t, p)
        lines.append(f"sylow{p}.order={h.order}")
        lines.append(f"sylow{p}.elements={','.join(map(str, h.elements))}")
    for primes in a.hall:
        h = hall_subloop(t, primes)
        key = "hall" + "_".join(map(str, primes))
        lines.append(f"{key}.order={h.order}")
        lines.append(f"{key}.elements={','.join(map(str, h.elements))}")
    if a.audit:
        rep = lagrange_cauchy_audit(t)
        ok = rep.passed
        lines.extend(rep.lines(prefix="audit."))
    out.write(f"status={'pass' if ok else 'fail'}\ncheck=analyze\n" + "\n".join(lines) + "\n")
    return 0 if ok else 1


def _cmd_search(a, out):
    idents = list(GAMMA_IDENTITIES) if a.gamma else []
    if a.identities:
        idents += parse_identity_file(Path(a.identities).read_text())
    spec = SearchSpec(a.order, idents, commutative=a.commutative or a.gamma, up_to_iso=a.up_to_iso,
                      max_solutions=a.max_solutions, node_budget=a.node_budget, budget_ms=a.budget_ms)
    res = search_loops(spec)
    lines = ["status=pass", "check=search", f"order={a.order}", f"solutions={len(res)}",
             f"raw_solutions={res.raw_count}", f"complete={str(res.complete).lower()}",
             f"nodes={res.nodes}"]
    if res.stop_reason:
        lines.append(f"stopped={res.stop_reason}")
    if a.out_dir:
        d = Path(a.out_dir)
        d.mkdir(parents=True, exist_ok=True)
        for k, t in enumerate(res, 1):
            write_loop(t, str(d / f"solution-{k:03d}.loop"), f"search order {a.order} solution {k}")
        lines.append(f"out_dir={a.out_dir}")
    else:
        for k, t in enumerate(res, 1):
            lines.append(f"solution{k}={';'.join(' '.join(map(str, r)) for r in t.rows())}")
    out.write("\n".join(lines) + "\n")
    return 0


def _cmd_iso(a, out):
    x = _read(a.input, a.normalize)
    y = _read(a.against, a.normalize)
    m = is_isomorphic(x, y)
    if m is None:
        out.write("status=fail\ncheck=iso\nisomorphic=false\n")
        return 1
    images = ",".join(str(m[k]) for k in range(x.n))
    out.write(f"status=pass\ncheck=iso\nisomorphic=true\nmap={images}\n")
    return 0


def _cmd_gamma(a, out):
    t = _read(a.input, a.normalize)
    res = cons.gamma_from_group(t) if a.from_group else cons.gamma_from_bruck(t)
    _emit_loop(res.table, a.out, res.construction, out)
    return 0


def _cmd_bruck(a, out):
    t = _read(a.input, a.normalize)
    res = cons.bruck_from_group(t) if a.from_group else cons.bruck_from_gamma(t)
    _emit_loop(res.table, a.out, res.construction, out)
    return 0


def _cmd_roundtrip(a, out):
    rep = cons.round_trip_report(_read(a.input, a.normalize), a.kind)
    out.write(rep.render())
    if rep.error is not None:
        return 2
    return 0 if rep.passed else 1


def _cmd_experiment(a, out):
    rep = EXPERIMENTS[a.name]()
    out.write(rep.render())
    return 0 if rep.passed else 1


COMMANDS = {
    "construct": _cmd_construct, "convert": _cmd_convert, "check": _cmd_check,
    "analyze": _cmd_analyze, "search": _cmd_search, "iso": _cmd_iso, "gamma": _cmd_gamma,
    "bruck": _cmd_bruck, "roundtrip": _cmd_roundtrip, "experiment": _cmd_experiment,
}


def run(argv: Sequence[str] | None = None, stdout: TextIO | None = None) -> int:
    out = sys.stdout if stdout is None else stdout
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args, out)
    except INPUT_ERRORS as exc:
        out.write(f"status=error\ncheck={args.command}\nerror={exc}\n")
        return 2
    except (ConsistencyError, ClosureIncomplete) as exc:
        out.write(f"status=error\ncheck={args.command}\nerror={exc}\n")
        return 2


def main() -> None:
    sys.exit(run())

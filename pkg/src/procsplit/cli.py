"""Command-line interface.

Exit codes: 0 for success or a positive verdict, 1 for a negative verdict,
2 for usage, parse and validation errors.
"""
from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from .axioms import run_suite
from .equivalence import bisimilar
from .errors import ProcessError
from .regions import async_regions, format_regions, sync_regions
from .reo import compose, parse_topology
from .semantics import DEFAULT_MAX_STATES, explore, from_aut, to_aut
from .splitting import split_spec
from .syntax import format_spec, parse

log = logging.getLogger("procsplit")


class UsageError(Exception):
    pass


def _read(path: str) -> str:
    return Path(path).read_text(encoding="utf-8")


def _write(path: str | None, text: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text, encoding="utf-8")


def _load_spec(path: str, proc: str | None = None):
    spec = parse(_read(path))
    if proc is not None:
        if proc not in spec.definitions:
            raise UsageError(f"{path}: no definition named {proc!r}")
        spec = spec.with_root(proc)
    return spec


def _load_lts(path: str, proc: str | None, max_states: int):
    if path.endswith(".aut"):
        return from_aut(_read(path))
    return explore(_load_spec(path, proc), max_states)


def cmd_check(args) -> int:
    spec = _load_spec(args.file)
    print(f"ok: {len(spec.definitions)} definitions, root {spec.root}")
    return 0


def cmd_lts(args) -> int:
    lts = explore(_load_spec(args.file, args.proc), args.max_states)
    print(f"states: {lts.num_states}, transitions: {len(lts.transitions)}")
    if args.aut:
        _write(args.aut, to_aut(lts))
    return 0


def _report(verdict) -> int:
    if verdict:
        print("bisimilar")
        return 0
    print("not bisimilar")
    print(f"witness: {verdict.witness}")
    return 1


def cmd_bisim(args) -> int:
    l1 = _load_lts(args.file_a, args.proc_a, args.max_states)
    l2 = _load_lts(args.file_b, args.proc_b, args.max_states)
    return _report(bisimilar(l1, l2))


def cmd_split(args) -> int:
    spec = _load_spec(args.file, args.proc)
    actions = [a.strip() for a in args.actions.split(",") if a.strip()]
    result, _ = split_spec(spec, actions, args.word, advance_word=not args.frozen_word)
    _write(args.output, format_spec(result))
    if args.verify:
        if args.output in (None, "-"):
            sys.stdout.write("\n")
        return _report(bisimilar(explore(spec, args.max_states),
                                 explore(result, args.max_states)))
    return 0


def cmd_regions(args) -> int:
    lts = explore(_load_spec(args.file, args.proc), args.max_states)
    regions = sync_regions(lts)
    for line in format_regions(regions):
        print(line)
    if args.topo:
        topo = parse_topology(_read(args.topo))
        for a, b in sorted(async_regions(regions, topo)):
            print(f"{a} -- {b}")
    return 0


def cmd_reo(args) -> int:
    spec = compose(parse_topology(_read(args.topofile)))
    _write(args.output, format_spec(spec))
    return 0


def cmd_axioms(args) -> int:
    failed = 0
    for report in run_suite(args.seed, args.per_axiom):
        status = "ok" if report.ok else f"FAIL ({len(report.failures)})"
        print(f"{report.name:5} {status:10} {report.instances} instances")
        for lhs, rhs, problem in report.failures[:1]:
            print(f"    {lhs}  vs  {rhs}: {problem}")
        failed += not report.ok
    return 1 if failed else 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="procsplit", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    def with_bound(p):
        p.add_argument("--max-states", type=int, default=DEFAULT_MAX_STATES)
        return p

    p = sub.add_parser("check", help="parse and validate a specification")
    p.add_argument("file")
    p.set_defaults(func=cmd_check)

    p = with_bound(sub.add_parser("lts", help="explore the transition system"))
    p.add_argument("file")
    p.add_argument("--proc")
    p.add_argument("--aut", help="write the LTS in Aldebaran format")
    p.set_defaults(func=cmd_lts)

    p = with_bound(sub.add_parser("bisim", help="decide strong bisimilarity"))
    p.add_argument("file_a")
    p.add_argument("file_b")
    p.add_argument("--proc-a")
    p.add_argument("--proc-b")
    p.set_defaults(func=cmd_bisim)

    p = with_bound(sub.add_parser("split", help="split a definition along actions"))
    p.add_argument("file")
    p.add_argument("--proc")
    p.add_argument("--actions", required=True, help="comma-separated action names")
    p.add_argument("--word", default="", help="initial branch word over 1 and 2")
    p.add_argument("--verify", action="store_true",
                   help="check the split against the original")
    p.add_argument("--frozen-word", action="store_true",
                   help="do not extend the branch word at choices (unsound)")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_split)

    p = with_bound(sub.add_parser("regions", help="synchronous and asynchronous regions"))
    p.add_argument("file")
    p.add_argument("--proc")
    p.add_argument("--topo", help="connector topology for asynchronous pairs")
    p.set_defaults(func=cmd_regions)

    p = sub.add_parser("reo", help="compose a connector topology into a specification")
    p.add_argument("topofile")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_reo)

    p = sub.add_parser("axioms", help="randomized axiom soundness suite")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--per-axiom", type=int, default=50)
    p.set_defaults(func=cmd_axioms)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s: %(message)s")
    try:
        return args.func(args)
    except (ProcessError, UsageError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())

"""
kcat command line: check axiom suites, derive structures, run category
actions, and browse the instance zoo.

Usage:
    python src/main.py check [--suite ID] [--objects I,F] SOURCE...
    python src/main.py derive CONSTRUCTION SOURCE... [-o OUT]
    python src/main.py act yd|sch|martin SOURCE...
    python src/main.py zoo list
    python src/main.py zoo emit NAME [-o OUT]
    python src/main.py report REPORT.json

A SOURCE is a structure file path or ``zoo:NAME`` (``zoo:z2_quasi(-1)``).
Exit codes: 0 every axiom passed, 1 some axiom failed, 2 bad input.
"""

import argparse
import json
import logging
import sys

from sympy import QQ

from kcat.errors import KCatError
from kcat.lincat import make_field
from kcat.runner import (DERIVATIONS, SUITES, act, all_passed, derive, provenance, render_json,
                         render_text, run_suite, runs_to_dict)
from kcat.structure_io import emit_text, parse
from kcat.structures import CoquasiBimonadDesc, QuasiBimonadDesc
from kcat.zoo import ZOO, build_instance, zoo_names

EXIT_PASS = 0
EXIT_FAIL = 1
EXIT_INPUT = 2

DEFAULT_SETTINGS = {
    'field': None,
    'suite': 'auto',
    'format': 'text',
    'workers': 1,
    'verify_pre': True,
    'log_level': 'WARNING',
}

ZOO_PREFIX = "zoo:"

logger = logging.getLogger("kcat")


def load_sources(sources, field):
    """Collect the top-level structures of every source, keyed by name."""
    descs = {}
    for source in sources:
        if source.startswith(ZOO_PREFIX):
            loaded = build_instance(source[len(ZOO_PREFIX):], field if field is not None else QQ)
        else:
            loaded = parse(source, field).top
        for name, desc in loaded.items():
            if name in descs:
                raise KCatError(f"structure {name!r} declared by more than one source")
            descs[name] = desc
    logger.info(f"loaded {len(descs)} structure(s) from {len(sources)} source(s)")
    return descs


def write_output(text, path):
    if path is None or path == "-":
        sys.stdout.write(text)
        if not text.endswith("\n"):
            sys.stdout.write("\n")
    else:
        with open(path, 'w', encoding='utf-8') as fh:
            fh.write(text if text.endswith("\n") else text + "\n")
        logger.info(f"wrote {path}")


def emit_runs(runs, args):
    if args.format == 'structured':
        write_output(render_json(runs, args.timings), args.output)
    else:
        write_output(render_text(runs_to_dict(runs, args.timings)), args.output)
    return EXIT_PASS if all_passed(runs) else EXIT_FAIL


def cmd_check(args, field):
    descs = load_sources(args.sources, field)
    objects = [o.strip() for o in args.objects.split(",")] if args.objects else None
    runs = run_suite(descs, args.suite, objects, args.workers)
    if not runs:
        logger.warning("no applicable suite for the given structures")
    return emit_runs(runs, args)


def cmd_derive(args, field):
    descs = load_sources(args.sources, field)
    if args.quasi or args.coquasi:
        wanted = QuasiBimonadDesc if args.quasi else CoquasiBimonadDesc
        descs = {n: d for n, d in descs.items() if isinstance(d, wanted)}
    structures, cells, pre_runs = derive(args.construction, descs, args.verify_pre, args.workers)
    if not structures:
        print(render_text(runs_to_dict(pre_runs)), file=sys.stderr)
        logger.error(f"preconditions of {args.construction} failed; nothing written")
        return EXIT_FAIL
    write_output(emit_text(structures, cells, provenance(args.construction)), args.output)
    return EXIT_PASS


def cmd_act(args, field):
    descs = load_sources(args.sources, field)
    runs = act(args.kind, descs, args.verify_pre, args.workers)
    return emit_runs(runs, args)


def cmd_zoo(args, field):
    if args.zoo_command == 'list':
        lines = []
        for name in zoo_names():
            entry = ZOO[name]
            arg = "(phase)" if entry.takes_phase else ""
            lines.append(f"{name}{arg:8s}  {entry.description}  [{', '.join(entry.suites)}]")
        write_output("\n".join(lines), args.output)
        return EXIT_PASS
    structures = build_instance(args.name, field if field is not None else QQ)
    write_output(emit_text(structures, comments=[f"zoo instance {args.name}"]), args.output)
    return EXIT_PASS


def cmd_report(args, field):
    with open(args.report, encoding='utf-8') as fh:
        data = json.load(fh)
    if 'runs' not in data or 'passed' not in data:
        raise ValueError(f"{args.report} is not a structured report")
    write_output(render_text(data), args.output)
    return EXIT_PASS if data['passed'] else EXIT_FAIL


def build_parser():
    parser = argparse.ArgumentParser(prog="kcat", description=__doc__.split("\n\n")[0].strip())
    parser.add_argument('--field', default=DEFAULT_SETTINGS['field'],
                        help="scalar field: q or fp:<prime>; overrides the files, zoo instances default to q")
    parser.add_argument('--format', choices=('text', 'structured'), default=DEFAULT_SETTINGS['format'])
    parser.add_argument('--workers', type=int, default=DEFAULT_SETTINGS['workers'],
                        help="threads for independent axiom checks")
    parser.add_argument('--timings', action='store_true', help="include elapsed times in reports")
    parser.add_argument('--verify-pre', dest='verify_pre', action='store_true',
                        default=DEFAULT_SETTINGS['verify_pre'])
    parser.add_argument('--no-verify-pre', dest='verify_pre', action='store_false')
    parser.add_argument('-o', '--output', default=None, help="output file (default stdout)")
    parser.add_argument('-v', '--verbose', action='count', default=0)
    sub = parser.add_subparsers(dest='command', required=True)

    check = sub.add_parser('check', help="run axiom suites")
    check.add_argument('--suite', default=DEFAULT_SETTINGS['suite'],
                       help=f"auto or one of: {', '.join(sorted(SUITES))}")
    check.add_argument('--objects', default=None,
                       help="comma list of objects for family checks, e.g. I,F")
    check.add_argument('sources', nargs='+')
    check.set_defaults(handler=cmd_check)

    der = sub.add_parser('derive', help="build a derived structure")
    der.add_argument('construction', choices=sorted(DERIVATIONS))
    der.add_argument('sources', nargs='+')
    kind = der.add_mutually_exclusive_group()
    kind.add_argument('--quasi', action='store_true', help="use only quasi-bimonad inputs")
    kind.add_argument('--coquasi', action='store_true', help="use only coquasi-bimonad inputs")
    der.set_defaults(handler=cmd_derive)

    ac = sub.add_parser('act', help="build and check a category action")
    ac.add_argument('kind', choices=('yd', 'sch', 'martin'))
    ac.add_argument('sources', nargs='+')
    ac.set_defaults(handler=cmd_act)

    zoo = sub.add_parser('zoo', help="list or emit built-in instances")
    zsub = zoo.add_subparsers(dest='zoo_command', required=True)
    zsub.add_parser('list')
    zemit = zsub.add_parser('emit')
    zemit.add_argument('name')
    zoo.set_defaults(handler=cmd_zoo)

    rep = sub.add_parser('report', help="render a structured report as text")
    rep.add_argument('report')
    rep.set_defaults(handler=cmd_report)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    level = DEFAULT_SETTINGS['log_level'] if args.verbose == 0 else ('INFO' if args.verbose == 1 else 'DEBUG')
    logging.basicConfig(level=level, format="[%(levelname)s] %(message)s", stream=sys.stderr)
    try:
        field = make_field(args.field) if args.field else None
        return args.handler(args, field)
    except (KCatError, ValueError, OSError) as e:
        logger.error(str(e))
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())

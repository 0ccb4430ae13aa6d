"""Command-line front end: batch checks on instance files plus the fuzzer.

    gprime validate FILE             every axiom and schema check
    gprime analyze FILE              structure facts: support, hubs, isotropy
    gprime prime FILE                primeness verdict and witnesses
    gprime equivalence FILE          the seven-way harness on the product ring
    gprime fuzz --seed N --count K   random instances, every cross-check

All commands print one report document to stdout and accept ``--output
json|text`` (text is the default).  Reports are byte-identical across runs
on the same input, which is why wall-clock timings only appear when asked
for with ``--timings``.  Witnesses inside prime and equivalence reports are
replayed against the instance before the report is printed, and the count
of replayed witnesses is part of the report.

The product-ring carrier bound resolves in order: ``--max-ring`` flag, the
``GPRIME_MAX_RING`` environment variable, the instance file's ``bounds``
section, then the built-in default of 4096.

Exit codes: 0 success, 1 invalid input (bad file, bad schema, bad flags),
2 a carrier bound was exceeded, 3 internal disagreement.  Exit 3 means two
routes that must agree returned different answers or a reported witness
failed to replay; it signals a bug in the tool, never a property of the
instance, and a green build must never produce it.
"""

from __future__ import annotations

import argparse
import os
import sys
from typing import Dict, Optional, Sequence

from . import __version__
from .errors import (BoundExceeded, GprimeError, InternalDisagreement,
                     MalformedInput)
from .fuzz import run_fuzz
from .instances import (_tool_section, analysis_document, build_instance,
                        equivalence_document, parse, primeness_document,
                        render_report, resolve_bound, validation_document,
                        verify_witnesses)
from .partial import SKEW_RING_BOUND

__all__ = ["main"]


class _ArgumentParser(argparse.ArgumentParser):
    """argparse reserves exit status 2 for usage errors, but here 2 means a
    carrier bound was exceeded; usage errors exit 1 like other bad input."""

    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(1)


def _build_parser() -> _ArgumentParser:
    parser = _ArgumentParser(
        prog="gprime",
        description="Primeness checks for groupoid-graded rings, partial "
                    "actions and groupoid rings.")
    parser.add_argument("--version", action="version",
                        version=f"%(prog)s {__version__}")

    common = _ArgumentParser(add_help=False)
    common.add_argument("--output", choices=("json", "text"), default="text",
                        help="report format (default: text)")
    common.add_argument("--max-ring", type=int, default=None, metavar="N",
                        help="largest product-ring carrier to build "
                             "(default: 4096, or GPRIME_MAX_RING)")

    sub = parser.add_subparsers(dest="command", required=True,
                                metavar="command")

    p = sub.add_parser("validate", parents=[common],
                       help="build the instance and re-run every axiom check")
    p.add_argument("file", help="instance JSON file")

    p = sub.add_parser("analyze", parents=[common],
                       help="emit structure facts without a verdict")
    p.add_argument("file", help="instance JSON file")

    p = sub.add_parser("prime", parents=[common],
                       help="decide primeness and emit replayable witnesses")
    p.add_argument("file", help="instance JSON file")
    p.add_argument("--method", choices=("oracle", "theorem", "all"),
                   default="all",
                   help="decision route; 'all' cross-checks both "
                        "(default: all)")
    p.add_argument("--timings", action="store_true",
                   help="include wall-clock timings (breaks byte-identical "
                        "output)")

    p = sub.add_parser("equivalence", parents=[common],
                       help="evaluate all seven conditions on the product "
                            "ring and check they agree")
    p.add_argument("file", help="instance JSON file")
    p.add_argument("--timings", action="store_true",
                   help="include wall-clock timings (breaks byte-identical "
                        "output)")

    p = sub.add_parser("fuzz", parents=[common],
                       help="generate random instances and assert every "
                            "library invariant on them")
    p.add_argument("--seed", type=int, required=True,
                   help="generator seed; the whole run is reproducible")
    p.add_argument("--count", type=int, required=True,
                   help="number of instances to generate")

    return parser


def _carrier_bound(args, instance=None) -> int:
    """Resolve the bound: flag, then environment, then the instance file."""
    if args.max_ring is not None:
        return args.max_ring
    env = os.environ.get("GPRIME_MAX_RING")
    if env is not None:
        try:
            return int(env)
        except ValueError:
            raise MalformedInput(
                f"GPRIME_MAX_RING must be an integer, got {env!r}")
    if instance is not None:
        return resolve_bound(instance)
    return SKEW_RING_BOUND


def _cmd_validate(args) -> Dict:
    instance = parse(args.file)
    bound = _carrier_bound(args, instance)
    built = build_instance(instance, bound)
    return validation_document(built, bound)


def _cmd_analyze(args) -> Dict:
    instance = parse(args.file)
    bound = _carrier_bound(args, instance)
    built = build_instance(instance, bound)
    return analysis_document(built, bound)


def _cmd_prime(args) -> Dict:
    instance = parse(args.file)
    bound = _carrier_bound(args, instance)
    built = build_instance(instance, bound)
    doc = primeness_document(built, args.method, bound,
                             with_timings=args.timings)
    replayed = verify_witnesses(built, doc, bound)
    doc["witness_verification"] = {"replayed": replayed, "ok": True}
    return doc


def _cmd_equivalence(args) -> Dict:
    instance = parse(args.file)
    bound = _carrier_bound(args, instance)
    built = build_instance(instance, bound)
    doc = equivalence_document(built, bound, with_timings=args.timings)
    replayed = verify_witnesses(built, doc, bound)
    doc["witness_verification"] = {"replayed": replayed, "ok": True}
    return doc


def _cmd_fuzz(args) -> Dict:
    progress = None
    if sys.stderr.isatty():
        def progress(record):
            print(f"[{record.index + 1}/{args.count}] {record.kind} "
                  f"carrier={record.carrier} size={record.size} "
                  f"checks={record.checks}", file=sys.stderr)
    report = run_fuzz(args.seed, args.count, _carrier_bound(args),
                      progress=progress)
    doc = {"tool": _tool_section()}
    doc.update(report.summary())
    doc["disagreements"] = 0  # run_fuzz raises on the first one
    return doc


_COMMANDS = {
    "validate": _cmd_validate,
    "analyze": _cmd_analyze,
    "prime": _cmd_prime,
    "equivalence": _cmd_equivalence,
    "fuzz": _cmd_fuzz,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        doc = _COMMANDS[args.command](args)
    except InternalDisagreement as exc:
        _report_error(exc)
        return 3
    except BoundExceeded as exc:
        _report_error(exc)
        return 2
    except (GprimeError, OSError) as exc:
        _report_error(exc)
        return 1
    sys.stdout.write(render_report(doc, args.output))
    return 0


def _report_error(exc: Exception) -> None:
    print(f"gprime: error: {exc}", file=sys.stderr)
    details = getattr(exc, "details", None)
    if details is not None:
        print(f"gprime: details: {details}", file=sys.stderr)


if __name__ == "__main__":
    raise SystemExit(main())

"""Command-line front end.

Exit codes: 0 success, 1 unreadable input or bad flags, 2 crossing limit
exceeded, 3 a verification check failed.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from typing import Callable, Sequence, TextIO

from .diagram import LinkDiagram, from_json, parse_gauss, parse_pd
from .errors import CrossingLimitExceeded, KnothetaError
from .harness import (
    CorpusError,
    load_corpus,
    reports_to_json,
    reports_to_text,
    verify_corpus,
    verify_diagram,
)
from .homfly import expand_states, homfly_recursive, homfly_state_sum, specialize_to_alexander
from .kauffman import DEFAULT_MAX_CROSSINGS, apply_state, check_limit, jones_unreduced
from .polynomial import LaurentPoly
from .surface import basepoint_circle, dump_state
from .theta import default_cut, theta_homfly, theta_jones

EXIT_OK, EXIT_PARSE, EXIT_LIMIT, EXIT_VERIFY = 0, 1, 2, 3

INVARIANT_COMMANDS = ("jones", "homfly", "homfly-statesum", "theta-j", "theta-h", "alexander")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # keep exit code 2 free for the crossing limit
        raise UsageError(message)


def _add_input(p: argparse.ArgumentParser) -> None:
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--pd", help='PD code, e.g. "X[1,4,2,5] X[3,6,4,1] X[5,2,6,3]"; "U" is a loop')
    src.add_argument("--gauss", help='signed Gauss code, e.g. "O1+U2+O3+U1+O2+U3+"')
    src.add_argument("--file", help="file holding a PD code or a JSON diagram; - reads stdin")
    p.add_argument("--outer-edge", type=int, default=None,
                   help="edge whose left face is the unbounded face")


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.add_argument("--threads", type=int, default=None,
                   help="worker threads (default: KNOTHETA_THREADS or the CPU count)")
    p.add_argument("--max-crossings", type=int, default=DEFAULT_MAX_CROSSINGS)
    p.add_argument("--timings", action="store_true", help="report wall-clock timings")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="knotheta", description="Jones and HOMFLY-PT polynomials of link diagrams.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    helps = {
        "jones": "unreduced Jones polynomial from the Kauffman bracket",
        "homfly": "HOMFLY-PT polynomial by skein recursion",
        "homfly-statesum": "HOMFLY-PT polynomial as a sum over skein-tree states",
        "theta-j": "Jones polynomial from the intersection model",
        "theta-h": "HOMFLY-PT polynomial from the intersection model",
        "alexander": "Alexander polynomial via the HOMFLY-PT specialisation",
        "verify": "run every cross-engine check on one diagram",
    }
    for name, text in helps.items():
        p = sub.add_parser(name, help=text)
        _add_input(p)
        _add_common(p)
        if name in ("theta-j", "theta-h"):
            p.add_argument("--ledger", action="store_true", help="list every state's contribution")
            p.add_argument("--dump-surface", action="store_true",
                           help="include the per-state puncture and specialisation data")
        if name == "theta-j":
            p.add_argument("--literal", action="store_true",
                           help="unsigned sum in s = q^(1/2), without the sign folding")
        if name == "theta-h":
            p.add_argument("--cut-basepoint", type=int, default=None,
                           help="base point b_1..b_2n where the circle is cut (default b_2n)")
    p = sub.add_parser("batch", help="verify every entry of a corpus file")
    p.add_argument("corpus")
    p.add_argument("--lenient", action="store_true", help="skip malformed rows instead of failing")
    p.add_argument("--workers", type=int, default=1, help="entries verified concurrently")
    _add_common(p)
    return parser


def _read_diagram(args: argparse.Namespace, stdin: TextIO) -> tuple[LinkDiagram, dict]:
    if args.pd is not None:
        d, source = parse_pd(args.pd), {"pd": args.pd}
    elif args.gauss is not None:
        d, source = parse_gauss(args.gauss), {"gauss": args.gauss}
    else:
        try:
            text = stdin.read() if args.file == "-" else open(args.file).read()
        except OSError as exc:
            raise CorpusError(f"cannot read {args.file}: {exc}") from exc
        d = from_json(text) if text.lstrip().startswith("{") else parse_pd(text)
        source = {"file": args.file}
    if args.outer_edge is not None:
        d = d.with_outer_edge(args.outer_edge)
        source["outer_edge"] = args.outer_edge
    return d, source


def _surface_dump_jones(d: LinkDiagram) -> list[dict]:
    return [dump_state(d, apply_state(d, s)) for s in range(1 << d.n)]


def _surface_dump_homfly(d: LinkDiagram, cut_basepoint: int | None) -> list[dict]:
    if d.n == 0:
        return []
    b = default_cut(d) if cut_basepoint is None else cut_basepoint
    return [dump_state(d, st.circles, basepoint_circle(st.circles, b)) for st in expand_states(d)]


def _compute(cmd: str, d: LinkDiagram, args: argparse.Namespace) -> tuple[LaurentPoly, dict]:
    """The polynomial for an invariant command plus any extra output fields."""
    extra: dict = {}
    limit = args.max_crossings
    if cmd == "jones":
        return jones_unreduced(d, args.threads, limit), extra
    if cmd == "homfly":
        return homfly_recursive(d, limit), extra
    if cmd == "homfly-statesum":
        return homfly_state_sum(d, limit), extra
    if cmd == "alexander":
        return specialize_to_alexander(homfly_recursive(d, limit)), extra
    if cmd == "theta-j":
        res = theta_jones(d, args.threads, limit, ledger=args.ledger, literal=args.literal)
        if args.dump_surface:
            extra["surface"] = _surface_dump_jones(d)
    else:
        res = theta_homfly(d, args.cut_basepoint, limit, ledger=args.ledger)
        if args.dump_surface:
            extra["surface"] = _surface_dump_homfly(d, args.cut_basepoint)
    if args.ledger:
        extra["ledger"] = [e.to_dict() for e in res.ledger]
    return res.polynomial, extra


def _payload(source, invariant: str, poly: LaurentPoly | None, timings: dict, **extra) -> dict:
    out = {
        "input": source,
        "invariant": invariant,
        "variables": sorted(poly.variables()) if poly is not None else [],
        "polynomial": poly.to_json() if poly is not None else None,
        "timings": timings,
    }
    out.update(extra)
    return out


def _timer(enabled: bool) -> tuple[dict, Callable[[str, float], None]]:
    timings: dict[str, float] = {}

    def record(name: str, start: float) -> None:
        if enabled:
            timings[name] = round(time.perf_counter() - start, 6)

    return timings, record


def run(argv: Sequence[str] | None = None, stdout: TextIO | None = None,
        stderr: TextIO | None = None, stdin: TextIO | None = None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    stdin = stdin or sys.stdin
    try:
        args = build_parser().parse_args(argv)
    except UsageError as exc:
        print(f"knotheta: {exc}", file=stderr)
        return EXIT_PARSE
    timings, record = _timer(args.timings)
    as_json = args.format == "json"

    def emit(payload: dict, text: str) -> None:
        if as_json:
            print(json.dumps(payload, indent=2), file=stdout)
        else:
            print(text, file=stdout)
            if timings:
                print(" ".join(f"{k}={v:.6f}s" for k, v in timings.items()), file=stderr)

    try:
        if args.command == "batch":
            t0 = time.perf_counter()
            corpus = load_corpus(args.corpus, lenient=args.lenient)
            for line, msg in corpus.errors:
                print(f"knotheta: skipped line {line}: {msg}", file=stderr)
            record("load", t0)
            t0 = time.perf_counter()
            reports = verify_corpus(corpus, max_crossings=args.max_crossings,
                                    threads=args.threads, workers=args.workers)
            record("verify", t0)
            ok = all(r.passed for r in reports)
            payload = _payload({"corpus": args.corpus}, "batch", None, timings,
                               checks=json.loads(reports_to_json(reports))["entries"], passed=ok)
            emit(payload, reports_to_text(reports))
            return EXIT_OK if ok else EXIT_VERIFY

        t0 = time.perf_counter()
        d, source = _read_diagram(args, stdin)
        record("parse", t0)
        if args.command == "verify":
            check_limit(d, args.max_crossings)
            t0 = time.perf_counter()
            report = verify_diagram(d, max_crossings=args.max_crossings, threads=args.threads)
            record("verify", t0)
            payload = _payload(source, "verify", None, timings,
                               checks=[r.to_dict() for r in report.results], passed=report.passed)
            emit(payload, report.to_text())
            return EXIT_OK if report.passed else EXIT_VERIFY

        t0 = time.perf_counter()
        poly, extra = _compute(args.command, d, args)
        record("compute", t0)
        lines = [poly.to_text()]
        for e in extra.get("ledger", ()):
            lines.append(f"{e['state'] or '(empty)'}  grading={e['grading']}  sign={e['sign']:+d}  "
                         f"pairing={e['pairing']}  term={e['term']}")
        if "surface" in extra:
            lines.extend(json.dumps(s) for s in extra["surface"])
        emit(_payload(source, args.command, poly, timings, **extra), "\n".join(lines))
        return EXIT_OK
    except CrossingLimitExceeded as exc:
        print(f"knotheta: {exc}", file=stderr)
        return EXIT_LIMIT
    except (KnothetaError, ValueError) as exc:
        print(f"knotheta: {exc}", file=stderr)
        return EXIT_PARSE


def main(argv: Sequence[str] | None = None) -> int:
    return run(argv)


if __name__ == "__main__":
    sys.exit(main())

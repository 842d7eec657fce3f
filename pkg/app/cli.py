"""
Command-line front end.

Every command prints one JSON document (or DOT for `explore --format dot`) and
exits with 0 when a verdict was computed, 1 for a negative verdict, 2 for
rejected input and 3 when an exploration bound was hit.
"""

import argparse
import json
import logging
import os
import sys
from typing import Any, Callable, Dict, List, Optional

from app.core.config import get_settings
from app.core.errors import WorkbenchError
from app.services.workbench import SCHEMA, WorkbenchService
from app.transform.laws import LAWS

logger = logging.getLogger(__name__)

EXIT_OK, EXIT_NEGATIVE, EXIT_INPUT, EXIT_BOUNDED = 0, 1, 2, 3
NEGATIVE = {"no", "distinguished"}


def read_source(argument: str) -> str:
    """A term argument is a file name, `-` for stdin, or the term itself."""
    if argument == "-":
        return sys.stdin.read()
    if os.path.isfile(argument):
        with open(argument, encoding="utf-8") as handle:
            return handle.read()
    return argument


def exit_code(document: Dict[str, Any]) -> int:
    verdict = document.get("verdict")
    if verdict in NEGATIVE:
        return EXIT_NEGATIVE
    if verdict == "bounded-unknown" or document.get("truncated"):
        return EXIT_BOUNDED
    return EXIT_OK


def _bounds(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--max-states", type=int, default=None, help="state bound (default from PAFAS_MAX_STATES)")
    parser.add_argument("--max-depth", type=int, default=None, help="depth bound (default from PAFAS_MAX_DEPTH)")


def _language(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--lang", choices=["r", "s"], default=None, help="algebra; inferred when omitted")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="pafas", description="Workbench for timed process algebras with reads")
    parser.add_argument("-v", "--verbose", action="store_true", help="debug logging on stderr")
    commands = parser.add_subparsers(dest="command", required=True)

    for name, help_text in (
        ("parse-check", "parse a program and print its canonical form"),
        ("steps", "action transitions of a term"),
    ):
        command = commands.add_parser(name, help=help_text)
        command.add_argument("term")
        _language(command)

    time = commands.add_parser("time", help="time step for the maximal or a given refusal set")
    time.add_argument("term")
    time.add_argument("--refusal", default=None, help="1, {a,b} or -{a}")
    _language(time)

    explore = commands.add_parser("explore", help="bounded state-space exploration")
    explore.add_argument("term")
    explore.add_argument("--format", choices=["json", "dot"], default="json")
    explore.add_argument("--untimed", action="store_true", help="leave out time steps")
    _language(explore)
    _bounds(explore)

    bisim = commands.add_parser("bisim", help="timed bisimilarity of two terms")
    bisim.add_argument("left")
    bisim.add_argument("right")
    bisim.add_argument("--scheme", choices=["r", "s", "untimed"], default="r")
    _language(bisim)
    _bounds(bisim)

    for name in ("proper", "rnf", "normalize"):
        command = commands.add_parser(name, help=f"{name} check" if name != "normalize" else "rewrite into RNF")
        command.add_argument("term")

    translate = commands.add_parser("translate", help="translate between the two algebras")
    translate.add_argument("direction", choices=["s2r", "r2s"])
    translate.add_argument("term")

    laws = commands.add_parser("laws", help="algebraic laws")
    law_commands = laws.add_subparsers(dest="law_command", required=True)
    law_commands.add_parser("list", help="show every law")
    apply = law_commands.add_parser("apply", help="rewrite a subterm with one law")
    apply.add_argument("term")
    apply.add_argument("--law", required=True)
    apply.add_argument("--at", default="", help="child-index path such as 0.1")

    fair = commands.add_parser("fair", help="fair traces")
    fair_commands = fair.add_subparsers(dest="fair_command", required=True)
    member = fair_commands.add_parser("member", help="is a finite word fair")
    member.add_argument("term")
    member.add_argument("--word", default="")
    _bounds(member)
    words = fair_commands.add_parser("words", help="every fair word up to a length")
    words.add_argument("term")
    words.add_argument("--max-len", type=int, default=4)
    _bounds(words)
    lasso = fair_commands.add_parser("lasso", help="check or search an infinite fair trace prefix loop^omega")
    lasso.add_argument("term")
    lasso.add_argument("--prefix", default="")
    lasso.add_argument("--loop", default=None)
    lasso.add_argument("--max-len", type=int, default=4)
    _bounds(lasso)

    traces = commands.add_parser("traces", help="refusal traces")
    traces.add_argument("term")
    traces.add_argument("--max-len", type=int, default=3)
    traces.add_argument("--trace", default=None, help="check one trace, e.g. 1a1a")
    traces.add_argument("--against", default=None, help="compare with another term")
    _bounds(traces)

    import_net = commands.add_parser("import-pn", help="translate a safe read-arc net")
    import_net.add_argument("net")
    import_net.add_argument("--check", action="store_true", help="also compare marking graph and term")
    import_net.add_argument("--max-states", type=int, default=None)

    commands.add_parser("validate-paper", help="run the built-in worked examples")
    return parser


def _laws_list() -> Dict[str, Any]:
    return {"schema": SCHEMA, "laws": [{"id": law.law_id.value, "statement": law.statement} for law in LAWS.values()]}


def _dispatch(args: argparse.Namespace) -> Any:
    service = WorkbenchService
    bounds = {}
    if hasattr(args, "max_states"):
        bounds["max_states"] = args.max_states
    if hasattr(args, "max_depth"):
        bounds["max_depth"] = args.max_depth
    command = args.command

    handlers: Dict[str, Callable[[], Any]] = {
        "parse-check": lambda: service.parse_check(read_source(args.term), args.lang),
        "steps": lambda: service.steps(read_source(args.term), args.lang),
        "time": lambda: service.time(read_source(args.term), args.lang, args.refusal),
        "bisim": lambda: service.bisim(
            read_source(args.left), read_source(args.right), args.scheme, args.lang, **bounds
        ),
        "proper": lambda: service.proper(read_source(args.term)),
        "rnf": lambda: service.rnf(read_source(args.term)),
        "normalize": lambda: service.normalize(read_source(args.term)),
        "translate": lambda: service.translate(read_source(args.term), args.direction),
        "import-pn": lambda: (service.net_correspondence if args.check else service.import_net)(
            read_source(args.net), args.max_states
        ),
        "validate-paper": service.validate_reference,
    }
    if command == "explore":
        if args.format == "dot":
            return service.explore_lts(read_source(args.term), args.lang, timed=not args.untimed, **bounds)
        return service.explore(read_source(args.term), args.lang, timed=not args.untimed, **bounds)
    if command == "laws":
        if args.law_command == "list":
            return _laws_list()
        return service.apply_law(read_source(args.term), args.law, args.at)
    if command == "fair":
        text = read_source(args.term)
        if args.fair_command == "member":
            return service.fair_member(text, args.word, **bounds)
        if args.fair_command == "words":
            return service.fair_words(text, args.max_len, **bounds)
        return service.fair_lasso(text, args.prefix, args.loop, args.max_len, **bounds)
    if command == "traces":
        text = read_source(args.term)
        if args.against is not None:
            return service.compare_traces(text, read_source(args.against), args.max_len, **bounds)
        return service.traces(text, args.max_len, args.trace, **bounds)
    return handlers[command]()


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    settings = get_settings()
    logging.basicConfig(stream=sys.stderr, level=logging.DEBUG if args.verbose else settings.log_level)

    try:
        result = _dispatch(args)
    except WorkbenchError as e:
        logger.error(f"{e.kind}: {e.message}")
        print(json.dumps({"schema": SCHEMA, "error": e.to_dict()}, indent=2))
        return EXIT_INPUT
    except OSError as e:
        print(json.dumps({"schema": SCHEMA, "error": {"kind": "io_error", "message": str(e)}}, indent=2))
        return EXIT_INPUT

    if not isinstance(result, dict):
        print(result.to_dot())
        return EXIT_BOUNDED if result.truncated else EXIT_OK
    print(json.dumps(result, indent=2))
    return exit_code(result)


if __name__ == "__main__":
    sys.exit(main())

"""Command line: ``prag run``, ``prag repl``, ``prag eval`` and ``prag serve``."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .dynamics import Strategy
from .grammar import load_lexicon
from .presup import Policy
from .session import EXIT_OK, SessionState, eval_formula, exit_code, repl_step, run_text


def _read(path: str) -> str:
    return Path(path).read_text(encoding="utf-8")


def _add_discourse_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--lexicon", required=True, help="tab-separated lexicon file")
    p.add_argument("--accommodation", choices=["global", "trapped", "off"], default="trapped")
    p.add_argument("--strategy", choices=[s.value for s in Strategy], default="recency")
    p.add_argument("--trace", action="store_true", help="print the effect trace")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="prag", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="interpret a discourse file")
    _add_discourse_flags(run)
    run.add_argument("discourse")

    repl = sub.add_parser("repl", help="interactive discourse session")
    _add_discourse_flags(repl)

    ev = sub.add_parser("eval", help="evaluate a closed formula in a model file")
    ev.add_argument("--model", required=True)
    ev.add_argument("--formula", required=True)

    serve = sub.add_parser("serve", help="run the HTTP service")
    serve.add_argument("--host", default="127.0.0.1")
    serve.add_argument("--port", type=int, default=8000)
    return parser


def _fail(err: BaseException) -> int:
    print(f"error: {err}", file=sys.stderr)
    return exit_code(err)


def cmd_run(args) -> int:
    try:
        lexicon = load_lexicon(_read(args.lexicon))
        result = run_text(
            _read(args.discourse), lexicon, Policy.of(args.accommodation), Strategy(args.strategy)
        )
    except Exception as err:
        return _fail(err)
    sys.stdout.write(result.render(args.trace))
    return EXIT_OK


def cmd_repl(args, stdin=None, stdout=None) -> int:
    stdin = stdin or sys.stdin
    stdout = stdout or sys.stdout
    try:
        lexicon = load_lexicon(_read(args.lexicon))
    except Exception as err:
        return _fail(err)
    state = SessionState(
        lexicon=lexicon,
        policy=Policy.of(args.accommodation),
        strategy=Strategy(args.strategy),
        trace=args.trace,
    )
    interactive = stdin.isatty()
    while not state.finished:
        if interactive:
            stdout.write("> ")
            stdout.flush()
        line = stdin.readline()
        if not line:
            break
        state, output = repl_step(state, line)
        stdout.write(output)
    return EXIT_OK


def cmd_eval(args) -> int:
    try:
        value = eval_formula(_read(args.model), args.formula)
    except Exception as err:
        return _fail(err)
    print("true" if value else "false")
    return EXIT_OK


def cmd_serve(args) -> int:
    import uvicorn

    from .service import app

    uvicorn.run(app, host=args.host, port=args.port)
    return EXIT_OK


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    handler = {"run": cmd_run, "repl": cmd_repl, "eval": cmd_eval, "serve": cmd_serve}[args.command]
    return handler(args)


if __name__ == "__main__":
    sys.exit(main())

"""Discourse sessions: batch runs, REPL steps and output rendering.

The CLI and the HTTP service both drive the engine through this module, so
the two front ends render results and map errors identically.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

from .context import Context
from .dynamics import Strategy, UnresolvedAnaphora, close_discourse, interpret, run_discourse
from .effects import TraceRecord, UnhandledEffect, render_trace
from .grammar import CORE_LEXICON, GrammarError, Lexicon, denote_discourse, parse, tokenize
from .logic import TRUE, Formula, FormulaSyntaxError, free_vars, parse_formula, pretty
from .models import EvaluationError, ModelFormatError, evaluate, parse_model
from .presup import Policy, PresuppositionFailure

EXIT_OK, EXIT_INTERNAL, EXIT_INPUT, EXIT_ANAPHORA, EXIT_PRESUPPOSITION = 0, 1, 2, 3, 4


def exit_code(err: BaseException) -> int:
    if isinstance(err, UnresolvedAnaphora):
        return EXIT_ANAPHORA
    if isinstance(err, PresuppositionFailure):
        return EXIT_PRESUPPOSITION
    if isinstance(err, (GrammarError, FormulaSyntaxError, EvaluationError, ModelFormatError, OSError)):
        return EXIT_INPUT
    return EXIT_INTERNAL


def error_kind(err: BaseException) -> str:
    return type(err).__name__


@dataclass(frozen=True)
class Result:
    formula: Formula
    context: Context
    trace: list[TraceRecord]

    def render(self, show_trace: bool = False) -> str:
        lines = [pretty(self.formula), "context:"]
        lines.extend("  " + line for line in self.context.render())
        if show_trace:
            lines.append("trace:")
            lines.extend("  " + line for line in render_trace(self.trace))
        return "\n".join(lines) + "\n"


def run_text(
    text: str,
    lexicon: Lexicon = CORE_LEXICON,
    policy: Policy = Policy(),
    strategy: Strategy = Strategy.RECENCY,
) -> Result:
    """Interpret a whole discourse as a single computation."""
    trees = parse(tokenize(text), lexicon)
    formula, ctx, trace = run_discourse(denote_discourse(trees), Context(), policy, strategy)
    return Result(formula, ctx, trace)


@dataclass(frozen=True)
class SessionState:
    lexicon: Lexicon = field(default_factory=lambda: dict(CORE_LEXICON))
    policy: Policy = Policy()
    strategy: Strategy = Strategy.RECENCY
    context: Context = Context()
    sentences: int = 0
    trace: bool = False
    body: Formula = TRUE
    finished: bool = False

    def formula(self) -> Formula:
        return close_discourse(self.body, self.context)


def extend(state: SessionState, text: str) -> tuple[SessionState, Result]:
    """Interpret more sentences against the session's context.

    Raises on failure; the caller keeps the old state in that case.
    """
    trees = parse(tokenize(text), state.lexicon)
    c = denote_discourse(trees, state.sentences + 1, state.body)
    body, ctx, trace = interpret(c, state.context, state.policy, state.strategy)
    new = replace(state, context=ctx, body=body, sentences=state.sentences + len(trees))
    return new, Result(new.formula(), ctx, trace)


COMMANDS = ":context, :reset, :trace on|off, :policy global|trapped|off, :quit"


def repl_step(state: SessionState, line: str) -> tuple[SessionState, str]:
    line = line.strip()
    if not line:
        return state, ""
    if line.startswith(":"):
        return _command(state, line)
    try:
        new, result = extend(state, line)
    except (GrammarError, UnresolvedAnaphora, PresuppositionFailure, UnhandledEffect) as err:
        return state, f"error: {err}\n"
    return new, result.render(state.trace)


def _command(state: SessionState, line: str) -> tuple[SessionState, str]:
    cmd, *args = line.split()
    if cmd == ":context" and not args:
        rendered = state.context.render()
        return state, "".join(l + "\n" for l in rendered)
    if cmd == ":reset" and not args:
        return replace(state, context=Context(), sentences=0, body=TRUE), "context reset\n"
    if cmd == ":trace" and args in (["on"], ["off"]):
        return replace(state, trace=args[0] == "on"), f"trace {args[0]}\n"
    if cmd == ":policy" and len(args) == 1:
        try:
            policy = Policy.of(args[0])
        except ValueError:
            return state, f"error: unknown policy {args[0]!r}\n"
        return replace(state, policy=policy), f"policy {args[0]}\n"
    if cmd == ":quit" and not args:
        return replace(state, finished=True), ""
    return state, f"error: unknown command {line!r} (commands: {COMMANDS})\n"


def eval_formula(model_text: str, formula_text: str) -> bool:
    model = parse_model(model_text)
    formula = parse_formula(formula_text)
    unbound = free_vars(formula)
    if unbound:
        raise EvaluationError(f"free variable(s): {', '.join(sorted(unbound))}")
    return evaluate(model, {}, formula)

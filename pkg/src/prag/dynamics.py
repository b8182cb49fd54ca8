"""The discourse handler: runs a sentence computation against a context.

Indefinites and names write referents, pronouns read them, universals and
negation open scope frames whose referents vanish when the frame closes,
and definites go through the presupposition clauses. The result is a
closed formula plus the updated context.
"""

from __future__ import annotations

import enum
from typing import Sequence

from .context import DESCRIPTION, NEGATION, TOP, UNIVERSAL, Context, Referent, ScopeFrame
from .effects import Features, Handler, Outcome, TraceRecord, handle
from .logic import Const, Exists, Forall, Formula, Implies, Not, Term, conj, free_vars, simplify
from .presup import (
    Accommodation, Policy, Presupposition, PresuppositionFailure, accommodate,
    check_projection, find_binder, trap_scope,
)

__all__ = [
    "Context", "Referent", "ScopeFrame", "Strategy", "UnresolvedAnaphora",
    "DiscourseHandler", "run_discourse", "interpret", "close_discourse",
    "select_antecedent", "existential_closure", "STRONG_DONKEY_READING",
]

# Referents introduced in a universal's restrictor stay accessible in its
# nucleus and are closed universally over the whole implication.
STRONG_DONKEY_READING = True


class Strategy(str, enum.Enum):
    RECENCY = "recency"


class UnresolvedAnaphora(LookupError):
    def __init__(self, constraints: Features) -> None:
        super().__init__(f"unresolved anaphora: no accessible referent matches {constraints}")
        self.constraints = constraints


def select_antecedent(
    ctx: Context, constraints: Features, strategy: Strategy = Strategy.RECENCY
) -> Term:
    if strategy is not Strategy.RECENCY:
        raise ValueError(f"unknown strategy {strategy}")
    for ref in reversed(ctx.referents):
        if ref.features.satisfies(constraints):
            return ref.term
    raise UnresolvedAnaphora(constraints)


def existential_closure(f: Formula, variables: Sequence[str]) -> Formula:
    for name in reversed(variables):
        f = Exists(name, f)
    return f


def universal_closure(f: Formula, variables: Sequence[str]) -> Formula:
    for name in reversed(variables):
        f = Forall(name, f)
    return f


class DiscourseHandler(Handler):
    def __init__(
        self,
        ctx: Context | None = None,
        policy: Policy = Policy(),
        strategy: Strategy = Strategy.RECENCY,
    ) -> None:
        self.state = ctx if ctx is not None else Context()
        self.policy = policy
        self.strategy = strategy

    def on_introduce(self, op, run):
        ctx = self.state
        if op.constant is not None:
            term = Const(op.constant)
            if not any(r.term == term for r in ctx.referents):
                self.state = ctx.introduce(term, op.features, 0, op.sentence, (op.hint, (None,)))
            return term
        term, ctx = ctx.fresh()
        self.state = ctx.introduce(term, op.features, None, op.sentence, (op.hint, (None,)))
        return term

    def on_select(self, op, run):
        return select_antecedent(self.state, op.constraints, self.strategy)

    def on_presuppose(self, op, run):
        p: Presupposition = op.presupposition
        bound = find_binder(self.state, p)
        if bound is not None:
            return Outcome(bound, f"bound {bound}")
        if self.policy.accommodation is Accommodation.OFF:
            raise PresuppositionFailure(p.source, p.render_descriptor())
        term, self.state = self.state.fresh()
        if p.restrictor is None:
            condition = p.instantiate(term)
            frame = trap_scope(free_vars(condition) - {term.name}, self.state.scope_stack)
            check_projection(p, frame, self.policy)
        else:
            # referents from a relative clause inside the description are
            # accommodated together with the described entity
            self.state = self.state.push(ScopeFrame(DESCRIPTION))
            level = self.state.level
            value = run(p.restrictor(term))
            local = set(self.state.scope_stack[level].introduced_here)
            condition = conj(*self.state.conditions_at(level), value)
            free = free_vars(condition) - local - {term.name}
            frame = trap_scope(free, self.state.scope_stack[:level])
            check_projection(p, frame, self.policy)
            self.state = self.state.hoist(frame)
        term, self.state = accommodate(self.state, frame, p, term, condition)
        return Outcome(term, f"accommodated {term}")

    def on_quantify(self, op, run):
        binder, ctx = self.state.fresh()
        ctx = ctx.push(ScopeFrame(UNIVERSAL, binder))
        level = ctx.level
        self.state = ctx.introduce(binder, op.features, level, 0, (op.hint, (None,)))
        restrictor = run(op.restrictor(binder))
        frame = self.state.scope_stack[level]
        restr_vars = tuple(v for v in frame.introduced_here if v != binder.name)
        restr_conds = self.state.conditions_at(level)
        nucleus = run(op.nucleus(binder))
        frame = self.state.scope_stack[level]
        nuc_vars = frame.introduced_here[len(restr_vars) + 1:]
        nuc_conds = self.state.conditions_at(level)[len(restr_conds):]
        _, self.state = self.state.pop()
        consequent = existential_closure(conj(*nuc_conds, nucleus), nuc_vars)
        body = Implies(conj(*restr_conds, restrictor), consequent)
        result = Forall(binder.name, universal_closure(body, restr_vars))
        return Outcome(result, args=binder.name)

    def on_barrier(self, op, run):
        return Not(self._local(NEGATION, lambda: run(op.body)))

    def _local(self, kind: str, body) -> Formula:
        """Run ``body`` in a fresh frame and close it over its introductions."""
        self.state = self.state.push(ScopeFrame(kind))
        level = self.state.level
        value = body()
        frame, ctx = self.state.pop()
        conditions = self.state.conditions_at(level)
        self.state = ctx
        return existential_closure(conj(*conditions, value), frame.introduced_here)


def close_discourse(body: Formula, ctx: Context) -> Formula:
    """Existentially close a discourse body over every top-level referent."""
    return simplify(existential_closure(conj(*ctx.conditions_at(0), body), ctx.top_vars()))


def interpret(
    c, ctx: Context | None = None, policy: Policy = Policy(), strategy: Strategy = Strategy.RECENCY
) -> tuple[Formula, Context, list[TraceRecord]]:
    """Handle ``c`` and return its open body, without top-level closure."""
    ctx = ctx if ctx is not None else Context()
    if len(ctx.scope_stack) != 1 or ctx.scope_stack[0].kind != TOP:
        raise ValueError("discourse must start at top level")
    return handle(DiscourseHandler(ctx, policy, strategy), c)


def run_discourse(
    c, ctx: Context | None = None, policy: Policy = Policy(), strategy: Strategy = Strategy.RECENCY
) -> tuple[Formula, Context, list[TraceRecord]]:
    body, ctx, trace = interpret(c, ctx, policy, strategy)
    return close_discourse(body, ctx), ctx, trace

"""Presuppositions handled like exceptions.

A definite raises a presupposition; the handler either binds it to an
accessible referent that already satisfies the description, accommodates
it at the highest scope its free variables allow, or reports failure.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

from .context import Context, Descriptor, ScopeFrame
from .effects import Features
from .logic import Formula, Pred, Term, Var


class Accommodation(str, enum.Enum):
    GLOBAL = "global"
    TRAPPED = "trapped"
    OFF = "off"


@dataclass(frozen=True)
class Policy:
    accommodation: Accommodation = Accommodation.TRAPPED

    @classmethod
    def of(cls, accommodation: str) -> "Policy":
        return cls(Accommodation(accommodation))


class PresuppositionFailure(Exception):
    def __init__(self, source: str, descriptor: str, reason: str | None = None) -> None:
        message = f'presupposition failure: "{source}" requires {descriptor}'
        if reason:
            message += f" ({reason})"
        super().__init__(message)
        self.source = source
        self.descriptor = descriptor


@dataclass(frozen=True)
class Presupposition:
    """What a definite takes for granted.

    ``pattern`` lists the head predicate's arguments with ``None`` in the
    slot the definite describes. ``restrictor``, when present, builds the
    full description (head noun plus relative clause) for a given term.
    """

    head: str
    pattern: tuple[Optional[Term], ...]
    features: Features = Features()
    source: str = ""
    restrictor: Callable[[Term], object] | None = field(default=None, compare=False)
    sentence: int = 0

    @property
    def arity(self) -> int:
        return len(self.pattern)

    @property
    def descriptor(self) -> Descriptor:
        return (self.head, self.pattern)

    def free_vars(self) -> set[str]:
        return {t.name for t in self.pattern if isinstance(t, Var)}

    def instantiate(self, term: Term) -> Formula:
        return Pred(self.head, [term if t is None else t for t in self.pattern])

    def render_descriptor(self) -> str:
        args = ",".join("_" if t is None else t.name for t in self.pattern)
        return f"{self.head}({args})"


def find_binder(ctx: Context, p: Presupposition) -> Term | None:
    """Most recent accessible referent whose description matches ``p``."""
    for ref in reversed(ctx.referents):
        if ref.descriptor == p.descriptor and ref.features.compatible(p.features):
            return ref.term
    return None


def trap_scope(free: set[str], stack: Sequence[ScopeFrame]) -> int:
    """Index of the outermost frame a condition over ``free`` may live in.

    Each free variable pins the condition at or below the frame that binds
    it; the answer is the deepest such pin, or the top frame when nothing
    is pinned.
    """
    target = 0
    for name in free:
        for index in range(len(stack) - 1, -1, -1):
            if stack[index].binds(name):
                target = max(target, index)
                break
        else:
            target = len(stack) - 1
    return target


def accommodate(
    ctx: Context,
    frame: int,
    p: Presupposition,
    term: Term | None = None,
    condition: Formula | None = None,
) -> tuple[Term, Context]:
    if term is None:
        term, ctx = ctx.fresh()
    if condition is None:
        condition = p.instantiate(term)
    ctx = ctx.introduce(term, p.features, frame, p.sentence, p.descriptor)
    return term, ctx.accommodate_condition(condition, frame)


def resolve_presupposition(
    ctx: Context, p: Presupposition, policy: Policy
) -> tuple[Term, Context]:
    """Bind ``p`` or accommodate its bare descriptor.

    The composite discourse handler performs the same steps, but builds the
    accommodated condition from the full description, which may itself
    carry effects.
    """
    bound = find_binder(ctx, p)
    if bound is not None:
        return bound, ctx
    if policy.accommodation is Accommodation.OFF:
        raise PresuppositionFailure(p.source, p.render_descriptor())
    frame = trap_scope(p.free_vars(), ctx.scope_stack)
    check_projection(p, frame, policy)
    return accommodate(ctx, frame, p)


def check_projection(p: Presupposition, frame: int, policy: Policy) -> None:
    """Global accommodation cannot lift a condition past its binder."""
    if policy.accommodation is Accommodation.GLOBAL and frame != 0:
        raise PresuppositionFailure(
            p.source, p.render_descriptor(), "depends on a quantified variable; cannot project globally"
        )

"""Discourse context: referents, the scope stack and accommodated conditions.

Contexts are immutable; every update returns a new value, so a session can
keep the previous context around and restore it when a sentence fails.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Optional

from .effects import Features
from .logic import Formula, Term, Var, pretty

TOP, UNIVERSAL, NEGATION, DESCRIPTION = "top", "universal", "negation", "description"

# head predicate plus argument pattern; None marks the described slot
Descriptor = tuple[str, tuple[Optional[Term], ...]]


@dataclass(frozen=True)
class Referent:
    term: Term
    features: Features
    position: int
    scope_level: int
    sentence: int = 0
    descriptor: Descriptor | None = None


@dataclass(frozen=True)
class ScopeFrame:
    kind: str
    binder: Term | None = None
    introduced_here: tuple[str, ...] = ()

    def binds(self, name: str) -> bool:
        if isinstance(self.binder, Var) and self.binder.name == name:
            return True
        return name in self.introduced_here


@dataclass(frozen=True)
class Context:
    referents: tuple[Referent, ...] = ()
    scope_stack: tuple[ScopeFrame, ...] = (ScopeFrame(TOP),)
    fresh_counter: int = 1
    accommodated: tuple[tuple[Formula, int], ...] = ()
    next_position: int = 1

    @property
    def level(self) -> int:
        return len(self.scope_stack) - 1

    def fresh(self) -> tuple[Var, "Context"]:
        var = Var(f"x{self.fresh_counter}")
        return var, replace(self, fresh_counter=self.fresh_counter + 1)

    def introduce(
        self,
        term: Term,
        features: Features,
        level: int | None = None,
        sentence: int = 0,
        descriptor: Descriptor | None = None,
    ) -> "Context":
        level = self.level if level is None else level
        ref = Referent(term, features, self.next_position, level, sentence, descriptor)
        stack = list(self.scope_stack)
        if isinstance(term, Var):
            frame = stack[level]
            stack[level] = replace(frame, introduced_here=frame.introduced_here + (term.name,))
        return replace(
            self,
            referents=self.referents + (ref,),
            scope_stack=tuple(stack),
            next_position=self.next_position + 1,
        )

    def accommodate_condition(self, condition: Formula, level: int) -> "Context":
        return replace(self, accommodated=self.accommodated + ((condition, level),))

    def push(self, frame: ScopeFrame) -> "Context":
        return replace(self, scope_stack=self.scope_stack + (frame,))

    def pop(self) -> tuple[ScopeFrame, "Context"]:
        """Leave the innermost frame, discarding what was introduced in it."""
        if len(self.scope_stack) == 1:
            raise ValueError("cannot pop the top frame")
        level = self.level
        return self.scope_stack[-1], replace(
            self,
            scope_stack=self.scope_stack[:-1],
            referents=tuple(r for r in self.referents if r.scope_level < level),
            accommodated=tuple(a for a in self.accommodated if a[1] < level),
        )

    def hoist(self, target: int) -> "Context":
        """Leave the innermost frame, moving its referents to frame ``target``.

        Conditions recorded in the innermost frame are dropped; the caller
        is expected to have folded them into whatever it accommodates.
        """
        level = self.level
        frame = self.scope_stack[-1]
        stack = list(self.scope_stack[:-1])
        dest = stack[target]
        stack[target] = replace(dest, introduced_here=dest.introduced_here + frame.introduced_here)
        return replace(
            self,
            scope_stack=tuple(stack),
            referents=tuple(
                replace(r, scope_level=target) if r.scope_level == level else r
                for r in self.referents
            ),
            accommodated=tuple(a for a in self.accommodated if a[1] < level),
        )

    def conditions_at(self, level: int) -> list[Formula]:
        return [f for f, lvl in self.accommodated if lvl == level]

    def top_vars(self) -> list[str]:
        return list(self.scope_stack[0].introduced_here)

    def render(self) -> list[str]:
        lines = []
        for r in self.referents:
            level = "top" if r.scope_level == 0 else str(r.scope_level)
            gender = r.features.get("gender")
            feats = f"gender={gender}" if gender else "-"
            lines.append(f"{r.term} {feats} introduced-in:S{r.sentence} level:{level}")
        lines.extend(pretty(f) for f, _ in self.accommodated)
        return lines

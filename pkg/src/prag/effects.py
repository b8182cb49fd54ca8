"""Effectful computations as operation trees, and handlers that run them.

A computation is either ``Pure(value)`` or ``Perform(op, cont)``: an effect
operation paired with the continuation that receives the handler's answer.
Handlers are objects with one ``on_<op>`` method per operation they
interpret. Handling walks the tree, records every operation in a trace,
and resumes each continuation exactly once.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Callable, Generic, Iterable, NamedTuple, TypeVar, Union

from .logic import Const, Term, Var, pretty

A = TypeVar("A")

GENDERS = frozenset("mfn")
KNOWN_FEATURES = {"gender": GENDERS}


class FeatureError(ValueError):
    pass


@dataclass(frozen=True)
class Features:
    """Immutable feature set such as ``{gender=m}``."""

    items: tuple[tuple[str, str], ...] = ()

    @classmethod
    def of(cls, mapping: dict[str, str] | None = None, **kwargs: str) -> "Features":
        merged = {**(mapping or {}), **kwargs}
        for name, value in merged.items():
            if name not in KNOWN_FEATURES:
                raise FeatureError(f"unknown feature {name!r}")
            if value not in KNOWN_FEATURES[name]:
                raise FeatureError(f"bad value {value!r} for feature {name!r}")
        return cls(tuple(sorted(merged.items())))

    @classmethod
    def parse(cls, text: str) -> "Features":
        text = text.strip()
        if text in ("", "-"):
            return cls()
        pairs = {}
        for part in text.split(","):
            name, eq, value = part.partition("=")
            if not eq or not name.strip() or not value.strip():
                raise FeatureError(f"malformed feature {part!r}")
            if name.strip() in pairs:
                raise FeatureError(f"feature {name.strip()!r} given twice")
            pairs[name.strip()] = value.strip()
        return cls.of(pairs)

    def get(self, name: str) -> str | None:
        return dict(self.items).get(name)

    def satisfies(self, constraints: "Features") -> bool:
        mine = dict(self.items)
        return all(mine.get(k) == v for k, v in constraints.items)

    def compatible(self, other: "Features") -> bool:
        mine = dict(self.items)
        return all(mine.get(k, v) == v for k, v in other.items)

    def __str__(self) -> str:
        return "{" + ",".join(f"{k}={v}" for k, v in self.items) + "}"


# -- operations -----------------------------------------------------------------


@dataclass(frozen=True)
class Introduce:
    """Write a new discourse referent; answered with its term."""

    features: Features
    hint: str
    constant: str | None = None
    sentence: int = 0
    name = "introduce"

    def describe(self) -> str:
        return f"{self.constant} {self.features}" if self.constant else str(self.features)


@dataclass(frozen=True)
class Select:
    """Read an accessible referent matching the constraints."""

    constraints: Features
    name = "select"

    def describe(self) -> str:
        return str(self.constraints)


@dataclass(frozen=True)
class Presuppose:
    presupposition: Any
    name = "presuppose"

    def describe(self) -> str:
        return self.presupposition.render_descriptor()


@dataclass(frozen=True)
class Quantify:
    features: Features
    hint: str
    restrictor: Callable[[Term], "Computation"] = field(compare=False)
    nucleus: Callable[[Term], "Computation"] = field(compare=False)
    name = "quantify"

    def describe(self) -> str:
        return str(self.features)


@dataclass(frozen=True)
class Barrier:
    body: "Computation" = field(compare=False)
    name = "barrier"

    def describe(self) -> str:
        return ""


EffectOp = Union[Introduce, Select, Presuppose, Quantify, Barrier]


# -- computations ---------------------------------------------------------------


@dataclass(frozen=True)
class Pure(Generic[A]):
    value: A


@dataclass(frozen=True)
class Perform(Generic[A]):
    op: Any
    cont: Callable[[Any], "Computation[A]"] = field(compare=False)


Computation = Union[Pure, Perform]


def pure(a: A) -> Pure[A]:
    return Pure(a)


def bind(c, f: Callable[[Any], Any]):
    """Graft ``f`` onto every leaf of ``c``, keeping the operation spine."""
    if isinstance(c, Pure):
        return f(c.value)
    cont = c.cont
    return Perform(c.op, lambda x: bind(cont(x), f))


def perform(op) -> Perform:
    return Perform(op, pure)


# -- handling -------------------------------------------------------------------


class UnhandledEffect(RuntimeError):
    def __init__(self, op_name: str) -> None:
        super().__init__(f"unhandled effect: {op_name}")
        self.op_name = op_name
        self.trace: list[TraceRecord] = []


class Outcome(NamedTuple):
    """What a handler clause may return instead of a bare payload."""

    payload: Any
    note: str | None = None
    args: str | None = None


@dataclass(frozen=True)
class TraceRecord:
    op: str
    args: str
    payload: Any
    note: str | None = None

    def render(self) -> str:
        if self.note is not None:
            result = self.note
        elif self.payload is None:
            result = "!"
        elif isinstance(self.payload, (Var, Const, str)):
            result = str(self.payload)
        else:
            result = pretty(self.payload)
        head = f"{self.op} {self.args}" if self.args else self.op
        return f"{head} -> {result}"


def render_trace(trace: Iterable[TraceRecord]) -> list[str]:
    return [record.render() for record in trace]


class Handler:
    """Base class for handlers; subclasses add ``on_<op>(op, run)`` clauses.

    ``run`` handles a sub-computation with the same handler and trace, so
    scope-taking clauses can interpret the computations their operation
    carries.
    """

    state: Any = None

    def clause(self, op) -> Callable:
        method = getattr(self, "on_" + op.name, None)
        if method is None:
            raise UnhandledEffect(op.name)
        return method


def _run(h: Handler, c, trace: list[TraceRecord]):
    while isinstance(c, Perform):
        op = c.op
        clause = h.clause(op)
        slot = len(trace)
        trace.append(TraceRecord(op.name, op.describe(), None))
        result = clause(op, lambda sub: _run(h, sub, trace))
        outcome = result if isinstance(result, Outcome) else Outcome(result)
        args = op.describe() if outcome.args is None else outcome.args
        trace[slot] = TraceRecord(op.name, args, outcome.payload, outcome.note)
        c = c.cont(outcome.payload)
    return c.value


def handle(h: Handler, c) -> tuple[Any, Any, list[TraceRecord]]:
    """Run ``c`` under ``h``; return (value, final handler state, trace).

    Any error raised while handling gets the partial trace attached as
    ``err.trace``.
    """
    trace: list[TraceRecord] = []
    try:
        value = _run(h, c, trace)
    except Exception as err:
        err.trace = list(trace)
        raise
    return value, h.state, trace

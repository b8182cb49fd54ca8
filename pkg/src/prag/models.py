"""Finite models, Tarskian evaluation and the brute-force equivalence check."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Mapping

from .logic import (
    And, Const, Exists, Falsity, Forall, Formula, Implies, Not, Or, Pred, Truth, Var,
    constants, free_vars, pretty,
)


class EvaluationError(ValueError):
    pass


class UnboundVariable(EvaluationError):
    pass


class UnknownPredicate(EvaluationError):
    pass


class ModelFormatError(ValueError):
    pass


@dataclass(frozen=True)
class Model:
    """A nonempty finite domain plus predicate extensions.

    ``arities`` may map a predicate to ``None`` when it was declared empty
    without an arity; such a predicate is false at every arity.
    """

    domain: tuple[str, ...]
    extensions: Mapping[str, frozenset] = field(default_factory=dict)
    arities: Mapping[str, int | None] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if not self.domain:
            raise ModelFormatError("empty domain")
        members = set(self.domain)
        for name, ext in self.extensions.items():
            arity = self.arities.get(name)
            for tup in ext:
                if arity is not None and len(tup) != arity:
                    raise ModelFormatError(f"{name}: tuple {tup} does not have arity {arity}")
                for e in tup:
                    if e not in members:
                        raise ModelFormatError(f"entity {e} not in domain")

    @classmethod
    def build(cls, domain: Iterable[str], **extensions: Iterable) -> "Model":
        """Convenience constructor: ``Model.build("ab", man={"a"}, owns={("a","b")})``."""
        exts, arities = {}, {}
        for name, tuples in extensions.items():
            normalized = frozenset(t if isinstance(t, tuple) else (t,) for t in tuples)
            exts[name] = normalized
            arities[name] = len(next(iter(normalized))) if normalized else None
        return cls(tuple(domain), exts, arities)

    @property
    def interp(self) -> dict[tuple[str, int | None], frozenset]:
        return {(name, self.arities.get(name)): ext for name, ext in self.extensions.items()}

    def render(self) -> str:
        lines = ["domain: " + " ".join(self.domain)]
        for name in sorted(self.extensions):
            ext = sorted(self.extensions[name])
            tuples = " ".join(",".join(t) for t in ext) if ext else "-"
            lines.append(f"{name}: {tuples}")
        return "\n".join(lines)


Assignment = Mapping[str, str]


def _value(m: Model, g: Assignment, t) -> str:
    if isinstance(t, Var):
        try:
            return g[t.name]
        except KeyError:
            raise UnboundVariable(f"free variable {t.name}") from None
    if t.name in m.domain:
        return t.name
    raise EvaluationError(f"constant {t.name} does not name an entity of the domain")


def evaluate(m: Model, g: Assignment, f: Formula) -> bool:
    if isinstance(f, Pred):
        if f.name not in m.extensions:
            raise UnknownPredicate(f"unknown predicate {f.name}/{len(f.args)}")
        arity = m.arities.get(f.name)
        if arity is not None and arity != len(f.args):
            raise UnknownPredicate(f"arity mismatch: {f.name} has arity {arity}, used with {len(f.args)}")
        return tuple(_value(m, g, t) for t in f.args) in m.extensions[f.name]
    if isinstance(f, And):
        return evaluate(m, g, f.left) and evaluate(m, g, f.right)
    if isinstance(f, Or):
        return evaluate(m, g, f.left) or evaluate(m, g, f.right)
    if isinstance(f, Implies):
        return not evaluate(m, g, f.left) or evaluate(m, g, f.right)
    if isinstance(f, Not):
        return not evaluate(m, g, f.body)
    if isinstance(f, Exists):
        return any(evaluate(m, {**g, f.var: e}, f.body) for e in m.domain)
    if isinstance(f, Forall):
        return all(evaluate(m, {**g, f.var: e}, f.body) for e in m.domain)
    if isinstance(f, Truth):
        return True
    if isinstance(f, Falsity):
        return False
    raise TypeError(f"not a formula: {f!r}")


# -- enumeration --------------------------------------------------------------


def count_models(signature: Iterable[tuple[str, int]], size: int) -> int:
    total = 1
    for _, arity in signature:
        total *= 2 ** (size**arity)
    return total


def enumerate_models(
    signature: Iterable[tuple[str, int]], size: int, pinned: Iterable[str] = ()
) -> Iterator[Model]:
    """All models over ``signature`` with exactly ``size`` entities.

    Pinned names (constants) occupy the first domain slots; the remaining
    entities are labelled e1, e2, ... Extensions vary with the last
    predicate fastest, each one counting up through its subsets in
    bitmask order.
    """
    signature = list(signature)
    pinned = sorted(pinned)
    if size < len(pinned):
        return
    domain = tuple(pinned) + tuple(f"e{i}" for i in range(1, size - len(pinned) + 1))
    tuple_spaces = [list(itertools.product(domain, repeat=arity)) for _, arity in signature]
    choices = [range(2 ** len(space)) for space in tuple_spaces]
    arities = {name: arity for name, arity in signature}
    for masks in itertools.product(*choices):
        exts = {}
        for (name, _), space, mask in zip(signature, tuple_spaces, masks):
            exts[name] = frozenset(t for bit, t in enumerate(space) if mask >> bit & 1)
        yield Model(domain, exts, arities)


@dataclass(frozen=True)
class Equivalence:
    """Outcome of a bounded equivalence check; truthy iff no countermodel."""

    equivalent: bool
    countermodel: Model | None = None
    models_checked: int = 0

    def __bool__(self) -> bool:
        return self.equivalent


def equivalent_up_to(
    f: Formula, g: Formula, signature: Iterable[tuple[str, int]], max_size: int
) -> Equivalence:
    if max_size < 1:
        raise ValueError("max_size must be at least 1")
    open_vars = free_vars(f) | free_vars(g)
    if open_vars:
        raise UnboundVariable(f"formulas must be closed; free: {sorted(open_vars)}")
    signature = list(signature)
    pinned = constants(f) | constants(g)
    checked = 0
    for size in range(max(1, len(pinned)), max_size + 1):
        for m in enumerate_models(signature, size, pinned):
            checked += 1
            if evaluate(m, {}, f) != evaluate(m, {}, g):
                return Equivalence(False, m, checked)
    return Equivalence(True, None, checked)


# -- model files ----------------------------------------------------------------


def parse_model(s: str) -> Model:
    domain: list[str] | None = None
    exts: dict[str, frozenset] = {}
    arities: dict[str, int | None] = {}
    for lineno, raw in enumerate(s.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if ":" not in line:
            raise ModelFormatError(f"line {lineno}: expected 'name: ...'")
        head, _, rest = line.partition(":")
        head, items = head.strip(), rest.split()
        if domain is None:
            if head != "domain":
                raise ModelFormatError(f"line {lineno}: first line must declare the domain")
            if not items:
                raise ModelFormatError("empty domain")
            if len(set(items)) != len(items):
                raise ModelFormatError(f"line {lineno}: duplicate entity in domain")
            domain = items
            continue
        name, _, declared = head.partition("/")
        arity: int | None = int(declared) if declared else None
        if name == "domain":
            raise ModelFormatError(f"line {lineno}: domain declared twice")
        if name in exts:
            raise ModelFormatError(f"line {lineno}: duplicate predicate declaration {name}")
        tuples = set()
        if items != ["-"]:
            for item in items:
                tup = tuple(item.split(","))
                if arity is None:
                    arity = len(tup)
                elif len(tup) != arity:
                    raise ModelFormatError(f"line {lineno}: {name} expects arity {arity}, got {item}")
                for e in tup:
                    if e not in domain:
                        raise ModelFormatError(f"line {lineno}: entity {e} not in domain")
                tuples.add(tup)
        exts[name] = frozenset(tuples)
        arities[name] = arity
    if domain is None:
        raise ModelFormatError("empty domain")
    return Model(tuple(domain), exts, arities)


def describe_countermodel(result: Equivalence, f: Formula, g: Formula) -> str:
    if result:
        return "equivalent"
    m = result.countermodel
    return (
        f"countermodel:\n{m.render()}\n"
        f"{pretty(f)} is {evaluate(m, {}, f)}, {pretty(g)} is {evaluate(m, {}, g)}"
    )

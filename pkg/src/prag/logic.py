"""First-order formulas: the value type every sentence computation yields.

Terms are either variables or constants. The concrete syntax tells them
apart by convention: a name bound by an enclosing quantifier is a
variable, and so is any free name matching ``[u-z][0-9]*`` (``x``, ``y2``,
``x13``). Every other name is a constant.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from typing import Iterator, Union

VAR_NAME = re.compile(r"[u-z][0-9]*\Z")
IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")


def is_var_name(name: str) -> bool:
    return VAR_NAME.match(name) is not None


@dataclass(frozen=True)
class Var:
    name: str

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True)
class Const:
    name: str

    def __str__(self) -> str:
        return self.name


Term = Union[Var, Const]


@dataclass(frozen=True)
class Pred:
    name: str
    args: tuple[Term, ...]

    def __init__(self, name: str, args) -> None:
        object.__setattr__(self, "name", name)
        object.__setattr__(self, "args", tuple(args))


@dataclass(frozen=True)
class And:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Or:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Implies:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Not:
    body: "Formula"


@dataclass(frozen=True)
class Exists:
    var: str
    body: "Formula"


@dataclass(frozen=True)
class Forall:
    var: str
    body: "Formula"


@dataclass(frozen=True)
class Truth:
    pass


@dataclass(frozen=True)
class Falsity:
    pass


Formula = Union[Pred, And, Or, Implies, Not, Exists, Forall, Truth, Falsity]

TRUE = Truth()
FALSE = Falsity()

BINARY = (And, Or, Implies)
QUANTIFIERS = (Exists, Forall)


class FormulaSyntaxError(ValueError):
    def __init__(self, message: str, offset: int) -> None:
        super().__init__(f"{message} at offset {offset}")
        self.offset = offset


class ArityError(ValueError):
    pass


def conj(*formulas: Formula) -> Formula:
    """Right-nested conjunction; the empty conjunction is ``true``."""
    if not formulas:
        return TRUE
    result = formulas[-1]
    for f in reversed(formulas[:-1]):
        result = And(f, result)
    return result


def free_vars(f: Formula) -> set[str]:
    if isinstance(f, Pred):
        return {t.name for t in f.args if isinstance(t, Var)}
    if isinstance(f, BINARY):
        return free_vars(f.left) | free_vars(f.right)
    if isinstance(f, Not):
        return free_vars(f.body)
    if isinstance(f, QUANTIFIERS):
        return free_vars(f.body) - {f.var}
    return set()


def names(f: Formula) -> set[str]:
    """Every identifier used as a term or binder anywhere in ``f``."""
    if isinstance(f, Pred):
        return {t.name for t in f.args}
    if isinstance(f, BINARY):
        return names(f.left) | names(f.right)
    if isinstance(f, Not):
        return names(f.body)
    if isinstance(f, QUANTIFIERS):
        return names(f.body) | {f.var}
    return set()


def constants(f: Formula) -> set[str]:
    if isinstance(f, Pred):
        return {t.name for t in f.args if isinstance(t, Const)}
    if isinstance(f, BINARY):
        return constants(f.left) | constants(f.right)
    if isinstance(f, (Not, Exists, Forall)):
        return constants(f.body)
    return set()


def predicates(f: Formula) -> dict[str, int]:
    """Map each predicate name to its arity; raise ArityError on conflicts."""
    found: dict[str, int] = {}
    for p in atoms(f):
        arity = found.setdefault(p.name, len(p.args))
        if arity != len(p.args):
            raise ArityError(f"predicate {p.name} used with arities {arity} and {len(p.args)}")
    return found


def atoms(f: Formula) -> Iterator[Pred]:
    if isinstance(f, Pred):
        yield f
    elif isinstance(f, BINARY):
        yield from atoms(f.left)
        yield from atoms(f.right)
    elif isinstance(f, (Not, Exists, Forall)):
        yield from atoms(f.body)


def fresh_name(avoid: set[str], prefix: str = "x") -> str:
    for i in itertools.count(1):
        name = f"{prefix}{i}"
        if name not in avoid:
            return name
    raise AssertionError("unreachable")


def _subst_term(t: Term, v: str, replacement: Term) -> Term:
    if isinstance(t, Var) and t.name == v:
        return replacement
    return t


def substitute(f: Formula, v: str, t: Term) -> Formula:
    """Replace free occurrences of variable ``v`` by ``t`` without capture."""
    if isinstance(f, Pred):
        return Pred(f.name, [_subst_term(a, v, t) for a in f.args])
    if isinstance(f, BINARY):
        return type(f)(substitute(f.left, v, t), substitute(f.right, v, t))
    if isinstance(f, Not):
        return Not(substitute(f.body, v, t))
    if isinstance(f, QUANTIFIERS):
        if f.var == v or v not in free_vars(f.body):
            return f
        body, var = f.body, f.var
        if isinstance(t, Var) and t.name == var:
            var = fresh_name(names(body) | {t.name, v})
            body = substitute(body, f.var, Var(var))
        return type(f)(var, substitute(body, v, t))
    return f


def alpha_eq(f: Formula, g: Formula) -> bool:
    return _alpha(f, g, {}, {}, 0)


def _alpha(f, g, env_f: dict, env_g: dict, depth: int) -> bool:
    if type(f) is not type(g):
        return False
    if isinstance(f, Pred):
        if f.name != g.name or len(f.args) != len(g.args):
            return False
        for a, b in zip(f.args, g.args):
            if type(a) is not type(b):
                return False
            if isinstance(a, Var):
                ia, ib = env_f.get(a.name), env_g.get(b.name)
                if ia != ib or (ia is None and a.name != b.name):
                    return False
            elif a.name != b.name:
                return False
        return True
    if isinstance(f, BINARY):
        return _alpha(f.left, g.left, env_f, env_g, depth) and _alpha(
            f.right, g.right, env_f, env_g, depth
        )
    if isinstance(f, Not):
        return _alpha(f.body, g.body, env_f, env_g, depth)
    if isinstance(f, QUANTIFIERS):
        return _alpha(
            f.body, g.body, {**env_f, f.var: depth}, {**env_g, g.var: depth}, depth + 1
        )
    return True


def simplify(f: Formula) -> Formula:
    """Drop ``true`` conjuncts left behind by the discourse fold."""
    if isinstance(f, And):
        left, right = simplify(f.left), simplify(f.right)
        if isinstance(left, Truth):
            return right
        if isinstance(right, Truth):
            return left
        return And(left, right)
    if isinstance(f, (Or, Implies)):
        return type(f)(simplify(f.left), simplify(f.right))
    if isinstance(f, Not):
        return Not(simplify(f.body))
    if isinstance(f, QUANTIFIERS):
        return type(f)(f.var, simplify(f.body))
    return f


def standardize_apart(f: Formula) -> Formula:
    """Rename binders so that no two quantifiers bind the same name."""
    used = set(free_vars(f)) | constants(f)
    return _apart(f, used)


def _apart(f: Formula, used: set[str]) -> Formula:
    if isinstance(f, BINARY):
        return type(f)(_apart(f.left, used), _apart(f.right, used))
    if isinstance(f, Not):
        return Not(_apart(f.body, used))
    if isinstance(f, QUANTIFIERS):
        var = f.var if f.var not in used else fresh_name(used | names(f.body))
        used.add(var)
        body = f.body if var == f.var else substitute(f.body, f.var, Var(var))
        return type(f)(var, _apart(body, used))
    return f


# -- concrete syntax ---------------------------------------------------------

_SYMBOL = {And: "&", Or: "|", Implies: "->"}


def _tight(f: Formula) -> bool:
    return isinstance(f, (Pred, Truth, Falsity, Not))


def _wrapped(f: Formula) -> str:
    text = pretty(f)
    return text if _tight(f) else f"({text})"


def pretty(f: Formula) -> str:
    if isinstance(f, Pred):
        return f"{f.name}({','.join(t.name for t in f.args)})"
    if isinstance(f, Truth):
        return "true"
    if isinstance(f, Falsity):
        return "false"
    if isinstance(f, Not):
        return "~" + _wrapped(f.body)
    if isinstance(f, BINARY):
        return f"{_wrapped(f.left)} {_SYMBOL[type(f)]} {_wrapped(f.right)}"
    if isinstance(f, QUANTIFIERS):
        word = "exists" if isinstance(f, Exists) else "forall"
        body = pretty(f.body) if _tight(f.body) or isinstance(f.body, QUANTIFIERS) else f"({pretty(f.body)})"
        return f"{word} {f.var}. {body}"
    raise TypeError(f"not a formula: {f!r}")


_TOKEN = re.compile(r"\s*(?:(->)|([A-Za-z_][A-Za-z0-9_]*)|([()~&|,.]))")


def _lex(s: str) -> list[tuple[str, int]]:
    tokens = []
    pos = 0
    while True:
        while pos < len(s) and s[pos].isspace():
            pos += 1
        if pos >= len(s):
            break
        m = _TOKEN.match(s, pos)
        if not m:
            raise FormulaSyntaxError(f"unexpected character {s[pos]!r}", pos)
        tokens.append((m.group(m.lastindex), m.start(m.lastindex)))
        pos = m.end()
    tokens.append(("", len(s)))
    return tokens


class _FormulaParser:
    def __init__(self, s: str) -> None:
        self.tokens = _lex(s)
        self.i = 0

    def peek(self) -> str:
        return self.tokens[self.i][0]

    def offset(self) -> int:
        return self.tokens[self.i][1]

    def take(self) -> str:
        tok = self.tokens[self.i][0]
        self.i += 1
        return tok

    def expect(self, tok: str, opener: int | None = None) -> None:
        if self.peek() != tok:
            if opener is not None and self.peek() == "":
                raise FormulaSyntaxError("unmatched '('", opener)
            found = self.peek() or "end of input"
            raise FormulaSyntaxError(f"expected {tok!r}, found {found!r}", self.offset())
        self.take()

    def ident(self) -> str:
        tok = self.peek()
        if not IDENT.match(tok or "-") or tok in ("exists", "forall", "true", "false"):
            found = tok or "end of input"
            raise FormulaSyntaxError(f"expected identifier, found {found!r}", self.offset())
        return self.take()

    def formula(self, bound: frozenset) -> Formula:
        left = self.disjunction(bound)
        if self.peek() == "->":
            self.take()
            return Implies(left, self.formula(bound))
        return left

    def disjunction(self, bound: frozenset) -> Formula:
        left = self.conjunction(bound)
        while self.peek() == "|":
            self.take()
            left = Or(left, self.conjunction(bound))
        return left

    def conjunction(self, bound: frozenset) -> Formula:
        left = self.unary(bound)
        while self.peek() == "&":
            self.take()
            left = And(left, self.unary(bound))
        return left

    def unary(self, bound: frozenset) -> Formula:
        tok = self.peek()
        if tok == "~":
            self.take()
            return Not(self.unary(bound))
        if tok in ("exists", "forall"):
            self.take()
            var = self.ident()
            self.expect(".")
            body = self.formula(bound | {var})
            return Exists(var, body) if tok == "exists" else Forall(var, body)
        if tok == "(":
            opener = self.offset()
            self.take()
            inner = self.formula(bound)
            self.expect(")", opener)
            return inner
        if tok == "true":
            self.take()
            return TRUE
        if tok == "false":
            self.take()
            return FALSE
        name = self.ident()
        opener = self.offset()
        self.expect("(")
        args = [self.term(bound)]
        while self.peek() == ",":
            self.take()
            args.append(self.term(bound))
        self.expect(")", opener)
        return Pred(name, args)

    def term(self, bound: frozenset) -> Term:
        name = self.ident()
        return Var(name) if name in bound or is_var_name(name) else Const(name)


def parse_formula(s: str) -> Formula:
    parser = _FormulaParser(s)
    f = parser.formula(frozenset())
    if parser.peek() != "":
        raise FormulaSyntaxError(f"unexpected {parser.peek()!r}", parser.offset())
    return f

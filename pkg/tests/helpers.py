"""Shared test machinery: random generators, a probe handler, oracles."""

from __future__ import annotations

import itertools
import random
from pathlib import Path

from hypothesis import strategies as st

from prag.effects import (
    Barrier, Features, Handler, Introduce, Perform, Quantify, Select, UnhandledEffect, pure,
)
from prag.grammar import denote_discourse, load_lexicon, parse, tokenize
from prag.logic import (
    FALSE, TRUE, And, Const, Exists, Forall, Implies, Not, Or, Pred, Var, pretty,
)

DATA = Path(__file__).parent / "data"
GOLDEN = Path(__file__).parent / "golden"

FRAGMENT = load_lexicon((DATA / "fragment.lex").read_text())
SWEEP = load_lexicon((DATA / "sweep.lex").read_text())

SWEEP_WORDS = ["a", "every", "the", "who", "doesnt", "he", "his",
               "john", "farmer", "wife", "owns", "walks"]


def denotation(text: str, lexicon=FRAGMENT):
    return denote_discourse(parse(tokenize(text), lexicon))


# -- random formulas ----------------------------------------------------------

VARS = ["x", "y", "z"]
CONSTS = ["a", "b"]


def terms():
    return st.sampled_from([Var(v) for v in VARS] + [Const(c) for c in CONSTS])


atoms = st.one_of(
    st.builds(lambda t: Pred("P", [t]), terms()),
    st.builds(lambda s, t: Pred("R", [s, t]), terms(), terms()),
    st.just(TRUE),
    st.just(FALSE),
)


def _extend(children):
    return st.one_of(
        st.builds(And, children, children),
        st.builds(Or, children, children),
        st.builds(Implies, children, children),
        st.builds(Not, children),
        st.builds(Exists, st.sampled_from(VARS), children),
        st.builds(Forall, st.sampled_from(VARS), children),
    )


formulas = st.recursive(atoms, _extend, max_leaves=12)
SIGNATURE = [("P", 1), ("R", 2)]


def random_formula(rng: random.Random, depth: int = 4):
    """Plain-random counterpart of ``formulas`` for bulk cross-checks."""
    if depth == 0 or rng.random() < 0.25:
        t = lambda: rng.choice([Var(v) for v in VARS] + [Const(c) for c in CONSTS])
        return Pred("P", [t()]) if rng.random() < 0.5 else Pred("R", [t(), t()])
    kind = rng.randrange(6)
    sub = lambda: random_formula(rng, depth - 1)
    if kind == 0:
        return And(sub(), sub())
    if kind == 1:
        return Or(sub(), sub())
    if kind == 2:
        return Implies(sub(), sub())
    if kind == 3:
        return Not(sub())
    q = Exists if kind == 4 else Forall
    return q(rng.choice(VARS), sub())


def closed(f):
    from prag.logic import free_vars

    for v in sorted(free_vars(f)):
        f = Forall(v, f)
    return f


# -- random computations ------------------------------------------------------

GENDER = [Features.of(gender=g) for g in "mfn"]


def random_computation(rng: random.Random, depth: int = 4, last=Const("c0")):
    """A random operation tree whose continuations depend on their payload."""
    if depth == 0 or rng.random() < 0.25:
        return pure(Pred("p", [last]))
    seed = rng.random()
    choice = rng.randrange(5)
    follow = lambda t, seed=seed: random_computation(random.Random(f"{seed}/{t}"), depth - 1, t)
    if choice in (0, 1):
        op = Introduce(rng.choice(GENDER), "n")
        return Perform(op, follow)
    if choice == 2:
        return Perform(Select(rng.choice(GENDER)), follow)
    if choice == 3:
        body = random_computation(random.Random(seed), depth - 1, last)
        return Perform(Barrier(body), lambda f: pure(And(f, Pred("p", [last]))))
    restr = lambda x, seed=seed: random_computation(random.Random(f"r{seed}{x}"), depth - 2, x)
    nuc = lambda x, seed=seed: random_computation(random.Random(f"n{seed}{x}"), depth - 2, x)
    return Perform(Quantify(rng.choice(GENDER), "n", restr, nuc), pure)


def random_kleisli(seed: float, depth: int = 3):
    """A deterministic function from values to random computations."""
    return lambda v: random_computation(random.Random(f"k{seed}/{pretty(v)}"), depth, Const("k"))


class ProbeHandler(Handler):
    """Deterministic handler that answers every operation from a counter."""

    def __init__(self, skip: tuple[str, ...] = ()) -> None:
        self.state = 0
        self.skip = skip

    def clause(self, op):
        if op.name in self.skip:
            raise UnhandledEffect(op.name)
        return super().clause(op)

    def _tick(self) -> int:
        self.state += 1
        return self.state

    def on_introduce(self, op, run):
        return Var(f"p{self._tick()}")

    def on_select(self, op, run):
        return Const(f"c{self._tick()}")

    def on_presuppose(self, op, run):
        return Const(f"d{self._tick()}")

    def on_quantify(self, op, run):
        x = Var(f"q{self._tick()}")
        return Forall(x.name, Implies(run(op.restrictor(x)), run(op.nucleus(x))))

    def on_barrier(self, op, run):
        self._tick()
        return Not(run(op.body))


# -- fragment sentence generator ----------------------------------------------


RULES = {
    "S": [["NP", "VP"]],
    "NP": [["Det", "Nbar"], ["PN"], ["Pro"], ["Poss", "Nrel"]],
    "Nbar": [["N"], ["N", "Rel", "VP"]],
    "VP": [["Vi"], ["Vt", "NP"], ["Neg", "VP"]],
}


def generate(lexicon, words, max_len: int) -> list[list[str]]:
    """Every S of at most ``max_len`` tokens derivable from ``words``."""
    by_cat: dict[str, list[str]] = {}
    for w in words:
        by_cat.setdefault(lexicon[w].category, []).append(w)
    memo: dict[tuple[str, int], list[list[str]]] = {}

    def exact(cat: str, n: int) -> list[list[str]]:
        if (cat, n) not in memo:
            if cat not in RULES:
                memo[cat, n] = [[w] for w in by_cat.get(cat, [])] if n == 1 else []
            else:
                memo[cat, n] = [s for rhs in RULES[cat] for s in split(rhs, n)]
        return memo[cat, n]

    def split(parts: list[str], n: int) -> list[list[str]]:
        if len(parts) == 1:
            return exact(parts[0], n)
        out = []
        for k in range(1, n - len(parts) + 2):
            for first in exact(parts[0], k):
                for rest in split(parts[1:], n - k):
                    out.append(first + rest)
        return out

    return [s for n in range(1, max_len + 1) for s in exact("S", n)]


def all_strings(words, max_len: int):
    for n in range(1, max_len + 1):
        yield from itertools.product(words, repeat=n)

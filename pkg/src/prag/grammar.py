"""Tokenizer, lexicon, parser and compositional denotations for the fragment.

Grammar::

    D    -> S (. S)*
    S    -> NP VP
    NP   -> Det Nbar | PN | Pro | Poss Nrel
    Nbar -> N | N Rel VP
    VP   -> Vi | Vt NP | Neg VP

Denotations are host-level functions that build effectful computations:
NPs take a continuation from terms to sentence computations, VPs and
nouns map a term to a computation of a formula.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Iterator, Sequence, Union

from .effects import (
    Barrier, FeatureError, Features, Introduce, Perform, Presuppose, Quantify, Select,
    bind, pure,
)
from .logic import IDENT, TRUE, And, Formula, Pred, Term, is_var_name
from .presup import Presupposition

CATEGORIES = ("PN", "N", "Nrel", "Vi", "Vt", "Det", "Pro", "Poss", "Rel", "Neg")
DETERMINERS = ("indef", "univ", "def")
ARITY = {"N": 1, "Nrel": 2, "Vi": 1, "Vt": 2}


class GrammarError(ValueError):
    """Base for tokenizer, lexicon and parser errors."""


class InvalidCharacter(GrammarError):
    def __init__(self, char: str, position: int) -> None:
        super().__init__(f"invalid character {char!r} at position {position}")
        self.char = char
        self.position = position


class LexiconError(GrammarError):
    pass


class ParseError(GrammarError):
    def __init__(self, index: int, message: str) -> None:
        super().__init__(f"parse error at token {index}: {message}")
        self.index = index


class UnknownWord(ParseError):
    def __init__(self, word: str, index: int) -> None:
        super().__init__(index, f"unknown word {word!r}")
        self.word = word


# -- tokens ---------------------------------------------------------------------


def tokenize(s: str) -> list[str]:
    tokens: list[str] = []
    word: list[str] = []
    for pos, ch in enumerate(s):
        if ch.isascii() and ch.isalpha():
            word.append(ch.lower())
            continue
        if word:
            tokens.append("".join(word))
            word = []
        if ch == ".":
            tokens.append(".")
        elif not ch.isspace():
            raise InvalidCharacter(ch, pos)
    if word:
        tokens.append("".join(word))
    return tokens


# -- lexicon --------------------------------------------------------------------


@dataclass(frozen=True)
class LexEntry:
    word: str
    category: str
    symbol: str | None
    features: Features = Features()

    def __str__(self) -> str:
        return f"{self.category} {self.word}"


Lexicon = dict[str, LexEntry]


def _core() -> Lexicon:
    m, f, n = (Features.of(gender=g) for g in "mfn")
    entries = [
        LexEntry("a", "Det", "indef"),
        LexEntry("every", "Det", "univ"),
        LexEntry("the", "Det", "def"),
        LexEntry("who", "Rel", None),
        LexEntry("doesnt", "Neg", None),
        LexEntry("he", "Pro", None, m),
        LexEntry("she", "Pro", None, f),
        LexEntry("it", "Pro", None, n),
        LexEntry("his", "Poss", None, m),
        LexEntry("her", "Poss", None, f),
    ]
    return {e.word: e for e in entries}


CORE_LEXICON: Lexicon = _core()


def _entry(word: str, category: str, symbol: str, features: Features, where: str) -> LexEntry:
    if not word.isascii() or not word.isalpha():
        raise LexiconError(f"{where}: word {word!r} is not alphabetic")
    if category not in CATEGORIES:
        raise LexiconError(f"{where}: unknown category {category}")
    if category in ARITY or category == "PN":
        if not IDENT.match(symbol) or symbol == "-":
            raise LexiconError(f"{where}: {category} needs a symbol")
        if category == "PN" and is_var_name(symbol):
            raise LexiconError(f"{where}: constant {symbol!r} looks like a variable name")
    elif category == "Det":
        if symbol not in DETERMINERS:
            raise LexiconError(f"{where}: determiner kind must be one of {', '.join(DETERMINERS)}")
    else:
        symbol = None
        if category in ("Pro", "Poss") and features.get("gender") is None:
            raise LexiconError(f"{where}: {category} needs a gender feature")
    return LexEntry(word.lower(), category, symbol, features)


def load_lexicon(s: str, base: Lexicon | None = None) -> Lexicon:
    """Read a tab-separated lexicon and merge it over ``base`` (the core words)."""
    lexicon = dict(CORE_LEXICON if base is None else base)
    for lineno, raw in enumerate(s.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        fields = line.split("\t") if "\t" in line else line.split()
        fields = [f.strip() for f in fields if f.strip()]
        if len(fields) != 4:
            raise LexiconError(f"line {lineno}: expected 4 fields, got {len(fields)}")
        word, category, symbol, feats = fields
        try:
            features = Features.parse(feats)
        except FeatureError as err:
            raise LexiconError(f"line {lineno}: {err}") from None
        entry = _entry(word, category, symbol, features, f"line {lineno}")
        old = lexicon.get(entry.word)
        if old is not None and old.category != entry.category:
            raise LexiconError(
                f"line {lineno}: {entry.word!r} already has category {old.category}"
            )
        lexicon[entry.word] = entry
    return lexicon


# -- parsing --------------------------------------------------------------------


@dataclass(frozen=True)
class Tree:
    label: str
    children: tuple[Union["Tree", LexEntry], ...]
    alternatives: int = field(default=1, compare=False)

    def words(self) -> list[str]:
        out = []
        for child in self.children:
            out.extend(child.words() if isinstance(child, Tree) else [child.word])
        return out

    def __str__(self) -> str:
        return f"{self.label}({', '.join(str(c) for c in self.children)})"


Node = Union[Tree, LexEntry]


class _SentenceParser:
    def __init__(self, tokens: Sequence[tuple[int, LexEntry]], end: int) -> None:
        self.tokens = tokens
        self.end = end
        self.furthest = 0

    def fail(self, i: int) -> None:
        self.furthest = max(self.furthest, i)

    def leaf(self, i: int, *categories: str) -> LexEntry | None:
        if i < len(self.tokens) and self.tokens[i][1].category in categories:
            return self.tokens[i][1]
        self.fail(i)
        return None

    def s(self, i: int) -> Iterator[tuple[Node, int]]:
        for np, j in self.np(i):
            for vp, k in self.vp(j):
                yield Tree("S", (np, vp)), k

    def np(self, i: int) -> Iterator[tuple[Node, int]]:
        det = self.leaf(i, "Det")
        if det:
            for nbar, j in self.nbar(i + 1):
                yield Tree("NP", (det, nbar)), j
        pn = self.leaf(i, "PN")
        if pn:
            yield Tree("NP", (pn,)), i + 1
        pro = self.leaf(i, "Pro")
        if pro:
            yield pro, i + 1
        poss = self.leaf(i, "Poss")
        if poss:
            nrel = self.leaf(i + 1, "Nrel")
            if nrel:
                yield Tree("NP", (poss, nrel)), i + 2

    def nbar(self, i: int) -> Iterator[tuple[Node, int]]:
        noun = self.leaf(i, "N")
        if not noun:
            return
        yield noun, i + 1
        rel = self.leaf(i + 1, "Rel")
        if rel:
            for vp, j in self.vp(i + 2):
                yield Tree("Nbar", (noun, rel, vp)), j

    def vp(self, i: int) -> Iterator[tuple[Node, int]]:
        vi = self.leaf(i, "Vi")
        if vi:
            yield Tree("VP", (vi,)), i + 1
        vt = self.leaf(i, "Vt")
        if vt:
            for np, j in self.np(i + 1):
                yield Tree("VP", (vt, np)), j
        neg = self.leaf(i, "Neg")
        if neg:
            for vp, j in self.vp(i + 1):
                yield Tree("VP", (neg, vp)), j

    def parses(self) -> list[Tree]:
        found = []
        for tree, j in self.s(0):
            if j == len(self.tokens):
                found.append(tree)
            else:
                self.fail(j)
        return found

    def global_index(self, i: int) -> int:
        return self.tokens[i][0] if i < len(self.tokens) else self.end


def sentences(tokens: Sequence[str]) -> list[list[tuple[int, str]]]:
    """Split on ``.``; a trailing separator is optional, empty sentences are not."""
    groups: list[list[tuple[int, str]]] = [[]]
    for index, tok in enumerate(tokens):
        if tok == ".":
            if not groups[-1]:
                raise ParseError(index, "empty sentence")
            groups.append([])
        else:
            groups[-1].append((index, tok))
    if not groups[-1]:
        groups.pop()
    return groups


def parse(tokens: Sequence[str], lexicon: Lexicon) -> list[Tree]:
    """Parse a token stream into one tree per sentence.

    Every parse is computed; the first in leftmost-derivation order is kept
    and the number found is stored on the tree as ``alternatives``.
    """
    for index, tok in enumerate(tokens):
        if tok != "." and tok not in lexicon:
            raise UnknownWord(tok, index)
    trees = []
    for group in sentences(tokens):
        end = group[-1][0] + 1
        parser = _SentenceParser([(i, lexicon[w]) for i, w in group], end)
        found = parser.parses()
        if not found:
            index = parser.global_index(parser.furthest)
            what = tokens[index] if index < len(tokens) and tokens[index] != "." else "end of sentence"
            raise ParseError(index, f"unexpected {what!r}")
        first = found[0]
        trees.append(Tree(first.label, first.children, len(found)))
    return trees


# -- denotations ----------------------------------------------------------------

VPDen = Callable[[Term], object]
NPDen = Callable[[Callable[[Term], object]], object]


def _conjoin(left, right):
    return bind(left, lambda a: bind(right, lambda b: pure(And(a, b))))


def _nbar(node: Node, sentence: int) -> tuple[LexEntry, VPDen, bool]:
    """Head noun, N-type denotation, and whether a relative clause is present."""
    if isinstance(node, LexEntry):
        return node, lambda t: pure(Pred(node.symbol, [t])), False
    noun, _, vp = node.children
    vp_den = _vp(vp, sentence)
    return noun, lambda t: _conjoin(pure(Pred(noun.symbol, [t])), vp_den(t)), True


def _np(node: Node, sentence: int) -> NPDen:
    if isinstance(node, LexEntry):
        return lambda k: Perform(Select(node.features), k)
    first = node.children[0]
    if first.category == "PN":
        op = Introduce(first.features, first.symbol, first.symbol, sentence)
        return lambda k: Perform(op, k)
    if first.category == "Poss":
        nrel = node.children[1]
        source = f"{first.word} {nrel.word}"

        def possessive(k):
            def presuppose(owner):
                p = Presupposition(nrel.symbol, (None, owner), nrel.features, source, sentence=sentence)
                return Perform(Presuppose(p), k)

            return Perform(Select(first.features), presuppose)

        return possessive
    head, nbar, relative = _nbar(node.children[1], sentence)
    if first.symbol == "indef":
        op = Introduce(head.features, head.symbol, None, sentence)
        return lambda k: Perform(op, lambda t: _conjoin(nbar(t), k(t)))
    if first.symbol == "univ":
        return lambda k: Perform(Quantify(head.features, head.symbol, nbar, k), pure)
    source = " ".join(node.words())
    p = Presupposition(
        head.symbol, (None,), head.features, source, nbar if relative else None, sentence
    )
    return lambda k: Perform(Presuppose(p), k)


def _vp(node: Tree, sentence: int) -> VPDen:
    first = node.children[0]
    if first.category == "Vi":
        return lambda t: pure(Pred(first.symbol, [t]))
    if first.category == "Vt":
        obj = _np(node.children[1], sentence)
        return lambda s: obj(lambda o: pure(Pred(first.symbol, [s, o])))
    inner = _vp(node.children[1], sentence)
    return lambda t: Perform(Barrier(inner(t)), pure)


def denote(tree: Node, sentence: int = 0):
    """Denotation of a parse node, by category.

    S gives a computation of a formula, NP a function from continuations to
    computations, VP and nouns functions from terms to computations.
    """
    if isinstance(tree, LexEntry):
        if tree.category == "Pro":
            return _np(tree, sentence)
        if tree.category == "N":
            return _nbar(tree, sentence)[1]
        if tree.category == "Vi":
            return lambda t: pure(Pred(tree.symbol, [t]))
        raise ValueError(f"{tree.category} has no denotation on its own")
    if tree.label == "S":
        np, vp = tree.children
        return _np(np, sentence)(_vp(vp, sentence))
    if tree.label == "NP":
        return _np(tree, sentence)
    if tree.label == "VP":
        return _vp(tree, sentence)
    if tree.label == "Nbar":
        return _nbar(tree, sentence)[1]
    raise ValueError(f"unknown node {tree.label}")


def denote_discourse(trees: Sequence[Tree], start: int = 1, initial: Formula = TRUE):
    """Sequence sentence computations left to right, conjoining their values."""
    acc = pure(initial)
    for offset, tree in enumerate(trees):
        acc = bind(acc, lambda p, tree=tree, n=start + offset: bind(
            denote(tree, n), lambda q: pure(And(p, q))
        ))
    return acc

import pytest

from helpers import FRAGMENT, denotation, generate
from prag.context import NEGATION, TOP, UNIVERSAL, Context, ScopeFrame
from prag.dynamics import (
    STRONG_DONKEY_READING, UnresolvedAnaphora, existential_closure, interpret, run_discourse,
    select_antecedent,
)
from prag.effects import Features, render_trace
from prag.logic import TRUE, And, Const, Exists, Pred, Var, free_vars, parse_formula, pretty
from prag.models import equivalent_up_to
from prag.presup import Policy

m, f, n = (Features.of(gender=g) for g in "mfn")
x1, x2 = Var("x1"), Var("x2")


def ctx_with(*specs):
    ctx = Context()
    for features in specs:
        term, ctx = ctx.fresh()
        ctx = ctx.introduce(term, features)
    return ctx


def run(text, policy="trapped"):
    return run_discourse(denotation(text), Context(), Policy.of(policy))


class TestSelectAntecedent:
    def test_feature_filter(self):
        assert select_antecedent(ctx_with(m, n), n) == x2

    def test_recency(self):
        assert select_antecedent(ctx_with(m, m), m) == x2

    def test_no_match(self):
        with pytest.raises(UnresolvedAnaphora):
            select_antecedent(ctx_with(f), m)

    def test_empty_constraints_take_latest(self):
        assert select_antecedent(ctx_with(f, m), Features()) == x2


class TestExistentialClosure:
    def test_single(self):
        body = And(Pred("man", [x1]), Pred("walks", [x1]))
        assert existential_closure(body, ["x1"]) == Exists("x1", body)

    def test_empty(self):
        phi = Pred("bald", [Const("john")])
        assert existential_closure(phi, []) is phi

    def test_innermost_is_last(self):
        phi = Pred("owns", [x1, x2])
        assert existential_closure(phi, ["x1", "x2"]) == Exists("x1", Exists("x2", phi))


class TestRunDiscourse:
    def test_empty(self):
        formula, ctx, trace = run_discourse(denotation(""), Context())
        assert formula == TRUE and ctx == Context() and trace == []

    def test_cross_sentential_anaphora(self):
        formula, ctx, trace = run("a man walks . he whistles .")
        target = parse_formula("exists x. (man(x) & (walks(x) & whistles(x)))")
        assert equivalent_up_to(formula, target, [("man", 1), ("walks", 1), ("whistles", 1)], 3)
        assert [(r.term, r.features) for r in ctx.referents] == [(x1, m)]
        assert render_trace(trace) == ["introduce {gender=m} -> x1", "select {gender=m} -> x1"]

    def test_universal_hides_its_indefinite(self):
        with pytest.raises(UnresolvedAnaphora):
            run("every farmer owns a donkey . it brays .")

    def test_donkey_strong_reading(self):
        assert STRONG_DONKEY_READING
        formula, ctx, _ = run("every farmer who owns a donkey beats it .")
        target = parse_formula("forall x. forall y. ((farmer(x) & donkey(y) & owns(x,y)) -> beats(x,y))")
        sig = [("farmer", 1), ("donkey", 1), ("owns", 2), ("beats", 2)]
        assert equivalent_up_to(formula, target, sig, 2)
        assert ctx.referents == ()

    def test_donkey_differs_from_weak_reading(self):
        # the weak reading closes the donkey inside the restrictor; the
        # oracle must be able to tell the two apart
        formula, _, _ = run("every farmer who owns a donkey beats it .")
        weak = parse_formula(
            "forall x. ((farmer(x) & exists y. (donkey(y) & owns(x,y))) -> exists y. (donkey(y) & owns(x,y) & beats(x,y)))"
        )
        sig = [("farmer", 1), ("donkey", 1), ("owns", 2), ("beats", 2)]
        assert not equivalent_up_to(formula, weak, sig, 2)

    def test_negated_subject_stays_accessible(self):
        formula, ctx, trace = run("a man doesnt walk . he whistles .")
        assert [r.term for r in ctx.referents] == [x1]
        assert render_trace(trace)[-1] == "select {gender=m} -> x1"
        target = parse_formula("exists x. (man(x) & ~walks(x) & whistles(x))")
        assert equivalent_up_to(formula, target, [("man", 1), ("walks", 1), ("whistles", 1)], 3)

    def test_referent_inside_barrier_is_inaccessible(self):
        with pytest.raises(UnresolvedAnaphora) as err:
            run("john doesnt own a donkey . it brays .")
        records = err.value.trace
        assert render_trace(records) == [
            "introduce john {gender=m} -> john",
            "barrier -> ~(exists x1. (donkey(x1) & owns(john,x1)))",
            "introduce {gender=n} -> x1",
            "select {gender=n} -> !",
        ]
        assert err.value.constraints == n

    def test_double_negation_keeps_referent_hidden(self):
        formula, _, _ = run("john doesnt doesnt own a donkey .")
        assert pretty(formula) == "~~(exists x1. (donkey(x1) & owns(john,x1)))"
        with pytest.raises(UnresolvedAnaphora):
            run("john doesnt doesnt own a donkey . it brays .")

    def test_proper_names_are_top_level_and_write_once(self):
        formula, ctx, trace = run("every farmer loves john . john walks . he whistles .")
        assert [r.term for r in ctx.referents] == [Const("john")]
        assert ctx.referents[0].scope_level == 0
        assert render_trace(trace)[-1] == "select {gender=m} -> john"
        assert free_vars(formula) == set()

    def test_john_walks(self):
        formula, ctx, _ = run("john walks .")
        assert equivalent_up_to(formula, parse_formula("walks(john)"), [("walks", 1)], 2)
        assert ctx.render() == ["john gender=m introduced-in:S1 level:top"]

    def test_stack_is_restored(self):
        _, ctx, _ = run("every farmer who owns a donkey doesnt beat it .")
        assert [frame.kind for frame in ctx.scope_stack] == [TOP]

    def test_context_must_start_at_top(self):
        ctx = Context().push(ScopeFrame(NEGATION))
        with pytest.raises(ValueError):
            interpret(denotation("john walks ."), ctx)


class TestContext:
    def test_pop_discards_local_referents(self):
        ctx = Context()
        binder, ctx = ctx.fresh()
        ctx = ctx.push(ScopeFrame(UNIVERSAL, binder)).introduce(binder, m)
        inner, ctx = ctx.fresh()
        ctx = ctx.introduce(inner, n).accommodate_condition(Pred("p", [inner]), 1)
        frame, ctx = ctx.pop()
        assert frame.introduced_here == ("x1", "x2")
        assert ctx.referents == () and ctx.accommodated == ()
        assert ctx.fresh_counter == 3

    def test_render(self):
        _, ctx, _ = run("the kof isbald .")
        assert ctx.render() == ["x1 gender=m introduced-in:S1 level:top", "kof(x1)"]


# -- invariants over the generated fragment -----------------------------------

WORDS = ["a", "every", "the", "who", "doesnt", "he", "it", "his", "john",
         "farmer", "donkey", "wife", "owns", "beats", "brays"]
SENTENCES = [" ".join(s) for s in generate(FRAGMENT, WORDS, 6)]


def _outcomes():
    for text in SENTENCES:
        try:
            yield text, run(text + " .")
        except UnresolvedAnaphora:
            continue


def test_generated_sample_is_large():
    assert len(SENTENCES) > 600


def test_outputs_are_closed_and_top_level_only():
    seen = 0
    for text, (formula, ctx, _) in _outcomes():
        assert free_vars(formula) == set(), text
        assert all(r.scope_level == 0 for r in ctx.referents), text
        assert len(ctx.scope_stack) == 1
        seen += 1
    assert seen > len(SENTENCES) // 2


def test_determinism():
    for text in SENTENCES[::25]:
        try:
            first = run(text + " .")
        except UnresolvedAnaphora:
            with pytest.raises(UnresolvedAnaphora):
                run(text + " .")
            continue
        formula, ctx, trace = run(text + " .")
        assert (formula, ctx, render_trace(trace)) == (first[0], first[1], render_trace(first[2]))


def test_top_level_monotonicity():
    prefix = "a man owns a donkey . john loves a woman ."
    _, before, _ = run(prefix)
    for text in SENTENCES[::40]:
        try:
            _, after, _ = run(f"{prefix} {text} .")
        except UnresolvedAnaphora:
            continue
        assert after.referents[: len(before.referents)] == before.referents, text

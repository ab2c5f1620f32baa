import json

import pytest
from hypothesis import given, settings

from lpbase.engine import kripke_kleene
from lpbase.errors import BudgetExceeded, InconsistentProgram
from lpbase.extensor import answer_sets, classify, stable_models, well_founded
from lpbase.forcing import GroundContext, is_consistent
from lpbase.program import (
    FormalLogicProgram, Rule, from_general_program, merge_rules, symmetric_completion,
    to_general_program,
)
from lpbase.reference import (
    compare, corpus, normal_reading, oracle_alternating_wf, oracle_extensor_enum, oracle_fitting,
    oracle_gl, random_formal_program, random_general_program, random_marker, random_vocabulary,
)
from lpbase.syntax import FALSE, TRUE, Atom, Not, Vocabulary, numeral
from fixtures import ARITH, V1, arithmetic_program, four_atom_program, n, p, s
from strategies import rng_from, seeds

PQ = Vocabulary.of({}, {"p": 0, "q": 0})
Q = Vocabulary.of({}, {"q": 0})


def test_fitting_examples():
    ctx = GroundContext(ARITH, 12)
    got = oracle_fitting(arithmetic_program(), ctx)
    assert got == kripke_kleene(arithmetic_program(), ctx)
    assert p("p1", numeral(10)) in got and n("p2", numeral(9)) in got and p("q1") in got
    loop = symmetric_completion(FormalLogicProgram(Q, {"q": (p("q"), FALSE)}))
    assert oracle_fitting(loop, GroundContext(Q, 0)) == frozenset()
    facts = FormalLogicProgram(PQ, {"p": (TRUE, FALSE), "q": (FALSE, TRUE)})
    assert oracle_fitting(facts, GroundContext(PQ, 0)) == {p("p"), n("q")}


def test_gelfond_lifschitz_examples():
    P, marker = four_atom_program()
    ctx = GroundContext(P.vocabulary, 0)
    assert oracle_gl(to_general_program(P, marker), ctx) == [frozenset({n("p1"), p("p2"), p("p4")})]
    assert oracle_gl(merge_rules([Rule(p("q"), Not(p("q")))], Q), GroundContext(Q, 0)) == []
    choice = merge_rules([Rule(p("p"), Not(p("q"))), Rule(p("q"), Not(p("p")))], PQ)
    assert set(oracle_gl(choice, GroundContext(PQ, 0))) == {frozenset({p("p")}), frozenset({p("q")})}


def test_gelfond_lifschitz_budget():
    v = random_vocabulary(13)
    G = random_general_program(rng_from(0), 13)
    with pytest.raises(BudgetExceeded):
        oracle_gl(G, GroundContext(v, 0))


def test_alternating_fixpoint_examples():
    vocab = Vocabulary.of({"0": 0, "s": 1}, {"p": 1})
    descent = FormalLogicProgram(vocab, {"p": (p("p", s(s(V1))), FALSE)})
    got = oracle_alternating_wf(descent, GroundContext(vocab, 10))
    assert {n("p", numeral(k)) for k in range(11)} == got
    loop = FormalLogicProgram(Q, {"q": (p("q"), FALSE)})
    assert oracle_alternating_wf(loop, GroundContext(Q, 0)) == {n("q")}
    choice = merge_rules([Rule(p("p"), Not(p("q"))), Rule(p("q"), Not(p("p")))], PQ)
    assert oracle_alternating_wf(choice, GroundContext(PQ, 0)) == frozenset()


def test_normal_reading():
    P = FormalLogicProgram(PQ, {"p": (n("q"), TRUE), "q": (FALSE, FALSE)})
    assert normal_reading(P).rules["p"] == (Not(p("q")), FALSE)


def test_extensor_families_of_the_four_atom_program():
    P, marker = four_atom_program()
    ctx = GroundContext(P.vocabulary, 0)
    table = oracle_extensor_enum(P, marker, ctx)
    assert len(table) == 256
    values = {}
    for E, k in table.items():
        if k.is_extensor:
            values.setdefault(k.generated, []).append(E)
    assert set(values) == {frozenset(), frozenset({n("p1")}), frozenset({n("p1"), p("p2"), p("p4")})}
    imperative = [E for E, k in table.items() if k.is_imperative]
    assert imperative == [frozenset({n("p1"), p("p2"), p("p3"), n("p3"), p("p4")})]
    assert table[frozenset()].is_extensor


def test_report():
    r = compare("x", [{p("q")}], [{p("q")}])
    assert r.agreement and r.witnesses == []
    r = compare("x", frozenset({p("q")}), frozenset())
    assert not r.agreement and r.witnesses
    assert json.loads(r.to_json())["agreement"] is False


def test_corpus_is_seeded():
    a = [(k, r.random()) for k, r in corpus(3, sizes=range(3, 5), per_size=4)]
    b = [(k, r.random()) for k, r in corpus(3, sizes=range(3, 5), per_size=4)]
    assert a == b and len(a) == 8


@settings(max_examples=40, deadline=None)
@given(seeds)
def test_classify_agrees_with_the_enumerator(seed):
    rng = rng_from(seed)
    P = random_formal_program(rng, rng.randint(2, 3), symmetric=rng.random() < 0.5)
    ctx = GroundContext(P.vocabulary, 0)
    marker = random_marker(rng, P)
    for E, k in oracle_extensor_enum(P, marker, ctx).items():
        assert classify(P, marker, E, ctx).flags() == k.flags(), E


@settings(max_examples=100, deadline=None)
@given(seeds)
def test_base_semantics_agrees_with_fitting(seed):
    rng = rng_from(seed)
    P = random_formal_program(rng, rng.randint(2, 7), symmetric=rng.random() < 0.5)
    ctx = GroundContext(P.vocabulary, 0)
    try:
        kk = kripke_kleene(P, ctx)
    except InconsistentProgram:
        return
    assert compare("kk", kk, oracle_fitting(P, ctx)).agreement


@settings(max_examples=100, deadline=None)
@given(seeds)
def test_answer_sets_agree_with_gelfond_lifschitz(seed):
    rng = rng_from(seed)
    n_atoms = rng.randint(2, 7)
    G = random_general_program(rng, n_atoms)
    ctx = GroundContext(G.vocabulary, 0)
    P, marker = from_general_program(G)
    assert compare("answer", answer_sets(P, marker, ctx), oracle_gl(G, ctx)).agreement


@settings(max_examples=100, deadline=None)
@given(seeds)
def test_stable_models_and_well_founded_agree_with_the_oracles(seed):
    rng = rng_from(seed)
    P = random_formal_program(rng, rng.randint(2, 7), symmetric=True)
    ctx = GroundContext(P.vocabulary, 0)
    atoms = [frozenset(x for x in m if isinstance(x, Atom)) for m in stable_models(P, ctx)]
    assert compare("stable", atoms, oracle_gl(normal_reading(P), ctx)).agreement
    assert compare("wf", well_founded(P, ctx), oracle_alternating_wf(P, ctx)).agreement


def test_enumerated_unions_of_mutually_consistent_implicative_extensors():
    for n_atoms, rng in corpus(5, sizes=[3], per_size=6):
        P = random_formal_program(rng, n_atoms, symmetric=True)
        ctx = GroundContext(P.vocabulary, 0)
        table = oracle_extensor_enum(P, random_marker(rng, P), ctx, foundational=False)
        implicative = [E for E, k in table.items() if k.is_extensor and k.is_implicative]
        for E in implicative:
            for F in implicative:
                if is_consistent(E | table[F].generated) and is_consistent(F | table[E].generated):
                    assert table[E | F].is_extensor

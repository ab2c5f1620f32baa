"""Hypothesis strategies for statements and small propositional programs."""

import random

from hypothesis import strategies as st

from lpbase.syntax import (
    And, Atom, Distinction, Exists, Fn, Forall, Identity, NegAtom, Or, Var, Vocabulary,
)

ZERO = Fn("0")
VOCAB = Vocabulary.of({"0": 0, "s": 1}, {"a": 0, "b": 0, "c": 0, "p": 1, "r": 1})

closed_terms = st.integers(0, 2).map(lambda n: _num(n))


def _num(n):
    t = ZERO
    for _ in range(n):
        t = Fn("s", (t,))
    return t


terms = st.one_of(closed_terms, st.integers(0, 2).map(Var))


def _literal(args_strategy):
    prop = st.tuples(st.sampled_from("abc"), st.booleans()).map(
        lambda x: (Atom if x[1] else NegAtom)(x[0], ()))
    unary = st.tuples(st.sampled_from("pr"), args_strategy, st.booleans()).map(
        lambda x: (Atom if x[2] else NegAtom)(x[0], (x[1],)))
    return st.one_of(prop, unary)


def _extend(children):
    junction = st.tuples(st.sampled_from([Or, And]), st.lists(children, max_size=3)).map(
        lambda x: x[0](tuple(x[1])))
    return junction


open_statements = st.recursive(
    st.one_of(_literal(terms),
              st.tuples(terms, terms, st.booleans()).map(
                  lambda x: (Identity if x[2] else Distinction)(x[0], x[1]))),
    _extend, max_leaves=8)


def _quantify(s, var, universal):
    if var in s.fv:
        return (Forall if universal else Exists)(var, s)
    return s


statements = st.tuples(open_statements, st.integers(0, 2), st.booleans()).map(
    lambda x: _quantify(*x))


def _close(s):
    for v in sorted(s.fv):
        s = Exists(v, s)
    return s


closed_statements = statements.map(_close)

literal_sets = st.frozensets(_literal(closed_terms), max_size=8)

seeds = st.integers(0, 2 ** 32 - 1)


def rng_from(seed):
    return random.Random(seed)

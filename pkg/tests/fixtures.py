"""Hand-built programs shared by the tests."""

import itertools

from lpbase.forcing import atoms_in, is_model
from lpbase.program import FormalLogicProgram, LiteralMarker
from lpbase.syntax import (
    FALSE, TRUE, And, Atom, Distinction, Exists, Fn, Forall, Identity, NegAtom, Or, Var,
    Vocabulary, free_vars, substitute,
)

V0, V1 = Var(0), Var(1)
ZERO = Fn("0")


def s(t):
    return Fn("s", (t,))


def p(name, *args):
    return Atom(name, tuple(args))


def n(name, *args):
    return NegAtom(name, tuple(args))


ARITH = Vocabulary.of({"0": 0, "s": 1},
                      {"q1": 0, "q2": 0, "q3": 0, "q4": 0, "q5": 0,
                       "p1": 1, "p2": 1, "p3": 1, "p4": 1})


def arithmetic_program():
    """Evens, odds and friends over 0 and s, plus five small propositional puzzles."""
    even_pos = lambda q: Or((Identity(V1, ZERO),
                             Exists(0, And((Identity(V1, s(s(V0))), p(q, V0))))))
    rules = {
        "p1": (even_pos("p1"),
               And((Distinction(V1, ZERO),
                    Forall(0, Or((Distinction(V1, s(s(V0))), n("p1", V0))))))),
        "p2": (even_pos("p2"),
               Or((Identity(V1, s(ZERO)),
                   Exists(0, And((Identity(V1, s(s(V0))), n("p2", V0))))))),
        "p3": (Or((Identity(V1, ZERO), Exists(0, And((Identity(V1, s(V0)), n("p3", V0)))))),
               Exists(0, And((Identity(V1, s(V0)), p("p3", V0))))),
        "p4": (p("p4", s(s(V1))), n("p4", s(s(V1)))),
        "q1": (TRUE, FALSE),
        "q2": (p("q3"), n("q3")),
        "q3": (p("q2"), n("q2")),
        "q4": (p("q4"), FALSE),
        "q5": (n("q5"), FALSE),
    }
    return FormalLogicProgram(ARITH, rules)


FOUR = Vocabulary.of({}, {"p1": 0, "p2": 0, "p3": 0, "p4": 0})


def four_atom_program():
    """A four-atom propositional program with a hand-picked marker."""
    rules = {
        "p1": (And((p("p2"), p("p3"))), Or((p("p2"), n("p4")))),
        "p2": (p("p4"), n("p3")),
        "p3": (p("p3"), And((n("p3"), p("p2")))),
        "p4": (n("p3"), FALSE),
    }
    P = FormalLogicProgram(FOUR, rules)
    marker = LiteralMarker({
        "p1": (frozenset(), frozenset({(0,), (1,)})),
        "p3": (frozenset(), frozenset({(1,)})),
        "p4": (frozenset({()}), frozenset()),
    })
    return P, marker


# the hypothesis set used for the rewrite goldens on arithmetic_program
ARITH_E = frozenset({p("p3", s(s(ZERO))), p("p3", s(s(s(ZERO)))), n("p3", s(ZERO)),
                     n("p3", s(s(ZERO))), p("p4", s(s(ZERO))), n("p4", s(ZERO)), n("q5")})


def equivalent_in_W(a, b, ctx, max_atoms=14):
    """``a`` and ``b`` agree on every closed instance in every standard structure.

    Atoms are enumerated per closed instance, so only the atoms an instance
    mentions are ever assigned.
    """
    vs = sorted(free_vars(a) | free_vars(b))
    for values in itertools.product(ctx.universe, repeat=len(vs)):
        env = dict(zip(vs, values))
        ia, ib = substitute(a, env), substitute(b, env)
        atoms = sorted(atoms_in(ia, ctx) | atoms_in(ib, ctx), key=str)
        assert len(atoms) <= max_atoms, "too many atoms to enumerate"
        for bits in itertools.product((False, True), repeat=len(atoms)):
            M = {x for x, bit in zip(atoms, bits) if bit}
            if is_model(M, ia, ctx) != is_model(M, ib, ctx):
                return False
    return True

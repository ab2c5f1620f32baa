"""Brute-force oracles for differential testing.

These follow the textbook constructions (Fitting's three-valued operator,
the Gelfond-Lifschitz reduct, van Gelder's alternating fixpoint) and a
literal reading of the extensor definitions.  They share nothing with the
engine beyond the syntax tree and the ground universe, so agreement between
the two is evidence rather than tautology.  Everything here is exponential
and meant for small programs.
"""

import itertools
import json
import random
from dataclasses import dataclass, field

import numpy as np

from .errors import BudgetExceeded, ValidationError
from .extensor import NO, UNKNOWN, YES, ExtensorClassification, FoundationalChain
from .program import (
    FormalLogicProgram, GeneralProgram, LiteralMarker, is_symmetric, symmetric_completion,
)
from .syntax import (
    FALSE, TRUE, And, Atom, Distinction, Exists, Fn, Forall, Identity, NegAtom, Not, Or, Var,
    Vocabulary, complement, literal_sort_key, occurrences, render,
)
from .transform import marker_advance, program_relax


@dataclass
class OracleReport:
    """Outcome of comparing an engine result with an oracle result."""

    semantics: str
    engine: list
    oracle: list
    agreement: bool = field(init=False)
    witnesses: list = field(init=False)

    def __post_init__(self):
        a = {_key(x) for x in self.engine}
        b = {_key(x) for x in self.oracle}
        self.witnesses = sorted(a ^ b)
        self.agreement = not self.witnesses

    def to_json(self):
        return json.dumps({
            "semantics": self.semantics,
            "engine": sorted(_key(x) for x in self.engine),
            "oracle": sorted(_key(x) for x in self.oracle),
            "agreement": self.agreement,
            "witnesses": self.witnesses,
        }, sort_keys=True)


def _key(literals):
    return tuple(render(x) for x in sorted(literals, key=literal_sort_key))


def compare(semantics, engine, oracle):
    """Compare two collections of literal sets (a single set counts as one)."""
    if isinstance(engine, (set, frozenset)):
        engine = [engine]
    if isinstance(oracle, (set, frozenset)):
        oracle = [oracle]
    return OracleReport(semantics, list(engine), list(oracle))


# -- a small grounder of its own ---------------------------------------------------


def _term(t, env):
    if isinstance(t, Var):
        return env[t.index]
    if not t.vars:
        return t
    return Fn(t.name, tuple(_term(a, env) for a in t.args))


def _ground(s, env, universe):
    """Closed tree: ('c', bool) | ('l', lit) | ('n', lit) | ('or'|'and', kids)."""
    if isinstance(s, (Atom, NegAtom)):
        return ("l", type(s)(s.pred, tuple(_term(a, env) for a in s.args)))
    if isinstance(s, Not):
        lit = s.literal
        return ("n", type(lit)(lit.pred, tuple(_term(a, env) for a in lit.args)))
    if isinstance(s, Identity):
        return ("c", _term(s.left, env) == _term(s.right, env))
    if isinstance(s, Distinction):
        return ("c", _term(s.left, env) != _term(s.right, env))
    if isinstance(s, (Or, And)):
        kind = "or" if isinstance(s, Or) else "and"
        return (kind, tuple(_ground(c, env, universe) for c in s.children))
    if isinstance(s, (Exists, Forall)):
        kind = "or" if isinstance(s, Exists) else "and"
        return (kind, tuple(_ground(s.body, {**env, s.var: u}, universe) for u in universe))
    raise ValidationError(f"not a statement: {s!r}")


def _rules(P, ctx):
    """[(head literal, ground body)] for every atom of the base and both signs."""
    universe = ctx.universe
    out = []
    for atom in ctx.atom_base:
        env = {k + 1: t for k, t in enumerate(atom.args)}
        pos, neg = P.rules[atom.pred]
        out.append((atom, _ground(pos, env, universe)))
        out.append((complement(atom), _ground(neg, env, universe)))
    return out


def _holds(node, S):
    """Two-valued forcing of a ground tree by a consistent set of literals."""
    kind = node[0]
    if kind == "c":
        return node[1]
    if kind == "l":
        return node[1] in S
    if kind == "or":
        return any(_holds(c, S) for c in node[1])
    if kind == "and":
        return all(_holds(c, S) for c in node[1])
    raise ValidationError("'not' cannot be forced")


def _consistent(S):
    return not any(isinstance(x, Atom) and complement(x) in S for x in S)


def _lfp(rules, seed=frozenset()):
    """Least set closed under the rules, by naive iteration.

    Once the set is inconsistent every head is added, as an inconsistent set
    forces everything.
    """
    S = set(seed)
    while True:
        if not _consistent(S):
            new = S | {h for h, _ in rules}
        else:
            new = S | {h for h, b in rules if _holds(b, S)}
        if new == S:
            return frozenset(S)
        S = new


# -- Kripke-Kleene ------------------------------------------------------------------


def _kleene(node, T, F):
    """Strong Kleene value (1, 0, -1) of a ground tree; atoms in T true, in F false."""
    kind = node[0]
    if kind == "c":
        return 1 if node[1] else -1
    if kind == "l":
        lit = node[1]
        if isinstance(lit, Atom):
            return 1 if lit in T else (-1 if lit in F else 0)
        a = complement(lit)
        return 1 if a in F else (-1 if a in T else 0)
    vals = [_kleene(c, T, F) for c in node[1]]
    if kind == "or":
        return max(vals, default=-1)
    return min(vals, default=1)


def oracle_fitting(P, ctx):
    """Least fixpoint of Fitting's operator, from the everywhere-undefined interpretation.

    For a symmetric program an atom becomes false when its positive body
    evaluates to false (the negative body is never consulted); otherwise an
    atom becomes false when its negative body evaluates to true.  Atoms
    beyond the depth bound stay undefined.
    """
    rules = _rules(P, ctx)
    pos = [(h, b) for h, b in rules if isinstance(h, Atom)]
    neg = [(complement(h), b) for h, b in rules if isinstance(h, NegAtom)]
    symmetric = is_symmetric(P)
    T, F = frozenset(), frozenset()
    while True:
        T2 = frozenset(a for a, b in pos if _kleene(b, T, F) == 1)
        if symmetric:
            F2 = frozenset(a for a, b in pos if _kleene(b, T, F) == -1)
        else:
            F2 = frozenset(a for a, b in neg if _kleene(b, T, F) == 1)
        if (T2, F2) == (T, F):
            break
        T, F = T2, F2
    return frozenset(T) | frozenset(complement(a) for a in F)


# -- answer sets by reduct -------------------------------------------------------------


def _np_compile(node, idx):
    kind = node[0]
    if kind == "c":
        v = node[1]
        return lambda S, M: np.full(S.shape[0], v)
    if kind in ("l", "n"):
        j = idx.get(node[1])
        if kind == "l":
            if j is None:
                return lambda S, M: np.zeros(S.shape[0], dtype=bool)
            return lambda S, M: S[:, j]
        if j is None:
            return lambda S, M: np.ones(S.shape[0], dtype=bool)
        return lambda S, M: ~M[:, j]
    kids = [_np_compile(c, idx) for c in node[1]]
    if kind == "or":
        if not kids:
            return lambda S, M: np.zeros(S.shape[0], dtype=bool)
        return lambda S, M: np.logical_or.reduce([k(S, M) for k in kids])
    if not kids:
        return lambda S, M: np.ones(S.shape[0], dtype=bool)
    return lambda S, M: np.logical_and.reduce([k(S, M) for k in kids])


def oracle_gl(G, ctx, *, max_atoms=12):
    """Answer sets of a general program: consistent M equal to the least model of G^M.

    ``not L`` is true in the reduct iff L is not in M.  All 3^n consistent
    candidate sets are checked at once, one row per candidate.  The
    inconsistent set of all literals is never reported.
    """
    atoms = list(ctx.atom_base)
    if len(atoms) > max_atoms:
        raise BudgetExceeded(f"{len(atoms)} atoms exceed the oracle limit of {max_atoms}")
    lits = [x for a in atoms for x in (a, complement(a))]
    idx = {x: j for j, x in enumerate(lits)}
    bodies = [_np_compile(b, idx) for _, b in _rules(G, ctx)]
    picks = np.array(list(itertools.product((0, 1, 2), repeat=len(atoms))), dtype=np.int8)
    picks = picks.reshape(3 ** len(atoms), len(atoms))
    M = np.zeros((picks.shape[0], len(lits)), dtype=bool)
    M[:, 0::2] = picks == 0
    M[:, 1::2] = picks == 1
    S = np.zeros_like(M)
    while True:
        new = np.column_stack([b(S, M) for b in bodies]) if bodies else S
        if np.array_equal(new, S):
            break
        S = new
    rows = np.nonzero((S == M).all(axis=1))[0]
    return [frozenset(lits[j] for j in np.nonzero(M[r])[0]) for r in rows]


# -- well-founded model by alternating fixpoint -------------------------------------


def normal_reading(P):
    """The positive rules of P with every negated atom read as ``not`` the atom."""
    def conv(s):
        if isinstance(s, NegAtom):
            return Not(Atom(s.pred, s.args))
        if isinstance(s, (Or, And)):
            return type(s)(tuple(conv(c) for c in s.children))
        if isinstance(s, (Exists, Forall)):
            return type(s)(s.var, conv(s.body))
        return s
    return GeneralProgram(P.vocabulary, {p: (conv(pos), FALSE) for p, (pos, _) in P.rules.items()})


def _reduct_holds(node, S, I):
    kind = node[0]
    if kind == "c":
        return node[1]
    if kind == "l":
        return node[1] in S
    if kind == "n":
        if isinstance(node[1], NegAtom):
            raise ValidationError("a normal program has no 'not -a'")
        return node[1] not in I
    if kind == "or":
        return any(_reduct_holds(c, S, I) for c in node[1])
    return all(_reduct_holds(c, S, I) for c in node[1])


def oracle_alternating_wf(G, ctx):
    """Well-founded model of the normal program G by van Gelder's alternating fixpoint.

    A formal program is first given its normal reading.  Gamma(I) is the least
    model of the reduct by I; the true atoms are the least fixpoint of Gamma
    twice applied and the false atoms those outside Gamma of it.
    """
    if not isinstance(G, GeneralProgram):
        G = normal_reading(G)
    rules = [(h, b) for h, b in _rules(G, ctx) if isinstance(h, Atom)]

    def gamma(I):
        S = set()
        while True:
            new = {h for h, b in rules if _reduct_holds(b, S, I)}
            if new == S:
                return frozenset(S)
            S = new

    K = frozenset()
    while True:
        U = gamma(K)
        K2 = gamma(U)
        if K2 == K:
            break
        K = K2
    false = [a for a in ctx.atom_base if a not in U]
    return frozenset(K) | frozenset(complement(a) for a in false)


# -- extensors by exhaustive search ----------------------------------------------------


class _Relaxed:
    """Ground rules of a program relaxed by a hypothesis set, with generated literals."""

    def __init__(self, P, ctx):
        self.rules = _rules(P, ctx)
        self.body = dict(self.rules)
        self.generated = _lfp(self.rules)

    def cone(self, psi):
        """Literals that psi's body mentions, directly or through other bodies."""
        seen = set()
        todo = [psi]
        while todo:
            x = todo.pop()
            for y in _mentions(self.body.get(x, ("c", False))):
                if y not in seen:
                    seen.add(y)
                    todo.append(y)
        return seen


def _mentions(node):
    if node[0] == "l":
        return [node[1]]
    if node[0] in ("or", "and"):
        return [y for c in node[1] for y in _mentions(c)]
    return []


def _supported(rel, base_rel, psi, budget):
    """Some X within [base] forces psi's body, and every member of X its own (in rel).

    Only subsets of the literals psi depends on need to be tried: cutting X
    down to them keeps every body that matters forced.
    """
    if psi not in rel.body:
        return True
    pool = sorted(base_rel.generated & rel.cone(psi), key=literal_sort_key)
    if len(pool) > budget:
        raise BudgetExceeded(f"{len(pool)} generated literals exceed the subset budget")
    for r in range(len(pool) + 1):
        for X in itertools.combinations(pool, r):
            X = frozenset(X)
            if _holds(rel.body[psi], X) and all(_holds(rel.body[x], X) for x in X if x in rel.body):
                return True
    return False


class _Enumerator:
    def __init__(self, P, marker, ctx, budget):
        self.P, self.marker, self.ctx, self.budget = P, marker, ctx, budget
        self.base = frozenset(ctx.literal_base)
        self._prog = {}
        self._chain = {}

    def program(self, D):
        """(P relaxed by D, its marker, ground rules) for a hypothesis set D."""
        if D not in self._prog:
            P, marker = self.P, self.marker
            if D:
                E = sorted(D, key=literal_sort_key)
                P, marker = program_relax(self.P, self.marker, E), marker_advance(self.marker, E, self.P)
            self._prog[D] = (P, marker, _Relaxed(P, self.ctx))
        return self._prog[D]

    def relaxed(self, D, X):
        P, marker, _ = self.program(D)
        key = ("x", D, X)
        if key not in self._prog:
            rp = program_relax(P, marker, sorted(X, key=literal_sort_key)) if X else P
            self._prog[key] = _Relaxed(rp, self.ctx)
        return self._prog[key]

    def supporting_extensor(self, D, X):
        _, _, base_rel = self.program(D)
        rel = self.relaxed(D, X)
        if not _consistent(rel.generated):
            return False
        return all(_supported(rel, base_rel, psi, self.budget) for psi in X if psi in self.base)

    def chain(self, D, rest):
        """A foundational chain for rest on top of D, or None."""
        if not rest:
            return ()
        key = (D, rest)
        if key in self._chain:
            return self._chain[key]
        self._chain[key] = None
        items = sorted(rest, key=literal_sort_key)
        for r in range(1, len(items) + 1):
            for X in itertools.combinations(items, r):
                X = frozenset(X)
                if self.supporting_extensor(D, X):
                    tail = self.chain(D | X, rest - X)
                    if tail is not None:
                        self._chain[key] = (X,) + tail
                        return self._chain[key]
        return None

    def classify(self, E, foundational=True, supporting=True):
        rel = self.relaxed(frozenset(), E)
        G = rel.generated
        if not _consistent(G):
            return ExtensorClassification(False, False, False, False, NO, None, G)
        imperative = all((x not in E) == (complement(x) in G) for x in self.base)
        implicative = (E & self.base) <= G
        if supporting:
            supporting = self.supporting_extensor(frozenset(), E)
        status, chain = UNKNOWN, None
        if foundational:
            stages = self.chain(frozenset(), E)
            if stages is None:
                status = NO
            else:
                status, chain = YES, FoundationalChain(stages)
        return ExtensorClassification(True, imperative, implicative, supporting, status, chain, G)


def oracle_extensor_enum(P, marker, ctx, *, pool=None, foundational=True, supporting=True,
                         max_sets=1 << 12, budget=16):
    """Classify every subset of ``pool`` (default: the literal base) by the definitions.

    Relaxed programs are built syntactically and their generated literals
    computed by naive iteration.  Supporting is decided by trying every
    subset of the generated literals as a support; foundational by searching
    all chains of stages.  ``budget`` caps the size of the literal sets
    searched through.  With ``supporting`` (or ``foundational``) off those
    flags are left false (or unknown).
    """
    pool = sorted(ctx.literal_base if pool is None else pool, key=literal_sort_key)
    if 2 ** len(pool) > max_sets:
        raise BudgetExceeded(f"2^{len(pool)} hypothesis sets exceed {max_sets}")
    enum = _Enumerator(P, marker, ctx, budget)
    out = {}
    for r in range(len(pool) + 1):
        for E in itertools.combinations(pool, r):
            E = frozenset(E)
            out[E] = enum.classify(E, foundational, supporting)
    return out


# -- random programs ---------------------------------------------------------------------


def _atom_names(n):
    return [f"a{k}" for k in range(n)]


def _random_body(rng, names, depth, p_not, p_neg, p_const=0.1):
    if depth == 0 or rng.random() < 0.35:
        r = rng.random()
        if r < p_const:
            return TRUE if rng.random() < 0.5 else FALSE
        name = rng.choice(names)
        lit = NegAtom(name, ()) if rng.random() < p_neg else Atom(name, ())
        return Not(lit) if rng.random() < p_not else lit
    kind = Or if rng.random() < 0.5 else And
    kids = tuple(_random_body(rng, names, depth - 1, p_not, p_neg, p_const)
                 for _ in range(rng.randint(0, 3)))
    return kind(kids)


def random_vocabulary(n):
    return Vocabulary.of({}, {name: 0 for name in _atom_names(n)})


def random_general_program(rng, n, *, depth=3, p_not=0.3, p_neg_rule=0.4):
    """A ground general program over atoms a0..a(n-1), with classical and default negation."""
    names = _atom_names(n)
    rules = {}
    for name in names:
        pos = _random_body(rng, names, depth, p_not, 0.3)
        neg = _random_body(rng, names, depth, p_not, 0.3) if rng.random() < p_neg_rule else FALSE
        rules[name] = (pos, neg)
    return GeneralProgram(random_vocabulary(n), rules)


def random_formal_program(rng, n, *, depth=3, symmetric=False):
    """A ground formal program; with ``symmetric`` the negative bodies are duals."""
    names = _atom_names(n)
    rules = {}
    for name in names:
        pos = _random_body(rng, names, depth, 0.0, 0.4)
        neg = _random_body(rng, names, depth, 0.0, 0.4)
        rules[name] = (pos, neg)
    P = FormalLogicProgram(random_vocabulary(n), rules)
    return symmetric_completion(P) if symmetric else P


def random_marker(rng, P, p_mark=0.5):
    """Mark each literal occurrence independently with probability ``p_mark``."""
    marks = {}
    for pred, bodies in P.rules.items():
        marks[pred] = tuple(
            frozenset(path for path, x in occurrences(b)
                      if isinstance(x, (Atom, NegAtom)) and rng.random() < p_mark)
            for b in bodies)
    return LiteralMarker(marks)


def corpus(seed, sizes=range(3, 9), per_size=500):
    """Seeded stream of (size, Random) pairs, one generator per sample."""
    master = random.Random(seed)
    for n in sizes:
        for _ in range(per_size):
            yield n, random.Random(master.getrandbits(64))


__all__ = [
    "OracleReport", "compare", "corpus", "normal_reading", "oracle_alternating_wf",
    "oracle_extensor_enum", "oracle_fitting", "oracle_gl", "random_formal_program",
    "random_general_program", "random_marker", "random_vocabulary",
]

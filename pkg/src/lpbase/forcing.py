"""Forcing, standard structures and logical consequence over a bounded universe.

A ``GroundContext`` fixes a vocabulary and a depth bound.  Quantifiers range
over the closed terms of depth at most the bound.  Sets of literals are plain
Python sets (or frozensets) of closed ``Atom``/``NegAtom`` values.
"""

import itertools
from functools import cached_property

from .errors import BudgetExceeded, DepthBoundExceeded, ValidationError
from .syntax import (
    And, Atom, Distinction, Exists, Fn, Forall, Identity, NegAtom, Not, Or, Var,
    complement, dual, free_vars, instance_witness, negation_free, substitute,
)

MAX_UNIVERSE = 200_000


class GroundContext:
    """Vocabulary plus depth bound; induces the Herbrand universe and base."""

    def __init__(self, vocabulary, depth):
        if depth < 0:
            raise ValidationError("depth must be nonnegative")
        self.vocabulary = vocabulary
        self.depth = depth

    def __repr__(self):
        return f"GroundContext(depth={self.depth}, {self.vocabulary!r})"

    def __eq__(self, other):
        return (isinstance(other, GroundContext) and self.depth == other.depth
                and self.vocabulary == other.vocabulary)

    def __hash__(self):
        return hash((self.vocabulary, self.depth))

    @cached_property
    def universe(self):
        """Closed terms of depth <= bound, ordered by depth then rendering."""
        funcs = self.vocabulary.functions
        layers = [[Fn(c) for c, n in funcs if n == 0]]
        seen = set(layers[0])
        for _ in range(self.depth):
            known = [t for layer in layers for t in layer]
            new = []
            for name, n in funcs:
                if n == 0:
                    continue
                for args in itertools.product(known, repeat=n):
                    t = Fn(name, args)
                    if t not in seen:
                        seen.add(t)
                        new.append(t)
                    if len(seen) > MAX_UNIVERSE:
                        raise BudgetExceeded("Herbrand universe too large for this depth")
            if not new:
                break
            layers.append(sorted(new, key=str))
        return tuple(t for layer in layers for t in layer)

    @cached_property
    def universe_set(self):
        return frozenset(self.universe)

    @cached_property
    def atom_base(self):
        atoms = []
        for pred, n in self.vocabulary.predicates:
            for args in itertools.product(self.universe, repeat=n):
                atoms.append(Atom(pred, args))
        return tuple(atoms)

    @cached_property
    def literal_base(self):
        out = []
        for a in self.atom_base:
            out.append(a)
            out.append(NegAtom(a.pred, a.args))
        return tuple(out)

    def in_bound(self, lit):
        return all(t.depth <= self.depth for t in lit.args)

    def closed_instances(self, e):
        """All closed instances of ``e`` obtained by binding its free variables in U."""
        vs = sorted(free_vars(e))
        if not vs:
            yield e
            return
        for values in itertools.product(self.universe, repeat=len(vs)):
            yield substitute(e, dict(zip(vs, values)))


def is_consistent(literals):
    return not any(isinstance(x, Atom) and NegAtom(x.pred, x.args) in literals for x in literals)


def _term_value(t, env):
    if isinstance(t, Var):
        try:
            return env[t.index]
        except KeyError:
            raise ValidationError(f"V{t.index} is free") from None
    if not t.vars:
        return t
    return Fn(t.name, tuple(_term_value(a, env) for a in t.args))


def evaluate(phi, holds, ctx, env=None):
    """Evaluate an NNF statement, deciding literal leaves with ``holds(literal)``.

    Identities are syntactic; quantifiers range over ``ctx.universe``.
    """
    return _eval(phi, holds, ctx, env or {})


def _eval(phi, holds, ctx, env):
    if isinstance(phi, (Atom, NegAtom)):
        lit = type(phi)(phi.pred, tuple(_term_value(a, env) for a in phi.args)) if phi.fv else phi
        return holds(lit)
    if isinstance(phi, Identity):
        return _term_value(phi.left, env) == _term_value(phi.right, env)
    if isinstance(phi, Distinction):
        return _term_value(phi.left, env) != _term_value(phi.right, env)
    if isinstance(phi, Or):
        return any(_eval(c, holds, ctx, env) for c in phi.children)
    if isinstance(phi, And):
        return all(_eval(c, holds, ctx, env) for c in phi.children)
    if isinstance(phi, (Exists, Forall)):
        test = any if isinstance(phi, Exists) else all
        return test(_eval(phi.body, holds, ctx, {**env, phi.var: u}) for u in ctx.universe)
    if isinstance(phi, Not):
        raise ValidationError("'not' has no forcing clause; translate the program first")
    raise ValidationError(f"not a statement: {phi!r}")


def _membership(S, ctx, truncate):
    def holds(lit):
        if lit in S:
            return True
        if not truncate and not ctx.in_bound(lit):
            raise DepthBoundExceeded(f"{lit} lies beyond depth {ctx.depth}")
        return False
    return holds


def forces(S, phi, ctx, *, truncate=False):
    """S forces the closed statement ``phi``.

    An inconsistent S forces everything.  Looking up a literal deeper than the
    bound raises ``DepthBoundExceeded`` unless ``truncate`` is set, in which
    case such literals are simply absent.
    """
    if free_vars(phi):
        raise ValidationError("forces expects a closed statement")
    if not is_consistent(S):
        return True
    return _eval(phi, _membership(S, ctx, truncate), ctx, {})


def instance_closure(S, ctx):
    """Closed instances, within the universe, of the members of S."""
    out = set()
    for lit in S:
        out.update(ctx.closed_instances(lit))
    return out


def forces_open(S, T, ctx, *, truncate=True):
    """S forces every closed instance of every member of T."""
    closed = instance_closure(S, ctx)
    if not is_consistent(closed):
        return True
    holds = _membership(closed, ctx, truncate)
    return all(_eval(inst, holds, ctx, {}) for phi in T for inst in ctx.closed_instances(phi))


def completion(M, ctx):
    """The complete literal set determined by the standard structure M."""
    return set(M) | {NegAtom(a.pred, a.args) for a in ctx.atom_base if a not in M}


def is_model(M, phi, ctx):
    """``phi`` is true in the standard structure M (every closed instance)."""
    def holds(lit):
        if isinstance(lit, Atom):
            return lit in M
        return Atom(lit.pred, lit.args) not in M
    return all(_eval(inst, holds, ctx, {}) for inst in ctx.closed_instances(phi))


def atoms_in(phi, ctx):
    """Closed atoms that some closed instance of ``phi`` mentions."""
    found = set()

    def holds(lit):
        found.add(lit if isinstance(lit, Atom) else complement(lit))
        return False

    def walk(s, env):
        if isinstance(s, (Atom, NegAtom)):
            holds(type(s)(s.pred, tuple(_term_value(a, env) for a in s.args)))
        elif isinstance(s, (Or, And)):
            for c in s.children:
                walk(c, env)
        elif isinstance(s, (Exists, Forall)):
            for u in ctx.universe:
                walk(s.body, {**env, s.var: u})

    vs = sorted(free_vars(phi))
    for values in itertools.product(ctx.universe, repeat=len(vs)):
        walk(phi, dict(zip(vs, values)))
    return found


def as_definite(stmt):
    """Split a definite implication ``body -> head`` into (body, head), else None.

    Implications are written ``Or([dual(body), head])``; a bare atom is a fact.
    """
    if isinstance(stmt, Atom):
        return And(()), stmt
    if isinstance(stmt, Or) and len(stmt.children) == 2 and isinstance(stmt.children[1], Atom):
        body = dual(stmt.children[0])
        if negation_free(body):
            return body, stmt.children[1]
    return None


def least_model(implications, ctx):
    """Least standard structure satisfying a set of definite implications."""
    rules = []
    for stmt in implications:
        body, head = as_definite(stmt)
        vs = sorted(free_vars(stmt))
        for values in itertools.product(ctx.universe, repeat=len(vs)):
            env = dict(zip(vs, values))
            rules.append((body, Atom(head.pred, tuple(_term_value(a, env) for a in head.args)), env))
    model = set()
    changed = True
    while changed:
        changed = False
        for body, head, env in rules:
            if head not in model and _eval(body, model.__contains__, ctx, env):
                model.add(head)
                changed = True
    return model


def entails_W(T, phi, ctx, *, max_atoms=16, strategy="auto"):
    """Every standard structure over ctx that models T also models ``phi``.

    Two routes: the least model, when T consists of definite implications and
    ``phi`` is negation free, or enumeration of all structures over the atoms
    that T and ``phi`` mention.
    """
    T = list(T)
    definite = all(as_definite(s) is not None for s in T) and negation_free(phi)
    if strategy == "least-model" or (strategy == "auto" and definite):
        if not definite:
            raise ValidationError("least-model route needs definite implications")
        return is_model(least_model(T, ctx), phi, ctx)
    atoms = set()
    for s in T + [phi]:
        atoms |= atoms_in(s, ctx)
    atoms = sorted(atoms, key=str)
    if len(atoms) > max_atoms:
        raise BudgetExceeded(f"{len(atoms)} atoms exceed the enumeration budget of {max_atoms}")
    for bits in itertools.product((False, True), repeat=len(atoms)):
        M = {a for a, b in zip(atoms, bits) if b}
        if all(is_model(M, s, ctx) for s in T) and not is_model(M, phi, ctx):
            return False
    return True


def saturation_and_completeness(S, ctx):
    """(saturated, consistent, complete) for a possibly open literal set S."""
    def covered(lit):
        return any(type(m) is type(lit) and instance_witness(lit, m) is not None for m in S)

    saturated = all(covered(a) or covered(NegAtom(a.pred, a.args)) for a in ctx.atom_base)
    closed = instance_closure(S, ctx)
    consistent = is_consistent(closed)
    return saturated, consistent, saturated and consistent

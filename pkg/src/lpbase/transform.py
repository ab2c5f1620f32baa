"""Contextual hypotheses as syntactic rewrites.

Given a set E of (possibly open) literals and a set O of literal occurrences
in a statement, ``restrict`` turns each marked literal into the disjunction
of the ways it can be unified with a member of E (false when there is none),
and ``relax`` keeps the literal as the first disjunct and adds the same
alternatives.  Applied bodywise under a marker, they give the restricted and
relaxed programs.  Nothing is simplified here; equivalences are checked
semantically by the tests.
"""

import itertools
from dataclasses import dataclass

from .errors import InvalidPath, ValidationError
from .forcing import instance_closure, is_consistent
from .program import FormalLogicProgram, LiteralMarker
from .syntax import (
    And, Atom, Distinction, Exists, Fn, Identity, NegAtom, Or, Var, is_literal, node_at,
    occurrences, render, rename, subterms, var_order,
)


@dataclass(frozen=True)
class HypothesisSet:
    """A finite set of literals, possibly open and possibly inconsistent."""

    literals: frozenset = frozenset()

    def __post_init__(self):
        lits = frozenset(self.literals)
        for x in lits:
            if not is_literal(x):
                raise ValidationError(f"not a literal: {x!r}")
        object.__setattr__(self, "literals", lits)

    def __iter__(self):
        return iter(sorted(self.literals, key=render))

    def __len__(self):
        return len(self.literals)

    def __contains__(self, x):
        return x in self.literals

    def __or__(self, other):
        return HypothesisSet(self.literals | frozenset(other))

    def is_ground(self):
        return all(not x.fv for x in self.literals)

    def closed_instances(self, ctx):
        return frozenset(instance_closure(self.literals, ctx))

    def is_consistent(self, ctx=None):
        if ctx is None:
            return is_consistent(self.literals)
        return is_consistent(self.closed_instances(ctx))


def _literals(E):
    # sequences keep their order; sets are put in rendering order
    if isinstance(E, (list, tuple)):
        return E
    if isinstance(E, HypothesisSet):
        return list(E)
    return sorted(E, key=render)


# -- unification ---------------------------------------------------------------


def _walk(t, sigma):
    while isinstance(t, Var) and t.index in sigma:
        t = sigma[t.index]
    return t


def _occurs(v, t, sigma):
    t = _walk(t, sigma)
    if isinstance(t, Var):
        return t.index == v
    return any(_occurs(v, a, sigma) for a in t.args)


def mgu(pairs):
    """Most general unifier of a list of term pairs, as a triangular dict, or None."""
    sigma = {}
    stack = list(pairs)
    while stack:
        a, b = stack.pop()
        a, b = _walk(a, sigma), _walk(b, sigma)
        if a == b:
            continue
        if isinstance(a, Var):
            if _occurs(a.index, b, sigma):
                return None
            sigma[a.index] = b
        elif isinstance(b, Var):
            if _occurs(b.index, a, sigma):
                return None
            sigma[b.index] = a
        elif a.name != b.name or len(a.args) != len(b.args):
            return None
        else:
            stack.extend(zip(a.args, b.args))
    return sigma


def _resolve(t, sigma):
    t = _walk(t, sigma)
    if isinstance(t, Var) or not t.vars:
        return t
    return Fn(t.name, tuple(_resolve(a, sigma) for a in t.args))


def unif(phi, E):
    """Statements ``exists ys (x1 = t1, ..., xn = tn)`` under which ``phi`` is an instance of E.

    One statement per member of E that unifies with ``phi`` (duplicates
    removed), in the order of E.  The x's are the free variables of ``phi`` in
    index order; the y's are the variables left in the t's, renamed to the
    lowest indices not free in ``phi``.
    """
    if not is_literal(phi):
        raise ValidationError("unif expects a literal")
    xs = sorted(phi.fv)
    out = []
    seen = set()
    for e in _literals(E):
        if type(e) is not type(phi) or e.pred != phi.pred or len(e.args) != len(phi.args):
            continue
        # rename the member apart from phi
        top = max(phi.fv | e.fv, default=-1) + 1
        e = rename(e, {v: top + k for k, v in enumerate(sorted(e.fv))})
        sigma = mgu(list(zip(phi.args, e.args)))
        if sigma is None:
            continue
        ts = [_resolve(Var(x), sigma) for x in xs]
        ys = var_order(tuple(ts))
        pool = (i for i in itertools.count() if i not in phi.fv)
        mapping = {y: next(pool) for y in ys}
        ts = [rename(t, mapping) for t in ts]
        if not xs:
            stmt = And(())
        else:
            idents = [Identity(Var(x), t) for x, t in zip(xs, ts)]
            stmt = idents[0] if len(idents) == 1 else And(tuple(idents))
            for y in sorted(mapping.values(), reverse=True):
                stmt = Exists(y, stmt)
        if stmt not in seen:
            seen.add(stmt)
            out.append(stmt)
    return out


# -- the two rewrites ------------------------------------------------------------


def _check_paths(phi, paths):
    for p in paths:
        if not is_literal(node_at(phi, p)):
            raise InvalidPath(f"path {list(p)} does not address a literal occurrence")


def _rewrite(phi, paths, E, keep):
    if not paths:
        return phi
    if () in paths:
        alts = unif(phi, E)
        return Or(tuple([phi] + alts)) if keep else Or(tuple(alts))
    kids = subterms(phi)
    new = []
    for k, c in enumerate(kids):
        sub = frozenset(p[1:] for p in paths if p[0] == k)
        new.append(_rewrite(c, sub, E, keep))
    if isinstance(phi, (Or, And)):
        return type(phi)(tuple(new))
    body = new[0]
    if phi.var not in body.fv:
        # a restricted literal took the last use of the variable; a neutral
        # guard keeps the quantifier well formed without changing its meaning
        x = Var(phi.var)
        body = And((Identity(x, x), body)) if isinstance(phi, Exists) else Or((Distinction(x, x), body))
    return type(phi)(phi.var, body)


def restrict(phi, O, E):
    """Marked literals become false unless they unify with a member of E."""
    O = frozenset(tuple(p) for p in O)
    _check_paths(phi, O)
    return _rewrite(phi, O, E, keep=False)


def relax(phi, O, E):
    """Marked literals also hold where they unify with a member of E.

    The original literal stays at index 0 of its replacement disjunction.
    """
    O = frozenset(tuple(p) for p in O)
    _check_paths(phi, O)
    return _rewrite(phi, O, E, keep=True)


def _program_rewrite(P, marker, E, fn):
    marker.validate(P)
    E = list(_literals(E))
    rules = {}
    for pred, (pos, neg) in P.rules.items():
        rules[pred] = (fn(pos, marker.paths(pred, True), E), fn(neg, marker.paths(pred, False), E))
    return FormalLogicProgram(P.vocabulary, rules)


def program_restrict(P, marker, E):
    return _program_rewrite(P, marker, E, restrict)


def program_relax(P, marker, E):
    return _program_rewrite(P, marker, E, relax)


def standard_markers(P):
    """The markers selecting every negated atom, and every literal, in every body."""
    neg = {}
    every = {}
    for pred, (pos, nb) in P.rules.items():
        pairs_neg = []
        pairs_all = []
        for body in (pos, nb):
            occ = occurrences(body)
            pairs_neg.append(frozenset(p for p, x in occ if isinstance(x, NegAtom)))
            pairs_all.append(frozenset(p for p, x in occ if isinstance(x, (Atom, NegAtom))))
        neg[pred] = tuple(pairs_neg)
        every[pred] = tuple(pairs_all)
    return LiteralMarker(neg), LiteralMarker(every)


def negative_marker(P):
    return standard_markers(P)[0]


def total_marker(P):
    return standard_markers(P)[1]


def marker_advance(marker, E, P):
    """The marker of ``program_relax(P, marker, E)`` tracking the same literals.

    Each marked literal now sits at index 0 of the disjunction that replaced
    it, so its path gains a trailing 0.
    """
    marker.validate(P)
    marks = {}
    for pred, (pos, neg) in marker.marks:
        marks[pred] = (frozenset(p + (0,) for p in pos), frozenset(p + (0,) for p in neg))
    return LiteralMarker(marks)


__all__ = [
    "HypothesisSet", "marker_advance", "mgu", "negative_marker", "program_relax",
    "program_restrict", "relax", "restrict", "standard_markers", "total_marker", "unif",
]

"""Generated literals over a bounded Herbrand base.

Programs are grounded once into a ``GroundProgram``: every closed literal of
the base gets an integer id (atom k is ``2k``, its negation ``2k + 1``), and
every body instance becomes a small tree over those ids with identities
already decided.  Literals that bodies mention but that lie beyond the depth
bound ("frontier" literals) get ids after the base; they have no rules, so a
least fixpoint never produces them.

Marked occurrences (from a ``LiteralMarker``) are kept apart in the ground
tree.  Three evaluation modes give them their meaning:

    plain     marked literal read as an ordinary literal
    relax     ``l in S or l in H``    (hypothesis H makes it true)
    restrict  ``l in H``              (false unless hypothesized)

so ``closure("relax", H)`` computes the generated literals of the relaxed
program and ``closure("restrict", H)`` those of the restricted one, for a
ground hypothesis set H.
"""

import itertools
from dataclasses import dataclass
from functools import lru_cache

from .errors import BudgetExceeded, InconsistentProgram, PreconditionError, ValidationError
from .forcing import GroundContext, is_consistent
from .program import EMPTY_MARKER
from .syntax import (
    And, Atom, Distinction, Exists, Fn, Forall, Identity, NegAtom, Not, Or, Var,
    complement, free_vars, instance_witness, literal_sort_key,
)

TRUE_NODE = ("t",)
FALSE_NODE = ("f",)
MODES = ("plain", "relax", "restrict")


def comp(i):
    return i ^ 1


@dataclass(frozen=True)
class StageTrace:
    """Stages of a least fixpoint; each stage contains the previous one."""

    stages: tuple

    @property
    def final(self):
        return self.stages[-1] if self.stages else frozenset()

    def __len__(self):
        return len(self.stages)

    def to_json(self):
        return [sorted((str(x) for x in stage)) for stage in self.stages]


def _value(t, env):
    if isinstance(t, Var):
        return env[t.index]
    if not t.vars:
        return t
    return Fn(t.name, tuple(_value(a, env) for a in t.args))


class GroundProgram:
    """A program grounded over ``ctx``, with marked occurrences kept apart."""

    def __init__(self, program, ctx, marker=None):
        marker = marker or EMPTY_MARKER
        if isinstance(program, GroundProgram):
            raise ValidationError("already ground")
        if any(isinstance(x, Not) for pos, neg in program.rules.values() for x in _nodes(pos) + _nodes(neg)):
            raise ValidationError("translate 'not' before grounding")
        marker.validate(program)
        self.program = program
        self.ctx = ctx
        self.marker = marker
        self.literals = list(ctx.literal_base)
        self.n_base = len(self.literals)
        self.index = {lit: i for i, lit in enumerate(self.literals)}
        self.bodies = [None] * self.n_base
        self.has_marks = False
        for i in range(0, self.n_base, 2):
            atom = self.literals[i]
            env = {k + 1: t for k, t in enumerate(atom.args)}
            pos, neg = program.rules[atom.pred]
            self.bodies[i] = self._ground(pos, (), env, marker.paths(atom.pred, True))
            self.bodies[i + 1] = self._ground(neg, (), env, marker.paths(atom.pred, False))
        self.bodies += [None] * (len(self.literals) - self.n_base)
        self.n = len(self.literals)
        self.refs = [frozenset(_refs(b)) if b is not None else frozenset() for b in self.bodies]
        dependents = [[] for _ in range(self.n)]
        for i, r in enumerate(self.refs):
            for j in r:
                dependents[j].append(i)
        self.dependents = [tuple(d) for d in dependents]
        self._compiled = {}

    # -- construction ------------------------------------------------------

    def _lit_id(self, lit):
        i = self.index.get(lit)
        if i is None:
            atom = lit if isinstance(lit, Atom) else complement(lit)
            base = len(self.literals)
            self.literals += [atom, complement(atom)]
            self.index[atom] = base
            self.index[complement(atom)] = base + 1
            i = self.index[lit]
        return i

    def _ground(self, s, path, env, marks):
        if isinstance(s, (Atom, NegAtom)):
            lit = type(s)(s.pred, tuple(_value(a, env) for a in s.args)) if s.fv else s
            i = self._lit_id(lit)
            if path in marks:
                self.has_marks = True
                return ("h", i)
            return ("l", i)
        if isinstance(s, Identity):
            return TRUE_NODE if _value(s.left, env) == _value(s.right, env) else FALSE_NODE
        if isinstance(s, Distinction):
            return FALSE_NODE if _value(s.left, env) == _value(s.right, env) else TRUE_NODE
        if isinstance(s, (Or, And)):
            kids = [self._ground(c, path + (k,), env, marks) for k, c in enumerate(s.children)]
            return _junction("or" if isinstance(s, Or) else "and", kids)
        if isinstance(s, (Exists, Forall)):
            kids = [self._ground(s.body, path + (0,), {**env, s.var: u}, marks)
                    for u in self.ctx.universe]
            return _junction("or" if isinstance(s, Exists) else "and", kids)
        raise ValidationError(f"cannot ground {s!r}")

    # -- ids and literals --------------------------------------------------

    @property
    def base_ids(self):
        return range(self.n_base)

    @property
    def frontier_ids(self):
        return range(self.n_base, self.n)

    def is_frontier(self, i):
        return i >= self.n_base

    def lit(self, i):
        return self.literals[i]

    def to_literals(self, ids):
        return frozenset(self.literals[i] for i in ids)

    def to_ids(self, literals, *, strict=False):
        """Ids of the closed instances (within base and frontier) of ``literals``."""
        out = set()
        for lit in literals:
            if not free_vars(lit):
                i = self.index.get(lit)
                if i is None:
                    if strict:
                        raise ValidationError(f"{lit} is neither in the base nor on its frontier")
                    continue
                out.add(i)
                continue
            for j, cand in enumerate(self.literals):
                if type(cand) is type(lit) and cand.pred == lit.pred and instance_witness(cand, lit) is not None:
                    out.add(j)
        return frozenset(out)

    def atom_ids(self, ids=None):
        ids = range(self.n_base) if ids is None else ids
        return frozenset(i for i in ids if not i & 1)

    @staticmethod
    def consistent(ids):
        return not any((i ^ 1) in ids for i in ids if not i & 1)

    # -- evaluation --------------------------------------------------------

    def body_fn(self, mode):
        """List of callables ``f(S, H) -> bool``, one per literal id (None for frontier)."""
        if mode not in MODES:
            raise ValidationError(f"unknown mode {mode!r}")
        fns = self._compiled.get(mode)
        if fns is None:
            fns = self._compile(mode)
            self._compiled[mode] = fns
        return fns

    def _compile(self, mode):
        exprs = [_expr(b, mode) if b is not None else None for b in self.bodies]
        try:
            src = "[" + ",".join("None" if e is None else f"lambda S,H:{e}" for e in exprs) + "]"
            return eval(compile(src, "<ground>", "eval"), {})
        except (RecursionError, SyntaxError, MemoryError):
            return [None if b is None else _interpreter(b, mode) for b in self.bodies]

    def holds(self, i, S, H=frozenset(), mode="plain"):
        """``S`` forces the body of literal ``i`` (an inconsistent S forces all)."""
        if not self.consistent(S):
            return True
        f = self.body_fn(mode)[i]
        return bool(f and f(S, H))

    def closure(self, mode="plain", H=frozenset(), *, targets=None, trace=False, seed=frozenset()):
        """Least fixpoint: stage k+1 adds every target whose body stage k forces.

        ``targets`` restricts which ids may be produced (default: the base).
        ``seed`` is taken as already generated.  Returns a frozenset of ids,
        or ``(ids, stages)`` when ``trace`` is set.
        """
        fns = self.body_fn(mode)
        if targets is None:
            allowed = None
            todo = range(self.n_base)
        else:
            allowed = targets if isinstance(targets, (set, frozenset)) else frozenset(targets)
            todo = sorted(allowed)
        S = set(seed)
        stages = [frozenset(S)] if trace else None
        pending = [i for i in todo if i not in S]
        inconsistent = not self.consistent(S)
        while True:
            if inconsistent:
                new = [i for i in todo if i not in S]
            else:
                new = [i for i in pending if i not in S and fns[i] is not None and fns[i](S, H)]
            if not new:
                break
            S.update(new)
            if trace:
                stages.append(frozenset(S))
            if inconsistent:
                break
            inconsistent = any((i ^ 1) in S for i in new)
            nxt = set()
            for j in new:
                for d in self.dependents[j]:
                    if d not in S and (allowed is None and d < self.n_base or allowed is not None and d in allowed):
                        nxt.add(d)
            pending = nxt
        result = frozenset(S)
        return (result, stages) if trace else result

    def support_core(self, allowed, mode="plain", H=frozenset()):
        """Greatest subset of ``allowed`` whose members' bodies it forces.

        Frontier ids in ``allowed`` have no body and are kept.
        """
        fns = self.body_fn(mode)
        S = set(allowed)
        while True:
            if not self.consistent(S):
                return frozenset(S)
            drop = [i for i in S if fns[i] is not None and not fns[i](S, H)]
            if not drop:
                return frozenset(S)
            S.difference_update(drop)

    def has_support(self, i, allowed, mode="plain", H=frozenset()):
        core = self.support_core(allowed, mode, H)
        return self.holds(i, core, H, mode)


def _nodes(s):
    out = [s]
    for c in getattr(s, "children", ()):
        out += _nodes(c)
    if isinstance(s, (Exists, Forall)):
        out += _nodes(s.body)
    return out


def _junction(kind, kids):
    absorbing, neutral = (TRUE_NODE, FALSE_NODE) if kind == "or" else (FALSE_NODE, TRUE_NODE)
    flat = []
    seen = set()
    for k in kids:
        if k == absorbing:
            return absorbing
        if k == neutral:
            continue
        if k[0] == kind:
            parts = k[1]
        else:
            parts = (k,)
        for p in parts:
            if p not in seen:
                seen.add(p)
                flat.append(p)
    if not flat:
        return neutral
    if len(flat) == 1:
        return flat[0]
    return (kind, tuple(flat))


def _refs(b):
    tag = b[0]
    if tag in ("l", "h"):
        yield b[1]
    elif tag in ("or", "and"):
        for k in b[1]:
            yield from _refs(k)


def _expr(b, mode):
    tag = b[0]
    if tag == "t":
        return "True"
    if tag == "f":
        return "False"
    if tag == "l":
        return f"({b[1]} in S)"
    if tag == "h":
        i = b[1]
        if mode == "plain":
            return f"({i} in S)"
        if mode == "relax":
            return f"({i} in S or {i} in H)"
        return f"({i} in H)"
    joiner = " or " if tag == "or" else " and "
    return "(" + joiner.join(_expr(k, mode) for k in b[1]) + ")"


def _interpreter(b, mode):
    def ev(node, S, H):
        tag = node[0]
        if tag == "t":
            return True
        if tag == "f":
            return False
        if tag == "l":
            return node[1] in S
        if tag == "h":
            i = node[1]
            if mode == "plain":
                return i in S
            if mode == "relax":
                return i in S or i in H
            return i in H
        if tag == "or":
            return any(ev(k, S, H) for k in node[1])
        return all(ev(k, S, H) for k in node[1])
    return lambda S, H: ev(b, S, H)


@lru_cache(maxsize=64)
def ground(program, ctx, marker=None):
    """Ground ``program`` over ``ctx`` keeping the occurrences of ``marker`` apart."""
    return GroundProgram(program, ctx, marker)


def _sorted(literals):
    return sorted(literals, key=literal_sort_key)


def stage_trace(program, ctx):
    gp = ground(program, ctx)
    _, stages = gp.closure("plain", trace=True)
    return StageTrace(tuple(gp.to_literals(s) for s in stages))


def generated_literals(program, ctx, *, with_trace=False):
    """The closed generated literals of ``program`` within the base of ``ctx``."""
    gp = ground(program, ctx)
    ids, stages = gp.closure("plain", trace=True)
    result = gp.to_literals(ids)
    if with_trace:
        return result, StageTrace(tuple(gp.to_literals(s) for s in stages))
    return result


def complete_predicates(literals, ctx):
    """(pred, positive) pairs all of whose ground instances are in ``literals``.

    These are the predicates for which the open literal ``p(V1..Vn)`` (or its
    negation) would be generated, as far as the bounded base can tell.
    """
    out = []
    for pred, n in ctx.vocabulary.predicates:
        for positive, cls in ((True, Atom), (False, NegAtom)):
            if all(cls(pred, args) in literals for args in itertools.product(ctx.universe, repeat=n)):
                out.append((pred, positive))
    return out


def is_consistent_program(program, ctx):
    return is_consistent(generated_literals(program, ctx))


def is_partial_model(M, program, ctx, *, truncate=True):
    """A literal is in M iff M forces its body (checked on every base literal)."""
    if not is_consistent(M):
        return False
    gp = ground(program, ctx)
    ids = gp.to_ids(M)
    for i in gp.base_ids:
        if (i in ids) != gp.holds(i, ids):
            return False
    return True


def kripke_kleene(program, ctx, *, verify=True):
    """The least partial model, which is the set of generated literals."""
    M = generated_literals(program, ctx)
    if not is_consistent(M):
        raise InconsistentProgram("the generated literals are inconsistent")
    if verify and not is_partial_model(M, program, ctx):
        raise InconsistentProgram("generated literals do not form a partial model")
    return M


def has_support(program, psi, allowed, ctx, *, marker=None, hypotheses=(), mode="plain"):
    """Some support set for ``psi`` lies inside ``allowed``.

    The support sets are read coinductively: take the greatest subset of
    ``allowed`` in which every member has its body forced by the subset, and
    ask whether that subset forces the body of ``psi``.
    """
    gp = ground(program, ctx, marker)
    i = gp.to_ids([psi], strict=True)
    (i,) = i
    if gp.is_frontier(i):
        raise PreconditionError(f"{psi} lies beyond the depth bound")
    return gp.has_support(i, gp.to_ids(allowed), mode, gp.to_ids(hypotheses))


def minimal_supports(program, psi, ctx, *, budget=100_000, marker=None, hypotheses=(), mode="plain"):
    """Inclusion-minimal consistent support sets for ``psi``.

    Enumerates subsets of the literals ``psi`` depends on, by increasing size.
    A set Y qualifies when Y forces the body of ``psi`` and of each of its own
    members.
    """
    gp = ground(program, ctx, marker)
    (i,) = gp.to_ids([psi], strict=True)
    H = gp.to_ids(hypotheses)
    fns = gp.body_fn(mode)
    relevant = set()
    todo = list(gp.refs[i])
    while todo:
        j = todo.pop()
        if j not in relevant:
            relevant.add(j)
            todo.extend(gp.refs[j])
    relevant = sorted(relevant)
    found = []
    checked = 0
    for size in range(len(relevant) + 1):
        for combo in itertools.combinations(relevant, size):
            checked += 1
            if checked > budget:
                raise BudgetExceeded(f"more than {budget} candidate support sets")
            Y = frozenset(combo)
            if any(f <= Y for f in found) or not gp.consistent(Y):
                continue
            if fns[i](Y, H) and all(fns[j] is None or fns[j](Y, H) for j in Y):
                found.append(Y)
    return [gp.to_literals(Y) for Y in found]


__all__ = [
    "GroundContext", "GroundProgram", "StageTrace", "comp", "complete_predicates",
    "generated_literals", "ground", "has_support", "is_consistent_program", "is_partial_model",
    "kripke_kleene", "minimal_supports", "stage_trace",
]

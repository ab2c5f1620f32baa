"""Formal logic programs, literal markers and general programs.

A formal logic program assigns every predicate ``p`` of arity n a pair of
statements ``(pos, neg)`` whose free variables are among V1..Vn.  The positive
body says when ``p(V1..Vn)`` is generated, the negative body when
``-p(V1..Vn)`` is.  A general program has the same shape but its bodies may
use ``not L``; it corresponds to a formal program plus a literal marker.
"""

import itertools
from collections import defaultdict
from dataclasses import dataclass

from .errors import BudgetExceeded, InvalidPath, ValidationError
from .forcing import _term_value
from .syntax import (
    FALSE, TRUE, And, Atom, Distinction, Exists, Fn, Forall, Identity, NegAtom, Not, Or,
    Var, complement, dual, is_literal, node_at, occurrences, rename,
    replace_at, var_order,
)


def head_atom(pred, arity):
    return Atom(pred, tuple(Var(i) for i in range(1, arity + 1)))


def _check_symbols(s, vocab, allow_not):
    funcs = vocab.function_arity
    preds = vocab.predicate_arity

    def term(t):
        if isinstance(t, Fn):
            if funcs.get(t.name) != len(t.args):
                raise ValidationError(f"unknown function symbol or arity: {t.name}/{len(t.args)}")
            for a in t.args:
                term(a)

    def walk(x):
        if isinstance(x, (Atom, NegAtom)):
            if preds.get(x.pred) != len(x.args):
                raise ValidationError(f"unknown predicate symbol or arity: {x.pred}/{len(x.args)}")
            for a in x.args:
                term(a)
        elif isinstance(x, (Identity, Distinction)):
            term(x.left)
            term(x.right)
        elif isinstance(x, (Or, And)):
            for c in x.children:
                walk(c)
        elif isinstance(x, (Exists, Forall)):
            walk(x.body)
        elif isinstance(x, Not):
            if not allow_not:
                raise ValidationError("'not' is not allowed in a formal logic program")
            walk(x.literal)

    walk(s)


class FormalLogicProgram:
    """Map from predicate symbols to (positive body, negative body)."""

    allows_not = False

    def __init__(self, vocabulary, rules=None):
        self.vocabulary = vocabulary
        rules = dict(rules or {})
        arity = vocabulary.predicate_arity
        for pred in rules:
            if pred not in arity:
                raise ValidationError(f"predicate {pred} is not in the vocabulary")
        table = {}
        for pred, n in vocabulary.predicates:
            pos, neg = rules.get(pred, (FALSE, FALSE))
            for body in (pos, neg):
                extra = body.fv - set(range(1, n + 1))
                if extra:
                    raise ValidationError(
                        f"body of {pred} has free variables outside V1..V{n}: {sorted(extra)}")
                _check_symbols(body, vocabulary, self.allows_not)
            table[pred] = (pos, neg)
        self.rules = table

    def body(self, pred, positive=True):
        return self.rules[pred][0 if positive else 1]

    def arity(self, pred):
        return self.vocabulary.predicate_arity[pred]

    @property
    def predicates(self):
        return list(self.rules)

    def replace(self, rules):
        return type(self)(self.vocabulary, {**self.rules, **rules})

    def __eq__(self, other):
        return (type(self) is type(other) and self.vocabulary == other.vocabulary
                and self.rules == other.rules)

    def __hash__(self):
        return hash((self.vocabulary, tuple(self.rules.items())))

    def __repr__(self):
        return f"{type(self).__name__}({len(self.rules)} predicates)"

    def render(self):
        lines = []
        for pred, (pos, neg) in self.rules.items():
            head = head_atom(pred, self.arity(pred))
            lines.append(f"{head} <- {pos}")
            lines.append(f"{complement(head)} <- {neg}")
        return "\n".join(lines)


class GeneralProgram(FormalLogicProgram):
    """A formal program whose bodies may contain ``not L``."""

    allows_not = True


@dataclass(frozen=True)
class Rule:
    """A surface rule ``head <- body`` with an arbitrary literal head."""

    head: Atom
    body: object = TRUE

    def __post_init__(self):
        if not is_literal(self.head):
            raise ValidationError("rule heads must be literals")


@dataclass(frozen=True)
class LiteralMarker:
    """Per predicate, the occurrence paths marked in the positive and negative body."""

    marks: tuple = ()

    def __post_init__(self):
        items = self.marks.items() if isinstance(self.marks, dict) else self.marks
        norm = []
        for pred, (pos, neg) in sorted(items):
            pos = frozenset(tuple(p) for p in pos)
            neg = frozenset(tuple(p) for p in neg)
            if pos or neg:
                norm.append((pred, (pos, neg)))
        object.__setattr__(self, "marks", tuple(norm))

    def paths(self, pred, positive=True):
        for p, pair in self.marks:
            if p == pred:
                return pair[0 if positive else 1]
        return frozenset()

    def as_dict(self):
        return dict(self.marks)

    def is_empty(self):
        return not self.marks

    def validate(self, program):
        for pred, (pos, neg) in self.marks:
            if pred not in program.rules:
                raise InvalidPath(f"marker names unknown predicate {pred}")
            for paths, body in ((pos, program.body(pred, True)), (neg, program.body(pred, False))):
                for path in paths:
                    if not is_literal(node_at(body, path)):
                        raise InvalidPath(f"path {list(path)} in {pred} is not a literal occurrence")
        return self

    def count(self):
        return sum(len(pos) + len(neg) for _, (pos, neg) in self.marks)


EMPTY_MARKER = LiteralMarker()


def _disjunction(bodies):
    if not bodies:
        return FALSE
    if len(bodies) == 1:
        return bodies[0]
    return Or(tuple(bodies))


def _normalize_rule(head, body):
    n = len(head.args)
    order = var_order((head.args, body))
    mapping = {}
    for i, t in enumerate(head.args, 1):
        if isinstance(t, Var) and t.index not in mapping:
            mapping[t.index] = i
    direct = {v: i for v, i in mapping.items()}
    fresh = (i for i in itertools.count() if not 1 <= i <= n)
    for v in order:
        if v not in mapping:
            mapping[v] = next(fresh)
    args = rename(head.args, mapping)
    body = rename(body, mapping)
    conj = []
    for i, (t, orig) in enumerate(zip(args, head.args), 1):
        if isinstance(orig, Var) and direct.get(orig.index) == i:
            continue
        conj.append(Identity(Var(i), t))
    if body != TRUE:
        conj.append(body)
    stmt = TRUE if not conj else conj[0] if len(conj) == 1 else And(tuple(conj))
    for v in sorted(stmt.fv - set(range(1, n + 1)), reverse=True):
        stmt = Exists(v, stmt)
    return stmt


def merge_rules(rules, vocabulary):
    """Merge surface rules into one positive and one negative body per predicate.

    Each rule ``p(t1..tn) <- B`` contributes the disjunct
    ``exists ys (V1 = t1, ..., Vn = tn, B)``.  Head arguments that are plain
    variables are bound directly to V1..Vn instead of through an identity.
    Returns a ``GeneralProgram`` when some body uses ``not``.
    """
    arity = vocabulary.predicate_arity
    pos = defaultdict(list)
    neg = defaultdict(list)
    general = False
    for rule in rules:
        head = rule.head
        if arity.get(head.pred) != len(head.args):
            raise ValidationError(f"head {head} does not match the arity of {head.pred}")
        stmt = _normalize_rule(head, rule.body)
        general = general or any(isinstance(x, Not) for _, x in occurrences(stmt))
        (pos if isinstance(head, Atom) else neg)[head.pred].append(stmt)
    table = {p: (_disjunction(pos[p]), _disjunction(neg[p])) for p, _ in vocabulary.predicates}
    cls = GeneralProgram if general else FormalLogicProgram
    return cls(vocabulary, table)


def symmetric_completion(program):
    """Replace every negative body by the dual of the positive one."""
    return FormalLogicProgram(
        program.vocabulary, {p: (pos, dual(pos)) for p, (pos, _) in program.rules.items()})


def is_symmetric(program):
    return all(neg == dual(pos) for pos, neg in program.rules.values())


def _kleene(s, assign, ctx, env, pending):
    """Strong Kleene value (1, 0, -1) of ``s`` under a partial assignment of atoms.

    Unassigned atoms met along the way are appended to ``pending``.
    """
    if isinstance(s, (Atom, NegAtom)):
        atom = Atom(s.pred, tuple(_term_value(a, env) for a in s.args))
        v = assign.get(atom)
        if v is None:
            pending.append(atom)
            return 0
        return 1 if v == isinstance(s, Atom) else -1
    if isinstance(s, Identity):
        return 1 if _term_value(s.left, env) == _term_value(s.right, env) else -1
    if isinstance(s, Distinction):
        return 1 if _term_value(s.left, env) != _term_value(s.right, env) else -1
    if isinstance(s, (Or, And)):
        kids = (_kleene(c, assign, ctx, env, pending) for c in s.children)
    else:
        kids = (_kleene(s.body, assign, ctx, {**env, s.var: u}, pending) for u in ctx.universe)
    best = -1 if isinstance(s, (Or, Exists)) else 1
    for v in kids:
        if isinstance(s, (Or, Exists)):
            if v == 1:
                return 1
            best = max(best, v)
        else:
            if v == -1:
                return -1
            best = min(best, v)
    return best


def _satisfiable(phi, ctx, env, budget):
    """Some assignment of atoms makes ``phi`` true; None when out of budget.

    Branches only on atoms that the three-valued evaluation actually reached.
    """
    assign = {}
    nodes = 0

    def search():
        nonlocal nodes
        nodes += 1
        if nodes > budget:
            raise BudgetExceeded("satisfiability search")
        pending = []
        v = _kleene(phi, assign, ctx, env, pending)
        if v != 0:
            return v == 1
        atom = pending[0]
        for value in (True, False):
            assign[atom] = value
            if search():
                return True
        del assign[atom]
        return False

    try:
        return search()
    except BudgetExceeded:
        return None


def is_locally_consistent(program, ctx, *, max_atoms=16):
    """No closed instance of ``pos /\\ neg`` has a model.

    Each instance is checked by branching on its atoms and pruning with
    three-valued evaluation.  Returns True or False, or None when some
    instance needs more than 2^max_atoms search nodes.
    """
    unknown = False
    for pred, (pos, neg) in program.rules.items():
        n = program.arity(pred)
        conj = And((pos, neg))
        for args in itertools.product(ctx.universe, repeat=n):
            env = dict(zip(range(1, n + 1), args))
            found = _satisfiable(conj, ctx, env, 1 << max_atoms)
            if found is None:
                unknown = True
            elif found:
                return False
    return None if unknown else True


def classical_logical_form(program):
    """The implications ``pos -> p(V1..Vn)`` and ``neg -> -p(V1..Vn)``."""
    out = []
    for pred, (pos, neg) in program.rules.items():
        head = head_atom(pred, program.arity(pred))
        out.append(Or((dual(pos), head)))
        out.append(Or((dual(neg), complement(head))))
    return tuple(out)


def from_general_program(general):
    """Translate ``not L`` into the marked literal ``~L``; returns (program, marker)."""
    rules = {}
    marks = {}
    for pred, bodies in general.rules.items():
        new = []
        paths = []
        for body in bodies:
            found = []
            for path, node in occurrences(body):
                if isinstance(node, Not):
                    body = replace_at(body, path, complement(node.literal))
                    found.append(path)
            new.append(body)
            paths.append(frozenset(found))
        rules[pred] = tuple(new)
        marks[pred] = tuple(paths)
    program = FormalLogicProgram(general.vocabulary, rules)
    return program, LiteralMarker(marks)


def to_general_program(program, marker):
    """Inverse of ``from_general_program``: marked ``L`` becomes ``not ~L``."""
    marker.validate(program)
    rules = {}
    for pred, (pos, neg) in program.rules.items():
        bodies = []
        for positive, body in ((True, pos), (False, neg)):
            for path in marker.paths(pred, positive):
                body = replace_at(body, path, Not(complement(node_at(body, path))))
            bodies.append(body)
        rules[pred] = tuple(bodies)
    return GeneralProgram(program.vocabulary, rules)


def positive_part(general):
    """The same program with every negative body replaced by false."""
    return type(general)(general.vocabulary, {p: (pos, FALSE) for p, (pos, _) in general.rules.items()})


def equality_axioms(vocabulary):
    """Disjuncts axiomatizing the binary predicate ``=`` over the vocabulary.

    Returns ``{pred: (positive disjuncts, negative disjuncts)}``: reflexivity,
    symmetry, transitivity and one congruence disjunct per function symbol for
    ``=``, a witness of distinctness for ``-=``, and one substitution disjunct
    per predicate and polarity.
    """
    preds = vocabulary.predicate_arity
    if preds.get("=") != 2:
        raise ValidationError("the vocabulary has no binary predicate '='")
    v = Var

    def eq(a, b):
        return Atom("=", (a, b))

    def neq(a, b):
        return NegAtom("=", (a, b))

    def close(body, variables):
        for i in sorted(variables, reverse=True):
            body = Exists(i, body)
        return body

    pos_eq = [
        Identity(v(1), v(2)),
        eq(v(2), v(1)),
        Exists(0, And((eq(v(1), v(0)), eq(v(0), v(2))))),
    ]
    for f, n in vocabulary.functions:
        left = [v(3 + i) for i in range(n)]
        right = [v(3 + n + i) for i in range(n)]
        parts = [eq(a, b) for a, b in zip(left, right)]
        parts += [Identity(v(1), Fn(f, tuple(left))), Identity(v(2), Fn(f, tuple(right)))]
        pos_eq.append(close(And(tuple(parts)), range(3, 3 + 2 * n)))
    neg_eq = [Exists(0, Or((And((eq(v(0), v(1)), neq(v(0), v(2)))),
                            And((neq(v(0), v(1)), eq(v(0), v(2)))))))]
    out = {"=": (pos_eq, neg_eq)}
    for pred, n in vocabulary.predicates:
        fresh = [v(n + 1 + i) for i in range(n)]
        links = [eq(v(i + 1), fresh[i]) for i in range(n)]
        disjuncts = []
        for lit in (Atom(pred, tuple(fresh)), NegAtom(pred, tuple(fresh))):
            disjuncts.append(close(And(tuple(links + [lit])), range(n + 1, 2 * n + 1)))
        extra_pos, extra_neg = out.get(pred, ([], []))
        out[pred] = (extra_pos + [disjuncts[0]], extra_neg + [disjuncts[1]])
    return out


def with_equality_axioms(program):
    """Add the equality disjuncts of ``equality_axioms`` to every body."""
    axioms = equality_axioms(program.vocabulary)
    rules = {}
    for pred, (pos, neg) in program.rules.items():
        extra_pos, extra_neg = axioms.get(pred, ([], []))
        rules[pred] = (Or((pos, *extra_pos)), Or((neg, *extra_neg)))
    return type(program)(program.vocabulary, rules)

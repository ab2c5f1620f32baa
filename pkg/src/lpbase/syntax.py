"""Terms and negation-normal-form statements.

Statements are immutable trees.  Disjunctions and conjunctions keep their
children as ordered tuples, so a literal occurrence can be addressed by the
path of child indices leading to it.  ``Or(())`` is false and ``And(())`` is
true.  Quantifiers have a single child, at index 0.

Variables are numbered: ``Var(i)`` is the i-th variable, rendered ``Vi``.
"""

from dataclasses import dataclass, field
from typing import Mapping, Union

from .errors import InvalidPath, ValidationError

IDENTITY_SYMBOL = "≐"


@dataclass(frozen=True)
class Vocabulary:
    """Function and predicate symbols with their arities.

    Constants are nullary function symbols, propositions nullary predicates.
    """

    functions: tuple = ()
    predicates: tuple = ()

    def __post_init__(self):
        for attr in ("functions", "predicates"):
            items = getattr(self, attr)
            if isinstance(items, Mapping):
                items = items.items()
            items = tuple(sorted((str(k), int(v)) for k, v in items))
            names = [k for k, _ in items]
            if len(set(names)) != len(names):
                raise ValidationError(f"duplicate symbol among {attr}")
            for name, arity in items:
                if arity < 0:
                    raise ValidationError(f"negative arity for {name}")
                if name == IDENTITY_SYMBOL:
                    raise ValidationError("the identity symbol is built in")
            object.__setattr__(self, attr, items)

    @classmethod
    def of(cls, functions=None, predicates=None):
        return cls(dict(functions or {}), dict(predicates or {}))

    @property
    def function_arity(self):
        return dict(self.functions)

    @property
    def predicate_arity(self):
        return dict(self.predicates)

    @property
    def constants(self):
        return [f for f, n in self.functions if n == 0]

    def merge(self, other):
        funcs = self.function_arity
        preds = self.predicate_arity
        for table, extra in ((funcs, other.functions), (preds, other.predicates)):
            for name, arity in extra:
                if table.setdefault(name, arity) != arity:
                    raise ValidationError(f"arity mismatch for {name}")
        return Vocabulary(funcs, preds)


# -- terms -----------------------------------------------------------------


@dataclass(frozen=True)
class Var:
    index: int

    def __post_init__(self):
        if not isinstance(self.index, int) or self.index < 0:
            raise ValidationError(f"bad variable index {self.index!r}")

    @property
    def vars(self):
        return frozenset((self.index,))

    @property
    def depth(self):
        return 0

    def __str__(self):
        return render(self)


@dataclass(frozen=True)
class Fn:
    name: str
    args: tuple = ()
    vars: frozenset = field(init=False, repr=False, compare=False)
    depth: int = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        args = tuple(self.args)
        for a in args:
            if not isinstance(a, (Var, Fn)):
                raise ValidationError(f"not a term: {a!r}")
        object.__setattr__(self, "args", args)
        object.__setattr__(self, "vars", frozenset().union(*(a.vars for a in args)))
        object.__setattr__(self, "depth", 1 + max(a.depth for a in args) if args else 0)

    def __str__(self):
        return render(self)


Term = Union[Var, Fn]


def const(name):
    return Fn(name)


def numeral(n, zero="0", succ="s"):
    """The closed term s(...s(0)...) with n applications of ``succ``."""
    t = Fn(zero)
    for _ in range(n):
        t = Fn(succ, (t,))
    return t


def is_closed(e):
    return not free_vars(e)


# -- statements ------------------------------------------------------------


class Statement:
    """Base class of statement nodes."""

    __slots__ = ()

    def __str__(self):
        return render(self)


def _term_tuple(args):
    args = tuple(args)
    for a in args:
        if not isinstance(a, (Var, Fn)):
            raise ValidationError(f"not a term: {a!r}")
    return args


@dataclass(frozen=True)
class Atom(Statement):
    pred: str
    args: tuple = ()
    fv: frozenset = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        args = _term_tuple(self.args)
        object.__setattr__(self, "args", args)
        object.__setattr__(self, "fv", frozenset().union(*(a.vars for a in args)))


@dataclass(frozen=True)
class NegAtom(Statement):
    pred: str
    args: tuple = ()
    fv: frozenset = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        args = _term_tuple(self.args)
        object.__setattr__(self, "args", args)
        object.__setattr__(self, "fv", frozenset().union(*(a.vars for a in args)))


@dataclass(frozen=True)
class Identity(Statement):
    left: Term
    right: Term
    fv: frozenset = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        _term_tuple((self.left, self.right))
        object.__setattr__(self, "fv", self.left.vars | self.right.vars)


@dataclass(frozen=True)
class Distinction(Statement):
    left: Term
    right: Term
    fv: frozenset = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        _term_tuple((self.left, self.right))
        object.__setattr__(self, "fv", self.left.vars | self.right.vars)


def _children(children):
    children = tuple(children)
    for c in children:
        if not isinstance(c, Statement):
            raise ValidationError(f"not a statement: {c!r}")
    return children


@dataclass(frozen=True)
class Or(Statement):
    children: tuple = ()
    fv: frozenset = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        children = _children(self.children)
        object.__setattr__(self, "children", children)
        object.__setattr__(self, "fv", frozenset().union(*(c.fv for c in children)))


@dataclass(frozen=True)
class And(Statement):
    children: tuple = ()
    fv: frozenset = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        children = _children(self.children)
        object.__setattr__(self, "children", children)
        object.__setattr__(self, "fv", frozenset().union(*(c.fv for c in children)))


def _quantifier_init(self):
    var = self.var.index if isinstance(self.var, Var) else self.var
    if not isinstance(var, int) or var < 0:
        raise ValidationError(f"bad quantified variable {self.var!r}")
    if not isinstance(self.body, Statement):
        raise ValidationError(f"not a statement: {self.body!r}")
    if var not in self.body.fv:
        raise ValidationError(f"V{var} does not occur free in the quantified statement")
    object.__setattr__(self, "var", var)
    object.__setattr__(self, "fv", self.body.fv - {var})


@dataclass(frozen=True)
class Exists(Statement):
    var: int
    body: Statement
    fv: frozenset = field(init=False, repr=False, compare=False)

    __post_init__ = _quantifier_init


@dataclass(frozen=True)
class Forall(Statement):
    var: int
    body: Statement
    fv: frozenset = field(init=False, repr=False, compare=False)

    __post_init__ = _quantifier_init


@dataclass(frozen=True)
class Not(Statement):
    """Negation as failure, ``not L``.  Only found in general program bodies."""

    literal: Statement
    fv: frozenset = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if not is_literal(self.literal):
            raise ValidationError("'not' applies to literals only")
        object.__setattr__(self, "fv", self.literal.fv)


TRUE = And(())
FALSE = Or(())

LITERAL_TYPES = (Atom, NegAtom)


def is_literal(s):
    return isinstance(s, LITERAL_TYPES)


def complement(lit):
    if isinstance(lit, Atom):
        return NegAtom(lit.pred, lit.args)
    if isinstance(lit, NegAtom):
        return Atom(lit.pred, lit.args)
    raise ValidationError(f"not a literal: {lit!r}")


def atom_of(lit):
    return lit if isinstance(lit, Atom) else complement(lit)


def free_vars(e):
    """Free variable indices of a term, statement or tuple of terms."""
    if isinstance(e, Statement):
        return e.fv
    if isinstance(e, (Var, Fn)):
        return e.vars
    return frozenset().union(*(free_vars(x) for x in e))


def all_vars(e):
    """Every variable index occurring in ``e``, free or bound."""
    if isinstance(e, (Var, Fn)):
        return e.vars
    if isinstance(e, (Atom, NegAtom)):
        return e.fv
    if isinstance(e, (Identity, Distinction)):
        return e.fv
    if isinstance(e, (Or, And)):
        return frozenset().union(*(all_vars(c) for c in e.children))
    if isinstance(e, (Exists, Forall)):
        return all_vars(e.body) | {e.var}
    if isinstance(e, Not):
        return e.fv
    return frozenset().union(*(all_vars(x) for x in e))


def dual(s):
    """The statement that semantically negates ``s``."""
    if isinstance(s, Atom):
        return NegAtom(s.pred, s.args)
    if isinstance(s, NegAtom):
        return Atom(s.pred, s.args)
    if isinstance(s, Identity):
        return Distinction(s.left, s.right)
    if isinstance(s, Distinction):
        return Identity(s.left, s.right)
    if isinstance(s, Or):
        return And(tuple(dual(c) for c in s.children))
    if isinstance(s, And):
        return Or(tuple(dual(c) for c in s.children))
    if isinstance(s, Exists):
        return Forall(s.var, dual(s.body))
    if isinstance(s, Forall):
        return Exists(s.var, dual(s.body))
    raise ValidationError(f"no dual for {type(s).__name__}")


def negation_free(s):
    """True if no negated atom (and no ``not``) occurs in ``s``."""
    if isinstance(s, (NegAtom, Not)):
        return False
    if isinstance(s, (Or, And)):
        return all(negation_free(c) for c in s.children)
    if isinstance(s, (Exists, Forall)):
        return negation_free(s.body)
    return True


# -- occurrences -----------------------------------------------------------


def subterms(s):
    """Immediate sub-statements of ``s`` in child-index order."""
    if isinstance(s, (Or, And)):
        return s.children
    if isinstance(s, (Exists, Forall)):
        return (s.body,)
    return ()


def occurrences(s, path=()):
    """Literal occurrences of ``s`` as ``(path, literal)`` pairs, left to right.

    Identities are not literals and have no occurrences.  A ``not L`` node is
    reported as a leaf, at its own path.
    """
    out = []
    _collect(s, tuple(path), out)
    return out


def _collect(s, path, out):
    if isinstance(s, (Atom, NegAtom, Not)):
        out.append((path, s))
    elif isinstance(s, (Or, And)):
        for i, c in enumerate(s.children):
            _collect(c, path + (i,), out)
    elif isinstance(s, (Exists, Forall)):
        _collect(s.body, path + (0,), out)


def node_at(s, path):
    for i in path:
        kids = subterms(s)
        if not 0 <= i < len(kids):
            raise InvalidPath(f"no child {i} in {render(s)}")
        s = kids[i]
    return s


def replace_at(s, path, new):
    """Copy of ``s`` with the node at ``path`` replaced by ``new``."""
    if not path:
        return new
    i, rest = path[0], path[1:]
    if isinstance(s, (Or, And)):
        if not 0 <= i < len(s.children):
            raise InvalidPath(f"no child {i} in {render(s)}")
        kids = list(s.children)
        kids[i] = replace_at(kids[i], rest, new)
        return type(s)(tuple(kids))
    if isinstance(s, (Exists, Forall)) and i == 0:
        return type(s)(s.var, replace_at(s.body, rest, new))
    raise InvalidPath(f"no child {i} in {render(s)}")


# -- substitution and instances --------------------------------------------


def substitute(e, sigma, *, allow_open=False):
    """Simultaneously replace free variables of ``e`` according to ``sigma``.

    Replacement terms must be closed unless ``allow_open`` is set; in that
    case the caller is responsible for avoiding variable capture.
    """
    sigma = {(k.index if isinstance(k, Var) else k): v for k, v in sigma.items()}
    if not allow_open:
        for k, t in sigma.items():
            if t.vars:
                raise ValidationError(f"substituting an open term for V{k}")
    if not sigma:
        return e
    return _subst(e, sigma)


def _subst_term(t, sigma):
    if isinstance(t, Var):
        return sigma.get(t.index, t)
    if not (t.vars & sigma.keys()):
        return t
    return Fn(t.name, tuple(_subst_term(a, sigma) for a in t.args))


def _subst(e, sigma):
    if isinstance(e, (Var, Fn)):
        return _subst_term(e, sigma)
    if isinstance(e, tuple):
        return tuple(_subst(x, sigma) for x in e)
    if not (e.fv & sigma.keys()):
        return e
    if isinstance(e, (Atom, NegAtom)):
        return type(e)(e.pred, tuple(_subst_term(a, sigma) for a in e.args))
    if isinstance(e, (Identity, Distinction)):
        return type(e)(_subst_term(e.left, sigma), _subst_term(e.right, sigma))
    if isinstance(e, (Or, And)):
        return type(e)(tuple(_subst(c, sigma) for c in e.children))
    if isinstance(e, (Exists, Forall)):
        inner = {k: v for k, v in sigma.items() if k != e.var}
        return type(e)(e.var, _subst(e.body, inner)) if inner else e
    if isinstance(e, Not):
        return Not(_subst(e.literal, sigma))
    raise ValidationError(f"cannot substitute into {e!r}")


def instance_witness(closed, pattern):
    """The substitution mapping ``pattern`` onto the closed ``closed``, or None."""
    sigma = {}
    if _match(pattern, closed, sigma, frozenset()):
        return sigma
    return None


def is_instance(closed, pattern):
    return instance_witness(closed, pattern) is not None


def _match(p, c, sigma, bound):
    if isinstance(p, Var):
        if p.index in bound:
            return c == p
        if p.index in sigma:
            return sigma[p.index] == c
        if not isinstance(c, Fn) or c.vars:
            return False
        sigma[p.index] = c
        return True
    if isinstance(p, Fn):
        if not isinstance(c, Fn) or c.name != p.name or len(c.args) != len(p.args):
            return False
        if not p.vars:
            return p == c
        return all(_match(a, b, sigma, bound) for a, b in zip(p.args, c.args))
    if isinstance(p, tuple):
        return (isinstance(c, tuple) and len(c) == len(p)
                and all(_match(a, b, sigma, bound) for a, b in zip(p, c)))
    if type(p) is not type(c):
        return False
    if isinstance(p, (Atom, NegAtom)):
        return (p.pred == c.pred and len(p.args) == len(c.args)
                and all(_match(a, b, sigma, bound) for a, b in zip(p.args, c.args)))
    if isinstance(p, (Identity, Distinction)):
        return _match(p.left, c.left, sigma, bound) and _match(p.right, c.right, sigma, bound)
    if isinstance(p, (Or, And)):
        return (len(p.children) == len(c.children)
                and all(_match(a, b, sigma, bound) for a, b in zip(p.children, c.children)))
    if isinstance(p, (Exists, Forall)):
        return p.var == c.var and _match(p.body, c.body, sigma, bound | {p.var})
    if isinstance(p, Not):
        return _match(p.literal, c.literal, sigma, bound)
    return False


def var_order(e):
    """Variable indices of ``e`` in order of first occurrence, binders included."""
    out = []

    def walk(x):
        if isinstance(x, Var):
            if x.index not in out:
                out.append(x.index)
        elif isinstance(x, Fn):
            for a in x.args:
                walk(a)
        elif isinstance(x, (Atom, NegAtom)):
            for a in x.args:
                walk(a)
        elif isinstance(x, (Identity, Distinction)):
            walk(x.left)
            walk(x.right)
        elif isinstance(x, (Or, And)):
            for c in x.children:
                walk(c)
        elif isinstance(x, (Exists, Forall)):
            walk(Var(x.var))
            walk(x.body)
        elif isinstance(x, Not):
            walk(x.literal)
        elif isinstance(x, tuple):
            for c in x:
                walk(c)

    walk(e)
    return out


def rename(e, mapping):
    """Rename every variable, bound or free, through the injective ``mapping``."""
    if isinstance(e, Var):
        return Var(mapping.get(e.index, e.index))
    if isinstance(e, Fn):
        return Fn(e.name, tuple(rename(a, mapping) for a in e.args)) if e.vars else e
    if isinstance(e, tuple):
        return tuple(rename(x, mapping) for x in e)
    if isinstance(e, (Atom, NegAtom)):
        return type(e)(e.pred, rename(e.args, mapping))
    if isinstance(e, (Identity, Distinction)):
        return type(e)(rename(e.left, mapping), rename(e.right, mapping))
    if isinstance(e, (Or, And)):
        return type(e)(tuple(rename(c, mapping) for c in e.children))
    if isinstance(e, (Exists, Forall)):
        return type(e)(mapping.get(e.var, e.var), rename(e.body, mapping))
    if isinstance(e, Not):
        return Not(rename(e.literal, mapping))
    raise ValidationError(f"cannot rename inside {e!r}")


# -- rendering -------------------------------------------------------------


def render(e):
    """Canonical text form, in the surface syntax of the rule language."""
    if isinstance(e, Var):
        return f"V{e.index}"
    if isinstance(e, Fn):
        if not e.args:
            return e.name
        return f"{e.name}({','.join(render(a) for a in e.args)})"
    if isinstance(e, Atom):
        return e.pred if not e.args else f"{e.pred}({','.join(render(a) for a in e.args)})"
    if isinstance(e, NegAtom):
        return "-" + render(Atom(e.pred, e.args))
    if isinstance(e, Not):
        return "not " + render(e.literal)
    if isinstance(e, Identity):
        return f"{render(e.left)} = {render(e.right)}"
    if isinstance(e, Distinction):
        return f"{render(e.left)} != {render(e.right)}"
    if isinstance(e, Or):
        if not e.children:
            return "false"
        if len(e.children) == 1:
            return f"({render(e.children[0])})"
        return " ; ".join(_wrap(c, (Or,)) for c in e.children)
    if isinstance(e, And):
        if not e.children:
            return "true"
        if len(e.children) == 1:
            return f"({render(e.children[0])})"
        return ", ".join(_wrap(c, (Or, And)) for c in e.children)
    if isinstance(e, Exists):
        return f"exists V{e.var} ({render(e.body)})"
    if isinstance(e, Forall):
        return f"forall V{e.var} ({render(e.body)})"
    raise ValidationError(f"cannot render {e!r}")


def _wrap(c, kinds):
    text = render(c)
    if isinstance(c, kinds) and len(c.children) > 1:
        return f"({text})"
    return text


def literal_sort_key(lit):
    """Order literals by predicate, then rendered arguments, atoms first."""
    return (lit.pred, ",".join(render(a) for a in lit.args), isinstance(lit, NegAtom))

"""Extensors and the semantics built from them.

Every function here works on a ``GroundProgram``; hypothesis sets are
turned into sets of literal ids, and ``P +_Omega E`` is evaluated as the
relaxed closure with H = E.  The syntactic route through
``transform.program_relax`` computes the same sets and is used by the tests
as a cross-check.
"""

import itertools
from dataclasses import dataclass, field

from .errors import BridgeViolation, BudgetExceeded, InconsistentProgram, PreconditionError
from .engine import ground
from .program import is_locally_consistent, is_symmetric
from .syntax import literal_sort_key
from .transform import HypothesisSet, negative_marker

YES, NO, UNKNOWN = "yes", "no", "unknown"


@dataclass(frozen=True)
class FoundationalChain:
    """Stages E_0, E_1, ...; each one supports itself on top of the earlier ones."""

    stages: tuple = ()

    def union(self):
        return frozenset().union(*self.stages)

    def __len__(self):
        return len(self.stages)

    def to_json(self):
        return [sorted(str(x) for x in s) for s in self.stages]


@dataclass(frozen=True)
class ExtensorClassification:
    is_extensor: bool
    is_imperative: bool
    is_implicative: bool
    is_supporting: bool
    foundational: str
    chain: FoundationalChain = None
    generated: frozenset = field(default=frozenset(), repr=False)

    @property
    def is_foundational(self):
        return self.foundational == YES

    def flags(self):
        return (self.is_extensor, self.is_imperative, self.is_implicative,
                self.is_supporting, self.foundational)


@dataclass(frozen=True)
class MaximalFoundational:
    """The maximal foundational extensor for the negative marker, with its chain.

    ``model`` is its restriction to the literal base.  Unpacks as
    ``(extensor, chain)``.
    """

    extensor: HypothesisSet
    chain: FoundationalChain
    model: frozenset

    def __iter__(self):
        return iter((self.extensor, self.chain))


def _gp(P, marker, ctx, gp):
    return gp if gp is not None else ground(P, ctx, marker)


def _base_part(gp, ids):
    return frozenset(i for i in ids if i < gp.n_base)


def classify(P, marker, E, ctx, *, stage_budget=8, gp=None):
    """Classify the hypothesis set E for (P, marker), each flag by its definition."""
    gp = _gp(P, marker, ctx, gp)
    H = gp.to_ids(E)
    G = gp.closure("relax", H)
    generated = gp.to_literals(G)
    if not gp.consistent(G):
        return ExtensorClassification(False, False, False, False, NO, None, generated)
    Hb = _base_part(gp, H)
    imperative = all((i not in H) == ((i ^ 1) in G) for i in gp.base_ids)
    implicative = Hb <= G
    core = gp.support_core(gp.closure("plain"), "relax", H)
    supporting = all(gp.holds(i, core, H, "relax") for i in Hb)
    status, chain = foundational_chain(gp, H, stage_budget=stage_budget)
    return ExtensorClassification(True, imperative, implicative, supporting, status, chain, generated)


def foundational_chain(gp, H, *, stage_budget=8):
    """Decide whether the hypothesis ids H form a foundational extensor.

    Stage k takes the greatest X among the remaining members such that the
    generated literals of the program relaxed by the earlier stages D force
    the body of every member of X relaxed by D and X.  Since that condition
    only gets weaker as D grows, taking the greatest X at every stage loses
    nothing, and the search fails exactly when some stage comes out empty.
    Frontier members have no rule and join the first stage.
    """
    G = gp.closure("relax", H)
    if not gp.consistent(G):
        return NO, None
    D = set(i for i in H if i >= gp.n_base)
    remaining = set(_base_part(gp, H))
    stages = []
    first = True
    while remaining or first:
        if len(stages) >= stage_budget:
            return UNKNOWN, FoundationalChain(tuple(gp.to_literals(s) for s in stages))
        G_D = gp.closure("relax", frozenset(D))
        X = set(remaining)
        while True:
            hyp = frozenset(D | X)
            drop = [i for i in X if not gp.holds(i, G_D, hyp, "relax")]
            if not drop:
                break
            X.difference_update(drop)
        stage = X | (D if first else set())
        first = False
        if not stage and remaining:
            return NO, FoundationalChain(tuple(gp.to_literals(s) for s in stages))
        if stage:
            stages.append(frozenset(stage))
        D |= X
        remaining -= X
    return YES, FoundationalChain(tuple(gp.to_literals(s) for s in stages))


# -- answer sets and stable models ---------------------------------------------


def _choice_key(gp, literals):
    key = []
    for i in range(0, gp.n_base, 2):
        a = gp.lit(i)
        if a in literals:
            key.append(0)
        elif gp.lit(i + 1) in literals:
            key.append(1)
        else:
            key.append(2)
    return tuple(key)


def _antitone_fixpoints(F, universe, budget, consistent):
    """All X within ``universe`` with F(X) == X, for an antitone F.

    Bounds L <= X <= U are tightened with L |= F(U) and U &= F(L) until
    stable, then the lowest undecided element is branched on.
    """
    found = []
    nodes = 0
    stack = [(frozenset(), frozenset(universe))]
    while stack:
        L, U = stack.pop()
        nodes += 1
        if nodes > budget:
            raise BudgetExceeded(f"search exceeded {budget} nodes")
        dead = False
        while True:
            if not L <= U or not consistent(L):
                dead = True
                break
            L2 = L | F(U)
            U2 = U & F(L)
            if L2 == L and U2 == U:
                break
            L, U = L2, U2
        if dead:
            continue
        if L == U:
            if F(L) == L:
                found.append(L)
            continue
        i = min(U - L)
        stack.append((L, U - {i}))
        stack.append((L | {i}, U))
    return found


def _subsets(items):
    items = sorted(items)
    for mask in range(1 << len(items)):
        yield frozenset(x for k, x in enumerate(items) if mask >> k & 1)


def answer_sets(P, marker, ctx, *, strategy="search", budget=1_000_000, gp=None):
    """Answer sets for (P, marker): the M with M = [P +_Omega E] where E = {l : ~l not in M}.

    Each result is checked to be induced by an imperative extensor and to
    coincide with the generated literals of the restricted program.  Results
    come in the order of the hypothesis sets they stem from: lexicographic
    over the atom base, with {a} before {-a} before {a, -a}.
    """
    gp = _gp(P, marker, ctx, gp)
    base = frozenset(gp.base_ids)

    def hyp(M):
        return frozenset(i for i in base if (i ^ 1) not in M)

    def F(M):
        return gp.closure("relax", hyp(M))

    if strategy == "search":
        found = _antitone_fixpoints(F, base, budget, gp.consistent)
    elif strategy == "exhaustive":
        found = []
        atoms = range(0, gp.n_base, 2)
        if 3 ** len(atoms) > budget:
            raise BudgetExceeded(f"3^{len(atoms)} candidate sets exceed the budget")
        for choice in _choices(atoms):
            if F(choice) == choice:
                found.append(choice)
    else:
        raise ValueError(f"unknown strategy {strategy!r}")
    out = []
    for M in found:
        if not gp.consistent(M):
            continue
        E = hyp(M)
        G = gp.closure("relax", E)
        if not all((i not in E) == ((i ^ 1) in G) for i in base):
            raise BridgeViolation("answer set candidate is not induced by an imperative extensor")
        if gp.closure("restrict", E) != M:
            raise BridgeViolation("relaxed and restricted programs disagree on an answer set")
        out.append(gp.to_literals(M))
    out.sort(key=lambda m: _choice_key(gp, m))
    return out


def _choices(atoms):
    atoms = list(atoms)
    for picks in itertools.product((0, 1, 2), repeat=len(atoms)):
        yield frozenset(a if c == 0 else a + 1 for a, c in zip(atoms, picks) if c != 2)


def stable_models(P, ctx, *, strategy="search", budget=1_000_000, cross_check=True, gp=None):
    """Complete sets E whose atoms are the least model of the restricted positive rules.

    The restriction replaces every negated atom occurrence in a positive body
    by "is in E".  For symmetric P each model is cross-checked to be an
    implicative extensor for the negative marker.
    """
    marker = negative_marker(P)
    gp = _gp(P, marker, ctx, gp)
    atoms = frozenset(range(0, gp.n_base, 2))

    def complete(A):
        return A | frozenset(i + 1 for i in atoms if i not in A)

    def T(A):
        return gp.closure("restrict", complete(A), targets=atoms)

    if strategy == "search":
        found = _antitone_fixpoints(T, atoms, budget, lambda _: True)
    elif strategy == "exhaustive":
        if 2 ** len(atoms) > budget:
            raise BudgetExceeded(f"2^{len(atoms)} candidate sets exceed the budget")
        found = [A for A in _subsets(atoms) if T(A) == A]
    else:
        raise ValueError(f"unknown strategy {strategy!r}")
    out = []
    symmetric = is_symmetric(P)
    frontier_negs = frozenset(i for i in gp.frontier_ids if i & 1)
    for A in found:
        E = complete(A)
        if cross_check and symmetric:
            # beyond the bound nothing is derivable, so every frontier atom is false
            G = gp.closure("relax", E | frontier_negs)
            if not (gp.consistent(G) and E <= G):
                raise BridgeViolation("stable model is not an implicative extensor")
        out.append(gp.to_literals(E))
    out.sort(key=lambda m: _choice_key(gp, m))
    return out


# -- well-founded model ----------------------------------------------------------


def _require_local_consistency(P, ctx):
    if not is_symmetric(P) and is_locally_consistent(P, ctx) is False:
        raise PreconditionError("the program is not locally consistent")


def well_founded(P, ctx, *, gp=None, check_precondition=True):
    """Alternate a least set of atoms and a greatest set of negated atoms.

    The atoms are the least model of the positive rules with negated atoms
    read as "already assumed".  The negated atoms are the greatest set X
    (minus atoms just derived) such that the atoms together with X force the
    negative body of every member of X.  Frontier negated atoms are always
    assumed.
    """
    if check_precondition:
        _require_local_consistency(P, ctx)
    gp = _gp(P, negative_marker(P), ctx, gp)
    atoms = frozenset(range(0, gp.n_base, 2))
    negs = frozenset(range(1, gp.n, 2))
    plain = gp.body_fn("plain")
    pos_acc, neg_acc = frozenset(), frozenset()
    while True:
        Epos = gp.closure("restrict", neg_acc, targets=atoms)
        X = set(i for i in negs if (i ^ 1) not in Epos)
        while True:
            S = Epos | X
            drop = [i for i in X if i < gp.n_base and not plain[i](S, frozenset())]
            if not drop:
                break
            X.difference_update(drop)
        new_pos, new_neg = pos_acc | Epos, neg_acc | X
        if new_pos == pos_acc and new_neg == neg_acc:
            break
        pos_acc, neg_acc = new_pos, new_neg
    model = _base_part(gp, pos_acc | neg_acc)
    if not gp.consistent(model):
        raise InconsistentProgram("the well-founded construction is inconsistent")
    return gp.to_literals(model)


def max_foundational_extensor(P, ctx, *, check=True, gp=None):
    """Build the maximal foundational extensor for the negative marker.

    Each stage is the greatest set of negated atoms supporting itself over
    the program relaxed by the earlier stages; the chain closes with the
    literals those hypotheses generate.  With ``check`` the result is
    compared with ``well_founded``.
    """
    _require_local_consistency(P, ctx)
    gp = _gp(P, negative_marker(P), ctx, gp)
    negs = frozenset(range(1, gp.n, 2))
    D = set()
    stages = []
    while True:
        G_D = gp.closure("relax", frozenset(D))
        X = set(i for i in negs - D if (i ^ 1) not in G_D)
        while True:
            hyp = frozenset(D | X)
            drop = [i for i in X if i < gp.n_base and not gp.holds(i, G_D, hyp, "relax")]
            if not drop:
                break
            X.difference_update(drop)
        if not X:
            break
        if not gp.consistent(gp.closure("relax", frozenset(D | X))):
            raise BridgeViolation("a maximal supporting stage is not an extensor")
        stages.append(frozenset(X))
        D |= X
    closure = gp.closure("relax", frozenset(D))
    if not gp.consistent(closure):
        raise InconsistentProgram("the maximal foundational extensor is inconsistent")
    closing = closure - D
    if closing:
        stages.append(closing)
    extensor = HypothesisSet(gp.to_literals(closure | D))
    model = gp.to_literals(_base_part(gp, closure))
    chain = FoundationalChain(tuple(gp.to_literals(s) for s in stages))
    if check:
        wf = well_founded(P, ctx, check_precondition=False)
        if wf != model:
            raise BridgeViolation("maximal foundational extensor and well-founded model differ")
    return MaximalFoundational(extensor, chain, model)


def sorted_literals(literals):
    return sorted(literals, key=literal_sort_key)


__all__ = [
    "ExtensorClassification", "FoundationalChain", "MaximalFoundational", "answer_sets",
    "classify", "foundational_chain", "max_foundational_extensor", "stable_models",
    "well_founded",
]

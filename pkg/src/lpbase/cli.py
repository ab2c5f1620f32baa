"""Command line front end: parse a rule file, ground it, run one semantics.

Source format::

    % comment
    #pred p/1          declare a predicate (needed when it heads no rule)
    #func s/1          declare a function symbol or constant (s/0)
    #ground 8          default grounding depth for this file
    #symmetric         negative rules are the duals of the positive ones
    #mark neg          mark every negated atom (or ``all``: every literal)
    rule p(0).
    rule p(s(s(X))) <- p(X).
    rule -q <- not p(0), exists Y (r(Y) ; Y = 0).
"""

import argparse
import json
import re
import sys
from dataclasses import dataclass, field

from .engine import generated_literals, ground, kripke_kleene, stage_trace
from .errors import (
    BudgetExceeded, DepthBoundExceeded, InconsistentProgram, ParseError,
    PreconditionError, ValidationError,
)
from .extensor import answer_sets, max_foundational_extensor, stable_models, well_founded
from .forcing import GroundContext
from .program import (
    GeneralProgram, Rule, from_general_program, is_symmetric, merge_rules, symmetric_completion,
    to_general_program,
)
from .reference import compare, normal_reading, oracle_alternating_wf, oracle_fitting, oracle_gl
from .syntax import (
    FALSE, TRUE, And, Atom, Distinction, Exists, Fn, Forall, Identity, NegAtom, Not, Or, Var,
    Vocabulary, literal_sort_key, render,
)
from .transform import negative_marker, program_relax, standard_markers

SCHEMA_VERSION = 1
DEFAULT_DEPTH = 6
SEMANTICS = ("base", "kk", "wf", "stable", "answer")

EXIT_OK, EXIT_PARSE, EXIT_BUDGET, EXIT_INCONSISTENT, EXIT_ORACLE = 0, 1, 2, 3, 4


@dataclass(frozen=True)
class SourceProgram:
    """What a rule file says, before any translation."""

    vocabulary: Vocabulary
    rules: tuple = ()
    symmetric: bool = False
    ground: int = None
    mark: str = None
    declared: tuple = field(default=(), compare=False)

    def program(self):
        """Merged program; a ``GeneralProgram`` if some body uses ``not``."""
        return merge_rules(self.rules, self.vocabulary)


# -- lexer ---------------------------------------------------------------------------

_TOKEN = re.compile(r"""
    (?P<ws>[ \t\r]+)
  | (?P<nl>\n)
  | (?P<comment>%[^\n]*)
  | (?P<arrow><-)
  | (?P<neq>!=)
  | (?P<directive>\#[a-z]+)
  | (?P<var>[A-Z_][A-Za-z0-9_]*)
  | (?P<name>[a-z0-9][A-Za-z0-9_]*)
  | (?P<punct>[().,;=/-])
""", re.VERBOSE)


@dataclass
class _Tok:
    kind: str
    text: str
    line: int
    col: int


def _lex(text):
    out = []
    pos, line, start = 0, 1, 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise ParseError(f"unexpected character {text[pos]!r}", line, pos - start + 1)
        kind = m.lastgroup
        if kind == "nl":
            out.append(_Tok("nl", "\n", line, pos - start + 1))
            line += 1
            start = m.end()
        elif kind not in ("ws", "comment"):
            tk = "punct" if kind in ("arrow", "neq", "punct") else kind
            out.append(_Tok(tk, m.group(), line, pos - start + 1))
        pos = m.end()
    out.append(_Tok("eof", "", line, pos - start + 1))
    return out


# -- parser ----------------------------------------------------------------------------

_KEYWORDS = {"rule", "not", "exists", "forall", "true", "false"}


class _Parser:
    def __init__(self, text):
        self.toks = _lex(text)
        self.i = 0
        self.functions = {}
        self.predicates = {}
        self.declared = []

    # token helpers
    def peek(self, skip_nl=True):
        j = self.i
        while skip_nl and self.toks[j].kind == "nl":
            j += 1
        return self.toks[j]

    def next(self, skip_nl=True):
        while skip_nl and self.toks[self.i].kind == "nl":
            self.i += 1
        tok = self.toks[self.i]
        self.i += 1
        return tok

    def error(self, msg, tok=None):
        tok = tok or self.peek()
        return ParseError(msg, tok.line, tok.col)

    def expect(self, text):
        tok = self.next()
        if tok.text != text:
            raise self.error(f"expected {text!r}, found {tok.text or 'end of input'!r}", tok)
        return tok

    def accept(self, text):
        if self.peek().text == text:
            return self.next()
        return None

    def note(self, table, name, arity, tok, kind):
        old = table.setdefault(name, arity)
        if old != arity:
            raise self.error(f"{kind} {name} used with arity {arity} and {old}", tok)

    # file level
    def parse(self):
        rules = []
        opts = {"symmetric": False, "ground": None, "mark": None}
        while True:
            tok = self.peek()
            if tok.kind == "eof":
                break
            if tok.kind == "directive":
                self.directive(opts)
            elif tok.text == "rule":
                rules.append(self.rule())
            else:
                raise self.error(f"expected 'rule' or a directive, found {tok.text!r}", tok)
        clash = set(self.functions) & set(self.predicates)
        if clash:
            raise ValidationError(f"symbols used both as function and predicate: {sorted(clash)}")
        vocab = Vocabulary(self.functions, self.predicates)
        return SourceProgram(vocab, tuple(rules), opts["symmetric"], opts["ground"], opts["mark"],
                             tuple(self.declared))

    def directive(self, opts):
        tok = self.next()
        name = tok.text[1:]
        if name == "symmetric":
            opts["symmetric"] = True
        elif name == "ground":
            n = self.next(skip_nl=False)
            if not n.text.isdigit():
                raise self.error("#ground expects a number", n)
            opts["ground"] = int(n.text)
        elif name == "mark":
            m = self.next(skip_nl=False)
            if m.text not in ("neg", "all"):
                raise self.error("#mark expects 'neg' or 'all'", m)
            opts["mark"] = m.text
        elif name in ("pred", "func"):
            sym = self.next(skip_nl=False)
            if sym.kind != "name":
                raise self.error(f"#{name} expects a symbol", sym)
            self.expect("/")
            n = self.next(skip_nl=False)
            if not n.text.isdigit():
                raise self.error(f"#{name} expects an arity", n)
            table = self.predicates if name == "pred" else self.functions
            self.note(table, sym.text, int(n.text), sym, "symbol")
            self.declared.append((name, sym.text, int(n.text)))
        else:
            raise self.error(f"unknown directive {tok.text}", tok)
        self.accept(".")
        end = self.peek(skip_nl=False)
        if end.kind not in ("nl", "eof"):
            raise self.error("directives take one line", end)

    def rule(self):
        self.expect("rule")
        self.scopes = [{}]
        self.counter = 0
        head = self.literal(allow_not=False)
        body = TRUE
        if self.accept("<-"):
            body = self.disjunction()
        self.expect(".")
        return Rule(head, body)

    def fresh(self):
        k = self.counter
        self.counter += 1
        return k

    def variable(self, name):
        for scope in reversed(self.scopes):
            if name in scope:
                return Var(scope[name])
        k = self.fresh()
        self.scopes[0][name] = k
        return Var(k)

    # bodies
    def disjunction(self):
        kids = [self.conjunction()]
        while self.accept(";"):
            kids.append(self.conjunction())
        return kids[0] if len(kids) == 1 else Or(tuple(kids))

    def conjunction(self):
        kids = [self.element()]
        while self.accept(","):
            kids.append(self.element())
        return kids[0] if len(kids) == 1 else And(tuple(kids))

    def element(self):
        tok = self.peek()
        if tok.text == "(":
            self.next()
            inner = self.disjunction()
            self.expect(")")
            return inner
        if tok.text == "true":
            self.next()
            return TRUE
        if tok.text == "false":
            self.next()
            return FALSE
        if tok.text == "not":
            self.next()
            nxt = self.peek()
            if nxt.text in ("(", "not", "exists", "forall", "true", "false") or nxt.kind == "var":
                raise self.error("'not' applies to literals only", nxt)
            return Not(self.literal(allow_not=False))
        if tok.text in ("exists", "forall"):
            self.next()
            v = self.next()
            if v.kind != "var":
                raise self.error(f"{tok.text} expects a variable", v)
            k = self.fresh()
            self.scopes.append({v.text: k})
            self.expect("(")
            inner = self.disjunction()
            self.expect(")")
            self.scopes.pop()
            if k not in inner.fv:
                raise self.error(f"{v.text} does not occur free under {tok.text}", v)
            return (Exists if tok.text == "exists" else Forall)(k, inner)
        if tok.text == "-":
            return self.literal(allow_not=False)
        if tok.kind == "var":
            left = self.term()
            return self.comparison(left)
        if tok.kind == "name":
            # an atom, or a term on the left of = / !=
            save = self.i
            name = self.next().text
            args = self.args()
            if self.peek().text in ("=", "!="):
                self.i = save
                return self.comparison(self.term())
            self.note(self.predicates, name, len(args), tok, "predicate")
            return Atom(name, args)
        raise self.error(f"unexpected {tok.text or 'end of input'!r} in a rule body", tok)

    def comparison(self, left):
        op = self.next()
        if op.text not in ("=", "!="):
            raise self.error("expected '=' or '!=' after a term", op)
        right = self.term()
        return Identity(left, right) if op.text == "=" else Distinction(left, right)

    def literal(self, allow_not):
        neg = bool(self.accept("-"))
        tok = self.next()
        if tok.kind != "name" or tok.text in _KEYWORDS:
            raise self.error(f"expected a predicate symbol, found {tok.text or 'end of input'!r}", tok)
        args = self.args()
        self.note(self.predicates, tok.text, len(args), tok, "predicate")
        return (NegAtom if neg else Atom)(tok.text, args)

    def args(self):
        if not self.accept("("):
            return ()
        out = [self.term()]
        while self.accept(","):
            out.append(self.term())
        self.expect(")")
        return tuple(out)

    def term(self):
        tok = self.next()
        if tok.kind == "var":
            return self.variable(tok.text)
        if tok.kind != "name" or tok.text in _KEYWORDS:
            raise self.error(f"expected a term, found {tok.text or 'end of input'!r}", tok)
        args = self.args()
        self.note(self.functions, tok.text, len(args), tok, "function")
        return Fn(tok.text, args)


def parse(text):
    """Parse rule-file text into a ``SourceProgram``."""
    return _Parser(text).parse()


def render_source(sp):
    """Text that parses back to ``sp``."""
    lines = []
    for kind, name, n in sp.declared:
        lines.append(f"#{kind} {name}/{n}")
    if sp.ground is not None:
        lines.append(f"#ground {sp.ground}")
    if sp.symmetric:
        lines.append("#symmetric")
    if sp.mark:
        lines.append(f"#mark {sp.mark}")
    for r in sp.rules:
        head = render(r.head)
        if r.body == TRUE:
            lines.append(f"rule {head}.")
        else:
            lines.append(f"rule {head} <- {render(r.body)}.")
    return "\n".join(lines) + "\n"


# -- pipeline ------------------------------------------------------------------------------


def _sorted_lits(lits):
    return [render(x) for x in sorted(lits, key=literal_sort_key)]


def _models_json(models):
    return sorted(_sorted_lits(m) for m in models)


def _prepare(sp):
    """(formal program, marker or None) from a parsed source."""
    prog = sp.program()
    marker = None
    if isinstance(prog, GeneralProgram):
        prog, marker = from_general_program(prog)
    if sp.symmetric:
        prog = symmetric_completion(prog)
        if marker is not None:
            marker = type(marker)({p: (pos, frozenset()) for p, (pos, _) in marker.marks})
    if sp.mark:
        neg, every = standard_markers(prog)
        marker = neg if sp.mark == "neg" else every
    return prog, marker


def run(text, semantics="base", *, depth=None, fmt="text", show_transform=False,
        show_stages=False, check_oracle=False, seed=None):
    """Run the pipeline on source text; returns (exit status, output text)."""
    try:
        sp = parse(text)
        prog, marker = _prepare(sp)
        d = depth if depth is not None else sp.ground if sp.ground is not None else DEFAULT_DEPTH
        ctx = GroundContext(prog.vocabulary, d)
        result = _dispatch(prog, marker, ctx, semantics, show_transform, show_stages, check_oracle)
    except (ParseError, ValidationError) as e:
        return EXIT_PARSE, f"error: {e}\n"
    except (BudgetExceeded, DepthBoundExceeded) as e:
        return EXIT_BUDGET, f"error: {e}\n"
    except (InconsistentProgram, PreconditionError) as e:
        return EXIT_INCONSISTENT, f"error: {e}\n"
    result = {"schema_version": SCHEMA_VERSION, "semantics": semantics, "ground_depth": d, **result}
    if seed is not None:
        result["seed"] = seed
    status = EXIT_OK
    if check_oracle and result["oracle_agreement"] is False:
        status = EXIT_ORACLE
    if fmt == "json":
        return status, json.dumps(result, indent=2, sort_keys=True) + "\n"
    return status, _as_text(result)


def _dispatch(prog, marker, ctx, semantics, show_transform, show_stages, check_oracle):
    out = {}
    reports = []
    hyps = []
    if semantics == "base":
        if show_stages:
            out["stages"] = [_sorted_lits(s) for s in stage_trace(prog, ctx).stages]
        models = [generated_literals(prog, ctx)]
        if check_oracle:
            reports.append(compare("base", models, [oracle_fitting(prog, ctx)]))
    elif semantics == "kk":
        if show_stages:
            out["stages"] = [_sorted_lits(s) for s in stage_trace(prog, ctx).stages]
        models = [kripke_kleene(prog, ctx)]
        if check_oracle:
            reports.append(compare("kk", models, [oracle_fitting(prog, ctx)]))
    elif semantics == "wf":
        models = [well_founded(prog, ctx)]
        mfe = max_foundational_extensor(prog, ctx)
        out["extensor"] = _sorted_lits(mfe.extensor.literals)
        hyps = [mfe.extensor.literals]
        marker = negative_marker(prog)
        if show_stages:
            out["stages"] = mfe.chain.to_json()
        if check_oracle and is_symmetric(prog):
            # the alternating fixpoint only knows the normal reading
            reports.append(compare("wf", models, [oracle_alternating_wf(prog, ctx)]))
    elif semantics == "stable":
        models = stable_models(prog, ctx)
        hyps = models
        marker = negative_marker(prog)
        if check_oracle:
            atoms = [frozenset(x for x in m if isinstance(x, Atom)) for m in models]
            reports.append(compare("stable", atoms, oracle_gl(normal_reading(prog), ctx)))
    elif semantics == "answer":
        if marker is None or marker.is_empty():
            raise ValidationError("answer sets need 'not' in some body or a #mark directive")
        models = answer_sets(prog, marker, ctx)
        gp = ground(prog, ctx, marker)
        hyps = [frozenset(gp.lit(i) for i in gp.base_ids if gp.lit(i ^ 1) not in m) for m in models]
        if check_oracle:
            reports.append(compare("answer", models, oracle_gl(to_general_program(prog, marker), ctx)))
    else:
        raise ValidationError(f"unknown semantics {semantics!r}")
    out["models"] = _models_json(models)
    if show_transform:
        if hyps and marker is not None:
            E = sorted(hyps[0], key=literal_sort_key)
            out["transform"] = program_relax(prog, marker, E).render().splitlines()
        else:
            out["transform"] = prog.render().splitlines()
    if check_oracle:
        out["oracle_agreement"] = all(r.agreement for r in reports) if reports else None
        out["oracle_reports"] = [json.loads(r.to_json()) for r in reports]
    return out


def _as_text(result):
    lines = [f"% semantics {result['semantics']} at depth {result['ground_depth']}"]
    models = result["models"]
    if not models:
        lines.append("no models")
    for k, m in enumerate(models, 1):
        prefix = f"model {k}: " if len(models) > 1 else ""
        lines.append(prefix + "{" + ", ".join(m) + "}")
    if "extensor" in result:
        lines.append("extensor: {" + ", ".join(result["extensor"]) + "}")
    for k, s in enumerate(result.get("stages", [])):
        lines.append(f"stage {k}: {{" + ", ".join(s) + "}")
    for r in result.get("transform", []):
        lines.append("  " + r)
    if "oracle_agreement" in result:
        verdict = {True: "agree", False: "DIVERGE", None: "no oracle for this input"}
        lines.append("oracle: " + verdict[result["oracle_agreement"]])
        for r in result["oracle_reports"]:
            if not r["agreement"]:
                lines.append("  " + json.dumps(r["witnesses"]))
    return "\n".join(lines) + "\n"


def build_parser():
    ap = argparse.ArgumentParser(prog="lpbase", description="Ground a rule file and compute a semantics.")
    ap.add_argument("file", help="rule file, or - for standard input")
    ap.add_argument("--semantics", choices=SEMANTICS, default="base")
    ap.add_argument("--ground-depth", type=int, default=None, metavar="N",
                    help=f"maximal term depth (default: #ground, else {DEFAULT_DEPTH})")
    ap.add_argument("--format", choices=("text", "json"), default="text")
    ap.add_argument("--show-transform", action="store_true",
                    help="print the program relaxed by the (first) hypothesis set")
    ap.add_argument("--show-stages", action="store_true")
    ap.add_argument("--check-oracle", action="store_true",
                    help="compare with a brute-force oracle; exit 4 on disagreement")
    ap.add_argument("--seed", type=int, default=None, help="recorded in the output")
    return ap


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        if args.file == "-":
            text = sys.stdin.read()
        else:
            with open(args.file, encoding="utf-8") as fh:
                text = fh.read()
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_PARSE
    status, out = run(text, args.semantics, depth=args.ground_depth, fmt=args.format,
                      show_transform=args.show_transform, show_stages=args.show_stages,
                      check_oracle=args.check_oracle, seed=args.seed)
    (sys.stdout if status in (EXIT_OK, EXIT_ORACLE) else sys.stderr).write(out)
    return status


if __name__ == "__main__":
    sys.exit(main())

"""Generated literals, contextual hypotheses and the semantics they induce.

A formal logic program gives every predicate a positive and a negative body.
Its generated literals are the least set closed under rule firing, where a
body fires when the current literals force it.  Marking literal occurrences
and assuming a set of hypotheses there turns the program into another one;
classifying hypothesis sets recovers answer sets, stable models and the
well-founded model on top of the same base.
"""

from .engine import (
    GroundProgram, StageTrace, complete_predicates, generated_literals, ground, has_support,
    is_consistent_program, is_partial_model, kripke_kleene, minimal_supports, stage_trace,
)
from .errors import (
    BridgeViolation, BudgetExceeded, DepthBoundExceeded, InconsistentProgram, InvalidPath,
    LpError, ParseError, PreconditionError, ValidationError,
)
from .extensor import (
    ExtensorClassification, FoundationalChain, MaximalFoundational, answer_sets, classify,
    foundational_chain, max_foundational_extensor, stable_models, well_founded,
)
from .forcing import GroundContext, forces, forces_open, is_consistent
from .program import (
    EMPTY_MARKER, FormalLogicProgram, GeneralProgram, LiteralMarker, Rule, from_general_program,
    is_locally_consistent, is_symmetric, merge_rules, symmetric_completion, to_general_program,
)
from .syntax import (
    FALSE, TRUE, And, Atom, Distinction, Exists, Fn, Forall, Identity, NegAtom, Not, Or, Var,
    Vocabulary, complement, dual, numeral, render,
)
from .transform import (
    HypothesisSet, marker_advance, negative_marker, program_relax, program_restrict, relax,
    restrict, total_marker, unif,
)

__version__ = "0.1.0"

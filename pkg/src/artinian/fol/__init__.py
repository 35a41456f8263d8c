"""First-order language of rings: syntax, parsing, the Red transform,
named sentences and finite-model evaluation."""

from .builders import (CATALOGUE_NAMES, ar, ar1, art, art_exact, ass, char_axioms, depth_zero, ec,
                       gor_axioms, len_, loc, mass, min_, min_sentence, nu, root, root_sentence)
from .evaluate import (EvaluationBudgetError, EvaluationError, Model, eval_fast, eval_reference,
                       truth_table)
from .parser import FormulaSyntaxError, format_formula, format_term, parse, parse_term
from .syntax import (FALSE, ONE, TRUE, ZERO, Add, And, Eq, Exists, Forall, Formula, Mul, Neg, Not,
                     One, Or, Param, Term, Var, Zero, free_vars, quantifier_depth)
from .transform import (CaptureError, QuantifierShape, atom_polarities, desugar, prenex_string,
                        reduce_modulo, shape)

__all__ = [n for n in dir() if not n.startswith("_")]

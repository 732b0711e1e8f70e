"""Workbench for fixed-point equations x ≡ phi(x) in propositional dynamic logic."""

from .certify import (
    Certificate,
    CheckReport,
    RewriteStep,
    apply_rule,
    certificate_from_json,
    certificate_to_json,
    check_certificate,
    generate_certificate,
    grouped_rule_ids,
    match_rule,
    validate_rules,
)
from .hierarchy import (
    ClassifyResult,
    Decomposition,
    Pair,
    PaddingRecord,
    XFree,
    classify,
    classify_pi,
    classify_sigma,
    diagnose,
    reconstruct,
    to_chain_form,
    to_nested_form,
)
from .semantics import (
    EquationReport,
    KripkeModel,
    ModelGenParams,
    check_solution_on,
    equivalent_on,
    model_from_json,
    model_to_json,
    random_model,
    relation,
    satisfies,
)
from .syntax import (
    And,
    Atom,
    AtomicProg,
    Bot,
    Box,
    Choice,
    Diamond,
    Formula,
    NegAtom,
    Or,
    Program,
    Seq,
    Star,
    Test,
    Top,
    Var,
    equal_modulo_assoc,
    iff,
    implies,
    is_x_free,
    negate,
    program_variables,
    substitute,
    variables,
)
from .synthesis import NotInClass, Solution, odot, solve, solve_pi, solve_sigma, tested_chain
from .textio import ParseError, parse_formula, parse_program, print_formula, print_program

__version__ = "0.1.0"

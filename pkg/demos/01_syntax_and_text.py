"""Formulas and programs as immutable trees, and the concrete text syntax.

Run:  python3 demos/01_syntax_and_text.py
"""

from pdlfix import (
    Atom,
    Var,
    equal_modulo_assoc,
    implies,
    negate,
    parse_formula,
    parse_program,
    print_formula,
    print_program,
    substitute,
    variables,
)

# The grammar: | and & (right-associative, & tighter), [prog] / <prog>
# modalities, lowercase atoms, uppercase variables.
phi = parse_formula("p & [a](q | (r & X))")
print("parsed:       ", phi)
print("printed back: ", print_formula(phi))

# Programs: sequencing ';', choice 'u', iteration '*', tests 'phi?'.
alpha = parse_program("(true? ; a ; (~q)?)*")
print("program:      ", print_program(alpha))

# Negation lives on atoms only and fixes variables: it swaps the duals
# structurally, which is what makes the Sigma hierarchy a mirror image.
print("negate:       ", print_formula(negate(phi)))
print("involution:   ", negate(negate(phi)) == phi)

# Substitution replaces every occurrence of the variable, including inside
# test programs.
lam = parse_formula("s | q")
print("substituted:  ", print_formula(substitute(phi, "X", lam)))
print("variables:    ", sorted(variables(phi)))

# Association of chains is spelling, not meaning; equal_modulo_assoc
# flattens maximal chains of & | ; u but never commutes.
left = parse_formula("(p & q) & r")
right = parse_formula("p & (q & r)")
print("assoc-equal:  ", equal_modulo_assoc(left, right))
print("not commut.:  ", not equal_modulo_assoc(parse_formula("p & q"), parse_formula("q & p")))

# Derived connectives; note negate(X) = X, so X -> p is X | p.
print("implies:      ", print_formula(implies(Var("X"), Atom("p"))))

# Unicode aliases are accepted on input and never emitted.
print("aliases:      ", print_formula(parse_formula("¬p | [a ∪ b]⊤")))

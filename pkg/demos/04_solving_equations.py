"""Explicit solutions for x == phi(x), and why the duality strategy is the
default for diamond-side equations.

Run:  python3 demos/04_solving_equations.py
"""

from pdlfix import (
    KripkeModel,
    ModelGenParams,
    check_solution_on,
    equivalent_on,
    parse_formula,
    print_formula,
    random_model,
    solve,
)

# The running example: x == p & [a](q | (r & x)).
phi = parse_formula("p & [a](q | (r & X))")
sol = solve(phi, "X")
print("equation:  x ==", print_formula(phi))
print("solution:  ", print_formula(sol.formula), f"(schema {sol.schema})")

# The oracle confirms it: lambda == phi(lambda) on every random model.
ok = all(
    check_solution_on(random_model(ModelGenParams(world_count=1 + s % 5, seed=s)),
                      "X", phi, sol.formula).passed
    for s in range(200)
)
print("verified on 200 random models:", ok)

# A purely propositional base case collapses to the expected fixpoint.
level0 = parse_formula("p | (q & X)")
sol0 = solve(level0, "X")
print()
print("equation:  x ==", print_formula(level0))
print("solution:  ", print_formula(sol0.formula))
print("equivalent to p | q:",
      all(equivalent_on(random_model(ModelGenParams(world_count=3, seed=s)),
                        sol0.formula, parse_formula("p | q")) is None
          for s in range(100)))

# Diamond-side equations: the literal schema guards hops with the wrong
# polarity; the duality strategy (negate, solve the box side, negate back)
# is sound.  DISCREPANCIES.md tells the full story.
probe = parse_formula("p & (q | X)")
literal = solve(probe, "X", strategy="literal")
duality = solve(probe, "X", strategy="duality")
print()
print("equation:  x ==", print_formula(probe))
print("literal:   ", print_formula(literal.formula))
print("duality:   ", print_formula(duality.formula))

one_world = KripkeModel(worlds=("w0",), relations={},
                        valuation={"p": frozenset({"w0"}), "q": frozenset({"w0"})})
report = check_solution_on(one_world, "X", probe, literal.formula)
print("literal on the one-world p,q model:",
      "refuted at " + report.counterexample_world if not report.passed else "passed")
print("duality on 300 random models:",
      all(check_solution_on(random_model(ModelGenParams(world_count=1 + s % 5, seed=s)),
                            "X", probe, duality.formula).passed
          for s in range(300)))

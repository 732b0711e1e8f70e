"""Randomized soundness runs: the rule base and the fixed-point property.

Everything is seeded, so any failure replays exactly.  The same machinery
backs ``pdlfix fuzz``.

Run:  python3 demos/06_fuzzing.py
"""

import random

from pdlfix import (
    ModelGenParams,
    check_solution_on,
    random_model,
    validate_rules,
)
from pdlfix.generators import derive_seed, random_decomposition
from pdlfix.hierarchy import to_nested_form
from pdlfix.synthesis import solve_pi, solve_sigma
from pdlfix.textio import print_formula

# Every rule, random instantiations, random models, agreement at every
# world.  Metavariables may be bound to variable-containing formulas
# wherever the rule is sound for them (everywhere except under E7's
# negated test — see DISCREPANCIES.md).
outcome = validate_rules(trials=60, models_per_trial=15, seed=2024)
print("rule soundness (60 instantiations x 15 models each):")
for rule_id, entry in outcome.items():
    print(f"  {rule_id:>3}: {entry.trials} checks, {entry.counterexamples} counterexamples")

# The central property: for every in-class decomposition, the synthesized
# solution satisfies its own equation on every model.
rng = random.Random(7)
cases = [("Pi", False), ("Pi", True), ("Sigma", False), ("Sigma", True)]
checks = failures = 0
for trial in range(120):
    kind, leading = cases[trial % 4]
    d = random_decomposition(rng, kind=kind, leading=leading, max_pairs=3)
    sol = solve_pi(d) if kind == "Pi" else solve_sigma(d)
    equation = to_nested_form(d)
    for k in range(10):
        model = random_model(ModelGenParams(world_count=1 + k % 5,
                                            seed=derive_seed(trial, k)))
        report = check_solution_on(model, "X", equation, sol.formula)
        checks += 1
        if not report.passed:
            failures += 1
            print("counterexample!", print_formula(equation), report.counterexample_world)

print()
print(f"fixed-point property: {checks} checks across all four schema cases, "
      f"{failures} failures")

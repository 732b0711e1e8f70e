import random
from dataclasses import replace

import pytest

from pdlfix.certify import (
    BadPathError,
    Certificate,
    CertifyError,
    FMeta,
    GenerationError,
    MismatchError,
    RewriteRule,
    RewriteStep,
    RULES,
    apply_rule,
    certificate_from_json,
    certificate_to_json,
    check_certificate,
    generate_certificate,
    grouped_rule_ids,
    match_rule,
    rewrite_at,
    validate_rules,
)
from pdlfix.generators import derive_seed, random_decomposition
from pdlfix.hierarchy import classify, to_nested_form
from pdlfix.semantics import ModelGenParams, equivalent_on, random_model
from pdlfix.synthesis import solve, solve_pi, solve_sigma
from pdlfix.syntax import And, Atom, Or, substitute
from pdlfix.textio import parse_formula, parse_program, print_formula

EXAMPLE = "p & [a](q | (r & X))"


def example_certificate():
    phi = parse_formula(EXAMPLE)
    result = classify(phi, "X")
    sol = solve(phi, "X")
    return phi, sol, generate_certificate(sol, padding=result.padding)


def test_match_e1_box_pair():
    bindings = match_rule(parse_formula("[a][b]p"), "E1", "LR", ())
    assert bindings == {"alpha": parse_program("a"), "beta": parse_program("b"),
                        "phi": parse_formula("p")}


def test_match_e3_factoring():
    bindings = match_rule(parse_formula("[a]p & [a]q"), "E3", "RL", ())
    assert bindings == {"alpha": parse_program("a"), "phi": parse_formula("p"),
                        "psi": parse_formula("q")}


def test_e3_needs_equal_programs():
    assert match_rule(parse_formula("[a]p & [b]q"), "E3", "RL", ()) is None


def test_e1_does_not_match_diamonds():
    assert match_rule(parse_formula("<a>p"), "E1", "LR", ()) is None


def test_match_at_bad_path_is_an_error():
    with pytest.raises(BadPathError):
        match_rule(parse_formula("p & q"), "E1", "LR", (0, 0, 0))


def test_apply_e4_unfolds_the_star():
    state, _ = rewrite_at(parse_formula("[a*]p"), "E4", "LR", ())
    assert state == parse_formula("p & [a][a*]p")


def test_apply_e2_folds_a_test():
    state, _ = rewrite_at(parse_formula("<p?>q"), "E2", "RL", ())
    assert state == parse_formula("p & q")


def test_apply_e5_under_a_box():
    state, _ = rewrite_at(parse_formula("[a][true?]p"), "E5", "LR", (1,))
    assert state == parse_formula("[a]p")


def test_apply_e7_reads_the_test_polarity():
    state, _ = rewrite_at(parse_formula("[(~q)?](r & s)"), "E7", "RL", ())
    assert state == parse_formula("q | (r & s)")
    state, _ = rewrite_at(parse_formula("[q?]r"), "E7", "RL", ())
    assert state == parse_formula("~q | r")


def test_rewrite_inside_a_test_program():
    state, _ = rewrite_at(parse_formula("<([true?]p)?>q"), "E5", "LR", (0, 0))
    assert state == parse_formula("<p?>q")


def test_replay_validates_stored_bindings():
    phi = parse_formula("[a][b]p")
    step = RewriteStep("E1", "LR", (), bindings={
        "alpha": parse_program("a"), "beta": parse_program("b"), "phi": parse_formula("q")})
    with pytest.raises(MismatchError):
        apply_rule(phi, step)


def test_empty_certificate_passes_when_endpoints_agree():
    phi = parse_formula("p & q")
    assert check_certificate(Certificate(source=phi, target=phi, steps=())).ok
    assert not check_certificate(Certificate(source=phi, target=Atom("p"), steps=())).ok


def test_worked_example_certificate():
    phi, sol, cert = example_certificate()
    assert grouped_rule_ids(cert) == [["E4"], ["E1", "E3"], ["E1", "E5"], ["E3"], ["E7"]]
    report = check_certificate(cert)
    assert report.ok
    assert cert.target == substitute(phi, "X", sol.formula)
    assert cert.source == sol.formula


def test_level_zero_certificate():
    phi = parse_formula("p | (q & X)")
    result = classify(phi, "X")
    sol = solve(phi, "X")
    cert = generate_certificate(sol, padding=result.padding)
    ids = [step.rule for step in cert.steps]
    assert ids[0] == "E4"
    assert "E7" in ids
    assert check_certificate(cert).ok
    assert cert.target == substitute(phi, "X", sol.formula)


def test_single_odd_pair_has_exactly_one_root_unfold():
    rng = random.Random(0)
    for trial in range(20):
        d = random_decomposition(rng, kind="Pi", leading=True, max_pairs=1)
        cert = generate_certificate(solve_pi(d))
        unfolds = [s for s in cert.steps if s.rule == "E4"]
        assert len(unfolds) == 1
        assert unfolds[0].path == ()
        assert unfolds[0] is cert.steps[0]


def test_completeness_on_class():
    rng = random.Random(99)
    cases = [("Pi", False), ("Pi", True), ("Sigma", False), ("Sigma", True)]
    for trial in range(100):
        kind, leading = cases[trial % 4]
        d = random_decomposition(rng, kind=kind, leading=leading, max_pairs=3)
        sol = solve_pi(d) if kind == "Pi" else solve_sigma(d)
        cert = generate_certificate(sol)
        report = check_certificate(cert)
        assert report.ok, report.reason
        assert cert.target == substitute(to_nested_form(d), "X", sol.formula)


def test_completeness_beyond_the_default_pair_bound():
    rng = random.Random(2718)
    for trial in range(40):
        d = random_decomposition(rng, max_pairs=5, depth=3)
        sol = solve_pi(d) if d.kind == "Pi" else solve_sigma(d)
        cert = generate_certificate(sol)
        assert check_certificate(cert).ok


def test_tampered_rule_or_direction_fails():
    _phi, _sol, cert = example_certificate()
    swaps = {"E1": "E6", "E3": "E8", "E4": "E9", "E5": "E10", "E7": "E2", "AA": "AO"}
    for i, step in enumerate(cert.steps):
        flipped = replace(step, direction="RL" if step.direction == "LR" else "LR")
        broken = Certificate(cert.source, cert.target,
                             cert.steps[:i] + (flipped,) + cert.steps[i + 1:])
        assert not check_certificate(broken).ok
        swapped = replace(step, rule=swaps[step.rule])
        broken = Certificate(cert.source, cert.target,
                             cert.steps[:i] + (swapped,) + cert.steps[i + 1:])
        assert not check_certificate(broken).ok


def test_certificate_endpoints_are_semantically_equivalent():
    rng = random.Random(55)
    for trial in range(20):
        d = random_decomposition(rng, max_pairs=2)
        sol = solve_pi(d) if d.kind == "Pi" else solve_sigma(d)
        cert = generate_certificate(sol)
        for k in range(3):
            m = random_model(ModelGenParams(world_count=3, seed=derive_seed(trial, k)))
            assert equivalent_on(m, cert.source, cert.target) is None


def test_sigma_certificates_use_the_dual_rules():
    phi = parse_formula("p & (q | X)")
    sol = solve(phi, "X")
    cert = generate_certificate(sol, padding=classify(phi, "X").padding)
    used = {step.rule for step in cert.steps}
    assert used <= {"E9", "E6", "E8", "E2", "E10", "AO"}
    assert check_certificate(cert).ok


def test_certificates_for_classified_inputs():
    # Padding and commutation in all their combinations, both hierarchy
    # sides; targets may keep padded true-conjuncts but always replay and
    # always mean the instantiated equation.
    cases = [
        "p & [a](q | (r & X))",
        "[a](p | (q & X))",
        "[a][b]X",
        "X",
        "p & X",
        "p | X",
        "X & q",
        "(q & X) | p",
        "p & (q | X)",
        "<a>(p & (q | X))",
        "<a>X",
        "<a>(p & X)",
        # pads buried at inner levels, forcing mid-chain drops
        "p & [a][b](q | (r & X))",
        "[a](p | (q & [b][c](s | X)))",
        "<a><b>(p & (q | X))",
        "[a*](p | (q & X))",
        "[(s? ; a)*; b](p | (q & X))",
    ]
    for text in cases:
        phi = parse_formula(text)
        result = classify(phi, "X")
        sol = solve(phi, "X")
        cert = generate_certificate(sol, padding=result.padding)
        assert check_certificate(cert).ok, text
        instantiated = substitute(phi, "X", sol.formula)
        for seed in range(5):
            m = random_model(ModelGenParams(world_count=3, atom_names=("p", "q", "r", "s"),
                                            prog_names=("a", "b", "c"), seed=seed))
            assert equivalent_on(m, cert.target, instantiated) is None, text


def test_literal_sigma_solutions_are_not_certifiable():
    sol = solve(parse_formula("p & (q | X)"), "X", strategy="literal")
    with pytest.raises(GenerationError):
        generate_certificate(sol)


def test_xfree_solution_yields_the_empty_certificate():
    sol = solve(parse_formula("p & q"), "X")
    cert = generate_certificate(sol)
    assert cert.steps == ()
    assert check_certificate(cert).ok


def test_tampered_binding_fails_at_that_step():
    _phi, _sol, cert = example_certificate()
    for i, step in enumerate(cert.steps):
        name = sorted(step.bindings)[0]
        value = step.bindings[name]
        bad_value = Seq_or_And(value)
        bad = replace(step, bindings={**step.bindings, name: bad_value})
        tampered = Certificate(cert.source, cert.target, cert.steps[:i] + (bad,) + cert.steps[i + 1:])
        report = check_certificate(tampered)
        assert not report.ok
        assert report.failed_step == i


def Seq_or_And(value):
    from pdlfix.syntax import Formula, Seq

    if isinstance(value, Formula):
        return And(value, value)
    return Seq(value, value)


def test_tampered_path_fails_at_that_step():
    _phi, _sol, cert = example_certificate()
    for i, step in enumerate(cert.steps):
        bad = replace(step, path=step.path + (5,))
        tampered = Certificate(cert.source, cert.target, cert.steps[:i] + (bad,) + cert.steps[i + 1:])
        report = check_certificate(tampered)
        assert not report.ok
        assert report.failed_step == i


def test_certificate_json_round_trip():
    _phi, _sol, cert = example_certificate()
    doc = certificate_to_json(cert)
    assert doc["steps"][0]["rule"] == "E4"
    back = certificate_from_json(doc)
    assert back == cert
    assert check_certificate(back).ok


def test_malformed_certificate_rejected():
    with pytest.raises(ValueError, match="malformed"):
        certificate_from_json({"from": "p"})
    with pytest.raises(ValueError):
        certificate_from_json({"from": "p", "to": "q", "steps": [{"rule": "E99",
                               "direction": "LR", "path": [], "bindings": {}}]})


def test_validate_rules_finds_no_counterexamples():
    report = validate_rules(trials=30, models_per_trial=8, seed=4)
    for rule_id, entry in report.items():
        assert entry.counterexamples == 0, f"{rule_id}: {entry.first_failure}"


def test_rules_hold_with_variable_instantiations():
    # Variables read from the valuation like atoms, so the negation-free
    # rules accept variable-containing bindings; E8 with psi := X is the
    # canonical case.
    from pdlfix.certify import _instantiate

    rule = RULES["E8"]
    bindings = {"alpha": parse_program("a"), "phi": parse_formula("p"),
                "psi": parse_formula("X")}
    lhs = _instantiate(rule.lhs, bindings)
    rhs = _instantiate(rule.rhs, bindings)
    for seed in range(30):
        m = random_model(ModelGenParams(world_count=4, var_names=("X",), seed=seed))
        assert equivalent_on(m, lhs, rhs) is None


def test_validate_rules_flags_a_corrupted_rule():
    bogus = {"EX": RewriteRule("EX", Or(FMeta("phi"), FMeta("psi")),
                               And(FMeta("phi"), FMeta("psi")))}
    report = validate_rules(trials=20, models_per_trial=5, seed=4, rules=bogus)
    assert report["EX"].counterexamples > 0
    assert report["EX"].first_failure is not None


def test_the_false_test_variant_of_e10_is_refuted():
    # DISCREPANCIES.md item 2: a diamond over false? is constantly false, so
    # the false?-test rendering of the identity drop is unsound.
    from pdlfix.syntax import Bot, Diamond, Test

    variant = {"E10f": RewriteRule("E10f", Diamond(Test(Bot()), FMeta("phi")), FMeta("phi"))}
    report = validate_rules(trials=20, models_per_trial=5, seed=1, rules=variant)
    assert report["E10f"].counterexamples > 0


def test_search_fallback_finds_short_derivations():
    from pdlfix.certify import _search

    source = parse_formula("[a*]p")
    target = parse_formula("p & [a][a*]p")
    steps = _search(source, target, cap=50)
    cert = Certificate(source=source, target=target, steps=tuple(steps))
    assert check_certificate(cert).ok


def test_search_fallback_respects_its_cap():
    from pdlfix.certify import _search

    with pytest.raises(GenerationError, match="cap"):
        _search(parse_formula("p"), parse_formula("q"), cap=30)

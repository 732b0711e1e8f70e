"""Command-line front end: classify, solve, check, fuzz, verify-cert.

Exit codes are a stable scripting contract: 0 success, 1 semantic
counterexample found, 2 input or usage error, 3 internal strategy failure.
``--json`` emits exactly one JSON document on stdout.  The environment
variable ``PDLFIX_SEED`` overrides ``--seed``.
"""

from __future__ import annotations

import argparse
import json
import os
import random
import sys
import time
from dataclasses import dataclass

from .certify import (
    CertifyError,
    certificate_from_json,
    certificate_to_json,
    check_certificate,
    generate_certificate,
    grouped_rule_ids,
    validate_rules,
)
from .generators import derive_seed, random_decomposition
from .hierarchy import XFree, classify, decomposition_to_json, diagnose, to_nested_form
from .semantics import (
    ModelGenParams,
    check_solution_on,
    load_model,
    model_to_json,
    random_model,
)
from .synthesis import NotInClass, solve, solve_pi, solve_sigma
from .syntax import is_x_free
from .textio import ParseError, parse_formula, print_formula

OK, COUNTEREXAMPLE, USAGE_ERROR, STRATEGY_FAILURE = 0, 1, 2, 3

__all__ = ["main", "console", "RunReport"]


@dataclass(frozen=True)
class RunReport:
    """Aggregate outcome of a fuzzing run; failures replay from the seed."""

    command: str
    scope: str
    seed: int
    trials: int
    checks: int
    failures: int
    first_counterexample: dict | None
    wall_time: float

    def to_json(self) -> dict:
        return {
            "command": self.command,
            "scope": self.scope,
            "seed": self.seed,
            "trials": self.trials,
            "checks": self.checks,
            "failures": self.failures,
            "firstCounterexample": self.first_counterexample,
            "wallTime": round(self.wall_time, 3),
        }


def _read_formula_arg(text: str):
    if text.startswith("@"):
        with open(text[1:], encoding="utf-8") as handle:
            text = handle.read()
    return parse_formula(text)


def _check_var(args) -> str | None:
    if not args.var or not (args.var[0].isupper() and args.var.isidentifier()):
        return f"--var must be an uppercase identifier, got {args.var!r}"
    return None


def _emit(args, doc: dict, human_lines: list[str]) -> None:
    if args.json:
        print(json.dumps(doc, indent=2))
    else:
        for line in human_lines:
            print(line)


def _effective_seed(args) -> int:
    env = os.environ.get("PDLFIX_SEED")
    if env is None:
        return args.seed
    try:
        return int(env)
    except ValueError:
        raise ValueError(f"PDLFIX_SEED must be an integer, got {env!r}") from None


def cmd_classify(args) -> int:
    bad = _check_var(args)
    if bad is not None:
        _emit(args, {"status": "error", "message": bad}, [f"error: {bad}"])
        return USAGE_ERROR
    try:
        phi = _read_formula_arg(args.formula)
    except (ParseError, OSError) as exc:
        _emit(args, {"status": "error", "message": str(exc)}, [f"error: {exc}"])
        return USAGE_ERROR
    outcome = classify(phi, args.var, strict=args.strict)
    if isinstance(outcome, XFree):
        _emit(args, {"status": "x-free", "x": args.var},
              [f"{print_formula(phi)} is {args.var}-free: the equation is trivial"])
        return OK
    if outcome is None:
        message = f"not in class: {diagnose(phi, args.var, strict=args.strict)}"
        _emit(args, {"status": "not-in-class", "detail": message}, [message])
        return USAGE_ERROR
    doc = decomposition_to_json(outcome)
    doc["status"] = "classified"
    d = outcome.decomposition
    lines = [f"kind: {d.kind}", f"level: {d.level}", f"pairs: {d.n}",
             f"leading modality: {d.leading_modality}"]
    for i, pair in enumerate(d.pairs, 1):
        alpha = "-" if pair.alpha is None else doc["pairs"][i - 1]["alpha"]
        lines.append(f"  pair {i}: phi={doc['pairs'][i-1]['phi']}  psi={doc['pairs'][i-1]['psi']}  alpha={alpha}")
    for pad in doc["padding"]:
        slots = [name for name, flag in (("phi", pad["phiPadded"]), ("psi", pad["psiPadded"]))
                 if flag]
        notes = [f"{s} padded" for s in slots]
        notes += [n for n, flag in (("or commuted", pad["orCommuted"]),
                                    ("and commuted", pad["andCommuted"])) if flag]
        lines.append(f"  pair {pad['index']}: " + ", ".join(notes))
    _emit(args, doc, lines)
    return OK


def cmd_solve(args) -> int:
    bad = _check_var(args)
    if bad is not None:
        _emit(args, {"status": "error", "message": bad}, [f"error: {bad}"])
        return USAGE_ERROR
    try:
        phi = _read_formula_arg(args.formula)
    except (ParseError, OSError) as exc:
        _emit(args, {"status": "error", "message": str(exc)}, [f"error: {exc}"])
        return USAGE_ERROR
    outcome = classify(phi, args.var)
    try:
        sol = solve(phi, args.var, strategy=args.strategy)
    except NotInClass as exc:
        _emit(args, {"status": "not-in-class", "detail": str(exc)}, [f"error: {exc}"])
        return USAGE_ERROR
    doc = sol.to_json()
    lines = [print_formula(sol.formula)]
    if args.certify is not None:
        if isinstance(outcome, XFree) or outcome is None:
            padding = ()
        else:
            padding = outcome.padding
        try:
            cert = generate_certificate(sol, padding=padding)
        except CertifyError as exc:
            _emit(args, {"status": "certificate-failure", "lambda": doc["lambda"],
                         "message": str(exc)}, [f"certificate generation failed: {exc}"])
            return STRATEGY_FAILURE
        path = args.certify
        with open(path, "w", encoding="utf-8") as handle:
            json.dump(certificate_to_json(cert), handle, indent=2)
        doc["certificate"] = path
        doc["certificateGroups"] = grouped_rule_ids(cert)
        lines.append(f"certificate: {path}")
    _emit(args, doc, lines)
    return OK


def cmd_check(args) -> int:
    bad = _check_var(args)
    if bad is not None:
        _emit(args, {"status": "error", "message": bad}, [f"error: {bad}"])
        return USAGE_ERROR
    try:
        phi = _read_formula_arg(args.equation)
        candidate = _read_formula_arg(args.candidate)
    except (ParseError, OSError) as exc:
        _emit(args, {"status": "error", "message": str(exc)}, [f"error: {exc}"])
        return USAGE_ERROR
    if not is_x_free(candidate, args.var):
        message = f"candidate contains the unknown {args.var}"
        _emit(args, {"status": "error", "message": message}, [f"error: {message}"])
        return USAGE_ERROR
    try:
        seed = _effective_seed(args)
    except ValueError as exc:
        _emit(args, {"status": "error", "message": str(exc)}, [f"error: {exc}"])
        return USAGE_ERROR
    models = []
    if args.model is not None:
        try:
            models.append(load_model(args.model))
        except (ValueError, OSError) as exc:
            _emit(args, {"status": "error", "message": str(exc)}, [f"error: {exc}"])
            return USAGE_ERROR
    else:
        if args.random < 1:
            message = "--random needs at least one model"
            _emit(args, {"status": "error", "message": message}, [f"error: {message}"])
            return USAGE_ERROR
        rng = random.Random(seed)
        atoms_e, vars_e, progs_e = _collect_names(phi)
        atoms_c, vars_c, progs_c = _collect_names(candidate)
        atoms = tuple(sorted(atoms_e | atoms_c)) or ("p",)
        var_names = tuple(sorted(vars_e | vars_c))
        progs = tuple(dict.fromkeys(progs_e + progs_c)) or ("a",)
        for i in range(args.random):
            params = ModelGenParams(
                world_count=rng.randint(1, args.worlds),
                atom_names=atoms,
                var_names=var_names,
                prog_names=progs,
                seed=derive_seed(seed, i),
            )
            models.append(random_model(params))
    checked = 0
    for model in models:
        report = check_solution_on(model, args.var, phi, candidate)
        checked += 1
        if not report.passed:
            doc = report.to_json()
            doc["checked"] = checked
            doc["seed"] = seed
            _emit(args, doc, [
                f"counterexample after {checked} model(s): world {report.counterexample_world}",
                f"  candidate:    {print_formula(report.candidate)}",
                f"  instantiated: {print_formula(report.instantiated)}",
                f"  model: {json.dumps(model_to_json(report.model))}",
            ])
            return COUNTEREXAMPLE
    _emit(args, {"passed": True, "checked": checked, "seed": seed},
          [f"all {checked} model(s) agree: candidate solves the equation"])
    return OK


def _collect_names(phi) -> tuple[set[str], set[str], list[str]]:
    """Atom names, variable names, and atomic program names of a formula."""
    from .certify import all_paths
    from .syntax import Atom, AtomicProg, NegAtom, Var

    atoms: set[str] = set()
    variables: set[str] = set()
    progs: list[str] = []
    for _path, node in all_paths(phi):
        if isinstance(node, (Atom, NegAtom)):
            atoms.add(node.name)
        elif isinstance(node, Var):
            variables.add(node.name)
        elif isinstance(node, AtomicProg) and node.name not in progs:
            progs.append(node.name)
    return atoms, variables, progs


def _fuzz_rules(seed: int, trials: int, models_per_trial: int) -> tuple[int, int, dict | None]:
    report = validate_rules(trials=trials, models_per_trial=models_per_trial, seed=seed)
    checks = sum(entry.trials for entry in report.values())
    failures = sum(entry.counterexamples for entry in report.values())
    first = next((entry.first_failure for entry in report.values() if entry.first_failure), None)
    return checks, failures, first


def _fuzz_solutions(seed: int, trials: int, models_per_trial: int,
                    max_pairs: int, depth: int) -> tuple[int, int, dict | None]:
    rng = random.Random(seed)
    checks = failures = 0
    first = None
    cases = [("Pi", False), ("Pi", True), ("Sigma", False), ("Sigma", True)]
    for trial in range(trials):
        kind, leading = cases[trial % 4]
        d = random_decomposition(rng, kind=kind, leading=leading,
                                 max_pairs=max_pairs, depth=depth)
        phi_x = to_nested_form(d)
        sol = solve_pi(d) if kind == "Pi" else solve_sigma(d)
        for k in range(models_per_trial):
            params = ModelGenParams(world_count=1 + (k % 5), seed=derive_seed(seed + trial, k))
            model = random_model(params)
            result = check_solution_on(model, d.x, phi_x, sol.formula)
            checks += 1
            if not result.passed:
                failures += 1
                if first is None:
                    doc = result.to_json()
                    doc["trial"] = trial
                    first = doc
    return checks, failures, first


def cmd_fuzz(args) -> int:
    try:
        seed = _effective_seed(args)
    except ValueError as exc:
        _emit(args, {"status": "error", "message": str(exc)}, [f"error: {exc}"])
        return USAGE_ERROR
    started = time.perf_counter()
    checks = failures = 0
    first = None
    if args.scope in ("rules", "both"):
        c, f, cex = _fuzz_rules(seed, args.trials, args.models_per_trial)
        checks += c
        failures += f
        first = first or cex
    if args.scope in ("solutions", "both"):
        c, f, cex = _fuzz_solutions(seed, args.trials, args.models_per_trial,
                                    args.max_pairs, args.depth)
        checks += c
        failures += f
        first = first or cex
    report = RunReport(
        command=(f"pdlfix fuzz --scope {args.scope} --trials {args.trials} "
                 f"--models-per-trial {args.models_per_trial} "
                 f"--max-pairs {args.max_pairs} --depth {args.depth} --seed {seed}"),
        scope=args.scope,
        seed=seed,
        trials=args.trials,
        checks=checks,
        failures=failures,
        first_counterexample=first,
        wall_time=time.perf_counter() - started,
    )
    _emit(args, report.to_json(), [
        f"scope={args.scope} seed={seed} trials={args.trials}",
        f"checks: {checks}  failures: {failures}  ({report.wall_time:.2f}s)",
    ] + ([f"first counterexample: {json.dumps(first)}"] if first else []))
    return OK if failures == 0 else COUNTEREXAMPLE


def cmd_verify_cert(args) -> int:
    try:
        with open(args.certificate, encoding="utf-8") as handle:
            doc = json.load(handle)
        cert = certificate_from_json(doc)
    except (OSError, ValueError) as exc:
        _emit(args, {"status": "error", "message": str(exc)}, [f"error: {exc}"])
        return USAGE_ERROR
    report = check_certificate(cert)
    doc = {
        "ok": report.ok,
        "stepsApplied": report.steps_applied,
        "failedStep": report.failed_step,
        "reason": report.reason,
        "groups": grouped_rule_ids(cert),
    }
    lines = [f"steps applied: {report.steps_applied}"]
    if report.ok:
        lines.insert(0, "certificate verified")
    else:
        lines.insert(0, f"certificate REJECTED: {report.reason}")
    _emit(args, doc, lines)
    return OK if report.ok else COUNTEREXAMPLE


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pdlfix",
        description="Fixed-point equations in propositional dynamic logic: "
                    "classify, solve, verify, certify.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("classify", help="hierarchy membership and components")
    p.add_argument("--var", required=True, help="equation unknown (uppercase identifier)")
    p.add_argument("--strict", action="store_true", help="disable commutation matching")
    p.add_argument("--json", action="store_true")
    p.add_argument("formula", help="formula text or @file")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("solve", help="synthesize an explicit solution")
    p.add_argument("--var", required=True)
    p.add_argument("--strategy", choices=["duality", "literal"], default="duality")
    p.add_argument("--certify", nargs="?", const="certificate.json", default=None,
                   metavar="FILE", help="also write a rewrite certificate")
    p.add_argument("--json", action="store_true")
    p.add_argument("formula", help="formula text or @file")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("check", help="model-check a candidate solution")
    p.add_argument("--var", required=True)
    p.add_argument("--equation", required=True, help="formula text or @file")
    p.add_argument("--candidate", required=True, help="formula text or @file")
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--model", help="model JSON file")
    group.add_argument("--random", type=int, metavar="N", help="check on N random models")
    p.add_argument("--worlds", type=int, default=5, help="max worlds per random model")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("fuzz", help="randomized soundness runs")
    p.add_argument("--scope", choices=["rules", "solutions", "both"], default="both")
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--models-per-trial", type=int, default=10)
    p.add_argument("--max-pairs", type=int, default=3)
    p.add_argument("--depth", type=int, default=2)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_fuzz)

    p = sub.add_parser("verify-cert", help="replay a certificate file")
    p.add_argument("--json", action="store_true")
    p.add_argument("certificate", help="certificate JSON file")
    p.set_defaults(func=cmd_verify_cert)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else USAGE_ERROR
    return args.func(args)


def console() -> None:
    sys.exit(main())

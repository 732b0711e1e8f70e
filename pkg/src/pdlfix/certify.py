"""Directed, positioned rewriting with the ten box/diamond equivalences, and
machine-checkable certificates from a solution ``lambda`` to ``phi(lambda)``.

A certificate is a replayable list of steps; each step names a rule, a
direction, a path from the root (program and formula children share one
index scheme) and the full metavariable bindings, so the checker never has
to re-infer a match.

Two auxiliary step kinds ``AA``/``AO`` rebracket associative chains
(``(a & b) & c  <->  a & (b & c)`` and the disjunctive dual).  They are not
members of the equivalence family and are excluded from rule-id grouping:
binary exact matching cannot reassociate a conjunction through E1-E10 alone,
while the usual n-ary reading of big conjunctions silently does.  See
DISCREPANCIES.md.
"""

from __future__ import annotations

from dataclasses import dataclass, replace as _dc_replace

from .hierarchy import Decomposition, PaddingRecord
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
    negate,
    substitute,
)
from .synthesis import Solution, solve_pi
from .textio import parse_formula, parse_program, print_formula, print_program

__all__ = [
    "RewriteRule",
    "RewriteStep",
    "Certificate",
    "CheckReport",
    "CertifyError",
    "BadPathError",
    "MismatchError",
    "GenerationError",
    "RULES",
    "match_rule",
    "apply_rule",
    "check_certificate",
    "generate_certificate",
    "grouped_rule_ids",
    "validate_rules",
    "certificate_to_json",
    "certificate_from_json",
]


class CertifyError(ValueError):
    pass


class BadPathError(CertifyError):
    pass


class MismatchError(CertifyError):
    pass


class GenerationError(CertifyError):
    pass


# ---------------------------------------------------------------------------
# patterns

@dataclass(frozen=True)
class FMeta:
    """Formula metavariable."""

    name: str


@dataclass(frozen=True)
class PMeta:
    """Program metavariable."""

    name: str


@dataclass(frozen=True)
class FNeg:
    """Matches the negation of whatever ``name`` is bound to (used for the
    ``(~phi)?`` tests of E7); negation is involutive, so matching binds
    ``name := negate(subject)``."""

    name: str


@dataclass(frozen=True)
class RewriteRule:
    rule_id: str
    lhs: object
    rhs: object


_PHI, _PSI, _CHI = FMeta("phi"), FMeta("psi"), FMeta("chi")
_ALPHA, _BETA = PMeta("alpha"), PMeta("beta")

RULES: dict[str, RewriteRule] = {
    rule.rule_id: rule
    for rule in (
        RewriteRule("E1", Box(_ALPHA, Box(_BETA, _PHI)), Box(Seq(_ALPHA, _BETA), _PHI)),
        RewriteRule("E2", And(_PHI, _PSI), Diamond(Test(_PHI), _PSI)),
        RewriteRule("E3", Box(_ALPHA, And(_PHI, _PSI)), And(Box(_ALPHA, _PHI), Box(_ALPHA, _PSI))),
        RewriteRule("E4", Box(Star(_ALPHA), _PHI), And(_PHI, Box(_ALPHA, Box(Star(_ALPHA), _PHI)))),
        RewriteRule("E5", Box(Test(Top()), _PHI), _PHI),
        RewriteRule("E6", Diamond(_ALPHA, Diamond(_BETA, _PHI)), Diamond(Seq(_ALPHA, _BETA), _PHI)),
        RewriteRule("E7", Or(_PHI, _PSI), Box(Test(FNeg("phi")), _PSI)),
        RewriteRule("E8", Diamond(_ALPHA, Or(_PHI, _PSI)), Or(Diamond(_ALPHA, _PHI), Diamond(_ALPHA, _PSI))),
        RewriteRule("E9", Diamond(Star(_ALPHA), _PHI), Or(_PHI, Diamond(_ALPHA, Diamond(Star(_ALPHA), _PHI)))),
        # As conventionally printed E10 carries a false? test, but a diamond
        # over the empty test relation is constantly false; the sound rule —
        # and the one that dualizes E5 — is the true? drop.  DISCREPANCIES.md.
        RewriteRule("E10", Diamond(Test(Top()), _PHI), _PHI),
        RewriteRule("AA", And(And(_PHI, _PSI), _CHI), And(_PHI, And(_PSI, _CHI))),
        RewriteRule("AO", Or(Or(_PHI, _PSI), _CHI), Or(_PHI, Or(_PSI, _CHI))),
    )
}

EQUIVALENCE_IDS = tuple(f"E{i}" for i in range(1, 11))
ASSOC_IDS = ("AA", "AO")

# Binding names that denote programs; everything else is a formula.
_PROGRAM_METAVARS = frozenset({"alpha", "beta"})


def _match(pattern, subject, bindings: dict) -> bool:
    if isinstance(pattern, FMeta):
        if not isinstance(subject, Formula):
            return False
        seen = bindings.get(pattern.name)
        if seen is None:
            bindings[pattern.name] = subject
            return True
        return seen == subject
    if isinstance(pattern, PMeta):
        if not isinstance(subject, Program):
            return False
        seen = bindings.get(pattern.name)
        if seen is None:
            bindings[pattern.name] = subject
            return True
        return seen == subject
    if isinstance(pattern, FNeg):
        if not isinstance(subject, Formula):
            return False
        candidate = negate(subject)
        seen = bindings.get(pattern.name)
        if seen is None:
            bindings[pattern.name] = candidate
            return True
        return seen == candidate
    if type(pattern) is not type(subject):
        return False
    if isinstance(pattern, (Atom, NegAtom, Var, AtomicProg)):
        return pattern.name == subject.name
    if isinstance(pattern, (Top, Bot)):
        return True
    pat_children = _children(pattern)
    sub_children = _children(subject)
    return all(_match(p, s, bindings) for p, s in zip(pat_children, sub_children))


def _instantiate(pattern, bindings: dict):
    if isinstance(pattern, (FMeta, PMeta)):
        try:
            return bindings[pattern.name]
        except KeyError:
            raise MismatchError(f"missing binding for metavariable {pattern.name!r}") from None
    if isinstance(pattern, FNeg):
        try:
            return negate(bindings[pattern.name])
        except KeyError:
            raise MismatchError(f"missing binding for metavariable {pattern.name!r}") from None
    if isinstance(pattern, (Atom, NegAtom, Var, AtomicProg, Top, Bot)):
        return pattern
    return _rebuild(pattern, tuple(_instantiate(c, bindings) for c in _children(pattern)))


def rule_metavariables(rule: RewriteRule) -> tuple[str, ...]:
    names: list[str] = []

    def walk(pattern):
        if isinstance(pattern, (FMeta, PMeta, FNeg)):
            if pattern.name not in names:
                names.append(pattern.name)
        elif not isinstance(pattern, (Atom, NegAtom, Var, AtomicProg, Top, Bot)):
            for child in _children(pattern):
                walk(child)

    walk(rule.lhs)
    walk(rule.rhs)
    return tuple(names)


def negated_metavariables(rule: RewriteRule) -> frozenset[str]:
    """Metavariables that appear under structural negation (E7's test).

    Negation fixes variables, so soundness of such an instance needs a
    variable-free binding; see DISCREPANCIES.md.
    """
    names: set[str] = set()

    def walk(pattern):
        if isinstance(pattern, FNeg):
            names.add(pattern.name)
        elif not isinstance(pattern, (FMeta, PMeta, Atom, NegAtom, Var, AtomicProg, Top, Bot)):
            for child in _children(pattern):
                walk(child)

    walk(rule.lhs)
    walk(rule.rhs)
    return frozenset(names)


# ---------------------------------------------------------------------------
# positions

def _children(node) -> tuple:
    if isinstance(node, (Or, And, Choice)):
        return (node.left, node.right)
    if isinstance(node, (Diamond, Box)):
        return (node.prog, node.body)
    if isinstance(node, Seq):
        return (node.first, node.second)
    if isinstance(node, Test):
        return (node.cond,)
    if isinstance(node, Star):
        return (node.body,)
    return ()


def _rebuild(node, children: tuple):
    cls = type(node)
    return cls(*children)


def subterm_at(term, path: tuple[int, ...]):
    node = term
    for depth, idx in enumerate(path):
        kids = _children(node)
        if not 0 <= idx < len(kids):
            raise BadPathError(f"no child {idx} at depth {depth} of {type(node).__name__}")
        node = kids[idx]
    return node


def replace_at(term, path: tuple[int, ...], new):
    if not path:
        return new
    kids = _children(term)
    idx = path[0]
    if not 0 <= idx < len(kids):
        raise BadPathError(f"no child {idx} of {type(term).__name__}")
    updated = list(kids)
    updated[idx] = replace_at(kids[idx], path[1:], new)
    return _rebuild(term, tuple(updated))


def all_paths(term, prefix: tuple[int, ...] = ()):
    yield prefix, term
    for i, child in enumerate(_children(term)):
        yield from all_paths(child, prefix + (i,))


# ---------------------------------------------------------------------------
# steps and certificates

@dataclass(frozen=True)
class RewriteStep:
    rule: str
    direction: str  # "LR" | "RL"
    path: tuple[int, ...]
    bindings: dict
    group: int = 0

    def __post_init__(self) -> None:
        if self.rule not in RULES:
            raise ValueError(f"unknown rule id {self.rule!r}")
        if self.direction not in ("LR", "RL"):
            raise ValueError(f"direction must be LR or RL: {self.direction!r}")


@dataclass(frozen=True)
class Certificate:
    source: Formula
    target: Formula
    steps: tuple[RewriteStep, ...]


def _directed(rule: RewriteRule, direction: str):
    return (rule.lhs, rule.rhs) if direction == "LR" else (rule.rhs, rule.lhs)


def match_rule(phi: Formula, rule_id: str, direction: str, path: tuple[int, ...]) -> dict | None:
    """Most general match of the directed pattern at ``path``, or None."""
    src, _ = _directed(RULES[rule_id], direction)
    subject = subterm_at(phi, path)
    bindings: dict = {}
    if _match(src, subject, bindings):
        return bindings
    return None


def apply_rule(phi: Formula, step: RewriteStep) -> Formula:
    """Replay one step under its stored bindings; exact or an error."""
    src, dst = _directed(RULES[step.rule], step.direction)
    subject = subterm_at(phi, step.path)
    expected = _instantiate(src, step.bindings)
    if expected != subject:
        raise MismatchError(
            f"{step.rule} {step.direction} does not apply at {list(step.path)}: "
            f"bound pattern differs from the subterm"
        )
    return replace_at(phi, step.path, _instantiate(dst, step.bindings))


def rewrite_at(phi: Formula, rule_id: str, direction: str, path: tuple[int, ...], group: int = 0):
    """Match at ``path`` and apply, returning ``(result, step)``."""
    bindings = match_rule(phi, rule_id, direction, path)
    if bindings is None:
        raise MismatchError(
            f"{rule_id} {direction} does not match at {list(path)} in {print_formula(phi)}"
        )
    step = RewriteStep(rule=rule_id, direction=direction, path=path, bindings=bindings, group=group)
    return replace_at(phi, path, _instantiate(_directed(RULES[rule_id], direction)[1], bindings)), step


@dataclass(frozen=True)
class CheckReport:
    ok: bool
    steps_applied: int
    failed_step: int | None
    reason: str | None
    final: Formula | None


def check_certificate(cert: Certificate) -> CheckReport:
    """Pure replay: every step must apply exactly and the result must equal
    the target syntactically."""
    state = cert.source
    for i, step in enumerate(cert.steps):
        try:
            state = apply_rule(state, step)
        except CertifyError as exc:
            return CheckReport(ok=False, steps_applied=i, failed_step=i, reason=str(exc), final=None)
    if state != cert.target:
        return CheckReport(
            ok=False,
            steps_applied=len(cert.steps),
            failed_step=None,
            reason="replay finished but the final formula differs from the target",
            final=state,
        )
    return CheckReport(ok=True, steps_applied=len(cert.steps), failed_step=None, reason=None, final=state)


def grouped_rule_ids(cert: Certificate) -> list[list[str]]:
    """Rule ids per derivation line, first-use order, rebracketing steps
    excluded."""
    groups: dict[int, list[str]] = {}
    for step in cert.steps:
        bucket = groups.setdefault(step.group, [])
        if step.rule in ASSOC_IDS:
            continue
        if step.rule not in bucket:
            bucket.append(step.rule)
    return [groups[g] for g in sorted(groups) if groups[g]]


# ---------------------------------------------------------------------------
# certificate generation

def _nested_with_drops(d: Decomposition, drops: frozenset[int]) -> Formula:
    """Nested form with the disjunct layer omitted at dropped (padded) pairs."""
    acc: Formula = Var(d.x)
    for i in range(d.n, 0, -1):
        pair = d.pairs[i - 1]
        acc = And(pair.psi, acc)
        if i not in drops:
            acc = Or(pair.phi, acc)
        if pair.alpha is not None:
            acc = Box(pair.alpha, acc)
    return acc


class _PiScript:
    """Scripted derivation from a Pi solution to the instantiated equation,
    following the star-unfold / decompose / factor loop of the solution
    proof, one group per derivation line."""

    def __init__(self, sol: Solution, drops: frozenset[int]):
        self.d = sol.decomposition
        self.state = sol.formula
        self.steps: list[RewriteStep] = []
        self.drops = drops
        self.base: tuple[int, ...] = ()
        self.finalize_paths: dict[int, tuple[int, ...]] = {}

    def do(self, rule_id: str, direction: str, path: tuple[int, ...], group: int) -> None:
        self.state, step = rewrite_at(self.state, rule_id, direction, path, group)
        self.steps.append(step)

    def _shift_after_drop(self, dropped: tuple[int, ...]) -> None:
        # E5 removed the box at `dropped`; its body moved up one level.
        def strip(path: tuple[int, ...]) -> tuple[int, ...]:
            if path[: len(dropped)] == dropped and len(path) > len(dropped):
                return dropped + path[len(dropped) + 1:]
            return path

        self.base = strip(self.base)
        self.finalize_paths = {m: strip(p) for m, p in self.finalize_paths.items()}

    def element_path(self, index: int, count: int) -> tuple[int, ...]:
        if index < count - 1:
            return self.base + (1,) * index + (0,)
        return self.base + (1,) * (count - 1)

    def splits(self, m: int, group: int) -> None:
        d = self.d
        double = d.pairs[m - 1].alpha is not None
        head_len = 2 if double else 1
        count = d.n - m + 2
        for index in range(count):
            path = self.element_path(index, count)
            peeled = 0
            while peeled < head_len:
                box = subterm_at(self.state, path)
                if not (isinstance(box, Box) and isinstance(box.prog, Seq)):
                    break
                self.do("E1", "RL", path, group)
                path = path + (1,)
                peeled += 1

    def folds(self, m: int, group: int) -> None:
        d = self.d
        double = d.pairs[m - 1].alpha is not None
        count = d.n - m + 2
        for index in range(count - 2, -1, -1):
            path = self.base + (1,) * index
            self.do("E3", "RL", path, group)
            if double:
                self.do("E3", "RL", path + (1,), group)
        body = self.base + ((1, 1) if double else (1,))
        self.finalize_paths[m] = self.base + (1,) if double else self.base
        self.base = body + (1,)

    def finalize(self, m: int, group: int) -> None:
        path = self.finalize_paths.pop(m)
        if m in self.drops:
            box = subterm_at(self.state, path)
            if not (isinstance(box, Box) and box.prog == Test(Top())):
                raise GenerationError(f"pad drop at level {m} expected a true? box")
            self.do("E5", "LR", path, group)
            self._shift_after_drop(path)
        else:
            self.do("E7", "RL", path, group)

    def run(self) -> tuple[Formula, list[RewriteStep]]:
        n = self.d.n
        self.do("E4", "LR", (), group=1)
        path = self.base
        while True:
            node = subterm_at(self.state, path)
            if isinstance(node, And) and isinstance(node.left, And):
                self.do("AA", "LR", path, group=2)
                path = path + (1,)
            else:
                break
        self.splits(1, group=2)
        self.folds(1, group=2)
        group = 3
        for m in range(2, n + 1):
            self.splits(m, group)
            self.finalize(m - 1, group)
            group += 1
            self.folds(m, group)
            group += 1
        self.finalize(n, group)
        return self.state, self.steps


_DUAL_RULE = {"E1": "E6", "E2": "E7", "E3": "E8", "E4": "E9", "E5": "E10", "E7": "E2", "AA": "AO"}


def _dual_step(step: RewriteStep) -> RewriteStep:
    try:
        rule_id = _DUAL_RULE[step.rule]
    except KeyError:
        raise GenerationError(f"step {step.rule} has no dual counterpart") from None
    bindings = {
        name: value if name in _PROGRAM_METAVARS else negate(value)
        for name, value in step.bindings.items()
    }
    return RewriteStep(rule=rule_id, direction=step.direction, path=step.path,
                       bindings=bindings, group=step.group)


def generate_certificate(
    sol: Solution,
    padding: tuple[PaddingRecord, ...] = (),
    search_cap: int = 200,
) -> Certificate:
    """Certificate from ``sol.formula`` to the instantiated equation.

    Pairs whose disjunct was introduced by classification padding are
    eliminated with E5 (E10 on the diamond side), so for ordinary classified
    input the target is exactly ``phi(lambda)``.  A padded-in ``true``
    conjunct has no removal rule, so such layers stay in the target (see
    DISCREPANCIES.md).  Sigma solutions (duality strategy only) are certified
    by dualizing the underlying box-side certificate rule for rule.
    """
    if sol.schema == "xfree":
        return Certificate(source=sol.formula, target=sol.formula, steps=())
    d = sol.decomposition
    if d is None:
        raise GenerationError("solution carries no decomposition")
    drops = frozenset(pad.index for pad in padding if pad.phi_padded)
    if d.kind == "Sigma":
        if sol.strategy != "duality":
            raise GenerationError("only duality-strategy Sigma solutions are certifiable")
        mu = solve_pi(_dc_replace(d, kind="Pi"))
        pi_cert = _generate_pi(mu, drops=drops, search_cap=search_cap)
        cert = Certificate(
            source=negate(pi_cert.source),
            target=negate(pi_cert.target),
            steps=tuple(_dual_step(s) for s in pi_cert.steps),
        )
    else:
        cert = _generate_pi(sol, drops=drops, search_cap=search_cap)
    report = check_certificate(cert)
    if not report.ok:
        raise GenerationError(f"generated certificate failed replay: {report.reason}")
    return cert


def _generate_pi(sol: Solution, drops: frozenset[int], search_cap: int) -> Certificate:
    d = sol.decomposition
    target = substitute(_nested_with_drops(d, drops), d.x, sol.formula)
    try:
        final, steps = _PiScript(sol, drops).run()
        if final != target:
            raise GenerationError(
                "scripted derivation ended at "
                f"{print_formula(final)} instead of {print_formula(target)}"
            )
    except CertifyError:
        steps = _search(sol.formula, target, search_cap)
    return Certificate(source=sol.formula, target=target, steps=tuple(steps))


def _search(source: Formula, target: Formula, cap: int) -> list[RewriteStep]:
    """Bounded breadth-first fallback over all rule applications.

    A defect net only: the scripted route covers the whole class, so hitting
    the cap signals a bug rather than a hard instance.
    """
    from collections import deque

    seen = {source}
    queue = deque([(source, [])])
    expanded = 0
    while queue and expanded < cap:
        state, trail = queue.popleft()
        expanded += 1
        for path, _node in all_paths(state):
            for rule_id in RULES:
                for direction in ("LR", "RL"):
                    bindings = match_rule(state, rule_id, direction, path)
                    if bindings is None:
                        continue
                    nxt, step = rewrite_at(state, rule_id, direction, path, group=len(trail) + 1)
                    if nxt in seen:
                        continue
                    if nxt == target:
                        return trail + [step]
                    seen.add(nxt)
                    queue.append((nxt, trail + [step]))
    raise GenerationError(f"no derivation found within the search cap of {cap} states")


# ---------------------------------------------------------------------------
# rule validation

@dataclass(frozen=True)
class RuleValidationEntry:
    rule: str
    trials: int
    counterexamples: int
    first_failure: dict | None


def validate_rules(
    trials: int = 50,
    models_per_trial: int = 10,
    seed: int = 0,
    rules: dict[str, RewriteRule] | None = None,
    model_params=None,
) -> dict[str, RuleValidationEntry]:
    """Check every rule semantically: random metavariable instantiations,
    random models, agreement demanded at every world."""
    import random as _random

    from .generators import TermGen
    from .semantics import ModelGenParams, equivalent_on, model_to_json, random_model

    rules = RULES if rules is None else rules
    params = model_params or ModelGenParams()
    report = {}
    for rule_id, rule in rules.items():
        rng = _random.Random(f"{seed}:{rule_id}")
        gen = TermGen(rng)
        nvgen = TermGen(rng, variables=())
        negated = negated_metavariables(rule)
        failures = 0
        first = None
        for trial in range(trials):
            bindings = {}
            for name in rule_metavariables(rule):
                if name in _PROGRAM_METAVARS:
                    bindings[name] = gen.program(depth=2)
                elif name in negated:
                    bindings[name] = nvgen.formula(depth=2)
                else:
                    bindings[name] = gen.formula(depth=2)
            lhs = _instantiate(rule.lhs, bindings)
            rhs = _instantiate(rule.rhs, bindings)
            for k in range(models_per_trial):
                model = random_model(_dc_replace(
                    params,
                    world_count=rng.randint(1, params.world_count),
                    seed=rng.getrandbits(48),
                ))
                world = equivalent_on(model, lhs, rhs)
                if world is not None:
                    failures += 1
                    if first is None:
                        first = {
                            "rule": rule_id,
                            "lhs": print_formula(lhs),
                            "rhs": print_formula(rhs),
                            "world": world,
                            "model": model_to_json(model),
                        }
        report[rule_id] = RuleValidationEntry(
            rule=rule_id, trials=trials * models_per_trial, counterexamples=failures, first_failure=first
        )
    return report


# ---------------------------------------------------------------------------
# serialization

def _binding_to_text(value) -> str:
    return print_program(value) if isinstance(value, Program) else print_formula(value)


def certificate_to_json(cert: Certificate) -> dict:
    return {
        "from": print_formula(cert.source),
        "to": print_formula(cert.target),
        "steps": [
            {
                "rule": step.rule,
                "direction": step.direction,
                "path": list(step.path),
                "bindings": {k: _binding_to_text(v) for k, v in sorted(step.bindings.items())},
                "group": step.group,
            }
            for step in cert.steps
        ],
    }


def certificate_from_json(doc: dict) -> Certificate:
    try:
        steps = tuple(
            RewriteStep(
                rule=item["rule"],
                direction=item["direction"],
                path=tuple(int(i) for i in item["path"]),
                bindings={
                    name: parse_program(text) if name in _PROGRAM_METAVARS else parse_formula(text)
                    for name, text in item.get("bindings", {}).items()
                },
                group=int(item.get("group", 0)),
            )
            for item in doc["steps"]
        )
        return Certificate(
            source=parse_formula(doc["from"]),
            target=parse_formula(doc["to"]),
            steps=steps,
        )
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, CertifyError):
            raise
        raise ValueError(f"malformed certificate document: {exc}") from exc

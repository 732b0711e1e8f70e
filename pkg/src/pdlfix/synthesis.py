"""Explicit solutions for classified fixed-point equations.

For a box-hierarchy (Pi) decomposition with pairs ``(phi_i, psi_i, alpha_i)``
the solution is::

    [ (tested chain 1..n)* ]  AND_j [ tested chain 1..j ] psi_j

where the tested chain interleaves ``alpha_k ; (~phi_k)?`` and drops
``alpha_1`` at even levels.  Sigma equations are solved by duality: negate,
solve the Pi equation, negate the result.  The literal diamond schemas are
kept behind ``strategy="literal"`` for comparison runs only — they are
refuted by the one-world probe documented in DISCREPANCIES.md.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

from .hierarchy import (
    ClassifyResult,
    Decomposition,
    XFree,
    classify,
    decomposition_to_json,
    diagnose,
)
from .syntax import (
    And,
    Box,
    Diamond,
    Formula,
    Or,
    Program,
    Seq,
    Star,
    Test,
    Top,
    is_x_free,
    negate,
)
from .textio import print_formula

__all__ = ["Solution", "NotInClass", "odot", "tested_chain", "solve_pi", "solve_sigma", "solve"]


class NotInClass(ValueError):
    """The formula is outside both hierarchies (and not x-free)."""


@dataclass(frozen=True)
class Solution:
    formula: Formula
    schema: str  # "lambda1" | "lambda2" | "lambda3" | "lambda4" | "xfree"
    strategy: str  # "duality" | "literal" | "none"
    decomposition: Decomposition | None

    def to_json(self) -> dict:
        doc = {
            "schema": self.schema,
            "strategy": self.strategy,
            "lambda": print_formula(self.formula),
        }
        if self.decomposition is not None:
            doc["decomposition"] = decomposition_to_json(
                ClassifyResult(self.decomposition, padding=())
            )
        return doc


def odot(chain: list[Program]) -> Program:
    """Right-associated sequential composition; the empty chain is ``true?``."""
    if not chain:
        return Test(Top())
    acc = chain[-1]
    for prog in reversed(chain[:-1]):
        acc = Seq(prog, acc)
    return acc


def tested_chain(d: Decomposition, start: int, stop: int) -> Program:
    """``alpha_start ; (~phi_start)? ; ... ; alpha_stop ; (~phi_stop)?`` with
    absent alphas omitted (1-based, inclusive bounds)."""
    if not 1 <= start <= stop <= d.n:
        raise IndexError(f"chain bounds out of range: {start}..{stop} for n={d.n}")
    parts: list[Program] = []
    for k in range(start, stop + 1):
        pair = d.pairs[k - 1]
        if pair.alpha is not None:
            parts.append(pair.alpha)
        parts.append(Test(negate(pair.phi)))
    return odot(parts)


tested_chain.__test__ = False  # keep pytest from collecting it by name


def _big_and(terms: list[Formula]) -> Formula:
    acc = terms[-1]
    for term in reversed(terms[:-1]):
        acc = And(term, acc)
    return acc


def _big_or(terms: list[Formula]) -> Formula:
    acc = terms[-1]
    for term in reversed(terms[:-1]):
        acc = Or(term, acc)
    return acc


def solve_pi(d: Decomposition) -> Solution:
    if d.kind != "Pi":
        raise ValueError(f"solve_pi needs a Pi decomposition, got {d.kind}")
    conjuncts = [Box(tested_chain(d, 1, j), d.pairs[j - 1].psi) for j in range(1, d.n + 1)]
    lam = Box(Star(tested_chain(d, 1, d.n)), _big_and(conjuncts))
    schema = "lambda2" if d.leading_modality else "lambda1"
    return Solution(formula=lam, schema=schema, strategy="literal", decomposition=d)


def _literal_sigma(d: Decomposition) -> Formula:
    # The diamond schemas exactly as conventionally written, over the Sigma
    # form's own components (the negations of the stored Pi components):
    # tests carry ~phi of the written form, disjuncts are the written psi_j.
    written = replace(
        d,
        kind="Pi",
        pairs=tuple(replace(p, phi=negate(p.phi), psi=negate(p.psi)) for p in d.pairs),
    )
    disjuncts = [
        Diamond(tested_chain(written, 1, j), written.pairs[j - 1].psi)
        for j in range(1, written.n + 1)
    ]
    return Diamond(Star(tested_chain(written, 1, written.n)), _big_or(disjuncts))


def solve_sigma(d: Decomposition, strategy: str = "duality") -> Solution:
    if d.kind != "Sigma":
        raise ValueError(f"solve_sigma needs a Sigma decomposition, got {d.kind}")
    schema = "lambda4" if d.leading_modality else "lambda3"
    if strategy == "duality":
        mu = solve_pi(replace(d, kind="Pi"))
        return Solution(formula=negate(mu.formula), schema=schema, strategy="duality", decomposition=d)
    if strategy == "literal":
        return Solution(formula=_literal_sigma(d), schema=schema, strategy="literal", decomposition=d)
    raise ValueError(f"unknown strategy: {strategy!r}")


def solve(phi_x: Formula, x: str, strategy: str = "duality") -> Solution:
    """Classify and synthesize; raises NotInClass outside the solvable class."""
    outcome = classify(phi_x, x)
    if isinstance(outcome, XFree):
        return Solution(formula=phi_x, schema="xfree", strategy="none", decomposition=None)
    if outcome is None:
        raise NotInClass(
            f"{print_formula(phi_x)} is not in either hierarchy for {x} — "
            + diagnose(phi_x, x)
        )
    d = outcome.decomposition
    solution = solve_pi(d) if d.kind == "Pi" else solve_sigma(d, strategy)
    if not is_x_free(solution.formula, x):
        raise AssertionError("synthesized solution contains the unknown")
    return solution

"""Classification of formulas into the Pi/Sigma shape hierarchies.

A level-2(n-1) Pi formula is ``phi1 | (psi1 & [a2](phi2 | (psi2 & ... x)))``
with n component pairs and no leading box; level 2n-1 adds a leading box.
Sigma formulas are the structural negations.  Classification is exact-shape
matching, made total on the intended class by two conventions:

* padding — a missing disjunct reads as ``false``, a missing conjunct as
  ``true`` (a bare ``X`` pads both); each padded slot is recorded so the
  original formula can be rebuilt exactly;
* commutation — ``(psi & x) | phi`` and ``x & psi`` orderings are accepted
  and flagged, unless strict mode is on.

Sigma results store the Pi components of the *negated* formula; this makes
the duality solving strategy a plain negation and sidesteps the polarity
trap in the literal diamond schemas (see DISCREPANCIES.md).
"""

from __future__ import annotations

from dataclasses import dataclass, replace

from .syntax import (
    And,
    Bot,
    Box,
    Diamond,
    Formula,
    Or,
    Program,
    Seq,
    Test,
    Top,
    Var,
    is_x_free,
    negate,
    program_variables,
    variables,
)
from .textio import parse_formula, parse_program, print_formula, print_program

__all__ = [
    "Pair",
    "PaddingRecord",
    "Decomposition",
    "ClassifyResult",
    "XFree",
    "classify_pi",
    "classify_sigma",
    "classify",
    "to_nested_form",
    "to_chain_form",
    "reconstruct",
    "decomposition_to_json",
    "decomposition_from_json",
]


@dataclass(frozen=True)
class Pair:
    """One hierarchy layer: ``phi | (psi & ...)`` guarded by ``alpha`` (absent
    only at the first pair of an even-level formula)."""

    phi: Formula
    psi: Formula
    alpha: Program | None


@dataclass(frozen=True)
class PaddingRecord:
    """How pair ``index`` (1-based) deviated from the fully written shape."""

    index: int
    phi_padded: bool = False
    psi_padded: bool = False
    or_commuted: bool = False
    and_commuted: bool = False

    def trivial(self) -> bool:
        return not (self.phi_padded or self.psi_padded or self.or_commuted or self.and_commuted)


@dataclass(frozen=True)
class Decomposition:
    kind: str  # "Pi" | "Sigma"
    x: str
    pairs: tuple[Pair, ...]
    leading_modality: bool

    def __post_init__(self) -> None:
        if self.kind not in ("Pi", "Sigma"):
            raise ValueError(f"kind must be Pi or Sigma: {self.kind!r}")
        if not self.pairs:
            raise ValueError("a decomposition needs at least one pair")
        if (self.pairs[0].alpha is not None) != self.leading_modality:
            raise ValueError("alpha_1 present iff leadingModality")
        for i, pair in enumerate(self.pairs[1:], start=2):
            if pair.alpha is None:
                raise ValueError(f"alpha_{i} must be present")
        for i, pair in enumerate(self.pairs, start=1):
            if not is_x_free(pair.phi, self.x) or not is_x_free(pair.psi, self.x):
                raise ValueError(f"components of pair {i} must be {self.x}-free")
            if pair.alpha is not None and self.x in program_variables(pair.alpha):
                raise ValueError(f"alpha_{i} must not contain {self.x}")

    @property
    def n(self) -> int:
        return len(self.pairs)

    @property
    def level(self) -> int:
        return 2 * self.n - 1 if self.leading_modality else 2 * (self.n - 1)


@dataclass(frozen=True)
class ClassifyResult:
    decomposition: Decomposition
    padding: tuple[PaddingRecord, ...]


@dataclass(frozen=True)
class XFree:
    """Marker for the trivial case: the equation unknown does not occur."""

    formula: Formula
    x: str


class _NoMatch(Exception):
    """Carries a human-readable reason for the failed layer match."""


def _split_on_x(left: Formula, right: Formula, x: str, index: int):
    """Return (x-free side, x side, commuted) — commuted when x is on the left."""
    left_has = x in variables(left)
    right_has = x in variables(right)
    if left_has and right_has:
        raise _NoMatch(f"both operands of layer {index} contain {x}")
    if not (left_has or right_has):
        raise _NoMatch(f"neither operand of layer {index} contains {x}")
    if right_has:
        return left, right, False
    return right, left, True


def _match_chain(xi: Formula, x: str, strict: bool, index: int, pairs, pads, alpha: Program | None):
    """Match one ``phi | (psi & core)`` layer and recurse through the core."""
    phi: Formula | None = None
    psi: Formula | None = None
    or_comm = and_comm = False

    if isinstance(xi, Or):
        phi, inner, or_comm = _split_on_x(xi.left, xi.right, x, index)
    else:
        inner = xi
    if isinstance(inner, And):
        psi, core, and_comm = _split_on_x(inner.left, inner.right, x, index)
    else:
        core = inner
    if strict and (or_comm or and_comm):
        raise _NoMatch(f"layer {index} is commuted and strict mode is on")

    pairs.append(Pair(phi if phi is not None else Bot(), psi if psi is not None else Top(), alpha))
    pads.append(
        PaddingRecord(
            index=index,
            phi_padded=phi is None,
            psi_padded=psi is None,
            or_commuted=or_comm,
            and_commuted=and_comm,
        )
    )

    if isinstance(core, Var) and core.name == x:
        return
    if isinstance(core, Box):
        if x in program_variables(core.prog):
            raise _NoMatch(f"{x} occurs inside the program guarding layer {index + 1}")
        _match_chain(core.body, x, strict, index + 1, pairs, pads, core.prog)
        return
    raise _NoMatch(
        f"layer {index} must bottom out at {x} or a box, found {print_formula(core)}"
    )


def classify_pi(phi: Formula, x: str, strict: bool = False) -> ClassifyResult | None:
    """Exact-shape membership in the box hierarchy, or None.

    A top-level box is always read as the leading modality (odd level);
    anything else enters at an even level.
    """
    if x not in variables(phi):
        return None
    pairs: list[Pair] = []
    pads: list[PaddingRecord] = []
    try:
        if isinstance(phi, Box):
            if x in program_variables(phi.prog):
                return None
            _match_chain(phi.body, x, strict, 1, pairs, pads, phi.prog)
            leading = True
        else:
            _match_chain(phi, x, strict, 1, pairs, pads, None)
            leading = False
    except _NoMatch:
        return None
    decomposition = Decomposition(kind="Pi", x=x, pairs=tuple(pairs), leading_modality=leading)
    return ClassifyResult(decomposition=decomposition, padding=tuple(pads))


def classify_sigma(phi: Formula, x: str, strict: bool = False) -> ClassifyResult | None:
    """Dual hierarchy: succeeds iff ``negate(phi)`` is Pi; stores Pi components
    of the negation, retagged Sigma."""
    result = classify_pi(negate(phi), x, strict)
    if result is None:
        return None
    return ClassifyResult(
        decomposition=replace(result.decomposition, kind="Sigma"),
        padding=result.padding,
    )


def classify(phi: Formula, x: str, strict: bool = False) -> ClassifyResult | XFree | None:
    """Pi first, then Sigma; x-free input gets the trivial tag."""
    if is_x_free(phi, x):
        return XFree(formula=phi, x=x)
    result = classify_pi(phi, x, strict)
    if result is not None:
        return result
    return classify_sigma(phi, x, strict)


def diagnose(phi: Formula, x: str, strict: bool = False) -> str:
    """Why classification failed, one reason per hierarchy side."""

    def attempt(formula: Formula) -> str | None:
        pairs: list[Pair] = []
        pads: list[PaddingRecord] = []
        try:
            if isinstance(formula, Box):
                if x in program_variables(formula.prog):
                    return f"{x} occurs inside the leading program"
                _match_chain(formula.body, x, strict, 1, pairs, pads, formula.prog)
            else:
                _match_chain(formula, x, strict, 1, pairs, pads, None)
        except _NoMatch as exc:
            return str(exc)
        return None

    pi_reason = attempt(phi)
    if pi_reason is None:
        return "the formula classifies as Pi"
    sigma_reason = attempt(negate(phi))
    if sigma_reason is None:
        return "the formula classifies as Sigma"
    return f"as Pi: {pi_reason}; as Sigma (after negating): {sigma_reason}"


def _pi_decomposition(d: Decomposition) -> Decomposition:
    return d if d.kind == "Pi" else replace(d, kind="Pi")


def to_nested_form(d: Decomposition) -> Formula:
    """The fully written shape with every slot present (padding as constants)."""
    acc: Formula = Var(d.x)
    for pair in reversed(_pi_decomposition(d).pairs):
        acc = Or(pair.phi, And(pair.psi, acc))
        if pair.alpha is not None:
            acc = Box(pair.alpha, acc)
    if d.kind == "Sigma":
        acc = negate(acc)
    return acc


def to_chain_form(d: Decomposition) -> Formula:
    """The equivalent modal chain ``[a1;(~phi1)?]<psi1?>...X`` (dual for Sigma)."""
    acc: Formula = Var(d.x)
    for pair in reversed(_pi_decomposition(d).pairs):
        guard: Program = Test(negate(pair.phi))
        if pair.alpha is not None:
            guard = Seq(pair.alpha, guard)
        acc = Box(guard, Diamond(Test(pair.psi), acc))
    if d.kind == "Sigma":
        acc = negate(acc)
    return acc


def reconstruct(result: ClassifyResult) -> Formula:
    """Rebuild the exact classified input by replaying the padding records."""
    d = result.decomposition
    acc: Formula = Var(d.x)
    for pair, pad in zip(reversed(d.pairs), reversed(result.padding)):
        if not pad.psi_padded:
            acc = And(acc, pair.psi) if pad.and_commuted else And(pair.psi, acc)
        if not pad.phi_padded:
            acc = Or(acc, pair.phi) if pad.or_commuted else Or(pair.phi, acc)
        if pair.alpha is not None:
            acc = Box(pair.alpha, acc)
    if d.kind == "Sigma":
        acc = negate(acc)
    return acc


def decomposition_to_json(result: ClassifyResult) -> dict:
    d = result.decomposition
    return {
        "kind": d.kind,
        "x": d.x,
        "leadingModality": d.leading_modality,
        "level": d.level,
        "pairs": [
            {
                "phi": print_formula(pair.phi),
                "psi": print_formula(pair.psi),
                "alpha": None if pair.alpha is None else print_program(pair.alpha),
            }
            for pair in d.pairs
        ],
        "padding": [
            {
                "index": pad.index,
                "phiPadded": pad.phi_padded,
                "psiPadded": pad.psi_padded,
                "orCommuted": pad.or_commuted,
                "andCommuted": pad.and_commuted,
            }
            for pad in result.padding
            if not pad.trivial()
        ],
    }


def decomposition_from_json(doc: dict) -> ClassifyResult:
    pairs = tuple(
        Pair(
            phi=parse_formula(item["phi"]),
            psi=parse_formula(item["psi"]),
            alpha=None if item.get("alpha") is None else parse_program(item["alpha"]),
        )
        for item in doc["pairs"]
    )
    d = Decomposition(
        kind=doc["kind"],
        x=doc["x"],
        pairs=pairs,
        leading_modality=doc["leadingModality"],
    )
    by_index = {
        pad["index"]: PaddingRecord(
            index=pad["index"],
            phi_padded=pad.get("phiPadded", False),
            psi_padded=pad.get("psiPadded", False),
            or_commuted=pad.get("orCommuted", False),
            and_commuted=pad.get("andCommuted", False),
        )
        for pad in doc.get("padding", [])
    }
    pads = tuple(by_index.get(i, PaddingRecord(index=i)) for i in range(1, len(pairs) + 1))
    return ClassifyResult(decomposition=d, padding=pads)

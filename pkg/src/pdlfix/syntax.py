"""Formula and program ASTs in negation normal form, plus the basic term operations.

Formulas and programs are mutually recursive immutable trees.  Negation exists
only on atoms; ``negate`` pushes it structurally and leaves variables fixed,
which is what makes the dual (Sigma) hierarchy and the duality solving
strategy work.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

__all__ = [
    "Formula",
    "Atom",
    "NegAtom",
    "Var",
    "Top",
    "Bot",
    "Or",
    "And",
    "Diamond",
    "Box",
    "Program",
    "AtomicProg",
    "Test",
    "Seq",
    "Choice",
    "Star",
    "negate",
    "substitute",
    "substitute_program",
    "variables",
    "program_variables",
    "is_x_free",
    "equal_modulo_assoc",
    "implies",
    "iff",
]

_LOWER_NAME = re.compile(r"[a-z][A-Za-z0-9_]*\Z")
_UPPER_NAME = re.compile(r"[A-Z][A-Za-z0-9_]*\Z")

# Lowercase identifiers that the concrete syntax claims for itself.
RESERVED_NAMES = frozenset({"true", "false", "u"})


class Formula:
    """Base class for formula nodes."""

    __slots__ = ()


class Program:
    """Base class for program nodes."""

    __slots__ = ()


def _check_lower(name: str, what: str) -> None:
    if not _LOWER_NAME.match(name) or name in RESERVED_NAMES:
        raise ValueError(f"{what} name must be a lowercase identifier (not a keyword): {name!r}")


@dataclass(frozen=True)
class Atom(Formula):
    name: str

    def __post_init__(self) -> None:
        _check_lower(self.name, "atom")


@dataclass(frozen=True)
class NegAtom(Formula):
    name: str

    def __post_init__(self) -> None:
        _check_lower(self.name, "atom")


@dataclass(frozen=True)
class Var(Formula):
    name: str

    def __post_init__(self) -> None:
        if not _UPPER_NAME.match(self.name):
            raise ValueError(f"variable name must be an uppercase identifier: {self.name!r}")


@dataclass(frozen=True)
class Top(Formula):
    pass


@dataclass(frozen=True)
class Bot(Formula):
    pass


@dataclass(frozen=True)
class Or(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class And(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Diamond(Formula):
    prog: Program
    body: Formula


@dataclass(frozen=True)
class Box(Formula):
    prog: Program
    body: Formula


@dataclass(frozen=True)
class AtomicProg(Program):
    name: str

    def __post_init__(self) -> None:
        _check_lower(self.name, "atomic program")


@dataclass(frozen=True)
class Test(Program):
    cond: Formula


Test.__test__ = False  # not a test case, despite the name


@dataclass(frozen=True)
class Seq(Program):
    first: Program
    second: Program


@dataclass(frozen=True)
class Choice(Program):
    left: Program
    right: Program


@dataclass(frozen=True)
class Star(Program):
    body: Program


def negate(phi: Formula) -> Formula:
    """Structural negation: atoms flip, variables stay fixed, duals swap.

    Programs (including test conditions) are untouched.  ``negate`` is an
    involution.
    """
    if isinstance(phi, Atom):
        return NegAtom(phi.name)
    if isinstance(phi, NegAtom):
        return Atom(phi.name)
    if isinstance(phi, Var):
        return phi
    if isinstance(phi, Top):
        return Bot()
    if isinstance(phi, Bot):
        return Top()
    if isinstance(phi, Or):
        return And(negate(phi.left), negate(phi.right))
    if isinstance(phi, And):
        return Or(negate(phi.left), negate(phi.right))
    if isinstance(phi, Diamond):
        return Box(phi.prog, negate(phi.body))
    if isinstance(phi, Box):
        return Diamond(phi.prog, negate(phi.body))
    raise TypeError(f"not a formula: {phi!r}")


def substitute(phi: Formula, x: str, psi: Formula) -> Formula:
    """Replace every occurrence of ``Var(x)`` in ``phi`` by ``psi``.

    Occurrences inside test programs are replaced as well.
    """
    if isinstance(phi, Var):
        return psi if phi.name == x else phi
    if isinstance(phi, (Atom, NegAtom, Top, Bot)):
        return phi
    if isinstance(phi, Or):
        return Or(substitute(phi.left, x, psi), substitute(phi.right, x, psi))
    if isinstance(phi, And):
        return And(substitute(phi.left, x, psi), substitute(phi.right, x, psi))
    if isinstance(phi, Diamond):
        return Diamond(substitute_program(phi.prog, x, psi), substitute(phi.body, x, psi))
    if isinstance(phi, Box):
        return Box(substitute_program(phi.prog, x, psi), substitute(phi.body, x, psi))
    raise TypeError(f"not a formula: {phi!r}")


def substitute_program(alpha: Program, x: str, psi: Formula) -> Program:
    if isinstance(alpha, AtomicProg):
        return alpha
    if isinstance(alpha, Test):
        return Test(substitute(alpha.cond, x, psi))
    if isinstance(alpha, Seq):
        return Seq(substitute_program(alpha.first, x, psi), substitute_program(alpha.second, x, psi))
    if isinstance(alpha, Choice):
        return Choice(substitute_program(alpha.left, x, psi), substitute_program(alpha.right, x, psi))
    if isinstance(alpha, Star):
        return Star(substitute_program(alpha.body, x, psi))
    raise TypeError(f"not a program: {alpha!r}")


def variables(phi: Formula) -> frozenset[str]:
    """All variable names occurring in ``phi``, including under tests."""
    if isinstance(phi, Var):
        return frozenset({phi.name})
    if isinstance(phi, (Atom, NegAtom, Top, Bot)):
        return frozenset()
    if isinstance(phi, (Or, And)):
        return variables(phi.left) | variables(phi.right)
    if isinstance(phi, (Diamond, Box)):
        return program_variables(phi.prog) | variables(phi.body)
    raise TypeError(f"not a formula: {phi!r}")


def program_variables(alpha: Program) -> frozenset[str]:
    if isinstance(alpha, AtomicProg):
        return frozenset()
    if isinstance(alpha, Test):
        return variables(alpha.cond)
    if isinstance(alpha, Seq):
        return program_variables(alpha.first) | program_variables(alpha.second)
    if isinstance(alpha, Choice):
        return program_variables(alpha.left) | program_variables(alpha.right)
    if isinstance(alpha, Star):
        return program_variables(alpha.body)
    raise TypeError(f"not a program: {alpha!r}")


def is_x_free(phi: Formula, x: str) -> bool:
    return x not in variables(phi)


def _flatten(node, cls):
    if isinstance(node, cls):
        yield from _flatten(node.left if hasattr(node, "left") else node.first, cls)
        yield from _flatten(node.right if hasattr(node, "right") else node.second, cls)
    else:
        yield node


def _assoc_key(node):
    """Canonical shape with maximal chains of the associative operators flattened.

    Order is preserved; commutativity is deliberately not included.
    """
    if isinstance(node, (And, Or)):
        return (type(node).__name__, tuple(_assoc_key(c) for c in _flatten(node, type(node))))
    if isinstance(node, (Seq, Choice)):
        return (type(node).__name__, tuple(_assoc_key(c) for c in _flatten(node, type(node))))
    if isinstance(node, (Diamond, Box)):
        return (type(node).__name__, _assoc_key(node.prog), _assoc_key(node.body))
    if isinstance(node, Test):
        return ("Test", _assoc_key(node.cond))
    if isinstance(node, Star):
        return ("Star", _assoc_key(node.body))
    if isinstance(node, (Atom, NegAtom, Var, AtomicProg)):
        return (type(node).__name__, node.name)
    if isinstance(node, (Top, Bot)):
        return (type(node).__name__,)
    raise TypeError(f"not a term: {node!r}")


def equal_modulo_assoc(s, t) -> bool:
    """Syntactic equality after flattening associative chains (&, |, ;, u)."""
    return _assoc_key(s) == _assoc_key(t)


def implies(phi: Formula, psi: Formula) -> Formula:
    return Or(negate(phi), psi)


def iff(phi: Formula, psi: Formula) -> Formula:
    return And(implies(phi, psi), implies(psi, phi))

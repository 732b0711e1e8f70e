"""Finite Kripke models and the satisfaction relation.

This is the brute-force oracle for everything else: formulas are evaluated
bottom-up to extension vectors (one boolean per world) and programs to
boolean adjacency matrices, with Kleene star computed as a Warshall-style
reflexive-transitive closure.  Variables are interpreted through the
valuation exactly like atoms.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass

import numpy as np

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
    is_x_free,
    substitute,
)
from .textio import print_formula

__all__ = [
    "KripkeModel",
    "ModelGenParams",
    "EquationReport",
    "relation",
    "satisfies",
    "equivalent_on",
    "check_solution_on",
    "random_model",
    "model_to_json",
    "model_from_json",
]


@dataclass(frozen=True)
class KripkeModel:
    """Worlds, one relation per atomic program, and a valuation over names.

    Names absent from ``relations`` or ``valuation`` denote the empty
    relation/extension.  World order is significant: counterexamples report
    the first world in this order.
    """

    worlds: tuple[str, ...]
    relations: dict[str, frozenset[tuple[str, str]]]
    valuation: dict[str, frozenset[str]]
    seed: int | None = None

    def __post_init__(self) -> None:
        if not self.worlds:
            raise ValueError("a model needs at least one world")
        ws = set(self.worlds)
        if len(ws) != len(self.worlds):
            raise ValueError("duplicate world identifiers")
        for name, pairs in self.relations.items():
            for u, v in pairs:
                if u not in ws or v not in ws:
                    raise ValueError(f"relation {name!r} mentions unknown world ({u!r}, {v!r})")
        for name, ext in self.valuation.items():
            for w in ext:
                if w not in ws:
                    raise ValueError(f"valuation of {name!r} mentions unknown world {w!r}")

    def index(self, world: str) -> int:
        try:
            return self.worlds.index(world)
        except ValueError:
            raise ValueError(f"unknown world identifier {world!r}") from None


class _Evaluator:
    """Bottom-up labeling evaluator with per-node memoization."""

    def __init__(self, model: KripkeModel):
        self.model = model
        self.n = len(model.worlds)
        self.widx = {w: i for i, w in enumerate(model.worlds)}
        self._ext: dict[Formula, np.ndarray] = {}
        self._rel: dict[Program, np.ndarray] = {}

    def _name_extension(self, name: str) -> np.ndarray:
        out = np.zeros(self.n, dtype=bool)
        for w in self.model.valuation.get(name, ()):
            out[self.widx[w]] = True
        return out

    def extension(self, phi: Formula) -> np.ndarray:
        cached = self._ext.get(phi)
        if cached is not None:
            return cached
        if isinstance(phi, (Atom, Var)):
            out = self._name_extension(phi.name)
        elif isinstance(phi, NegAtom):
            out = ~self._name_extension(phi.name)
        elif isinstance(phi, Top):
            out = np.ones(self.n, dtype=bool)
        elif isinstance(phi, Bot):
            out = np.zeros(self.n, dtype=bool)
        elif isinstance(phi, Or):
            out = self.extension(phi.left) | self.extension(phi.right)
        elif isinstance(phi, And):
            out = self.extension(phi.left) & self.extension(phi.right)
        elif isinstance(phi, Diamond):
            out = (self.rel(phi.prog) & self.extension(phi.body)[None, :]).any(axis=1)
        elif isinstance(phi, Box):
            out = ~((self.rel(phi.prog) & ~self.extension(phi.body)[None, :]).any(axis=1))
        else:
            raise TypeError(f"not a formula: {phi!r}")
        self._ext[phi] = out
        return out

    def rel(self, alpha: Program) -> np.ndarray:
        cached = self._rel.get(alpha)
        if cached is not None:
            return cached
        if isinstance(alpha, AtomicProg):
            out = np.zeros((self.n, self.n), dtype=bool)
            for u, v in self.model.relations.get(alpha.name, ()):
                out[self.widx[u], self.widx[v]] = True
        elif isinstance(alpha, Test):
            out = np.zeros((self.n, self.n), dtype=bool)
            np.fill_diagonal(out, self.extension(alpha.cond))
        elif isinstance(alpha, Seq):
            first = self.rel(alpha.first).astype(np.uint8)
            second = self.rel(alpha.second).astype(np.uint8)
            out = (first @ second) > 0
        elif isinstance(alpha, Choice):
            out = self.rel(alpha.left) | self.rel(alpha.right)
        elif isinstance(alpha, Star):
            out = _rt_closure(self.rel(alpha.body))
        else:
            raise TypeError(f"not a program: {alpha!r}")
        self._rel[alpha] = out
        return out


def _rt_closure(adj: np.ndarray) -> np.ndarray:
    """Reflexive-transitive closure by Warshall's algorithm."""
    closure = adj.copy()
    np.fill_diagonal(closure, True)
    for k in range(closure.shape[0]):
        closure |= closure[:, k:k + 1] & closure[k:k + 1, :]
    return closure


def relation(model: KripkeModel, alpha: Program) -> frozenset[tuple[str, str]]:
    """The compositional relation of ``alpha`` on ``model`` as world pairs."""
    mat = _Evaluator(model).rel(alpha)
    ws = model.worlds
    rows, cols = np.nonzero(mat)
    return frozenset((ws[i], ws[j]) for i, j in zip(rows, cols))


def satisfies(model: KripkeModel, world: str, phi: Formula) -> bool:
    return bool(_Evaluator(model).extension(phi)[model.index(world)])


def equivalent_on(model: KripkeModel, phi: Formula, psi: Formula) -> str | None:
    """First world (in model order) where the two formulas disagree, else None."""
    ev = _Evaluator(model)
    diff = ev.extension(phi) ^ ev.extension(psi)
    if diff.any():
        return model.worlds[int(np.argmax(diff))]
    return None


@dataclass(frozen=True)
class EquationReport:
    """Outcome of checking ``candidate`` against ``x ≡ equation`` on one model."""

    passed: bool
    x: str
    equation: Formula
    candidate: Formula
    instantiated: Formula
    counterexample_world: str | None
    model: KripkeModel

    def to_json(self) -> dict:
        return {
            "passed": self.passed,
            "x": self.x,
            "equation": print_formula(self.equation),
            "candidate": print_formula(self.candidate),
            "instantiated": print_formula(self.instantiated),
            "counterexampleWorld": self.counterexample_world,
            "model": model_to_json(self.model),
        }


def check_solution_on(model: KripkeModel, x: str, phi_x: Formula, psi: Formula) -> EquationReport:
    """Check ``psi ≡ phi_x[x := psi]`` on one model.  ``psi`` must be x-free."""
    if not is_x_free(psi, x):
        raise ValueError(f"candidate contains the unknown {x}: {print_formula(psi)}")
    instantiated = substitute(phi_x, x, psi)
    world = equivalent_on(model, psi, instantiated)
    return EquationReport(
        passed=world is None,
        x=x,
        equation=phi_x,
        candidate=psi,
        instantiated=instantiated,
        counterexample_world=world,
        model=model,
    )


@dataclass(frozen=True)
class ModelGenParams:
    world_count: int = 4
    atom_names: tuple[str, ...] = ("p", "q", "r")
    var_names: tuple[str, ...] = ("X",)
    prog_names: tuple[str, ...] = ("a", "b")
    edge_probability: float = 0.4
    atom_probability: float = 0.5
    seed: int = 0

    def __post_init__(self) -> None:
        if self.world_count < 1:
            raise ValueError("world_count must be at least 1")
        for p in (self.edge_probability, self.atom_probability):
            if not 0.0 <= p <= 1.0:
                raise ValueError(f"probability out of range: {p}")


def random_model(params: ModelGenParams) -> KripkeModel:
    """Deterministic random model: same params and seed, same model."""
    rng = random.Random(params.seed)
    worlds = tuple(f"w{i}" for i in range(params.world_count))
    relations = {}
    for prog in params.prog_names:
        pairs = frozenset(
            (u, v)
            for u in worlds
            for v in worlds
            if rng.random() < params.edge_probability
        )
        relations[prog] = pairs
    valuation = {}
    for name in tuple(params.atom_names) + tuple(params.var_names):
        valuation[name] = frozenset(w for w in worlds if rng.random() < params.atom_probability)
    return KripkeModel(worlds=worlds, relations=relations, valuation=valuation, seed=params.seed)


def model_to_json(model: KripkeModel) -> dict:
    return {
        "worlds": list(model.worlds),
        "programs": {
            name: sorted([u, v] for u, v in pairs)
            for name, pairs in sorted(model.relations.items())
        },
        "valuation": {
            name: sorted(ext) for name, ext in sorted(model.valuation.items())
        },
    }


def model_from_json(doc: dict) -> KripkeModel:
    try:
        worlds = tuple(str(w) for w in doc["worlds"])
        relations = {
            str(name): frozenset((str(u), str(v)) for u, v in pairs)
            for name, pairs in doc.get("programs", {}).items()
        }
        valuation = {
            str(name): frozenset(str(w) for w in ext)
            for name, ext in doc.get("valuation", {}).items()
        }
    except (KeyError, TypeError, ValueError) as exc:
        raise ValueError(f"malformed model document: {exc}") from exc
    return KripkeModel(worlds=worlds, relations=relations, valuation=valuation)


def load_model(path: str) -> KripkeModel:
    with open(path, encoding="utf-8") as handle:
        try:
            doc = json.load(handle)
        except json.JSONDecodeError as exc:
            raise ValueError(f"malformed model file {path}: {exc}") from exc
    return model_from_json(doc)

"""Variety membership and bounded B-saturation checks."""
from __future__ import annotations

import itertools
import json
import os
from dataclasses import dataclass
from importlib import resources
from typing import Iterable, Mapping, Sequence

from .algebra import (
    FiniteAlgebra, Valuation, adjoin_zero, closure, eval_formula, restrict, validates_formula,
)
from .formula import BOTTOM, Formula, Impl, Or, Var, is_positive, parse_formula, print_formula


@dataclass(frozen=True)
class VarietySpec:
    name: str
    axioms: tuple[Formula, ...] = ()

    @property
    def positive(self) -> bool:
        return all(is_positive(f) for f in self.axioms)

    def to_json(self) -> dict:
        return {"name": self.name, "axioms": [print_formula(f) for f in self.axioms]}

    @classmethod
    def from_json(cls, doc: Mapping) -> VarietySpec:
        return cls(str(doc["name"]), tuple(parse_formula(a) for a in doc.get("axioms", [])))

    @classmethod
    def parse(cls, name: str, *axioms: str) -> VarietySpec:
        return cls(name, tuple(parse_formula(a) for a in axioms))


BUNDLED = ("heyt.json", "kc.json", "lc.json", "bool.json")


def load_variety(ref: str | os.PathLike) -> VarietySpec:
    """Load a variety from a file path, or a bundled one by file name."""
    if os.path.exists(ref):
        with open(ref, encoding="utf-8") as fh:
            return VarietySpec.from_json(json.load(fh))
    name = os.path.basename(str(ref))
    if not name.endswith(".json"):
        name += ".json"
    if name not in BUNDLED:
        raise FileNotFoundError(f"no variety file {ref!r}")
    text = resources.files("brouwer.data").joinpath("varieties", name).read_text("utf-8")
    return VarietySpec.from_json(json.loads(text))


HEYT = VarietySpec("Heyt")
KC = VarietySpec.parse("KC", "~x | ~~x")
LC = VarietySpec.parse("Ch", "(p -> q) | (q -> p)")


def bounded_depth_axiom(n: int) -> Formula:
    """``bd_1 = p1 ∨ ¬p1``, ``bd_{k+1} = p_{k+1} ∨ (p_{k+1} → bd_k)``."""
    if n < 1:
        raise ValueError("depth must be positive")
    f = Or(Var("p1"), Impl(Var("p1"), BOTTOM))
    for k in range(2, n + 1):
        p = Var(f"p{k}")
        f = Or(p, Impl(p, f))
    return f


def heyt_n(n: int) -> VarietySpec:
    """Heyting algebras without an (n+2)-element chain subalgebra."""
    return VarietySpec(f"Heyt_{n}", (bounded_depth_axiom(n),))


BOOL = heyt_n(1)


@dataclass(frozen=True)
class Membership:
    member: bool
    axiom: Formula | None = None
    valuation: Valuation | None = None
    value: int | None = None

    def __bool__(self) -> bool:
        return self.member


def variety_membership(alg: FiniteAlgebra, spec: VarietySpec) -> Membership:
    for ax in spec.axioms:
        verdict = validates_formula(alg, ax)
        if not verdict:
            return Membership(False, ax, verdict.valuation, verdict.value)
    return Membership(True)


def members(spec: VarietySpec, algebras: Iterable[FiniteAlgebra]) -> list[FiniteAlgebra]:
    return [a for a in algebras if variety_membership(a, spec)]


@dataclass(frozen=True)
class SaturationWitness:
    """A member whose generated subreduct, read as a Heyting algebra, leaves the variety."""

    algebra: FiniteAlgebra
    generators: tuple[int, ...]
    subreduct: FiniteAlgebra
    failure: Membership

    def generator_labels(self) -> tuple[str, ...]:
        return tuple(self.algebra.labels[g] for g in self.generators)

    def payload(self) -> dict:
        f = self.failure
        return {
            "algebra": self.algebra.name,
            "generators": list(self.generator_labels()),
            "subreduct": [self.subreduct.labels[i] for i in range(self.subreduct.size)],
            "zero": self.subreduct.labels[self.subreduct.zero],
            "axiom": print_formula(f.axiom),
            "valuation": self.subreduct.label_valuation(f.valuation),
            "value": self.subreduct.labels[f.value],
        }


def generator_tuples(n: int, max_gens: int) -> Iterable[tuple[int, ...]]:
    for k in range(1, max_gens + 1):
        yield from itertools.combinations(range(n), k)


def saturation_check(spec: VarietySpec, catalog: Sequence[FiniteAlgebra],
                     max_gens: int) -> SaturationWitness | None:
    """First (algebra, generators) whose subreduct with zero adjoined is not in ``spec``.

    ``None`` means no counterexample up to this bound, not that the variety
    is B-saturated.
    """
    for alg in catalog:
        if not variety_membership(alg, spec):
            raise ValueError(f"{alg.name} is not a member of {spec.name}")
    seen: dict[tuple[int, frozenset], None] = {}
    for alg in catalog:
        for gens in generator_tuples(alg.size, max_gens):
            carrier = closure(alg, gens)
            if (id(alg), carrier) in seen:
                continue
            seen[(id(alg), carrier)] = None
            sub = adjoin_zero(restrict(alg, carrier))
            failure = variety_membership(sub, spec)
            if not failure:
                return SaturationWitness(alg, gens, sub, failure)
    return None


def verify_witness(spec: VarietySpec, w: SaturationWitness) -> bool:
    """Independent recheck: parent in ``spec``, rebuilt subreduct-with-zero not in it."""
    if not variety_membership(w.algebra, spec):
        return False
    carrier = closure(w.algebra, w.generators)
    rebuilt = adjoin_zero(restrict(w.algebra, carrier))
    if not rebuilt.same_tables(w.subreduct):
        return False
    f = w.failure
    if f.axiom not in spec.axioms or f.valuation is None:
        return False
    return eval_formula(rebuilt, f.valuation, f.axiom) != rebuilt.unit

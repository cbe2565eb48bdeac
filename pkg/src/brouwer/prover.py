"""Theoremhood in Int and in its ⊥-free fragment.

Int extended by positive axioms Γ gets a bounded search instead.

The kernel is Dyckhoff's contraction-free calculus G4ip.  Contexts are sets
(contraction is admissible) and results are memoised per sequent.  The
positive prover runs the same kernel on ⊥-free sequents, where no ⊥ rule can
fire.
"""
from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Sequence

from .algebra import FiniteAlgebra, Valuation, validates_all, validates_formula
from .birkhoff import catalog
from .formula import (
    And, Bottom, Formula, Impl, Or, Substitution, Var, conj, free_vars, is_positive,
    parse_formula, size, subformulas,
)


class Status(enum.Enum):
    PROVABLE = "Provable"
    NOT_PROVABLE = "NotProvable"
    UNKNOWN = "Unknown"

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True)
class ProofResult:
    status: Status
    countermodel: tuple[FiniteAlgebra, Valuation] | None = None
    instances: tuple[Formula, ...] = ()

    @property
    def provable(self) -> bool:
        return self.status is Status.PROVABLE

    @property
    def refuted(self) -> bool:
        return self.status is Status.NOT_PROVABLE

    def payload(self) -> dict:
        out: dict = {"status": self.status.value}
        if self.countermodel is not None:
            alg, v = self.countermodel
            out["countermodel"] = {"algebra": alg.name,
                                   "valuation": alg.label_valuation(v)}
        if self.instances:
            from .formula import print_formula
            out["instances"] = [print_formula(f) for f in self.instances]
        return out


@dataclass(frozen=True)
class Budget:
    """Limits for :func:`prove_ext` and the countermodel searches."""

    max_size: int = 6
    max_instances: int = 500
    pair_window: int = 24


DEFAULT_BUDGET = Budget()


# ---------------------------------------------------------------- G4ip kernel

def _is_atom(f: Formula) -> bool:
    return type(f) is Var


def _step_context(ctx: frozenset, goal: Formula):
    """Apply one invertible left rule, or return None when none applies."""
    for f in ctx:
        t = type(f)
        if t is Bottom:
            return True
        if t is And:
            return [((ctx - {f}) | {f.left, f.right}, goal)]
        if t is Or:
            rest = ctx - {f}
            return [(rest | {f.left}, goal), (rest | {f.right}, goal)]
        if t is Impl:
            a = f.left
            ta = type(a)
            if ta is Var and a in ctx:
                return [((ctx - {f}) | {f.right}, goal)]
            if ta is Bottom:
                return [(ctx - {f}, goal)]
            if ta is And:
                return [((ctx - {f}) | {Impl(a.left, Impl(a.right, f.right))}, goal)]
            if ta is Or:
                return [((ctx - {f}) | {Impl(a.left, f.right), Impl(a.right, f.right)}, goal)]
    return None


@lru_cache(maxsize=1 << 20)
def _derivable(ctx: frozenset, goal: Formula) -> bool:
    if goal in ctx:
        return True
    tg = type(goal)
    if tg is And:
        return _derivable(ctx, goal.left) and _derivable(ctx, goal.right)
    if tg is Impl:
        return _derivable(ctx | {goal.left}, goal.right)
    step = _step_context(ctx, goal)
    if step is True:
        return True
    if step is not None:
        return all(_derivable(c, g) for c, g in step)
    # only atoms, p→B with p absent, and (C→D)→B remain on the left
    if tg is Or and (_derivable(ctx, goal.left) or _derivable(ctx, goal.right)):
        return True
    for f in ctx:
        if type(f) is Impl and type(f.left) is Impl:
            c, d, b = f.left.left, f.left.right, f.right
            rest = ctx - {f}
            if _derivable(rest | {Impl(d, b)}, Impl(c, d)) and _derivable(rest | {b}, goal):
                return True
    return False


def derivable(premises: Iterable[Formula], goal: Formula) -> bool:
    """Whether ``premises ⊢ goal`` in intuitionistic logic."""
    return _derivable(frozenset(premises), goal)


# ---------------------------------------------------------------- countermodels

def find_countermodel(f: Formula, algebras: Iterable[FiniteAlgebra],
                      axioms: Sequence[Formula] = ()) -> tuple[FiniteAlgebra, Valuation] | None:
    """First algebra (in the given order) validating ``axioms`` and refuting ``f``."""
    for alg in algebras:
        if axioms and not validates_all(alg, axioms):
            continue
        verdict = validates_formula(alg, f)
        if not verdict:
            return alg, verdict.valuation
    return None


def _heyting_family(max_size: int) -> tuple[FiniteAlgebra, ...]:
    return catalog(max_size)


@lru_cache(maxsize=None)
def _brouwerian_family(max_size: int) -> tuple[FiniteAlgebra, ...]:
    return tuple(a.brouwerian() for a in catalog(max_size) if a.size > 1)


# ---------------------------------------------------------------- public provers

def prove_int(f: Formula, countermodel: bool = True,
              max_size: int = DEFAULT_BUDGET.max_size) -> ProofResult:
    """Decide ``f ∈ Int``; a refuted formula carries the least finite countermodel found."""
    if _derivable(frozenset(), f):
        return ProofResult(Status.PROVABLE)
    cm = find_countermodel(f, _heyting_family(max_size)) if countermodel else None
    return ProofResult(Status.NOT_PROVABLE, cm)


class NotPositive(ValueError):
    pass


def prove_positive(f: Formula, countermodel: bool = True,
                   max_size: int = DEFAULT_BUDGET.max_size) -> ProofResult:
    """Decide ``f ∈ Int⁺`` for a ⊥-free ``f``; countermodels are Brouwerian reducts."""
    if not is_positive(f):
        raise NotPositive(f"formula contains ⊥: {f}")
    if _derivable(frozenset(), f):
        return ProofResult(Status.PROVABLE)
    cm = find_countermodel(f, _brouwerian_family(max_size)) if countermodel else None
    return ProofResult(Status.NOT_PROVABLE, cm)


def _candidate_images(f: Formula, positive: bool) -> list[Formula]:
    subs = {g for g in subformulas(f) if not (positive and not is_positive(g))}
    from .formula import print_formula
    return sorted(subs, key=lambda g: (size(g), print_formula(g)))


def axiom_instances(axioms: Sequence[Formula], goal: Formula, limit: int,
                    positive: bool = False) -> list[Formula]:
    """Substitution instances of ``axioms`` drawn from subformulas of ``goal``.

    Images for each axiom variable range over the subformulas of the goal
    (ordered by size, then text); at most ``limit`` instances are produced.
    """
    images = _candidate_images(goal, positive)
    out: list[Formula] = []
    seen: set[Formula] = set()
    for ax in axioms:
        names = free_vars(ax)
        for combo in itertools.product(images, repeat=len(names)):
            inst = Substitution(dict(zip(names, combo)))(ax)
            if inst not in seen:
                seen.add(inst)
                out.append(inst)
                if len(out) >= limit:
                    return out
    return out


def prove_ext(axioms: Iterable[Formula], f: Formula, budget: Budget = DEFAULT_BUDGET,
              positive: bool = False) -> ProofResult:
    """Bounded search for ``f ∈ Int + axioms`` (or ``Int⁺ + axioms`` when ``positive``).

    Provable when ``f`` follows intuitionistically from one or two axiom
    instances; NotProvable when some algebra of size ≤ ``budget.max_size``
    validates every axiom and refutes ``f``; Unknown otherwise.
    """
    axioms = tuple(axioms)
    for ax in axioms:
        if not is_positive(ax):
            raise NotPositive(f"axiom contains ⊥: {ax}")
    if positive and not is_positive(f):
        raise NotPositive(f"formula contains ⊥: {f}")
    if _derivable(frozenset(), f):
        return ProofResult(Status.PROVABLE)
    if axioms:
        insts = axiom_instances(axioms, f, budget.max_instances, positive)
        calls = 0
        for inst in insts:
            calls += 1
            if _derivable(frozenset({inst}), f):
                return ProofResult(Status.PROVABLE, instances=(inst,))
        window = insts[: budget.pair_window]
        for i, j in itertools.combinations(range(len(window)), 2):
            if calls >= budget.max_instances:
                break
            calls += 1
            if _derivable(frozenset({window[i], window[j]}), f):
                return ProofResult(Status.PROVABLE, instances=(window[i], window[j]))
    family = _brouwerian_family(budget.max_size) if positive else _heyting_family(budget.max_size)
    cm = find_countermodel(f, family, axioms)
    if cm is not None:
        return ProofResult(Status.NOT_PROVABLE, cm)
    return ProofResult(Status.UNKNOWN)


def prove(f: Formula | str, axioms: Iterable[Formula] = (), positive: bool = False,
          budget: Budget = DEFAULT_BUDGET) -> ProofResult:
    """Dispatch to the right prover; strings are parsed."""
    if isinstance(f, str):
        f = parse_formula(f)
    axioms = tuple(axioms)
    if axioms:
        return prove_ext(axioms, f, budget, positive=positive)
    if positive:
        return prove_positive(f, max_size=budget.max_size)
    return prove_int(f, max_size=budget.max_size)


def is_theorem(f: Formula) -> bool:
    return _derivable(frozenset(), f)


def entails_all(premises: Sequence[Formula], goal: Formula) -> bool:
    return _derivable(frozenset(premises), goal)


def conjunction_implies(premises: Sequence[Formula], goal: Formula) -> Formula:
    return Impl(conj(premises), goal) if premises else goal

"""Bounded unifier search and certified non-admissibility of rules.

Semantic rule-following over finite algebra families is also here.

Non-admissibility is certified by a substitution that the prover checks;
admissibility is only ever reported as "no falsifier within budget".
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence

from .algebra import FiniteAlgebra, eval_formula, validates_rule
from .corpus import formulas_of_size
from .formula import (
    BOTTOM, Formula, MRule, Substitution, Var, is_positive, parse_formula, print_formula,
)
from .prover import Budget, ProofResult, Status, prove_ext, prove_int, prove_positive
from .reduction import default_pi, lift_substitution


@dataclass(frozen=True)
class SearchBudget:
    max_formula: int = 7
    pool_size: int = 1
    max_size: int = 6
    max_instances: int = 500

    def __post_init__(self):
        for name in ("max_formula", "pool_size", "max_size", "max_instances"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be non-negative")

    def prover_budget(self) -> Budget:
        return Budget(max_size=self.max_size, max_instances=self.max_instances)


DEFAULT_SEARCH = SearchBudget()


@dataclass(frozen=True)
class LogicHandle:
    """``Int + axioms``, or ``Int⁺ + axioms`` when ``positive``."""

    positive: bool = False
    axioms: tuple[Formula, ...] = ()
    budget: SearchBudget = DEFAULT_SEARCH

    def __post_init__(self):
        bad = [a for a in self.axioms if not is_positive(a)]
        if bad:
            raise ValueError(f"axioms must be positive: {[print_formula(a) for a in bad]}")

    @classmethod
    def int_(cls, budget: SearchBudget = DEFAULT_SEARCH) -> LogicHandle:
        return cls(False, (), budget)

    @classmethod
    def int_positive(cls, budget: SearchBudget = DEFAULT_SEARCH) -> LogicHandle:
        return cls(True, (), budget)

    @classmethod
    def int_plus(cls, axioms: Iterable[Formula], positive: bool = False,
                 budget: SearchBudget = DEFAULT_SEARCH) -> LogicHandle:
        return cls(positive, tuple(axioms), budget)

    @property
    def kind(self) -> str:
        base = "IntPositive" if self.positive else "Int"
        if self.axioms:
            return f"{base}+[{', '.join(map(print_formula, self.axioms))}]"
        return base

    def positive_fragment(self) -> LogicHandle:
        return LogicHandle(True, self.axioms, self.budget)

    def prove(self, f: Formula) -> ProofResult:
        if self.axioms:
            return prove_ext(self.axioms, f, self.budget.prover_budget(), positive=self.positive)
        if self.positive:
            return prove_positive(f, countermodel=False)
        return prove_int(f, countermodel=False)

    def status(self, f: Formula) -> Status:
        return self.prove(f).status


# ---------------------------------------------------------------- substitution search

_POOL_NAMES = "pqrstuvxyz"


def variable_pool(avoid: Iterable[str], n: int) -> tuple[str, ...]:
    """First ``n`` names from p, q, r, ... (then p1, p2, ...) not in ``avoid``."""
    taken = set(avoid)
    names = itertools.chain(_POOL_NAMES, (f"p{i}" for i in itertools.count(1)))
    return tuple(itertools.islice((v for v in names if v not in taken), n))


def _image_key(f: Formula) -> tuple:
    return (0 if is_positive(f) else 1, print_formula(f))


def images_of_size(k: int, pool: Sequence[str], allow_bottom: bool) -> list[Formula]:
    """Candidate images with ``k`` connectives.

    Atoms come as ⊥ (when allowed) followed by the pool variables; larger
    images list positive formulas before ⊥-containing ones, each group in
    text order.
    """
    vars_ = tuple(Var(v) for v in pool)
    if k == 0:
        return ([BOTTOM] if allow_bottom else []) + list(vars_)
    leaves = ((BOTTOM,) if allow_bottom else ()) + vars_
    return sorted(formulas_of_size(k, leaves), key=_image_key)


def substitutions(domain: Sequence[str], pool: Sequence[str], allow_bottom: bool,
                  max_formula: int) -> Iterator[Substitution]:
    """Substitutions on ``domain`` by increasing largest image, product order within a level."""
    if not domain:
        yield Substitution()
        return
    images: list[Formula] = []
    sizes: list[int] = []
    for level in range(max_formula + 1):
        new = images_of_size(level, pool, allow_bottom)
        if not new and level > 0:
            break
        images += new
        sizes += [level] * len(new)
        for combo in itertools.product(range(len(images)), repeat=len(domain)):
            if max(sizes[i] for i in combo) != level:
                continue
            yield Substitution({v: images[i] for v, i in zip(domain, combo)})


def _search_space(logic: LogicHandle, domain: Sequence[str], avoid: Iterable[str],
                  budget: SearchBudget) -> Iterator[Substitution]:
    pool = variable_pool(avoid, budget.pool_size)
    it = substitutions(domain, pool, not logic.positive, budget.max_formula)
    return itertools.islice(it, budget.max_instances)


def _unifies(logic: LogicHandle, s: Substitution, formulas: Iterable[Formula]) -> bool:
    return all(logic.status(s(f)) is Status.PROVABLE for f in formulas)


def find_unifier(logic: LogicHandle, gamma: Iterable[Formula],
                 budget: SearchBudget | None = None) -> Substitution | None:
    """First substitution (in search order) making every formula of ``gamma`` a theorem."""
    budget = budget or logic.budget
    gamma = tuple(gamma)
    if logic.positive and not all(is_positive(f) for f in gamma):
        raise ValueError("positive logic needs positive formulas")
    if not gamma:
        return Substitution()
    domain = MRule(gamma).variables()
    for s in _search_space(logic, domain, domain, budget):
        if _unifies(logic, s, gamma):
            return s
    return None


@dataclass(frozen=True)
class Falsifier:
    """A substitution unifying all premises of a rule and none of its conclusions."""

    rule: MRule
    substitution: Substitution
    premise_results: tuple[ProofResult, ...]
    conclusion_results: tuple[ProofResult, ...]

    def payload(self) -> dict:
        return {
            "substitution": self.substitution.to_json(),
            "premises": [{"formula": print_formula(self.substitution(f)), **r.payload()}
                         for f, r in zip(self.rule.premises, self.premise_results)],
            "conclusions": [{"formula": print_formula(self.substitution(f)), **r.payload()}
                            for f, r in zip(self.rule.conclusions, self.conclusion_results)],
        }


def verify_falsifier(logic: LogicHandle, rule: MRule, s: Substitution) -> Falsifier | None:
    """Re-check a candidate through the prover; refuted conclusions must carry a
    countermodel that really refutes them when one was found."""
    prem = tuple(_fresh_prove(logic, s(f)) for f in rule.premises)
    if not all(r.status is Status.PROVABLE for r in prem):
        return None
    concl = tuple(_fresh_prove(logic, s(f)) for f in rule.conclusions)
    if not all(r.status is Status.NOT_PROVABLE for r in concl):
        return None
    for f, r in zip(rule.conclusions, concl):
        if r.countermodel is not None:
            alg, v = r.countermodel
            if eval_formula(alg, v, s(f)) == alg.unit:
                return None
    return Falsifier(rule, s, prem, concl)


def _fresh_prove(logic: LogicHandle, f: Formula) -> ProofResult:
    if logic.axioms:
        return logic.prove(f)
    if logic.positive:
        return prove_positive(f, max_size=logic.budget.max_size)
    return prove_int(f, max_size=logic.budget.max_size)


def falsify_admissibility(logic: LogicHandle, rule: MRule,
                          budget: SearchBudget | None = None) -> Falsifier | None:
    """Search for a certificate that ``rule`` is not admissible in ``logic``.

    ``None`` only means that no falsifier exists within the budget.
    """
    budget = budget or logic.budget
    if logic.positive and not rule.positive:
        raise ValueError("positive logic needs a positive rule")
    domain = rule.variables()
    for s in _search_space(logic, domain, domain, budget):
        if not _unifies(logic, s, rule.premises):
            continue
        if any(logic.status(s(f)) is not Status.NOT_PROVABLE for f in rule.conclusions):
            continue
        found = verify_falsifier(logic, rule, s)
        if found is not None:
            return found
    return None


def edge_case_admissible(logic: LogicHandle, rule: MRule) -> bool | None:
    """Admissibility for rules with an empty side, decided without search where possible.

    ``∅/∅`` is never admissible in a consistent logic; ``∅/Δ`` is admissible
    iff some conclusion is a theorem; ``Γ/∅`` is admissible iff ``Γ`` has no
    unifier, which can only be refuted (returns False) or left open (None).
    Rules with both sides nonempty return None.
    """
    if not rule.premises and not rule.conclusions:
        return False
    if not rule.premises:
        statuses = [logic.status(f) for f in rule.conclusions]
        if any(s is Status.PROVABLE for s in statuses):
            return True
        if all(s is Status.NOT_PROVABLE for s in statuses):
            return False
        return None
    if not rule.conclusions:
        return False if find_unifier(logic, rule.premises) is not None else None
    return None


# ---------------------------------------------------------------- semantic following

@dataclass(frozen=True)
class Follows:
    holds: bool
    witness: FiniteAlgebra | None = None

    def __bool__(self) -> bool:
        return self.holds


def semantic_follows(family: Iterable[FiniteAlgebra], rules: Iterable[MRule],
                     rule: MRule) -> Follows:
    """Whether every member of ``family`` validating ``rules`` validates ``rule``."""
    rules = tuple(rules)
    for alg in family:
        if all(validates_rule(alg, r) for r in rules) and not validates_rule(alg, rule):
            return Follows(False, alg)
    return Follows(True)


def independence_check(family: Sequence[FiniteAlgebra],
                       rules: Sequence[MRule]) -> list[tuple[MRule, bool]]:
    """For each rule, whether it follows from the others (``True`` = dependent).

    Rules are compared by position, so a duplicated rule depends on its copy.
    """
    out = []
    for i, r in enumerate(rules):
        rest = [q for j, q in enumerate(rules) if j != i]
        out.append((r, semantic_follows(family, rest, r).holds))
    return out


# ---------------------------------------------------------------- transfer

@dataclass(frozen=True)
class TransferReport:
    rule: MRule
    sigma: Substitution
    applicable: bool
    premise_status_L: Status
    pi: tuple[str, ...] = ()
    lifted: Substitution | None = None
    lifted_positive: bool = False
    premise_status_P: Status | None = None
    conclusions: tuple[tuple[Formula, Status, Status], ...] = ()
    p_axioms: tuple[Formula, ...] = ()

    @property
    def unknown(self) -> bool:
        statuses = [self.premise_status_L, self.premise_status_P]
        statuses += [s for _, a, b in self.conclusions for s in (a, b)]
        return Status.UNKNOWN in statuses

    @property
    def some_conclusion_L(self) -> bool:
        return any(a is Status.PROVABLE for _, a, _ in self.conclusions)

    @property
    def some_conclusion_P(self) -> bool:
        return any(b is Status.PROVABLE for _, _, b in self.conclusions)

    @property
    def consistent(self) -> bool:
        """Whether the instance agrees with the transfer theorem's predictions."""
        if not self.applicable or self.unknown:
            return True
        return (self.lifted_positive
                and self.premise_status_P is Status.PROVABLE
                and all(a is b for _, a, b in self.conclusions)
                and self.some_conclusion_L == self.some_conclusion_P)

    def payload(self) -> dict:
        out = {"rule": self.rule.to_json(), "sigma": self.sigma.to_json(),
               "applicable": self.applicable,
               "axioms": [print_formula(a) for a in self.p_axioms],
               "premises_L": self.premise_status_L.value}
        if self.applicable:
            out.update({
                "pi": list(self.pi),
                "lifted": self.lifted.to_json(),
                "lifted_positive": self.lifted_positive,
                "premises_P": self.premise_status_P.value,
                "conclusions": [{"formula": print_formula(b), "L": a.value, "P": c.value}
                                for b, a, c in self.conclusions],
                "consistent": self.consistent,
            })
        return out


def _combined(statuses: Sequence[Status]) -> Status:
    if all(s is Status.PROVABLE for s in statuses):
        return Status.PROVABLE
    if any(s is Status.NOT_PROVABLE for s in statuses):
        return Status.NOT_PROVABLE
    return Status.UNKNOWN


def check_transfer_instance(p_axioms: Iterable[Formula], rule: MRule, sigma: Substitution,
                            budget: SearchBudget = DEFAULT_SEARCH) -> TransferReport:
    """Compare ``sigma`` in ``L = Int + P`` with its positive lift ``σ^π`` in ``P``."""
    p_axioms = tuple(p_axioms)
    if not rule.positive:
        raise ValueError("transfer applies to positive rules")
    L = LogicHandle.int_plus(p_axioms, positive=False, budget=budget)
    P = L.positive_fragment()
    prem_L = _combined([L.status(sigma(f)) for f in rule.premises])
    if prem_L is not Status.PROVABLE:
        return TransferReport(rule, sigma, False, prem_L, p_axioms=p_axioms)
    pi = default_pi(rule, sigma)
    lifted = lift_substitution(sigma, pi)
    prem_P = _combined([P.status(lifted(f)) for f in rule.premises])
    concl = tuple((b, L.status(sigma(b)), P.status(lifted(b))) for b in rule.conclusions)
    return TransferReport(rule, sigma, True, prem_L, pi, lifted, lifted.positive, prem_P, concl,
                          p_axioms)


# ---------------------------------------------------------------- known rules

@dataclass(frozen=True)
class NamedRule:
    name: str
    rule: MRule
    admissible_for_int: bool = True
    description: str = field(default="", compare=False)


def known_rules() -> dict[str, NamedRule]:
    """Classical admissible, non-derivable rules of Int (and the disjunction property)."""
    def r(prem: str, *concl: str) -> MRule:
        return MRule((parse_formula(prem),), tuple(parse_formula(c) for c in concl))

    return {
        "harrop": NamedRule("harrop", r("~p -> q | r", "(~p -> q) | (~p -> r)"),
                            description="Harrop's rule"),
        "kuznetsov": NamedRule("kuznetsov", r("(~~p -> p) -> p | ~p",
                                              "((~~p -> p) -> ~p) | ((~~p -> p) -> ~~p)"),
                               description="Kuznetsov's rule"),
        "mints": NamedRule("mints", r("(p -> q) -> p | r",
                                      "((p -> q) -> p) | ((p -> q) -> r)"),
                           description="Mints' rule"),
        "dp": NamedRule("dp", r("p | q", "p", "q"), description="disjunction property"),
    }

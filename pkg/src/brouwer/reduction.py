"""Syntactic ⊥-elimination: reduction by a variable set and the Wajsberg reduction."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from .formula import (
    BOTTOM, Bottom, Formula, Impl, MRule, Substitution, Var, conj, free_vars,
    fresh_var, sorted_vars, vars_of,
)


class ReductionError(ValueError):
    pass


@dataclass(frozen=True)
class ReductionContext:
    pi: tuple[str, ...]
    fresh: str

    def __post_init__(self):
        object.__setattr__(self, "pi", sorted_vars(self.pi))
        if not self.pi:
            raise ReductionError("pi must be nonempty")
        if self.fresh not in self.pi:
            raise ReductionError(f"fresh variable {self.fresh!r} must belong to pi")

    @property
    def conj(self) -> Formula:
        return conj_of(self.pi)

    @classmethod
    def default(cls, *formulas: Formula) -> ReductionContext:
        """π = all variables of ``formulas`` plus the first unused ``w<i>``."""
        used = vars_of(formulas)
        p = fresh_var(used)
        return cls(used + (p,), p)


def conj_of(pi: Iterable[str]) -> Formula:
    names = sorted_vars(pi)
    if not names:
        raise ReductionError("conjunction of an empty variable set")
    return conj(Var(v) for v in names)


def replace_bottom(f: Formula, g: Formula) -> Formula:
    def go(h: Formula) -> Formula:
        t = type(h)
        if t is Bottom:
            return g
        if t is Var:
            return h
        return t(go(h.left), go(h.right))

    return go(f)


def reduce_by_pi(f: Formula, pi: Iterable[str]) -> Formula:
    """Replace every ⊥ in ``f`` by the conjunction of ``pi``."""
    return replace_bottom(f, conj_of(pi))


def wajsberg_reduce(f: Formula, ctx: ReductionContext | None = None) -> Formula:
    """``(p -> π^∧) -> f[⊥ := p]`` for the fresh variable ``p`` of ``ctx``."""
    if ctx is None:
        ctx = ReductionContext.default(f)
    fv = free_vars(f)
    if ctx.fresh in fv:
        raise ReductionError(f"fresh variable {ctx.fresh!r} occurs in the formula")
    escaped = set(fv) - set(ctx.pi)
    if escaped:
        raise ReductionError(f"variables {sorted(escaped)} are not in pi")
    p = Var(ctx.fresh)
    return Impl(Impl(p, ctx.conj), replace_bottom(f, p))


def pi_reduct(f: Formula, ctx: ReductionContext | None = None) -> Formula:
    """``f^π`` under the same default context as :func:`wajsberg_reduce`."""
    if ctx is None:
        ctx = ReductionContext.default(f)
    return reduce_by_pi(f, ctx.pi)


def lift_substitution(s: Substitution, pi: Iterable[str]) -> Substitution:
    """The positive substitution ``v ↦ s(v)^π``."""
    c = conj_of(pi)
    return Substitution({v: replace_bottom(g, c) for v, g in s.mapping.items()})


def default_pi(rule: MRule, s: Substitution | None = None) -> tuple[str, ...]:
    """Variables of the rule and of the images of ``s``, plus one fresh variable."""
    used = set(rule.variables())
    if s is not None:
        used.update(s.mapping)
        used.update(s.image_vars())
    return sorted_vars(used | {fresh_var(used)})


def unsubstitute_fresh(f: Formula, fresh: str) -> Formula:
    """``f[fresh := ⊥]``."""
    return Substitution({fresh: BOTTOM})(f)

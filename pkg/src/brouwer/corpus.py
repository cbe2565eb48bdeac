"""Formula enumeration and the seeded test corpus."""
from __future__ import annotations

import random
from functools import lru_cache
from typing import Iterator, Sequence

from .formula import BOTTOM, And, Formula, Impl, Or, Var, is_positive, print_formula

CONNECTIVES = (And, Or, Impl)


@lru_cache(maxsize=None)
def formulas_of_size(k: int, leaves: tuple[Formula, ...]) -> tuple[Formula, ...]:
    """All formulas with exactly ``k`` binary connectives over ``leaves``."""
    if k == 0:
        return leaves
    out = []
    for conn in CONNECTIVES:
        for i in range(k):
            for left in formulas_of_size(i, leaves):
                for right in formulas_of_size(k - 1 - i, leaves):
                    out.append(conn(left, right))
    return tuple(out)


def count_formulas(k: int, n_leaves: int) -> int:
    from math import comb
    catalan = comb(2 * k, k) // (k + 1)
    return catalan * 3 ** k * n_leaves ** (k + 1)


def leaves_for(variables: Sequence[str], bottom: bool = True) -> tuple[Formula, ...]:
    out: tuple[Formula, ...] = tuple(Var(v) for v in variables)
    return ((BOTTOM,) + out) if bottom else out


def all_formulas(max_connectives: int, variables: Sequence[str] = ("p", "q"),
                 bottom: bool = True) -> Iterator[Formula]:
    leaves = leaves_for(variables, bottom)
    for k in range(max_connectives + 1):
        yield from formulas_of_size(k, leaves)


def random_formula(rng: random.Random, connectives: int,
                   variables: Sequence[str] = ("p", "q", "r"), bottom: bool = True,
                   p_bottom: float = 0.15) -> Formula:
    """Uniformly shaped random formula with exactly ``connectives`` binary nodes."""
    if connectives == 0:
        if bottom and rng.random() < p_bottom:
            return BOTTOM
        return Var(rng.choice(list(variables)))
    left = rng.randrange(connectives)
    conn = rng.choice(CONNECTIVES)
    return conn(random_formula(rng, left, variables, bottom, p_bottom),
                random_formula(rng, connectives - 1 - left, variables, bottom, p_bottom))


def random_formulas(n: int, seed: int = 0, max_connectives: int = 5,
                    variables: Sequence[str] = ("p", "q", "r"), bottom: bool = True,
                    p_bottom: float = 0.15) -> list[Formula]:
    rng = random.Random(seed)
    return [random_formula(rng, rng.randint(1, max_connectives), variables, bottom, p_bottom)
            for _ in range(n)]


EXHAUSTIVE_CONNECTIVES = 3
SAMPLE_CONNECTIVES = 5


def sampled_formulas(n: int, seed: int, connectives: int,
                     variables: Sequence[str] = ("p", "q")) -> list[Formula]:
    """Distinct formulas sampled uniformly from those with exactly ``connectives`` connectives."""
    rng = random.Random(seed)
    out: dict[Formula, None] = {}
    while len(out) < n:
        out.setdefault(random_formula(rng, connectives, variables, True, 1 / (len(variables) + 1)))
    return list(out)


EXHAUSTIVE_POSITIVE = 4


def formula_corpus(exhaustive: int = EXHAUSTIVE_CONNECTIVES, n_sampled: int = 300,
                   n_random: int = 50, seed: int = 2024,
                   exhaustive_positive: int = 0) -> list[Formula]:
    """Fixed corpus used by the acceptance checks.

    Every formula over {p, q, ⊥} with at most ``exhaustive`` connectives,
    every ⊥-free formula over {p, q} with at most ``exhaustive_positive``
    connectives, ``n_sampled`` uniform samples among formulas over {p, q, ⊥}
    with 4 and 5 connectives, and ``n_random`` seeded random formulas over
    {p, q, r, ⊥}.
    """
    out: dict[Formula, None] = dict.fromkeys(all_formulas(exhaustive))
    out.update(dict.fromkeys(all_formulas(exhaustive_positive, bottom=False)))
    half = n_sampled // 2
    for k, m in ((4, half), (SAMPLE_CONNECTIVES, n_sampled - half)):
        if k > exhaustive:  # samples may repeat positive formulas already present
            out.update(dict.fromkeys(sampled_formulas(m, seed + k, k)))
    out.update(dict.fromkeys(random_formulas(n_random, seed)))
    return list(out)


def positive_corpus(formulas: Sequence[Formula]) -> list[Formula]:
    return [f for f in formulas if is_positive(f)]


def describe(f: Formula) -> str:
    return print_formula(f)

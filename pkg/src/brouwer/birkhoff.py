"""Enumerate finite Heyting algebras up to isomorphism.

Every finite distributive lattice is the lattice of down-sets of its poset of
join-irreducibles, so it suffices to enumerate finite posets up to
isomorphism.  Adding a maximal element to a poset adds at least one down-set,
which lets the poset search stop as soon as a lattice would be too large.
"""
from __future__ import annotations

import itertools
from functools import lru_cache
from typing import Iterator

from .algebra import FiniteAlgebra

# A poset on range(k) is a frozenset of strict pairs (i, j) meaning i < j.
Poset = tuple[int, frozenset]


def down_sets(k: int, less: frozenset) -> list[frozenset]:
    below = [frozenset(i for i in range(k) if (i, j) in less) for j in range(k)]
    result = []
    for bits in range(1 << k):
        s = frozenset(i for i in range(k) if bits >> i & 1)
        if all(below[j] <= s for j in s):
            result.append(s)
    return sorted(result, key=lambda s: (len(s), sorted(s)))


def _canonical(k: int, less: frozenset) -> tuple:
    """Lexicographically least relabelled relation, searching only degree-preserving maps."""
    up = [sum(1 for j in range(k) if (i, j) in less) for i in range(k)]
    dn = [sum(1 for j in range(k) if (j, i) in less) for i in range(k)]
    key = [(dn[i], up[i]) for i in range(k)]
    order = sorted(range(k), key=lambda i: key[i])
    groups = [list(g) for _, g in itertools.groupby(order, key=lambda i: key[i])]
    best = None
    for perm_parts in itertools.product(*(itertools.permutations(g) for g in groups)):
        seq = [i for part in perm_parts for i in part]
        pos = {old: new for new, old in enumerate(seq)}
        rel = tuple(sorted((pos[i], pos[j]) for i, j in less))
        if best is None or rel < best:
            best = rel
    return (k, best or ())


def _extensions(k: int, less: frozenset) -> Iterator[frozenset]:
    """Posets on range(k+1) obtained by adding ``k`` as a new maximal element."""
    for d in down_sets(k, less):
        yield less | {(i, k) for i in d}


@lru_cache(maxsize=None)
def posets(max_downsets: int) -> tuple[Poset, ...]:
    """All posets up to isomorphism whose down-set lattice has ≤ max_downsets elements."""
    level = {_canonical(0, frozenset()): (0, frozenset())}
    found = dict(level)
    while level:
        nxt: dict = {}
        for k, less in level.values():
            for ext in _extensions(k, less):
                if len(down_sets(k + 1, ext)) > max_downsets:
                    continue
                key = _canonical(k + 1, ext)
                if key not in found and key not in nxt:
                    nxt[key] = (k + 1, frozenset(key[1]))
        found.update(nxt)
        level = nxt
    return tuple(found[key] for key in sorted(found))


def _labels(n: int, is_chain: bool) -> tuple[str, ...]:
    if n == 1:
        return ("1",)
    if is_chain:
        if n == 3:
            return ("0", "m", "1")
        return ("0",) + tuple(f"m{i}" for i in range(1, n - 1)) + ("1",)
    return ("0",) + tuple(f"e{i}" for i in range(1, n - 1)) + ("1",)


def downset_algebra(k: int, less: frozenset, name: str = "") -> FiniteAlgebra:
    """Heyting algebra of down-sets ordered by inclusion; index 0 is ∅, the last is the whole poset."""
    elems = down_sets(k, less)
    n = len(elems)
    pos = {s: i for i, s in enumerate(elems)}
    below = [frozenset(i for i in range(k) if (i, j) in less) | {j} for j in range(k)]
    meet = [[pos[x & y] for y in elems] for x in elems]
    join = [[pos[x | y] for y in elems] for x in elems]
    # x → y = {j : ↓j ∩ x ⊆ y}
    imp = [[pos[frozenset(j for j in range(k) if below[j] & x <= y)] for y in elems]
           for x in elems]
    is_chain = all((i, j) in less or (j, i) in less
                   for i, j in itertools.combinations(range(k), 2))
    return FiniteAlgebra(meet, join, imp, n - 1, 0, name, _labels(n, is_chain))


def _is_boolean(k: int, less: frozenset) -> bool:
    return not less


@lru_cache(maxsize=None)
def _algebras_of_size(n: int) -> tuple[FiniteAlgebra, ...]:
    items = [(k, less) for k, less in posets(n) if len(down_sets(k, less)) == n]
    # chains first, then by canonical relation
    items.sort(key=lambda p: (-len(p[1]), -p[0], _canonical(*p)))
    out = []
    other = 0
    for k, less in items:
        chain = len(less) == k * (k - 1) // 2
        if n == 1:
            name = "trivial"
        elif chain and n > 2:
            name = f"chain{n}"
        elif _is_boolean(k, less):
            name = f"bool{n}"
        else:
            other += 1
            name = f"heyt{n}_{other}"
        out.append(downset_algebra(k, less, name))
    return tuple(out)


def enumerate_algebras(max_size: int) -> Iterator[FiniteAlgebra]:
    """Every finite Heyting algebra with at most ``max_size`` elements, up to isomorphism.

    Ordered by size; within a size chains come first.
    """
    if max_size < 1:
        raise ValueError("max_size must be at least 1")
    for n in range(1, max_size + 1):
        yield from _algebras_of_size(n)


@lru_cache(maxsize=None)
def catalog(max_size: int) -> tuple[FiniteAlgebra, ...]:
    return tuple(enumerate_algebras(max_size))


def algebra_counts(max_size: int) -> list[int]:
    counts = [0] * max_size
    for alg in enumerate_algebras(max_size):
        counts[alg.size - 1] += 1
    return counts

"""Finite Brouwerian and Heyting algebras given by operation tables.

An algebra with ``zero is None`` is read as Brouwerian: every operation that
concerns the {∧, ∨, →, 1}-reduct ignores the zero, and evaluating ⊥ fails.
Element order is recovered from the meet table: ``a ≤ b`` iff ``a ∧ b = a``.
"""
from __future__ import annotations

import itertools
import json
import os
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from importlib import resources
from typing import Iterable, Mapping, Sequence

import numpy as np

from .formula import And, Bottom, Formula, MRule, Or, Var, free_vars, sorted_vars

Valuation = dict[str, int]


class AlgebraError(ValueError):
    """Malformed algebra document or table."""


class LatticeViolation(AlgebraError):
    pass


class ResiduationViolation(AlgebraError):
    pass


class BadUnit(AlgebraError):
    pass


class BadZero(AlgebraError):
    pass


class EvaluationError(ValueError):
    pass


Table = tuple[tuple[int, ...], ...]


def _table(rows: Sequence[Sequence[int]]) -> Table:
    return tuple(tuple(int(x) for x in row) for row in rows)


@dataclass(frozen=True, eq=False)
class FiniteAlgebra:
    meet: Table
    join: Table
    imp: Table
    unit: int
    zero: int | None = None
    name: str = ""
    labels: tuple[str, ...] = ()
    validate: bool = field(default=True, repr=False)

    def __post_init__(self):
        for attr in ("meet", "join", "imp"):
            object.__setattr__(self, attr, _table(getattr(self, attr)))
        if not self.labels:
            object.__setattr__(self, "labels", tuple(str(i) for i in range(self.size)))
        else:
            object.__setattr__(self, "labels", tuple(self.labels))
        if self.validate:
            check_algebra(self)

    @property
    def size(self) -> int:
        return len(self.meet)

    def __len__(self) -> int:
        return self.size

    def __repr__(self) -> str:
        kind = "Heyting" if self.is_heyting else "Brouwerian"
        return f"<{kind} algebra {self.name or '?'} of size {self.size}>"

    @property
    def is_heyting(self) -> bool:
        return self.zero is not None

    @cached_property
    def tables(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        return (np.array(self.meet, dtype=np.intp).reshape(self.size, self.size),
                np.array(self.join, dtype=np.intp).reshape(self.size, self.size),
                np.array(self.imp, dtype=np.intp).reshape(self.size, self.size))

    @cached_property
    def leq_matrix(self) -> np.ndarray:
        m = self.tables[0]
        return m == np.arange(self.size)[:, None]

    def leq(self, a: int, b: int) -> bool:
        return self.meet[a][b] == a

    def least(self) -> int | None:
        """The lattice bottom, which always exists for a nonempty finite lattice."""
        for a in range(self.size):
            if all(self.meet[a][b] == a for b in range(self.size)):
                return a
        return None

    def index(self, label: str) -> int:
        try:
            return self.labels.index(label)
        except ValueError:
            raise KeyError(f"{self.name}: no element labelled {label!r}") from None

    def label_valuation(self, v: Mapping[str, int]) -> dict[str, str]:
        return {k: self.labels[i] for k, i in v.items()}

    def brouwerian(self) -> FiniteAlgebra:
        """The {∧,∨,→,1}-reduct on the same carrier."""
        if self.zero is None:
            return self
        return FiniteAlgebra(self.meet, self.join, self.imp, self.unit, None,
                             self.name + "+", self.labels, validate=False)

    def with_zero(self, zero: int, name: str | None = None) -> FiniteAlgebra:
        return FiniteAlgebra(self.meet, self.join, self.imp, self.unit, zero,
                             self.name if name is None else name, self.labels)

    def renamed(self, name: str) -> FiniteAlgebra:
        return FiniteAlgebra(self.meet, self.join, self.imp, self.unit, self.zero,
                             name, self.labels, validate=False)

    def same_tables(self, other: FiniteAlgebra) -> bool:
        return (self.meet == other.meet and self.join == other.join
                and self.imp == other.imp and self.unit == other.unit
                and self.zero == other.zero)

    # -------------------------------------------------------------- documents

    def to_json(self) -> dict:
        return {"name": self.name, "size": self.size, "unit": self.unit,
                "zero": self.zero, "labels": list(self.labels),
                "meet": [list(r) for r in self.meet],
                "join": [list(r) for r in self.join],
                "imp": [list(r) for r in self.imp]}


def _first(mask: np.ndarray):
    idx = np.argwhere(mask)
    return tuple(int(x) for x in idx[0]) if len(idx) else None


def check_algebra(alg: FiniteAlgebra) -> None:
    """Verify the distributive lattice, unit, zero and residuation laws.

    Raises the matching :class:`AlgebraError` subclass naming the first
    violating triple.
    """
    n = alg.size
    if n == 0:
        raise LatticeViolation("empty carrier")
    for nm in ("meet", "join", "imp"):
        t = getattr(alg, nm)
        if len(t) != n or any(len(r) != n for r in t):
            raise AlgebraError(f"{nm} table is not {n}x{n}")
        if any(not 0 <= x < n for r in t for x in r):
            raise AlgebraError(f"{nm} table has entries outside 0..{n - 1}")
    if not 0 <= alg.unit < n:
        raise BadUnit(f"unit {alg.unit} outside carrier")
    if alg.zero is not None and not 0 <= alg.zero < n:
        raise BadZero(f"zero {alg.zero} outside carrier")
    if len(alg.labels) != n:
        raise AlgebraError("labels do not match size")

    M, J, I = alg.tables
    r = np.arange(n)
    a, b = np.meshgrid(r, r, indexing="ij")
    for nm, T in (("meet", M), ("join", J)):
        if (bad := _first(T[r, r] != r)) is not None:
            raise LatticeViolation(f"{nm} not idempotent at ({bad[0]},)")
        if (bad := _first(T != T.T)) is not None:
            raise LatticeViolation(f"{nm} not commutative at {bad}")
        assoc = T[T[:, :, None], np.broadcast_to(r, (n, n, n))] != T[
            np.broadcast_to(r[:, None, None], (n, n, n)), T[None, :, :]]
        if (bad := _first(assoc)) is not None:
            raise LatticeViolation(f"{nm} not associative at {bad}")
    if (bad := _first(M[a, J[a, b]] != a)) is not None:
        raise LatticeViolation(f"absorption a∧(a∨b)=a fails at {bad}")
    if (bad := _first(J[a, M[a, b]] != a)) is not None:
        raise LatticeViolation(f"absorption a∨(a∧b)=a fails at {bad}")
    A3, B3, C3 = np.meshgrid(r, r, r, indexing="ij")
    dist = M[A3, J[B3, C3]] != J[M[A3, B3], M[A3, C3]]
    if (bad := _first(dist)) is not None:
        raise LatticeViolation(f"distributivity fails at {bad}")
    if (bad := _first(M[r, alg.unit] != r)) is not None:
        raise BadUnit(f"unit {alg.unit} is not above element {bad[0]}")
    if alg.zero is not None and (bad := _first(M[alg.zero, r] != alg.zero)) is not None:
        raise BadZero(f"zero {alg.zero} is not below element {bad[0]}")
    leq = M == r[:, None]
    # meet(a, x) ≤ b  ⇔  x ≤ imp(a, b), over triples (a, b, x)
    lhs = leq[M[A3, C3], B3]
    rhs = leq[C3, I[A3, B3]]
    if (bad := _first(lhs != rhs)) is not None:
        x, y, z = bad
        raise ResiduationViolation(
            f"residuation fails for (a,b,x)=({x},{y},{z}): "
            f"a∧x={alg.meet[x][z]}, a→b={alg.imp[x][y]}")


def load_algebra(doc: Mapping) -> FiniteAlgebra:
    try:
        n = int(doc["size"])
        alg = FiniteAlgebra(
            doc["meet"], doc["join"], doc["imp"], int(doc["unit"]),
            None if doc.get("zero") is None else int(doc["zero"]),
            str(doc.get("name", "")), tuple(doc.get("labels") or ()))
    except (KeyError, TypeError) as exc:
        raise AlgebraError(f"malformed algebra document: {exc!r}") from exc
    if alg.size != n:
        raise AlgebraError(f"declared size {n} but tables have size {alg.size}")
    return alg


def heyting_from_order(leq: Sequence[Sequence[bool]], name: str = "",
                       labels: Sequence[str] = ()) -> FiniteAlgebra:
    """Build the Heyting algebra of a finite distributive lattice given by its order."""
    n = len(leq)
    L = np.array(leq, dtype=bool)
    below = [set(np.flatnonzero(L[:, a])) for a in range(n)]
    meet = [[0] * n for _ in range(n)]
    join = [[0] * n for _ in range(n)]
    imp = [[0] * n for _ in range(n)]
    for a in range(n):
        for b in range(n):
            lower = below[a] & below[b]
            meet[a][b] = next(c for c in lower if below[c] >= lower)
            upper = [c for c in range(n) if L[a, c] and L[b, c]]
            join[a][b] = next(c for c in upper if all(L[c, d] for d in upper))
    for a in range(n):
        for b in range(n):
            cands = [x for x in range(n) if L[meet[a][x], b]]
            imp[a][b] = next(x for x in cands if all(L[y, x] for y in cands))
    top = next(a for a in range(n) if L[:, a].all())
    bot = next(a for a in range(n) if L[a, :].all())
    return FiniteAlgebra(meet, join, imp, top, bot, name, tuple(labels))


# ---------------------------------------------------------------- evaluation

def eval_formula(alg: FiniteAlgebra, v: Mapping[str, int], f: Formula) -> int:
    def go(g: Formula) -> int:
        t = type(g)
        if t is Var:
            try:
                return v[g.name]
            except KeyError:
                raise EvaluationError(f"valuation misses variable {g.name!r}") from None
        if t is Bottom:
            if alg.zero is None:
                raise EvaluationError(f"⊥ evaluated in zero-less algebra {alg.name!r}")
            return alg.zero
        table = alg.meet if t is And else alg.join if t is Or else alg.imp
        return table[go(g.left)][go(g.right)]

    return go(f)


def eval_all(alg: FiniteAlgebra, f: Formula, names: Sequence[str]) -> np.ndarray:
    """Values of ``f`` under every valuation of ``names``, in product order.

    Row ``i`` corresponds to the ``i``-th tuple of
    ``itertools.product(range(n), repeat=len(names))``.
    """
    n, k = alg.size, len(names)
    M, J, I = alg.tables
    cols = {nm: c for c, nm in enumerate(names)}
    if k:
        grid = np.indices((n,) * k).reshape(k, -1)
    else:
        grid = np.zeros((0, 1), dtype=np.intp)
    cache: dict[Formula, np.ndarray] = {}

    def go(g: Formula) -> np.ndarray:
        if g in cache:
            return cache[g]
        t = type(g)
        if t is Var:
            if g.name not in cols:
                raise EvaluationError(f"valuation misses variable {g.name!r}")
            out = grid[cols[g.name]]
        elif t is Bottom:
            if alg.zero is None:
                raise EvaluationError(f"⊥ evaluated in zero-less algebra {alg.name!r}")
            out = np.full(grid.shape[1], alg.zero, dtype=np.intp)
        else:
            T = M if t is And else J if t is Or else I
            out = T[go(g.left), go(g.right)]
        cache[g] = out
        return out

    res = go(f)
    if res.ndim == 0 or res.shape != (grid.shape[1],):
        res = np.broadcast_to(res, (grid.shape[1],))
    return res


def _valuation_at(alg: FiniteAlgebra, names: Sequence[str], row: int) -> Valuation:
    k = len(names)
    digits = np.unravel_index(row, (alg.size,) * k) if k else ()
    return {nm: int(d) for nm, d in zip(names, digits)}


@dataclass(frozen=True)
class Verdict:
    """Outcome of a validity check; falsy when a refuting valuation exists."""

    valid: bool
    valuation: Valuation | None = None
    value: int | None = None

    def __bool__(self) -> bool:
        return self.valid


def validates_formula(alg: FiniteAlgebra, f: Formula) -> Verdict:
    names = free_vars(f)
    vals = eval_all(alg, f, names)
    bad = np.flatnonzero(vals != alg.unit)
    if len(bad) == 0:
        return Verdict(True)
    row = int(bad[0])
    return Verdict(False, _valuation_at(alg, names, row), int(vals[row]))


def validates_rule(alg: FiniteAlgebra, rule: MRule) -> Verdict:
    names = rule.variables()
    rows = alg.size ** len(names)
    prem = np.ones(rows, dtype=bool)
    for f in rule.premises:
        prem &= eval_all(alg, f, names) == alg.unit
    concl = np.zeros(rows, dtype=bool)
    for f in rule.conclusions:
        concl |= eval_all(alg, f, names) == alg.unit
    bad = np.flatnonzero(prem & ~concl)
    if len(bad) == 0:
        return Verdict(True)
    return Verdict(False, _valuation_at(alg, names, int(bad[0])))


def validates_all(alg: FiniteAlgebra, formulas: Iterable[Formula]) -> bool:
    return all(validates_formula(alg, f) for f in formulas)


# ---------------------------------------------------------------- subalgebras

def closure(alg: FiniteAlgebra, gens: Iterable[int]) -> frozenset[int]:
    """Least subset containing ``gens`` and the unit closed under ∧, ∨, →."""
    carrier = set(gens) | {alg.unit}
    queue = deque(carrier)
    while queue:
        a = queue.popleft()
        for b in list(carrier):
            for c in (alg.meet[a][b], alg.join[a][b], alg.imp[a][b], alg.imp[b][a]):
                if c not in carrier:
                    carrier.add(c)
                    queue.append(c)
    return frozenset(carrier)


def restrict(alg: FiniteAlgebra, carrier: Iterable[int], zero: int | None = None,
             name: str | None = None) -> FiniteAlgebra:
    """Sub-algebra on ``carrier`` (must be closed); new indices follow the old order."""
    elems = sorted(carrier)
    pos = {a: i for i, a in enumerate(elems)}
    try:
        tabs = [[[pos[T[a][b]] for b in elems] for a in elems]
                for T in (alg.meet, alg.join, alg.imp)]
    except KeyError as exc:
        raise AlgebraError(f"carrier not closed: element {exc.args[0]} escapes") from None
    if name is None:
        name = f"{alg.name}[{','.join(alg.labels[a] for a in elems)}]"
    return FiniteAlgebra(*tabs, pos[alg.unit], None if zero is None else pos[zero],
                         name, tuple(alg.labels[a] for a in elems))


def generate_subreduct(alg: FiniteAlgebra, gens: Iterable[int]) -> FiniteAlgebra:
    """Brouwerian subalgebra of the reduct generated by ``gens`` (zero absent)."""
    gens = list(gens)
    if not gens:
        raise ValueError("generator set must be nonempty")
    return restrict(alg, closure(alg, gens))


def adjoin_zero(alg: FiniteAlgebra, force: bool = False) -> FiniteAlgebra:
    """Heyting algebra on the Brouwerian view of ``alg``.

    Without ``force`` an existing least element becomes the zero.  With
    ``force`` a new bottom is appended at index ``n``.
    """
    if not force:
        bot = alg.least()
        if bot is not None:
            return FiniteAlgebra(alg.meet, alg.join, alg.imp, alg.unit, bot,
                                 alg.name + "⁰", alg.labels)
    n = alg.size
    z = n
    meet = [list(r) + [z] for r in alg.meet] + [[z] * (n + 1)]
    join = [list(r) + [a] for a, r in enumerate(alg.join)] + [list(range(n)) + [z]]
    imp = [list(r) + [z] for r in alg.imp] + [[alg.unit] * (n + 1)]
    label = "0"
    while label in alg.labels:
        label += "'"
    return FiniteAlgebra(meet, join, imp, alg.unit, z, alg.name + "⁰",
                         alg.labels + (label,))


# ---------------------------------------------------------------- filters

@dataclass(frozen=True, eq=False)
class Filter:
    algebra: FiniteAlgebra
    members: frozenset[int]

    def __post_init__(self):
        object.__setattr__(self, "members", frozenset(self.members))
        if not is_filter(self.algebra, self.members):
            raise AlgebraError(f"{sorted(self.members)} is not a filter of {self.algebra.name}")

    def __eq__(self, other) -> bool:
        return (isinstance(other, Filter) and other.algebra is self.algebra
                and other.members == self.members)

    def __hash__(self) -> int:
        return hash((id(self.algebra), self.members))

    def __contains__(self, a: int) -> bool:
        return a in self.members

    def __iter__(self):
        return iter(sorted(self.members))

    def __len__(self) -> int:
        return len(self.members)

    def labels(self) -> list[str]:
        return [self.algebra.labels[a] for a in sorted(self.members)]


def is_filter(alg: FiniteAlgebra, members: Iterable[int]) -> bool:
    s = set(members)
    if alg.unit not in s:
        return False
    for a in s:
        for b in range(alg.size):
            if b not in s and (alg.imp[a][b] in s or alg.meet[a][b] == a):
                return False
    return True


def generated_filter(alg: FiniteAlgebra, seed: Iterable[int] = ()) -> Filter:
    members = set(seed) | {alg.unit}
    changed = True
    while changed:
        changed = False
        for a in list(members):
            for b in range(alg.size):
                if b not in members and alg.imp[a][b] in members:
                    members.add(b)
                    changed = True
    return Filter(alg, frozenset(members))


def all_filters(alg: FiniteAlgebra) -> list[Filter]:
    """Every filter; in a finite algebra each is principal."""
    seen: dict[frozenset, Filter] = {}
    for a in range(alg.size):
        f = generated_filter(alg, [a])
        seen.setdefault(f.members, f)
    return [seen[k] for k in sorted(seen, key=lambda s: (len(s), sorted(s)))]


def congruence_classes(flt: Filter) -> tuple[tuple[int, ...], ...]:
    """Classes of ``(a,b) ∈ θ iff a→b, b→a ∈ F``, ordered by least member."""
    alg = flt.algebra
    F = flt.members
    cls: dict[int, list[int]] = {}
    for a in range(alg.size):
        for r in cls:
            if alg.imp[a][r] in F and alg.imp[r][a] in F:
                cls[r].append(a)
                break
        else:
            cls[a] = [a]
    return tuple(tuple(c) for c in cls.values())


def filter_of_congruence(alg: FiniteAlgebra, classes: Iterable[Iterable[int]]) -> Filter:
    """``{a : (a, 1) ∈ θ}``."""
    for c in classes:
        c = set(c)
        if alg.unit in c:
            return Filter(alg, frozenset(c))
    raise AlgebraError("partition does not cover the unit")


def is_congruence(alg: FiniteAlgebra, classes: Sequence[Sequence[int]]) -> bool:
    block = {}
    for i, c in enumerate(classes):
        for a in c:
            block[a] = i
    if sorted(block) != list(range(alg.size)):
        return False
    for T in (alg.meet, alg.join, alg.imp):
        for c in classes:
            for a, a2 in itertools.combinations(c, 2):
                for b in range(alg.size):
                    if block[T[a][b]] != block[T[a2][b]] or block[T[b][a]] != block[T[b][a2]]:
                        return False
    return True


def quotient_by_filter(alg: FiniteAlgebra, flt: Filter) -> tuple[FiniteAlgebra, tuple[int, ...]]:
    """Quotient ``alg/F`` and the projection map ``element -> class index``."""
    if flt.algebra is not alg and not flt.algebra.same_tables(alg):
        raise AlgebraError("filter belongs to a different algebra")
    classes = congruence_classes(flt)
    proj = [0] * alg.size
    for i, c in enumerate(classes):
        for a in c:
            proj[a] = i
    reps = [c[0] for c in classes]
    tabs = [[[proj[T[a][b]] for b in reps] for a in reps]
            for T in (alg.meet, alg.join, alg.imp)]
    zero = None if alg.zero is None else proj[alg.zero]
    labels = tuple(alg.labels[r] for r in reps)
    name = f"{alg.name}/{{{','.join(flt.labels())}}}"
    return FiniteAlgebra(*tabs, proj[alg.unit], zero, name, labels), tuple(proj)


def is_homomorphism(src: FiniteAlgebra, dst: FiniteAlgebra, h: Sequence[int],
                    with_zero: bool = False) -> bool:
    """Whether ``h`` preserves ∧, ∨, → and 1 (and 0 when ``with_zero``)."""
    if len(h) != src.size or h[src.unit] != dst.unit:
        return False
    if with_zero and (src.zero is None or dst.zero is None or h[src.zero] != dst.zero):
        return False
    for a in range(src.size):
        for b in range(src.size):
            if (h[src.meet[a][b]] != dst.meet[h[a]][h[b]]
                    or h[src.join[a][b]] != dst.join[h[a]][h[b]]
                    or h[src.imp[a][b]] != dst.imp[h[a]][h[b]]):
                return False
    return True


def is_b_embedding(b: FiniteAlgebra, a: FiniteAlgebra, h: Sequence[int]) -> bool:
    return len(set(h)) == len(h) and is_homomorphism(b, a, h)


def find_b_embedding(b: FiniteAlgebra, a: FiniteAlgebra) -> tuple[int, ...] | None:
    """Lexicographically least injective {∧,∨,→,1}-homomorphism ``b → a``."""
    n, m = b.size, a.size
    if n > m:
        return None
    h: list[int] = [-1] * n
    used = [False] * m

    ops = ((b.meet, a.meet), (b.join, a.join), (b.imp, a.imp))

    def consistent(i: int) -> bool:
        assigned = set(h[: i + 1])
        for x in range(i + 1):
            for y in range(i + 1):
                for T, U in ops:
                    z, w = T[x][y], U[h[x]][h[y]]
                    if z <= i:
                        if h[z] != w:
                            return False
                    elif w in assigned:
                        return False
        return True

    def search(i: int) -> bool:
        if i == n:
            return True
        cands = [a.unit] if i == b.unit else range(m)
        for c in cands:
            if used[c] or (i != b.unit and c == a.unit):
                continue
            h[i] = c
            used[c] = True
            if consistent(i) and search(i + 1):
                return True
            used[c] = False
            h[i] = -1
        return False

    if not search(0):
        return None
    assert is_b_embedding(b, a, h)
    return tuple(h)


# ---------------------------------------------------------------- catalog

CATALOG_ENV = "BROUWER_CATALOG"


def _read_json(path: str | os.PathLike | None, resource: str):
    if path is not None:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    return json.loads(resources.files("brouwer.data").joinpath(resource).read_text("utf-8"))


def load_catalog(path: str | os.PathLike | None = None) -> dict[str, FiniteAlgebra]:
    """Bundled named algebras, or those in ``path`` / ``$BROUWER_CATALOG``."""
    path = path or os.environ.get(CATALOG_ENV) or None
    docs = _read_json(path, "catalog.json")
    out = {}
    for doc in docs:
        alg = load_algebra(doc)
        out[alg.name] = alg
    return out


def element_label_map(alg: FiniteAlgebra, elems: Iterable[int]) -> list[str]:
    return [alg.labels[e] for e in elems]


def parse_elements(alg: FiniteAlgebra, spec: str | Iterable[str]) -> list[int]:
    """Resolve comma-separated labels (or integer indices) to element indices."""
    items = spec.split(",") if isinstance(spec, str) else list(spec)
    out = []
    for item in items:
        item = item.strip()
        if not item:
            continue
        if item in alg.labels:
            out.append(alg.labels.index(item))
        elif item.isdigit() and int(item) < alg.size:
            out.append(int(item))
        else:
            raise KeyError(f"{alg.name}: unknown element {item!r}")
    return out


__all__ = [
    "AlgebraError", "BadUnit", "BadZero", "EvaluationError", "FiniteAlgebra", "Filter",
    "LatticeViolation", "ResiduationViolation", "Valuation", "Verdict", "adjoin_zero",
    "all_filters", "check_algebra", "closure", "congruence_classes", "eval_all",
    "eval_formula", "filter_of_congruence", "find_b_embedding", "generate_subreduct",
    "generated_filter", "heyting_from_order", "is_b_embedding", "is_congruence",
    "is_filter", "is_homomorphism", "load_algebra", "load_catalog", "parse_elements",
    "quotient_by_filter", "restrict", "sorted_vars", "validates_all", "validates_formula",
    "validates_rule",
]

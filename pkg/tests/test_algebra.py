import copy
import itertools
import random

import pytest

from brouwer.algebra import (
    AlgebraError, BadUnit, BadZero, LatticeViolation, ResiduationViolation,
    adjoin_zero, all_filters, check_algebra, closure, congruence_classes, eval_all,
    eval_formula, filter_of_congruence, find_b_embedding, generate_subreduct, generated_filter,
    heyting_from_order, is_b_embedding, is_congruence, is_homomorphism, load_algebra,
    load_catalog, parse_elements, quotient_by_filter, restrict, validates_formula,
    validates_rule,
)
from brouwer.birkhoff import catalog
from brouwer.formula import MRule, parse_formula

P = parse_formula


def idx(alg, labels):
    return parse_elements(alg, labels)


# ---------------------------------------------------------------- loading

def test_bundled_catalog(cat):
    assert set(cat) >= {"bool2", "chain3", "diamond", "fig1", "fig1sub"}
    for a in cat.values():
        check_algebra(a)
        assert a.is_heyting


def test_fig1_order(cat):
    f = cat["fig1"]
    a, b, c, d = idx(f, "a,b,c,d")
    assert f.meet[a][b] == c and f.join[a][b] == d
    assert f.leq(f.zero, c) and f.leq(d, f.unit)
    assert not f.leq(a, b) and not f.leq(b, a)


def _doc(alg):
    return copy.deepcopy(alg.to_json())


def test_corrupted_imp_is_rejected(cat):
    doc = _doc(cat["fig1"])
    a, b = idx(cat["fig1"], "a,b")
    doc["imp"][a][b] = cat["fig1"].unit
    with pytest.raises(ResiduationViolation) as info:
        load_algebra(doc)
    assert "(" in str(info.value)


def test_other_violations(cat):
    doc = _doc(cat["chain3"])
    doc["join"][0][1] = 0
    with pytest.raises(LatticeViolation):
        load_algebra(doc)
    doc = _doc(cat["chain3"])
    doc["unit"] = 1
    with pytest.raises(BadUnit):
        load_algebra(doc)
    doc = _doc(cat["chain3"])
    doc["zero"] = 1
    with pytest.raises(BadZero):
        load_algebra(doc)
    with pytest.raises(AlgebraError):
        load_algebra({"name": "x", "size": 2})
    doc = _doc(cat["chain3"])
    doc["size"] = 4
    with pytest.raises(AlgebraError):
        load_algebra(doc)


def test_json_round_trip(cat):
    for a in cat.values():
        assert load_algebra(a.to_json()).same_tables(a)


def test_heyting_from_order_matches(cat):
    f = cat["fig1"]
    rebuilt = heyting_from_order(f.leq_matrix.tolist(), "fig1", f.labels)
    assert rebuilt.same_tables(f)


def test_catalog_env_override(tmp_path, monkeypatch, cat):
    import json
    path = tmp_path / "cat.json"
    path.write_text(json.dumps([cat["chain3"].renamed("other").to_json()]))
    monkeypatch.setenv("BROUWER_CATALOG", str(path))
    assert list(load_catalog()) == ["other"]


# ---------------------------------------------------------------- evaluation

def test_eval_examples(cat):
    c3 = cat["chain3"]
    m = c3.index("m")
    assert eval_formula(c3, {"p": m}, P("~p")) == c3.zero
    assert eval_formula(c3, {"p": m}, P("~~p")) == c3.unit
    for a in cat.values():
        for x in range(a.size):
            assert eval_formula(a, {"p": x}, P("p -> p")) == a.unit
    sub = cat["fig1sub"]
    assert sub.labels[eval_formula(sub, {"x": sub.index("a")}, P("~x | ~~x"))] == "d"


def test_eval_errors(cat):
    with pytest.raises(Exception):
        eval_formula(cat["chain3"], {}, P("p"))
    with pytest.raises(Exception):
        eval_formula(cat["chain3"].brouwerian(), {}, P("false"))


def test_eval_all_matches_scalar():
    rng = random.Random(1)
    from brouwer.corpus import random_formulas
    for alg in catalog(5):
        for f in random_formulas(10, seed=rng.randrange(1000), max_connectives=4):
            names = ("p", "q", "r")
            vals = eval_all(alg, f, names)
            for row, combo in enumerate(itertools.product(range(alg.size), repeat=3)):
                assert vals[row] == eval_formula(alg, dict(zip(names, combo)), f)


def test_validity_examples(cat):
    assert validates_formula(cat["bool2"], P("p | ~p"))
    v = validates_formula(cat["chain3"], P("p | ~p"))
    assert not v and cat["chain3"].label_valuation(v.valuation) == {"p": "m"}
    assert validates_formula(cat["fig1"], P("~p | ~~p"))


def test_rule_validity_edges(cat):
    for a in catalog(6):
        assert not validates_rule(a, MRule())
        assert bool(validates_rule(a, MRule((P("false"),), ()))) == (a.size > 1)
    v = validates_rule(cat["diamond"], MRule.from_text("p | q / p, q"))
    assert not v
    d = cat["diamond"]
    x, y = v.valuation["p"], v.valuation["q"]
    assert d.meet[x][y] == d.zero and d.join[x][y] == d.unit


# ---------------------------------------------------------------- subreducts

def test_subreduct_examples(cat):
    f = cat["fig1"]
    sub = generate_subreduct(f, idx(f, "a,b"))
    assert sorted(sub.labels) == sorted(["c", "a", "b", "d", "1"])
    assert sub.zero is None
    assert generate_subreduct(f, [f.unit]).size == 1
    assert generate_subreduct(f, range(f.size)).same_tables(f.brouwerian())
    with pytest.raises(ValueError):
        generate_subreduct(f, [])


def test_subreduct_least_element_is_meet_of_generators():
    rng = random.Random(3)
    for alg in catalog(7):
        for _ in range(5):
            gens = rng.sample(range(alg.size), rng.randint(1, min(3, alg.size)))
            carrier = sorted(closure(alg, gens))
            sub = restrict(alg, carrier)
            m = gens[0]
            for g in gens[1:]:
                m = alg.meet[m][g]
            assert carrier[sub.least()] == m


def test_adjoin_zero_examples(cat):
    one = generate_subreduct(cat["bool2"], [1])
    b2 = adjoin_zero(one, force=True)
    check_algebra(b2)
    assert b2.size == 2 and b2.zero == 1 and b2.unit == 0
    assert b2.imp[0][1] == 1 and b2.imp[1][0] == 0 and b2.meet[0][1] == 1 and b2.join[0][1] == 0

    chain2 = cat["bool2"].brouwerian()
    c3 = adjoin_zero(chain2, force=True)
    z, lo, hi = c3.zero, 0, 1
    assert c3.size == 3 and z == 2
    assert [c3.meet[a][z] for a in range(3)] == [z, z, z]
    assert [c3.join[a][z] for a in range(3)] == [0, 1, z]
    assert [c3.imp[z][a] for a in range(3)] == [c3.unit] * 3
    assert c3.imp[lo][z] == z and c3.imp[hi][z] == z
    check_algebra(c3)

    sub = adjoin_zero(generate_subreduct(cat["fig1"], idx(cat["fig1"], "a,b")))
    assert sub.labels[sub.zero] == "c" and sub.size == 5
    h = find_b_embedding(cat["fig1sub"], sub)
    assert h is not None and h[cat["fig1sub"].zero] == sub.zero


# ---------------------------------------------------------------- filters and quotients

def test_filter_examples(cat):
    c3, f = cat["chain3"], cat["fig1"]
    assert generated_filter(c3).labels() == ["1"]
    assert generated_filter(c3, [c3.index("m")]).labels() == ["m", "1"]
    carrier = sorted(closure(f, idx(f, "a,b")))
    sub = restrict(f, carrier)
    fs = generated_filter(sub, [sub.index("d")])
    assert sorted(fs.labels()) == ["1", "d"]
    big = generated_filter(f, [f.index("d")])
    assert sorted(f.labels[i] for i in big if i in carrier) == ["1", "d"]


def test_quotient_examples(cat):
    c3 = cat["chain3"]
    q, proj = quotient_by_filter(c3, generated_filter(c3, [c3.index("m")]))
    assert q.size == 2 and q.same_tables(cat["bool2"])
    for a in catalog(6):
        q1, _ = quotient_by_filter(a, generated_filter(a))
        assert q1.same_tables(a)
        qa, _ = quotient_by_filter(a, generated_filter(a, range(a.size)))
        assert qa.size == 1


def _partitions(items):
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for part in _partitions(rest):
        for i in range(len(part)):
            yield part[:i] + [[first] + part[i]] + part[i + 1:]
        yield [[first]] + part


def _compatible(alg, part):
    block = {a: i for i, c in enumerate(part) for a in c}
    for T in (alg.meet, alg.join, alg.imp):
        for a, a2 in itertools.product(range(alg.size), repeat=2):
            if block[a] != block[a2]:
                continue
            for b in range(alg.size):
                if block[T[a][b]] != block[T[a2][b]] or block[T[b][a]] != block[T[b][a2]]:
                    return False
    return True


def _norm(part):
    return frozenset(frozenset(c) for c in part)


@pytest.mark.parametrize("alg", catalog(6), ids=lambda a: a.name)
def test_congruences_are_exactly_filter_congruences(alg):
    # brute force over every partition of the carrier
    brute = {_norm(p) for p in _partitions(list(range(alg.size))) if _compatible(alg, p)}
    via_filters = {_norm(congruence_classes(f)) for f in all_filters(alg)}
    assert brute == via_filters
    for f in all_filters(alg):
        classes = congruence_classes(f)
        assert is_congruence(alg, classes)
        assert filter_of_congruence(alg, classes) == f


def test_projection_is_homomorphism():
    for alg in catalog(7):
        for f in all_filters(alg):
            q, proj = quotient_by_filter(alg, f)
            assert is_homomorphism(alg, q, proj, with_zero=True)
            check_algebra(q)


def test_all_filters_are_principal():
    for alg in catalog(6):
        for f in all_filters(alg):
            least = alg.unit
            for a in f:
                least = alg.meet[least][a]
            assert least in f
            assert f.members == {b for b in range(alg.size) if alg.leq(least, b)}


# ---------------------------------------------------------------- embeddings

def test_embedding_examples(cat):
    f, sub = cat["fig1"], cat["fig1sub"]
    h = find_b_embedding(sub, f)
    assert h is not None
    assert sorted(f.labels[i] for i in h) == sorted(["c", "a", "b", "d", "1"])
    b2, c3 = cat["bool2"], cat["chain3"]
    assert find_b_embedding(b2, c3) is not None
    assert is_b_embedding(b2, c3, [c3.index("m"), c3.index("1")])
    assert not is_homomorphism(b2, c3, [c3.index("m"), c3.index("1")], with_zero=True)
    assert find_b_embedding(cat["diamond"], c3) is None


def test_embedding_search_against_brute_force():
    algs = catalog(5)
    for b in algs:
        for a in algs:
            brute = [h for h in itertools.permutations(range(a.size), b.size)
                     if is_b_embedding(b, a, h)]
            found = find_b_embedding(b, a)
            assert found == (min(brute) if brute else None)

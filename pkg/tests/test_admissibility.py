import random

import pytest

from brouwer.admissibility import (
    LogicHandle, SearchBudget, check_transfer_instance, edge_case_admissible,
    falsify_admissibility, find_unifier, images_of_size, independence_check, known_rules,
    semantic_follows, substitutions, variable_pool, verify_falsifier,
)
from brouwer.algebra import eval_formula, load_catalog
from brouwer.birkhoff import catalog
from brouwer.corpus import random_formula
from brouwer.formula import (
    BOTTOM, MRule, Substitution, conj, is_positive, parse_formula, print_formula,
)
from brouwer.prover import Status, prove_int, prove_positive

P = parse_formula
INT = LogicHandle.int_()
POS = LogicHandle.int_positive()


def test_handles_and_budgets():
    assert LogicHandle.int_plus([P("(p -> q) | (q -> p)")]).kind == "Int+[(p->q)|(q->p)]"
    with pytest.raises(ValueError):
        LogicHandle.int_plus([P("p | ~p")])
    with pytest.raises(ValueError):
        SearchBudget(max_instances=-1)


def test_search_order():
    assert variable_pool(["p", "q"], 2) == ("r", "s")
    assert images_of_size(0, ("r",), True) == [BOTTOM, P("r")]
    assert images_of_size(0, ("r",), False) == [P("r")]
    ones = images_of_size(1, ("r",), True)
    assert all(is_positive(f) for f in ones[:3]) and not any(is_positive(f) for f in ones[3:])
    first = [str(s) for s, _ in zip(substitutions(("p",), ("q",), True, 3), range(4))]
    assert first == ["{p↦false}", "{p↦q}", "{p↦q&q}", "{p↦q->q}"]
    assert list(substitutions((), ("q",), True, 3)) == [Substitution()]


def test_unifier_examples():
    assert find_unifier(INT, [P("p")]) == Substitution({"p": P("q -> q")})
    assert find_unifier(INT, [P("false")]) is None
    assert find_unifier(INT, [P("false")], SearchBudget(max_formula=2, pool_size=2)) is None
    s = find_unifier(POS, [P("p | q")])
    assert s is not None and s.positive and prove_positive(s(P("p | q"))).provable
    assert find_unifier(INT, []) == Substitution()
    assert find_unifier(INT, [P("p")], SearchBudget(max_instances=0)) is None
    with pytest.raises(ValueError):
        find_unifier(POS, [P("~p")])


def test_falsifier_examples():
    rule = MRule.from_text("p | q / p")
    w = falsify_admissibility(INT, rule)
    assert w.substitution == Substitution({"p": BOTTOM, "q": P("r -> r")})
    assert [r.status for r in w.premise_results] == [Status.PROVABLE]
    assert [r.status for r in w.conclusion_results] == [Status.NOT_PROVABLE]
    w = falsify_admissibility(POS, rule)
    assert w.substitution == Substitution({"p": P("r"), "q": P("r -> r")})
    assert prove_positive(P("r | (r -> r)")).provable and prove_positive(P("r")).refuted
    payload = w.payload()
    assert payload["conclusions"][0]["status"] == "NotProvable"


def test_witnesses_are_reverified():
    rule = MRule.from_text("p | q / p")
    w = falsify_admissibility(INT, rule)
    for f, res in zip(rule.conclusions, w.conclusion_results):
        alg, v = res.countermodel
        assert eval_formula(alg, v, w.substitution(f)) != alg.unit
    assert verify_falsifier(INT, rule, Substitution({"p": P("q -> q")})) is None


@pytest.mark.parametrize("name", ["harrop", "kuznetsov", "mints", "dp"])
def test_known_rules_not_falsified(name):
    nr = known_rules()[name]
    assert nr.admissible_for_int
    assert falsify_admissibility(INT, nr.rule) is None
    if nr.rule.positive:
        assert falsify_admissibility(POS, nr.rule) is None


def test_known_rule_texts():
    rules = known_rules()
    assert rules["mints"].rule.premises == (P("(p -> q) -> (p | r)"),)
    assert rules["harrop"].rule.premises == (P("~p -> (q | r)"),)
    assert rules["dp"].rule == MRule.from_text("p | q / p, q")


def test_edge_cases():
    empty = MRule()
    w = falsify_admissibility(INT, empty)
    assert w is not None and w.substitution == Substitution()
    assert edge_case_admissible(INT, empty) is False
    gamma_only = MRule.from_text("p | q /")
    w = falsify_admissibility(INT, gamma_only)
    assert w is not None and find_unifier(INT, gamma_only.premises) == w.substitution
    assert edge_case_admissible(INT, gamma_only) is False
    assert falsify_admissibility(INT, MRule.from_text("false /")) is None
    assert edge_case_admissible(INT, MRule.from_text("false /")) is None
    for text, admissible in [("/ p -> p", True), ("/ p, ~p", False), ("/ p | ~p", False),
                             ("/ p, p -> p", True)]:
        rule = MRule.from_text(text)
        assert edge_case_admissible(INT, rule) is admissible
        assert (falsify_admissibility(INT, rule) is None) is admissible
    assert edge_case_admissible(INT, MRule.from_text("p / q")) is None


def test_derivable_rules_are_never_falsified():
    rng = random.Random(11)
    budgets = [SearchBudget(max_formula=2, max_instances=60),
               SearchBudget(max_formula=3, max_instances=150)]
    checked = 0
    while checked < 25:
        gamma = [random_formula(rng, rng.randint(0, 2), ("p", "q"))]
        delta = [random_formula(rng, rng.randint(0, 2), ("p", "q")) for _ in range(2)]
        if not any(prove_int(conj(gamma) >> b, countermodel=False).provable for b in delta):
            continue
        checked += 1
        rule = MRule(tuple(gamma), tuple(delta))
        for b in budgets:
            assert falsify_admissibility(LogicHandle(False, (), b), rule) is None


def test_unifiability_transfers():
    # every positive Γ unified in Int is unified positively by the lift, and vice versa
    rng = random.Random(5)
    budget = SearchBudget(max_formula=3, max_instances=200)
    for _ in range(15):
        gamma = (random_formula(rng, rng.randint(1, 3), ("p", "q"), bottom=False),)
        rule = MRule(gamma, ())
        s = find_unifier(LogicHandle(False, (), budget), gamma)
        if s is not None:
            rep = check_transfer_instance([], rule, s, budget)
            assert rep.applicable and rep.lifted_positive
            assert rep.premise_status_P is Status.PROVABLE
        t = find_unifier(LogicHandle(True, (), budget), gamma)
        if t is not None:
            assert all(prove_int(t(f), countermodel=False).provable for f in gamma)
        assert (s is None) == (t is None)


def test_transfer_examples():
    rule = MRule.from_text("p | q / p")
    rep = check_transfer_instance([], rule, Substitution({"p": BOTTOM, "q": P("r -> r")}))
    assert rep.applicable and rep.consistent
    assert rep.lifted == Substitution({"p": P("p & q & r & w0"), "q": P("r -> r")})
    assert rep.premise_status_P is Status.PROVABLE
    pos = Substitution({"p": P("r"), "q": P("r -> r")})
    rep = check_transfer_instance([], rule, pos)
    assert rep.lifted == pos and rep.consistent
    rep = check_transfer_instance([], rule, Substitution({"p": P("r")}))
    assert not rep.applicable and rep.premise_status_L is Status.NOT_PROVABLE
    with pytest.raises(ValueError):
        check_transfer_instance([], MRule.from_text("~p / p"), Substitution())


def test_transfer_mints_unifiers():
    mints = known_rules()["mints"].rule
    s = find_unifier(INT, mints.premises)
    assert s is not None
    rep = check_transfer_instance([], mints, s)
    assert rep.consistent and rep.some_conclusion_P and rep.some_conclusion_L
    for img in ["false", "r -> false", "~~r", "r | ~r"]:
        s = Substitution({"p": P(img), "q": BOTTOM, "r": P("r -> r")})
        rep = check_transfer_instance([], mints, s)
        if rep.applicable:
            assert rep.consistent and rep.some_conclusion_P


def test_transfer_with_axioms():
    lc = [P("(p -> q) | (q -> p)")]
    rule = MRule.from_text("p | q / p, q")
    s = Substitution({"p": P("r -> false"), "q": P("(r -> false) -> false")})
    rep = check_transfer_instance(lc, rule, s)
    assert rep.applicable is False or rep.consistent


def test_semantic_follows_examples(cat):
    dp = MRule.from_text("p | q / p, q")
    assert semantic_follows(catalog(5), [dp], dp)
    assert semantic_follows([cat["bool2"]], [], dp)
    res = semantic_follows([cat["bool2"], cat["diamond"]], [], dp)
    assert not res and res.witness.name == "diamond"
    mints = known_rules()["mints"].rule
    assert semantic_follows(catalog(6), [], mints)
    res = semantic_follows(catalog(7), [], mints)
    assert not res and res.witness.name == "heyt7_7"


def test_independence_examples(cat):
    dp = MRule.from_text("p | q / p, q")
    fam = [cat["bool2"], cat["diamond"]]
    assert independence_check(fam, [dp]) == [(dp, False)]
    dup = independence_check(fam, [dp, dp])
    assert [d for _, d in dup] == [True, True]
    inst = MRule.from_text("r | s / r, s")
    assert [d for _, d in independence_check(fam, [dp, inst])] == [True, True]


def test_following_ignores_zero_for_positive_rules():
    rng = random.Random(9)
    algs = catalog(5)
    reducts = [a.brouwerian() for a in algs]
    for _ in range(10):
        def rule():
            return MRule((random_formula(rng, rng.randint(0, 2), ("p", "q"), bottom=False),),
                         (random_formula(rng, rng.randint(0, 2), ("p", "q"), bottom=False),))
        rs, r = [rule()], rule()
        a, b = semantic_follows(algs, rs, r), semantic_follows(reducts, rs, r)
        assert a.holds == b.holds

"""Command-line front end.

Exit codes: 0 positive answer, 1 negative answer with a witness, 2 unknown or
budget exhausted, 64 usage error, 65 data error.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass, field
from typing import Callable, Sequence

from . import admissibility as adm
from .algebra import (
    AlgebraError, FiniteAlgebra, adjoin_zero, congruence_classes, eval_formula,
    find_b_embedding, generate_subreduct, generated_filter, load_algebra, load_catalog,
    parse_elements, quotient_by_filter, validates_formula, validates_rule,
)
from .birkhoff import catalog, enumerate_algebras
from .corpus import formula_corpus
from .formula import (
    MRule, ParseError, Substitution, is_positive, parse_formula, print_formula,
)
from .prover import Budget, NotPositive, Status, prove_ext, prove_int, prove_positive
from .reduction import (
    ReductionContext, ReductionError, lift_substitution, pi_reduct, reduce_by_pi,
    wajsberg_reduce,
)
from .variety import load_variety, members, saturation_check, variety_membership

EXIT_YES, EXIT_NO, EXIT_UNKNOWN, EXIT_USAGE, EXIT_DATA = 0, 1, 2, 64, 65

_STATUS_EXIT = {Status.PROVABLE: EXIT_YES, Status.NOT_PROVABLE: EXIT_NO,
                Status.UNKNOWN: EXIT_UNKNOWN}


@dataclass
class CommandOutcome:
    code: int
    text: str
    payload: dict = field(default_factory=dict)
    json: bool = False


class UsageError(Exception):
    pass


class DataError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


# ---------------------------------------------------------------- argument helpers

def _formula(text: str):
    try:
        return parse_formula(text)
    except ParseError as exc:
        raise DataError(f"cannot parse {text!r}: {exc}") from exc


def _names(text: str | None) -> list[str]:
    return [t.strip() for t in (text or "").split(",") if t.strip()]


def _read_json_file(path: str):
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise DataError(f"cannot read {path}: {exc.strerror}") from exc
    except json.JSONDecodeError as exc:
        raise DataError(f"{path}: invalid JSON: {exc}") from exc


def _named_algebras() -> dict[str, FiniteAlgebra]:
    out = {a.name: a for a in catalog(8)}
    try:
        out.update(load_catalog())
    except (OSError, json.JSONDecodeError) as exc:
        raise DataError(f"cannot load catalog: {exc}") from exc
    return out


def _algebra(ref: str) -> FiniteAlgebra:
    """Resolve a catalog name or a path to an algebra JSON document."""
    if os.path.exists(ref):
        doc = _read_json_file(ref)
        if isinstance(doc, list):
            if len(doc) != 1:
                raise DataError(f"{ref}: expected a single algebra document")
            doc = doc[0]
        return load_algebra(doc)
    named = _named_algebras()
    if ref not in named:
        raise DataError(f"unknown algebra {ref!r}")
    return named[ref]


def _family(refs: Sequence[str] | None, max_size: int) -> list[FiniteAlgebra]:
    if refs:
        return [_algebra(r) for r in refs]
    return list(catalog(max_size))


def _rule(ref: str) -> MRule:
    """A rule file path or inline text ``"A, B / C"``."""
    if os.path.exists(ref):
        doc = _read_json_file(ref)
        try:
            return MRule.from_json(doc)
        except (ParseError, AttributeError, TypeError) as exc:
            raise DataError(f"{ref}: malformed rule: {exc}") from exc
    try:
        return MRule.from_text(ref)
    except ParseError as exc:
        raise DataError(f"cannot parse rule {ref!r}: {exc}") from exc


def _substitution(text: str) -> Substitution:
    if os.path.exists(text):
        return Substitution.from_json(_read_json_file(text))
    images = {}
    for item in _names(text):
        if "=" not in item:
            raise DataError(f"substitution entries look like v=formula, got {item!r}")
        v, f = item.split("=", 1)
        images[v.strip()] = _formula(f)
    return Substitution(images)


def _elements(alg: FiniteAlgebra, text: str | None) -> list[int]:
    try:
        return parse_elements(alg, text or "")
    except KeyError as exc:
        raise DataError(str(exc.args[0])) from exc


def _valuation(alg: FiniteAlgebra, text: str | None) -> dict[str, int]:
    out = {}
    for item in _names(text):
        if "=" not in item:
            raise DataError(f"valuation entries look like p=label, got {item!r}")
        v, lab = item.split("=", 1)
        out[v.strip()] = _elements(alg, lab)[0]
    return out


def _search_budget(args) -> adm.SearchBudget:
    return adm.SearchBudget(max_formula=args.max_formula, pool_size=args.pool_size,
                            max_size=args.max_size, max_instances=args.max_instances)


def _logic(args) -> adm.LogicHandle:
    axioms = tuple(_formula(a) for a in args.axiom or ())
    return adm.LogicHandle(args.logic == "pos", axioms, _search_budget(args))


def _fmt_valuation(alg: FiniteAlgebra, v) -> str:
    return " ".join(f"{k}={lab}" for k, lab in alg.label_valuation(v).items())


# ---------------------------------------------------------------- commands

def _proof_outcome(res) -> CommandOutcome:
    lines = [res.status.value]
    if res.countermodel is not None:
        alg, v = res.countermodel
        lines.append(f"countermodel: {alg.name} {_fmt_valuation(alg, v)}".rstrip())
    if res.instances:
        lines.append("instances: " + "; ".join(print_formula(f) for f in res.instances))
    return CommandOutcome(_STATUS_EXIT[res.status], "\n".join(lines), res.payload())


def cmd_prove(args) -> CommandOutcome:
    return _proof_outcome(prove_int(_formula(args.formula), max_size=args.max_size))


def cmd_prove_pos(args) -> CommandOutcome:
    try:
        return _proof_outcome(prove_positive(_formula(args.formula), max_size=args.max_size))
    except NotPositive as exc:
        raise DataError(str(exc)) from exc


def cmd_prove_ext(args) -> CommandOutcome:
    axioms = [_formula(a) for a in args.axiom or ()]
    budget = Budget(max_size=args.max_size, max_instances=args.max_instances)
    try:
        res = prove_ext(axioms, _formula(args.formula), budget, positive=args.positive)
    except NotPositive as exc:
        raise DataError(str(exc)) from exc
    return _proof_outcome(res)


def cmd_reduce(args) -> CommandOutcome:
    f = _formula(args.formula) if args.formula else None
    pi = _names(args.pi)
    try:
        if args.mode == "lift":
            if not args.subst or not pi:
                raise UsageError("reduce lift needs --subst and --pi")
            s = lift_substitution(_substitution(args.subst), pi)
            return CommandOutcome(EXIT_YES, str(s), {"substitution": s.to_json()})
        if f is None:
            raise UsageError(f"reduce {args.mode} needs a formula")
        if args.mode == "pi":
            out = reduce_by_pi(f, pi) if pi else pi_reduct(f)
        else:
            if pi:
                fresh = args.fresh or pi[-1]
                ctx = ReductionContext(tuple(pi), fresh)
            else:
                ctx = None
            out = wajsberg_reduce(f, ctx)
    except ReductionError as exc:
        raise DataError(str(exc)) from exc
    text = print_formula(out)
    return CommandOutcome(EXIT_YES, text, {"formula": text})


def cmd_eval(args) -> CommandOutcome:
    alg = _algebra(args.algebra)
    v = _valuation(alg, args.val)
    f = _formula(args.formula)
    try:
        value = eval_formula(alg, v, f)
    except (KeyError, ValueError) as exc:
        raise DataError(str(exc)) from exc
    lab = alg.labels[value]
    return CommandOutcome(EXIT_YES, lab, {"algebra": alg.name, "value": lab})


def cmd_valid(args) -> CommandOutcome:
    alg = _algebra(args.algebra)
    verdict = validates_formula(alg, _formula(args.formula))
    payload = {"algebra": alg.name, "valid": verdict.valid}
    if verdict.valid:
        return CommandOutcome(EXIT_YES, "valid", payload)
    payload.update(valuation=alg.label_valuation(verdict.valuation),
                   value=alg.labels[verdict.value])
    return CommandOutcome(EXIT_NO, f"refuted: {_fmt_valuation(alg, verdict.valuation)} "
                                   f"value={alg.labels[verdict.value]}", payload)


def cmd_check_rule(args) -> CommandOutcome:
    alg = _algebra(args.algebra)
    rule = _rule(args.rule)
    verdict = validates_rule(alg, rule)
    payload = {"algebra": alg.name, "rule": rule.to_json(), "valid": verdict.valid}
    if verdict.valid:
        return CommandOutcome(EXIT_YES, "valid", payload)
    payload["valuation"] = alg.label_valuation(verdict.valuation)
    return CommandOutcome(EXIT_NO, f"refuted: {_fmt_valuation(alg, verdict.valuation)}",
                          payload)


def _carrier_payload(alg: FiniteAlgebra) -> dict:
    return {"name": alg.name, "carrier": list(alg.labels),
            "zero": None if alg.zero is None else alg.labels[alg.zero],
            "unit": alg.labels[alg.unit]}


def cmd_subreduct(args) -> CommandOutcome:
    alg = _algebra(args.algebra)
    gens = _elements(alg, args.gens)
    if not gens:
        raise UsageError("subreduct needs at least one generator")
    sub = generate_subreduct(alg, gens)
    payload = _carrier_payload(sub)
    if args.full:
        payload["algebra"] = sub.to_json()
    return CommandOutcome(EXIT_YES, "{" + ", ".join(sub.labels) + "}", payload)


def cmd_adjoin_zero(args) -> CommandOutcome:
    alg = _algebra(args.algebra)
    if args.gens:
        alg = generate_subreduct(alg, _elements(alg, args.gens))
    out = adjoin_zero(alg.brouwerian() if alg.zero is not None else alg, force=args.force)
    payload = _carrier_payload(out)
    payload["algebra"] = out.to_json()
    return CommandOutcome(EXIT_YES, f"zero={out.labels[out.zero]} carrier="
                          "{" + ", ".join(out.labels) + "}", payload)


def cmd_filter(args) -> CommandOutcome:
    alg = _algebra(args.algebra)
    flt = generated_filter(alg, _elements(alg, args.gens))
    classes = [[alg.labels[i] for i in c] for c in congruence_classes(flt)]
    payload = {"algebra": alg.name, "filter": flt.labels(), "classes": classes}
    return CommandOutcome(EXIT_YES, "{" + ", ".join(flt.labels()) + "}", payload)


def cmd_quotient(args) -> CommandOutcome:
    alg = _algebra(args.algebra)
    flt = generated_filter(alg, _elements(alg, args.gens))
    q, proj = quotient_by_filter(alg, flt)
    payload = {"algebra": alg.name, "filter": flt.labels(), "quotient": q.to_json(),
               "projection": {alg.labels[i]: q.labels[j] for i, j in enumerate(proj)}}
    text = f"quotient of size {q.size}: " + ", ".join(
        f"{alg.labels[i]}->{q.labels[j]}" for i, j in enumerate(proj))
    return CommandOutcome(EXIT_YES, text, payload)


def cmd_embed(args) -> CommandOutcome:
    b, a = _algebra(args.source), _algebra(args.target)
    h = find_b_embedding(b, a)
    if h is None:
        return CommandOutcome(EXIT_NO, "no B-embedding", {"embedding": None})
    mapping = {b.labels[i]: a.labels[j] for i, j in enumerate(h)}
    text = ", ".join(f"{k}->{v}" for k, v in mapping.items())
    return CommandOutcome(EXIT_YES, text, {"embedding": mapping})


def cmd_enumerate(args) -> CommandOutcome:
    algs = list(enumerate_algebras(args.max_size))
    counts = [0] * args.max_size
    for a in algs:
        counts[a.size - 1] += 1
    lines = [f"{a.name}\t{a.size}" for a in algs]
    lines.append("counts: " + " ".join(map(str, counts)))
    payload = {"counts": counts, "algebras": [a.name for a in algs]}
    if args.full:
        payload["documents"] = [a.to_json() for a in algs]
    return CommandOutcome(EXIT_YES, "\n".join(lines), payload)


def _variety(ref: str):
    try:
        return load_variety(ref)
    except FileNotFoundError as exc:
        raise DataError(str(exc)) from exc
    except (KeyError, ParseError, json.JSONDecodeError) as exc:
        raise DataError(f"{ref}: malformed variety spec: {exc}") from exc


def cmd_member(args) -> CommandOutcome:
    spec, alg = _variety(args.variety), _algebra(args.algebra)
    m = variety_membership(alg, spec)
    payload = {"variety": spec.name, "algebra": alg.name, "member": m.member}
    if m.member:
        return CommandOutcome(EXIT_YES, "member", payload)
    payload.update(axiom=print_formula(m.axiom), valuation=alg.label_valuation(m.valuation),
                   value=alg.labels[m.value])
    return CommandOutcome(EXIT_NO, f"not a member: {print_formula(m.axiom)} fails at "
                          f"{_fmt_valuation(alg, m.valuation)} value={alg.labels[m.value]}",
                          payload)


def cmd_saturation_check(args) -> CommandOutcome:
    spec = _variety(args.variety)
    if args.catalog:
        family = [_algebra(r) for r in args.catalog]
        outsiders = [a.name for a in family if not variety_membership(a, spec)]
        if outsiders:
            raise DataError(f"not members of {spec.name}: {', '.join(outsiders)}")
    else:
        family = members(spec, catalog(args.max_size))
    w = saturation_check(spec, family, args.max_gens)
    if w is None:
        return CommandOutcome(EXIT_YES, f"no counterexample among {len(family)} members",
                              {"variety": spec.name, "witness": None,
                               "checked": [a.name for a in family]})
    p = w.payload()
    text = (f"counterexample: {p['algebra']} generators ({', '.join(p['generators'])}) "
            f"subreduct {{{', '.join(p['subreduct'])}}} zero {p['zero']}; "
            f"{p['axiom']} fails at {' '.join(f'{k}={v}' for k, v in p['valuation'].items())} "
            f"value={p['value']}")
    return CommandOutcome(EXIT_NO, text, {"variety": spec.name, **p})


def _check_logic_input(logic: adm.LogicHandle, formulas) -> None:
    if logic.positive and not all(map(is_positive, formulas)):
        raise DataError("positive logic needs ⊥-free formulas")


def cmd_unify(args) -> CommandOutcome:
    logic = _logic(args)
    gamma = [_formula(f) for f in args.formulas]
    _check_logic_input(logic, gamma)
    s = adm.find_unifier(logic, gamma)
    payload = {"logic": logic.kind, "unifier": None if s is None else s.to_json()}
    if s is None:
        return CommandOutcome(EXIT_UNKNOWN, "no unifier within budget", payload)
    return CommandOutcome(EXIT_YES, str(s), payload)


def cmd_falsify(args) -> CommandOutcome:
    logic = _logic(args)
    rule = _rule(args.rule)
    _check_logic_input(logic, rule.premises + rule.conclusions)
    w = adm.falsify_admissibility(logic, rule)
    if w is None:
        return CommandOutcome(EXIT_YES, "no falsifier within budget",
                              {"logic": logic.kind, "rule": rule.to_json(), "falsifier": None})
    return CommandOutcome(EXIT_NO, f"not admissible: {w.substitution}",
                          {"logic": logic.kind, "rule": rule.to_json(), "falsifier": w.payload()})


def cmd_transfer(args) -> CommandOutcome:
    axioms = [_formula(a) for a in args.axiom or ()]
    rule = _rule(args.rule)
    if not rule.positive or not all(map(is_positive, axioms)):
        raise DataError("transfer needs a positive rule and positive axioms")
    rep = adm.check_transfer_instance(axioms, rule, _substitution(args.subst),
                                      _search_budget(args))
    payload = rep.payload()
    if not rep.applicable:
        code = EXIT_UNKNOWN if rep.premise_status_L is Status.UNKNOWN else EXIT_YES
        return CommandOutcome(code, "sigma does not unify the premises", payload)
    code = EXIT_UNKNOWN if rep.unknown else (EXIT_YES if rep.consistent else EXIT_NO)
    lines = [f"lifted: {rep.lifted}", f"premises: L={rep.premise_status_L} P={rep.premise_status_P}"]
    lines += [f"{print_formula(b)}: L={a} P={c}" for b, a, c in rep.conclusions]
    lines.append("consistent" if rep.consistent else "contradiction")
    return CommandOutcome(code, "\n".join(lines), payload)


def cmd_follows(args) -> CommandOutcome:
    rule = _rule(args.rule)
    rules = [_rule(r) for r in args.rules or ()]
    family = _family(args.family, args.max_size)
    res = adm.semantic_follows(family, rules, rule)
    payload = {"follows": res.holds, "witness": res.witness and res.witness.name}
    if res.holds:
        return CommandOutcome(EXIT_YES, "follows", payload)
    return CommandOutcome(EXIT_NO, f"does not follow: {res.witness.name}", payload)


def cmd_independent(args) -> CommandOutcome:
    rules = [_rule(r) for r in args.rules]
    family = _family(args.family, args.max_size)
    res = adm.independence_check(family, rules)
    payload = {"rules": [{"rule": r.to_json(), "dependent": d} for r, d in res]}
    lines = [f"{r}: {'dependent' if d else 'independent'}" for r, d in res]
    code = EXIT_NO if any(d for _, d in res) else EXIT_YES
    return CommandOutcome(code, "\n".join(lines), payload)


def cmd_corpus(args) -> CommandOutcome:
    fs = [print_formula(f) for f in formula_corpus(n_random=args.n_random, seed=args.seed)]
    if args.count:
        return CommandOutcome(EXIT_YES, str(len(fs)), {"count": len(fs)})
    return CommandOutcome(EXIT_YES, "\n".join(fs), {"formulas": fs})


# ---------------------------------------------------------------- parser

def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--json", action="store_true", help="emit the structured payload")
    common.add_argument("--max-size", type=int, default=6, help="largest algebra searched (6)")
    common.add_argument("--max-formula", type=int, default=7,
                        help="largest substitution image, in connectives (7)")
    common.add_argument("--max-instances", type=int, default=500,
                        help="cap on candidate instances (500)")
    common.add_argument("--pool-size", type=int, default=1,
                        help="fresh variables available to substitution images (1)")

    parser = _Parser(prog="brouwer", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name: str, func: Callable, help: str) -> argparse.ArgumentParser:
        p = sub.add_parser(name, parents=[common], help=help)
        p.set_defaults(func=func)
        return p

    def logic_flags(p):
        p.add_argument("--logic", choices=("int", "pos"), default="int")
        p.add_argument("--axiom", action="append", help="positive extra axiom (repeatable)")

    p = add("prove", cmd_prove, "decide intuitionistic theoremhood")
    p.add_argument("formula")
    p = add("prove-pos", cmd_prove_pos, "decide positive theoremhood")
    p.add_argument("formula")
    p = add("prove-ext", cmd_prove_ext, "bounded search in Int plus positive axioms")
    p.add_argument("formula")
    p.add_argument("--axiom", action="append")
    p.add_argument("--positive", action="store_true", help="use the positive fragment")

    p = add("reduce", cmd_reduce, "pi-reduct, Wajsberg reduction, or lifted substitution")
    p.add_argument("mode", choices=("pi", "wajsberg", "lift"))
    p.add_argument("formula", nargs="?")
    p.add_argument("--pi", help="comma-separated variables")
    p.add_argument("--fresh", help="fresh variable of pi (wajsberg)")
    p.add_argument("--subst", help="v=formula,... or a JSON file (lift)")

    p = add("eval", cmd_eval, "value of a formula under a valuation")
    p.add_argument("algebra")
    p.add_argument("formula")
    p.add_argument("--val", help="p=label,...")
    p = add("valid", cmd_valid, "validity of a formula in an algebra")
    p.add_argument("algebra")
    p.add_argument("formula")
    p = add("check-rule", cmd_check_rule, "validity of a rule in an algebra")
    p.add_argument("algebra")
    p.add_argument("rule", help="rule JSON file or 'A, B / C'")

    p = add("subreduct", cmd_subreduct, "subreduct generated by elements")
    p.add_argument("algebra")
    p.add_argument("--gens", required=True)
    p.add_argument("--full", action="store_true", help="include the tables")
    p = add("adjoin-zero", cmd_adjoin_zero, "turn a Brouwerian algebra into a Heyting one")
    p.add_argument("algebra")
    p.add_argument("--gens", help="first restrict to the generated subreduct")
    p.add_argument("--force", action="store_true", help="always add a new bottom")
    p = add("filter", cmd_filter, "filter generated by elements")
    p.add_argument("algebra")
    p.add_argument("--gens", default="")
    p = add("quotient", cmd_quotient, "quotient by a generated filter")
    p.add_argument("algebra")
    p.add_argument("--gens", default="")
    p = add("embed", cmd_embed, "find a B-embedding")
    p.add_argument("source")
    p.add_argument("target")
    p = add("enumerate", cmd_enumerate, "list Heyting algebras up to --max-size")
    p.add_argument("--full", action="store_true", help="include the tables")

    p = add("member", cmd_member, "variety membership")
    p.add_argument("variety")
    p.add_argument("algebra")
    p = add("saturation-check", cmd_saturation_check, "bounded B-saturation check")
    p.add_argument("variety")
    p.add_argument("--catalog", nargs="+", help="algebras to check (default: members up to --max-size)")
    p.add_argument("--max-gens", type=int, default=2)

    p = add("unify", cmd_unify, "search for a unifier")
    p.add_argument("formulas", nargs="+")
    logic_flags(p)
    p = add("falsify", cmd_falsify, "search for a non-admissibility certificate")
    p.add_argument("rule")
    logic_flags(p)
    p = add("transfer", cmd_transfer, "compare a unifier with its positive lift")
    p.add_argument("rule")
    p.add_argument("--subst", required=True)
    p.add_argument("--axiom", action="append")
    p = add("follows", cmd_follows, "semantic consequence between rules over a family")
    p.add_argument("rule")
    p.add_argument("--rules", nargs="*")
    p.add_argument("--family", nargs="+")
    p = add("independent", cmd_independent, "independence of a rule set over a family")
    p.add_argument("rules", nargs="+")
    p.add_argument("--family", nargs="+")
    p = add("corpus", cmd_corpus, "print the fixed formula corpus")
    p.add_argument("--count", action="store_true")
    p.add_argument("--n-random", type=int, default=50)
    p.add_argument("--seed", type=int, default=2024)
    return parser


def _check_budget(args) -> None:
    for name in ("max_size", "max_formula", "max_instances", "pool_size"):
        if getattr(args, name) < 0:
            raise UsageError(f"--{name.replace('_', '-')} must be non-negative")
    if args.max_size < 1:
        raise UsageError("--max-size must be at least 1")


def run(argv: Sequence[str]) -> CommandOutcome:
    try:
        args = build_parser().parse_args(list(argv))
        _check_budget(args)
        out = args.func(args)
    except UsageError as exc:
        return CommandOutcome(EXIT_USAGE, f"usage error: {exc}", {"error": str(exc)})
    except (DataError, AlgebraError, ParseError) as exc:
        return CommandOutcome(EXIT_DATA, f"data error: {exc}", {"error": str(exc)})
    out.payload.setdefault("exit", out.code)
    out.json = args.json
    return out


def main(argv: Sequence[str] | None = None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    if any(a in ("-h", "--help") for a in argv):
        try:
            build_parser().parse_args(list(argv))
        except SystemExit as exc:
            return int(exc.code or 0)
    out = run(argv)
    stream = sys.stdout if out.code in (EXIT_YES, EXIT_NO, EXIT_UNKNOWN) else sys.stderr
    if out.json:
        print(json.dumps(out.payload, sort_keys=True, ensure_ascii=False), file=stream)
    else:
        print(out.text, file=stream)
    return out.code


if __name__ == "__main__":
    sys.exit(main())

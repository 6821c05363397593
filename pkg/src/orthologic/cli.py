"""Command-line entry point.

Exit codes: 0 affirmative or accepted, 1 counterexample or rejected, 2 usage
or input error.  Every subcommand takes ``--json``.
"""

from __future__ import annotations

import argparse
import json
import sys
from importlib import resources
from pathlib import Path
from typing import Callable

from orthologic import catalog, lindenbaum, proofs, semantics
from orthologic.formula import FormulaSyntaxError, depth, expand, parse, render, variables
from orthologic.lattice import (
    LatticeError,
    builtin,
    class_report,
    format_lattice,
    hasse_export,
    parse_lattice,
)

OK, NO, USAGE = 0, 1, 2


class InputError(Exception):
    pass


def load_schema(name: str) -> dict:
    """JSON schema for the ``--json`` output of a command (``lindenbaum-record`` per line)."""
    return json.loads(resources.files("orthologic").joinpath("schemas", f"{name}.json").read_text())


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(USAGE, f"{self.prog}: error: {message}\n")


def _emit(args, payload: dict, lines: list[str]) -> None:
    if args.json:
        print(json.dumps(payload, sort_keys=True))
    else:
        for line in lines:
            print(line)


def _formula(text: str):
    try:
        return parse(text)
    except FormulaSyntaxError as e:
        raise InputError(str(e)) from e


def _lattice(args):
    if args.lattice:
        try:
            return parse_lattice(Path(args.lattice).read_text()), args.lattice
        except OSError as e:
            raise InputError(str(e)) from e
        except LatticeError as e:
            raise InputError(f"{args.lattice}: {e}") from e
    try:
        return builtin(args.builtin), args.builtin
    except KeyError as e:
        raise InputError(e.args[0]) from e


def _add_lattice_args(p):
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--lattice", metavar="FILE", help="lattice file")
    g.add_argument("--builtin", metavar="NAME", help="two, O6, MO2, B2, B3, B4")


def _max_size(p, default=catalog.DEFAULT_MAX_SIZE):
    p.add_argument("--max-size", type=int, default=default)


def _catalog(n: int):
    try:
        return catalog.enumerate(n)
    except catalog.BoundExceeded as e:
        raise InputError(str(e)) from e


# -- commands ---------------------------------------------------------------


def cmd_parse(args) -> int:
    f = _formula(args.formula)
    g = expand(f)
    payload = {
        "formula": render(f),
        "unicode": render(f, unicode=True),
        "primitive": render(g),
        "depth": depth(g),
        "variables": [f"p{v}" for v in variables(f)],
    }
    _emit(args, payload, [f"{k}: {v}" for k, v in payload.items()])
    return OK


def cmd_check_lattice(args) -> int:
    try:
        text = Path(args.file).read_text()
    except OSError as e:
        raise InputError(str(e)) from e
    try:
        L = parse_lattice(text)
    except LatticeError as e:
        if e.condition == "lattice file syntax":
            raise InputError(str(e)) from e
        payload = {"valid": False, "condition": e.condition, "witness": list(e.witness), "message": str(e)}
        _emit(args, payload, [f"rejected: {e}"])
        return NO
    canon = format_lattice(L)
    _emit(args, {"valid": True, "size": L.n, "canonical": canon}, [canon.rstrip("\n")])
    return OK


def cmd_classify(args) -> int:
    L, label = _lattice(args)
    rep = class_report(L)
    flags = rep.flags
    payload = {
        "lattice": label,
        "size": L.n,
        "ol": flags.ol,
        "woml": flags.woml,
        "wdol": flags.wdol,
        "oml": flags.oml,
        "ba": flags.boolean,
        "witnesses": {
            "woml": rep.woml_witness,
            "wdol": rep.wdol_witness,
            "oml": rep.oml_by_equiv_witness,
            "ba": rep.ba_by_equiv0_witness,
        },
    }
    lines = [flags.as_line()]
    if args.verbose:
        for k, w in payload["witnesses"].items():
            if w:
                lines.append(f"{k} fails at {', '.join(w)}")
    _emit(args, payload, lines)
    return OK


def cmd_catalog_enumerate(args) -> int:
    entries = _catalog(args.max_size)
    index = catalog.write_catalog(entries, args.out) if args.out else None
    payload = {
        "max_size": args.max_size,
        "count": len(entries),
        "index": str(index) if index else None,
        "entries": [
            {"name": e.name, "key": e.canonical_key, "size": e.size, "flags": e.flags.as_line()} for e in entries
        ],
    }
    lines = [f"{e.canonical_key}\t{e.size}\t{e.flags.as_line()}\t{e.name}" for e in entries]
    lines.append(f"{len(entries)} ortholattices" + (f", index at {index}" if index else ""))
    _emit(args, payload, lines)
    return OK


def cmd_catalog_witness(args) -> int:
    required = {k: bool(v) for k in ("woml", "wdol", "oml", "ba") if (v := getattr(args, k)) is not None}
    if "ba" in required:
        required["boolean"] = required.pop("ba")
    hit = catalog.witness_search(_catalog(args.max_size), **required)
    if hit is None:
        _emit(args, {"found": False}, ["no witness"])
        return NO
    payload = {"found": True, "name": hit.name, "key": hit.canonical_key, "lattice": format_lattice(hit.lattice)}
    _emit(args, payload, [f"# {hit.name} {hit.flags.as_line()}", format_lattice(hit.lattice).rstrip("\n")])
    return OK


def _read_gamma(path: str | None, inline: list[str]) -> list:
    texts = list(inline or [])
    if path:
        try:
            raw = Path(path).read_text()
        except OSError as e:
            raise InputError(str(e)) from e
        texts += [t.split("#", 1)[0] for t in raw.splitlines()]
    return [_formula(t) for t in texts if t.strip()]


def _verdict_out(args, verdict, extra: dict) -> int:
    payload = {"valid": verdict.valid, "counterexample": verdict.describe() or None, **extra}
    lines = ["valid"] if verdict.valid else ["counterexample:", *verdict.describe()]
    _emit(args, payload, lines)
    return OK if verdict.valid else NO


def cmd_validate(args) -> int:
    L, label = _lattice(args)
    f = _formula(args.formula)
    gamma = _read_gamma(args.gamma, [])
    v = semantics.is_consequence(L, gamma, f) if gamma else semantics.is_valid(L, f)
    return _verdict_out(args, v, {"lattice": label, "formula": render(f)})


def cmd_consequence(args) -> int:
    L, label = _lattice(args)
    f = _formula(args.formula)
    gamma = _read_gamma(args.gamma_file, args.premise)
    v = semantics.is_consequence(L, gamma, f)
    return _verdict_out(args, v, {"lattice": label, "formula": render(f), "gamma": [render(g) for g in gamma]})


def cmd_tautology(args) -> int:
    f = _formula(args.formula)
    ok = semantics.tautology(f)
    _emit(args, {"formula": render(f), "tautology": ok}, ["tautology" if ok else "not a tautology"])
    return OK if ok else NO


def cmd_oml_valid(args) -> int:
    f = _formula(args.formula)
    try:
        ok = semantics.oml_valid(f)
    except semantics.TooManyVariables as e:
        raise InputError(str(e)) from e
    _emit(args, {"formula": render(f), "oml_valid": ok}, ["OML-valid" if ok else "not OML-valid"])
    return OK if ok else NO


def cmd_soundness(args) -> int:
    rep = semantics.soundness_suite(args.logic, _catalog(args.max_size))
    payload = {
        "logic": rep.logic,
        "ok": rep.ok,
        "checked": rep.checked,
        "skipped": rep.skipped,
        "instances_per_entry": rep.instances_per_entry,
        "violations": [vars(v) for v in rep.violations],
        "rule_failures": [list(r) for r in rep.rule_failures],
        "outside_class_failures": rep.outside_class_failures,
    }
    lines = [
        f"{rep.logic}: {len(rep.checked)} models checked, {rep.instances_per_entry} instances each",
        *[f"violation in {v.entry}: {v.schema} {v.instance} at {', '.join(v.counterexample)}" for v in rep.violations],
        *[f"R1 not closed in {e}: a={a} b={b}" for e, a, b in rep.rule_failures],
        *[f"outside the class: {e} fails {', '.join(s)}" for e, s in rep.outside_class_failures.items() if s],
        "sound" if rep.ok else "UNSOUND",
    ]
    _emit(args, payload, lines)
    return OK if rep.ok else NO


def cmd_prove_check(args) -> int:
    try:
        script = proofs.parse_script(Path(args.file).read_text())
    except OSError as e:
        raise InputError(str(e)) from e
    except proofs.ProofError as e:
        raise InputError(str(e)) from e
    v = proofs.check_proof(script)
    payload = {"accepted": v.accepted, "step": v.step, "reason": v.reason, "steps": len(script.steps)}
    line = f"accepted ({len(script.steps)} steps)" if v.accepted else f"rejected at step {v.step}: {v.reason}"
    _emit(args, payload, [line])
    return OK if v.accepted else NO


_BUILTIN_PROOFS = {
    "orthomodular": ("OML", proofs.ORTHOMODULAR_PROOF),
    "distributive": ("BA", proofs.DISTRIBUTIVE_PROOF),
    "identity": ("OML", proofs.IDENTITY_PROOF),
}


def cmd_simulate(args) -> int:
    if args.file:
        try:
            raw = Path(args.file).read_text().splitlines()
            steps = [proofs.equation(t.split("#", 1)[0]) for t in raw if t.split("#", 1)[0].strip()]
        except OSError as e:
            raise InputError(str(e)) from e
        except (proofs.ProofError, FormulaSyntaxError) as e:
            raise InputError(str(e)) from e
        target = args.target or "OML"
    else:
        default_target, steps = _BUILTIN_PROOFS[args.proof]
        target = args.target or default_target
    rep = proofs.simulate_equational(steps, target, _catalog(args.max_size))
    payload = {
        "target": rep.target,
        "models": rep.models,
        "all_mapped_valid": rep.all_mapped_valid,
        "O6_separates": rep.O6_separates,
        "steps": [
            {
                "equation": f"{render(s.step.lhs)} == {render(s.step.rhs)}",
                "mapped": render(s.mapped),
                "mapped_valid": s.mapped_valid_everywhere,
                "mapped_failures": s.mapped_failures,
                "holds_in_O6": s.unmapped_holds_in_O6,
                "O6_witness": s.unmapped_O6_witness,
            }
            for s in rep.steps
        ],
    }
    lines = []
    for s in payload["steps"]:
        tail = "holds in O6" if s["holds_in_O6"] else f"fails in O6 at {', '.join(s['O6_witness'])}"
        mark = "valid" if s["mapped_valid"] else f"INVALID in {', '.join(s['mapped_failures'])}"
        lines.append(f"{s['equation']}: mapped {mark}; {tail}")
    _emit(args, payload, lines)
    return OK if rep.all_mapped_valid else NO


def cmd_lindenbaum(args) -> int:
    try:
        records = list(lindenbaum.lindenbaum_report(args.logic, args.kind, args.vars, args.depth))
    except lindenbaum.BoundExceeded as e:
        raise InputError(str(e)) from e
    text = lindenbaum.dump_jsonl(records)
    if args.report:
        Path(args.report).write_text(text)
    head = records[0]
    laws = [r for r in records if r["record"] == "law"]
    if args.json:
        sys.stdout.write(text)
    else:
        print(f"{head['logic']} {head['kind']}: {head['classes']} classes over {head['universe_size']} formulas")
        for r in laws:
            w = f" at {', '.join(r['witness'])}" if r["witness"] else ""
            print(f"{r['law']}: {r['status']} (coverage {r['coverage']:.3f}){w}")
    return OK


def cmd_hasse(args) -> int:
    L, label = _lattice(args)
    dot = hasse_export(L, title=label)
    if args.out:
        Path(args.out).write_text(dot)
    if args.json:
        print(json.dumps({"lattice": label, "dot": dot}, sort_keys=True))
    elif not args.out:
        sys.stdout.write(dot)
    return OK


# -- wiring -----------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    top = _Parser(prog="orthologic", description="Ortholattice models, valuations and proof checking.")
    sub = top.add_subparsers(dest="command", required=True, parser_class=_Parser)
    common = _Parser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable output")

    def add(name: str, fn: Callable, help: str):
        p = sub.add_parser(name, parents=[common], help=help)
        p.set_defaults(func=fn)
        return p

    p = add("parse", cmd_parse, "parse and render a formula")
    p.add_argument("--formula", required=True)

    p = add("check-lattice", cmd_check_lattice, "validate a lattice file and echo its canonical form")
    p.add_argument("file")

    p = add("classify", cmd_classify, "report OL/WOML/WDOL/OML/BA membership")
    _add_lattice_args(p)
    p.add_argument("--verbose", action="store_true")

    p = sub.add_parser("catalog", help="enumerate small ortholattices")
    csub = p.add_subparsers(dest="action", required=True, parser_class=_Parser)
    q = csub.add_parser("enumerate", parents=[common])
    q.set_defaults(func=cmd_catalog_enumerate)
    _max_size(q)
    q.add_argument("--out", metavar="DIR")
    q = csub.add_parser("witness", parents=[common])
    q.set_defaults(func=cmd_catalog_witness)
    _max_size(q)
    for flag in ("woml", "wdol", "oml", "ba"):
        q.add_argument(f"--{flag}", type=int, choices=(0, 1))

    p = add("validate", cmd_validate, "validity (or consequence from --gamma) in one lattice")
    _add_lattice_args(p)
    p.add_argument("--formula", required=True)
    p.add_argument("--gamma", metavar="FILE", help="one premise per line")

    p = add("consequence", cmd_consequence, "Gamma |= f in one lattice")
    _add_lattice_args(p)
    p.add_argument("--formula", required=True)
    p.add_argument("--premise", action="append", default=[])
    p.add_argument("--gamma-file", metavar="FILE")

    p = add("tautology", cmd_tautology, "classical truth-table check")
    p.add_argument("--formula", required=True)

    p = add("oml-valid", cmd_oml_valid, "validity in every OML (at most 2 variables)")
    p.add_argument("--formula", required=True)

    p = add("soundness", cmd_soundness, "axiom instances and R1 closure over the catalog")
    p.add_argument("--logic", choices=("QL", "CL"), type=str.upper, required=True)
    _max_size(p)

    p = add("prove-check", cmd_prove_check, "check a proof script")
    p.add_argument("file")

    p = add("simulate", cmd_simulate, "map an equational proof to t==s=1 and check it")
    g = p.add_mutually_exclusive_group()
    g.add_argument("--proof", choices=sorted(_BUILTIN_PROOFS), default="orthomodular")
    g.add_argument("--file", metavar="FILE", help="one 't == s' per line")
    p.add_argument("--target", choices=("OML", "BA"), type=str.upper)
    _max_size(p)

    p = add("lindenbaum", cmd_lindenbaum, "bounded Lindenbaum quotient and law checks")
    p.add_argument("--logic", choices=("QL", "CL"), type=str.upper, required=True)
    p.add_argument("--kind", choices=("refined", "standard"), required=True)
    p.add_argument("--vars", type=int, default=2)
    p.add_argument("--depth", type=int, default=5)
    p.add_argument("--report", metavar="PATH")

    p = add("hasse", cmd_hasse, "DOT export of the covering relation")
    _add_lattice_args(p)
    p.add_argument("--out", metavar="FILE")
    return top


def run(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    try:
        return args.func(args)
    except InputError as e:
        print(f"error: {e}", file=sys.stderr)
        return USAGE


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()

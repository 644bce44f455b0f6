"""Command-line surface.

Exit codes: 0 ok; 1 property violated or formula invalid / not in the
class; 2 usage error (bad flags, bad formula or frame text); 3 guardrail
exceeded (use --max-worlds to override where documented).
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from . import selfcheck as selfcheck_module
from .axioms import SCHEMA_NAMES, sahlqvist_check, schema
from .breakdown import BreakdownEngine, fast_extension, invariant_subdomain_check
from .corpus import formula_corpus
from .diversity import (diversity, diversity_generated, duplicate_structure,
                        quotient_to_dot)
from .errors import GuardrailError, PqmlError
from .frames import (GeneralFrame, Model, frame_to_dot, frame_to_json,
                     frame_to_obj, load_frame_file, truncated_submodel)
from .gallery import catalog, resolve
from .semantics import (Evaluator, extension, holds_at, valid_on_general,
                        valid_on_kripke)
from .syntax import Atom, Formula, parse, to_text, var_name

_MACROS = {
    "at": "at", "r": "r", "bc": "bc", "5": "5", "t": "t", "tdia": "tdia",
    "m": "m", "e": "e", "qvb": "qvb", "q": "q", "k": "k", "dual": "dual",
    "alt": "alt", "altdia": "altdia", "trs": "trs",
    "trscollapse": "trscollapse", "dc": "dc", "d45": "d45",
    "phi1": "phi1", "phi2": "phi2",
}


def load_formula(text: str) -> Formula:
    """A formula literal, or an axiom macro like @At:1 or @Bc."""
    text = text.strip()
    if not text.startswith("@"):
        return parse(text)
    name, _, grade = text[1:].partition(":")
    key = name.lower()
    if key not in _MACROS:
        raise PqmlError(f"unknown axiom macro @{name}; known: "
                        + ", ".join("@" + m for m in sorted(_MACROS)))
    n = int(grade) if grade else None
    return schema(_MACROS[key], n=n).formula


def load_frame(spec: str) -> GeneralFrame:
    if os.path.exists(spec) or spec.endswith(".json"):
        return load_frame_file(spec)
    return resolve(spec).frame


def parse_lets(pairs, frame: GeneralFrame) -> dict:
    valuation = {}
    for pair in pairs or ():
        name, eq, worlds = pair.partition("=")
        if not eq:
            raise PqmlError(f"--let needs VAR=WORLDS, got {pair!r}")
        var_formula = parse(name.strip())
        if not isinstance(var_formula, Atom):
            raise PqmlError(f"--let target {name!r} is not a variable")
        mask = 0
        worlds = worlds.strip()
        if worlds:
            for w in worlds.split(","):
                mask |= 1 << frame.base.index(w.strip())
        valuation[var_formula.var] = mask
    return valuation


def _set_names(frame: GeneralFrame, mask: int) -> list[str]:
    return frame.base.set_names(mask)


def _emit(args, obj: dict, text: str) -> None:
    if getattr(args, "json", False):
        print(json.dumps(obj, sort_keys=True))
    else:
        print(text)


def cmd_parse(args) -> int:
    phi = load_formula(args.formula)
    obj = {"text": to_text(phi), "free_vars": [var_name(v) for v in phi.fv_sorted],
           "modal_depth": phi.md, "quantifier_depth": phi.qd}
    _emit(args, obj, to_text(phi))
    return 0


def cmd_eval(args) -> int:
    frame = load_frame(args.frame)
    phi = load_formula(args.formula)
    valuation = parse_lets(args.let, frame)
    if frame.is_full and not args.oracle:
        ext = fast_extension(phi, frame.base, valuation)
    else:
        ext = extension(phi, frame, valuation, max_worlds=args.max_worlds)
    names = _set_names(frame, ext)
    if args.at is not None:
        answer = bool(ext & (1 << frame.base.index(args.at)))
        _emit(args, {"holds": answer, "at": args.at}, str(answer).lower())
    else:
        _emit(args, {"extension": names}, "{" + ",".join(names) + "}")
    return 0


def cmd_valid(args) -> int:
    frame = load_frame(args.frame)
    phi = load_formula(args.formula)
    if frame.is_full:
        result = valid_on_kripke(phi, frame.base, max_worlds=args.max_worlds)
    else:
        result = valid_on_general(phi, frame, max_worlds=args.max_worlds)
    if result.valid:
        _emit(args, {"valid": True}, "valid")
        return 0
    counter = {var_name(v): _set_names(frame, x)
               for v, x in result.valuation.items()}
    world = frame.base.names[result.world]
    _emit(args, {"valid": False, "counter_valuation": counter, "world": world},
          f"invalid: fails at {world} under "
          + (str(counter) if counter else "the empty valuation"))
    return 1


def cmd_diversity(args) -> int:
    frame = load_frame(args.frame)
    value = (diversity_generated(frame.base) if args.generated
             else diversity(frame.base))
    _emit(args, {"diversity": value, "generated": bool(args.generated)},
          str(value))
    return 0


def cmd_classes(args) -> int:
    frame = load_frame(args.frame)
    ds = duplicate_structure(frame.base)
    if args.dot:
        print(quotient_to_dot(ds, frame.base))
        return 0
    rows = []
    for i, mask in enumerate(ds.classes):
        rows.append({
            "members": _set_names(frame, mask),
            "kind": ds.local_kind[i].value,
            "sees": sorted(int(j) for j in _iter_bits(ds.quotient_rel[i])),
        })
    if args.json:
        print(json.dumps({"classes": rows}, sort_keys=True))
    else:
        for i, row in enumerate(rows):
            members = ",".join(row["members"])
            sees = " ".join(f"D{j}" for j in row["sees"])
            print(f"D{i} {{{members}}} kind={row['kind']} sees: {sees}")
    return 0


def _iter_bits(mask: int):
    i = 0
    while mask:
        if mask & 1:
            yield i
        mask >>= 1
        i += 1


def cmd_breakdown(args) -> int:
    frame = load_frame(args.frame)
    phi = load_formula(args.formula)
    valuation = parse_lets(args.let, frame)
    engine = BreakdownEngine(frame.base)
    ds = engine.ds
    rows = []
    for i, mask in enumerate(ds.classes):
        if args.class_index is not None and args.class_index != i:
            continue
        beta = engine.breakdown(phi, valuation, i)
        rows.append({"class": _set_names(frame, mask), "formula": to_text(beta)})
    if args.json:
        print(json.dumps({"breakdown": rows}, sort_keys=True))
    else:
        for i, row in enumerate(rows):
            print(f"{{{','.join(row['class'])}}}: {row['formula']}")
    return 0


def cmd_invariant_check(args) -> int:
    frame = load_frame(args.frame)
    if args.formula:
        corpus = [load_formula(args.formula)]
    else:
        corpus = formula_corpus(args.corpus_size, seed=11, variables=(0, 1),
                                connectives=4, max_md=2, max_qd=1)
    report = invariant_subdomain_check(frame, corpus)
    if args.json:
        obj = {"passed": report.passed,
               "formulas_checked": report.formulas_checked,
               "valuations_checked": report.valuations_checked}
        if report.failure:
            phi, valuation, world, ext_b, ext_full = report.failure
            obj["failure"] = {
                "formula": to_text(phi),
                "valuation": {var_name(v): _set_names(frame, x)
                              for v, x in valuation.items()},
                "world": frame.base.names[world],
                "family_extension": _set_names(frame, ext_b),
                "powerset_extension": _set_names(frame, ext_full),
            }
        print(json.dumps(obj, sort_keys=True))
    else:
        print(report)
    return 0 if report.passed else 1


def cmd_axiom(args) -> int:
    inst = schema(_MACROS[args.name.lower()], n=args.n,
                  phi=load_formula(args.phi) if args.phi else None)
    if args.json:
        print(json.dumps({"name": inst.name, "parameters":
                          [p if isinstance(p, int) else to_text(p)
                           for p in inst.parameters],
                          "formula": to_text(inst.formula),
                          "note": inst.note}, sort_keys=True))
    else:
        print(to_text(inst.formula))
    return 0


def cmd_sahlqvist(args) -> int:
    phi = load_formula(args.formula)
    report = sahlqvist_check(phi)
    if args.json:
        print(json.dumps({"sahlqvist": report.is_sahlqvist,
                          "trace": list(report.trace)}, sort_keys=True))
    else:
        for line in report.trace:
            print(line)
    return 0 if report.is_sahlqvist else 1


def cmd_truncate(args) -> int:
    frame = load_frame(args.frame)
    valuation = parse_lets(args.let, frame)
    model = Model(frame, valuation)
    sub = truncated_submodel(model, args.at, args.depth)
    obj = frame_to_obj(sub.frame)
    obj["valuation"] = {var_name(v): _set_names(sub.frame, x)
                       for v, x in sub.valuation.items()}
    print(json.dumps(obj, sort_keys=False))
    return 0


def cmd_gallery(args) -> int:
    if args.id:
        entry = resolve(args.id)
        if args.dot:
            print(frame_to_dot(entry.frame, name="frame"))
        elif args.json:
            obj = frame_to_obj(entry.frame)
            obj["id"] = entry.id
            obj["provenance"] = entry.provenance
            if entry.caveat:
                obj["caveat"] = entry.caveat
            print(json.dumps(obj, sort_keys=False))
        else:
            print(frame_to_json(entry.frame, indent=2))
            if entry.caveat:
                print(f"caveat: {entry.caveat}", file=sys.stderr)
        return 0
    for entry in catalog():
        line = f"{entry.id:16s} |W|={entry.base.n:3d}  {entry.provenance}"
        if entry.caveat:
            line += f"  [caveat: {entry.caveat}]"
        print(line)
    return 0


def cmd_selfcheck(args) -> int:
    ok = selfcheck_module.run()
    return 0 if ok else 1


def build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(
        prog="pqml",
        description="Propositionally quantified modal logic over finite "
                    "Kripke and general frames")
    sub = top.add_subparsers(dest="command", required=True)

    def add(name, fn, **kw):
        p = sub.add_parser(name, **kw)
        p.set_defaults(fn=fn)
        return p

    def frame_opts(p, formula=True):
        p.add_argument("--frame", required=True,
                       help="gallery id (e.g. cyclic:5, k5:1,2) or a JSON file")
        if formula:
            p.add_argument("--formula", required=True,
                           help="formula text or axiom macro (@At:1, @Bc, @5, ...)")
        p.add_argument("--let", action="append", metavar="VAR=W1,W2",
                       help="valuation entry, e.g. --let p0=0,1 (repeatable)")
        p.add_argument("--max-worlds", type=int, default=20,
                       help="powerset guardrail override (default 20)")
        p.add_argument("--json", action="store_true")

    p = add("parse", cmd_parse, help="parse a formula and print it canonically")
    p.add_argument("--formula", required=True)
    p.add_argument("--json", action="store_true")

    p = add("eval", cmd_eval, help="evaluate a formula on a frame")
    frame_opts(p)
    p.add_argument("--at", help="world: print truth there instead of the set")
    p.add_argument("--oracle", action="store_true",
                   help="force the brute-force powerset path")

    p = add("valid", cmd_valid, help="check validity on a frame")
    frame_opts(p)

    p = add("diversity", cmd_diversity, help="number of duplicate classes")
    frame_opts(p, formula=False)
    p.add_argument("--generated", action="store_true",
                   help="max over point-generated subframes")

    p = add("classes", cmd_classes, help="duplicate classes and quotient")
    frame_opts(p, formula=False)
    p.add_argument("--dot", action="store_true", help="emit the quotient graph")

    p = add("breakdown", cmd_breakdown,
            help="per-class Boolean breakdown of a formula")
    frame_opts(p)
    p.add_argument("--class-index", type=int, default=None)

    p = add("invariant-check", cmd_invariant_check,
            help="compare family evaluation against the powerset on a corpus")
    p.add_argument("--frame", required=True)
    p.add_argument("--formula", help="check one formula instead of the corpus")
    p.add_argument("--corpus-size", type=int, default=20)
    p.add_argument("--json", action="store_true")

    p = add("axiom", cmd_axiom, help="print a named axiom instance")
    p.add_argument("name", choices=sorted(_MACROS))
    p.add_argument("--n", type=int, default=None, help="grade parameter")
    p.add_argument("--phi", default=None, help="substituted formula")
    p.add_argument("--json", action="store_true")

    p = add("sahlqvist", cmd_sahlqvist,
            help="classify a quantifier-free formula (exit 1 if rejected)")
    p.add_argument("--formula", required=True)
    p.add_argument("--json", action="store_true")

    p = add("truncate", cmd_truncate, help="depth-bounded generated submodel")
    frame_opts(p, formula=False)
    p.add_argument("--at", required=True, help="generating world")
    p.add_argument("--depth", type=int, required=True)

    p = add("gallery", cmd_gallery, help="list or export gallery frames")
    p.add_argument("--id", help="gallery id to export")
    p.add_argument("--json", action="store_true")
    p.add_argument("--dot", action="store_true")

    add("selfcheck", cmd_selfcheck,
        help="run the standing property checks (exit 1 on failure)")
    return top


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except GuardrailError as exc:
        print(f"guardrail: {exc}", file=sys.stderr)
        return 3
    except (PqmlError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())

"""Command-line front end.

Exit codes: 0 success (for ``entails``: entailed), 1 not entailed,
2 error (bad input, unknown atom, vocabulary too large, ...).
"""

from __future__ import annotations

import argparse
import json
import re
import sys
import warnings

from .enumeration import DEFAULT_MAX_ATOMS, HARD_MAX_ATOMS, interpretation_count, rank_table
from .entailment import theory
from .errors import PTLError
from .kbfile import load_kb
from .postulates import POSTULATES, check_postulates, impossibility_demo
from .semantics import EntailmentMode, Vocabulary
from .syntax import parse, render, to_normal_form

EXIT_YES, EXIT_NO, EXIT_ERROR = 0, 1, 2

_MODES = ("ranked", "lm", "pt", "ptp")


def _common() -> argparse.ArgumentParser:
    # accepted both before and after the subcommand
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--vocab", default=argparse.SUPPRESS,
                   help="pin the vocabulary, e.g. 'f,p,r' (default: KB file, else atoms used)")
    p.add_argument("--json", action="store_true", default=argparse.SUPPRESS,
                   help="machine-readable output")
    p.add_argument("--trace", action="store_true", default=argparse.SUPPRESS,
                   help="show the rounds of the LM construction")
    p.add_argument("--max-atoms", type=int, default=argparse.SUPPRESS,
                   help=f"enumeration bound (default {DEFAULT_MAX_ATOMS}, at most {HARD_MAX_ATOMS})")
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = argparse.ArgumentParser(
        prog="ptl", parents=[common],
        description="Typicality logic: entailment, minimal models and postulate checks.",
        epilog="exit codes: 0 entailed/success, 1 not entailed, 2 error")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("entails", parents=[common], help="decide KB |= formula")
    p.add_argument("--kb", required=True, help="knowledge base file")
    p.add_argument("--mode", default="lm", choices=_MODES)
    p.add_argument("formula")

    p = sub.add_parser("model", parents=[common], help="print the selected model(s) of a KB")
    p.add_argument("--kb", required=True)
    p.add_argument("--mode", default="lm", choices=_MODES)

    p = sub.add_parser("normal-form", parents=[common], help="split a formula into normal-form sentences")
    p.add_argument("formula")

    p = sub.add_parser("check-postulates", parents=[common], help="postulate report for a KB")
    p.add_argument("--kb", required=True)
    p.add_argument("--mode", default="lm", choices=("lm", "pt", "ptp"))
    p.add_argument("--queries", default="canonical", choices=("canonical", "subformulas"))
    p.add_argument("--postulates", default=",".join(POSTULATES),
                   help="comma-separated subset, e.g. P1,P5,P8")

    sub.add_parser("impossibility-demo", parents=[common],
                   help="show that no mode keeps all of P1, P2, P3, P5, P8, P10")

    p = sub.add_parser("count-interpretations", parents=[common],
                       help="number of ranked interpretations over n atoms")
    p.add_argument("--atoms", type=int, help="number of atoms (default: size of --vocab)")
    return parser


def _options(args):
    args.vocab = getattr(args, "vocab", None)
    args.json = getattr(args, "json", False)
    args.trace = getattr(args, "trace", False)
    args.max_atoms = getattr(args, "max_atoms", DEFAULT_MAX_ATOMS)
    return args


def _parse_vocab(text):
    if text is None:
        return None
    return Vocabulary(tuple(x for x in re.split(r"[\s,]+", text.strip()) if x))


def _vocab_for(args, kbfile, *extra):
    pinned = _parse_vocab(args.vocab)
    if pinned is not None:
        for f in (*kbfile.formulas, *extra):
            pinned.check(f)
        return pinned
    return kbfile.vocabulary(*extra)


def _emit_json(data):
    print(json.dumps(data, indent=2, ensure_ascii=False))


def _numbered(models) -> str:
    blocks = []
    for i, R in enumerate(models, start=1):
        blocks.append(f"model {i}:\n" + _indent(R.table()))
    return "\n\n".join(blocks)


def _indent(text, pad="  "):
    return "\n".join(pad + line for line in text.splitlines())


def _trace_text(trace) -> str:
    out = []
    for step in trace:
        R = step.interpretation
        sat = ", ".join(R.vocab.format_valuation(v) for v in sorted(step.satisfying)) or "(none)"
        out.append(f"round {step.iteration}: S{step.iteration + 1} = {sat}")
        out.append(_indent(R.table()))
    return "\n".join(out)


def cmd_entails(args) -> int:
    kbfile = load_kb(args.kb)
    f = parse(args.formula)
    mode = EntailmentMode.parse(args.mode)
    vocab = _vocab_for(args, kbfile, f)
    th = theory(kbfile.formulas, mode, vocab, args.max_atoms)
    yes = th.holds(f)
    counter = [] if yes else th.counter_models(f)
    if args.json:
        data = {
            "entailed": yes, "mode": mode.value, "formula": render(f, minimal=True),
            "kb": [render(g, minimal=True) for g in kbfile.formulas],
            "vocab": list(vocab.atoms), "selected_models": len(th.rows),
            "counter_models": [R.to_json() for R in counter],
        }
        if mode is not EntailmentMode.RANKED:
            data["models"] = [R.to_json() for R in th.models]
        if args.trace and th.trace is not None:
            data["trace"] = th.trace.to_json()
        _emit_json(data)
        return EXIT_YES if yes else EXIT_NO

    print(f"{'YES' if yes else 'NO'}  ({mode.label}, vocabulary {', '.join(vocab.atoms)})")
    if args.trace and th.trace is not None:
        print(_trace_text(th.trace))
    if mode is EntailmentMode.LM:
        print("LM-minimal model:")
        print(_indent(th.models[0].table()))
    elif mode is EntailmentMode.RANKED:
        if yes:
            print(f"holds in all {len(th.rows)} ranked models")
        else:
            print(f"counter-model (1 of {len(counter)}):")
            print(_indent(counter[0].table()))
    else:
        if yes:
            print(f"holds in every selected model ({len(th.rows)}):")
            print(_numbered(th.models))
        else:
            print(f"fails in {len(counter)} of {len(th.rows)} selected models; first counter-model:")
            print(_indent(counter[0].table()))
    return EXIT_YES if yes else EXIT_NO


def cmd_model(args) -> int:
    kbfile = load_kb(args.kb)
    mode = EntailmentMode.parse(args.mode)
    vocab = _vocab_for(args, kbfile)
    th = theory(kbfile.formulas, mode, vocab, args.max_atoms)
    models = th.models
    if args.json:
        data = {"mode": mode.value, "vocab": list(vocab.atoms),
                "models": [R.to_json() for R in models]}
        if args.trace and th.trace is not None:
            data["trace"] = th.trace.to_json()
        _emit_json(data)
        return EXIT_YES
    if mode is EntailmentMode.LM:
        if args.trace:
            print(_trace_text(th.trace))
            print("result:")
        print(models[0].table())
    else:
        print(f"{len(models)} {mode.label} model{'s' if len(models) != 1 else ''}")
        if models:
            print()
            print(_numbered(models))
    return EXIT_YES


def cmd_normal_form(args) -> int:
    f = parse(args.formula)
    sentences = to_normal_form(f)
    if args.json:
        _emit_json([{"antecedents": [render(a, minimal=True) for a in s.antecedents],
                     "propositional": render(s.propositional_part, minimal=True),
                     "consequents": [render(c, minimal=True) for c in s.consequents],
                     "sentence": str(s)} for s in sentences])
        return EXIT_YES
    for s in sentences:
        print(s)
    return EXIT_YES


def cmd_check_postulates(args) -> int:
    kbfile = load_kb(args.kb)
    vocab = _vocab_for(args, kbfile)
    wanted = [p.strip() for p in args.postulates.split(",") if p.strip()]
    for p in wanted:
        if p not in POSTULATES:
            raise ValueError(f"unknown postulate {p!r}; expected some of {', '.join(POSTULATES)}")
    verdicts = check_postulates(kbfile.formulas, args.mode, wanted, queries=args.queries,
                                vocab=vocab, max_atoms=args.max_atoms)
    if args.json:
        _emit_json({"mode": EntailmentMode.parse(args.mode).value, "vocab": list(vocab.atoms),
                    "queries": args.queries, "verdicts": [v.to_json() for v in verdicts]})
        return EXIT_YES
    print(f"{EntailmentMode.parse(args.mode).label} on {args.kb} "
          f"(vocabulary {', '.join(vocab.atoms)}, {args.queries} queries)")
    for v in verdicts:
        print(v.describe())
    return EXIT_YES


def cmd_impossibility_demo(args) -> int:
    vocab = _parse_vocab(args.vocab) or ("p", "q")
    report = impossibility_demo(vocab)
    if args.json:
        _emit_json(report.to_json())
    else:
        print(report.describe())
    return EXIT_YES


def cmd_count_interpretations(args) -> int:
    n = args.atoms
    if n is None:
        vocab = _parse_vocab(args.vocab)
        if vocab is None:
            raise ValueError("give --atoms N or --vocab")
        n = len(vocab)
    if n < 1:
        raise ValueError("the number of atoms must be at least 1")
    closed = interpretation_count(n)
    enumerated = None
    if n <= min(args.max_atoms, DEFAULT_MAX_ATOMS):
        enumerated = len(rank_table(Vocabulary(tuple(f"a{i}" for i in range(n)))))
    if args.json:
        _emit_json({"atoms": n, "closed_form": closed, "enumerated": enumerated})
        return EXIT_YES
    print(f"atoms: {n}")
    print(f"closed form: {closed}")
    print(f"enumerated: {enumerated if enumerated is not None else 'skipped (above the enumeration bound)'}")
    return EXIT_YES


_COMMANDS = {
    "entails": cmd_entails,
    "model": cmd_model,
    "normal-form": cmd_normal_form,
    "check-postulates": cmd_check_postulates,
    "impossibility-demo": cmd_impossibility_demo,
    "count-interpretations": cmd_count_interpretations,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = _options(parser.parse_args(argv))
    try:
        with warnings.catch_warnings():
            warnings.simplefilter("always")
            return _COMMANDS[args.command](args)
    except (PTLError, ValueError, KeyError, OSError) as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        print(f"error: {msg}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())

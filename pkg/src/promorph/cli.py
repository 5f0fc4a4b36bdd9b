"""Command line front end: generate, parse, compile, paradigm, inspect.

Output is machine parseable: tab-separated fields, one record per line;
``--verbose`` adds labeled extra lines prefixed with ``#``.  Exit codes
are stable API: 0 success, 1 no result, 2 input error, 3 oracle
mismatch, 4 compile failure.
"""

from __future__ import annotations

import argparse
import sys

from .automata import AutomatonError, deserialize
from .engine import OracleMismatch, solve
from .optimize import (candidate_of, enumerate_candidates,
                       generate_and_minimize, greedy_iop)
from .oracle import (CompileError, compile_paradigm, fingerprint, load_oracle,
                     optimal_cell_proofs, oracle_guided_parse,
                     parse_by_synthesis, write_oracle)
from .typespace import TypeSpaceError

EXIT_OK = 0
EXIT_EMPTY = 1
EXIT_INPUT = 2
EXIT_ORACLE = 3
EXIT_COMPILE = 4


class InputError(Exception):
    pass


def _grammar(name):
    if name == "hebrew":
        from .hebrew import build_grammar
        return build_grammar()
    if name == "tonkawa":
        from .tonkawa import build_grammar
        return build_grammar()
    raise InputError(f"unknown grammar {name!r}")


def _generation_goal(grammar, args):
    if grammar.name == "tonkawa":
        stem = args.stem
        if stem is None:
            raise InputError("tonkawa generation needs --stem CUT|LICK")
        flags = set()
        if args.flags:
            from .tonkawa import FLAG_NAMES
            for raw in args.flags.split(","):
                raw = raw.strip()
                if raw not in FLAG_NAMES:
                    raise InputError(f"unknown flag {raw!r}")
                flags.add(FLAG_NAMES[raw])
        cat = grammar.cat_expr("plobj" in flags, "prog" in flags)
        try:
            return grammar.generation_goal(stem, cat)
        except ValueError as err:
            raise InputError(str(err))
    if args.root is None or args.cat is None:
        raise InputError("hebrew generation needs --root C1,C2,C3 and --cat")
    letters = [l.strip() for l in args.root.split(",")]
    try:
        return grammar.generation_goal(letters, args.cat)
    except (ValueError, TypeSpaceError) as err:
        raise InputError(str(err))


def cmd_generate(args):
    grammar = _grammar(args.grammar)
    goal = _generation_goal(grammar, args)
    if args.mode == "minimize":
        winners = generate_and_minimize(grammar, goal)
    elif args.mode == "greedy":
        cand = greedy_iop(grammar, goal)
        winners = [cand] if cand is not None else []
    elif args.mode == "oracle":
        if args.oracle is None:
            raise InputError("--mode oracle needs --oracle PATH")
        oracle = load_oracle(args.oracle, grammar)
        run = solve(grammar, goal, oracle=oracle,
                    fingerprint=fingerprint(grammar))
        winners = []
        seen = set()
        for sol in run:
            cand = candidate_of(sol, grammar)
            if cand.surface not in seen:
                seen.add(cand.surface)
                winners.append(cand)
    else:
        raise InputError(f"unknown mode {args.mode!r}")
    for cand in winners:
        sem = _leafstr(cand.sem)
        print(f"{cand.surface}\t{cand.disharmony}\t{sem}")
        if args.verbose:
            print(f"# marks\t{cand.mark_string()}")
            print(f"# category\t{grammar.pretty_category(cand.category)}")
    return EXIT_OK if winners else EXIT_EMPTY


def cmd_parse(args):
    grammar = _grammar(args.grammar)
    if args.mode == "synthesis":
        try:
            triples, _ = parse_by_synthesis(grammar, args.surface)
        except ValueError as err:
            raise InputError(str(err))
    else:
        if args.oracle is None:
            raise InputError("parse needs --oracle PATH unless --mode synthesis")
        oracle = load_oracle(args.oracle, grammar)
        try:
            triples, _ = oracle_guided_parse(grammar, args.surface, oracle)
        except ValueError as err:
            raise InputError(str(err))
    for root, cat, sem in triples:
        print(f"{root}\t{grammar.pretty_category(cat)}\t{sem}")
    return EXIT_OK if triples else EXIT_EMPTY


def cmd_compile(args):
    grammar = _grammar(args.grammar)
    compiled = compile_paradigm(grammar, abstract_lexicon=args.abstract_lexicon)
    write_oracle(compiled, args.out)
    print(f"cells\t{compiled.cell_paths}")
    print(f"proofs\t{len(compiled.proofs)}")
    print(f"states_before_minimization\t{compiled.dfa_states}")
    print(f"states_after_minimization\t{compiled.min_states}")
    print(f"file\t{args.out}")
    return EXIT_OK


def cmd_paradigm(args):
    grammar = _grammar(args.grammar)
    rows = []
    if grammar.name == "hebrew":
        if args.root is None:
            raise InputError("paradigm needs --root C1,C2,C3")
        letters = [l.strip() for l in args.root.split(",")]
        for cell_id, _ in grammar.cells():
            try:
                goal = grammar.generation_goal(letters, cell_id)
            except (ValueError, TypeSpaceError) as err:
                raise InputError(str(err))
            for cand in generate_and_minimize(grammar, goal):
                rows.append((cand.surface, cand.category, _leafstr(cand.sem)))
    else:
        from .tonkawa import STEMS
        stems = [args.stem] if args.stem else list(STEMS)
        for stem in stems:
            for cell_id, _ in grammar.cells():
                goal = grammar.generation_goal(stem, cell_id)
                for cand in generate_and_minimize(grammar, goal):
                    rows.append((cand.surface, cand.category,
                                 _leafstr(cand.sem)))
    merged = {}
    for surface, cat, sem in rows:
        key = (surface, sem)
        merged[key] = merged.get(key, frozenset()) | cat
    for (surface, sem), cat in sorted(merged.items()):
        print(f"{surface}\t{grammar.pretty_category(cat)}\t{sem}")
    return EXIT_OK if merged else EXIT_EMPTY


def cmd_inspect(args):
    with open(args.oracle, encoding="utf-8") as fh:
        dfa, fp, abstract = deserialize(fh.read())
    print(f"fingerprint\t{fp}")
    print(f"abstract_lexicon\t{str(abstract).lower()}")
    print(f"states\t{len(dfa.states)}")
    print(f"finals\t{len(dfa.finals)}")
    print(f"transitions\t{len(dfa.transitions)}")
    print(f"symbols\t{len(set(dfa.alphabet()))}")
    return EXIT_OK


def build_parser():
    parser = argparse.ArgumentParser(
        prog="promorph",
        description="constraint-based prosodic morphology with a compiled "
                    "finite-state oracle")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", help="generate word forms")
    p.add_argument("--grammar", default="hebrew",
                   choices=("hebrew", "tonkawa"))
    p.add_argument("--root", help="comma separated root letters (hebrew)")
    p.add_argument("--cat", help="category expression (hebrew)")
    p.add_argument("--stem", help="stem id (tonkawa)")
    p.add_argument("--flags", help="comma separated tonkawa flags: "
                                   "plural-object, progressive")
    p.add_argument("--mode", default="minimize",
                   choices=("minimize", "greedy", "oracle"))
    p.add_argument("--oracle", help="oracle file for --mode oracle")
    p.add_argument("--verbose", action="store_true")
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("parse", help="parse a surface form")
    p.add_argument("surface")
    p.add_argument("--grammar", default="hebrew",
                   choices=("hebrew", "tonkawa"))
    p.add_argument("--mode", default="oracle", choices=("oracle", "synthesis"))
    p.add_argument("--oracle", help="oracle file (required unless synthesis)")
    p.add_argument("--verbose", action="store_true")
    p.set_defaults(func=cmd_parse)

    p = sub.add_parser("compile", help="compile the paradigm oracle")
    p.add_argument("--grammar", default="hebrew",
                   choices=("hebrew", "tonkawa"))
    p.add_argument("-o", "--out", required=True)
    p.add_argument("--abstract-lexicon", action="store_true",
                   help="strip letter-tree steps; root restrictions are "
                        "then proved by the unguided letter tree at run time")
    p.set_defaults(func=cmd_compile)

    p = sub.add_parser("paradigm", help="print every derivable cell")
    p.add_argument("--grammar", default="hebrew",
                   choices=("hebrew", "tonkawa"))
    p.add_argument("--root", help="comma separated root letters (hebrew)")
    p.add_argument("--stem", help="stem id (tonkawa; defaults to all)")
    p.set_defaults(func=cmd_paradigm)

    p = sub.add_parser("inspect", help="show oracle file statistics")
    p.add_argument("oracle")
    p.set_defaults(func=cmd_inspect)

    return parser


def _leafstr(leaves):
    if len(leaves) == 1:
        return next(iter(leaves))
    return "{" + "|".join(sorted(leaves)) + "}"


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on usage errors, which matches the input-error code
        return exc.code if exc.code is not None else EXIT_INPUT
    try:
        return args.func(args)
    except InputError as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_INPUT
    except (TypeSpaceError, ValueError) as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_INPUT
    except AutomatonError as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_INPUT
    except OracleMismatch as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_ORACLE
    except CompileError as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_COMPILE


if __name__ == "__main__":
    sys.exit(main())

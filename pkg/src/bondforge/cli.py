"""Command-line front end.

Subcommands: validate, bracket, jones, unplug, tangle, braid-diagram,
braid-equiv, word-ops, gen, fuzz.  Results go to standard output
(human-readable by default, machine format with ``--json``); logs and
errors go to standard error.  Exit codes: 0 success, 1 domain error,
2 usage error.  Every randomized command requires an explicit ``--seed``
so runs are reproducible.
"""
from __future__ import annotations

import argparse
import json
import os
import sys

from . import __version__
from .braidalg import (
    bondcount,
    closure,
    equiv_search,
    expand_word,
    expsum,
    format_word,
    free_cancel,
    free_reduce,
    parse_word,
    perm,
    projections,
    word_mode,
)
from .braiding import braid, braid_certificate, parse_bms, slices_to_diagram
from .bracket import bonded_bracket, normalized_jones, state_count
from .diagram import (
    BondedDiagram,
    gen_example,
    parse_bpd,
    to_bpd,
    underlying_link,
    validate,
)
from .moves import random_walk, standardize, tighten, walk_kinds
from .tangle import builtin_tangle, tangle_invariant_set
from .unplug import (
    fingerprint,
    unplug_bonded,
    unplug_full_set,
    unplug_strict_set,
)

__all__ = ["main", "run"]

SCHEMA = "bondforge/1"


class DomainError(Exception):
    pass


# -- shared plumbing ---------------------------------------------------------


def _add_diagram_source(p: argparse.ArgumentParser) -> None:
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--input", metavar="FILE.bpd", help="diagram file")
    g.add_argument(
        "--gen",
        metavar="FAMILY:N",
        help="generated example, e.g. U:3 or K:2",
    )


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--json", action="store_true", help="machine output")
    p.add_argument(
        "--threads",
        type=int,
        default=None,
        help="worker cap (default: BONDFORGE_THREADS or 1)",
    )


def _threads(args) -> int:
    if args.threads is not None:
        n = args.threads
    else:
        n = int(os.environ.get("BONDFORGE_THREADS", "1"))
    if n < 1:
        raise DomainError("--threads must be at least 1")
    return n


def _load_diagram(args) -> BondedDiagram:
    if args.gen is not None:
        fam, _, num = args.gen.partition(":")
        if fam not in ("U", "K") or not num.isdigit():
            raise DomainError(f"--gen expects U:<n> or K:<n>, got {args.gen!r}")
        return gen_example(fam, int(num))
    try:
        with open(args.input, encoding="utf-8") as fh:
            return parse_bpd(fh.read())
    except OSError as exc:
        raise DomainError(str(exc)) from exc


def _emit(args, payload: dict, human: str) -> None:
    if args.json:
        print(json.dumps({"schema": SCHEMA, **payload}))
    else:
        print(human)


def _fp_obj(fp) -> dict:
    return {"components": fp.component_count, "jones": fp.jones.to_text()}


def _fp_text(fp) -> str:
    return f"components={fp.component_count} jones={fp.jones.to_text()}"


def _sorted_fps(fps) -> list:
    return sorted(fps, key=lambda fp: (fp.jones.to_text(), fp.component_count))


# -- subcommands -------------------------------------------------------------


def _cmd_validate(args) -> int:
    d = _load_diagram(args)
    violations = validate(d)
    _emit(
        args,
        {"violations": violations},
        "OK" if not violations else "\n".join(violations),
    )
    return 0 if not violations else 1


def _cmd_bracket(args) -> int:
    d = _load_diagram(args)
    if not d.is_tight():
        d = tighten(d)
    states = state_count(d)
    poly = bonded_bracket(d)
    if args.set_b is not None:
        poly = poly.substitute("b", args.set_b)
    if args.set_a is not None:
        poly = poly.substitute("a", args.set_a)
    deg = poly.max_degree("a")
    _emit(
        args,
        {"poly": poly.to_text(), "a_degree": deg, "states": states},
        poly.to_text(),
    )
    return 0


def _cmd_jones(args) -> int:
    d = _load_diagram(args)
    if args.underlying:
        d = underlying_link(d)
    poly = normalized_jones(d)
    _emit(args, {"poly": poly.to_text()}, poly.to_text())
    return 0


def _cmd_unplug(args) -> int:
    d = _load_diagram(args)
    if args.mode == "bonded":
        fps = [unplug_bonded(d)]
    elif args.mode == "strict":
        fps = _sorted_fps(unplug_strict_set(d))
    else:
        fps = _sorted_fps(unplug_full_set(d))
    _emit(
        args,
        {"fingerprints": [_fp_obj(fp) for fp in fps]},
        "\n".join(_fp_text(fp) for fp in fps),
    )
    return 0


def _parse_tangle_family(text: str) -> list:
    if text.startswith("twist:"):
        lo, _, hi = text[6:].partition("..")
        try:
            lo_i, hi_i = int(lo), int(hi)
        except ValueError as exc:
            raise DomainError(f"bad twist range {text!r}") from exc
        if lo_i > hi_i:
            raise DomainError(f"empty twist range {text!r}")
        return [builtin_tangle(f"twist({k})") for k in range(lo_i, hi_i + 1)]
    return [builtin_tangle(name.strip()) for name in text.split(",")]


def _cmd_tangle(args) -> int:
    d = _load_diagram(args)
    if not d.is_standard():
        d = standardize(d)
    family = _parse_tangle_family(args.tangles)
    out = tangle_invariant_set(d, family, bound=args.bound)
    rows = sorted(
        ((",".join(key), fp) for key, fp in out.items()),
        key=lambda kv: kv[0],
    )
    _emit(
        args,
        {"insertions": [{"tangles": k, **_fp_obj(fp)} for k, fp in rows]},
        "\n".join(f"{k or '(none)'}: {_fp_text(fp)}" for k, fp in rows),
    )
    return 0


def _cmd_braid_diagram(args) -> int:
    try:
        with open(args.input, encoding="utf-8") as fh:
            seq = parse_bms(fh.read())
    except OSError as exc:
        raise DomainError(str(exc)) from exc
    if args.emit == "word":
        w = braid(seq)
        _emit(args, {"word": format_word(w)}, format_word(w))
        return 0
    rep = braid_certificate(seq)
    _emit(
        args,
        {
            "word": format_word(rep.word),
            "checks": [
                {"name": name, "ok": ok} for name, ok in rep.checks
            ],
        },
        "\n".join([format_word(rep.word)] + rep.lines()),
    )
    return 0 if rep.ok else 1


def _cmd_braid_equiv(args) -> int:
    w1 = parse_word(args.lhs)
    w2 = parse_word(args.rhs)
    res = equiv_search(w1, w2, max_states=args.max_states)
    lines = [res.verdict]
    if res.verdict == "Equivalent":
        lines += list(res.path)
    elif res.invariant:
        lines.append(res.invariant)
    _emit(
        args,
        {
            "verdict": res.verdict,
            "path": list(res.path),
            "invariant": res.invariant,
        },
        "\n".join(lines),
    )
    return 0


def _cmd_word_ops(args) -> int:
    w = parse_word(args.word)
    op = args.op
    if op in ("free-reduce", "free-cancel", "expand"):
        fn = {
            "free-reduce": free_reduce,
            "free-cancel": free_cancel,
            "expand": expand_word,
        }[op]
        out = format_word(fn(w))
        _emit(args, {"word": out}, out)
        return 0
    if op == "projections":
        pr = projections(w)
        _emit(
            args,
            {"projections": {k: str(v) for k, v in pr.items()}},
            "\n".join(f"{k}: {v}" for k, v in sorted(pr.items())),
        )
        return 0
    if op == "closure-fingerprint":
        fp = fingerprint(closure(w))
        _emit(args, _fp_obj(fp), _fp_text(fp))
        return 0
    facts = {
        "mode": word_mode(w),
        "perm": list(perm(w)),
        "expsum": expsum(w),
        "bondcount": bondcount(w),
    }
    _emit(
        args,
        facts,
        "\n".join(f"{k}: {v}" for k, v in facts.items()),
    )
    return 0


def _cmd_gen(args) -> int:
    d = _load_diagram(args)
    sys.stdout.write(to_bpd(d))
    return 0


_FUZZ_CHECKS = ("underlying-jones", "unplug-bonded", "unplug-strict", "bracket")


def _fuzz_value(d: BondedDiagram, check: str):
    if check == "underlying-jones":
        return fingerprint(underlying_link(d))
    if check == "unplug-bonded":
        return unplug_bonded(d)
    if check == "unplug-strict":
        return unplug_strict_set(d)
    return bonded_bracket(tighten(d))


def _cmd_fuzz(args) -> int:
    d = _load_diagram(args)
    kinds = walk_kinds(args.calculus)
    if args.check == "bracket":
        # the bracket is a regular-isotopy invariant of tight diagrams:
        # kinks rescale it, and bond-strand moves leave tight form
        tight_tags = {"R2", "R3", "mixedR2", "mixedR3", "VS"}
        kinds = [k for k in kinds if k.tag in tight_tags]
        if not d.is_tight():
            d = tighten(d)
    before = _fuzz_value(d, args.check)
    walked, _log = random_walk(
        d, args.calculus, args.steps, args.seed, kinds=kinds
    )
    after = _fuzz_value(walked, args.check)
    ok = before == after
    _emit(
        args,
        {
            "check": args.check,
            "steps": args.steps,
            "seed": args.seed,
            "result": "PASS" if ok else "FAIL",
        },
        "PASS" if ok else "FAIL",
    )
    return 0 if ok else 1


# -- driver ------------------------------------------------------------------


def _build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(
        prog="bondforge",
        description="Compute with bonded knots, links, and braids.",
    )
    top.add_argument("--version", action="version", version=__version__)
    sub = top.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="check a diagram for violations")
    _add_diagram_source(p)
    _add_common(p)
    p.set_defaults(fn=_cmd_validate)

    p = sub.add_parser("bracket", help="bonded bracket polynomial")
    _add_diagram_source(p)
    p.add_argument("--set-b", type=int, default=None, help="substitute b")
    p.add_argument("--set-a", type=int, default=None, help="substitute a")
    _add_common(p)
    p.set_defaults(fn=_cmd_bracket)

    p = sub.add_parser("jones", help="normalized Jones polynomial")
    _add_diagram_source(p)
    p.add_argument(
        "--underlying",
        action="store_true",
        help="delete bonds first (underlying link)",
    )
    _add_common(p)
    p.set_defaults(fn=_cmd_jones)

    p = sub.add_parser("unplug", help="unplugging invariants")
    _add_diagram_source(p)
    p.add_argument(
        "--mode",
        choices=("bonded", "strict", "full"),
        default="bonded",
    )
    _add_common(p)
    p.set_defaults(fn=_cmd_unplug)

    p = sub.add_parser("tangle", help="tangle-insertion invariants")
    _add_diagram_source(p)
    p.add_argument(
        "--tangles",
        default="identity,crossing+,crossing-",
        help='comma list of names, or "twist:<lo>..<hi>"',
    )
    p.add_argument("--bound", type=int, default=729)
    _add_common(p)
    p.set_defaults(fn=_cmd_tangle)

    p = sub.add_parser(
        "braid-diagram", help="braid a Morse slice sequence (.bms)"
    )
    p.add_argument("--input", required=True, metavar="FILE.bms")
    p.add_argument("--emit", choices=("word", "certificate"), default="word")
    _add_common(p)
    p.set_defaults(fn=_cmd_braid_diagram)

    p = sub.add_parser("braid-equiv", help="bounded word-equivalence search")
    p.add_argument("--lhs", required=True, metavar="WORD")
    p.add_argument("--rhs", required=True, metavar="WORD")
    p.add_argument("--max-states", type=int, default=200000)
    _add_common(p)
    p.set_defaults(fn=_cmd_braid_equiv)

    p = sub.add_parser("word-ops", help="braid-word utilities")
    p.add_argument("--word", required=True, metavar="WORD")
    p.add_argument(
        "--op",
        choices=(
            "free-reduce",
            "free-cancel",
            "expand",
            "projections",
            "closure-fingerprint",
            "facts",
        ),
        default="facts",
    )
    _add_common(p)
    p.set_defaults(fn=_cmd_word_ops)

    p = sub.add_parser("gen", help="emit a generated example as .bpd")
    _add_diagram_source(p)
    _add_common(p)
    p.set_defaults(fn=_cmd_gen)

    p = sub.add_parser("fuzz", help="random-walk invariance check")
    _add_diagram_source(p)
    p.add_argument("--calculus", choices=("topological", "rigid"), required=True)
    p.add_argument("--steps", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--check", choices=_FUZZ_CHECKS, default="underlying-jones")
    _add_common(p)
    p.set_defaults(fn=_cmd_fuzz)

    return top


def run(argv: list[str]) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 2
    try:
        if hasattr(args, "threads"):
            _threads(args)
        return args.fn(args)
    except (DomainError, ValueError) as exc:
        if getattr(args, "json", False):
            print(json.dumps({"schema": SCHEMA, "error": str(exc)}))
        print(f"error: {exc}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(run(sys.argv[1:]))

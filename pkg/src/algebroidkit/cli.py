"""Command-line front end.

Exit status: 0 when every check passes, 1 when any check fails, 2 on parse
or usage errors.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from .algebroid import check_axioms, section_witness
from .constructions import (
    ActionError,
    CurvatureError,
    check_action,
    check_flat,
    curvature_form,
    poisson_cotangent,
    reconstruct_from_split,
    semidirect_product,
    transformation_algebroid,
)
from .corpus import render_corpus, run_corpus
from .derivations import check_derivation
from .fileformat import ParseError, algebroid_to_dict, dump_json, parse_file, write_json
from .morphisms import check_morphism
from .report import CheckReport, render_value

SEED_ENV = "ALGEBROIDKIT_SEED"
DEFAULT_SEED = 42


class UsageError(Exception):
    pass


def _seed(flag: int | None) -> int:
    if flag is not None:
        return flag
    env = os.environ.get(SEED_ENV)
    if env is not None:
        try:
            return int(env)
        except ValueError:
            raise UsageError(f"{SEED_ENV} must be an integer, got {env!r}") from None
    return DEFAULT_SEED


def _emit(report: CheckReport, args, extra: dict | None = None) -> int:
    report = CheckReport(Path(args.file).stem, report.items)
    if args.json:
        data = report.to_dict()
        if extra:
            data.update(extra)
        sys.stdout.write(dump_json(data))
    else:
        if extra and "kappa" in extra:
            for key, value in extra["kappa"].items():
                print(f"kappa({key}) = {render_value(value)}")
        print(report.render())
    return 0 if report.passed else 1


def _cmd_check(args) -> int:
    A = parse_file(args.file, "algebroid")
    report = check_axioms(A, args.suite, args.random, args.max_degree, _seed(args.seed))
    return _emit(report, args)


def _cmd_check_morphism(args) -> int:
    return _emit(check_morphism(parse_file(args.file, "morphism")), args)


def _cmd_check_derivation(args) -> int:
    return _emit(check_derivation(parse_file(args.file, "derivation")), args)


def _cmd_check_action(args) -> int:
    return _emit(check_action(parse_file(args.file, "action")), args)


def _cmd_build(args) -> int:
    if args.construction == "transformation":
        A, report = transformation_algebroid(parse_file(args.file, "group_action"))
    elif args.construction == "poisson":
        A, report = poisson_cotangent(parse_file(args.file, "bivector"))
    else:
        act = parse_file(args.file, "action")
        report = check_action(act)
        try:
            A = semidirect_product(act, force=args.force)
        except ActionError:
            return _emit(report, args)
    A = A.renamed(Path(args.output).stem)
    write_json(args.output, algebroid_to_dict(A))
    return _emit(report, args)


def _cmd_curvature(args) -> int:
    ext = parse_file(args.file, "extension")
    curv = curvature_form(ext)
    kappa = {f"{i + 1},{j + 1}": section_witness(s) for (i, j), s in curv.kappa.items()}
    extra = {"kappa": kappa}
    if curv.issues:
        extra["issues"] = list(curv.issues)
    return _emit(check_flat(ext), args, extra)


def _cmd_reconstruct(args) -> int:
    ext = parse_file(args.file, "extension")
    try:
        product, _, report = reconstruct_from_split(ext)
    except CurvatureError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    write_json(args.output, algebroid_to_dict(product.renamed(Path(args.output).stem)))
    return _emit(report, args)


def _cmd_corpus(args) -> int:
    data, ok = run_corpus()
    if args.json:
        sys.stdout.write(json.dumps(data, indent=2) + "\n")
    else:
        print(render_corpus(data))
    return 0 if ok else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="algebroidkit",
        description="Exact checks and constructions for Lie algebroids over polynomial charts.",
    )
    sub = parser.add_subparsers(dest="command", metavar="command")
    sub.required = True

    def add(name, func, help_text):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--json", action="store_true", help="emit the report as JSON")
        p.set_defaults(func=func)
        return p

    p = add("check", _cmd_check, "verify the algebroid axioms of an algebroid file")
    p.add_argument("file")
    p.add_argument("--suite", choices=("axioms", "jacobi", "all"), default="all")
    p.add_argument("--random", type=int, default=25, metavar="N", help="random Jacobi trials")
    p.add_argument("--seed", type=int, default=None, metavar="S")
    p.add_argument("--max-degree", type=int, default=2, metavar="D")

    add("check-morphism", _cmd_check_morphism, "verify a morphism file").add_argument("file")
    add("check-derivation", _cmd_check_derivation, "verify a derivation file").add_argument("file")
    add("check-action", _cmd_check_action, "verify an action file").add_argument("file")

    p = add("build", _cmd_build, "build an algebroid from a definition file")
    p.add_argument("construction", choices=("transformation", "semidirect", "poisson"))
    p.add_argument("file")
    p.add_argument("-o", "--output", required=True)
    p.add_argument("--force", action="store_true", help="build a semi-direct product even if the action fails")

    add("curvature", _cmd_curvature, "curvature and flatness of a split extension").add_argument("file")

    p = add("reconstruct", _cmd_reconstruct, "rebuild a split extension as a semi-direct product")
    p.add_argument("file")
    p.add_argument("-o", "--output", required=True)

    p = add("corpus", _cmd_corpus, "run the bundled corpus")
    p.add_argument("action", choices=("run",))
    return parser


def run_command(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code else 0
    try:
        return args.func(args)
    except (ParseError, UsageError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(run_command())


if __name__ == "__main__":
    main()

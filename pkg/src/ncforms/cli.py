"""Command line front end: ``ncforms validate|compute|check``.

Exit codes: 0 when the report has no FAIL entry, 1 when it has one,
2 for usage, parse or expression errors.
"""

from __future__ import annotations

import argparse
import sys
from concurrent.futures import ProcessPoolExecutor

from .algebra import AlgebraError, AssociativityError, UnitError
from .checks import (
    FAIL,
    PASS,
    SUITES,
    Entry,
    Settings,
    check_algebra_axioms,
    check_subalgebra,
    run_group,
)
from .derivations import FormHom, equivariance_defect
from .expr import ExprError, evaluate
from .forms import Form
from .geometry import is_projection
from .notation import ParseError, format_scalar
from .problem import Problem, digest, parse_problem
from .report import TOOL, exit_code, render_machine, render_text


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--seed", type=int, default=0, help="seed for randomized checks (default 0)")
    p.add_argument("--degree", type=int, default=4, help="form degree bound N for exhaustive checks (default 4)")
    p.add_argument("--workers", type=int, default=1, help="run check groups in this many processes")
    p.add_argument("--format", choices=("text", "machine"), default="text")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ncforms", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    p = sub.add_parser("validate", help="parse a problem file and check the algebra and declarations")
    p.add_argument("file")
    _common(p)
    p = sub.add_parser("compute", help="evaluate an expression over the problem's algebra")
    p.add_argument("file")
    p.add_argument("expression")
    _common(p)
    p = sub.add_parser("check", help="run a verification suite")
    p.add_argument("file")
    p.add_argument("suite", choices=sorted(SUITES))
    _common(p)
    return parser


def _header(prob_digest: str, args, extra: dict) -> dict:
    h = {"command": args.command, "input-sha256": prob_digest, "seed": args.seed, "degree": args.degree}
    h.update(extra)
    return h


def _algebra_line(prob: Problem) -> str:
    A = prob.algebra
    return f"{A.name} (dim {A.n}; basis {' '.join(A.basis_labels)})"


def _emit(entries: list[Entry], header: dict, fmt: str) -> int:
    if fmt == "machine":
        sys.stdout.write(render_machine(entries))
    else:
        sys.stdout.write(render_text(entries, header))
    return exit_code(entries)


def _load(path: str):
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    return text


def _algebra_failure(exc: AlgebraError) -> Entry:
    if isinstance(exc, AssociativityError):
        i, j, k = exc.triple
        return Entry("algebra.associativity", FAIL, "basis triples", f"(e{i} e{j}) e{k} != e{i} (e{j} e{k}); triple={exc.triple}")
    if isinstance(exc, UnitError):
        return Entry("algebra.unit", FAIL, "", str(exc))
    return Entry("algebra.table", FAIL, "", str(exc))


def cmd_validate(args, text: str) -> int:
    try:
        prob = parse_problem(text)
    except AlgebraError as exc:
        return _emit([_algebra_failure(exc)], _header(digest(text), args, {}), args.format)
    A = prob.algebra
    entries = [Entry("algebra.parse", PASS, "", _algebra_line(prob))]
    entries += check_algebra_axioms(A)
    for name, w in prob.forms.items():
        entries.append(Entry(f"form.{name}", PASS, f"degree {w.degree}", str(w)))
    for name, K in prob.homs.items():
        bad = equivariance_defect(K)
        entries.append(Entry(f"hom.{name}", PASS if bad is None else FAIL, f"degree {K.degree}",
                             "bimodule homomorphism" if bad is None else
                             f"equivariance fails on ({A.basis_labels[bad[0]]}, {A.basis_labels[bad[1]]})"))
    for name, (D, declared) in prob.distributions.items():
        entries.append(Entry(f"distribution.{name}", PASS, f"declared span dim={declared.dim}",
                             f"generated sub-bimodule dim={D.dim}"))
    for name, S in prob.subalgebras.items():
        entries.append(check_subalgebra(name, A, S))
    for name in prob.projections:
        K = prob.homs[name]
        ok = K.degree == 1 and equivariance_defect(K) is None and is_projection(K)
        entries.append(Entry(f"projection.{name}", PASS if ok else FAIL, "", "P o P = P" if ok else "not a projection"))
    return _emit(entries, _header(prob.digest, args, {"algebra": _algebra_line(prob)}), args.format)


def _coords(v) -> str:
    return "[" + ", ".join(format_scalar(x) for x in v) + "]"


def cmd_compute(args, text: str) -> int:
    prob = parse_problem(text)
    value = evaluate(prob, args.expression)
    if isinstance(value, Form):
        kind, deg, shown, coords = "form", value.degree, str(value), value.coords
    else:
        assert isinstance(value, FormHom)
        kind, deg, shown, coords = "hom", value.degree, str(value), value.coords()
    if args.format == "machine":
        sys.stdout.write(f"VALUE {kind} {deg} {shown}\nCOORDS {' '.join(format_scalar(x) for x in coords)}\n")
        return 0
    lines = [f"tool: {TOOL}", "command: compute", f"input-sha256: {prob.digest}",
             f"algebra: {_algebra_line(prob)}", f"expression: {args.expression}",
             f"type: {kind} of degree {deg}" if kind == "form" else f"type: hom Omega_1 -> Omega_{deg}",
             f"value: {shown}", f"coordinates: {_coords(coords)}"]
    sys.stdout.write("\n".join(lines) + "\n")
    return 0


def _worker(job):
    name, text, settings = job
    prob = parse_problem(text)
    group = next(g for g in SUITES["all"] if g.__name__ == name)
    return run_group(group, prob, settings)


def cmd_check(args, text: str) -> int:
    try:
        prob = parse_problem(text)
    except AlgebraError as exc:
        return _emit([_algebra_failure(exc)], _header(digest(text), args, {"suite": args.suite}), args.format)
    settings = Settings(seed=args.seed, degree=args.degree)
    groups = SUITES[args.suite]
    if args.workers > 1 and len(groups) > 1:
        with ProcessPoolExecutor(max_workers=args.workers) as pool:
            results = list(pool.map(_worker, [(g.__name__, text, settings) for g in groups]))
    else:
        results = [run_group(g, prob, settings) for g in groups]
    entries = [e for chunk in results for e in chunk]
    header = _header(prob.digest, args, {"suite": args.suite, "algebra": _algebra_line(prob)})
    return _emit(entries, header, args.format)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.degree < 0:
        print("error: --degree must be non-negative", file=sys.stderr)
        return 2
    if args.workers < 1:
        print("error: --workers must be at least 1", file=sys.stderr)
        return 2
    try:
        text = _load(args.file)
    except OSError as exc:
        print(f"error: cannot read {args.file}: {exc.strerror}", file=sys.stderr)
        return 2
    try:
        if args.command == "validate":
            return cmd_validate(args, text)
        if args.command == "compute":
            return cmd_compute(args, text)
        return cmd_check(args, text)
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (ExprError, AlgebraError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())

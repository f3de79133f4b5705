"""Command-line front end.  All output is JSON on stdout."""
from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ProcessPoolExecutor

from . import builders, qp
from .algebra import Algebra, Grouping, dumps, from_json_dict, to_json_dict, validate
from .canonical import (
    GroupingError,
    NotComputable,
    canonical_filtration,
    default_grouping,
    verify_canonical,
)
from .filtration import AdaptedFiltration, IncompatibleFiltration, associated_graded, nu
from .grade import is_graded_semistable, structural_checks
from .linalg import format_frac, frac, integer_primitive
from .radical import destabilizing_witness, is_semistable, radical

EXIT_OK, EXIT_USAGE, EXIT_INVALID = 0, 1, 2


class CliError(Exception):
    def __init__(self, message: str, code: int = EXIT_USAGE, payload=None):
        super().__init__(message)
        self.code = code
        self.payload = payload


def _read_text(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise CliError(f"{path}: {exc.strerror}") from None


def _parse_json(path: str, text: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise CliError(f"{path}: line {exc.lineno} column {exc.colno}: {exc.msg}") from None


def load_algebra(path: str, text: str | None = None) -> Algebra:
    obj = _parse_json(path, _read_text(path) if text is None else text)
    if not isinstance(obj, dict):
        raise CliError(f"{path}: expected a JSON object")
    try:
        a = from_json_dict(obj)
    except (ValueError, TypeError) as exc:
        raise CliError(f"{path}: {exc}") from None
    bad = validate(a)
    if bad:
        raise CliError(f"{path}: {bad[0].message}", EXIT_INVALID, {"valid": False, "violations": [v.to_json() for v in bad]})
    return a


def _grouping(a: Algebra, choice: str) -> Grouping:
    if choice == "auto":
        return default_grouping(a)
    if choice == "identity":
        return Grouping.identity(a.dim)
    if choice in ("degree", "blocks"):
        if a.grading is None:
            raise CliError(f"--grouping {choice} needs a graded algebra")
        keys = [sum(g) for g in a.grading] if choice == "degree" else list(a.grading)
        return Grouping.from_keys(keys, reason=f"{choice} grouping requested on the command line")
    obj = _parse_json(choice, _read_text(choice))
    try:
        return Grouping.from_json(obj)
    except (KeyError, TypeError, ValueError) as exc:
        raise CliError(f"{choice}: bad grouping: {exc}") from None


def _weights_arg(a: Algebra, args) -> AdaptedFiltration:
    if args.filtration:
        obj = _parse_json(args.filtration, _read_text(args.filtration))
        raw = obj.get("weights") if isinstance(obj, dict) else None
        basis = obj.get("basis") if isinstance(obj, dict) else None
    elif args.weights:
        raw, basis = args.weights.split(","), None
    else:
        raise CliError("give --weights w0,w1,... or --filtration FILE")
    try:
        w = [frac(x) for x in raw]
        rows = [[frac(x) for x in r] for r in basis] if basis else None
        return AdaptedFiltration(a, w, rows)
    except (TypeError, ValueError, ZeroDivisionError) as exc:
        raise CliError(f"bad weights: {exc}") from None


def _nu_json(a: Algebra, f: AdaptedFiltration) -> dict:
    out = {"weights": list(integer_primitive(f.weights))}
    if f.is_trivial:
        out.update(wt="0", norm_sq="0", nu_sq_signed=None)
    else:
        v = nu(a, f)
        out.update(wt=format_frac(v.wt), norm_sq=format_frac(v.norm_sq), nu_sq_signed=format_frac(v.signed_square))
    return out


def _canonical_one(job) -> dict:
    path, text, grouping_choice, certify = job
    a = load_algebra(path, text)
    g = _grouping(a, grouping_choice)
    try:
        res = canonical_filtration(a, g if a.grading is not None else None)
    except (GroupingError, NotComputable) as exc:
        raise CliError(f"{path}: {exc}") from None
    out = res.to_json()
    if certify:
        out["certification"] = _certify_result(res)
    return out


def _certify_result(res) -> dict:
    report: dict = {}
    cs, cert = res.system, res.certificate
    if cs is None or cert is None:
        report["kkt"] = None
        report["oracle"] = "no constraint system for this route"
        return report
    report["kkt"] = qp.verify_kkt(cs, cert)
    limit = qp.max_oracle_rows()
    if len(cs.rows) <= limit:
        oracle = qp.enumerate_active_sets_oracle(cs, limit)
        report["oracle"] = oracle.w_star == cert.w_star
    else:
        report["oracle"] = f"skipped: {len(cs.rows)} rows > {limit}"
    return report


def _emit(obj) -> None:
    sys.stdout.write(json.dumps(obj, indent=2, sort_keys=True) + "\n")


# -- subcommands ----------------------------------------------------------


def cmd_validate(args) -> int:
    a = load_algebra(args.file)
    _emit({"valid": True, "dim": a.dim, "kind": a.kind.value})
    return EXIT_OK


def cmd_gen(args) -> int:
    try:
        if args.family == "direct-sum":
            if len(args.params) < 2:
                raise CliError("direct-sum needs at least two algebra files")
            a = builders.sum_of(*(load_algebra(p) for p in args.params))
        else:
            a = builders.build(args.family, args.params)
    except (TypeError, ValueError) as exc:
        raise CliError(str(exc)) from None
    text = dumps(a) + "\n"
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_canonical(args) -> int:
    files = args.files
    if files.count("-") > 1:
        raise CliError("stdin can be read only once")
    jobs = [(p, _read_text(p), args.grouping, args.certify) for p in files]
    if args.jobs > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            results = list(pool.map(_canonical_one, jobs))
    else:
        results = [_canonical_one(j) for j in jobs]
    _emit(results[0] if len(results) == 1 else results)
    return EXIT_OK


def cmd_nu(args) -> int:
    a = load_algebra(args.file)
    f = _weights_arg(a, args)
    try:
        _emit(_nu_json(a, f))
    except IncompatibleFiltration as exc:
        raise CliError(str(exc)) from None
    return EXIT_OK


def cmd_radical(args) -> int:
    a = load_algebra(args.file)
    r = radical(a)
    _emit({"dim": r.dim, "basis": [[format_frac(x) for x in row] for row in r.rows]})
    return EXIT_OK


def cmd_semistable(args) -> int:
    a = load_algebra(args.file)
    ss = is_semistable(a)
    out = {"semistable": ss}
    if not ss:
        f = destabilizing_witness(a)
        out["witness"] = _nu_json(a, f)
        if f.basis is not None:
            out["witness"]["basis"] = [[format_frac(x) for x in r] for r in f.basis]
    _emit(out)
    return EXIT_OK


def cmd_gr(args) -> int:
    a = load_algebra(args.file)
    f = _weights_arg(a, args)
    try:
        gr = associated_graded(a, f)
    except ValueError as exc:
        raise CliError(str(exc)) from None
    _emit(to_json_dict(gr))
    return EXIT_OK


def cmd_graded_ss(args) -> int:
    a = load_algebra(args.file)
    g = _grouping(a, args.grouping)
    try:
        _emit({"graded_semistable": is_graded_semistable(a, g)})
    except (GroupingError, ValueError) as exc:
        raise CliError(str(exc)) from None
    return EXIT_OK


def cmd_gr_structure(args) -> int:
    a = load_algebra(args.file)
    try:
        _emit(structural_checks(a).to_json())
    except ValueError as exc:
        raise CliError(str(exc)) from None
    return EXIT_OK


def cmd_oracle(args) -> int:
    a = load_algebra(args.file)
    cs = qp.build_constraints(a, _grouping(a, args.grouping))
    try:
        cert = qp.enumerate_active_sets_oracle(cs)
    except qp.OracleTooLarge as exc:
        raise CliError(str(exc)) from None
    _emit(cert.to_json())
    return EXIT_OK


def cmd_certify(args) -> int:
    a = load_algebra(args.file)
    f = _weights_arg(a, args)
    try:
        _emit({"certified": verify_canonical(a, f)})
    except ValueError as exc:
        raise CliError(str(exc)) from None
    return EXIT_OK


def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="canfilt", description="Canonical filtrations of algebras given by structure constants.")
    sub = p.add_subparsers(dest="command", required=True)

    def with_file(name, fn, help_):
        sp = sub.add_parser(name, help=help_)
        sp.add_argument("file", help="algebra JSON file, or - for stdin")
        sp.set_defaults(fn=fn)
        return sp

    def with_weights(sp):
        sp.add_argument("--weights", help="comma-separated rationals, one per basis vector")
        sp.add_argument("--filtration", help='JSON file {"weights": [...], "basis": optional rows}')

    def with_grouping(sp):
        sp.add_argument("--grouping", default="auto", help="auto, identity, degree, blocks or a grouping JSON file")

    with_file("validate", cmd_validate, "check the algebra axioms")
    sp = sub.add_parser("gen", help="generate an example algebra")
    sp.add_argument("family", help="one of: " + ", ".join(sorted(builders.FAMILIES) + ["direct-sum"]))
    sp.add_argument("params", nargs="*")
    sp.add_argument("-o", "--output")
    sp.set_defaults(fn=cmd_gen)

    sp = sub.add_parser("canonical", help="compute the canonical filtration")
    sp.add_argument("files", nargs="+", help="algebra JSON files, or - for stdin")
    with_grouping(sp)
    sp.add_argument("--certify", action="store_true", help="re-check KKT and run the active-set oracle")
    sp.add_argument("--jobs", type=int, default=1, help="parallel workers for several inputs")
    sp.set_defaults(fn=cmd_canonical)

    with_weights(with_file("nu", cmd_nu, "wt, norm and nu of a filtration"))
    with_file("radical", cmd_radical, "Jacobson or solvable radical")
    with_file("semistable", cmd_semistable, "semistability with a destabilizing witness")
    with_weights(with_file("gr", cmd_gr, "associated graded algebra of a filtration"))
    with_grouping(with_file("graded-ss", cmd_graded_ss, "is the split filtration canonical"))
    with_file("gr-structure", cmd_gr_structure, "radical, center and annihilator checks")
    with_grouping(with_file("oracle", cmd_oracle, "brute-force QP optimum"))
    with_weights(with_file("certify", cmd_certify, "certify a filtration as canonical"))
    return p


def main(argv=None) -> int:
    parser = _parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        return args.fn(args)
    except CliError as exc:
        if exc.payload is not None:
            _emit(exc.payload)
        sys.stderr.write(f"canfilt: {exc}\n")
        return exc.code


if __name__ == "__main__":
    sys.exit(main())

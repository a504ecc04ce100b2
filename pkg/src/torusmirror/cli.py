"""Command line front end.

Exit status: 0 success, 1 a verification check failed, 2 usage or input error,
3 numerical failure (convergence, precision, singular parameters).
"""
from __future__ import annotations

import argparse
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

import numpy as np

from . import families
from .errors import InputError, MisuseError, TorusMirrorError
from .lattice import (MorphismClass, basis_classes, class_index, fixed_classes, invariant_basis,
                      make_class, validate)
from .report import Report, dumps
from .ring import basis_element, compose, find_relations, generators, mirror_compose
from .specfile import BUILTIN, load_spec, parse_complex_value, parse_real
from .theta import SeriesParams

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_NUMERIC = 0, 1, 2, 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise SystemExit(_usage_exit(f"{self.prog}: error: {message}"))


def _usage_exit(message: str) -> int:
    print(message, file=sys.stderr)
    return EXIT_USAGE


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--spec", help=f"spec file path or built-in name ({', '.join(BUILTIN)})")
    common.add_argument("--tol", type=float, default=1e-14, help="theta truncation tolerance")
    common.add_argument("--max-radius", type=int, default=64, help="theta truncation cap")
    common.add_argument("--svd-tol", type=float, default=1e-8, help="relative singular value cutoff")
    common.add_argument("--out", help="write the report here instead of stdout")
    common.add_argument("--format", choices=("json", "csv"), default="json")

    p = _Parser(prog="torusmirror", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)
    sub.add_parser("check", parents=[common], help="validate a spec")
    b = sub.add_parser("basis", parents=[common], help="list intersection classes at a level")
    b.add_argument("--k", type=int, required=True)
    b.add_argument("--invariant", action="store_true", help="orbit sums under the involution")
    pr = sub.add_parser("product", parents=[common], help="compose two basis classes")
    pr.add_argument("x", help="class such as '[1/3]@1' or '0,1/2@2'")
    pr.add_argument("y")
    pr.add_argument("--mirror", action="store_true", help="also compute the mirror-side product")
    r = sub.add_parser("relations", parents=[common], help="relations among degree-1 generators")
    r.add_argument("--degree", type=int, required=True)
    r.add_argument("--noncommutative", action="store_true")
    v = sub.add_parser("verify", parents=[common], help="run a worked-family verification")
    v.add_argument("--family", required=True, choices=families.FAMILIES + ("all",))
    v.add_argument("--tau", help="modulus, e.g. 'i' or '0.3+i' (first period for Kummer)")
    v.add_argument("--tau2", help="second Kummer period")
    v.add_argument("--tau3", help="off-diagonal Kummer period")
    v.add_argument("--b", help="Sklyanin shift, e.g. 3/10")
    v.add_argument("--jobs", type=int, default=1, help="parallel workers for --family all")
    j = sub.add_parser("jseries", parents=[common], help="q-expansion of j from the full pipeline")
    j.add_argument("--terms", type=int, default=6)
    return p


def parse_class(text: str) -> MorphismClass:
    """``"[1/3]@1"``, ``"1/3@1"`` or ``"0,1/2@2"``."""
    if "@" not in text:
        raise InputError(f"class {text!r} needs a level suffix '@k'")
    coords, level = text.rsplit("@", 1)
    coords = coords.strip().strip("[]")
    values = [parse_real(t) for t in coords.replace(";", ",").split(",") if t.strip()]
    try:
        k = int(level)
    except ValueError:
        raise InputError(f"bad level in {text!r}") from None
    return make_class(k, values)


def _params(args) -> SeriesParams:
    return SeriesParams(tol=args.tol, max_radius=args.max_radius)


def _need_spec(args):
    if not args.spec:
        raise InputError(f"'{args.command}' needs --spec")
    return load_spec(args.spec)


def _inputs(args, spec=None) -> dict:
    out = {"command": args.command, "tol": args.tol, "max_radius": args.max_radius,
           "svd_tol": args.svd_tol}
    if spec is not None:
        out["spec"] = args.spec
        out["spec_sha256"] = spec.digest()
    return out


def _csv_checks(reports: list[Report]) -> str:
    lines = ["report,check,residual,tolerance,pass"]
    for rep in reports:
        for c in rep.checks:
            lines.append(f"{rep.name},{c.id},{c.residual:.17g},{c.tolerance:.17g},{str(c.passed).lower()}")
    return "\n".join(lines) + "\n"


def cmd_check(args):
    spec = _need_spec(args)
    res = validate(spec)
    rep = Report("check", _inputs(args, spec))
    for c in res.checks:
        rep.add(c.name, c.witness, None, 0.0 if c.passed or not c.required else 1.0, 0.0)
    rep.data["spec"] = spec.to_text()
    return rep, _csv_checks([rep])


def cmd_basis(args):
    spec = _need_spec(args)
    rep = Report("basis", {**_inputs(args, spec), "k": args.k, "invariant": args.invariant})
    if args.invariant:
        rows = [[str(c) for c in orb] for orb in invariant_basis(spec, args.k)]
        rep.data["fixed"] = [str(c) for c in fixed_classes(spec, args.k)]
    else:
        rows = [[str(c)] for c in basis_classes(spec, args.k)]
    rep.data["count"] = len(rows)
    rep.data["basis"] = rows
    csv = "index,classes\n" + "".join(f"{i},{' + '.join(r)}\n" for i, r in enumerate(rows))
    return rep, csv


def cmd_product(args):
    spec = _need_spec(args)
    params = _params(args)
    x, y = parse_class(args.x), parse_class(args.y)
    for c in (x, y):
        if c not in class_index(spec, c.level):
            raise InputError(f"{c} is not an intersection class of this spec")
    prod = compose(spec, basis_element(spec, x), basis_element(spec, y), params)
    rep = Report("product", {**_inputs(args, spec), "x": str(x), "y": str(y)})
    classes = [str(c) for c in prod.classes()]
    rep.data["level"] = prod.level
    rep.data["terms"] = {c: v for c, v in zip(classes, prod.coeffs) if abs(v) > 0}
    if args.mirror:
        mirror = mirror_compose(spec, x, y, params)
        err = float(np.abs(mirror.coeffs - prod.coeffs).max())
        rep.add("mirror_agreement", None, None, err, 1e-10)
    csv = "class,re,im\n" + "".join(f"{c},{v.real:.17g},{v.imag:.17g}\n"
                                    for c, v in zip(classes, prod.coeffs))
    return rep, csv


def cmd_relations(args):
    spec = _need_spec(args)
    gens = generators(spec, 1)
    rel = find_relations(spec, args.degree, gens, commutative=not args.noncommutative,
                         svd_tol=args.svd_tol, params=_params(args))
    rep = Report("relations", {**_inputs(args, spec), "degree": args.degree,
                               "commutative": not args.noncommutative})
    rep.data["count"] = rel.count
    rep.data["relations"] = rel
    return rep, rel.to_csv()


def _family_job(job):
    name, kw = job
    return families.run_family(name, **kw)


def cmd_verify(args):
    names = list(families.FAMILIES) if args.family == "all" else [args.family]
    kw = {"svd_tol": args.svd_tol, "params": _params(args)}
    for key in ("tau", "tau2", "tau3"):
        if getattr(args, key):
            kw[key] = parse_complex_value(getattr(args, key))
    if args.b is not None:
        kw["b"] = parse_real(args.b)
    jobs = [(n, kw) for n in names]
    if args.jobs > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(args.jobs) as pool:
            reports = list(pool.map(_family_job, jobs))
    else:
        reports = [_family_job(j) for j in jobs]
    inputs = {"command": "verify", "tol": args.tol, "max_radius": args.max_radius,
              "svd_tol": args.svd_tol}
    if len(reports) == 1:
        rep = reports[0]
        rep.inputs = {**inputs, **rep.inputs}
        return rep, _csv_checks(reports)
    merged = Report("all", inputs)
    for sub in reports:
        for c in sub.checks:
            merged.checks.append(c.__class__(f"{sub.name}.{c.id}", c.lhs, c.rhs, c.residual,
                                             c.tolerance, c.passed))
        merged.data[sub.name] = sub.as_dict()
    return merged, _csv_checks(reports)


def cmd_jseries(args):
    from .modular import j_coefficients
    series = families.j_qseries(args.terms, params=_params(args))
    oracle = j_coefficients(args.terms)
    rep = Report("jseries", {**_inputs(args), "terms": args.terms, "y0": series.y0,
                             "samples": series.samples})
    for n, (c, o) in enumerate(zip(series.coefficients, oracle)):
        rep.add(f"q^{n - 1}", c, o, abs(c - o) / abs(o), 1e-3)
    rep.data["rounded"] = series.rounded
    csv = "power,re,im,oracle\n" + "".join(f"{n - 1},{c.real:.17g},{c.imag:.17g},{o}\n"
                                           for n, (c, o) in enumerate(zip(series.coefficients,
                                                                          oracle)))
    return rep, csv


COMMANDS = {"check": cmd_check, "basis": cmd_basis, "product": cmd_product,
            "relations": cmd_relations, "verify": cmd_verify, "jseries": cmd_jseries}


def run(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    try:
        _params(args)
        if not args.svd_tol > 0:
            raise InputError("--svd-tol must be positive")
        rep, csv = COMMANDS[args.command](args)
    except (InputError, MisuseError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (TorusMirrorError, ArithmeticError, np.linalg.LinAlgError) as exc:
        print(f"numerical error ({type(exc).__name__}): {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    text = csv if args.format == "csv" else dumps(rep)
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK if rep.passed else EXIT_FAIL


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()

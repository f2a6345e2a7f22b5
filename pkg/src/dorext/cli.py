"""Command-line front end: ``dorext <command> ...``.

Exit status: 0 when every directed check passes, 1 on a failing check, 2 on
spec or usage errors, 3 when an internal cap stops the computation.
"""

from __future__ import annotations

import argparse
import os
import sys
import tempfile

from . import catalog
from .dcv import (
    SCOPES,
    SearchOptions,
    SearchTemplate,
    SourceData,
    bounded_surjectivity,
    check_dcv,
    check_hom_multiplicative,
    check_trimmed_dcv,
    hom_to_iterated,
    iso_degree_check,
    search_dcv,
)
from .doubleore import (
    DEFAULT_DEGREE,
    associated_graded,
    change_basis,
    check_associativity,
    check_compatibility,
    check_iterated_agreement,
    to_iterated,
    verify_basis_change,
)
from .dsl import build, parse_spec
from .errors import (
    DorextError,
    IterationCap,
    NonTerminating,
    NotApplicable,
    PoolTooLarge,
    PreconditionFailure,
    SourceNotBuildable,
    SpecError,
    UnknownFixture,
    WellDefinednessFailure,
)
from .report import Report, dump_structured, dump_text

EXIT_OK, EXIT_FAIL, EXIT_SPEC, EXIT_CAP = 0, 1, 2, 3


class UsageError(DorextError):
    pass


def _read_spec(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def _load(args):
    doc = parse_spec(_read_spec(args.spec))
    return doc, build(doc)


def _degree(args, directive=None) -> int:
    if args.max_degree is not None:
        return args.max_degree
    if directive is not None and directive.max_degree is not None:
        return directive.max_degree
    return DEFAULT_DEGREE


def _scope(args, directive=None) -> str:
    if args.scope is not None:
        return args.scope
    if directive is not None and directive.scope is not None:
        return directive.scope
    return "basis"


def _directive(doc, kind, target):
    for c in doc.checks:
        if c.kind == kind and c.target == target:
            return c
    return None


def _trimmed_coefficients(c):
    """``(a, b)`` when ``q1 = sum a_i y1^i`` and ``q2 = sum b_j y2^j`` with scalar coefficients."""
    def coeffs(q, k):
        out = {}
        for (i, j), r in q.terms.items():
            e = i if k == 1 else j
            if (j if k == 1 else i) or e == 0 or not r.is_scalar():
                return None
            out[e] = r.constant()
        top = max(out, default=0)
        return [out.get(e, 0) for e in range(1, top + 1)]

    return coeffs(c.q1, 1), coeffs(c.q2, 2)


# -- commands ---------------------------------------------------------------------


def cmd_check_extension(args):
    doc = parse_spec(_read_spec(args.spec))
    reports = []
    try:
        built = build(doc)
    except WellDefinednessFailure as exc:
        rep = exc.report if exc.report is not None else Report("well-defined", False)
        if not rep.failures:
            rep.fail(str(exc))
        return [rep]
    for name, alg in built.extensions.items():
        d = _degree(args, _directive(doc, "extension", name))
        for rep in (check_compatibility(alg, d), check_associativity(alg, d)):
            rep.check = f"{rep.check} [{name}]"
            reports.append(rep)
    return reports


def cmd_check_dcv(args):
    doc, built = _load(args)
    reports = []
    for name, c in built.dcvs.items():
        base = _directive(doc, "dcv", name)
        rep = check_dcv(c, None, _degree(args, base), _scope(args, base))
        rep.check = f"dcv [{name}]"
        reports.append(rep)
        for kind in ("trimmed", "iso", "hom-to-iterated", "multiplicative", "surjectivity"):
            d = _directive(doc, kind, name)
            if d is None:
                continue
            deg = _degree(args, d)
            if kind == "trimmed":
                a, b = _trimmed_coefficients(c)
                if a is None or b is None:
                    r = Report("trimmed-dcv", False, deg)
                    r.fail("q1, q2 are not scalar combinations of pure powers of y1 and y2")
                else:
                    try:
                        r = check_trimmed_dcv(c.source, c.algebra, a, b, deg)
                    except PreconditionFailure as exc:
                        r = Report("trimmed-dcv", False, deg)
                        r.fail(str(exc))
            elif kind == "iso":
                r = iso_degree_check(c)
            elif kind == "hom-to-iterated":
                r = hom_to_iterated(c, None, deg, _scope(args, d))
            elif kind == "multiplicative":
                try:
                    r = check_hom_multiplicative(c, None, min(deg, 2))
                except SourceNotBuildable as exc:
                    r = Report("hom-multiplicative", False, deg)
                    r.fail(str(exc))
            else:
                r = bounded_surjectivity(c, None, deg)
            r.check = f"{r.check} [{name}]"
            reports.append(r)
    return reports


def cmd_to_iterated(args):
    doc, built = _load(args)
    reports = []
    for name, alg in built.extensions.items():
        d = _degree(args, _directive(doc, "iterated", name))
        res = to_iterated(alg)
        rep = Report(f"iterated presentation [{name}]", res.found, d)
        rep.details.update(res.describe())
        if not res.found:
            rep.fail("no iterated presentation in either order")
        reports.append(rep)
        for pres in res.presentations.values():
            agree = check_iterated_agreement(alg, pres, d)
            agree.check = f"{agree.check} [{name}]"
            reports.append(agree)
    for name, c in built.dcvs.items():
        d = _directive(doc, "hom-to-iterated", name)
        rep = hom_to_iterated(c, None, _degree(args, d), _scope(args, d))
        rep.check = f"{rep.check} [{name}]"
        reports.append(rep)
    return reports


def cmd_graded(args):
    doc, built = _load(args)
    reports = []
    for name, alg in built.extensions.items():
        d = _degree(args, _directive(doc, "graded", name))
        rep = Report(f"associated graded [{name}]", True, d)
        try:
            gr = associated_graded(alg)
        except NotApplicable as exc:
            rep.fail(str(exc))
            reports.append(rep)
            continue
        rep.details["algebra"] = gr.describe()
        for sub in (check_compatibility(gr, d), check_associativity(gr, d)):
            rep.details[sub.check] = sub
            if not sub.passed:
                rep.fail(f"{sub.check} fails on the graded algebra")
        reports.append(rep)
    return reports


def cmd_change_basis(args):
    doc, built = _load(args)
    reports = []
    for name, alg in built.extensions.items():
        d = _degree(args, _directive(doc, "change-basis", name))
        rep = Report(f"change of basis [{name}]", True, d)
        try:
            ch = change_basis(alg)
        except NotApplicable as exc:
            rep.fail(str(exc))
            reports.append(rep)
            continue
        rep.details["change"] = ch.describe()
        for sub in (verify_basis_change(alg, ch, d), check_compatibility(ch.algebra, d)):
            rep.details[sub.check] = sub
            if not sub.passed:
                rep.fail(f"{sub.check} fails")
        reports.append(rep)
    return reports


def _parse_exponents(text):
    if text is None:
        return None
    out = []
    for item in text.split(","):
        i, _, j = item.partition(":")
        if not (i.strip().isdigit() and j.strip().isdigit()):
            raise UsageError(f"bad exponent pair {item!r}; expected i:j")
        out.append((int(i), int(j)))
    return tuple(out)


def cmd_search_dcv(args):
    doc, built = _load(args)
    if not built.extensions:
        raise UsageError("the spec declares no extension")
    target_name = args.target or next(iter(built.extensions))
    if target_name not in built.extensions:
        raise UsageError(f"unknown target {target_name!r}")
    target = built.extensions[target_name]
    src_name = args.source or target_name
    if src_name in built.extensions:
        src = SourceData.of(built.extensions[src_name])
    elif src_name in built.sources:
        src = built.sources[src_name]
    else:
        raise UsageError(f"unknown source {src_name!r}")
    free = set(filter(None, (args.free or "").split(",")))
    unknown = free - {"delta", "p12", "p11", "tau0", "tau1", "tau2"}
    if unknown:
        raise UsageError(f"cannot free {', '.join(sorted(unknown))}")
    template = SearchTemplate(
        src.sigma,
        None if "delta" in free else src.delta,
        None if "p12" in free else src.p12,
        None if "p11" in free else src.p11,
        tuple(None if f"tau{k}" in free else src.tau[k] for k in range(3)),
    )
    pool = [p.strip() for p in args.pool.split(",") if p.strip()]
    try:
        pool = [target.field.parse(p) for p in pool]
    except ValueError as exc:
        raise UsageError(f"bad --pool entry: {exc}") from exc
    options = SearchOptions(
        q1_exponents=_parse_exponents(args.q1_exponents),
        q2_exponents=_parse_exponents(args.q2_exponents),
        word_degree=args.word_degree,
        nondegenerate=not args.allow_degenerate,
        unit_leading=args.unit_leading,
        workers=args.workers,
        scope=args.scope or "basis",
        **({"cap": args.cap} if args.cap is not None else {}),
    )
    d = _degree(args)
    try:
        hits = search_dcv(template, target, args.degree, pool, d, options)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    rep = Report(f"dcv search [{target_name}]", True, d)
    rep.details["degree bound"] = args.degree
    rep.details["pool"] = [target.field.render(p) for p in pool]
    rep.details["hits"] = len(hits)
    rep.details["matrices"] = [h.describe() for h in hits]
    return [rep]


def cmd_catalog(args):
    if args.action == "list":
        rep = Report("catalog", True)
        rep.details["fixtures"] = catalog.fixture_names(include_variants=True)
        return [rep]
    if args.action == "show":
        if not args.name:
            raise UsageError("catalog show needs a fixture name")
        fx = catalog.get_fixture(args.name)
        rep = Report(f"fixture {fx.name}", True)
        rep.details.update(fx.describe())
        return [rep]
    inject = tuple(catalog.get_fixture(n) for n in (args.inject or []))
    return [catalog.verify_all(_degree(args), inject, args.workers)]


COMMANDS = {
    "check-extension": cmd_check_extension,
    "check-dcv": cmd_check_dcv,
    "to-iterated": cmd_to_iterated,
    "search-dcv": cmd_search_dcv,
    "catalog": cmd_catalog,
    "graded": cmd_graded,
    "change-basis": cmd_change_basis,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--max-degree", type=int, default=None, help=f"degree bound for checks (default {DEFAULT_DEGREE})")
    common.add_argument("--scope", choices=SCOPES, default=None, help="ring elements used for dcv checks")
    common.add_argument("--format", choices=("text", "structured"), default="text")
    common.add_argument("--out", default=None, help="write the report here instead of standard output")

    parser = argparse.ArgumentParser(prog="dorext", description="Exact checks for double Ore extensions and dcv-matrices.")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, helptext in (
        ("check-extension", "compatibility and associativity of each extension"),
        ("check-dcv", "certificates for each dcv candidate"),
        ("to-iterated", "iterated presentations and homomorphism translation"),
        ("graded", "associated graded algebra"),
        ("change-basis", "normalize the relation by a change of generators"),
    ):
        p = sub.add_parser(name, parents=[common], help=helptext)
        p.add_argument("spec", help="spec file, or - for standard input")
    p = sub.add_parser("search-dcv", parents=[common], help="exhaustive dcv search")
    p.add_argument("spec")
    p.add_argument("--degree", type=int, required=True)
    p.add_argument("--pool", required=True, help="comma-separated scalars")
    p.add_argument("--target", default=None)
    p.add_argument("--source", default=None, help="extension or data set supplying sigma'")
    p.add_argument("--free", default=None, help="comma-separated unknowns: delta,p12,p11,tau0,tau1,tau2")
    p.add_argument("--q1-exponents", default=None, help="allowed pairs, e.g. 1:0,0:0")
    p.add_argument("--q2-exponents", default=None)
    p.add_argument("--word-degree", type=int, default=1)
    p.add_argument("--allow-degenerate", action="store_true")
    p.add_argument("--unit-leading", action="store_true")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--cap", type=int, default=None)
    p = sub.add_parser("catalog", parents=[common], help="worked fixtures")
    p.add_argument("action", choices=("verify", "list", "show"))
    p.add_argument("name", nargs="?")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--inject", action="append", help="extra fixture to replay, e.g. H-corrupted")
    return parser


def _emit(text: str, out: str | None):
    if out is None:
        sys.stdout.write(text)
        return
    directory = os.path.dirname(os.path.abspath(out))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".dorext-")
    with os.fdopen(fd, "w", encoding="utf-8") as fh:
        fh.write(text)
    os.chmod(tmp, 0o644)
    os.replace(tmp, out)


def run_command(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_SPEC if exc.code else EXIT_OK
    try:
        reports = COMMANDS[args.command](args)
    except (SpecError, UsageError, UnknownFixture, OSError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_SPEC
    except (PoolTooLarge, IterationCap, NonTerminating) as exc:
        sys.stderr.write(f"stopped: {exc}\n")
        return EXIT_CAP
    if args.format == "structured":
        text = dump_structured({"command": args.command, "passed": all(r.passed for r in reports), "reports": reports})
    else:
        text = dump_text(reports)
    _emit(text, args.out)
    return EXIT_OK if all(r.passed for r in reports) else EXIT_FAIL


def main():
    sys.exit(run_command())

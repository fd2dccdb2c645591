"""Command-line entry point: one subcommand per verification."""

import argparse
import logging
import sys
from fractions import Fraction

from . import __version__
from .chartable import (
    assemble_full_table,
    assemble_table_from_quotients,
    cached_table,
    closed_form_table,
    table_payload,
    verify_table,
)
from .closed_forms import audit_degree_row, resolve_shape
from .coclique import DEFAULT_NODE_BUDGET, max_coclique_exact
from .config import SUBCOMMANDS, RunConfig, default_workers, resolve_cache_dir
from .conjectures import conjecture_degree_patterns, conjecture_t3_spectrum_check
from .ekr import audit_printed_t3_system, b_squared_trace_check, hoffman_certificate_check, solve_weights
from .errors import ConsistencyError, ExtractionError, InvalidInputError, describe_error
from .inequalities import gap_inequalities, gap_module_scan
from .matchings import check_enumerable, enumerate_matchings
from .partitions import audit_f_growth, dominance_geq, double_factorial
from .quotients import (
    exact_eigenvalues,
    joint_eigenspaces,
    module_rows_from_quotients,
    quotient_matrix,
    verify_printed_diagonals,
)
from .scheme import build_intersection_graph, class_labels, degree_table, verify_scheme_axioms
from .serialize import dumps, fraction_to_str

logger = logging.getLogger(__name__)

EXIT_OK, EXIT_MISMATCH, EXIT_ERROR = 0, 1, 2


def _k_range(text: str) -> tuple[int, int]:
    lo, sep, hi = text.partition("..")
    try:
        return (int(lo), int(hi)) if sep else (int(lo), int(lo))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected A..B, got {text!r}") from None


def _build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("-v", "--verbose", action="count", default=0, help="-v for progress, -vv for detail")
    common.add_argument("--json", action="store_true", help="machine-readable output")
    common.add_argument("--workers", type=int, default=None, help="worker processes (default: all cores)")
    common.add_argument("--cache", default=None, help="character-table cache directory")
    common.add_argument("--mode", choices=("dense", "implicit"), default="implicit")
    common.add_argument("--seed", type=int, default=0)

    parser = argparse.ArgumentParser(
        prog="pmscheme",
        description="Perfect-matching association scheme of K_2k and set-wise intersecting families.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("enumerate", parents=[common], help="list perfect matchings of K_2k")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--count-only", action="store_true")

    p = sub.add_parser("classes", parents=[common], help="scheme classes with degrees")
    p.add_argument("--k", type=int, required=True)

    p = sub.add_parser("degrees", parents=[common], help="class degrees and the printed degree row")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--audit", action="store_true", help="compare with the closed-form degree row")

    p = sub.add_parser("scheme-check", parents=[common], help="verify the association-scheme axioms")
    p.add_argument("--k", type=int, required=True)

    p = sub.add_parser("quotient", parents=[common], help="quotient of a class under a Young subgroup")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--class", dest="klass", help='e.g. "4,2,2" or "2k-4,2,2"')
    p.add_argument("--subgroup", help='block sizes, e.g. "6,2" or "2k-2,2"')
    p.add_argument("--diagonals", action="store_true", help="audit the printed X_[2k-4,2,2] quotient diagonals")

    p = sub.add_parser("chartable", parents=[common], help="build, cache or verify character tables")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--source", choices=("cache", "dense", "quotient", "closed-form"), default="cache")
    p.add_argument("--verify", action="store_true")
    p.add_argument("--method", choices=("quotient", "spectrum", "both"), default="quotient")

    p = sub.add_parser("ekr", parents=[common], help="weights, certificate and bound for B_t")
    p.add_argument("--t", type=int, required=True, choices=(2, 3))
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--certificate", action="store_true")
    p.add_argument("--spectrum", action="store_true", help="numeric least eigenvalue and module eigenvalues")
    p.add_argument("--mis", action="store_true", help="exact maximum coclique as an oracle")
    p.add_argument("--audit-system", action="store_true", help="compare the printed t=3 system with the grid")

    p = sub.add_parser("coclique", parents=[common], help="exact maximum coclique of N_t(2k)")
    p.add_argument("--t", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--budget", type=int, default=DEFAULT_NODE_BUDGET)
    p.add_argument("--no-symmetry", action="store_true")

    p = sub.add_parser("conjectures", parents=[common], help="conjecture and inequality reports")
    p.add_argument(
        "--which", required=True,
        choices=("t3", "degree-patterns", "inequalities", "module-scan", "b-squared", "f-growth"),
    )
    p.add_argument("--k-range", type=_k_range, default=None, help="A..B")
    p.add_argument("--k", type=int, default=None)
    return parser


def _configure_logging(verbosity: int) -> None:
    level = logging.WARNING if verbosity <= 0 else logging.INFO if verbosity == 1 else logging.DEBUG
    logging.basicConfig(
        level=level,
        stream=sys.stderr,
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
    )


def _config(args) -> RunConfig:
    k_range = getattr(args, "k_range", None)
    k = getattr(args, "k", None)
    if args.command == "conjectures" and k_range is None:
        if k is None:
            raise InvalidInputError("conjectures needs --k or --k-range")
        k_range = (k, k)
    return RunConfig(
        subcommand=args.command,
        k=k,
        k_range=k_range,
        t=getattr(args, "t", None),
        mode=args.mode,
        method=getattr(args, "method", "quotient"),
        cache_dir=resolve_cache_dir(args.cache),
        output="json" if args.json else "table",
        workers=args.workers or default_workers(),
        seed=args.seed,
    ).validate()


def _emit(cfg: RunConfig, payload, lines) -> None:
    if cfg.output == "json":
        print(dumps(payload))
    else:
        for line in lines:
            print(line)


def _fmt(x) -> str:
    if isinstance(x, Fraction):
        return fraction_to_str(x)
    if isinstance(x, float):
        return f"{x:.9g}"
    return str(x)


# ── Subcommands ──


def _cmd_enumerate(cfg: RunConfig, args) -> int:
    if args.count_only:
        count = double_factorial(2 * cfg.k - 1)
        _emit(cfg, {"k": cfg.k, "count": count}, [str(count)])
        return EXIT_OK
    check_enumerable(cfg.k)
    family = enumerate_matchings(cfg.k)
    _emit(cfg, family, (str(m) for m in family))
    return EXIT_OK


def _cmd_classes(cfg: RunConfig, args) -> int:
    rows = degree_table(cfg.k)
    _emit(
        cfg,
        [{"class": lam, "degree": str(d)} for lam, d in rows],
        (f"{str(lam):<20} {d}" for lam, d in rows),
    )
    return EXIT_OK


def _cmd_degrees(cfg: RunConfig, args) -> int:
    if not args.audit:
        return _cmd_classes(cfg, args)
    rows = audit_degree_row(cfg.k)
    _emit(cfg, rows, (
        f"{r.klass:<12} {str(r.partition or '-'):<16} printed {_fmt(r.printed):<10} "
        f"computed {_fmt(r.computed):<10} {r.status}"
        for r in rows
    ))
    return EXIT_MISMATCH if any(r.status == "mismatch" for r in rows) else EXIT_OK


def _cmd_scheme_check(cfg: RunConfig, args) -> int:
    report = verify_scheme_axioms(cfg.k, cfg.workers)
    lines = [f"k={cfg.k}, {len(report.classes)} classes"]
    for c in report.checks:
        status = "skipped" if c.skipped else "pass" if c.passed else f"FAIL at {c.witness}"
        lines.append(f"  {c.name:<16} {status} {c.detail}".rstrip())
    _emit(cfg, report, lines)
    return EXIT_OK if report.ok else EXIT_MISMATCH


def _cmd_quotient(cfg: RunConfig, args) -> int:
    k = cfg.k
    if args.diagonals:
        return _diagonals(cfg)
    if not args.klass or not args.subgroup:
        raise InvalidInputError("quotient needs --class and --subgroup (or --diagonals)")
    klass = resolve_shape(args.klass, k)
    subgroup = resolve_shape(args.subgroup, k)
    q = quotient_matrix(klass, subgroup, k, cfg.workers)
    ci = class_labels(k).index(klass)
    modules = [mu for mu in class_labels(k) if dominance_geq(mu, subgroup)]
    rows = module_rows_from_quotients(k, modules, cfg.workers)
    eigenvalues = []
    for space in joint_eigenspaces(k, subgroup.parts, cfg.workers):
        owner = next((mu for mu, row in rows.items() if row == space.row), None)
        eigenvalues.append({"module": owner, "value": space.row[ci], "multiplicity": space.dim})
    payload = {
        "class": klass,
        "subgroup": subgroup,
        "matrix": q.entries.tolist(),
        "eigenvalues": eigenvalues,
    }
    lines = [f"{q.source} ({q.dim}x{q.dim}, rows sum to {q.row_sums[0]})"]
    lines += ["  " + " ".join(f"{v:>6}" for v in row) for row in q.entries.tolist()]
    if q.dim <= 12:
        exact = exact_eigenvalues(q)
        payload["charpoly"] = exact.charpoly
        lines.append(f"charpoly: {exact.charpoly}")
    for e in eigenvalues:
        lines.append(f"  {_fmt(e['value']):>8} x{e['multiplicity']}  module {e['module'] or '?'}")
    _emit(cfg, payload, lines)
    return EXIT_OK


def _diagonals(cfg: RunConfig) -> int:
    report = verify_printed_diagonals(cfg.k, cfg.workers)
    lines = [f"k={cfg.k}, degree {report.degree}"]
    lines += [
        f"  {e.table:<22} [{e.position},{e.position}] printed {_fmt(e.printed) if e.printed is not None else '-':<12} "
        f"computed {e.computed:<10} {e.status} {e.note}".rstrip()
        for e in report.entries
    ]
    _emit(cfg, report, lines)
    return EXIT_OK if report.ok else EXIT_MISMATCH


def _table_lines(table) -> list[str]:
    head = f"{'':<16}" + "".join(f"{str(c):>14}" for c in table.classes) + f"{'mult':>10}"
    lines = [head]
    for mu in table.modules:
        cells = "".join(f"{_fmt(v) if v is not None else '-':>14}" for v in table.row(mu))
        lines.append(f"{str(mu):<16}{cells}{table.multiplicities[mu]:>10}")
    return lines


def _cmd_chartable(cfg: RunConfig, args) -> int:
    if args.verify:
        report = verify_table(cfg.k, cfg.method, cfg.workers)
        lines = [f"k={cfg.k} method={cfg.method}: {report.counts()}"]
        lines += [
            f"  {c.method:<9} {c.module:<12} x {c.klass:<12} printed {_fmt(c.printed):<10} "
            f"computed {_fmt(c.computed):<10} {c.status} {c.note}".rstrip()
            for c in report.cells
        ]
        _emit(cfg, report, lines)
        return EXIT_OK if report.ok else EXIT_MISMATCH

    if args.source == "dense":
        table = assemble_full_table(cfg.k, cfg.workers, seed=cfg.seed or 7)
    elif args.source == "quotient":
        table = assemble_table_from_quotients(cfg.k, cfg.workers)
    elif args.source == "closed-form":
        table = closed_form_table(cfg.k)
    else:
        table = cached_table(cfg.k, cfg.cache_dir, cfg.workers)
    checks = table.check_invariants()
    lines = _table_lines(table) + [
        f"  {c.name}: {'pass' if c.passed else 'FAIL ' + c.detail}" for c in checks
    ]
    _emit(cfg, {"table": table_payload(table), "checks": checks}, lines)
    return EXIT_OK if all(c.passed for c in checks) else EXIT_MISMATCH


def _cmd_ekr(cfg: RunConfig, args) -> int:
    k, t = cfg.k, cfg.t
    weights = solve_weights(t, k)
    payload = {"weights": weights}
    lines = [f"t={t} k={k}"]
    lines += [f"  a_{lam} = {fraction_to_str(a)}" for lam, a in weights.weights.items()]
    lines.append(f"  d = {fraction_to_str(weights.d)} (printed weights agree: {weights.printed_agrees}, "
                 f"degree agrees: {weights.degree_agrees})")
    ok = weights.printed_agrees and weights.degree_agrees

    if args.certificate or args.spectrum:
        table = cached_table(k, cfg.cache_dir, cfg.workers) if args.spectrum else None
        report = hoffman_certificate_check(weights, k, cfg.workers, psd=args.spectrum,
                                           seed=cfg.seed, table=table)
        payload["certificate"] = report
        lines.append(f"  residual {fraction_to_str(report.certificate_residual)}, "
                     f"row sums ok {report.row_sums_ok} ({report.rows_checked} rows)")
        if report.psd_margin is not None:
            lines.append(f"  least eigenvalue + 1 = {report.psd_margin:.3e} ({report.psd_method})")
        lines.append(f"  bound {fraction_to_str(report.bound)} vs |S| = {report.family_size}: "
                     f"{'tight' if report.verdict else 'NOT VERIFIED'}")
        for mu, v in report.module_eigenvalues.items():
            lines.append(f"    module {str(mu):<16} {fraction_to_str(v)}")
        ok = ok and report.verdict

    if args.audit_system:
        if t != 3:
            raise InvalidInputError("--audit-system applies to t = 3")
        audit = audit_printed_t3_system(k)
        payload["printed_system"] = audit
        for c in audit.deviations:
            lines.append(f"  printed {c.module} x {c.klass}: {fraction_to_str(c.printed)}, "
                         f"grid {fraction_to_str(c.table)}")
        lines.append(f"  printed weights solve the grid system: {audit.table_consistent}")
        ok = ok and audit.table_consistent

    if args.mis:
        result = max_coclique_exact(build_intersection_graph(k, t), workers=cfg.workers)
        payload["coclique"] = result
        lines.append(f"  alpha {'=' if result.optimal else '>='} {result.size} ({result.nodes} nodes)")
        ok = ok and result.optimal and result.size == double_factorial(2 * t - 1) * double_factorial(2 * k - 2 * t - 1)

    _emit(cfg, payload, lines)
    return EXIT_OK if ok else EXIT_MISMATCH


def _cmd_coclique(cfg: RunConfig, args) -> int:
    graph = build_intersection_graph(cfg.k, cfg.t)
    result = max_coclique_exact(graph, args.budget, symmetric=not args.no_symmetry, workers=cfg.workers)
    lines = [f"alpha(N_{cfg.t}({2 * cfg.k})) {'=' if result.optimal else '>='} {result.size}"]
    lines += [f"  {m}" for m in result.witness]
    _emit(cfg, result, lines)
    return EXIT_OK if result.optimal else EXIT_MISMATCH


def _cmd_conjectures(cfg: RunConfig, args) -> int:
    lo, hi = cfg.k_range
    which = args.which
    if which == "inequalities":
        report = gap_inequalities((lo, hi))
        lines = [f"{r.k:>3} {r.check:<24} {'pass' if r.passed else 'FAIL'}" for r in report.rows]
        lines.append(f"Case 2 polynomial as printed {report.printed_poly}, derived {report.derived_poly}")
        lines += [f"F growth n={g.n}: {'ok' if g.ok else 'violated'}" for g in audit_f_growth(2 * hi)]
        _emit(cfg, {"inequalities": report, "f_growth": audit_f_growth(2 * hi)}, lines)
        return EXIT_OK if report.ok else EXIT_MISMATCH
    if which == "f-growth":
        rows = audit_f_growth(2 * hi, max(8, 2 * lo))
        _emit(cfg, rows, (f"n={g.n}: F={g.value} {'ok' if g.ok else 'violated'}" for g in rows))
        return EXIT_OK if all(g.ok for g in rows) else EXIT_MISMATCH

    reports, ok = [], True
    for k in range(lo, hi + 1):
        if which == "t3":
            r = conjecture_t3_spectrum_check(k, cfg.workers)
            lines = [f"k={k}: d={fraction_to_str(r.d)} pinned {r.pinned_ok} interval {r.interval_ok}"]
            lines += [f"  {str(mu):<16} {fraction_to_str(v)}" for mu, v in r.module_eigenvalues.items()]
            passed = r.ok
        elif which == "degree-patterns":
            table = cached_table(k, cfg.cache_dir, cfg.workers)
            r = conjecture_degree_patterns(k, table, cfg.workers)
            lines = [
                f"k={k} i={row.i} {row.pattern:<8} {str(row.module):<16} predicted {row.predicted} "
                f"observed {_fmt(row.observed)} {'pass' if row.passed else 'FAIL'}"
                for row in r.rows
            ]
            passed = r.ok
        elif which == "module-scan":
            r = gap_module_scan(k)
            lines = [
                f"k={k} {str(row.module):<20} {row.case:<13} m={row.multiplicity} "
                f"{'below' if row.below else 'NOT below'} LHS"
                for row in r.rows
            ]
            passed = r.ok
        else:
            r = b_squared_trace_check(k)
            lines = [f"k={k}: {fraction_to_str(r.computed)} vs {fraction_to_str(r.printed)}"]
            passed = r.ok
        reports.append(r)
        ok = ok and passed
        if cfg.output != "json":
            for line in lines:
                print(line)
    if cfg.output == "json":
        print(dumps(reports))
    return EXIT_OK if ok else EXIT_MISMATCH


_COMMANDS = {
    "enumerate": _cmd_enumerate,
    "classes": _cmd_classes,
    "degrees": _cmd_degrees,
    "scheme-check": _cmd_scheme_check,
    "quotient": _cmd_quotient,
    "chartable": _cmd_chartable,
    "ekr": _cmd_ekr,
    "coclique": _cmd_coclique,
    "conjectures": _cmd_conjectures,
}


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_OK if e.code in (0, None) else EXIT_ERROR
    _configure_logging(args.verbose)
    try:
        cfg = _config(args)
        return _COMMANDS[cfg.subcommand](cfg, args)
    except KeyboardInterrupt as e:
        print(describe_error(e), file=sys.stderr)
        return EXIT_ERROR
    except (ConsistencyError, ExtractionError) as e:
        logger.debug("verification failed", exc_info=True)
        print(describe_error(e), file=sys.stderr)
        return EXIT_MISMATCH
    except Exception as e:
        logger.debug("command failed", exc_info=True)
        print(describe_error(e), file=sys.stderr)
        return EXIT_ERROR


assert set(_COMMANDS) == set(SUBCOMMANDS)

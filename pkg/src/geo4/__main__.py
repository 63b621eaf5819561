#!/usr/bin/env python
"""
geo4 version {version}

geo4 computes with the geography of simply connected spin symplectic
4-manifolds: allowed lattice points (χ, c), explicit constructions from catalog
blocks by fiber sums and knot surgery, Seiberg–Witten invariants in a formal
group ring, coverage of regions and families of exotic smooth structures.

Usage:
    geo4 allowed CHI C
    geo4 homeo CHI C [--spin]
    geo4 realize CHI C [--json] [--out FILE]
    geo4 coverage REGION [--report minimal] [--cores N]
    geo4 sw EXPRESSION-OR-FILE [--proxy provenance|multiset]
    geo4 exotic N [--count J]
    geo4 threshold
    geo4 catalog [--out FILE]
    geo4 lines
    geo4 plot PLOTSPEC [--out FILE] [--true-aspect]

REGION is a region file or one of the preset regions base, noether-wedge,
omega, ppx-strip, signature-zero, positive-signature.

Exit status: 0 on success, 1 if the queried predicate is false, 2 if a point
or region is not covered, 3 on input errors.

Run "geo4 COMMAND --help" to see the options of a command.
"""
import json
import sys
import time
import shutil
import logging
import multiprocessing
from argparse import ArgumentParser, HelpFormatter, Namespace, SUPPRESS
from typing import List, Optional, TextIO

from geo4 import __version__
from geo4.catalog import CatalogError
from geo4.config import ConfigError, Session, build_session, load_profile
from geo4.construct import ConstructionError, EvalReport, evaluate, serialize
from geo4.geography import (
    BelowThreshold, GeographyError, NotCovered, OutOfRegion, RatioTooSmall, describe_lines,
    exotic_family, exotic_threshold, load_region, ppx_admissible, PPXVerdict,
)
from geo4.invariants import InvariantError, LatticePoint, NotAllowed, homeo_type, is_allowed
from geo4.json import OneLine, dumps as json_dumps
from geo4.log import setup_logging, REPORT
from geo4.parser import ExpressionSyntaxError, expr_from_json, parse_construction
from geo4.report import full_report, minimal_report
from geo4.runners import make_runner, verify_coverage
from geo4.swring import PROXIES, PartialSW, SWError, UnknownSW, basic_classes, is_complex_admissible
from geo4.utils import DummyProgress, Progress, available_cpu_count, open_text

logger = logging.getLogger()

EXIT_OK = 0
EXIT_FALSE = 1
EXIT_NOT_COVERED = 2
EXIT_INPUT_ERROR = 3

# Input errors reported with exit status 3
INPUT_ERRORS = (
    CatalogError, ConfigError, ConstructionError, ExpressionSyntaxError, InvariantError, SWError, OSError,
)


class Geo4ArgumentParser(ArgumentParser):
    """
    This ArgumentParser customizes two things:
    - The usage message is not prefixed with 'usage:'
    - A brief message is shown on errors, not full usage, and the exit status is 3
    """
    class CustomUsageHelpFormatter(HelpFormatter):
        def __init__(self, *args, **kwargs):
            kwargs['width'] = min(24 + 80, shutil.get_terminal_size().columns)
            super().__init__(*args, **kwargs)

        def add_usage(self, usage, actions, groups, prefix=None):
            if usage is not SUPPRESS:  # pragma: no cover
                args = usage, actions, groups, ''
                self._add_item(self._format_usage, args)

    def __init__(self, *args, **kwargs):
        kwargs['formatter_class'] = self.CustomUsageHelpFormatter
        if kwargs.get('usage'):
            kwargs['usage'] = kwargs['usage'].replace("{version}", __version__)
        super().__init__(*args, **kwargs)

    def error(self, message):
        """
        If you override this in a subclass, it should not return -- it
        should either exit or raise an exception.
        """
        print('Run "geo4 --help" to see command-line options.', file=sys.stderr)
        self.exit(EXIT_INPUT_ERROR, f"\n{self.prog}: error: {message}\n")


class CommandLineError(Exception):
    pass


def common_options() -> ArgumentParser:
    parser = ArgumentParser(add_help=False)
    group = parser.add_argument_group("Common options")
    group.add_argument("--json", action="store_true", default=False,
        help="Write a JSON document instead of text")
    group.add_argument("--out", "-o", metavar="FILE", default=None,
        help="Write the result to FILE instead of standard output")
    group.add_argument("--profile", metavar="PROFILE", default=None,
        help="Profile file or built-in profile name (desk, full). "
            "Default: $GEO4_PROFILE, else desk")
    group.add_argument("--chi-max", type=int, metavar="N", default=None,
        help="Largest χ to consider. Default: from the profile")
    group.add_argument("--debug", action="count", default=0, help="Print debug log")
    group.add_argument("--quiet", action="store_true", default=False,
        help="Print only error messages")
    return parser


def get_argument_parser() -> ArgumentParser:
    parser = Geo4ArgumentParser(usage=__doc__, add_help=False)
    group = parser.add_argument_group("Options")
    group.add_argument("-h", "--help", action="help", help="Show this help message and exit")
    group.add_argument("--version", action="version", help="Show version number and exit",
        version=__version__)
    subparsers = parser.add_subparsers(dest="command", metavar="COMMAND")
    common = common_options()

    def add(name: str, help: str) -> ArgumentParser:
        return subparsers.add_parser(name, help=help, description=help, parents=[common])

    sub = add("allowed", "Check whether (χ, c) is allowed for a spin manifold")
    sub.add_argument("chi", type=int)
    sub.add_argument("c", type=int)

    sub = add("homeo", "Homeomorphism type of a simply connected manifold at (χ, c)")
    sub.add_argument("chi", type=int)
    sub.add_argument("c", type=int)
    sub.add_argument("--spin", action="store_true", default=False, help="Even intersection form")

    sub = add("realize", "Find a construction realizing (χ, c)")
    sub.add_argument("chi", type=int)
    sub.add_argument("c", type=int)

    sub = add("coverage", "Realize every allowed point of a region")
    sub.add_argument("region", help="Region file or preset region name")
    sub.add_argument("--report", choices=("full", "minimal"), default=None,
        help="Which type of report to print: 'full' or 'minimal'. Default: full")
    sub.add_argument("-j", "--cores", type=int, default=None,
        help="Number of CPU cores to use. Use 0 to auto-detect. Default: from the profile")

    sub = add("sw", "Seiberg–Witten invariant of a construction")
    sub.add_argument("expression", help="Construction expression, or a file containing one")
    sub.add_argument("--proxy", choices=PROXIES, default=None,
        help="Comparison used for c = 0 complex admissibility. Default: from the profile")

    sub = add("exotic", "Exotic smooth structures on (2n+1)(S²×S²)")
    sub.add_argument("n", type=int)
    sub.add_argument("--count", type=int, default=3, help="Number of members. Default: %(default)s")

    add("threshold", "Threshold χ above which the signature-zero line is covered")
    add("catalog", "Print the catalog in catalog file format")
    add("lines", "List the named lines of the (χ, c) plane")

    sub = add("plot", "Write an SVG plot of the (χ, c) plane")
    sub.add_argument("plotspec", help="Plot specification file")
    sub.add_argument("--true-aspect", action="store_true", default=False,
        help="Do not divide c by 8 on the vertical axis")
    return parser


class Command:
    """State shared by the command implementations"""

    def __init__(self, args: Namespace, stdout: TextIO):
        self.args = args
        self.stdout = stdout
        self._session: Optional[Session] = None

    @property
    def session(self) -> Session:
        if self._session is None:
            profile = load_profile(self.args.profile)
            self._session = build_session(profile)
        return self._session

    @property
    def chi_max(self) -> int:
        if self.args.chi_max is not None:
            if self.args.chi_max < 1:
                raise CommandLineError("--chi-max must be at least 1")
            return self.args.chi_max
        return self.session.profile.chi_max

    def emit_text(self, text: str) -> None:
        if self.args.out:
            with open_text(self.args.out, "w") as f:
                print(text, file=f)
        else:
            print(text, file=self.stdout)

    def emit_json(self, document) -> None:
        self.emit_text(json_dumps(document))

    def emit(self, text: str, document) -> None:
        if self.args.json:
            self.emit_json(document)
        else:
            self.emit_text(text)


def cmd_allowed(command: Command) -> int:
    point = LatticePoint(command.args.chi, command.args.c)
    verdict = is_allowed(point)
    text = "allowed" if verdict else "not allowed: " + "; ".join(verdict.messages())
    command.emit(text, {
        "tag": "geo4-allowed",
        "schema_version": OneLine([0, 1]),
        "point": OneLine(point.as_list()),
        "allowed": verdict.ok,
        "violations": list(verdict.messages()),
    })
    return EXIT_OK if verdict else EXIT_FALSE


def cmd_homeo(command: Command) -> int:
    point = LatticePoint(command.args.chi, command.args.c)
    try:
        homeo = homeo_type(point, command.args.spin)
    except NotAllowed as e:
        logger.error("%s", e)
        return EXIT_FALSE
    command.emit(str(homeo), {"tag": "geo4-homeo", "schema_version": OneLine([0, 1]), **homeo.as_dict()})
    return EXIT_OK


def cmd_realize(command: Command) -> int:
    point = LatticePoint(command.args.chi, command.args.c)
    if not is_allowed(point):
        logger.error("%s is not allowed: %s", point, "; ".join(is_allowed(point).messages()))
        return EXIT_FALSE
    try:
        certificate = command.session.realizer.realize(point)
    except NotCovered as e:
        logger.error("%s", e)
        for line in e.trace:
            logger.info("  %s", line)
        return EXIT_NOT_COVERED
    except GeographyError as e:
        logger.error("%s", e)
        return EXIT_NOT_COVERED
    document = certificate.as_json()
    ppx = ppx_admissible(point)
    if ppx is not PPXVerdict.NOT_APPLICABLE:
        document["ppx"] = ppx.value
    command.emit(serialize(certificate.expr), document)
    return EXIT_OK


def cmd_coverage(command: Command) -> int:
    start_time = time.time()
    args = command.args
    region = load_region(args.region, command.chi_max)
    cores = args.cores if args.cores is not None else command.session.profile.cores
    if cores < 0:
        raise CommandLineError("Value for --cores cannot be negative")
    cores = available_cpu_count() if cores == 0 else cores
    if sys.stderr.isatty() and not args.quiet and not args.debug:
        progress: Progress = Progress()
    else:
        progress = DummyProgress()
    logger.info("Realizing points of region %s on %d core%s ...", region.name, cores, "s" if cores > 1 else "")
    with make_runner(command.session.realizer, cores, progress) as runner:
        report = verify_coverage(region, command.session.realizer, runner)
    elapsed = time.time() - start_time
    if args.json:
        command.emit_json(report.as_json())
    elif args.report == "minimal":
        command.emit_text(minimal_report(report, elapsed))
    else:
        command.emit_text(full_report(report, elapsed))
    return EXIT_OK if report.fully_covered else EXIT_NOT_COVERED


def _read_construction(command: Command):
    text = command.args.expression
    try:
        with open_text(text) as f:
            text = f.read().strip()
    except OSError:
        pass
    catalog = command.session.catalog
    if text.startswith("{"):
        try:
            document = json.loads(text)
            return expr_from_json(document.get("ast", document), catalog)
        except (KeyError, TypeError, ValueError) as e:
            raise CommandLineError(f"not a construction document: {e}") from None
    return parse_construction(text, catalog)


def _sw_lines(report: EvalReport, proxy: str):
    lines = [f"SW: {report.sw.describe()}"]
    document = {"sw": report.sw.as_json()}
    try:
        classes = basic_classes(report.sw)
    except PartialSW:
        lines.append("basic classes: partial (designated classes only)")
    except UnknownSW as e:
        lines.append(f"basic classes: unknown ({e})")
    else:
        lines.append(f"basic classes: {classes.count} ({classes.count_up_to_sign} up to sign)")
        document["basic_classes"] = classes.count
        document["basic_classes_up_to_sign"] = classes.count_up_to_sign
    verdict = is_complex_admissible(report, proxy)
    lines.append(str(verdict))
    document["complex_admissibility"] = OneLine({
        "status": verdict.status.value, "reasons": list(verdict.reasons), "proxy": proxy})
    return lines, document


def cmd_sw(command: Command) -> int:
    expr = _read_construction(command)
    report = evaluate(expr)
    proxy = command.args.proxy or command.session.profile.sw_proxy
    lines, document = _sw_lines(report, proxy)
    point = report.point
    lines.insert(0, f"{serialize(expr)}  (χ, c) = {point}")
    command.emit("\n".join(lines), {
        "tag": "geo4-sw",
        "schema_version": OneLine([0, 1]),
        "expression": serialize(expr),
        "point": OneLine(point.as_list()),
        **document,
    })
    return EXIT_OK


def cmd_exotic(command: Command) -> int:
    args = command.args
    if args.count < 1:
        raise CommandLineError("--count must be at least 1")
    if args.n < 0:
        raise CommandLineError("n must not be negative")
    try:
        family = exotic_family(args.n, args.count, command.session.realizer)
    except BelowThreshold as e:
        logger.error("%s", e)
        logger.log(REPORT, "threshold N = %d", e.threshold)
        return EXIT_NOT_COVERED
    except GeographyError as e:
        logger.error("%s", e)
        return EXIT_NOT_COVERED
    if args.json:
        command.emit_json(family.as_json())
    else:
        lines = [
            f"(χ, c) = {family.point}, homeomorphic to {family.homeo.name}",
            f"threshold N = {family.threshold}; knot surgery along {family.torus_slot}",
            "",
            f"{'member':>6}  {'knot':>8}  {'classes':>10}  coefficient multiset",
        ]
        for member in family.members:
            multiset = member.multiset
            count = sum(multiset.values()) if multiset is not None else "partial"
            shown = " ".join(f"{c}:{k}" for c, k in sorted(multiset.items())) if multiset is not None else "-"
            lines.append(f"{member.index:>6}  {str(member.knot or '-'):>8}  {count:>10}  {shown}")
        lines.append("")
        witness = {True: "pairwise distinct", False: "NOT pairwise distinct", None: "not certified"}
        lines.append(f"SW invariants: {witness[family.distinct]}")
        lines.extend(family.notes)
        command.emit_text("\n".join(lines))
    return EXIT_OK if family.distinct is not False else EXIT_FALSE


def cmd_threshold(command: Command) -> int:
    composite = command.session.composite
    if composite is None:
        raise CommandLineError("the profile defines no composite manifold")
    try:
        threshold = exotic_threshold(composite)
    except RatioTooSmall as e:
        logger.error("%s", e)
        return EXIT_FALSE
    document = {
        "tag": "geo4-threshold",
        "schema_version": OneLine([0, 1]),
        "composite": composite.as_json(),
        "threshold": threshold,
    }
    lines = [
        f"composite X: {composite.description} at (χ, c) = {composite.point}",
        f"c/χ = {composite.ratio} ≈ {float(composite.ratio):.6f}",
        f"threshold N = {threshold}",
    ]
    spec = command.session.profile.composite
    if spec is not None and spec.x is not None and spec.k is not None:
        closed_form = 267145 * spec.k * spec.x ** 2 + 70
        document["closed_form"] = closed_form
        document["closed_form_matches"] = closed_form == threshold
        lines.append(
            f"closed form 267145·k·x² + 70 = {closed_form} "
            + ("(matches)" if closed_form == threshold else "(differs from the computed threshold)"))
    command.emit("\n".join(lines), document)
    return EXIT_OK


def cmd_catalog(command: Command) -> int:
    catalog = command.session.catalog
    if command.args.out:
        catalog.save(command.args.out)
    else:
        command.emit_json(catalog.as_json())
    return EXIT_OK


def cmd_lines(command: Command) -> int:
    lines = describe_lines(command.session.composite)
    text = "\n".join(f"{entry['name']:<10} {entry['label']}" for entry in lines)
    command.emit(text, {"tag": "geo4-lines", "schema_version": OneLine([0, 1]), "lines": [
        OneLine(entry) for entry in lines]})
    return EXIT_OK


def cmd_plot(command: Command) -> int:
    # matplotlib is imported only when plotting
    from geo4.plot import PlotError, load_plotspec, plot

    args = command.args
    try:
        spec = load_plotspec(args.plotspec)
        path = args.out or spec.output_path
        if path is None:
            raise CommandLineError("no output file: use --out or set output_path in the plot specification")
        plot(spec, path, command.session.composite, true_aspect=args.true_aspect)
    except PlotError as e:
        raise CommandLineError(str(e)) from None
    logger.info("Plot written to %s", path)
    return EXIT_OK


COMMANDS = {
    "allowed": cmd_allowed,
    "homeo": cmd_homeo,
    "realize": cmd_realize,
    "coverage": cmd_coverage,
    "sw": cmd_sw,
    "exotic": cmd_exotic,
    "threshold": cmd_threshold,
    "catalog": cmd_catalog,
    "lines": cmd_lines,
    "plot": cmd_plot,
}


def main_cli():  # pragma: no cover
    """Entry point for command-line script"""
    multiprocessing.freeze_support()
    sys.exit(main(sys.argv[1:]))


def main(cmdlineargs: List[str], stdout: Optional[TextIO] = None) -> int:
    """
    Run one command and return its exit status. Results are written to stdout
    (default: sys.stdout) unless --out is given.
    """
    parser = get_argument_parser()
    args = parser.parse_args(args=cmdlineargs)
    if args.command is None:
        parser.error("a command is required")
    # Setup logging only if there are not already any handlers (can happen when
    # this function is being called externally such as from unit tests)
    if not logging.root.handlers:
        setup_logging(logger, quiet=args.quiet, debug=args.debug)
    command = Command(args, stdout if stdout is not None else sys.stdout)
    try:
        return COMMANDS[args.command](command)
    except CommandLineError as e:
        logger.debug("Command line error. Traceback:", exc_info=True)
        logger.error("%s", e)
        return EXIT_INPUT_ERROR
    except OutOfRegion as e:
        logger.error("%s", e)
        return EXIT_FALSE
    except KeyboardInterrupt:
        print("Interrupted", file=sys.stderr)
        return 130
    except BrokenPipeError:
        return 1
    except INPUT_ERRORS as e:
        logger.debug("Input error. Traceback:", exc_info=True)
        logger.error("%s", e)
        return EXIT_INPUT_ERROR


if __name__ == '__main__':  # pragma: no cover
    main_cli()

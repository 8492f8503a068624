# core/cli.py
from contextlib import contextmanager
import json
import logging
import sys

import click
from mpmath import mp

from .addons.errors import LabError
from .addons.extensions import MINIMUM_ORDERS, RunConfig, setup_logging
from .addons.functions import dumps, parse_elem, parse_generators, parse_list, rows_to_csv, to_jsonable, write_artifact
from .addons.verification_suites import CSV_COLUMNS, VerificationSuites
from .addons.hecke_calculator import HeckeCalculator
from .addons.boundary_calculator import BoundaryCalculator
from .addons.localzeta_calculator import LocalZetaCalculator
from .addons.analytic_calculator import AnalyticCalculator
from .models.quadfield import Discriminant
from .models.satake import SatakeData, VARIANTS
from .models.boundary import DivisorLedger

logger = logging.getLogger(__name__)

EXIT_OK, EXIT_FAILED, EXIT_USAGE = 0, 1, 2


class LabUsageError(click.ClickException):
    exit_code = EXIT_USAGE


@contextmanager
def usage_errors():
    """Bad input from the command line: failure record on stderr, exit 2"""
    try:
        yield
    except LabError as e:
        click.echo(json.dumps(to_jsonable(e.to_dict())), err=True)
        raise LabUsageError(e.message)
    except ValueError as e:
        raise LabUsageError(str(e))


def emit(config, name, payload):
    """Print the JSON document and keep a copy, with the resolved config, in the output directory"""
    document = {'config': config.model_dump(), 'seed': config.seed}
    document.update(payload)
    text = dumps(document)
    click.echo(text)
    if config.out:
        target = write_artifact(config.out, f"{name}.json", text + "\n")
        logger.info(f"wrote {target}")
    return document


def finish(ctx, passed):
    click.echo("✅ passed" if passed else "❌ failed", err=True)
    ctx.exit(EXIT_OK if passed else EXIT_FAILED)


def run_options(f):
    """Options accepted both before and after the command name"""
    f = click.option('--workers', type=int, default=None, help="Worker threads for the suite pool")(f)
    f = click.option('--format', 'fmt', type=click.Choice(['json', 'csv'], case_sensitive=False),
                     default=None, help="Artifact format")(f)
    f = click.option('--out', default=None, help="Directory for emitted artifacts")(f)
    f = click.option('--seed', type=int, default=None, help="Seed of the randomized property checks")(f)
    f = click.option('--order', type=int, default=None, help="Series order for every local identity")(f)
    f = click.option('--precision', type=int, default=None, help="Working precision in decimal digits")(f)
    return f


def overrides(precision, order, seed, out, fmt, workers):
    changes = {'precision': precision, 'seed': seed, 'out': out, 'format': fmt, 'workers': workers}
    if order is not None:
        changes.update({key: order for key in MINIMUM_ORDERS})
    return changes


@click.group(context_settings={'help_option_names': ['-h', '--help']})
@click.option('--config', 'config_path', type=click.Path(dir_okay=False), default=None,
              help="key = value config file, overridden by flags")
@run_options
@click.pass_context
def lab(ctx, config_path, precision, order, seed, out, fmt, workers):
    """Verification lab for the GU(2,1) local and analytic identities"""
    with usage_errors():
        config = RunConfig.load(config_path, **overrides(precision, order, seed, out, fmt, workers))
    setup_logging(config.log_file or None)
    mp.dps = config.precision
    ctx.obj = config


# ---------------------- VERIFY ---------------------- #
@lab.command()
@click.argument('suites', nargs=-1)
@run_options
@click.pass_obj
@click.pass_context
def verify(ctx, config, suites, precision, order, seed, out, fmt, workers):
    """Run verification suites (default: all)"""
    with usage_errors():
        config = config.override(**overrides(precision, order, seed, out, fmt, workers))
        names = VerificationSuites.resolve(suites)
    click.echo(f"📋 running {', '.join(names)} at {config.precision} digits, seed {config.seed}", err=True)
    for key in config.below_minimum():
        click.echo(f"⚠️  {key} = {config.order_for(key[len('order_'):])} is below {MINIMUM_ORDERS[key]}", err=True)

    summary = VerificationSuites.run(config, names)
    for result in summary['results']:
        mark = "✅" if result['passed'] else "❌"
        click.echo(f"{mark} {result['suite']} ({len(result['records'])} checks)", err=True)
    for failure in VerificationSuites.failures(summary):
        click.echo(json.dumps(to_jsonable(failure)), err=True)

    name = "verify_" + ("all" if list(names) == list(VerificationSuites.SUITES) else "_".join(names))
    if config.format == 'csv':
        header = f"# config: {json.dumps(to_jsonable(summary['config']))}\n"
        text = header + rows_to_csv(VerificationSuites.flatten(summary), CSV_COLUMNS)
        click.echo(text, nl=False)
        if config.out:
            write_artifact(config.out, f"{name}.csv", text)
    else:
        emit(config, name, {k: v for k, v in summary.items() if k not in ('config', 'seed')})
    finish(ctx, summary['passed'])


# ---------------------- HECKE ---------------------- #
@lab.group()
def hecke():
    """Hecke double cosets at ramified places"""


@hecke.command()
@click.option('--p', 'p', type=int, required=True, help="Prime dividing D")
@click.option('--D', 'D', type=int, required=True, help="D with -D a fundamental discriminant")
@click.pass_obj
@click.pass_context
def cosets(ctx, config, p, D):
    """Left coset representatives of the double coset and their checks"""
    with usage_errors():
        report = HeckeCalculator.cosets_report(p, D)
    emit(config, f"hecke_cosets_p{p}_D{D}", report)
    finish(ctx, report['count'] == report['expected'] and report['distinct'] and report['smith_consistent'])


# ---------------------- BOUNDARY ---------------------- #
@lab.group()
def boundary():
    """Boundary coordinates and the divisor ledger"""


@boundary.command()
@click.option('--in', 'source', type=click.File('r'), required=True, help="JSON lines: curve, cusp, mult[, global]")
@click.option('--pushforward', type=click.File('r'), default=None, help="CSV with columns curve, cusp, global")
@click.pass_obj
@click.pass_context
def ledger(ctx, config, source, pushforward):
    """Degree and pushforward conditions of a divisor ledger"""
    with usage_errors():
        table = DivisorLedger.read_pushforward_csv(pushforward.read()) if pushforward else None
        entries = DivisorLedger.from_jsonl(source.read(), table)
        report = BoundaryCalculator.ledger_check(entries)
        report['boundary_divisors'] = BoundaryCalculator.boundary_divisors(entries)
    emit(config, "boundary_ledger", report)
    finish(ctx, report['ok_2a'] and report['ok_2b'])


@boundary.command()
@click.option('--u', 'u', required=True, help="a,b for u = a + b*delta")
@click.option('--lattice', required=True, help="Generators a,b separated by ';'")
@click.option('--D', 'D', type=int, default=3, show_default=True)
@click.pass_obj
def torsion(config, u, lattice, D):
    """Order of u in E / L"""
    with usage_errors():
        Discriminant.of(D)
        report = BoundaryCalculator.torsion_report(parse_elem(u, D), parse_generators(lattice, D), D)
    emit(config, "boundary_torsion", report)


# ---------------------- L-FACTORS ---------------------- #
@lab.command()
@click.option('--place', type=click.Choice(VARIANTS), required=True)
@click.option('--satake', default='', help="Assignments like 'a=2, n1=3'; missing parameters stay symbolic")
@click.option('--strict', is_flag=True, help="Eliminate one parameter through the central character")
@click.pass_obj
@click.pass_context
def lfactor(ctx, config, place, satake, strict):
    """Standard local L-factor as a rational function in X = p^-s"""
    with usage_errors():
        data = SatakeData.from_text(place, satake, strict=strict)
        report = LocalZetaCalculator.place_report(data, config.order_for(place))
    emit(config, f"lfactor_{place}", report)
    finish(ctx, report['series_check']['equal'])


# ---------------------- ASSEMBLY ---------------------- #
@lab.command()
@click.option('--D', 'D', type=int, required=True)
@click.option('--alpha', default='', help="Comma separated alpha_p values")
@click.option('--lprime', required=True, help="L'(0) of the standard L-function")
@click.option('--whittaker', default='1', show_default=True, help="Global Whittaker constant")
@click.option('--completed', is_flag=True, help="Keep the printed constant form")
@click.option('--check', is_flag=True, help="Also compare against the archimedean factor at small s")
@click.pass_obj
@click.pass_context
def assemble(ctx, config, D, alpha, lprime, whittaker, completed, check):
    """Right hand side of the period formula at s = 0"""
    with usage_errors():
        Discriminant.of(D)
        alphas = parse_list(alpha)
        value = AnalyticCalculator.assemble_rhs(D, alphas, lprime, whittaker, completed, config.precision)
        report = {'D': D, 'alphas': alphas, 'lprime': lprime, 'whittaker': whittaker,
                  'completed': completed, 'value': value}
        if check:
            report['limit_check'] = AnalyticCalculator.assemble_limit_check(
                D, alphas, lprime, whittaker, precision=config.precision)
    emit(config, f"assemble_D{D}", report)
    if check:
        finish(ctx, report['limit_check']['relative'] < 1e-8)


def run(argv=None):
    """Entry point returning the exit code: 0 pass, 1 verification failure, 2 usage error"""
    try:
        code = lab.main(args=list(sys.argv[1:] if argv is None else argv), prog_name="lab",
                        standalone_mode=False)
    except click.ClickException as e:
        e.show()
        return e.exit_code
    except click.Abort:
        click.echo("Aborted!", err=True)
        return EXIT_FAILED
    return EXIT_OK if code is None else int(code)

"""
命令行动词。命令挂在蓝图的 cli 组上，由 create_app 注册：
顶层动词 sing / factorize / cones / dual / verify，以及 crossconn 与 ideal 两个子命令组。
"""
import functools
import json

import click
from flask import Blueprint, current_app

from config import Config
from app.errors import CrossConnError
from app.models import Permutation
from app.services.cones import (ConeP, ConePi, build_TP, build_TPi, cone_component_p,
                                cone_component_pi, mset, verify_partition_cones_anti_iso,
                                verify_powerset_cones_iso)
from app.services.cross_connection import (build_s_gamma, check_local_isomorphism,
                                           delta_functor, enumerate_cross_connections,
                                           gamma_functor, verify_duality,
                                           verify_s_gamma_iso, verify_variant_iso)
from app.services.foundation import (enumerate_partitions, enumerate_permutations, enumerate_sing,
                                     enumerate_subsets)
from app.services.ideals import (build_ideal_cxn, build_minimal_partition_ideal, ideal_union,
                                 parse_partition_list, principal_ideal)
from app.services.normal_dual import functor_Q, verify_dual_isomorphisms
from app.services.partition_category import BlockMapMorphism, normal_factorize_pi
from app.services.powerset_category import SetFunction, normal_factorize_p
from app.services.semigroup_core import sing_table
from app.services.theorem_suites import SUITES, format_matrix, run_suites

main_bp = Blueprint('crossconn_main', __name__, cli_group=None)
crossconn_bp = Blueprint('crossconn', __name__, cli_group='crossconn')
ideal_bp = Blueprint('ideal', __name__, cli_group='ideal')

GROUND_SIZE = click.IntRange(2, Config.CROSSCONN_MAX_LITERAL_N)


class InputError(click.ClickException):
    """非法输入，退出码 2。"""
    exit_code = 2


def reports_errors(func):
    """把库抛出的 CrossConnError 转成退出码 2 的命令行错误。"""
    @functools.wraps(func)
    def wrapper(*args, **kwargs):
        try:
            return func(*args, **kwargs)
        except CrossConnError as exc:
            current_app.logger.debug(f"输入错误: {exc}")
            raise InputError(str(exc)) from exc
    return wrapper


def _guard(key):
    return current_app.config[key]


def _fail(message):
    click.echo(message, err=True)
    click.get_current_context().exit(1)


def _export(table, fmt, output):
    if fmt == 'json':
        output.write(table.to_json() + '\n')
    elif fmt == 'csv':
        output.write(table.to_csv())


def _report(ok, errors, label):
    if ok:
        click.echo(f"{label}: PASS")
    else:
        click.echo(f"{label}: FAIL")
        _fail(errors[0])


export_option = click.option('--export', 'fmt', type=click.Choice(['json', 'csv']), default=None,
                             help='Export the Cayley table.')
output_option = click.option('--output', type=click.File('w'), default='-', help='Export destination.')


@main_bp.cli.command('sing')
@click.option('-n', 'n', type=GROUND_SIZE, required=True)
@export_option
@output_option
@reports_errors
def sing_command(n, fmt, output):
    """List Sing(X) or export its Cayley table."""
    if fmt:
        _export(sing_table(n, max_n=_guard('CROSSCONN_MAX_TABLE_N')), fmt, output)
        return
    elements = enumerate_sing(n)
    for a in elements:
        click.echo(str(a))
    click.echo(f"Sing({n}): {len(elements)} elements")


@main_bp.cli.command('factorize')
@click.option('--cat', 'category', type=click.Choice(['P', 'Pi']), required=True)
@click.option('-n', 'n', type=GROUND_SIZE, required=True)
@click.option('--morphism', required=True, help='"f: {..}->{..} [..]" or "eta: π2 -> π1 [..]".')
@reports_errors
def factorize_command(category, n, morphism):
    """Print the normal factorization of a morphism."""
    if category == 'P':
        f = SetFunction.parse(morphism, n)
        factorization = normal_factorize_p(f)
        click.echo(f"q = {factorization.q}")
        click.echo(f"u = {factorization.u}")
        click.echo(f"j = {factorization.j}")
        recomposes = factorization.composite == f
    else:
        m = BlockMapMorphism.parse(morphism)
        if m.n != n:
            raise InputError(f"morphism is over n={m.n}, not n={n}")
        factorization = normal_factorize_pi(m)
        click.echo(f"sigma = {factorization.sigma}")
        click.echo(f"gamma = {factorization.gamma}")
        click.echo(f"zeta* = {factorization.zeta_star}")
        click.echo(f"u* = {factorization.u_star}")
        click.echo(f"nu* = {factorization.nu_star}")
        recomposes = factorization.composite == m
    click.echo(f"recomposes: {'yes' if recomposes else 'no'}")
    if not recomposes:
        _fail("normal factorization does not recompose")


@main_bp.cli.command('cones')
@click.option('--build', 'which', type=click.Choice(['TP', 'TPi']), default=None)
@click.option('--show', 'literal', default=None, help='A cone literal such as "rho:1,1,2".')
@click.option('-n', 'n', type=GROUND_SIZE, default=None)
@export_option
@output_option
@reports_errors
def cones_command(which, literal, n, fmt, output):
    """Build T𝒫(X)/TΠ(X) or show the components of one cone."""
    if literal:
        cone = ConeP.parse(literal) if literal.strip().startswith('rho') else ConePi.parse(literal)
        if isinstance(cone, ConeP):
            for c in enumerate_subsets(cone.n):
                click.echo(f"{c}: {cone_component_p(cone, c)}")
        else:
            for pi in enumerate_partitions(cone.n):
                click.echo(f"{pi}: {cone_component_pi(cone, pi)}")
        click.echo(f"vertex: {cone.vertex}")
        click.echo("M-set: " + ', '.join(str(c) for c in mset(cone)))
        return
    if which is None or n is None:
        raise click.UsageError("either --show or both --build and -n are required")
    limit = _guard('CROSSCONN_MAX_TABLE_N')
    if which == 'TP':
        table = build_TP(n, max_n=limit)
        ok, errors = verify_powerset_cones_iso(n, max_n=limit)
        label = f"a -> rho^a, Sing({n}) ~ T𝒫({n})"
    else:
        table = build_TPi(n, max_n=limit)
        ok, errors = verify_partition_cones_anti_iso(n, max_n=limit)
        label = f"a -> sigma^a, Sing({n}) ~ TΠ({n})^op"
    if fmt:
        _export(table, fmt, output)
    click.echo(f"order: {len(table)}")
    _report(ok, errors, label)


@main_bp.cli.command('dual')
@click.option('--verify', 'check', is_flag=True, default=False)
@click.option('-n', 'n', type=GROUND_SIZE, required=True)
@reports_errors
def dual_command(check, n):
    """List the H-functors of 𝒫(X) or verify both dual isomorphisms."""
    if check:
        ok, errors = verify_dual_isomorphisms(n, max_n=_guard('CROSSCONN_MAX_TABLE_N'))
        _report(ok, errors, f"normal duals for n={n}")
        return
    for pi in enumerate_partitions(n):
        click.echo(f"{functor_Q(pi)} -> {pi}")


@main_bp.cli.command('verify')
@click.option('--suite', 'suites', multiple=True, default=['all'],
              type=click.Choice(['all'] + list(SUITES) + [entry.name for entry in SUITES.values()]))
@click.option('-n', 'n', type=GROUND_SIZE, required=True)
@reports_errors
def verify_command(suites, n):
    """Run verification suites and print the pass/fail matrix."""
    results = run_suites(n, suites)
    click.echo(format_matrix(results, n))
    if not all(r.passed for r in results):
        click.get_current_context().exit(1)


@crossconn_bp.cli.command('build')
@click.option('--theta', required=True, help='Permutation literal, e.g. 2,3,1.')
@click.option('-n', 'n', type=GROUND_SIZE, required=True)
@export_option
@output_option
@reports_errors
def crossconn_build(theta, n, fmt, output):
    """Build the cross-connection semigroup of a permutation."""
    theta = Permutation.parse(theta)
    limit = _guard('CROSSCONN_MAX_TABLE_N')
    semigroup = build_s_gamma(theta, n, max_n=limit)
    if fmt:
        _export(semigroup.table, fmt, output)
    click.echo(f"theta: {theta}")
    click.echo(f"order: {len(semigroup)}")
    ok, errors = verify_s_gamma_iso(theta, n, max_n=limit)
    _report(ok, errors, f"psi: Sing({n}) ~ S̃Γ[{theta}]")


@crossconn_bp.cli.command('enumerate')
@click.option('-n', 'n', type=GROUND_SIZE, required=True)
@reports_errors
def crossconn_enumerate(n):
    """Search every cross-connection between Π(X) and 𝒫(X)."""
    found = enumerate_cross_connections(
        n, max_n=_guard('CROSSCONN_MAX_SEARCH_N'), recheck_max_n=_guard('CROSSCONN_RECHECK_MAX_N'))
    for theta in found:
        click.echo(str(theta))
    click.echo(f"{len(found)} cross-connections")


@crossconn_bp.cli.command('verify')
@click.option('--all', 'every', is_flag=True, default=False, help='Check every permutation of 1..n.')
@click.option('--theta', default=None)
@click.option('-n', 'n', type=GROUND_SIZE, required=True)
@reports_errors
def crossconn_verify(every, theta, n):
    """Check Γ_θ, Δ_θ, the duality and both semigroup isomorphisms."""
    if every == (theta is not None):
        raise click.UsageError("give exactly one of --all and --theta")
    thetas = enumerate_permutations(n) if every else [Permutation.parse(theta)]
    limit = _guard('CROSSCONN_MAX_TABLE_N')
    failures = []
    for t in thetas:
        if t.n != n:
            raise InputError(f"theta {t} is not a permutation of 1..{n}")
        checks = [
            ('gamma-local-iso', check_local_isomorphism(gamma_functor(t), n)),
            ('delta-local-iso', check_local_isomorphism(delta_functor(t), n)),
            ('duality', verify_duality(t, n, max_n=limit,
                                       naturality_max_n=_guard('CROSSCONN_MAX_NATURALITY_N'))),
            ('s-gamma-iso', verify_s_gamma_iso(t, n, max_n=limit)),
            ('variant-iso', verify_variant_iso(t, n, max_n=limit)),
        ]
        for label, (ok, errors) in checks:
            click.echo(f"{t}  {label}  {'PASS' if ok else 'FAIL'}")
            if not ok:
                failures.append(errors[0])
    if failures:
        _fail(failures[0])


@ideal_bp.cli.command('build')
@click.option('-n', 'n', type=GROUND_SIZE, required=True)
@click.option('--exclude', default=None, help='Minimal partitions to drop, e.g. "12|3|4|5".')
@click.option('--generators', default=None, help='Generators of the ideal, e.g. "13|2,1|23".')
@reports_errors
def ideal_build(n, exclude, generators):
    """Build the right reductive subsemigroup of a total ideal and print a JSON summary."""
    limit = _guard('CROSSCONN_MAX_IDEAL_N')
    if generators is not None:
        if exclude is not None:
            raise click.UsageError("--exclude and --generators are exclusive")
        parts = [principal_ideal(pi) for pi in parse_partition_list(generators)]
        ideal = ideal_union(parts, n=n)
        result = build_ideal_cxn(ideal, n, max_n=limit)
    else:
        excluded = parse_partition_list(exclude) if exclude else []
        for pi in excluded:
            if pi.n != n:
                raise InputError(f"{pi} is not a partition of 1..{n}")
        result = build_minimal_partition_ideal(n, excluded, max_n=limit)
    click.echo(json.dumps(result.summary()))
    if not (result.is_regular and result.is_right_reductive):
        click.get_current_context().exit(1)

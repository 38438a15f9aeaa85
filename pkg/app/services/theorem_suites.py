"""
verify 命令使用的验证套件注册表。

每个套件有一个矩阵行标签和一个描述性名称，接受 n，返回 (is_valid, errors)；
超出配置上限的套件记为 SKIP。
"""
import logging
from dataclasses import dataclass, field

from config import Config
from app.errors import SizeGuardError
from app.services.cones import (ConeP, ConePi, check_cone_axiom, check_mset,
                                verify_partition_cones_anti_iso, verify_powerset_cones_iso)
from app.services.cross_connection import (search_cross_connections, verify_duality,
                                           verify_s_gamma_iso, verify_variant_iso)
from app.services.foundation import enumerate_permutations, enumerate_sing
from app.services.ideals import (build_ideal_cxn, build_minimal_partition_ideal,
                                 check_totality_bound, check_totality_break, full_ideal,
                                 minimal_partitions)
from app.services.normal_dual import verify_partition_dual, verify_powerset_dual
from app.services.partition_category import verify_normal_category_pi
from app.services.powerset_category import verify_normal_category_p

logger = logging.getLogger(__name__)

SUITES = {}


@dataclass
class SuiteResult:
    label: str
    name: str
    description: str
    status: str
    errors: list = field(default_factory=list)

    @property
    def passed(self):
        return self.status != 'FAIL'


@dataclass(frozen=True)
class Suite:
    label: str
    name: str
    description: str
    func: object


def suite(label, name, description):
    def register(func):
        SUITES[label] = Suite(label, name, description, func)
        return func
    return register


def resolve_suite(key):
    """按行标签或描述性名称查找套件。"""
    if key in SUITES:
        return SUITES[key]
    for entry in SUITES.values():
        if entry.name == key:
            return entry
    raise KeyError(key)


def sample_permutations(n, count=5):
    """n <= 3 时取全部置换，否则按字典序等距取 count 个（包含恒等置换）。"""
    perms = enumerate_permutations(n)
    if n <= 3 or len(perms) <= count:
        return perms
    step = len(perms) // count
    return perms[::step][:count]


def _collect(checks):
    errors = []
    for ok, found in checks:
        if not ok:
            errors.extend(found)
            break
    return not errors, errors


@suite('Thm3.2', 'powerset-cones-iso', 'a -> rho^a is an isomorphism Sing(X) -> T𝒫(X)')
def _powerset_cones(n):
    return verify_powerset_cones_iso(n)


@suite('Thm3.6', 'partition-cones-anti-iso', 'a -> sigma^a is an anti-isomorphism Sing(X) -> TΠ(X)')
def _partition_cones(n):
    return verify_partition_cones_anti_iso(n)


@suite('Thm4.1', 'dual-of-powerset', 'the normal dual of 𝒫(X) is isomorphic to Π(X)')
def _dual_powerset(n):
    return verify_powerset_dual(n)


@suite('Thm4.2', 'dual-of-partitions', 'the normal dual of Π(X) is isomorphic to 𝒫(X)')
def _dual_partitions(n):
    return verify_partition_dual(n)


@suite('Lem4.3', 'mset-cross-sections', 'M-sets of normal cones are exactly the cross-section families')
def _msets(n):
    roster = enumerate_sing(n)
    return _collect(check_mset(cone) for a in roster for cone in (ConeP(a), ConePi(a)))


@suite('Prop4.10', 'duality-natural', 'chi is a natural bijection between the bifunctor sets')
def _duality(n):
    return _collect(verify_duality(theta, n) for theta in enumerate_permutations(n))


@suite('Thm-SGamma', 'cxn-semigroup-iso', 'the cross-connection semigroup of every theta is isomorphic to Sing(X)')
def _s_gamma(n):
    return _collect(verify_s_gamma_iso(theta, n) for theta in sample_permutations(n))


@suite('Thm-AllCxn', 'all-cxn-from-perms', 'every cross-connection between Π(X) and 𝒫(X) comes from a permutation')
def _all_cxn(n):
    report = search_cross_connections(n)
    expected = enumerate_permutations(n)
    errors = []
    if report.found != expected:
        errors.append(f"search found {len(report.found)} cross-connections, expected the {len(expected)} permutations")
    elif sum(report.rejected.values()) != report.candidates - len(expected):
        errors.append(f"{report.candidates} assignments but only {sum(report.rejected.values())} rejections")
    return not errors, errors


@suite('Lem5.1', 'total-ideal', 'excluding at most n-2 minimal partitions keeps an ideal total; excluding a whole star breaks it')
def _total_ideal(n):
    return _collect([check_totality_bound(n), check_totality_break(n)])


@suite('Thm5.6', 'right-reductive', 'total ideals give regular right reductive subsemigroups of Sing(X)')
def _right_reductive(n):
    errors = []
    whole = build_ideal_cxn(full_ideal(n), n)
    if len(whole.table) != len(enumerate_sing(n)):
        errors.append(f"the full ideal gives order {len(whole.table)}, not |Sing({n})|")
    results = [whole]
    if n >= 3:
        excluded = {minimal_partitions(n)[0]}
        part = build_minimal_partition_ideal(n, excluded)
        if len(part.table) != len(enumerate_sing(n)) - part.excluded_count:
            errors.append(f"excluding {next(iter(excluded))} gives order {len(part.table)}")
        results.append(part)
    for result in results:
        if not (result.is_regular and result.is_right_reductive):
            errors.append(f"subsemigroup of order {len(result.table)} is not regular and right reductive")
    return not errors, errors


@suite('Cone-Axiom', 'cone-axiom', 'every normal cone is compatible with inclusions')
def _cone_axiom(n):
    roster = enumerate_sing(n)
    return _collect(check_cone_axiom(cone) for a in roster for cone in (ConeP(a), ConePi(a)))


@suite('Variant', 'variant-iso', 'the variant Sing(X) under a*b = a.theta.b is isomorphic to the cross-connection semigroup')
def _variant(n):
    return _collect(verify_variant_iso(theta, n) for theta in sample_permutations(n))


@suite('Normal-P', 'normal-category-p', '𝒫(X) is a normal category')
def _normal_p(n):
    return verify_normal_category_p(n, cap=min(n - 1, Config.CROSSCONN_P_OBJECT_CAP))


@suite('Normal-Pi', 'normal-category-pi', 'Π(X) is a normal category')
def _normal_pi(n):
    return verify_normal_category_pi(n)


def run_suites(n, names=None):
    """按注册顺序运行指定（默认全部）套件。"""
    entries = list(SUITES.values()) if names is None or 'all' in names else [resolve_suite(key) for key in names]
    results = []
    for entry in entries:
        try:
            ok, errors = entry.func(n)
        except SizeGuardError as exc:
            logger.info(f"套件 {entry.label} 跳过: {exc}")
            results.append(SuiteResult(entry.label, entry.name, entry.description, 'SKIP', [str(exc)]))
            continue
        status = 'PASS' if ok else 'FAIL'
        if not ok:
            logger.warning(f"套件 {entry.label} 失败: {errors[0]}")
        results.append(SuiteResult(entry.label, entry.name, entry.description, status, errors))
    return results


def format_matrix(results, n):
    label_width = max((len(r.label) for r in results), default=0)
    name_width = max((len(r.name) for r in results), default=0)
    lines = [f"verification matrix for n={n}"]
    for r in results:
        line = f"{r.label.ljust(label_width)}  {r.name.ljust(name_width)}  {r.status}"
        if r.errors:
            line += f"  {r.errors[0]}"
        lines.append(line)
    return '\n'.join(lines)

import logging
from dataclasses import dataclass, field
from itertools import combinations

from config import Config
from app.errors import InvalidObjectError, NotTotalError, check_guard
from app.models import Permutation, SetPartition, SubsetObject
from app.services.cross_connection import delta_set, gamma_set
from app.services.foundation import enumerate_partitions, enumerate_sing, is_cross_section, refines
from app.services.semigroup_core import CayleyTable, is_regular, is_right_reductive, transformation_table

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class PartitionIdeal:
    """
    Π(X) 的理想：在 π̄ 序下向下封闭，即对底层划分的粗化封闭。
    """
    n: int
    members: frozenset

    def __post_init__(self):
        objects = enumerate_partitions(self.n)
        for pi in self.members:
            if pi.n != self.n:
                raise InvalidObjectError(f"{pi} is not a partition of 1..{self.n}")
            for coarser in objects:
                if refines(pi, coarser) and coarser not in self.members:
                    raise InvalidObjectError(f"ideal contains {pi} but not its coarsening {coarser}")

    def __contains__(self, pi):
        return pi in self.members

    def __len__(self):
        return len(self.members)

    def __iter__(self):
        return iter(self.sorted())

    def sorted(self):
        return sorted(self.members, key=lambda pi: pi.block_of)

    def __str__(self):
        return '{' + ', '.join(str(pi) for pi in self.sorted()) + '}'


@dataclass
class RightReductiveResult:
    ideal: PartitionIdeal
    table: CayleyTable
    is_regular: bool
    is_right_reductive: bool
    excluded_count: int = field(default=None)

    def summary(self):
        return {
            "order": len(self.table),
            "regular": self.is_regular,
            "right_reductive": self.is_right_reductive,
            "excluded_count": self.excluded_count,
        }


def principal_ideal(pi):
    """π̄ 生成的主理想：π 的全部粗化（包括 π 自身）。"""
    return PartitionIdeal(pi.n, frozenset(p for p in enumerate_partitions(pi.n) if refines(pi, p)))


def ideal_union(parts, n=None):
    parts = list(parts)
    if n is None:
        if not parts:
            raise InvalidObjectError("n is required for an empty union of ideals")
        n = parts[0].n
    members = frozenset().union(*(part.members for part in parts))
    return PartitionIdeal(n, members)


def full_ideal(n):
    return PartitionIdeal(n, frozenset(enumerate_partitions(n)))


def maximal_subsets(n):
    return [SubsetObject.from_members(n, [x for x in range(1, n + 1) if x != y]) for y in range(1, n + 1)]


def check_total(ideal):
    errors = []
    for subset in maximal_subsets(ideal.n):
        if not any(is_cross_section(subset, pi) for pi in ideal.members):
            errors.append(f"{subset} is not a cross-section of any partition in the ideal")
    return not errors, errors


def is_total(ideal, n=None):
    """每个极大真子集都是理想中某个划分的截面。"""
    if n is not None and n != ideal.n:
        raise InvalidObjectError(f"ideal is over n={ideal.n}, not n={n}")
    ok, _ = check_total(ideal)
    return ok


def build_ideal_cxn(ideal, n=None, max_n=None):
    """
    以包含函子 Γ: I → Π(X) 与恒等函子 Δ 构造交叉连接，
    UΓ = {a : π̄_a ∈ vI}；连接对都在对角线上，所以 S̃Γ 就是 UΓ 在 Sing(X) 乘法下的子半群。
    """
    n = n if n is not None else ideal.n
    check_guard(n, max_n if max_n is not None else Config.CROSSCONN_MAX_IDEAL_N, "ideal cross-connection")
    ok, errors = check_total(ideal)
    if not ok:
        raise NotTotalError(f"ideal is not total: {errors[0]}")

    identity = Permutation.identity(n)
    roster = enumerate_sing(n)
    union = set()
    # 每个像都落在某个极大子集中，所以只需遍历极大子集
    for subset in maximal_subsets(n):
        for pi in ideal.members:
            members = gamma_set(identity, subset, pi, roster)
            if set(members) != set(delta_set(identity, subset, pi, roster)):
                raise InvalidObjectError(f"bifunctor sets of the identity dual differ at ({subset}, {pi})")
            union.update(members)
    elements = [a for a in roster if a in union]

    table = transformation_table(elements, name=f"T[{n}]")
    regular = is_regular(table)
    reductive = is_right_reductive(table)
    logger.info(f"理想交叉连接半群：阶 {len(table)}，正则={regular}，右约化={reductive}")
    if not (regular and reductive):
        logger.warning(f"n={n} 的理想半群未通过正则或右约化检查")
    return RightReductiveResult(ideal=ideal, table=table, is_regular=regular, is_right_reductive=reductive)


def minimal_partitions(n):
    """恰有一个二元块、其余都是单点块的划分，共 C(n,2) 个。"""
    return [pi for pi in enumerate_partitions(n) if pi.num_blocks == n - 1]


def build_minimal_partition_ideal(n, excluded, max_n=None):
    """
    去掉若干极小划分后，由其余极小划分的主理想之并构造右约化子半群。
    """
    check_guard(n, max_n if max_n is not None else Config.CROSSCONN_MAX_IDEAL_N, "minimal-partition ideal")
    minimal = minimal_partitions(n)
    excluded = set(excluded)
    for pi in excluded:
        if pi not in minimal:
            raise InvalidObjectError(f"{pi} is not a minimal partition of 1..{n}")
    kept = [pi for pi in minimal if pi not in excluded]
    ideal = ideal_union((principal_ideal(pi) for pi in kept), n=n)
    result = build_ideal_cxn(ideal, n, max_n=max_n)
    result.excluded_count = sum(1 for a in enumerate_sing(n) if a.kernel in excluded)
    logger.info(f"去掉 {len(excluded)} 个极小划分，排除 {result.excluded_count} 个元素")
    return result


def check_totality_bound(n, max_n=None):
    """去掉至多 n-2 个极小划分后理想仍是全理想。"""
    check_guard(n, max_n if max_n is not None else Config.CROSSCONN_MAX_IDEAL_N, "totality bound")
    minimal = minimal_partitions(n)
    errors = []
    for size in range(n - 1):
        for excluded in combinations(minimal, size):
            kept = [pi for pi in minimal if pi not in excluded]
            ideal = ideal_union((principal_ideal(pi) for pi in kept), n=n)
            if not is_total(ideal):
                errors.append(f"excluding {', '.join(str(pi) for pi in excluded)} breaks totality")
                return False, errors
    return True, errors


def check_totality_break(n, max_n=None):
    """去掉经过同一点的全部 n-1 个二元块后，理想不再是全理想。"""
    check_guard(n, max_n if max_n is not None else Config.CROSSCONN_MAX_IDEAL_N, "totality break")
    minimal = minimal_partitions(n)
    errors = []
    for x in range(1, n + 1):
        kept = [pi for pi in minimal if len(pi.block_containing(x)) == 1]
        ideal = ideal_union((principal_ideal(pi) for pi in kept), n=n)
        if is_total(ideal):
            errors.append(f"excluding every doubleton through {x} keeps the ideal total")
    return not errors, errors


def parse_partition_list(text):
    """逗号分隔的划分字面量，例如 "13|2,1|23"。"""
    return [SetPartition.parse(part) for part in text.split(',') if part.strip()]

"""
𝒫(X) 与 Π(X) 上的正规锥。

锥只保存生成它的奇异变换 a，各分量按需计算：
𝒫 一侧 ρ^a 在 C 处的分量是 a|_C : C → Im a；
Π 一侧 σ^a 在 π̄ 处的分量是 π̄ → π̄_a，块映射 [x]_{π_a} ↦ [a(x)]_π。
锥的乘法按字面实现：取 δ 在 γ 顶点处的分量，做正规分解，
把满态射部分接到 γ 的每个分量之后。
"""
import logging
from dataclasses import dataclass

from config import Config
from app.errors import InvalidObjectError, MorphismError, check_guard
from app.models import SetPartition, SubsetObject, Transformation, same_ground
from app.services.foundation import (compose, cross_sections, enumerate_partitions,
                                     enumerate_sing, enumerate_subsets, is_cross_section)
from app.services.partition_category import (BlockMapMorphism, compose_pi, inclusion_pi,
                                             is_isomorphism_pi, leq_pi, normal_factorize_pi)
from app.services.powerset_category import (SetFunction, compose_p, inclusion_p,
                                            is_isomorphism_p, normal_factorize_p)
from app.services.semigroup_core import (CayleyTable, hom_violation, sing_table,
                                         verify_anti_iso, verify_iso)

logger = logging.getLogger(__name__)


def _singular(a):
    if not a.is_singular:
        raise InvalidObjectError(f"{a} is invertible and does not generate a normal cone")
    return a


def _parse_cone(text, prefix):
    body = text.strip()
    if not body.startswith(prefix + ':'):
        raise InvalidObjectError(f"cone literal must start with '{prefix}:', got {text!r}")
    return Transformation.parse(body[len(prefix) + 1:])


@dataclass(frozen=True)
class ConeP:
    """𝒫(X) 上的正规锥 ρ^a，顶点为 Im a。"""
    a: Transformation

    def __post_init__(self):
        _singular(self.a)

    @classmethod
    def parse(cls, text):
        return cls(_parse_cone(text, 'rho'))

    @property
    def n(self):
        return self.a.n

    @property
    def vertex(self):
        return self.a.image

    @property
    def is_idempotent(self):
        return compose(self.a, self.a) == self.a

    def __str__(self):
        return f"rho:{self.a}"


@dataclass(frozen=True)
class ConePi:
    """Π(X) 上的正规锥 σ^a，顶点为 π̄_a。"""
    a: Transformation

    def __post_init__(self):
        _singular(self.a)

    @classmethod
    def parse(cls, text):
        return cls(_parse_cone(text, 'sigma'))

    @property
    def n(self):
        return self.a.n

    @property
    def vertex(self):
        return self.a.kernel

    @property
    def is_idempotent(self):
        return compose(self.a, self.a) == self.a

    def __str__(self):
        return f"sigma:{self.a}"


@dataclass(frozen=True)
class MSet:
    members: frozenset

    def __contains__(self, item):
        return item in self.members

    def __len__(self):
        return len(self.members)

    def __iter__(self):
        return iter(self.sorted())

    def sorted(self):
        def key(member):
            if isinstance(member, SubsetObject):
                return member.sort_key()
            return member.block_of
        return sorted(self.members, key=key)


def cone_component_p(c, subset):
    same_ground(c.a, subset)
    return SetFunction(subset, c.vertex, tuple(c.a(x) for x in subset.members))


def cone_component_pi(c, pi):
    same_ground(c.a, pi)
    kernel = c.vertex
    return BlockMapMorphism(pi, kernel, tuple(pi.block_index(c.a(block[0])) for block in kernel.blocks))


def singleton_objects(n):
    return [SubsetObject.from_members(n, [x]) for x in range(1, n + 1)]


def co_singleton_objects(n):
    """{X∖{y}, {y}}，n >= 3 时都是 Π(X) 的对象。"""
    return [SetPartition.from_labels([1 if x == y else 0 for x in range(1, n + 1)]) for y in range(1, n + 1)]


def cone_from_components_p(components):
    """从各单点对象处的分量恢复生成变换：a(x) 是 {x} 处分量的值。"""
    n = next(iter(components)).n
    images = []
    for point in singleton_objects(n):
        if point not in components:
            raise MorphismError(f"component family has no component at {point}")
        images.append(components[point].images[0])
    return ConeP(Transformation(tuple(images)))


def cone_from_components_pi(components):
    """
    从余单点对象处的分量恢复生成变换。
    在 {X∖{y},{y}} 处，[x]_σ 被送到 {y} 当且仅当 c(x) = y，各对象处的像块之交恰为 {c(x)}。
    """
    n = next(iter(components)).n
    if n < 3:
        raise MorphismError("Π(X) has a single object for n = 2; components do not separate points")
    images = []
    for x in range(1, n + 1):
        candidates = (1 << n) - 1
        for pi in co_singleton_objects(n):
            if pi not in components:
                raise MorphismError(f"component family has no component at {pi}")
            component = components[pi]
            candidates &= pi.block_masks[component.eta[component.cod.block_index(x)]]
        if bin(candidates).count('1') != 1:
            raise MorphismError(f"component family does not determine the value at {x}")
        images.append(candidates.bit_length())
    return ConePi(Transformation(tuple(images)))


def cone_compose_family_p(gamma, delta, objects):
    """γ·δ 在给定对象上的分量：γ(C) 之后接 δ(c_γ) 的满态射部分。"""
    same_ground(gamma.a, delta.a)
    epi = normal_factorize_p(cone_component_p(delta, gamma.vertex)).epi
    return {c: compose_p(cone_component_p(gamma, c), epi) for c in objects}


def cone_compose_p(gamma, delta):
    family = cone_compose_family_p(gamma, delta, singleton_objects(gamma.n))
    return cone_from_components_p(family)


def cone_compose_family_pi(gamma, delta, objects):
    same_ground(gamma.a, delta.a)
    epi = normal_factorize_pi(cone_component_pi(delta, gamma.vertex)).epi
    return {pi: compose_pi(cone_component_pi(gamma, pi), epi) for pi in objects}


def cone_compose_pi(gamma, delta):
    n = gamma.n
    if n < 3:
        # Π(2) 只有一个对象，所有锥在外延上相同，退回到闭式
        same_ground(gamma.a, delta.a)
        return ConePi(compose(delta.a, gamma.a))
    family = cone_compose_family_pi(gamma, delta, co_singleton_objects(n))
    return cone_from_components_pi(family)


def mset(c):
    if isinstance(c, ConeP):
        members = [s for s in enumerate_subsets(c.n) if is_isomorphism_p(cone_component_p(c, s))]
    elif isinstance(c, ConePi):
        members = [pi for pi in enumerate_partitions(c.n) if is_isomorphism_pi(cone_component_pi(c, pi))]
    else:
        raise InvalidObjectError(f"not a cone: {c!r}")
    return MSet(frozenset(members))


def check_mset(c):
    """M-集与截面描述一致：𝒫 侧为 π_a 的截面，Π 侧为以 Im a 为截面的划分。"""
    found = mset(c)
    if isinstance(c, ConeP):
        expected = set(cross_sections(c.a.kernel))
    else:
        expected = {pi for pi in enumerate_partitions(c.n) if is_cross_section(c.a.image, pi)}
    errors = []
    if set(found.members) != expected:
        errors.append(f"M-set of {c} is not the expected cross-section family")
    if not found.members:
        errors.append(f"M-set of {c} is empty")
    return not errors, errors


def idempotent_cone_p(d):
    """u 固定 D 中的点，把其余点送到 min(D)。"""
    low = d.minimum
    return ConeP(Transformation(tuple(x if x in d else low for x in range(1, d.n + 1))))


def idempotent_cone_pi(pi):
    """e 把每个点送到所在块的最小元，核为 π，像为块最小元组成的截面。"""
    return ConePi(Transformation(tuple(pi.minima[pi.block_index(x)] for x in range(1, pi.n + 1))))


def check_cone_axiom(c):
    errors = []
    if isinstance(c, ConeP):
        objects = enumerate_subsets(c.n)
        for small in objects:
            for big in objects:
                if small != big and small.issubset(big):
                    if compose_p(inclusion_p(small, big), cone_component_p(c, big)) != cone_component_p(c, small):
                        errors.append(f"{c}: components at {small} and {big} are not compatible")
    else:
        objects = enumerate_partitions(c.n)
        for lower in objects:
            for upper in objects:
                if lower != upper and leq_pi(lower, upper):
                    if compose_pi(inclusion_pi(lower, upper), cone_component_pi(c, upper)) != cone_component_pi(c, lower):
                        errors.append(f"{c}: components at {lower} and {upper} are not compatible")
    return not errors, errors


def build_TP(n, max_n=None):
    check_guard(n, max_n if max_n is not None else Config.CROSSCONN_MAX_TABLE_N, "T𝒫(X) table")
    roster = [ConeP(a) for a in enumerate_sing(n)]
    table = CayleyTable.from_product(roster, cone_compose_p, name=f"T𝒫({n})")
    logger.info(f"T𝒫({n}) 构造完成，共 {len(table)} 个锥")
    return table


def build_TPi(n, max_n=None):
    check_guard(n, max_n if max_n is not None else Config.CROSSCONN_MAX_TABLE_N, "TΠ(X) table")
    roster = [ConePi(a) for a in enumerate_sing(n)]
    table = CayleyTable.from_product(roster, cone_compose_pi, name=f"TΠ({n})")
    logger.info(f"TΠ({n}) 构造完成，共 {len(table)} 个锥")
    return table


def verify_powerset_cones_iso(n, max_n=None):
    """a ↦ ρ^a 是 Sing(X) → T𝒫(X) 的同构。"""
    sing = sing_table(n, max_n=max_n)
    cones = build_TP(n, max_n=max_n)
    errors = []
    if not verify_iso(sing, cones, ConeP):
        witness = hom_violation(sing, cones, ConeP)
        errors.append(f"a -> rho^a is not an isomorphism onto T𝒫({n}); first witness {witness}")
        logger.warning(errors[-1])
    return not errors, errors


def verify_partition_cones_anti_iso(n, max_n=None):
    """a ↦ σ^a 是 Sing(X) → TΠ(X) 的反同构。"""
    sing = sing_table(n, max_n=max_n)
    cones = build_TPi(n, max_n=max_n)
    errors = []
    if not verify_anti_iso(sing, cones, ConePi):
        witness = hom_violation(sing, cones, ConePi, anti=True)
        errors.append(f"a -> sigma^a is not an anti-isomorphism onto TΠ({n}); first witness {witness}")
        logger.warning(errors[-1])
    return not errors, errors

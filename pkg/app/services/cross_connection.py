"""
由置换 θ 诱导的交叉连接 Γ_θ 及其对偶 Δ_θ。

交叉连接只保存其见证 θ，函子、双函子集合、对偶 χ 与半群 S̃Γ_θ 都是派生出来的视图。
search_cross_connections 在对偶一侧（𝒫(X) 的对象映射）上遍历全部单点赋值，
验证每个交叉连接都来自某个置换。
"""
import logging
from collections import Counter
from dataclasses import dataclass, field
from functools import partial
from itertools import product

from config import Config
from app.errors import InvalidObjectError, MorphismError, check_guard
from app.models import Permutation, SetPartition, SubsetObject, Transformation, same_ground
from app.services.foundation import (compose, conjugate, enumerate_partitions, enumerate_sing,
                                     enumerate_subsets, is_cross_section, perm_image_subset,
                                     perm_preimage_partition, refines)
from app.services.partition_category import (BlockMapMorphism, PartitionCategory, compose_pi,
                                             identity_pi, inclusion_pi, leq_pi)
from app.services.powerset_category import (PowersetCategory, SetFunction, compose_p,
                                            identity_p, inclusion_p)
from app.services.semigroup_core import (CayleyTable, hom_violation, sing_table,
                                         transformation_table, verify_iso)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class PermCrossConnection:
    theta: Permutation

    @classmethod
    def parse(cls, text):
        body = text.strip()
        if body.startswith('theta:'):
            body = body[len('theta:'):]
        return cls(Permutation.parse(body))

    @property
    def n(self):
        return self.theta.n

    def gamma_functor(self):
        return gamma_functor(self.theta)

    def delta_functor(self):
        return delta_functor(self.theta)

    def __str__(self):
        return f"theta:{self.theta}"


@dataclass(frozen=True)
class LinkedPair:
    a: Transformation
    b: Transformation

    def __str__(self):
        return f"({self.a}|{self.b})"


@dataclass
class CrossConnectionSemigroup:
    theta: Permutation
    table: CayleyTable

    def __len__(self):
        return len(self.table)


@dataclass(frozen=True)
class FunctorCandidate:
    """
    局部同构检查的输入：定义域范畴（'pi' 为 Π(X)，'p' 为 𝒫(X)）、对象映射和态射映射。
    """
    side: str
    object_map: dict
    morphism_map: object

    def __post_init__(self):
        if self.side not in ('p', 'pi'):
            raise MorphismError(f"unknown category side {self.side!r}")
        if not callable(self.morphism_map):
            raise MorphismError("morphism map must be callable")


def gamma_object(theta, pi):
    """π̄ ↦ θ⁻¹(π) 的横线对象。"""
    return perm_preimage_partition(theta, pi)


def gamma_morphism(theta, m):
    """η* ↦ (θηθ⁻¹)*：θ⁻¹(B) ↦ θ⁻¹(η(B))。"""
    same_ground(theta, m.dom)
    source = gamma_object(theta, m.dom)
    target = gamma_object(theta, m.cod)
    inverse = theta.inverse
    eta = tuple(
        source.block_index(inverse(m.image_block(theta(block[0]))[0]))
        for block in target.blocks
    )
    return BlockMapMorphism(source, target, eta)


def delta_object(theta, subset):
    return perm_image_subset(theta, subset)


def delta_morphism(theta, f):
    """f ↦ θ⁻¹fθ：θ(A) → θ(B)，y ↦ θ(f(θ⁻¹(y)))。"""
    same_ground(theta, f.dom)
    inverse = theta.inverse
    dom = delta_object(theta, f.dom)
    return SetFunction(dom, delta_object(theta, f.cod), tuple(theta(f(inverse(y))) for y in dom.members))


def gamma_functor(theta):
    n = theta.n
    return FunctorCandidate(
        side='pi',
        object_map={pi: gamma_object(theta, pi) for pi in enumerate_partitions(n)},
        morphism_map=partial(gamma_morphism, theta),
    )


def delta_functor(theta):
    n = theta.n
    return FunctorCandidate(
        side='p',
        object_map={s: delta_object(theta, s) for s in enumerate_subsets(n)},
        morphism_map=partial(delta_morphism, theta),
    )


def gamma_set(theta, subset, pi, roster=None):
    """Γ(A, π̄) = {a : Im a ⊆ A, θ⁻¹(π) ⊆ π_a}。"""
    same_ground(theta, subset, pi)
    roster = roster if roster is not None else enumerate_sing(theta.n)
    relation = gamma_object(theta, pi)
    return [a for a in roster if a.image.issubset(subset) and refines(relation, a.kernel)]


def delta_set(theta, subset, pi, roster=None):
    """Δ(A, π̄) = {a : Im a ⊆ θ(A), π ⊆ π_a}。"""
    same_ground(theta, subset, pi)
    roster = roster if roster is not None else enumerate_sing(theta.n)
    image = delta_object(theta, subset)
    return [a for a in roster if a.image.issubset(image) and refines(pi, a.kernel)]


def _representative_action(a, block_map, finish, n):
    # x ↦ finish(a(block_map 在 [x] 上所选块的代表元))
    return Transformation(tuple(finish(a(block_map.image_block(x)[0])) for x in range(1, n + 1)))


def gamma_action(theta, f, v, a):
    """Γ(f, v*): Γ(A, π̄) → Γ(A', π̄')，a ↦ u·a·f，u = Γ_θ(v*) 的块映射。"""
    u = gamma_morphism(theta, v)
    return _representative_action(a, u, f, theta.n)


def delta_action(theta, f, v, a):
    """Δ(f, v*): Δ(A, π̄) → Δ(A', π̄')，a ↦ v·a·g，g = Δ_θ(f)。"""
    g = delta_morphism(theta, f)
    return _representative_action(a, v, g, theta.n)


def chi(theta, subset, pi, roster=None):
    """χ(A, π̄): Γ(A, π̄) → Δ(A, π̄)，a ↦ θ⁻¹aθ。"""
    return {a: conjugate(theta, a) for a in gamma_set(theta, subset, pi, roster)}


def verify_duality(theta, n=None, max_n=None, naturality_max_n=None):
    """
    χ 在每对对象处都是双射，并且对每对态射 (f, v*) 自然性方块交换。
    自然性只在 n 不超过 CROSSCONN_MAX_NATURALITY_N 时逐态射对穷举。
    """
    n = n if n is not None else theta.n
    if theta.n != n:
        raise InvalidObjectError(f"theta {theta} is not a permutation of 1..{n}")
    check_guard(n, max_n if max_n is not None else Config.CROSSCONN_MAX_TABLE_N, "duality check")
    naturality_max_n = naturality_max_n if naturality_max_n is not None else Config.CROSSCONN_MAX_NATURALITY_N

    roster = enumerate_sing(n)
    subsets = enumerate_subsets(n)
    partitions = enumerate_partitions(n)
    errors = []
    chis = {}
    for s in subsets:
        for pi in partitions:
            mapping = chi(theta, s, pi, roster)
            target = set(delta_set(theta, s, pi, roster))
            if len(set(mapping.values())) != len(mapping) or set(mapping.values()) != target:
                errors.append(f"chi({s}, {pi}) is not a bijection onto Δ({s}, {pi})")
                return not errors, errors
            chis[(s, pi)] = mapping

    if n <= naturality_max_n:
        powerset = PowersetCategory(n)
        partition = PartitionCategory(n)
        for s1 in subsets:
            for s2 in subsets:
                for f in powerset.hom(s1, s2):
                    for pi1 in partitions:
                        for pi2 in partitions:
                            for v in partition.hom(pi1, pi2):
                                for a, b in chis[(s1, pi1)].items():
                                    left = conjugate(theta, gamma_action(theta, f, v, a))
                                    right = delta_action(theta, f, v, b)
                                    if left != right:
                                        errors.append(f"chi is not natural at a={a}, f={f}, v={v}")
                                        logger.warning(errors[-1])
                                        return False, errors
    else:
        logger.info(f"n={n} 超过自然性穷举上限 {naturality_max_n}，只检查双射性")
    return not errors, errors


def u_gamma(theta, n=None, max_n=None):
    """UΓ_θ：全部 Γ(A, π̄) 的并。"""
    n = n if n is not None else theta.n
    check_guard(n, max_n if max_n is not None else Config.CROSSCONN_MAX_TABLE_N, "UΓ")
    roster = enumerate_sing(n)
    union = set()
    for s in enumerate_subsets(n):
        for pi in enumerate_partitions(n):
            union.update(gamma_set(theta, s, pi, roster))
    return union


def u_delta(theta, n=None, max_n=None):
    n = n if n is not None else theta.n
    check_guard(n, max_n if max_n is not None else Config.CROSSCONN_MAX_TABLE_N, "UΔ")
    roster = enumerate_sing(n)
    union = set()
    for s in enumerate_subsets(n):
        for pi in enumerate_partitions(n):
            union.update(delta_set(theta, s, pi, roster))
    return union


def linked_pairs(theta, n=None):
    """S̃Γ_θ 的元素 (a, θ⁻¹aθ)，a 取遍 Sing(X)。"""
    n = n if n is not None else theta.n
    return [LinkedPair(a, conjugate(theta, a)) for a in enumerate_sing(n)]


def is_linked(theta, a, b):
    return conjugate(theta, a) == b


def _pair_product(p, q):
    return LinkedPair(compose(p.a, q.a), compose(p.b, q.b))


def build_s_gamma(theta, n=None, max_n=None):
    n = n if n is not None else theta.n
    if theta.n != n:
        raise InvalidObjectError(f"theta {theta} is not a permutation of 1..{n}")
    check_guard(n, max_n if max_n is not None else Config.CROSSCONN_MAX_TABLE_N, "S̃Γ table")
    table = CayleyTable.from_product(linked_pairs(theta, n), _pair_product, name=f"S̃Γ[{theta}]")
    logger.info(f"S̃Γ_θ (θ={theta}) 构造完成，阶为 {len(table)}")
    return CrossConnectionSemigroup(theta=theta, table=table)


def verify_s_gamma_iso(theta, n=None, max_n=None):
    """ψ: a ↦ (a, θ⁻¹aθ) 是 Sing(X) → S̃Γ_θ 的同构。"""
    semigroup = build_s_gamma(theta, n, max_n=max_n)
    sing = sing_table(theta.n, max_n=max_n)

    def psi(a):
        return LinkedPair(a, conjugate(theta, a))

    errors = []
    if not verify_iso(sing, semigroup.table, psi):
        errors.append(f"psi is not an isomorphism Sing({theta.n}) -> S̃Γ[{theta}]; "
                      f"first witness {hom_violation(sing, semigroup.table, psi)}")
        logger.warning(errors[-1])
    return not errors, errors


def variant_product(theta, a, b):
    """a ∗ b = a·θ·b：x ↦ b(θ(a(x)))。"""
    same_ground(theta, a, b)
    return compose(compose(a, theta), b)


def variant_table(theta, n=None, max_n=None):
    n = n if n is not None else theta.n
    check_guard(n, max_n if max_n is not None else Config.CROSSCONN_MAX_TABLE_N, "variant table")
    return transformation_table(enumerate_sing(n), sandwich=theta, name=f"Sing({n})^[{theta}]")


def verify_variant_iso(theta, n=None, max_n=None):
    """φ: a ↦ (θa, aθ) 是变体半群到 S̃Γ_θ 的同构。"""
    variant = variant_table(theta, n, max_n=max_n)
    semigroup = build_s_gamma(theta, n, max_n=max_n)

    def phi(a):
        return LinkedPair(compose(theta, a), compose(a, theta))

    errors = []
    if not verify_iso(variant, semigroup.table, phi):
        errors.append(f"phi is not an isomorphism onto S̃Γ[{theta}]; "
                      f"first witness {hom_violation(variant, semigroup.table, phi)}")
        logger.warning(errors[-1])
    return not errors, errors


def _category(side, n):
    return PartitionCategory(n) if side == 'pi' else PowersetCategory(n)


def _leq(side, c1, c2):
    return leq_pi(c1, c2) if side == 'pi' else c1.issubset(c2)


def _inclusion(side, c1, c2):
    return inclusion_pi(c1, c2) if side == 'pi' else inclusion_p(c1, c2)


def _identity(side, c):
    return identity_pi(c) if side == 'pi' else identity_p(c)


def check_local_isomorphism(candidate, n):
    """
    检查候选函子是否为局部同构并满足交叉连接的全性条件：
    保持包含、在每个态射集上完全忠实、在每个主理想上限制为同构，
    以及每个对偶对象都是某个像对象的截面。
    """
    side = candidate.side
    category = _category(side, n)
    objects = category.objects
    mapping = candidate.object_map
    missing = [c for c in objects if c not in mapping]
    if missing:
        raise MorphismError(f"object map is not total: no image for {missing[0]}")
    image_objects = set(category.objects)
    errors = []
    for c in objects:
        if mapping[c] not in image_objects:
            errors.append(f"F({c}) = {mapping[c]} is not an object")
    if errors:
        return False, errors

    for c in objects:
        if candidate.morphism_map(_identity(side, c)) != _identity(side, mapping[c]):
            errors.append(f"F does not preserve the identity at {c}")
            return False, errors

    # 保持包含
    for c1 in objects:
        for c2 in objects:
            if _leq(side, c1, c2):
                if not _leq(side, mapping[c1], mapping[c2]):
                    errors.append(f"F breaks the order {c1} <= {c2}")
                    return False, errors
                image = candidate.morphism_map(_inclusion(side, c1, c2))
                if image != _inclusion(side, mapping[c1], mapping[c2]):
                    errors.append(f"F does not send the inclusion {c1} -> {c2} to an inclusion")
                    return False, errors

    # 完全忠实
    for c1 in objects:
        for c2 in objects:
            images = [candidate.morphism_map(m) for m in category.hom(c1, c2)]
            expected = set(category.hom(mapping[c1], mapping[c2]))
            if any(m.dom != mapping[c1] or m.cod != mapping[c2] for m in images):
                errors.append(f"F sends a morphism {c1} -> {c2} outside hom({mapping[c1]}, {mapping[c2]})")
                return False, errors
            if len(set(images)) != len(images):
                errors.append(f"F is not faithful on hom({c1}, {c2})")
                return False, errors
            if set(images) != expected:
                errors.append(f"F is not full on hom({c1}, {c2})")
                return False, errors

    # 主理想上的序同构
    for c in objects:
        ideal = [x for x in objects if _leq(side, x, c)]
        target = {x for x in objects if _leq(side, x, mapping[c])}
        images = [mapping[x] for x in ideal]
        if len(set(images)) != len(images) or set(images) != target:
            errors.append(f"F restricted to the ideal of {c} is not a bijection onto the ideal of {mapping[c]}")
            return False, errors
        for x in ideal:
            for y in ideal:
                if _leq(side, x, y) != _leq(side, mapping[x], mapping[y]):
                    errors.append(f"F restricted to the ideal of {c} does not reflect {x} <= {y}")
                    return False, errors

    # 全性：每个对偶对象都被某个像对象的截面关系覆盖
    if side == 'pi':
        for s in enumerate_subsets(n):
            if not any(is_cross_section(s, mapping[pi]) for pi in objects):
                errors.append(f"{s} is not a cross-section of any F(π̄)")
                return False, errors
    else:
        for pi in enumerate_partitions(n):
            if not any(is_cross_section(mapping[s], pi) for s in objects):
                errors.append(f"{pi} has no cross-section among the F(A)")
                return False, errors
    return True, errors


def is_local_isomorphism(candidate, n):
    ok, errors = check_local_isomorphism(candidate, n)
    if not ok:
        logger.debug(f"候选函子不是局部同构: {errors[0]}")
    return ok


def delta_by_images(f, subsets):
    """把单点赋值 f 按像延拓到 𝒫(X) 的对象：Δ(A) = {f(x) : x ∈ A}。"""
    return {s: SubsetObject.from_members(f.n, (f(x) for x in s)) for s in subsets}


def order_problem(f, subsets, delta=None):
    """Δ 必须保持包含，并在每个主理想上限制为序同构。"""
    delta = delta if delta is not None else delta_by_images(f, subsets)
    for s1 in subsets:
        for s2 in subsets:
            if s1.issubset(s2) and not delta[s1].issubset(delta[s2]):
                return f"Δ breaks the inclusion {s1} <= {s2}"
    for s in subsets:
        ideal = [x for x in subsets if x.issubset(s)]
        images = {delta[x] for x in ideal}
        if len(images) != len(ideal) or images != {x for x in subsets if x.issubset(delta[s])}:
            return f"Δ restricted to the ideal of {s} is not an order isomorphism"
    return None


def surjectivity_problem(f, n):
    missing = sorted(set(range(1, n + 1)) - set(f.images))
    if missing:
        return f"{{{missing[0]}}} is not the image of any singleton"
    return None


def co_singleton_problem(f, n, subsets, delta=None):
    """余单点划分 {X∖{b},{b}} 需要某个 Δ(A) 作为截面；n = 2 时它是恒等划分，不是对象。"""
    if n < 3:
        return None
    delta = delta if delta is not None else delta_by_images(f, subsets)
    for b in range(1, n + 1):
        pi = SetPartition.from_labels([1 if x == b else 0 for x in range(1, n + 1)])
        if not any(is_cross_section(delta[s], pi) for s in subsets):
            return f"{pi} has no cross-section among the Δ(A)"
    return None


def totality_problem(f, subsets, partitions, delta=None):
    delta = delta if delta is not None else delta_by_images(f, subsets)
    for pi in partitions:
        if not any(is_cross_section(delta[s], pi) for s in subsets):
            return f"{pi} has no cross-section among the Δ(A)"
    return None


@dataclass
class CrossConnectionSearch:
    """对偶一侧搜索的结果：存活的置换，以及每个过滤器排除的候选数。"""
    n: int
    candidates: int = 0
    found: list = field(default_factory=list)
    rejected: Counter = field(default_factory=Counter)


def search_cross_connections(n, max_n=None, recheck_max_n=None):
    """
    遍历单点到单点的全部 n^n 个赋值 f: X → X，按像延拓为 Δ(A) = f(A)，再依次过滤：
    包含与主理想上的序同构（f(a) = f(a′) 时 {a,a′} 的理想无法双射），
    单点像的满射性，余单点划分的截面，全部划分的全性；
    n <= recheck_max_n 时用完整的局部同构检查复核 Γ_θ 与 Δ_θ。
    """
    check_guard(n, max_n if max_n is not None else Config.CROSSCONN_MAX_SEARCH_N, "cross-connection search")
    recheck_max_n = recheck_max_n if recheck_max_n is not None else Config.CROSSCONN_RECHECK_MAX_N
    subsets = enumerate_subsets(n)
    partitions = enumerate_partitions(n)
    report = CrossConnectionSearch(n)

    for images in product(range(1, n + 1), repeat=n):
        report.candidates += 1
        f = Transformation(images)
        delta = delta_by_images(f, subsets)
        filters = (
            ('order', lambda: order_problem(f, subsets, delta)),
            ('surjective', lambda: surjectivity_problem(f, n)),
            ('co-singleton', lambda: co_singleton_problem(f, n, subsets, delta)),
            ('total', lambda: totality_problem(f, subsets, partitions, delta)),
        )
        problem = None
        for key, check in filters:
            problem = check()
            if problem:
                report.rejected[key] += 1
                logger.debug(f"f={f} 被排除 ({key}): {problem}")
                break
        if problem:
            continue
        theta = Permutation(images)
        if n <= recheck_max_n:
            if not is_local_isomorphism(gamma_functor(theta), n) or not is_local_isomorphism(delta_functor(theta), n):
                report.rejected['recheck'] += 1
                logger.warning(f"θ={theta} 通过了传播检查但不是局部同构")
                continue
        report.found.append(theta)
    logger.info(f"n={n} 交叉连接搜索：{report.candidates} 个赋值，"
                f"排除 {dict(report.rejected)}，存活 {len(report.found)} 个置换")
    return report


def enumerate_cross_connections(n, max_n=None, recheck_max_n=None):
    """返回全部存活的 θ（字典序）。"""
    return search_cross_connections(n, max_n=max_n, recheck_max_n=recheck_max_n).found


def check_functoriality(theta, side='pi'):
    """Γ_θ（或 Δ_θ）保持单位与复合。"""
    n = theta.n
    category = _category(side, n)
    morphism_map = partial(gamma_morphism, theta) if side == 'pi' else partial(delta_morphism, theta)
    object_map = partial(gamma_object, theta) if side == 'pi' else partial(delta_object, theta)
    compose_fn = compose_pi if side == 'pi' else compose_p
    errors = []
    for c in category.objects:
        if morphism_map(_identity(side, c)) != _identity(side, object_map(c)):
            errors.append(f"identity at {c} is not preserved")
    for c1 in category.objects:
        for c2 in category.objects:
            for m1 in category.hom(c1, c2):
                for c3 in category.objects:
                    for m2 in category.hom(c2, c3):
                        if morphism_map(compose_fn(m1, m2)) != compose_fn(morphism_map(m1), morphism_map(m2)):
                            errors.append(f"composite of {m1} and {m2} is not preserved")
                            return not errors, errors
    return not errors, errors

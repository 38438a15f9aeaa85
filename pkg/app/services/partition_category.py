import logging
import re
from dataclasses import dataclass
from itertools import product

from config import Config
from app.errors import InvalidObjectError, MorphismError, check_guard
from app.models import SetPartition, same_ground
from app.services.foundation import enumerate_partitions, refines

logger = logging.getLogger(__name__)

# Π(X) 的对象 π̄ 直接用其底层划分 π 表示
PartitionObject = SetPartition

_LITERAL = re.compile(r"^\s*\w*\s*:?\s*([0-9|]+)\s*->\s*([0-9|]+)\s*\[([^\]]*)\]\s*$")


@dataclass(frozen=True)
class BlockMapMorphism:
    """
    Π(X) 中的态射 η*: π̄1 → π̄2。
    eta 是块映射 η: π2 → π1，eta[j] 为 π2 的第 j 块所对应的 π1 块编号。
    方向反转是内在的：(α)η* = ηα。
    """
    dom: SetPartition
    cod: SetPartition
    eta: tuple

    def __post_init__(self):
        same_ground(self.dom, self.cod)
        if len(self.eta) != self.cod.num_blocks:
            raise MorphismError(f"block map needs {self.cod.num_blocks} entries, got {len(self.eta)}")
        for index in self.eta:
            if not 0 <= index < self.dom.num_blocks:
                raise MorphismError(f"block index {index} is outside {self.dom}")

    @classmethod
    def parse(cls, text):
        """字面量 "eta: π2 -> π1 [i,j,...]"：先写块映射的源划分。"""
        match = _LITERAL.match(text)
        if not match:
            raise InvalidObjectError(f"bad block-map literal {text!r}")
        source = SetPartition.parse(match.group(1))
        target = SetPartition.parse(match.group(2))
        try:
            eta = tuple(int(part) for part in match.group(3).split(','))
        except ValueError:
            raise InvalidObjectError(f"bad block indices in {text!r}") from None
        return cls(dom=target, cod=source, eta=eta)

    @property
    def n(self):
        return self.dom.n

    def image_block(self, x):
        """η([x]_{π2})，以元素元组返回。"""
        return self.dom.blocks[self.eta[self.cod.block_index(x)]]

    def __str__(self):
        return f"eta: {self.cod} -> {self.dom} [{','.join(str(i) for i in self.eta)}]"


@dataclass(frozen=True)
class NormalFactorizationPi:
    """η* = ζ* u* ν*，以及见证划分 σ_η 与 γ_η。"""
    zeta_star: BlockMapMorphism
    u_star: BlockMapMorphism
    nu_star: BlockMapMorphism
    sigma: SetPartition
    gamma: SetPartition

    @property
    def epi(self):
        return compose_pi(self.zeta_star, self.u_star)

    @property
    def composite(self):
        return compose_pi(self.epi, self.nu_star)


def identity_pi(pi):
    return BlockMapMorphism(pi, pi, tuple(range(pi.num_blocks)))


def compose_pi(m1, m2):
    """
    m1: π̄1 → π̄2 之后接 m2: π̄2 → π̄3。
    块映射逆变地复合：π3 → π2 → π1，即 (α)(η*μ*) = (μη)α。
    """
    if m1.cod != m2.dom:
        raise MorphismError(f"cannot compose {m1} with {m2}: objects {m1.cod} and {m2.dom} differ")
    return BlockMapMorphism(m1.dom, m2.cod, tuple(m1.eta[j] for j in m2.eta))


def is_isomorphism_pi(m):
    return m.dom.num_blocks == m.cod.num_blocks and len(set(m.eta)) == m.dom.num_blocks


def leq_pi(pi1, pi2):
    """π̄1 ≤ π̄2 当且仅当 π2 细化 π1。"""
    return refines(pi2, pi1)


def inclusion_pi(pi1, pi2):
    """包含 ν*: π̄1 → π̄2，ν 把 π2 的每块送到包含它的 π1 块。"""
    if not leq_pi(pi1, pi2):
        raise MorphismError(f"{pi1} is not below {pi2}: {pi2} does not refine {pi1}")
    return BlockMapMorphism(pi1, pi2, tuple(pi1.block_index(block[0]) for block in pi2.blocks))


def retraction_pi(pi2, pi1):
    """收缩 ζ*: π̄2 → π̄1，ζ 把 π1 的块 A_i 送到包含 min(A_i) 的 π2 块。"""
    if not leq_pi(pi1, pi2):
        raise MorphismError(f"{pi1} is not below {pi2}: {pi2} does not refine {pi1}")
    return BlockMapMorphism(pi2, pi1, tuple(pi2.block_index(block[0]) for block in pi1.blocks))


def is_inclusion_pi(m):
    return leq_pi(m.dom, m.cod) and m == inclusion_pi(m.dom, m.cod)


def evaluate_pi(m, alpha):
    """
    在函数集 π̄1 上求值：alpha 是 π1 各块到 X 的取值元组，返回 ηα（π2 各块的取值）。
    只用作小规模测试的外延判据。
    """
    return tuple(alpha[index] for index in m.eta)


def function_set(pi):
    """π̄：从 π 的块到 X 的全部函数。"""
    return list(product(range(1, pi.n + 1), repeat=pi.num_blocks))


def normal_factorize_pi(m):
    """
    η*: π̄1 → π̄2 的正规分解。
    σ 合并 η 像相同的 π2 块；B 为不在 Im η 中的 π1 块之并；
    A_1 取 Im η 中最小元最小的块；γ = {B ∪ A_1} ∪ 其余像块。
    """
    pi1, pi2, eta = m.dom, m.cod, m.eta
    n = m.n

    sigma = SetPartition.from_labels([eta[pi2.block_index(x)] for x in range(1, n + 1)])

    used = sorted(set(eta))
    first = min(used, key=lambda index: pi1.blocks[index][0])
    # B 的元素并入 A_1 所在的块
    gamma = SetPartition.from_labels([
        label if label in used else first
        for label in pi1.block_of
    ])

    nu_star = inclusion_pi(sigma, pi2)
    # u: σ → γ，[x]_σ ↦ γ 中包含 η([x]_{π2}) 的块
    u_eta = []
    for block in sigma.blocks:
        image_block = pi1.blocks[eta[pi2.block_index(block[0])]]
        u_eta.append(gamma.block_index(image_block[0]))
    u_star = BlockMapMorphism(gamma, sigma, tuple(u_eta))
    # ζ: γ → π1，B ∪ A_1 ↦ A_1，其余块不变
    zeta = []
    for block in gamma.blocks:
        labels = {pi1.block_index(x) for x in block}
        zeta.append(first if first in labels else labels.pop())
    zeta_star = BlockMapMorphism(pi1, gamma, tuple(zeta))

    return NormalFactorizationPi(
        zeta_star=zeta_star, u_star=u_star, nu_star=nu_star, sigma=sigma, gamma=gamma
    )


class PartitionCategory:
    """具体的正规范畴 Π(X)。"""
    def __init__(self, n):
        self.n = n
        self.objects = enumerate_partitions(n)

    def hom(self, pi1, pi2):
        for eta in product(range(pi1.num_blocks), repeat=pi2.num_blocks):
            yield BlockMapMorphism(pi1, pi2, eta)

    def leq(self, pi1, pi2):
        return leq_pi(pi1, pi2)

    def inclusion(self, pi1, pi2):
        return inclusion_pi(pi1, pi2)

    def identity(self, pi):
        return identity_pi(pi)

    def compose(self, m1, m2):
        return compose_pi(m1, m2)

    def dom(self, m):
        return m.dom

    def cod(self, m):
        return m.cod

    def morphisms(self):
        for pi1 in self.objects:
            for pi2 in self.objects:
                yield from self.hom(pi1, pi2)


def _check_factorization(m, errors):
    factorization = normal_factorize_pi(m)
    if factorization.composite != m:
        errors.append(f"Factorization of {m} does not recompose")
    elif not refines(m.cod, factorization.sigma) or not refines(m.dom, factorization.gamma):
        errors.append(f"Witness partitions of {m} do not coarsen π2 and π1")
    elif not is_isomorphism_pi(factorization.u_star):
        errors.append(f"u of {m} is not a bijection of blocks")
    elif not is_inclusion_pi(factorization.nu_star):
        errors.append(f"ν* of {m} is not an inclusion")
    elif compose_pi(inclusion_pi(factorization.gamma, m.dom), factorization.zeta_star) != identity_pi(factorization.gamma):
        errors.append(f"ζ* of {m} is not a retraction")


def verify_normal_category_pi(n, max_n=None):
    """
    穷举检查 Π(X) 是正规范畴：全部态射可正规分解，包含都可分裂，幂等锥在顶点处为单位。
    """
    from app.services.cones import cone_component_pi, idempotent_cone_pi

    check_guard(n, max_n if max_n is not None else Config.CROSSCONN_MAX_TABLE_N, "Π(X) normal-category check")
    category = PartitionCategory(n)
    errors = []
    checked = 0
    for m in category.morphisms():
        _check_factorization(m, errors)
        checked += 1
        if errors:
            break

    for pi1 in category.objects:
        for pi2 in category.objects:
            if leq_pi(pi1, pi2):
                if compose_pi(inclusion_pi(pi1, pi2), retraction_pi(pi2, pi1)) != identity_pi(pi1):
                    errors.append(f"Inclusion {pi1} -> {pi2} does not split through its retraction")

    for pi in category.objects:
        cone = idempotent_cone_pi(pi)
        if cone_component_pi(cone, pi) != identity_pi(pi):
            errors.append(f"Idempotent cone at {pi} has a non-identity component at its vertex")

    logger.info(f"Π({n}) 正规范畴检查：{checked} 个态射，{len(errors)} 个违例")
    if errors:
        logger.warning(f"Π({n}) 检查失败: {errors[0]}")
    return not errors, errors

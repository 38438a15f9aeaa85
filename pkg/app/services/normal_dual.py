"""
正规对偶：H-函子、自然变换以及对偶同构 P、Q、R。

𝒫(X) 一侧的 H(e;−) 只依赖于 π_e，所以按核划分作键；
Π(X) 一侧的 H(e;−) 只依赖于 Im e，按像作键。
"""
import logging
import re
from dataclasses import dataclass
from itertools import product

from config import Config
from app.errors import InvalidObjectError, MorphismError, check_guard
from app.models import SetPartition, SubsetObject, Transformation, same_ground
from app.services.foundation import (compose, enumerate_partitions, enumerate_sing,
                                     enumerate_subsets, refines)
from app.services.partition_category import (BlockMapMorphism, PartitionCategory,
                                             compose_pi, leq_pi)
from app.services.powerset_category import PowersetCategory, SetFunction

logger = logging.getLogger(__name__)

_H_LITERAL = re.compile(r"^\s*H\[(ker|im)=([^\]]+)\]\s*$")


@dataclass(frozen=True)
class HFunctorP:
    """𝒫(X) 上的 H(e;−)，由 π_e 完全确定。"""
    kernel: SetPartition

    @property
    def n(self):
        return self.kernel.n

    def __str__(self):
        return f"H[ker={self.kernel}]"


@dataclass(frozen=True)
class HFunctorPi:
    """Π(X) 上的 H(e;−)，由 Im e 完全确定。"""
    image: SubsetObject

    @property
    def n(self):
        return self.image.n

    def __str__(self):
        return f"H[im={self.image}]"


def parse_h_functor(text, n=None):
    match = _H_LITERAL.match(text)
    if not match:
        raise InvalidObjectError(f"bad H-functor literal {text!r}")
    kind, body = match.groups()
    if kind == 'ker':
        kernel = SetPartition.parse(body)
        if n is not None and kernel.n != n:
            raise InvalidObjectError(f"{text!r} is not over n={n}")
        return HFunctorP(kernel)
    if n is None:
        raise InvalidObjectError("n is required to parse an image-keyed H-functor")
    return HFunctorPi(SubsetObject.parse(body, n))


def _require_idempotent(e):
    if not e.is_singular or compose(e, e) != e:
        raise InvalidObjectError(f"{e} is not a singular idempotent")


def h_functor_of(e):
    _require_idempotent(e)
    return HFunctorP(e.kernel)


def h_functor_pi_of(e):
    _require_idempotent(e)
    return HFunctorPi(e.image)


def canonical_idempotent_p(h):
    """核为 π、像为各块最小元的幂等元。"""
    pi = h.kernel
    return Transformation(tuple(pi.minima[pi.block_index(x)] for x in range(1, pi.n + 1)))


def canonical_idempotent_pi(h):
    """固定 A 中的点、其余点送到 min(A) 的幂等元。"""
    image = h.image
    return Transformation(tuple(x if x in image else image.minimum for x in range(1, image.n + 1)))


def h_set(h, subset, roster=None):
    """H(e;A) = {a ∈ Sing(X) : π_e ⊆ π_a, Im a ⊆ A}。"""
    same_ground(h.kernel, subset)
    roster = roster if roster is not None else enumerate_sing(h.n)
    return [a for a in roster if a.image.issubset(subset) and refines(h.kernel, a.kernel)]


def h_set_by_composition(h, subset):
    """H(e;A) = {e·f : f: Im e → A}，作为 h_set 的对照。"""
    e = canonical_idempotent_p(h)
    image = e.image.members
    found = set()
    for values in product(subset.members, repeat=len(image)):
        f = dict(zip(image, values))
        found.add(Transformation(tuple(f[e(x)] for x in range(1, h.n + 1))))
    return found


def h_map(h, g, subset=None):
    """H(e;g): H(e;A) → H(e;B)，a ↦ a·g。"""
    if subset is not None and subset != g.dom:
        raise MorphismError(f"{g} does not start at {subset}")
    values = g.as_dict()
    return {
        a: Transformation(tuple(values[a(x)] for x in range(1, h.n + 1)))
        for a in h_set(h, g.dom)
    }


@dataclass(frozen=True)
class NatTransformP:
    """
    H(e;−) → H(f;−) 的自然变换，由唯一的 w ∈ f·Sing(X)·e 给出，分量为 a ↦ w·a。
    """
    source: HFunctorP
    target: HFunctorP
    w: Transformation

    def __post_init__(self):
        same_ground(self.source.kernel, self.target.kernel, self.w)
        minima = set(self.source.kernel.minima)
        if not set(self.w.images) <= minima:
            raise MorphismError(f"w={self.w} leaves the image {sorted(minima)} of the source idempotent")
        if not refines(self.target.kernel, self.w.kernel):
            raise MorphismError(f"w={self.w} is not constant on the blocks of {self.target.kernel}")

    def __str__(self):
        return f"{self.source} => {self.target} [w={self.w}]"


def nat_apply(t, subset, a):
    if not (a.image.issubset(subset) and refines(t.source.kernel, a.kernel)):
        raise MorphismError(f"{a} is not in {t.source}({subset})")
    return compose(t.w, a)


def compose_nat(t1, t2):
    if t1.target != t2.source:
        raise MorphismError(f"cannot compose {t1} with {t2}")
    return NatTransformP(t1.source, t2.target, compose(t2.w, t1.w))


def identity_nat(h):
    return NatTransformP(h, h, canonical_idempotent_p(h))


def nat_transforms_p(source, target):
    """H(e;−) → H(f;−) 的全部自然变换，按 w 的字典序。"""
    minima = source.kernel.minima
    blocks = target.kernel.blocks
    found = []
    for values in product(minima, repeat=len(blocks)):
        images = [0] * source.n
        for block, value in zip(blocks, values):
            for x in block:
                images[x - 1] = value
        found.append(NatTransformP(source, target, Transformation(tuple(images))))
    return found


def h_set_pi(h, pi, roster=None):
    """Π 侧：{a ∈ Sing(X) : Im a ⊆ A, π ⊆ π_a}。"""
    same_ground(h.image, pi)
    roster = roster if roster is not None else enumerate_sing(h.n)
    return [a for a in roster if a.image.issubset(h.image) and refines(pi, a.kernel)]


def h_map_pi(h, m):
    """沿 η*: π̄1 → π̄2 作用：a ↦ ηa，在块代表元上求值。"""
    return {
        a: Transformation(tuple(a(m.image_block(x)[0]) for x in range(1, h.n + 1)))
        for a in h_set_pi(h, m.dom)
    }


@dataclass(frozen=True)
class NatTransformPi:
    """Π 侧的自然变换，w ∈ e·Sing(X)·f，分量为 a ↦ a·w。"""
    source: HFunctorPi
    target: HFunctorPi
    w: Transformation

    def __post_init__(self):
        same_ground(self.source.image, self.target.image, self.w)
        if not self.w.image.issubset(self.target.image):
            raise MorphismError(f"w={self.w} leaves {self.target.image}")
        low = self.source.image.minimum
        if any(self.w(x) != self.w(low) for x in range(1, self.w.n + 1) if x not in self.source.image):
            raise MorphismError(f"w={self.w} is not constant on the complement of {self.source.image} and its minimum")

    def __str__(self):
        return f"{self.source} => {self.target} [w={self.w}]"


def nat_apply_pi(t, pi, a):
    if not (a.image.issubset(t.source.image) and refines(pi, a.kernel)):
        raise MorphismError(f"{a} is not in {t.source}({pi})")
    return compose(a, t.w)


def nat_transforms_pi(source, target):
    return [functor_R_inverse(g) for g in PowersetCategory(source.n).hom(source.image, target.image)]


def functor_P(h):
    return h.kernel


def functor_Q(pi):
    return HFunctorP(pi)


def functor_R(h):
    return h.image


def functor_R_inverse_object(subset):
    return HFunctorPi(subset)


def functor_P_morphism(t):
    """σ ↦ w*：π_f 的块 [x] 送到 π_e 中包含 w(x) 的块。"""
    source, target = t.source.kernel, t.target.kernel
    return BlockMapMorphism(source, target, tuple(source.block_index(t.w(block[0])) for block in target.blocks))


def functor_Q_morphism(m):
    """η* ↦ w，w(x) 取 η([x]) 的最小元。"""
    images = tuple(m.image_block(x)[0] for x in range(1, m.n + 1))
    return NatTransformP(HFunctorP(m.dom), HFunctorP(m.cod), Transformation(images))


def functor_R_morphism(t):
    """σ ↦ w|Im e。"""
    image = t.source.image
    return SetFunction(image, t.target.image, tuple(t.w(x) for x in image.members))


def functor_R_inverse(g):
    """g: A → B ↦ w = e·g，e 为像为 A 的规范幂等元。"""
    e = canonical_idempotent_pi(HFunctorPi(g.dom))
    w = Transformation(tuple(g(e(x)) for x in range(1, g.n + 1)))
    return NatTransformPi(HFunctorPi(g.dom), HFunctorPi(g.cod), w)


def _check_powerset_dual(n, roster, errors):
    partitions = enumerate_partitions(n)
    subsets = enumerate_subsets(n)
    functors = [functor_Q(pi) for pi in partitions]
    sets = {(h, s): set(h_set(h, s, roster)) for h in functors for s in subsets}

    for pi in partitions:
        if functor_P(functor_Q(pi)) != pi:
            errors.append(f"P(Q({pi})) differs from {pi}")
    for h in functors:
        if functor_Q(functor_P(h)) != h:
            errors.append(f"Q(P({h})) differs from {h}")

    category = PartitionCategory(n)
    for h1 in functors:
        for h2 in functors:
            contained = all(sets[(h1, s)] <= sets[(h2, s)] for s in subsets)
            if contained != leq_pi(functor_P(h1), functor_P(h2)):
                errors.append(f"P does not preserve the order between {h1} and {h2}")
            transforms = nat_transforms_p(h1, h2)
            images = [functor_P_morphism(t) for t in transforms]
            if set(images) != set(category.hom(h1.kernel, h2.kernel)) or len(set(images)) != len(images):
                errors.append(f"P is not bijective on natural transformations {h1} => {h2}")
            for t, m in zip(transforms, images):
                if functor_Q_morphism(m) != t:
                    errors.append(f"Q(P(σ)) differs from σ for {t}")
                # w 由单位元处的分量唯一确定
                e = canonical_idempotent_p(h1)
                if nat_apply(t, e.image, e) != t.w:
                    errors.append(f"{t} is not determined by its component at the idempotent")
            if errors:
                return

    if n <= 3:
        for h1 in functors:
            for h2 in functors:
                for h3 in functors:
                    for t1 in nat_transforms_p(h1, h2):
                        for t2 in nat_transforms_p(h2, h3):
                            if functor_P_morphism(compose_nat(t1, t2)) != compose_pi(functor_P_morphism(t1), functor_P_morphism(t2)):
                                errors.append(f"P does not preserve the composite of {t1} and {t2}")
                                return


def _check_partition_dual(n, roster, errors):
    partitions = enumerate_partitions(n)
    subsets = enumerate_subsets(n)
    functors = [functor_R_inverse_object(s) for s in subsets]
    sets = {(h, pi): set(h_set_pi(h, pi, roster)) for h in functors for pi in partitions}
    category = PowersetCategory(n)

    for h1 in functors:
        if functor_R_inverse_object(functor_R(h1)) != h1:
            errors.append(f"R is not invertible at {h1}")
        for h2 in functors:
            contained = all(sets[(h1, pi)] <= sets[(h2, pi)] for pi in partitions)
            if contained != functor_R(h1).issubset(functor_R(h2)):
                errors.append(f"R does not preserve the order between {h1} and {h2}")
            transforms = nat_transforms_pi(h1, h2)
            images = [functor_R_morphism(t) for t in transforms]
            if set(images) != set(category.hom(h1.image, h2.image)) or len(set(images)) != len(images):
                errors.append(f"R is not bijective on natural transformations {h1} => {h2}")
            if errors:
                return


def _run_dual_check(check, n, max_n, what):
    check_guard(n, max_n if max_n is not None else Config.CROSSCONN_MAX_TABLE_N, what)
    errors = []
    check(n, enumerate_sing(n), errors)
    logger.info(f"n={n} {what}完成，{len(errors)} 个违例")
    if errors:
        logger.warning(f"{what}失败: {errors[0]}")
    return not errors, errors


def verify_powerset_dual(n, max_n=None):
    """P: N*𝒫(X) → Π(X) 是范畴同构。"""
    return _run_dual_check(_check_powerset_dual, n, max_n, "𝒫(X) 正规对偶检查")


def verify_partition_dual(n, max_n=None):
    """R: N*Π(X) → 𝒫(X) 是范畴同构。"""
    return _run_dual_check(_check_partition_dual, n, max_n, "Π(X) 正规对偶检查")


def verify_dual_isomorphisms(n, max_n=None):
    """
    穷举验证两个对偶同构：对象双射、保序、在每个态射集上双射。
    """
    ok_p, errors_p = verify_powerset_dual(n, max_n=max_n)
    ok_pi, errors_pi = verify_partition_dual(n, max_n=max_n)
    return ok_p and ok_pi, errors_p + errors_pi

import logging
import re
from dataclasses import dataclass
from itertools import product

from config import Config
from app.errors import InvalidObjectError, MorphismError, check_guard
from app.models import SubsetObject, same_ground
from app.services.foundation import enumerate_subsets

logger = logging.getLogger(__name__)

_LITERAL = re.compile(r"^\s*\w*\s*:?\s*(\{[^}]*\})\s*->\s*(\{[^}]*\})\s*\[([^\]]*)\]\s*$")


@dataclass(frozen=True)
class SetFunction:
    """
    𝒫(X) 中的态射 f: A → B。
    images 按 dom 的升序成员排列，相等性是外延的。
    """
    dom: SubsetObject
    cod: SubsetObject
    images: tuple

    def __post_init__(self):
        same_ground(self.dom, self.cod)
        if len(self.images) != self.dom.size:
            raise MorphismError(f"{len(self.images)} images given for a domain of size {self.dom.size}")
        for value in self.images:
            if value not in self.cod:
                raise MorphismError(f"value {value} is not in the codomain {self.cod}")

    @classmethod
    def from_mapping(cls, dom, cod, mapping):
        return cls(dom, cod, tuple(mapping[x] for x in dom.members))

    @classmethod
    def parse(cls, text, n):
        match = _LITERAL.match(text)
        if not match:
            raise InvalidObjectError(f"bad morphism literal {text!r}")
        dom = SubsetObject.parse(match.group(1), n)
        cod = SubsetObject.parse(match.group(2), n)
        try:
            images = tuple(int(part) for part in match.group(3).split(','))
        except ValueError:
            raise InvalidObjectError(f"bad image list in {text!r}") from None
        return cls(dom, cod, images)

    @property
    def n(self):
        return self.dom.n

    def __call__(self, x):
        return self.images[self.dom.members.index(x)]

    def as_dict(self):
        return dict(zip(self.dom.members, self.images))

    @property
    def image_mask(self):
        mask = 0
        for value in self.images:
            mask |= 1 << (value - 1)
        return mask

    def __str__(self):
        return f"f: {self.dom}->{self.cod} [{','.join(str(v) for v in self.images)}]"


@dataclass(frozen=True)
class NormalFactorizationP:
    """f = q;u;j：收缩、双射、包含。"""
    q: SetFunction
    u: SetFunction
    j: SetFunction

    @property
    def epi(self):
        """满态射分量 f° = q;u。"""
        return compose_p(self.q, self.u)

    @property
    def composite(self):
        return compose_p(self.epi, self.j)


def identity_p(subset):
    return SetFunction(subset, subset, subset.members)


def inclusion_p(a, b):
    """包含态射 j(A, B)。"""
    if not a.issubset(b):
        raise MorphismError(f"{a} is not a subset of {b}")
    return SetFunction(a, b, a.members)


def retraction_p(b, a):
    """B → A 的收缩：A 上恒等，B∖A 送到 min(A)。"""
    if not a.issubset(b):
        raise MorphismError(f"{a} is not a subset of {b}")
    low = a.minimum
    return SetFunction(b, a, tuple(x if x in a else low for x in b.members))


def compose_p(f, g):
    if f.cod != g.dom:
        raise MorphismError(f"cannot compose {f} with {g}: codomain {f.cod} differs from domain {g.dom}")
    lookup = g.as_dict()
    return SetFunction(f.dom, g.cod, tuple(lookup[value] for value in f.images))


def is_isomorphism_p(f):
    return f.dom.size == f.cod.size and f.image_mask == f.cod.mask


def is_inclusion_p(f):
    return f.dom.issubset(f.cod) and f.images == f.dom.members


def kernel_blocks_p(f):
    """f 在定义域上诱导的划分 π_f，块按最小元排序。"""
    blocks = {}
    for x, value in zip(f.dom.members, f.images):
        blocks.setdefault(value, []).append(x)
    return sorted((tuple(block) for block in blocks.values()), key=lambda block: block[0])


def normal_factorize_p(f, cross_section=None):
    """
    正规分解 f = q;u;j，其中 B' = Im f，A' 是 π_f 的截面。
    默认取各块的最小元作为截面；也可以传入任意截面。
    """
    blocks = kernel_blocks_p(f)
    if cross_section is None:
        representative = {x: block[0] for block in blocks for x in block}
        section = SubsetObject.from_members(f.n, (block[0] for block in blocks))
    else:
        section = cross_section
        representative = {}
        for block in blocks:
            chosen = [x for x in block if x in section]
            if len(chosen) != 1:
                raise MorphismError(f"{section} is not a cross-section of the kernel of {f}")
            for x in block:
                representative[x] = chosen[0]
        if len(representative) != section.size or not section.issubset(f.dom):
            raise MorphismError(f"{section} is not a cross-section of the kernel of {f}")

    image = SubsetObject(f.n, f.image_mask)
    q = SetFunction(f.dom, section, tuple(representative[x] for x in f.dom.members))
    values = f.as_dict()
    u = SetFunction(section, image, tuple(values[x] for x in section.members))
    return NormalFactorizationP(q=q, u=u, j=inclusion_p(image, f.cod))


class PowersetCategory:
    """
    具体的正规范畴 𝒫(X)，可选地只保留大小不超过 cap 的对象。
    """
    def __init__(self, n, cap=None):
        self.n = n
        self.cap = cap if cap is not None else n - 1
        self.objects = [s for s in enumerate_subsets(n) if s.size <= self.cap]

    def hom(self, a, b):
        for images in product(b.members, repeat=a.size):
            yield SetFunction(a, b, images)

    def leq(self, a, b):
        return a.issubset(b)

    def inclusion(self, a, b):
        return inclusion_p(a, b)

    def identity(self, a):
        return identity_p(a)

    def compose(self, f, g):
        return compose_p(f, g)

    def dom(self, f):
        return f.dom

    def cod(self, f):
        return f.cod

    def morphisms(self):
        for a in self.objects:
            for b in self.objects:
                yield from self.hom(a, b)


def _check_factorization(f, errors):
    factorization = normal_factorize_p(f)
    q, u, j = factorization.q, factorization.u, factorization.j
    if factorization.composite != f:
        errors.append(f"Factorization of {f} does not recompose")
    elif compose_p(inclusion_p(q.cod, q.dom), q) != identity_p(q.cod):
        errors.append(f"q of {f} is not a retraction")
    elif not is_isomorphism_p(u):
        errors.append(f"u of {f} is not a bijection")
    elif not is_inclusion_p(j) or j.dom.mask != f.image_mask:
        errors.append(f"j of {f} is not the inclusion of Im f")
    elif SubsetObject(f.n, factorization.epi.image_mask) != u.cod:
        errors.append(f"epimorphic component of {f} is not onto Im f")


def verify_normal_category_p(n, cap=None, max_cap=None):
    """
    穷举检查 𝒫(X) 是正规范畴：
    每个态射都有正规分解；每个包含都可分裂；每个对象都有单位分量的幂等锥。
    """
    from app.services.cones import cone_component_p, idempotent_cone_p

    max_cap = max_cap if max_cap is not None else Config.CROSSCONN_P_OBJECT_CAP
    category = PowersetCategory(n, cap)
    check_guard(category.cap, max_cap, "object size cap for the 𝒫(X) check")

    errors = []
    checked = 0
    for f in category.morphisms():
        _check_factorization(f, errors)
        checked += 1
        if errors:
            break

    for a in category.objects:
        for b in category.objects:
            if a != b and a.issubset(b):
                if compose_p(inclusion_p(a, b), retraction_p(b, a)) != identity_p(a):
                    errors.append(f"Inclusion {a} -> {b} does not split through its retraction")

    for d in category.objects:
        cone = idempotent_cone_p(d)
        if cone_component_p(cone, d) != identity_p(d):
            errors.append(f"Idempotent cone at {d} has a non-identity component at its vertex")

    logger.info(f"𝒫({n}) 正规范畴检查：{checked} 个态射，{len(errors)} 个违例")
    if errors:
        logger.warning(f"𝒫({n}) 检查失败: {errors[0]}")
    return not errors, errors


def check_subobject_axiom_p(n):
    """若 f = h;g 且 f、g 都是包含，则 h 也是包含。"""
    category = PowersetCategory(n)
    errors = []
    for c in category.objects:
        below = [x for x in category.objects if x.issubset(c)]
        for a in below:
            f = inclusion_p(a, c)
            for b in below:
                g = inclusion_p(b, c)
                for h in category.hom(a, b):
                    if compose_p(h, g) == f and not is_inclusion_p(h):
                        errors.append(f"{h} factors the inclusion {a} -> {c} but is not an inclusion")
    return not errors, errors


def check_factorization_choices_p(f):
    """π_f 的任意截面都给出一个能复合回 f 的正规分解。"""
    errors = []
    blocks = kernel_blocks_p(f)
    for choice in product(*blocks):
        section = SubsetObject.from_members(f.n, choice)
        if normal_factorize_p(f, cross_section=section).composite != f:
            errors.append(f"Cross-section {section} does not recompose {f}")
    return not errors, errors

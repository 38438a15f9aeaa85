import logging
from itertools import combinations, permutations, product
from math import factorial

from app.errors import InvalidObjectError
from app.models import (Permutation, SetPartition, SubsetObject,
                        Transformation, as_ground, same_ground)

logger = logging.getLogger(__name__)


def enumerate_sing(n):
    """
    按像序列的字典序列出 Sing(X) 的全部 n^n - n! 个元素。
    """
    ground = as_ground(n)
    elements = [
        Transformation(images)
        for images in product(ground.elements, repeat=ground.n)
        if len(set(images)) < ground.n
    ]
    logger.debug(f"Sing({ground.n}) 共 {len(elements)} 个元素")
    return elements


def sing_order(n):
    return n ** n - factorial(n)


def enumerate_subsets(n):
    """𝒫(X) 的全部对象，先按大小再按成员排序。"""
    ground = as_ground(n)
    return [
        SubsetObject.from_members(ground.n, members)
        for size in range(1, ground.n)
        for members in combinations(ground.elements, size)
    ]


def enumerate_partitions(n):
    """
    Π(X) 的全部对象（非恒等划分），按规范标签序列的字典序排列。
    数量为 Bell(n) - 1。
    """
    ground = as_ground(n)
    found = []

    def grow(labels, top):
        if len(labels) == ground.n:
            if top + 1 < ground.n:
                found.append(SetPartition(ground.n, tuple(labels)))
            return
        for label in range(top + 2):
            labels.append(label)
            grow(labels, max(top, label))
            labels.pop()

    grow([0], 0)
    return found


def enumerate_permutations(n):
    ground = as_ground(n)
    return [Permutation(images) for images in permutations(ground.elements)]


def profile(a):
    """返回 (Im a, π_a)；可逆变换没有合法的核划分。"""
    if not a.is_singular:
        raise InvalidObjectError(f"{a} is invertible; its kernel is the identity partition")
    return a.image, a.kernel


def compose(a, b):
    """从左到右的复合：x ↦ ((x)a)b。"""
    same_ground(a, b)
    images = b.images
    return Transformation(tuple(images[x - 1] for x in a.images))


def cross_sections(pi):
    """π 的全部截面（每块恰取一个元素）。"""
    return [
        SubsetObject.from_members(pi.n, choice)
        for choice in product(*pi.blocks)
    ]


def is_cross_section(subset, pi):
    same_ground(subset, pi)
    return all(bin(subset.mask & block).count('1') == 1 for block in pi.block_masks)


def refines(pi1, pi2):
    """
    pi1 的每一块都落在 pi2 的某一块中，即作为关系 pi1 ⊆ pi2。
    对应 Π(X) 中的对象顺序 π̄2 ≤ π̄1。
    """
    same_ground(pi1, pi2)
    target = {}
    for label1, label2 in zip(pi1.block_of, pi2.block_of):
        if target.setdefault(label1, label2) != label2:
            return False
    return True


def perm_image_subset(theta, subset):
    same_ground(theta, subset)
    return SubsetObject.from_members(subset.n, (theta(x) for x in subset))


def perm_preimage_partition(theta, sigma):
    """θ⁻¹(σ)：块为 {θ⁻¹(A_i)}，重新规范化。"""
    same_ground(theta, sigma)
    labels = [sigma.block_index(theta(x)) for x in range(1, sigma.n + 1)]
    return SetPartition.from_labels(labels)


def perm_image_partition(theta, pi):
    """θ(π)：块为 {θ(A_i)}。"""
    return perm_preimage_partition(theta.inverse, pi)


def conjugate(theta, a):
    """θ⁻¹·a·θ（从左到右）：x ↦ θ(a(θ⁻¹(x)))。"""
    same_ground(theta, a)
    inverse = theta.inverse
    return Transformation(tuple(theta(a(inverse(x))) for x in range(1, a.n + 1)))

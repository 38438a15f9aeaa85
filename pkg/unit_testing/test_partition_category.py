from itertools import product

import pytest

from app.errors import InvalidObjectError, MorphismError, SizeGuardError
from app.models import SetPartition
from app.services.foundation import enumerate_partitions
from app.services.partition_category import (BlockMapMorphism, PartitionCategory, compose_pi, evaluate_pi,
                                             function_set, identity_pi, inclusion_pi, is_isomorphism_pi,
                                             leq_pi, normal_factorize_pi, retraction_pi,
                                             verify_normal_category_pi)


def partition(text):
    return SetPartition.parse(text)


def as_functions(pi):
    """π̄ 作为 X 上在 π 的块上取常值的函数集合。"""
    return {tuple(alpha[pi.block_index(x)] for x in range(1, pi.n + 1)) for alpha in function_set(pi)}


def test_literal_lists_the_block_map_source_first():
    m = BlockMapMorphism.parse("eta: 12|34 -> 13|2|4 [0,0]")
    assert m.dom == partition("13|2|4")
    assert m.cod == partition("12|34")
    assert str(m) == "eta: 12|34 -> 13|2|4 [0,0]"
    assert m.image_block(3) == (1, 3)


@pytest.mark.parametrize("text", [
    "eta: 12|3 -> 13|2 [0]",
    "eta: 12|3 -> 13|2 [0,2]",
    "eta: 12|3 -> 1|2|3 [0,0]",
    "eta 12|3 13|2",
])
def test_bad_block_map_literals(text):
    with pytest.raises((InvalidObjectError, MorphismError)):
        BlockMapMorphism.parse(text)


def test_inclusion_and_retraction():
    top, below = partition("123"), partition("12|3")
    nu = inclusion_pi(top, below)
    assert nu.eta == (0, 0)
    zeta = retraction_pi(below, top)
    assert below.blocks[zeta.eta[0]] == (1, 2)
    assert compose_pi(nu, zeta) == identity_pi(top)
    assert inclusion_pi(below, below) == identity_pi(below)


def test_inclusion_requires_order():
    with pytest.raises(MorphismError):
        inclusion_pi(partition("12|3"), partition("13|2"))
    with pytest.raises(MorphismError):
        retraction_pi(partition("123"), partition("12|3"))


@pytest.mark.parametrize("n", [3, 4])
def test_order_is_reverse_refinement(n):
    """π̄ ⊆ σ̄ 当且仅当 σ 细化 π，与函数集的包含一致。"""
    objects = enumerate_partitions(n)
    for pi1, pi2 in product(objects, repeat=2):
        assert leq_pi(pi1, pi2) == (as_functions(pi1) <= as_functions(pi2))


def test_composition_matches_evaluation():
    """
    在 n=3 上用 π̄ 的函数集外延地检验块映射的逆变复合。
    """
    category = PartitionCategory(3)
    for pi1, pi2, pi3 in product(category.objects, repeat=3):
        for m1 in category.hom(pi1, pi2):
            for m2 in category.hom(pi2, pi3):
                composite = compose_pi(m1, m2)
                for alpha in function_set(pi1):
                    assert evaluate_pi(composite, alpha) == evaluate_pi(m2, evaluate_pi(m1, alpha))


def test_composition_is_associative_and_unital():
    """复合用函数集上的求值核对，并满足结合律与单位律。"""
    category = PartitionCategory(3)
    morphisms = list(category.morphisms())
    for m1 in morphisms:
        assert compose_pi(m1, identity_pi(m1.cod)) == m1
        assert compose_pi(identity_pi(m1.dom), m1) == m1
        for m2 in (m for m in morphisms if m.dom == m1.cod):
            for m3 in (m for m in morphisms if m.dom == m2.cod):
                assert compose_pi(compose_pi(m1, m2), m3) == compose_pi(m1, compose_pi(m2, m3))


def test_compose_rejects_mismatched_objects():
    m1 = identity_pi(partition("12|3"))
    m2 = identity_pi(partition("13|2"))
    with pytest.raises(MorphismError):
        compose_pi(m1, m2)


def test_factorization_of_collapsing_block_map():
    m = BlockMapMorphism.parse("eta: 12|3 -> 13|2 [0,0]")
    factorization = normal_factorize_pi(m)
    assert factorization.sigma == partition("123")
    assert factorization.gamma == partition("123")
    assert factorization.nu_star.eta == (0, 0)
    assert factorization.u_star.eta == (0,)
    assert m.dom.blocks[factorization.zeta_star.eta[0]] == (1, 3)
    assert factorization.composite == m


def test_factorization_of_isomorphism():
    m = BlockMapMorphism.parse("eta: 12|3 -> 13|2 [1,0]")
    assert is_isomorphism_pi(m)
    factorization = normal_factorize_pi(m)
    assert factorization.sigma == m.cod
    assert factorization.gamma == m.dom
    assert factorization.composite == m


def test_factorization_fuses_unused_blocks():
    """没有被命中的块在收缩部分里被合并。"""
    m = BlockMapMorphism.parse("eta: 12|34 -> 12|3|4 [0,0]")
    factorization = normal_factorize_pi(m)
    assert factorization.sigma == partition("1234")
    assert factorization.gamma == partition("1234")
    assert factorization.composite == m


def test_factorization_keeps_image_blocks_apart():
    m = BlockMapMorphism.parse("eta: 1|234 -> 12|3|4 [2,0]")
    factorization = normal_factorize_pi(m)
    assert factorization.sigma == partition("1|234")
    # 块 {3} 不在像中，并入最小元最小的像块 {1,2}
    assert factorization.gamma == partition("123|4")
    assert factorization.composite == m


@pytest.mark.parametrize("n, objects", [(2, 1), (3, 4), (4, 14)])
def test_normal_category_pi(n, objects):
    """穷举全部对象与态射，检查 Π(X) 是正规范畴。"""
    assert len(PartitionCategory(n).objects) == objects
    ok, errors = verify_normal_category_pi(n)
    assert ok, errors


def test_normal_category_pi_is_guarded():
    with pytest.raises(SizeGuardError):
        verify_normal_category_pi(5)

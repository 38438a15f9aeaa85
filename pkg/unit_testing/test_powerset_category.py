import pytest

from app.errors import InvalidObjectError, MorphismError, SizeGuardError
from app.models import SubsetObject
from app.services.powerset_category import (PowersetCategory, SetFunction, check_factorization_choices_p,
                                            check_subobject_axiom_p, compose_p, identity_p, inclusion_p,
                                            is_inclusion_p, is_isomorphism_p, normal_factorize_p, retraction_p,
                                            verify_normal_category_p)


def subset(text, n=3):
    return SubsetObject.parse(text, n)


def test_inclusion_and_retraction():
    assert inclusion_p(subset("{1}"), subset("{1,2}")).as_dict() == {1: 1}
    assert retraction_p(subset("{1,2}", 4), subset("{1,2}", 4)) == identity_p(subset("{1,2}", 4))

    q = retraction_p(SubsetObject.parse("{1,2,3}", 4), SubsetObject.parse("{1,3}", 4))
    assert q.as_dict() == {1: 1, 2: 1, 3: 3}
    a, b = SubsetObject.parse("{1,3}", 4), SubsetObject.parse("{1,2,3}", 4)
    assert compose_p(inclusion_p(a, b), q) == identity_p(a)


def test_inclusion_requires_subset():
    with pytest.raises(MorphismError):
        inclusion_p(subset("{1,2}"), subset("{2,3}"))
    with pytest.raises(MorphismError):
        retraction_p(subset("{2,3}"), subset("{1}"))


def test_factorization_collapses_kernel_blocks():
    f = SetFunction.parse("f: {1,2,3}->{1,2,4} [1,1,4]", 4)
    factorization = normal_factorize_p(f)
    assert factorization.q.as_dict() == {1: 1, 2: 1, 3: 3}
    assert factorization.u.as_dict() == {1: 1, 3: 4}
    assert factorization.j.dom == SubsetObject.parse("{1,4}", 4)
    assert is_inclusion_p(factorization.j)
    assert factorization.composite == f


def test_factorization_of_bijection():
    f = SetFunction.parse("f: {1,2}->{2,3} [2,3]", 3)
    factorization = normal_factorize_p(f)
    assert factorization.q == identity_p(subset("{1,2}"))
    assert factorization.u == f
    assert factorization.j == identity_p(subset("{2,3}"))
    assert is_isomorphism_p(f)


def test_factorization_of_constant_map():
    f = SetFunction.parse("f: {1,2,3}->{1,2} [2,2,2]", 4)
    factorization = normal_factorize_p(f)
    assert factorization.q.cod == SubsetObject.parse("{1}", 4)
    assert set(factorization.q.images) == {1}
    assert factorization.u.as_dict() == {1: 2}
    assert factorization.j.dom == SubsetObject.parse("{2}", 4)
    assert factorization.composite == f
    # 满态射分量的像就是 Im f
    assert factorization.epi.image_mask == f.image_mask


def test_every_cross_section_recomposes():
    """π_f 的每种截面选法都能重新复合出 f。"""
    f = SetFunction.parse("f: {1,2,3}->{1,2,4} [1,1,4]", 4)
    ok, errors = check_factorization_choices_p(f)
    assert ok, errors

    with pytest.raises(MorphismError):
        normal_factorize_p(f, cross_section=SubsetObject.parse("{1,2}", 4))


@pytest.mark.parametrize("n, cap", [(2, None), (3, None), (4, 3)])
def test_normal_category_p(n, cap):
    """穷举对象大小不超过上限的部分，检查 𝒫(X) 是正规范畴。"""
    ok, errors = verify_normal_category_p(n, cap=cap)
    assert ok, errors


def test_object_cap_is_guarded():
    with pytest.raises(SizeGuardError):
        verify_normal_category_p(5, cap=4)


def test_subobject_axiom():
    """f = h;g 且 f、g 都是包含时，h 也是包含。"""
    ok, errors = check_subobject_axiom_p(3)
    assert ok, errors


def test_hom_sizes():
    category = PowersetCategory(3)
    assert len(category.objects) == 6
    assert len(list(category.hom(subset("{1,2}"), subset("{1,3}")))) == 4
    # 单点到单点 9，单点到二元集 18，二元集到单点 9，二元集之间 36
    assert sum(1 for _ in category.morphisms()) == 72


def test_compose_rejects_mismatched_objects():
    f = SetFunction.parse("f: {1}->{1,2} [2]", 3)
    g = SetFunction.parse("g: {2,3}->{1} [1,1]", 3)
    with pytest.raises(MorphismError):
        compose_p(f, g)


@pytest.mark.parametrize("text", [
    "f: {1,2}->{3} [1,3]",
    "f: {1,2}->{3} [3]",
    "f {1,2} -> [3]",
    "f: {1,2}->{3} [a,3]",
])
def test_bad_morphism_literals(text):
    with pytest.raises((InvalidObjectError, MorphismError)):
        SetFunction.parse(text, 3)

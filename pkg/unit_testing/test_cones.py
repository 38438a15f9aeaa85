import pytest

from app.errors import InvalidObjectError, MorphismError, SizeGuardError
from app.models import SetPartition, SubsetObject, Transformation
from app.services.cones import (ConeP, ConePi, build_TP, build_TPi, check_cone_axiom, check_mset,
                                co_singleton_objects, cone_component_p, cone_component_pi,
                                cone_compose_family_p, cone_compose_family_pi, cone_compose_p, cone_compose_pi,
                                cone_from_components_p, cone_from_components_pi, idempotent_cone_p,
                                idempotent_cone_pi, mset, singleton_objects,
                                verify_partition_cones_anti_iso, verify_powerset_cones_iso)
from app.services.foundation import compose, enumerate_partitions, enumerate_subsets
from app.services.partition_category import identity_pi
from app.services.powerset_category import identity_p, is_isomorphism_p


def test_component_is_restriction():
    rho = ConeP.parse("rho:1,1,2")
    component = cone_component_p(rho, SubsetObject.parse("{2,3}", 3))
    assert component.as_dict() == {2: 1, 3: 2}
    assert component.cod == SubsetObject.parse("{1,2}", 3)
    assert is_isomorphism_p(cone_component_p(rho, SubsetObject.parse("{1,3}", 3)))


def test_idempotent_component_at_vertex_is_identity():
    sigma = ConePi.parse("sigma:1,1,3")
    assert sigma.vertex == SetPartition.parse("12|3")
    assert cone_component_pi(sigma, sigma.vertex) == identity_pi(sigma.vertex)


def test_invertible_map_is_not_a_cone():
    with pytest.raises(InvalidObjectError):
        ConeP.parse("rho:2,3,1")
    with pytest.raises(InvalidObjectError):
        ConePi.parse("rho:1,1,2")


def test_cone_products_follow_composition():
    a, b = Transformation.parse("1,1,2"), Transformation.parse("2,2,3")
    assert cone_compose_p(ConeP(a), ConeP(b)) == ConeP(Transformation.parse("2,2,2"))
    assert cone_compose_pi(ConePi(a), ConePi(b)) == ConePi(Transformation.parse("1,1,2"))

    rho = idempotent_cone_p(SubsetObject.parse("{1,2}", 3))
    assert cone_compose_p(rho, rho) == rho


def test_mset_examples():
    assert {str(s) for s in mset(ConeP.parse("rho:1,1,2"))} == {"{1,3}", "{2,3}"}
    assert {str(pi) for pi in mset(ConePi.parse("sigma:1,1,2"))} == {"13|2", "1|23"}
    assert {str(s) for s in mset(ConeP.parse("rho:2,2,2"))} == {"{1}", "{2}", "{3}"}


def test_mset_matches_cross_sections(sing3):
    """对 Sing(3) 的每个元素，两侧锥的 M-集都恰好是截面族。"""
    for a in sing3:
        for cone in (ConeP(a), ConePi(a)):
            ok, errors = check_mset(cone)
            assert ok, errors


def test_idempotent_cones():
    rho = idempotent_cone_p(SubsetObject.parse("{1,2}", 3))
    assert rho.a == Transformation.parse("1,2,1")
    assert rho.is_idempotent
    assert idempotent_cone_p(SubsetObject.parse("{1}", 2)).a == Transformation.parse("1,1")

    sigma = idempotent_cone_pi(SetPartition.parse("12|3"))
    assert sigma.a == Transformation.parse("1,1,3")
    assert sigma.is_idempotent


@pytest.mark.parametrize("n", [3, 4])
def test_idempotent_cones_have_identity_at_vertex(n):
    """每个对象都是某个幂等锥的顶点，且该处分量是恒等态射。"""
    for d in enumerate_subsets(n):
        cone = idempotent_cone_p(d)
        assert cone.vertex == d
        assert cone_component_p(cone, d) == identity_p(d)
    for pi in enumerate_partitions(n):
        cone = idempotent_cone_pi(pi)
        assert cone.vertex == pi
        assert cone_component_pi(cone, pi) == identity_pi(pi)


def test_cone_axiom_holds_at_n3(sing3):
    """穷举 n = 3 的全部正规锥，检查与包含态射相容。"""
    for a in sing3:
        for cone in (ConeP(a), ConePi(a)):
            ok, errors = check_cone_axiom(cone)
            assert ok, errors


def test_components_recover_the_generator(sing3):
    """𝒫 侧只看单点处的分量，Π 侧只看余单点处的分量，都能还原 a。"""
    for a in sing3:
        rho = ConeP(a)
        family = {point: cone_component_p(rho, point) for point in singleton_objects(3)}
        assert cone_from_components_p(family) == rho

        sigma = ConePi(a)
        family = {pi: cone_component_pi(sigma, pi) for pi in co_singleton_objects(3)}
        assert cone_from_components_pi(family) == sigma


def test_recovery_needs_separating_objects():
    """Π(2) 只有一个对象，分量无法区分点。"""
    sigma = ConePi.parse("sigma:1,1")
    family = {pi: cone_component_pi(sigma, pi) for pi in enumerate_partitions(2)}
    with pytest.raises(MorphismError):
        cone_from_components_pi(family)


def test_powerset_cone_product_on_every_object(sing3):
    """
    全部 441 对 (a, b)：γ·δ 在每个对象上的分量都等于 ρ^{ab} 的分量。
    """
    objects = enumerate_subsets(3)
    for a in sing3:
        for b in sing3:
            family = cone_compose_family_p(ConeP(a), ConeP(b), objects)
            expected = ConeP(compose(a, b))
            for c, component in family.items():
                assert component == cone_component_p(expected, c)


def test_partition_cone_product_on_every_object(sing3):
    """
    全部 441 对 (a, b)：γ·δ 在所有对象上的分量都与闭式 σ^{ba} 一致，而不只是在余单点对象上。
    """
    objects = enumerate_partitions(3)
    for a in sing3:
        for b in sing3:
            family = cone_compose_family_pi(ConePi(a), ConePi(b), objects)
            expected = ConePi(compose(b, a))
            for pi, component in family.items():
                assert component == cone_component_pi(expected, pi)


@pytest.mark.parametrize("n", [2, 3, 4])
def test_powerset_cones_are_isomorphic_to_sing(n):
    """
    a ↦ ρ^a 是同构；n = 4 时穷举 53 824 对乘积，乘积经真正的正规分解计算。
    """
    ok, errors = verify_powerset_cones_iso(n)
    assert ok, errors


@pytest.mark.parametrize("n", [2, 3, pytest.param(4, marks=pytest.mark.slow)])
def test_partition_cones_are_anti_isomorphic_to_sing(n):
    """a ↦ σ^a 是反同构，两个锥半群的阶相同。"""
    assert len(build_TP(n)) == len(build_TPi(n))
    ok, errors = verify_partition_cones_anti_iso(n)
    assert ok, errors


def test_n2_tables_are_zero_semigroups():
    assert build_TP(2).table.tolist() == [[0, 1], [0, 1]]
    assert build_TPi(2).table.tolist() == [[0, 0], [1, 1]]


def test_cone_tables_are_guarded():
    with pytest.raises(SizeGuardError):
        build_TP(5)
    with pytest.raises(SizeGuardError):
        build_TPi(5)

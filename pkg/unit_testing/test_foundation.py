import pytest
from hypothesis import given, strategies as st

from app.errors import GroundSetMismatchError, InvalidObjectError
from app.models import GroundSet, Permutation, SetPartition, SubsetObject, Transformation
from app.services.foundation import (compose, conjugate, cross_sections, enumerate_partitions,
                                     enumerate_permutations, enumerate_sing, enumerate_subsets,
                                     is_cross_section, perm_image_partition, perm_image_subset,
                                     perm_preimage_partition, profile, refines, sing_order)


@st.composite
def singular_pairs(draw):
    """同一基集上的两个奇异变换和一个置换。"""
    n = draw(st.integers(min_value=2, max_value=6))
    images = st.lists(st.integers(min_value=1, max_value=n), min_size=n, max_size=n)
    a = draw(images.filter(lambda values: len(set(values)) < n))
    b = draw(images)
    theta = draw(st.permutations(list(range(1, n + 1))))
    return Transformation(tuple(a)), Transformation(tuple(b)), Permutation(tuple(theta))


@pytest.mark.parametrize("n, expected", [(2, 2), (3, 21), (4, 232), (5, 3005)])
def test_sing_cardinality(n, expected):
    assert sing_order(n) == expected
    assert len(enumerate_sing(n)) == expected


def test_sing_is_lexicographic_and_singular():
    elements = enumerate_sing(3)
    assert elements[0] == Transformation((1, 1, 1))
    assert elements[-1] == Transformation((3, 3, 3))
    assert [a.images for a in elements] == sorted(a.images for a in elements)
    assert all(a.is_singular for a in elements)
    assert [str(a) for a in enumerate_sing(2)] == ["1,1", "2,2"]


@pytest.mark.parametrize("n, expected", [(2, 1), (3, 4), (4, 14), (5, 51)])
def test_partition_count_is_bell_minus_one(n, expected):
    """非恒等划分共 Bell(n) - 1 个。"""
    partitions = enumerate_partitions(n)
    assert len(partitions) == expected
    assert len(set(partitions)) == expected


def test_subsets_in_canonical_order():
    assert [str(s) for s in enumerate_subsets(3)] == ["{1}", "{2}", "{3}", "{1,2}", "{1,3}", "{2,3}"]


def test_permutations():
    perms = enumerate_permutations(3)
    assert len(perms) == 6
    assert perms[0].is_identity


def test_profile():
    image, kernel = profile(Transformation.parse("1,1,2"))
    assert image == SubsetObject.parse("{1,2}", 3)
    assert kernel == SetPartition.parse("12|3")

    image, kernel = profile(Transformation.parse("2,2,2"))
    assert image == SubsetObject.parse("{2}", 3)
    assert str(kernel) == "123"


def test_profile_rejects_invertible():
    with pytest.raises(InvalidObjectError):
        profile(Transformation.parse("2,3,1"))


def test_cross_sections():
    assert {str(s) for s in cross_sections(SetPartition.parse("12|3"))} == {"{1,3}", "{2,3}"}
    assert {str(s) for s in cross_sections(SetPartition.parse("123"))} == {"{1}", "{2}", "{3}"}
    assert is_cross_section(SubsetObject.parse("{1,2}", 3), SetPartition.parse("13|2"))
    assert not is_cross_section(SubsetObject.parse("{1,2}", 3), SetPartition.parse("12|3"))


def test_refines():
    assert refines(SetPartition.parse("12|3|4"), SetPartition.parse("12|34"))
    assert refines(SetPartition.parse("12|34"), SetPartition.parse("1234"))
    assert not refines(SetPartition.parse("12|34"), SetPartition.parse("13|24"))
    assert refines(SetPartition.parse("13|2"), SetPartition.parse("13|2"))


def test_permutation_actions():
    theta = Permutation.parse("2,3,1")
    assert perm_preimage_partition(theta, SetPartition.parse("12|3")) == SetPartition.parse("13|2")
    assert perm_image_subset(theta, SubsetObject.parse("{1,2}", 3)) == SubsetObject.parse("{2,3}", 3)
    assert conjugate(theta, Transformation.parse("1,1,2")) == Transformation.parse("3,2,2")
    assert theta.inverse == Permutation.parse("3,1,2")


def test_identity_permutation_acts_trivially():
    identity = Permutation.identity(3)
    for a in enumerate_sing(3):
        assert conjugate(identity, a) == a
    for pi in enumerate_partitions(3):
        assert perm_preimage_partition(identity, pi) == pi


def test_compose_is_left_to_right():
    a = Transformation.parse("1,1,2")
    b = Transformation.parse("2,2,3")
    assert compose(a, b) == Transformation.parse("2,2,2")
    assert compose(b, a) == Transformation.parse("1,1,2")


def test_literals():
    assert str(SetPartition.parse("2|13")) == "13|2"
    assert SetPartition.parse("1|23").block_of == (0, 1, 1)
    assert str(SubsetObject.parse("{3,1}", 3)) == "{1,3}"
    assert SubsetObject.parse("{1,3}", 3).mask == 0b101


@pytest.mark.parametrize("parse", [
    lambda: SetPartition.parse("1|2|3"),
    lambda: SetPartition.parse("12||3"),
    lambda: SubsetObject.parse("{1,2,3}", 3),
    lambda: SubsetObject.parse("{}", 3),
    lambda: SubsetObject.parse("{4}", 3),
    lambda: Transformation.parse("1,x"),
    lambda: Transformation.parse("1,4,1"),
    lambda: Permutation.parse("1,1,2"),
    lambda: GroundSet(1),
])
def test_invalid_literals(parse):
    with pytest.raises(InvalidObjectError):
        parse()


def test_ground_set_mismatch():
    with pytest.raises(GroundSetMismatchError):
        compose(Transformation.parse("1,1"), Transformation.parse("1,1,1"))
    with pytest.raises(GroundSetMismatchError):
        refines(SetPartition.parse("12|3"), SetPartition.parse("12|34"))


@given(singular_pairs())
def test_compose_is_associative(data):
    """复合满足结合律，第三个因子可以是置换。"""
    a, b, theta = data
    c = theta.as_transformation()
    assert compose(compose(a, b), c) == compose(a, compose(b, c))


@given(singular_pairs())
def test_conjugation_is_a_homomorphism(data):
    """conjugate(θ, ab) = conjugate(θ, a)·conjugate(θ, b)。"""
    a, b, theta = data
    assert conjugate(theta, compose(a, b)) == compose(conjugate(theta, a), conjugate(theta, b))


@given(singular_pairs())
def test_kernel_and_image_transport(data):
    a, _, theta = data
    moved = conjugate(theta, a)
    assert moved.kernel == perm_image_partition(theta, a.kernel)
    assert moved.image == perm_image_subset(theta, a.image)


@given(singular_pairs())
def test_kernels_coarsen_under_right_multiplication(data):
    """右乘只会让核变粗：π_a 细化 π_{ab}。"""
    a, b, _ = data
    assert refines(a.kernel, compose(a, b).kernel)
    assert compose(a, b).image_mask & ~b.image_mask == 0

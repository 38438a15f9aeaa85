import pytest

from app.services.theorem_suites import (SUITES, SuiteResult, format_matrix, resolve_suite, run_suites,
                                         sample_permutations)

THEOREM_ROWS = ['Thm3.2', 'Thm3.6', 'Thm4.1', 'Thm4.2', 'Lem4.3', 'Prop4.10', 'Thm-SGamma', 'Thm-AllCxn',
                'Lem5.1', 'Thm5.6']


def test_registry_labels():
    """
    矩阵先按定理标签给出十行，再跟上性质与正规范畴检查。
    """
    assert list(SUITES)[:len(THEOREM_ROWS)] == THEOREM_ROWS
    assert list(SUITES)[len(THEOREM_ROWS):] == ['Cone-Axiom', 'Variant', 'Normal-P', 'Normal-Pi']
    assert resolve_suite('powerset-cones-iso').label == 'Thm3.2'
    assert resolve_suite('Thm5.6').name == 'right-reductive'


def test_every_suite_passes_at_n2():
    results = run_suites(2)
    assert [r.label for r in results] == list(SUITES)
    assert all(r.status == 'PASS' for r in results), [r for r in results if r.status != 'PASS']


def test_selected_suites_only():
    results = run_suites(3, ['cone-axiom', 'Thm5.6'])
    assert [(r.label, r.name, r.status) for r in results] == [
        ('Cone-Axiom', 'cone-axiom', 'PASS'), ('Thm5.6', 'right-reductive', 'PASS')]


def test_sampled_permutations_at_n4():
    """
    n = 4 时对 5 个抽样置换检查 S̃Γ_θ ≅ Sing(X) 与变体同构。
    """
    results = run_suites(4, ['Thm-SGamma', 'Variant'])
    assert [(r.label, r.status) for r in results] == [('Thm-SGamma', 'PASS'), ('Variant', 'PASS')]


def test_guarded_suites_are_skipped():
    results = run_suites(5, ['Thm3.2'])
    assert results[0].status == 'SKIP'
    assert results[0].passed


def test_unknown_suite():
    with pytest.raises(KeyError):
        run_suites(3, ['no-such-suite'])


def test_sample_permutations():
    assert len(sample_permutations(3)) == 6
    sample = sample_permutations(4)
    assert len(sample) == 5
    assert sample[0].is_identity
    assert len(set(sample)) == 5


def test_matrix_format():
    results = [
        SuiteResult('Cone-Axiom', 'cone-axiom', 'd', 'PASS'),
        SuiteResult('Variant', 'variant-iso', 'd', 'FAIL', ['phi is not an isomorphism']),
    ]
    lines = format_matrix(results, 3).splitlines()
    assert lines[0] == "verification matrix for n=3"
    assert lines[1] == "Cone-Axiom  cone-axiom   PASS"
    assert lines[2] == "Variant     variant-iso  FAIL  phi is not an isomorphism"
    assert not results[1].passed

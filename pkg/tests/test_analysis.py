import pytest
from hypothesis import given
from hypothesis import strategies as st

from relpres.analysis import (
    GURejection,
    GUStatus,
    GUWitness,
    StrongUPBasis,
    classify,
    declare_witness,
    exponent_pattern,
    generalised_unimodular_free_T,
)
from relpres.errors import InconsistentWitness
from relpres.rewriting import GroupDescriptor
from relpres.words import Alphabet, FreeWord, RelativeWord


@pytest.fixture
def a():
    return Alphabet(("a", "b", "c", "g", "h"), ("t",))


def test_single_t_letter_is_unimodular_and_simple(a):
    r = classify(a.parse("g t h"))
    assert r.unimodular and r.complexity_le_one
    assert exponent_pattern(a.parse("g t h")) == (1,)


def test_alternating_pattern_has_complexity_at_most_one(a):
    r = classify(a.parse("c t b t^-1 a t"))
    assert r.unimodular and r.complexity_le_one
    assert sorted(r.exponent_pattern) == [-1, 1, 1]


def test_square_letter_breaks_complexity_one(a):
    r = classify(a.parse("g t^2 h t^-1"))
    assert r.unimodular and not r.complexity_le_one


def test_braid_relator_is_unimodular(a):
    r = classify(a.parse("t g t g^-1 t^-1 g^-1"))
    assert r.unimodular and r.exponent_sums == (1,)


def test_generalised_unimodular_witness_for_two_variables(two_vars):
    wit = generalised_unimodular_free_T(two_vars.parse("g x h y"))
    assert isinstance(wit, GUWitness)
    assert wit.quotient.relators == (FreeWord.parse("x y", ("x", "y")),)
    assert wit.basis is StrongUPBasis.LOCALLY_INDICABLE_BY_BRODSKII


def test_rejections(two_vars):
    assert isinstance(generalised_unimodular_free_T(two_vars.parse("g x h x^-1")), GURejection)
    rej = generalised_unimodular_free_T(two_vars.parse("g x^2"))
    assert isinstance(rej, GURejection) and "proper power" in rej.reason
    assert classify(two_vars.parse("g x^2")).generalised_unimodular is GUStatus.NO


def test_declared_witness_is_flagged():
    T = GroupDescriptor.free(("x", "y"))
    x = FreeWord.parse("x", T.generators)
    wit = declare_witness(T, x, [x, FreeWord.parse("y", T.generators)], free_factor_declared=True)
    assert wit.hypothesis_only
    assert classify(Alphabet(("g",), ("x", "y")).parse("g x"), witness=wit).generalised_unimodular is GUStatus.HYPOTHESIS_ONLY


def test_declared_witness_with_non_normal_R_is_refuted():
    T = GroupDescriptor.free(("x", "y"))
    x = FreeWord.parse("x", T.generators)
    with pytest.raises(InconsistentWitness):
        declare_witness(T, x, [x], free_factor_declared=True)


def test_declared_witness_with_t_outside_R_is_refuted():
    T = GroupDescriptor.free_abelian(("x", "y"))
    with pytest.raises(InconsistentWitness):
        declare_witness(T, FreeWord.parse("y", T.generators), [FreeWord.parse("x", T.generators)],
                        free_factor_declared=True)


def test_declared_witness_needs_declared_splitting():
    T = GroupDescriptor.free_abelian(("x", "y"))
    x = FreeWord.parse("x", T.generators)
    with pytest.raises(InconsistentWitness):
        declare_witness(T, x, [x, FreeWord.parse("y", T.generators)])
    assert declare_witness(T, x, [x, FreeWord.parse("y", T.generators)], free_factor_declared=True).hypothesis_only


letters = st.lists(st.integers(0, 9), min_size=1, max_size=12)


def _cyclic(codes):
    a = Alphabet(("a", "b", "c", "g"), ("t",))
    core = FreeWord(codes).cyclic_split()[1]
    return None if not core else RelativeWord(a, core.letters)


@given(letters, st.integers(0, 30))
def test_classification_is_rotation_invariant(codes, k):
    w = _cyclic(codes)
    if w is None:
        return
    r1 = classify(w)
    r2 = classify(w.rotation(k % len(w.letters)))
    assert (r1.unimodular, r1.complexity_le_one, r1.generalised_unimodular) == (
        r2.unimodular, r2.complexity_le_one, r2.generalised_unimodular
    )
    assert sorted(r1.exponent_pattern) == sorted(r2.exponent_pattern)


@given(letters)
def test_complexity_one_implies_exponent_sum_one(codes):
    w = _cyclic(codes)
    if w is None:
        return
    r = classify(w)
    if r.complexity_le_one:
        assert r.exponent_sums == (1,)
    assert sum(r.exponent_pattern) == r.exponent_sums[0]

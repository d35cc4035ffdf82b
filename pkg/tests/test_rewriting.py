import pytest
from hypothesis import given
from hypothesis import strategies as st

from relpres.errors import ParseError
from relpres.rewriting import (
    ClassHint,
    GroupDescriptor,
    Limits,
    Status,
    abelianization,
    complete,
    is_trivial_in,
    permutation_quotients,
)
from relpres.verdicts import Verdict
from relpres.words import FreeWord

Z2 = GroupDescriptor.parse("generators: x, y\nrelators: x y x^-1 y^-1")
XY = GroupDescriptor.parse("generators: x, y\nrelators: x y")


def test_free_group_completes_with_no_rules():
    e = complete(GroupDescriptor.free(["x"]))
    assert e.status is Status.COMPLETE
    assert e.rewrite((0, 1, 0)) == (0,)


def test_z2_completes():
    e = complete(Z2)
    assert e.status is Status.COMPLETE
    assert e.equal(Z2.word("x y"), Z2.word("y x")) is Verdict.EQUAL
    assert e.equal(Z2.word("x"), Z2.word("y")) is Verdict.DISTINCT


def test_xy_relator_normal_forms_are_powers_of_x():
    e = complete(XY)
    assert e.status is Status.COMPLETE
    assert e.normal_form(XY.word("y")) == XY.word("x^-1")
    assert e.equal(XY.word("x"), XY.word("y^-1")) is Verdict.EQUAL
    assert e.normal_form(XY.word("y^3 x")) == XY.word("x^-2")


def test_word_equals_itself_in_any_group():
    e = complete(GroupDescriptor.parse("generators: a, b\nrelators: a^2 b^-3"), Limits(max_rules=100))
    u = FreeWord.parse("a b a^-1 b", ("a", "b"))
    assert e.equal(u, u) is Verdict.EQUAL


def test_abelianization_examples():
    assert (abelianization(XY).rank, abelianization(XY).torsion) == (1, [])
    assert abelianization(GroupDescriptor.free(["x"])).rank == 1
    d = GroupDescriptor.parse("generators: x, y\nrelators: x^2 y^3")
    assert (abelianization(d).rank, abelianization(d).torsion) == (1, [])
    assert abelianization(GroupDescriptor.finite_cyclic("a", 6)).torsion == [6]


def test_is_trivial_examples():
    assert is_trivial_in(XY, XY.word("x y")) is Verdict.EQUAL
    assert is_trivial_in(XY, XY.word("x")) is Verdict.DISTINCT
    F = GroupDescriptor.free(["a", "b"])
    assert is_trivial_in(F, F.word("a b a^-1")) is Verdict.DISTINCT


def test_presentation_text_round_trip():
    text = "generators: a, b\nrelators: a b a^-1 b^-1\nclass: abelian\ntorsion_free: true\n"
    d = GroupDescriptor.parse(text)
    assert d.class_hint is ClassHint.FG_ABELIAN and d.declared_torsion_free
    assert GroupDescriptor.parse(d.to_text()) == d


def test_presentation_parse_error_has_line():
    with pytest.raises(ParseError) as e:
        GroupDescriptor.parse("generators: a\nrelators: a b")
    assert e.value.line == 2


def test_partial_completion_still_answers_soundly():
    # Baumslag-Solitar BS(1,2) has no finite shortlex system on these generators
    d = GroupDescriptor.parse("generators: a, b\nrelators: b a b^-1 a^-2")
    e = complete(d, Limits(max_rules=20))
    assert e.status in (Status.PARTIAL, Status.COMPLETE)
    assert e.equal(d.word("b a b^-1"), d.word("a^2")) is Verdict.EQUAL
    assert e.equal(d.word("a"), d.word("b")) is Verdict.DISTINCT


def test_commutator_separated_by_permutation_quotient():
    F = GroupDescriptor.free(["a", "b"])
    e = complete(F)
    assert e.is_trivial(F.word("a b a^-1 b^-1")) is Verdict.DISTINCT
    S3 = GroupDescriptor.parse("generators: s, r\nrelators: s^2; r^3; s r s r")
    assert permutation_quotients(S3)


@given(st.lists(st.integers(0, 3), max_size=10), st.lists(st.integers(0, 3), max_size=10))
def test_z2_equality_matches_exponent_vectors(a, b):
    e = complete(Z2)
    u, v = FreeWord(a), FreeWord(b)
    same = u.exponent_vector(2) == v.exponent_vector(2)
    assert e.equal(u, v) is (Verdict.EQUAL if same else Verdict.DISTINCT)


@given(st.lists(st.integers(0, 3), max_size=12))
def test_normal_form_is_idempotent(a):
    e = complete(XY)
    nf = e.rewrite(a)
    assert e.rewrite(nf) == nf

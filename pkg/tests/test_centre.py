import pytest

from relpres.centre import (
    Case,
    CentreKind,
    b3_dictionary_check,
    classify_centre,
    lemma5_cyclic_from_squares,
    theorem2_case_split,
)
from relpres.errors import HypothesisUnverified
from relpres.rewriting import GroupDescriptor
from relpres.words import Alphabet

Z = GroupDescriptor.free(("g",))
Z2 = GroupDescriptor.free_abelian(("g", "h"))
FREE_T = GroupDescriptor.free(("x", "y"))
XY = Alphabet(("g", "h"), ("x", "y"))


def test_single_t_letter_gives_G_with_explicit_isomorphism():
    v = classify_centre(Z2, 1, Alphabet(("g", "h"), ("t",)).parse("g t h"))
    assert v.verdict is CentreKind.ISOMORPHIC_TO_Z_G
    assert v.witness["exact"] and v.provenance == "EXACT"


def test_two_variables_over_z_is_trivial():
    v = classify_centre(Z, 2, Alphabet(("g",), ("x", "y")).parse("g x g y^-1 x"))
    assert v.verdict is CentreKind.TRIVIAL


def test_braid_relator_over_cyclic_G():
    v = classify_centre(Z, 1, Alphabet(("g",), ("t",)).parse("t g t g^-1 t^-1 g^-1"))
    assert v.verdict is CentreKind.ONE_RELATOR_CENTRE_CASE


def test_unimodular_with_several_t_letters_over_noncyclic_G_is_trivial():
    v = classify_centre(Z2, 1, Alphabet(("g", "h"), ("t",)).parse("g t h t g^-1 t^-1"))
    assert v.verdict is CentreKind.TRIVIAL


def test_one_syllable_over_free_T_is_amalgam_with_trivial_centre():
    assert theorem2_case_split(Z2, FREE_T, XY.parse("g x")).case is Case.CASE2
    v = classify_centre(Z2, FREE_T, XY.parse("g x"))
    assert v.verdict is CentreKind.AFP_CENTRE and v.generators == []


def test_one_syllable_over_abelian_T_has_amalgamated_centre():
    T = GroupDescriptor.free_abelian(("x", "y"))
    v = classify_centre(Z2, T, XY.parse("g x"))
    assert v.verdict is CentreKind.AFP_CENTRE and v.generators == ["g"]


def test_case_split_cases():
    assert theorem2_case_split(Z2, FREE_T, XY.parse("x")).case is Case.CASE1
    assert theorem2_case_split(Z2, FREE_T, XY.parse("g x h x^2")).case is Case.CASE3
    assert theorem2_case_split(Z2, FREE_T, XY.parse("g x h y")).case is Case.CASE4


def test_general_T_with_several_syllables_is_trivial():
    v = classify_centre(Z2, FREE_T, XY.parse("g x h y"))
    assert v.verdict is CentreKind.TRIVIAL


def test_cyclic_T_given_by_presentation_gives_G():
    T = GroupDescriptor.parse("generators: x\ntorsion_free: true")
    v = classify_centre(Z2, T, Alphabet(("g", "h"), ("x",)).parse("g x"))
    assert v.verdict is CentreKind.G_ISOMORPHIC


def test_missing_hypothesis_is_unknown_or_raises():
    # the general-T statement needs G noncyclic
    T = GroupDescriptor.free_abelian(("x", "y"))
    w = Alphabet(("g",), ("x", "y")).parse("g x")
    assert classify_centre(Z, T, w).verdict is CentreKind.UNKNOWN
    with pytest.raises(HypothesisUnverified):
        classify_centre(Z, T, w, require_hypotheses=True)


def test_undeclared_torsion_freeness_is_unknown():
    G = GroupDescriptor.parse("generators: g, h")
    v = classify_centre(G, 1, Alphabet(("g", "h"), ("t",)).parse("g t"))
    assert v.verdict is CentreKind.UNKNOWN and v.provenance == "UNKNOWN"


def test_braid_dictionary():
    d = b3_dictionary_check()
    assert d["generators_round_trip"] and d["relator_maps_to_relator"]
    assert d["torus_relator_trivial_in_braid_group"]
    assert d["afp_centre_in_A"] == ["x^2"] and d["afp_centre_in_B"] == ["y^3"]


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_squares_of_free_abelian_groups(n):
    G = GroupDescriptor.free_abelian(tuple(f"z{i}" for i in range(n)))
    assert lemma5_cyclic_from_squares(G) is (n == 1)


@pytest.mark.parametrize("r", [1, 2, 3])
def test_squares_of_free_groups(r):
    G = GroupDescriptor.free(tuple(f"f{i}" for i in range(r)))
    assert lemma5_cyclic_from_squares(G) is (r == 1)

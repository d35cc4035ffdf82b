import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from relpres.errors import ConditionsFail, IdentityViolation
from relpres.products import (
    AmalgamatedProduct,
    OmegaFamily,
    SemidirectData,
    afp_centre,
    afp_normal_form,
    amalgam_tree,
    asp_build,
    asp_diagonal_checks,
    asp_multiply,
    central_elements_in_leaves,
    combinatorial_conditions,
    fiap_build,
    lemma8_decomposition,
    min_max,
    prop1_conditions,
)
from relpres.rewriting import GroupDescriptor, Limits, abelianization
from relpres.words import FreeWord

X = GroupDescriptor.free(["x"])
Y = GroupDescriptor.free(["y"])
EMPTY = FreeWord(())


def torus_knot():
    return AmalgamatedProduct.cyclic(X, Y, X.word("x^2"), Y.word("y^3"))


# -- amalgamated products


def test_word_inside_amalgamated_subgroup_normalises_to_h():
    nf = afp_normal_form(torus_knot(), [("A", X.word("x^4"))])
    assert nf.reps == () and nf.h == FreeWord.parse("H1^2", ["H1"])


def test_amalgamation_relation_is_identity():
    nf = afp_normal_form(torus_knot(), [("A", X.word("x^2")), ("B", Y.word("y^-3"))])
    assert nf.is_identity()


def test_free_product_words_are_already_normal():
    ap = AmalgamatedProduct(X, Y, GroupDescriptor((), ()), (), ())
    nf = afp_normal_form(ap, [("A", X.word("x")), ("B", Y.word("y"))])
    assert [s for s, _ in nf.reps] == ["A", "B"]


def test_torus_knot_centre_is_generated_by_x_squared():
    c = afp_centre(torus_knot())
    assert c.decided
    assert [w.format(["x"]) for w in c.in_A] == ["x^2"]
    assert [w.format(["y"]) for w in c.in_B] == ["y^3"]


def test_free_product_has_trivial_centre():
    ap = AmalgamatedProduct(X, Y, GroupDescriptor((), ()), (), ())
    assert afp_centre(ap).trivial


def test_abelian_factors_over_proper_z_intersect_lattices():
    A = GroupDescriptor.free_abelian(("a1", "a2"))
    B = GroupDescriptor.free_abelian(("b1", "b2"))
    ap = AmalgamatedProduct.cyclic(A, B, A.word("a1^2"), B.word("b1^3"))
    c = afp_centre(ap)
    assert c.decided and [w.format(["H1"]) for w in c.generators] == ["H1"]


# -- iterated amalgams


def test_empty_leaf_set_is_trivial_group():
    assert fiap_build([]).is_trivial_group


def test_single_leaf_is_strict():
    tree = fiap_build([("G", GroupDescriptor.free_abelian(("u", "v")))], strict=True)
    assert tree.strict and len(tree.leaves) == 1


def test_two_cyclic_leaves_amalgamated_properly():
    tree = fiap_build([("X", X), ("Y", Y)], [((Y.word("y^3"),), (X.word("x^2"),))], strict=True)
    assert tree.strict
    assert tree.records[1].proper_witness == Y.word("y")


def test_central_elements_lie_in_a_leaf_centre():
    tree = fiap_build([("X", X), ("Y", Y)], [((Y.word("y^3"),), (X.word("x^2"),))])
    report = central_elements_in_leaves(tree, depth=3, limits=Limits(max_rules=200))
    assert report["holds"]


# -- families of subsets


EXAMPLE = {"I": list("abcdef"), "omega": ["abde", "bcef", "def"]}


def test_example_family_satisfies_min_max_for_all_subfamilies():
    fam = OmegaFamily.from_json(EXAMPLE)
    ok, subs = combinatorial_conditions(fam)
    assert ok and len(subs) == 4
    for size in (2, 3):
        for sub in itertools.combinations(fam.omega, size):
            assert min_max(fam, sub).holds


def test_example_family_tree_shape():
    fam = OmegaFamily.from_json(EXAMPLE)
    assert amalgam_tree(fam).tree.render(fam) == "((DEF * B) *_{B*D*E} ABDE) *_{B*E*F} BCEF"


def test_singleton_family_is_vacuous():
    fam = OmegaFamily.from_json({"I": ["a", "b"], "omega": ["ab"]})
    ok, subs = combinatorial_conditions(fam)
    assert ok and subs == []


def test_duplicates_collapse_and_min_max_found():
    fam = OmegaFamily.from_json({"I": list("abc"), "omega": ["ab", "ab", "bc"]})
    assert len(fam.omega) == 2
    mm = min_max(fam, fam.omega)
    assert (mm.min, mm.max) == ("a", "c")


def test_failing_family_is_reported():
    fam = OmegaFamily.from_json({"I": list("abc"), "omega": ["ab", "bc", "ac"]})
    ok, _ = combinatorial_conditions(fam)
    assert not ok
    with pytest.raises(ConditionsFail):
        amalgam_tree(fam)


def test_conditions_report_on_example():
    fam = OmegaFamily.from_json(EXAMPLE)
    report = prop1_conditions(fam, depth=2)
    assert report.combinatorial


def test_decomposition_with_one_set_is_a_single_node():
    fam = OmegaFamily.from_json(EXAMPLE)
    r = lemma8_decomposition(fam, ["def"], "def", "de")
    assert r.tree.render(fam) == "DEF"


def test_decomposition_of_empty_subfamily_is_empty():
    fam = OmegaFamily.from_json({"I": list("abc"), "omega": ["ab", "c"]})
    r = lemma8_decomposition(fam, [], "ab", "")
    assert r.case == 2 and r.tree.kind == "empty"


# -- amalgamated semidirect products


Z_A = GroupDescriptor.free(["a"])
Z_B = GroupDescriptor.free(["b"])


def test_trivial_action_multiplies_componentwise():
    sd = SemidirectData.trivial_action(Z_A, Z_B)
    a, b = Z_A.word("a"), Z_B.word("b")
    assert asp_multiply(sd, (EMPTY, b), (EMPTY, b)) == (EMPTY, Z_B.word("b^2"))
    assert asp_multiply(sd, (a, EMPTY), (a, EMPTY)) == (Z_A.word("a^2"), EMPTY)
    assert asp_multiply(sd, (a, b), (a, b)) == (Z_A.word("a^2"), Z_B.word("b^2"))


def test_z_by_z_over_a_squared_is_z():
    sd = SemidirectData.trivial_action(Z_A, Z_B, (Z_A.word("a^2"),), (Z_B.word("b"),))
    assert asp_diagonal_checks(sd).checked > 0
    ab = abelianization(asp_build(sd).descriptor)
    assert ab.rank == 1 and ab.torsion == []


def test_trivial_N_makes_checks_vacuous():
    sd = SemidirectData.trivial_action(Z_A, Z_B)
    report = asp_diagonal_checks(sd)
    assert report.exhaustive_N


def test_trivial_B_gives_A():
    sd = SemidirectData.trivial_action(Z_A, GroupDescriptor((), ()))
    assert abelianization(asp_build(sd).descriptor).rank == 1


def test_psi_incompatible_with_action_is_refused():
    # S3 acting on itself by conjugation through s; N = <s> sent to the wrong place
    S3 = GroupDescriptor.parse("generators: s, r\nrelators: s^2; r^3; s r s r")
    A = GroupDescriptor.finite_cyclic("a", 2)
    phi = ((S3.word("s"), S3.word("r^-1")),)
    with pytest.raises(IdentityViolation):
        asp_diagonal_checks(
            SemidirectData(A, S3, phi, (A.word("a"),), (S3.word("r"),), limits=Limits(max_rules=200))
        )


@settings(max_examples=15)
@given(st.integers(1, 3), st.integers(-2, 2))
def test_asp_with_trivial_action_abelianizes_to_rank_one(k, j):
    # (Z x Z) / <(k, -j)> has rank 1 whenever (k, j) != 0
    N = (Z_A.word(f"a^{k}"),)
    psi = (Z_B.word(f"b^{j}") if j else EMPTY,)
    ab = abelianization(asp_build(SemidirectData.trivial_action(Z_A, Z_B, N, psi)).descriptor)
    assert ab.rank == 1

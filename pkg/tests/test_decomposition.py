
import pytest
from hypothesis import given
from hypothesis import strategies as st

from relpres.decomposition import (
    CosetTable,
    GSymbol,
    RSymbol,
    action_apply,
    build_context,
    decompose,
    iso_H1_to_Hx,
    suffix_cosets,
    to_ambient,
)
from relpres.errors import RejectedRelator
from relpres.rewriting import GroupDescriptor
from relpres.words import Alphabet, FreeWord

Z2 = GroupDescriptor.free_abelian(("g1", "g2"))
Z3 = GroupDescriptor.free_abelian(("g1", "g2", "g3"))
XY = Alphabet(("g1", "g2"), ("x", "y"))


@pytest.fixture(scope="module")
def two_syllable():
    return decompose(XY.parse("g1 x g2 y"), Z2, radius=2)


def test_context_for_two_variables_has_quotient_xy():
    ctx = build_context(XY.parse("g1 x g2 y"), Z2)
    assert ctx.witness.quotient.relators == (FreeWord.parse("x y", ("x", "y")),)


def test_square_relator_is_rejected():
    with pytest.raises(RejectedRelator):
        build_context(Alphabet(("g",), ("x",)).parse("g x^2"), GroupDescriptor.free(("g",)))


def test_single_variable_context_has_trivial_quotient():
    ctx = build_context(Alphabet(("g",), ("t",)).parse("g t"), GroupDescriptor.free(("g",)))
    assert ctx.S_trivial
    assert ctx.engine.is_trivial(FreeWord((0,))).value == "EQUAL"


def test_suffix_cosets_two_syllables():
    cos = suffix_cosets(build_context(XY.parse("g1 x g2 y"), Z2))
    assert cos.p == 2


def test_suffix_cosets_three_syllables():
    a = Alphabet(("g1", "g2", "g3"), ("x", "y"))
    cos = suffix_cosets(build_context(a.parse("g1 x g2 y g3 x^-1"), Z3))
    assert cos.p == 2


def test_one_syllable_has_one_coset():
    cos = suffix_cosets(build_context(Alphabet(("g",), ("t",)).parse("g t"), GroupDescriptor.free(("g",))))
    assert cos.p == 1


def test_representatives_are_shortlex_normal_forms():
    ctx = build_context(XY.parse("g1 x g2 y"), Z2)
    table = CosetTable(ctx.engine)
    assert table.rep(table.lookup(FreeWord(()))) == FreeWord(())
    k = table.lookup(FreeWord.parse("y", ("x", "y")))
    assert table.rep(k) == FreeWord.parse("x^-1", ("x", "y"))
    assert table.lookup(FreeWord.parse("x^-1", ("x", "y"))) == k


def test_relation_reassembles_exactly(two_syllable):
    rel = two_syllable.relation
    assert rel.reassembled.letters == two_syllable.ctx.relator.letters


def test_single_syllable_relation():
    r = decompose(Alphabet(("g",), ("t",)).parse("g t"), GroupDescriptor.free(("g",)))
    assert r.p == 1
    assert r.relation.t == FreeWord((0,))


def test_h1_presentation_for_two_syllables(two_syllable):
    j = two_syllable.to_json()
    h1 = j["h1_presentation"]
    assert h1["p"] == 2
    assert len(two_syllable.h1.relator) == 3
    assert h1["relator"] == "rbar(x y) (g1^(1))^rbar(x y) (g2^(x^-1))^rbar(x y)"


def test_identity_acts_trivially(two_syllable):
    ctx, table = two_syllable.ctx, two_syllable.table
    s = GSymbol(FreeWord((0,)), 0)
    assert action_apply(ctx, table, s, FreeWord(())) == s


def test_r_symbol_conjugates():
    r = decompose(XY.parse("g1 x g2 y"), Z2)
    ctx, table = r.ctx, r.table
    xy = FreeWord.parse("x y", ("x", "y"))
    x = FreeWord.parse("x", ("x", "y"))
    assert action_apply(ctx, table, RSymbol(xy), x) == RSymbol(x.inverse() * xy * x)


def test_isomorphisms_send_relator_to_relator(two_syllable):
    assert two_syllable.isomorphisms
    assert all(m.relator_check for m in two_syllable.isomorphisms)


def test_identity_coset_isomorphism_is_identity(two_syllable):
    ctx, table, h1 = two_syllable.ctx, two_syllable.table, two_syllable.h1
    m = iso_H1_to_Hx(ctx, table, h1, FreeWord(()))
    assert m.images["tbar"] == h1.relator[0]


def test_report_json_has_stable_keys(two_syllable):
    keys = set(two_syllable.to_json())
    assert {"classification", "cosets", "representatives", "relation2", "h1_presentation",
            "action_table", "theorem3", "provenance"} <= keys


def test_strictness_follows_noncyclicity(two_syllable):
    assert two_syllable.strict.startswith("strict")
    cyc = decompose(Alphabet(("g",), ("x", "y")).parse("g x g y"), GroupDescriptor.free(("g",)))
    assert cyc.strict.startswith("not claimed")


def test_every_claim_has_provenance(two_syllable):
    for c in two_syllable.to_json()["provenance"]:
        assert c["provenance"].split(" ")[0] in {"THEOREM", "EXACT", "UNKNOWN", "NOT_APPLICABLE"} or c[
            "provenance"
        ].startswith("CHECKED_AT_DEPTH_")


words = st.lists(st.integers(0, 3), max_size=3)


@given(words, words, st.integers(0, 1), st.integers(0, 5))
def test_action_is_multiplicative(x1, x2, g, k):
    r = decompose(XY.parse("g1 x g2 y"), Z2, radius=2)
    ctx, table = r.ctx, r.table
    s = GSymbol(FreeWord((2 * g,)), k % len(table))
    a, b = FreeWord(x1), FreeWord(x2)
    assert action_apply(ctx, table, action_apply(ctx, table, s, a), b) == action_apply(ctx, table, s, a * b)


@given(words, st.integers(0, 5))
def test_action_matches_conjugation_in_ambient_group(x, k):
    r = decompose(XY.parse("g1 x g2 y"), Z2, radius=2)
    ctx, table = r.ctx, r.table
    s = GSymbol(FreeWord((0,)), k % len(table))
    u = FreeWord(x)
    lhs = to_ambient(ctx, table, action_apply(ctx, table, s, u))
    rhs = to_ambient(ctx, table, s).conjugate(ctx.lift(t=u))
    assert lhs.letters == rhs.letters

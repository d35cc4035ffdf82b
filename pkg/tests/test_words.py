import pytest
from hypothesis import given
from hypothesis import strategies as st

from relpres.errors import NotCyclicallyReduced, ParseError, UndeclaredGenerator
from relpres.words import (
    Alphabet,
    CyclicWord,
    FreeWord,
    RelativeWord,
    conjugate_in_free_product,
    cyclic_reduce,
    erase_coefficients,
    exponent_sum,
    free_reduce,
    is_proper_power,
    reduce,
)

codes = st.lists(st.integers(0, 7), max_size=14)


def test_reduce_cancels_adjacent_variable_letters(two_vars):
    w = reduce(two_vars, two_vars.parse("g x x^-1 h").letters)
    assert w.format() == "g h"
    assert w.q == 0


def test_empty_word_literal_and_empty_sequence(two_vars):
    assert two_vars.parse("1").letters == ()
    assert reduce(two_vars, []).letters == ()


def test_already_reduced_word_has_two_syllables(two_vars):
    w = two_vars.parse("g x h y^-1")
    assert w.format() == "g x h y^-1"
    assert w.q == 2


def test_parser_accepts_powers_and_star(two_vars):
    assert two_vars.parse("g^2 * x^-2").format() == two_vars.parse("g g x^-1 x^-1").format()


def test_parse_errors_report_position(two_vars):
    with pytest.raises(ParseError) as e:
        two_vars.parse("g x^")
    assert e.value.line == 1 and e.value.column >= 1
    with pytest.raises(UndeclaredGenerator):
        two_vars.parse("g z")


def test_cyclic_reduce_of_conjugate(two_vars):
    c, conj = cyclic_reduce(two_vars.parse("x g x^-1"))
    assert c.format() == "g"
    assert conj.format() == "x"


def test_cyclic_reduce_of_reduced_word_keeps_it(two_vars):
    w = two_vars.parse("g x h y")
    c, conj = cyclic_reduce(w)
    assert c == CyclicWord(w)


def test_cyclic_reduce_recovers_input(two_vars):
    w = two_vars.parse("y^-1 g x y")
    c, conj = cyclic_reduce(w)
    back = reduce(two_vars, conj.letters + c.word.letters + conj.inverse().letters)
    assert back.letters == w.letters
    assert sorted(c.format().split()) == ["g", "x"]


def test_cyclic_word_refuses_unreduced(two_vars):
    with pytest.raises(NotCyclicallyReduced):
        CyclicWord(two_vars.parse("x g x^-1"))


def test_erase_coefficients(one_var, two_vars):
    assert erase_coefficients(two_vars.parse("g x h y^-1")).format(("x", "y")) == "x y^-1"
    assert erase_coefficients(two_vars.parse("g x h x^-1")).letters == ()
    braid = one_var.parse("t g t g^-1 t^-1 g^-1")
    assert erase_coefficients(braid).format(("t",)) == "t"


def test_exponent_sums(one_var, two_vars):
    assert exponent_sum(one_var.parse("g t h"), 0) == 1
    assert exponent_sum(two_vars.parse("g x h x^-1"), 0) == 0
    assert exponent_sum(one_var.parse("t g t g^-1 t^-1 g^-1"), 0) == 1


def test_proper_power_examples():
    names = ("a", "b")
    empty = is_proper_power(FreeWord(()))
    assert empty.is_power and empty.k == 2
    comm = FreeWord.parse("a b a^-1 b^-1", names)
    r = is_proper_power(comm)
    assert not r.is_power and r.k == 1 and r.root == comm
    conj_sq = FreeWord.parse("b", names) * FreeWord.parse("a b a b", names) * FreeWord.parse("b^-1", names)
    r = is_proper_power(conj_sq)
    assert r.is_power and r.k == 2 and r.root ** 2 == conj_sq


def test_conjugacy_in_free_product(two_vars):
    a = CyclicWord(two_vars.parse("g x h y"))
    assert conjugate_in_free_product(a, CyclicWord(two_vars.parse("h y g x")))
    assert not conjugate_in_free_product(CyclicWord(two_vars.parse("g x")), CyclicWord(two_vars.parse("g y")))
    assert conjugate_in_free_product(CyclicWord(two_vars.parse("x y")), CyclicWord(two_vars.parse("y x")))


@given(codes)
def test_free_reduce_is_idempotent(w):
    r = free_reduce(w)
    assert free_reduce(r) == r
    assert all(r[i] ^ 1 != r[i + 1] for i in range(len(r) - 1))


@given(codes, codes)
def test_exponent_sum_invariant_under_conjugation(w, u):
    fw, fu = FreeWord(w), FreeWord(u)
    for i in range(4):
        assert fw.conjugate(fu).exponent_sum(i) == fw.exponent_sum(i)


@given(codes, st.integers(0, 20))
def test_cyclic_word_canonical_under_rotation(w, k):
    a = Alphabet(("g", "h"), ("x", "y"))
    core = FreeWord(w).cyclic_split()[1]
    if not core:
        return
    rw = RelativeWord(a, core.letters)
    rot = rw.rotation(k % len(core.letters))
    assert CyclicWord(rw) == CyclicWord(rot)
    assert conjugate_in_free_product(CyclicWord(rw), CyclicWord(rot))


@given(codes)
def test_proper_power_root_reconstructs_word(w):
    u = FreeWord(w)
    r = is_proper_power(u)
    if u.letters:
        assert (r.root ** r.k).letters == u.letters
        assert not is_proper_power(r.root).is_power

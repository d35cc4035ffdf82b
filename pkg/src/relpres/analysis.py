"""Relator classification: unimodularity, generalised unimodularity, complexity.

Strong UP is never decided here.  It is either inherited from local
indicability (free T with ``w'`` not a proper power, by Brodskii's theorem)
or declared by the caller.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Sequence

from .errors import InconsistentWitness, NotCyclicallyReduced
from .rewriting import ClassHint, GroupDescriptor, Limits, abelianization, complete
from .subgroups import SubgroupGraph
from .verdicts import Verdict
from .words import (
    CyclicWord,
    FreeWord,
    RelativeWord,
    erase_coefficients,
    is_proper_power,
)


class GUStatus(str, Enum):
    YES = "YES"
    NO = "NO"
    HYPOTHESIS_ONLY = "HYPOTHESIS_ONLY"


class StrongUPBasis(str, Enum):
    LOCALLY_INDICABLE_BY_BRODSKII = "LOCALLY_INDICABLE_BY_BRODSKII"
    DECLARED = "DECLARED"


@dataclass(frozen=True)
class ComplexityOneForm:
    """``w`` rotated to ``c t b_0 t^-1 a_0 t ... b_m t^-1 a_m t``.

    ``w = conjugator * word * conjugator^-1`` holds letter for letter.
    """

    c: FreeWord
    b: tuple[FreeWord, ...]
    a: tuple[FreeWord, ...]
    word: RelativeWord
    conjugator: RelativeWord

    @property
    def m(self) -> int:
        return len(self.a) - 1


@dataclass
class RelatorClassification:
    n: int
    exponent_sums: tuple[int, ...]
    exponent_pattern: tuple
    unimodular: bool
    generalised_unimodular: GUStatus
    complexity_le_one: bool
    complexity_form: ComplexityOneForm | None = None
    notes: list[str] = field(default_factory=list)

    def to_json(self) -> dict:
        out = {
            "n": self.n,
            "exponent_sums": list(self.exponent_sums),
            "exponent_pattern": [list(p) if isinstance(p, tuple) else p for p in self.exponent_pattern],
            "unimodular": self.unimodular,
            "generalised_unimodular": self.generalised_unimodular.value,
            "complexity_le_one": self.complexity_le_one,
            "notes": list(self.notes),
        }
        if self.complexity_form is not None:
            f = self.complexity_form
            out["complexity_form"] = {
                "word": f.word.format(),
                "conjugator": f.conjugator.format(),
                "m": f.m,
            }
        return out


def _cyclic(w: RelativeWord | CyclicWord) -> CyclicWord:
    if isinstance(w, CyclicWord):
        return w
    if not w.is_cyclically_reduced():
        raise NotCyclicallyReduced(f"{w.format()} is not cyclically reduced")
    return CyclicWord(w)


def _rotation_prefix(w: RelativeWord | CyclicWord, c: CyclicWord) -> RelativeWord:
    """``p`` with ``w = p * c.word * p^-1``."""
    if isinstance(w, CyclicWord) or not w.letters:
        return RelativeWord(c.alphabet)
    doubled = w.letters + w.letters
    n = len(w.letters)
    k = next(k for k in range(n) if doubled[k : k + n] == c.word.letters)
    return RelativeWord(c.alphabet, w.letters[:k])


def exponent_pattern(w: RelativeWord | CyclicWord) -> tuple:
    """Exponent sums of the variable syllables, read from the syllable form.

    Entries are integers when there is one variable and vectors otherwise.
    """
    c = _cyclic(w)
    n = c.alphabet.n
    pattern = [s.t.exponent_vector(n) for s in c.syllables]
    if n == 1:
        return tuple(v[0] for v in pattern)
    return tuple(tuple(v) for v in pattern)


def _complexity_start(pattern: Sequence[int]) -> int | None:
    """Index where the pattern reads ``(+1, -1, +1, ..., -1, +1)``, if any."""
    q = len(pattern)
    if q == 0 or q % 2 == 0 or any(e not in (1, -1) for e in pattern):
        return None
    if q == 1:
        return 0 if pattern[0] == 1 else None
    for r in range(q):
        seq = [pattern[(r + i) % q] for i in range(q)]
        if all(e == (1 if i % 2 == 0 else -1) for i, e in enumerate(seq)):
            return r
    return None


def complexity_one_form(w: RelativeWord | CyclicWord) -> ComplexityOneForm | None:
    """The literal form ``c t prod(b_i a_i^t)`` of a rotation of ``w``, or None."""
    c = _cyclic(w)
    if c.alphabet.n != 1:
        return None
    pattern = exponent_pattern(c)
    r = _complexity_start(pattern)
    if r is None:
        return None
    sylls = c.syllables
    q = len(sylls)
    order = [sylls[(r + i) % q] for i in range(q)]
    coefs = [s.g for s in order]
    base = c.syllable_form()
    # position of syllable r in the syllable form
    pos = sum(len(s.g) + len(s.t) for s in sylls[:r])
    word = base.rotation(pos)
    shift = (c.syllable_offset() + pos) % max(len(c.word), 1)
    conj = _rotation_prefix(w, c) * RelativeWord(c.alphabet, c.word.letters[:shift])
    return ComplexityOneForm(coefs[0], tuple(coefs[1::2]), tuple(coefs[2::2]), word, conj)


def classify(
    w: RelativeWord | CyclicWord, n: int | None = None, witness: "GUWitness | None" = None
) -> RelatorClassification:
    c = _cyclic(w)
    n = c.alphabet.n if n is None else n
    if n != c.alphabet.n:
        raise ValueError(f"alphabet declares {c.alphabet.n} variables, not {n}")
    sums = tuple(c.word.exponent_sum(i) for i in range(n))
    pattern = exponent_pattern(c)
    notes: list[str] = []
    unimodular = n == 1 and sums[0] == 1
    form = complexity_one_form(c) if n == 1 else None
    if witness is not None and witness.basis is StrongUPBasis.DECLARED:
        gu = GUStatus.HYPOTHESIS_ONLY
        notes.append("generalised unimodularity rests on a declared witness")
    else:
        result = generalised_unimodular_free_T(c)
        gu = GUStatus.YES if isinstance(result, GUWitness) else GUStatus.NO
        if isinstance(result, GURejection):
            notes.append(result.reason)
    if not c.word.has_coefficients():
        notes.append("w has no coefficient letters (w lies in T)")
    return RelatorClassification(n, sums, pattern, unimodular, gu, form is not None, form, notes)


# --------------------------------------------------------------------------
# generalised unimodular witnesses


@dataclass(frozen=True)
class GUWitness:
    """Data showing ``w`` is generalised unimodular.

    ``R`` is recorded by normal generators and ``quotient`` presents ``T/R``
    over the generators of T.
    """

    t: FreeWord
    R_normal_generators: tuple[FreeWord, ...]
    S_generators: tuple[FreeWord, ...] | None
    S_exists: bool
    quotient: GroupDescriptor
    basis: StrongUPBasis
    notes: tuple[str, ...] = ()

    @property
    def hypothesis_only(self) -> bool:
        return self.basis is StrongUPBasis.DECLARED

    def to_json(self) -> dict:
        names = self.quotient.generators
        return {
            "t": self.t.format(names),
            "R": "normal closure of " + ", ".join(r.format(names) for r in self.R_normal_generators),
            "S_exists": self.S_exists,
            "quotient": self.quotient.to_json(),
            "strong_up_basis": self.basis.value,
            "notes": list(self.notes),
        }


@dataclass(frozen=True)
class GURejection:
    condition: str
    reason: str

    def to_json(self) -> dict:
        return {"rejected": True, "condition": self.condition, "reason": self.reason}


def generalised_unimodular_free_T(w: RelativeWord | CyclicWord) -> GUWitness | GURejection:
    """Automatic witness for free ``T = F(x_1..x_n)``.

    Accepted exactly when ``w'`` (w with coefficients erased) is nonempty and
    not a proper power.  Then ``R = <<w'>>`` has ``w'`` as a primitive
    element (Cohen-Lyndon), ``S`` is the complementary free factor, and
    ``T/R`` is the one-relator group ``<x | w'>``, locally indicable.
    """
    c = _cyclic(w)
    wp = erase_coefficients(c.word)
    names = c.alphabet.variables
    if not wp:
        return GURejection("t != 1", "w' is empty, and 1 = 1^2 counts as a proper power")
    pp = is_proper_power(wp)
    if pp.is_power:
        return GURejection(
            "w' not a proper power", f"w' = ({pp.root.format(names)})^{pp.k} is a proper power"
        )
    # w' is only defined up to conjugacy; keep the cyclically reduced core
    _, core = wp.cyclic_split()
    quotient = GroupDescriptor(names, (core,), ClassHint.GENERIC, True)
    n = len(names)
    return GUWitness(
        t=wp,
        R_normal_generators=(core,),
        S_generators=None,
        S_exists=n >= 2,
        quotient=quotient,
        basis=StrongUPBasis.LOCALLY_INDICABLE_BY_BRODSKII,
        notes=("S is the free complement of <w'> in <<w'>>; no basis is computed",),
    )


def declare_witness(
    T: GroupDescriptor,
    t: FreeWord,
    R_generators: Sequence[FreeWord],
    S_generators: Sequence[FreeWord] | None = None,
    *,
    free_factor_declared: bool = False,
    limits: Limits | None = None,
) -> GUWitness:
    """Record a caller-supplied witness after bounded consistency checks.

    ``R_generators`` generate R as a subgroup of T.  Checks performed:

    * ``t`` is nonempty and ``t`` lies in the normal closure of R (refuted by
      the rewriting engine of ``T/R`` or by its abelianization);
    * for free T, R is normal: each conjugate of a generator by a generator
      of T lies in R (Stallings membership, exact);
    * the free splitting ``R = <t> * S`` must be declared, it is not checked.
    """
    t = FreeWord(t.letters)
    if not t:
        raise InconsistentWitness("t must be nontrivial")
    gens = tuple(FreeWord(r.letters) for r in R_generators)
    quotient = GroupDescriptor(
        T.generators, T.relators + gens, ClassHint.GENERIC, False
    )
    notes = ["declared witness: downstream results are hypothesis-only"]
    if not abelianization(quotient).is_trivial_image(t):
        raise InconsistentWitness("t is not in R: its abelianized image survives in T/R")
    verdict = complete(quotient, limits or Limits(max_rules=500)).is_trivial(t)
    if verdict is Verdict.DISTINCT:
        raise InconsistentWitness("t is not in R")
    if verdict is Verdict.UNKNOWN:
        notes.append("t in R not confirmed within limits")
    if T.class_hint in (ClassHint.FREE, ClassHint.CYCLIC) and not T.relators:
        graph = SubgroupGraph(gens)
        if not graph.contains(t):
            raise InconsistentWitness("t is not in the subgroup generated by R")
        for r in gens:
            for i in range(T.rank):
                x = FreeWord((2 * i,))
                for conj in (r.conjugate(x), r.conjugate(x.inverse())):
                    if not graph.contains(conj):
                        raise InconsistentWitness(
                            f"R is not normal: {conj.format(T.generators)} is not in R"
                        )
        notes.append("normality of R checked exactly in free T")
    else:
        notes.append("normality of R not checked (T not free)")
    if not free_factor_declared:
        raise InconsistentWitness("the splitting R = <t> * S must be declared")
    return GUWitness(
        t=t,
        R_normal_generators=gens,
        S_generators=None if S_generators is None else tuple(S_generators),
        S_exists=bool(S_generators),
        quotient=quotient,
        basis=StrongUPBasis.DECLARED,
        notes=tuple(notes),
    )

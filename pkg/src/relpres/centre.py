"""Centres of one-relator relative presentations.

Three routes:

* one variable, unimodular ``w``: trivial unless ``w`` has a single t-letter
  (then ``<G, t | w> = G``) or G is cyclic (a one-relator group, reported
  but not computed);
* free T of rank >= 2 with ``w'`` not a proper power: trivial;
* general torsion-free T with G noncyclic: trivial unless ``q = 1``, where
  the group is an amalgam ``G *_{g_1 = t_1^-1} T`` or is isomorphic to G.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

from .analysis import GURejection, generalised_unimodular_free_T
from .errors import HypothesisUnverified, NotCyclicallyReduced
from .intlinalg import rank as lattice_rank
from .products import AmalgamatedProduct, afp_centre, centre_kind
from .rewriting import ClassHint, GroupDescriptor, Limits, abelianization
from .verdicts import Provenance, Verdict
from .words import (
    EMPTY,
    CyclicWord,
    FreeWord,
    RelativeWord,
    free_reduce,
    primitive_root,
)


class CentreKind(str, Enum):
    TRIVIAL = "TRIVIAL"
    ISOMORPHIC_TO_Z_G = "ISOMORPHIC_TO_Z_G"
    ONE_RELATOR_CENTRE_CASE = "ONE_RELATOR_CENTRE_CASE"
    AFP_CENTRE = "AFP_CENTRE"
    G_ISOMORPHIC = "G_ISOMORPHIC"
    UNKNOWN = "UNKNOWN"


class Case(str, Enum):
    CASE1 = "CASE1"  # q = 1, g_1 = 1
    CASE2 = "CASE2"  # q = 1, g_1 != 1
    CASE3 = "CASE3"  # q > 1, <t_1..t_q> cyclic
    CASE4 = "CASE4"  # <t_1..t_q> noncyclic
    UNKNOWN = "UNKNOWN"


CASE_STATEMENTS = {
    Case.CASE1: "q = 1 and g_1 = 1: Ghat = G * T/<<t>>",
    Case.CASE2: "q = 1 and g_1 != 1: Ghat = G *_{g_1 = t^-1} T",
    Case.CASE3: "q > 1 and <t_1..t_q> cyclic: Ghat = <G, t | w> *_<t> T",
    Case.CASE4: "<t_1..t_q> noncyclic: Ghat = T x|_{R = Rbar} K",
    Case.UNKNOWN: "cyclicity of <t_1..t_q> undecided",
}


@dataclass
class CentreVerdict:
    verdict: CentreKind
    applicable_cases: list[str] = field(default_factory=list)
    hypotheses_used: list[str] = field(default_factory=list)
    provenance: str = Provenance.THEOREM.value
    generators: list[str] = field(default_factory=list)
    witness: dict = field(default_factory=dict)
    notes: list[str] = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "verdict": self.verdict.value,
            "applicable_cases": list(self.applicable_cases),
            "hypotheses_used": list(self.hypotheses_used),
            "provenance": self.provenance,
            "generators": list(self.generators),
            "witness": self.witness,
            "notes": list(self.notes),
        }


def _unknown(reason: str, hyps: list[str]) -> CentreVerdict:
    return CentreVerdict(CentreKind.UNKNOWN, [], hyps, Provenance.UNKNOWN.value, notes=[reason])


# --------------------------------------------------------------------------
# properties of G and T on the decidable classes


def is_cyclic(d: GroupDescriptor) -> Verdict:
    """EQUAL means cyclic, DISTINCT noncyclic, UNKNOWN undecided."""
    if d.class_hint is ClassHint.CYCLIC or d.rank <= 1:
        return Verdict.EQUAL
    ab = abelianization(d)
    if not ab.is_cyclic():
        return Verdict.DISTINCT
    if d.class_hint is ClassHint.FREE and not d.relators:
        return Verdict.DISTINCT
    if d.class_hint is ClassHint.FG_ABELIAN:
        return Verdict.EQUAL  # an abelian group equals its abelianization
    return Verdict.UNKNOWN


def is_nontrivial(d: GroupDescriptor) -> Verdict:
    if d.rank == 0:
        return Verdict.DISTINCT
    if not abelianization(d).is_trivial():
        return Verdict.EQUAL
    return Verdict.UNKNOWN


def _is_free_T(T: GroupDescriptor) -> bool:
    return T.class_hint in (ClassHint.FREE, ClassHint.CYCLIC) and not T.relators


def _element_in_centre(d: GroupDescriptor, u: FreeWord) -> Verdict:
    kind = centre_kind(d)
    if not u:
        return Verdict.EQUAL
    if kind == "whole":
        return Verdict.EQUAL
    if kind == "trivial":
        return Verdict.DISTINCT
    return Verdict.UNKNOWN


def _meets_centre(d: GroupDescriptor, g: FreeWord) -> Verdict:
    """Is ``<g> & Z(d)`` nontrivial?  ``g`` is assumed nontrivial, d torsion-free."""
    kind = centre_kind(d)
    if kind == "whole":
        return Verdict.EQUAL
    if kind == "trivial":
        return Verdict.DISTINCT
    return Verdict.UNKNOWN


def subgroup_is_cyclic(T: GroupDescriptor, elements: list[FreeWord]) -> Verdict:
    """Whether ``<elements>`` is cyclic, for free or free abelian T."""
    elements = [FreeWord(free_reduce(u.letters)) for u in elements if u]
    if not elements:
        return Verdict.EQUAL
    if _is_free_T(T):
        roots = {primitive_root(u)[0] for u in elements}
        base = next(iter(roots))
        return Verdict.EQUAL if roots <= {base, base.inverse()} else Verdict.DISTINCT
    if T.class_hint is ClassHint.FG_ABELIAN:
        ab = abelianization(T)
        if ab.torsion:
            return Verdict.UNKNOWN
        vecs = [ab.coordinates(u) for u in elements]
        return Verdict.EQUAL if lattice_rank(vecs, len(vecs[0])) <= 1 else Verdict.DISTINCT
    return Verdict.UNKNOWN


# --------------------------------------------------------------------------
# case split for general T


@dataclass
class CaseSplit:
    case: Case
    statement: str
    q: int
    t: FreeWord
    g1: FreeWord | None = None
    t1: FreeWord | None = None

    def to_json(self, G: GroupDescriptor, T: GroupDescriptor) -> dict:
        out = {"case": self.case.value, "statement": self.statement, "q": self.q, "t": self.t.format(T.generators)}
        if self.g1 is not None:
            out["g1"] = self.g1.format(G.generators)
            out["t1"] = self.t1.format(T.generators)
        return out


def _cyclic_of(w: RelativeWord) -> CyclicWord:
    if not w.is_cyclically_reduced():
        raise NotCyclicallyReduced(f"{w.format()} is not cyclically reduced")
    return CyclicWord(w)


def theorem2_case_split(G: GroupDescriptor, T: GroupDescriptor, w: RelativeWord) -> CaseSplit:
    """Which structural description applies to ``<G, T | w>``."""
    c = _cyclic_of(w)
    syl = c.syllables
    q = len(syl)
    t = EMPTY
    for s in syl:
        t = t * s.t
    t = FreeWord(free_reduce(t.letters))
    if q == 1:
        g1, t1 = syl[0].g, syl[0].t
        case = Case.CASE1 if not g1 else Case.CASE2
        return CaseSplit(case, CASE_STATEMENTS[case], q, t, g1, t1)
    cyc = subgroup_is_cyclic(T, [s.t for s in syl])
    case = {Verdict.EQUAL: Case.CASE3, Verdict.DISTINCT: Case.CASE4}[cyc] if cyc is not Verdict.UNKNOWN else Case.UNKNOWN
    return CaseSplit(case, CASE_STATEMENTS[case], q, t)


# --------------------------------------------------------------------------
# the braid group on three strands as an amalgam


B3_DICTIONARY = {
    "x": "g t g",
    "y": "g t",
    "g": "y^-1 x",
    "t": "x^-1 y^2",
    "centre": "(g t)^3 = y^3 = x^2",
}


def b3_dictionary_check(limits: Limits | None = None) -> dict:
    """``<g, t | gtg = tgt>`` against ``<x> *_{x^2 = y^3} <y>``, checked exactly.

    The substitutions are mutually inverse on generators after free
    reduction, the braid relator maps to a cyclic permutation of
    ``(x^2 y^-3)^+-1``, and ``x^2 y^-3`` maps to ``gtg gtg (gt)^-3`` which
    becomes trivial after one application of the braid relation.
    """
    gt = ("g", "t")
    xy = ("x", "y")
    g, t = (FreeWord.parse(s, gt) for s in ("g", "t"))
    x_img, y_img = FreeWord.parse("g t g", gt), FreeWord.parse("g t", gt)
    g_img, t_img = FreeWord.parse("y^-1 x", xy), FreeWord.parse("x^-1 y^2", xy)

    def sub(word: FreeWord, images: list[FreeWord]) -> FreeWord:
        out: list[int] = []
        for code in word.letters:
            img = images[code >> 1]
            out.extend((img.inverse() if code & 1 else img).letters)
        return FreeWord(free_reduce(out))

    round_trip = sub(sub(g, [g_img, t_img]), [x_img, y_img]) == g and sub(
        sub(t, [g_img, t_img]), [x_img, y_img]
    ) == t
    x, y = FreeWord.parse("x", xy), FreeWord.parse("y", xy)
    back = sub(sub(x, [x_img, y_img]), [g_img, t_img]) == x and sub(
        sub(y, [x_img, y_img]), [g_img, t_img]
    ) == y
    braid = FreeWord.parse("t g t g^-1 t^-1 g^-1", gt)
    image = sub(braid, [g_img, t_img])
    _, core = image.cyclic_split()
    torus = FreeWord.parse("x^2 y^-3", xy)
    rotations = set()
    for r in (torus, torus.inverse()):
        for k in range(len(r)):
            rotations.add(FreeWord(r.letters[k:] + r.letters[:k]))
    relator_maps = core in rotations
    # gtg gtg (gt)^-3 with the second gtg replaced by tgt
    one_step = FreeWord(free_reduce((FreeWord.parse("g t g t g t", gt) * FreeWord.parse("g t", gt).inverse() ** 3).letters))
    ap = AmalgamatedProduct.cyclic(
        GroupDescriptor.free(["x"]), GroupDescriptor.free(["y"]), FreeWord.parse("x^2", ["x"]), FreeWord.parse("y^3", ["y"]),
        limits=limits,
    )
    centre = afp_centre(ap)
    return {
        "dictionary": dict(B3_DICTIONARY),
        "generators_round_trip": round_trip and back,
        "relator_maps_to_relator": relator_maps,
        "torus_relator_trivial_in_braid_group": not one_step,
        "afp_centre_decided": centre.decided,
        "afp_centre_in_A": [c.format(["x"]) for c in centre.in_A],
        "afp_centre_in_B": [c.format(["y"]) for c in centre.in_B],
    }


# --------------------------------------------------------------------------
# classification


def _normalise_unimodular(w: RelativeWord) -> tuple[RelativeWord, int]:
    s = w.exponent_sum(0)
    return (w.inverse() if s == -1 else w), s


def _single_letter_witness(c: CyclicWord) -> dict:
    """For ``w = g t g'`` (cyclically ``g' g t``): ``t -> g^-1 g'^-1`` kills w."""
    form = c.syllable_form()
    (syl,) = c.syllables
    # syllable form is ``h t`` with h = g' g; take g = 1, g' = h
    h = syl.g
    image = h.inverse()
    a = form.alphabet
    letters: list[int] = []
    for code in form.letters:
        if a.is_variable(code):
            img = image if not code & 1 else image.inverse()
            letters.extend(img.letters)
        else:
            letters.append(code)
    killed = not free_reduce(letters)
    return {
        "isomorphism": f"t -> {image.format(a.coefficients)}",
        "relator_image": "1" if killed else "nontrivial",
        "exact": killed,
    }


def classify_centre(
    G: GroupDescriptor,
    T: GroupDescriptor | int,
    w: RelativeWord,
    *,
    require_hypotheses: bool = False,
    limits: Limits | None = None,
) -> CentreVerdict:
    """Centre of ``<G, T | w>`` on the routes where it is determined.

    ``T`` is a descriptor or the rank of a free group.  Missing hypotheses
    give an UNKNOWN verdict, or raise :class:`HypothesisUnverified` when
    ``require_hypotheses`` is set.
    """
    if isinstance(T, int):
        T = GroupDescriptor.free(w.alphabet.variables)
    if tuple(T.generators) != tuple(w.alphabet.variables):
        raise ValueError("T's generators must be the word's variables")
    c = _cyclic_of(w)
    hyps: list[str] = []

    def missing(reason: str) -> CentreVerdict:
        if require_hypotheses:
            raise HypothesisUnverified(reason)
        return _unknown(reason, hyps)

    if not G.declared_torsion_free:
        return missing("G is not declared torsion-free")
    hyps.append("G torsion-free (declared)")
    if _is_free_T(T):
        return _free_route(G, T, c, hyps, missing, limits)
    if not T.declared_torsion_free:
        return missing("T is not declared torsion-free")
    hyps.append("T torsion-free (declared)")
    return _general_route(G, T, c, hyps, missing, limits)


def _free_route(G, T, c: CyclicWord, hyps, missing, limits) -> CentreVerdict:
    n = T.rank
    gu = generalised_unimodular_free_T(c)
    if isinstance(gu, GURejection):
        return missing(f"w is not generalised unimodular: {gu.reason}")
    if n >= 2:
        hyps.append("w' not a proper power (exact)")
        nt = is_nontrivial(G)
        if nt is Verdict.DISTINCT:
            return missing("G is trivial; the group is a one-relator group not covered here")
        if nt is Verdict.UNKNOWN:
            return missing("nontriviality of G undecided")
        hyps.append("G nontrivial (abelianization)")
        out = CentreVerdict(CentreKind.TRIVIAL, ["MULTIVARIABLE: n >= 2 gives trivial centre"], hyps)
        if is_cyclic(G) is Verdict.DISTINCT:
            split = theorem2_case_split(G, T, c.word)
            out.applicable_cases.append(f"{split.case.value}: {split.statement}")
            if split.case is Case.CASE2:
                return _case2(G, T, split, out, limits)
        return out
    # one variable
    w = c.word
    if abs(w.exponent_sum(0)) != 1:
        return missing("w is not unimodular")
    if w.exponent_sum(0) == -1:
        c = CyclicWord(w.inverse())
        hyps.append("w replaced by w^-1 to make the exponent sum +1")
    hyps.append("w unimodular (exact)")
    cases = []
    verdict = None
    witness = {}
    single = len(c.syllables) == 1 and len(c.syllables[0].t) == 1
    if single:
        cases.append("UNIMODULAR_SINGLE_LETTER: w = g t g', so <G, t | w> = G and the centre is Z(G)")
        witness = _single_letter_witness(c)
        verdict = CentreKind.ISOMORPHIC_TO_Z_G
    cyc = is_cyclic(G)
    if cyc is Verdict.EQUAL:
        cases.append("UNIMODULAR_CYCLIC_G: one-relator group; centre not computed")
        if verdict is None:
            verdict = CentreKind.ONE_RELATOR_CENTRE_CASE
            witness = {"braid_group_check": b3_dictionary_check(limits)} if _is_braid_relator(c) else {}
    if verdict is None:
        if cyc is Verdict.UNKNOWN:
            return missing("cyclicity of G undecided")
        hyps.append("G noncyclic (abelianization)")
        cases.append("UNIMODULAR_GENERIC: centre trivial")
        verdict = CentreKind.TRIVIAL
    out = CentreVerdict(verdict, cases, hyps, witness=witness)
    if verdict is CentreKind.ISOMORPHIC_TO_Z_G:
        kind = centre_kind(G)
        out.notes.append(f"Z(G) is {kind}" if kind else "Z(G) not computed")
        out.provenance = Provenance.EXACT.value if witness.get("exact") else Provenance.THEOREM.value
    if verdict is CentreKind.ONE_RELATOR_CENTRE_CASE:
        out.notes.append("the centre of a one-relator group with centre is infinite cyclic")
    return out


def _is_braid_relator(c: CyclicWord) -> bool:
    a = c.alphabet
    if len(a.coefficients) != 1:
        return False
    g, t = a.coefficients[0], a.variables[0]
    braid = CyclicWord(a.parse(f"{t} {g} {t} {g}^-1 {t}^-1 {g}^-1"))
    return c == braid or c == CyclicWord(braid.word.inverse())


def _case2(G, T, split: CaseSplit, out: CentreVerdict, limits) -> CentreVerdict:
    ap = AmalgamatedProduct.cyclic(G, T, split.g1, split.t1.inverse(), limits=limits)
    centre = afp_centre(ap)
    out.witness["amalgam"] = "G *_{g_1 = t_1^-1} T"
    out.witness["afp_centre"] = centre.to_json(ap)
    if centre.decided:
        out.verdict = CentreKind.AFP_CENTRE
        # reported as elements of G, the first factor
        out.generators = [a.format(G.generators) for a in centre.in_A]
        out.provenance = Provenance.THEOREM.value
    return out


def _general_route(G, T, c: CyclicWord, hyps, missing, limits) -> CentreVerdict:
    cyc = is_cyclic(G)
    if cyc is Verdict.EQUAL:
        return missing("G is cyclic: the general-T statement needs G noncyclic")
    if cyc is Verdict.UNKNOWN:
        return missing("cyclicity of G undecided")
    hyps.append("G noncyclic (abelianization)")
    hyps.append("w generalised unimodular (assumed for general T)")
    split = theorem2_case_split(G, T, c.word)
    cases = [f"{split.case.value}: {split.statement}"]
    if split.q >= 2:
        return CentreVerdict(CentreKind.TRIVIAL, cases, hyps, notes=["q >= 2 forces a trivial centre"])
    if is_cyclic(T) is Verdict.EQUAL:
        return CentreVerdict(
            CentreKind.G_ISOMORPHIC, cases, hyps, notes=["T = <t_1> and the group is isomorphic to G"]
        )
    if split.case is Case.CASE1:
        return CentreVerdict(CentreKind.TRIVIAL, cases, hyps)
    central = _element_in_centre(T, split.t1)
    meets = _meets_centre(G, split.g1)
    base = CentreKind.TRIVIAL if Verdict.DISTINCT in (central, meets) else CentreKind.UNKNOWN
    out = _case2(G, T, split, CentreVerdict(base, cases, hyps), limits)
    if out.verdict is CentreKind.UNKNOWN:
        return missing("t_1 in Z(T) or <g_1> & Z(G) != 1 undecided")
    return out


# --------------------------------------------------------------------------


def lemma5_cyclic_from_squares(G: GroupDescriptor) -> bool | Verdict:
    """For torsion-free G: ``<G^2>`` cyclic implies G cyclic.

    On free abelian and free groups ``<G^2>`` has the same rank as G, so
    the answer is ``rank <= 1``.  Other classes give ``Verdict.UNKNOWN``.
    """
    if G.class_hint is ClassHint.CYCLIC:
        return True
    if G.class_hint is ClassHint.FG_ABELIAN:
        ab = abelianization(G)
        if ab.torsion:
            return Verdict.UNKNOWN
        return ab.rank <= 1
    if G.class_hint is ClassHint.FREE and not G.relators:
        return G.rank <= 1
    return Verdict.UNKNOWN

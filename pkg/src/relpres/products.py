"""Amalgamated free products, iterated amalgams and amalgamated semidirect products.

Everything undecidable in general (injectivity of natural maps, freeness of
subgroup families) is checked on words up to a fixed length and reported as
``HOLDS_AT_DEPTH_d``, never as a theorem.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Callable, Iterable, Mapping, Sequence

from . import intlinalg
from .errors import (
    ConditionsFail,
    ConsistencyFail,
    IdentityViolation,
    InconsistentDescriptor,
    NotStrict,
    OracleUnknown,
    SubgroupNotProper,
)
from .rewriting import (
    ClassHint,
    GroupDescriptor,
    Limits,
    RewriteEngine,
    abelianization,
    complete,
)
from .subgroups import SubgroupGraph
from .verdicts import Verdict, checked_at, holds_at
from .words import EMPTY, FreeWord, reduced_words

# --------------------------------------------------------------------------
# word plumbing


def shift(w: FreeWord, k: int) -> FreeWord:
    """Renumber generators by ``+k`` (embedding a factor into a free product)."""
    return FreeWord(tuple(c + 2 * k for c in w.letters))


def substitute(w: FreeWord, images: Sequence[FreeWord]) -> FreeWord:
    """Image of ``w`` under the homomorphism sending generator ``i`` to ``images[i]``."""
    out: list[int] = []
    for c in w.letters:
        img = images[c >> 1]
        out.extend(img.inverse().letters if c & 1 else img.letters)
    return FreeWord(tuple(out))


def word_from_vector(v: Sequence[int]) -> FreeWord:
    codes: list[int] = []
    for i, e in enumerate(v):
        codes.extend([2 * i + (e < 0)] * abs(e))
    return FreeWord(tuple(codes))


def free_product(descs: Sequence[GroupDescriptor]) -> GroupDescriptor:
    gens: list[str] = []
    rels: list[FreeWord] = []
    for d in descs:
        rels.extend(shift(r, len(gens)) for r in d.relators)
        gens.extend(d.generators)
    tf = all(d.declared_torsion_free for d in descs)
    return GroupDescriptor(tuple(gens), tuple(rels), ClassHint.GENERIC, tf)


def _is_abelian_hint(d: GroupDescriptor) -> bool:
    if d.class_hint in (ClassHint.CYCLIC, ClassHint.FG_ABELIAN):
        return True
    return d.rank <= 1 and (d.class_hint is ClassHint.FREE or not d.relators)


def _is_free(d: GroupDescriptor) -> bool:
    return not d.relators and d.class_hint in (ClassHint.FREE, ClassHint.CYCLIC, ClassHint.GENERIC)


def centre_kind(d: GroupDescriptor) -> str | None:
    """``"whole"``, ``"trivial"``, or None when the centre is not known."""
    if d.declared_centre:
        return d.declared_centre
    if _is_abelian_hint(d):
        return "whole"
    if _is_free(d) and d.rank >= 2:
        return "trivial"
    return None


# --------------------------------------------------------------------------
# coset representative oracles
#
# An oracle maps a factor word ``a`` to ``(h, r)`` with ``a = h^phi * r``:
# ``h`` is a word over the generators of H and ``r`` a canonical
# representative of the right coset ``Ha``; ``r`` is empty iff ``a`` lies in
# H.  ``None`` means the oracle could not decide.

CosetOracle = Callable[[FreeWord], "tuple[FreeWord, FreeWord] | None"]


class AbelianCosetOracle:
    """Cosets of ``H`` in an abelian factor, by Hermite reduction."""

    def __init__(self, factor: GroupDescriptor, h_images: Sequence[FreeWord]):
        self.n = factor.rank
        self.k = len(h_images)
        rows = [h.exponent_vector(self.n) for h in h_images]
        rows += [r.exponent_vector(self.n) for r in factor.relators]
        self.hermite = intlinalg.hermite(rows, self.n)

    def __call__(self, a: FreeWord) -> tuple[FreeWord, FreeWord]:
        v = a.exponent_vector(self.n)
        rep, _ = self.hermite.reduce(v)
        y = self.hermite.solve([x - r for x, r in zip(v, rep)])
        return word_from_vector(y[: self.k]), word_from_vector(rep)


class TrivialSubgroupOracle:
    """Cosets of the trivial subgroup: the element itself, in normal form."""

    def __init__(self, engine: RewriteEngine):
        self.engine = engine

    def __call__(self, a: FreeWord) -> tuple[FreeWord, FreeWord] | None:
        verdict = self.engine.is_trivial(a)
        if verdict is Verdict.EQUAL:
            return EMPTY, EMPTY
        if verdict is Verdict.UNKNOWN:
            return None
        return EMPTY, self.engine.normal_form(a)


def default_oracle(
    factor: GroupDescriptor, h_images: Sequence[FreeWord], limits: Limits | None = None
) -> CosetOracle | None:
    if not any(h_images):
        return TrivialSubgroupOracle(complete(factor, limits))
    if _is_abelian_hint(factor):
        return AbelianCosetOracle(factor, h_images)
    return None


# --------------------------------------------------------------------------
# amalgamated free products

SIDES = ("A", "B")


@dataclass
class AmalgamatedProduct:
    """``A *_H B`` with ``H`` given by generator images in both factors."""

    A: GroupDescriptor
    B: GroupDescriptor
    H: GroupDescriptor
    to_A: tuple[FreeWord, ...]
    to_B: tuple[FreeWord, ...]
    oracle_A: CosetOracle | None = None
    oracle_B: CosetOracle | None = None
    limits: Limits = field(default_factory=Limits)
    notes: list[str] = field(default_factory=list)

    def __post_init__(self):
        self.to_A = tuple(self.to_A)
        self.to_B = tuple(self.to_B)
        if not len(self.to_A) == len(self.to_B) == self.H.rank:
            raise InconsistentDescriptor("H generator images must match H's rank")
        if self.oracle_A is None:
            self.oracle_A = default_oracle(self.A, self.to_A, self.limits)
        if self.oracle_B is None:
            self.oracle_B = default_oracle(self.B, self.to_B, self.limits)
        # subgroup maps must kill H's relators
        for side, images in (("A", self.to_A), ("B", self.to_B)):
            engine = self.engine(side)
            for r in self.H.relators:
                verdict = engine.is_trivial(substitute(r, images))
                if verdict is Verdict.DISTINCT:
                    raise InconsistentDescriptor(f"H -> {side} is not a homomorphism")
                if verdict is Verdict.UNKNOWN:
                    self.notes.append(f"H -> {side}: relator image not confirmed trivial")

    @classmethod
    def cyclic(cls, A: GroupDescriptor, B: GroupDescriptor, a: FreeWord, b: FreeWord, **kw):
        """Amalgamate ``<a>`` in A with ``<b>`` in B along ``a = b``."""
        return cls(A, B, GroupDescriptor.free(["H1"]), (a,), (b,), **kw)

    def factor(self, side: str) -> GroupDescriptor:
        return self.A if side == "A" else self.B

    def images(self, side: str) -> tuple[FreeWord, ...]:
        return self.to_A if side == "A" else self.to_B

    def oracle(self, side: str) -> CosetOracle | None:
        return self.oracle_A if side == "A" else self.oracle_B

    def engine(self, side: str) -> RewriteEngine:
        return complete(self.factor(side), self.limits)

    def h_engine(self) -> RewriteEngine:
        return complete(self.H, self.limits)

    def h_to(self, side: str, h: FreeWord) -> FreeWord:
        return substitute(h, self.images(side))

    def presentation(self) -> GroupDescriptor:
        names = self.A.generators + self.B.generators
        if len(set(names)) != len(names):
            raise InconsistentDescriptor("factor generator names must be distinct")
        k = self.A.rank
        rels = list(self.A.relators) + [shift(r, k) for r in self.B.relators]
        rels += [a * shift(b, k).inverse() for a, b in zip(self.to_A, self.to_B)]
        tf = self.A.declared_torsion_free and self.B.declared_torsion_free
        return GroupDescriptor(names, tuple(rels), ClassHint.GENERIC, tf)

    def embed(self, side: str, w: FreeWord) -> FreeWord:
        """A factor word as a word of :meth:`presentation`."""
        return w if side == "A" else shift(w, self.A.rank)


@dataclass(frozen=True)
class AFPNormalForm:
    """``h * r_1 * ... * r_k`` with alternating nontrivial coset representatives."""

    h: FreeWord
    reps: tuple[tuple[str, FreeWord], ...]

    @property
    def length(self) -> int:
        return len(self.reps)

    def is_identity(self) -> bool:
        return not self.h and not self.reps

    def to_word(self, ap: AmalgamatedProduct) -> FreeWord:
        w = ap.embed("A", ap.h_to("A", self.h))
        for side, r in self.reps:
            w = w * ap.embed(side, r)
        return w


def afp_normal_form(ap: AmalgamatedProduct, word: Iterable[tuple[str, FreeWord]]) -> AFPNormalForm:
    """Reduce a sequence of factor elements to normal form.

    Raises :class:`OracleUnknown` when a coset decision is out of reach.
    """
    items = [(side, FreeWord(w.letters)) for side, w in word]
    carry = EMPTY  # H-word sitting to the left of ``out``
    out: list[tuple[str, FreeWord]] = []
    for side, w in reversed(items):
        if side not in SIDES:
            raise ValueError(f"side must be 'A' or 'B', not {side!r}")
        oracle = ap.oracle(side)
        if oracle is None:
            raise OracleUnknown(f"no coset oracle for H in factor {side}")
        y = w * ap.h_to(side, carry)
        if out and out[0][0] == side:
            y = y * out.pop(0)[1]
        result = oracle(y)
        if result is None:
            raise OracleUnknown(f"coset of {y!r} in factor {side} undecided")
        carry, rep = result
        if rep:
            out.insert(0, (side, rep))
    engine = ap.h_engine()
    if engine.status.value == "COMPLETE":
        carry = engine.normal_form(carry)
    return AFPNormalForm(carry, tuple(out))


def afp_equal(ap: AmalgamatedProduct, u, v) -> Verdict:
    """Compare two factor sequences via their normal forms."""
    try:
        nu, nv = afp_normal_form(ap, u), afp_normal_form(ap, v)
    except OracleUnknown:
        return Verdict.UNKNOWN
    if [s for s, _ in nu.reps] != [s for s, _ in nv.reps]:
        return Verdict.DISTINCT
    verdict = Verdict.EQUAL
    for (side, r1), (_, r2) in zip(nu.reps, nv.reps):
        if r1 != r2:
            verdict = verdict & ap.engine(side).equal(r1, r2)
    if verdict is not Verdict.DISTINCT:
        verdict = verdict & ap.h_engine().equal(nu.h, nv.h)
    return verdict


def properness_witness(
    factor: GroupDescriptor, h_images: Sequence[FreeWord], oracle: CosetOracle | None
) -> FreeWord | None:
    """A generator of ``factor`` outside ``H``; None if undecided.

    Raises :class:`SubgroupNotProper` when H provably is the whole factor.
    """
    gens = [FreeWord((2 * i,)) for i in range(factor.rank)]
    if oracle is not None:
        undecided = False
        for x in gens:
            result = oracle(x)
            if result is None:
                undecided = True
            elif result[1]:
                return x
        if not undecided:
            raise SubgroupNotProper("the amalgamated subgroup is the whole factor")
        return None
    if _is_free(factor):
        graph = SubgroupGraph(h_images)
        for x in gens:
            if not graph.contains(x):
                return x
        raise SubgroupNotProper("the amalgamated subgroup is the whole factor")
    return None


@dataclass
class AFPCentre:
    decided: bool
    generators: tuple[FreeWord, ...] = ()  # over H
    in_A: tuple[FreeWord, ...] = ()
    in_B: tuple[FreeWord, ...] = ()
    witnesses: dict[str, FreeWord] = field(default_factory=dict)
    checks: dict[str, str] = field(default_factory=dict)
    notes: list[str] = field(default_factory=list)

    @property
    def trivial(self) -> bool:
        return self.decided and not self.generators

    def to_json(self, ap: AmalgamatedProduct | None = None) -> dict:
        def fmt(ws, names):
            return [w.format(names) if names else repr(w) for w in ws]

        out = {"decided": self.decided, "trivial": self.trivial, "notes": list(self.notes)}
        if ap is not None:
            out["generators"] = fmt(self.generators, ap.H.generators)
            out["in_A"] = fmt(self.in_A, ap.A.generators)
            out["in_B"] = fmt(self.in_B, ap.B.generators)
            out["witnesses"] = {
                s: w.format(ap.factor(s).generators) for s, w in self.witnesses.items()
            }
        out["checks"] = dict(self.checks)
        return out


def afp_centre(ap: AmalgamatedProduct, depth_check: bool = True) -> AFPCentre:
    """Centre of ``A *_H B`` with H proper in both factors.

    It is the set of elements of H central in both factors.  Each factor's
    contribution is a sublattice of H-coordinates: everything when the factor
    is abelian, nothing when its centre is trivial.  Their intersection is
    taken exactly.
    """
    result = AFPCentre(decided=False)
    for side in SIDES:
        w = properness_witness(ap.factor(side), ap.images(side), ap.oracle(side))
        if w is None:
            result.notes.append(f"properness of H in {side} undecided")
            return result
        result.witnesses[side] = w
    kinds = {side: centre_kind(ap.factor(side)) for side in SIDES}
    for side, kind in kinds.items():
        if kind is None:
            result.notes.append(f"centre of factor {side} not computable from its class")
            return result
    k = ap.H.rank
    lattices = [intlinalg.identity(k) if kinds[s] == "whole" else [] for s in SIDES]
    if all(kinds[s] == "whole" for s in SIDES):
        # H sits inside an abelian factor, so H-words are determined by exponents
        basis = intlinalg.intersection(lattices[0], lattices[1], k)
    else:
        basis = []
    result.decided = True
    gens = tuple(word_from_vector(row) for row in basis)
    # drop generators that are trivial in H
    h_engine = ap.h_engine()
    gens = tuple(g for g in gens if h_engine.is_trivial(g) is not Verdict.EQUAL)
    result.generators = gens
    result.in_A = tuple(ap.h_to("A", g) for g in gens)
    result.in_B = tuple(ap.h_to("B", g) for g in gens)
    if depth_check and gens:
        result.checks.update(_centre_commutes(ap, result))
    return result


def _centre_commutes(ap: AmalgamatedProduct, centre: AFPCentre) -> dict[str, str]:
    """Check centre generators commute with all factor generators in the amalgam.

    Normal forms decide this exactly when both coset oracles exist; the
    rewriting engine of the amalgam presentation is the fallback.
    """
    pres = ap.presentation()
    out = {}
    engine = None
    for z in centre.in_A:
        for i in range(pres.rank):
            side = "A" if i < ap.A.rank else "B"
            x = FreeWord((2 * (i if side == "A" else i - ap.A.rank),))
            verdict = afp_equal(ap, [("A", z), (side, x)], [(side, x), ("A", z)])
            if verdict is Verdict.UNKNOWN:
                if engine is None:
                    engine = complete(pres, Limits(max_rules=2000, max_word_length=64))
                zz, xx = ap.embed("A", z), ap.embed(side, x)
                verdict = engine.equal(zz * xx, xx * zz)
            out[f"[{ap.embed('A', z).format(pres.generators)}, {pres.generators[i]}]"] = verdict.value
    return out


# --------------------------------------------------------------------------
# free iterated amalgamated products


@dataclass(frozen=True)
class FIAPLeaf:
    name: str
    group: GroupDescriptor


@dataclass(frozen=True)
class AmalgamationRecord:
    """``M_{j0} *_{H = H^phi} M_previous`` for the leaf ``j0``.

    ``H`` is generated by ``subgroup`` (words in the leaf); ``images`` are the
    corresponding words in the generators of the previous leaves.
    """

    j0: str
    subgroup: tuple[FreeWord, ...]
    images: tuple[FreeWord, ...]
    proper_witness: FreeWord | None


@dataclass(frozen=True)
class FIAPTree:
    leaves: tuple[FIAPLeaf, ...]
    records: tuple[AmalgamationRecord, ...]
    strict: bool

    @property
    def is_trivial_group(self) -> bool:
        return not self.leaves

    def offsets(self) -> list[int]:
        out, k = [], 0
        for leaf in self.leaves:
            out.append(k)
            k += leaf.group.rank
        return out

    def presentation(self) -> GroupDescriptor:
        gens: list[str] = []
        rels: list[FreeWord] = []
        for leaf, rec in zip(self.leaves, self.records):
            k = len(gens)
            rels.extend(shift(r, k) for r in leaf.group.relators)
            rels.extend(shift(h, k) * img.inverse() for h, img in zip(rec.subgroup, rec.images))
            gens.extend(leaf.group.generators)
        if len(set(gens)) != len(gens):
            raise InconsistentDescriptor("leaf generator names must be distinct")
        return GroupDescriptor(tuple(gens), tuple(rels), ClassHint.GENERIC, False)

    def extend(
        self,
        leaf: FIAPLeaf,
        subgroup: Sequence[FreeWord] = (),
        images: Sequence[FreeWord] = (),
        strict: bool = False,
    ) -> "FIAPTree":
        """One more step of the chain ``M_K -> M_K'`` (the direct-limit clause)."""
        rec = _record(leaf, subgroup, images, strict)
        return FIAPTree(
            self.leaves + (leaf,), self.records + (rec,), self.strict and rec.proper_witness is not None
        )

    def render(self) -> str:
        if not self.leaves:
            return "{1}"
        text = "{1}"
        for leaf, rec in zip(self.leaves, self.records):
            sub = ", ".join(repr(h) for h in rec.subgroup) or "1"
            text = f"({leaf.name} *_<{sub}> {text})"
        return text

    def to_json(self) -> dict:
        return {
            "leaves": [leaf.name for leaf in self.leaves],
            "records": [
                {
                    "j0": r.j0,
                    "H": [h.format(self._leaf(r.j0).group.generators) for h in r.subgroup],
                    "proper_witness": None
                    if r.proper_witness is None
                    else r.proper_witness.format(self._leaf(r.j0).group.generators),
                }
                for r in self.records
            ],
            "strict": self.strict,
        }

    def _leaf(self, name: str) -> FIAPLeaf:
        return next(leaf for leaf in self.leaves if leaf.name == name)


def _record(leaf: FIAPLeaf, subgroup, images, strict: bool) -> AmalgamationRecord:
    subgroup = tuple(FreeWord(h.letters) for h in subgroup)
    images = tuple(FreeWord(h.letters) for h in images)
    if len(subgroup) != len(images):
        raise InconsistentDescriptor("each subgroup generator needs an image")
    oracle = default_oracle(leaf.group, subgroup)
    try:
        witness = properness_witness(leaf.group, subgroup, oracle)
    except SubgroupNotProper:
        witness = None
    if strict and witness is None:
        raise NotStrict(f"no element of {leaf.name} outside the amalgamated subgroup was found")
    return AmalgamationRecord(leaf.name, subgroup, images, witness)


def fiap_build(
    leaves: Sequence[FIAPLeaf | tuple[str, GroupDescriptor]],
    plan: Sequence[tuple[Sequence[FreeWord], Sequence[FreeWord]]] = (),
    strict: bool = False,
) -> FIAPTree:
    """Build ``M_J`` leaf by leaf.

    The first leaf is amalgamated with the trivial group (``{1} * M``); step
    ``k`` of ``plan`` gives ``(H generators in leaf k, their images in the
    previous leaves)`` for ``k = 1, 2, ...``.  An empty ``leaves`` is the
    trivial group.
    """
    leaves = tuple(leaf if isinstance(leaf, FIAPLeaf) else FIAPLeaf(*leaf) for leaf in leaves)
    if leaves and len(plan) != len(leaves) - 1:
        raise ValueError("plan needs one amalgamation per leaf after the first")
    tree = FIAPTree((), (), True)
    for i, leaf in enumerate(leaves):
        sub, imgs = ((), ()) if i == 0 else plan[i - 1]
        tree = tree.extend(leaf, sub, imgs, strict)
    return tree


def central_elements_at_depth(
    tree: FIAPTree, depth: int, limits: Limits | None = None
) -> tuple[list[FreeWord], bool]:
    """Words of length <= depth verified central in ``M_J``.

    Returns ``(central, complete)`` where ``complete`` says every candidate
    was decided.
    """
    pres = tree.presentation()
    engine = complete(pres, limits or Limits(max_rules=2000))
    gens = [FreeWord((2 * i,)) for i in range(pres.rank)]
    central, decided = [], True
    seen: set[FreeWord] = set()
    for codes in reduced_words(pres.rank, depth, 1):
        w = FreeWord(codes)
        nf = engine.normal_form(w)
        if nf in seen or not nf:
            continue
        seen.add(nf)
        verdict = Verdict.EQUAL
        for x in gens:
            verdict = verdict & engine.equal(w * x, x * w)
            if verdict is Verdict.DISTINCT:
                break
        if verdict is Verdict.EQUAL:
            if engine.is_trivial(w) is not Verdict.EQUAL:
                central.append(w)
        elif verdict is Verdict.UNKNOWN:
            decided = False
    return central, decided


def central_elements_in_leaves(tree: FIAPTree, depth: int = 4, limits: Limits | None = None) -> dict:
    """Each central element found lies in the centre of some leaf.

    A central word is matched against leaf words of length <= depth that are
    central in their leaf.
    """
    pres = tree.presentation()
    engine = complete(pres, limits or Limits(max_rules=2000))
    central, decided = central_elements_at_depth(tree, depth, limits)
    offsets = tree.offsets()
    leaf_centrals: list[tuple[str, FreeWord]] = []
    for leaf, off in zip(tree.leaves, offsets):
        leng = complete(leaf.group, limits)
        lgens = [FreeWord((2 * i,)) for i in range(leaf.group.rank)]
        for codes in reduced_words(leaf.group.rank, depth, 1):
            u = FreeWord(codes)
            if all(leng.equal(u * x, x * u) is Verdict.EQUAL for x in lgens):
                leaf_centrals.append((leaf.name, shift(u, off)))
    located = {}
    for z in central:
        where = next(
            (name for name, u in leaf_centrals if engine.equal(z, u) is Verdict.EQUAL), None
        )
        located[z.format(pres.generators)] = where
    ok = all(v is not None for v in located.values())
    return {
        "central_found": len(central),
        "located": located,
        "holds": ok,
        "status": holds_at(depth) if ok and decided else ("REFUTED" if not ok else "UNKNOWN"),
    }


# --------------------------------------------------------------------------
# families of subsets and the min/max conditions


@dataclass
class OmegaFamily:
    """Index set ``I``, subsets ``omega``, factor groups and kernels ``N_omega``.

    Factor generator names must be distinct across factors; ``N`` maps a
    subset to relators written over the generators of its factors.
    """

    I: tuple[str, ...]
    omega: tuple[frozenset[str], ...]
    factors: dict[str, GroupDescriptor]
    N: dict[frozenset[str], tuple[FreeWord, ...]] = field(default_factory=dict)

    def __post_init__(self):
        self.I = tuple(self.I)
        seen, dedup = set(), []
        for w in self.omega:
            w = frozenset(w)
            if not w:
                raise InconsistentDescriptor("each omega must be nonempty")
            if not w <= set(self.I):
                raise InconsistentDescriptor(f"omega {sorted(w)} is not inside I")
            if w not in seen:
                seen.add(w)
                dedup.append(w)
        self.omega = tuple(dedup)
        self.N = {frozenset(k): tuple(v) for k, v in self.N.items()}
        for i in self.I:
            self.factors.setdefault(i, GroupDescriptor.free([i.upper()]))

    def order(self, i: str) -> int:
        return self.I.index(i)

    def sorted(self, s: Iterable[str]) -> list[str]:
        return sorted(s, key=self.order)

    def label(self, s: Iterable[str]) -> str:
        return "".join(x.upper() for x in self.sorted(s))

    def core(self) -> frozenset[str]:
        return frozenset.intersection(*self.omega) if self.omega else frozenset()

    def group(self, indices: Iterable[str], with_N: Iterable[frozenset[str]] = ()) -> GroupDescriptor:
        """``(* G_i for i in indices) / <<N_omega>>`` over the chosen factors."""
        idx = self.sorted(set(indices))
        base = free_product([self.factors[i] for i in idx])
        rels = list(base.relators)
        names = base.generators
        for w in with_N:
            local = self.group(w)
            for r in self.N.get(w, ()):
                rels.append(_rename(r, local.generators, names))
        return GroupDescriptor(names, tuple(rels), ClassHint.GENERIC, False)

    @classmethod
    def from_json(cls, data: Mapping) -> "OmegaFamily":
        I = tuple(data["I"])
        omega = tuple(frozenset(w) for w in data["omega"])
        factors = {}
        for i, spec in dict(data.get("factors", {})).items():
            factors[i] = _descriptor_from_json(spec)
        fam = cls(I, omega, factors)
        for key, rels in dict(data.get("N", {})).items():
            members = frozenset(key.split(",")) if "," in key else frozenset(key)
            names = fam.group(members).generators
            fam.N[members] = tuple(FreeWord.parse(r, names) for r in rels)
        return fam


def _descriptor_from_json(spec) -> GroupDescriptor:
    if isinstance(spec, str):
        return GroupDescriptor.parse(spec)
    gens = tuple(spec["generators"])
    rels = tuple(FreeWord.parse(r, gens) for r in spec.get("relators", ()))
    return GroupDescriptor(
        gens, rels, ClassHint(spec.get("class", "generic")), bool(spec.get("torsion_free", False))
    )


def _rename(w: FreeWord, old: Sequence[str], new: Sequence[str]) -> FreeWord:
    pos = {n: i for i, n in enumerate(new)}
    return FreeWord(tuple(2 * pos[old[c >> 1]] + (c & 1) for c in w.letters))


@dataclass(frozen=True)
class MinMax:
    subfamily: tuple[frozenset[str], ...]
    min: str | None
    omega_min: frozenset[str] | None
    max: str | None
    omega_max: frozenset[str] | None

    @property
    def holds(self) -> bool:
        return self.min is not None and self.max is not None


def private_elements(F: Sequence[frozenset[str]], exclude: Iterable[str] = ()) -> dict[str, frozenset[str]]:
    """Elements lying in exactly one set of F, mapped to that set."""
    exclude = set(exclude)
    count: dict[str, list[frozenset[str]]] = {}
    for w in F:
        for i in w:
            count.setdefault(i, []).append(w)
    return {i: ws[0] for i, ws in count.items() if len(ws) == 1 and i not in exclude}


def min_max(fam: OmegaFamily, F: Sequence[frozenset[str]]) -> MinMax:
    priv = private_elements(F)
    order = fam.sorted(priv)
    if not order:
        return MinMax(tuple(F), None, None, None, None)
    m = order[0]
    big = next((x for x in reversed(order) if priv[x] != priv[m]), None)
    return MinMax(tuple(F), m, priv[m], big, priv[big] if big else None)


@dataclass
class FamilyConditionsReport:
    combinatorial: bool
    subfamilies: list[MinMax]
    star: dict[str, str]
    strict: dict[str, str]
    depth: int
    notes: list[str] = field(default_factory=list)

    def to_json(self, fam: OmegaFamily) -> dict:
        return {
            "combinatorial": self.combinatorial,
            "subfamilies": [
                {
                    "F": [fam.label(w) for w in m.subfamily],
                    "min": m.min,
                    "omega_min": fam.label(m.omega_min) if m.omega_min else None,
                    "max": m.max,
                    "omega_max": fam.label(m.omega_max) if m.omega_max else None,
                    "holds": m.holds,
                }
                for m in self.subfamilies
            ],
            "star_condition": self.star,
            "strictness": self.strict,
            "depth": self.depth,
            "notes": list(self.notes),
        }


def combinatorial_conditions(fam: OmegaFamily) -> tuple[bool, list[MinMax]]:
    results = []
    for size in range(2, len(fam.omega) + 1):
        for F in itertools.combinations(fam.omega, size):
            results.append(min_max(fam, F))
    return all(m.holds for m in results), results


def prop1_conditions(
    fam: OmegaFamily, depth: int = 4, word_budget: int = 20000, limits: Limits | None = None
) -> FamilyConditionsReport:
    """Check the hypotheses of the injectivity criterion for ``G_I``.

    (a) min/max conditions over all subfamilies of size >= 2, exactly;
    (b) no nontrivial element of the free product of the other factors dies
        in ``G_omega``, on words up to ``depth``;
    (c) the other factors times ``N_omega`` miss some element of ``G_i``
        (abelianization witness).
    """
    ok, subs = combinatorial_conditions(fam)
    limits = limits or Limits(max_rules=1000)
    core = fam.core()
    star: dict[str, str] = {}
    strict: dict[str, str] = {}
    notes: list[str] = []
    for w in fam.omega:
        g_omega = fam.group(w, [w])
        eng = complete(g_omega, limits)
        names = g_omega.generators
        for i in fam.sorted(w - core):
            key = f"{fam.label(w)}/{i}"
            others = [j for j in fam.sorted(w) if j != i]
            sub = fam.group(others)
            sub_eng = complete(sub, limits)
            status, reached = _star_check(sub, sub_eng, eng, names, depth, word_budget)
            star[key] = status
            if reached < depth:
                notes.append(f"{key}: word budget reached at depth {reached}")
            strict[key] = _strict_check(fam, w, i, g_omega)
    return FamilyConditionsReport(ok, subs, star, strict, depth, notes)


def _star_check(sub, sub_eng, eng, names, depth, budget) -> tuple[str, int]:
    if sub.rank == 0:
        return holds_at(depth), depth
    embed = [names.index(n) for n in sub.generators]
    count = 0
    unknown = False
    reached = 0
    for length in range(1, depth + 1):
        for codes in reduced_words(sub.rank, length, length):
            count += 1
            if count > budget:
                return ("UNKNOWN" if unknown else holds_at(reached)), reached
            u = FreeWord(codes)
            if sub_eng.is_trivial(u) is not Verdict.DISTINCT:
                continue  # only nontrivial elements of the free product matter
            image = FreeWord(tuple(2 * embed[c >> 1] + (c & 1) for c in codes))
            verdict = eng.is_trivial(image)
            if verdict is Verdict.EQUAL:
                return "REFUTED", length
            if verdict is Verdict.UNKNOWN:
                unknown = True
        reached = length
    return ("UNKNOWN" if unknown else holds_at(depth)), depth


def _strict_check(fam: OmegaFamily, w, i, g_omega: GroupDescriptor) -> str:
    ab = abelianization(g_omega)
    names = g_omega.generators
    gi = fam.factors[i].generators
    others = [names.index(n) for j in fam.sorted(w) if j != i for n in fam.factors[j].generators]
    rows = [ab.vector(FreeWord((2 * k,))) for k in others] + ab.matrix
    lattice = intlinalg.hermite(rows, g_omega.rank) if rows else None
    for n in gi:
        v = ab.vector(FreeWord((2 * names.index(n),)))
        if lattice is None or not lattice.contains(v):
            return f"STRICT (witness {n})"
    return "UNKNOWN"


# --------------------------------------------------------------------------
# amalgamation trees over a family of subsets


@dataclass(frozen=True)
class TreeNode:
    """A leaf (``omega`` set), a free product, or an amalgam ``left *_gamma right``."""

    kind: str  # "group", "free", "amalgam", "empty"
    omega: frozenset[str] | None = None
    parts: tuple["TreeNode", ...] = ()
    gamma: frozenset[str] | None = None

    def render(self, fam: OmegaFamily, top: bool = True) -> str:
        if self.kind == "empty":
            return "{1}"
        if self.kind == "group":
            return fam.label(self.omega)
        if self.kind == "free":
            text = " * ".join(p.render(fam, False) for p in self.parts)
        else:
            left, right = self.parts
            gamma = "*".join(x.upper() for x in fam.sorted(self.gamma))
            text = f"{left.render(fam, False)} *_{{{gamma}}} {right.render(fam, False)}"
        return text if top else f"({text})"

    def leaves(self) -> list[frozenset[str]]:
        if self.kind == "group":
            return [self.omega]
        return [x for p in self.parts for x in p.leaves()]


@dataclass
class AmalgamTreeResult:
    tree: TreeNode
    case: int
    choices: list[tuple[str, str]]  # (peeled set, its private element)
    notes: list[str] = field(default_factory=list)

    def to_json(self, fam: OmegaFamily) -> dict:
        return {
            "tree": self.tree.render(fam),
            "case": self.case,
            "choices": [list(c) for c in self.choices],
            "notes": list(self.notes),
        }


def _decompose(
    fam: OmegaFamily,
    family: list[frozenset[str]],
    extra: frozenset[str],
    keep_last: frozenset[str] | None,
    choices: list,
) -> TreeNode:
    """Tree for ``G_family * (* G_j for j in extra outside the family)``."""
    union = frozenset().union(*family) if family else frozenset()
    free_extra = [TreeNode("group", frozenset([j])) for j in fam.sorted(extra - union)]
    if not family:
        if not free_extra:
            return TreeNode("empty")
        return free_extra[0] if len(free_extra) == 1 else TreeNode("free", parts=tuple(free_extra))
    if len(family) == 1:
        base = TreeNode("group", family[0])
        return base if not free_extra else TreeNode("free", parts=(base, *free_extra))
    candidates = [w for w in family if w != keep_last]
    priv = private_elements(family, exclude=extra)
    pool = [i for i in priv if priv[i] in candidates]
    if not pool:
        priv = private_elements(family)
        pool = [i for i in priv if priv[i] in candidates]
    if not pool:
        raise ConditionsFail("no set with a private element to split off")
    m = fam.sorted(pool)[-1]
    peel = priv[m]
    choices.append((fam.label(peel), m))
    rest = [w for w in family if w != peel]
    rest_union = frozenset().union(*rest)
    gamma = peel & (rest_union | extra)
    left = _decompose(fam, rest, extra | gamma, keep_last, choices)
    if set(left.leaves()) <= {frozenset([j]) for j in gamma}:
        node = TreeNode("group", peel)
    else:
        node = TreeNode("amalgam", parts=(left, TreeNode("group", peel)), gamma=gamma)
    return node


def amalgam_tree(fam: OmegaFamily) -> AmalgamTreeResult:
    """Amalgam decomposition of ``G_Omega`` by repeatedly splitting off a set."""
    ok, _ = combinatorial_conditions(fam)
    if not ok:
        raise ConditionsFail("min/max conditions fail for some subfamily")
    choices: list = []
    tree = _decompose(fam, list(fam.omega), frozenset(), None, choices)
    return AmalgamTreeResult(tree, 1, choices)


def lemma8_decomposition(
    fam: OmegaFamily,
    omega_prime: Sequence[Iterable[str]],
    omega: Iterable[str],
    alpha: Iterable[str],
) -> AmalgamTreeResult:
    """Tree over ``Omega'`` in which the factors ``G_i, i in alpha`` sit freely.

    Case 1 (``omega`` in ``Omega'``) keeps ``omega`` for last and splits off
    the other sets; case 2 adds the factors of ``omega`` meeting ``Omega'`` as
    free factors, which is the auxiliary group used in that case.
    """
    fam_prime = [frozenset(w) for w in omega_prime]
    omega = frozenset(omega)
    alpha = frozenset(alpha)
    union = frozenset().union(*fam_prime) if fam_prime else frozenset()
    if not alpha < omega:
        raise ConditionsFail("alpha must be a proper subset of omega")
    if not alpha <= union:
        raise ConditionsFail("alpha must lie in the union of Omega'")
    if not fam.core() <= alpha:
        raise ConditionsFail("alpha must contain the intersection of Omega")
    F = list(dict.fromkeys(fam_prime + [omega]))
    for size in range(2, len(F) + 1):
        for sub in itertools.combinations(F, size):
            if not min_max(fam, sub).holds:
                raise ConditionsFail(
                    "min/max conditions fail for " + ", ".join(fam.label(w) for w in sub)
                )
    choices: list = []
    if omega in fam_prime:
        tree = _decompose(fam, list(dict.fromkeys(fam_prime)), frozenset(), omega, choices)
        return AmalgamTreeResult(tree, 1, choices)
    if not fam_prime:
        return AmalgamTreeResult(TreeNode("empty"), 2, [], ["Omega' is empty: nothing to decompose"])
    tree = _decompose(fam, list(dict.fromkeys(fam_prime)), omega & union, None, choices)
    return AmalgamTreeResult(
        tree, 2, choices, ["factors of omega meeting Omega' are carried as free factors"]
    )


# --------------------------------------------------------------------------
# amalgamated semidirect products


@dataclass
class SemidirectData:
    """``A`` acting on ``B`` with ``N <| A`` identified with ``N^psi <= B``.

    ``phi[i]`` lists the images of B's generators under the automorphism of
    generator ``i`` of A, so ``b^(a^phi)`` is substitution.  ``phi_inverse``
    may be given; otherwise it is found as a power of ``phi``.
    """

    A: GroupDescriptor
    B: GroupDescriptor
    phi: tuple[tuple[FreeWord, ...], ...]
    N: tuple[FreeWord, ...] = ()
    psi: tuple[FreeWord, ...] = ()
    phi_inverse: tuple[tuple[FreeWord, ...], ...] | None = None
    limits: Limits = field(default_factory=lambda: Limits(max_rules=2000))

    def __post_init__(self):
        self.phi = tuple(tuple(row) for row in self.phi)
        self.N = tuple(self.N)
        self.psi = tuple(self.psi)
        if len(self.phi) != self.A.rank or any(len(r) != self.B.rank for r in self.phi):
            raise InconsistentDescriptor("phi needs one image per (A generator, B generator)")
        if len(self.N) != len(self.psi):
            raise InconsistentDescriptor("psi needs one image per N generator")
        self._eA = complete(self.A, self.limits)
        self._eB = complete(self.B, self.limits)
        if self.phi_inverse is None:
            self.phi_inverse = tuple(self._invert(row) for row in self.phi)

    @classmethod
    def trivial_action(cls, A, B, N=(), psi=(), **kw) -> "SemidirectData":
        ident = tuple(FreeWord((2 * j,)) for j in range(B.rank))
        return cls(A, B, tuple(ident for _ in range(A.rank)), tuple(N), tuple(psi), **kw)

    def _invert(self, row: tuple[FreeWord, ...]) -> tuple[FreeWord, ...]:
        gens = tuple(FreeWord((2 * j,)) for j in range(self.B.rank))
        power = row
        for _ in range(256):
            nxt = tuple(self.nf_B(substitute(img, row)) for img in power)
            if all(self._eB.equal(p, g) is Verdict.EQUAL for p, g in zip(nxt, gens)):
                return power
            power = nxt
        raise InconsistentDescriptor("cannot invert an action automorphism; pass phi_inverse")

    def nf_A(self, a: FreeWord) -> FreeWord:
        return self._eA.normal_form(a)

    def nf_B(self, b: FreeWord) -> FreeWord:
        return self._eB.normal_form(b)

    def act(self, b: FreeWord, a: FreeWord) -> FreeWord:
        """``b^(a^phi)`` for a word ``a`` of A (right action)."""
        for c in a.letters:
            row = self.phi_inverse[c >> 1] if c & 1 else self.phi[c >> 1]
            b = self.nf_B(substitute(b, row))
        return self.nf_B(b)

    def psi_word(self, n: FreeWord) -> FreeWord:
        """psi of a word in the generators of N."""
        return self.nf_B(substitute(n, self.psi))

    def n_in_A(self, n: FreeWord) -> FreeWord:
        return self.nf_A(substitute(n, self.N))


Element = tuple[FreeWord, FreeWord]


def asp_multiply(sd: SemidirectData, x: Element, y: Element) -> Element:
    """``(a b)(a1 b1) = (a a1)(b^(a1^phi) b1)``."""
    (a, b), (a1, b1) = x, y
    return sd.nf_A(a * a1), sd.nf_B(sd.act(b, a1) * b1)


def asp_inverse(sd: SemidirectData, x: Element) -> Element:
    a, b = x
    ai = sd.nf_A(a.inverse())
    return ai, sd.act(b.inverse(), ai)


def asp_conjugate(sd: SemidirectData, x: Element, by: Element) -> Element:
    return asp_multiply(sd, asp_multiply(sd, asp_inverse(sd, by), x), by)


@dataclass
class PsiTable:
    """``n -> n^psi`` on the elements of N reached by a bounded search."""

    table: dict[FreeWord, FreeWord]
    exhaustive: bool
    depth: int


def psi_table(sd: SemidirectData, max_elements: int = 200) -> PsiTable:
    """Extend psi from N's generators to the elements they generate.

    Raises :class:`IdentityViolation` when two words for one element of N get
    different psi-images (psi is not a well-defined homomorphism).
    """
    table = {EMPTY: EMPTY}
    frontier = [EMPTY]
    gens = []
    for k in range(len(sd.N)):
        for e in (1, -1):
            gens.append((sd.nf_A(sd.N[k] ** e), sd.nf_B(sd.psi[k] ** e)))
    depth = 0
    while frontier:
        nxt = []
        for n in frontier:
            for g, pg in gens:
                m = sd.nf_A(n * g)
                pm = sd.nf_B(table[n] * pg)
                if m in table:
                    if table[m] != pm and sd._eB.equal(table[m], pm) is not Verdict.EQUAL:
                        raise IdentityViolation(
                            "psi is not well defined on N",
                            element=m.format(sd.A.generators),
                        )
                    continue
                if len(table) >= max_elements:
                    return PsiTable(table, False, depth)
                table[m] = pm
                nxt.append(m)
        frontier = nxt
        depth += 1
    return PsiTable(table, True, depth)


@dataclass
class ASPReport:
    checked: int
    identities: dict[str, int]
    consistency: dict[str, int]
    exhaustive_N: bool
    provenance: str

    def to_json(self) -> dict:
        return {
            "checked": self.checked,
            "identities": self.identities,
            "consistency": self.consistency,
            "exhaustive_N": self.exhaustive_N,
            "provenance": self.provenance,
        }


def _diag(sd: SemidirectData, n: FreeWord, table: PsiTable) -> Element:
    return n, sd.nf_B(table.table[n].inverse())


def asp_diagonal_checks(
    sd: SemidirectData,
    samples_a: Sequence[FreeWord] | None = None,
    samples_b: Sequence[FreeWord] | None = None,
    max_elements: int = 200,
) -> ASPReport:
    """Verify the four identities making ``{n n^-psi}`` a normal subgroup.

    Products, inverses, and conjugates by A and by B are computed in the
    semidirect product and compared exactly.  The two consistency conditions
    between phi and psi are checked too.  The first failure raises
    :class:`IdentityViolation`.
    """
    table = psi_table(sd, max_elements)
    A_gens = [FreeWord((2 * i + e,)) for i in range(sd.A.rank) for e in (0, 1)]
    B_gens = [FreeWord((2 * j + e,)) for j in range(sd.B.rank) for e in (0, 1)]
    samples_a = list(A_gens) + list(samples_a or [])
    samples_b = list(B_gens) + list(samples_b or [])
    one = (EMPTY, EMPTY)
    counts = {"product": 0, "inverse": 0, "conj_A": 0, "conj_B": 0}
    cons = {"psi_equivariant": 0, "inner_agrees": 0}
    elements = list(table.table)
    Ns = elements[: min(len(elements), 24)]

    def same(x: Element, y: Element) -> bool:
        return sd._eA.equal(x[0], y[0]) is Verdict.EQUAL and sd._eB.equal(x[1], y[1]) is Verdict.EQUAL

    def fail(name: str, **details):
        raise IdentityViolation(f"identity '{name}' fails", **details)

    fmtA = lambda w: w.format(sd.A.generators)  # noqa: E731
    fmtB = lambda w: w.format(sd.B.generators)  # noqa: E731
    for n in Ns:
        d = _diag(sd, n, table)
        for n1 in Ns:
            prod = sd.nf_A(n * n1)
            if prod not in table.table:
                continue
            lhs = asp_multiply(sd, d, _diag(sd, n1, table))
            if not same(lhs, _diag(sd, prod, table)):
                fail("product", n=fmtA(n), n1=fmtA(n1))
            counts["product"] += 1
        inv = sd.nf_A(n.inverse())
        if inv in table.table:
            if not same(asp_inverse(sd, d), _diag(sd, inv, table)):
                fail("inverse", n=fmtA(n))
            counts["inverse"] += 1
        for a in samples_a:
            na = sd.nf_A(a.inverse() * n * a)
            lhs = asp_conjugate(sd, d, (sd.nf_A(a), EMPTY))
            if na not in table.table:
                if table.exhaustive:
                    fail("conj_A", n=fmtA(n), a=fmtA(a), reason="N is not normal")
                continue
            if not same(lhs, _diag(sd, na, table)):
                fail("conj_A", n=fmtA(n), a=fmtA(a))
            counts["conj_A"] += 1
            # (n^a)^psi = (n^psi)^(a^phi)
            if sd._eB.equal(table.table[na], sd.act(table.table[n], a)) is not Verdict.EQUAL:
                fail("psi_equivariant", n=fmtA(n), a=fmtA(a))
            cons["psi_equivariant"] += 1
        for b in samples_b:
            lhs = asp_conjugate(sd, d, (EMPTY, sd.nf_B(b)))
            if not same(lhs, d):
                fail("conj_B", n=fmtA(n), b=fmtB(b))
            counts["conj_B"] += 1
            # b^(n^phi) = b^(n^psi)
            pn = table.table[n]
            if sd._eB.equal(sd.act(b, n), pn.inverse() * b * pn) is not Verdict.EQUAL:
                fail("inner_agrees", n=fmtA(n), b=fmtB(b))
            cons["inner_agrees"] += 1
    assert same(asp_multiply(sd, one, one), one)
    total = sum(counts.values()) + sum(cons.values())
    prov = "EXACT" if table.exhaustive else checked_at(table.depth)
    return ASPReport(total, counts, cons, table.exhaustive, prov)


@dataclass
class ASPBuild:
    descriptor: GroupDescriptor
    report: ASPReport
    checks: dict[str, str]

    def to_json(self) -> dict:
        return {
            "presentation": self.descriptor.to_text(),
            "abelianization": abelianization(self.descriptor).to_json(),
            "identities": self.report.to_json(),
            "checks": self.checks,
        }


def asp_build(sd: SemidirectData) -> ASPBuild:
    """Presentation of ``A x|_{N = N^psi} B``.

    Generators of A then B; relators of A and B, ``a^-1 b a = b^(a^phi)`` for
    generators and ``n = n^psi`` for generators of N.  ``B`` is normal by
    construction; ``N`` lying in ``A n B`` is checked per generator.
    """
    try:
        report = asp_diagonal_checks(sd)
    except IdentityViolation as exc:
        raise ConsistencyFail(str(exc), **exc.details) from None
    k = sd.A.rank
    names = sd.A.generators + sd.B.generators
    if len(set(names)) != len(names):
        raise ConsistencyFail("generator names of A and B must be distinct")
    rels = list(sd.A.relators) + [shift(r, k) for r in sd.B.relators]
    for i in range(k):
        a = FreeWord((2 * i,))
        for j in range(sd.B.rank):
            b = shift(FreeWord((2 * j,)), k)
            img = shift(sd.phi[i][j], k)
            rels.append(a.inverse() * b * a * img.inverse())
    for n, p in zip(sd.N, sd.psi):
        rels.append(n * shift(p, k).inverse())
    rels = [r for r in rels if r]
    tf = sd.A.declared_torsion_free and sd.B.declared_torsion_free
    desc = GroupDescriptor(names, tuple(rels), ClassHint.GENERIC, tf)
    checks = {"B_normal": "THEOREM (action relators)"}
    engine = complete(desc, sd.limits)
    verdict = Verdict.EQUAL
    for n, p in zip(sd.N, sd.psi):
        verdict = verdict & engine.equal(n, shift(p, k))
    checks["N_identified"] = verdict.value
    return ASPBuild(desc, report, checks)

"""Splitting a generalised unimodular relator over free T into one-variable pieces.

Pipeline: suffix cosets ``t_i ... t_q R`` in ``T/R``, coset representatives
``c_y``, the rewritten relation ``t * prod g_i^(c_{x_i} r_i) = 1``, the
one-variable presentation over ``H_1``, the action of T on the symbols, and
the final report for ``P = T x|_{R = Rbar} K``.

Elements ``r_i`` and ``a`` stay as exact words of the free group T whose
image in ``T/R`` is verified trivial; no free basis of ``S`` is computed.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

from .analysis import (
    GURejection,
    GUWitness,
    RelatorClassification,
    classify,
    generalised_unimodular_free_T,
)
from .errors import (
    KernelMembershipUnknown,
    NotCyclicallyReduced,
    RejectedRelator,
    UnknownCoset,
)
from .products import OmegaFamily, amalgam_tree, combinatorial_conditions
from .rewriting import (
    AbelianizedLattice,
    GroupDescriptor,
    Limits,
    RewriteEngine,
    Status,
    abelianization,
    complete,
)
from .verdicts import Provenance, Verdict, checked_at
from .words import EMPTY, Alphabet, CyclicWord, FreeWord, RelativeWord, reduced_words


@dataclass
class DecompositionContext:
    w: CyclicWord
    G: GroupDescriptor
    T: GroupDescriptor
    witness: GUWitness
    engine: RewriteEngine
    abelian: AbelianizedLattice
    classification: RelatorClassification
    w_in_T: bool
    limits: Limits
    notes: list[str] = field(default_factory=list)

    @property
    def alphabet(self) -> Alphabet:
        return self.w.alphabet

    @property
    def n(self) -> int:
        return self.alphabet.n

    @property
    def relator(self) -> RelativeWord:
        """``w`` in syllable form ``g_1 t_1 ... g_q t_q``."""
        return self.w.syllable_form()

    @property
    def syllables(self):
        return self.relator.syllables

    @property
    def S_trivial(self) -> bool:
        # R = <<w'>> equals <t> exactly when T is cyclic
        return self.n == 1

    def fmt_T(self, u: FreeWord) -> str:
        return u.format(self.T.generators)

    def fmt_G(self, g: FreeWord) -> str:
        return g.format(self.G.generators)

    def lift(self, g: FreeWord | None = None, t: FreeWord | None = None) -> RelativeWord:
        """A G-word or a T-word as a word of ``G * T``."""
        parts = []
        if g is not None:
            parts.append((False, g))
        if t is not None:
            parts.append((True, t))
        return RelativeWord.from_coefficients_and_variables(self.alphabet, parts)

    def ghat(self) -> GroupDescriptor:
        """Presentation of ``<G, T | w>``."""
        names = self.alphabet.names()
        rels = tuple(self.G.relators) + (FreeWord(self.relator.letters),)
        return GroupDescriptor(names, rels, declared_torsion_free=False)


def build_context(
    w: RelativeWord, G: GroupDescriptor, n: int | None = None, limits: Limits | None = None
) -> DecompositionContext:
    if tuple(w.alphabet.coefficients) != tuple(G.generators):
        raise ValueError("the word's coefficient alphabet must be G's generators")
    if n is not None and n != w.alphabet.n:
        raise ValueError(f"alphabet declares {w.alphabet.n} variables, not {n}")
    if not w.is_cyclically_reduced():
        raise NotCyclicallyReduced(f"{w.format()} is not cyclically reduced")
    c = CyclicWord(w)
    result = generalised_unimodular_free_T(c)
    if isinstance(result, GURejection):
        raise RejectedRelator(result.reason, condition=result.condition)
    limits = limits or Limits(max_rules=2000)
    engine = complete(result.quotient, limits)
    ctx = DecompositionContext(
        w=c,
        G=G,
        T=GroupDescriptor.free(w.alphabet.variables),
        witness=result,
        engine=engine,
        abelian=abelianization(result.quotient),
        classification=classify(c),
        w_in_T=not c.word.has_coefficients(),
        limits=limits,
    )
    if ctx.w_in_T:
        ctx.notes.append("W_IN_T: w has no coefficients; injectivity of T is not claimed")
    if engine.status is Status.PARTIAL:
        ctx.notes.append("T/R rewriting system is partial; coset decisions may be UNKNOWN")
    return ctx


# --------------------------------------------------------------------------
# cosets of R


class CosetTable:
    """Distinct cosets of R met so far, each with its representative ``c``.

    The identity coset is index 0 with ``c = 1``.  With a complete system the
    representative is the shortlex normal form, which is the shortlex-least
    word of the coset.
    """

    def __init__(self, engine: RewriteEngine):
        self.engine = engine
        self.reps: list[FreeWord] = [EMPTY]
        self._by_nf: dict[FreeWord, int] = {EMPTY: 0}

    def __len__(self) -> int:
        return len(self.reps)

    @property
    def exact(self) -> bool:
        return self.engine.status is Status.COMPLETE

    def lookup(self, u: FreeWord, add: bool = True) -> int:
        """Index of the coset ``uR``; raises :class:`UnknownCoset` if undecided."""
        nf = self.engine.normal_form(u)
        if nf in self._by_nf:
            return self._by_nf[nf]
        if not self.exact:
            for k, c in enumerate(self.reps):
                verdict = self.engine.equal(c, nf)
                if verdict is Verdict.EQUAL:
                    self._by_nf[nf] = k
                    return k
                if verdict is Verdict.UNKNOWN:
                    raise UnknownCoset(f"cannot decide whether {u!r} R equals {c!r} R")
        if not add:
            raise UnknownCoset(f"coset of {u!r} is not in the table")
        self.reps.append(nf)
        self._by_nf[nf] = len(self.reps) - 1
        return len(self.reps) - 1

    def rep(self, k: int) -> FreeWord:
        return self.reps[k]


@dataclass
class SuffixCosets:
    suffixes: list[FreeWord]  # u_i = t_i ... t_q
    labels: list[int]  # class index per syllable
    classes: list[list[int]]
    p: int | None
    p_min: int
    p_max: int
    unknown_pairs: list[tuple[int, int]]

    @property
    def decided(self) -> bool:
        return not self.unknown_pairs


def _suffixes(ctx: DecompositionContext) -> list[FreeWord]:
    ts = [s.t for s in ctx.syllables]
    out, acc = [], EMPTY
    for t in reversed(ts):
        acc = t * acc
        out.append(acc)
    return out[::-1]


def suffix_cosets(ctx: DecompositionContext) -> SuffixCosets:
    us = _suffixes(ctx)
    q = len(us)
    parent = list(range(q))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    unknown = []
    for i in range(q):
        for j in range(i + 1, q):
            if find(i) == find(j):
                continue
            verdict = ctx.engine.equal(us[i], us[j])
            if verdict is Verdict.EQUAL:
                parent[find(j)] = find(i)
            elif verdict is Verdict.UNKNOWN:
                unknown.append((i, j))
    roots = sorted({find(i) for i in range(q)})
    index = {r: k for k, r in enumerate(roots)}
    labels = [index[find(i)] for i in range(q)]
    classes = [[i for i in range(q) if labels[i] == k] for k in range(len(roots))]
    p_max = len(roots)
    unknown = [(i, j) for i, j in unknown if find(i) != find(j)]
    merged = list(parent)

    def find2(i):
        while merged[i] != i:
            i = merged[i]
        return i

    for i, j in unknown:
        a, b = find2(i), find2(j)
        if a != b:
            merged[b] = a
    p_min = len({find2(i) for i in range(q)})
    return SuffixCosets(us, labels, classes, None if unknown else p_max, p_min, p_max, unknown)


def coset_representatives(ctx: DecompositionContext, cosets: SuffixCosets) -> tuple[CosetTable, list[int]]:
    """Table of representatives and, per suffix class, its table index.

    The class of ``u_1 = t`` is R itself and gets ``c = 1``.
    """
    if not cosets.decided:
        raise UnknownCoset("suffix cosets are not all decided", pairs=len(cosets.unknown_pairs))
    table = CosetTable(ctx.engine)
    if ctx.engine.is_trivial(cosets.suffixes[0]) is not Verdict.EQUAL:
        raise KernelMembershipUnknown("t = t_1 ... t_q was not confirmed to lie in R")
    index = [table.lookup(cosets.suffixes[cls[0]]) for cls in cosets.classes]
    return table, index


# --------------------------------------------------------------------------
# the rewritten relation


@dataclass(frozen=True)
class RelationEntry:
    g: FreeWord
    coset: int
    c: FreeWord
    r: FreeWord
    r_in_R: Verdict


@dataclass
class RewrittenRelation:
    t: FreeWord
    entries: list[RelationEntry]
    reassembled: RelativeWord
    rotation: int  # offset of the reassembled word inside the canonical cyclic word

    def to_json(self, ctx: DecompositionContext) -> dict:
        return {
            "t": ctx.fmt_T(self.t),
            "entries": [
                {
                    "g": ctx.fmt_G(e.g),
                    "coset": e.coset,
                    "c": ctx.fmt_T(e.c),
                    "r": ctx.fmt_T(e.r),
                    "r_in_R": e.r_in_R.value,
                }
                for e in self.entries
            ],
            "reassembled": self.reassembled.format(),
            "reassembly_holds": True,
            "rotation": self.rotation,
        }


def conj_in_GT(ctx: DecompositionContext, g: FreeWord, by: FreeWord) -> RelativeWord:
    """``by^-1 g by`` in ``G * T``."""
    b = ctx.lift(t=by)
    return b.inverse() * ctx.lift(g=g) * b


def rewrite_relation(
    ctx: DecompositionContext, cosets: SuffixCosets, table: CosetTable, index: list[int]
) -> RewrittenRelation:
    entries = []
    for i, syl in enumerate(ctx.syllables):
        k = index[cosets.labels[i]]
        c = table.rep(k)
        r = c.inverse() * cosets.suffixes[i]
        verdict = ctx.engine.is_trivial(r)
        if verdict is not Verdict.EQUAL:
            raise KernelMembershipUnknown(f"r_{i + 1} = {ctx.fmt_T(r)} not confirmed in R")
        entries.append(RelationEntry(syl.g, k, c, r, verdict))
    t = cosets.suffixes[0]
    word = ctx.lift(t=t)
    for e in entries:
        word = word * conj_in_GT(ctx, e.g, e.c * e.r)
    target = ctx.relator
    if word.letters != target.letters:
        raise AssertionError("reassembly of the rewritten relation does not give w")
    rotation = (ctx.w.syllable_offset()) % max(len(ctx.w.word), 1)
    return RewrittenRelation(t, entries, word, rotation)


# --------------------------------------------------------------------------
# symbols of L and the action of T


@dataclass(frozen=True)
class GSymbol:
    """``(g^(c_y))^(abar)``: an element of the copy of G at coset ``y``, conjugated by ``abar``."""

    g: FreeWord
    coset: int
    conj: FreeWord = EMPTY


@dataclass(frozen=True)
class RSymbol:
    """``rbar`` for an element ``r`` of R."""

    r: FreeWord


Symbol = GSymbol | RSymbol


def action_apply(ctx: DecompositionContext, table: CosetTable, symbol: Symbol, x: FreeWord) -> Symbol:
    """Image of ``symbol`` under ``x^phi`` for a word ``x`` of T.

    ``rbar -> (r^x)bar`` and ``(g^(c_y))^abar0 -> (g^(c_yx))^(a * (a0^x))bar``
    where ``c_y x = c_yx a``.
    """
    x = FreeWord(x.letters)
    if isinstance(symbol, RSymbol):
        r = symbol.r.conjugate(x)
        if ctx.engine.is_trivial(r) is not Verdict.EQUAL:
            raise KernelMembershipUnknown(f"{ctx.fmt_T(r)} not confirmed in R")
        return RSymbol(r)
    cy = table.rep(symbol.coset)
    k = table.lookup(cy * x)
    a = table.rep(k).inverse() * cy * x
    if ctx.engine.is_trivial(a) is not Verdict.EQUAL:
        raise KernelMembershipUnknown(f"a = {ctx.fmt_T(a)} not confirmed in R")
    return GSymbol(symbol.g, k, a * symbol.conj.conjugate(x))


def to_ambient(ctx: DecompositionContext, table: CosetTable, symbol: Symbol) -> RelativeWord:
    """The element of ``G * T`` a symbol stands for under the isomorphism to Ghat."""
    if isinstance(symbol, RSymbol):
        return ctx.lift(t=symbol.r)
    return conj_in_GT(ctx, symbol.g, table.rep(symbol.coset) * symbol.conj)


def format_symbol(ctx: DecompositionContext, table: CosetTable, s: Symbol) -> str:
    if isinstance(s, RSymbol):
        return f"rbar({ctx.fmt_T(s.r)})"
    base = f"{ctx.fmt_G(s.g)}^({ctx.fmt_T(table.rep(s.coset))})"
    return base if not s.conj else f"({base})^rbar({ctx.fmt_T(s.conj)})"


# --------------------------------------------------------------------------
# the one-variable presentation over H_1


@dataclass
class RelativeHPresentation:
    cosets: list[int]  # X_1 as table indices
    relator: list[Symbol]  # tbar followed by the conjugated G symbols
    p: int
    S_trivial: bool
    degenerate: bool
    notes: list[str] = field(default_factory=list)

    @property
    def tbar_exponent_sum(self) -> int:
        return sum(1 for s in self.relator if isinstance(s, RSymbol))

    def to_json(self, ctx: DecompositionContext, table: CosetTable) -> dict:
        copies = [f"G^({ctx.fmt_T(table.rep(k))})" for k in self.cosets]
        factors = ([] if self.S_trivial else ["Sbar"]) + copies
        return {
            "H1": " * ".join(factors),
            "relator": " ".join(format_symbol(ctx, table, s) for s in self.relator),
            "p": self.p,
            "tbar_exponent_sum": self.tbar_exponent_sum,
            "S_trivial": self.S_trivial,
            "degenerate": self.degenerate,
            "notes": list(self.notes),
        }


def build_H1(ctx: DecompositionContext, rel: RewrittenRelation, table: CosetTable) -> RelativeHPresentation:
    relator: list[Symbol] = [RSymbol(rel.t)]
    for e in rel.entries:
        if e.g:
            relator.append(GSymbol(e.g, e.coset, e.r))
    X1 = sorted({e.coset for e in rel.entries})
    degenerate = len(rel.entries) == 1 and not rel.entries[0].g
    notes = []
    if degenerate:
        notes.append("relator reduces to tbar = 1 (q = 1 and g_1 = 1)")
    if len(X1) == 1 and ctx.S_trivial:
        notes.append("S = 1 and |X_1| = 1: this forces T to be cyclic")
    return RelativeHPresentation(X1, relator, len(X1), ctx.S_trivial, degenerate, notes)


# --------------------------------------------------------------------------
# isomorphisms H_1 -> H_x


@dataclass
class IsoMap:
    x: int
    cx: FreeWord
    images: dict[str, Symbol]
    relator_check: bool


def iso_H1_to_Hx(
    ctx: DecompositionContext, table: CosetTable, h1: RelativeHPresentation, x: FreeWord
) -> IsoMap:
    """The action of ``c_x`` restricted to the generators of ``H_1``.

    Verified by mapping the relator: its image, read in ``G * T``, must be
    ``c_x^-1 w c_x`` letter for letter.
    """
    k = table.lookup(x)
    cx = table.rep(k)
    images: dict[str, Symbol] = {"tbar": action_apply(ctx, table, h1.relator[0], cx)}
    for y in h1.cosets:
        for j in range(ctx.G.rank):
            g = FreeWord((2 * j,))
            images[f"{ctx.G.generators[j]}^({ctx.fmt_T(table.rep(y))})"] = action_apply(
                ctx, table, GSymbol(g, y), cx
            )
    word = RelativeWord(ctx.alphabet)
    for s in h1.relator:
        word = word * to_ambient(ctx, table, action_apply(ctx, table, s, cx))
    target = ctx.relator.conjugate(ctx.lift(t=cx))
    return IsoMap(k, cx, images, word.letters == target.letters)


# --------------------------------------------------------------------------
# windows of K


def coset_ball(ctx: DecompositionContext, table: CosetTable, radius: int) -> list[int]:
    """Cosets within ``radius`` generator steps of R."""
    seen = {0}
    order = [0]
    frontier = deque([(0, 0)])
    gens = [FreeWord((c,)) for c in range(2 * ctx.n)]
    while frontier:
        k, d = frontier.popleft()
        if d == radius:
            continue
        for x in gens:
            j = table.lookup(table.rep(k) * x)
            if j not in seen:
                seen.add(j)
                order.append(j)
                frontier.append((j, d + 1))
    return order


def fiap_window(
    ctx: DecompositionContext, table: CosetTable, h1: RelativeHPresentation, radius: int
) -> tuple[OmegaFamily, list[int]]:
    """Index family ``{ {Rbar} u X_1 x : x in ball }`` for the factors of K."""
    ball = coset_ball(ctx, table, radius)
    sets = []
    for x in ball:
        cx = table.rep(x)
        translated = {table.lookup(table.rep(y) * cx) for y in h1.cosets}
        sets.append(frozenset({"r"} | {f"c{k}" for k in translated}))
    names = ["r"] + [f"c{k}" for k in range(len(table))]
    used = set().union(*sets)
    I = tuple(n for n in names if n in used)
    return OmegaFamily(I, tuple(sets), {}), ball


# --------------------------------------------------------------------------
# report


@dataclass
class Claim:
    statement: str
    provenance: str

    def to_json(self) -> dict:
        return {"statement": self.statement, "provenance": self.provenance}


@dataclass
class DecompositionReport:
    ctx: DecompositionContext
    cosets: SuffixCosets
    table: CosetTable | None
    relation: RewrittenRelation | None
    h1: RelativeHPresentation | None
    action_table: list[dict]
    isomorphisms: list[IsoMap]
    window: dict
    claims: list[Claim]
    strict: str

    @property
    def p(self) -> int | None:
        return self.cosets.p

    def to_json(self) -> dict:
        ctx = self.ctx
        out = {
            "w": ctx.relator.format(),
            "classification": ctx.classification.to_json(),
            "witness": ctx.witness.to_json(),
            "cosets": {
                "suffixes": [ctx.fmt_T(u) for u in self.cosets.suffixes],
                "labels": self.cosets.labels,
                "p": self.cosets.p,
                "p_min": self.cosets.p_min,
                "p_max": self.cosets.p_max,
                "decided": self.cosets.decided,
            },
            "notes": list(ctx.notes),
        }
        if self.table is not None:
            out["representatives"] = {str(k): ctx.fmt_T(c) for k, c in enumerate(self.table.reps)}
        if self.relation is not None:
            out["relation2"] = self.relation.to_json(ctx)
        if self.h1 is not None and self.table is not None:
            out["h1_presentation"] = self.h1.to_json(ctx, self.table)
        out["action_table"] = self.action_table
        out["isomorphisms"] = [
            {"x": ctx.fmt_T(m.cx), "relator_check": m.relator_check} for m in self.isomorphisms
        ]
        out["fiap_window"] = self.window
        out["theorem3"] = {
            "statement": "P = T x|_{R = Rbar} K with K a FIAP of the groups H_x, x in T/R",
            "dictionary": "identity on T; G^(1) -> G; g^(c_x) -> c_x^-1 g c_x",
            "strict": self.strict,
        }
        out["provenance"] = [c.to_json() for c in self.claims]
        return out


def _action_rows(ctx, table, h1) -> list[dict]:
    rows = []
    for i in range(ctx.n):
        x = FreeWord((2 * i,))
        rows.append(
            {
                "x": ctx.T.generators[i],
                "symbol": "rbar",
                "image": f"rbar(r^{ctx.T.generators[i]})",
            }
        )
        for y in h1.cosets:
            img = action_apply(ctx, table, GSymbol(EMPTY, y), x)
            rows.append(
                {
                    "x": ctx.T.generators[i],
                    "symbol": f"g^({ctx.fmt_T(table.rep(y))})",
                    "image": f"(g^({ctx.fmt_T(table.rep(img.coset))}))^rbar({ctx.fmt_T(img.conj)})",
                    "a": ctx.fmt_T(img.conj),
                }
            )
    return rows


def r_injectivity_check(ctx: DecompositionContext, depth: int) -> str:
    """No nonempty element of R of length <= depth dies in Ghat."""
    if ctx.w_in_T:
        return "NOT_APPLICABLE (w in T)"
    engine = complete(ctx.ghat(), Limits(max_rules=1000, max_word_length=64))
    off = ctx.alphabet.offset
    unknown = False
    for codes in reduced_words(ctx.n, depth, 1):
        u = FreeWord(codes)
        if ctx.engine.is_trivial(u) is not Verdict.EQUAL:
            continue
        lifted = FreeWord(tuple(c + off for c in codes))
        verdict = engine.is_trivial(lifted)
        if verdict is Verdict.EQUAL:
            return "REFUTED"
        if verdict is Verdict.UNKNOWN:
            unknown = True
    return "UNKNOWN" if unknown else checked_at(depth)


def _g_noncyclic(G: GroupDescriptor) -> str:
    from .rewriting import ClassHint

    if G.class_hint is ClassHint.CYCLIC or G.rank <= 1:
        return "NO"
    if not abelianization(G).is_cyclic():
        return "YES"
    return "UNKNOWN"


def assemble_report(
    ctx: DecompositionContext, depth: int = 4, radius: int = 1
) -> DecompositionReport:
    cosets = suffix_cosets(ctx)
    claims = [
        Claim("G -> Ghat is injective", Provenance.THEOREM.value),
        Claim(
            "T -> Ghat is injective" + (" (w in T: not claimed)" if ctx.w_in_T else ""),
            Provenance.THEOREM.value if not ctx.w_in_T else Provenance.UNKNOWN.value,
        ),
        Claim("K is a free iterated amalgamated product of the H_x", Provenance.THEOREM.value),
        Claim("Ghat is isomorphic to P = T x|_{R=Rbar} K", Provenance.THEOREM.value),
    ]
    noncyclic = _g_noncyclic(ctx.G)
    strict = {"YES": "strict (G noncyclic)", "NO": "not claimed (G cyclic)"}.get(
        noncyclic, "UNKNOWN (cyclicity of G undecided)"
    )
    if not cosets.decided:
        claims.append(
            Claim(f"p lies in [{cosets.p_min}, {cosets.p_max}]", Provenance.UNKNOWN.value)
        )
        return DecompositionReport(ctx, cosets, None, None, None, [], [], {}, claims, strict)
    table, index = coset_representatives(ctx, cosets)
    rel = rewrite_relation(ctx, cosets, table, index)
    claims.append(Claim("t * prod g_i^(c_i r_i) reassembles to w", Provenance.EXACT.value))
    h1 = build_H1(ctx, rel, table)
    claims.append(Claim(f"p = {cosets.p}", Provenance.EXACT.value if table.exact else Provenance.CHECKED.value))
    rows = _action_rows(ctx, table, h1)
    isos = []
    for k in coset_ball(ctx, table, radius):
        isos.append(iso_H1_to_Hx(ctx, table, h1, table.rep(k)))
    claims.append(
        Claim(
            "H_1 -> H_x maps relator to relator",
            Provenance.EXACT.value if all(m.relator_check for m in isos) else "FAILED",
        )
    )
    fam, ball = fiap_window(ctx, table, h1, radius)
    ok, _ = combinatorial_conditions(fam)
    window = {
        "cosets": [ctx.fmt_T(table.rep(k)) for k in ball],
        "sets": [sorted(w) for w in fam.omega],
        "min_max_conditions": ok,
    }
    if ok and len(fam.omega) >= 2:
        window["tree"] = amalgam_tree(fam).tree.render(fam)
    claims.append(Claim("no nontrivial element of R dies in Ghat", r_injectivity_check(ctx, depth)))
    return DecompositionReport(ctx, cosets, table, rel, h1, rows, isos, window, claims, strict)


def decompose(
    w: RelativeWord, G: GroupDescriptor, limits: Limits | None = None, depth: int = 4, radius: int = 1
) -> DecompositionReport:
    return assemble_report(build_context(w, G, limits=limits), depth, radius)

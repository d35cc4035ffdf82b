"""Oriented sphere maps and labelled diagrams over relative presentations.

A face is a cyclic list of slots read anticlockwise, alternating corners and
pre-edges: ``[c_0, e_1, c_1, e_2, ..., c_{k-1}, e_k]`` where ``e_i`` runs
from ``c_{i-1}`` to ``c_i``.  Each edge id occurs on exactly two pre-edges;
``dir`` is +1 when the pre-edge follows the edge's arrow.  Vertices are not
input: they are the orbits of the clockwise successor map

    corner c  ->  corner following the partner of the pre-edge leaving c

which lists the corners at a vertex in clockwise order.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .errors import Malformed, ParseError
from .rewriting import GroupDescriptor, Limits, RewriteEngine, complete
from .verdicts import Provenance, Verdict
from .words import EMPTY, Alphabet, FreeWord, RelativeWord, reduced_words


@dataclass(frozen=True)
class Corner:
    id: str
    label: str = "1"


@dataclass(frozen=True)
class PreEdge:
    edge: str
    dir: int
    label: str = "t"


Slot = Corner | PreEdge


@dataclass(frozen=True)
class Face:
    id: str
    boundary: tuple[Slot, ...]

    @property
    def corners(self) -> tuple[Corner, ...]:
        return self.boundary[0::2]

    @property
    def pre_edges(self) -> tuple[PreEdge, ...]:
        return self.boundary[1::2]

    @property
    def degree(self) -> int:
        return len(self.boundary) // 2


@dataclass
class MapReport:
    faces: int
    corners: int
    pre_edges: int
    edges: int
    vertices: int
    euler: int
    connected: bool
    problems: list[str]

    @property
    def valid(self) -> bool:
        return not self.problems

    def to_json(self) -> dict:
        return {
            "faces": self.faces,
            "corners": self.corners,
            "pre_edges": self.pre_edges,
            "edges": self.edges,
            "vertices": self.vertices,
            "euler_characteristic": self.euler,
            "genus": (2 - self.euler) // 2 if self.connected else None,
            "connected": self.connected,
            "valid": self.valid,
            "problems": list(self.problems),
        }


class SphereMap:
    """Faces with edge pairing; vertices and adjacency derived."""

    def __init__(self, faces: Sequence[Face]):
        self.faces = tuple(faces)
        self.face_by_id = {f.id: f for f in self.faces}
        # (face index, slot index) of each pre-edge, grouped by edge id
        self.edge_slots: dict[str, list[tuple[int, int]]] = {}
        self.corner_at: dict[str, tuple[int, int]] = {}
        for fi, f in enumerate(self.faces):
            for si, s in enumerate(f.boundary):
                if isinstance(s, PreEdge):
                    self.edge_slots.setdefault(s.edge, []).append((fi, si))
                else:
                    self.corner_at[s.id] = (fi, si)

    @property
    def corners(self) -> list[Corner]:
        return [c for f in self.faces for c in f.corners]

    @property
    def edges(self) -> list[str]:
        return list(self.edge_slots)

    def slot(self, fi: int, si: int) -> Slot:
        b = self.faces[fi].boundary
        return b[si % len(b)]

    def partner(self, fi: int, si: int) -> tuple[int, int]:
        e = self.slot(fi, si).edge
        a, b = self.edge_slots[e]
        return b if a == (fi, si % len(self.faces[fi].boundary)) else a

    def clockwise_next(self, corner_id: str) -> str:
        fi, si = self.corner_at[corner_id]
        pfi, psi = self.partner(fi, si + 1)
        return self.slot(pfi, psi + 1).id

    def vertices(self) -> list[tuple[str, ...]]:
        """Corner ids at each vertex, clockwise from the least id; sorted by that id."""
        seen: set[str] = set()
        out = []
        for c in sorted(self.corner_at):
            if c in seen:
                continue
            orbit = [c]
            seen.add(c)
            nxt = self.clockwise_next(c)
            while nxt != c:
                if nxt in seen:
                    raise Malformed("corner gluing is not a permutation", invariant="vertices")
                orbit.append(nxt)
                seen.add(nxt)
                nxt = self.clockwise_next(nxt)
            out.append(tuple(orbit))
        return out

    def vertex_of(self, corner_id: str) -> tuple[str, ...]:
        for v in self.vertices():
            if corner_id in v:
                return v
        raise KeyError(corner_id)


def _problems(m: SphereMap) -> list[str]:
    problems = []
    if not m.faces:
        problems.append("no faces")
    ids = [f.id for f in m.faces]
    if len(set(ids)) != len(ids):
        problems.append("duplicate face ids")
    cids = [c.id for c in m.corners]
    if len(set(cids)) != len(cids):
        problems.append("duplicate corner ids")
    for f in m.faces:
        if not f.boundary:
            problems.append(f"face {f.id}: empty boundary")
            continue
        if len(f.boundary) % 2:
            problems.append(f"face {f.id}: boundary does not alternate corners and pre-edges")
        for k, s in enumerate(f.boundary):
            want = Corner if k % 2 == 0 else PreEdge
            if not isinstance(s, want):
                problems.append(f"face {f.id}: slot {k} should be a {want.__name__.lower()}")
                break
    for e, slots in m.edge_slots.items():
        if len(slots) != 2:
            problems.append(f"edge {e}: appears {len(slots)} times, expected 2")
            continue
        a, b = (m.slot(*s) for s in slots)
        if a.dir not in (1, -1) or b.dir not in (1, -1):
            problems.append(f"edge {e}: direction must be +1 or -1")
        elif a.dir == b.dir:
            problems.append(f"edge {e}: both sides traverse it the same way (orientation)")
        if a.label != b.label:
            problems.append(f"edge {e}: sides disagree on the label")
    return problems


def validate_map(m: SphereMap, raise_on_error: bool = True) -> MapReport:
    problems = _problems(m)
    nc = len(m.corners)
    npe = sum(f.degree for f in m.faces)
    ne = len(m.edge_slots)
    if problems:
        report = MapReport(len(m.faces), nc, npe, ne, 0, 0, False, problems)
        if raise_on_error:
            raise Malformed(problems[0], invariant=problems[0], report=report.to_json())
        return report
    verts = m.vertices()
    where = {c: k for k, v in enumerate(verts) for c in v}
    # 1-skeleton connectivity by union-find on vertices along edges
    parent = list(range(len(verts)))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for slots in m.edge_slots.values():
        fi, si = slots[0]
        u = where[m.slot(fi, si - 1).id]
        v = where[m.slot(fi, si + 1).id]
        parent[find(u)] = find(v)
    connected = len({find(i) for i in range(len(verts))}) == 1
    euler = len(verts) - ne + len(m.faces)
    if nc != npe or npe != 2 * ne:
        problems.append("corner, pre-edge and edge counts are inconsistent")
    if not connected:
        problems.append("1-skeleton is not connected")
    elif euler != 2:
        problems.append(f"Euler characteristic {euler} != 2: not a sphere (genus {(2 - euler) // 2})")
    report = MapReport(len(m.faces), nc, npe, ne, len(verts), euler, connected, problems)
    if problems and raise_on_error:
        raise Malformed(problems[0], invariant=problems[0], report=report.to_json())
    return report


# --------------------------------------------------------------------------
# labelled diagrams


@dataclass
class HowieDiagram:
    map: SphereMap
    exterior_faces: frozenset[str] = frozenset()
    exterior_vertices: frozenset[str] = frozenset()  # given by any corner at the vertex
    phi_cells: frozenset[str] = frozenset()  # faces declared to be p^t p^-phi cells

    def is_exterior_vertex(self, v: Sequence[str]) -> bool:
        return any(c in self.exterior_vertices for c in v)

    def interior_faces(self) -> list[Face]:
        return [f for f in self.map.faces if f.id not in self.exterior_faces]


def parse_diagram(text: str) -> HowieDiagram:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(e.msg, e.lineno, e.colno) from None
    return diagram_from_json(data)


def diagram_from_json(data: dict) -> HowieDiagram:
    if not isinstance(data, dict) or "faces" not in data:
        raise Malformed("diagram JSON needs a 'faces' list", invariant="format")
    faces = []
    for n, fd in enumerate(data["faces"]):
        fid = str(fd.get("id", n))
        slots: list[Slot] = []
        k = 0
        for pos, entry in enumerate(fd.get("boundary", [])):
            if pos % 2 == 0:
                if "corner" not in entry:
                    raise Malformed(f"face {fid}: entry {pos} must be a corner", invariant="alternation")
                slots.append(Corner(str(entry.get("id", f"{fid.lower()}{k}")), str(entry["corner"])))
                k += 1
            else:
                if "edge" not in entry:
                    raise Malformed(f"face {fid}: entry {pos} must be an edge", invariant="alternation")
                slots.append(PreEdge(str(entry["edge"]), int(entry.get("dir", 1)), str(entry.get("label", "t"))))
        if len(slots) % 2:
            raise Malformed(f"face {fid}: boundary must end with an edge entry", invariant="alternation")
        faces.append(Face(fid, tuple(slots)))
    return HowieDiagram(
        SphereMap(faces),
        frozenset(map(str, data.get("exterior_faces", []))),
        frozenset(map(str, data.get("exterior_vertices", []))),
        frozenset(map(str, data.get("phi_cells", []))),
    )


def diagram_to_json(d: HowieDiagram) -> dict:
    faces = []
    for f in d.map.faces:
        b = []
        for s in f.boundary:
            if isinstance(s, Corner):
                b.append({"corner": s.label, "id": s.id})
            else:
                b.append({"edge": s.edge, "dir": s.dir, "label": s.label})
        faces.append({"id": f.id, "boundary": b})
    return {
        "faces": faces,
        "exterior_faces": sorted(d.exterior_faces),
        "exterior_vertices": sorted(d.exterior_vertices),
        "phi_cells": sorted(d.phi_cells),
    }


@dataclass(frozen=True)
class LabelToken:
    """One edge crossing followed by the corner after it."""

    symbol: str
    exponent: int
    corner: str


def _join(parts: Iterable[str]) -> str:
    return " ".join(p for p in parts if p and p != "1") or "1"


@dataclass(frozen=True)
class FaceLabel:
    face: str
    tokens: tuple[LabelToken, ...]

    def format(self) -> str:
        out = []
        for t in self.tokens:
            out.append(t.symbol if t.exponent == 1 else f"{t.symbol}^-1")
            out.append(t.corner)
        return _join(out)


def face_label(d: HowieDiagram, face: str, start: int = 0) -> FaceLabel:
    """Label read anticlockwise starting with the ``start``-th pre-edge."""
    f = d.map.face_by_id[face]
    k = f.degree
    tokens = []
    for i in range(k):
        j = (start + i) % k
        e = f.boundary[2 * j + 1]
        c = f.boundary[(2 * j + 2) % len(f.boundary)]
        tokens.append(LabelToken(e.label, e.dir, c.label))
    return FaceLabel(face, tuple(tokens))


@dataclass(frozen=True)
class VertexLabel:
    corners: tuple[str, ...]
    label: str
    up_to_conjugacy: bool = True


def vertex_label(d: HowieDiagram, v: Sequence[str] | str) -> VertexLabel:
    """Product of corner labels clockwise, starting from the least corner id."""
    corners = d.map.vertex_of(v) if isinstance(v, str) else tuple(v)
    labels = {c.id: c.label for c in d.map.corners}
    return VertexLabel(tuple(corners), _join(labels[c] for c in corners))


# --------------------------------------------------------------------------
# checking against a relative presentation


@dataclass(frozen=True)
class RelativePresentation:
    """``<H, t_1, t_2, ... | w_1, w_2, ...>`` with the w_i over ``H * F(t)``."""

    H: GroupDescriptor
    variables: tuple[str, ...]
    relators: tuple[RelativeWord, ...]

    @property
    def alphabet(self) -> Alphabet:
        return Alphabet(self.H.generators, self.variables)

    @classmethod
    def parse(cls, H: GroupDescriptor, variables: Sequence[str], relators: Sequence[str]):
        a = Alphabet(H.generators, tuple(variables))
        return cls(H, tuple(variables), tuple(a.parse(r) for r in relators))

    def engine(self, limits: Limits | None = None) -> RewriteEngine:
        return complete(self.H, limits or Limits(max_rules=1000))


Token = tuple[str, int, FreeWord]


def relator_tokens(p: RelativePresentation, w: RelativeWord) -> list[Token] | None:
    """``w`` rotated to start at a variable letter, cut after each variable letter."""
    letters = w.letters
    first = next((k for k, c in enumerate(letters) if w.alphabet.is_variable(c)), None)
    if first is None:
        return None
    rot = letters[first:] + letters[:first]
    off = w.alphabet.offset
    out: list[Token] = []
    for c in rot:
        if w.alphabet.is_variable(c):
            v = (c - off) >> 1
            out.append((p.variables[v], -1 if c & 1 else 1, EMPTY))
        else:
            s, e, g = out[-1]
            out[-1] = (s, e, g * FreeWord((c,)))
    return [(s, e, FreeWord(g.letters)) for s, e, g in out]


def invert_tokens(tokens: Sequence[Token]) -> list[Token]:
    """Tokens of the inverse word, starting with the inverse of the first edge."""
    k = len(tokens)
    inv = []
    for j in range(k):
        s, e, _ = tokens[(-j) % k]
        _, _, h = tokens[(-j - 1) % k]
        inv.append((s, -e, h.inverse()))
    return inv


def _tokens_of(p: RelativePresentation, label: FaceLabel) -> list[Token]:
    return [(t.symbol, t.exponent, p.H.word(t.corner)) for t in label.tokens]


def _compare(engine: RewriteEngine, a: Sequence[Token], b: Sequence[Token]) -> Verdict:
    if len(a) != len(b):
        return Verdict.DISTINCT
    verdict = Verdict.EQUAL
    for (s1, e1, h1), (s2, e2, h2) in zip(a, b):
        if s1 != s2 or e1 != e2:
            return Verdict.DISTINCT
        verdict = verdict & engine.equal(h1, h2)
        if verdict is Verdict.DISTINCT:
            return verdict
    return verdict


@dataclass
class FaceVerdict:
    face: str
    status: str  # MATCH | EXTERIOR | FAIL | UNKNOWN
    relator: int | None = None
    sign: int | None = None
    rotation: int | None = None

    def to_json(self) -> dict:
        return {k: v for k, v in self.__dict__.items() if v is not None}


@dataclass
class VertexVerdict:
    corners: tuple[str, ...]
    label: str
    status: str  # TRIVIAL | EXTERIOR | FAIL | UNKNOWN

    def to_json(self) -> dict:
        return {"corners": list(self.corners), "label": self.label, "status": self.status}


@dataclass
class DiagramReport:
    map: MapReport
    faces: list[FaceVerdict]
    vertices: list[VertexVerdict]
    reducible_pairs: list["ReduciblePair"] = field(default_factory=list)

    @property
    def status(self) -> str:
        states = {f.status for f in self.faces} | {v.status for v in self.vertices}
        if "FAIL" in states:
            return "FAIL"
        if "UNKNOWN" in states:
            return "UNKNOWN"
        return "PASS"

    def to_json(self) -> dict:
        return {
            "status": self.status,
            "map": self.map.to_json(),
            "faces": [f.to_json() for f in self.faces],
            "vertices": [v.to_json() for v in self.vertices],
            "reducible_pairs": [r.to_json() for r in self.reducible_pairs],
        }


def match_face(p: RelativePresentation, engine: RewriteEngine, label: FaceLabel) -> FaceVerdict:
    tokens = _tokens_of(p, label)
    undecided = None
    for i, w in enumerate(p.relators):
        base = relator_tokens(p, w)
        if base is None or len(base) != len(tokens):
            continue
        for sign, ref in ((1, base), (-1, invert_tokens(base))):
            k = len(ref)
            for r in range(k):
                verdict = _compare(engine, tokens, ref[r:] + ref[:r])
                if verdict is Verdict.EQUAL:
                    return FaceVerdict(label.face, "MATCH", i, sign, r)
                if verdict is Verdict.UNKNOWN and undecided is None:
                    undecided = FaceVerdict(label.face, "UNKNOWN", i, sign, r)
    return undecided or FaceVerdict(label.face, "FAIL")


def check_diagram(
    d: HowieDiagram, p: RelativePresentation, limits: Limits | None = None
) -> DiagramReport:
    report = validate_map(d.map)
    engine = p.engine(limits)
    faces = []
    for f in d.map.faces:
        if f.id in d.exterior_faces:
            faces.append(FaceVerdict(f.id, "EXTERIOR"))
        else:
            faces.append(match_face(p, engine, face_label(d, f.id)))
    verts = []
    for v in d.map.vertices():
        lab = vertex_label(d, v)
        if d.is_exterior_vertex(v):
            verts.append(VertexVerdict(v, lab.label, "EXTERIOR"))
            continue
        verdict = engine.is_trivial(p.H.word(lab.label))
        status = {Verdict.EQUAL: "TRIVIAL", Verdict.DISTINCT: "FAIL"}.get(verdict, "UNKNOWN")
        verts.append(VertexVerdict(v, lab.label, status))
    return DiagramReport(report, faces, verts, find_reducible_pairs(d, p, engine))


# --------------------------------------------------------------------------
# reducible pairs and phi-reduced diagrams


@dataclass(frozen=True)
class EdgeCheck:
    """Whether the two faces on an edge read mutually inverse labels from it."""

    edge: str
    faces: tuple[str, str]
    verdict: Verdict
    syntactic: bool


@dataclass(frozen=True)
class ReduciblePair:
    faces: tuple[str, str]
    edges: tuple[str, ...]
    provenance: str

    def to_json(self) -> dict:
        return {"faces": list(self.faces), "edges": list(self.edges), "provenance": self.provenance}


def _start_index(si: int) -> int:
    # pre-edge j sits at slot 2j + 1
    return (si - 1) // 2


def edge_checks(
    d: HowieDiagram, p: RelativePresentation, engine: RewriteEngine | None = None
) -> list[EdgeCheck]:
    """Every edge between two distinct interior faces, with its reducibility verdict."""
    engine = engine or p.engine()
    m = d.map
    out = []
    for e in sorted(m.edge_slots):
        (f1, s1), (f2, s2) = sorted(m.edge_slots[e])
        a, b = m.faces[f1], m.faces[f2]
        if f1 == f2 or a.id in d.exterior_faces or b.id in d.exterior_faces:
            continue
        la = _tokens_of(p, face_label(d, a.id, _start_index(s1)))
        lb = _tokens_of(p, face_label(d, b.id, _start_index(s2)))
        target = invert_tokens(la)
        verdict = _compare(engine, lb, target)
        out.append(EdgeCheck(e, tuple(sorted((a.id, b.id))), verdict, _compare_syntactic(lb, target)))
    return out


def _compare_syntactic(a: Sequence[Token], b: Sequence[Token]) -> bool:
    return len(a) == len(b) and all(
        x[0] == y[0] and x[1] == y[1] and x[2].letters == y[2].letters for x, y in zip(a, b)
    )


def find_reducible_pairs(
    d: HowieDiagram, p: RelativePresentation, engine: RewriteEngine | None = None
) -> list[ReduciblePair]:
    """Unordered pairs of distinct interior faces that cancel across some shared edge.

    Provenance is EXACT when the corner labels are inverse letter for letter
    and EQUAL when that needed the relations of H.
    """
    grouped: dict[tuple[str, str], list[EdgeCheck]] = {}
    for c in edge_checks(d, p, engine):
        if c.verdict is Verdict.EQUAL:
            grouped.setdefault(c.faces, []).append(c)
    return [
        ReduciblePair(
            faces,
            tuple(c.edge for c in checks),
            Provenance.EXACT.value if any(c.syntactic for c in checks) else Verdict.EQUAL.value,
        )
        for faces, checks in sorted(grouped.items())
    ]


@dataclass(frozen=True)
class PhiPresentationSpec:
    """``<H, t | p^t = p^phi (p in P), w_1, ...>``; P given by generators and their images."""

    H: GroupDescriptor
    P: tuple[FreeWord, ...]
    images: tuple[FreeWord, ...]
    relators: tuple[RelativeWord, ...] = ()
    variable: str = "t"

    def presentation(self) -> RelativePresentation:
        return RelativePresentation(self.H, (self.variable,), self.relators)

    def phi(self, codes: Sequence[int]) -> FreeWord:
        """Image of a word in the P-generators (letter i is generator i >> 1)."""
        out: list[int] = []
        for c in codes:
            img = self.images[c >> 1]
            out.extend((img.inverse() if c & 1 else img).letters)
        return FreeWord(out)

    def element(self, codes: Sequence[int]) -> FreeWord:
        out: list[int] = []
        for c in codes:
            g = self.P[c >> 1]
            out.extend((g.inverse() if c & 1 else g).letters)
        return FreeWord(out)

    def check_homomorphism(self, depth: int, engine: RewriteEngine) -> str:
        """Words in P's generators trivial in H must have trivial images (bounded)."""
        unknown = False
        for codes in reduced_words(len(self.P), depth, 1):
            v = engine.is_trivial(self.element(codes))
            if v is Verdict.EQUAL:
                img = engine.is_trivial(self.phi(codes))
                if img is Verdict.DISTINCT:
                    return "REFUTED"
                unknown = unknown or img is Verdict.UNKNOWN
            elif v is Verdict.UNKNOWN:
                unknown = True
        return "UNKNOWN" if unknown else f"CHECKED_AT_DEPTH_{depth}"


def _phi_cell(spec: PhiPresentationSpec, engine: RewriteEngine, tokens: list[Token], depth: int) -> Verdict:
    """Does the label rotate to ``(t^-1 p t (p^phi)^-1)^{+-1}`` for some p in P of length <= depth?"""
    if len(tokens) != 2 or {e for _, e, _ in tokens} != {1, -1}:
        return Verdict.DISTINCT
    if tokens[0][1] == 1:
        tokens = tokens[1:] + tokens[:1]
    # tokens now read t^-1 h1 t h2; the inverse cell reads t^-1 phi(p) t p^-1
    (_, _, h1), (_, _, h2) = tokens
    best = Verdict.DISTINCT
    for codes in [()] + list(reduced_words(len(spec.P), depth, 1)):
        p, q = spec.element(codes), spec.phi(codes)
        for first, second in ((p, q), (q, p)):
            v = engine.equal(h1, first) & engine.equal(h2, second.inverse())
            if v is Verdict.EQUAL:
                if not codes:
                    continue  # p = 1 is excluded
                return Verdict.EQUAL
            if v is Verdict.UNKNOWN:
                best = Verdict.UNKNOWN
    return best


@dataclass
class PhiReducedReport:
    reduced: bool
    phi_cells: list[str]
    adjacent_phi_cells: list[tuple[str, str, str]]
    undecided_cells: list[str]
    reducible_pairs: list[ReduciblePair]

    @property
    def verdict(self) -> str:
        if self.reducible_pairs or self.adjacent_phi_cells:
            return "NOT_PHI_REDUCED"
        if self.undecided_cells:
            return "UNKNOWN"
        return "PHI_REDUCED"

    def to_json(self) -> dict:
        return {
            "verdict": self.verdict,
            "reduced": self.reduced,
            "phi_cells": self.phi_cells,
            "adjacent_phi_cells": [list(x) for x in self.adjacent_phi_cells],
            "undecided_cells": self.undecided_cells,
            "reducible_pairs": [r.to_json() for r in self.reducible_pairs],
        }


def is_phi_reduced(
    d: HowieDiagram, spec: PhiPresentationSpec, depth: int = 3, limits: Limits | None = None
) -> PhiReducedReport:
    """Reduced, and no two distinct interior phi-cells share an edge.

    A face is a phi-cell if the diagram declares it so, or if its label
    matches ``p^t p^-phi`` for some p of length <= ``depth`` in P's generators.
    """
    validate_map(d.map)
    p = spec.presentation()
    engine = p.engine(limits)
    pairs = find_reducible_pairs(d, p, engine)
    cells, undecided = [], []
    for f in d.interior_faces():
        if f.id in d.phi_cells:
            cells.append(f.id)
            continue
        v = _phi_cell(spec, engine, _tokens_of(p, face_label(d, f.id)), depth)
        if v is Verdict.EQUAL:
            cells.append(f.id)
        elif v is Verdict.UNKNOWN:
            undecided.append(f.id)
    m = d.map
    cell_set = set(cells)
    adjacent = []
    for e in sorted(m.edge_slots):
        (f1, _), (f2, _) = m.edge_slots[e]
        a, b = m.faces[f1].id, m.faces[f2].id
        if a != b and a in cell_set and b in cell_set:
            adjacent.append((e, *sorted((a, b))))
    return PhiReducedReport(not pairs, sorted(cells), adjacent, undecided, pairs)

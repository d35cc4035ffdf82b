"""Small hand-built diagrams used by the tests and the self-test."""

from __future__ import annotations

from typing import Mapping, Sequence

from .diagrams import (
    Corner,
    Face,
    HowieDiagram,
    PreEdge,
    RelativePresentation,
    SphereMap,
    relator_tokens,
)
from .words import RelativeWord


def map_from_cycles(
    cycles: Mapping[str, Sequence[int]],
    arrows: set[tuple[int, int]],
    labels: Mapping[str, str] | None = None,
    edge_label: str = "t",
) -> HowieDiagram:
    """Diagram from anticlockwise vertex cycles of a plane graph.

    Corner ``k`` of face ``F`` gets id ``f<k>`` and, unless ``labels`` says
    otherwise, its id as label.  Each edge ``{u, v}`` carries an arrow from
    ``u`` to ``v`` when ``(u, v)`` is in ``arrows``.
    """
    labels = labels or {}
    faces = []
    for name, cyc in cycles.items():
        slots = []
        k = len(cyc)
        for i, u in enumerate(cyc):
            cid = f"{name.lower()}{i}"
            slots.append(Corner(cid, labels.get(cid, cid)))
            v = cyc[(i + 1) % k]
            if (u, v) in arrows:
                d = 1
            elif (v, u) in arrows:
                d = -1
            else:
                raise ValueError(f"edge {u}-{v} has no arrow")
            slots.append(PreEdge(f"{min(u, v)}{max(u, v)}", d, edge_label))
        faces.append(Face(name, tuple(slots)))
    return HowieDiagram(SphereMap(faces))


# A hexagon B around four triangles: 5 faces, 18 corners, 9 edges, 6 vertices.
# Vertex 2 carries corners b3, c2, d1 in clockwise order; B read from the
# pre-edge between b3 and b4 has edge directions (+, +, -, -, -, +); C and E
# share the edge 03 with c0 ~ e0, c1 ~ e2, c2 ~ e1 across it.
SIX_VERTEX_CYCLES = {
    "A": (5, 4, 3),
    "B": (5, 0, 1, 2, 3, 4),
    "C": (0, 3, 2),
    "D": (0, 2, 1),
    "E": (0, 5, 3),
}
SIX_VERTEX_ARROWS = {(2, 3), (3, 4), (5, 4), (0, 5), (1, 0), (1, 2), (0, 2), (0, 3), (5, 3)}


def six_vertex_map(labels: Mapping[str, str] | None = None) -> HowieDiagram:
    return map_from_cycles(SIX_VERTEX_CYCLES, SIX_VERTEX_ARROWS, labels)


def two_face_sphere() -> HowieDiagram:
    """Two faces sharing one edge: V = 1, E = 1, F = 2."""
    return HowieDiagram(
        SphereMap(
            [
                Face("P", (Corner("p0"), PreEdge("e", 1))),
                Face("Q", (Corner("q0"), PreEdge("e", -1))),
            ]
        )
    )


def mirror_pair(p: RelativePresentation, relator: int = 0) -> HowieDiagram:
    """A sphere made of one face labelled ``w`` and its mirror image.

    The two faces share every edge, the corner labels at each vertex are
    mutually inverse, so every vertex label is trivial and every edge gives
    the same reducible pair.
    """
    w: RelativeWord = p.relators[relator]
    tokens = relator_tokens(p, w)
    if tokens is None:
        raise ValueError("relator has no variable letters")
    k = len(tokens)
    names = p.H.generators
    # F: vertex i sits between edge x_{i-1} and edge x_i, the corner at vertex i+1 follows x_i
    f_bound = []
    for i in range(k):
        s, e, h = tokens[i]
        f_bound += [Corner(f"f{i}", tokens[(i - 1) % k][2].format(names)), PreEdge(f"x{i}", e, s)]
    # mirror: walk the vertices backwards, edges traversed against F's direction
    g_bound = []
    for j in range(k):
        i = (k - j) % k  # vertex i
        s, e, _ = tokens[(i - 1) % k]
        g_bound += [Corner(f"g{j}", tokens[(i - 1) % k][2].inverse().format(names)), PreEdge(f"x{(i - 1) % k}", -e, s)]
    return HowieDiagram(SphereMap([Face("F", tuple(f_bound)), Face("G", tuple(g_bound))]))

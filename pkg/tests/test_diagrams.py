import json

import pytest
from hypothesis import given
from hypothesis import strategies as st

from relpres.diagrams import (
    PhiPresentationSpec,
    RelativePresentation,
    check_diagram,
    diagram_from_json,
    diagram_to_json,
    face_label,
    find_reducible_pairs,
    is_phi_reduced,
    parse_diagram,
    validate_map,
    vertex_label,
)
from relpres.errors import Malformed, ParseError
from relpres.fixtures import mirror_pair, six_vertex_map, two_face_sphere
from relpres.rewriting import GroupDescriptor
from relpres.words import FreeWord

SIX = six_vertex_map()
CORNER_IDS = tuple(sorted(c.id for c in SIX.map.corners))
FREE_ON_CORNERS = RelativePresentation(GroupDescriptor.free(CORNER_IDS), ("t",), ())
Z2 = GroupDescriptor.free_abelian(("a", "b"))


def bigon(p_label, q_label, exterior=(), phi=()):
    return diagram_from_json(
        {
            "faces": [
                {"id": "P", "boundary": [{"corner": p_label}, {"edge": "e", "dir": 1}]},
                {"id": "Q", "boundary": [{"corner": q_label}, {"edge": "e", "dir": -1}]},
            ],
            "exterior_faces": list(exterior),
            "phi_cells": list(phi),
        }
    )


# -- map structure


def test_six_vertex_map_counts():
    r = validate_map(SIX.map)
    assert (r.faces, r.corners, r.pre_edges, r.edges, r.vertices, r.euler) == (5, 18, 18, 9, 6, 2)


def test_two_face_sphere_counts():
    r = validate_map(two_face_sphere().map)
    assert (r.faces, r.corners, r.edges, r.vertices, r.euler) == (2, 2, 1, 1, 2)


def test_edge_used_once_is_malformed():
    data = {"faces": [{"id": "A", "boundary": [{"corner": "a"}, {"edge": "e", "dir": 1}]}]}
    with pytest.raises(Malformed):
        validate_map(diagram_from_json(data).map)


def test_partner_pre_edges_need_opposite_directions():
    data = {
        "faces": [
            {"id": "P", "boundary": [{"corner": "a"}, {"edge": "e", "dir": 1}]},
            {"id": "Q", "boundary": [{"corner": "b"}, {"edge": "e", "dir": 1}]},
        ]
    }
    with pytest.raises(Malformed):
        validate_map(diagram_from_json(data).map)


def test_bad_json_reports_position():
    with pytest.raises(ParseError) as e:
        parse_diagram('{"faces": [\n  {"id": }]}')
    assert e.value.line == 2


def test_json_round_trip():
    again = diagram_from_json(json.loads(json.dumps(diagram_to_json(SIX))))
    assert diagram_to_json(again) == diagram_to_json(SIX)


# -- labels


def test_vertex_label_of_three_corner_vertex():
    v = vertex_label(SIX, "b3")
    assert v.corners == ("b3", "c2", "d1")
    assert v.label == "b3 c2 d1" and v.up_to_conjugacy


def test_single_corner_vertex_label():
    assert vertex_label(two_face_sphere(), "p0").corners == ("p0", "q0")
    assert vertex_label(bigon("1", "1"), "p0").label == "1"


def test_hexagon_label_from_fourth_pre_edge():
    assert face_label(SIX, "B", 3).format() == "t b4 t b5 t^-1 b0 t^-1 b1 t^-1 b2 t b3"


def test_bigon_face_label():
    assert face_label(bigon("a", "a^-1"), "P").format() == "t a"


# -- checking against a presentation


def test_mirror_pair_passes_and_is_reducible():
    p = RelativePresentation.parse(Z2, ("t",), ["a t b t^-1 a t"])
    d = mirror_pair(p)
    report = check_diagram(d, p)
    assert report.status == "PASS"
    pairs = find_reducible_pairs(d, p)
    assert len(pairs) == 1 and pairs[0].faces == ("F", "G") and pairs[0].provenance == "EXACT"


def test_nontrivial_vertex_fails():
    H = GroupDescriptor.free(("g",))
    p = RelativePresentation.parse(H, ("t",), ["g t"])
    report = check_diagram(bigon("g", "g", exterior=["Q"]), p)
    assert report.status == "FAIL"
    assert [v.status for v in report.vertices] == ["FAIL"]


def test_vertex_trivial_only_through_relators_passes():
    p = RelativePresentation.parse(Z2, ("t",), ["a b t"])
    report = check_diagram(bigon("a b", "a^-1 b^-1", exterior=["Q"]), p)
    assert report.status == "PASS"
    assert [v.status for v in report.vertices] == ["TRIVIAL"]


def test_pair_inverse_only_through_relators_is_found():
    p = RelativePresentation.parse(Z2, ("t",), ["a b t"])
    pairs = find_reducible_pairs(bigon("a b", "a^-1 b^-1"), p)
    assert len(pairs) == 1


def test_reduced_fixture_has_no_pairs():
    assert find_reducible_pairs(SIX, FREE_ON_CORNERS) == []


def test_planted_mirror_edge_in_six_vertex_map():
    d = six_vertex_map({"e0": "c0^-1", "e1": "c2^-1", "e2": "c1^-1"})
    pairs = find_reducible_pairs(d, FREE_ON_CORNERS)
    assert [(x.faces, x.edges) for x in pairs] == [(("C", "E"), ("03",))]


# -- phi-reduced diagrams


def _spec(p):
    return PhiPresentationSpec(p.H, (FreeWord((0,)),), (FreeWord((2,)),), p.relators)


def test_adjacent_phi_cells_are_not_phi_reduced():
    H = GroupDescriptor.free(("a", "b", "c", "d"))
    p = RelativePresentation(H, ("t",), ())
    r = is_phi_reduced(bigon("c", "d", phi=["P", "Q"]), _spec(p))
    assert r.verdict == "NOT_PHI_REDUCED" and r.adjacent_phi_cells


def test_separated_phi_cells_are_phi_reduced():
    d = diagram_from_json({**diagram_to_json(SIX), "phi_cells": ["A", "C"]})
    spec = PhiPresentationSpec(FREE_ON_CORNERS.H, (FreeWord((0,)),), (FreeWord((2,)),))
    assert is_phi_reduced(d, spec, depth=1).verdict == "PHI_REDUCED"


def test_reducible_diagram_is_not_phi_reduced():
    p = RelativePresentation.parse(Z2, ("t",), ["a t b t^-1 a t"])
    spec = PhiPresentationSpec(Z2, (Z2.word("a"),), (Z2.word("b"),), p.relators)
    assert is_phi_reduced(mirror_pair(p), spec, depth=1).verdict == "NOT_PHI_REDUCED"


def test_phi_cell_detected_from_its_label():
    # t^-1 a t b^-1 is the cell for p = a, p^phi = b
    H = GroupDescriptor.free(("a", "b"))
    d = diagram_from_json(
        {
            "faces": [
                {"id": "P", "boundary": [{"corner": "b^-1"}, {"edge": "e", "dir": -1}, {"corner": "a"}, {"edge": "f", "dir": 1}]},
                {"id": "Q", "boundary": [{"corner": "x"}, {"edge": "f", "dir": -1}, {"corner": "y"}, {"edge": "e", "dir": 1}]},
            ],
            "exterior_faces": ["Q"],
        }
    )
    spec = PhiPresentationSpec(H, (H.word("a"),), (H.word("b"),))
    assert is_phi_reduced(d, spec, depth=1).phi_cells == ["P"]


@given(st.lists(st.sampled_from(["a", "b", "a^-1", "b^-1", "1"]), min_size=18, max_size=18), st.integers(0, 5))
def test_face_labels_rotate_with_starting_pre_edge(labels, s):
    d = six_vertex_map(dict(zip(CORNER_IDS, labels)))
    for f in d.map.faces:
        k = f.degree
        base = face_label(d, f.id, 0).tokens
        assert face_label(d, f.id, s % k).tokens == base[s % k:] + base[: s % k]

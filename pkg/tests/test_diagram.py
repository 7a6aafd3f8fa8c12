import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import braid_diagram, braid_words
from oracles import uf_circles
from khtorsion.bracket import kauffman_bracket, unnormalized_jones
from khtorsion.builtins import BUILTIN_NAMES, builtin, builtin_text
from khtorsion.diagram import (ChordDiagram, DiagramError, KauffmanState, LinkDiagram,
                               a_smoothing_chord_diagram, braid_closure, diagram_from_chords,
                               diagram_from_json, disjoint_union, insert_pattern, load_diagram,
                               parse_chord_diagram, parse_pd, pretzel_diagram, smooth, unknot)
from khtorsion.homology import homology_table
from khtorsion.pattern import find_patterns


def arcs_consistent(crossings) -> bool:
    """Every arc label occurs exactly twice."""
    seen = {}
    for x in crossings:
        for a in x:
            seen[a] = seen.get(a, 0) + 1
    return all(v == 2 for v in seen.values())


# -- parsing ----------------------------------------------------------------

def test_parse_three_crossing_diagram():
    d = parse_pd("X(1,4,2,5) X(3,6,4,1) X(5,2,6,3)")
    assert d.n_crossings == 3
    assert d.arcs == (1, 2, 3, 4, 5, 6)
    assert arcs_consistent(d.crossings)
    assert d.positive_count + d.negative_count == 3
    assert d.writhe == d.positive_count - d.negative_count


def test_parse_circle_token_is_unknot():
    d = parse_pd("circle")
    assert d.n_crossings == 0 and d.loops == 1
    assert (d.positive_count, d.negative_count, d.writhe) == (0, 0, 0)
    assert smooth(d, 0).count == 1


def test_duplicate_crossing_rejected():
    with pytest.raises(DiagramError):
        parse_pd("X(1,2,3,4) X(1,2,3,4)")


@pytest.mark.parametrize("text", [
    "", "X(1,2,3)", "X(1,2,3,4", "Y(1,2,3,4)", "X(1,1,2,3)", "X(0,1,1,0)",
])
def test_malformed_pd_rejected(text):
    with pytest.raises(DiagramError):
        parse_pd(text)


def test_pd_syntax_variants():
    plain = parse_pd("X(1,4,2,5) X(5,8,6,1) X(6,3,7,4) X(2,7,3,8)")
    wrapped = parse_pd("PD[X[1,4,2,5], X[5,8,6,1],\n X[6,3,7,4], X[2,7,3,8]]  # trefoil")
    assert plain == wrapped


def test_json_mirror_round_trip(trefoil):
    assert diagram_from_json(trefoil.to_json()) == trefoil
    assert diagram_from_json('{"crossings": [[1,4,2,5],[5,8,6,1],[6,3,7,4],[2,7,3,8]]}') == trefoil
    two = disjoint_union(trefoil, unknot())
    assert diagram_from_json(two.to_json()) == two
    with pytest.raises(DiagramError):
        diagram_from_json("{}")


def test_load_diagram_from_files(tmp_path, trefoil):
    (tmp_path / "t.pd").write_text(trefoil.to_pd())
    (tmp_path / "t.json").write_text(trefoil.to_json())
    assert load_diagram(str(tmp_path / "t.pd")) == trefoil
    assert load_diagram(str(tmp_path / "t.json")) == trefoil


@given(braid_words())
def test_pd_text_round_trip(ws):
    d = braid_diagram(ws)
    assert parse_pd(d.to_pd()) == d


# -- orientation and signs -----------------------------------------------------

def test_braid_closure_signs():
    assert braid_closure([1, 1, 1]).signs == (1, 1, 1)
    assert braid_closure([-1, -1, -1]).signs == (-1, -1, -1)
    assert braid_closure([1, -2, 1, -2], 3).writhe == 0


def test_unused_braid_strand_becomes_a_loop():
    d = braid_closure([1], 3)
    assert d.loops == 1
    assert len(d.components) == 2


def test_signs_survive_renumbering(trefoil):
    perm = [2, 0, 3, 1]
    r = trefoil.renumbered(perm)
    assert r.signs == tuple(trefoil.signs[k] for k in perm)
    with pytest.raises(DiagramError):
        trefoil.renumbered([0, 0, 1, 2])


def test_components_counted():
    assert len(builtin("whitehead").components) == 2
    assert len(builtin("borromean").components) == 3
    assert len(builtin("11n61_insertion").components) == 1


# -- smoothings ----------------------------------------------------------------

def test_kauffman_state_labels():
    s = KauffmanState.from_labels("ABBA")
    assert s.mask == 0b0110 and s.labels == "ABBA" and s.b_count == 2


def test_smooth_examples():
    assert smooth(pretzel_diagram(2, 2), 0).count == 1
    assert smooth(unknot(), 0).count == 1
    cd = a_smoothing_chord_diagram(pretzel_diagram(2, 5))
    assert cd.circle_count == 1 and len(cd.monochords) == 7


def test_smooth_rejects_foreign_state(trefoil):
    with pytest.raises(DiagramError):
        smooth(trefoil, KauffmanState(0, 3))
    with pytest.raises(DiagramError):
        smooth(trefoil, 1 << 4)


@settings(max_examples=60)
@given(braid_words(max_len=7), st.integers(0, 2 ** 7 - 1))
def test_smoothing_partitions_the_arcs(ws, raw_mask):
    d = braid_diagram(ws)
    mask = raw_mask % (1 << d.n_crossings)
    circles = smooth(d, mask).circles
    flat = [a for c in circles for a in c]
    assert sorted(flat) == list(d.arcs)
    # each crossing contributes four arc ends, each arc has two ends
    assert 2 * len(d.crossing_arcs) == 4 * d.n_crossings
    oracle = uf_circles(d.crossings, d.loops, mask)
    assert sorted(map(frozenset, circles), key=min) == sorted(oracle, key=min)


@given(braid_words(max_len=7))
def test_a_smoothing_chord_diagram_matches_smoothing(ws):
    d = braid_diagram(ws)
    cd = a_smoothing_chord_diagram(d)
    assert cd.circle_count == smooth(d, 0).count
    assert len(cd.chords) == d.n_crossings
    for circ in cd.circles:
        assert len(set(circ)) == len(circ)
    assert sorted(e for c in cd.circles for e in c) == list(range(2 * d.n_crossings))


def test_chord_diagram_examples():
    cd = a_smoothing_chord_diagram(pretzel_diagram(2, 3))
    assert cd.circle_count == len(uf_circles(pretzel_diagram(2, 3).crossings, 0, 0)) == 1
    assert len(cd.monochords) == 5 and not cd.bichords
    wh = a_smoothing_chord_diagram(builtin("whitehead"))
    assert wh.circle_count >= 2 and len(wh.bichords) >= 1
    assert a_smoothing_chord_diagram(builtin("11n61_insertion")).circle_count == 3


def test_chord_diagram_text_round_trip():
    text = "circle a/L b/L c/R d/R\ncircle e/L f/R\nchord a c\nchord b e\nchord d f\n"
    cd = parse_chord_diagram(text)
    assert cd.circle_count == 2
    assert cd.monochords == [0] and cd.bichords == [1, 2]
    assert parse_chord_diagram(cd.to_text()) == cd


@pytest.mark.parametrize("text", [
    "circle a b\nchord a c",
    "circle a a\nchord a a",
    "circle a b c\nchord a b",
    "circle a/L b\nchord a b",
    "circle a/Q b/L\nchord a b",
    "loop a b\nchord a b",
])
def test_chord_diagram_text_errors(text):
    with pytest.raises(DiagramError):
        parse_chord_diagram(text)


@given(braid_words(max_len=7))
def test_ribbon_rebuild_has_the_same_a_smoothing(ws):
    d = braid_diagram(ws)
    cd = a_smoothing_chord_diagram(d)
    rebuilt = diagram_from_chords(cd)
    assert rebuilt.is_planar()
    # orientations may differ, the unoriented diagram may not
    assert kauffman_bracket(rebuilt) == kauffman_bracket(d)
    assert a_smoothing_chord_diagram(rebuilt).circle_count == cd.circle_count


# -- generators -------------------------------------------------------------------

@pytest.mark.parametrize("g", range(1, 7))
@pytest.mark.parametrize("h", range(1, 7))
def test_pretzel_is_mono_circular(g, h):
    d = pretzel_diagram(g, h)
    cd = a_smoothing_chord_diagram(d)
    assert d.n_crossings == g + h
    assert cd.circle_count == 1 and len(cd.monochords) == g + h
    assert d.is_planar()


def test_pretzel_smallest_case():
    d = pretzel_diagram(1, 1)
    cd = a_smoothing_chord_diagram(d)
    assert d.n_crossings == 2 and cd.circle_count == 1 and len(cd.monochords) == 2


def test_pretzel_2_2_is_a_trefoil():
    # same Jones polynomial as the three-crossing closure of a 2-braid
    p = pretzel_diagram(2, 2)
    assert unnormalized_jones(p) in (unnormalized_jones(braid_closure([1, 1, 1])),
                                     unnormalized_jones(braid_closure([-1, -1, -1])))


def test_pretzel_rejects_empty_family():
    with pytest.raises(DiagramError):
        pretzel_diagram(0, 2)


def test_builtins_match_generators():
    assert builtin("trefoil_D22") == pretzel_diagram(2, 2)
    assert builtin("mirror6_1_D25") == pretzel_diagram(2, 5)
    assert builtin("8_19") == braid_closure([1, 2] * 4)
    for name in BUILTIN_NAMES:
        assert builtin_text(name).lstrip().startswith("#")
        assert builtin(name).is_planar()
    with pytest.raises(DiagramError):
        builtin("nope")


def test_insert_pattern_into_8_19():
    base = builtin("8_19")
    d = insert_pattern(base, 16, 2, 2, far_arc=12)
    assert d == builtin("11n61_insertion")
    assert d.n_crossings == 12
    assert (d.positive_count, d.negative_count) == (8, 4)
    assert len(d.components) == 1


def test_insert_pattern_into_unknot_is_the_pretzel_pattern():
    u = unknot()
    d = insert_pattern(u, u.loop_arcs[0], 2, 3)
    cd, ref = a_smoothing_chord_diagram(d), a_smoothing_chord_diagram(pretzel_diagram(2, 3))
    assert cd.circle_count == ref.circle_count == 1
    assert sorted((m.g, m.h) for m in find_patterns(cd)) == sorted((m.g, m.h) for m in find_patterns(ref))
    assert homology_table(d) == homology_table(pretzel_diagram(2, 3))


def test_insert_pattern_keeps_bichords():
    base = builtin("8_19")
    d = insert_pattern(base, 16, 2, 2, far_arc=12)
    cb, cd = a_smoothing_chord_diagram(base), a_smoothing_chord_diagram(d)
    assert cb.bichords == cd.bichords
    # endpoints of old chords are grouped into circles the same way
    groups = lambda c: sorted(sorted(e for e in circ if e < 2 * base.n_crossings) for circ in c.circles)
    assert groups(cb) == groups(cd)


def test_insert_pattern_errors():
    base = builtin("8_19")
    with pytest.raises(DiagramError):
        insert_pattern(base, 16, 1, 2)
    with pytest.raises(DiagramError):
        insert_pattern(base, 999, 2, 2)


def test_disjoint_union_counts():
    d = disjoint_union(pretzel_diagram(2, 2), unknot(2))
    assert d.n_crossings == 4 and d.loops == 2
    assert smooth(d, 0).count == 3


def test_chord_diagram_requires_sides_to_build():
    cd = ChordDiagram(((0, 1),), ((0, 1),))
    with pytest.raises(DiagramError):
        diagram_from_chords(cd)


def test_link_diagram_validation():
    with pytest.raises(DiagramError):
        LinkDiagram(((1, 2, 3),))
    with pytest.raises(DiagramError):
        LinkDiagram((), -1)
    assert json.loads(unknot().to_json()) == {"crossings": [], "loops": 1}

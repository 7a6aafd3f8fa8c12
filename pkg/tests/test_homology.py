import random

import pytest
from hypothesis import given, settings

from conftest import braid_diagram, braid_words
from oracles import rank_q
from khtorsion.acceptance import TABLE2
from khtorsion.bracket import kauffman_bracket, unnormalized_jones
from khtorsion.builtins import builtin
from khtorsion.complex import ChainVector, viro_complex
from khtorsion.diagram import a_smoothing_chord_diagram, braid_closure, pretzel_diagram, unknot
from khtorsion.homology import (GradingMap, HomologyGroup, HomologyTable, graded_euler_characteristic,
                                homology_euler_characteristic, homology_group, homology_table,
                                image_membership)
from khtorsion.pattern import find_patterns
from khtorsion.torsion import build_V, build_X, pattern_ordered

Z, Z2 = HomologyGroup(1), HomologyGroup(0, (2,))


# -- groups ------------------------------------------------------------------------

def test_group_normalizes_and_validates():
    assert HomologyGroup(1, (2,)) == HomologyGroup(1, [2])
    assert str(HomologyGroup(2, (2,))) == "Z^2+Z2"
    assert str(HomologyGroup()) == "0" and HomologyGroup().is_zero
    assert HomologyGroup(0, (6, 2)).torsion == (2, 6)
    with pytest.raises(ValueError):
        HomologyGroup(0, (2, 3))
    with pytest.raises(ValueError):
        HomologyGroup(0, (1,))
    assert HomologyGroup(0, (2, 6)).has_even_torsion() and not HomologyGroup(0, (3,)).has_even_torsion()


def test_grading_map_round_trip():
    g = GradingMap(p=2, n=5)
    for i in range(-3, 4):
        for j in range(-5, 6):
            assert g.to_ij(*g.to_hq(i, j)) == (i, j)
    assert g.to_hq(2, 1) == (-3, -7)


# -- homology values ----------------------------------------------------------------

def test_unknot():
    t = homology_table(unknot())
    assert dict(t) == {(0, 1): Z, (0, -1): Z}
    assert homology_group(unknot(), 0, 3).is_zero


def test_two_unknots():
    t = homology_table(unknot(2))
    assert dict(t) == {(0, 2): Z, (0, 0): HomologyGroup(2), (0, -2): Z}


def test_mirror61_single_cells(mirror61):
    assert homology_group(mirror61, 2, 1) == Z2
    assert homology_group(mirror61, 4, 5) == HomologyGroup(1, (2,))


def test_mirror61_table(mirror61):
    assert dict(homology_table(mirror61)) == TABLE2


def test_mirror61_table_in_link_gradings(mirror61):
    t = homology_table(mirror61)
    # j = q + 8 for this diagram (p = 2, n = 5)
    assert t.grading == GradingMap(2, 5)
    assert t.at_hq(-3, -7) == Z2 and t.at_hq(-1, -3) == HomologyGroup(1, (2,))


def test_trefoil_table(trefoil):
    t = homology_table(trefoil)
    assert t.by_hq() == {(0, -1): Z, (0, -3): Z, (-2, -5): Z, (-3, -9): Z, (-2, -7): Z2}


def test_grafted_example_cell():
    d = builtin("11n61_insertion")
    assert homology_table(d).at_hq(-2, -1) == HomologyGroup(1, (2,))


def test_parallel_table_matches_serial(mirror61):
    assert homology_table(mirror61, jobs=2) == homology_table(mirror61)


# -- image membership ---------------------------------------------------------------

def _trefoil_chains(trefoil):
    m = find_patterns(a_smoothing_chord_diagram(trefoil))[0]
    op = pattern_ordered(trefoil, m)
    return op.diagram, build_X(op.diagram, op, 1), build_V(op.diagram, op, 1)


def test_membership_of_zero(trefoil):
    res = image_membership(trefoil, ChainVector.zero(2, 1))
    assert res.solvable and not res.solution


def test_membership_2V_and_V(trefoil):
    d, X, V = _trefoil_chains(trefoil)
    two = image_membership(d, 2 * V)
    assert two.solvable
    assert viro_complex(d).differential(two.solution) == 2 * V
    one = image_membership(d, V)
    assert not one.solvable and one.obstruction_checked
    assert one.obstruction.modulus == 2


def test_membership_with_no_source(trefoil):
    cx = viro_complex(trefoil)
    s = cx.basis(0, -2)[0] if cx.dimension(0, -2) else cx.basis(*cx.bidegrees()[0])[0]
    z = ChainVector(*cx.gradings(s), {s: 1})
    res = image_membership(trefoil, z)
    assert not res.solvable and res.obstruction_checked


@settings(max_examples=25)
@given(braid_words(max_len=6))
def test_membership_solutions_are_exact(ws):
    d = braid_diagram(ws)
    cx = viro_complex(d)
    rng = random.Random(repr(ws))
    for i, j in cx.bidegrees():
        if i == 0 or not cx.dimension(i - 1, j):
            continue
        src = cx.basis(i - 1, j)
        y = ChainVector(i - 1, j, {s: rng.randint(-2, 2) for s in rng.sample(src, min(3, len(src)))})
        v = cx.differential(y)
        if not v:
            continue
        res = image_membership(d, v)
        assert res.solvable and cx.differential(res.solution) == v


# -- Euler characteristics ----------------------------------------------------------

def test_unknot_euler():
    assert graded_euler_characteristic(unknot()) == {-1: 1, 1: 1}


def test_chain_and_homology_euler_agree():
    d = pretzel_diagram(2, 3)
    assert graded_euler_characteristic(d) == homology_euler_characteristic(homology_table(d))


def test_trefoil_euler_matches_bracket():
    d = pretzel_diagram(2, 2)
    assert graded_euler_characteristic(d) == unnormalized_jones(d)


def test_bracket_of_unknot_and_hopf():
    assert kauffman_bracket(unknot()) == {-2: -1, 2: -1}
    hopf = braid_closure([1, 1])
    # two-component link: even q-powers only
    assert all(k % 2 == 0 for k in unnormalized_jones(hopf))


@settings(max_examples=30)
@given(braid_words(max_len=7))
def test_euler_identities(ws):
    d = braid_diagram(ws)
    chi = graded_euler_characteristic(d)
    assert chi == unnormalized_jones(d)
    assert chi == homology_euler_characteristic(homology_table(d))


# -- structural audits ----------------------------------------------------------------

@settings(max_examples=20)
@given(braid_words(max_len=6))
def test_rank_nullity(ws):
    d = braid_diagram(ws)
    cx = viro_complex(d)
    table = homology_table(d)
    for i, j in cx.bidegrees():
        out = rank_q(cx.boundary_matrix(i, j).dense()) if cx.dimension(i + 1, j) else 0
        into = rank_q(cx.boundary_matrix(i - 1, j).dense()) if cx.dimension(i - 1, j) else 0
        free = table.get((i, j), HomologyGroup()).free_rank
        assert free + out + into == cx.dimension(i, j)


@settings(max_examples=20)
@given(braid_words(max_len=6))
def test_mod2_universal_coefficients(ws):
    d = braid_diagram(ws)
    tz, t2 = homology_table(d), homology_table(d, mod2=True)
    keys = set(tz) | set(t2)
    for i, j in keys:
        here = tz.get((i, j), HomologyGroup())
        above = tz.get((i + 1, j), HomologyGroup())
        even = lambda g: sum(1 for t in g.torsion if t % 2 == 0)
        want = here.free_rank + even(here) + even(above)
        assert t2.get((i, j), HomologyGroup()).free_rank == want


def test_mod2_trefoil(trefoil):
    t2 = homology_table(trefoil, mod2=True)
    assert sum(g.free_rank for g in t2.values()) == 6


def test_renumbering_invariance(small_corpus):
    rng = random.Random(5)
    for d in small_corpus:
        ref = homology_table(d)
        for _ in range(10):
            perm = list(range(d.n_crossings))
            rng.shuffle(perm)
            assert homology_table(d.renumbered(perm)) == ref


@settings(max_examples=15)
@given(braid_words(max_len=6))
def test_renumbering_invariance_random(ws):
    d = braid_diagram(ws)
    perm = list(range(d.n_crossings))
    random.Random(str(ws)).shuffle(perm)
    assert homology_table(d.renumbered(perm)) == homology_table(d)


# -- tables -----------------------------------------------------------------------------

def test_table_json_round_trip(mirror61):
    t = homology_table(mirror61)
    back = HomologyTable.from_json(t.to_json())
    assert back == t and back.grading == t.grading


@settings(max_examples=15)
@given(braid_words(max_len=6))
def test_table_json_round_trip_random(ws):
    t = homology_table(braid_diagram(ws))
    assert HomologyTable.from_json(t.to_json()) == t


def test_table_records_schema(mirror61):
    recs = homology_table(mirror61).to_records()
    assert {"i": 2, "j": 1, "h": -3, "q": -7, "free_rank": 0, "torsion": [2]} in recs
    assert all(set(r) == {"i", "j", "h", "q", "free_rank", "torsion"} for r in recs)


def test_render_layout(mirror61):
    text = homology_table(mirror61).render()
    lines = text.splitlines()
    header = lines[0].split()
    assert header[0] == "j\\i" and header[1:] == [str(i) for i in range(1, 8)]
    rows = [int(line.split()[0]) for line in lines[1:]]
    assert rows == sorted(rows, reverse=True) and rows[0] == 13 and rows[-1] == -1
    hq = homology_table(mirror61).render(link_gradings=True).splitlines()
    assert hq[0].split()[0] == "q\\h"


def test_render_empty():
    assert HomologyTable({}, GradingMap(0, 0)).render() == "(zero)\n"

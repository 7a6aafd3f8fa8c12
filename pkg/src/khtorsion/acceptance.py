"""The acceptance suite, shared by the test-suite and ``khtor selftest``.

Each criterion is a function returning ``(passed, detail)``; ``run_all``
applies the crossing guard and reports skips.
"""

from __future__ import annotations

import random
import time
from contextlib import contextmanager
from dataclasses import dataclass
from typing import Callable

from . import complex as _complex
from .bracket import unnormalized_jones
from .builtins import BUILTIN_NAMES, builtin
from .complex import viro_complex
from .diagram import LinkDiagram, a_smoothing_chord_diagram, braid_closure, insert_pattern, pretzel_diagram, smooth
from .homology import HomologyGroup, graded_euler_characteristic, homology_group, homology_table, image_membership
from .pattern import find_patterns
from .torsion import (CertificationError, certify_torsion, exactness_witness_g1, outer_only_state,
                      pattern_ordered, projection_functional_check, verify_boundary_identity)

# Homology of the mirror of 6_1 in diagram gradings (i, j), D(2,5) diagram.
TABLE2 = {
    (1, -1): HomologyGroup(1),
    (2, 1): HomologyGroup(0, (2,)),
    (2, 3): HomologyGroup(1),
    (3, 3): HomologyGroup(1),
    (4, 5): HomologyGroup(1, (2,)),
    (4, 7): HomologyGroup(1),
    (5, 7): HomologyGroup(1, (2,)),
    (5, 9): HomologyGroup(2),
    (6, 9): HomologyGroup(1),
    (7, 11): HomologyGroup(0, (2,)),
    (7, 13): HomologyGroup(1),
}

# splice sites on the 8_19 diagram used for the grafted example
INSERTION_ARC, INSERTION_FAR_ARC = 16, 12


@dataclass
class Criterion:
    number: int
    title: str
    crossings: int          # largest diagram the criterion touches
    run: Callable[[], tuple[bool, str]]


def random_braid_diagrams(count: int, max_crossings: int, seed: int = 2024) -> list[LinkDiagram]:
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        strands = rng.randint(2, 4)
        length = rng.randint(1, max_crossings)
        word = [rng.choice([1, -1]) * rng.randint(1, strands - 1) for _ in range(length)]
        out.append(braid_closure(word, strands, name=f"braid{word}"))
    return out


def d_squared_zero(diagram: LinkDiagram) -> bool:
    cx = viro_complex(diagram)
    for j in cx.j_range():
        for i in range(diagram.n_crossings - 1):
            if cx.dimension(i, j) and cx.dimension(i + 1, j) and cx.dimension(i + 2, j):
                if not cx.boundary_matrix(i, j).compose_is_zero(cx.boundary_matrix(i + 1, j)):
                    return False
    return True


def _pretzel_match(g: int, h: int, min_family: int = 2):
    d = pretzel_diagram(g, h)
    ms = [m for m in find_patterns(a_smoothing_chord_diagram(d), min_family) if (m.g, m.h) == (g, h)]
    return d, ms[0]


# --------------------------------------------------------------------------
# criteria
# --------------------------------------------------------------------------

def c1_d_squared():
    corpus = random_braid_diagrams(50, 8) + [builtin(n) for n in BUILTIN_NAMES]
    bad = [d.name for d in corpus if not d_squared_zero(d)]
    return not bad, f"{len(corpus)} diagrams" + (f"; nonzero d^2 on {bad[:3]}" if bad else "")


def c2_sweep():
    wrong = []
    runs = 0
    for g in range(2, 5):
        for h in range(2, 5):
            d, m = _pretzel_match(g, h)
            for r in range(1, h + 1):
                runs += 1
                case = verify_boundary_identity(d, m, r).case
                want = "a" if (r % 2 or r == h) else "b"
                if case != want:
                    wrong.append((g, h, r, case))
    return not wrong, f"{runs} (g,h,r) triples" + (f"; mismatches {wrong}" if wrong else "")


def c3_table2():
    table = homology_table(builtin("mirror6_1_D25"))
    ok = dict(table) == TABLE2
    return ok, "all populated cells match" if ok else f"got {dict(table)}"


def c4_trefoil():
    d = builtin("trefoil_D22")
    m = [m for m in find_patterns(a_smoothing_chord_diagram(d)) if m.g == 2][0]
    cert = certify_torsion(d, m, 1)
    op = pattern_ordered(d, m)
    cx = viro_complex(op.diagram)
    res = verify_boundary_identity(op.diagram, op, 1)
    # every target state: incidences from the four terms of X
    rows = {}
    for s in res.X.terms:
        for tm, tc, sg in cx.image_codes(s.mask, cx.code(s)):
            rows.setdefault((tm, tc), []).append(sg)
    v_rows = {(s.mask, cx.code(s)) for s in res.V.terms}
    ok = cert.valid and len(res.V) == 4 and len(res.X) == 4
    ok &= all(sorted(rows.get(k, [])) == [1, 1] for k in v_rows)
    cancel = [v for k, v in rows.items() if k not in v_rows]
    ok &= len(cancel) == 3 and all(sorted(v) == [-1, 1] for v in cancel)
    return ok, f"certificate {'valid' if cert.valid else 'invalid ' + str(cert.failed)}; d(X)=V+V term by term"


def c5_grafted():
    base = builtin("8_19")
    d = insert_pattern(base, INSERTION_ARC, 2, 2, far_arc=INSERTION_FAR_ARC)
    same = d.crossings == builtin("11n61_insertion").crossings
    shape = (d.n_crossings, d.positive_count, d.negative_count, smooth(d, 0).count)
    ms = [m for m in find_patterns(a_smoothing_chord_diagram(d)) if m.bipartite_ok]
    cert = certify_torsion(d, ms[0], 1) if ms else None
    grp = homology_table(d).at_hq(-2, -1)
    ok = same and shape == (12, 8, 4, 3) and cert is not None and cert.valid \
        and grp == HomologyGroup(1, (2,))
    return ok, f"(crossings,p,n,|sA D|)={shape}; Kh(-2,-1)={grp}; certificate " \
               f"{'valid' if cert and cert.valid else 'missing/invalid'}"


def c6_bipartite():
    notes = []
    ok = True
    for name in ("whitehead", "borromean"):
        d = builtin(name)
        ms = [m for m in find_patterns(a_smoothing_chord_diagram(d)) if m.bipartite_ok]
        if not ms:
            ok = False
            notes.append(f"{name}: no match")
            continue
        cert = certify_torsion(d, ms[0], 1)
        ok &= cert.valid
        notes.append(f"{name}: {len(ms)} match(es), V at {cert.bidegree}, H={cert.homology}")
    return ok, "; ".join(notes)


def c7_parity():
    d, m = _pretzel_match(2, 5)
    values = set()
    ok = True
    for r in (1, 3):
        chk = projection_functional_check(d, m, r)
        ok &= chk.passes and chk.on_V == 1
        values |= chk.value_set
    plain = projection_functional_check(d, m, 1, extended=False)
    op = pattern_ordered(d, m)
    s = outer_only_state(op, [0], [0])
    val = plain.values.get(s)
    ok &= (not plain.passes) and val in (1, -1)
    return ok, f"values {sorted(values)}; plain set at r=1 gives {val} on the outer-only state"


def c8_remark():
    ok, cells = True, []
    for h in (2, 3, 4):
        d = pretzel_diagram(1, h)
        m = [m for m in find_patterns(a_smoothing_chord_diagram(d), min_family=1) if m.g == 1][0]
        try:
            Y, V = exactness_witness_g1(d, m)
        except CertificationError:
            return False, f"witness failed for h={h}"
        ordered = pattern_ordered(d, m).diagram
        ok &= image_membership(ordered, V).solvable
        cells.append(f"h={h}: H(2,1)={homology_group(d, 2, 1)}")
    return ok, "d(Y)=V with Y=-(outer-only state), V exact; " + ", ".join(cells)


def c9_negative():
    d, m = _pretzel_match(2, 5)
    try:
        certify_torsion(d, m, 5)
        rejected = False
    except CertificationError:
        rejected = True
    grp = homology_group(d, 6, 9)
    return rejected and not grp.torsion, f"r=h rejected: {rejected}; H(6,9)={grp}"


def invariance_corpus() -> list[LinkDiagram]:
    corpus = [pretzel_diagram(2, 2), pretzel_diagram(2, 3), pretzel_diagram(3, 3),
              pretzel_diagram(2, 5), pretzel_diagram(1, 3), builtin("whitehead")]
    corpus += random_braid_diagrams(4, 7, seed=7)
    return corpus


def c10_invariance():
    rng = random.Random(10)
    corpus = invariance_corpus()
    bad = []
    for d in corpus:
        ref = homology_table(d)
        for _ in range(10):
            perm = list(range(d.n_crossings))
            rng.shuffle(perm)
            if homology_table(d.renumbered(perm)) != ref:
                bad.append((d.name, perm))
                break
        if graded_euler_characteristic(d) != unnormalized_jones(d):
            bad.append((d.name, "euler"))
    return not bad, f"{len(corpus)} diagrams x 10 permutations" + (f"; failures {bad[:3]}" if bad else "")


CRITERIA = [
    Criterion(1, "d^2 = 0 on random diagrams and built-ins", 12, c1_d_squared),
    Criterion(2, "boundary identity sweep 2<=g,h<=4", 8, c2_sweep),
    Criterion(3, "mirror 6_1 homology table", 7, c3_table2),
    Criterion(4, "trefoil certificate, d(X)=V+V", 4, c4_trefoil),
    Criterion(5, "grafted 8_19 example end to end", 12, c5_grafted),
    Criterion(6, "Whitehead and Borromean certificates", 8, c6_bipartite),
    Criterion(7, "parity functional on D(2,5)", 7, c7_parity),
    Criterion(8, "single outer chord: V exact", 5, c8_remark),
    Criterion(9, "negative control r=h", 7, c9_negative),
    Criterion(10, "renumbering invariance and bracket oracle", 7, c10_invariance),
]


@dataclass
class Outcome:
    criterion: Criterion
    status: str             # PASS, FAIL, SKIP
    detail: str
    seconds: float

    def line(self) -> str:
        c = self.criterion
        return f"[{self.status}] {c.number:2d}. {c.title} ({self.seconds:.1f}s): {self.detail}"


def run_criterion(c: Criterion, max_crossings: int | None = None) -> Outcome:
    if max_crossings is not None and c.crossings > max_crossings:
        return Outcome(c, "SKIP", f"needs {c.crossings} crossings > guard {max_crossings}", 0.0)
    t0 = time.perf_counter()
    try:
        ok, detail = c.run()
    except Exception as exc:  # a crash is a failure of the criterion, reported as such
        ok, detail = False, f"{type(exc).__name__}: {exc}"
    return Outcome(c, "PASS" if ok else "FAIL", detail, time.perf_counter() - t0)


def run_all(max_crossings: int | None = None, only=None) -> list[Outcome]:
    return [run_criterion(c, max_crossings) for c in CRITERIA if only is None or c.number in only]


@contextmanager
def injected_sign_bug():
    """Temporarily drop the incidence signs (every incidence becomes +1)."""
    original = _complex.incidence_sign
    _complex.incidence_sign = lambda mask, x: 1
    _complex.clear_cache()
    try:
        yield
    finally:
        _complex.incidence_sign = original
        _complex.clear_cache()

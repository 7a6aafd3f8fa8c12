"""Explicit order-two torsion classes from the monochord pattern.

All chains are built on the diagram renumbered so that the crossings read
outer chords u1..ug, inner chords 1..h, then every other crossing in its
original order (see ``pattern_ordered``).  Circles of a state are located
through a marker arc: a PD arc that is known to lie on that circle.

For a set J of inner chords, surgery leaves the circles of the pattern in a
row 0..r: circle 0 holds the arc just before the first chosen inner a-end,
circle k (k >= 1) the arc just after the k-th chosen inner a-end.  Adding an
outer chord merges the two extreme circles into a circle still called 0.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from itertools import combinations
from math import comb

from .complex import ChainVector, EnhancedState, viro_complex
from .diagram import ChordDiagram, LinkDiagram, a_smoothing_chord_diagram
from .homology import GradingMap, HomologyGroup, homology_group, image_membership
from .pattern import PatternMatch, find_patterns


class CertificationError(ValueError):
    """Raised when a request violates the hypotheses of the construction."""


# --------------------------------------------------------------------------
# crossing order and circle markers
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class OrderedPattern:
    diagram: LinkDiagram
    match: PatternMatch
    chords: ChordDiagram
    order: tuple[int, ...]          # order[new index] = original crossing index

    @property
    def g(self):
        return self.match.g

    @property
    def h(self):
        return self.match.h

    def outer_bit(self, i: int) -> int:
        return 1 << i

    def inner_bit(self, j: int) -> int:
        return 1 << (self.g + j)

    def mask(self, outer=(), inner=()) -> int:
        m = 0
        for i in outer:
            m |= self.outer_bit(i)
        for j in inner:
            m |= self.inner_bit(j)
        return m

    def inner_markers(self, J) -> list[int]:
        """Marker arcs of circles 0..r for the inner surgery set J."""
        cd, xa = self.chords, self.match.inner_a
        return [cd.gap_before(xa[J[0]])] + [cd.gap_after(xa[j]) for j in J]

    def outer_markers(self, I) -> list[int]:
        cd, ua = self.chords, self.match.outer_a
        return [cd.gap_before(ua[I[0]])] + [cd.gap_after(ua[i]) for i in I]

    def external_markers(self) -> list[int]:
        return [self.chords.gaps[c][0] for c in self.match.external]

    def enhanced(self, mask: int, minus_markers, plus_markers=()) -> EnhancedState:
        """State ``mask`` with the circles through ``minus_markers`` signed -.

        Every circle through a marker in ``plus_markers`` must stay +; every
        circle of the smoothing must be reached by some marker.
        """
        cx = viro_complex(self.diagram)
        st = cx.state(mask)
        minus = {st.keys[st.arc_circle[a]] for a in minus_markers}
        plus = {st.keys[st.arc_circle[a]] for a in plus_markers}
        if minus & plus:
            raise AssertionError("a circle was asked to carry both signs")
        if len(minus) + len(plus) != len(st.keys):
            raise AssertionError("markers do not account for every circle")
        return EnhancedState(mask, frozenset(minus))


def pattern_ordered(diagram: LinkDiagram, match: PatternMatch) -> OrderedPattern:
    """Renumber crossings as outer chords, inner chords, then the rest."""
    head = list(match.outer) + list(match.inner)
    order = tuple(head + [k for k in range(diagram.n_crossings) if k not in set(head)])
    inv = {old: new for new, old in enumerate(order)}
    ordered = diagram.renumbered(order)
    cd = a_smoothing_chord_diagram(ordered)

    def ep(e):
        return 2 * inv[e // 2] + e % 2

    new = replace(match,
                  outer=tuple(range(match.g)),
                  inner=tuple(range(match.g, match.g + match.h)),
                  outer_a=tuple(ep(e) for e in match.outer_a),
                  inner_a=tuple(ep(e) for e in match.inner_a))
    # arcs and traversal are untouched by renumbering, so circles keep their places
    old_cd = a_smoothing_chord_diagram(diagram)
    assert all(cd.where[ep(e)] == old_cd.where[e] for e in old_cd.where)
    return OrderedPattern(ordered, new, cd, order)


def _prepare(diagram: LinkDiagram, match: PatternMatch | OrderedPattern) -> OrderedPattern:
    if isinstance(match, OrderedPattern):
        return match
    return pattern_ordered(diagram, match)


def _check_r(op: OrderedPattern, r: int, bipartite_form: bool):
    if not 1 <= r <= op.h:
        raise CertificationError(f"r={r} outside 1..h={op.h}")
    if bipartite_form:
        if not op.match.bipartite_ok:
            raise CertificationError("bichord graph is not bipartite")
        if r == op.h:
            raise CertificationError(f"r = h = {r}: surgery on every inner chord gives no torsion class")
        if r % 2 == 0 or r > op.h:
            raise CertificationError(f"r={r} must be odd and smaller than h={op.h}")


def _sum(states, i, j, coefs=None) -> ChainVector:
    out: dict = {}
    for k, s in enumerate(states):
        c = 1 if coefs is None else coefs[k]
        out[s] = out.get(s, 0) + c
    return ChainVector(i, j, out)


# --------------------------------------------------------------------------
# chains
# --------------------------------------------------------------------------

def x_bidegree(op: OrderedPattern, r: int) -> tuple[int, int]:
    return r, 2 * r - op.match.circle_count


def build_X(diagram: LinkDiagram, match, r: int) -> ChainVector:
    """Sum over r-sets J of inner chords of the two extreme enhancements and,
    for each external circle, the enhancement positive on it with sign (-1)^parity.
    H-circles are positive, the remaining circles negative.
    """
    op = _prepare(diagram, match)
    _check_r(op, r, bipartite_form=not op.match.mono_circular)
    ext = op.external_markers()
    parity = [op.match.parity[c] for c in op.match.external]
    states, coefs = [], []
    for J in combinations(range(op.h), r):
        mask = op.mask(inner=J)
        mk = op.inner_markers(J)
        hs = mk[1:r]
        for plus_extreme, minus_extreme in ((mk[0], mk[r]), (mk[r], mk[0])):
            states.append(op.enhanced(mask, [minus_extreme] + ext, hs + [plus_extreme]))
            coefs.append(1)
        for a, arc in enumerate(ext):
            others = [x for b, x in enumerate(ext) if b != a]
            states.append(op.enhanced(mask, [mk[0], mk[r]] + others, hs + [arc]))
            coefs.append(-1 if parity[a] % 2 else 1)
    i, j = x_bidegree(op, r)
    return _sum(states, i, j, coefs)


def build_V(diagram: LinkDiagram, match, r: int) -> ChainVector:
    """Sum over J and outer chords i of the state negative on the merged circle and on externals."""
    op = _prepare(diagram, match)
    _check_r(op, r, bipartite_form=not op.match.mono_circular)
    ext = op.external_markers()
    states = []
    for J in combinations(range(op.h), r):
        mk = op.inner_markers(J)
        for i in range(op.g):
            mask = op.mask(outer=[i], inner=J)
            states.append(op.enhanced(mask, [mk[0]] + ext, mk[1:r]))
    i, j = x_bidegree(op, r)
    return _sum(states, i + 1, j)


def build_Vprime(diagram: LinkDiagram, match, r: int) -> ChainVector:
    """Sum over (r+1)-sets of inner chords of the state negative on both extreme circles."""
    op = _prepare(diagram, match)
    if not op.match.mono_circular:
        raise CertificationError("the correction chain is defined for mono-circular patterns only")
    if r % 2 or not 1 <= r < op.h:
        raise CertificationError("the correction chain needs even r with 1 <= r < h")
    states = []
    for L in combinations(range(op.h), r + 1):
        mk = op.inner_markers(L)
        states.append(op.enhanced(op.mask(inner=L), [mk[0], mk[r + 1]], mk[1:r + 1]))
    i, j = x_bidegree(op, r)
    return _sum(states, i + 1, j)


# --------------------------------------------------------------------------
# identities
# --------------------------------------------------------------------------

@dataclass
class BoundaryIdentity:
    case: str | None          # "a": dX = 2V, "b": dX = 2V + 2V', None: neither
    X: ChainVector
    V: ChainVector
    Vprime: ChainVector | None
    dX: ChainVector
    ordered: OrderedPattern = field(repr=False)

    @property
    def holds(self) -> bool:
        return self.case is not None


def verify_boundary_identity(diagram: LinkDiagram, match, r: int) -> BoundaryIdentity:
    op = _prepare(diagram, match)
    X = build_X(op.diagram, op, r)
    V = build_V(op.diagram, op, r)
    Vp = None
    if op.match.mono_circular and r % 2 == 0 and r < op.h:
        Vp = build_Vprime(op.diagram, op, r)
    dX = viro_complex(op.diagram).differential(X)
    case = None
    if dX == 2 * V:
        case = "a"
    elif Vp is not None and dX == 2 * V + 2 * Vp:
        case = "b"
    return BoundaryIdentity(case, X, V, Vp, dX, op)


# --------------------------------------------------------------------------
# parity functional
# --------------------------------------------------------------------------

@dataclass
class ProjectionCheck:
    passes: bool
    generators: list[EnhancedState]
    values: dict                      # basis state -> value of the functional
    counterexample: tuple[EnhancedState, int] | None
    on_V: int

    @property
    def value_set(self) -> set[int]:
        return set(self.values.values())


def projection_generators(op: OrderedPattern, r: int, extended: bool) -> list[EnhancedState]:
    """The generator set of the parity functional (with the outer-only states when ``extended``)."""
    ext = op.external_markers()
    full = list(range(r + 1))
    out = []
    mk = op.inner_markers(full)
    mask = op.mask(inner=full)
    for k in range(1, r + 2):
        plus = [m for t, m in enumerate(mk) if t not in (0, k)]
        out.append(op.enhanced(mask, [mk[0], mk[k]] + ext, plus))
    J = list(range(1, r + 1))
    mk = op.inner_markers(J)[:r]   # circle r is merged into circle 0
    mask = op.mask(outer=[0], inner=J)
    for k in range(r):
        plus = [m for t, m in enumerate(mk) if t != k]
        out.append(op.enhanced(mask, [mk[k]] + ext, plus))
    if extended:
        if op.g < 2:
            raise CertificationError("the extended generator set needs two outer chords")
        mk = op.outer_markers([0, 1])
        mask = op.mask(outer=[0, 1])
        out.append(op.enhanced(mask, [mk[0], mk[2]] + ext, [mk[1]]))
        out.append(op.enhanced(mask, [mk[1], mk[2]] + ext, [mk[0]]))
    return out


def projection_functional_check(diagram: LinkDiagram, match, r: int,
                                extended: bool | None = None) -> ProjectionCheck:
    """Sum of coefficients of d(s) on the generator set, for every basis state s.

    ``extended`` defaults to True exactly when r = 1.
    """
    op = _prepare(diagram, match)
    _check_r(op, r, bipartite_form=True)
    if extended is None:
        extended = r == 1
    gens = projection_generators(op, r, extended)
    cx = viro_complex(op.diagram)
    gen_codes = {(s.mask, cx.code(s)) for s in gens}
    i, j = x_bidegree(op, r)
    values = {}
    bad = None
    for mask, code in cx.basis_codes(i, j):
        val = sum(c for tm, tc, c in cx.image_codes(mask, code) if (tm, tc) in gen_codes)
        if val:
            s = cx.enhanced(mask, code)
            values[s] = val
            if val % 2 and bad is None:
                bad = (s, val)
    V = build_V(op.diagram, op, r)
    on_v = sum(c for s, c in V.terms.items() if (s.mask, cx.code(s)) in gen_codes)
    return ProjectionCheck(bad is None and on_v % 2 == 1, gens, values, bad, on_v)


def outer_only_state(op: OrderedPattern, outer, minus_circles) -> EnhancedState:
    """State with B labels on the listed outer chords only; circles numbered 0..len(outer)."""
    mk = op.outer_markers(list(outer))
    ext = op.external_markers()
    minus = [mk[k] for k in minus_circles]
    plus = [m for k, m in enumerate(mk) if k not in set(minus_circles)]
    return op.enhanced(op.mask(outer=outer), minus + ext, plus)


# --------------------------------------------------------------------------
# certificates
# --------------------------------------------------------------------------

CHECKS = ("dX_identity", "V_is_cycle", "V_not_exact", "twoV_exact",
          "homology_confirmation", "parity_functional")


@dataclass
class TorsionCertificate:
    pattern: dict
    r: int
    bidegree: tuple[int, int]
    hq: tuple[int, int]
    crossing_order: tuple[int, ...]
    diagram_pd: str
    chain_X: ChainVector
    chain_V: ChainVector
    checks: dict
    homology: HomologyGroup
    obstruction: dict | None = None

    @property
    def valid(self) -> bool:
        return all(self.checks.get(k, False) for k in CHECKS)

    @property
    def failed(self) -> list[str]:
        return [k for k in CHECKS if not self.checks.get(k, False)]

    def to_dict(self) -> dict:
        def chain_rec(z: ChainVector):
            return [{"mask": s.mask, "minus": sorted(s.minus), "coef": c}
                    for s, c in sorted(z.terms.items(), key=lambda t: (t[0].mask, sorted(t[0].minus)))]
        return {
            "pattern": self.pattern,
            "r": self.r,
            "bidegree": {"i": self.bidegree[0], "j": self.bidegree[1]},
            "topological": {"h": self.hq[0], "q": self.hq[1]},
            "crossing_order": [k + 1 for k in self.crossing_order],
            "diagram": self.diagram_pd,
            "X": {"i": self.chain_X.i, "j": self.chain_X.j, "terms": chain_rec(self.chain_X)},
            "V": {"i": self.chain_V.i, "j": self.chain_V.j, "terms": chain_rec(self.chain_V)},
            "checks": dict(self.checks),
            "valid": self.valid,
            "homology": {"free_rank": self.homology.free_rank, "torsion": list(self.homology.torsion)},
            "obstruction": self.obstruction,
        }

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_dict(), **kw)

    @classmethod
    def from_json(cls, text: str | dict) -> "TorsionCertificate":
        d = json.loads(text) if isinstance(text, str) else text

        def chain(rec):
            return ChainVector(rec["i"], rec["j"], {
                EnhancedState(t["mask"], frozenset(t["minus"])): t["coef"] for t in rec["terms"]})
        return cls(
            pattern=d["pattern"], r=d["r"],
            bidegree=(d["bidegree"]["i"], d["bidegree"]["j"]),
            hq=(d["topological"]["h"], d["topological"]["q"]),
            crossing_order=tuple(k - 1 for k in d["crossing_order"]),
            diagram_pd=d["diagram"],
            chain_X=chain(d["X"]), chain_V=chain(d["V"]),
            checks=dict(d["checks"]),
            homology=HomologyGroup(d["homology"]["free_rank"], tuple(d["homology"]["torsion"])),
            obstruction=d.get("obstruction"),
        )

    def summary(self) -> str:
        verdict = "VALID" if self.valid else "INVALID (" + ", ".join(self.failed) + ")"
        lines = [
            f"pattern D({self.pattern['g']},{self.pattern['h']}), r={self.r}: {verdict}",
            f"  V in (i,j)={self.bidegree}  (h,q)={self.hq}  |X|={len(self.chain_X)} |V|={len(self.chain_V)}",
            f"  homology there: {self.homology}",
        ]
        lines += [f"  {k}: {'ok' if self.checks.get(k) else 'FAILED'}" for k in CHECKS]
        return "\n".join(lines)


def certify_torsion(diagram: LinkDiagram, match, r: int) -> TorsionCertificate:
    """Build X and V and check that [V] is a nonzero class with 2[V] = 0."""
    op = _prepare(diagram, match)
    _check_r(op, r, bipartite_form=True)
    cx = viro_complex(op.diagram)
    X = build_X(op.diagram, op, r)
    V = build_V(op.diagram, op, r)
    checks = {}
    checks["dX_identity"] = cx.differential(X) == 2 * V
    checks["V_is_cycle"] = not cx.differential(V)
    v_res = image_membership(op.diagram, V)
    checks["V_not_exact"] = (not v_res.solvable) and v_res.obstruction_checked
    two_res = image_membership(op.diagram, 2 * V, witness=False)
    checks["twoV_exact"] = two_res.solvable and checks["dX_identity"]
    i, j = V.i, V.j
    grp = homology_group(op.diagram, i, j)
    checks["homology_confirmation"] = grp.has_even_torsion()
    checks["parity_functional"] = projection_functional_check(op.diagram, op, r).passes
    obstruction = None
    if v_res.obstruction is not None:
        obstruction = {"modulus": v_res.obstruction.modulus,
                       "support": len(v_res.obstruction.phi)}
    return TorsionCertificate(
        pattern=op.match.summary() | {"outer_crossings": [k + 1 for k in op.order[:op.g]],
                                      "inner_crossings": [k + 1 for k in op.order[op.g:op.g + op.h]]},
        r=r, bidegree=(i, j), hq=GradingMap.of(op.diagram).to_hq(i, j),
        crossing_order=op.order, diagram_pd=op.diagram.to_pd(),
        chain_X=X, chain_V=V, checks=checks, homology=grp, obstruction=obstruction)


def exactness_witness_g1(diagram: LinkDiagram, match=None, r: int = 1):
    """For a single outer chord and r = 1: Y = -(outer-only state negative on circle 0), d(Y) = V.

    Returns ``(Y, V)``; raises if the identity fails.
    """
    if match is None:
        found = [m for m in find_patterns(a_smoothing_chord_diagram(diagram), min_family=1)
                 if m.g == 1]
        if not found:
            raise CertificationError("no pattern with a single outer chord")
        match = found[0]
    op = _prepare(diagram, match)
    if op.g != 1:
        raise CertificationError("the witness needs exactly one outer chord")
    if r != 1:
        raise CertificationError("the witness is for r = 1")
    cx = viro_complex(op.diagram)
    s = outer_only_state(op, [0], [0])
    Y = ChainVector(*cx.gradings(s), {s: -1})
    V = build_V(op.diagram, op, 1)
    if cx.differential(Y) != V:
        raise CertificationError("d(Y) differs from V")
    return Y, V


def term_count_X(match: PatternMatch, r: int) -> int:
    return comb(match.h, r) * (2 + len(match.external))


def term_count_V(match: PatternMatch, r: int) -> int:
    return comb(match.h, r) * match.g

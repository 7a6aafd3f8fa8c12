"""Detection of the two-family monochord pattern in an A-smoothing.

The pattern lives on one circle (the main circle): two families of parallel
monochords, each family a run of nested chords with nothing attached between
consecutive members, and every chord of one family crossing every chord of
the other.  Going once around the main circle the endpoint blocks read

    outer a-ends u1..ug, inner a-ends x1..xh, outer b-ends ug..u1, inner b-ends yh..y1

possibly with bichord endpoints between blocks.  Either family may play the
outer role; both assignments are reported.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

from .diagram import ChordDiagram


class PatternError(ValueError):
    pass


@dataclass(frozen=True)
class Bipartition:
    colors: dict

    @property
    def ok(self) -> bool:
        return True


@dataclass(frozen=True)
class OddCycle:
    cycle: tuple[int, ...]

    @property
    def ok(self) -> bool:
        return False


@dataclass(frozen=True)
class PatternMatch:
    main_circle: int
    outer: tuple[int, ...]          # chord (crossing) indices u1..ug
    inner: tuple[int, ...]          # chord indices for x1/y1 .. xh/yh
    outer_a: tuple[int, ...]        # endpoints u1..ug in the first outer block
    inner_a: tuple[int, ...]        # endpoints x1..xh
    external: tuple[int, ...]
    parity: dict = field(default_factory=dict, compare=False)
    mono_circular: bool = True
    bipartite_ok: bool = True
    circle_count: int = 1

    @property
    def g(self) -> int:
        return len(self.outer)

    @property
    def h(self) -> int:
        return len(self.inner)

    def torsion_bidegrees(self) -> list[tuple[int, int, int]]:
        """(r, i, j) for every odd r < h."""
        return [(r, r + 1, 2 * r - self.circle_count) for r in range(1, self.h, 2)]

    def summary(self) -> dict:
        return {
            "main_circle": self.main_circle,
            "g": self.g, "h": self.h,
            "outer_crossings": [c + 1 for c in self.outer],
            "inner_crossings": [c + 1 for c in self.inner],
            "external_circles": list(self.external),
            "parities": {str(k): v for k, v in sorted(self.parity.items())},
            "mono_circular": self.mono_circular,
            "bipartite": self.bipartite_ok,
        }


# --------------------------------------------------------------------------
# bichord graph
# --------------------------------------------------------------------------

def _bichord_graph(cd: ChordDiagram) -> dict[int, set[int]]:
    adj: dict[int, set[int]] = {c: set() for c in range(cd.circle_count)}
    for k in cd.bichords:
        a, b = cd.chords[k]
        ca, cb = cd.where[a][0], cd.where[b][0]
        adj[ca].add(cb)
        adj[cb].add(ca)
    return adj


def is_bipartite_without_monochords(cd: ChordDiagram, start: int = 0) -> Bipartition | OddCycle:
    """Two-colour the circles along bichords, or return an odd cycle."""
    adj = _bichord_graph(cd)
    color = {start: 0}
    parent = {start: None}
    queue = deque([start])
    while queue:
        u = queue.popleft()
        for v in sorted(adj[u]):
            if v not in color:
                color[v] = 1 - color[u]
                parent[v] = u
                queue.append(v)
            elif color[v] == color[u]:
                return OddCycle(_cycle_through(parent, u, v))
    if len(color) != cd.circle_count:
        missing = sorted(set(adj) - set(color))
        raise PatternError(f"bichord graph is disconnected: circle {missing[0]} is unreachable")
    return Bipartition(color)


def _cycle_through(parent, u, v) -> tuple[int, ...]:
    def path(x):
        out = []
        while x is not None:
            out.append(x)
            x = parent[x]
        return out

    pu, pv = path(u), path(v)
    common = set(pu) & set(pv)
    top_u = [x for x in pu if x not in common]
    top_v = [x for x in pv if x not in common]
    lca = next(x for x in pu if x in common)
    return tuple(top_u + [lca] + list(reversed(top_v)))


def path_parities(cd: ChordDiagram, main: int) -> dict[int, int]:
    """Bichord-path length from ``main`` to each circle, mod 2."""
    res = is_bipartite_without_monochords(cd, main)
    if not res.ok:
        raise PatternError(f"bichord graph has an odd cycle {res.cycle}")
    return {c: col % 2 for c, col in res.colors.items()}


# --------------------------------------------------------------------------
# surgery oracle
# --------------------------------------------------------------------------

def surgery(cd: ChordDiagram, chords) -> list[list[int]]:
    """Circles after surgery on monochords, each as the list of endpoints it leaves from.

    Arriving at an endpoint of a surgered chord, the curve crosses the band
    and continues forward from the partner endpoint.  Only valid for
    monochords; circles without endpoints are returned as empty lists.
    """
    chosen = set(chords)
    for k in chosen:
        if not cd.is_monochord(k):
            raise PatternError("surgery oracle handles monochords only")
    nxt = {}
    for circ in cd.circles:
        for p, e in enumerate(circ):
            nxt[e] = circ[(p + 1) % len(circ)]
    seen = set()
    out = []
    for circ in cd.circles:
        if not circ:
            out.append([])
            continue
        for e0 in circ:
            if e0 in seen:
                continue
            # state: we leave endpoint e going forward
            cycle = []
            e = e0
            while e not in seen:
                seen.add(e)
                cycle.append(e)
                arrive = nxt[e]
                e = cd.partner(arrive) if cd.chord_of[arrive] in chosen else arrive
            out.append(cycle)
    return out


# --------------------------------------------------------------------------
# detection
# --------------------------------------------------------------------------

def _families(cd: ChordDiagram, circle: int, chords: list[int]):
    circ = cd.circles[circle]
    size = len(circ)
    pos = {e: p for p, e in enumerate(circ)}
    ends = {k: (pos[cd.chords[k][0]], pos[cd.chords[k][1]]) for k in chords}
    by_pair = {frozenset(v): k for k, v in ends.items()}
    adj: dict[int, set[int]] = {k: set() for k in chords}
    for k, (p, q) in ends.items():
        for a, b in ((p, q), (q, p)):
            k2 = by_pair.get(frozenset(((a + 1) % size, (b - 1) % size)))
            if k2 is not None and k2 != k:
                adj[k].add(k2)
                adj[k2].add(k)
    comps = []
    seen = set()
    for k in chords:
        if k in seen:
            continue
        comp = []
        stack = [k]
        seen.add(k)
        while stack:
            u = stack.pop()
            comp.append(u)
            for v in adj[u]:
                if v not in seen:
                    seen.add(v)
                    stack.append(v)
        comps.append(comp)
    return comps, ends, size


def _crosses(e1, e2, size) -> bool:
    p, q = sorted(e1)
    return (p < e2[0] < q) != (p < e2[1] < q)


def _ordered_family(family, ends, size):
    """Orders of a run of parallel chords: list of (chords, a_positions) for each choice of first block."""
    if len(family) == 1:
        k = family[0]
        p, q = ends[k]
        return [([k], [p]), ([k], [q])]
    out = []
    fam = set(family)
    for k in family:
        for a, b in (ends[k], ends[k][::-1]):
            # k is the first chord if no family chord sits at (a-1, b+1)
            prev = [c for c in fam if set(ends[c]) == {(a - 1) % size, (b + 1) % size}]
            if prev:
                continue
            seq, apos = [k], [a]
            while True:
                nxt = [c for c in fam if set(ends[c]) == {(a + 1) % size, (b - 1) % size}]
                if not nxt:
                    break
                a, b = (a + 1) % size, (b - 1) % size
                seq.append(nxt[0])
                apos.append(a)
            if len(seq) == len(family):
                out.append((seq, apos))
    return out


def _forward_distance(start, target, size):
    return (target - start) % size


def find_patterns(cd: ChordDiagram, min_family: int = 2) -> list[PatternMatch]:
    """All role assignments of the two-family pattern in ``cd``."""
    monos = cd.monochords
    if not monos:
        return []
    circles = {cd.where[cd.chords[k][0]][0] for k in monos}
    if len(circles) != 1:
        return []
    main = circles.pop()
    comps, ends, size = _families(cd, main, monos)
    if len(comps) != 2 or min(len(c) for c in comps) < min_family:
        return []
    fa, fb = comps
    if not all(_crosses(ends[a], ends[b], size) for a in fa for b in fb):
        return []
    try:
        bip = is_bipartite_without_monochords(cd, main)
    except PatternError:
        return []
    bip_ok = bip.ok
    parity = {c: v for c, v in bip.colors.items() if c != main} if bip_ok else {}
    external = tuple(c for c in range(cd.circle_count) if c != main)
    circ = cd.circles[main]
    matches = []
    for outer_f, inner_f in ((fa, fb), (fb, fa)):
        if len(outer_f) < min_family or len(inner_f) < min_family:
            continue
        orders = _ordered_family(outer_f, ends, size)
        inner_orders = _ordered_family(inner_f, ends, size)
        best = None
        for seq, apos in orders:
            last_a = apos[-1]
            # the inner block reached first going forward is I^a
            for iseq, ipos in inner_orders:
                d0 = _forward_distance(last_a, ipos[0], size)
                ok = all(_forward_distance(last_a, other, size) > d0
                         for c in inner_f for other in ends[c] if other != ipos[0])
                if ok and ipos == sorted(ipos, key=lambda t: _forward_distance(last_a, t, size)):
                    cand = (apos[0], seq, apos, iseq, ipos)
                    if best is None or cand[0] < best[0]:
                        best = cand
        if best is None:
            continue
        _, seq, apos, iseq, ipos = best
        matches.append(PatternMatch(
            main_circle=main,
            outer=tuple(seq),
            inner=tuple(iseq),
            outer_a=tuple(circ[p] for p in apos),
            inner_a=tuple(circ[p] for p in ipos),
            external=external,
            parity=parity,
            mono_circular=cd.circle_count == 1,
            bipartite_ok=bip_ok,
            circle_count=cd.circle_count,
        ))
    return matches

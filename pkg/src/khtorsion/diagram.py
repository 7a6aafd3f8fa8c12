"""Oriented link diagrams in planar-diagram (PD) notation.

A crossing ``X(a,b,c,d)`` lists its four arc ends counterclockwise, starting
from the incoming under-strand.  The under-strand runs ``a -> c``; the crossing
is positive when the over-strand runs ``d -> b``.

The A-smoothing of ``X(a,b,c,d)`` joins the ends ``(a,b)`` and ``(c,d)``; the
B-smoothing joins ``(b,c)`` and ``(d,a)``.  Crossingless unknotted components
are carried as *loops*, written ``circle`` in PD text.
"""

from __future__ import annotations

import json
import re
from collections import defaultdict
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

A_PAIRS = ((0, 1), (2, 3))
B_PAIRS = ((1, 2), (3, 0))


class DiagramError(ValueError):
    """Raised for malformed or inconsistent diagram input."""


# --------------------------------------------------------------------------
# LinkDiagram
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class LinkDiagram:
    crossings: tuple[tuple[int, int, int, int], ...]
    loops: int = 0
    name: str | None = field(default=None, compare=False)

    def __post_init__(self):
        xs = tuple(tuple(int(a) for a in x) for x in self.crossings)
        object.__setattr__(self, "crossings", xs)
        if self.loops < 0:
            raise DiagramError("negative loop count")
        for x in xs:
            if len(x) != 4:
                raise DiagramError(f"crossing {x} does not have 4 arcs")
            if any(a <= 0 for a in x):
                raise DiagramError(f"arc labels must be positive integers: {x}")
        counts: dict[int, int] = defaultdict(int)
        for x in xs:
            for a in x:
                counts[a] += 1
        bad = sorted(a for a, k in counts.items() if k != 2)
        if bad:
            raise DiagramError(f"arc {bad[0]} appears {counts[bad[0]]} times (expected 2)")
        object.__setattr__(self, "_over_in", _orient(xs))

    # -- basic data ---------------------------------------------------------

    @property
    def n_crossings(self) -> int:
        return len(self.crossings)

    @cached_property
    def crossing_arcs(self) -> tuple[int, ...]:
        return tuple(sorted({a for x in self.crossings for a in x}))

    @cached_property
    def loop_arcs(self) -> tuple[int, ...]:
        top = max(self.crossing_arcs, default=0)
        return tuple(range(top + 1, top + 1 + self.loops))

    @property
    def arcs(self) -> tuple[int, ...]:
        return self.crossing_arcs + self.loop_arcs

    @property
    def arc_count(self) -> int:
        return len(self.arcs)

    @cached_property
    def signs(self) -> tuple[int, ...]:
        # over-strand enters at slot 3 (d -> b) for a positive crossing
        return tuple(1 if s == 3 else -1 for s in self._over_in)

    @property
    def positive_count(self) -> int:
        return sum(1 for s in self.signs if s > 0)

    @property
    def negative_count(self) -> int:
        return sum(1 for s in self.signs if s < 0)

    @property
    def writhe(self) -> int:
        return self.positive_count - self.negative_count

    @cached_property
    def occurrences(self) -> dict[int, tuple[tuple[int, int], tuple[int, int]]]:
        occ: dict[int, list[tuple[int, int]]] = defaultdict(list)
        for c, x in enumerate(self.crossings):
            for s, a in enumerate(x):
                occ[a].append((c, s))
        return {a: (v[0], v[1]) for a, v in occ.items()}

    @cached_property
    def components(self) -> tuple[tuple[int, ...], ...]:
        """Arc labels of each link component, in traversal order."""
        seen: set[int] = set()
        comps = []
        for a0 in self.crossing_arcs:
            if a0 in seen:
                continue
            comp = []
            a = a0
            # walk along orientation: arc a ends at its head occurrence
            while a not in seen:
                seen.add(a)
                comp.append(a)
                c, s = self._head(a)
                a = self.crossings[c][(s + 2) % 4]
            comps.append(tuple(comp))
        comps.extend((a,) for a in self.loop_arcs)
        return tuple(comps)

    def _head(self, arc: int) -> tuple[int, int]:
        o1, o2 = self.occurrences[arc]
        return o1 if _is_incoming(self._over_in, *o1) else o2

    # -- derived diagrams ---------------------------------------------------

    def renumbered(self, order: Sequence[int]) -> "LinkDiagram":
        """Same diagram with crossings listed as ``crossings[order[0]], ...``."""
        if sorted(order) != list(range(self.n_crossings)):
            raise DiagramError("order must be a permutation of crossing indices")
        return LinkDiagram(tuple(self.crossings[k] for k in order), self.loops, self.name)

    def with_name(self, name: str) -> "LinkDiagram":
        return LinkDiagram(self.crossings, self.loops, name)

    # -- planarity ----------------------------------------------------------

    def is_planar(self) -> bool:
        """Euler-characteristic check of the rotation system given by the PD."""
        n = self.n_crossings
        if n == 0:
            return True
        other = {}
        for a, (o1, o2) in self.occurrences.items():
            other[o1] = o2
            other[o2] = o1
        seen: set[tuple[int, int]] = set()
        faces = 0
        for c in range(n):
            for s in range(4):
                if (c, s) in seen:
                    continue
                faces += 1
                d = (c, s)
                while d not in seen:
                    seen.add(d)
                    c2, s2 = other[d]
                    d = (c2, (s2 + 1) % 4)
        # connected pieces of the underlying 4-valent graph
        parent = list(range(n))

        def find(u):
            while parent[u] != u:
                parent[u] = parent[parent[u]]
                u = parent[u]
            return u

        for (c1, _), (c2, _) in self.occurrences.values():
            parent[find(c1)] = find(c2)
        pieces = len({find(c) for c in range(n)})
        return n - 2 * n + faces == 2 * pieces

    # -- serialization ------------------------------------------------------

    def to_pd(self) -> str:
        parts = ["X(%d,%d,%d,%d)" % x for x in self.crossings]
        parts.extend(["circle"] * self.loops)
        return " ".join(parts)

    def to_json(self) -> str:
        data: dict = {"crossings": [list(x) for x in self.crossings]}
        if self.loops:
            data["loops"] = self.loops
        return json.dumps(data)

    def __str__(self):
        label = f"{self.name}: " if self.name else ""
        return f"{label}{self.to_pd() or '(empty)'}"


def _is_incoming(over_in, c, s) -> bool:
    return s == 0 or s == over_in[c]


def _orient(xs) -> tuple[int, ...]:
    """Slot (1 or 3) where each over-strand enters, propagated along components."""
    occ: dict[int, list[tuple[int, int]]] = defaultdict(list)
    for c, x in enumerate(xs):
        for s, a in enumerate(x):
            occ[a].append((c, s))
    over_in: list[int | None] = [None] * len(xs)

    def state(c, s):
        # True: incoming, False: outgoing, None: unknown
        if s == 0:
            return True
        if s == 2:
            return False
        if over_in[c] is None:
            return None
        return s == over_in[c]

    def fix(c, s, incoming):
        want = s if incoming else (s + 2) % 4
        if over_in[c] is None:
            over_in[c] = want
            return True
        if over_in[c] != want:
            raise DiagramError(f"inconsistent orientation at crossing {c + 1}")
        return False

    def propagate():
        changed = True
        while changed:
            changed = False
            for a, (o1, o2) in occ.items():
                s1, s2 = state(*o1), state(*o2)
                if s1 is not None and s2 is not None:
                    if s1 == s2:
                        raise DiagramError(
                            f"inconsistent orientation: arc {a} is "
                            f"{'incoming' if s1 else 'outgoing'} at both ends")
                elif s1 is not None:
                    changed |= fix(*o2, not s1)
                elif s2 is not None:
                    changed |= fix(*o1, not s2)

    propagate()
    while None in over_in:
        # component that never passes under: orient so arc labels increase
        c = over_in.index(None)
        b, d = xs[c][1], xs[c][3]
        over_in[c] = 3 if b == d + 1 or (b < d and b != d - 1) else 1
        propagate()
    return tuple(over_in)  # type: ignore[arg-type]


# --------------------------------------------------------------------------
# PD text / JSON
# --------------------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:X\s*[\[(]([^\])]*)[\])]|(circle|loop|O)\b|([,;]))", re.I)


def parse_pd(text: str, name: str | None = None) -> LinkDiagram:
    """Parse ``X(1,4,2,5) X(3,6,4,1) ...`` (optionally wrapped in ``PD[...]``).

    ``circle`` adds a crossingless unknotted component.
    """
    body = "\n".join(line.split("#", 1)[0] for line in text.splitlines()).strip()
    m = re.fullmatch(r"PD\s*[\[(](.*)[\])]", body, re.S)
    if m:
        body = m.group(1)
    crossings = []
    loops = 0
    pos = 0
    while pos < len(body):
        if body[pos:].strip() == "":
            break
        tok = _TOKEN.match(body, pos)
        if not tok:
            snippet = body[pos:pos + 20].strip()
            raise DiagramError(f"malformed token near {snippet!r}")
        pos = tok.end()
        if tok.group(1) is not None:
            parts = [p.strip() for p in tok.group(1).split(",")]
            if len(parts) != 4 or not all(re.fullmatch(r"\d+", p) for p in parts):
                raise DiagramError(f"malformed crossing X({tok.group(1)})")
            crossings.append(tuple(int(p) for p in parts))
        elif tok.group(2) is not None:
            loops += 1
    if not crossings and not loops:
        raise DiagramError("empty diagram (use 'circle' for the unknot)")
    return LinkDiagram(tuple(crossings), loops, name)


def diagram_from_json(text: str | dict, name: str | None = None) -> LinkDiagram:
    data = json.loads(text) if isinstance(text, str) else text
    try:
        xs = tuple(tuple(x) for x in data["crossings"])
    except (KeyError, TypeError) as exc:
        raise DiagramError("JSON diagram needs a 'crossings' list") from exc
    return LinkDiagram(xs, int(data.get("loops", 0)), name or data.get("name"))


def load_diagram(path: str) -> LinkDiagram:
    with open(path) as fh:
        text = fh.read()
    if text.lstrip().startswith("{"):
        return diagram_from_json(text)
    return parse_pd(text)


def unknot(loops: int = 1) -> LinkDiagram:
    return LinkDiagram((), loops, "unknot" if loops == 1 else f"{loops} unknots")


# --------------------------------------------------------------------------
# Smoothings
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class KauffmanState:
    """Labels A/B on crossings; bit ``k`` of ``mask`` set means B at crossing k."""

    mask: int
    n: int

    @classmethod
    def from_labels(cls, labels: str | Sequence[str]) -> "KauffmanState":
        labels = list(labels)
        if any(x not in "AB" for x in labels):
            raise ValueError("labels must be 'A' or 'B'")
        return cls(sum(1 << k for k, x in enumerate(labels) if x == "B"), len(labels))

    @property
    def labels(self) -> str:
        return "".join("B" if self.mask >> k & 1 else "A" for k in range(self.n))

    @property
    def b_count(self) -> int:
        return bin(self.mask).count("1")

    def __str__(self):
        return self.labels


@dataclass(frozen=True)
class CircleSet:
    circles: tuple[tuple[int, ...], ...]

    @property
    def count(self) -> int:
        return len(self.circles)


def smooth(diagram: LinkDiagram, state: KauffmanState | int) -> CircleSet:
    """Circles of the smoothing, each as the cyclic sequence of arcs it visits."""
    if isinstance(state, KauffmanState):
        if state.n != diagram.n_crossings:
            raise DiagramError("state does not match the crossings of the diagram")
        mask = state.mask
    else:
        mask = state
        if mask >> diagram.n_crossings:
            raise DiagramError("state has labels beyond the crossings of the diagram")
    occ = diagram.occurrences
    seen: set[int] = set()
    circles = []
    for a0 in diagram.crossing_arcs:
        if a0 in seen:
            continue
        circle = []
        a, (c, s) = a0, diagram._head(a0)
        while a not in seen:
            seen.add(a)
            circle.append(a)
            pairs = B_PAIRS if mask >> c & 1 else A_PAIRS
            s2 = next(q for p in pairs for q in p if s in p and q != s)
            a = diagram.crossings[c][s2]
            o1, o2 = occ[a]
            c, s = o2 if o1 == (c, s2) else o1
        circles.append(tuple(circle))
    circles.extend((a,) for a in diagram.loop_arcs)
    return CircleSet(tuple(circles))


# --------------------------------------------------------------------------
# Chord diagrams (also used as a ribbon description for building diagrams)
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class ChordDiagram:
    """Circles with chord endpoints in cyclic order.

    Endpoint ids index ``sides``; chord ``k`` joins ``chords[k]``.  ``sides``
    records whether a chord leaves its circle to the left (``"L"``) or the
    right (``"R"``) of the listed traversal direction; it is what makes a
    chord diagram buildable into a planar link diagram.  ``gaps[c][p]`` is the
    PD arc running from endpoint ``p`` to endpoint ``p+1`` of circle ``c`` (a
    chordless circle has a single gap).
    """

    circles: tuple[tuple[int, ...], ...]
    chords: tuple[tuple[int, int], ...]
    sides: tuple[str, ...] | None = None
    gaps: tuple[tuple[int, ...], ...] | None = None
    labels: tuple[str, ...] | None = field(default=None, compare=False)

    @cached_property
    def where(self) -> dict[int, tuple[int, int]]:
        """endpoint -> (circle index, position)"""
        return {e: (ci, p) for ci, circ in enumerate(self.circles) for p, e in enumerate(circ)}

    @cached_property
    def chord_of(self) -> dict[int, int]:
        return {e: k for k, pair in enumerate(self.chords) for e in pair}

    def partner(self, e: int) -> int:
        a, b = self.chords[self.chord_of[e]]
        return b if e == a else a

    def is_monochord(self, k: int) -> bool:
        a, b = self.chords[k]
        return self.where[a][0] == self.where[b][0]

    @property
    def monochords(self) -> list[int]:
        return [k for k in range(len(self.chords)) if self.is_monochord(k)]

    @property
    def bichords(self) -> list[int]:
        return [k for k in range(len(self.chords)) if not self.is_monochord(k)]

    @property
    def circle_count(self) -> int:
        return len(self.circles)

    def circle_key(self, ci: int) -> int:
        """Smallest PD arc on circle ``ci``; matches the circle keys of the complex."""
        if self.gaps is None:
            raise ValueError("chord diagram carries no arc data")
        return min(self.gaps[ci])

    def gap_after(self, e: int) -> int:
        ci, p = self.where[e]
        return self.gaps[ci][p]

    def gap_before(self, e: int) -> int:
        ci, p = self.where[e]
        return self.gaps[ci][p - 1]

    # -- text format --------------------------------------------------------

    def to_text(self) -> str:
        names = self.labels or tuple(f"e{e}" for e in range(len(self.where)))
        lines = []
        for circ in self.circles:
            toks = []
            for e in circ:
                side = f"/{self.sides[e]}" if self.sides else ""
                toks.append(names[e] + side)
            lines.append("circle " + " ".join(toks))
        for a, b in self.chords:
            lines.append(f"chord {names[a]} {names[b]}")
        return "\n".join(lines) + "\n"


def parse_chord_diagram(text: str) -> ChordDiagram:
    """Read ``circle l1 l2 ...`` / ``chord l1 l2`` lines.

    A label may carry a side marker (``a/L`` or ``a/R``); either all labels
    carry one or none does.
    """
    ids: dict[str, int] = {}
    sides: dict[int, str] = {}
    circles = []
    chords = []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].split()
        if not line:
            continue
        kind, toks = line[0].lower(), line[1:]
        if kind == "circle":
            circ = []
            for t in toks:
                label, _, side = t.partition("/")
                if label in ids:
                    raise DiagramError(f"endpoint {label!r} listed twice")
                ids[label] = len(ids)
                if side:
                    if side not in ("L", "R"):
                        raise DiagramError(f"bad side marker in {t!r}")
                    sides[ids[label]] = side
                circ.append(ids[label])
            circles.append(tuple(circ))
        elif kind == "chord":
            if len(toks) != 2:
                raise DiagramError(f"chord line needs two labels: {raw!r}")
            chords.append(tuple(toks))
        else:
            raise DiagramError(f"unknown line {raw!r}")
    try:
        pairs = tuple((ids[a], ids[b]) for a, b in chords)
    except KeyError as exc:
        raise DiagramError(f"chord uses unknown endpoint {exc.args[0]!r}") from None
    used = sorted(e for p in pairs for e in p)
    if used != list(range(len(ids))):
        raise DiagramError("every endpoint must belong to exactly one chord")
    if sides and len(sides) != len(ids):
        raise DiagramError("side markers must be given for all endpoints or none")
    names = tuple(sorted(ids, key=ids.get))
    side_t = tuple(sides[e] for e in range(len(ids))) if sides else None
    return ChordDiagram(tuple(circles), pairs, side_t, None, names)


def a_smoothing_chord_diagram(diagram: LinkDiagram) -> ChordDiagram:
    """Chord diagram of the all-A smoothing.

    Chord ``k`` is crossing ``k``; its endpoint ``2k`` sits on the strand
    through slots 0,1 and ``2k+1`` on the strand through slots 2,3.
    """
    occ = diagram.occurrences
    n = diagram.n_crossings
    sides = [""] * (2 * n)
    seen: set[int] = set()
    circles, gaps = [], []
    for a0 in diagram.crossing_arcs:
        if a0 in seen:
            continue
        circ, gap = [], []
        a, (c, s) = a0, diagram._head(a0)
        while a not in seen:
            seen.add(a)
            gap.append(a)
            s2 = s ^ 1
            e = 2 * c + s // 2
            circ.append(e)
            # leaving through slot 1 (or 3) after entering at 0 (or 2): chord on the left
            sides[e] = "L" if s % 2 == 0 else "R"
            a = diagram.crossings[c][s2]
            o1, o2 = occ[a]
            c, s = o2 if o1 == (c, s2) else o1
        # gap[p] precedes circ[p]; rotate so gaps[p] follows endpoint p
        circles.append(tuple(circ))
        gaps.append(tuple(gap[1:] + gap[:1]))
    for a in diagram.loop_arcs:
        circles.append(())
        gaps.append((a,))
    chords = tuple((2 * k, 2 * k + 1) for k in range(n))
    return ChordDiagram(tuple(circles), chords, tuple(sides), tuple(gaps))


def diagram_from_chords(cd: ChordDiagram, name: str | None = None,
                        flip: Iterable[int] = ()) -> LinkDiagram:
    """Build the link diagram whose A-smoothing is the given sided chord diagram.

    Components are oriented along their first traversal; indices listed in
    ``flip`` reverse the corresponding component.
    """
    if cd.sides is None:
        raise DiagramError("chord diagram has no side data; cannot build a diagram")
    raw = []
    for a, b in cd.chords:
        raw.append(_strand(cd, a) + _strand(cd, b))
    loops = sum(1 for circ in cd.circles if not circ)
    return _orient_and_label(raw, loops, name, set(flip))


def _strand(cd: ChordDiagram, e: int) -> tuple:
    ci, p = cd.where[e]
    prev_seg = (ci, (p - 1) % len(cd.circles[ci]))
    next_seg = (ci, p)
    return (prev_seg, next_seg) if cd.sides[e] == "L" else (next_seg, prev_seg)


def _orient_and_label(raw, loops, name, flip=frozenset()) -> LinkDiagram:
    """Orient raw crossings (under-strand on slots 0,2) and relabel arcs 1..2n."""
    occ: dict = defaultdict(list)
    for c, x in enumerate(raw):
        for s, a in enumerate(x):
            occ[a].append((c, s))
    for a, v in occ.items():
        if len(v) != 2:
            raise DiagramError("raw crossing data is not a closed diagram")
    label: dict = {}
    head: dict = {}
    comp_index = 0
    for c0 in range(len(raw)):
        for s0 in range(4):
            a0 = raw[c0][s0]
            if a0 in label:
                continue
            # walk the component starting with arc a0 heading into (c0, s0)
            start = (c0, s0)
            if comp_index in flip:
                o1, o2 = occ[a0]
                start = o2 if o1 == start else o1
            comp_index += 1
            a, (c, s) = a0, start
            while a not in label:
                label[a] = len(label) + 1
                head[a] = (c, s)
                s2 = (s + 2) % 4
                a = raw[c][s2]
                o1, o2 = occ[a]
                c, s = o2 if o1 == (c, s2) else o1
    crossings = []
    for c, x in enumerate(raw):
        under_in = 0 if head[x[0]] == (c, 0) else 2
        rot = x[under_in:] + x[:under_in]
        crossings.append(tuple(label[a] for a in rot))
    return LinkDiagram(tuple(crossings), loops, name)


# --------------------------------------------------------------------------
# Generators
# --------------------------------------------------------------------------

def _pattern_sequence(g: int, h: int, outer_side: str):
    """Endpoint tokens for the pattern placed on one gap, plus chord pairs."""
    inner_side = "R" if outer_side == "L" else "L"
    oa = [("o", i, 0) for i in range(g)]
    ia = [("i", j, 0) for j in range(h)]
    ob = [("o", i, 1) for i in reversed(range(g))]
    ib = [("i", j, 1) for j in reversed(range(h))]
    side = {t: (outer_side if t[0] == "o" else inner_side) for t in oa + ia + ob + ib}
    return oa, ia + ob + ib, side


def _insert(base_cd: ChordDiagram, circle: int, gap: int, far_gap: int | None,
            g: int, h: int, outer_side: str) -> ChordDiagram:
    """Insert the g+h pattern chords into a sided chord diagram."""
    oa, rest, side = _pattern_sequence(g, h, outer_side)
    circ = list(base_cd.circles[circle])
    toks: list = list(circ)
    if not circ:
        toks = oa + rest
    else:
        # gap p sits between positions p and p+1
        far = gap if far_gap is None else far_gap
        pieces = {gap: rest}
        if far == gap:
            pieces = {gap: oa + rest}
        else:
            pieces[far] = oa
        out = []
        for p, e in enumerate(circ):
            out.append(e)
            out.extend(pieces.get(p, []))
        toks = out
    # renumber endpoints: keep the base chords, append the new ones
    base_n = len(base_cd.chords)
    new_id = {}
    for k in range(g):
        new_id[("o", k, 0)] = 2 * (base_n + k)
        new_id[("o", k, 1)] = 2 * (base_n + k) + 1
    for k in range(h):
        new_id[("i", k, 0)] = 2 * (base_n + g + k)
        new_id[("i", k, 1)] = 2 * (base_n + g + k) + 1

    def eid(t):
        return new_id[t] if isinstance(t, tuple) else t

    circles = list(base_cd.circles)
    circles[circle] = tuple(eid(t) for t in toks)
    sides = list(base_cd.sides) + [""] * (2 * (g + h))
    for t, s in side.items():
        sides[new_id[t]] = s
    chords = tuple(base_cd.chords) + tuple((2 * k, 2 * k + 1)
                                           for k in range(base_n, base_n + g + h))
    return ChordDiagram(tuple(circles), chords, tuple(sides))


def pretzel_diagram(g: int, h: int) -> LinkDiagram:
    """Mono-circular diagram of type D(g,h): the standard P(-1,...,-1,h) diagram.

    Crossings are listed outer chords first (1..g), then inner chords (1..h).
    """
    if g < 1 or h < 1:
        raise DiagramError("pretzel_diagram needs g >= 1 and h >= 1")
    base = a_smoothing_chord_diagram(unknot())
    cd = _insert(base, 0, 0, None, g, h, "R")
    return diagram_from_chords(cd, name=f"pretzel D({g},{h})")


def insert_pattern(base: LinkDiagram, arc: int, g: int, h: int,
                   far_arc: int | None = None, outer_side: str | None = None,
                   name: str | None = None) -> LinkDiagram:
    """Graft the D(g,h) monochord pattern onto the A-circle of ``base`` through ``arc``.

    The inner family and the second block of outer endpoints go on ``arc``;
    the first block of outer endpoints goes on ``far_arc`` (default: ``arc``,
    which splices in the open pretzel tangle).  ``far_arc`` must lie on the
    same A-circle.  When ``outer_side`` is not given, the first side giving a
    planar diagram is used.
    """
    if g < 2 or h < 2:
        raise DiagramError("insert_pattern needs g >= 2 and h >= 2")
    cd = a_smoothing_chord_diagram(base)
    loc = _locate_gap(cd, arc)
    far = None
    if far_arc is not None:
        fc, far = _locate_gap(cd, far_arc)
        if fc != loc[0]:
            raise DiagramError("far_arc must lie on the same A-circle as arc")
    candidates = [outer_side] if outer_side else ["R", "L"]
    for side in candidates:
        new = _insert(cd, loc[0], loc[1], far, g, h, side)
        d = diagram_from_chords(new, name=name)
        if d.is_planar():
            return d
    raise DiagramError("pattern insertion at these arcs is not planar")


def _locate_gap(cd: ChordDiagram, arc: int) -> tuple[int, int]:
    for ci, gaps in enumerate(cd.gaps):
        if arc in gaps:
            return ci, gaps.index(arc)
    raise DiagramError(f"arc {arc} is not in the diagram")


def braid_closure(word: Sequence[int], strands: int | None = None,
                  name: str | None = None) -> LinkDiagram:
    """Closure of a braid word; ``k`` is sigma_k (positive), ``-k`` its inverse."""
    if not word:
        raise DiagramError("empty braid word")
    m = strands or max(abs(k) for k in word) + 1
    if any(abs(k) < 1 or abs(k) >= m for k in word):
        raise DiagramError("braid generator out of range")
    fresh = iter(range(1, 10 ** 9))
    bottom = [next(fresh) for _ in range(m)]
    cur = list(bottom)
    raw = []
    for k in word:
        i = abs(k) - 1
        l, r = cur[i], cur[i + 1]
        l2, r2 = next(fresh), next(fresh)
        if k > 0:
            raw.append((r, r2, l2, l))
        else:
            raw.append((l, r, r2, l2))
        cur[i], cur[i + 1] = l2, r2
    rename = dict(zip(cur, bottom))
    raw = [tuple(rename.get(a, a) for a in x) for x in raw]
    used = {a for x in raw for a in x}
    loops = sum(1 for a in bottom if a not in used)
    return _orient_and_label(raw, loops, name)


def disjoint_union(*diagrams: LinkDiagram) -> LinkDiagram:
    crossings = []
    loops = 0
    shift = 0
    for d in diagrams:
        crossings.extend(tuple(a + shift for a in x) for x in d.crossings)
        shift += max(d.crossing_arcs, default=0)
        loops += d.loops
    return LinkDiagram(tuple(crossings), loops)

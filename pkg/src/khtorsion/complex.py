"""Enhanced-state chain complex with integer coefficients.

A Kauffman state is a bitmask over the crossing order (bit ``x`` set means a
B label at crossing ``x``).  Within one state the circles are sorted by their
smallest arc label, and an enhancement is a bitmask over that circle order
marking the circles signed ``-``.  The differential raises ``i`` by one and
keeps ``j = i + (#plus - #minus)`` fixed.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Iterator, Mapping

from .diagram import A_PAIRS, B_PAIRS, LinkDiagram, smooth


@dataclass(frozen=True, order=True)
class EnhancedState:
    """A Kauffman state with the set of circles signed ``-``.

    Circles are named by their smallest arc label (their *key*).
    """

    mask: int
    minus: frozenset = field(default_factory=frozenset)

    def __repr__(self):
        return f"EnhancedState(mask={self.mask:#b}, minus={sorted(self.minus)})"


@dataclass(frozen=True)
class ChainVector:
    i: int
    j: int
    terms: Mapping[EnhancedState, int]

    def __post_init__(self):
        object.__setattr__(self, "terms", {s: c for s, c in dict(self.terms).items() if c})

    @classmethod
    def zero(cls, i: int, j: int) -> "ChainVector":
        return cls(i, j, {})

    def __add__(self, other: "ChainVector") -> "ChainVector":
        self._same_degree(other)
        out = dict(self.terms)
        for s, c in other.terms.items():
            out[s] = out.get(s, 0) + c
        return ChainVector(self.i, self.j, out)

    def __neg__(self):
        return ChainVector(self.i, self.j, {s: -c for s, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __rmul__(self, k: int) -> "ChainVector":
        return ChainVector(self.i, self.j, {s: k * c for s, c in self.terms.items()})

    def __eq__(self, other):
        if not isinstance(other, ChainVector):
            return NotImplemented
        if not self.terms and not other.terms:
            return True
        return (self.i, self.j) == (other.i, other.j) and self.terms == other.terms

    def __hash__(self):
        return hash((self.i, self.j, frozenset(self.terms.items())))

    def __len__(self):
        return len(self.terms)

    def __bool__(self):
        return bool(self.terms)

    def _same_degree(self, other):
        if (self.i, self.j) != (other.i, other.j) and self.terms and other.terms:
            raise ValueError(f"bidegree mismatch: {(self.i, self.j)} vs {(other.i, other.j)}")


def incidence_sign(mask: int, x: int) -> int:
    """(-1)^k, k = number of B labels on crossings before ``x``."""
    return -1 if bin(mask & ((1 << x) - 1)).count("1") % 2 else 1


class _StateData:
    __slots__ = ("circles", "keys", "arc_circle")

    def __init__(self, circles):
        order = sorted(circles, key=min)
        self.circles = tuple(order)
        self.keys = tuple(min(c) for c in order)
        self.arc_circle = {a: k for k, c in enumerate(order) for a in c}


class ViroComplex:
    """The enhanced-state complex of one diagram, with cached circle data."""

    def __init__(self, diagram: LinkDiagram):
        self.diagram = diagram
        self.n = diagram.n_crossings
        self._states: dict[int, _StateData] = {}
        self._moves: dict[tuple[int, int], tuple] = {}
        self._basis: dict[tuple[int, int], list[tuple[int, int]]] = {}
        self._index: dict[tuple[int, int], dict[tuple[int, int], int]] = {}

    # -- circles ------------------------------------------------------------

    def state(self, mask: int) -> _StateData:
        sd = self._states.get(mask)
        if sd is None:
            sd = _StateData(smooth(self.diagram, mask).circles)
            self._states[mask] = sd
        return sd

    def circle_count(self, mask: int) -> int:
        return len(self.state(mask).circles)

    def circle_keys(self, mask: int) -> tuple[int, ...]:
        return self.state(mask).keys

    # -- state conversion ---------------------------------------------------

    def code(self, s: EnhancedState) -> int:
        keys = self.state(s.mask).keys
        try:
            return sum(1 << keys.index(k) for k in s.minus)
        except ValueError:
            raise ValueError(f"{s!r} names a circle not present in its smoothing") from None

    def enhanced(self, mask: int, code: int) -> EnhancedState:
        keys = self.state(mask).keys
        return EnhancedState(mask, frozenset(k for b, k in enumerate(keys) if code >> b & 1))

    def gradings(self, s: EnhancedState) -> tuple[int, int]:
        i = bin(s.mask).count("1")
        c = self.circle_count(s.mask)
        return i, i + c - 2 * len(s.minus)

    # -- bases --------------------------------------------------------------

    def masks(self, i: int) -> list[int]:
        if i < 0 or i > self.n:
            return []
        return sorted(sum(1 << x for x in xs) for xs in combinations(range(self.n), i))

    def basis_codes(self, i: int, j: int) -> list[tuple[int, int]]:
        key = (i, j)
        out = self._basis.get(key)
        if out is None:
            out = []
            for mask in self.masks(i):
                c = self.circle_count(mask)
                twice_m = i + c - j
                if twice_m < 0 or twice_m % 2 or twice_m // 2 > c:
                    continue
                m = twice_m // 2
                codes = sorted(sum(1 << b for b in bits) for bits in combinations(range(c), m))
                out.extend((mask, code) for code in codes)
            self._basis[key] = out
        return out

    def basis(self, i: int, j: int) -> list[EnhancedState]:
        return [self.enhanced(m, c) for m, c in self.basis_codes(i, j)]

    def index(self, i: int, j: int) -> dict[tuple[int, int], int]:
        key = (i, j)
        idx = self._index.get(key)
        if idx is None:
            idx = {mc: k for k, mc in enumerate(self.basis_codes(i, j))}
            self._index[key] = idx
        return idx

    def dimension(self, i: int, j: int) -> int:
        return len(self.basis_codes(i, j))

    def bidegrees(self) -> list[tuple[int, int]]:
        """All (i, j) with nonzero chain groups, sorted."""
        out = set()
        for i in range(self.n + 1):
            for mask in self.masks(i):
                c = self.circle_count(mask)
                out.update((i, i + c - 2 * m) for m in range(c + 1))
        return sorted(out)

    def j_range(self) -> list[int]:
        return sorted({j for _, j in self.bidegrees()})

    # -- differential -------------------------------------------------------

    def _move(self, mask: int, x: int):
        """Circle bookkeeping for changing the A label at crossing ``x`` to B.

        Returns ``(target_mask, sign, kind, data)`` where ``kind`` is
        ``"merge"`` or ``"split"``.
        """
        key = (mask, x)
        mv = self._moves.get(key)
        if mv is not None:
            return mv
        src = self.state(mask)
        tmask = mask | (1 << x)
        dst = self.state(tmask)
        a, b, c, d = self.diagram.crossings[x]
        sign = incidence_sign(mask, x)
        ca, cc = src.arc_circle[a], src.arc_circle[c]
        relabel = [dst.arc_circle[k] for k in src.keys]
        if ca != cc:
            kind = "merge"
            data = (ca, cc, dst.arc_circle[a])
        else:
            kind = "split"
            data = (ca, dst.arc_circle[a], dst.arc_circle[b])
        mv = (tmask, sign, kind, data, relabel)
        self._moves[key] = mv
        return mv

    def image_codes(self, mask: int, code: int) -> Iterator[tuple[int, int, int]]:
        """Terms ``(target_mask, target_code, coefficient)`` of d applied to one state."""
        for x in range(self.n):
            if mask >> x & 1:
                continue
            tmask, sign, kind, data, relabel = self._move(mask, x)
            rest = 0
            bits = code
            involved = data[:2] if kind == "merge" else data[:1]
            k = 0
            while bits:
                if bits & 1 and k not in involved:
                    rest |= 1 << relabel[k]
                bits >>= 1
                k += 1
            if kind == "merge":
                c1, c2, new = data
                m1, m2 = code >> c1 & 1, code >> c2 & 1
                if m1 and m2:
                    continue
                yield tmask, rest | ((m1 | m2) << new), sign
            else:
                old, n1, n2 = data
                if code >> old & 1:
                    yield tmask, rest | (1 << n1) | (1 << n2), sign
                else:
                    yield tmask, rest | (1 << n1), sign
                    yield tmask, rest | (1 << n2), sign

    def differential(self, z: ChainVector) -> ChainVector:
        out: dict[tuple[int, int], int] = {}
        for s, coef in z.terms.items():
            for tm, tc, sg in self.image_codes(s.mask, self.code(s)):
                out[(tm, tc)] = out.get((tm, tc), 0) + sg * coef
        return ChainVector(z.i + 1, z.j, {self.enhanced(m, c): v for (m, c), v in out.items() if v})

    def incidence(self, s: EnhancedState, t: EnhancedState) -> int:
        if bin(t.mask).count("1") != bin(s.mask).count("1") + 1:
            return 0
        target = (t.mask, self.code(t))
        total = 0
        for tm, tc, sg in self.image_codes(s.mask, self.code(s)):
            if (tm, tc) == target:
                total += sg
        return total

    def boundary_matrix(self, i: int, j: int) -> "BoundaryMatrix":
        src = self.basis_codes(i, j)
        tgt_index = self.index(i + 1, j)
        columns = []
        for mask, code in src:
            col: dict[int, int] = {}
            for tm, tc, sg in self.image_codes(mask, code):
                r = tgt_index[(tm, tc)]
                col[r] = col.get(r, 0) + sg
            columns.append({r: v for r, v in col.items() if v})
        return BoundaryMatrix((i, j), len(tgt_index), columns)

    # -- vectors <-> chains -------------------------------------------------

    def to_vector(self, z: ChainVector) -> dict[int, int]:
        idx = self.index(z.i, z.j)
        out = {}
        for s, c in z.terms.items():
            key = (s.mask, self.code(s))
            if key not in idx:
                raise ValueError(f"{s!r} is not at bidegree {(z.i, z.j)}")
            out[idx[key]] = c
        return out

    def from_vector(self, i: int, j: int, vec: Mapping[int, int]) -> ChainVector:
        basis = self.basis_codes(i, j)
        return ChainVector(i, j, {self.enhanced(*basis[k]): c for k, c in vec.items() if c})


@dataclass
class BoundaryMatrix:
    """Sparse integer matrix of d from ``source`` = (i, j) to (i+1, j), stored by columns."""

    source: tuple[int, int]
    n_rows: int
    columns: list[dict[int, int]]

    @property
    def target(self) -> tuple[int, int]:
        return (self.source[0] + 1, self.source[1])

    @property
    def n_cols(self) -> int:
        return len(self.columns)

    @property
    def shape(self) -> tuple[int, int]:
        return (self.n_rows, self.n_cols)

    @property
    def nonzeros(self) -> int:
        return sum(len(c) for c in self.columns)

    def rows(self) -> list[dict[int, int]]:
        out: list[dict[int, int]] = [dict() for _ in range(self.n_rows)]
        for c, col in enumerate(self.columns):
            for r, v in col.items():
                out[r][c] = v
        return out

    def dense(self) -> list[list[int]]:
        m = [[0] * self.n_cols for _ in range(self.n_rows)]
        for c, col in enumerate(self.columns):
            for r, v in col.items():
                m[r][c] = v
        return m

    def apply(self, vec: Mapping[int, int]) -> dict[int, int]:
        out: dict[int, int] = {}
        for c, k in vec.items():
            for r, v in self.columns[c].items():
                out[r] = out.get(r, 0) + k * v
        return {r: v for r, v in out.items() if v}

    def compose_is_zero(self, after: "BoundaryMatrix") -> bool:
        """True when ``after @ self`` is the zero matrix."""
        if after.n_cols != self.n_rows:
            raise ValueError("shape mismatch")
        return all(not after.apply(col) for col in self.columns)

    def triplets(self) -> str:
        lines = [f"{r} {c} {v}" for c, col in enumerate(self.columns) for r, v in sorted(col.items())]
        return "\n".join(lines) + ("\n" if lines else "")


# Module-level conveniences; each call shares a complex cached per diagram.

_CACHE: dict[LinkDiagram, ViroComplex] = {}


def clear_cache() -> None:
    _CACHE.clear()


def viro_complex(diagram: LinkDiagram) -> ViroComplex:
    cx = _CACHE.get(diagram)
    if cx is None:
        if len(_CACHE) > 32:
            _CACHE.clear()
        cx = _CACHE[diagram] = ViroComplex(diagram)
    return cx


def enumerate_basis(diagram: LinkDiagram, i: int, j: int) -> list[EnhancedState]:
    return viro_complex(diagram).basis(i, j)


def incidence(diagram: LinkDiagram, s: EnhancedState, t: EnhancedState) -> int:
    return viro_complex(diagram).incidence(s, t)


def differential(diagram: LinkDiagram, z: ChainVector) -> ChainVector:
    return viro_complex(diagram).differential(z)


def boundary_matrix(diagram: LinkDiagram, i: int, j: int) -> BoundaryMatrix:
    return viro_complex(diagram).boundary_matrix(i, j)


def chain(diagram: LinkDiagram, terms: Iterable[tuple[EnhancedState, int]]) -> ChainVector:
    """Build a chain, reading its bidegree off the terms."""
    cx = viro_complex(diagram)
    terms = list(terms)
    if not terms:
        raise ValueError("use ChainVector.zero for the empty chain")
    degs = {cx.gradings(s) for s, _ in terms}
    if len(degs) != 1:
        raise ValueError(f"terms have mixed bidegrees {sorted(degs)}")
    (i, j), = degs
    out: dict[EnhancedState, int] = {}
    for s, c in terms:
        out[s] = out.get(s, 0) + c
    return ChainVector(i, j, out)


__all__ = [
    "A_PAIRS", "B_PAIRS", "EnhancedState", "ChainVector", "ViroComplex", "BoundaryMatrix",
    "viro_complex", "enumerate_basis", "incidence", "differential", "boundary_matrix", "chain",
]

"""Exact integer linear algebra: Smith normal form, ranks and integer solving.

Boundary matrices of the enhanced-state complex are very sparse with entries
in {-1, 0, 1}.  Every routine first eliminates unit pivots sparsely (these
contribute invariant factor 1) and hands the small leftover block to a dense
Smith normal form.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass
from typing import Mapping, Sequence


@dataclass(frozen=True)
class SmithForm:
    factors: tuple[int, ...]
    shape: tuple[int, int]
    left: tuple[tuple[int, ...], ...] | None = None
    right: tuple[tuple[int, ...], ...] | None = None

    @property
    def rank(self) -> int:
        return len(self.factors)

    @property
    def torsion(self) -> tuple[int, ...]:
        return tuple(f for f in self.factors if f > 1)


# --------------------------------------------------------------------------
# dense Smith normal form
# --------------------------------------------------------------------------

def _dense_snf(a: list[list[int]], want_transforms: bool):
    """In-place SNF of a dense matrix.  Returns (factors, U, V) with U*A*V = D."""
    m = len(a)
    n = len(a[0]) if m else 0
    u = [[int(r == c) for c in range(m)] for r in range(m)] if want_transforms else None
    v = [[int(r == c) for c in range(n)] for r in range(n)] if want_transforms else None

    def swap_rows(i, k):
        a[i], a[k] = a[k], a[i]
        if u is not None:
            u[i], u[k] = u[k], u[i]

    def swap_cols(j, k):
        for row in a:
            row[j], row[k] = row[k], row[j]
        if v is not None:
            for row in v:
                row[j], row[k] = row[k], row[j]

    def add_row(dst, src, k):  # row dst += k * row src
        ra, rs = a[dst], a[src]
        for c in range(n):
            if rs[c]:
                ra[c] += k * rs[c]
        if u is not None:
            ud, us = u[dst], u[src]
            for c in range(m):
                if us[c]:
                    ud[c] += k * us[c]

    def add_col(dst, src, k):  # col dst += k * col src
        for row in a:
            if row[src]:
                row[dst] += k * row[src]
        if v is not None:
            for row in v:
                if row[src]:
                    row[dst] += k * row[src]

    factors = []
    t = 0
    while t < min(m, n):
        # smallest nonzero entry of the trailing block
        best = None
        for r in range(t, m):
            row = a[r]
            for c in range(t, n):
                x = row[c]
                if x and (best is None or abs(x) < best[0]):
                    best = (abs(x), r, c)
                    if best[0] == 1:
                        break
            if best and best[0] == 1:
                break
        if best is None:
            break
        _, r, c = best
        swap_rows(t, r)
        swap_cols(t, c)
        while True:
            p = a[t][t]
            dirty = False
            for r in range(t + 1, m):
                if a[r][t]:
                    q = a[r][t] // p
                    add_row(r, t, -q)
                    if a[r][t]:
                        dirty = True
            for c in range(t + 1, n):
                if a[t][c]:
                    q = a[t][c] // p
                    add_col(c, t, -q)
                    if a[t][c]:
                        dirty = True
            if dirty:
                # a remainder smaller than the pivot appeared; move it in
                best = None
                for r in range(t, m):
                    if a[r][t] and (best is None or abs(a[r][t]) < best[0]):
                        best = (abs(a[r][t]), r, t)
                for c in range(t, n):
                    if a[t][c] and (best is None or abs(a[t][c]) < best[0]):
                        best = (abs(a[t][c]), t, c)
                _, r, c = best
                swap_rows(t, r)
                swap_cols(t, c)
                continue
            # row and column cleared; enforce divisibility on the block
            bad = None
            for r in range(t + 1, m):
                row = a[r]
                for c in range(t + 1, n):
                    if row[c] % p:
                        bad = r
                        break
                if bad is not None:
                    break
            if bad is None:
                break
            add_row(t, bad, 1)
        if a[t][t] < 0:
            if u is not None:
                u[t] = [-x for x in u[t]]
            a[t] = [-x for x in a[t]]
        factors.append(a[t][t])
        t += 1
    return factors, u, v


def smith_normal_form(matrix: Sequence[Sequence[int]], transforms: bool = False,
                      n_cols: int | None = None) -> SmithForm:
    """Invariant factors of a dense integer matrix (optionally with U, V so U*M*V = D)."""
    a = [list(map(int, row)) for row in matrix]
    m = len(a)
    n = len(a[0]) if m else (n_cols or 0)
    if any(len(row) != n for row in a):
        raise ValueError("ragged matrix")
    if transforms:
        factors, u, v = _dense_snf(a, True)
        return SmithForm(tuple(factors), (m, n), tuple(map(tuple, u)), tuple(map(tuple, v)))
    if m and n:
        return sparse_smith_factors([{c: x for c, x in enumerate(row) if x} for row in a], n)
    return SmithForm((), (m, n))


# --------------------------------------------------------------------------
# sparse unit-pivot elimination
# --------------------------------------------------------------------------

class _Eliminator:
    """Row-sparse matrix supporting elimination on unit pivots.

    With ``track`` set, every row remembers its combination of original rows,
    and ``rhs`` follows the row operations.
    """

    def __init__(self, rows: list[dict[int, int]], rhs: Mapping[int, int] | None = None,
                 track: bool = False):
        self.rows = {r: dict(row) for r, row in enumerate(rows) if row}
        self.col_rows: dict[int, set[int]] = {}
        for r, row in self.rows.items():
            for c in row:
                self.col_rows.setdefault(c, set()).add(r)
        self.rhs = {r: v for r, v in (rhs or {}).items() if v}
        self.track = track
        self.prov = {r: {r: 1} for r in range(len(rows))} if track else None
        self.pivots: list[tuple[int, int, dict[int, int], int]] = []
        self.zero_rows = [r for r in range(len(rows)) if not rows[r]]

    def run(self):
        heap = [(len(row), r) for r, row in self.rows.items()]
        heapq.heapify(heap)
        while heap:
            length, r = heapq.heappop(heap)
            row = self.rows.get(r)
            if row is None:
                continue
            if len(row) != length:
                heapq.heappush(heap, (len(row), r))
                continue
            # unit entry in the sparsest column
            best = None
            for c, x in row.items():
                if x == 1 or x == -1:
                    k = len(self.col_rows[c])
                    if best is None or k < best[0]:
                        best = (k, c)
            if best is None:
                continue
            c = best[1]
            self._eliminate(r, c, heap)

    def _eliminate(self, r, c, heap):
        row = self.rows.pop(r)
        for cc in row:
            self.col_rows[cc].discard(r)
        p = row[c]
        b = self.rhs.pop(r, 0)
        self.pivots.append((r, c, row, b))
        for r2 in list(self.col_rows[c]):
            row2 = self.rows[r2]
            k = row2[c] * p  # p = +-1, so row2[c]/p == row2[c]*p
            for cc, x in row.items():
                y = row2.get(cc, 0) - k * x
                if y:
                    if cc not in row2:
                        self.col_rows[cc].add(r2)
                    row2[cc] = y
                else:
                    if cc in row2:
                        del row2[cc]
                        self.col_rows[cc].discard(r2)
            if b:
                y = self.rhs.get(r2, 0) - k * b
                if y:
                    self.rhs[r2] = y
                else:
                    self.rhs.pop(r2, None)
            if self.track:
                pr2 = self.prov[r2]
                for o, x in self.prov[r].items():
                    y = pr2.get(o, 0) - k * x
                    if y:
                        pr2[o] = y
                    else:
                        pr2.pop(o, None)
            if not row2:
                del self.rows[r2]
                self.zero_rows.append(r2)
            else:
                heapq.heappush(heap, (len(row2), r2))
        del self.col_rows[c]

    def residual(self):
        """Remaining rows/columns as a dense block with their labels."""
        rlabels = sorted(self.rows)
        clabels = sorted({c for row in self.rows.values() for c in row})
        cpos = {c: k for k, c in enumerate(clabels)}
        dense = []
        for r in rlabels:
            line = [0] * len(clabels)
            for c, x in self.rows[r].items():
                line[cpos[c]] = x
            dense.append(line)
        return rlabels, clabels, dense


def sparse_smith_factors(rows: list[dict[int, int]], n_cols: int) -> SmithForm:
    el = _Eliminator(rows)
    el.run()
    _, _, dense = el.residual()
    factors, _, _ = _dense_snf(dense, False) if dense else ([], None, None)
    return SmithForm(tuple([1] * len(el.pivots) + sorted(factors)), (len(rows), n_cols))


def columns_to_rows(n_rows: int, columns: Sequence[Mapping[int, int]]) -> list[dict[int, int]]:
    rows: list[dict[int, int]] = [dict() for _ in range(n_rows)]
    for c, col in enumerate(columns):
        for r, x in col.items():
            if x:
                rows[r][c] = x
    return rows


# --------------------------------------------------------------------------
# integer systems
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class Obstruction:
    """A functional ``phi`` on the target with phi*M = 0 (mod m) but phi*v != 0 (mod m).

    ``modulus == 0`` means plain equality.
    """

    phi: dict[int, int]
    modulus: int

    def holds(self, rows: Sequence[Mapping[int, int]], v: Mapping[int, int]) -> bool:
        """Re-check the obstruction directly against the row-sparse matrix and ``v``."""
        m = self.modulus
        acc: dict[int, int] = {}
        for r, k in self.phi.items():
            for c, x in rows[r].items():
                acc[c] = acc.get(c, 0) + k * x
        red = (lambda t: t % m) if m else (lambda t: t)
        if any(red(x) for x in acc.values()):
            return False
        return red(sum(k * v.get(r, 0) for r, k in self.phi.items())) != 0


def solve_integer_system(rows: list[dict[int, int]], n_cols: int, v: Mapping[int, int],
                         witness: bool = True):
    """Solve M y = v over the integers.

    Returns ``(y, None)`` with a sparse solution dict, or ``(None, obstruction)``.
    """
    if any(r < 0 or r >= len(rows) for r in v):
        raise ValueError("target vector does not match the matrix rows")
    el = _Eliminator(rows, v, track=witness)
    el.run()
    # rows that vanished but kept a nonzero right-hand side
    for r in el.zero_rows:
        if el.rhs.get(r):
            return None, (Obstruction(dict(el.prov[r]), 0) if witness else None)
    rlabels, clabels, dense = el.residual()
    y: dict[int, int] = {}
    if dense:
        factors, u, vt = _dense_snf([row[:] for row in dense], True)
        b = [el.rhs.get(r, 0) for r in rlabels]
        ub = [sum(u[k][t] * b[t] for t in range(len(b)) if b[t]) for k in range(len(b))]
        z = []
        for k, val in enumerate(ub):
            d = factors[k] if k < len(factors) else 0
            if (d == 0 and val) or (d and val % d):
                if not witness:
                    return None, None
                phi: dict[int, int] = {}
                for t, coef in enumerate(u[k]):
                    if coef:
                        for o, x in el.prov[rlabels[t]].items():
                            phi[o] = phi.get(o, 0) + coef * x
                return None, Obstruction({o: x for o, x in phi.items() if x}, d)
            if k < len(factors):
                z.append(val // d)
        for t in range(len(clabels)):
            s = sum(vt[t][k] * z[k] for k in range(len(z)))
            if s:
                y[clabels[t]] = s
    # back-substitute the unit pivots, last eliminated first
    for r, c, row, b in reversed(el.pivots):
        p = row[c]
        acc = b - sum(x * y.get(cc, 0) for cc, x in row.items() if cc != c)
        val = acc * p
        if val:
            y[c] = val
    return y, None


def rank_mod2(rows: Sequence[Mapping[int, int]]) -> int:
    """Rank over the field with two elements, rows packed as bitsets."""
    pivots: dict[int, int] = {}
    rank = 0
    for row in rows:
        bits = 0
        for c, x in row.items():
            if x & 1:
                bits |= 1 << c
        while bits:
            top = bits.bit_length() - 1
            if top in pivots:
                bits ^= pivots[top]
            else:
                pivots[top] = bits
                rank += 1
                break
    return rank

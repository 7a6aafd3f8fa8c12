"""Integral Khovanov homology from the enhanced-state complex."""

from __future__ import annotations

import json
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Iterator, Mapping

from .complex import BoundaryMatrix, ChainVector, ViroComplex, viro_complex
from .diagram import LinkDiagram, smooth
from .snf import (Obstruction, SmithForm, columns_to_rows, rank_mod2,
                  smith_normal_form, solve_integer_system, sparse_smith_factors)

__all__ = [
    "HomologyGroup", "GradingMap", "HomologyTable", "SmithForm", "smith_normal_form",
    "homology_group", "homology_table", "image_membership", "MembershipResult",
    "graded_euler_characteristic", "homology_euler_characteristic", "matrix_smith",
]


@dataclass(frozen=True)
class HomologyGroup:
    free_rank: int = 0
    torsion: tuple[int, ...] = ()

    def __post_init__(self):
        t = tuple(sorted(int(x) for x in self.torsion))
        if any(x < 2 for x in t):
            raise ValueError("torsion coefficients must be >= 2")
        if any(b % a for a, b in zip(t, t[1:])):
            raise ValueError(f"torsion {t} is not a divisibility chain")
        object.__setattr__(self, "torsion", t)

    @property
    def is_zero(self) -> bool:
        return self.free_rank == 0 and not self.torsion

    def has_even_torsion(self) -> bool:
        return any(t % 2 == 0 for t in self.torsion)

    def __str__(self):
        parts = []
        if self.free_rank:
            parts.append("Z" if self.free_rank == 1 else f"Z^{self.free_rank}")
        parts.extend(f"Z{t}" for t in self.torsion)
        return "+".join(parts) if parts else "0"


@dataclass(frozen=True)
class GradingMap:
    """Diagram gradings (i, j) versus link gradings (h, q)."""

    p: int
    n: int

    @classmethod
    def of(cls, diagram: LinkDiagram) -> "GradingMap":
        return cls(diagram.positive_count, diagram.negative_count)

    def to_hq(self, i: int, j: int) -> tuple[int, int]:
        return i - self.n, j + self.p - 2 * self.n

    def to_ij(self, h: int, q: int) -> tuple[int, int]:
        return h + self.n, q - self.p + 2 * self.n


# --------------------------------------------------------------------------
# matrix ranks and factors
# --------------------------------------------------------------------------

def matrix_smith(d: BoundaryMatrix) -> SmithForm:
    if not d.n_cols or not d.n_rows:
        return SmithForm((), d.shape)
    return sparse_smith_factors(columns_to_rows(d.n_rows, d.columns), d.n_cols)


def _matrix_rank_mod2(d: BoundaryMatrix) -> int:
    if not d.n_cols or not d.n_rows:
        return 0
    return rank_mod2(d.columns)


def _group_from(dim: int, out: SmithForm | int, into: SmithForm | int) -> HomologyGroup:
    if isinstance(out, int):  # mod-2 ranks
        return HomologyGroup(dim - out - into, ())
    return HomologyGroup(dim - out.rank - into.rank, into.torsion)


def homology_group(diagram: LinkDiagram, i: int, j: int, mod2: bool = False) -> HomologyGroup:
    """ker d_i / im d_{i-1} at (i, j).

    With ``mod2`` the result is the Z/2 dimension reported as ``free_rank``.
    """
    cx = viro_complex(diagram)
    dim = cx.dimension(i, j)
    if not dim:
        return HomologyGroup()
    measure = _matrix_rank_mod2 if mod2 else matrix_smith
    out = measure(cx.boundary_matrix(i, j))
    into = measure(cx.boundary_matrix(i - 1, j))
    return _group_from(dim, out, into)


def _column_homology(diagram: LinkDiagram, j: int, mod2: bool) -> dict[tuple[int, int], HomologyGroup]:
    cx = viro_complex(diagram)
    measure = _matrix_rank_mod2 if mod2 else matrix_smith
    degrees = [i for i in range(cx.n + 1) if cx.dimension(i, j)]
    if not degrees:
        return {}
    cache: dict[int, SmithForm | int] = {}

    def get(i):
        if i not in cache:
            cache[i] = measure(cx.boundary_matrix(i, j)) if cx.dimension(i, j) and cx.dimension(i + 1, j) else (
                0 if mod2 else SmithForm((), (0, 0)))
        return cache[i]

    out = {}
    for i in degrees:
        g = _group_from(cx.dimension(i, j), get(i), get(i - 1))
        if not g.is_zero:
            out[(i, j)] = g
    return out


def _column_job(args):
    diagram, j, mod2 = args
    return _column_homology(diagram, j, mod2)


class HomologyTable(Mapping):
    """Nonzero homology groups keyed by (i, j); ``at_hq`` reads link gradings."""

    def __init__(self, groups: Mapping[tuple[int, int], HomologyGroup], grading: GradingMap,
                 mod2: bool = False, name: str | None = None):
        self._groups = {k: v for k, v in sorted(groups.items()) if not v.is_zero}
        self.grading = grading
        self.mod2 = mod2
        self.name = name

    def __getitem__(self, key):
        return self._groups.get(tuple(key), HomologyGroup())

    def __iter__(self) -> Iterator[tuple[int, int]]:
        return iter(self._groups)

    def __len__(self):
        return len(self._groups)

    def __contains__(self, key):
        return tuple(key) in self._groups

    def __eq__(self, other):
        if isinstance(other, HomologyTable):
            return self._groups == other._groups and self.grading == other.grading
        return NotImplemented

    def at_hq(self, h: int, q: int) -> HomologyGroup:
        return self[self.grading.to_ij(h, q)]

    def by_hq(self) -> dict[tuple[int, int], HomologyGroup]:
        return {self.grading.to_hq(*k): v for k, v in self._groups.items()}

    def poincare(self) -> dict[tuple[int, int], int]:
        return {k: v.free_rank for k, v in self._groups.items() if v.free_rank}

    # -- serialization ------------------------------------------------------

    def to_records(self) -> list[dict]:
        out = []
        for (i, j), g in self._groups.items():
            h, q = self.grading.to_hq(i, j)
            out.append({"i": i, "j": j, "h": h, "q": q,
                        "free_rank": g.free_rank, "torsion": list(g.torsion)})
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_records())

    @classmethod
    def from_json(cls, text: str | list) -> "HomologyTable":
        recs = json.loads(text) if isinstance(text, str) else text
        groups = {}
        grading = None
        for rec in recs:
            i, j, h, q = rec["i"], rec["j"], rec["h"], rec["q"]
            # q = j + p - 2n  =>  p = q - j + 2n
            g = GradingMap(p=q - j + 2 * (i - h), n=i - h)
            if grading is not None and g != grading:
                raise ValueError("records disagree on the grading shift")
            grading = g
            groups[(i, j)] = HomologyGroup(rec["free_rank"], tuple(rec["torsion"]))
        return cls(groups, grading or GradingMap(0, 0))

    # -- rendering ----------------------------------------------------------

    def render(self, link_gradings: bool = False) -> str:
        groups = self.by_hq() if link_gradings else dict(self._groups)
        col_name, row_name = ("h", "q") if link_gradings else ("i", "j")
        if not groups:
            return "(zero)\n"
        cols = sorted({a for a, _ in groups})
        cols = list(range(cols[0], cols[-1] + 1))
        rows = sorted({b for _, b in groups}, reverse=True)
        cells = {k: str(v) for k, v in groups.items()}
        width = max([len(c) for c in cells.values()] + [len(str(c)) for c in cols] + [1]) + 1
        head = f"{row_name}\\{col_name}".rjust(6)
        lines = [head + "".join(str(c).rjust(width) for c in cols)]
        for b in rows:
            line = str(b).rjust(6)
            line += "".join(cells.get((a, b), ".").rjust(width) for a in cols)
            lines.append(line)
        return "\n".join(lines) + "\n"


def homology_table(diagram: LinkDiagram, mod2: bool = False, jobs: int = 1) -> HomologyTable:
    cx = viro_complex(diagram)
    js = cx.j_range()
    groups: dict = {}
    if jobs > 1 and len(js) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            for part in pool.map(_column_job, [(diagram, j, mod2) for j in js]):
                groups.update(part)
    else:
        for j in js:
            groups.update(_column_homology(diagram, j, mod2))
    return HomologyTable(groups, GradingMap.of(diagram), mod2, diagram.name)


def default_jobs() -> int:
    return max(1, min(4, os.cpu_count() or 1))


# --------------------------------------------------------------------------
# image membership
# --------------------------------------------------------------------------

@dataclass
class MembershipResult:
    """Outcome of solving d(Y) = v: a preimage, or an obstruction functional."""

    solution: ChainVector | None
    obstruction: Obstruction | None = None
    obstruction_checked: bool = field(default=False)

    @property
    def solvable(self) -> bool:
        return self.solution is not None


def image_membership(diagram: LinkDiagram, v: ChainVector, witness: bool = True) -> MembershipResult:
    """Is ``v`` a boundary?  Works on d from (i-1, j) into the bidegree of ``v``."""
    cx = viro_complex(diagram)
    i, j = v.i, v.j
    if not v:
        return MembershipResult(ChainVector.zero(i - 1, j))
    d = cx.boundary_matrix(i - 1, j)
    target = cx.to_vector(v)
    if d.n_cols == 0:
        phi = {r: 1 for r in (next(iter(target)),)}
        obs = Obstruction(phi, 0) if witness else None
        return MembershipResult(None, obs, witness)
    rows = columns_to_rows(d.n_rows, d.columns)
    y, obs = solve_integer_system(rows, d.n_cols, target, witness)
    if y is None:
        checked = obs.holds(rows, target) if obs is not None else False
        return MembershipResult(None, obs, checked)
    sol = cx.from_vector(i - 1, j, y)
    if d.apply(y) != target:
        raise ArithmeticError("integer solver returned a non-solution")
    return MembershipResult(sol)


# --------------------------------------------------------------------------
# Euler characteristics
# --------------------------------------------------------------------------

def graded_euler_characteristic(diagram: LinkDiagram, shifted: bool = True) -> dict[int, int]:
    """sum (-1)^h dim C q^exp as {exponent: coefficient}.

    With ``shifted`` the link gradings (h, q) are used, otherwise (i, j).
    Counted directly from smoothings, without building bases.
    """
    n = diagram.n_crossings
    g = GradingMap.of(diagram)
    out: dict[int, int] = {}
    for mask in range(1 << n):
        i = bin(mask).count("1")
        c = smooth(diagram, mask).count
        binom = 1
        for m in range(c + 1):
            j = i + c - 2 * m
            h, q = g.to_hq(i, j) if shifted else (i, j)
            out[q] = out.get(q, 0) + (-1) ** h * binom
            binom = binom * (c - m) // (m + 1)
    return {k: v for k, v in sorted(out.items()) if v}


def homology_euler_characteristic(table: HomologyTable, shifted: bool = True) -> dict[int, int]:
    out: dict[int, int] = {}
    for (i, j), grp in table.items():
        h, q = table.grading.to_hq(i, j) if shifted else (i, j)
        out[q] = out.get(q, 0) + (-1) ** h * grp.free_rank
    return {k: v for k, v in sorted(out.items()) if v}


def complex_of(diagram: LinkDiagram) -> ViroComplex:
    return viro_complex(diagram)

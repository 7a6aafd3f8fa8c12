"""Kauffman bracket by direct state sum, kept separate from the chain complex.

Used as an independent check of the graded Euler characteristic: loops are
counted with a union-find over arc ends rather than by tracing smoothings.
"""

from __future__ import annotations

from .diagram import LinkDiagram

Laurent = dict  # exponent -> coefficient


def _mul(p: Laurent, q: Laurent) -> Laurent:
    out: Laurent = {}
    for a, x in p.items():
        for b, y in q.items():
            out[a + b] = out.get(a + b, 0) + x * y
    return {k: v for k, v in out.items() if v}


def _loops(diagram: LinkDiagram, labels: int) -> int:
    """Number of loops when crossing k is resolved with bit k of ``labels`` (1 = B)."""
    # node (c, s) is the end of an arc at slot s of crossing c
    parent: dict = {}

    def find(u):
        while parent.setdefault(u, u) != u:
            parent[u] = parent[parent[u]]
            u = parent[u]
        return u

    def union(u, v):
        parent[find(u)] = find(v)

    ends: dict = {}
    for c, x in enumerate(diagram.crossings):
        for s, a in enumerate(x):
            ends.setdefault(a, []).append((c, s))
            find((c, s))
    for a, (u, v) in ends.items():
        union(u, v)
    for c in range(diagram.n_crossings):
        if labels >> c & 1:
            union((c, 1), (c, 2))
            union((c, 3), (c, 0))
        else:
            union((c, 0), (c, 1))
            union((c, 2), (c, 3))
    return len({find(u) for u in list(parent)}) + diagram.loops


def kauffman_bracket(diagram: LinkDiagram) -> Laurent:
    """Sum over states of A^(#A - #B) d^(loops), d = -A^2 - A^-2, in the variable A."""
    n = diagram.n_crossings
    delta = {2: -1, -2: -1}
    powers = [{0: 1}]
    total: Laurent = {}
    for labels in range(1 << n):
        b = bin(labels).count("1")
        k = _loops(diagram, labels)
        while len(powers) <= k:
            powers.append(_mul(powers[-1], delta))
        for e, x in powers[k].items():
            key = e + (n - 2 * b)
            total[key] = total.get(key, 0) + x
    return {k: v for k, v in sorted(total.items()) if v}


def unnormalized_jones(diagram: LinkDiagram) -> Laurent:
    """Bracket turned into a polynomial in q, shifted by the writhe.

    A^(-n) <D> has only even powers of A; substitute A^(-2) = -q, then
    multiply by (-1)^n_minus q^(n_plus - 2 n_minus).
    """
    n = diagram.n_crossings
    out: Laurent = {}
    for e, x in kauffman_bracket(diagram).items():
        shifted = e - n
        if shifted % 2:
            raise ArithmeticError("odd power of A after normalization")
        m = -shifted // 2  # A^shifted = (A^-2)^m = (-q)^m
        out[m] = out.get(m, 0) + x * (-1) ** m
    nm = diagram.negative_count
    shift = diagram.positive_count - 2 * nm
    sign = -1 if nm % 2 else 1
    return {k + shift: sign * v for k, v in sorted(out.items()) if v}

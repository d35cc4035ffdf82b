"""Exact integer linear algebra on lists of Python ints.

Hermite and Smith normal forms with their unimodular transforms, lattice
membership, kernels and intersections.  Python ints are unbounded, so entry
growth is never an issue.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

Matrix = list[list[int]]


def identity(n: int) -> Matrix:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def matmul(a: Matrix, b: Matrix) -> Matrix:
    if not a:
        return []
    cols = len(b[0]) if b else 0
    return [[sum(a[i][k] * b[k][j] for k in range(len(b))) for j in range(cols)] for i in range(len(a))]


def vecmat(v: Sequence[int], m: Matrix, ncols: int) -> list[int]:
    out = [0] * ncols
    for c, row in zip(v, m):
        if c:
            for j in range(ncols):
                out[j] += c * row[j]
    return out


def _axpy_row(a: Matrix, i: int, q: int, r: int) -> None:
    # row_i -= q * row_r
    if q:
        ri, rr = a[i], a[r]
        for j in range(len(ri)):
            ri[j] -= q * rr[j]


@dataclass
class Hermite:
    """Row-style Hermite form ``H = T @ A``.

    Nonzero rows come first with strictly increasing pivot columns, positive
    pivots, and entries above each pivot reduced into ``[0, pivot)``.
    """

    H: Matrix
    T: Matrix
    pivots: list[int]
    ncols: int

    @property
    def basis(self) -> Matrix:
        return self.H[: len(self.pivots)]

    def kernel(self) -> Matrix:
        """Basis of ``{y : y @ A = 0}``."""
        return self.T[len(self.pivots) :]

    def reduce(self, v: Sequence[int]) -> tuple[list[int], list[int]]:
        """Canonical representative of ``v`` modulo the row lattice.

        Returns ``(rep, coeffs)`` with ``v = rep + coeffs @ basis``.
        """
        rep = list(v)
        coeffs = [0] * len(self.pivots)
        for k, p in enumerate(self.pivots):
            row = self.H[k]
            q = rep[p] // row[p]
            if q:
                coeffs[k] = q
                for j in range(self.ncols):
                    rep[j] -= q * row[j]
        return rep, coeffs

    def contains(self, v: Sequence[int]) -> bool:
        rep, _ = self.reduce(v)
        return not any(rep)

    def solve(self, v: Sequence[int]) -> list[int] | None:
        """Integer ``y`` with ``y @ A = v``, or ``None`` if ``v`` is not in the lattice."""
        rep, coeffs = self.reduce(v)
        if any(rep):
            return None
        return vecmat(coeffs, self.T[: len(self.pivots)], len(self.T))


def hermite(rows: Sequence[Sequence[int]], ncols: int) -> Hermite:
    a = [list(r) for r in rows]
    m = len(a)
    t = identity(m)
    pivots: list[int] = []
    r = 0
    for col in range(ncols):
        if r == m:
            break
        found = False
        while True:
            nz = [i for i in range(r, m) if a[i][col]]
            if not nz:
                break
            found = True
            piv = min(nz, key=lambda i: abs(a[i][col]))
            a[r], a[piv] = a[piv], a[r]
            t[r], t[piv] = t[piv], t[r]
            clean = True
            for i in range(r + 1, m):
                if a[i][col]:
                    q = a[i][col] // a[r][col]
                    _axpy_row(a, i, q, r)
                    _axpy_row(t, i, q, r)
                    if a[i][col]:
                        clean = False
            if clean:
                break
        if not found:
            continue
        if a[r][col] < 0:
            a[r] = [-x for x in a[r]]
            t[r] = [-x for x in t[r]]
        for i in range(r):
            q = a[i][col] // a[r][col]
            _axpy_row(a, i, q, r)
            _axpy_row(t, i, q, r)
        pivots.append(col)
        r += 1
    return Hermite(a, t, pivots, ncols)


@dataclass
class Smith:
    """``D = U @ M @ V`` with ``U``, ``V`` unimodular and ``D`` diagonal."""

    D: Matrix
    U: Matrix
    V: Matrix

    @property
    def diagonal(self) -> list[int]:
        return [self.D[i][i] for i in range(min(len(self.D), len(self.D[0]) if self.D else 0))]


def smith(m_in: Sequence[Sequence[int]], ncols: int) -> Smith:
    a = [list(r) for r in m_in]
    m, n = len(a), ncols
    u = identity(m)
    v = identity(n)

    def swap_cols(x: Matrix, i: int, j: int) -> None:
        for row in x:
            row[i], row[j] = row[j], row[i]

    def col_axpy(x: Matrix, j: int, q: int, k: int) -> None:
        # col_j -= q * col_k
        if q:
            for row in x:
                row[j] -= q * row[k]

    for t in range(min(m, n)):
        cands = [(abs(a[i][j]), i, j) for i in range(t, m) for j in range(t, n) if a[i][j]]
        if not cands:
            break
        _, pi, pj = min(cands)
        a[t], a[pi] = a[pi], a[t]
        u[t], u[pi] = u[pi], u[t]
        swap_cols(a, t, pj)
        swap_cols(v, t, pj)
        while True:
            dirty = False
            for i in range(t + 1, m):
                if a[i][t]:
                    q = a[i][t] // a[t][t]
                    _axpy_row(a, i, q, t)
                    _axpy_row(u, i, q, t)
                    dirty = dirty or a[i][t] != 0
            for j in range(t + 1, n):
                if a[t][j]:
                    q = a[t][j] // a[t][t]
                    col_axpy(a, j, q, t)
                    col_axpy(v, j, q, t)
                    dirty = dirty or a[t][j] != 0
            if dirty:
                cands = [(abs(a[i][t]), i, t) for i in range(t, m) if a[i][t]]
                cands += [(abs(a[t][j]), t, j) for j in range(t, n) if a[t][j]]
                _, pi, pj = min(cands)
                if pi != t:
                    a[t], a[pi] = a[pi], a[t]
                    u[t], u[pi] = u[pi], u[t]
                if pj != t:
                    swap_cols(a, t, pj)
                    swap_cols(v, t, pj)
                continue
            bad = next(
                ((i, j) for i in range(t + 1, m) for j in range(t + 1, n) if a[i][j] % a[t][t]),
                None,
            )
            if bad is None:
                break
            # pull the offending row into row t and start over
            i = bad[0]
            _axpy_row(a, t, -1, i)
            _axpy_row(u, t, -1, i)
        if a[t][t] < 0:
            a[t] = [-x for x in a[t]]
            u[t] = [-x for x in u[t]]
    return Smith(a, u, v)


def left_kernel(rows: Sequence[Sequence[int]], ncols: int) -> Matrix:
    return hermite(rows, ncols).kernel()


def intersection(b1: Sequence[Sequence[int]], b2: Sequence[Sequence[int]], ncols: int) -> Matrix:
    """Basis (Hermite rows) of the intersection of two row lattices."""
    stacked = [list(r) for r in b1] + [[-x for x in r] for r in b2]
    if not stacked:
        return []
    gens = [vecmat(y[: len(b1)], [list(r) for r in b1], ncols) for y in left_kernel(stacked, ncols)]
    gens = [g for g in gens if any(g)]
    return hermite(gens, ncols).basis if gens else []


def rank(rows: Sequence[Sequence[int]], ncols: int) -> int:
    return len(hermite(rows, ncols).pivots)

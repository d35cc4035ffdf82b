"""Finitely generated subgroups of free groups via Stallings folding.

Only membership is provided; it is what the strictness checks need.
"""

from __future__ import annotations

from typing import Sequence

from .words import FreeWord


class SubgroupGraph:
    """Folded core graph of ``<gens>`` in a free group."""

    def __init__(self, gens: Sequence[FreeWord]):
        parent: list[int] = [0]
        raw: list[tuple[int, int, int]] = []
        for g in gens:
            v = 0
            for i, c in enumerate(g.letters):
                if i == len(g.letters) - 1:
                    w = 0
                else:
                    parent.append(len(parent))
                    w = len(parent) - 1
                raw.append((v, c, w))
                v = w

        def find(v: int) -> int:
            while parent[v] != v:
                parent[v] = parent[parent[v]]
                v = parent[v]
            return v

        adj: dict[int, dict[int, set[int]]] = {0: {}}
        for v, c, w in raw:
            adj.setdefault(v, {}).setdefault(c, set()).add(w)
            adj.setdefault(w, {}).setdefault(c ^ 1, set()).add(v)
        changed = True
        while changed:
            changed = False
            for out in adj.values():
                for ts in out.values():
                    roots = sorted({find(t) for t in ts})
                    for r in roots[1:]:
                        parent[r] = roots[0]
                        changed = True
            if changed:
                merged: dict[int, dict[int, set[int]]] = {}
                for v, out in adj.items():
                    slot = merged.setdefault(find(v), {})
                    for c, ts in out.items():
                        slot.setdefault(c, set()).update(find(t) for t in ts)
                adj = merged
        self.base = find(0)
        self.edges: dict[int, dict[int, int]] = {
            v: {c: next(iter(ts)) for c, ts in out.items()} for v, out in adj.items()
        }

    def contains(self, u: FreeWord) -> bool:
        v = self.base
        for c in u.letters:
            nxt = self.edges[v].get(c)
            if nxt is None:
                return False
            v = nxt
        return v == self.base

    def is_trivial(self) -> bool:
        return not self.edges.get(self.base)


def in_subgroup(u: FreeWord, gens: Sequence[FreeWord]) -> bool:
    return SubgroupGraph(gens).contains(u)

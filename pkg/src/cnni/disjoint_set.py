from __future__ import annotations

from collections import defaultdict

from .errors import UsageError


class DisjointSet:
    """Union-find over ``0..n-1`` with union by rank and path compression."""

    def __init__(self, n: int):
        if n < 1:
            raise UsageError("disjoint set needs n >= 1")
        self.parent = list(range(n))
        self.rank = [0] * n
        self.count = n

    def __len__(self):
        return len(self.parent)

    def _check(self, a):
        if not 0 <= a < len(self.parent):
            raise UsageError(f"index {a} out of range for {len(self.parent)} elements")

    def find(self, a: int) -> int:
        self._check(a)
        parent = self.parent
        root = a
        while parent[root] != root:
            root = parent[root]
        while parent[a] != root:
            parent[a], a = root, parent[a]
        return root

    def union(self, a: int, b: int) -> bool:
        """Merge the sets of ``a`` and ``b``; False if they were already one."""
        ra = self.find(a)
        rb = self.find(b)
        if ra == rb:
            return False
        if self.rank[ra] < self.rank[rb]:
            ra, rb = rb, ra
        self.parent[rb] = ra
        if self.rank[ra] == self.rank[rb]:
            self.rank[ra] += 1
        self.count -= 1
        return True

    def union_all(self, a: int, others) -> None:
        for b in others:
            self.union(a, b)

    def connected(self, a: int, b: int) -> bool:
        return self.find(a) == self.find(b)

    def groups(self) -> list[list[int]]:
        out = defaultdict(list)
        for i in range(len(self.parent)):
            out[self.find(i)].append(i)
        return sorted(out.values())


def make_set(n: int) -> DisjointSet:
    return DisjointSet(n)

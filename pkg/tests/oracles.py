"""Slow, independent reference implementations used as test oracles.

Nothing here imports the package's algorithms; distances are recomputed
with plain Python so the checks do not share code with what they check.
"""

from __future__ import annotations

import functools
import itertools
import math

import numpy as np


def dist(a, b) -> float:
    return math.sqrt(sum((float(x) - float(y)) ** 2 for x, y in zip(a, b)))


def neighbor_sets(points, delta) -> list[list[int]]:
    pts = [list(map(float, p)) for p in points]
    out = []
    for i, p in enumerate(pts):
        out.append([j for j, q in enumerate(pts) if j != i and 0 < dist(p, q) <= delta])
    return out


def influences(points, delta, sim=lambda d: 1.0 / (1.0 + d)) -> list[float]:
    pts = [list(map(float, p)) for p in points]
    vals = []
    for i, p in enumerate(pts):
        total = 0.0
        for j, q in enumerate(pts):
            d = dist(p, q)
            if j != i and 0 < d <= delta:
                total += sim(d)
        vals.append(total)
    return vals


def components(points, delta) -> tuple[set, list[int]]:
    """Connected components (as frozensets) of the delta-graph, singletons dropped.

    Also returns the isolated points.
    """
    nbrs = neighbor_sets(points, delta)
    seen = [False] * len(nbrs)
    comps = set()
    isolated = []
    for s in range(len(nbrs)):
        if seen[s]:
            continue
        if not nbrs[s]:
            seen[s] = True
            isolated.append(s)
            continue
        comp = []
        queue = [s]
        seen[s] = True
        while queue:
            u = queue.pop()
            comp.append(u)
            for v in nbrs[u]:
                if not seen[v]:
                    seen[v] = True
                    queue.append(v)
        comps.add(frozenset(comp))
    return comps, isolated


def partition(labels) -> set:
    groups: dict = {}
    for i, lab in enumerate(labels):
        if lab > 0:
            groups.setdefault(int(lab), set()).add(i)
    return {frozenset(g) for g in groups.values()}


@functools.lru_cache(maxsize=None)
def spanning_trees(n: int) -> np.ndarray:
    """Every labeled spanning tree on n vertices (Cayley: n^(n-2) of them).

    Row t lists the tree's n-1 edges as (i, j) pairs, decoded from its
    Pruefer sequence.
    """
    if n == 1:
        return np.zeros((1, 0, 2), dtype=np.int64)
    if n == 2:
        return np.array([[[0, 1]]], dtype=np.int64)
    trees = []
    for seq in itertools.product(range(n), repeat=n - 2):
        degree = [1] * n
        for v in seq:
            degree[v] += 1
        edges = []
        for v in seq:
            leaf = min(u for u in range(n) if degree[u] == 1)
            edges.append((leaf, v))
            degree[leaf] -= 1
            degree[v] -= 1
        u, w = [x for x in range(n) if degree[x] == 1]
        edges.append((u, w))
        trees.append(edges)
    return np.asarray(trees, dtype=np.int64)


def exhaustive_mst_weight(points) -> float:
    """Minimum total weight over every spanning tree of the complete graph."""
    n = len(points)
    W = np.array([[dist(p, q) for q in points] for p in points])
    trees = spanning_trees(n)
    if trees.shape[1] == 0:
        return 0.0
    return float(W[trees[:, :, 0], trees[:, :, 1]].sum(axis=1).min())


def kruskal_mst_edges(points) -> list[float]:
    n = len(points)
    edges = sorted((dist(points[i], points[j]), i, j) for i, j in itertools.combinations(range(n), 2))
    label = list(range(n))
    out = []
    for w, i, j in edges:
        a, b = label[i], label[j]
        if a != b:
            label = [a if x == b else x for x in label]
            out.append(w)
    return out


class NaivePartition:
    """Union-find oracle: every element carries its set id, merges relabel."""

    def __init__(self, n):
        self.label = list(range(n))

    def union(self, a, b):
        la, lb = self.label[a], self.label[b]
        if la != lb:
            self.label = [la if x == lb else x for x in self.label]
            return True
        return False

    def same(self, a, b):
        return self.label[a] == self.label[b]

    def groups(self) -> set:
        out: dict = {}
        for i, lab in enumerate(self.label):
            out.setdefault(lab, set()).add(i)
        return {frozenset(g) for g in out.values()}


def purity(labels, truth) -> float:
    groups: dict = {}
    for lab, t in zip(labels, truth):
        groups.setdefault(int(lab), []).append(t)
    return sum(max(g.count(t) for t in set(g)) for g in groups.values()) / len(labels)


def cnni_reference(points, delta, fraction=0.8, truncate=True, overwrite=True):
    """Plain transcription of the CNNI scan, with lists and dicts only."""
    nbrs = neighbor_sets(points, delta)
    pts = [list(map(float, p)) for p in points]
    infl = [math.fsum(1.0 / (1.0 + dist(pts[i], pts[j])) for j in s) for i, s in enumerate(nbrs)]
    order = sorted(range(len(pts)), key=lambda i: (-infl[i], i))
    label = [0] * len(pts)
    next_id = 1
    for i in order:
        if label[i] or not nbrs[i]:
            continue
        free = sum(1 for q in nbrs[i] if label[q] == 0)
        need = int(fraction * len(nbrs[i])) if truncate else fraction * len(nbrs[i])
        if free >= need:
            label[i] = next_id
            for q in nbrs[i]:
                if overwrite or label[q] == 0:
                    label[q] = next_id
            next_id += 1
        else:
            votes: dict = {}
            for q in nbrs[i]:
                if label[q]:
                    votes[label[q]] = votes.get(label[q], 0) + 1
            top = max(votes.values())
            label[i] = min(c for c, v in votes.items() if v == top)
    # dense renumbering by creation order
    ids = {c: k + 1 for k, c in enumerate(sorted(set(label) - {0}))}
    return [ids.get(c, 0) for c in label]

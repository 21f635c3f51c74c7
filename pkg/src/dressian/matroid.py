"""Matroids from basis sets, and matroid polytopes inside Delta(k,n).

A vertex subset of Delta(k,n) spans a matroid polytope iff the basis
exchange axiom holds, iff all edges of its convex hull are parallel to
differences e_i - e_j of standard basis vectors.  Both tests are
implemented (the combinatorial one is the workhorse, the geometric one
is the cross-validating oracle).
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from functools import lru_cache

from . import exactlin
from .combinat import hypersimplex_vertex, mask_to_subset, subset_to_mask


@dataclass(frozen=True)
class Matroid:
    """A rank-k matroid on [n] given by its set of bases (bit masks)."""

    n: int
    k: int
    bases: frozenset

    @staticmethod
    def from_bases(n, bases):
        masks = frozenset(
            b if isinstance(b, int) else subset_to_mask(b) for b in bases
        )
        if not masks:
            raise ValueError("a matroid needs at least one basis")
        sizes = {bin(m).count("1") for m in masks}
        if len(sizes) != 1:
            raise ValueError("bases of mixed sizes")
        (k,) = sizes
        M = Matroid(n, k, masks)
        if not is_matroid(masks, n):
            raise ValueError("basis exchange axiom fails")
        return M

    def basis_subsets(self):
        return sorted(mask_to_subset(m) for m in self.bases)

    def rank_of(self, subset_mask: int) -> int:
        """rank(S) = max over bases of |B & S|."""
        return max(bin(b & subset_mask).count("1") for b in self.bases)

    def is_loop(self, e: int) -> bool:
        return all(not (b >> (e - 1)) & 1 for b in self.bases)

    def to_json(self) -> str:
        return json.dumps(
            {"n": self.n, "k": self.k, "bases": [list(b) for b in self.basis_subsets()]}
        )

    @staticmethod
    def from_json(text: str) -> "Matroid":
        data = json.loads(text)
        M = Matroid.from_bases(data["n"], [tuple(b) for b in data["bases"]])
        if M.k != data["k"]:
            raise ValueError("declared rank does not match bases")
        return M


def is_matroid(vertex_sets, n: int) -> bool:
    """Basis exchange: for all B1, B2 and x in B1-B2 there is y in B2-B1
    with B1 - x + y again in the collection."""
    masks = [
        v if isinstance(v, int) else subset_to_mask(v) for v in vertex_sets
    ]
    if not masks:
        return False
    sizes = {bin(m).count("1") for m in masks}
    if len(sizes) != 1:
        raise ValueError("vertex sets of mixed sizes")
    mset = set(masks)
    for b1, b2 in itertools.permutations(mset, 2):
        diff1 = b1 & ~b2
        diff2 = b2 & ~b1
        x = diff1
        while x:
            xbit = x & -x
            x ^= xbit
            y = diff2
            found = False
            while y:
                ybit = y & -y
                y ^= ybit
                if (b1 ^ xbit) | ybit in mset:
                    found = True
                    break
            if not found:
                return False
    return True


def edge_parallel_check(vertex_sets, n: int) -> bool:
    """Geometric oracle: every hull edge has direction e_i - e_j."""
    masks = [v if isinstance(v, int) else subset_to_mask(v) for v in vertex_sets]
    pts = [hypersimplex_vertex(n, mask_to_subset(m)) for m in masks]
    if len(pts) == 1:
        return True
    for a, b in exactlin.polytope_edges(pts, n):
        diff = [x - y for x, y in zip(pts[a], pts[b])]
        pos = sum(1 for d in diff if d > 0)
        neg = sum(1 for d in diff if d < 0)
        if not (pos == 1 and neg == 1 and all(abs(d) <= 1 for d in diff)):
            return False
    return True


def _circuits(M: Matroid):
    """Minimal dependent sets, by subset enumeration up to size k+1.

    Desk scale (n <= 10) makes this exact and cheap; dependent means
    rank(S) < |S| with rank from the basis description.
    """
    circuits = []
    ground = list(range(1, M.n + 1))
    for size in range(1, M.k + 2):
        for S in itertools.combinations(ground, size):
            mask = subset_to_mask(S)
            if M.rank_of(mask) < size:
                if not any(c & mask == c for c in circuits):
                    circuits.append(mask)
    return circuits


def connected_components(M: Matroid):
    """Partition of [n] by the circuit relation; loops sit alone.

    Two elements are equivalent iff some circuit contains both; the
    partition is the transitive closure.  Returns (components, c(M)).
    """
    parent = list(range(M.n + 1))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(a, b):
        parent[find(a)] = find(b)

    for c in _circuits(M):
        elems = mask_to_subset(c)
        for e in elems[1:]:
            union(elems[0], e)
    comps = {}
    for e in range(1, M.n + 1):
        comps.setdefault(find(e), []).append(e)
    parts = sorted(tuple(v) for v in comps.values())
    return parts, len(parts)


def polytope_dim(M: Matroid) -> int:
    """Dimension of conv{e_B}: n minus the number of components."""
    _, c = connected_components(M)
    return M.n - c


def polytope_dim_affine(M: Matroid) -> int:
    """Independent route: exact affine rank of the basis indicators."""
    pts = [hypersimplex_vertex(M.n, mask_to_subset(b)) for b in M.bases]
    return exactlin.affine_rank(pts)


def restriction(M: Matroid, component) -> Matroid:
    """M restricted to one of its connected components."""
    comp_mask = subset_to_mask(component)
    relabel = {e: i + 1 for i, e in enumerate(component)}
    rank = M.rank_of(comp_mask)
    bases = set()
    for b in M.bases:
        inter = b & comp_mask
        if bin(inter).count("1") == rank:
            bases.add(subset_to_mask(tuple(relabel[e] for e in mask_to_subset(inter))))
    return Matroid(len(component), rank, frozenset(bases))


def is_matroid_subdivision(subdiv) -> bool:
    """Every maximal cell of the subdivision is a matroid polytope."""
    from .subdivision import Subdivision

    if not isinstance(subdiv, Subdivision):
        raise TypeError("expected a Subdivision")
    if subdiv.polytope.kind != "hypersimplex":
        raise ValueError("matroid subdivisions live on hypersimplices")
    n = subdiv.polytope.n
    return all(is_matroid(cell, n) for cell in subdiv.maximal_cells)


@lru_cache(maxsize=None)
def _matchable(edges: frozenset, a: tuple, b: tuple) -> bool:
    """Perfect matching between a and b inside the bipartite edge set."""
    if not a:
        return True
    x = a[0]
    rest = a[1:]
    for y in b:
        if (x, y) in edges and _matchable(
            edges, rest, tuple(t for t in b if t != y)
        ):
            return True
    return False


def principal_transversal_matroid(k: int, n: int, edges) -> Matroid:
    """The matroid whose bases are the sigma reachable by matchings.

    `edges` is a bipartite graph on [k] x [k+1..n]; sigma is a basis iff
    [k] minus sigma matches bijectively into sigma minus [k] along the
    graph.  These matroids label the cells of the cone construction.
    """
    eset = frozenset((i, j) for i, j in edges)
    if not eset:
        raise ValueError("empty bipartite graph")
    bases = []
    for sigma in itertools.combinations(range(1, n + 1), k):
        a = tuple(i for i in range(1, k + 1) if i not in sigma)
        b = tuple(j for j in sigma if j > k)
        if len(a) == len(b) and _matchable(eset, a, b):
            bases.append(subset_to_mask(sigma))
    if not bases:
        raise ValueError("graph admits no basis")
    return Matroid(n, k, frozenset(bases))

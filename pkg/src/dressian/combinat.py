"""Index combinatorics of the hypersimplex Delta(k,n).

Ground-set elements are 1-based, matching the usual labels 12, 13, ...
for k-subsets.  A k-subset is a sorted tuple of ints; hot paths convert
to bit masks (bit i-1 <-> element i) through the tables built here.
Vertices of Delta(k,n) are the 0/1-vectors e_sigma with exactly k ones,
so k-subsets double as vertex labels.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from math import comb

Subset = tuple[int, ...]


def check_hypersimplex(k: int, n: int) -> None:
    if not (isinstance(k, int) and isinstance(n, int) and n > k > 0):
        raise ValueError(f"hypersimplex requires n > k > 0, got k={k}, n={n}")


def enumerate_ksubsets(n: int, k: int) -> tuple[Subset, ...]:
    """All k-subsets of {1..n} in lexicographic order.

    This order fixes the coordinate labelling of R^{C(n,k)} used for
    Pluecker vectors: (2,4) -> 12, 13, 14, 23, 24, 34.
    """
    if k < 0 or n < 0 or k > n:
        raise ValueError(f"invalid subset parameters n={n}, k={k}")
    return tuple(itertools.combinations(range(1, n + 1), k))


@lru_cache(maxsize=None)
def subset_tables(n: int, k: int):
    """(subsets, rank-by-subset, masks, rank-by-mask) for lex order."""
    subsets = enumerate_ksubsets(n, k)
    rank = {s: i for i, s in enumerate(subsets)}
    masks = tuple(subset_to_mask(s) for s in subsets)
    mask_rank = {m: i for i, m in enumerate(masks)}
    return subsets, rank, masks, mask_rank


def subset_rank(n: int, k: int, subset: Subset) -> int:
    return subset_tables(n, k)[1][tuple(subset)]


def subset_unrank(n: int, k: int, r: int) -> Subset:
    return subset_tables(n, k)[0][r]


def subset_to_mask(subset) -> int:
    m = 0
    for i in subset:
        m |= 1 << (i - 1)
    return m


def mask_to_subset(mask: int) -> Subset:
    out = []
    i = 1
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return tuple(out)


def hypersimplex_vertex(n: int, subset: Subset) -> tuple[int, ...]:
    """The 0/1 point e_sigma in R^n."""
    s = set(subset)
    return tuple(1 if i in s else 0 for i in range(1, n + 1))


def hypersimplex_edges(k: int, n: int) -> list[tuple[Subset, Subset]]:
    """Unordered pairs of k-subsets whose symmetric difference has size 2.

    These are exactly the edges of Delta(k,n); any other pair of
    vertices spans a diagonal of some higher face.
    """
    check_hypersimplex(k, n)
    subsets = enumerate_ksubsets(n, k)
    edges = []
    for a, b in itertools.combinations(subsets, 2):
        if bin(subset_to_mask(a) ^ subset_to_mask(b)).count("1") == 2:
            edges.append((a, b))
    return edges


@dataclass(frozen=True, order=True)
class OctahedronId:
    """An octahedral 3-face of Delta(k,n): a (k-2)-set rho plus a 4-set.

    The six vertices are rho+{two of the quad}; opposite vertices pair up
    as (rho_ij, rho_lm), (rho_il, rho_jm), (rho_im, rho_jl) for the quad
    i<j<l<m.  Split labels 1,2,3 refer to these pairs in this order.
    """

    rho: Subset
    quad: Subset

    def vertices(self) -> tuple[Subset, ...]:
        i, j, l, m = self.quad
        pick = [(i, j), (i, l), (i, m), (j, l), (j, m), (l, m)]
        return tuple(tuple(sorted(self.rho + p)) for p in pick)

    def opposite_pairs(self) -> tuple[tuple[Subset, Subset], ...]:
        i, j, l, m = self.quad
        r = self.rho
        mk = lambda a, b: tuple(sorted(r + (a, b)))
        return (
            (mk(i, j), mk(l, m)),
            (mk(i, l), mk(j, m)),
            (mk(i, m), mk(j, l)),
        )


def enumerate_octahedra(k: int, n: int) -> tuple[OctahedronId, ...]:
    """All octahedral 3-faces, lex-sorted on (rho, quad).

    This canonical order indexes split sequences.  Count is
    C(n,k-2) * C(n-k+2,4); empty for k < 2 or n < k+2.
    """
    if k < 2 or n < k + 2:
        return ()
    out = []
    for rho in itertools.combinations(range(1, n + 1), k - 2):
        rest = [x for x in range(1, n + 1) if x not in rho]
        for quad in itertools.combinations(rest, 4):
            out.append(OctahedronId(rho, quad))
    out.sort()
    return tuple(out)


@lru_cache(maxsize=None)
def octahedron_tables(k: int, n: int):
    """(octahedra, index map, pair-rank tables).

    pair_ranks[o][t] is the pair of lex ranks of the t-th opposite
    vertex pair; used to evaluate the three pair sums of a Pluecker
    vector without re-deriving subsets.
    """
    octs = enumerate_octahedra(k, n)
    index = {o: i for i, o in enumerate(octs)}
    _, rank, _, _ = subset_tables(n, k)
    pair_ranks = tuple(
        tuple((rank[a], rank[b]) for a, b in o.opposite_pairs()) for o in octs
    )
    return octs, index, pair_ranks


# --- the Sym(n) action -------------------------------------------------


def identity_perm(n: int) -> tuple[int, ...]:
    return tuple(range(1, n + 1))


def compose_perms(p: tuple[int, ...], q: tuple[int, ...]) -> tuple[int, ...]:
    """(p o q)(i) = p(q(i))."""
    return tuple(p[q[i] - 1] for i in range(len(p)))


def invert_perm(p: tuple[int, ...]) -> tuple[int, ...]:
    inv = [0] * len(p)
    for i, pi in enumerate(p):
        inv[pi - 1] = i + 1
    return tuple(inv)


def check_perm(p: tuple[int, ...], n: int) -> None:
    if len(p) != n or sorted(p) != list(range(1, n + 1)):
        raise ValueError(f"not a permutation of [{n}]: {p}")


def apply_perm_subset(p: tuple[int, ...], subset: Subset) -> Subset:
    return tuple(sorted(p[i - 1] for i in subset))


def apply_perm_octahedron(p, oct_id: OctahedronId) -> OctahedronId:
    return OctahedronId(
        apply_perm_subset(p, oct_id.rho), apply_perm_subset(p, oct_id.quad)
    )


def octahedron_label_action(p, oct_id: OctahedronId) -> tuple[OctahedronId, tuple[int, int, int]]:
    """Image octahedron and the induced relabelling of split labels.

    Returns (image, lab) with lab[t-1] = label of the image of pair t.
    Opposite pairs map to opposite pairs since the pairing is defined by
    the partition of the quad, which is Sym(n)-equivariant.
    """
    img = apply_perm_octahedron(p, oct_id)
    img_pairs = {frozenset(pair): t + 1 for t, pair in enumerate(img.opposite_pairs())}
    lab = []
    for a, b in oct_id.opposite_pairs():
        key = frozenset((apply_perm_subset(p, a), apply_perm_subset(p, b)))
        lab.append(img_pairs[key])
    return img, tuple(lab)


@lru_cache(maxsize=None)
def perm_octahedron_tables(k: int, n: int, p: tuple[int, ...]):
    """Per-permutation gather tables for the action on split sequences.

    oct_image[i] is the index of the image of octahedron i, and
    label_map[i][t] the image of split label t there (label_map[i][0]=0).
    """
    octs, index, _ = octahedron_tables(k, n)
    oct_image = []
    label_map = []
    for o in octs:
        img, lab = octahedron_label_action(p, o)
        oct_image.append(index[img])
        label_map.append((0,) + lab)
    return tuple(oct_image), tuple(label_map)


def all_perms(n: int):
    return itertools.permutations(range(1, n + 1))


# --- facets ------------------------------------------------------------


@dataclass(frozen=True)
class FacetMap:
    """One facet of Delta(k,n), with its induced relabelling.

    kind "deletion" is the facet x_i = 0, a copy of Delta(k, n-1) on the
    ground set [n] minus i; "contraction" is x_i = 1, a Delta(k-1, n-1).
    `element_map` sends surviving elements of [n] to [n-1] order
    preservingly.  `simplex` marks degenerate facets (sub-hypersimplex
    is a simplex or a point, hence has no octahedra).
    """

    kind: str
    i: int
    sub_k: int
    sub_n: int
    element_map: tuple[tuple[int, int], ...]
    simplex: bool

    def map_element(self, x: int) -> int:
        return dict(self.element_map)[x]

    def map_subset(self, subset: Subset) -> Subset:
        """Image of a parent k-subset lying on this facet."""
        emap = dict(self.element_map)
        if self.kind == "deletion":
            if self.i in subset:
                raise ValueError(f"{subset} not on deletion facet x_{self.i}=0")
            return tuple(sorted(emap[x] for x in subset))
        if self.i not in subset:
            raise ValueError(f"{subset} not on contraction facet x_{self.i}=1")
        return tuple(sorted(emap[x] for x in subset if x != self.i))

    def octahedron_injection(self, k: int, n: int) -> tuple[tuple[int, int], ...]:
        """Pairs (facet octahedron index, parent octahedron index).

        The element relabelling is monotone, so quad order and hence the
        split labels 1/2/3 are preserved.
        """
        if self.simplex:
            return ()
        parent_octs, parent_index, _ = octahedron_tables(k, n)
        pairs = []
        inv = {b: a for a, b in self.element_map}
        sub_octs, _, _ = octahedron_tables(self.sub_k, self.sub_n)
        for fi, o in enumerate(sub_octs):
            rho = tuple(sorted(inv[x] for x in o.rho))
            if self.kind == "contraction":
                rho = tuple(sorted(rho + (self.i,)))
            quad = tuple(sorted(inv[x] for x in o.quad))
            pairs.append((fi, parent_index[OctahedronId(rho, quad)]))
        return tuple(pairs)


def facet_maps(k: int, n: int) -> list[FacetMap]:
    """The 2n facets of Delta(k,n), deletion and contraction at each i."""
    check_hypersimplex(k, n)
    out = []
    for i in range(1, n + 1):
        emap = tuple(
            (x, x if x < i else x - 1) for x in range(1, n + 1) if x != i
        )
        out.append(
            FacetMap("deletion", i, k, n - 1, emap, simplex=(n - 1 <= k + 1 or k < 2))
        )
        out.append(
            FacetMap(
                "contraction", i, k - 1, n - 1, emap, simplex=(k - 1 < 2 or n - 1 <= k)
            )
        )
    return out


# --- partitions --------------------------------------------------------


@lru_cache(maxsize=None)
def partition_count(m: int, k: int) -> int:
    """T(m,k): partitions of m into exactly k positive parts."""
    if m < 1 or k < 1:
        raise ValueError(f"partition_count needs m,k >= 1, got {m},{k}")
    if k > m:
        return 0
    if k == m or k == 1:
        return 1
    # parts all >= 1: subtract one from each part
    return sum(partition_count(m - k, i) for i in range(1, min(k, m - k) + 1))


def partitions_into(m: int, k: int) -> list[tuple[int, ...]]:
    """All partitions of m into exactly k positive parts, decreasing."""
    out = []

    def rec(remaining, parts_left, ceiling, acc):
        if parts_left == 0:
            if remaining == 0:
                out.append(tuple(acc))
            return
        lo = -(-remaining // parts_left)  # ceil: keep parts decreasing
        for part in range(min(ceiling, remaining - parts_left + 1), lo - 1, -1):
            acc.append(part)
            rec(remaining - part, parts_left - 1, part, acc)
            acc.pop()

    rec(m, k, m, [])
    return out


def binomial(n: int, k: int) -> int:
    return comb(n, k) if 0 <= k <= n else 0

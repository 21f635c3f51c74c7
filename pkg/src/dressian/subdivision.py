"""Subdivisions of hypersimplices, products of simplices, and their
tight-spans.

Subdivisions are stored combinatorially as the vertex sets of their
maximal cells (subpolytope model: no new vertices), which makes
canonical hashing and orbit reduction possible.  Geometry is recomputed
on demand from the vertex coordinates of the ambient polytope.

The tight-span of a subdivision is the poset of its interior cells
under reverse inclusion; its rank-(l+1) elements are the interior cells
of dimension m-l.  For regular inputs each maximal cell carries the
affine functional certifying it on the lower hull, and these dual
vertices realize the tight-span geometrically.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from fractions import Fraction

from . import exactlin
from .combinat import (
    apply_perm_subset,
    check_hypersimplex,
    enumerate_ksubsets,
    hypersimplex_vertex,
    subset_tables,
)


# --- ambient polytopes --------------------------------------------------


@dataclass(frozen=True)
class Polytope:
    """Vertex-labelled model of the ambient polytope of a subdivision.

    kind "hypersimplex": keys are k-subsets of [n], coordinates e_sigma.
    kind "product": Delta_{rows-1} x Delta_{cols-1}; keys are pairs
    (i,j) with 1 <= i <= rows, 1 <= j <= cols, coordinates e_i + e_j in
    R^{rows+cols}.  kind "general": explicit rational coordinates.
    """

    kind: str
    k: int = 0
    n: int = 0
    rows: int = 0
    cols: int = 0
    coords_data: tuple = ()

    @staticmethod
    def hypersimplex(k: int, n: int) -> "Polytope":
        check_hypersimplex(k, n)
        return Polytope("hypersimplex", k=k, n=n)

    @staticmethod
    def product(rows: int, cols: int) -> "Polytope":
        if rows < 1 or cols < 1:
            raise ValueError("product needs positive factors")
        return Polytope("product", rows=rows, cols=cols)

    @staticmethod
    def general(coords) -> "Polytope":
        pts = tuple(tuple(Fraction(x) for x in p) for p in coords)
        return Polytope("general", coords_data=pts)

    def keys(self) -> tuple:
        if self.kind == "hypersimplex":
            return enumerate_ksubsets(self.n, self.k)
        if self.kind == "product":
            return tuple(
                (i, j)
                for i in range(1, self.rows + 1)
                for j in range(1, self.cols + 1)
            )
        return tuple(range(len(self.coords_data)))

    def coord(self, key):
        if self.kind == "hypersimplex":
            return hypersimplex_vertex(self.n, key)
        if self.kind == "product":
            i, j = key
            return tuple(
                [1 if t == i else 0 for t in range(1, self.rows + 1)]
                + [1 if t == j else 0 for t in range(1, self.cols + 1)]
            )
        return self.coords_data[key]

    def coords(self) -> list:
        return [self.coord(key) for key in self.keys()]

    def dim(self) -> int:
        if self.kind == "hypersimplex":
            return self.n - 1
        if self.kind == "product":
            return self.rows + self.cols - 2
        return exactlin.affine_rank(self.coords_data)

    def height_lineality_dim(self) -> int:
        """Dimension of the space of affine height functions."""
        return self.dim() + 1

    def facet_vertex_sets(self) -> tuple:
        """Vertex set of each facet; used for the interior-cell test."""
        if self.kind == "hypersimplex":
            keys = self.keys()
            out = []
            for i in range(1, self.n + 1):
                out.append(frozenset(s for s in keys if i not in s))  # x_i = 0
                out.append(frozenset(s for s in keys if i in s))  # x_i = 1
            return tuple(out)
        if self.kind == "product":
            keys = self.keys()
            out = []
            if self.rows > 1:
                for i in range(1, self.rows + 1):
                    out.append(frozenset(key for key in keys if key[0] != i))
            if self.cols > 1:
                for j in range(1, self.cols + 1):
                    out.append(frozenset(key for key in keys if key[1] != j))
            return tuple(out)
        pts = list(self.coords_data)
        d = len(pts[0])
        _, inc = exactlin.polytope_vertex_facet_incidence(pts, d)
        nf = max(m.bit_length() for m in inc) if inc else 0
        return tuple(
            frozenset(v for v in range(len(pts)) if inc[v] >> f & 1)
            for f in range(nf)
        )

    def descriptor(self) -> dict:
        if self.kind == "hypersimplex":
            return {"type": "hypersimplex", "k": self.k, "n": self.n}
        if self.kind == "product":
            return {"type": "product", "rows": self.rows, "cols": self.cols}
        return {
            "type": "general",
            "coords": [[str(x) for x in p] for p in self.coords_data],
        }


# --- subdivisions -------------------------------------------------------


@dataclass(frozen=True)
class Subdivision:
    """A polytopal subdivision given by the vertex sets of its maximal
    cells; optionally carries the lower-hull certificates of a height
    function that induced it."""

    polytope: Polytope
    maximal_cells: tuple  # frozensets of vertex keys, canonically sorted
    functionals: tuple = None  # per cell: affine functional, or None

    @staticmethod
    def make(polytope, cells, functionals=None) -> "Subdivision":
        cells = [frozenset(c) for c in cells]
        order = sorted(range(len(cells)), key=lambda i: sorted(cells[i]))
        return Subdivision(
            polytope,
            tuple(cells[i] for i in order),
            tuple(functionals[i] for i in order) if functionals else None,
        )

    def spread(self) -> int:
        """Number of maximal cells."""
        return len(self.maximal_cells)

    def is_trivial(self) -> bool:
        return self.spread() == 1

    def cell_coords(self, cell):
        return [self.polytope.coord(key) for key in sorted(cell)]

    def cells_as_sets(self):
        return set(self.maximal_cells)

    def apply_perm(self, p) -> "Subdivision":
        if self.polytope.kind != "hypersimplex":
            raise ValueError("Sym(n) acts on hypersimplex subdivisions")
        cells = [
            frozenset(apply_perm_subset(p, s) for s in cell)
            for cell in self.maximal_cells
        ]
        return Subdivision.make(self.polytope, cells)

    def permute_product(self, row_perm, col_perm) -> "Subdivision":
        if self.polytope.kind != "product":
            raise ValueError("row/column action needs a product")
        cells = [
            frozenset((row_perm[i - 1], col_perm[j - 1]) for i, j in cell)
            for cell in self.maximal_cells
        ]
        return Subdivision.make(self.polytope, cells)

    # -- validation ------------------------------------------------------

    def validate(self) -> None:
        """Check the subdivision axioms exactly; raise on failure.

        Cells must be full-dimensional, pairwise intersections must be
        common faces, and every cell facet must lie on the boundary or
        be shared with exactly one other cell (so the cells tile).
        """
        P = self.polytope
        d = P.dim()
        keys = set(P.keys())
        covered = set()
        for cell in self.maximal_cells:
            if not cell <= keys:
                raise ValueError("cell uses unknown vertices")
            covered |= cell
            if exactlin.affine_rank(self.cell_coords(cell)) != d:
                raise ValueError(f"cell {sorted(cell)} is not full-dimensional")
        if covered != keys:
            raise ValueError("cells do not cover every vertex")
        for a, b in itertools.combinations(range(self.spread()), 2):
            ca, cb = self.maximal_cells[a], self.maximal_cells[b]
            common = ca & cb
            inter = exactlin.polytope_intersection(
                self.cell_coords(ca), self.cell_coords(cb), len(P.coord(next(iter(ca))))
            )
            want = {tuple(Fraction(x) for x in P.coord(key)) for key in common}
            if set(inter) != want:
                raise ValueError(
                    f"cells {sorted(ca)} and {sorted(cb)} overlap improperly"
                )
            for cell, other in ((ca, common), (cb, common)):
                if common and not _is_face_of(self, cell, other):
                    raise ValueError("intersection is not a face of both cells")
        facet_sets = P.facet_vertex_sets()
        for cell in self.maximal_cells:
            for facet in _cell_facets(self, cell):
                if any(facet <= bf for bf in facet_sets):
                    continue
                sharers = [
                    c
                    for c in self.maximal_cells
                    if c != cell and facet <= c
                ]
                if len(sharers) != 1:
                    raise ValueError(
                        f"interior wall {sorted(facet)} shared by {len(sharers) + 1} cells"
                    )

    # -- serialization ---------------------------------------------------

    def to_json(self) -> str:
        cells = []
        for cell in self.maximal_cells:
            if self.polytope.kind == "hypersimplex":
                cells.append(sorted(list(s) for s in cell))
            elif self.polytope.kind == "product":
                cells.append(sorted(list(p) for p in cell))
            else:
                cells.append(sorted(cell))
        return json.dumps({"polytope": self.polytope.descriptor(), "cells": cells})

    @staticmethod
    def from_json(text: str) -> "Subdivision":
        data = json.loads(text)
        desc = data["polytope"]
        if desc["type"] == "hypersimplex":
            P = Polytope.hypersimplex(desc["k"], desc["n"])
            cells = [frozenset(tuple(s) for s in cell) for cell in data["cells"]]
        elif desc["type"] == "product":
            P = Polytope.product(desc["rows"], desc["cols"])
            cells = [frozenset(tuple(p) for p in cell) for cell in data["cells"]]
        else:
            P = Polytope.general(
                [[Fraction(x) for x in p] for p in desc["coords"]]
            )
            cells = [frozenset(cell) for cell in data["cells"]]
        sub = Subdivision.make(P, cells)
        sub.validate()
        return sub


def _cell_facets(sub: Subdivision, cell) -> list:
    """Vertex sets of the facets of one cell, computed exactly."""
    keys = sorted(cell)
    pts = [sub.polytope.coord(key) for key in keys]
    d = len(pts[0])
    _, inc = exactlin.polytope_vertex_facet_incidence(pts, d)
    nf = max((m.bit_length() for m in inc), default=0)
    out = []
    for f in range(nf):
        out.append(frozenset(keys[v] for v in range(len(keys)) if inc[v] >> f & 1))
    return out


def _is_face_of(sub: Subdivision, cell, subset) -> bool:
    """Is conv(subset) a face of conv(cell)?  Exact supporting-functional test."""
    if subset == cell:
        return True
    keys = sorted(cell)
    pts = [sub.polytope.coord(key) for key in keys]
    d = len(pts[0])
    eqs = [tuple(p) + (1, 0) for key, p in zip(keys, pts) if key in subset]
    strict = [
        tuple(-x for x in p) + (-1, 0) for key, p in zip(keys, pts) if key not in subset
    ]
    # affine functional (a, c): a.p + c = 0 on the subset, < 0 off it
    return exactlin.relatively_open_feasible(eqs, strict, d + 1) is not None


# --- regular subdivisions ------------------------------------------------


def regular_subdivision(polytope: Polytope, heights) -> Subdivision:
    """Lower-hull subdivision of the polytope's vertices.

    `heights` is a mapping key -> value or a sequence aligned with
    polytope.keys().  The returned subdivision carries the certifying
    affine functionals.
    """
    keys = polytope.keys()
    if isinstance(heights, dict):
        hs = [Fraction(heights[key]) for key in keys]
    else:
        hs = [Fraction(h) for h in heights]
        if len(hs) != len(keys):
            raise ValueError("height vector length mismatch")
    pts = [polytope.coord(key) for key in keys]
    hull = exactlin.lower_hull(pts, hs)
    cells = [frozenset(keys[i] for i in cell) for cell in hull.cells]
    return Subdivision.make(polytope, cells, functionals=list(hull.functionals))


def heights_from_plucker(pi) -> list:
    """A Pluecker vector read as heights on Delta(k,n), in key order."""
    return list(pi.values)


# --- tight-spans ----------------------------------------------------------


@dataclass
class TightSpan:
    """Interior cells of a subdivision under reverse inclusion.

    cells[i] is the vertex set of an interior cell, dims[i] its
    dimension; rank of an element is m - dim + 1 where m = dim of the
    subdivided polytope.  `dual_vertex` maps each maximal cell to its
    lower-hull functional when the input was regular.
    """

    subdivision: Subdivision
    cells: tuple
    dims: tuple
    m: int
    dual_vertex: dict = field(default_factory=dict)

    def rank(self, i: int) -> int:
        return self.m - self.dims[i] + 1

    def dimension(self) -> int:
        """Dimension of the tight-span as a complex."""
        return max((self.rank(i) for i in range(len(self.cells))), default=0) - 1

    def elements_of_rank(self, r: int) -> list:
        return [i for i in range(len(self.cells)) if self.rank(i) == r]

    def leq(self, i: int, j: int) -> bool:
        """Reverse inclusion: i <= j iff cell_i contains cell_j."""
        return self.cells[i] >= self.cells[j]

    def vertices(self) -> list:
        """Indices of rank-1 elements (the maximal cells)."""
        return self.elements_of_rank(1)

    def edges(self) -> list:
        """Indices of rank-2 elements (interior walls)."""
        return self.elements_of_rank(2)

    def two_cells(self) -> list:
        return self.elements_of_rank(3)

    def cells_above(self, i: int, r: int) -> list:
        """Rank-r elements j with j <= i, i.e. cell_j containing cell_i."""
        return [j for j in self.elements_of_rank(r) if self.cells[j] >= self.cells[i]]

    def boundary_edges_of(self, i: int) -> list:
        """Walls containing a given 2-cell element."""
        return self.cells_above(i, 2)

    def edge_endpoints(self, e: int) -> tuple:
        """The two maximal cells adjacent across an interior wall."""
        tops = self.cells_above(e, 1)
        if len(tops) != 2:
            raise ValueError("interior wall not shared by exactly two cells")
        return tuple(tops)

    def realized(self) -> bool:
        return bool(self.dual_vertex)

    def dual_point(self, vertex_element: int):
        return self.dual_vertex[self.cells[vertex_element]]

    def f_vector(self) -> tuple:
        top = self.dimension()
        return tuple(len(self.elements_of_rank(r + 1)) for r in range(top + 1))


def _interior_cells(sub: Subdivision):
    """All interior cells: intersection closure of the maximal cells,
    filtered by the facet-containment test."""
    facets = sub.polytope.facet_vertex_sets()
    cells = set(sub.maximal_cells)
    frontier = set(sub.maximal_cells)
    while frontier:
        new = set()
        for a in frontier:
            for b in sub.maximal_cells:
                c = a & b
                if c and c not in cells and c not in new:
                    new.add(c)
        cells |= new
        frontier = new
    interior = [c for c in cells if not any(c <= f for f in facets)]
    return interior


def tight_span(sub: Subdivision) -> TightSpan:
    cells = _interior_cells(sub)
    dims = [exactlin.affine_rank(sub.cell_coords(c)) for c in cells]
    order = sorted(range(len(cells)), key=lambda i: (-dims[i], sorted(cells[i])))
    cells = [cells[i] for i in order]
    dims = [dims[i] for i in order]
    dual = {}
    if sub.functionals is not None:
        for cell, f in zip(sub.maximal_cells, sub.functionals):
            dual[cell] = f
    return TightSpan(
        subdivision=sub,
        cells=tuple(cells),
        dims=tuple(dims),
        m=sub.polytope.dim(),
        dual_vertex=dual,
    )


def posets_isomorphic(ts1: TightSpan, ts2: TightSpan) -> bool:
    """Graded-poset isomorphism of two tight-spans, by backtracking.

    Elements may only map within their rank; up/down degree profiles
    prune the search.  Sizes here are tiny (tight-spans of desk-scale
    subdivisions), so this is exact and fast.
    """
    n1, n2 = len(ts1.cells), len(ts2.cells)
    if n1 != n2 or ts1.dimension() != ts2.dimension():
        return False

    def profile(ts, i):
        up = sum(
            1 for j in range(len(ts.cells)) if j != i and ts.leq(i, j)
        )
        down = sum(
            1 for j in range(len(ts.cells)) if j != i and ts.leq(j, i)
        )
        return (ts.rank(i), up, down)

    p1 = [profile(ts1, i) for i in range(n1)]
    p2 = [profile(ts2, i) for i in range(n2)]
    if sorted(p1) != sorted(p2):
        return False
    candidates = [
        [j for j in range(n2) if p2[j] == p1[i]] for i in range(n1)
    ]
    order = sorted(range(n1), key=lambda i: len(candidates[i]))
    assigned = [None] * n1
    used = set()

    def rec(t):
        if t == n1:
            return True
        i = order[t]
        for j in candidates[i]:
            if j in used:
                continue
            ok = True
            for t2 in range(t):
                i2 = order[t2]
                j2 = assigned[i2]
                if ts1.leq(i, i2) != ts2.leq(j, j2) or ts1.leq(i2, i) != ts2.leq(
                    j2, j
                ):
                    ok = False
                    break
            if ok:
                assigned[i] = j
                used.add(j)
                if rec(t + 1):
                    return True
                used.remove(j)
                assigned[i] = None
        return False

    return rec(0)


# --- restriction to a subpolytope ----------------------------------------


def restrict_to_subpolytope(sub: Subdivision, sub_vertices) -> Subdivision:
    """The induced complex on conv(sub_vertices); new vertices allowed.

    `sub_vertices` is a list of vertex keys of the ambient polytope or
    explicit coordinate tuples.  Returns a subdivision over a "general"
    polytope whose vertex list collects every intersection vertex.
    """
    P = sub.polytope
    amb = len(P.coord(next(iter(sub.maximal_cells[0]))))
    if sub_vertices and not isinstance(sub_vertices[0], tuple):
        raise ValueError("sub_vertices must be keys or coordinate tuples")
    key_set = set(P.keys())
    coords = [
        tuple(Fraction(x) for x in (P.coord(v) if v in key_set else v))
        for v in sub_vertices
    ]
    pieces = []
    target_dim = exactlin.affine_rank(coords)
    for cell in sub.maximal_cells:
        inter = exactlin.polytope_intersection(sub.cell_coords(cell), coords, amb)
        if inter and exactlin.affine_rank(inter) == target_dim:
            pieces.append(set(inter))
    vertex_list = sorted(set().union(*pieces)) if pieces else []
    index = {v: i for i, v in enumerate(vertex_list)}
    cells = [frozenset(index[v] for v in piece) for piece in pieces]
    keep = [
        c for c in cells if not any(c < other for other in cells)
    ]
    return Subdivision.make(Polytope.general(vertex_list), keep)


# --- vertex figures and the cone construction -----------------------------


def _vertex_relabel(k, n, sigma):
    from .tropical_core import _relabel_perm_for_vertex

    return _relabel_perm_for_vertex(k, n, sigma)


def vertex_figure(sub: Subdivision, sigma) -> Subdivision:
    """Intersection with the neighbor hyperplane of e_sigma, pulled back
    to Delta_{k-1} x Delta_{n-k-1}.

    Requires a matroid subdivision (its edges meet the hyperplane in
    vertices, so no new vertices appear).  The neighbor ([k']\\{i}) u {j}
    of the relabelled vertex corresponds to the product vertex (i, j-k).
    """
    from .matroid import is_matroid

    P = sub.polytope
    if P.kind != "hypersimplex":
        raise ValueError("vertex figures are taken on hypersimplices")
    k, n = P.k, P.n
    for cell in sub.maximal_cells:
        if not is_matroid(cell, n):
            raise ValueError("vertex figure requires a matroid subdivision")
    q = _vertex_relabel(k, n, sigma)
    sigma = tuple(sorted(sigma))
    pieces = []
    for cell in sub.maximal_cells:
        piece = set()
        for s in cell:
            if len(set(s) & set(sigma)) == k - 1:
                image = apply_perm_subset(q, s)
                (j,) = [x for x in image if x > k]
                (i,) = [x for x in range(1, k + 1) if x not in image]
                piece.add((i, j - k))
        if piece:
            pieces.append(frozenset(piece))
    target = Polytope.product(k, n - k)
    d = target.dim()
    coords = {key: target.coord(key) for key in target.keys()}
    full = [
        p
        for p in pieces
        if exactlin.affine_rank([coords[key] for key in p]) == d
    ]
    keep = [c for c in full if not any(c < other for other in full)]
    return Subdivision.make(target, keep)


def cone_construction(gamma: Subdivision) -> Subdivision:
    """The unique subdivision of Delta(k,n) inducing gamma on the vertex
    figure of e_{[k]}, with every maximal cell containing e_{[k]}.

    Cells are computed combinatorially: a maximal cell of gamma with
    vertex pairs (i,j) is the bipartite graph {(i, j+k)}, and the
    corresponding cell of the output is its principal transversal
    matroid.
    """
    from .matroid import principal_transversal_matroid

    P = gamma.polytope
    if P.kind != "product":
        raise ValueError("cone construction starts from a product subdivision")
    k, n = P.rows, P.rows + P.cols
    cells = []
    for piece in gamma.maximal_cells:
        edges = [(i, j + k) for i, j in piece]
        M = principal_transversal_matroid(k, n, edges)
        cells.append(frozenset(M.basis_subsets()))
    uniq = []
    for c in cells:
        if c not in uniq:
            uniq.append(c)
    if len(uniq) != len(cells):
        raise AssertionError("cone construction produced duplicate cells")
    return Subdivision.make(Polytope.hypersimplex(k, n), cells)


# --- refinement, coarsest tests, secondary cones ---------------------------


def refines(sub1: Subdivision, sub2: Subdivision) -> bool:
    """Every maximal cell of sub1 lies in a maximal cell of sub2.

    For subpolytope-model cells, conv(A) <= conv(B) iff A <= B.
    """
    if sub1.polytope != sub2.polytope:
        raise ValueError("subdivisions of different polytopes")
    return all(
        any(a <= b for b in sub2.maximal_cells) for a in sub1.maximal_cells
    )


def secondary_cone(sub: Subdivision) -> exactlin.PolyhedralCone:
    """The cone of height functions inducing (a coarsening of) sub.

    Equalities: the lift of each maximal cell is affinely flat.
    Inequalities: one folding inequality per interior wall, lifting a
    vertex of the opposite cell strictly above the wall's affine span.
    Relative-interior points are exactly the heights inducing sub.
    """
    P = sub.polytope
    keys = P.keys()
    index = {key: i for i, key in enumerate(keys)}
    pts = {key: P.coord(key) for key in keys}
    m = len(keys)
    equalities = []
    bases = {}
    for cell in sub.maximal_cells:
        ckeys = sorted(cell)
        coords = [pts[key] for key in ckeys]
        basis_pos = exactlin.affine_basis(coords)
        basis_keys = [ckeys[i] for i in basis_pos]
        bases[cell] = basis_keys
        basis_coords = [coords[i] for i in basis_pos]
        for pos, key in enumerate(ckeys):
            if pos in basis_pos:
                continue
            lam = exactlin.affine_coefficients(basis_coords, coords[pos])
            form = [Fraction(0)] * m
            form[index[key]] = Fraction(1)
            for coef, bkey in zip(lam, basis_keys):
                form[index[bkey]] -= coef
            equalities.append(exactlin.clear_denominators(form))
    inequalities = []
    d = P.dim()
    cells = sub.maximal_cells
    for a, b in itertools.combinations(range(len(cells)), 2):
        wall = cells[a] & cells[b]
        if not wall:
            continue
        if exactlin.affine_rank([pts[key] for key in wall]) != d - 1:
            continue
        basis_keys = bases[cells[a]]
        basis_coords = [pts[key] for key in basis_keys]
        w = min(cells[b] - wall)
        lam = exactlin.affine_coefficients(basis_coords, pts[w])
        form = [Fraction(0)] * m
        form[index[w]] = Fraction(1)
        for coef, bkey in zip(lam, basis_keys):
            form[index[bkey]] -= coef
        inequalities.append(exactlin.clear_denominators(form))
    return exactlin.PolyhedralCone(m, tuple(equalities), tuple(inequalities))


def secondary_cone_dim_with_witness(sub: Subdivision, heights) -> int:
    """dim of the secondary cone, using the witness heights to certify
    that no folding inequality is implicit (ambient - rank of flats)."""
    P = sub.polytope
    keys = P.keys()
    if isinstance(heights, dict):
        hs = [Fraction(heights[key]) for key in keys]
    else:
        hs = [Fraction(h) for h in heights]
    cone = secondary_cone(sub)
    for form in cone.inequalities:
        if exactlin.dot(form, hs) <= 0:
            raise ValueError("witness heights do not induce this subdivision")
    for form in cone.equalities:
        if exactlin.dot(form, hs) != 0:
            raise ValueError("witness heights do not induce this subdivision")
    return cone.dim - exactlin.matrix_rank(cone.equalities, cone.dim)


def is_coarsest(sub: Subdivision, heights) -> bool:
    """A regular subdivision is coarsest iff its secondary cone is a ray
    modulo the lineality of affine heights."""
    if sub.is_trivial():
        return False
    check = regular_subdivision(sub.polytope, heights)
    if check.cells_as_sets() != sub.cells_as_sets():
        raise ValueError("heights do not induce the given subdivision")
    lin = sub.polytope.height_lineality_dim()
    return secondary_cone_dim_with_witness(sub, heights) == lin + 1


# --- 2-cell classification and collapsing ---------------------------------


SHAPES = ("triangle", "parallelogram", "trapezoid", "pentagon", "hexagon")


def _primitive_direction(u, v):
    return exactlin.canonicalize_ray(tuple(a - b for a, b in zip(u, v)))


def _polygon_of(ts: TightSpan, two_cell: int):
    """(vertex elements, boundary edge elements) of a tight-span 2-cell,
    with the edges returned as pairs of vertex elements."""
    verts = ts.cells_above(two_cell, 1)
    walls = ts.boundary_edges_of(two_cell)
    edges = [ts.edge_endpoints(e) for e in walls]
    return verts, walls, edges


def classify_2cell(ts: TightSpan, two_cell: int) -> str:
    """Shape of one 2-dimensional tight-span cell, from its realization."""
    if not ts.realized():
        raise ValueError("classification needs a geometric realization")
    verts, walls, edges = _polygon_of(ts, two_cell)
    nv = len(verts)
    if nv != len(edges):
        raise ValueError("2-cell boundary is not a closed polygon")
    if nv > 6:
        raise ValueError(f"2-cell with {nv} sides exceeds the hexagon bound")
    if nv == 3:
        return "triangle"
    if nv == 5:
        return "pentagon"
    if nv == 6:
        return "hexagon"
    if nv != 4:
        raise ValueError(f"degenerate 2-cell with {nv} vertices")
    pos = {v: ts.dual_point(v) for v in verts}
    dirs = {}
    for a, b in edges:
        dirs[(a, b)] = _primitive_direction(pos[a], pos[b])
    parallel_pairs = 0
    edge_list = list(edges)
    for (e1, e2) in itertools.combinations(edge_list, 2):
        if not set(e1) & set(e2):  # opposite edges share no vertex
            if dirs[e1] == dirs[e2]:
                parallel_pairs += 1
    if parallel_pairs == 2:
        return "parallelogram"
    if parallel_pairs == 1:
        return "trapezoid"
    raise ValueError("quadrilateral cell with no parallel opposite edges")


def classify_2cells(ts: TightSpan) -> dict:
    """Multiset of 2-cell shapes of a realized tight-span."""
    out: dict[str, int] = {}
    for c in ts.two_cells():
        shape = classify_2cell(ts, c)
        out[shape] = out.get(shape, 0) + 1
    return out


def opposite_edge_map(ts: TightSpan) -> dict:
    """For each parallelogram 2-cell, the pairing of opposite walls."""
    pairs = {}
    for c in ts.two_cells():
        if classify_2cell(ts, c) != "parallelogram":
            continue
        verts, walls, edges = _polygon_of(ts, c)
        pos = {v: ts.dual_point(v) for v in verts}
        for (w1, e1), (w2, e2) in itertools.combinations(zip(walls, edges), 2):
            if set(e1) & set(e2):
                continue
            if _primitive_direction(pos[e1[0]], pos[e1[1]]) == _primitive_direction(
                pos[e2[0]], pos[e2[1]]
            ):
                pairs.setdefault(c, []).append((w1, w2))
    return pairs


def collapse_closure(ts: TightSpan, seed_edges) -> frozenset:
    """Smallest superset of the seed walls closed under the rules:
    a triangle with one collapsed edge collapses entirely, and a
    parallelogram with one collapsed edge collapses the opposite edge.
    """
    tri_groups = []
    par_pairs = []
    for c in ts.two_cells():
        shape = classify_2cell(ts, c)
        if shape == "triangle":
            tri_groups.append(tuple(ts.boundary_edges_of(c)))
    for c, pairs in opposite_edge_map(ts).items():
        par_pairs.extend(pairs)
    collapsed = set(seed_edges)
    changed = True
    while changed:
        changed = False
        for group in tri_groups:
            hits = [e for e in group if e in collapsed]
            if hits and len(hits) < len(group):
                collapsed.update(group)
                changed = True
        for w1, w2 in par_pairs:
            if w1 in collapsed and w2 not in collapsed:
                collapsed.add(w2)
                changed = True
            if w2 in collapsed and w1 not in collapsed:
                collapsed.add(w1)
                changed = True
    return frozenset(collapsed)


def collapse_certifies_coarsest(ts: TightSpan) -> bool:
    """Sufficient condition: every single collapsed edge forces all
    edges to collapse (so no nontrivial coarsening exists).  Not
    necessary; the LP-based is_coarsest is the ground truth.
    """
    edges = ts.edges()
    if not edges:
        return False
    all_edges = frozenset(edges)
    return all(collapse_closure(ts, [e]) == all_edges for e in edges)

"""Tropical complexes, configuration equivalence, secondary cones of
products of simplices, rigidity, and enumeration of coarsest regular
subdivisions of Delta_{a} x Delta_{b} at desk scale.

A k x (n-k) matrix V is read as n-k labeled points in T^{k-1} (columns,
modulo the all-ones direction).  V lifts the product vertex (i,j) to
v_ij; the regular subdivision Gamma(V) this induces is dual to the type
decomposition of T^{k-1}, whose bounded cells form the tropical complex
tconv(V).  V is "tropically rigid" iff Gamma(V) is a coarsest
nontrivial subdivision, i.e. its secondary cone is a ray.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from fractions import Fraction

from . import exactlin
from .subdivision import (
    Polytope,
    Subdivision,
    TightSpan,
    regular_subdivision,
    secondary_cone,
    secondary_cone_dim_with_witness,
    tight_span,
)
from .tropical_core import PointConfig


# --- types and tropical complexes -----------------------------------------


def type_of(x, config: PointConfig) -> tuple:
    """Type of a point x in T^{k-1} w.r.t. the configuration.

    S_i = { j : v_ij - x_i = min_l (v_lj - x_l) }, min convention.
    """
    k = config.k
    x = [Fraction(t) for t in x]
    if len(x) != k:
        raise ValueError("point has wrong dimension")
    S = []
    cols = range(1, config.n - k + 1)
    for i in range(1, k + 1):
        good = []
        for j in cols:
            vals = [config.matrix[l - 1][j - 1] - x[l - 1] for l in range(1, k + 1)]
            if config.matrix[i - 1][j - 1] - x[i - 1] == min(vals):
                good.append(j)
        S.append(frozenset(good))
    return tuple(S)


def product_heights(config: PointConfig) -> dict:
    """V as a height function on Delta_{k-1} x Delta_{n-k-1}."""
    return {
        (i, j): config.matrix[i - 1][j - 1]
        for i in range(1, config.k + 1)
        for j in range(1, config.n - config.k + 1)
    }


def product_subdivision(config: PointConfig) -> Subdivision:
    """Gamma(V): the regular subdivision of the product induced by V."""
    P = Polytope.product(config.k, config.n - config.k)
    return regular_subdivision(P, product_heights(config))


def _normalize_torus(x):
    """Representative with first coordinate zero (mod the all-ones line)."""
    return tuple(Fraction(t) - Fraction(x[0]) for t in x)


@dataclass
class TropicalComplex:
    """Bounded cells of the type decomposition, dual to Gamma(V).

    cells[i] = (type vector, tuple of pseudo-vertex coordinates spanning
    the cell); pseudo_vertices lists the 0-cell coordinates, one per
    maximal cell of Gamma(V).
    """

    config: PointConfig
    gamma: Subdivision
    span: TightSpan
    cells: tuple
    pseudo_vertices: tuple


def tropical_complex(config: PointConfig) -> TropicalComplex:
    """Cells of tconv(V) from the tight-span of Gamma(V).

    The dual vertex of each maximal cell is the lower-hull functional;
    its row part is the pseudo-vertex, and type_of independently
    certifies the duality (cell graph == type at the pseudo-vertex).
    """
    gamma = product_subdivision(config)
    ts = tight_span(gamma)
    k = config.k
    pseudo = {}
    for cell in gamma.maximal_cells:
        a = ts.dual_vertex[cell]
        x = _normalize_torus(a[:k])
        S = type_of(x, config)
        graph = tuple(
            frozenset(j for i2, j in cell if i2 == i) for i in range(1, k + 1)
        )
        if S != graph:
            raise AssertionError("pseudo-vertex type disagrees with dual cell")
        pseudo[cell] = x
    cells = []
    for idx in range(len(ts.cells)):
        cell = ts.cells[idx]
        S = tuple(
            frozenset(j for i2, j in cell if i2 == i) for i in range(1, k + 1)
        )
        if any(not s for s in S):
            raise AssertionError("bounded cell with an empty type entry")
        corners = tuple(
            pseudo[ts.cells[v]] for v in ts.cells_above(idx, 1)
        )
        cells.append((S, corners))
    return TropicalComplex(
        config=config,
        gamma=gamma,
        span=ts,
        cells=tuple(cells),
        pseudo_vertices=tuple(pseudo[c] for c in gamma.maximal_cells),
    )


# --- configuration equivalence ---------------------------------------------


def _double_center(rows):
    """Zero out row 1 by column moves, then column 1 by row moves."""
    k = len(rows)
    m = len(rows[0])
    out = [[rows[i][j] - rows[0][j] for j in range(m)] for i in range(k)]
    return tuple(
        tuple(out[i][j] - out[i][0] for j in range(m)) for i in range(k)
    )


def canonical_form(config: PointConfig) -> PointConfig:
    """Canonical representative under row/column permutations and
    row/column translations (the four equivalence moves).

    Double-center, then take the lexicographic minimum over all row and
    column permutation pairs with re-normalization.  Idempotent, and
    two configurations are equivalent iff their forms coincide.
    """
    rows = [list(r) for r in config.matrix]
    k, m = len(rows), len(rows[0])
    best = None
    for rp in itertools.permutations(range(k)):
        permuted_rows = [rows[i] for i in rp]
        for cp in itertools.permutations(range(m)):
            cand = _double_center(
                [[permuted_rows[i][j] for j in cp] for i in range(k)]
            )
            if best is None or cand < best:
                best = cand
    return PointConfig(config.k, config.n, best)


def equivalent(a: PointConfig, b: PointConfig) -> bool:
    return canonical_form(a) == canonical_form(b)


def multiplicity_profile(config: PointConfig) -> tuple:
    """Sorted multiplicities of the points (columns modulo ones)."""
    cols = [_normalize_torus(config.column(j)) for j in range(config.n - config.k)]
    counts = {}
    for c in cols:
        counts[c] = counts.get(c, 0) + 1
    return tuple(sorted(counts.values(), reverse=True))


def has_multiple_points(config: PointConfig) -> bool:
    return any(m > 1 for m in multiplicity_profile(config))


# --- secondary cones and rigidity ------------------------------------------


@dataclass(frozen=True)
class SecondaryCone:
    """Secondary cone of a product subdivision, with its lineality."""

    cone: exactlin.PolyhedralCone
    lineality_dim: int

    def dim(self) -> int:
        return exactlin.cone_dim(self.cone)


def secondary_cone_of(gamma: Subdivision) -> SecondaryCone:
    if gamma.polytope.kind != "product":
        raise ValueError("expected a subdivision of a product of simplices")
    return SecondaryCone(
        cone=secondary_cone(gamma),
        lineality_dim=gamma.polytope.height_lineality_dim(),
    )


def is_tropically_rigid(config: PointConfig) -> bool:
    """Rigid iff Gamma(V) is nontrivial with secondary cone a ray."""
    gamma = product_subdivision(config)
    if gamma.is_trivial():
        return False
    heights = [product_heights(config)[key] for key in gamma.polytope.keys()]
    dim = secondary_cone_dim_with_witness(gamma, heights)
    return dim == gamma.polytope.height_lineality_dim() + 1


def is_generic(config: PointConfig) -> bool:
    """Generic iff V induces a triangulation of the product."""
    gamma = product_subdivision(config)
    d = gamma.polytope.dim()
    return all(len(cell) == d + 1 for cell in gamma.maximal_cells)


def duplicate_point(config: PointConfig, i: int) -> PointConfig:
    """Append a copy of column i (1-based); preserves rigidity."""
    if not 1 <= i <= config.n - config.k:
        raise ValueError(f"no column {i} in a {config.k} x {config.n - config.k} matrix")
    rows = tuple(
        tuple(row) + (row[i - 1],) for row in config.matrix
    )
    return PointConfig(config.k, config.n + 1, rows)


def staircase_config(k: int) -> PointConfig:
    """The k-point configuration whose tropical complex is a simplex:
    column j has ones below the diagonal (a j-1/k-j split point)."""
    rows = tuple(
        tuple(Fraction(1 if i > j else 0) for j in range(1, k + 1))
        for i in range(1, k + 1)
    )
    return PointConfig(k, 2 * k, rows)


def rigid_partition_family(k: int, n: int) -> list:
    """One rigid configuration per partition of n-k into k parts.

    Duplicates the columns of the staircase configuration with the
    partition's multiplicities; all results are tropically rigid and
    pairwise inequivalent.
    """
    from .combinat import partitions_into

    if n < 2 * k:
        raise ValueError("need n >= 2k")
    base = staircase_config(k)
    out = []
    for part in partitions_into(n - k, k):
        rows = tuple(
            tuple(
                itertools.chain.from_iterable(
                    [base.matrix[i][j]] * part[j] for j in range(k)
                )
            )
            for i in range(k)
        )
        out.append(PointConfig(k, n, rows))
    return out


# --- enumeration of coarsest product subdivisions ---------------------------


def _product_group_keymaps(rows: int, cols: int):
    """Per (row perm, col perm): vertex-index permutation array."""
    keys = [(i, j) for i in range(1, rows + 1) for j in range(1, cols + 1)]
    index = {key: t for t, key in enumerate(keys)}
    maps = []
    for rp in itertools.permutations(range(1, rows + 1)):
        for cp in itertools.permutations(range(1, cols + 1)):
            maps.append(
                tuple(index[(rp[i - 1], cp[j - 1])] for i, j in keys)
            )
    return keys, maps


def _cells_to_masks(cells, index):
    return tuple(
        sorted(sum(1 << index[key] for key in cell) for cell in cells)
    )


def _remap_mask(mask: int, keymap) -> int:
    out = 0
    while mask:
        low = mask & -mask
        out |= 1 << keymap[low.bit_length() - 1]
        mask ^= low
    return out


def _canonical_cells_key(masks, keymaps) -> tuple:
    best = None
    for km in keymaps:
        cand = sorted(_remap_mask(m, km) for m in masks)
        if best is None or cand < best:
            best = cand
    return tuple(best)


def _initial_triangulation(P: Polytope, seed: int = 11) -> Subdivision:
    """A regular triangulation from pseudo-random generic heights."""
    d = P.dim()
    keys = P.keys()
    rng = random.Random(seed)
    for _ in range(50):
        heights = {key: Fraction(rng.randint(0, 10 ** 6)) for key in keys}
        sub = regular_subdivision(P, heights)
        if all(len(cell) == d + 1 for cell in sub.maximal_cells):
            return sub
        rng.seed(rng.random())
    raise RuntimeError("could not find generic heights")  # pragma: no cover


def _retriangulate_across_wall(tri: Subdivision, wall_sub: Subdivision):
    """The triangulation on the other side of a secondary-cone facet.

    The facet's subdivision has corank-1 cells; each carries a unique
    affine circuit (Z+, Z-), whose two triangulations are
    {Z - z : z in Z+} and {Z - z : z in Z-}.  Swap sides in every
    non-simplicial cell.
    """
    P = tri.polytope
    d = P.dim()
    new_cells = []
    for Z in wall_sub.maximal_cells:
        if len(Z) == d + 1:
            new_cells.append(Z)
            continue
        zkeys = sorted(Z)
        if len(zkeys) != d + 2:
            return None  # not a corank-1 wall; caller falls back
        rows = [tuple(P.coord(key)) + (1,) for key in zkeys]
        dep = exactlin.nullspace_int(
            [tuple(r[t] for r in rows) for t in range(len(rows[0]))],
            len(zkeys),
        )
        if len(dep) != 1:
            return None
        lam = dep[0]
        plus = [zkeys[t] for t in range(len(zkeys)) if lam[t] > 0]
        minus = [zkeys[t] for t in range(len(zkeys)) if lam[t] < 0]
        fam_plus = [frozenset(Z) - {z} for z in plus]
        fam_minus = [frozenset(Z) - {z} for z in minus]
        inside = [c for c in tri.maximal_cells if c <= Z]
        if set(inside) == set(fam_plus):
            new_cells.extend(fam_minus)
        elif set(inside) == set(fam_minus):
            new_cells.extend(fam_plus)
        else:
            return None
    return Subdivision.make(P, new_cells)


def _triangulation_neighbors(tri: Subdivision):
    """Adjacent regular triangulations plus the harvested extreme rays."""
    P = tri.polytope
    cone = secondary_cone(tri)
    geo = cone.geometry()
    pointed_dim = geo.dim - len(geo.lineality)
    rays = list(geo.rays)
    neighbors = []
    nineq = len(cone.inequalities)
    for i in range(nineq):
        tight = [r for r, mask in zip(geo.rays, geo.tight_masks) if mask >> i & 1]
        if not tight:
            continue
        if exactlin.matrix_rank(tight, cone.dim) != pointed_dim - 1:
            continue  # redundant wall inequality, not a facet
        h_f = [sum(col) for col in zip(*tight)]
        wall_sub = regular_subdivision(P, h_f)
        nb = _retriangulate_across_wall(tri, wall_sub)
        if nb is None:
            nb = _cross_wall_numeric(tri, wall_sub, h_f)
        if nb is not None and nb.cells_as_sets() != tri.cells_as_sets():
            neighbors.append(nb)
    return neighbors, rays


def _cross_wall_numeric(tri: Subdivision, wall_sub: Subdivision, h_f):
    """Fallback flip: step across the wall by an exact epsilon search."""
    P = tri.polytope
    keys = P.keys()
    interior = [
        sum(Fraction(h) for h in col) for col in zip(*[h_f])
    ]
    inward = [Fraction(x) for x in h_f]
    # direction from the cone's interior towards (and past) the wall
    cgeo = secondary_cone(tri).geometry()
    centre = [Fraction(x) for x in cgeo.interior]
    direction = [w - c for w, c in zip(inward, centre)]
    eps = Fraction(1, 2)
    d = P.dim()
    for _ in range(60):
        h_try = [w + eps * t for w, t in zip(inward, direction)]
        cand = regular_subdivision(P, h_try)
        if (
            all(len(cell) == d + 1 for cell in cand.maximal_cells)
            and cand.cells_as_sets() != tri.cells_as_sets()
            and all(
                any(c <= z for z in wall_sub.maximal_cells)
                for c in cand.maximal_cells
            )
        ):
            return cand
        eps /= 2
    return None


def enumerate_coarsest_product_subdivisions(a: int, b: int, *, max_size: int = 8):
    """Canonical rigid configurations for Delta_a x Delta_b.

    Walks the flip graph of regular triangulations modulo the
    Sym(rows) x Sym(cols) symmetry, harvests every extreme ray of every
    secondary cone (each ray of the secondary fan is a facet ray of
    some triangulation cone; flip connectivity gives completeness),
    induces each ray's subdivision, and groups by equivalence.  Returns
    one canonical PointConfig per class of coarsest subdivisions.
    """
    rows, cols = a + 1, b + 1
    if rows * cols > 3 * max_size or a * b > max_size:
        raise ValueError("instance exceeds the desk-scale guard")
    P = Polytope.product(rows, cols)
    keys, keymaps = _product_group_keymaps(rows, cols)
    index = {key: t for t, key in enumerate(keys)}

    start = _initial_triangulation(P)
    seen = {
        _canonical_cells_key(_cells_to_masks(start.maximal_cells, index), keymaps)
    }
    queue = [start]
    ray_keys = {}
    while queue:
        tri = queue.pop()
        neighbors, rays = _triangulation_neighbors(tri)
        for r in rays:
            sub = regular_subdivision(P, list(r))
            key = _canonical_cells_key(
                _cells_to_masks(sub.maximal_cells, index), keymaps
            )
            if key not in ray_keys:
                ray_keys[key] = (r, sub)
        for nb in neighbors:
            key = _canonical_cells_key(
                _cells_to_masks(nb.maximal_cells, index), keymaps
            )
            if key not in seen:
                seen.add(key)
                queue.append(nb)

    configs = []
    for key in sorted(ray_keys):
        r, sub = ray_keys[key]
        matrix = tuple(
            tuple(Fraction(r[index[(i, j)]]) for j in range(1, cols + 1))
            for i in range(1, rows + 1)
        )
        cfg = canonical_form(PointConfig(rows, rows + cols, matrix))
        if not is_tropically_rigid(cfg):
            raise AssertionError("harvested ray is not rigid")
        configs.append(cfg)
    return configs, len(seen)

"""Exact rational linear algebra and polyhedral computation.

Everything is over Q: vectors are tuples of Python ints (forms are
cleared of denominators and gcd-reduced) and points are tuples of
Fractions.  No floating point anywhere; cone dimensions and hull cells
are decided by exact rank computations, an exact simplex LP (Bland's
rule), and the double description method after a lineality quotient.

Conventions: a *form* of length d is a linear functional on R^d; an
*affine form* of length d+1 is (a_1..a_d, b) meaning a.x + b.  Cones are
{x : E x = 0, G x >= 0}; polyhedra are {x : E(x) = 0, G(x) >= 0} with
affine forms.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import gcd


# --- integer vector helpers ---------------------------------------------


def gcd_reduce(vec) -> tuple[int, ...]:
    """Divide an integer vector by the gcd of its entries (0 stays 0)."""
    g = 0
    for x in vec:
        g = gcd(g, x)
        if g == 1:
            return tuple(vec)
    if g <= 1:
        return tuple(vec)
    return tuple(x // g for x in vec)


def clear_denominators(vec) -> tuple[int, ...]:
    """Scale a rational vector to a primitive integer vector."""
    if all(type(x) is int for x in vec):
        return gcd_reduce(vec)
    fracs = [Fraction(x) for x in vec]
    lcm = 1
    for f in fracs:
        d = f.denominator
        lcm = lcm * d // gcd(lcm, d)
    return gcd_reduce(tuple(int(f * lcm) for f in fracs))


def dot(a, b):
    return sum(x * y for x, y in zip(a, b))


def eval_affine(form, point):
    """Value of an affine form (a_1..a_d, b) at a point of length d."""
    return sum(c * x for c, x in zip(form, point)) + form[-1]


def is_zero(vec) -> bool:
    return all(x == 0 for x in vec)


def negate(vec):
    return tuple(-x for x in vec)


# --- row spaces, rank, nullspaces ---------------------------------------


class RowSpan:
    """Incremental integer row space with rollback, forward-reduced only.

    Rows are reduced against earlier pivots when added but existing rows
    are never touched, so `rollback(mark)` simply truncates.  Suitable
    for backtracking searches that push and pop equality constraints.
    """

    def __init__(self, dim: int):
        self.dim = dim
        self.rows: list[tuple[int, ...]] = []
        self.pivots: list[int] = []

    @property
    def rank(self) -> int:
        return len(self.rows)

    def residual(self, vec) -> tuple[int, ...]:
        """vec reduced modulo the current row space (gcd-reduced)."""
        v = list(vec)
        for row, p in zip(self.rows, self.pivots):
            vp = v[p]
            if vp:
                rp = row[p]
                for i in range(self.dim):
                    v[i] = v[i] * rp - row[i] * vp
        return gcd_reduce(v)

    def contains(self, vec) -> bool:
        return is_zero(self.residual(vec))

    def add(self, vec) -> bool:
        """Add a vector; True iff the rank grew."""
        r = self.residual(vec)
        for p in range(self.dim):
            if r[p]:
                self.rows.append(r)
                self.pivots.append(p)
                return True
        return False

    def mark(self) -> int:
        return len(self.rows)

    def rollback(self, mark: int) -> None:
        del self.rows[mark:]
        del self.pivots[mark:]

    def nullspace(self) -> list[tuple[int, ...]]:
        return nullspace_int(self.rows, self.dim)


def matrix_rank(rows, dim=None) -> int:
    """Exact rank of a list of rational/integer row vectors."""
    rows = [r for r in rows if not is_zero(r)]
    if not rows:
        return 0
    span = RowSpan(dim if dim is not None else len(rows[0]))
    for r in rows:
        span.add(clear_denominators(r))
    return span.rank


def rref_fraction(rows, dim):
    """Reduced row echelon form over Q; returns (pivot cols, rows)."""
    mat = [[Fraction(x) for x in r] for r in rows]
    pivots = []
    r = 0
    for c in range(dim):
        pr = next((i for i in range(r, len(mat)) if mat[i][c] != 0), None)
        if pr is None:
            continue
        mat[r], mat[pr] = mat[pr], mat[r]
        pv = mat[r][c]
        mat[r] = [x / pv for x in mat[r]]
        for i in range(len(mat)):
            if i != r and mat[i][c] != 0:
                f = mat[i][c]
                mat[i] = [a - f * b for a, b in zip(mat[i], mat[r])]
        pivots.append(c)
        r += 1
        if r == len(mat):
            break
    return pivots, [tuple(row) for row in mat[:r]]


def rref_int(rows, dim):
    """Fraction-free Gauss-Jordan over Z with per-row gcd reduction.

    Returns (pivot cols, integer rows); each pivot column is zero in
    every other row, pivot entries need not be 1.
    """
    mat = [list(clear_denominators(r)) for r in rows]
    mat = [r for r in mat if any(r)]
    pivots = []
    r = 0
    for c in range(dim):
        pr = next((i for i in range(r, len(mat)) if mat[i][c] != 0), None)
        if pr is None:
            continue
        mat[r], mat[pr] = mat[pr], mat[r]
        piv_row = mat[r]
        pv = piv_row[c]
        for i in range(len(mat)):
            if i != r and mat[i][c] != 0:
                f = mat[i][c]
                row = mat[i]
                mat[i] = list(
                    gcd_reduce([row[j] * pv - piv_row[j] * f for j in range(dim)])
                )
        pivots.append(c)
        r += 1
        if r == len(mat):
            break
    return pivots, [tuple(row) for row in mat[:r]]


def nullspace_int(rows, dim) -> list[tuple[int, ...]]:
    """Primitive integer basis of {x : r.x = 0 for all rows}."""
    pivots, red = rref_int(rows, dim)
    free = [c for c in range(dim) if c not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * dim
        v[f] = Fraction(1)
        for row, p in zip(red, pivots):
            if row[f]:
                v[p] = Fraction(-row[f], row[p])
        basis.append(clear_denominators(v))
    return basis


def solve_linear(rows, rhs, dim):
    """One exact solution of rows . x = rhs, or None if inconsistent."""
    aug = [tuple(r) + (Fraction(b),) for r, b in zip(rows, rhs)]
    pivots, red = rref_fraction(aug, dim + 1)
    if dim in pivots:
        return None
    x = [Fraction(0)] * dim
    for row, p in zip(red, pivots):
        x[p] = row[dim]
    return tuple(x)


def affine_basis(points) -> list[int]:
    """Indices of points forming an affine basis of their span."""
    span = RowSpan(len(points[0]) + 1)
    out = []
    for i, p in enumerate(points):
        if span.add(clear_denominators(tuple(p) + (1,))):
            out.append(i)
    return out


def affine_rank(points) -> int:
    """Dimension of the affine hull of the points."""
    return len(affine_basis(points)) - 1 if points else -1


def affine_coefficients(basis_points, target):
    """Coefficients lam with sum(lam)=1 and sum lam_i b_i = target.

    None if target is outside the affine span of the basis points.
    """
    d = len(target)
    rows = [[Fraction(b[j]) for b in basis_points] for j in range(d)]
    rows.append([Fraction(1)] * len(basis_points))
    rhs = [Fraction(x) for x in target] + [Fraction(1)]
    sol = solve_linear(rows, rhs, len(basis_points))
    if sol is None:
        return None
    # solve_linear returns a solution only if consistent; spans may be
    # deficient, so verify.
    for j in range(d):
        if sum(s * Fraction(b[j]) for s, b in zip(sol, basis_points)) != target[j]:
            return None
    return sol


# --- exact simplex LP ----------------------------------------------------


def simplex_max(A, b, c):
    """Maximize c.x subject to A x <= b, x >= 0, exactly.

    Dense tableau simplex with Bland's rule (no cycling).  Returns
    (status, x, value) with status in {"optimal", "unbounded",
    "infeasible"}.  All data may be int or Fraction.
    """
    m, n = len(A), len(c)
    # tableau columns: x_0..x_{n-1}, slacks s_0..s_{m-1}, [aux,] rhs
    T = [
        [Fraction(x) for x in A[i]]
        + [Fraction(int(i == j)) for j in range(m)]
        + [Fraction(b[i])]
        for i in range(m)
    ]
    basis = [n + i for i in range(m)]

    def pivot(row, col, obj):
        pv = T[row][col]
        if pv != 1:
            T[row] = [x / pv for x in T[row]]
        for i in range(len(T)):
            if i != row and T[i][col] != 0:
                f = T[i][col]
                T[i] = [x - f * y for x, y in zip(T[i], T[row])]
        if obj[col] != 0:
            f = obj[col]
            obj[:] = [x - f * y for x, y in zip(obj, T[row])]
        basis[row] = col

    def bland(obj, ncols):
        while True:
            col = next(
                (j for j in range(ncols) if obj[j] > 0 and j not in basis), None
            )
            if col is None:
                return "optimal"
            best = None
            for i in range(len(T)):
                if T[i][col] > 0:
                    ratio = T[i][-1] / T[i][col]
                    if best is None or ratio < best[0] or (
                        ratio == best[0] and basis[i] < basis[best[1]]
                    ):
                        best = (ratio, i)
            if best is None:
                return "unbounded"
            pivot(best[1], col, obj)

    if any(row[-1] < 0 for row in T):
        # phase 1: auxiliary column with -1 entries, maximize -x_aux
        aux = n + m
        for row in T:
            row.insert(aux, Fraction(-1))
        obj = [Fraction(0)] * (n + m + 2)
        obj[aux] = Fraction(-1)
        worst = min(range(m), key=lambda i: T[i][-1])
        pivot(worst, aux, obj)
        bland(obj, n + m + 1)  # bounded above by 0, never "unbounded"
        if obj[-1] != 0:  # optimum of -x_aux is -obj[-1] < 0
            return "infeasible", None, None
        if aux in basis:
            row = basis.index(aux)
            col = next((j for j in range(n + m) if T[row][j] != 0), None)
            if col is not None:
                pivot(row, col, obj)
            else:
                del T[row]
                del basis[row]
        for row in T:
            del row[aux]

    obj = [Fraction(x) for x in c] + [Fraction(0)] * (m + 1)
    for i in range(len(T)):
        if obj[basis[i]] != 0:
            f = obj[basis[i]]
            obj = [x - f * y for x, y in zip(obj, T[i])]
    status = bland(obj, n + m)
    if status == "unbounded":
        return "unbounded", None, None
    x = [Fraction(0)] * n
    for i in range(len(T)):
        if basis[i] < n:
            x[basis[i]] = T[i][-1]
    return "optimal", tuple(x), -obj[-1]


# --- double description ---------------------------------------------------


def _initial_simplicial(ineqs, dim):
    """Pick dim independent inequalities and invert for starting rays."""
    span = RowSpan(dim)
    chosen = []
    for idx, g in enumerate(ineqs):
        if span.add(g):
            chosen.append(idx)
            if len(chosen) == dim:
                break
    if len(chosen) < dim:
        raise ValueError("cone is not pointed: inequality rank below dimension")
    rays = []
    rows = [ineqs[i] for i in chosen]
    for j in range(dim):
        rhs = [Fraction(int(i == j)) for i in range(dim)]
        sol = solve_linear(rows, rhs, dim)
        rays.append(clear_denominators(sol))
    return chosen, rays


def dd_rays(ineqs, dim):
    """Extreme rays of the pointed cone {x : g.x >= 0 for all g}.

    Requires rank(ineqs) == dim (pointed).  Returns (rays, tight_masks)
    with tight_masks[r] a bitmask over the input inequality indices.
    """
    if dim == 0:
        return [], []
    chosen, rays = _initial_simplicial(ineqs, dim)
    chosen_set = set(chosen)
    # masks over processed inequalities, bit i <-> ineqs[i]
    masks = []
    for r in rays:
        m = 0
        for i in chosen:
            if dot(ineqs[i], r) == 0:
                m |= 1 << i
        masks.append(m)
    processed = list(chosen)
    for idx, g in enumerate(ineqs):
        if idx in chosen_set:
            continue
        vals = [dot(g, r) for r in rays]
        if all(v >= 0 for v in vals):
            for t in range(len(rays)):
                if vals[t] == 0:
                    masks[t] |= 1 << idx
            processed.append(idx)
            continue
        keep_rays, keep_masks = [], []
        pos, neg = [], []
        for t, v in enumerate(vals):
            if v >= 0:
                keep_rays.append(rays[t])
                keep_masks.append(masks[t] | (1 << idx if v == 0 else 0))
            if v > 0:
                pos.append(t)
            elif v < 0:
                neg.append(t)
        for p, q in itertools.product(pos, neg):
            common = masks[p] & masks[q]
            adjacent = True
            for t in range(len(rays)):
                if t != p and t != q and (common & masks[t]) == common:
                    adjacent = False
                    break
            if not adjacent:
                continue
            new = gcd_reduce(
                tuple(
                    vals[p] * rays[q][i] - vals[q] * rays[p][i] for i in range(dim)
                )
            )
            m = (1 << idx) | common
            # recompute exactly over processed constraints for safety
            mm = 1 << idx
            for i in processed:
                if dot(ineqs[i], new) == 0:
                    mm |= 1 << i
            keep_rays.append(new)
            keep_masks.append(mm)
        rays, masks = keep_rays, keep_masks
        processed.append(idx)
    return rays, masks


@dataclass
class ConeGeometry:
    """Complete exact description of a cone {Ex=0, Gx>=0} in R^d."""

    dim_ambient: int
    equality_rank: int
    lineality: tuple  # integer basis vectors of the cone's lineality space
    rays: tuple  # extreme rays modulo lineality, lifted to ambient coords
    dim: int  # dim lineality + dim of the pointed part
    interior: tuple  # integer relative-interior point (0 if cone = lineality)
    strict: tuple  # per input inequality: strict at interior (non-implicit)
    tight_masks: tuple  # per ray: bitmask of input inequalities tight there


def cone_solve(equalities, inequalities, dim) -> ConeGeometry:
    """Lineality quotient + double description for an H-cone."""
    eqs = [clear_denominators(e) for e in equalities]
    eqs = [e for e in eqs if not is_zero(e)]
    ineqs = [clear_denominators(g) for g in inequalities]
    if eqs:
        N = nullspace_int(eqs, dim)  # x = N^T y
        eq_rank = dim - len(N)
    else:
        N = [tuple(int(i == j) for j in range(dim)) for i in range(dim)]
        eq_rank = 0
    d1 = len(N)
    proj = [tuple(dot(g, base) for base in N) for g in ineqs]
    nonzero = [(i, g) for i, g in enumerate(proj) if not is_zero(g)]
    lin_y = nullspace_int([g for _, g in nonzero], d1) if nonzero else [
        tuple(int(i == j) for j in range(d1)) for i in range(d1)
    ]
    # complement coordinates: drop the pivot columns of the lineality basis
    if lin_y:
        piv, _ = rref_fraction(lin_y, d1)
        free_cols = [c for c in range(d1) if c not in piv]
    else:
        free_cols = list(range(d1))
    d2 = len(free_cols)
    restr = [(i, tuple(g[c] for c in free_cols)) for i, g in nonzero]
    rays_z, masks_local = dd_rays([g for _, g in restr], d2) if d2 else ([], [])

    def lift_z(z):
        y = [0] * d1
        for c, val in zip(free_cols, z):
            y[c] = val
        return tuple(sum(y[t] * N[t][j] for t in range(d1)) for j in range(dim))

    def lift_y(y):
        return tuple(sum(y[t] * N[t][j] for t in range(d1)) for j in range(dim))

    lineality = tuple(gcd_reduce(lift_y(v)) for v in lin_y)
    rays = tuple(gcd_reduce(lift_z(z)) for z in rays_z)
    if rays_z:
        interior_z = tuple(sum(col) for col in zip(*rays_z))
        interior = gcd_reduce(lift_z(interior_z))
    else:
        interior = tuple(0 for _ in range(dim))
    strict = tuple(dot(g, interior) > 0 for g in ineqs)
    # remap tight masks to input inequality indexing
    tight = []
    for z in rays_z:
        ray = lift_z(z)
        m = 0
        for i, g in enumerate(ineqs):
            if dot(g, ray) == 0:
                m |= 1 << i
        tight.append(m)
    pointed_dim = matrix_rank(rays_z, d2) if rays_z else 0
    return ConeGeometry(
        dim_ambient=dim,
        equality_rank=eq_rank,
        lineality=lineality,
        rays=rays,
        dim=len(lineality) + pointed_dim,
        interior=interior,
        strict=strict,
        tight_masks=tuple(tight),
    )


# --- public cone API ------------------------------------------------------


@dataclass(frozen=True)
class PolyhedralCone:
    """{x in R^d : e.x = 0 for e in equalities, g.x >= 0 for g in inequalities}."""

    dim: int
    equalities: tuple
    inequalities: tuple

    def geometry(self) -> ConeGeometry:
        return cone_solve(self.equalities, self.inequalities, self.dim)


@dataclass(frozen=True)
class RaySet:
    """Extreme rays modulo a recorded lineality space.

    Rays are canonical: reduced against the lineality basis pivots,
    primitive integer, positive leading entry.
    """

    lineality_basis: tuple
    rays: tuple


def canonicalize_ray(vec, lineality_rref_pivots=None):
    """Canonical representative: primitive with positive leading entry."""
    v = clear_denominators(vec)
    if lineality_rref_pivots is not None:
        pivots, rows = lineality_rref_pivots
        w = [Fraction(x) for x in v]
        for p, row in zip(pivots, rows):
            f = w[p]
            if f:
                w = [a - f * b for a, b in zip(w, row)]
        v = clear_denominators(w)
    lead = next((x for x in v if x != 0), 0)
    if lead < 0:
        v = negate(v)
    return tuple(v)


def lineality_reducer(basis, dim):
    """Precomputed RREF data for canonicalize_ray against a lineality."""
    if not basis:
        return None
    pivots, rows = rref_fraction(basis, dim)
    return pivots, rows


def extreme_rays(cone: PolyhedralCone) -> RaySet:
    geo = cone.geometry()
    red = lineality_reducer(geo.lineality, cone.dim)
    rays = sorted(canonicalize_ray(r, red) for r in geo.rays)
    return RaySet(lineality_basis=tuple(geo.lineality), rays=tuple(rays))


def cone_dim(cone: PolyhedralCone) -> int:
    """Dimension of the cone (implicit equalities accounted exactly)."""
    return cone.geometry().dim


def relatively_open_feasible(equalities, strict_inequalities, dim):
    """Exact witness with all inequalities strict, or None.

    Forms are affine of length dim+1 (constant last); equalities must
    hold exactly and every inequality strictly.  Decided by one
    homogenization: the system is feasible iff in the cone over it no
    strict inequality (nor the homogenizing coordinate) is implicit.
    """
    heqs = [tuple(e) for e in equalities]
    hineqs = [tuple(g) for g in strict_inequalities]
    t_pos = tuple([0] * dim + [1])
    geo = cone_solve(heqs, hineqs + [t_pos], dim + 1)
    if not all(geo.strict):
        return None
    w = geo.interior
    t = Fraction(w[-1])
    return tuple(Fraction(x) / t for x in w[:-1])


# --- polyhedra (affine) ---------------------------------------------------


@dataclass
class PolyhedronGenerators:
    vertices: tuple  # tuples of Fractions
    rays: tuple  # integer direction vectors
    lineality: tuple
    vertex_tight: tuple  # per vertex: bitmask of input inequalities tight


def polyhedron_generators(equalities, inequalities, dim) -> PolyhedronGenerators:
    """V-description of {E(x)=0, G(x)>=0} given by affine forms."""
    t_pos = tuple([0] * dim + [1])
    geo = cone_solve(
        [tuple(e) for e in equalities],
        [tuple(g) for g in inequalities] + [t_pos],
        dim + 1,
    )
    verts, vtight, rays = [], [], []
    for ray, mask in zip(geo.rays, geo.tight_masks):
        t = ray[-1]
        if t > 0:
            verts.append(tuple(Fraction(x, t) for x in ray[:-1]))
            vtight.append(mask & ((1 << len(inequalities)) - 1))
        else:
            rays.append(gcd_reduce(ray[:-1]))
    lin = tuple(gcd_reduce(v[:-1]) for v in geo.lineality)
    return PolyhedronGenerators(tuple(verts), tuple(rays), lin, tuple(vtight))


def vrep_to_hrep(vertices, dim):
    """(equalities, inequalities) of conv(vertices) as affine forms.

    The facets of the homogenization cone(1,v) are the extreme rays of
    its dual cone {f : f.(v,1) >= 0}, computed by double description.
    """
    rows = [tuple(v) + (1,) for v in vertices]
    geo = cone_solve([], [clear_denominators(r) for r in rows], dim + 1)
    eqs = [tuple(v) for v in geo.lineality]
    ineqs = [tuple(r) for r in geo.rays]
    return eqs, ineqs


def polytope_vertex_facet_incidence(vertices, dim):
    """(facets, incidence): facets as affine forms; incidence[v] bitmask."""
    eqs, ineqs = vrep_to_hrep(vertices, dim)
    inc = []
    for v in vertices:
        m = 0
        for i, g in enumerate(ineqs):
            if eval_affine(g, v) == 0:
                m |= 1 << i
        inc.append(m)
    return ineqs, tuple(inc)


def polytope_edges(vertices, dim):
    """Index pairs forming edges of conv(vertices), exactly.

    Uses the combinatorial adjacency test on vertex-facet incidences
    (valid for polytopes): u,v are adjacent iff no third vertex is tight
    on every facet through both.
    """
    ineqs, inc = polytope_vertex_facet_incidence(vertices, dim)
    n = len(vertices)
    edges = []
    for a, b in itertools.combinations(range(n), 2):
        common = inc[a] & inc[b]
        if any(
            (common & inc[t]) == common for t in range(n) if t != a and t != b
        ):
            continue
        edges.append((a, b))
    return edges


def polytope_intersection(vertices_a, vertices_b, dim):
    """Vertices of conv(A) intersect conv(B) (possibly new points)."""
    eq_a, in_a = vrep_to_hrep(vertices_a, dim)
    eq_b, in_b = vrep_to_hrep(vertices_b, dim)
    gen = polyhedron_generators(eq_a + eq_b, in_a + in_b, dim)
    return gen.vertices


# --- regular subdivisions via the dual envelope ---------------------------


@dataclass
class LowerHull:
    """Maximal cells of a regular subdivision plus dual certificates.

    cells[i] is a frozenset of point indices; functionals[i] = (a, c)
    is the affine functional with a.p + c = h_p exactly on the cell and
    < h_p off it.  Cells are the tight sets at the vertices of the
    envelope {(a,c) : a.p_i + c <= h_i} after pinning its lineality.
    """

    cells: tuple
    functionals: tuple


def lower_hull(points, heights) -> LowerHull:
    if len(points) != len(heights):
        raise ValueError("points and heights must have equal length")
    d = len(points[0])
    if len(points) < affine_rank(points) + 1:
        raise ValueError("need at least dim+1 points")
    rows = [clear_denominators(tuple(p) + (1,)) for p in points]
    lin = nullspace_int(rows, d + 1)  # functionals vanishing on all points
    pins = []
    if lin:
        pivots, _ = rref_fraction(lin, d + 1)
        for p in pivots:
            pins.append(tuple(int(i == p) for i in range(d + 1)) + (0,))
    ineqs = [
        tuple(-x for x in p) + (-1, h) for p, h in zip(points, [Fraction(x) for x in heights])
    ]
    gen = polyhedron_generators(pins, ineqs, d + 1)
    cells, funcs = [], []
    for v, mask in zip(gen.vertices, gen.vertex_tight):
        tight = frozenset(i for i in range(len(points)) if mask >> i & 1)
        cells.append(tight)
        funcs.append(v)
    order = sorted(range(len(cells)), key=lambda i: sorted(cells[i]))
    return LowerHull(
        cells=tuple(cells[i] for i in order),
        functionals=tuple(funcs[i] for i in order),
    )

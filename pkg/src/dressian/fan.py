"""Split-sequence encoding and the Dressian enumerator.

A cone of the Pluecker fan structure on Dr(k,n) picks, for each
octahedral 3-face, which two of the three pair sums are equal and
minimal; code t in {1,2,3} names the pair left strictly on top, code 0
means all three agree.  The closed cone of a full assignment seq is

    C(seq) = intersection over octahedra of
             { s_u = s_w <= s_t }   (u,w the pairs other than t).

Every point of C(seq) has per-octahedron code 0 or seq(o), so the codes
of a relative-interior point (the "zero-completed" sequence, 0 exactly
where the top inequality is implicit) label the cone faithfully, and

    C(z) <= C(z')  iff  z'(o) = z(o) for every o in supp(z).

Maximal cones are therefore the support-maximal zero-completed
sequences; the backtracking search below enumerates candidates by a
rank bound on the accumulated equalities, with optional boundary
pruning against the cached realizable sequences of Dr(k,n-1).
"""

from __future__ import annotations

import itertools
import struct
from dataclasses import dataclass
from fractions import Fraction
from math import factorial

from . import exactlin
from .combinat import (
    all_perms,
    binomial,
    check_hypersimplex,
    enumerate_octahedra,
    facet_maps,
    octahedron_tables,
    perm_octahedron_tables,
    subset_tables,
)
from .subdivision import Polytope, Subdivision, regular_subdivision, tight_span
from .tropical_core import (
    PluckerVector,
    check_plucker,
    octahedral_split_of,
    phi_at_vertex,
    tau_at_vertex,
)

MAGIC = b"DRSNFAN1"


# --- split sequences -------------------------------------------------------


@dataclass(frozen=True)
class SplitSequence:
    """Per-octahedron codes in canonical octahedron order; 2 bits each."""

    k: int
    n: int
    codes: tuple

    @staticmethod
    def make(k, n, codes) -> "SplitSequence":
        check_hypersimplex(k, n)
        octs = enumerate_octahedra(k, n)
        codes = tuple(int(c) for c in codes)
        if len(codes) != len(octs) or any(c not in (0, 1, 2, 3) for c in codes):
            raise ValueError("invalid split sequence")
        return SplitSequence(k, n, codes)

    def support(self):
        return tuple(i for i, c in enumerate(self.codes) if c)

    def apply_perm(self, p) -> "SplitSequence":
        oct_image, label_map = perm_octahedron_tables(self.k, self.n, tuple(p))
        out = [0] * len(self.codes)
        for i, c in enumerate(self.codes):
            out[oct_image[i]] = label_map[i][c]
        return SplitSequence(self.k, self.n, tuple(out))

    def to_bytes(self) -> bytes:
        nu = len(self.codes)
        head = MAGIC + struct.pack("<HHI", self.k, self.n, nu)
        body = bytearray((2 * nu + 7) // 8)
        for i, c in enumerate(self.codes):
            body[i // 4] |= c << (2 * (i % 4))
        return head + bytes(body)

    @staticmethod
    def from_bytes(blob: bytes) -> "SplitSequence":
        if blob[:8] != MAGIC:
            raise ValueError("bad magic")
        k, n, nu = struct.unpack("<HHI", blob[8:16])
        body = blob[16 : 16 + (2 * nu + 7) // 8]
        codes = tuple((body[i // 4] >> (2 * (i % 4))) & 3 for i in range(nu))
        return SplitSequence.make(k, n, codes)


def splits_of_vector(pi: PluckerVector) -> SplitSequence:
    """Per-octahedron codes of a Pluecker vector; raises on violations."""
    octs, _, pair_ranks = octahedron_tables(pi.k, pi.n)
    v = pi.values
    codes = []
    for o, pr in zip(octs, pair_ranks):
        s = [v[a] + v[b] for a, b in pr]
        m = min(s)
        if s.count(m) < 2:
            raise ValueError(f"not a Pluecker vector at {o}")
        mx = max(s)
        codes.append(0 if mx == m else s.index(mx) + 1)
    return SplitSequence(pi.k, pi.n, tuple(codes))


def _octahedron_forms(k, n):
    """Per octahedron: dense pair-sum forms and the derived constraint
    forms.  eq[o][t] is the equality for code t (t=0: a pair of forms
    spanning "all equal"); ineq[o][t] is the inequality s_t - s_other."""
    N = len(subset_tables(n, k)[0])
    _, _, pair_ranks = octahedron_tables(k, n)
    eqs, ineqs = [], []
    for pr in pair_ranks:
        sums = []
        for a, b in pr:
            f = [0] * N
            f[a] += 1
            f[b] += 1
            sums.append(tuple(f))

        def diff(x, y):
            return tuple(p - q for p, q in zip(sums[x], sums[y]))

        eq_o = {
            0: (diff(0, 1), diff(0, 2)),
            1: (diff(1, 2),),
            2: (diff(0, 2),),
            3: (diff(0, 1),),
        }
        ineq_o = {
            1: diff(0, 1),
            2: diff(1, 0),
            3: diff(2, 0),
        }
        eqs.append(eq_o)
        ineqs.append(ineq_o)
    return eqs, ineqs


def cone_from_sequence(seq: SplitSequence) -> exactlin.PolyhedralCone:
    """The cone cut out by the coded octahedra; code 0 adds nothing
    (undecided during backtracking)."""
    N = len(subset_tables(seq.n, seq.k)[0])
    eq_forms, ineq_forms = _octahedron_forms(seq.k, seq.n)
    eqs, ineqs = [], []
    for o, c in enumerate(seq.codes):
        if c:
            eqs.extend(eq_forms[o][c])
            ineqs.append(ineq_forms[o][c])
    return exactlin.PolyhedralCone(N, tuple(eqs), tuple(ineqs))


def cone_of_zero_completed(seq: SplitSequence) -> exactlin.PolyhedralCone:
    """The cone labelled by a zero-completed sequence: code 0 forces all
    three pair sums equal (used for emitted cones and their faces)."""
    N = len(subset_tables(seq.n, seq.k)[0])
    eq_forms, ineq_forms = _octahedron_forms(seq.k, seq.n)
    eqs, ineqs = [], []
    for o, c in enumerate(seq.codes):
        eqs.extend(eq_forms[o][c] if c == 0 else eq_forms[o][c])
        if c:
            ineqs.append(ineq_forms[o][c])
    return exactlin.PolyhedralCone(N, tuple(eqs), tuple(ineqs))


def fan_lineality(k, n):
    """Basis of the lineality space (all pair sums equal everywhere)."""
    N = len(subset_tables(n, k)[0])
    eq_forms, _ = _octahedron_forms(k, n)
    forms = [f for eo in eq_forms for f in eo[0]]
    return exactlin.nullspace_int(forms, N) if forms else [
        tuple(int(i == j) for j in range(N)) for i in range(N)
    ]


def _codes_of_values(values, pair_ranks):
    codes = []
    for pr in pair_ranks:
        s = [values[a] + values[b] for a, b in pr]
        m, mx = min(s), max(s)
        if s.count(m) < 2:
            return None
        codes.append(0 if mx == m else s.index(mx) + 1)
    return tuple(codes)


# --- the enumerator --------------------------------------------------------


@dataclass
class DressianCone:
    """One maximal cone: its zero-completed sequence, an exact interior
    witness, extreme rays (canonical mod lineality), and dimensions."""

    seq: SplitSequence
    witness: PluckerVector
    rays: tuple
    dim_raw: int
    dim: int  # modulo the n-dimensional lineality

    def cone(self) -> exactlin.PolyhedralCone:
        return cone_of_zero_completed(self.seq)


@dataclass
class FanResult:
    k: int
    n: int
    lineality_dim: int
    cones: list  # DressianCone, sorted by codes
    nodes: int  # search-tree size, for reporting


def boundary_cache_from_fan(fan: FanResult) -> set:
    """All realizable zero-completed sequences of Dr(k,n).

    These are the codes of relative-interior points of all faces of all
    maximal cones (plus the lineality's all-zero sequence); used to
    prune the Dr(k,n+1) search.
    """
    k, n = fan.k, fan.n
    _, _, pair_ranks = octahedron_tables(k, n)
    out = {tuple([0] * len(pair_ranks))}
    for cone in fan.cones:
        geo = cone.cone().geometry()
        rays = list(geo.rays)
        masks = list(geo.tight_masks)
        nineq = len(cone.cone().inequalities)
        seen_sets = {frozenset(range(len(rays)))}
        queue = [frozenset(range(len(rays)))]
        while queue:
            cur = queue.pop()
            for i in range(nineq):
                sub = frozenset(r for r in cur if masks[r] >> i & 1)
                if sub != cur and sub not in seen_sets:
                    seen_sets.add(sub)
                    queue.append(sub)
        for rset in seen_sets:
            if rset:
                w = [0] * fanN(fan)
                for r in rset:
                    w = [a + b for a, b in zip(w, rays[r])]
            else:
                w = [0] * fanN(fan)
            codes = _codes_of_values(w, pair_ranks)
            if codes is not None:
                out.add(codes)
    return out


def fanN(fan: FanResult) -> int:
    return len(subset_tables(fan.n, fan.k)[0])


def enumerate_maximal_cones(
    k: int,
    n: int,
    *,
    boundary_cache=None,
    prune: bool = True,
    symmetry_fix: bool = False,
    min_dim: int = 1,
    prefix=None,
    collect_all: bool = False,
    progress=None,
) -> FanResult:
    """All inclusion-maximal cones of the Pluecker fan structure.

    With symmetry_fix the first octahedron is pinned to split 1, which
    loses completeness but keeps at least one cone per Sym(n) orbit.
    `boundary_cache` maps nothing: it is the realizable-sequence set of
    Dr(k,n-1) (see boundary_cache_from_fan); required when prune=True
    and n-1 > k+1.  min_dim (modulo lineality) bounds the cones kept;
    1 is sound for finding every maximal cone.
    """
    check_hypersimplex(k, n)
    octs = enumerate_octahedra(k, n)
    nu = len(octs)
    N = len(subset_tables(n, k)[0])
    eq_forms, ineq_forms = _octahedron_forms(k, n)
    _, _, pair_ranks = octahedron_tables(k, n)
    lin = fan_lineality(k, n)
    lin_dim = len(lin)
    if nu == 0:
        return FanResult(k, n, lin_dim, [], 0)
    max_rank = N - lin_dim - min_dim

    # boundary pruning data: for each deletion facet, its cached
    # sequences; for each parent octahedron, the facets seeing it
    facet_data = []
    oct_facets = [[] for _ in range(nu)]
    if prune:
        dels = [f for f in facet_maps(k, n) if f.kind == "deletion" and not f.simplex]
        for f in dels:
            inj = f.octahedron_injection(k, n)
            if not inj:
                continue
            if boundary_cache is None:
                raise ValueError("pruned enumeration needs a boundary cache")
            fid = len(facet_data)
            facet_data.append(list(boundary_cache))
            for facet_oct, parent_oct in inj:
                oct_facets[parent_oct].append((fid, facet_oct))

    found: dict[tuple, DressianCone] = {}
    codes = [0] * nu
    nodes = 0
    red = exactlin.lineality_reducer(lin, N)

    # Carried residuals: res[o][t-1] is the equality form of code t
    # reduced modulo the accumulated span (None once zero).  The three
    # forms satisfy f2 = f1 + f3, so per octahedron either none, one,
    # or all three residuals vanish; "most constrained first" ordering
    # processes the forced octahedra eagerly and detects dead branches
    # at the rank cap without descending.
    res = [[eq_forms[o][t][0] for t in (1, 2, 3)] for o in range(nu)]
    nzero = [0] * nu
    processed = [False] * nu
    span_rows: list = []
    span_pivots: list = []
    all_nonzero = nu  # octahedra with no vanishing residual yet

    def leaf():
        eqs = span_rows
        ineqs = [ineq_forms[o][codes[o]] for o in range(nu)]
        geo = exactlin.cone_solve(eqs, ineqs, N)
        if geo.dim - lin_dim < min_dim:
            return
        w = geo.interior
        z = _codes_of_values(w, pair_ranks)
        if z is None:
            raise AssertionError("interior witness violates a 3-term relation")
        for o in range(nu):
            if z[o] not in (0, codes[o]):
                raise AssertionError("witness codes disagree with the branch")
        if z in found:
            return
        rays = tuple(
            sorted(exactlin.canonicalize_ray(r, red) for r in geo.rays)
        )
        found[z] = DressianCone(
            seq=SplitSequence(k, n, z),
            witness=PluckerVector(k, n, tuple(Fraction(x) for x in w)),
            rays=rays,
            dim_raw=geo.dim,
            dim=geo.dim - lin_dim,
        )

    def add_row(row):
        """Append a reduced row to the span, update carried residuals.

        Entries are gcd-reduced lazily (only when they grow large);
        residual scaling is irrelevant, only vanishing matters.
        """
        nonlocal all_nonzero
        row = exactlin.gcd_reduce(row)
        pivot = next(i for i in range(N) if row[i])
        span_rows.append(row)
        span_pivots.append(pivot)
        undo = []
        rp = row[pivot]
        rng = range(N)
        big = 1 << 48
        for o in range(nu):
            if processed[o]:
                continue
            ro = res[o]
            for t in range(3):
                r = ro[t]
                if r is None or r[pivot] == 0:
                    continue
                vp = r[pivot]
                new = tuple(r[i] * rp - row[i] * vp for i in rng)
                undo.append((o, t, r))
                if any(new):
                    if any(x > big or x < -big for x in new):
                        new = exactlin.gcd_reduce(new)
                    ro[t] = new
                else:
                    ro[t] = None
                    if nzero[o] == 0:
                        all_nonzero -= 1
                    nzero[o] += 1
        return undo

    def undo_row(undo):
        nonlocal all_nonzero
        span_rows.pop()
        span_pivots.pop()
        for o, t, old in reversed(undo):
            if res[o][t] is None:
                nzero[o] -= 1
                if nzero[o] == 0:
                    all_nonzero += 1
            res[o][t] = old

    def apply_facets(o, t):
        saved = []
        for fid, foct in oct_facets[o]:
            old = facet_data[fid]
            new = [z for z in old if z[foct] in (0, t)]
            if not new:
                for f2, o2 in saved:
                    facet_data[f2] = o2
                return None
            saved.append((fid, old))
            facet_data[fid] = new
        return saved

    def unapply_facets(saved):
        for fid, old in saved:
            facet_data[fid] = old

    # octahedra sharing many Pluecker coordinates interact; processing
    # neighbors of the constrained region first surfaces dependencies
    # (and hence forced codes) at shallow depth
    overlap = [[0] * nu for _ in range(nu)]
    vert_ranks = [
        frozenset(r for pair in pr for r in pair) for pr in pair_ranks
    ]
    for a in range(nu):
        for b in range(a + 1, nu):
            w = len(vert_ranks[a] & vert_ranks[b])
            overlap[a][b] = overlap[b][a] = w
    touch = [0] * nu

    def pick_octahedron():
        """Forced first, then two-way, then most-entangled unconstrained."""
        best = None
        best_key = None
        for o in range(nu):
            if processed[o]:
                continue
            z = nzero[o]
            if z == 3:
                return o
            key = (0 if z == 1 else 1, -touch[o], o)
            if best is None or key < best_key:
                best, best_key = o, key
        return best

    def dfs(depth):
        nonlocal nodes
        if depth == nu:
            leaf()
            return
        rank = len(span_rows)
        if rank == max_rank and all_nonzero:
            return  # some octahedron must still raise the rank
        if prefix is not None and depth < len(prefix):
            o = depth
            choices = (prefix[depth],)
        elif symmetry_fix and depth == 0:
            o = 0
            choices = (1,)
        else:
            o = pick_octahedron()
            z = nzero[o]
            if z == 3:
                choices = (1,)
            elif z == 1:
                # the two rank-raising codes force the octahedron flat,
                # yielding cones contained in the forced branch's, so
                # they never contribute a maximal cone
                choices = (next(t + 1 for t in range(3) if res[o][t] is None),)
            else:
                choices = (1, 2, 3)
        for t in choices:
            nodes += 1
            if progress is not None and nodes % 20000 == 0:
                progress(nodes, len(span_rows), len(found))
            row = res[o][t - 1]
            undo = None
            if row is not None:
                if len(span_rows) == max_rank:
                    continue
                undo = add_row(row)
            saved = apply_facets(o, t)
            if saved is not None:
                codes[o] = t
                processed[o] = True
                ov = overlap[o]
                for o2 in range(nu):
                    touch[o2] += ov[o2]
                dfs(depth + 1)
                for o2 in range(nu):
                    touch[o2] -= ov[o2]
                processed[o] = False
                codes[o] = 0
                unapply_facets(saved)
            if undo is not None:
                undo_row(undo)

    dfs(0)

    if collect_all:
        cones = sorted(found.values(), key=lambda c: c.seq.codes)
        return FanResult(k, n, lin_dim, cones, nodes)

    # maximality: drop z dominated by a different z' agreeing on supp(z)
    keys = sorted(found)
    keep = []
    for z in keys:
        supp = [o for o in range(nu) if z[o]]
        dominated = False
        for z2 in keys:
            if z2 is z or z2 == z:
                continue
            if all(z2[o] == z[o] for o in supp):
                dominated = True
                break
        if not dominated:
            keep.append(z)
    cones = [found[z] for z in keep]
    cones.sort(key=lambda c: c.seq.codes)
    return FanResult(k, n, lin_dim, cones, nodes)


def induced_boundary_sequence(seq: SplitSequence, facet) -> SplitSequence:
    """Restriction of a split sequence to a hypersimplex facet.

    The facet's element relabelling is monotone, so quad order and the
    split labels are preserved; codes transfer through the octahedron
    injection unchanged.
    """
    inj = facet.octahedron_injection(seq.k, seq.n)
    sub_nu = len(enumerate_octahedra(facet.sub_k, facet.sub_n))
    out = [0] * sub_nu
    for facet_oct, parent_oct in inj:
        out[facet_oct] = seq.codes[parent_oct]
    return SplitSequence.make(facet.sub_k, facet.sub_n, out)


# --- orbits ---------------------------------------------------------------


def lex_min_orbit_rep(seq: SplitSequence):
    """(lexicographically first sequence in the Sym(n) orbit, orbit size)."""
    n = seq.n
    best = None
    stab = 0
    for p in all_perms(n):
        cand = seq.apply_perm(p).codes
        if best is None or cand < best:
            best = cand
        if cand == seq.codes:
            stab += 1
    return SplitSequence(seq.k, seq.n, best), factorial(n) // stab


def orbit_reps(fan: FanResult):
    """One representative cone per Sym(n) orbit, with orbit sizes.

    Returns a list of (rep sequence codes, orbit size, member cone)
    sorted by representative.  Sum of orbit sizes equals the raw count
    when the fan was enumerated without symmetry fixing.
    """
    reps = {}
    for cone in fan.cones:
        rep, size = lex_min_orbit_rep(cone.seq)
        if rep.codes not in reps:
            reps[rep.codes] = (size, cone)
    return sorted((r, s, c) for r, (s, c) in reps.items())


# --- rays, faces, f-vectors -------------------------------------------------


@dataclass
class FVector:
    """Face counts by dimension (modulo lineality), raw and mod Sym(n)."""

    k: int
    n: int
    raw: tuple
    mod_symmetry: tuple


def _perm_matrix_on_coords(k, n, p):
    """Index permutation of the lex k-subset coordinates under p."""
    subsets, rank, _, _ = subset_tables(n, k)
    from .combinat import apply_perm_subset

    return tuple(rank[apply_perm_subset(p, s)] for s in subsets)


def rays_and_faces(fan: FanResult, dims=None):
    """Global ray index plus the faces of each requested dimension.

    Faces are ray-index frozensets; for each dimension the count and
    the count modulo Sym(n) are computed by permuting rays.  dims
    defaults to every dimension up to the fan's.
    """
    k, n = fan.k, fan.n
    N = fanN(fan)
    lin = fan_lineality(k, n)
    red = exactlin.lineality_reducer(lin, N)
    ray_index: dict[tuple, int] = {}
    for cone in fan.cones:
        for r in cone.rays:
            if r not in ray_index:
                ray_index[r] = len(ray_index)
    rays = sorted(ray_index, key=lambda r: ray_index[r])

    maxdim = max((c.dim for c in fan.cones), default=0)
    if dims is None:
        dims = range(1, maxdim + 1)
    faces_by_dim = {d: set() for d in dims}
    for cone in fan.cones:
        geo = cone.cone().geometry()
        cone_rays = list(geo.rays)
        masks = list(geo.tight_masks)
        canon = [
            exactlin.canonicalize_ray(r, red) for r in cone_rays
        ]
        idx = [ray_index[c] for c in canon]
        nineq = len(cone.cone().inequalities)
        seen = {frozenset(range(len(cone_rays)))}
        queue = [frozenset(range(len(cone_rays)))]
        while queue:
            cur = queue.pop()
            for i in range(nineq):
                sub = frozenset(r for r in cur if masks[r] >> i & 1)
                if sub != cur and sub not in seen:
                    seen.add(sub)
                    queue.append(sub)
        for rset in seen:
            if not rset:
                continue
            d = exactlin.matrix_rank([cone_rays[r] for r in rset], N)
            if d in faces_by_dim:
                faces_by_dim[d].add(frozenset(idx[r] for r in rset))
    # orbit counting on faces via the coordinate action on rays
    perm_ray_maps = []
    for p in all_perms(n):
        cmap = _perm_matrix_on_coords(k, n, p)
        img = []
        ok = True
        for r in rays:
            pr = tuple(r[i] for i in _inverse_index(cmap))
            c = exactlin.canonicalize_ray(pr, red)
            if c not in ray_index:
                ok = False
                break
            img.append(ray_index[c])
        if not ok:
            raise AssertionError("ray set is not symmetry closed")
        perm_ray_maps.append(img)
    orbits_by_dim = {}
    for d, faces in faces_by_dim.items():
        seen_min = set()
        for f in faces:
            key = min(
                tuple(sorted(pm[i] for i in f)) for pm in perm_ray_maps
            )
            seen_min.add(key)
        orbits_by_dim[d] = len(seen_min)
    return rays, faces_by_dim, orbits_by_dim


def _inverse_index(cmap):
    inv = [0] * len(cmap)
    for i, j in enumerate(cmap):
        inv[j] = i
    return tuple(inv)


def f_vector(fan: FanResult) -> FVector:
    rays, faces_by_dim, orbits_by_dim = rays_and_faces(fan)
    maxdim = max((c.dim for c in fan.cones), default=0)
    raw = [1] + [len(faces_by_dim.get(d, ())) for d in range(1, maxdim + 1)]
    mod = [1] + [orbits_by_dim.get(d, 0) for d in range(1, maxdim + 1)]
    return FVector(fan.k, fan.n, tuple(raw), tuple(mod))


# --- ray analysis -----------------------------------------------------------


def ray_tight_span(pi: PluckerVector):
    """Tight-span of the matroid subdivision induced by a ray vector."""
    sub = regular_subdivision(Polytope.hypersimplex(pi.k, pi.n), list(pi.values))
    return tight_span(sub), sub


def tight_span_shape(ts) -> dict:
    """Coarse shape descriptor used to classify ray tight-spans."""
    from .subdivision import classify_2cell

    desc = {"dim": ts.dimension(), "f_vector": ts.f_vector()}
    if ts.dimension() >= 2:
        shapes: dict[str, int] = {}
        edge_load = {}
        for c in ts.two_cells():
            shape = classify_2cell(ts, c)
            shapes[shape] = shapes.get(shape, 0) + 1
            for e in ts.boundary_edges_of(c):
                edge_load[e] = edge_load.get(e, 0) + 1
        desc["two_cells"] = dict(sorted(shapes.items()))
        desc["max_edge_load"] = max(edge_load.values(), default=0)
    return desc


def grassmannian_tau_criterion(pi: PluckerVector):
    """("certified", sigma) if some vertex realizes pi as a tau image;
    ("inconclusive", None) otherwise.  Sufficient, not necessary."""
    if check_plucker(pi):
        raise ValueError("not a tropical Pluecker vector")
    subsets, _, _, _ = subset_tables(pi.n, pi.k)
    for sigma in subsets:
        config = phi_at_vertex(pi, sigma)
        if tau_at_vertex(config, sigma) == pi:
            return ("certified", sigma)
    return ("inconclusive", None)


def split_count_formula(k: int, n: int) -> int:
    """(k-1)(2^{n-1}-(n+1)) - sum_{i=2}^{k-1} (k-i) C(n,i), for n >= 2k."""
    if n < 2 * k:
        raise ValueError("split count formula needs n >= 2k")
    total = (k - 1) * (2 ** (n - 1) - (n + 1))
    total -= sum((k - i) * binomial(n, i) for i in range(2, k))
    return total

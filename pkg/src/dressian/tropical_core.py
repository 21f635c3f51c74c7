"""Tropical determinants, the tau/Phi maps, and the 3-term check.

Min convention throughout: a finite tropical Pluecker vector pi makes
the minimum of the three pair sums

    pi(rho i j) + pi(rho l m),  pi(rho i l) + pi(rho j m),
    pi(rho i m) + pi(rho j l)

attain at least twice on every octahedral 3-face.  +infinity is the
symbolic value None (absorbing under +, identity under min); it occurs
only inside tropical matrices, never in Pluecker vectors.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from fractions import Fraction

from .combinat import (
    OctahedronId,
    apply_perm_subset,
    check_hypersimplex,
    check_perm,
    enumerate_octahedra,
    identity_perm,
    invert_perm,
    octahedron_tables,
    subset_tables,
)


def tdet(matrix):
    """min over permutations w of sum_i a[i][w(i)]; None means +infinity.

    None if and only if every transversal hits an infinite entry.
    """
    k = len(matrix)
    for row in matrix:
        if len(row) != k:
            raise ValueError("tropical determinant needs a square matrix")
    best = None
    for w in itertools.permutations(range(k)):
        total = 0
        for i in range(k):
            a = matrix[i][w[i]]
            if a is None:
                total = None
                break
            total += a
        if total is not None and (best is None or total < best):
            best = total
    return best


def tdet_assignment(matrix):
    """Independent route to tdet: subset-DP for min-weight assignment."""
    k = len(matrix)
    full = (1 << k) - 1
    best = {0: 0}
    for i in range(k):
        nxt = {}
        for used, cost in best.items():
            for j in range(k):
                if used >> j & 1 or matrix[i][j] is None:
                    continue
                m2 = used | 1 << j
                c2 = cost + matrix[i][j]
                if m2 not in nxt or c2 < nxt[m2]:
                    nxt[m2] = c2
        best = nxt
    return best.get(full)


@dataclass(frozen=True)
class PointConfig:
    """n-k labeled points in the tropical torus T^{k-1}.

    Stored as a k x (n-k) rational matrix whose column j is point j;
    columns are read modulo the all-ones direction.
    """

    k: int
    n: int
    matrix: tuple  # k rows, each a tuple of n-k Fractions

    @staticmethod
    def from_rows(rows, k=None, n=None):
        rows = tuple(tuple(Fraction(x) for x in r) for r in rows)
        kk = k if k is not None else len(rows)
        nn = n if n is not None else kk + len(rows[0])
        if len(rows) != kk or any(len(r) != nn - kk for r in rows):
            raise ValueError("matrix shape does not match (k, n)")
        check_hypersimplex(kk, nn)
        return PointConfig(kk, nn, rows)

    def column(self, j):
        return tuple(self.matrix[i][j] for i in range(self.k))

    def columns(self):
        return [self.column(j) for j in range(self.n - self.k)]

    def augmented(self):
        """(E_k | V): tropical identity block then the columns of V."""
        k = self.k
        aug = []
        for i in range(k):
            row = [Fraction(0) if i == j else None for j in range(k)]
            aug.append(tuple(row) + tuple(self.matrix[i]))
        return aug

    def to_json(self) -> str:
        return json.dumps(
            {
                "k": self.k,
                "n": self.n,
                "matrix": [[str(x) for x in row] for row in self.matrix],
            }
        )

    @staticmethod
    def from_json(text: str) -> "PointConfig":
        data = json.loads(text)
        return PointConfig.from_rows(
            [[Fraction(x) for x in row] for row in data["matrix"]],
            k=data["k"],
            n=data["n"],
        )


@dataclass(frozen=True)
class PluckerVector:
    """A finite map from k-subsets of [n] to Q, in lex coordinate order."""

    k: int
    n: int
    values: tuple  # Fractions, one per lex-ranked k-subset

    @staticmethod
    def from_values(k, n, values):
        check_hypersimplex(k, n)
        subsets, _, _, _ = subset_tables(n, k)
        vals = tuple(Fraction(x) for x in values)
        if len(vals) != len(subsets):
            raise ValueError(
                f"expected {len(subsets)} values for Dr({k},{n}), got {len(vals)}"
            )
        return PluckerVector(k, n, vals)

    @staticmethod
    def from_map(k, n, mapping):
        subsets, _, _, _ = subset_tables(n, k)
        mapping = {tuple(sorted(s)): Fraction(v) for s, v in mapping.items()}
        missing = [s for s in subsets if s not in mapping]
        if missing:
            raise ValueError(f"missing values for subsets, e.g. {missing[0]}")
        return PluckerVector(k, n, tuple(mapping[s] for s in subsets))

    def __getitem__(self, subset):
        _, rank, _, _ = subset_tables(self.n, self.k)
        return self.values[rank[tuple(sorted(subset))]]

    def __add__(self, other):
        if (self.k, self.n) != (other.k, other.n):
            raise ValueError("mismatched Pluecker vectors")
        return PluckerVector(
            self.k, self.n, tuple(a + b for a, b in zip(self.values, other.values))
        )

    def apply_perm(self, p):
        """The Sym(n) action: (p.pi)(sigma) = pi(p^{-1}(sigma))."""
        check_perm(p, self.n)
        inv = invert_perm(p)
        subsets, rank, _, _ = subset_tables(self.n, self.k)
        vals = [None] * len(subsets)
        for s, v in zip(subsets, self.values):
            vals[rank[apply_perm_subset(p, s)]] = v
        return PluckerVector(self.k, self.n, tuple(vals))

    def to_json(self) -> str:
        subsets, _, _, _ = subset_tables(self.n, self.k)
        return json.dumps(
            {
                "k": self.k,
                "n": self.n,
                "values": [
                    [",".join(map(str, s)), str(v)]
                    for s, v in zip(subsets, self.values)
                ],
            }
        )

    @staticmethod
    def from_json(text: str) -> "PluckerVector":
        data = json.loads(text)
        mapping = {
            tuple(int(t) for t in key.split(",")): Fraction(val)
            for key, val in data["values"]
        }
        return PluckerVector.from_map(data["k"], data["n"], mapping)


def _relabel_perm_for_vertex(k, n, sigma):
    """Permutation q of [n] with q(sigma) = [k], both order preserving.

    Used to define the tau/Phi constructions relative to an arbitrary
    vertex e_sigma: relabel so sigma plays the role of [k], evaluate,
    relabel back.
    """
    sigma = tuple(sorted(sigma))
    rest = [x for x in range(1, n + 1) if x not in sigma]
    q = [0] * n
    for pos, x in enumerate(sigma):
        q[x - 1] = pos + 1
    for pos, x in enumerate(rest):
        q[x - 1] = k + pos + 1
    return tuple(q)


def tau(config: PointConfig) -> PluckerVector:
    """sigma -> tdet of the sigma-columns of (E_k | V); always finite.

    Equivalently the min-cost assignment between [k] \\ sigma and the
    V-columns indexed by sigma, which is how it is evaluated here.
    """
    k, n = config.k, config.n
    subsets, _, _, _ = subset_tables(n, k)
    vals = []
    for sigma in subsets:
        a_rows = [i for i in range(1, k + 1) if i not in sigma]
        b_cols = [j - k for j in sigma if j > k]
        if len(a_rows) != len(b_cols):
            raise AssertionError("identity columns must cover sigma ^ [k]")
        best = None
        for w in itertools.permutations(range(len(b_cols))):
            total = Fraction(0)
            for t, i in enumerate(a_rows):
                total += config.matrix[i - 1][b_cols[w[t]] - 1]
            if best is None or total < best:
                best = total
        vals.append(best if best is not None else Fraction(0))
    return PluckerVector(k, n, tuple(vals))


def tau_at_vertex(config: PointConfig, sigma) -> PluckerVector:
    """The tau construction relative to the vertex e_sigma.

    Relabels the ground set (order preservingly) so sigma becomes [k],
    applies tau, and relabels back; tau_at_vertex(V, [k]) == tau(V).
    """
    q = _relabel_perm_for_vertex(config.k, config.n, sigma)
    return tau(config).apply_perm(invert_perm(q))


def phi(pi: PluckerVector) -> PointConfig:
    """The linear projection with phi_ij = pi(([k] \\ {i}) u {j+k})."""
    k, n = pi.k, pi.n
    rows = []
    for i in range(1, k + 1):
        row = []
        for j in range(1, n - k + 1):
            sigma = tuple(sorted([x for x in range(1, k + 1) if x != i] + [j + k]))
            row.append(pi[sigma])
        rows.append(tuple(row))
    return PointConfig(k, n, tuple(rows))


def phi_at_vertex(pi: PluckerVector, sigma) -> PointConfig:
    """Phi relative to the vertex e_sigma (relabel, project, done)."""
    q = _relabel_perm_for_vertex(pi.k, pi.n, sigma)
    return phi(pi.apply_perm(q))


def pair_sums(pi: PluckerVector, oct_id: OctahedronId):
    """The three opposite-pair sums of pi on one octahedron."""
    _, index, pair_ranks = octahedron_tables(pi.k, pi.n)
    pr = pair_ranks[index[oct_id]]
    v = pi.values
    return tuple(v[a] + v[b] for a, b in pr)


def check_plucker(pi: PluckerVector):
    """All octahedra where the minimum pair sum is attained only once.

    Empty list means pi is a finite tropical Pluecker vector.
    """
    octs, _, pair_ranks = octahedron_tables(pi.k, pi.n)
    v = pi.values
    bad = []
    for o, pr in zip(octs, pair_ranks):
        s = [v[a] + v[b] for a, b in pr]
        m = min(s)
        if s.count(m) < 2:
            bad.append(o)
    return bad


class PluckerViolation(ValueError):
    """A 3-term relation fails; carries the offending octahedron."""

    def __init__(self, oct_id):
        super().__init__(f"3-term minimum attained once at {oct_id}")
        self.octahedron = oct_id


def octahedral_split_of(pi: PluckerVector, oct_id: OctahedronId) -> int:
    """0 if all three pair sums are equal, else the index (1..3) of the
    strict maximum; raises PluckerViolation if the minimum is unique."""
    s = pair_sums(pi, oct_id)
    m = min(s)
    if list(s).count(m) < 2:
        raise PluckerViolation(oct_id)
    mx = max(s)
    if mx == m:
        return 0
    return s.index(mx) + 1


def tau_is_plucker_witness(config: PointConfig) -> bool:
    """Sanity oracle: the tau image always passes the 3-term check."""
    return not check_plucker(tau(config))


def apply_perm(p, obj):
    """Sym(n) action, overloaded on the value types of this package."""
    from . import fan, subdivision  # local import to avoid cycles

    if isinstance(obj, PluckerVector):
        return obj.apply_perm(p)
    if isinstance(obj, tuple) and all(isinstance(x, int) for x in obj):
        return apply_perm_subset(p, obj)
    if isinstance(obj, fan.SplitSequence):
        return obj.apply_perm(p)
    if isinstance(obj, subdivision.Subdivision):
        return obj.apply_perm(p)
    raise TypeError(f"no Sym(n) action registered for {type(obj)!r}")

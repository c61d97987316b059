"""Lattice class graphs over Z_p: spheres, balls, distances.

Vertices are homothety classes [L] of rank-d Z_p-lattices in Q_p^d.  Each
class has a unique representative that is an integer matrix in row Hermite
form with determinant a power of p and content 1 (a *primitive* HNF).  Two
classes are adjacent when representatives L, M exist with pL < M < L, both
inclusions strict.  The class of Z_p^d (identity matrix) is the base vertex.

The first shell around the base has

    D(p) = (d-1) (p^d - 1)/(p - 1)

vertices; each vertex of shell k-1 sees exactly

    c(p) = (d-1) p^(d-1) + p^(d-2) + ... + p

neighbors in shell k, giving the closed form D(p) c(p)^(k-1).  For d = 2
the graph is the (p+1)-regular tree (D = p + 1, c = p), geodesics are
unique, and the closed form is the exact shell vertex count.  For d >= 3
and k >= 2 geodesics are not unique, so D(p) c(p)^(k-1) counts the
(shell k-1 -> shell k) edge incidences and strictly exceeds the vertex
count: at (d=3, p=2, k=2) breadth-first search finds 98 vertices carrying
140 back-edges.  `enumerate_classes` is the ground truth; `sphere_size`
is the closed form.  The Dirichlet series machinery is defined over the
closed form throughout.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations, product

from .errors import BudgetError, DomainError, default_budgets
from .intmat import (
    Mat,
    as_mat,
    content,
    det_int,
    elementary_divisors,
    hnf_rows,
    row_span_contains,
    scale,
    valuation,
)
from .primes import is_prime


@dataclass(frozen=True)
class BuildingParams:
    """Rank and residue characteristic of a lattice class graph."""

    d: int
    p: int

    def __post_init__(self) -> None:
        if self.d < 2:
            raise DomainError(f"need d >= 2, got d={self.d}")
        if not is_prime(self.p):
            raise DomainError(f"p must be prime, got p={self.p}")


def shell_count(d: int, p: int) -> int:
    """Number of classes at distance 1 from the base, D(p)."""
    return (d - 1) * (p**d - 1) // (p - 1)


def shell_ratio(d: int, p: int) -> int:
    """Growth factor c(p) between consecutive shells."""
    return (d - 1) * p ** (d - 1) + (p ** (d - 1) - 1) // (p - 1) - 1


def sphere_size(params: BuildingParams, k: int) -> int:
    """Closed-form shell weight D(p) c(p)^(k-1); D(p^0) = 1.

    Exact vertex count of the distance-k shell for d = 2; for d >= 3 and
    k >= 2 it counts shell-(k-1) edge incidences instead (see module
    docstring), which is what the multiplicative coefficient D(m) uses.
    """
    if k < 0:
        raise DomainError(f"need k >= 0, got {k}")
    if k == 0:
        return 1
    d, p = params.d, params.p
    return shell_count(d, p) * shell_ratio(d, p) ** (k - 1)


def ball_size(params: BuildingParams, k: int) -> int:
    """Partial sum 1 + sum_{j<=k} sphere_size(j), in closed form.

    Exact ball vertex count for d = 2 (and k <= 1 in general).
    """
    if k < 0:
        raise DomainError(f"need k >= 0, got {k}")
    if k == 0:
        return 1
    d, p = params.d, params.p
    c = shell_ratio(d, p)
    return 1 + shell_count(d, p) * (c**k - 1) // (c - 1)


def sl2_sphere_size(p: int, k: int) -> int:
    """Distance-k orbit count for the determinant-one subgroup at d = 2.

    The subgroup only reaches even distances; odd shells are empty and the
    even shell 2j (j >= 1) splits the tree shell as (p+1) p^(2j-1).
    """
    if not is_prime(p):
        raise DomainError(f"p must be prime, got p={p}")
    if k < 0:
        raise DomainError(f"need k >= 0, got {k}")
    if k == 0:
        return 1
    if k % 2 == 1:
        return 0
    return (p + 1) * p ** (k - 1)


def snf_exponents(mat, p: int) -> tuple[int, ...]:
    """p-adic valuations (sorted ascending) of the elementary divisors."""
    if not is_prime(p):
        raise DomainError(f"p must be prime, got p={p}")
    m = as_mat(mat)
    if len(m) != len(m[0]):
        raise DomainError("need a square matrix")
    if det_int(m) == 0:
        raise DomainError("need a nonsingular matrix")
    return tuple(valuation(e, p) for e in elementary_divisors(m))


def building_distance(mat, p: int) -> int:
    """Graph distance from [row span of mat] to the base class.

    Equals the spread max - min of the divisor valuations; validated
    against breadth-first search distances in the test suite.
    """
    exps = snf_exponents(mat, p)
    return exps[-1] - exps[0]


@dataclass(frozen=True)
class LatticeClass:
    """Homothety class of Z_p-lattices, keyed by its primitive HNF."""

    p: int
    hnf: Mat

    @staticmethod
    def from_matrix(mat, p: int) -> "LatticeClass":
        """Class of the Z_p-row-span of an arbitrary nonsingular integer matrix.

        Prime-to-p structure is discarded by adjoining p^e Z^d for e the
        p-valuation of the determinant; the result is rescaled to content
        coprime to p.
        """
        m = as_mat(mat)
        d = len(m)
        if len(m[0]) != d:
            raise DomainError("need a square matrix")
        det = det_int(m)
        if det == 0:
            raise DomainError("need a nonsingular matrix")
        if not is_prime(p):
            raise DomainError(f"p must be prime, got p={p}")
        q = p ** valuation(det, p)
        ident = tuple(
            tuple(q if i == j else 0 for j in range(d)) for i in range(d)
        )
        h = hnf_rows(m + ident)
        return LatticeClass(p, _primitive_rescale(h, p))

    def det_exponent(self) -> int:
        return valuation(det_int(self.hnf), self.p)

    def divisor_exponents(self) -> tuple[int, ...]:
        return snf_exponents(self.hnf, self.p)


def _primitive_rescale(h: Mat, p: int) -> Mat:
    t = min(valuation(x, p) for row in h for x in row if x != 0)
    if t == 0:
        return h
    q = p**t
    return tuple(tuple(x // q for x in row) for row in h)


def base_class(params: BuildingParams) -> LatticeClass:
    ident = tuple(
        tuple(1 if i == j else 0 for j in range(params.d)) for i in range(params.d)
    )
    return LatticeClass(params.p, ident)


def _subspace_bases(d: int, j: int, p: int):
    """Reduced echelon bases of all j-dimensional subspaces of F_p^d."""
    for pivots in combinations(range(d), j):
        free = [
            (i, c)
            for i in range(j)
            for c in range(pivots[i] + 1, d)
            if c not in pivots
        ]
        for values in product(range(p), repeat=len(free)):
            rows = [[0] * d for _ in range(j)]
            for i in range(j):
                rows[i][pivots[i]] = 1
            for (i, c), v in zip(free, values):
                rows[i][c] = v
            yield rows


def neighbors(cls: LatticeClass, d: int) -> list[LatticeClass]:
    """All classes adjacent to cls.

    Intermediate lattices pL < M < L correspond to proper nonzero
    subspaces of L/pL over F_p; each echelon basis row is lifted to an
    integer combination of the rows of the HNF representative.
    """
    p = cls.p
    h = cls.hnf
    ph = scale(h, p)
    out = []
    for j in range(1, d):
        for basis in _subspace_bases(d, j, p):
            lifts = tuple(
                tuple(sum(c * h[k][col] for k, c in enumerate(row)) for col in range(d))
                for row in basis
            )
            stacked = hnf_rows(ph + lifts)
            out.append(LatticeClass(p, _primitive_rescale(stacked, p)))
    return out


def is_adjacent(a: LatticeClass, b: LatticeClass) -> bool:
    """Adjacency by the divisibility definition: reps with pL < M < L.

    Independent of `neighbors`; used to cross-check it.  Tries both
    orderings and all p-power rescalings that can place b's lattice
    between p*a and a.
    """
    if a.p != b.p:
        raise DomainError("classes live over different primes")
    if a == b:
        return False
    p = a.p
    for outer, inner in ((a, b), (b, a)):
        eo = outer.det_exponent()
        ei = inner.det_exponent()
        # [index in p-exponent] of p^t * inner inside outer is d*t + ei - eo;
        # strict betweenness needs that index in (0, d).
        for t in range(0, (eo - ei) // len(outer.hnf) + 2):
            idx = len(outer.hnf) * t + ei - eo
            if not 0 < idx < len(outer.hnf):
                continue
            cand = scale(inner.hnf, p**t)
            if row_span_contains(outer.hnf, cand) and row_span_contains(
                cand, scale(outer.hnf, p)
            ):
                return True
    return False


def enumerate_classes(
    params: BuildingParams, k_max: int, max_classes: int | None = None
) -> list[tuple[LatticeClass, int]]:
    """Breadth-first enumeration of all classes within distance k_max.

    Returns (class, distance) pairs sorted by distance then representative,
    so output order is deterministic.  The predicted ball size is checked
    against the budget before any work happens.
    """
    if k_max < 0:
        raise DomainError(f"need k_max >= 0, got {k_max}")
    limit = max_classes if max_classes is not None else default_budgets().max_classes
    predicted = ball_size(params, k_max)
    if predicted > limit:
        raise BudgetError(
            f"predicted ball size {predicted} exceeds class budget {limit}"
        )
    base = base_class(params)
    dist: dict[LatticeClass, int] = {base: 0}
    frontier = [base]
    for k in range(1, k_max + 1):
        new: list[LatticeClass] = []
        for v in frontier:
            for w in neighbors(v, params.d):
                if w not in dist:
                    dist[w] = k
                    new.append(w)
        frontier = new
    return sorted(dist.items(), key=lambda item: (item[1], item[0].hnf))


def hnf_universe(d: int, p: int, e: int) -> list[Mat]:
    """All primitive HNF class representatives with determinant p^e.

    Direct stratified generation (diagonal p-power patterns times reduced
    off-diagonal residues); serves as an independent oracle for the
    breadth-first enumeration.
    """
    if e < 0:
        raise DomainError(f"need e >= 0, got {e}")
    out: list[Mat] = []
    for diag_exps in _compositions(e, d):
        diag = [p**a for a in diag_exps]
        ranges = [range(diag[j]) for j in range(d)]
        offdiag_positions = [(i, j) for j in range(d) for i in range(j)]
        for values in product(*(ranges[j] for i, j in offdiag_positions)):
            rows = [[0] * d for _ in range(d)]
            for i in range(d):
                rows[i][i] = diag[i]
            for (i, j), v in zip(offdiag_positions, values):
                rows[i][j] = v
            mat = tuple(tuple(r) for r in rows)
            if content(mat) % p != 0:
                out.append(mat)
    return out


def _compositions(total: int, parts: int):
    if parts == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def class_records(params: BuildingParams, k_max: int, max_classes: int | None = None):
    """JSON-ready dicts for every class within distance k_max."""
    for cls, dist in enumerate_classes(params, k_max, max_classes):
        yield {
            "hnf": [list(row) for row in cls.hnf],
            "distance": dist,
            "divisor_exponents": list(cls.divisor_exponents()),
        }

"""Exact abelian-group computations over the integers.

The central object is the stationary inductive limit

    Z^m --A--> Z^m --A--> Z^m --> ...

which is modelled as the union of A_r^{-n} Z^r inside Q^r, where A_r is the
action of A on the (saturated) eventual range of A.  Isomorphism of two such
limits is shift equivalence and is not decided here; instead groups carry
comparable invariants (rank, characteristic polynomial, |det|) and a
membership oracle.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Sequence, Union

from .intmatrix import IntMatrix, Vector, solve_exact


class InconsistencyError(AssertionError):
    """An identity that must hold by theory failed; signals a bug, not bad input."""


# ---------------------------------------------------------------------------
# Normal forms

def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    """Return (g, x, y) with a*x + b*y = g = gcd(a, b) >= 0."""
    x0, y0, x1, y1 = 1, 0, 0, 1
    while b:
        q, r = divmod(a, b)
        a, b = b, r
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        return -a, -x0, -y0
    return a, x0, y0


class _Tracked:
    """A mutable matrix together with the unimodular transforms applied to it.

    Maintains  work = left @ original @ right  and the inverses of left/right.
    """

    def __init__(self, m: IntMatrix):
        self.a = m.tolist()
        n, k = m.shape
        self.n, self.k = n, k
        self.left = IntMatrix.identity(n).tolist()
        self.left_inv = IntMatrix.identity(n).tolist()
        self.right = IntMatrix.identity(k).tolist()
        self.right_inv = IntMatrix.identity(k).tolist()

    # row ops act on a and left; inverse ops act on columns of left_inv
    def row_combine(self, i: int, j: int, p: int, q: int, r: int, s: int) -> None:
        """rows (i, j) <- (p*ri + q*rj, r*ri + s*rj), with ps - qr = ±1."""
        det = p * s - q * r
        assert det in (1, -1)
        for mat in (self.a, self.left):
            ri, rj = mat[i], mat[j]
            mat[i] = [p * x + q * y for x, y in zip(ri, rj)]
            mat[j] = [r * x + s * y for x, y in zip(ri, rj)]
        # inverse of [[p,q],[r,s]] is det * [[s,-q],[-r,p]]; apply on the right of left_inv
        ip, iq, ir, is_ = det * s, -det * q, -det * r, det * p
        for row in self.left_inv:
            ci, cj = row[i], row[j]
            row[i] = ci * ip + cj * ir
            row[j] = ci * iq + cj * is_

    def col_combine(self, i: int, j: int, p: int, q: int, r: int, s: int) -> None:
        """cols (i, j) <- (p*ci + q*cj, r*ci + s*cj), with ps - qr = ±1."""
        det = p * s - q * r
        assert det in (1, -1)
        for mat in (self.a, self.right):
            for row in mat:
                ci, cj = row[i], row[j]
                row[i] = p * ci + q * cj
                row[j] = r * ci + s * cj
        ip, iq, ir, is_ = det * s, -det * q, -det * r, det * p
        ri, rj = self.right_inv[i], self.right_inv[j]
        self.right_inv[i] = [ip * x + ir * y for x, y in zip(ri, rj)]
        self.right_inv[j] = [iq * x + is_ * y for x, y in zip(ri, rj)]

    def swap_rows(self, i: int, j: int) -> None:
        if i != j:
            self.row_combine(i, j, 0, 1, 1, 0)

    def swap_cols(self, i: int, j: int) -> None:
        if i != j:
            self.col_combine(i, j, 0, 1, 1, 0)

    def add_row(self, target: int, source: int, c: int) -> None:
        if c:
            self.row_combine(target, source, 1, c, 0, 1)

    def add_col(self, target: int, source: int, c: int) -> None:
        if c:
            self.col_combine(target, source, 1, c, 0, 1)

    def negate_row(self, i: int) -> None:
        for mat in (self.a, self.left):
            mat[i] = [-x for x in mat[i]]
        for row in self.left_inv:
            row[i] = -row[i]


def _mat(rows: list[list[int]], ncols: int) -> IntMatrix:
    return IntMatrix(rows, ncols)


@dataclass(frozen=True)
class SmithForm:
    """M = U @ D @ V with U, V unimodular and d_1 | d_2 | ... on the diagonal of D."""

    U: IntMatrix
    D: IntMatrix
    V: IntMatrix
    U_inv: IntMatrix
    V_inv: IntMatrix

    @property
    def invariants(self) -> list[int]:
        return [d for d in self.D.diagonal() if d]

    @property
    def rank(self) -> int:
        return len(self.invariants)


def smith_form(M: IntMatrix) -> SmithForm:
    t = _Tracked(M)
    n, k = t.n, t.k
    a = t.a
    for s in range(min(n, k)):
        # choose a nonzero pivot of least absolute value
        nz = [(abs(a[i][j]), i, j) for i in range(s, n) for j in range(s, k) if a[i][j]]
        if not nz:
            break
        _, pi, pj = min(nz)
        t.swap_rows(s, pi)
        t.swap_cols(s, pj)
        while True:
            done = True
            for i in range(s + 1, n):
                if a[i][s]:
                    if a[i][s] % a[s][s] == 0:
                        t.add_row(i, s, -(a[i][s] // a[s][s]))
                    else:
                        g, x, y = _xgcd(a[s][s], a[i][s])
                        p, q = a[s][s] // g, a[i][s] // g
                        t.row_combine(s, i, x, y, -q, p)
                        done = False
            for j in range(s + 1, k):
                if a[s][j]:
                    if a[s][j] % a[s][s] == 0:
                        t.add_col(j, s, -(a[s][j] // a[s][s]))
                    else:
                        g, x, y = _xgcd(a[s][s], a[s][j])
                        p, q = a[s][s] // g, a[s][j] // g
                        t.col_combine(s, j, x, y, -q, p)
                        done = False
            if not done:
                continue
            # divisibility: fold any entry not divisible by the pivot into the pivot row
            bad = next(
                ((i, j) for i in range(s + 1, n) for j in range(s + 1, k) if a[i][j] % a[s][s]),
                None,
            )
            if bad is None:
                break
            t.add_row(s, bad[0], 1)
        if a[s][s] < 0:
            t.negate_row(s)
    D = _mat(t.a, k)
    # D = left @ M @ right  =>  M = left_inv @ D @ right_inv
    return SmithForm(
        U=_mat(t.left_inv, n),
        D=D,
        V=_mat(t.right_inv, k),
        U_inv=_mat(t.left, n),
        V_inv=_mat(t.right, k),
    )


def smith_normal_form(M: IntMatrix) -> tuple[IntMatrix, IntMatrix, IntMatrix]:
    """Return (U, D, V) with M = U @ D @ V, U and V unimodular."""
    sf = smith_form(M)
    return sf.U, sf.D, sf.V


def hermite_normal_form(M: IntMatrix) -> tuple[IntMatrix, IntMatrix]:
    """Row-style Hermite normal form.

    Returns (H, T) with H = T @ M, T unimodular, H in row echelon form with
    positive pivots and entries above each pivot reduced into [0, pivot).
    """
    t = _Tracked(M)
    a = t.a
    n, k = t.n, t.k
    r = 0
    for c in range(k):
        if r == n:
            break
        rows = [i for i in range(r, n) if a[i][c]]
        if not rows:
            continue
        while True:
            rows = [i for i in range(r, n) if a[i][c]]
            if len(rows) == 1:
                break
            piv = min(rows, key=lambda i: abs(a[i][c]))
            for i in rows:
                if i != piv:
                    t.add_row(i, piv, -(a[i][c] // a[piv][c]))
        t.swap_rows(r, rows[0])
        if a[r][c] < 0:
            t.negate_row(r)
        for i in range(r):
            t.add_row(i, r, -(a[i][c] // a[r][c]))
        r += 1
    return _mat(t.a, k), _mat(t.left, n)


def canonical_basis(vectors: Sequence[Vector], m: int) -> list[Vector]:
    """HNF-reduced basis of the lattice spanned by ``vectors`` in Z^m."""
    if not vectors:
        return []
    H, _ = hermite_normal_form(IntMatrix(vectors, m))
    return [r for r in H.entries if any(r)]


def kernel_basis(M: IntMatrix) -> list[Vector]:
    """A basis of {x in Z^k : M x = 0}, in Hermite normal form."""
    n, k = M.shape
    if n == 0:
        return [tuple(IntMatrix.identity(k).row(i)) for i in range(k)]
    H, T = hermite_normal_form(M.T)
    kern = [T.row(i) for i in range(k) if not any(H.row(i))]
    return canonical_basis(kern, k)


def saturation_basis(vectors: Sequence[Vector], m: int) -> list[Vector]:
    """Basis of (Q-span of vectors) ∩ Z^m."""
    vectors = [v for v in vectors if any(v)]
    if not vectors:
        return []
    annihilator = kernel_basis(IntMatrix(vectors, m))  # y with <y, v> = 0 for all v
    if not annihilator:
        return [IntMatrix.identity(m).row(i) for i in range(m)]
    return kernel_basis(IntMatrix(annihilator, m))


def restrict(A: IntMatrix, basis: Sequence[Vector]) -> IntMatrix:
    """Matrix of A on the A-invariant lattice with the given basis (as columns)."""
    m = A.nrows
    r = len(basis)
    if r == 0:
        return IntMatrix((), 0)
    B = IntMatrix.from_columns(basis, m)
    X = solve_exact(B, A @ B)
    if any(x.denominator != 1 for row in X for x in row):
        raise InconsistencyError("lattice is not invariant under the matrix")
    return IntMatrix(([int(x) for x in row] for row in X), r)


def is_primitive_vector(v: Sequence[int]) -> bool:
    g = 0
    for x in v:
        g = gcd(g, x)
    return g == 1


# ---------------------------------------------------------------------------
# Stationary limits

@dataclass(frozen=True)
class StationaryLimitGroup:
    A: IntMatrix
    rank: int
    basis: tuple[Vector, ...]  # columns in Z^m spanning the saturated eventual range
    reduced: IntMatrix  # action of A in that basis
    charpoly: tuple[int, ...]
    abs_det: int

    @property
    def m(self) -> int:
        return self.A.nrows

    def invariants(self) -> tuple:
        return (self.rank, self.charpoly, self.abs_det)


def stationary_limit(A: IntMatrix) -> StationaryLimitGroup:
    if not A.is_square():
        raise ValueError("stationary limit needs a square matrix")
    m = A.nrows
    Am = A ** m
    r = Am.rank()
    if (Am @ A).rank() != r:
        raise InconsistencyError("rank of A^k did not stabilize by k = m")
    basis = tuple(saturation_basis(Am.columns(), m)) if r else ()
    if len(basis) != r:
        raise InconsistencyError("saturated eventual range has the wrong rank")
    reduced = restrict(A, basis)
    cp = tuple(reduced.charpoly()) if r else (1,)
    det = abs(reduced.det()) if r else 1
    if r and det == 0:
        raise InconsistencyError("reduced action is not injective")
    return StationaryLimitGroup(A, r, basis, reduced, cp, det)


def _clear_denominators(v: Sequence[Fraction]) -> tuple[Vector, int]:
    den = 1
    for x in v:
        den = den * x.denominator // gcd(den, x.denominator)
    return tuple(int(x * den) for x in v), den


def limit_contains(G: StationaryLimitGroup, v: Sequence) -> bool:
    """Is the rational vector v (reduced coordinates) in the union of A_r^{-n} Z^r?

    Membership is monotone in n.  For a prime p with p^k exactly dividing the
    common denominator, A_r splits p-adically into a unit part and a part
    whose r-th power is divisible by p; so n = r * k suffices, and
    r * bit_length(denominator) bounds every k.
    """
    v = [Fraction(x) for x in v]
    if len(v) != G.rank:
        raise ValueError("vector length does not match the rank of the group")
    x, den = _clear_denominators(v)
    if den == 1:
        return True
    if gcd(den, G.abs_det) == 1:
        return False
    n = G.rank * den.bit_length()
    y = G.reduced ** n @ x
    return all(c % den == 0 for c in y)


def limits_agree_on_samples(G1: StationaryLimitGroup, G2: StationaryLimitGroup, samples) -> bool:
    if G1.rank != G2.rank:
        raise ValueError("rank mismatch")
    if G1.basis != G2.basis:
        raise ValueError("groups are not presented on the same reduced basis")
    return all(limit_contains(G1, s) == limit_contains(G2, s) for s in samples)


# ---------------------------------------------------------------------------
# Group descriptions

@dataclass(frozen=True)
class Zero:
    kind = "zero"

    def torsion(self) -> tuple[int, ...]:
        return ()

    def to_json(self) -> dict:
        return {"kind": "zero", "rank": 0, "torsion": []}

    def __str__(self) -> str:
        return "0"


@dataclass(frozen=True)
class FreeCyclic:
    kind = "Z"

    def torsion(self) -> tuple[int, ...]:
        return ()

    def to_json(self) -> dict:
        return {"kind": "Z", "rank": 1, "torsion": []}

    def __str__(self) -> str:
        return "Z"


@dataclass(frozen=True)
class FiniteCyclic:
    order: int
    kind = "finite_cyclic"

    def __post_init__(self):
        if self.order < 2:
            raise ValueError("finite cyclic group of order < 2")

    def torsion(self) -> tuple[int, ...]:
        return (self.order,)

    def to_json(self) -> dict:
        return {"kind": "finite_cyclic", "rank": 0, "order": self.order, "torsion": [self.order]}

    def __str__(self) -> str:
        return f"Z_{self.order}"


@dataclass(frozen=True)
class StationaryLimit:
    group: StationaryLimitGroup
    kind = "stationary_limit"

    def torsion(self) -> tuple[int, ...]:
        return ()

    def to_json(self) -> dict:
        g = self.group
        return {
            "kind": "stationary_limit",
            "rank": g.rank,
            "charpoly": list(g.charpoly),
            "abs_det": g.abs_det,
            "torsion": [],
            "matrix": g.reduced.tolist(),
            "basis": [list(b) for b in g.basis],
        }

    def __str__(self) -> str:
        g = self.group
        if g.rank == 1:
            a = abs(g.reduced[0, 0])
            return "Z" if a == 1 else f"Z[1/{a}]"
        if g.abs_det == 1:
            return f"Z^{g.rank}"
        return f"lim(Z^{g.rank}, {g.reduced.tolist()})"


@dataclass(frozen=True)
class Composite:
    """Torsion subgroup plus the torsion-free quotient; the extension is not determined."""

    torsion_orders: tuple[int, ...]
    quotient: "GroupDescription"
    extension_note: str = "extension class not computed"
    kind = "composite"

    def __post_init__(self):
        if any(q < 2 for q in self.torsion_orders):
            raise ValueError("torsion orders must be at least 2")
        if self.quotient.torsion():
            raise ValueError("torsion-free quotient carries torsion")

    def torsion(self) -> tuple[int, ...]:
        return self.torsion_orders

    def to_json(self) -> dict:
        q = self.quotient.to_json()
        return {
            "kind": "composite",
            "rank": q["rank"],
            "torsion": list(self.torsion_orders),
            "quotient": q,
            "extension_note": self.extension_note,
        }

    def __str__(self) -> str:
        tor = " + ".join(f"Z_{q}" for q in self.torsion_orders)
        return f"[torsion {tor}; torsion-free quotient {self.quotient}]"


GroupDescription = Union[Zero, FreeCyclic, FiniteCyclic, StationaryLimit, Composite]


def describe_limit(A: IntMatrix) -> GroupDescription:
    g = stationary_limit(A)
    return Zero() if g.rank == 0 else StationaryLimit(g)


def quotient_by_invariant_vector(A: IntMatrix, w: Sequence[int], c: int = 2) -> GroupDescription:
    """lim(Z^m, A) modulo the subgroup generated by c*[w, 1], for A w = w.

    Since Z^m/<w> is torsion free and [w, 1] has infinite order, the torsion
    of the quotient is exactly <[w,1]>/<c[w,1]>, cyclic of order c, and the
    torsion-free quotient is the limit of A acting on Z^m/<w>.
    """
    w = tuple(w)
    if c < 1:
        raise ValueError("c must be positive")
    if not any(w):
        return describe_limit(A)
    if A @ w != w:
        raise ValueError("w is not invariant under A")
    if not is_primitive_vector(w):
        raise ValueError("w is not primitive")
    m = A.nrows
    sf = smith_form(IntMatrix.from_columns([w], m))
    # w = U D V with D = e_1 and V = [±1]; so U e_1 = ±w
    sign = sf.V[0, 0]
    U = IntMatrix.from_columns([tuple(sign * x for x in sf.U.col(0))] + sf.U.columns()[1:], m)
    U_inv = IntMatrix(
        [tuple(sign * x for x in sf.U_inv.row(0))] + [sf.U_inv.row(i) for i in range(1, m)], m
    )
    if U.col(0) != w or (U_inv @ U) != IntMatrix.identity(m):
        raise InconsistencyError("basis extension of w failed")
    B = U_inv @ A @ U
    if any(B[i, 0] for i in range(1, m)) or B[0, 0] != 1:
        raise InconsistencyError("A does not fix w in the extended basis")
    rest = list(range(1, m))
    induced = B.submatrix(rest, rest)
    quotient = describe_limit(induced) if rest else Zero()
    if c == 1:
        return quotient
    return Composite((c,), quotient)


def kernel_of_invariant_functional(A: IntMatrix, w_star: Sequence[int]) -> GroupDescription:
    """Kernel of the functional induced by w_star on lim(Z^m, A).

    Only A(ker w_star) ⊆ ker w_star is needed, i.e. w_star A must be a
    rational multiple of w_star; the case of interest is w_star A = w_star.
    """
    w_star = tuple(w_star)
    if not any(w_star):
        return describe_limit(A)
    m = A.nrows
    if IntMatrix([w_star, A.left_apply(w_star)], m).rank() != 1:
        raise ValueError("kernel of w_star is not invariant under A")
    K = kernel_basis(IntMatrix([w_star], m))
    if len(K) != m - 1:
        raise InconsistencyError("kernel of a nonzero functional must have rank m-1")
    for v in K:
        if sum(a * b for a, b in zip(w_star, A @ v)):
            raise InconsistencyError("kernel is not A-invariant")
    if not K:
        return Zero()
    return describe_limit(restrict(A, K))


def restricted_matrix(A: IntMatrix, w_star: Sequence[int]) -> IntMatrix:
    """The matrix of A on ker(w_star) in its HNF basis."""
    K = kernel_basis(IntMatrix([tuple(w_star)], A.nrows))
    return restrict(A, K)

from fractions import Fraction

import pytest
import sympy
from hypothesis import given
from hypothesis import strategies as st
from sympy.matrices.normalforms import invariant_factors

from solenoid_homology import (
    Composite,
    IntMatrix,
    StationaryLimit,
    Zero,
    hermite_normal_form,
    kernel_of_invariant_functional,
    limit_contains,
    limits_agree_on_samples,
    quotient_by_invariant_vector,
    smith_normal_form,
    stationary_limit,
)
from solenoid_homology.abelian import (
    describe_limit,
    is_primitive_vector,
    kernel_basis,
    restrict,
    saturation_basis,
    smith_form,
)

matrices = st.tuples(st.integers(1, 4), st.integers(1, 4)).flatmap(
    lambda s: st.lists(
        st.lists(st.integers(-9, 9), min_size=s[1], max_size=s[1]), min_size=s[0], max_size=s[0]
    )
)
square = st.integers(1, 4).flatmap(
    lambda n: st.lists(st.lists(st.integers(-3, 4), min_size=n, max_size=n), min_size=n, max_size=n)
)


def brute_contains(G, v, steps=80):
    # v is in the limit iff some A_r^n v is integral; search far past any needed n
    y = [Fraction(x) for x in v]
    for _ in range(steps):
        if all(c.denominator == 1 for c in y):
            return True
        y = list(G.reduced @ y)
    return False


@given(matrices)
def test_smith_form_against_sympy(rows):
    M = IntMatrix(rows)
    U, D, V = smith_normal_form(M)
    assert U @ D @ V == M
    assert abs(U.det()) == 1 and abs(V.det()) == 1
    assert D.is_diagonal()
    d = [x for x in D.diagonal() if x]
    assert all(x > 0 for x in d)
    assert all(d[i + 1] % d[i] == 0 for i in range(len(d) - 1))
    expected = [abs(int(x)) for x in invariant_factors(sympy.Matrix(rows)) if x]
    assert d == expected


@given(matrices)
def test_smith_inverses(rows):
    sf = smith_form(IntMatrix(rows))
    assert sf.U @ sf.U_inv == IntMatrix.identity(sf.U.nrows)
    assert sf.V @ sf.V_inv == IntMatrix.identity(sf.V.nrows)


def test_smith_known():
    _, D, _ = smith_normal_form(IntMatrix([[2, 4, 4], [-6, 6, 12], [10, -4, -16]]))
    assert D.diagonal() == (2, 6, 12)


@given(matrices)
def test_hermite_form(rows):
    M = IntMatrix(rows)
    H, T = hermite_normal_form(M)
    assert T @ M == H
    assert abs(T.det()) == 1
    lead = -1
    for r in H.entries:
        if not any(r):
            continue
        j = next(i for i, x in enumerate(r) if x)
        assert j > lead and r[j] > 0
        lead = j
    # entries above each pivot are reduced
    for i, r in enumerate(H.entries):
        if any(r):
            j = next(c for c, x in enumerate(r) if x)
            assert all(0 <= H.entries[k][j] < r[j] for k in range(i))
    assert H.rank() == sympy.Matrix(rows).rank()


@given(matrices)
def test_kernel_basis(rows):
    M = IntMatrix(rows)
    K = kernel_basis(M)
    assert len(K) == M.ncols - sympy.Matrix(rows).rank()
    for v in K:
        assert not any(M @ v)
    # saturated: the kernel lattice has no index in its rational span
    if K:
        _, D, _ = smith_normal_form(IntMatrix(K, M.ncols))
        assert all(x == 1 for x in D.diagonal())


def test_saturation_basis():
    assert saturation_basis([(2, 4)], 2) == [(1, 2)]
    assert saturation_basis([(3, 0), (0, 5)], 2) == [(1, 0), (0, 1)]


def test_restrict():
    A = IntMatrix([[2, 0], [0, 3]])
    assert restrict(A, [(0, 1)]) == IntMatrix([[3]])


def test_primitive_vector():
    assert is_primitive_vector((1, -1))
    assert not is_primitive_vector((2, 4))
    assert not is_primitive_vector((0, 0))


def test_limit_of_three():
    G = stationary_limit(IntMatrix([[3]]))
    assert (G.rank, G.charpoly, G.abs_det) == (1, (1, -3), 3)
    assert str(StationaryLimit(G)) == "Z[1/3]"
    assert limit_contains(G, [Fraction(1, 27)])
    assert not limit_contains(G, [Fraction(1, 2)])
    assert not limit_contains(G, [Fraction(1, 6)])


def test_limit_with_kernel():
    # eventual range is the first coordinate
    G = stationary_limit(IntMatrix([[2, 1], [0, 0]]))
    assert G.rank == 1 and G.abs_det == 2
    assert str(describe_limit(IntMatrix([[0, 1], [0, 0]]))) == "0"


def test_limit_unimodular():
    G = stationary_limit(IntMatrix([[0, 1], [1, 0]]))
    assert (G.rank, G.abs_det, G.charpoly) == (2, 1, (1, 0, -1))
    assert str(StationaryLimit(G)) == "Z^2"
    assert not limit_contains(G, [Fraction(1, 2), 0])


@given(square)
def test_stationary_limit_against_sympy(rows):
    A = IntMatrix(rows)
    m = A.nrows
    G = stationary_limit(A)
    S = sympy.Matrix(rows)
    assert G.rank == (S ** m).rank()
    # charpoly(A) = x^(m - r) charpoly(A_r)
    x = sympy.Symbol("x")
    full = sympy.Poly(S.charpoly(x).as_expr(), x)
    part = sympy.Poly(list(G.charpoly), x) * sympy.Poly(x ** (m - G.rank), x)
    assert full == part
    # the basis is saturated and spans the eventual range
    if G.rank:
        B = sympy.Matrix([list(b) for b in G.basis]).T
        assert B.rank() == G.rank
        assert sympy.Matrix.hstack(B, S ** m).rank() == G.rank


@given(square, st.lists(st.integers(-4, 4), min_size=4, max_size=4), st.sampled_from([2, 3, 4, 6, 9, 10]))
def test_membership_against_brute_force(rows, nums, den):
    G = stationary_limit(IntMatrix(rows))
    if not G.rank:
        return
    v = [Fraction(n, den) for n in nums[: G.rank]]
    assert limit_contains(G, v) == brute_contains(G, v)


def test_samples_agree_for_square():
    A = IntMatrix([[2, 1], [1, 2]])
    G1, G2 = stationary_limit(A), stationary_limit(A ** 2)
    samples = [(Fraction(1, 3), 0), (Fraction(1, 2), 0), (Fraction(1, 3), Fraction(1, 3))]
    assert limits_agree_on_samples(G1, G2, samples)
    assert [limit_contains(G1, s) for s in samples] == [False, False, True]


def test_samples_distinguish_different_limits():
    G2, G3 = stationary_limit(IntMatrix([[2]])), stationary_limit(IntMatrix([[3]]))
    half = [Fraction(1, 2)]
    assert limit_contains(G2, half) and not limit_contains(G3, half)
    assert not limits_agree_on_samples(G2, G3, [half])


def test_samples_rank_mismatch():
    with pytest.raises(ValueError):
        limits_agree_on_samples(stationary_limit(IntMatrix([[3]])), stationary_limit(IntMatrix.identity(2)), [])


def test_quotient_by_fixed_vector():
    # [w,1] with w = e1 fixed; Z^2/<e1> carries multiplication by 3
    A = IntMatrix([[1, 5], [0, 3]])
    g = quotient_by_invariant_vector(A, (1, 0), 2)
    assert isinstance(g, Composite)
    assert g.torsion() == (2,)
    assert str(g.quotient) == "Z[1/3]"


def test_quotient_h_like():
    # fixed vector (-1, 1) of [[2,1],[1,2]]: quotient is Z[1/3]
    g = quotient_by_invariant_vector(IntMatrix([[2, 1], [1, 2]]), (-1, 1), 2)
    assert g.torsion() == (2,) and str(g.quotient) == "Z[1/3]"


def test_quotient_rejects_bad_vectors():
    A = IntMatrix([[2, 1], [1, 2]])
    with pytest.raises(ValueError):
        quotient_by_invariant_vector(A, (1, 0))
    with pytest.raises(ValueError):
        quotient_by_invariant_vector(IntMatrix.identity(2), (2, 0))
    assert str(quotient_by_invariant_vector(A, (0, 0))) == str(describe_limit(A))


def test_quotient_of_rank_one():
    g = quotient_by_invariant_vector(IntMatrix([[1]]), (1,), 2)
    assert g.torsion() == (2,) and isinstance(g.quotient, Zero)


def test_kernel_of_functional():
    g = kernel_of_invariant_functional(IntMatrix([[2, 0], [0, 3]]), (0, 1))
    assert str(g) == "Z[1/2]"
    g = kernel_of_invariant_functional(IntMatrix([[2, 1], [1, 2]]), (-1, 1))
    assert str(g) == "Z[1/3]"
    with pytest.raises(ValueError):
        kernel_of_invariant_functional(IntMatrix([[2, 1], [1, 2]]), (1, 0))


def test_group_descriptions_json():
    g = describe_limit(IntMatrix([[3]]))
    assert g.to_json()["kind"] == "stationary_limit" and g.to_json()["abs_det"] == 3
    c = Composite((2,), g)
    assert c.to_json()["torsion"] == [2] and c.to_json()["rank"] == 1
    with pytest.raises(ValueError):
        Composite((1,), g)

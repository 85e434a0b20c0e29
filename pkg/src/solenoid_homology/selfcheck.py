"""Property checks run against a single input rule.

Each check returns a ``Check`` (name, passed, detail).  The suite covers
the algebraic identities the computation relies on, so that a failure
points at the property that broke rather than at a wrong final answer.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterator

from .abelian import (
    Composite,
    StationaryLimit,
    is_primitive_vector,
    kernel_basis,
    limit_contains,
    limits_agree_on_samples,
    restrict,
    smith_form,
    stationary_limit,
)
from .homology import HomologyResult, analyze
from .intmatrix import IntMatrix, solve_exact
from .normalform import EdgeClass, normalize, orientability_by_solver
from .rule_core import (
    WrappingRule,
    format_rule,
    invert_word,
    parse_rule,
    power_rule,
    reverse_edge,
    signed_matrix,
    substitute,
    unsigned_matrix,
)
from .validator import check_nonfolding, flattening_number, validate

POWERS = (2, 3)


@dataclass(frozen=True)
class Check:
    name: str
    passed: bool
    detail: str = ""


def _group_det(g) -> int | None:
    if isinstance(g, Composite):
        g = g.quotient
    return g.group.abs_det if isinstance(g, StationaryLimit) else None


def _group_rank(g) -> int:
    return g.to_json()["rank"]


def _effective_power(res: HomologyResult) -> int:
    return 1 if res.orientable else res.norm.power_used


def sample_vectors(rank: int, abs_det: int) -> list[tuple[Fraction, ...]]:
    dens = sorted({2, 3, 5, 7, max(abs_det, 2)})
    out = []
    for q in dens:
        for i in range(rank):
            out.append(tuple(Fraction(1 if j == i else 0, q) for j in range(rank)))
        out.append(tuple(Fraction(1, q) for _ in range(rank)))
    return out


def _checks(rule: WrappingRule, res: HomologyResult) -> Iterator[tuple[str, Callable[[], bool | str]]]:
    M = unsigned_matrix(rule)
    S = signed_matrix(rule)
    m = rule.m

    # rule core
    yield "roundtrip", lambda: parse_rule(format_rule(rule)) == rule
    yield "matrix_homomorphism", lambda: all(
        unsigned_matrix(power_rule(rule, n)) == M ** n and signed_matrix(power_rule(rule, n)) == S ** n
        for n in (1, 2, 3)
    )
    yield "invert_involution", lambda: all(invert_word(invert_word(w)) == w for w in rule.words)
    yield "reverse_involution", lambda: all(reverse_edge(reverse_edge(rule, e), e) == rule for e in range(m))
    yield "substitute_distributes", lambda: all(
        substitute(rule, w[: len(w) // 2]) + substitute(rule, w[len(w) // 2:]) == substitute(rule, w)
        for w in rule.words
    )

    # validator
    yield "powers_are_pre_solenoids", lambda: all(validate(power_rule(rule, n)).ok for n in POWERS)
    d = flattening_number(rule).d
    yield "flattening_after_power", lambda: flattening_number(power_rule(rule, d)).d == 1
    yield "nonfolding_reverse_invariant", lambda: all(
        check_nonfolding(reverse_edge(rule, e)).passed for e in range(m)
    )

    # normal form
    norm, obs = res.norm, res.obstruction
    NM = unsigned_matrix(norm.rule)
    yield "deciders_agree", lambda: res.orientable == orientability_by_solver(rule).oriented
    yield "gamma_s_fixes_w", lambda: NM @ obs.w == obs.w
    yield "w_star_invariant", lambda: NM.T.left_apply(obs.w_star) == obs.w_star
    yield "w_zero_or_primitive", lambda: not any(obs.w) or is_primitive_vector(obs.w)

    def classification_stable():
        for n in (1, 2):
            other = normalize(power_rule(rule, n * norm.power_used))
            if other.power_used != 1:
                return f"power {n * norm.power_used} still needed power {other.power_used}"
            same = other.classification == norm.classification
            swap = {EdgeClass.EA: EdgeClass.EB, EdgeClass.EB: EdgeClass.EA, EdgeClass.E0: EdgeClass.E0}
            swapped = tuple(swap[c] for c in other.classification) == norm.classification
            if not (same or swapped):
                return f"classification changed at n={n}"
        return True

    yield "classification_stable", classification_stable

    def square_positive():
        o = orientability_by_solver(rule)
        if o.kind != "negative":
            return True
        return orientability_by_solver(power_rule(rule, 2)).kind == "positive"

    yield "oriented_square_positive", square_positive

    # abelian engine
    def snf_reconstructs():
        for A in (res.sft.gamma_s, res.sft.gamma_u, S):
            sf = smith_form(A)
            d = sf.invariants
            if sf.U @ sf.D @ sf.V != A or abs(sf.U.det()) != 1 or abs(sf.V.det()) != 1:
                return False
            if any(d[i + 1] % d[i] for i in range(len(d) - 1)):
                return False
        return True

    yield "snf_reconstruction", snf_reconstructs
    yield "rank_stabilizes", lambda: all(
        (A ** m).rank() == (A ** (m + 1)).rank() and all(
            (A ** k).rank() >= (A ** (k + 1)).rank() for k in range(1, m + 1))
        for A in (M, S)
    )

    def quotient_torsion():
        tor = res.hs(0).torsion()
        return tor == () if res.orientable else tor == (2,)

    yield "quotient_torsion", quotient_torsion

    def kernel_powering():
        if res.orientable:
            return True
        A = res.homology_sft.gamma_u
        K = kernel_basis(IntMatrix([obs.w_star], m))
        R = restrict(A, K)
        return all(restrict(A ** n, K) == R ** n for n in POWERS)

    yield "kernel_powering", kernel_powering

    def membership_shift():
        # v is in the limit iff A_r v is: A_r acts as an automorphism
        G = stationary_limit(res.sft.gamma_s)
        if G.rank == 0:
            return True
        for v in sample_vectors(G.rank, G.abs_det):
            if limit_contains(G, v) != limit_contains(G, G.reduced @ v):
                return f"membership of {v} not shift invariant"
        for v in IntMatrix.identity(G.rank).columns():
            x = solve_exact(G.reduced, IntMatrix.from_columns([v], G.rank))
            if not limit_contains(G, tuple(r[0] for r in x)):
                return "A_r^-1 e_i is missing"
        return True

    yield "membership_shift", membership_shift

    # homology
    yield "degree_support", lambda: set(res.h_s) <= {0, 1} and set(res.h_u) <= {0, 1} and all(
        str(res.hs(n)) == "0" and str(res.hu(n)) == "0" for n in range(2, 6)
    )
    yield "transpose_relation", lambda: res.sft.gamma_s == M and res.sft.gamma_u == M.T
    yield "orientability_trichotomy", lambda: (
        (res.orientable and str(res.hs(1)) == "Z" and str(res.hu(1)) == "Z")
        != (not res.orientable and str(res.hs(1)) == "0" and str(res.hu(1)) == "Z_2")
    )
    yield "torsion_dichotomy", lambda: res.torsion is not None
    yield "cech_comparison", lambda: res.cech.matches_h_u0 is (True if res.orientable else None)

    def powering_invariance():
        # the groups coincide; reported matrices are powered, so |det| scales with the exponent
        e = _effective_power(res)
        G = stationary_limit(res.sft.gamma_s)
        for n in POWERS:
            other = analyze(power_rule(rule, n))
            if other.orientable != res.orientable:
                return f"orientability changed at n={n}"
            en = n * _effective_power(other)
            pairs = [(res.hs(k), other.hs(k), e, en) for k in (0, 1)]
            pairs += [(res.hu(k), other.hu(k), e, en) for k in (0, 1)]
            pairs += [(res.dim_s, other.dim_s, 1, n), (res.dim_u, other.dim_u, 1, n)]
            for a, b, ea, eb in pairs:
                if _group_rank(a) != _group_rank(b) or a.torsion() != b.torsion():
                    return f"rank/torsion changed at n={n}"
                da, db = _group_det(a), _group_det(b)
                if (da is None) != (db is None):
                    return f"group kind changed at n={n}"
                if da is not None and da ** eb != db ** ea:
                    return f"|det| relation failed at n={n}: {da} vs {db}"
            Gn = stationary_limit(other.sft.gamma_s)
            if G.rank and not limits_agree_on_samples(G, Gn, sample_vectors(G.rank, G.abs_det)):
                return f"membership differs between A and A^{n}"
        return True

    yield "powering_invariance", powering_invariance


def run_selfcheck(rule: WrappingRule) -> list[Check]:
    res = analyze(rule)
    out = []
    for name, fn in _checks(rule, res):
        try:
            verdict = fn()
        except Exception as exc:  # a crash is reported as a failed property
            out.append(Check(name, False, f"{type(exc).__name__}: {exc}"))
            continue
        if verdict is True:
            out.append(Check(name, True))
        else:
            out.append(Check(name, False, verdict if isinstance(verdict, str) else ""))
    return out


def replay_checks(rule: WrappingRule, recorded: dict) -> list[Check]:
    """Re-verify the identities on a previously emitted analysis JSON."""
    norm = normalize(rule)
    M = unsigned_matrix(norm.rule)
    w = tuple(int(x) for x in recorded["w"])
    w_star = tuple(int(x) for x in recorded.get("w_star", w))
    checks = [
        Check("replay_dimensions", len(w) == rule.m and len(w_star) == rule.m),
    ]
    if not checks[0].passed:
        return checks
    checks += [
        Check("gamma_s_fixes_w", M @ w == w, f"gamma_s(w) = {list(M @ w)}, w = {list(w)}"),
        Check("w_star_invariant", M.T.left_apply(w_star) == w_star),
        Check("w_zero_or_primitive", not any(w) or is_primitive_vector(w)),
        Check("power_matches", int(recorded.get("power_used", norm.power_used)) == norm.power_used),
    ]
    return [c if not c.passed else Check(c.name, True) for c in checks]

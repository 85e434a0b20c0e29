"""Homology of a one-solenoid given by a valid wrapping rule.

Matrix convention: vectors are columns indexed by the edges.  With M the
unsigned count matrix (M[i][k] = occurrences of edge k in the word of i),

    gamma_s = i o t^*  has matrix M,
    gamma_u = t o i^*  has matrix M^T.

Closed forms used (degrees other than 0 and 1 are always zero):

    orientable:      H^s = (D^s, Z),             H^u = (D^u, Z)
    non-orientable:  H^s = (D^s / <2[w,1]>, 0),  H^u = (ker w*, Z_2)
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

from .abelian import (
    FiniteCyclic,
    FreeCyclic,
    GroupDescription,
    InconsistencyError,
    Zero,
    describe_limit,
    kernel_of_invariant_functional,
    quotient_by_invariant_vector,
)
from .intmatrix import IntMatrix
from .normalform import (
    NormalizedRule,
    ObstructionData,
    Orientation,
    normalize,
    obstruction,
    orientability_by_germs,
    orientability_by_solver,
)
from .rule_core import WrappingRule, format_word, reverse_edges, signed_matrix, unsigned_matrix
from .validator import ValidationReport, validate

CONVENTIONS = {
    "vectors": "columns indexed by edges in declaration order",
    "unsigned_matrix": "M[i][k] = occurrences of edge k in the word of edge i",
    "gamma_s": "M",
    "gamma_u": "M^T",
    "cech_h1": "limit of S^T, S the signed matrix after orientation flips",
    "degrees": "groups not listed are zero",
}


class GraphEdge(NamedTuple):
    source: int  # i(e_{i,j}) = e_i
    position: int  # j, 1-based
    target: int  # t(e_{i,j}) = e_{f(i,j)}


@dataclass(frozen=True)
class SftPresentation:
    vertices: int
    edges: tuple[GraphEdge, ...]
    gamma_s: IntMatrix
    gamma_u: IntMatrix


def build_sft(rule: WrappingRule) -> SftPresentation:
    """The covering graph: one vertex per edge, one graph edge per letter."""
    m = rule.m
    edges = tuple(
        GraphEdge(i, j + 1, l.edge) for i, word in enumerate(rule.words) for j, l in enumerate(word)
    )
    gs = [[0] * m for _ in range(m)]
    gu = [[0] * m for _ in range(m)]
    for e in edges:
        gs[e.source][e.target] += 1  # gamma_s(e_k) = sum over graph edges ending at k of their source
        gu[e.target][e.source] += 1  # gamma_u(e_i) = sum over graph edges leaving i of their target
    return SftPresentation(m, edges, IntMatrix(gs), IntMatrix(gu))


def dimension_groups(sft: SftPresentation) -> tuple[GroupDescription, GroupDescription]:
    return describe_limit(sft.gamma_s), describe_limit(sft.gamma_u)


def homology_s(sft: SftPresentation, obs: ObstructionData, orientable: bool) -> dict[int, GroupDescription]:
    if orientable:
        return {0: describe_limit(sft.gamma_s), 1: FreeCyclic()}
    return {0: quotient_by_invariant_vector(sft.gamma_s, obs.w, 2), 1: Zero()}


def homology_u(sft: SftPresentation, obs: ObstructionData, orientable: bool) -> dict[int, GroupDescription]:
    if orientable:
        return {0: describe_limit(sft.gamma_u), 1: FreeCyclic()}
    return {0: kernel_of_invariant_functional(sft.gamma_u, obs.w_star), 1: FiniteCyclic(2)}


@dataclass(frozen=True)
class CechResult:
    h0: GroupDescription
    h1: GroupDescription
    matrix: IntMatrix  # the matrix whose limit is H^1
    sign_twisted: bool
    matches_h_u0: bool | None  # None: no comparison asserted (non-orientable)

    def to_json(self) -> dict:
        return {
            "h0": self.h0.to_json(),
            "h1": self.h1.to_json(),
            "matrix": self.matrix.tolist(),
            "sign_twisted": self.sign_twisted,
            "matches_h_u0": self.matches_h_u0,
        }


def cech(rule: WrappingRule, norm: NormalizedRule | None = None) -> CechResult:
    """Čech cohomology of the inverse limit: Z in degree 0 and lim(S^T) in degree 1.

    For an orientable rule the normalization flips make every letter sign
    equal to a common sign.  When that sign is negative, lim(-A) is
    identified with lim(A) through [v, n] -> [(-1)^n v, n], so the
    unsigned matrix is used; then H^1 coincides entry-for-entry with H^u_0.
    """
    if norm is None:
        norm = normalize(rule)
    if not orientability_by_germs(norm):
        S = signed_matrix(rule)
        return CechResult(FreeCyclic(), describe_limit(S.T), S.T, False, None)
    flipped = reverse_edges(rule, norm.flips)
    S = signed_matrix(flipped)
    M = unsigned_matrix(rule)
    twisted = False
    if S != M:
        if -S != M:
            raise InconsistencyError("orientation flips did not make the rule oriented")
        S, twisted = -S, True
    h1 = describe_limit(S.T)
    matches = h1 == describe_limit(build_sft(rule).gamma_u)
    if not matches:
        raise InconsistencyError("Čech H^1 differs from H^u_0 for an orientable rule")
    return CechResult(FreeCyclic(), h1, S.T, twisted, True)


@dataclass(frozen=True)
class TorsionSummary:
    h_s: dict[int, tuple[int, ...]]
    h_u: dict[int, tuple[int, ...]]
    torsion_free: bool

    def to_json(self) -> dict:
        return {
            "h_s": {str(k): list(v) for k, v in self.h_s.items()},
            "h_u": {str(k): list(v) for k, v in self.h_u.items()},
            "torsion_free": self.torsion_free,
        }


@dataclass(frozen=True)
class HomologyResult:
    rule: WrappingRule
    validation: ValidationReport
    norm: NormalizedRule
    obstruction: ObstructionData
    orientation: Orientation
    orientable: bool
    sft: SftPresentation  # covering shift of the input rule
    homology_sft: SftPresentation  # the presentation the closed forms are evaluated on
    h_s: dict[int, GroupDescription]
    h_u: dict[int, GroupDescription]
    dim_s: GroupDescription
    dim_u: GroupDescription
    cech: CechResult

    @property
    def torsion(self) -> TorsionSummary:
        return torsion_report(self)

    def hs(self, n: int) -> GroupDescription:
        return self.h_s.get(n, Zero())

    def hu(self, n: int) -> GroupDescription:
        return self.h_u.get(n, Zero())

    def to_json(self) -> dict:
        names = self.rule.names
        return {
            "rule": {n: format_word(self.rule, w) for n, w in zip(names, self.rule.words)},
            "edges": list(names),
            "orientable": self.orientable,
            "orientation": {
                "kind": self.orientation.kind,
                "flips": sorted(names[i] for i in self.orientation.flips),
                "description": self.orientation.describe(names),
            },
            "power_used": self.norm.power_used,
            "flips": sorted(names[i] for i in self.norm.flips),
            "normalization": self.norm.to_json(),
            "w": list(self.obstruction.w),
            "w_star": list(self.obstruction.w_star),
            "sft": {
                "vertices": self.sft.vertices,
                "edges": len(self.sft.edges),
                "gamma_s": self.sft.gamma_s.tolist(),
                "gamma_u": self.sft.gamma_u.tolist(),
            },
            "homology_power": 1 if self.orientable else self.norm.power_used,
            "h_s": {str(k): v.to_json() for k, v in sorted(self.h_s.items())},
            "h_u": {str(k): v.to_json() for k, v in sorted(self.h_u.items())},
            "dim_s": self.dim_s.to_json(),
            "dim_u": self.dim_u.to_json(),
            "cech": self.cech.to_json(),
            "torsion": self.torsion.to_json(),
            "conventions": CONVENTIONS,
        }


def torsion_report(result: HomologyResult) -> TorsionSummary:
    """Torsion of every reported group, checked against the expected dichotomy."""
    h_s = {n: g.torsion() for n, g in result.h_s.items()}
    h_u = {n: g.torsion() for n, g in result.h_u.items()}
    if result.orientable:
        expected_s, expected_u = {0: (), 1: ()}, {0: (), 1: ()}
    else:
        expected_s, expected_u = {0: (2,), 1: ()}, {0: (), 1: (2,)}
    if h_s != expected_s or h_u != expected_u:
        raise InconsistencyError(f"torsion {h_s}, {h_u} contradicts the orientability dichotomy")
    return TorsionSummary(h_s, h_u, result.orientable)


class ValidationFailed(ValueError):
    def __init__(self, report: ValidationReport):
        super().__init__("not a pre-solenoid: " + ", ".join(report.failures()))
        self.report = report


def analyze(rule: WrappingRule) -> HomologyResult:
    report = validate(rule)
    if not report.ok:
        raise ValidationFailed(report)
    norm = normalize(rule)
    obs = obstruction(norm)
    orientable = orientability_by_germs(norm)
    orientation = orientability_by_solver(rule)
    if orientation.oriented != orientable:
        raise InconsistencyError("germ criterion and sign solver disagree on orientability")
    sft = build_sft(rule)
    # Orientable: the groups only need D^s/D^u, read off the input itself.
    # Non-orientable: w lives on the normalized power.
    hsft = sft if orientable else build_sft(norm.rule)
    dim_s, dim_u = dimension_groups(sft)
    result = HomologyResult(
        rule=rule,
        validation=report,
        norm=norm,
        obstruction=obs,
        orientation=orientation,
        orientable=orientable,
        sft=sft,
        homology_sft=hsft,
        h_s=homology_s(hsft, obs, orientable),
        h_u=homology_u(hsft, obs, orientable),
        dim_s=dim_s,
        dim_u=dim_u,
        cech=cech(rule, norm),
    )
    torsion_report(result)
    return result

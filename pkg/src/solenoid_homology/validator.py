"""Combinatorial checks that a wrapping rule presents a pre-solenoid.

Expansion is a metric condition; it is replaced here by a surrogate
(primitive count matrix and every edge eventually subdivided).  Markov
holds automatically for a single vertex.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass, field

from .germs import all_germs, end_germ, germ_map, start_germ
from .intmatrix import IntMatrix
from .rule_core import WrappingRule, unsigned_matrix


def wielandt_bound(m: int) -> int:
    return (m - 1) ** 2 + 1


@dataclass(frozen=True)
class MixingCheck:
    passed: bool
    witness: int | None = None


@dataclass(frozen=True)
class FoldViolation:
    edge: str
    position: int  # j of the subdivision point x_{i,j}, 1-based
    depth: int  # first n with gamma^n(g1) == gamma^n(g2)


@dataclass(frozen=True)
class NonfoldingCheck:
    passed: bool
    violations: tuple[FoldViolation, ...] = ()


@dataclass(frozen=True)
class FlatteningCheck:
    passed: bool
    d: int | None = None
    image_size: int | None = None


@dataclass(frozen=True)
class ValidationReport:
    nonempty: bool
    empty_edges: tuple[str, ...]
    mixing: MixingCheck
    nonfolding: NonfoldingCheck
    flattening: FlatteningCheck
    expansion_surrogate: bool
    markov: bool = field(default=True)

    @property
    def ok(self) -> bool:
        return (
            self.nonempty
            and self.mixing.passed
            and self.nonfolding.passed
            and self.flattening.passed
            and self.expansion_surrogate
            and self.markov
        )

    def failures(self) -> list[str]:
        out = []
        if not self.nonempty:
            out.append("nonempty")
        for name in ("mixing", "nonfolding", "flattening"):
            if not getattr(self, name).passed:
                out.append(name)
        if not self.expansion_surrogate:
            out.append("expansion_surrogate")
        return out

    def to_json(self) -> dict:
        d = asdict(self)
        d["empty_edges"] = list(self.empty_edges)
        d["nonfolding"]["violations"] = [asdict(v) for v in self.nonfolding.violations]
        d["pre_solenoid"] = self.ok
        d["failures"] = self.failures()
        return d


def _positive_pattern(M: IntMatrix) -> list[list[bool]]:
    return [[x > 0 for x in row] for row in M.entries]


def _bool_mul(a: list[list[bool]], b: list[list[bool]]) -> list[list[bool]]:
    n = len(b)
    cols = [[b[k][j] for k in range(n)] for j in range(len(b[0]))]
    return [[any(x and y for x, y in zip(row, c)) for c in cols] for row in a]


def check_mixing(M: IntMatrix) -> MixingCheck:
    """Primitivity of a nonnegative square matrix, least positive power as witness."""
    if not M.is_square() or any(x < 0 for r in M.entries for x in r):
        raise ValueError("mixing check needs a square nonnegative matrix")
    base = _positive_pattern(M)
    cur = base
    for n in range(1, wielandt_bound(M.nrows) + 1):
        if all(all(r) for r in cur):
            return MixingCheck(True, n)
        cur = _bool_mul(cur, base)
    return MixingCheck(False)


def check_nonfolding(rule: WrappingRule) -> NonfoldingCheck:
    """Local injectivity of every iterate at the subdivision points.

    At the point between letters j and j+1 of a word, the two sides land on
    the end germ of letter j and the start germ of letter j+1.  A fold
    happens iff their forward orbits under the germ map ever meet.
    """
    gamma = germ_map(rule)
    bound = (2 * rule.m) ** 2
    violations = []
    for i, word in enumerate(rule.words):
        for j in range(len(word) - 1):
            g1, g2 = end_germ(word[j]), start_germ(word[j + 1])
            for n in range(bound + 1):
                if g1 == g2:
                    violations.append(FoldViolation(rule.names[i], j + 1, n))
                    break
                g1, g2 = gamma[g1], gamma[g2]
    return NonfoldingCheck(not violations, tuple(violations))


def flattening_number(rule: WrappingRule) -> FlatteningCheck:
    """Least d >= 1 for which the d-th iterate collapses the vertex star to two germs."""
    gamma = germ_map(rule)
    current = set(all_germs(rule.m))
    prev_size = None
    d = 0
    while True:
        current = {gamma[g] for g in current}
        d += 1
        if len(current) == 2:
            return FlatteningCheck(True, d, 2)
        if len(current) == prev_size:
            # gamma permutes the eventual image; its size never changes again
            return FlatteningCheck(False, None, len(current))
        prev_size = len(current)


def check_expansion_surrogate(rule: WrappingRule) -> bool:
    M = unsigned_matrix(rule)
    if not check_mixing(M).passed:
        return False
    P = M
    for _ in range(wielandt_bound(rule.m)):
        if all(sum(r) >= 2 for r in P.entries):
            return True
        P = P @ M
    return False


def validate(rule: WrappingRule) -> ValidationReport:
    M = unsigned_matrix(rule)
    empty = tuple(n for n, w in zip(rule.names, rule.words) if not w)
    mixing = check_mixing(M)
    if empty:
        return ValidationReport(
            nonempty=False,
            empty_edges=empty,
            mixing=mixing,
            nonfolding=NonfoldingCheck(False),
            flattening=FlatteningCheck(False),
            expansion_surrogate=check_expansion_surrogate(rule),
        )
    return ValidationReport(
        nonempty=True,
        empty_edges=(),
        mixing=mixing,
        nonfolding=check_nonfolding(rule),
        flattening=flattening_number(rule),
        expansion_surrogate=check_expansion_surrogate(rule),
    )


def is_pre_solenoid(rule: WrappingRule) -> bool:
    return validate(rule).ok

"""Normalization of a valid rule and the orientability obstruction.

After replacing the rule by a suitable power, the vertex star is squeezed
onto two germs, both fixed.  Orienting edges so that those germs are the
initial germ of one edge (``a``) and the terminal germ of another (``b``,
possibly the same edge), every edge falls into one of three classes by
where its two end germs go: both to the ``a`` germ (Ea), both to the ``b``
germ (Eb), or one each (E0).  The rule is orientable iff Ea and Eb are empty.
"""

from __future__ import annotations

import enum
from collections import deque
from dataclasses import dataclass
from itertools import product
from typing import Mapping

from .abelian import InconsistencyError, is_primitive_vector
from .germs import End, Germ, germ_map, image, power_map, reversal
from .intmatrix import IntMatrix
from .rule_core import WrappingRule, power_rule, reverse_edges, unsigned_matrix

POWER_CAP = 64
MAX_POWER_LETTERS = 2_000_000


class EdgeClass(str, enum.Enum):
    EA = "Ea"
    EB = "Eb"
    E0 = "E0"


class NormalizationError(ValueError):
    pass


@dataclass(frozen=True)
class NormalizedRule:
    rule: WrappingRule  # power of the input with ``flips`` reversed
    power_used: int
    flips: frozenset[int]
    a_edge: int
    b_edge: int
    classification: tuple[EdgeClass, ...]

    @property
    def germ_a(self) -> Germ:
        return Germ(self.a_edge, End.INIT)

    @property
    def germ_b(self) -> Germ:
        return Germ(self.b_edge, End.TERM)

    def edges_in(self, cls: EdgeClass) -> list[int]:
        return [i for i, c in enumerate(self.classification) if c == cls]

    def to_json(self) -> dict:
        names = self.rule.names
        return {
            "power_used": self.power_used,
            "flips": sorted(names[i] for i in self.flips),
            "a_edge": names[self.a_edge],
            "b_edge": names[self.b_edge],
            "classification": {names[i]: c.value for i, c in enumerate(self.classification)},
        }


@dataclass(frozen=True)
class ObstructionData:
    w: tuple[int, ...]
    w_star: tuple[int, ...]

    @property
    def is_zero(self) -> bool:
        return not any(self.w)


def _admissible(gamma: Mapping[Germ, Germ], lengths) -> bool:
    img = image(gamma)
    return len(img) == 2 and all(gamma[g] == g for g in img) and all(n >= 3 for n in lengths)


def _word_lengths(M: IntMatrix) -> list[int]:
    return [sum(r) for r in M.entries]


def find_power(rule: WrappingRule, cap: int = POWER_CAP) -> int:
    """Least n for which the n-th iterate flattens to two fixed germs with all words of length >= 3."""
    gamma = germ_map(rule)
    M = unsigned_matrix(rule)
    gn = gamma
    Mn = M
    for n in range(1, cap + 1):
        if _admissible(gn, _word_lengths(Mn)):
            return n
        gn = {g: gamma[h] for g, h in gn.items()}
        Mn = Mn @ M
    raise NormalizationError(f"no admissible power up to {cap}; the rule is not a pre-solenoid")


def classify_edges(gamma: Mapping[Germ, Germ], germ_a: Germ, germ_b: Germ, m: int):
    """Return (classification, extra_flips) for an oriented germ map.

    E0 edges whose initial germ goes to germ_b are reported in extra_flips:
    reversing them makes the initial germ of every E0 edge land on germ_a.
    """
    classes = []
    flips = set()
    for e in range(m):
        gi, gt = gamma[Germ(e, End.INIT)], gamma[Germ(e, End.TERM)]
        if gi == germ_a and gt == germ_a:
            classes.append(EdgeClass.EA)
        elif gi == germ_b and gt == germ_b:
            classes.append(EdgeClass.EB)
        else:
            classes.append(EdgeClass.E0)
            if gi != germ_a:
                flips.add(e)
    return tuple(classes), flips


def normalize(rule: WrappingRule, cap: int = POWER_CAP) -> NormalizedRule:
    n = find_power(rule, cap)
    m = rule.m
    gamma = power_map(germ_map(rule), n)
    g1, g2 = sorted(image(gamma))

    candidates = []
    # Reverse a subset of the (at most two) edges carrying the fixed germs so
    # that one fixed germ is initial (a) and the other terminal (b).
    carriers = sorted({g1.edge, g2.edge})
    for bits in product((False, True), repeat=len(carriers)):
        base = {e for e, b in zip(carriers, bits) if b}
        h1, h2 = (g.flipped() if g.edge in base else g for g in (g1, g2))
        if {h1.end, h2.end} != {End.INIT, End.TERM}:
            continue
        ga, gb = (h1, h2) if h1.end == End.INIT else (h2, h1)
        oriented = reversal(gamma, base)
        _, extra = classify_edges(oriented, ga, gb, m)
        flips = frozenset(base | extra)
        key = tuple(i in flips for i in range(m))
        candidates.append((key, flips, ga.edge, gb.edge))
    if not candidates:
        raise InconsistencyError("fixed germs could not be oriented")
    # prefer leaving low-index edges unreversed
    _, flips, a_edge, b_edge = min(candidates)

    mn = unsigned_matrix(rule) ** n
    if sum(_word_lengths(mn)) > MAX_POWER_LETTERS:
        raise NormalizationError(f"power {n} of this rule is too long to expand")
    powered = reverse_edges(power_rule(rule, n), flips)
    final_gamma = germ_map(powered)
    germ_a, germ_b = Germ(a_edge, End.INIT), Germ(b_edge, End.TERM)
    classification, extra = classify_edges(final_gamma, germ_a, germ_b, m)
    if extra or final_gamma[germ_a] != germ_a or final_gamma[germ_b] != germ_b:
        raise InconsistencyError("normalized rule violates its invariants")
    if image(final_gamma) != {germ_a, germ_b}:
        raise InconsistencyError("germ image is not {germ_a, germ_b}")
    return NormalizedRule(powered, n, flips, a_edge, b_edge, classification)


def obstruction(norm: NormalizedRule) -> ObstructionData:
    """w = Sum(Ea) - Sum(Eb), with the same entries read as a functional.

    Checks the identities gamma_s w = w and w* gamma_u = w* exactly, where
    gamma_s = M and gamma_u = M^T for the unsigned matrix M of the
    normalized rule.
    """
    w = tuple(
        1 if c == EdgeClass.EA else -1 if c == EdgeClass.EB else 0 for c in norm.classification
    )
    M = unsigned_matrix(norm.rule)
    if M @ w != w:
        raise InconsistencyError(f"gamma_s(w) != w for w = {w}")
    if M.T.left_apply(w) != w:
        raise InconsistencyError(f"w* o gamma_u != w* for w = {w}")
    if any(w) and not is_primitive_vector(w):
        raise InconsistencyError("w is neither zero nor primitive")
    return ObstructionData(w, w)


def orientability_by_germs(norm: NormalizedRule) -> bool:
    return all(c == EdgeClass.E0 for c in norm.classification)


@dataclass(frozen=True)
class Orientation:
    kind: str  # "positive", "negative" or "none"
    flips: frozenset[int] = frozenset()

    @property
    def oriented(self) -> bool:
        return self.kind != "none"

    def describe(self, names) -> str:
        if self.kind == "none":
            return "not orientable"
        fl = ", ".join(names[i] for i in sorted(self.flips))
        return f"{self.kind} with flips {{{fl}}}"


def _solve_signs(rule: WrappingRule, target: int) -> frozenset[int] | None:
    """Find flips with s * flip(i) * flip(k) == target for every letter (k, s) in word i."""
    m = rule.m
    adj: list[list[tuple[int, int]]] = [[] for _ in range(m)]
    for i, word in enumerate(rule.words):
        for l in word:
            need = l.sign * target  # flip(i) * flip(k) must equal this
            adj[i].append((l.edge, need))
            adj[l.edge].append((i, need))
    value: list[int | None] = [None] * m
    for root in range(m):
        if value[root] is not None:
            continue
        value[root] = 1
        queue = deque([root])
        while queue:
            u = queue.popleft()
            for v, need in adj[u]:
                want = value[u] * need
                if value[v] is None:
                    value[v] = want
                    queue.append(v)
                elif value[v] != want:
                    return None
    return frozenset(i for i in range(m) if value[i] == -1)


def orientability_by_solver(rule: WrappingRule) -> Orientation:
    """Decide orientation directly from the letter signs (2-colouring of a constraint graph)."""
    flips = _solve_signs(rule, 1)
    if flips is not None:
        return Orientation("positive", flips)
    flips = _solve_signs(rule, -1)
    if flips is not None:
        return Orientation("negative", flips)
    return Orientation("none")

"""Edge-end germs at the vertex and the map the rule induces on them."""

from __future__ import annotations

import enum
from typing import Mapping, NamedTuple

from .rule_core import Letter, WrappingRule


class End(enum.IntEnum):
    INIT = 0
    TERM = 1


class Germ(NamedTuple):
    edge: int
    end: End

    def flipped(self) -> Germ:
        return Germ(self.edge, End(1 - self.end))

    def label(self, names) -> str:
        return f"{'Init' if self.end == End.INIT else 'Term'} {names[self.edge]}"


GermMap = Mapping[Germ, Germ]


def all_germs(m: int) -> list[Germ]:
    return [Germ(e, end) for e in range(m) for end in End]


def start_germ(letter: Letter) -> Germ:
    return Germ(letter.edge, End.INIT if letter.sign > 0 else End.TERM)


def end_germ(letter: Letter) -> Germ:
    return Germ(letter.edge, End.TERM if letter.sign > 0 else End.INIT)


def germ_map(rule: WrappingRule) -> dict[Germ, Germ]:
    """Where the map sends each germ at the vertex.

    The initial germ of edge i goes to the start of the first letter of its
    word, the terminal germ to the end of the last letter.
    """
    gamma = {}
    for i, word in enumerate(rule.words):
        if not word:
            raise ValueError(f"edge {rule.names[i]!r} has an empty word")
        gamma[Germ(i, End.INIT)] = start_germ(word[0])
        gamma[Germ(i, End.TERM)] = end_germ(word[-1])
    return gamma


def iterate(gamma: GermMap, germ: Germ, n: int) -> Germ:
    for _ in range(n):
        germ = gamma[germ]
    return germ


def compose_maps(outer: GermMap, inner: GermMap) -> dict[Germ, Germ]:
    return {g: outer[inner[g]] for g in inner}


def power_map(gamma: GermMap, n: int) -> dict[Germ, Germ]:
    out = {g: g for g in gamma}
    for _ in range(n):
        out = compose_maps(gamma, out)
    return out


def image(gamma: GermMap, germs=None) -> set[Germ]:
    return {gamma[g] for g in (gamma if germs is None else germs)}


def reversal(gamma: GermMap, edges) -> dict[Germ, Germ]:
    """Germ map after reversing the given edges (relabels Init <-> Term)."""
    edges = set(edges)

    def relabel(g: Germ) -> Germ:
        return g.flipped() if g.edge in edges else g

    return {relabel(g): relabel(h) for g, h in gamma.items()}

"""Iterated cyclic branched covers of the projective plane.

A tower is a list of stages (d_j, m_j): a d_j-fold cyclic cover branched over
the preimage of a smooth plane curve of degree d_j * m_j. With
``K = sum (d_j - 1) m_j - 3`` and ``Q = sum (d_j^2 - 1) m_j^2 - 3``::

    c1^2  = prod(d) K^2
    c2    = prod(d) (K^2 + Q) / 2
    sigma = -prod(d) Q / 3

and the canonical class is K times the pulled-back line class.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable

from .errors import InconsistentFormulas, InputError, NotGeneralType
from .invariants import CharNumbers
from .verdicts import Rule, Verdict

AMPLE_ASSUMPTION = "ample canonical bundle assumed whenever the canonical multiple is >= 1"
ACD_FLAG = "ACD: iterated branched covers of the plane are almost completely decomposable"


@dataclass(frozen=True)
class CoverTower:
    stages: tuple[tuple[int, int], ...]

    def __init__(self, stages: Iterable[Iterable[int]]):
        stages = tuple((int(d), int(m)) for d, m in stages)
        if not stages:
            raise InputError("a tower needs at least one stage")
        for d, m in stages:
            if d < 2 or m < 1:
                raise InputError(f"invalid stage (d={d}, m={m}): need d >= 2, m >= 1")
        object.__setattr__(self, "stages", stages)

    @property
    def degree(self) -> int:
        return math.prod(d for d, _ in self.stages)

    @property
    def canonical_multiple(self) -> int:
        return sum((d - 1) * m for d, m in self.stages) - 3

    def to_json(self) -> dict:
        return {"stages": [list(s) for s in self.stages]}

    @classmethod
    def from_json(cls, data: dict) -> CoverTower:
        return cls(data["stages"])

    @classmethod
    def parse(cls, text: str) -> CoverTower:
        """``"2:3,5:1"`` -> stages [(2, 3), (5, 1)]."""
        try:
            return cls(tuple(map(int, part.split(":"))) for part in text.split(","))
        except ValueError as exc:
            raise InputError(f"cannot parse tower {text!r}: {exc}") from None


def chern(tower: CoverTower) -> CharNumbers:
    n = tower.degree
    K = tower.canonical_multiple
    Q = sum((d * d - 1) * m * m for d, m in tower.stages) - 3
    c1sq = n * K * K
    twice_c2 = n * (K * K + Q)
    thrice_sigma = -n * Q
    if twice_c2 % 2 or thrice_sigma % 3 or (c1sq + twice_c2 // 2) % 12:
        raise InconsistentFormulas(f"non-integral invariants for {tower}")
    c2, sigma = twice_c2 // 2, thrice_sigma // 3
    chi = (c1sq + c2) // 12
    cn = CharNumbers(chi=chi, c1sq=c1sq, e=c2, sigma=sigma)
    if cn.c1sq + cn.c2 != 12 * cn.chi:
        raise InconsistentFormulas(f"c1^2 + c2 != 12 chi for {tower}")
    return cn


def canonical_divisibility(tower: CoverTower) -> int:
    """Divisibility of the canonical class; the surface is spin iff it is even."""
    K = tower.canonical_multiple
    if K <= 0:
        raise NotGeneralType(f"canonical multiple {K} <= 0: not of general type")
    return K


def is_spin(tower: CoverTower) -> bool:
    return canonical_divisibility(tower) % 2 == 0


def einstein_flag(tower: CoverTower) -> Verdict:
    K = tower.canonical_multiple
    subject = f"tower{list(tower.stages)}"
    rule = Rule.evaluate("aubin-yau", canonical_multiple=K)
    if not rule.holds:
        return Verdict("unknown", (rule,), ("not of general type",), subject)
    return Verdict("KE-exists", (rule,), (AMPLE_ASSUMPTION, ACD_FLAG), subject)

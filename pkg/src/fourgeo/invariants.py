"""Invariant bundles of simply connected 4-manifolds and the classification
predicates built on them.

All quantities are Python integers; ratios are :class:`fractions.Fraction`.
The two coordinate systems are related by::

    c1^2 = 2e + 3 sigma          chi = (e + sigma) / 4
    e    = 12 chi - c1^2         sigma = c1^2 - 8 chi
"""

from __future__ import annotations

from dataclasses import asdict, dataclass
from fractions import Fraction
from typing import Literal

from .errors import InputError, NonRealizable, RokhlinViolation, SpinInput

Parity = Literal["spin", "non-spin"]
PARITIES = ("spin", "non-spin")


@dataclass(frozen=True)
class CharNumbers:
    chi: int
    c1sq: int
    e: int
    sigma: int

    def __post_init__(self):
        if self.c1sq != 2 * self.e + 3 * self.sigma:
            raise InputError(f"c1sq={self.c1sq} != 2e + 3sigma for {self}")
        if 4 * self.chi != self.e + self.sigma:
            raise InputError(f"4chi != e + sigma for {self}")

    @property
    def c2(self) -> int:
        return self.e

    @property
    def slope(self) -> Fraction:
        """c1^2 / chi."""
        return Fraction(self.c1sq, self.chi)

    @property
    def signature_ratio(self) -> Fraction:
        """|sigma| / e."""
        return Fraction(abs(self.sigma), self.e)

    def blowup(self, count: int = 1) -> CharNumbers:
        return from_e_sigma(self.e + count, self.sigma - count)

    def to_json(self) -> dict:
        return asdict(self)


def from_chi_c1sq(chi: int, c1sq: int) -> CharNumbers:
    return CharNumbers(chi=chi, c1sq=c1sq, e=12 * chi - c1sq, sigma=c1sq - 8 * chi)


def from_e_sigma(e: int, sigma: int) -> CharNumbers:
    if (e + sigma) % 4:
        raise NonRealizable(f"e + sigma = {e + sigma} is not divisible by 4")
    return CharNumbers(chi=(e + sigma) // 4, c1sq=2 * e + 3 * sigma, e=e, sigma=sigma)


@dataclass(frozen=True)
class HomeoType:
    """Freedman's classification datum for a closed simply connected 4-manifold
    (indefinite forms; the definite cases never arise here)."""

    b_plus: int
    b_minus: int
    parity: Parity
    simply_connected: bool = True

    @property
    def e(self) -> int:
        return 2 + self.b_plus + self.b_minus

    @property
    def sigma(self) -> int:
        return self.b_plus - self.b_minus

    def char_numbers(self) -> CharNumbers:
        return from_e_sigma(self.e, self.sigma)

    def label(self) -> str:
        if self.parity == "non-spin":
            return f"{self.b_plus}CP2 # {self.b_minus}CP2bar"
        return f"spin(b+={self.b_plus}, b-={self.b_minus})"

    def to_json(self) -> dict:
        return asdict(self)


def homeo_type(cn: CharNumbers, parity: Parity) -> HomeoType:
    if parity not in PARITIES:
        raise InputError(f"unknown parity {parity!r}")
    if cn.e < 2:
        raise NonRealizable(f"e={cn.e} < 2 for a simply connected manifold")
    twice_plus = cn.e - 2 + cn.sigma
    twice_minus = cn.e - 2 - cn.sigma
    if twice_plus % 2 or twice_plus < 0 or twice_minus < 0:
        raise NonRealizable(f"no non-negative integral b+/b- for e={cn.e}, sigma={cn.sigma}")
    if parity == "spin" and cn.sigma % 16:
        raise RokhlinViolation(f"spin manifold with sigma={cn.sigma} not divisible by 16")
    return HomeoType(twice_plus // 2, twice_minus // 2, parity)


def hitchin_thorpe(cn: CharNumbers) -> Literal["strict", "equality", "violated"]:
    """Classify 2e - 3|sigma| by sign."""
    gap = 2 * cn.e - 3 * abs(cn.sigma)
    if gap > 0:
        return "strict"
    return "equality" if gap == 0 else "violated"


def dissolve_target(ht: HomeoType) -> tuple[int, int]:
    """(p, q) with the manifold homeomorphic to pCP2 # qCP2bar.

    After one stabilization the target becomes (p + 1, q).
    """
    if ht.parity == "spin":
        raise SpinInput("a spin manifold is never homeomorphic to pCP2 # qCP2bar")
    return ht.b_plus, ht.b_minus

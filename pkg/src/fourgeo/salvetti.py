"""Synthesis of k homeomorphic branched-cover surfaces with distinct
canonical divisibilities.

The tower shape is fixed: ``s`` double covers with parameters mu_j * m0,
followed by 16 cyclic covers of a common prime degree d with parameters
m_1..m_16. For every d in a window D of nearby primes the invariants agree
exactly when

    sum m_j   = A_d = ((P/d)^8 C  - (m0 - 3)) / (d - 1)
    sum m_j^2 = B_d = ((P/d)^16 C' - 3(mu^2 m0^2 - 1)) / (d^2 - 1)

with P the product of D. C and C' are pinned down by congruences and then
shifted so that every (A_d, B_d) lands inside the window where sixteen
positive integers with prescribed sum and sum of squares are known to exist.
Every window inequality is checked exactly instead of relying on asymptotic
estimates, and the final towers are re-evaluated from scratch.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Literal, NamedTuple

from .covers import CoverTower, canonical_divisibility, chern
from .errors import (
    InconsistentFormulas,
    InputError,
    OutOfWindow,
    ParityConflict,
    ParityMismatch,
    WindowFailure,
)
from .invariants import CharNumbers
from .numtheory import Congruence, PrimeWindow, four_square, primes_in_window, solve_C, solve_Cprime

SQUARES = 16
EXHAUSTIVE_LIMIT = 200
# The lower edge of the constructive window exceeds A^2/16 by rho(16-rho)/16 <= 4.
SLACK_LINEAR = 0
SLACK_CONSTANT = 4


# ---------------------------------------------------------------- 16 squares


class FeasibilityWindow(NamedTuple):
    b_min: int
    b_max: int

    def contains(self, a: int, b: int) -> bool:
        return self.b_min <= b <= self.b_max and (b - a) % 2 == 0

    @property
    def width(self) -> int:
        return self.b_max - self.b_min


def _balanced(a: int) -> tuple[int, int]:
    """(q, rho) with a = 16 q + rho: rho parts equal q + 1, the rest q."""
    return divmod(a, SQUARES)


def feasibility_window(a: int) -> FeasibilityWindow:
    """Even-offset B values representable as sum of 16 squares of positive
    integers summing to ``a``, as certified by :func:`salvetti_represent`.

    The lower edge is the balanced sum of squares (the true minimum); it
    satisfies ``b_min <= a^2/16 + SLACK_LINEAR * a + SLACK_CONSTANT``. The
    upper edge is floor(a^2/15).
    """
    if a <= 0:
        raise InputError("A must be positive")
    q, rho = _balanced(a)
    return FeasibilityWindow(rho * (q + 1) ** 2 + (SQUARES - rho) * q * q, a * a // 15)


def _pairs(a: int) -> tuple[list[int], list[tuple[int, int]]]:
    """Split the balanced 16-vector into 8 pairs; return the centres of the
    equal pairs (largest first) and the remaining unequal pair(s)."""
    q, rho = _balanced(a)
    equal = [q + 1] * (rho // 2) + [q] * ((SQUARES - rho) // 2)
    mixed = [(q, q + 1)] if rho % 2 else []
    return equal, mixed


def constructive_guaranteed(a: int) -> bool:
    """True when every B in the window yields positive parts by the pairing
    scheme, whatever four squares are returned."""
    if a < SQUARES:
        return False
    window = feasibility_window(a)
    t_max = math.isqrt((window.b_max - window.b_min) // 2)
    equal, _ = _pairs(a)
    return t_max <= min(equal[:4]) - 1


def _constructive(a: int, b: int, seed: int) -> tuple[int, ...] | None:
    window = feasibility_window(a)
    gap = b - window.b_min
    if gap < 0 or gap % 2:
        return None
    ts = four_square(gap // 2, seed=seed)
    equal, mixed = _pairs(a)
    xs: list[int] = []
    for i, c in enumerate(equal):
        t = ts[i] if i < 4 else 0
        xs += [c + t, c - t]
    for lo, hi in mixed:
        xs += [lo, hi]
    if min(xs) < 1:
        return None
    return tuple(sorted(xs, reverse=True))


@lru_cache(maxsize=None)
def _search(count: int, total: int, squares: int, cap: int) -> tuple[int, ...] | None:
    """Non-increasing positive parts <= cap with given count, sum and square sum."""
    if count == 0:
        return () if total == 0 and squares == 0 else None
    if total < count or total > count * cap:
        return None
    q, rho = divmod(total, count)
    if squares < rho * (q + 1) ** 2 + (count - rho) * q * q:
        return None
    for x in range(min(cap, total - count + 1), 0, -1):
        if x * x > squares:
            continue
        if x * count < total:
            break
        rest = _search(count - 1, total - x, squares - x * x, x)
        if rest is not None:
            return (x,) + rest
    return None


def salvetti_represent(a: int, b: int, seed: int = 0) -> tuple[int, ...]:
    """Sixteen positive integers with sum ``a`` and sum of squares ``b``.

    Inside the window the pairing scheme (c_j + t_j, c_j - t_j) is used,
    with t_1..t_4 from a four-square decomposition of half the excess over
    the balanced vector. Small ``a`` fall back to exhaustive search, which
    also covers solvable pairs outside the window.
    """
    if a <= 0:
        raise InputError("A must be positive")
    if (b - a) % 2:
        raise ParityMismatch(f"B={b} and A={a} differ in parity")
    window = feasibility_window(a)
    xs = None
    if window.contains(a, b):
        xs = _constructive(a, b, seed)
    if xs is None and a <= EXHAUSTIVE_LIMIT:
        xs = _search(SQUARES, a, b, a)
    if xs is None:
        raise OutOfWindow(a, b, tuple(window))
    if sum(xs) != a or sum(x * x for x in xs) != b or min(xs) < 1 or len(xs) != SQUARES:
        raise InconsistentFormulas(f"bad representation {xs} for A={a}, B={b}")
    return xs


# ---------------------------------------------------------------- specification


@dataclass(frozen=True)
class KTupleSpec:
    k: int
    mu: tuple[Fraction, ...]
    delta: Fraction = Fraction(1, 32)
    alpha: Fraction | None = None
    m0: int | None = None
    parity: Literal["odd", "even"] = "odd"
    seed: int = 0
    search_limit: int = 10**12
    max_doublings: int = 48
    max_alpha_refinements: int = 6

    def __post_init__(self):
        object.__setattr__(self, "mu", tuple(Fraction(x) for x in self.mu))
        object.__setattr__(self, "delta", Fraction(self.delta))
        if self.alpha is not None:
            object.__setattr__(self, "alpha", Fraction(self.alpha))
            if self.alpha <= 1:
                raise InputError("alpha must exceed 1")
        if self.k < 2:
            raise InputError("k must be at least 2")
        if not self.mu or any(x <= 0 for x in self.mu):
            raise InputError("mu must be a non-empty list of positive rationals")
        if sum(self.mu) != 1:
            raise InputError(f"mu sums to {sum(self.mu)}, not 1")
        if self.delta <= 0:
            raise InputError("delta must be positive")
        if self.parity not in ("odd", "even"):
            raise InputError(f"parity must be 'odd' or 'even', got {self.parity!r}")
        if self.parity == "even" and self.mu_lcm % 2 == 0:
            raise ParityConflict(
                f"even divisibility needs odd m0, impossible with mu denominators lcm {self.mu_lcm}"
            )
        if self.m0 is not None and not self.admissible(self.m0):
            raise InputError(f"m0={self.m0} is not an admissible value for this spec")

    @property
    def s(self) -> int:
        return len(self.mu)

    @property
    def mu_sq(self) -> Fraction:
        return sum((x * x for x in self.mu), Fraction(0))

    @property
    def mu_lcm(self) -> int:
        return math.lcm(*(x.denominator for x in self.mu))

    def admissible(self, m0: int) -> bool:
        """m0 is a positive multiple of the mu denominators; even iff the
        requested divisibility parity is odd."""
        return m0 > 0 and m0 % self.mu_lcm == 0 and (m0 % 2 == 0) == (self.parity == "odd")

    def next_admissible(self, lower: int) -> int:
        step = self.mu_lcm
        j = max(1, -(-lower // step))
        if self.parity == "odd":
            if (j * step) % 2:
                j += 1
        elif j % 2 == 0:
            j += 1
        return j * step

    def auto_alpha(self) -> Fraction:
        """Window tolerance from a first-order estimate of how far the B-windows
        of neighbouring primes drift apart: the drift is about 16 (gap/d) times
        3 mu^2 m0^2, the window about A^2/480 ~ delta^2 m0^2 / 480."""
        return 1 + self.delta**2 / (23040 * self.mu_sq)

    def to_json(self) -> dict:
        return {
            "k": self.k,
            "mu": [str(x) for x in self.mu],
            "delta": str(self.delta),
            "alpha": None if self.alpha is None else str(self.alpha),
            "m0": self.m0,
            "parity": self.parity,
            "seed": self.seed,
        }


@dataclass(frozen=True)
class SynthesisState:
    window: PrimeWindow
    P: int
    epsilon: Fraction
    m0: int
    C: int
    Cprime: int
    A: dict[int, int]
    B: dict[int, int]
    Delta: int

    def to_json(self) -> dict:
        return {
            "D": list(self.window.primes),
            "alpha": str(self.window.alpha),
            "P": self.P,
            "epsilon": str(self.epsilon),
            "m0": self.m0,
            "C": self.C,
            "Cprime": self.Cprime,
            "A": {str(d): a for d, a in self.A.items()},
            "B": {str(d): b for d, b in self.B.items()},
            "Delta": self.Delta,
        }


@dataclass(frozen=True)
class KTupleResult:
    spec: KTupleSpec
    state: SynthesisState
    towers: tuple[CoverTower, ...]
    shared: CharNumbers
    divisibilities: tuple[int, ...]
    achieved_sigma_ratio: Fraction

    def to_json(self) -> dict:
        return {
            "spec": self.spec.to_json(),
            "state": self.state.to_json(),
            "towers": [t.to_json() for t in self.towers],
            "shared": self.shared.to_json(),
            "divisibilities": list(self.divisibilities),
            "achieved_sigma_ratio": str(self.achieved_sigma_ratio),
        }


# ---------------------------------------------------------------- pipeline


@dataclass
class _Miss:
    kind: Literal["granularity", "structural"]
    m0: int
    reason: str
    details: dict = field(default_factory=dict)


def _nearest_in_class(target: Fraction, c: Congruence) -> int:
    """Integer = c.residue (mod c.modulus) closest to ``target``."""
    j = round((target - c.residue) / c.modulus)
    return c.residue + j * c.modulus


def _initial_m0(spec: KTupleSpec, window: PrimeWindow, cong_c: Congruence, cong_cp: Congruence) -> int:
    """Least admissible m0 whose adjustment granularities are small: the step
    of B_{d*} stays below Delta/6 and the step of A_{d*} below 1% of its target."""
    d = window.smallest
    co = window.product // d
    step_a = co**8 * cong_c.modulus // (d - 1)
    step_b = co**16 * cong_cp.modulus // (d * d - 1)
    eps = spec.delta / (d - 1)
    # (eps m0)^2 / 240 > 6 step_b  and  eps m0 > 100 step_a
    need = max(math.isqrt(1440 * step_b) + 1, 100 * step_a) / eps
    return spec.next_admissible(math.ceil(need))


def _attempt(spec: KTupleSpec, window: PrimeWindow, m0: int) -> SynthesisState | _Miss:
    D = window.primes
    P = window.product
    d_star = window.smallest
    eps = spec.delta / (d_star - 1)
    mu_term = spec.mu_sq * 3 * m0 * m0 - 3
    if mu_term.denominator != 1:
        raise InputError("3 mu^2 m0^2 must be an integer; m0 is not a multiple of the mu denominators")
    mu_term = int(mu_term)

    cong_c = solve_C(window, m0 - 3, force_even=True)
    cong_cp = solve_Cprime(window, mu_term, force_even=True)

    # A_{d*} close to eps * m0
    lead = (P // d_star) ** 8
    C = _nearest_in_class(Fraction(m0 - 3) / lead + eps * m0 * (d_star - 1) / lead, cong_c)
    A: dict[int, int] = {}
    for d in D:
        num = (P // d) ** 8 * C - (m0 - 3)
        if num % (2 * (d - 1)):
            raise InconsistentFormulas(f"A_{d} not an even integer")
        A[d] = num // (d - 1)
    if min(A.values()) <= 0:
        # A_d scales like m0 with a negative leading term: no m0 helps
        return _Miss("structural", m0, "some A_d is negative; the primes in D are too far apart", {"A": A})
    if min(A.values()) < SQUARES:
        return _Miss("granularity", m0, "some A_d < 16", {"A": A})

    # intersect the C' ranges that put every B_d inside its window
    lo, hi = None, None
    for d in D:
        w = feasibility_window(A[d])
        coef = (P // d) ** 16
        lo_d = Fraction((d * d - 1) * w.b_min + mu_term, coef)
        hi_d = Fraction((d * d - 1) * w.b_max + mu_term, coef)
        lo = lo_d if lo is None else max(lo, lo_d)
        hi = hi_d if hi is None else min(hi, hi_d)
    if lo > hi:
        return _Miss(
            "structural", m0, "B-windows of the primes in D do not overlap",
            {"overlap": hi - lo},
        )
    Cp = _nearest_in_class((lo + hi) / 2, cong_cp)
    if not lo <= Cp <= hi:
        return _Miss(
            "granularity", m0, "no admissible C' inside the common window",
            {"window": hi - lo, "step": cong_cp.modulus},
        )
    B: dict[int, int] = {}
    for d in D:
        num = (P // d) ** 16 * Cp - mu_term
        if num % (2 * (d * d - 1)):
            raise InconsistentFormulas(f"B_{d} not an even integer")
        B[d] = num // (d * d - 1)
        if not feasibility_window(A[d]).contains(A[d], B[d]):
            raise InconsistentFormulas(f"(A_{d}, B_{d}) left the window after adjustment")
    w_star = feasibility_window(A[d_star])
    return SynthesisState(window, P, eps, m0, C, Cp, A, B, w_star.b_max - w_star.b_min)


def _assemble(spec: KTupleSpec, state: SynthesisState) -> KTupleResult:
    double_covers = [(2, int(x * state.m0)) for x in spec.mu]
    towers, divs, invariants = [], [], []
    for i, d in enumerate(state.window.primes):
        parts = salvetti_represent(state.A[d], state.B[d], seed=spec.seed + i)
        tower = CoverTower(double_covers + [(d, m) for m in parts])
        towers.append(tower)
        divs.append(canonical_divisibility(tower))
        invariants.append(chern(tower))
    shared = invariants[0]
    if any(cn != shared for cn in invariants):
        raise InconsistentFormulas("towers disagree on their invariants")
    P, s = state.P, spec.s
    if shared.c1sq != 2**s * P**16 * state.C**2 or 3 * shared.sigma != -(2**s) * P**16 * state.Cprime:
        raise InconsistentFormulas("invariants disagree with the (C, C') closed form")
    expected = [(P // d) ** 8 * state.C for d in state.window.primes]
    if divs != expected or len(set(divs)) != len(divs):
        raise InconsistentFormulas("divisibilities are not the distinct values (P/d)^8 C")
    wanted = 1 if spec.parity == "odd" else 0
    if any(x % 2 != wanted for x in divs):
        raise InconsistentFormulas("divisibility parity does not match the request")
    return KTupleResult(
        spec, state, tuple(towers), shared, tuple(divs), Fraction(-shared.sigma, shared.c1sq)
    )


def synthesize(spec: KTupleSpec) -> KTupleResult:
    """Build k towers with identical (c1^2, sigma) and pairwise distinct
    canonical divisibilities.

    With ``spec.m0`` unset m0 starts at the granularity bound and doubles until
    every window check passes. With ``spec.alpha`` unset the prime window is
    tightened when the B-windows of different primes fail to overlap.
    """
    alpha = spec.alpha if spec.alpha is not None else spec.auto_alpha()
    misses: list[_Miss] = []
    for _ in range(1 if spec.alpha is not None else spec.max_alpha_refinements):
        window = primes_in_window(spec.k, alpha, spec.search_limit)
        probe = spec.m0 or spec.next_admissible(1)
        cong_c = solve_C(window, probe - 3, force_even=True)
        cong_cp = solve_Cprime(window, int(3 * spec.mu_sq * probe * probe - 3), force_even=True)
        m0 = spec.m0 or _initial_m0(spec, window, cong_c, cong_cp)
        for _ in range(1 if spec.m0 else spec.max_doublings):
            outcome = _attempt(spec, window, m0)
            if isinstance(outcome, SynthesisState):
                return _assemble(spec, outcome)
            misses.append(outcome)
            if outcome.kind == "structural":
                break
            m0 = spec.next_admissible(2 * m0)
        alpha = 1 + (alpha - 1) / 4
    last = misses[-1]
    raise WindowFailure(
        f"window check failed ({last.kind}): {last.reason}; "
        + ("increase m0" if last.kind == "granularity" else "choose alpha closer to 1"),
        {"D": window.primes, "m0": last.m0, **last.details},
    )


def slope_report(result: KTupleResult) -> dict:
    """c1^2/chi exactly, with -sigma/c1^2 and its distance to mu^2."""
    cn = result.shared
    ratio = Fraction(-cn.sigma, cn.c1sq)
    return {
        "slope": cn.slope,
        "sigma_ratio": ratio,
        "mu_sq": result.spec.mu_sq,
        "distance": abs(ratio - result.spec.mu_sq),
        "relative_distance": abs(ratio - result.spec.mu_sq) / result.spec.mu_sq,
    }


def slope_from_sigma_ratio(ratio: Fraction) -> Fraction:
    """c1^2/chi = 8 / (1 - sigma/c1^2) for a surface with given -sigma/c1^2."""
    return 8 / (1 + Fraction(ratio))

"""Reference values re-derived from the toolkit, exact integer comparisons only."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Iterator

from .covers import CoverTower, canonical_divisibility
from .dissolution import dissolve, expected_x_shape, expected_y_shape
from .errors import ParityConflict
from .invariants import dissolve_target, from_chi_c1sq, homeo_type
from .projective import MultidegreeCI, canonical_vector, catalog_lookup, ci_invariants
from .salvetti import KTupleSpec
from .symplectic import E, X, Y, SumRecipe, fold_expanded, sum_invariants, x_closed_form, x_recipe, y_from_x_block, y_recipe
from .einstein import pq_structures


@dataclass(frozen=True)
class Check:
    name: str
    passed: bool
    detail: str

    def to_json(self) -> dict:
        return {"name": self.name, "passed": self.passed, "detail": self.detail}


def _x_family() -> Check:
    triples = [(k, r, n) for k in range(1, 11) for r in range(9) for n in range(2, 6)]
    bad = []
    for t in triples:
        folded = fold_expanded(x_recipe(*t))
        if (folded.chi, folded.c1sq) != x_closed_form(*t):
            bad.append(t)
    return Check("X(k,r,n) closed forms vs recursive fold", not bad, f"{len(triples)} triples, {len(bad)} mismatches")


def _block_tables() -> Check:
    bad = []
    for i in range(1, 11):
        x, y = X(i), Y(i)
        if (x.chi, x.c1sq) != (25 * i * i + 30 * i + 1, 225 * i * i + 180 * i):
            bad.append(f"X({i})")
        if (y.chi, y.c1sq) != (25 * i * i + 31 * i + 4, 225 * i * i + 187 * i + 7):
            bad.append(f"Y({i})")
        if y_from_x_block(i) != y.invariants:
            bad.append(f"Y({i}) from X({i})")
    return Check("X(i), Y(i) block tables i=1..10", not bad, ", ".join(bad) or "20 blocks consistent")


def _p1p2_family() -> Check:
    bad = []
    for k in range(6):
        surface = MultidegreeCI([1, 2], [(5 + k, 6)])
        cn = ci_invariants(surface)
        K, div = canonical_vector(surface)
        if (cn.c1sq, cn.chi, div, K) != (9 * (17 + 5 * k), 41 + 10 * k, math.gcd(k + 3, 3), (3 + k, 3)):
            bad.append(k)
    return Check("(5+k,6) in P1xP2: c1^2=9(17+5k), chi=41+10k, gcd(k+3,3)", not bad, f"k=0..5, failures {bad}")


def _p1p3_family() -> Check:
    bad = []
    for k in range(6):
        ci = MultidegreeCI([1, 3], [(2, 1), (1 + k, 6)])
        hyper = MultidegreeCI([1, 2], [(5 + k, 6)])
        K, div = canonical_vector(ci)
        if ci_invariants(ci) != ci_invariants(hyper) or div != math.gcd(k + 1, 3) or K != (1 + k, 3):
            bad.append(k)
    return Check("{(2,1),(1+k,6)} in P1xP3 matches P1xP2, gcd(k+1,3)", not bad, f"k=0..5, failures {bad}")


def _catalog() -> Check:
    got = []
    for name, want in (("catanese_1_2", (3, 18)), ("catanese_debarre_2_2", (3, 17))):
        ht = homeo_type(catalog_lookup(name).invariants, "non-spin")
        got.append((name, (ht.b_plus, ht.b_minus), want))
    ok = all(g == w for _, g, w in got)
    return Check("catalog surfaces homeomorphic to 3CP2#18CP2bar and 3CP2#17CP2bar", ok, str(got))


def _small_homeo() -> Check:
    ht = homeo_type(from_chi_c1sq(2, 1), "non-spin")
    target = dissolve_target(homeo_type(from_chi_c1sq(2, 2), "non-spin"))
    ok = (ht.b_plus, ht.b_minus) == (3, 18) and target == (3, 17)
    return Check("(e=23, sigma=-15) -> (3,18); (3,17) dissolve target", ok, f"{ht.label()}, {target}")


def _divisibility_formula() -> Check:
    m0, d, ms = 12, 5, list(range(1, 17))
    tower = CoverTower([(2, 4), (2, 4), (2, 4)] + [(d, m) for m in ms])
    ok = canonical_divisibility(tower) == m0 + (d - 1) * sum(ms) - 3
    return Check("divisibility m0 + (d-1) sum m_j - 3", ok, str(canonical_divisibility(tower)))


def _parity_conflict() -> Check:
    try:
        KTupleSpec(k=2, mu=(0.5, 0.5), parity="even")
    except ParityConflict:
        return Check("even divisibility with denominator 2 rejected", True, "ParityConflict")
    return Check("even divisibility with denominator 2 rejected", False, "accepted")


def _fiber_sum() -> Check:
    cn = sum_invariants(SumRecipe.build([(E(2), 1, 1), (E(3), 1, 1)]))
    return Check("E(2) +_T E(3) -> (5, 0)", (cn.chi, cn.c1sq) == (5, 0), f"({cn.chi}, {cn.c1sq})")


def _dissolution_shapes() -> Check:
    bad = []
    for k in range(1, 5):
        for r in range(9):
            for n in range(2, 5):
                if dissolve(x_recipe(k, r, n)).shape() != expected_x_shape(k, r, n):
                    bad.append(("X", k, r, n))
                if dissolve(y_recipe(2, k, r, n)).shape() != expected_y_shape(2, k, r, n):
                    bad.append(("Y", 2, k, r, n))
    return Check("dissolution shapes for X(k,r,n) and Y(l,k,r,n)", not bad, f"{len(bad)} mismatches")


def _p_divisible_by_8() -> Check:
    v = pq_structures(8, 200)
    return Check("p = 0 mod 8 is unknown", v.status == "unknown", v.status)


def _ci_cli_value() -> Check:
    cn = ci_invariants(MultidegreeCI([1, 2], [(5, 6)]))
    return Check("(5,6) in P1xP2 -> c1^2=153, chi=41", (cn.c1sq, cn.chi) == (153, 41), f"({cn.c1sq}, {cn.chi})")


CHECKS: tuple[Callable[[], Check], ...] = (
    _x_family,
    _block_tables,
    _p1p2_family,
    _p1p3_family,
    _catalog,
    _small_homeo,
    _divisibility_formula,
    _parity_conflict,
    _fiber_sum,
    _dissolution_shapes,
    _p_divisible_by_8,
    _ci_cli_value,
)


def run_checks() -> Iterator[Check]:
    for check in CHECKS:
        yield check()

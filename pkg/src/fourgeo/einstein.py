"""Pair Einstein branched-cover towers with homeomorphic non-Einstein blowups,
and decide (p, q) instances of the non-Einstein connected sums.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .covers import einstein_flag
from .errors import Exhausted, InputError, SlopeOutOfRange, SynthesisFailure, Unreachable, WindowFailure
from .invariants import CharNumbers, HomeoType, from_chi_c1sq, homeo_type
from .projective import CATALOG
from .salvetti import KTupleResult, KTupleSpec, slope_from_sigma_ratio, synthesize
from .symplectic import (
    DEFAULT_Y_INDICES,
    SumRecipe,
    infinite_family,
    plan_point,
    sum_invariants,
)
from .verdicts import Rule, Verdict, check_consistency

MAX_SLOPE = Fraction(6)
MINIMAL_SYMPLECTIC = "minimal symplectic with non-trivial Seiberg-Witten invariant"
SUMMAND_SW = "each summand minimal symplectic with b+ = 3 mod 4"


@dataclass(frozen=True)
class SearchBounds:
    c1sq_candidates: int = 64
    y_indices: tuple[int, ...] = DEFAULT_Y_INDICES
    multiplicities: tuple[int, ...] = (2, 3, 5)
    strict: bool = False


@dataclass(frozen=True)
class XEntry:
    recipe: SumRecipe
    minimal_c1sq: int
    blowups: int
    tags: tuple[str, ...]
    invariants: CharNumbers
    verdict: Verdict

    def to_json(self) -> dict:
        return {
            "recipe": self.recipe.to_json(),
            "description": self.recipe.describe(),
            "minimal_c1sq": self.minimal_c1sq,
            "blowups": self.blowups,
            "tags": list(self.tags),
            "invariants": self.invariants.to_json(),
            "verdict": self.verdict.to_json(),
        }


@dataclass(frozen=True)
class MainTheoremReport:
    k: int
    z: KTupleResult
    z_verdicts: tuple[Verdict, ...]
    x_entries: tuple[XEntry, ...]
    shared_homeo: HomeoType
    slope: Fraction

    @property
    def verdicts(self) -> tuple[Verdict, ...]:
        return self.z_verdicts + tuple(x.verdict for x in self.x_entries)

    def replay(self) -> bool:
        return all(v.replay() for v in self.verdicts)

    def to_json(self) -> dict:
        return {
            "k": self.k,
            "slope": str(self.slope),
            "shared_homeo": self.shared_homeo.to_json(),
            "z": self.z.to_json(),
            "z_verdicts": [v.to_json() for v in self.z_verdicts],
            "x_entries": [x.to_json() for x in self.x_entries],
        }


def _ht_rule(cn: CharNumbers) -> Rule:
    return Rule.evaluate("hitchin-thorpe-strict", e=cn.e, sigma=cn.sigma)


def _obstructed_blowup(recipe: SumRecipe, minimal_c1sq: int, b: int, strict: bool, subject: str) -> Verdict:
    blown = sum_invariants(recipe)
    chain = (
        Rule.evaluate("lebrun-blowup", minimal_c1sq=minimal_c1sq, blowups=b, strict=strict),
        _ht_rule(blown),
    )
    return Verdict("obstructed", chain, (MINIMAL_SYMPLECTIC,), subject)


def _x_side(chi: int, c1sq: int, bounds: SearchBounds) -> tuple[SumRecipe, int]:
    """Minimal recipe N with chi(N) = chi and 2 c1^2(N) >= 3 c1sq (> when
    ``bounds.strict``), least such c1^2(N)."""
    start = 3 * c1sq // 2 + 1 if bounds.strict else -(-3 * c1sq // 2)
    last = None
    for y in range(start, start + bounds.c1sq_candidates):
        try:
            return plan_point(chi, y, bounds.y_indices), y
        except Unreachable as exc:
            last = exc
    raise SlopeOutOfRange(
        f"no minimal recipe with chi={chi} and c1^2 in [{start}, {start + bounds.c1sq_candidates}): {last}"
    )


def assemble_main_theorem(spec: KTupleSpec, bounds: SearchBounds = SearchBounds()) -> MainTheoremReport:
    """k homeomorphic Einstein towers plus blown-up symplectic sums in the same
    homeomorphism class that carry no Einstein metric."""
    predicted = slope_from_sigma_ratio(spec.mu_sq)
    if predicted > MAX_SLOPE:
        raise SlopeOutOfRange(
            f"target slope 8/(1 + mu^2) = {float(predicted):.4f} exceeds {MAX_SLOPE}: "
            f"blowups would need c1^2(N) >= {float(predicted * 3 / 2):.2f} chi"
        )
    try:
        z = synthesize(spec)
    except (WindowFailure, Exhausted) as exc:
        raise SynthesisFailure(str(exc)) from exc
    cn = z.shared
    if cn.slope > MAX_SLOPE:
        raise SlopeOutOfRange(f"synthesized slope {float(cn.slope):.4f} exceeds {MAX_SLOPE}")
    parity = "non-spin" if spec.parity == "odd" else "spin"
    shared = homeo_type(cn, parity)
    z_verdicts = tuple(einstein_flag(t) for t in z.towers)

    entries: list[XEntry] = []
    if parity == "non-spin":
        base, minimal_c1sq = _x_side(cn.chi, cn.c1sq, bounds)
        b = minimal_c1sq - cn.c1sq
        members = [base] + infinite_family(base, bounds.multiplicities)
        for member in members:
            blown = member.with_blowups(b)
            inv = sum_invariants(blown)
            if inv != cn or homeo_type(inv, "non-spin") != shared:
                raise AssertionError("blown-up recipe left the homeomorphism class")
            subject = blown.describe()
            verdict = _obstructed_blowup(blown, minimal_c1sq, b, bounds.strict, subject)
            entries.append(XEntry(blown, minimal_c1sq, b, member.tags, inv, verdict))
        tags = [x.tags for x in entries]
        if len(set(tags)) != len(tags):
            raise AssertionError("family tags are not pairwise distinct")
    report = MainTheoremReport(spec.k, z, z_verdicts, tuple(entries), shared, cn.slope)
    check_consistency(report.verdicts)
    if not report.replay():
        raise AssertionError("a verdict failed to replay")
    return report


# ---------------------------------------------------------------- (p, q)


def _minimal_candidates(chi: int, lowest: int, bounds: SearchBounds):
    """(description, c1^2, recipe-or-None) for minimal symplectic manifolds with
    the given chi and c1^2 >= lowest, catalog entries first."""
    for entry in CATALOG.values():
        if entry.invariants.chi == chi and entry.invariants.c1sq >= lowest:
            yield entry.name, entry.invariants.c1sq
    for y in range(max(lowest, 0), max(lowest, 0) + bounds.c1sq_candidates):
        try:
            recipe = plan_point(chi, y, bounds.y_indices)
        except (Unreachable, InputError):
            continue
        yield recipe.describe(), y


def _b_plus(chi: int) -> int:
    return 2 * chi - 1


def pq_structures(p: int, q: int, bounds: SearchBounds = SearchBounds()) -> Verdict:
    """Verdict for p CP2 # q CP2bar: obstructed only with an explicit witness."""
    if p < 1 or q < 0:
        raise InputError("need p >= 1 and q >= 0")
    subject = f"{p}CP2#{q}CP2bar"
    target = from_chi_c1sq(*_pq_chi_c1sq(p, q)) if p % 2 else None
    if p % 8 == 0:
        return Verdict("unknown", (), ("p divisible by 8 is outside every construction",), subject)
    if p % 2:
        chi = (p + 1) // 2
        c1sq = target.c1sq
        lowest = max(1, -(-3 * c1sq // 2))
        for name, y in _minimal_candidates(chi, lowest, bounds):
            b = y - c1sq
            if b < 1:
                continue
            rule = Rule.evaluate("lebrun-blowup", minimal_c1sq=y, blowups=b, strict=bounds.strict)
            if rule.holds:
                return Verdict("obstructed", (rule,), (MINIMAL_SYMPLECTIC, f"witness: ({name}) # {b}CP2bar"), subject)
        return Verdict("unknown", (), ("no blowup witness found in the searched range",), subject)
    k3_count = 1 if p % 4 == 2 else 3
    # b+(X1) = p - 3 k3_count = 2 chi1 - 1
    chi1 = (p - 3 * k3_count + 1) // 2
    if chi1 < 1:
        return Verdict("unknown", (), (f"no summand with b+ = {p - 3 * k3_count}",), subject)
    offset = 12 if k3_count == 1 else 36
    # k = q - 19 k3 - b-(X1) with b-(X1) = 10 chi1 - y - 1
    base_k = q - 19 * k3_count - 10 * chi1 + 1
    lowest = max(0, 1 - base_k, -(-(offset - 3 * base_k) // 2))
    for name, y in _minimal_candidates(chi1, lowest, bounds):
        k = base_k + y
        if k < 1:
            continue
        rule = Rule.evaluate(
            "ishida-lebrun",
            c1sqs=[y] + [0] * k3_count,
            bplus=[_b_plus(chi1)] + [3] * k3_count,
            k_bars=k,
        )
        if rule.holds:
            witness = f"witness: ({name}) # {k3_count}K3 # {k}CP2bar"
            return Verdict("obstructed", (rule,), (SUMMAND_SW, witness), subject)
    return Verdict("unknown", (), ("connected-sum inequality fails in the searched range",), subject)


def _pq_chi_c1sq(p: int, q: int) -> tuple[int, int]:
    e, sigma = 2 + p + q, p - q
    return (e + sigma) // 4, 2 * e + 3 * sigma

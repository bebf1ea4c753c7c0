"""Einstein-metric verdicts and the numeric obstruction rules they cite.

A :class:`Verdict` never stores a bare boolean: each conclusion is backed by a
chain of :class:`Rule` records holding the rule name and the integers it was
evaluated on, so :meth:`Verdict.replay` can re-check every step.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable, Literal, Sequence

from .errors import CongruenceViolation, InputError, WrongArity

Status = Literal["KE-exists", "obstructed", "unknown"]


def blowup_obstruction(minimal_c1sq: int, b: int, strict: bool = False) -> bool:
    """Blowing up a minimal symplectic manifold b times kills Einstein metrics
    once 3b >= c1^2 of the minimal model (3b > c1^2 when ``strict``)."""
    if minimal_c1sq <= 0:
        raise InputError("blowup obstruction needs c1^2 > 0 on the minimal model")
    if b < 0:
        raise InputError("negative blowup count")
    return 3 * b > minimal_c1sq if strict else 3 * b >= minimal_c1sq


def connected_sum_obstruction(summand_c1sqs: Sequence[int], summand_bplus: Sequence[int], k_bars: int) -> bool:
    """Obstruction for X_1 # ... # X_n # k CP2bar with n = 2 or 4 symplectic
    summands, each with b+ = 3 mod 4.

    n = 2: k >= (sum c1^2)/3 - 4.
    n = 4: k >= (sum c1^2)/3 - 12 and total b+ not divisible by 8.
    """
    n = len(summand_c1sqs)
    if n not in (2, 4) or len(summand_bplus) != n:
        raise WrongArity(f"need 2 or 4 summands with matching b+, got {n} and {len(summand_bplus)}")
    if k_bars < 0:
        raise InputError("k_bars must be non-negative")
    for bp in summand_bplus:
        if bp % 4 != 3:
            raise CongruenceViolation(f"summand b+ = {bp} is not 3 mod 4")
    offset = 12 if n == 2 else 36
    if 3 * k_bars < sum(summand_c1sqs) - offset:
        return False
    return n == 2 or sum(summand_bplus) % 8 != 0


def _aubin_yau(canonical_multiple: int) -> bool:
    return canonical_multiple >= 1


def _lebrun_blowup(minimal_c1sq: int, blowups: int, strict: bool = False) -> bool:
    return blowup_obstruction(minimal_c1sq, blowups, strict)


def _ishida_lebrun(c1sqs: list[int], bplus: list[int], k_bars: int) -> bool:
    return connected_sum_obstruction(c1sqs, bplus, k_bars)


def _hitchin_thorpe_strict(e: int, sigma: int) -> bool:
    return 2 * e > 3 * abs(sigma)


RULES: dict[str, Callable[..., bool]] = {
    "aubin-yau": _aubin_yau,
    "lebrun-blowup": _lebrun_blowup,
    "ishida-lebrun": _ishida_lebrun,
    "hitchin-thorpe-strict": _hitchin_thorpe_strict,
}
OBSTRUCTION_RULES = frozenset({"lebrun-blowup", "ishida-lebrun"})
EXISTENCE_RULES = frozenset({"aubin-yau"})


@dataclass(frozen=True)
class Rule:
    name: str
    args: dict
    holds: bool

    @classmethod
    def evaluate(cls, name: str, **args) -> Rule:
        return cls(name, args, RULES[name](**args))

    def replay(self) -> bool:
        return RULES[self.name](**self.args) == self.holds

    def to_json(self) -> dict:
        return {"name": self.name, "args": self.args, "holds": self.holds}


@dataclass(frozen=True)
class Verdict:
    status: Status
    rule_chain: tuple[Rule, ...] = ()
    assumptions: tuple[str, ...] = ()
    subject: str = ""

    def __post_init__(self):
        if self.status == "obstructed" and not any(
            r.name in OBSTRUCTION_RULES and r.holds for r in self.rule_chain
        ):
            raise InputError("an obstructed verdict needs a satisfied obstruction rule")
        if self.status == "KE-exists" and not any(
            r.name in EXISTENCE_RULES and r.holds for r in self.rule_chain
        ):
            raise InputError("a KE-exists verdict needs a satisfied existence rule")

    def replay(self) -> bool:
        return all(rule.replay() for rule in self.rule_chain)

    def to_json(self) -> dict:
        return {
            "subject": self.subject,
            "status": self.status,
            "rule_chain": [r.to_json() for r in self.rule_chain],
            "assumptions": list(self.assumptions),
        }

    @classmethod
    def from_json(cls, data: dict) -> Verdict:
        chain = tuple(Rule(r["name"], r["args"], r["holds"]) for r in data["rule_chain"])
        return cls(data["status"], chain, tuple(data["assumptions"]), data.get("subject", ""))


def check_consistency(verdicts: Iterable[Verdict]) -> None:
    """Raise if some subject is claimed both Einstein and obstructed."""
    seen: dict[str, set[str]] = {}
    for v in verdicts:
        seen.setdefault(v.subject, set()).add(v.status)
    for subject, statuses in seen.items():
        if {"KE-exists", "obstructed"} <= statuses:
            raise InputError(f"contradictory verdicts for {subject!r}")

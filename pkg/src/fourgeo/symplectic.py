"""Symplectic building blocks, fiber-sum arithmetic and the lattice planners.

Summing along a genus-g surface of square zero gives

    e = e_1 + e_2 + 4(g - 1),    sigma = sigma_1 + sigma_2,

so tori (g = 1) add (chi, c1^2) componentwise while each genus-2 seam adds
4 to e and hence 1 to chi and 8 to c1^2.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

from .errors import InputError, NoEllipticBlock, Unreachable
from .invariants import CharNumbers, from_chi_c1sq, from_e_sigma

KINDS = ("E", "S", "X", "Y", "K3_blownup")
SEAM_GENERA = (1, 2)
DEFAULT_Y_INDICES = tuple(range(1, 31))
SW_DISTINCTNESS = "log-transform family members are pairwise non-diffeomorphic (Seiberg-Witten, assumed)"


@dataclass(frozen=True)
class BuildingBlock:
    kind: str
    index: int = 0
    log_transforms: tuple[int, ...] = ()

    def __post_init__(self):
        if self.kind not in KINDS:
            raise InputError(f"unknown block kind {self.kind!r}")
        if self.kind == "S":
            if self.index:
                raise InputError("S takes no index")
        elif self.kind == "K3_blownup":
            if self.index < 0:
                raise InputError("K3_blownup needs j >= 0")
        elif self.index < 1:
            raise InputError(f"{self.kind} needs an index >= 1")
        if self.log_transforms and self.kind != "E":
            raise InputError("log transforms only apply to elliptic blocks")
        if any(p < 2 for p in self.log_transforms):
            raise InputError("log-transform multiplicities must be >= 2")

    @property
    def chi(self) -> int:
        i = self.index
        return {
            "E": i,
            "S": 2,
            "X": 25 * i * i + 30 * i + 1,
            "Y": 25 * i * i + 31 * i + 4,
            "K3_blownup": 2,
        }[self.kind]

    @property
    def c1sq(self) -> int:
        i = self.index
        return {
            "E": 0,
            "S": 1,
            "X": 225 * i * i + 180 * i,
            "Y": 225 * i * i + 187 * i + 7,
            "K3_blownup": -i,
        }[self.kind]

    @property
    def invariants(self) -> CharNumbers:
        return from_chi_c1sq(self.chi, self.c1sq)

    @property
    def minimal(self) -> bool:
        if self.kind == "E":
            return self.index > 1
        if self.kind == "K3_blownup":
            return self.index == 0
        return True

    @property
    def simply_connected(self) -> bool:
        if self.kind == "X":
            return False
        if self.kind == "E" and len(self.log_transforms) > 1:
            return math.gcd(*self.log_transforms) == 1
        return True

    @property
    def spin(self) -> bool:
        if self.kind == "E":
            return self.index % 2 == 0 and not self.log_transforms
        return self.kind == "K3_blownup" and self.index == 0

    @property
    def acd(self) -> bool:
        """Known to dissolve after one CP2 stabilization."""
        return self.kind in ("E", "K3_blownup")

    @property
    def label(self) -> str:
        if self.kind == "S":
            return "S"
        if self.kind == "E" and self.log_transforms:
            return f"E({self.index})_{{{','.join(map(str, self.log_transforms))}}}"
        return f"{self.kind}({self.index})"


def E(n: int, log_transforms: Sequence[int] = ()) -> BuildingBlock:
    return BuildingBlock("E", n, tuple(log_transforms))


S = BuildingBlock("S")


def X(i: int) -> BuildingBlock:
    return BuildingBlock("X", i)


def Y(i: int) -> BuildingBlock:
    return BuildingBlock("Y", i)


def K3_blownup(j: int) -> BuildingBlock:
    return BuildingBlock("K3_blownup", j)


@dataclass(frozen=True)
class Run:
    block: BuildingBlock
    count: int
    seam: int  # genus of the surface along which each copy is summed to what precedes it

    def __post_init__(self):
        if self.count < 1:
            raise InputError("run count must be positive")
        if self.seam not in SEAM_GENERA:
            raise InputError(f"seam genus {self.seam} not in {SEAM_GENERA}")
        if self.seam == 2 and self.block.kind != "S":
            raise InputError("genus-2 seams only run through copies of S")


@dataclass(frozen=True)
class SumRecipe:
    """Run-length encoded chain of fiber sums followed by blowups.

    The first copy of the first run starts the chain and has no seam.
    """

    runs: tuple[Run, ...]
    blowups: int = 0
    log_transforms: tuple[int, ...] = ()
    tags: tuple[str, ...] = ()

    def __post_init__(self):
        if not self.runs:
            raise InputError("empty recipe")
        if self.blowups < 0:
            raise InputError("negative blowup count")
        for before, run in zip(self.runs, self.runs[1:]):
            if run.seam == 2 and before.block.kind != "S":
                raise InputError("genus-2 seams join two copies of S")

    @property
    def block_count(self) -> int:
        return sum(r.count for r in self.runs)

    @classmethod
    def build(cls, runs: Iterable[tuple[BuildingBlock, int, int]], blowups: int = 0, **kw) -> SumRecipe:
        return cls(tuple(Run(*r) for r in runs), blowups, **kw)

    @property
    def blocks(self) -> tuple[BuildingBlock, ...]:
        """The expanded chain; only sensible for small recipes."""
        return tuple(r.block for r in self.runs for _ in range(r.count))

    @property
    def seams(self) -> tuple[int, ...]:
        out = [r.seam for r in self.runs for _ in range(r.count)]
        return tuple(out[1:])

    @property
    def simply_connected(self) -> bool:
        return all(r.block.simply_connected for r in self.runs)

    @property
    def possibly_spin(self) -> bool:
        """False when the sum is certainly non-spin: a blowup, a non-spin
        summand, or a signature not divisible by 16."""
        if self.blowups or not all(r.block.spin for r in self.runs):
            return False
        return sum_invariants(self).sigma % 16 == 0

    def with_blowups(self, b: int) -> SumRecipe:
        return replace(self, blowups=b)

    def describe(self) -> str:
        parts = []
        for i, r in enumerate(self.runs):
            count = f"{r.count}x" if r.count > 1 else ""
            seam = "" if i == 0 and r.count == 1 else f"/g{r.seam}"
            parts.append(f"{count}{r.block.label}{seam}")
        text = " + ".join(parts)
        return text + (f" # {self.blowups}CP2bar" if self.blowups else "")

    def to_json(self) -> dict:
        return {
            "runs": [
                {"kind": r.block.kind, "index": r.block.index, "log_transforms": list(r.block.log_transforms),
                 "count": r.count, "seam": r.seam}
                for r in self.runs
            ],
            "blowups": self.blowups,
            "log_transforms": list(self.log_transforms),
            "tags": list(self.tags),
        }

    @classmethod
    def from_json(cls, data: dict) -> SumRecipe:
        runs = tuple(
            Run(BuildingBlock(r["kind"], r["index"], tuple(r.get("log_transforms", ()))), r["count"], r["seam"])
            for r in data["runs"]
        )
        return cls(runs, data.get("blowups", 0), tuple(data.get("log_transforms", ())), tuple(data.get("tags", ())))


def fiber_sum(first: CharNumbers, second: CharNumbers, genus: int) -> CharNumbers:
    return from_e_sigma(first.e + second.e + 4 * (genus - 1), first.sigma + second.sigma)


def sum_invariants(recipe: SumRecipe) -> CharNumbers:
    """Invariants of the chain, then blowups. A run of c copies contributes
    c times the block and one seam correction per copy it attaches."""
    e = sigma = 0
    for i, run in enumerate(recipe.runs):
        cn = run.block.invariants
        seams = run.count - 1 if i == 0 else run.count
        e += run.count * cn.e + 4 * (run.seam - 1) * seams
        sigma += run.count * cn.sigma
    total = from_e_sigma(e, sigma)
    return total.blowup(recipe.blowups) if recipe.blowups else total


def fold_expanded(recipe: SumRecipe) -> CharNumbers:
    """Block-by-block left fold of the expanded chain; an independent check of
    :func:`sum_invariants` for small recipes."""
    blocks = recipe.blocks
    total = blocks[0].invariants
    for block, genus in zip(blocks[1:], recipe.seams):
        total = fiber_sum(total, block.invariants, genus)
    return total.blowup(recipe.blowups) if recipe.blowups else total


# ---------------------------------------------------------------- standard families


def x_recipe(k: int, r: int, n: int) -> SumRecipe:
    """k copies of S along the genus-2 surface, then r copies of S and E(n) along tori."""
    if k < 1 or not 0 <= r or n < 1:
        raise InputError(f"X({k},{r},{n}) needs k >= 1, r >= 0, n >= 1")
    runs = [(S, k, 2)]
    if r:
        runs.append((S, r, 1))
    runs.append((E(n), 1, 1))
    return SumRecipe.build(runs, tags=(f"X({k},{r},{n})",))


def y_recipe(l: int, k: int, r: int, n: int, i: int = 1) -> SumRecipe:
    """X(k, r, n) with l further copies of Y(i) summed along tori."""
    base = x_recipe(k, r, n)
    runs = base.runs + ((Run(Y(i), l, 1),) if l else ())
    return SumRecipe(runs, tags=(f"Y{i}({l},{k},{r},{n})",))


def x_closed_form(k: int, r: int, n: int) -> tuple[int, int]:
    """(chi, c1^2) of X(k, r, n)."""
    return 3 * k + 2 * r + n - 1, 9 * k + r - 8


def y_from_x_block(i: int) -> CharNumbers:
    """Y(i) rebuilt as X(i) summed with K3 # (i+1)CP2bar along a genus-(i+2) surface;
    only used as a consistency check of the block table."""
    total = fiber_sum(X(i).invariants, K3_blownup(i + 1).invariants, i + 2)
    return total


# ---------------------------------------------------------------- planner


def _decompose(y: int) -> tuple[int, int]:
    """y = 9k + r - 8 with k >= 1 and 0 <= r <= 8."""
    k, r = divmod(y + 8, 9)
    return k, r


def _plan_x(x: int, y: int) -> tuple[int, int, int] | str:
    if y <= 0:
        return "c1^2 > 0 needed for the X(k,r,n) family"
    k, r = _decompose(y)
    n = x - 3 * k - 2 * r + 1
    if n < 2:
        return f"n = {n} < 2 (k={k}, r={r})"
    return k, r, n


def plan_point(chi: int, c1sq: int, y_indices: Sequence[int] = DEFAULT_Y_INDICES) -> SumRecipe:
    """A recipe with invariants exactly (chi, c1sq), built from minimal blocks."""
    if chi <= 0 or c1sq < 0:
        raise InputError(f"plan_point needs chi > 0 and c1sq >= 0, got ({chi}, {c1sq})")
    if c1sq == 0:
        if chi < 2:
            raise Unreachable(chi, c1sq, "E(1) is not minimal")
        recipe = SumRecipe.build([(E(chi), 1, 1)], tags=(f"E({chi})",))
        return _checked(recipe, chi, c1sq)
    first = _plan_x(chi, c1sq)
    if not isinstance(first, str):
        return _checked(x_recipe(*first), chi, c1sq)
    for i in y_indices:
        block = Y(i)
        # n grows by (c1^2(Y) - 3 chi(Y))/3 > 40/3 per copy of Y, so every l from
        # l_star on gives n >= 2 and the least working l is at most two below it.
        l_star = -(-(c1sq - 3 * chi + 51) // (block.c1sq - 3 * block.chi))
        for l in range(max(1, l_star - 2), min(max(l_star, 1), c1sq // block.c1sq) + 1):
            x, y = chi - l * block.chi, c1sq - l * block.c1sq
            if x < 2:
                break
            if y == 0:
                recipe = SumRecipe.build([(E(x), 1, 1), (block, l, 1)], tags=(f"Y{i}({l},E({x}))",))
                return _checked(recipe, chi, c1sq)
            found = _plan_x(x, y)
            if not isinstance(found, str):
                return _checked(y_recipe(l, *found, i=i), chi, c1sq)
    raise Unreachable(chi, c1sq, f"at l=0: {first}; no Y(i) extension with i in {y_indices[0]}..{y_indices[-1]}")


def _checked(recipe: SumRecipe, chi: int, c1sq: int) -> SumRecipe:
    cn = sum_invariants(recipe)
    if (cn.chi, cn.c1sq) != (chi, c1sq):
        raise AssertionError(f"planner produced {cn} for ({chi}, {c1sq})")
    return recipe


# ---------------------------------------------------------------- regions


@lru_cache(maxsize=None)
def geo_constant(epsilon: Fraction, y_indices: tuple[int, ...] = DEFAULT_Y_INDICES) -> int:
    """Offset c(eps) for which y <= (9 - eps) x - c(eps) is covered by
    the wedge y <= 3x - 51 translated by multiples of one Y(i) block.

    With s = c1^2(Y)/chi(Y) >= 9 - eps, a point below s x - s(51 + c1^2(Y) - 3 chi(Y))/3
    can subtract enough copies of Y to land in the wedge without overshooting.
    """
    for i in y_indices:
        block = Y(i)
        slope = Fraction(block.c1sq, block.chi)
        if slope >= 9 - epsilon:
            return math.ceil(slope * (51 + block.c1sq - 3 * block.chi) / 3)
    raise InputError(f"no Y(i) with i in the configured range has slope >= 9 - {epsilon}")


@dataclass(frozen=True)
class RegionConfig:
    wedge_constant: int = 72
    epsilon: Fraction = Fraction(1, 2)
    epsilon_constant: int | None = None  # None: geo_constant(epsilon)

    @property
    def c_epsilon(self) -> int:
        if self.epsilon_constant is not None:
            return self.epsilon_constant
        return geo_constant(Fraction(self.epsilon))


def region_membership(chi: int, c1sq: int, config: RegionConfig = RegionConfig()) -> set[str]:
    """Tags of the region inequalities satisfied by (chi, c1sq)."""
    x, y = chi, c1sq
    eps, c = Fraction(config.epsilon), config.c_epsilon
    tags = set()
    if 0 <= y <= 3 * x - 51 and y <= 6 * x - config.wedge_constant:
        tags.add("wedge")
    if 0 <= y <= 6 * x - config.wedge_constant:
        tags.add("wedge-6")
    if 0 <= y <= (9 - eps) * x - c:
        tags.add("geo")
    if 0 <= y <= (6 - eps) * x - c:
        tags.add("non-einstein")
    if y <= 9 * x:
        tags.add("bmy")
    return tags


# ---------------------------------------------------------------- families


def infinite_family(recipe: SumRecipe, multiplicities: Sequence[int]) -> list[SumRecipe]:
    """Copies of ``recipe`` whose first E(n) block (n >= 2) carries a
    logarithmic transform of each given multiplicity."""
    where = next((i for i, r in enumerate(recipe.runs) if r.block.kind == "E" and r.block.index >= 2), None)
    if where is None:
        raise NoEllipticBlock(f"no E(n) block with n >= 2 in {recipe.describe()}")
    if len(set(multiplicities)) != len(multiplicities) or any(p < 2 for p in multiplicities):
        raise InputError("multiplicities must be distinct and >= 2")
    run = recipe.runs[where]
    out = []
    for p in multiplicities:
        head = [Run(run.block, run.count - 1, run.seam)] if run.count > 1 else []
        changed = Run(replace(run.block, log_transforms=(p,)), 1, run.seam)
        runs = recipe.runs[:where] + tuple(head) + (changed,) + recipe.runs[where + 1 :]
        member = replace(recipe, runs=runs, log_transforms=(p,), tags=recipe.tags + (f"log({p})", SW_DISTINCTNESS))
        assert sum_invariants(member) == sum_invariants(recipe)
        out.append(member)
    return out

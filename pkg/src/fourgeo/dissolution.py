"""Rewrite a stabilized fiber-sum recipe into a connected sum of simple pieces.

The state is a set of blocks joined by seams plus a multiset of connected
summands (CP2, CP2bar, S2xS2, or blocks already cut free). Its Euler number is

    sum e(blocks) + sum 4(g - 1) over seams + sum e(atoms) - 2 (components - 1)

and the signature is additive. Every rule is checked against the invariants of
the recipe # CP2 before the next one fires.

Rules:
  split-elliptic  E(n) = E(n-1) +_T E(1); cut E(1) off with the stabilizing CP2,
                  leaving 3 CP2 + 10 CP2bar
  cut-seam        a seam of genus g together with CP2 # CP2bar becomes
                  2g copies of CP2 # CP2bar
  dissolve-block  an elliptic (or blown-up K3) summand next to a CP2 dissolves
  pair-to-s2xs2   CP2 # CP2bar = S2xS2 in the presence of another CP2bar
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field

from .errors import InconsistentFormulas, InputError, NoEllipticSeam, SpinRecipe
from .symplectic import BuildingBlock, E, SumRecipe, sum_invariants

CP2, CP2BAR, S2XS2 = "CP2", "CP2bar", "S2xS2"
MAX_BLOCKS = 100_000
_ATOM_INVARIANTS = {CP2: (3, 1), CP2BAR: (3, -1), S2XS2: (4, 0)}
ATOM_ORDER = (CP2, S2XS2, CP2BAR)


@dataclass
class DissolutionStep:
    rule: str
    detail: str
    e: int
    sigma: int


@dataclass
class DissolutionExpression:
    summands: Counter
    block_table: dict[str, BuildingBlock]
    pending: list[str]
    steps: list[DissolutionStep] = field(default_factory=list)

    @property
    def e(self) -> int:
        total = sum(self._atom_e(name) * n for name, n in self.summands.items())
        return total - 2 * (sum(self.summands.values()) - 1)

    @property
    def sigma(self) -> int:
        return sum(self._atom_sigma(name) * n for name, n in self.summands.items())

    def _atom_e(self, name: str) -> int:
        if name in _ATOM_INVARIANTS:
            return _ATOM_INVARIANTS[name][0]
        return self.block_table[name].invariants.e

    def _atom_sigma(self, name: str) -> int:
        if name in _ATOM_INVARIANTS:
            return _ATOM_INVARIANTS[name][1]
        return self.block_table[name].invariants.sigma

    def shape(self) -> dict[str, int]:
        return {name: n for name, n in self.summands.items() if n}

    def describe(self) -> str:
        blocks = sorted(n for n in self.summands if n not in _ATOM_INVARIANTS)
        names = blocks + [a for a in ATOM_ORDER if self.summands.get(a)]
        return " # ".join(f"{self.summands[n]}{n}" for n in names if self.summands[n])

    def to_json(self) -> dict:
        return {
            "summands": self.shape(),
            "pending": self.pending,
            "steps": [vars(s) for s in self.steps],
        }


class _State:
    def __init__(self, recipe: SumRecipe):
        self.blocks: dict[int, BuildingBlock] = dict(enumerate(recipe.blocks))
        self.seams: list[tuple[int, int, int]] = [
            (i, i + 1, g) for i, g in enumerate(recipe.seams)
        ]
        self.atoms: Counter = Counter({CP2: 1, CP2BAR: recipe.blowups})
        self.freed: Counter = Counter()
        self.table: dict[str, BuildingBlock] = {}
        self.next_id = len(self.blocks)
        self.steps: list[DissolutionStep] = []
        base = sum_invariants(recipe)
        self.target = (base.e + 1, base.sigma + 1)

    def components(self) -> int:
        return len(self.blocks) - len(self.seams) + sum(self.atoms.values()) + sum(self.freed.values())

    def invariants(self) -> tuple[int, int]:
        e = sum(b.invariants.e for b in self.blocks.values())
        e += sum(4 * (g - 1) for _, _, g in self.seams)
        e += sum(_ATOM_INVARIANTS[a][0] * n for a, n in self.atoms.items())
        e += sum(self.table[name].invariants.e * n for name, n in self.freed.items())
        sigma = sum(b.invariants.sigma for b in self.blocks.values())
        sigma += sum(_ATOM_INVARIANTS[a][1] * n for a, n in self.atoms.items())
        sigma += sum(self.table[name].invariants.sigma * n for name, n in self.freed.items())
        return e - 2 * (self.components() - 1), sigma

    def record(self, rule: str, detail: str) -> None:
        e, sigma = self.invariants()
        if (e, sigma) != self.target:
            raise InconsistentFormulas(f"{rule} changed (e, sigma) to {(e, sigma)}, expected {self.target}")
        self.steps.append(DissolutionStep(rule, detail, e, sigma))

    def degree(self, node: int) -> int:
        return sum(node in (a, b) for a, b, _ in self.seams)

    def take(self, atom: str, count: int = 1) -> None:
        if self.atoms[atom] < count:
            raise InconsistentFormulas(f"rule needs {count} {atom}, only {self.atoms[atom]} present")
        self.atoms[atom] -= count


def _split_elliptic(state: _State) -> None:
    candidates = [
        i for i, b in state.blocks.items()
        if b.kind == "E"
        and any(i in (a, c) and g == 1 for a, c, g in state.seams)
        and (b.index >= 2 or state.degree(i) == 1)
    ]
    if not candidates:
        raise NoEllipticSeam("no elliptic block that can be split off along a torus")
    i = candidates[-1]
    block = state.blocks[i]
    if block.index >= 2:
        state.blocks[i] = E(block.index - 1, block.log_transforms)
        leaf = state.next_id
        state.next_id += 1
        state.blocks[leaf] = E(1)
        state.seams.append((i, leaf, 1))
        state.record("split-elliptic", f"{block.label} = {state.blocks[i].label} +_T E(1)")
    else:
        leaf = i
    state.seams = [s for s in state.seams if leaf not in s[:2]]
    del state.blocks[leaf]
    state.take(CP2)
    state.atoms[CP2] += 3
    state.atoms[CP2BAR] += 10
    state.record("split-elliptic", "E(1) cut off: CP2 -> 3 CP2 + 10 CP2bar")


def _cut_seams(state: _State) -> None:
    while state.seams:
        a, b, g = state.seams.pop()
        state.take(CP2)
        state.take(CP2BAR)
        state.atoms[CP2] += 2 * g
        state.atoms[CP2BAR] += 2 * g
        state.record("cut-seam", f"genus-{g} seam between {state.blocks[a].label} and {state.blocks[b].label}")


def _dissolve_blocks(state: _State) -> None:
    for i, block in sorted(state.blocks.items()):
        del state.blocks[i]
        if block.acd:
            if state.atoms[CP2] < 1:
                raise InconsistentFormulas("dissolving needs a CP2 summand")
            if block.kind == "E":
                m = block.index
                pos, neg = 2 * m - 1, 10 * m - 1
            else:
                pos, neg = 3, 19 + block.index
            state.atoms[CP2] += pos
            state.atoms[CP2BAR] += neg
            state.record("dissolve-block", f"{block.label} -> {pos} CP2 + {neg} CP2bar")
        else:
            state.table[block.label] = block
            state.freed[block.label] += 1
            state.record("free-block", f"{block.label} kept as a summand")


def _pairs_to_s2xs2(state: _State) -> None:
    n = min(state.atoms[CP2], state.atoms[CP2BAR] - 1)
    if n > 0:
        state.take(CP2, n)
        state.take(CP2BAR, n)
        state.atoms[S2XS2] += n
        state.record("pair-to-s2xs2", f"{n} x (CP2 # CP2bar) -> {n} S2xS2")


def dissolve(recipe: SumRecipe) -> DissolutionExpression:
    """Connected-sum decomposition of ``recipe # CP2``."""
    if recipe.possibly_spin:
        raise SpinRecipe(f"{recipe.describe()} may be spin")
    if not recipe.simply_connected:
        raise InputError(f"{recipe.describe()} is not simply connected")
    if recipe.block_count > MAX_BLOCKS:
        raise InputError(f"recipe has {recipe.block_count} blocks; step-wise rewriting is capped at {MAX_BLOCKS}")
    state = _State(recipe)
    state.record("stabilize", f"{recipe.describe()} # CP2")
    if len(state.blocks) > 1 or any(b.kind != "E" for b in state.blocks.values()):
        _split_elliptic(state)
    _cut_seams(state)
    _dissolve_blocks(state)
    _pairs_to_s2xs2(state)
    summands = Counter({k: v for k, v in (state.freed + state.atoms).items() if v})
    pending = [
        f"S2xS2 count >= resolving number of {name}" for name in sorted(state.freed)
    ]
    expr = DissolutionExpression(summands, dict(state.table), pending, state.steps)
    if (expr.e, expr.sigma) != state.target:
        raise InconsistentFormulas("final expression does not conserve (e, sigma)")
    return expr


def expected_x_shape(k: int, r: int, n: int) -> dict[str, int]:
    """(k+r)S # (3k+r+2n-2) S2xS2 # (8n-1) CP2bar."""
    return {"S": k + r, S2XS2: 3 * k + r + 2 * n - 2, CP2BAR: 8 * n - 1}


def expected_y_shape(l: int, k: int, r: int, n: int, i: int = 1) -> dict[str, int]:
    """l Y # (k+r)S # (l+3k+r+2n-2) S2xS2 # (8n-1) CP2bar."""
    shape = expected_x_shape(k, r, n)
    shape[S2XS2] += l
    if l:
        shape[f"Y({i})"] = l
    return shape

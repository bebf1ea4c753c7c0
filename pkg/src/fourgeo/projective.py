"""Chern numbers of complete intersection surfaces in products of projective spaces.

The cohomology ring of P^{n_1} x ... x P^{n_f} is Z[H_1..H_f]/(H_i^{n_i+1}).
Classes are dicts from exponent tuples to integer coefficients.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from itertools import product as cartesian
from typing import Iterable, Sequence

from .errors import AmplenessUnverified, InputError, NegativeEuler, NotASurface, UnknownEntry
from .invariants import CharNumbers, from_chi_c1sq

Monomial = tuple[int, ...]
RingElement = dict[Monomial, int]


@dataclass(frozen=True)
class AmbientProduct:
    dims: tuple[int, ...]

    def __init__(self, dims: Iterable[int]):
        dims = tuple(int(n) for n in dims)
        if not dims or any(n < 1 for n in dims):
            raise InputError(f"ambient dimensions must be positive: {dims}")
        object.__setattr__(self, "dims", dims)

    @property
    def dimension(self) -> int:
        return sum(self.dims)

    @property
    def factors(self) -> int:
        return len(self.dims)


@dataclass(frozen=True)
class MultidegreeCI:
    ambient: AmbientProduct
    degrees: tuple[tuple[int, ...], ...]

    def __init__(self, ambient: AmbientProduct | Iterable[int], degrees: Iterable[Iterable[int]]):
        if not isinstance(ambient, AmbientProduct):
            ambient = AmbientProduct(ambient)
        degrees = tuple(tuple(int(x) for x in deg) for deg in degrees)
        for deg in degrees:
            if len(deg) != ambient.factors:
                raise InputError(f"multidegree {deg} does not match {ambient.factors} factors")
            if any(x < 0 for x in deg) or not any(deg):
                raise InputError(f"multidegree {deg} needs non-negative entries, one positive")
        object.__setattr__(self, "ambient", ambient)
        object.__setattr__(self, "degrees", degrees)

    @property
    def dimension(self) -> int:
        return self.ambient.dimension - len(self.degrees)


class _Ring:
    """Truncated polynomial arithmetic in the hyperplane classes."""

    def __init__(self, dims: Sequence[int]):
        self.dims = tuple(dims)
        self.top = tuple(dims)

    def one(self) -> RingElement:
        return {(0,) * len(self.dims): 1}

    def linear(self, coefficients: Sequence[int]) -> RingElement:
        out = {}
        for i, c in enumerate(coefficients):
            if c:
                mono = tuple(1 if j == i else 0 for j in range(len(self.dims)))
                out[mono] = c
        return out

    def add(self, x: RingElement, y: RingElement) -> RingElement:
        out = dict(x)
        for m, c in y.items():
            out[m] = out.get(m, 0) + c
        return {m: c for m, c in out.items() if c}

    def mul(self, x: RingElement, y: RingElement) -> RingElement:
        out: RingElement = {}
        for (m1, c1), (m2, c2) in cartesian(x.items(), y.items()):
            m = tuple(a + b for a, b in zip(m1, m2))
            if all(a <= n for a, n in zip(m, self.dims)):
                out[m] = out.get(m, 0) + c1 * c2
        return {m: c for m, c in out.items() if c}

    def power(self, x: RingElement, k: int) -> RingElement:
        out = self.one()
        for _ in range(k):
            out = self.mul(out, x)
        return out

    def inverse_one_plus(self, d: RingElement) -> RingElement:
        """(1 + d)^{-1} for d of positive degree."""
        out, term = self.one(), self.one()
        for _ in range(sum(self.dims)):
            term = self.mul(term, {m: -c for m, c in d.items()})
            out = self.add(out, term)
        return out

    def degree_part(self, x: RingElement, k: int) -> RingElement:
        return {m: c for m, c in x.items() if sum(m) == k}

    def integrate(self, x: RingElement) -> int:
        return x.get(self.top, 0)


def _chern_classes(X: MultidegreeCI) -> tuple[_Ring, RingElement, RingElement, RingElement]:
    if X.dimension != 2:
        raise NotASurface(f"complex dimension {X.dimension}, expected 2")
    ring = _Ring(X.ambient.dims)
    total = ring.one()
    for i, n in enumerate(X.ambient.dims):
        h = ring.linear([1 if j == i else 0 for j in range(len(X.ambient.dims))])
        total = ring.mul(total, ring.power(ring.add(ring.one(), h), n + 1))
    fundamental = ring.one()
    for deg in X.degrees:
        D = ring.linear(deg)
        total = ring.mul(total, ring.inverse_one_plus(D))
        fundamental = ring.mul(fundamental, D)
    return ring, ring.degree_part(total, 1), ring.degree_part(total, 2), fundamental


def ci_invariants(X: MultidegreeCI) -> CharNumbers:
    ring, c1, c2, fundamental = _chern_classes(X)
    c1sq = ring.integrate(ring.mul(ring.mul(c1, c1), fundamental))
    e = ring.integrate(ring.mul(c2, fundamental))
    if (c1sq + e) % 12:
        raise InputError(f"c1^2 + c2 = {c1sq + e} is not divisible by 12")
    if e < 0:
        warnings.warn(NegativeEuler(f"Euler number {e} < 0 for {X}"), stacklevel=2)
    cn = from_chi_c1sq((c1sq + e) // 12, c1sq)
    assert cn.e == e
    return cn


def canonical_vector(X: MultidegreeCI) -> tuple[tuple[int, ...], int]:
    """Coefficients of K in the hyperplane classes and their gcd.

    Divisibility 0 means K is numerically trivial (hence spin). The gcd is
    only the true divisibility when every defining class is ample.
    """
    if X.dimension != 2:
        raise NotASurface(f"complex dimension {X.dimension}, expected 2")
    K = tuple(
        sum(deg[i] for deg in X.degrees) - (n + 1) for i, n in enumerate(X.ambient.dims)
    )
    if any(0 in deg for deg in X.degrees):
        warnings.warn(AmplenessUnverified(f"non-ample defining class in {X.degrees}"), stacklevel=2)
    return K, math.gcd(*K)


def is_spin(X: MultidegreeCI) -> bool:
    return canonical_vector(X)[1] % 2 == 0


@dataclass(frozen=True)
class CatalogEntry:
    name: str
    invariants: CharNumbers
    ke_exists: bool
    note: str


CATALOG: dict[str, CatalogEntry] = {
    "catanese_1_2": CatalogEntry(
        "catanese_1_2", from_chi_c1sq(2, 1), True,
        "simply connected minimal surface with ample canonical class",
    ),
    "catanese_debarre_2_2": CatalogEntry(
        "catanese_debarre_2_2", from_chi_c1sq(2, 2), True,
        "simply connected minimal surface with ample canonical class",
    ),
}


def catalog_lookup(name: str) -> CatalogEntry:
    try:
        return CATALOG[name]
    except KeyError:
        raise UnknownEntry(f"{name!r} is not in the catalog ({', '.join(sorted(CATALOG))})") from None

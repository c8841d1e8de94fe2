"""Geometry of the Fermat arrangement of 3n lines.

The arrangement is V((x^n - y^n)(y^n - z^n)(z^n - x^n)): for each n-th root of
unity zeta^k it contains L_{x,k} = V(y - zeta^k z), L_{y,k} = V(z - zeta^k x)
and L_{z,k} = V(x - zeta^k y).  Everything here is double-precision complex
arithmetic with explicit tolerances; coordinates are roots of unity times small
scalars, so conditioning is benign for desk-scale n.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable

# clustering of intersection points
CLUSTER_TOL = 1e-8
# |a*x + b*y + c*z| test for incidence
ON_LINE_TOL = 1e-10
# a coordinate below this is treated as zero when normalizing
NORMALIZE_TOL = 1e-12
# fiber punctures degenerate when the base value is this close to 0 or zeta^k
BRANCH_TOL = 1e-9


class DegenerateInputError(ValueError):
    """Two coincident lines were intersected."""


class BranchPointError(ValueError):
    """A fiber was requested over (or too near) a branch point of Pr."""


@lru_cache(maxsize=None)
def roots_of_unity(n: int) -> tuple[complex, ...]:
    """(1, zeta_n, ..., zeta_n^{n-1}) with zeta_n = exp(2*pi*i/n)."""
    if not (isinstance(n, int) and n >= 1):
        raise ValueError(f"n must be a positive integer, got {n!r}")
    return tuple(cmath.exp(2j * math.pi * k / n) for k in range(n))


def zeta_pow(n: int, k: int) -> complex:
    return roots_of_unity(n)[k % n]


@dataclass(frozen=True)
class LineTag:
    family: str  # Lx | Ly | Lz | Vx | Vy
    index: int

    def __str__(self) -> str:
        return f"{self.family}{self.index}"


@dataclass(frozen=True)
class ProjLine:
    """a*x + b*y + c*z = 0, coefficients scaled so the first nonzero one is 1."""

    coefficients: tuple[complex, complex, complex]
    tag: LineTag

    def evaluate(self, p: "ProjPoint") -> complex:
        a, b, c = self.coefficients
        x, y, z = p.coordinates
        return a * x + b * y + c * z


def proj_line(coefficients: Iterable[complex], tag: LineTag) -> ProjLine:
    coeffs = tuple(complex(c) for c in coefficients)
    if len(coeffs) != 3:
        raise ValueError("a projective line needs exactly 3 coefficients")
    return ProjLine(_normalize_first(coeffs), tag)


@dataclass(frozen=True)
class ProjPoint:
    """[x:y:z] scaled so the last nonzero coordinate is 1."""

    coordinates: tuple[complex, complex, complex]


def proj_point(x: complex, y: complex, z: complex) -> ProjPoint:
    return ProjPoint(_normalize_last((complex(x), complex(y), complex(z))))


def _normalize_first(v: tuple[complex, ...]) -> tuple[complex, ...]:
    for c in v:
        if abs(c) > NORMALIZE_TOL:
            return tuple(u / c for u in v)
    raise ValueError("zero coefficient vector")


def _normalize_last(v: tuple[complex, ...]) -> tuple[complex, ...]:
    for c in reversed(v):
        if abs(c) > NORMALIZE_TOL:
            return tuple(u / c for u in v)
    raise ValueError("zero coordinate vector")


def fermat_lines(n: int) -> list[ProjLine]:
    """The 3n lines: L_{x,k}=(0,1,-zeta^k), L_{y,k}=(-zeta^k,0,1), L_{z,k}=(1,-zeta^k,0)."""
    if not (isinstance(n, int) and n >= 1):
        raise ValueError(f"n must be a positive integer, got {n!r}")
    zetas = roots_of_unity(n)
    lines: list[ProjLine] = []
    for k, z in enumerate(zetas):
        lines.append(proj_line((0, 1, -z), LineTag("Lx", k)))
    for k, z in enumerate(zetas):
        lines.append(proj_line((-z, 0, 1), LineTag("Ly", k)))
    for k, z in enumerate(zetas):
        lines.append(proj_line((1, -z, 0), LineTag("Lz", k)))
    return lines


def vx_line() -> ProjLine:
    return proj_line((1, 0, 0), LineTag("Vx", 0))


def vy_line() -> ProjLine:
    return proj_line((0, 1, 0), LineTag("Vy", 0))


def intersect_lines(l1: ProjLine, l2: ProjLine) -> ProjPoint:
    """The unique intersection point, via the cross product of coefficient vectors."""
    a1, b1, c1 = l1.coefficients
    a2, b2, c2 = l2.coefficients
    cross = (b1 * c2 - c1 * b2, c1 * a2 - a1 * c2, a1 * b2 - b1 * a2)
    # Normalized inputs have leading coefficient 1, so a tiny cross product
    # really does mean proportional coefficient vectors.
    if max(abs(c) for c in cross) < ON_LINE_TOL:
        raise DegenerateInputError(f"lines {l1.tag} and {l2.tag} coincide")
    p = ProjPoint(_normalize_last(cross))
    assert abs(l1.evaluate(p)) < ON_LINE_TOL and abs(l2.evaluate(p)) < ON_LINE_TOL
    return p


@dataclass(frozen=True)
class SingularPoint:
    location: ProjPoint
    incident_lines: frozenset[LineTag]

    @property
    def multiplicity(self) -> int:
        return len(self.incident_lines)


def singular_points(n: int) -> list[SingularPoint]:
    """All points where >= 2 of the 3n lines meet, clustered by location.

    Every pair of distinct lines in the projective plane meets exactly once, so
    the clusters account for all C(3n,2) pairs: sum over points of
    C(multiplicity, 2) = C(3n, 2).
    """
    lines = fermat_lines(n)
    clusters: list[tuple[ProjPoint, set[LineTag]]] = []
    for a in range(len(lines)):
        for b in range(a + 1, len(lines)):
            p = intersect_lines(lines[a], lines[b])
            for loc, tags in clusters:
                if _point_dist(loc, p) < CLUSTER_TOL:
                    tags.update((lines[a].tag, lines[b].tag))
                    break
            else:
                clusters.append((p, {lines[a].tag, lines[b].tag}))
    points = [SingularPoint(loc, frozenset(tags)) for loc, tags in clusters]
    by_tag = {line.tag: line for line in lines}
    for sp in points:
        for tag in sp.incident_lines:
            assert abs(by_tag[tag].evaluate(sp.location)) < ON_LINE_TOL
    total = len(lines) * (len(lines) - 1) // 2
    assert sum(math.comb(sp.multiplicity, 2) for sp in points) == total
    points.sort(key=lambda sp: (-sp.multiplicity, _point_key(sp.location)))
    return points


def _point_dist(p: ProjPoint, q: ProjPoint) -> float:
    return max(abs(a - b) for a, b in zip(p.coordinates, q.coordinates))


def _point_key(p: ProjPoint) -> tuple:
    return tuple((round(c.real, 6), round(c.imag, 6)) for c in p.coordinates)


@dataclass(frozen=True)
class Puncture:
    tag: LineTag
    position: complex


@dataclass(frozen=True)
class FiberConfiguration:
    """The 2n punctures of the fiber of Pr over base_value, in z/x coordinate.

    The fiber Pr^-1(t) = {[1 : t : w]} meets L_{y,j} where w = zeta^j and
    L_{x,j} where w = t * zeta^{-j}.
    """

    base_value: complex
    punctures: tuple[Puncture, ...]

    def positions(self) -> list[complex]:
        return [p.position for p in self.punctures]

    def min_gap(self) -> float:
        pos = self.positions()
        return min(
            abs(pos[a] - pos[b]) for a in range(len(pos)) for b in range(a + 1, len(pos))
        )


def fiber_punctures(n: int, t: complex) -> FiberConfiguration:
    """Closed-form puncture positions over base value t (tagged by source line)."""
    if not (isinstance(n, int) and n >= 1):
        raise ValueError(f"n must be a positive integer, got {n!r}")
    t = complex(t)
    if abs(t) < BRANCH_TOL:
        raise BranchPointError(f"base value {t} is at the branch point 0")
    for z in roots_of_unity(n):
        if abs(t - z) < BRANCH_TOL:
            raise BranchPointError(f"base value {t} is at the branch point {z}")
    punctures = [Puncture(LineTag("Lx", j), t * zeta_pow(n, -j)) for j in range(n)]
    punctures += [Puncture(LineTag("Ly", j), zeta_pow(n, j)) for j in range(n)]
    config = FiberConfiguration(t, tuple(punctures))
    assert config.min_gap() > 0
    return config

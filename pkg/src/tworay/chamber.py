"""Rank-two GIT fans: ray scan, cones, endpoint taxonomy and normalization."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cmp_to_key
from math import gcd
from typing import Sequence

from .exactmath import CONTRACTION, FIBRATION, det2, gl2z_normalize, mat_vec, primitive

DIV_TO_POINT = "DIV_TO_POINT"
DIV_TO_CURVE = "DIV_TO_CURVE"
CONTRACTED = "CONTRACTED"
EXTRACTED = "EXTRACTED"


@dataclass(frozen=True)
class Ray:
    vector: tuple[int, int]
    variables: tuple[str, ...]

    @property
    def multiplicity(self) -> int:
        return len(self.variables)


@dataclass
class ChamberFan:
    """Rays in game order: the first ray is the end holding t."""

    rays: list[Ray]
    columns: dict[str, tuple[int, int]]
    order: list[str] = field(default_factory=list)

    @property
    def eff(self) -> tuple[tuple[int, int], tuple[int, int]]:
        return self.rays[0].vector, self.rays[-1].vector

    @property
    def m1_index(self) -> int:
        return 0 if self.rays[0].multiplicity >= 2 else 1

    @property
    def m2_index(self) -> int:
        n = len(self.rays)
        return n - 1 if self.rays[-1].multiplicity >= 2 else n - 2

    @property
    def mov(self) -> tuple[tuple[int, int], tuple[int, int]]:
        return self.rays[self.m1_index].vector, self.rays[self.m2_index].vector

    def walls(self) -> list[int]:
        """Indices of the rays crossed by the game, in order."""
        return list(range(self.m1_index + 1, self.m2_index))

    def partition(self, wall: int) -> tuple[list[str], list[str], list[str]]:
        """(variables before, on, after) ray ``wall``."""
        before = [v for r in self.rays[:wall] for v in r.variables]
        after = [v for r in self.rays[wall + 1:] for v in r.variables]
        return before, list(self.rays[wall].variables), after

    def ray_of(self, name: str) -> int:
        for i, r in enumerate(self.rays):
            if name in r.variables:
                return i
        raise KeyError(name)


def _sign(x) -> int:
    return (x > 0) - (x < 0)


def ray_scan(grading: Sequence[Sequence[int]], names: Sequence[str], start: str = "t") -> ChamberFan:
    """Group the columns into rays and sort them across the pointed cone."""
    cols = {n: (int(grading[0][i]), int(grading[1][i])) for i, n in enumerate(names)}
    if any(c == (0, 0) for c in cols.values()):
        raise ValueError("zero column in grading")
    prims = {n: primitive(c) for n, c in cols.items()}
    dirs = list(dict.fromkeys(prims.values()))

    def is_clockwise_end(u):
        return all(det2(u, v) > 0 or (det2(u, v) == 0 and u == v) for v in dirs)

    ends = [u for u in dirs if is_clockwise_end(u)]
    if not ends:
        raise ValueError("not pointed")
    dirs.sort(key=cmp_to_key(lambda a, b: -_sign(det2(a, b))))
    rays = [Ray(d, tuple(n for n in names if prims[n] == d)) for d in dirs]
    if start in cols and start in rays[-1].variables:
        rays.reverse()
    return ChamberFan(rays, cols, list(names))


def endpoint_classify(fan: ChamberFan) -> str:
    if fan.rays[-1].multiplicity >= 2:
        return FIBRATION
    m = fan.rays[fan.m2_index].multiplicity
    if m == 1:
        return DIV_TO_POINT
    if m == 2:
        return DIV_TO_CURVE
    raise ValueError(f"unexpected multiplicity {m} on the contraction end")


@dataclass
class Endpoint:
    kind: str
    matrix: list[list[int]]
    transform: tuple
    base: tuple[int, ...] | None = None
    fibre_weights: dict[str, int] | None = None
    d: int | None = None
    g: int | None = None
    kappa: dict[str, int] | None = None
    lam: dict[str, int] | None = None
    quotient: int = 1
    curve: tuple[int, ...] | None = None


def _apply(a, fan: ChamberFan) -> dict[str, tuple[int, int]]:
    return {n: tuple(mat_vec(a, c)) for n, c in fan.columns.items()}


def endpoint_normalize(fan: ChamberFan, kind: str | None = None) -> Endpoint:
    kind = kind or endpoint_classify(fan)
    names = fan.order
    if kind == FIBRATION:
        last = fan.rays[-1].variables
        a, _ = gl2z_normalize([fan.columns[v] for v in last], FIBRATION)
        new = _apply(a, fan)
        if any(new[v][1] < 0 for v in names if v not in last):
            a = (a[0], (-a[1][0], -a[1][1]))
            new = _apply(a, fan)
        matrix = [[new[n][0] for n in names], [new[n][1] for n in names]]
        base = tuple(new[v][0] for v in last)
        fibre = {n: new[n][1] for n in names if n not in last}
        return Endpoint(kind, matrix, a, base=base, fibre_weights=fibre)
    if kind not in (DIV_TO_POINT, DIV_TO_CURVE):
        raise ValueError(f"unknown endpoint kind {kind!r}")
    m2 = fan.rays[fan.m2_index].variables
    z5 = fan.rays[-1].variables
    if len(z5) != 1:
        raise ValueError("contraction end must hold a single divisor")
    z4, z5 = m2[0], z5[0]
    a, _, d = gl2z_normalize([fan.columns[z4], fan.columns[z5]], CONTRACTION)
    new = _apply(a, fan)
    g = new[z4][1]
    matrix = [[new[n][0] for n in names], [new[n][1] for n in names]]
    kappa = {n: new[n][0] for n in names if n not in m2 and n != z5}
    lam = {n: new[n][1] for n in names if n != z5}
    ep = Endpoint(kind, matrix, a, d=d, g=g, kappa=kappa, lam=lam, quotient=d // gcd(d, g))
    if kind == DIV_TO_CURVE:
        curve = tuple(new[v][1] for v in m2)
        if any(gcd(w, d) != 1 for w in curve):
            raise ValueError("non-terminal: line of singularities")
        ep.curve = curve
    return ep


def minors_nonpositive(fan: ChamberFan, matrix: list[list[int]]) -> bool:
    """det(col_j, col_i) <= 0 for every i < j in game order."""
    idx = {n: i for i, n in enumerate(fan.order)}
    seq = [v for r in fan.rays for v in r.variables]
    cols = [(matrix[0][idx[v]], matrix[1][idx[v]]) for v in seq]
    return all(
        det2(cols[j], cols[i]) <= 0 for i in range(len(cols)) for j in range(i + 1, len(cols))
    )


def in_cone(v, cone) -> bool:
    """Is v in the closed cone spanned by the pair (u, w), taken clockwise-first or not."""
    u, w = cone
    if det2(u, w) < 0:
        u, w = w, u
    if det2(u, w) == 0:
        return det2(u, v) == 0 and (u[0] * v[0] + u[1] * v[1]) >= 0
    return det2(u, v) >= 0 and det2(v, w) >= 0


def toric_curve_intersection(delta, wall, va, vb, side: str | None = None) -> Fraction:
    """Intersection of the class delta with the curve P(va, vb) meeting the wall."""
    da, db = det2(wall, va), det2(wall, vb)
    if da == 0 or db == 0:
        raise ValueError("curve coordinate lies on the wall")
    if _sign(da) != _sign(db):
        raise ValueError("curve coordinates lie on opposite sides of the wall")
    dd = det2(wall, delta)
    value = Fraction(_sign(da) * dd, abs(da) * abs(db))
    if side is not None and dd != 0:
        actual = CONTRACTED if _sign(da) == _sign(dd) else EXTRACTED
        if side != actual:
            raise ValueError(f"declared side {side} but the coordinates are on the {actual} side")
    return value

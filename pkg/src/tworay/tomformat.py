"""Tom-format constraints, weight configurations and unprojection shape checks."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .polyring import Ideal, Poly, Ring, pfaffians5, weighted_degree

EMPTY = "EMPTY"
NONEMPTY = "NONEMPTY"
SQUARE = "SQUARE"
PRODUCT = "PRODUCT"
QUADRATIC_FORM = "QUADRATIC_FORM"
PASS = "PASS"
FAIL = "FAIL"


@dataclass(frozen=True)
class WeightConfiguration:
    label: str  # "A", "B" or "NONE"
    pivot: int | None = None


@dataclass(frozen=True)
class Finding:
    variables: tuple[str, ...]
    kind: str
    pfaffian: int


def degrees_from_upper(upper: Sequence[int]) -> list[list[int | None]]:
    """5x5 symmetric degree matrix (None on the diagonal) from a12..a45."""
    if len(upper) != 10:
        raise ValueError("need the ten entries a12, a13, ..., a45")
    m: list[list[int | None]] = [[None] * 5 for _ in range(5)]
    pos = 0
    for i in range(5):
        for j in range(i + 1, 5):
            m[i][j] = m[j][i] = upper[pos]
            pos += 1
    return m


def tom_permutation(k: int) -> list[int]:
    """Relabelling that sends Tom_k to Tom_1 (swap rows 1 and k)."""
    p = list(range(5))
    p[0], p[k - 1] = p[k - 1], p[0]
    return p


def relabel(m, perm):
    return [[m[perm[i]][perm[j]] for j in range(5)] for i in range(5)]


def is_tom(entries, k: int, ideal_vars: Sequence[str]) -> bool:
    """Every entry off row and column k lies in the ideal generated by ``ideal_vars``."""
    for i in range(5):
        for j in range(i + 1, 5):
            if k - 1 in (i, j):
                continue
            a = entries[i][j]
            if isinstance(a, Poly):
                idx = [a.ring.index[v] for v in ideal_vars]
                if any(not any(e[t] for t in idx) for e in a.terms):
                    return False
            elif a != 0:
                return False
    return True


def detect_configuration(degrees, k: int = 1) -> WeightConfiguration:
    """Configuration of a degree matrix given in Tom_k labelling."""
    d = relabel(degrees, tom_permutation(k)) if k != 1 else degrees
    a24, a25, a34, a35 = d[1][3], d[1][4], d[2][3], d[2][4]
    if a24 == a25 == a34 == a35:
        return WeightConfiguration("A", a24)
    if a25 == a34:
        return WeightConfiguration("B", a25)
    return WeightConfiguration("NONE")


def _filled_matrix(degrees, ys: list[str], label: str):
    """Fill the pivot entries with ideal coordinates as in the standard argument."""
    names = [f"p{i + 1}{j + 1}" for i in range(5) for j in range(i + 1, 5)] + ys
    ring = Ring(names)
    m = [[ring.zero()] * 5 for _ in range(5)]
    for i in range(5):
        for j in range(i + 1, 5):
            m[i][j] = ring.var(f"p{i + 1}{j + 1}")
    y = [ring.var(v) for v in ys]
    if label == "B":
        if len(y) == 1:
            m[1][4] = m[2][3] = y[0]
        else:
            m[1][4], m[2][3] = y[0], y[1]
    else:
        extra = y[2] if len(y) == 3 else ring.zero()
        m[1][3], m[2][4] = y[0], y[1]
        m[1][4], m[2][3] = y[0] + y[1] + extra, y[0] - y[1] + extra
    for i in range(5):
        for j in range(i + 1, 5):
            m[j][i] = -m[i][j]
    return ring, m


def pure_power_report(degrees, ideal_weights: dict[str, int], k: int = 1) -> list[Finding]:
    """Pure powers and quadratic forms forced in Pf_k, certified on a filled matrix."""
    config = detect_configuration(degrees, k)
    if config.label == "NONE":
        return []
    ys = sorted(v for v, w in ideal_weights.items() if w == config.pivot)
    if not ys:
        return []
    if config.label == "B" and len(ys) > 2 or config.label == "A" and len(ys) not in (2, 3):
        return []
    labelled = relabel(degrees, tom_permutation(k)) if k != 1 else degrees
    ring, m = _filled_matrix(labelled, ys, config.label)
    pf1 = pfaffians5(m)[0]
    out: list[Finding] = []
    if config.label == "B" and len(ys) == 1:
        if pf1.coeff({ys[0]: 2}):
            out.append(Finding((ys[0],), SQUARE, k))
    elif config.label == "B":
        if pf1.coeff({ys[0]: 1, ys[1]: 1}):
            out.append(Finding((ys[0], ys[1]), PRODUCT, k))
    else:
        if len(ys) == 3:
            y1, y2, y3 = ys
            if pf1.coeff({y3: 2}):
                out.append(Finding((y3,), SQUARE, k))
        else:
            y1, y2 = ys
        q = pf1.only_in([y1, y2])
        a, b, c = q.coeff({y1: 2}), q.coeff({y1: 1, y2: 1}), q.coeff({y2: 2})
        if b * b - 4 * a * c != 0:
            out.append(Finding((y1, y2), QUADRATIC_FORM, k))
    return out


@dataclass
class ShapeReport:
    flags: dict[str, bool]
    pure_parts: dict[str, Poly]

    @property
    def verdict(self) -> str:
        return PASS if sum(self.flags.values()) >= 3 else FAIL


def unprojection_shape_check(
    equations: Sequence[Poly],
    s: str,
    ideal_vars: Sequence[str],
    orbinates: tuple[str, str],
    weights: dict[str, int] | None = None,
    blowup_var: str | None = "t",
) -> ShapeReport:
    """Which right-hand sides g_j of s*y_j = g_j carry a monomial purely in (xi, x1)."""
    xi, x1 = orbinates
    allowed = {xi, x1} | ({blowup_var} if blowup_var else set())
    flags: dict[str, bool] = {}
    pure: dict[str, Poly] = {}
    for p in equations:
        ring = p.ring
        for y in ideal_vars:
            c = p.coeff({s: 1, y: 1})
            if not c:
                continue
            g = (ring.monomial({s: 1, y: 1}, c) - p) / c
            part = g.only_in([v for v in ring.names if v in allowed])
            if part and weights is not None:
                w = [weights.get(v, 0) for v in ring.names]
                if weighted_degree(part, w) != weights[s] + weights[y]:
                    part = ring.zero()
            flags[y] = bool(part)
            pure[y] = part
            break
    if len(flags) < 4:
        raise ValueError(f"found {len(flags)} unprojection equations, need 4")
    return ShapeReport(flags, pure)


def common_zero_check(fs: Sequence[Poly], xi: str, x1: str):
    """Decide whether binary forms in (xi, x1) share a zero on the weighted P^1.

    Returns (EMPTY, None) or (NONEMPTY, witness).
    """
    if any(f.is_zero() for f in fs):
        raise ValueError("zero polynomial among inputs")
    ring = fs[0].ring
    others = {v: 1 for v in ring.names if v not in (xi, x1)}
    # point (0 : 1)
    at_x1 = [f.subs({**others, xi: 0, x1: 1}) for f in fs]
    if all(v.is_zero() for v in at_x1):
        return NONEMPTY, {"point": {xi: 0, x1: 1}}
    chart = [f.subs({**others, xi: 1}) for f in fs]
    if any(c.is_zero() for c in chart):
        # every form is divisible by a power of the other coordinate only
        nz = [c for c in chart if not c.is_zero()]
        if not nz:
            return NONEMPTY, {"chart": xi, "gcd": "0"}
        chart = nz
    ideal = Ideal(chart, ring)
    basis = ideal.basis()
    if len(basis) == 1 and basis[0].is_constant():
        return EMPTY, None
    return NONEMPTY, {"chart": xi, "gcd": str(basis[0])}

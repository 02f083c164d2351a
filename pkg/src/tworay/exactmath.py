"""Exact rational helpers and 2x2 lattice algebra."""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Sequence

Rational = Fraction
Vec2 = tuple  # (a, b), entries int or Fraction
Mat2 = tuple  # ((a, b), (c, d)), row major

FIBRATION = "FIBRATION"
CONTRACTION = "CONTRACTION"


def frac(x) -> Fraction:
    """Coerce ints, Fractions and "p/q" strings to a Fraction."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x.strip())
    raise TypeError(f"not an exact rational: {x!r}")


def det2(u: Sequence, v: Sequence):
    """Determinant of the matrix with columns u, v."""
    return u[0] * v[1] - u[1] * v[0]


def mat_det(m: Mat2):
    return m[0][0] * m[1][1] - m[0][1] * m[1][0]


def mat_vec(m: Mat2, v: Sequence) -> tuple:
    return (m[0][0] * v[0] + m[0][1] * v[1], m[1][0] * v[0] + m[1][1] * v[1])


def mat_mul(a: Mat2, b: Mat2) -> Mat2:
    return tuple(
        tuple(sum(a[i][k] * b[k][j] for k in range(2)) for j in range(2))
        for i in range(2)
    )


def mat_inv(m: Mat2) -> Mat2:
    d = frac(mat_det(m))
    if d == 0:
        raise ZeroDivisionError("singular 2x2 matrix")
    return ((m[1][1] / d, -m[0][1] / d), (-m[1][0] / d, m[0][0] / d))


def from_columns(u: Sequence, v: Sequence) -> Mat2:
    return ((u[0], v[0]), (u[1], v[1]))


def content(v: Sequence[int]) -> int:
    """gcd of the entries of an integer vector (0 for the zero vector)."""
    g = 0
    for x in v:
        g = gcd(g, int(x))
    return g


def primitive(v: Sequence[int]) -> tuple[int, int]:
    g = content(v)
    if g == 0:
        raise ValueError("zero vector has no primitive direction")
    return (v[0] // g, v[1] // g)


def ext_gcd(a: int, b: int) -> tuple[int, int, int]:
    """Return (g, x, y) with x*a + y*b = g = gcd(a, b) >= 0."""
    x0, y0, x1, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        a, x0, y0 = -a, -x0, -y0
    return a, x0, y0


def solve_basis_change(pairs) -> Mat2 | None:
    """Find the invertible rational R with R @ source == target for every pair.

    Returns None when no invertible R reproduces all pairs. Raises
    ValueError("rank deficient") when the sources span a line and the targets
    are compatible with that, since R is then underdetermined.
    """
    pairs = [(tuple(map(frac, s)), tuple(map(frac, t))) for s, t in pairs]
    if len(pairs) < 2:
        raise ValueError("need at least two pairs")
    basis = None
    for i in range(len(pairs)):
        for j in range(i + 1, len(pairs)):
            if det2(pairs[i][0], pairs[j][0]) != 0:
                basis = (i, j)
                break
        if basis:
            break
    if basis is None:
        # all sources on one line: a linear map must scale targets alike
        ref_s, ref_t = next((s, t) for s, t in pairs if any(s))
        for s, t in pairs:
            lam = s[0] / ref_s[0] if ref_s[0] else s[1] / ref_s[1]
            if (lam * ref_t[0], lam * ref_t[1]) != t:
                return None
        raise ValueError("rank deficient")
    i, j = basis
    src = from_columns(pairs[i][0], pairs[j][0])
    tgt = from_columns(pairs[i][1], pairs[j][1])
    r = mat_mul(tgt, mat_inv(src))
    if mat_det(r) == 0:
        return None
    for s, t in pairs:
        if mat_vec(r, s) != t:
            return None
    return r


def gl2z_normalize(columns: Sequence[Sequence[int]], mode: str):
    """Row-reduce a 2xk integer matrix (given by columns) with A in GL(2, Z).

    FIBRATION: the columns are parallel; returns (A, AB) with AB's second row
    zero and its first nonzero entry positive.

    CONTRACTION: exactly two independent columns v4, v5; returns (A, AB, d)
    with A v4 = (0, g), g the content of v4, and A v5 = (-d, c), 0 <= c < d,
    where d = |det B| / g.
    """
    cols = [tuple(int(x) for x in c) for c in columns]
    if not cols or all(c == (0, 0) for c in cols):
        raise ValueError("zero matrix")
    if mode == FIBRATION:
        if any(det2(cols[0], c) != 0 for c in cols) or any(
            det2(u, v) != 0 for u in cols for v in cols
        ):
            raise ValueError("FIBRATION mode needs a rank one matrix")
        p, q = next(c for c in cols if c != (0, 0))
        g, x, y = ext_gcd(p, q)
        a = ((x, y), (-q // g, p // g))
        return a, [mat_vec(a, c) for c in cols]
    if mode == CONTRACTION:
        if len(cols) != 2:
            raise ValueError("CONTRACTION mode needs exactly two columns")
        v4, v5 = cols
        det_b = det2(v4, v5)
        if det_b == 0:
            raise ValueError("CONTRACTION mode needs det B != 0")
        p, q = v4
        g, x, y = ext_gcd(p, q)
        a = ((-q // g, p // g), (x, y))
        e, f = mat_vec(a, v5)
        if e > 0:
            a = ((-a[0][0], -a[0][1]), a[1])
            e = -e
        d = -e
        k = f // d
        a = (a[0], (a[1][0] + k * a[0][0], a[1][1] + k * a[0][1]))
        ab = [mat_vec(a, c) for c in cols]
        assert abs(det_b) == g * d and ab[0] == (0, g) and ab[1][0] == -d
        return a, ab, d
    raise ValueError(f"unknown mode {mode!r}")

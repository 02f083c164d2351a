"""Graded 5x5 skew matrices and their maximal Pfaffians."""

from __future__ import annotations

from typing import Sequence

from .poly import NONHOMOGENEOUS, Poly, weighted_degree


def pfaffian4(m, rows: Sequence[int]):
    """Pfaffian of the 4x4 principal block of ``m`` on ``rows``."""
    i, j, k, l = rows
    return m[i][j] * m[k][l] - m[i][k] * m[j][l] + m[i][l] * m[j][k]


class GradedSkewMatrix:
    """5x5 antisymmetric matrix of polynomials with a degree for each entry.

    ``degrees`` may be omitted; when given, every nonzero entry above the
    diagonal must be homogeneous of that degree under ``weights``.
    """

    def __init__(self, entries, degrees=None, weights=None):
        if len(entries) != 5 or any(len(r) != 5 for r in entries):
            raise ValueError("need a 5x5 matrix")
        self.entries = [list(r) for r in entries]
        for i in range(5):
            if not _is_zero(self.entries[i][i]):
                raise ValueError("skew matrix must have zero diagonal")
            for j in range(i + 1, 5):
                if not _is_zero(self.entries[i][j] + self.entries[j][i]):
                    raise ValueError(f"entries ({i + 1},{j + 1}) and ({j + 1},{i + 1}) are not opposite")
        self.degrees = [list(r) for r in degrees] if degrees is not None else None
        if degrees is not None and weights is not None:
            for i in range(5):
                for j in range(i + 1, 5):
                    a = self.entries[i][j]
                    if isinstance(a, Poly) and not a.is_zero():
                        d = weighted_degree(a, weights)
                        if d is NONHOMOGENEOUS or d != self.degrees[i][j]:
                            raise ValueError(
                                f"entry ({i + 1},{j + 1}) has degree {d}, expected {self.degrees[i][j]}"
                            )

    @classmethod
    def from_upper(cls, upper: Sequence, zero, degrees_upper=None, weights=None):
        """Build from the ten entries a12, a13, a14, a15, a23, ..., a45."""
        m = [[zero] * 5 for _ in range(5)]
        d = [[0] * 5 for _ in range(5)] if degrees_upper is not None else None
        pos = 0
        for i in range(5):
            for j in range(i + 1, 5):
                m[i][j] = upper[pos]
                m[j][i] = -upper[pos]
                if d is not None:
                    d[i][j] = d[j][i] = degrees_upper[pos]
                pos += 1
        return cls(m, d, weights)

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    def pfaffian_degree(self, k: int) -> int:
        """Degree of Pf_k read off the degree matrix (k is 1-based)."""
        if self.degrees is None:
            raise ValueError("no degree matrix")
        i, j, a, b = [r for r in range(5) if r != k - 1]
        return self.degrees[i][j] + self.degrees[a][b]


def _is_zero(x) -> bool:
    return x.is_zero() if isinstance(x, Poly) else x == 0


def pfaffians5(m: GradedSkewMatrix | Sequence) -> list:
    """[Pf_1, ..., Pf_5], Pf_k the Pfaffian with row and column k deleted."""
    if not isinstance(m, GradedSkewMatrix):
        m = GradedSkewMatrix(m)
    e = m.entries
    return [pfaffian4(e, [r for r in range(5) if r != k]) for k in range(5)]


def signed_pfaffian_vector(m) -> list:
    p = pfaffians5(m)
    return [p[0], -p[1], p[2], -p[3], p[4]]

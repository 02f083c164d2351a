"""Fano family records, quotient singularities and the lcm non-solidity test."""

from __future__ import annotations

import copy
import json
from dataclasses import dataclass, field
from math import gcd
from pathlib import Path
from typing import Any

from .polyring import NONHOMOGENEOUS, Poly, Ring, multidegree, weighted_degree

NONSOLID = "NONSOLID"
INCONCLUSIVE = "INCONCLUSIVE"
OK = "OK"
REJECT = "REJECT"

TYPE_I = "I"
TYPE_II2 = "II2"

_KEYS = {
    "id", "fano_index", "coordinates", "centre", "cox_variables", "grading",
    "equations", "expected", "partial", "tom", "gamma_matrix",
}
_REQUIRED = {"id", "fano_index", "coordinates"}


class SchemaError(ValueError):
    """A family record that does not match the JSON schema."""


@dataclass(frozen=True)
class QuotientSingularity:
    r: int
    weights: tuple[int, int, int]

    def __str__(self):
        return f"1/{self.r}({','.join(map(str, self.weights))})"


@dataclass
class FanoFamily:
    id: str
    fano_index: int
    coordinates: list[tuple[str, int]]
    centre: tuple[str, str] | None = None
    cox_variables: list[str] | None = None
    grading: list[list[int]] | None = None
    equations: list[str] = field(default_factory=list)
    expected: dict[str, Any] = field(default_factory=dict)
    partial: bool = False
    tom: dict[str, Any] | None = None
    gamma_matrix: dict[str, Any] | None = None

    @property
    def weights(self) -> list[int]:
        return [w for _, w in self.coordinates]

    def weight(self, name: str) -> int:
        for n, w in self.coordinates:
            if n == name:
                return w
        raise KeyError(name)

    @property
    def centre_coordinate(self) -> str:
        if self.centre is None:
            raise ValueError(f"{self.id}: no centre recorded")
        return self.centre[0]

    def cox_ring(self) -> Ring:
        if not self.cox_variables:
            raise ValueError(f"{self.id}: no Cox ring variables")
        return Ring(self.cox_variables)

    def column(self, name: str) -> tuple[int, int]:
        i = self.cox_variables.index(name)
        return (self.grading[0][i], self.grading[1][i])

    def columns(self) -> dict[str, tuple[int, int]]:
        return {n: self.column(n) for n in self.cox_variables}

    def polynomials(self) -> list[Poly]:
        """Equations parsed in the Cox ring."""
        ring = self.cox_ring()
        return [ring.parse(e) for e in self.equations]

    def to_json(self) -> dict:
        out: dict[str, Any] = {
            "id": self.id,
            "fano_index": self.fano_index,
            "coordinates": [{"name": n, "weight": w} for n, w in self.coordinates],
        }
        if self.partial:
            out["partial"] = True
        if self.centre is not None:
            out["centre"] = {"coordinate": self.centre[0], "type": self.centre[1]}
        if self.cox_variables is not None:
            out["cox_variables"] = list(self.cox_variables)
        if self.grading is not None:
            out["grading"] = [list(r) for r in self.grading]
        if self.equations:
            out["equations"] = list(self.equations)
        if self.tom is not None:
            out["tom"] = copy.deepcopy(self.tom)
        if self.gamma_matrix is not None:
            out["gamma_matrix"] = copy.deepcopy(self.gamma_matrix)
        if self.expected:
            out["expected"] = copy.deepcopy(self.expected)
        return out


def family_from_json(data: dict, where: str = "<input>") -> FanoFamily:
    if not isinstance(data, dict):
        raise SchemaError(f"{where}: family record must be an object")
    unknown = set(data) - _KEYS
    if unknown:
        raise SchemaError(f"{where}: unknown keys {sorted(unknown)}")
    missing = _REQUIRED - set(data)
    if missing:
        raise SchemaError(f"{where}: missing keys {sorted(missing)}")
    fid = data["id"]
    if not isinstance(fid, str) or not fid.startswith("#"):
        raise SchemaError(f"{where}: id must look like '#12345'")
    index = data["fano_index"]
    if not isinstance(index, int) or index < 1:
        raise SchemaError(f"{where}: fano_index must be a positive integer")
    coords = []
    for i, c in enumerate(data["coordinates"]):
        if set(c) != {"name", "weight"}:
            raise SchemaError(f"{where}: coordinates[{i}] needs exactly name and weight")
        w = c["weight"]
        if not isinstance(w, int) or w <= 0:
            raise SchemaError(f"{where}: coordinates[{i}] ({c['name']}) weight must be a positive integer")
        coords.append((c["name"], w))
    if len({n for n, _ in coords}) != len(coords):
        raise SchemaError(f"{where}: duplicate coordinate names")
    centre = None
    if "centre" in data:
        cd = data["centre"]
        if set(cd) != {"coordinate", "type"} or cd["type"] not in (TYPE_I, TYPE_II2):
            raise SchemaError(f"{where}: centre needs coordinate and type I|II2")
        if coords and cd["coordinate"] not in {n for n, _ in coords}:
            raise SchemaError(f"{where}: centre coordinate {cd['coordinate']!r} not among coordinates")
        centre = (cd["coordinate"], cd["type"])
    fam = FanoFamily(
        id=fid,
        fano_index=index,
        coordinates=coords,
        centre=centre,
        cox_variables=data.get("cox_variables"),
        grading=data.get("grading"),
        equations=list(data.get("equations", [])),
        expected=data.get("expected", {}),
        partial=bool(data.get("partial", False)),
        tom=data.get("tom"),
        gamma_matrix=data.get("gamma_matrix"),
    )
    if fam.grading is not None:
        if fam.cox_variables is None:
            raise SchemaError(f"{where}: grading requires cox_variables")
        if len(fam.grading) != 2 or any(len(r) != len(fam.cox_variables) for r in fam.grading):
            raise SchemaError(f"{where}: grading must be 2 x {len(fam.cox_variables)}")
    if fam.equations:
        _check_equations(fam, where)
    return fam


def _check_equations(fam: FanoFamily, where: str):
    if fam.grading is None:
        raise SchemaError(f"{where}: equations need a grading")
    try:
        polys = fam.polynomials()
    except ValueError as exc:
        raise SchemaError(f"{where}: {exc}") from None
    for text, p in zip(fam.equations, polys):
        if p.is_zero() or multidegree(p, fam.grading) is NONHOMOGENEOUS:
            raise SchemaError(f"{where}: equation is not homogeneous for the grading: {text}")


def load_family(path: str | Path) -> FanoFamily:
    path = Path(path)
    try:
        data = json.loads(path.read_text())
    except json.JSONDecodeError as exc:
        raise SchemaError(f"{path}:{exc.lineno}: {exc.msg}") from None
    return family_from_json(data, str(path))


def lcm_criterion(weights, index: int) -> str:
    """NONSOLID when lcm of the two smallest weights is below the index."""
    w = sorted(weights)
    if len(w) < 2:
        raise ValueError("need at least two weights")
    a0, a1 = w[0], w[1]
    return NONSOLID if a0 * a1 // gcd(a0, a1) < index else INCONCLUSIVE


def weight_one_count(family_or_weights) -> int:
    weights = family_or_weights.weights if isinstance(family_or_weights, FanoFamily) else family_or_weights
    return sum(1 for w in weights if w == 1)


def normalize_quotient(r: int, w) -> QuotientSingularity:
    """Rescale 1/r(a,b,c) so the first weight becomes 1."""
    a, b, c = (int(x) for x in w)
    if gcd(a, r) != 1:
        raise ValueError(f"first weight {a} not invertible mod {r}")
    if (b + c) % r:
        raise ValueError("not in reducible form")
    k = pow(a, -1, r) if r > 1 else 0
    return QuotientSingularity(r, (1 % r if r > 1 else 1, k * b % r, k * c % r))


def terminal_odd_order_check(s: QuotientSingularity, index: int) -> tuple[str, str | None]:
    if index == 2 and s.r % 2 == 0:
        return REJECT, "even order"
    if gcd(s.weights[1], s.r) != 1:
        return REJECT, "non-isolated"
    return OK, None


def equation_degrees(fam: FanoFamily) -> list:
    """Bidegree of each Cox-ring equation."""
    return [multidegree(p, fam.grading) for p in fam.polynomials()]


def ambient_degree(p: Poly, weights) -> int:
    d = weighted_degree(p, weights)
    if d is NONHOMOGENEOUS:
        raise ValueError(f"nonhomogeneous polynomial {p}")
    return d

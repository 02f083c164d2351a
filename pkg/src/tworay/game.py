"""The 2-ray game: wall crossings restricted to the 3-fold, endpoints, fibres."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from math import prod
from typing import Any, Sequence

from . import chamber
from .blowup import centre_normal_form, frame_of, is_ideal_variable
from .chamber import DIV_TO_CURVE, DIV_TO_POINT, ChamberFan, endpoint_classify, endpoint_normalize, ray_scan
from .exactmath import FIBRATION, det2, frac, mat_inv, mat_vec, primitive
from .fano import TYPE_I, FanoFamily
from .polyring import (
    BLOCK,
    NONHOMOGENEOUS,
    BudgetExceeded,
    Ideal,
    Poly,
    Ring,
    dimension,
    eliminate,
    weighted_degree,
)
from .tomformat import EMPTY, common_zero_check, unprojection_shape_check

ISOMORPHISM = "ISOMORPHISM"
FLIP = "FLIP"
DIV_CONTRACTION = "DIV_CONTRACTION"
UNVERIFIED = "UNVERIFIED"
PASS = "PASS"
FAIL = "FAIL"

SYMBOLIC = "symbolic"
DECLARED = "declared"
LEMMA = "lemma"
TORIC = "toric"
ORACLE = "oracle"

LAMBDAS = (2, 3, 5, 7, 11, 13)


class GameError(RuntimeError):
    pass


@dataclass
class LinkStep:
    kind: str
    evidence: str
    wall: tuple[int, int] | None = None
    wall_variables: tuple[str, ...] = ()
    contracted: tuple[int, ...] = ()
    extracted: tuple[int, ...] = ()
    contracted_curve: tuple[str, ...] = ()
    extracted_curve: tuple[str, ...] = ()
    data: dict[str, Any] = field(default_factory=dict)

    @property
    def flip_type(self) -> tuple[int, ...]:
        return tuple(-w for w in self.contracted) + tuple(self.extracted)

    def label(self) -> str:
        if self.kind == FLIP:
            return f"FLIP({','.join(map(str, self.flip_type))})"
        return self.kind

    def to_json(self) -> dict:
        out: dict[str, Any] = {"kind": self.kind, "evidence": self.evidence}
        if self.wall is not None:
            out["wall"] = list(self.wall)
            out["wall_variables"] = list(self.wall_variables)
        if self.kind in (FLIP, UNVERIFIED):
            out["contracted"] = list(self.contracted)
            out["extracted"] = list(self.extracted)
            if self.contracted_curve:
                out["contracted_curve"] = list(self.contracted_curve)
                out["extracted_curve"] = list(self.extracted_curve)
        if self.kind == FLIP:
            out["type"] = list(self.flip_type)
        if self.data:
            out["data"] = _jsonable(self.data)
        return out


@dataclass
class LinkTrace:
    family: str
    level: int
    steps: list[LinkStep]
    endpoint: dict[str, Any]

    def labels(self) -> list[str]:
        return [s.label() for s in self.steps]

    def to_json(self) -> dict:
        return {
            "family": self.family,
            "level": self.level,
            "steps": [s.to_json() for s in self.steps],
            "endpoint": _jsonable(self.endpoint),
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True, indent=2)


def _jsonable(x):
    if isinstance(x, Fraction):
        return str(x) if x.denominator != 1 else int(x)
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, Poly):
        return str(x)
    return x


# --- first wall --------------------------------------------------------------

def first_wall_is_iso(fam: FanoFamily):
    """PASS when the pure parts f_j(xi, x1) have no common zero; else (FAIL, witness)."""
    if not fam.equations or fam.centre is None or fam.centre[1] != TYPE_I:
        raise GameError(f"{fam.id}: shape data missing")
    _, o = centre_normal_form(fam)
    polys = fam.polynomials()
    ideal = [n for n in fam.cox_variables if is_ideal_variable(n)]
    report = unprojection_shape_check(polys, fam.centre_coordinate, ideal, (o.xi, o.x1))
    fs = [p for y, p in report.pure_parts.items() if report.flags[y]]
    verdict, witness = common_zero_check(fs, o.xi, o.x1)
    return (PASS, None) if verdict == EMPTY else (FAIL, witness)


# --- wall restriction by slices ----------------------------------------------

def torus_weight(wall: Sequence[int], column: Sequence[int]) -> int:
    return abs(det2(wall, column))


def _order_weights(fan: ChamberFan, ring: Ring) -> list[int]:
    return [sum(fan.columns[n]) if sum(fan.columns[n]) > 0 else 1 for n in ring.names]


def _slice(polys, zero, ones) -> list[Poly]:
    vals = {z: 0 for z in zero}
    vals.update({o: 1 for o in ones})
    return [q for q in (p.subs(vals) for p in polys) if not q.is_zero()]


def _nonempty(polys, weights) -> bool:
    if not polys:
        return True
    return not Ideal(polys, polys[0].ring, weights).is_unit()


def _survivors(polys, wall_vars, side, other, weights) -> list[str]:
    out = []
    for v in side:
        if any(_nonempty(_slice(polys, other, [w, v]), weights) for w in wall_vars):
            out.append(v)
    return out


def _curve_pair(polys, wall_var, side, survivors, other, weights):
    """A pair (u, v) of survivors parametrizing the locus, or None."""
    dead = [v for v in side if v not in survivors]
    base = _slice(polys, list(other) + dead, [wall_var])
    if not base:
        return None
    ring = base[0].ring
    rest_vars = [v for v in ring.names if v not in survivors]
    for u, v in combinations(survivors, 2):
        others = [z for z in survivors if z not in (u, v)]
        order = BLOCK(ring, others + rest_vars, weights)
        gb = Ideal(base, ring, weights).basis(order)
        if any(g.variables() <= {u, v} for g in gb):
            continue
        def solved(z):
            zi = ring.index[z]
            return any(
                z in g.variables()
                and g.variables() <= {z, u, v}
                and g.coeff({z: 1})
                and all(e[zi] == 0 or sum(e) == 1 for e in g.terms)
                for g in gb
            )

        ok = all(solved(z) for z in others)
        if ok:
            return (u, v)
    return None


def wall_restriction(polys: Sequence[Poly], fan: ChamberFan, wall: int) -> LinkStep:
    """Restrict the toric crossing of ray ``wall`` to the variety cut out by ``polys``."""
    before, on, after = fan.partition(wall)
    w = primitive(fan.rays[wall].vector)
    ring = polys[0].ring
    weights = _order_weights(fan, ring)
    left = _survivors(polys, on, before, after, weights)
    right = _survivors(polys, on, after, before, weights)
    if not left and not right:
        return LinkStep(ISOMORPHISM, SYMBOLIC, w, tuple(on))
    for side, other in ((before, after), (after, before)):
        sl = _slice(polys, other, [on[0]])
        sl += [ring.var(z) for z in other] + [ring.var(on[0]) - 1]
        if dimension(Ideal(sl, ring, weights)) >= 3:
            raise GameError("not a small modification")
    if not left or not right:
        raise GameError("one-sided exceptional locus: not a small modification")

    def curve(side, other, surv):
        pair = _curve_pair(polys, on[0], side, surv, other, weights)
        names = pair if pair else tuple(surv)
        return names, tuple(torus_weight(w, fan.columns[n]) for n in names)

    c_names, c_weights = curve(before, after, left)
    e_names, e_weights = curve(after, before, right)
    c_sorted = sorted(zip(c_weights, c_names), reverse=True)
    e_sorted = sorted(zip(e_weights, e_names))
    return LinkStep(
        FLIP,
        SYMBOLIC,
        w,
        tuple(on),
        contracted=tuple(x for x, _ in c_sorted),
        extracted=tuple(x for x, _ in e_sorted),
        contracted_curve=tuple(n for _, n in c_sorted),
        extracted_curve=tuple(n for _, n in e_sorted),
    )


def toric_step(fan: ChamberFan, wall: int, evidence: str = TORIC, kind: str = UNVERIFIED) -> LinkStep:
    """The ambient crossing only: P(left weights) replaced by P(right weights)."""
    before, on, after = fan.partition(wall)
    w = primitive(fan.rays[wall].vector)
    return LinkStep(
        kind,
        evidence,
        w,
        tuple(on),
        contracted=tuple(sorted((torus_weight(w, fan.columns[n]) for n in before), reverse=True)),
        extracted=tuple(sorted(torus_weight(w, fan.columns[n]) for n in after)),
    )


def declared_flip(fam: FanoFamily, fan: ChamberFan, decl: dict) -> LinkStep:
    wall = fan.ray_of(decl["wall"])
    w = primitive(fan.rays[wall].vector)
    c_names = tuple(decl["contracted_curve"])
    e_names = tuple(decl["extracted_curve"])
    step = LinkStep(
        FLIP,
        DECLARED,
        w,
        fan.rays[wall].variables,
        contracted=tuple(torus_weight(w, fam.column(n)) for n in c_names),
        extracted=tuple(torus_weight(w, fam.column(n)) for n in e_names),
        contracted_curve=c_names,
        extracted_curve=e_names,
    )
    delta = decl.get("anticanonical", "xi")
    d = fam.column(delta)
    step.data["intersections"] = [
        chamber.toric_curve_intersection(d, w, *(fam.column(n) for n in c_names), chamber.CONTRACTED),
        chamber.toric_curve_intersection(d, w, *(fam.column(n) for n in e_names), chamber.EXTRACTED),
    ]
    return step


# --- discrepancy ---------------------------------------------------------------

def discrepancy(m, n) -> Fraction:
    """a = m2 / (n2 m1 - n1 m2)."""
    m1, m2 = (frac(x) for x in m)
    n1, n2 = (frac(x) for x in n)
    den = n2 * m1 - n1 * m2
    if den == 0:
        raise ValueError("E' proportional to pullback")
    return m2 / den


def endpoint_classes(fam: FanoFamily, fan: ChamberFan):
    """(m, n) with phi'^*(-K_X') ~ -m1 K_Y - m2 E (up to scale) and E' ~ -n1 K_Y - n2 E."""
    f = frame_of(fam)
    z4 = fan.rays[fan.m2_index].variables[0]
    z5 = fan.rays[-1].variables[0]
    k = mat_vec(f, fam.column(z4))
    e = mat_vec(f, fam.column(z5))
    return (k[0], -k[1]), (e[0], -e[1])


def discrepancy_oracle(fam: FanoFamily, fan: ChamberFan) -> Fraction:
    """Solve -K_Y = c * M2 - a * E' in the (-K_Y, E) frame."""
    f = frame_of(fam)
    z4 = fan.rays[fan.m2_index].variables[0]
    z5 = fan.rays[-1].variables[0]
    k = mat_vec(f, fam.column(z4))
    e = mat_vec(f, fam.column(z5))
    c, minus_a = mat_vec(mat_inv(((k[0], e[0]), (k[1], e[1]))), (1, 0))
    return -minus_a


# --- fibres ----------------------------------------------------------------------

def dp_degree(degrees: Sequence[int], weights: Sequence[int]) -> Fraction:
    """K^2 of a quasi-smooth weighted complete intersection surface."""
    if len(weights) - len(degrees) != 3:
        raise ValueError("not a surface")
    excess = sum(weights) - sum(degrees)
    if excess <= 0:
        raise ValueError("not del Pezzo")
    return Fraction(excess * excess * prod(degrees), prod(weights))


def dp_degree_rr(fibre_weights: dict[str, int]) -> int:
    """h^0(-K_S) - 1 with -K_S = O(1): weight-one fibre coordinates minus one."""
    return sum(1 for w in fibre_weights.values() if w == 1) - 1


STANDARD_DP = {
    4: ((1, 1, 1, 1, 1), (2, 2)),
    3: ((1, 1, 1, 1), (3,)),
    2: ((1, 1, 1, 2), (4,)),
    1: ((1, 1, 2, 3), (6,)),
}


@dataclass
class SurfaceModel:
    variables: tuple[str, ...]
    weights: tuple[int, ...]
    degrees: tuple[int, ...]
    equations: tuple[Poly, ...] = ()
    base_point: tuple = ()

    def to_json(self) -> dict:
        return {
            "variables": list(self.variables),
            "weights": list(self.weights),
            "degrees": list(self.degrees),
            "equations": [str(e) for e in self.equations],
            "base_point": _jsonable(list(self.base_point)),
        }


def _linear_dead_variables(polys: Sequence[Poly], fibre: Sequence[str]) -> list[str]:
    """Fibre coordinates that some generator expresses linearly in the others."""
    dead: list[str] = []
    live = list(polys)
    changed = True
    while changed:
        changed = False
        for v in fibre:
            if v in dead:
                continue
            for g in live:
                c = g.coeff({v: 1})
                if c and g.degree_in(v) == 1 and all(
                    e[g.ring.index[v]] == 0 or sum(e) == 1 for e in g.terms
                ):
                    sol = (g.ring.var(v) * c - g) / c
                    live = [h.subs({v: sol}) for h in live if h is not g]
                    live = [h for h in live if not h.is_zero()]
                    dead.append(v)
                    changed = True
                    break
    return dead


def _minimal_generators(polys: list[Poly], weights) -> list[Poly]:
    kept: list[Poly] = []
    for p in sorted(polys, key=lambda q: (weighted_degree(q, weights), str(q))):
        if kept and Ideal(kept, p.ring, weights).contains(p):
            continue
        kept.append(p)
    return kept


def generic_fiber(fam: FanoFamily, fan: ChamberFan | None = None, lambdas=LAMBDAS) -> SurfaceModel:
    """Fibre over the base point (1, lambda) presented after removing linear variables."""
    fan = fan or ray_scan(fam.grading, fam.cox_variables)
    ep = endpoint_normalize(fan, FIBRATION)
    base = fan.rays[-1].variables
    if len(base) != 2:
        raise GameError("generic fibre needs a base with two coordinates")
    fibre = [n for n in fam.cox_variables if n not in base]
    polys = fam.polynomials()
    ring = polys[0].ring
    fw = [ep.fibre_weights.get(n, 1) for n in ring.names]
    for lam in lambdas:
        pt = {base[0]: 1, base[1]: lam}
        sub = [q for q in (p.subs(pt) for p in polys) if not q.is_zero()]
        if dimension(Ideal(sub, ring, fw)) - len(base) != 3:
            continue
        dead = _linear_dead_variables(sub, fibre)
        red = eliminate(Ideal(sub, ring, fw), dead)
        keep = [n for n in fibre if n not in dead]
        small = Ring(keep)
        gens = [g.to_ring(small) for g in red.generators]
        sw = [ep.fibre_weights[n] for n in keep]
        gens = _minimal_generators([g for g in gens if not g.is_zero()], sw)
        degs = []
        for g in gens:
            d = weighted_degree(g, sw)
            if d is NONHOMOGENEOUS:
                raise GameError("fiber presentation not recognized")
            degs.append(d)
        if len(keep) - len(gens) != 3:
            raise GameError("fiber presentation not recognized")
        return SurfaceModel(tuple(keep), tuple(sw), tuple(degs), tuple(gens), (1, lam))
    raise GameError("no generic base point found")


def oracle_fiber(fibre_weights: dict[str, int]) -> SurfaceModel:
    k = dp_degree_rr(fibre_weights)
    if k not in STANDARD_DP:
        raise GameError(f"no standard del Pezzo model of degree {k}")
    w, d = STANDARD_DP[k]
    return SurfaceModel(tuple(f"u{i}" for i in range(len(w))), w, d)


# --- Gamma minors ----------------------------------------------------------------

def gamma_minors(rows: Sequence[Sequence[Poly]], weights) -> tuple[list[Poly], int]:
    if len(rows) != 2 or any(len(r) != 3 for r in rows):
        raise ValueError("need a 2x3 matrix")
    for r in rows:
        for a in r:
            if not a.is_zero() and weighted_degree(a, weights) is NONHOMOGENEOUS:
                raise ValueError(f"nonhomogeneous entry {a}")
    (a, b, c), (d, e, f) = rows
    minors = [b * f - c * e, a * f - c * d, a * e - b * d]
    ideal = Ideal([m for m in minors if not m.is_zero()], rows[0][0].ring, weights)
    return minors, dimension(ideal)


def gamma_for(fam: FanoFamily) -> tuple[list[Poly], int]:
    gm = fam.gamma_matrix
    if gm is None:
        raise GameError(f"{fam.id}: no Gamma matrix")
    ring = Ring(gm["variables"])
    rows = [[ring.parse(x) for x in r] for r in gm["rows"]]
    return gamma_minors(rows, gm["weights"])


# --- the trace ---------------------------------------------------------------------

def trace_link(fam: FanoFamily, level: int = 2) -> LinkTrace:
    if fam.grading is None:
        raise GameError(f"{fam.id}: no grading")
    fan = ray_scan(fam.grading, fam.cox_variables)
    symbolic = level >= 2 and bool(fam.equations)
    polys = fam.polynomials() if symbolic else []
    declared = {d["wall"]: d for d in fam.expected.get("declared_flips", [])}
    steps: list[LinkStep] = []
    for i, wall in enumerate(fan.walls()):
        on = fan.rays[wall].variables
        try:
            if symbolic:
                step = wall_restriction(polys, fan, wall)
                if i == 0:
                    verdict, witness = first_wall_is_iso(fam)
                    step.data["pure_parts_common_zero"] = "none" if verdict == PASS else witness
            elif i == 0:
                step = toric_step(fan, wall, LEMMA, ISOMORPHISM)
                step.contracted = step.extracted = ()
            elif any(v in declared for v in on):
                step = declared_flip(fam, fan, declared[next(v for v in on if v in declared)])
            else:
                step = toric_step(fan, wall)
        except BudgetExceeded as exc:
            step = toric_step(fan, wall)
            step.data["error"] = str(exc)
        steps.append(step)
    kind = endpoint_classify(fan)
    ep = endpoint_normalize(fan, kind)
    endpoint: dict[str, Any] = {"class": kind}
    if kind == FIBRATION:
        endpoint["base"] = list(ep.base)
        endpoint["fibre_weights"] = dict(ep.fibre_weights)
        terminal = LinkStep(FIBRATION, TORIC, primitive(fan.rays[-1].vector), fan.rays[-1].variables)
        override = fam.expected.get("declared_endpoint")
        if override:
            endpoint["on_threefold"] = override
            terminal.data["on_threefold"] = override
        else:
            if symbolic:
                try:
                    model = generic_fiber(fam, fan)
                    endpoint["fibre_evidence"] = SYMBOLIC
                except BudgetExceeded as exc:
                    model = oracle_fiber(ep.fibre_weights)
                    endpoint["fibre_evidence"] = f"{ORACLE} ({exc})"
            else:
                model = oracle_fiber(ep.fibre_weights)
                endpoint["fibre_evidence"] = ORACLE
            endpoint["fibre"] = model.to_json()
            endpoint["dp_degree"] = dp_degree(model.degrees, model.weights)
            endpoint["dp_degree_rr"] = dp_degree_rr(ep.fibre_weights)
            terminal.data.update({"base": list(ep.base), "dp_degree": endpoint["dp_degree"]})
    else:
        target = "POINT" if kind == DIV_TO_POINT else "CURVE"
        endpoint.update({
            "d": ep.d,
            "g": ep.g,
            "quotient": ep.quotient,
            "kappa": dict(ep.kappa),
            "target_weights": sorted(ep.lam.values()),
        })
        if kind == DIV_TO_CURVE:
            endpoint["curve"] = list(ep.curve)
        terminal = LinkStep(DIV_CONTRACTION, TORIC, primitive(fan.rays[-1].vector), fan.rays[-1].variables)
        terminal.data.update({"to": target, "d": ep.d})
        if fam.centre is not None and fam.centre[1] == TYPE_I:
            m, n = endpoint_classes(fam, fan)
            a = discrepancy(m, n)
            endpoint["discrepancy"] = a
            endpoint["m"], endpoint["n"] = list(m), list(n)
            terminal.data["discrepancy"] = a
    steps.append(terminal)
    return LinkTrace(fam.id, 2 if symbolic else 1, steps, endpoint)

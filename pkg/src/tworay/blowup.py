"""The Kawamata blowup of a Type I centre: normal form, lifted classes, frames."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .exactmath import from_columns, mat_inv, mat_vec, solve_basis_change
from .fano import TYPE_I, FanoFamily, QuotientSingularity, normalize_quotient
from .polyring import NONHOMOGENEOUS, multidegree

MISMATCH = "MISMATCH"
FIXPOINT_CAP = 32


@dataclass(frozen=True)
class SectionClass:
    """k1 * (-K_Y) + k2 * E."""

    k1: Fraction
    k2: Fraction
    exact: bool = True

    def as_tuple(self) -> tuple[Fraction, Fraction]:
        return (self.k1, self.k2)


@dataclass(frozen=True)
class Orbinates:
    xi: str
    x1: str
    x2: str


def is_ideal_variable(name: str) -> bool:
    return name.startswith("y")


def orbinates(fam: FanoFamily) -> Orbinates:
    if fam.fano_index != 2:
        raise ValueError(f"{fam.id}: expected Fano index 2")
    if fam.centre is None or fam.centre[1] != TYPE_I:
        raise ValueError(f"{fam.id}: centre is not of Type I")
    s = fam.centre_coordinate
    rest = [(n, w) for n, w in fam.coordinates if n != s and not is_ideal_variable(n)]
    if len(rest) != 3:
        raise ValueError(f"{fam.id}: expected three orbinates, found {[n for n, _ in rest]}")
    xi = next((n for n, w in rest if n == "xi" and w == 2), None)
    if xi is None:
        xi = next((n for n, w in rest if w == 2), None)
    if xi is None:
        raise ValueError(f"{fam.id}: no weight-2 orbinate")
    others = [(n, w) for n, w in rest if n != xi]
    even = [n for n, w in others if w % 2 == 0]
    odd = [n for n, w in others if w % 2 == 1]
    if len(even) != 1 or len(odd) != 1:
        raise ValueError(f"{fam.id}: no valid orbinate parity split")
    a_s = fam.weight(s)
    x1 = even[0]
    if (fam.weight(x1) + fam.weight(odd[0])) % a_s == 0:
        return Orbinates(xi, x1, odd[0])
    # labels disagree with the weights: take the odd coordinate completing x1 mod a_s
    fits = [n for n, w in fam.coordinates if n not in (s, xi, x1) and w % 2 and (fam.weight(x1) + w) % a_s == 0]
    if not fits:
        raise ValueError(f"{fam.id}: no odd orbinate with wt(x1) + wt(x2) divisible by {a_s}")
    return Orbinates(xi, x1, fits[0])


def centre_normal_form(fam: FanoFamily) -> tuple[QuotientSingularity, Orbinates]:
    o = orbinates(fam)
    a_s = fam.weight(fam.centre_coordinate)
    return normalize_quotient(a_s, (2, fam.weight(o.x1), fam.weight(o.x2))), o


def unprojection_variable(poly, s: str, ideal: list[str]) -> str | None:
    """The y with s*y a monomial of ``poly``, if any."""
    for y in ideal:
        if poly.coeff({s: 1, y: 1}):
            return y
    return None


def _vanishing(mono: tuple, names, nu) -> Fraction:
    return sum((nu[n] * k for n, k in zip(names, mono) if k and n in nu), Fraction(0))


def lift_classes(fam: FanoFamily, blowup_var: str = "t") -> dict[str, SectionClass]:
    """Classes of the lifted coordinates in the (-K_Y, E) frame."""
    _, o = centre_normal_form(fam)
    s = fam.centre_coordinate
    a_s = fam.weight(s)
    a1 = fam.weight(o.x1)
    nu: dict[str, Fraction] = {
        o.xi: Fraction(1, a_s),
        o.x1: Fraction(a1, 2 * a_s),
        o.x2: Fraction(2 * a_s - a1, 2 * a_s),
        s: Fraction(0),
    }
    ideal = [n for n, _ in fam.coordinates if n not in nu]
    odd = [y for y in ideal if fam.weight(y) % 2 == 1]
    even = [y for y in ideal if fam.weight(y) % 2 == 0]
    for y in odd:
        nu[y] = Fraction(fam.weight(y) + a_s, 2 * a_s)
    exact = {n: True for n in nu}
    for y in even:
        # lemma bound m >= 1/2, refined by the fixpoint when equations exist
        nu[y] = Fraction(fam.weight(y), 2 * a_s) + Fraction(1, 2)
        exact[y] = False
    if fam.equations and even:
        polys = [p.subs({blowup_var: 1}) for p in fam.polynomials()]
        names = polys[0].ring.names
        for y in even:
            eq = next((p for p in polys if unprojection_variable(p, s, [y])), None)
            if eq is None:
                continue
            target = {s: 1, y: 1}
            for _ in range(FIXPOINT_CAP):
                vals = [
                    _vanishing(e, names, nu)
                    for e in eq.terms
                    if eq.term_dict(e) != target
                ]
                new = min(vals) - nu[s]
                if new < nu[y]:
                    raise ArithmeticError(f"vanishing order of {y} decreased")
                if new == nu[y]:
                    exact[y] = True
                    break
                nu[y] = new
    out = {}
    for n, w in fam.coordinates:
        if n in nu:
            out[n] = SectionClass(Fraction(w, 2), Fraction(w, 2 * a_s) - nu[n], exact[n])
    out[blowup_var] = SectionClass(Fraction(0), Fraction(1))
    return out


def grading_consistency(fam: FanoFamily, lift: dict[str, SectionClass]):
    """R with R * class(z) = grading column of z for every exact class, or MISMATCH."""
    pairs = [(c.as_tuple(), fam.column(n)) for n, c in lift.items() if c.exact and n in fam.cox_variables]
    r = solve_basis_change(pairs)
    return MISMATCH if r is None else r


def frame_of(fam: FanoFamily, xi: str = "xi", blowup_var: str = "t"):
    """Map from grading columns to (-K_Y, E) coordinates: col(xi) -> (1,0), col(t) -> (0,1)."""
    return mat_inv(from_columns(fam.column(xi), fam.column(blowup_var)))


def ambient_weights_from_grading(fam: FanoFamily, xi: str = "xi", blowup_var: str = "t") -> dict[str, int]:
    """Weights on X read off the grading: the functional killing t with xi of weight 2."""
    f = frame_of(fam, xi, blowup_var)
    out = {}
    for n in fam.cox_variables:
        if n == blowup_var:
            continue
        k1 = mat_vec(f, fam.column(n))[0]
        w = 2 * k1
        if w.denominator != 1:
            raise ValueError(f"{fam.id}: non-integral weight for {n}")
        out[n] = int(w)
    return out


@dataclass
class EquationClass:
    text: str
    cls: tuple[Fraction, Fraction]
    unprojection_of: str | None

    @property
    def e_part(self) -> Fraction:
        return self.cls[1]


def equation_classes(fam: FanoFamily) -> tuple[list[EquationClass], bool]:
    """Class of every lifted equation and whether exactly three unprojection equations are E-free."""
    if not fam.equations:
        raise ValueError(f"{fam.id}: no equations")
    f = frame_of(fam)
    s = fam.centre_coordinate
    ideal = [n for n in fam.cox_variables if is_ideal_variable(n)]
    out = []
    for text, p in zip(fam.equations, fam.polynomials()):
        deg = multidegree(p, fam.grading)
        if deg is NONHOMOGENEOUS:
            raise ValueError(f"nonhomogeneous lifted equation: {text}")
        out.append(EquationClass(text, tuple(mat_vec(f, deg)), unprojection_variable(p, s, ideal)))
    unproj = [e for e in out if e.unprojection_of]
    pfaff = [e for e in out if not e.unprojection_of]
    flag = sum(1 for e in unproj if e.e_part == 0) == 3 and all(e.e_part < 0 for e in pfaff)
    return out, flag

import random

import pytest
import sympy

from tworay.blowup import orbinates
from tworay.corpus import load
from tworay.polyring import Ring
from tworay.tomformat import (
    EMPTY,
    FAIL,
    NONEMPTY,
    PASS,
    PRODUCT,
    QUADRATIC_FORM,
    SQUARE,
    common_zero_check,
    degrees_from_upper,
    detect_configuration,
    is_tom,
    pure_power_report,
    relabel,
    tom_permutation,
    unprojection_shape_check,
)

M1405 = degrees_from_upper([3, 3, 4, 4, 4, 5, 5, 5, 5, 6])
M569 = degrees_from_upper([3, 4, 5, 6, 5, 6, 7, 7, 8, 9])
DISTINCT = degrees_from_upper([1, 2, 3, 4, 5, 6, 7, 8, 9, 10])


def test_configuration_examples():
    a = detect_configuration(M1405)
    assert (a.label, a.pivot) == ("A", 5)
    b = detect_configuration(M569)
    assert (b.label, b.pivot) == ("B", 7)
    assert detect_configuration(DISTINCT).label == "NONE"


def test_configuration_transpose_symmetry():
    # swapping 2<->3 and 4<->5 exchanges a24 with a35 and a25 with a34
    perm = [0, 2, 1, 4, 3]
    for m in (M1405, M569, DISTINCT):
        assert detect_configuration(relabel(m, perm)) == detect_configuration(m)


def test_other_tom_index_adapter():
    perm = tom_permutation(3)
    moved = relabel(M569, perm)
    assert detect_configuration(moved, 3) == detect_configuration(M569)


def test_pure_power_cases():
    (f,) = pure_power_report(M569, {"y": 7})
    assert (f.variables, f.kind, f.pfaffian) == (("y",), SQUARE, 1)
    (f,) = pure_power_report(M569, {"y1": 7, "y2": 7})
    assert f.kind == PRODUCT
    (f,) = pure_power_report(M1405, {"y1": 5, "y2": 5})
    assert f.kind == QUADRATIC_FORM
    kinds = {(g.variables, g.kind) for g in pure_power_report(M1405, {"y1": 5, "y2": 5, "y3": 5})}
    assert kinds == {(("y3",), SQUARE), (("y1", "y2"), QUADRATIC_FORM)}
    assert pure_power_report(DISTINCT, {"y": 5}) == []


def test_is_tom():
    ring = Ring(["y", "p", "q"])
    y, p, q = ring("y"), ring("p"), ring("q")
    m = [[ring.zero()] * 5 for _ in range(5)]
    for i in range(5):
        for j in range(i + 1, 5):
            m[i][j] = p if i == 0 else y * q
            m[j][i] = -m[i][j]
    assert is_tom(m, 1, ["y"])
    m[2][3], m[3][2] = q, -q
    assert not is_tom(m, 1, ["y"])


def _fixture():
    fam = load()["#39961"]
    o = orbinates(fam)
    ideal = [n for n in fam.cox_variables if n.startswith("y")]
    return fam, o, ideal


def test_shape_check_39961():
    fam, o, ideal = _fixture()
    report = unprojection_shape_check(fam.polynomials(), "s", ideal, (o.xi, o.x1))
    assert report.flags == {"y1": True, "y2": True, "y3": True, "y4": False}
    assert report.verdict == PASS
    assert report.pure_parts["y1"].coeff({"x1": 2}) != 0
    assert report.pure_parts["y3"].coeff({"xi": 6}) != 0


def test_shape_check_fail_and_errors():
    ring = Ring(["s", "y1", "y2", "y3", "y4", "xi", "x1", "x2"])
    eqs = [ring(f"s*y{j} - x2*y{j % 4 + 1}") for j in range(1, 5)]
    assert unprojection_shape_check(eqs, "s", ["y1", "y2", "y3", "y4"], ("xi", "x1")).verdict == FAIL
    with pytest.raises(ValueError, match="need 4"):
        unprojection_shape_check(eqs[:3], "s", ["y1", "y2", "y3", "y4"], ("xi", "x1"))


def test_shape_check_parity_flag():
    # an odd-degree pure part cannot match the even degree of s*y
    ring = Ring(["s", "y1", "y2", "y3", "y4", "xi", "x1"])
    weights = {"s": 5, "y1": 3, "y2": 5, "y3": 7, "y4": 4, "xi": 2, "x1": 4}
    eqs = [
        ring("s*y1 - x1^2"),
        ring("s*y2 - xi*x1^2 - xi^3"),
        ring("s*y3 - xi^6"),
        ring("s*y4 - xi^3*x1 - xi"),
    ]
    report = unprojection_shape_check(eqs, "s", ["y1", "y2", "y3", "y4"], ("xi", "x1"), weights)
    assert report.flags["y4"] is False
    assert report.flags["y1"] is True


def test_common_zero_examples():
    ring = Ring(["xi", "x1"])
    assert common_zero_check([ring("x1^2"), ring("xi^6")], "xi", "x1") == (EMPTY, None)
    assert common_zero_check([ring("xi*x1")], "xi", "x1")[0] == NONEMPTY
    assert common_zero_check([ring("xi^4 - x1^2"), ring("xi^2 + x1")], "xi", "x1")[0] == NONEMPTY
    assert common_zero_check([ring("xi^4 - x1^2"), ring("x1 + 3*xi^2")], "xi", "x1") == (EMPTY, None)
    with pytest.raises(ValueError):
        common_zero_check([ring.zero()], "xi", "x1")


def _oracle(forms, xi, x1):
    """Common zero on P^1 via the point (0:1) and a gcd in the xi = 1 chart."""
    x, u = sympy.symbols("xi x1")
    exprs = [sympy.sympify(str(f).replace("^", "**"), locals={"xi": x, "x1": u}) for f in forms]
    if all(e.subs({x: 0, u: 1}) == 0 for e in exprs):
        return NONEMPTY
    chart = [sympy.Poly(e.subs(x, 1), u) for e in exprs]
    g = chart[0]
    for c in chart[1:]:
        g = sympy.gcd(g, c)
    return EMPTY if g.degree() <= 0 else NONEMPTY


def test_common_zero_random_forms_against_gcd():
    rng = random.Random(5)
    ring = Ring(["xi", "x1"])
    for _ in range(150):
        forms = []
        root = rng.randint(-3, 3)
        shared = rng.random() < 0.5
        for _ in range(rng.randint(2, 3)):
            d = rng.randint(1, 8)
            f = ring.zero()
            for i in range(d + 1):
                f = f + ring.monomial({"xi": i, "x1": d - i}, rng.randint(-3, 3))
            if f.is_zero():
                f = ring("xi")
            if shared:
                f = f * (ring("x1") - ring.const(root) * ring("xi"))
            forms.append(f)
        got, _ = common_zero_check(forms, "xi", "x1")
        assert got == _oracle(forms, "xi", "x1")
        if shared:
            assert got == NONEMPTY

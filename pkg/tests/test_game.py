import json
import random
from fractions import Fraction as F

import pytest

from tworay import chamber
from tworay.chamber import endpoint_classify, ray_scan
from tworay.corpus import load
from tworay.fano import TYPE_I, FanoFamily
from tworay.game import (
    DECLARED,
    FAIL,
    FLIP,
    ISOMORPHISM,
    LEMMA,
    PASS,
    STANDARD_DP,
    SYMBOLIC,
    TORIC,
    UNVERIFIED,
    GameError,
    discrepancy,
    discrepancy_oracle,
    dp_degree,
    dp_degree_rr,
    endpoint_classes,
    first_wall_is_iso,
    gamma_for,
    gamma_minors,
    generic_fiber,
    torus_weight,
    trace_link,
)
from tworay.polyring import Ring

CORPUS = load()
GRADED = [f for f in CORPUS.sorted() if f.grading]
TABLE3_TYPE_I = [
    f for f in GRADED if f.expected.get("table") == 3 and f.centre and f.centre[1] == TYPE_I
]

QUARTIC = (
    "t*xi^3 + t^2*y2 + t*xi*y2 - y2^2 + t^2*xi*y1 - xi^3*y1"
    " - t*y2*y1 - xi*y1*y2 - t^2*y1^2 + y2*y1^2"
)


def test_first_wall_39961():
    assert first_wall_is_iso(CORPUS["#39961"]) == (PASS, None)


def test_first_wall_shared_zero_fails():
    fam = CORPUS["#39961"]
    # every pure part now vanishes at x1 = 0
    eqs = [e.replace("- xi^6 ", "- xi^2*x1^2 ") for e in fam.equations]
    verdict, witness = first_wall_is_iso(FanoFamily(**{**fam.__dict__, "equations": eqs}))
    assert verdict == FAIL and witness


def test_first_wall_needs_equations():
    with pytest.raises(GameError, match="shape data missing"):
        first_wall_is_iso(CORPUS["#39660"])


def test_torus_weight():
    assert torus_weight((0, 1), (3, 1)) == 3
    assert torus_weight((0, 1), (-3, 1)) == 3
    assert torus_weight((1, 1), (1, 1)) == 0


def test_witness_point_on_y3_wall():
    fam = CORPUS["#39961"]
    point = {n: 0 for n in fam.cox_variables}
    point.update(t=1, xi=1, s=-1, x1=0, y3=1)
    assert all(p.subs(point).is_zero() for p in fam.polynomials())


def test_trace_39961_level2():
    tr = trace_link(CORPUS["#39961"])
    assert tr.level == 2
    assert tr.steps[0].kind == ISOMORPHISM
    assert all(s.kind in (ISOMORPHISM, FLIP) for s in tr.steps[:-1])
    assert all(s.evidence == SYMBOLIC for s in tr.steps[:-1])
    assert tr.endpoint["base"] == [1, 2]
    assert tr.endpoint["dp_degree"] == 2
    assert tr.endpoint["fibre_evidence"] == SYMBOLIC


def test_trace_json_stable():
    a = trace_link(CORPUS["#39961"]).dumps()
    b = trace_link(CORPUS["#39961"]).dumps()
    assert a == b
    assert list(json.loads(a)) == ["endpoint", "family", "level", "steps"]


def test_fibre_is_the_quartic():
    fam = CORPUS["#39961"]
    model = generic_fiber(fam, lambdas=(1,))
    assert model.weights == (1, 1, 2, 1) and model.degrees == (4,)
    ring = Ring(model.variables)
    (eq,) = model.equations
    expected = ring.parse(QUARTIC)
    assert eq == expected or eq == -expected


def test_fibre_default_base_point_degree():
    model = generic_fiber(CORPUS["#39961"])
    assert dp_degree(model.degrees, model.weights) == 2


def test_level1_marks_unverified():
    tr = trace_link(CORPUS["#39660"], level=1)
    assert tr.steps[0].kind == ISOMORPHISM and tr.steps[0].evidence == LEMMA
    assert all(s.kind == UNVERIFIED and s.evidence == TORIC for s in tr.steps[1:-1])


def test_level1_39961_has_no_symbolic_steps():
    tr = trace_link(CORPUS["#39961"], level=1)
    assert tr.level == 1
    assert not any(s.evidence == SYMBOLIC for s in tr.steps)


def test_declared_flip_40672():
    tr = trace_link(CORPUS["#40672"])
    assert tr.steps[0].kind == ISOMORPHISM
    flip = tr.steps[1]
    assert flip.evidence == DECLARED
    assert flip.label() == "FLIP(-3,-1,1,2)"
    assert flip.data["intersections"] == [F(1, 3), F(-1, 2)]


def test_39660_endpoint():
    tr = trace_link(CORPUS["#39660"])
    ep = tr.endpoint
    assert ep["class"] == chamber.DIV_TO_POINT
    assert ep["d"] == 2 and ep["discrepancy"] == F(1, 2)
    assert tr.steps[-1].data["to"] == "POINT"


def test_39678_endpoint_curve():
    ep = trace_link(CORPUS["#39678"]).endpoint
    assert ep["class"] == chamber.DIV_TO_CURVE
    assert sorted(ep["curve"]) == [1, 1]


def test_39993_del_pezzo_four():
    assert trace_link(CORPUS["#39993"]).endpoint["dp_degree"] == 4


@pytest.mark.parametrize("fam", GRADED, ids=lambda f: f.id)
def test_trace_shape(fam):
    tr = trace_link(fam)
    assert tr.steps[0].kind == ISOMORPHISM
    interior = tr.steps[:-1]
    assert all(s.kind in (ISOMORPHISM, FLIP, UNVERIFIED) for s in interior)
    for s in interior:
        if s.kind == FLIP:
            assert s.contracted and s.extracted
    kind = endpoint_classify(ray_scan(fam.grading, fam.cox_variables))
    assert tr.endpoint["class"] == kind


@pytest.mark.parametrize("fam", TABLE3_TYPE_I, ids=lambda f: f.id)
def test_discrepancy_positive_and_matches_oracle(fam):
    fan = ray_scan(fam.grading, fam.cox_variables)
    a = discrepancy(*endpoint_classes(fam, fan))
    assert a > 0
    assert a == discrepancy_oracle(fam, fan)


def test_discrepancy_examples():
    for r in range(2, 12):
        assert discrepancy((1, F(1, r)), (0, 1)) == F(1, r)
    with pytest.raises(ValueError, match="proportional"):
        discrepancy((2, 4), (1, 2))


def test_dp_degree_examples():
    assert dp_degree([4], [1, 1, 1, 2]) == 2
    assert dp_degree([3], [1, 1, 1, 1]) == 3
    assert dp_degree([6], [1, 1, 2, 3]) == 1
    assert dp_degree([2, 2], [1, 1, 1, 1, 1]) == 4
    with pytest.raises(ValueError, match="not del Pezzo"):
        dp_degree([5], [1, 1, 1, 2])
    with pytest.raises(ValueError, match="not a surface"):
        dp_degree([2], [1, 1, 1, 1, 1])


def test_standard_models_agree_with_rr():
    for k, (weights, degrees) in STANDARD_DP.items():
        assert dp_degree(degrees, weights) == k
        assert dp_degree_rr({f"u{i}": w for i, w in enumerate(weights)}) == k


@pytest.mark.parametrize("fid", ["#40672", "#40671"])
def test_gamma_cone_dimension(fid):
    minors, dim = gamma_for(CORPUS[fid])
    assert len(minors) == 3 and dim == 2


def test_gamma_laplace_identity():
    rng = random.Random(3)
    ring = Ring(["a", "b", "c", "d"])
    weights = [1, 1, 1, 2]
    gens = ring.gens()
    for _ in range(20):
        rows = []
        for _ in range(2):
            row = []
            for _ in range(3):
                p = ring.zero()
                for g in gens[:3]:
                    p = p + g * rng.randint(-4, 4)
                row.append(p if not p.is_zero() else gens[0])
            rows.append(row)
        (m0, m1, m2), _ = gamma_minors(rows, weights)
        for r in rows:
            assert (r[0] * m0 - r[1] * m1 + r[2] * m2).is_zero()


def test_gamma_rejects_nonhomogeneous():
    ring = Ring(["a", "b"])
    a, b = ring.gens()
    with pytest.raises(ValueError, match="nonhomogeneous"):
        gamma_minors([[a, b, a + b * b], [a, b, a]], [1, 1])
    with pytest.raises(ValueError, match="2x3"):
        gamma_minors([[a, b]], [1, 1])

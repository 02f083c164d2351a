import json
from math import gcd

import pytest
from hypothesis import given
from hypothesis import strategies as st

from tworay.corpus import load
from tworay.fano import (
    INCONCLUSIVE,
    NONSOLID,
    OK,
    REJECT,
    QuotientSingularity,
    SchemaError,
    ambient_degree,
    equation_degrees,
    family_from_json,
    lcm_criterion,
    load_family,
    normalize_quotient,
    terminal_odd_order_check,
    weight_one_count,
)
from tworay.polyring import Ring


def test_lcm_examples():
    assert lcm_criterion([1, 1, 1, 2, 2, 2, 3, 3], 2) == NONSOLID
    assert lcm_criterion([2, 2, 3, 5, 5, 7, 12, 17], 2) == INCONCLUSIVE
    assert lcm_criterion([2, 3, 5], 7) == NONSOLID
    with pytest.raises(ValueError):
        lcm_criterion([1], 2)


@given(st.lists(st.integers(1, 20), min_size=2, max_size=8), st.integers(2, 9))
def test_lcm_sorts_and_ignores_tail_order(weights, index):
    assert lcm_criterion(weights, index) == lcm_criterion(sorted(weights, reverse=True), index)


def test_weight_one_count():
    assert weight_one_count([1, 1, 1, 2, 2, 2, 3, 3]) == 3
    assert weight_one_count([2, 3, 5]) == 0
    assert weight_one_count([1] * 9) == 9


def test_normalize_examples():
    assert str(normalize_quotient(5, (2, 4, 1))) == "1/5(1,2,3)"
    assert str(normalize_quotient(3, (1, 1, 2))) == "1/3(1,1,2)"
    assert str(normalize_quotient(17, (2, 12, 5))) == "1/17(1,6,11)"


def test_normalize_errors():
    with pytest.raises(ValueError, match="invertible"):
        normalize_quotient(4, (2, 1, 3))
    with pytest.raises(ValueError, match="not in reducible form"):
        normalize_quotient(5, (2, 1, 1))


@given(st.sampled_from([3, 5, 7, 9, 11, 13, 17]), st.integers(1, 40), st.integers(1, 40))
def test_normalize_idempotent(r, a, b):
    if gcd(a, r) != 1:
        return
    c = (-b) % r or r
    q = normalize_quotient(r, (a, b, c))
    assert q.r == r and q.weights[0] == 1
    assert (q.weights[1] + q.weights[2]) % r == 0
    assert normalize_quotient(q.r, q.weights) == q


def test_terminal_odd_order():
    assert terminal_odd_order_check(QuotientSingularity(5, (1, 2, 3)), 2) == (OK, None)
    assert terminal_odd_order_check(QuotientSingularity(4, (1, 1, 3)), 2) == (REJECT, "even order")
    assert terminal_odd_order_check(QuotientSingularity(2, (1, 1, 1)), 1) == (OK, None)
    assert terminal_odd_order_check(QuotientSingularity(9, (1, 3, 6)), 2)[0] == REJECT


def _record(**over):
    data = {
        "id": "#1",
        "fano_index": 2,
        "coordinates": [{"name": "x", "weight": 1}, {"name": "y", "weight": 2}],
        "cox_variables": ["x", "y"],
        "grading": [[1, 2], [0, 0]],
    }
    data.update(over)
    return data


def test_schema_rejects_weight_zero():
    bad = _record(coordinates=[{"name": "x", "weight": 0}])
    with pytest.raises(SchemaError, match="weight"):
        family_from_json(bad)


def test_schema_rejects_unknown_keys():
    with pytest.raises(SchemaError, match="unknown keys"):
        family_from_json(_record(colour="red"))


def test_schema_names_mixed_degree_equation():
    with pytest.raises(SchemaError, match="x\\^2 \\+ y\\^3"):
        family_from_json(_record(equations=["x^2 + y^3"]))


def test_schema_accepts_homogeneous():
    fam = family_from_json(_record(equations=["x^2 - y"]))
    assert equation_degrees(fam) == [(2, 0)]


def test_load_family_reports_line(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text('{\n  "id": "#1",\n  "fano_index": 2,\n  oops\n}')
    with pytest.raises(SchemaError, match=r"bad\.json:4"):
        load_family(path)


def test_ambient_degree():
    ring = Ring(["x", "y"])
    assert ambient_degree(ring("x^2*y"), (1, 2)) == 4
    with pytest.raises(ValueError):
        ambient_degree(ring("x + y"), (1, 2))


def test_json_round_trip_every_family():
    for fam in load().sorted():
        again = family_from_json(json.loads(json.dumps(fam.to_json())))
        assert again == fam


def test_corpus_weights_and_index():
    corpus = load()
    for fam in corpus.sorted():
        assert fam.fano_index == 2
        assert all(w > 0 for w in fam.weights)
    assert weight_one_count(corpus["#40672"]) == 3
    assert weight_one_count(corpus["#40671"]) == 3

from fractions import Fraction as F

import pytest

from tworay.blowup import (
    MISMATCH,
    SectionClass,
    ambient_weights_from_grading,
    centre_normal_form,
    equation_classes,
    grading_consistency,
    lift_classes,
    orbinates,
)
from tworay.corpus import load
from tworay.fano import TYPE_I, FanoFamily

CORPUS = load()
TYPE_I_GRADED = [f for f in CORPUS.sorted() if f.grading and f.centre and f.centre[1] == TYPE_I]


@pytest.mark.parametrize(
    "fid, form",
    [("#39961", "1/5(1,2,3)"), ("#40672", "1/3(1,1,2)"), ("#39660", "1/17(1,6,11)")],
)
def test_centre_normal_form(fid, form):
    assert str(centre_normal_form(CORPUS[fid])[0]) == form


def test_orbinates_39961():
    o = orbinates(CORPUS["#39961"])
    assert (o.xi, o.x1, o.x2) == ("xi", "x1", "x2")


def test_orbinates_reject_type_ii():
    with pytest.raises(ValueError, match="Type I"):
        orbinates(CORPUS["#39607"])


def test_lift_classes_39961():
    lift = lift_classes(CORPUS["#39961"])
    assert lift["xi"].as_tuple() == (1, 0)
    assert lift["y1"].as_tuple() == (F(3, 2), F(-1, 2))
    assert lift["y4"].as_tuple() == (1, -1)
    assert lift["y4"].exact
    assert lift["t"].as_tuple() == (0, 1)
    assert lift["s"].as_tuple() == (F(5, 2), F(1, 2))


@pytest.mark.parametrize("fam", TYPE_I_GRADED, ids=lambda f: f.id)
def test_lift_class_shape(fam):
    lift = lift_classes(fam)
    o = orbinates(fam)
    assert lift[o.xi].k2 == 0 and lift[o.x1].k2 == 0
    assert lift[o.x2].k2 == F(-1, 2)
    assert lift[fam.centre_coordinate].k2 == F(1, 2)
    for name, cls in lift.items():
        if name != "t":
            assert cls.k1 > 0


@pytest.mark.parametrize("fam", TYPE_I_GRADED, ids=lambda f: f.id)
def test_grading_consistency_every_type_i_grading(fam):
    assert grading_consistency(fam, lift_classes(fam)) != MISMATCH


def test_grading_consistency_39961_matrix():
    fam = CORPUS["#39961"]
    assert grading_consistency(fam, lift_classes(fam)) == ((2, 0), (1, 1))


def test_grading_consistency_perturbed():
    fam = CORPUS["#39961"]
    rows = [list(r) for r in fam.grading]
    rows[0][fam.cox_variables.index("y3")] += 1
    bad = FanoFamily(**{**fam.__dict__, "grading": rows, "equations": []})
    assert grading_consistency(bad, lift_classes(bad)) == MISMATCH


def test_grading_consistency_identity():
    fam = FanoFamily(
        id="#0",
        fano_index=2,
        coordinates=[("a", 1), ("b", 1)],
        cox_variables=["a", "b"],
        grading=[[1, 0], [0, 1]],
    )
    lift = {"a": SectionClass(F(1), F(0)), "b": SectionClass(F(0), F(1))}
    assert grading_consistency(fam, lift) == ((1, 0), (0, 1))


def test_fixpoint_never_below_bound():
    fam = CORPUS["#39961"]
    lift = lift_classes(fam)
    bound = F(fam.weight("y4"), 2 * fam.weight("s")) + F(1, 2)
    nu = F(fam.weight("y4"), 2 * fam.weight("s")) - lift["y4"].k2
    assert nu >= bound >= F(1, 2)


def test_y4_bound_without_equations_is_inexact():
    fam = CORPUS["#39961"]
    bare = FanoFamily(**{**fam.__dict__, "equations": []})
    assert not lift_classes(bare)["y4"].exact


def test_equation_classes_39961():
    classes, three_free = equation_classes(CORPUS["#39961"])
    assert three_free
    pfaffians = [c for c in classes if not c.unprojection_of]
    assert len(pfaffians) == 5 and all(c.e_part < 0 for c in pfaffians)
    free = sorted(c.unprojection_of for c in classes if c.unprojection_of and c.e_part == 0)
    assert free == ["y1", "y2", "y3"]


def test_equation_classes_four_free_flag_false():
    # xi = (2,0) and t = (0,1), so the frame halves the first entry
    names = ["t", "s", "xi", "y1", "y2", "y3", "y4"]
    cols = {"t": (0, 1), "s": (5, 1), "xi": (2, 0), "y1": (3, -1), "y2": (5, -1), "y3": (7, -1), "y4": (1, -1)}
    fam = FanoFamily(
        id="#0",
        fano_index=2,
        coordinates=[(n, 1) for n in names],
        centre=("s", TYPE_I),
        cox_variables=names,
        grading=[[cols[n][0] for n in names], [cols[n][1] for n in names]],
        equations=["s*y1 - xi^4", "s*y2 - xi^5", "s*y3 - xi^6", "s*y4 - xi^3", "y1*y2 - y3*y4"],
    )
    classes, three_free = equation_classes(fam)
    assert sum(1 for c in classes if c.unprojection_of and c.e_part == 0) == 4
    assert not three_free


def test_equation_classes_need_equations():
    with pytest.raises(ValueError):
        equation_classes(CORPUS["#39660"])


def test_ambient_weights_match_stated_ambients():
    assert sorted(ambient_weights_from_grading(CORPUS["#39961"]).values()) == [1, 2, 2, 3, 4, 5, 5, 7]
    assert sorted(ambient_weights_from_grading(CORPUS["#39660"]).values()) == [2, 2, 3, 5, 5, 7, 12, 17]

import pytest

from coxcoh import buildings as B
from coxcoh.complexes import davis_chamber, interval
from coxcoh.corpus import get
from coxcoh.errors import NotRightAngledSpherical, OutOfTrustRadius, ParseError, ResourceLimit, ValidationError


@pytest.fixture(scope="module")
def square():
    return B.spherical_building([2, 2])


@pytest.fixture(scope="module")
def line():
    return B.graph_product_ball(get("Dinf").system(), [2, 2], 4)


def test_rank_one():
    P = B.spherical_building([2])
    assert len(P.chambers) == 3
    assert len(P.residues(P.system.subset("s"))) == 1


def test_square_counts(square):
    W = square.system
    assert len(square.chambers) == 9
    assert len(square.residues(W.subset("s"))) == 3
    assert len(square.residues(W.subset("t"))) == 3


def test_opposite_set(square):
    W = square.system
    top = W.longest_element(W.S)
    pi = square.folding(())
    assert sum(1 for phi in square.chambers if pi(phi) == top) == 4


def test_distance(square):
    x, y = (), ((0, 1),)
    assert square.delta(x, y) == (0,)
    assert square.delta(y, y) == ()


def test_infinite_dihedral_counts():
    Dinf = get("Dinf").system()
    assert len(B.graph_product_ball(Dinf, [2, 2], 2).chambers) == 13
    assert len(B.graph_product_ball(get("Z2").system(), [2], 1).chambers) == 3


def test_g_of_base_is_everything(square):
    assert set(square.g_phi((), ()).values) == set(square.chambers)


def test_g_of_s_neighbour(square):
    g = square.g_phi(((0, 1),), ())
    assert set(g.values) == set(square.residue(((0, 1),), square.system.subset("t")))


def test_f_of_base_is_a_point(line):
    assert line.f_phi((), "least").values == {(): 1}


def test_f_on_s_class(line):
    phi = ((0, 1),)
    f = line.f_phi(phi, "least")
    assert set(f.values) == set(line.residue(phi, line.system.subset("s")))
    assert len(f.values) == 3


@pytest.mark.parametrize("q", [[2, 2], [2, 2, 2], [3, 2]])
def test_spherical_bases(q):
    P = B.spherical_building(q)
    W = P.system
    for T in W.spherical_poset():
        for kind in ("g", "f"):
            rep = B.basis_BT(P, T, kind=kind)
            assert rep.ok and rep.determinant in (1, -1), rep.to_dict(P)


def test_g_basis_unitriangular(square):
    for T in square.system.spherical_poset():
        assert B.basis_BT(square, T, kind="g").unitriangular


@pytest.mark.parametrize("choice", ["least", 0, 5])
def test_line_bases(line, choice):
    W = line.system
    for T in W.spherical_poset():
        rep = B.basis_BT(line, T, choice=choice)
        assert rep.independent and rep.spanning and rep.ok


def test_non_spherical_basis_is_empty(line):
    rep = B.basis_BT(line, line.system.S)
    assert rep.functions == [] and rep.standard_rank == 0


def test_gallery_axiom(square, line):
    assert B.gallery_check(square, samples=100)["ok"]
    assert B.gallery_check(line, samples=100)["ok"]


def test_residue_intersections():
    rep = B.residue_intersection_check(B.spherical_building([2, 2, 2]))
    assert rep["ok"]


def test_realization_of_three_points():
    P = B.spherical_building([2])
    X = interval(P.system.generators, [], ["s"])
    real = B.realize(P, X)
    # three edges glued at the mirrored vertex: a tripod
    assert len(real.cells) == 7 and real.ok


def test_realization_square(square):
    real = B.realize(square, davis_chamber(square.system))
    assert real.ok


@pytest.mark.parametrize("N", [2, 3, 4])
def test_realization_line(N):
    Dinf = get("Dinf").system()
    P = B.graph_product_ball(Dinf, [2, 2], N)
    real = B.realize(P, davis_chamber(Dinf))
    assert real.ok and real.lhs == real.rhs


def test_thickness_validation():
    Dinf = get("Dinf").system()
    with pytest.raises(ValidationError):
        B.graph_product_ball(Dinf, [0, 2], 2)
    with pytest.raises(ParseError):
        B.graph_product_ball(Dinf, "s=a,t=2", 2)
    with pytest.raises(ResourceLimit):
        B.graph_product_ball(Dinf, [9, 9], 2)
    with pytest.raises(NotRightAngledSpherical):
        B.building_for(get("S3").system(), 2)


def test_outside_ball(line):
    with pytest.raises(OutOfTrustRadius):
        line.f_phi(((0, 1), (1, 1), (0, 1), (1, 1), (0, 1)))

import pytest

from coxcoh import equivariant as E
from coxcoh.complexes import davis_chamber, interval, point, simplex_chamber, torsion_chamber
from coxcoh.corpus import corpus, get
from coxcoh.groupring import GroupRing


def finite_entries():
    return [e.name for e in corpus() if e.finite]


def test_basic_construction_for_z2(Z2):
    X = interval(Z2.generators, ["s"], [])
    U = E.build_U(Z2, X, 1)
    # the mirrored vertex is shared, the other vertex and the edge are doubled
    assert (U.cell_count(0), U.cell_count(1)) == (3, 2)
    assert U.homology().betti == (1,)


def test_s3_sigma_is_contractible(S3):
    U = E.build_U(S3, davis_chamber(S3), 3)
    assert U.cell_count(0) == 13 and U.cell_count(2) == 12
    assert U.homology().betti == (1,)


def test_line_for_infinite_dihedral(Dinf):
    K = davis_chamber(Dinf)
    assert E.build_U(Dinf, K, 3).homology().betti == (1,)
    assert E.build_U(Dinf, K, 3, mode="cohomology").cohomology().betti == (0, 1)


def test_coefficient_complex_point(Z2):
    C, _ = E.coefficient_complex(Z2, point(Z2.generators), 1, slice="A")
    assert C.ranks == (2,)


def test_coefficient_complex_tripod_hat(tripod):
    C, _ = E.coefficient_complex(tripod, davis_chamber(tripod), 3, slice="hat", T=())
    assert C.ranks == (1, 3)


def test_coinvariant_slice_vanishes_on_mirrors(tripod):
    K = davis_chamber(tripod)
    s = tripod.subset("s")
    C, bases = E.coefficient_complex(tripod, K, 3, slice="Q", variance="coinvariant", T=s)
    for deg, basis in enumerate(bases):
        for cell, _ in basis:
            assert not (K.S(cell) & s)


@pytest.mark.parametrize("name,N", [("Dinf", 4), ("S3", 3), ("tripod", 3)])
def test_chain_identification(name, N):
    W = get(name).system()
    rep = E.chain_identification_check(W, davis_chamber(W), N)
    assert rep["ok"] and rep["mismatches"] == 0


def test_infinite_dihedral_formula(Dinf):
    rep = E.homology_formula(Dinf, davis_chamber(Dinf), 4, "cohomology")
    assert rep["equal"] and rep["lhs"].betti == (0, 1)
    contributions = {frozenset(t["T"]): t["relative"].betti for t in rep["terms"]}
    assert contributions[frozenset()] == (0, 1)
    assert all(not b for T, b in contributions.items() if T)


def test_tripod_empty_slice(tripod):
    rep = E.homology_formula(tripod, davis_chamber(tripod), 3, "cohomology")
    empty = next(t for t in rep["terms"] if not t["T"])
    assert empty["relative"].betti == (0, 2) and empty["slice_rank"] == 1
    assert rep["equal"]


@pytest.mark.parametrize("entry", finite_entries())
@pytest.mark.parametrize("chamber", [davis_chamber, "simplex", "torsion", "point"])
@pytest.mark.parametrize("variant", ["homology", "cohomology"])
def test_finite_formula(entry, chamber, variant):
    W = get(entry).system()
    X = {
        "simplex": lambda W: simplex_chamber(W.generators),
        "torsion": lambda W: torsion_chamber(W.generators),
        "point": lambda W: point(W.generators),
    }.get(chamber, chamber)(W)
    rep = E.homology_formula(W, X, len(W.longest_element(W.S)), variant)
    assert rep["equal"], (rep["lhs"], rep["rhs"])


def test_torsion_survives(S3):
    rep = E.homology_formula(S3, torsion_chamber(S3.generators), 3, "homology")
    assert rep["lhs"][1][1] and rep["lhs"] == rep["rhs"]


def test_graded_p_beyond_rank(S3):
    rep = E.graded_term(S3, davis_chamber(S3), 3, 3)
    assert not any(rep.lhs) and not any(rep.rhs)


def test_graded_s3_chamber(S3):
    K = davis_chamber(S3)
    total = [E.graded_term(S3, K, 3, p) for p in range(3)]
    assert all(r.ranks_equal for r in total)
    # H^0(S3; Z S3) = Z, carried by the top slice
    assert [r.lhs[0] if r.lhs else 0 for r in total] == [0, 0, 1]


def test_graded_z2_total(Z2):
    ranks = [E.group_cohomology_graded(Z2, p, 1) for p in range(2)]
    assert sum(r.lhs[0] if r.lhs else 0 for r in ranks) == 1


def test_graded_infinite_dihedral(Dinf):
    K = davis_chamber(Dinf)
    p0 = E.graded_term(Dinf, K, 4, 0)
    p1 = E.graded_term(Dinf, K, 4, 1)
    assert p0.lhs[1] == 1 and p0.ok
    assert not any(p1.lhs) and p1.ok


def test_tripod_graded(tripod):
    K = davis_chamber(tripod)
    p0 = E.graded_term(tripod, K, 3, 0)
    p1 = E.graded_term(tripod, K, 3, 1)
    assert p0.lhs[1] == p0.rhs[1] == 2
    assert [piece["slice_rank"] for piece in p1.pieces] == [7, 7, 7]
    assert p1.ok


@pytest.mark.parametrize("variant", ["cohomology", "homology"])
def test_traces_on_point(S3, variant):
    X = point(S3.generators)
    for p in range(3):
        rep = E.graded_term(S3, X, 3, p, variant, traces=True)
        assert rep.ok, rep.to_dict()


def test_nontrivial_trace(S3):
    rep = E.graded_term(S3, point(S3.generators), 3, 1, traces=True)
    assert rep.traces["st"] == [(-2, -2)]
    assert rep.traces["s"] == [(0, 0)]


@pytest.mark.parametrize("p,q", [(0, 0), (0, 1), (1, 0), (1, 1), (2, 0)])
def test_degeneration_infinite_dihedral(Dinf, p, q):
    assert E.spectral_degeneration_check(Dinf, davis_chamber(Dinf), 4, p, q)["equal"]


def test_degeneration_a3_point(A3):
    X = point(A3.generators)
    F = E.FilteredComplex(GroupRing(A3), X, 6, "cohomology")
    for p in range(4):
        assert E.spectral_degeneration_check(A3, X, 6, p, -p, complex_=F)["equal"]


def test_empty_slice_acts_by_minus_one(tripod):
    A = GroupRing(tripod)
    for s in range(3):
        assert A.quotient_action((), s, "left", 2).matrix == ((-1,),)


@pytest.mark.parametrize("N", [4, 5])
def test_tripod_demo(N):
    rep = E.tripod_cocycle_demo(N)
    assert rep["pair_x_line"] == 1 and rep["pair_xs_line"] == 0
    assert rep["sum_in_F1"] and not rep["sum_is_coboundary_rel_ends"]

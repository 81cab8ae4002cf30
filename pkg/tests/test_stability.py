"""Conjugacy construction, perturbation families, isometry search, GH bounds."""

from fractions import Fraction as F

import pytest

from pointdyn.metric import FiniteMetricSpace, discrete_space, is_delta_isometry
from pointdyn.systems import (ExplicitSystem, build_lattice, conjugate_system,
                              is_self_isometry, materialize)
from pointdyn.stability import (build_conjugacy, enumerate_perturbations,
                                find_exact_isomorphism,
                                first_delta_isometry_pair, gh_distance_bounds,
                                gh_stable_point_check, search_delta_isometries,
                                transport_under_conjugacy, transported_constant,
                                verify_topologically_stable_point)
from pointdyn.errors import PreconditionError, ResourceBudgetError

ID3 = ExplicitSystem(discrete_space(3), (0, 1, 2), name="id3")
R12K3 = build_lattice(12, step=3, name="r12k3")
R12K1 = build_lattice(12, step=1, name="r12k1")
R12K5 = build_lattice(12, step=5, name="r12k5")
D2 = ExplicitSystem(discrete_space(2), (0, 1), name="d2")

NEAR3 = ExplicitSystem(
    FiniteMetricSpace([[F(0), F(1, 100), F(1)],
                       [F(1, 100), F(0), F(1)],
                       [F(1), F(1), F(0)]]),
    (0, 1, 2), name="near3")


def test_conjugacy_with_itself_is_identity_on_orbit():
    res = build_conjugacy(ID3, ID3, 0, F(1, 2), F(1, 2))
    assert res.success and bool(res)
    assert res.residual == 0 and res.mapping == {0: 0}
    assert res.domain == (0,) and res.commutation_ok is True

    res = build_conjugacy(R12K3, R12K3, 0, F(1, 4), F(1, 6), expansivity_c=F(1, 6))
    assert res.success and res.residual == 0
    assert res.mapping == {0: 0, 3: 3, 6: 6, 9: 9}
    assert res.eta == F(1, 6) / 16


def test_conjugacy_enforces_c0_gap():
    # rot1 vs rot3 differ by 2/12 = 1/6 > 1/12
    with pytest.raises(PreconditionError):
        build_conjugacy(R12K1, R12K3, 0, F(1, 4), F(1, 12))
    # at delta = 1/6 the gap is admissible (non-strict) but tracing fails
    res = build_conjugacy(R12K1, R12K3, 0, F(1, 4), F(1, 6))
    assert not res.success and res.failed_step == "shadowing"


def test_enumerate_perturbations_counts():
    fam = enumerate_perturbations(ID3, F(1, 2))
    assert len(fam) == 1 and fam.systems[0].perm == (0, 1, 2)
    assert len(enumerate_perturbations(ID3, 2)) == 6
    with pytest.raises(ResourceBudgetError) as err:
        enumerate_perturbations(ID3, 2, budget=3)
    assert err.value.budget == 3


def test_rotation_perturbation_count_is_lucas_plus_rotations():
    # images u -> 3u + e with |e| <= 1 step, injective mod 12; substituting
    # v = 3u these are permutations of Z_12 moving every point at most one
    # step: matchings of the 12-cycle (Lucas number 322) plus 2 rotations.
    fam = enumerate_perturbations(R12K3, F(1, 12))
    assert len(fam) == 324


def test_stable_point_identity_only():
    fam = enumerate_perturbations(ID3, F(1, 2))
    for x in (0, 1, 2):
        rep = verify_topologically_stable_point(ID3, x, F(1, 2), F(1, 2), fam)
        assert rep.result
        assert len(rep.entries) == 1 and rep.entries[0].status == "ok"


def test_stable_point_skips_far_perturbations():
    fam = enumerate_perturbations(ID3, 2)
    rep = verify_topologically_stable_point(ID3, 0, F(1, 2), F(1, 2), fam)
    assert rep.result
    skipped = [e for e in rep.entries if e.status == "skipped"]
    assert len(skipped) == 5          # non-identity permutations have c0 = 1


def test_search_delta_isometries():
    s3 = ExplicitSystem(discrete_space(3), (0, 1, 2), name="d3")
    found = search_delta_isometries(s3, D2, F(1, 2))
    assert found.complete and len(found.pairs) == 0

    same = search_delta_isometries(ID3, ID3, F(1, 2))
    assert same.complete and len(same.pairs) == 36
    idpair = [p for p in same.pairs
              if p.i_map == (0, 1, 2) and p.j_map == (0, 1, 2)]
    assert len(idpair) == 1 and idpair[0].score == 0


def test_identity_pair_for_close_rotations():
    pair, settled = first_delta_isometry_pair(R12K1, R12K5, F(1, 2))
    assert settled and pair is not None
    assert pair.i_map == tuple(range(12))
    assert pair.score == F(1, 3)
    assert pair.i_distortion == 0 and pair.i_density == 0
    assert pair.i_commutation == F(1, 3) and pair.j_commutation == F(1, 3)
    # clause values agree with the metric-module checker
    Xs, _ = materialize(R12K1)
    Ys, _ = materialize(R12K5)
    ok, _ = is_delta_isometry(tuple(range(12)), Xs.space, Ys.space, F(1, 2))
    assert ok


def test_find_exact_isomorphism():
    assert find_exact_isomorphism(ID3, ID3) == {0: 0, 1: 1, 2: 2}
    s3 = ExplicitSystem(discrete_space(3), (0, 1, 2), name="d3")
    assert find_exact_isomorphism(s3, D2) is None


def test_gh_bounds_self_distance_zero():
    b = gh_distance_bounds(ID3, ID3)
    assert b == (0, 0) and b.complete
    lo, up = b
    assert (lo, up) == (0, 0)


def test_gh_bounds_zero_for_isometric_conjugate():
    relabel = {i: (12 - i) % 12 for i in range(12)}
    assert is_self_isometry(R12K3, relabel)
    twin = conjugate_system(R12K3, relabel, name="r12k3-refl")
    assert find_exact_isomorphism(R12K3, twin) is not None
    assert gh_distance_bounds(R12K3, twin) == (0, 0)


def test_gh_bounds_close_rotations():
    b = gh_distance_bounds(R12K1, R12K5, budget=40000)
    assert b.lower <= b.upper
    assert b.upper <= F(1, 3) + F(1, 128)


def test_gh_bounds_bracket_size_mismatch():
    # 3 points vs 2 points, gap 1 each: any delta <= 1 forces an injective
    # 3->2 map (impossible); delta > 1 admits everything, so d = 1 exactly
    s3 = ExplicitSystem(discrete_space(3), (0, 1, 2), name="d3")
    b = gh_distance_bounds(s3, D2, budget=40000)
    assert b.lower <= 1 <= b.upper


def test_gh_stable_point_basic():
    rep = gh_stable_point_check(ID3, 0, F(1, 2), F(1, 2), [ID3])
    assert rep.result and rep.entries[0].status == "pass"
    assert rep.entries[0].preimages == (0,)


def test_gh_stable_point_skips_uncertified():
    rep = gh_stable_point_check(ID3, 0, F(1, 2), F(1, 2), [D2])
    assert rep.result and rep.entries[0].status == "skipped"
    one = ExplicitSystem(discrete_space(1), (0,), name="one")
    rep2 = gh_stable_point_check(NEAR3, 2, F(1, 2), F(1, 2), [one])
    assert rep2.entries[0].status == "skipped"


def test_gh_stable_point_vacuous_when_j_misses():
    gap23 = discrete_space(3, gap=F(2, 3))
    X23 = ExplicitSystem(gap23, (0, 1, 2), name="x23")
    Y2 = ExplicitSystem(discrete_space(2, gap=F(2, 3)), (0, 1), name="y2")
    pair, _ = first_delta_isometry_pair(X23, Y2, F(3, 4))
    assert pair is not None
    missed = [x for x in range(3) if x not in pair.j_map]
    assert missed
    rep = gh_stable_point_check(X23, missed[0], F(1, 2), F(3, 4), [Y2])
    assert rep.result and rep.entries[0].status == "vacuous"


def test_transport_helpers():
    h = {0: 1, 1: 2, 2: 0}
    assert transport_under_conjugacy(h, {0, 1}) == frozenset({1, 2})
    assert transport_under_conjugacy(lambda p: (p + 1) % 3, {0, 1}) == frozenset({1, 2})


def test_transported_constant():
    assert transported_constant(ID3, {0: 0, 1: 1, 2: 2}, F(1, 2)) == F(1, 2)
    # non-isometric relabel shrinks the constant to below the worst image gap
    assert transported_constant(NEAR3, {0: 0, 1: 2, 2: 1}, F(1, 2)) == F(1, 128)
    with pytest.raises(PreconditionError):
        transported_constant(ID3, {0: 1, 1: 2, 2: 0}, 2)

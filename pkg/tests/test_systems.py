"""System backends: lattices, shifts, satellites, orbits, C0 distance."""

from fractions import Fraction as F

import pytest

from pointdyn.metric import discrete_space
from pointdyn.systems import (build_explicit, build_lattice, build_shift,
                              build_satellite, Satellite, orbit, orbit_closure,
                              iterate, pair_sup_separation, c0_distance,
                              system_ball, materialize, conjugate_system,
                              is_self_isometry, point_label, system_order)
from pointdyn.shiftspace import pure, parse_ep
from pointdyn.errors import (MalformedInputError, CarrierMismatchError,
                             PreconditionError)

P01 = pure((0, 1))


def test_explicit_system_validates_permutation():
    sp = discrete_space(3)
    sys0 = build_explicit(sp, (1, 2, 0))
    assert sys0.image(0) == 1 and sys0.preimage(0) == 2
    with pytest.raises(MalformedInputError):
        build_explicit(sp, (0, 0, 1))
    with pytest.raises(MalformedInputError):
        build_explicit(sp, (0, 1))


def test_circle_lattice_metric_and_map():
    r12 = build_lattice(12, step=3)
    assert r12.dist(0, 1) == F(1, 12)
    assert r12.dist(0, 6) == F(1, 2)
    assert r12.dist(0, 11) == F(1, 12)   # arc metric wraps
    assert r12.image(10) == 1 and r12.preimage(1) == 10
    assert orbit(r12, 0).points == (0, 3, 6, 9)
    assert orbit(r12, 0).period == 4
    assert system_order(r12) == 4


def test_torus_lattice_cat_map():
    cat5 = build_lattice(5, kind="torus", matrix=(2, 1, 1, 1))
    assert cat5.image((1, 0)) == (2, 1)
    assert cat5.preimage((2, 1)) == (1, 0)
    assert orbit(cat5, (1, 0)).period == 10
    assert cat5.dist((0, 0), (1, 0)) == F(1, 5)
    assert cat5.dist((0, 0), (2, 3)) == F(2, 5)  # max of the two arcs
    with pytest.raises(MalformedInputError):
        build_lattice(4, kind="torus", matrix=(2, 0, 0, 1))  # det 2 not invertible mod 4
    assert pair_sup_separation(cat5, (0, 0), (1, 0)) == F(2, 5)


def test_shift_orbits_and_closure():
    sh = build_shift(2)
    assert orbit(sh, P01).period == 2
    t = parse_ep("0~1~0@0")
    ob = orbit(sh, t)
    assert not ob.finite
    assert ob.left_cycle == (pure((0,)),) and ob.right_cycle == (pure((0,)),)
    clo = orbit_closure(sh, t)
    assert clo.contains(t.shift_by(5))
    assert clo.contains(pure((0,)))
    assert not clo.contains(pure((1,)))


def test_iterate_both_directions():
    r12 = build_lattice(12, step=3)
    assert iterate(r12, 0, 3) == 9
    assert iterate(r12, 0, -1) == 9
    sh = build_shift(2)
    assert iterate(sh, P01, 5) == P01.shift_by(5)


def test_satellite_metric_cases():
    sat = build_satellite(3, 2, P01)
    q = Satellite(1, 2, 0)
    # same (k, j), different copy
    assert sat.dist(q, Satellite(3, 2, 0)) == F(1, 2)
    # same copy and phase, different level: 1/2 + 1/3 (anchors coincide)
    assert sat.dist(q, Satellite(1, 3, 0)) == F(5, 6)
    # satellite to its own anchor and to the other marked point
    assert sat.dist(q, P01) == F(1, 2)
    assert sat.dist(q, P01.shift_by(1)) == F(3, 2)
    # map: cyclic phase countdown
    assert sat.image(Satellite(2, 3, 1)) == Satellite(2, 3, 0)
    assert sat.image(Satellite(2, 3, 0)) == Satellite(2, 3, 1)
    # Y-points follow the shift
    assert sat.image(P01) == P01.shift_by(1)


def test_satellite_sup_separation():
    sat = build_satellite(3, 2, P01)
    q = Satellite(1, 2, 0)
    assert pair_sup_separation(sat, q, P01) == F(1, 2)
    assert pair_sup_separation(sat, q, Satellite(2, 2, 1)) == 2
    assert pair_sup_separation(sat, q, Satellite(1, 3, 0)) == F(5, 6)
    assert pair_sup_separation(sat, q, Satellite(2, 2, 0)) == F(1, 2)


def test_satellite_balls():
    sat = build_satellite(3, 2, P01)
    q = Satellite(1, 2, 0)
    b = system_ball(sat, q, 1, closed=True)
    assert set(b.satellites) == {Satellite(i, k, 0) for i in (1, 2, 3) for k in (2, 3)}
    assert b.y_ball is not None and b.y_ball.center == P01 and b.y_ball.halfwidth == 1
    bo = system_ball(sat, q, F(1, 2))
    assert set(bo.satellites) == {q} and bo.y_ball is None and bo.y_extra == ()
    bc = system_ball(sat, q, F(1, 2), closed=True)
    assert bc.y_extra == (P01,)
    assert set(bc.satellites) == {Satellite(i, 2, 0) for i in (1, 2, 3)}


def test_c0_distance_values():
    r1 = build_lattice(12, step=1)
    r5 = build_lattice(12, step=5)
    assert c0_distance(r1, r5) == F(1, 3)
    assert c0_distance(r1, r1) == 0
    id3 = build_explicit(discrete_space(3), (0, 1, 2))
    with pytest.raises(CarrierMismatchError):
        c0_distance(r1, id3)


def test_materialize_round_trip():
    r12 = build_lattice(12, step=3)
    m, pts = materialize(r12)
    assert m.perm[0] == 3 and pts[3] == 3
    assert m.space.dist(0, 1) == r12.dist(pts[0], pts[1])
    swap = build_explicit(discrete_space(3), (1, 0, 2))
    m2, pts2 = materialize(swap)
    assert m2.perm == (1, 0, 2) and tuple(pts2) == (0, 1, 2)
    assert m2.space == swap.space


def test_conjugation_and_self_isometry():
    r12 = build_lattice(12, step=3)
    rot = {i: (i + 1) % 12 for i in range(12)}
    assert is_self_isometry(r12, rot)
    g = conjugate_system(r12, rot)
    assert g.image(1) == 4             # rot o f o rot^-1
    refl = {i: (12 - i) % 12 for i in range(12)}
    assert is_self_isometry(r12, refl)
    h = conjugate_system(r12, refl)
    assert h.image(0) == 9             # reflection turns step 3 into step 9
    not_iso = {i: 0 for i in range(12)}
    assert not is_self_isometry(r12, not_iso)


def test_point_labels():
    assert point_label(7) == "7"
    assert point_label((2, 3)) == "(2,3)"
    assert point_label(Satellite(1, 2, 0)) == "q(1,2,0)"
    assert point_label(P01) == "01~~01@0"

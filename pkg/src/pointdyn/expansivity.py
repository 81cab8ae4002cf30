"""Expansivity classifiers at a point.

All variants quantify the same primitive: the supremum of d(f^n y, f^n z)
over all integer times, computed exactly by pair_sup_separation. A point
is expansive when every other point separates beyond the constant at
some time; uniformly expansive when the map is expansive on the open
ball around it; minimally expansive when the map is expansive on the
orbit closure of every ball point. Each verdict carries either a
per-pair certificate or a concrete counterexample pair.
"""

from dataclasses import dataclass
from fractions import Fraction
from math import lcm

from .errors import (PreconditionError, UnsupportedBackendError,
                     UnsupportedSequenceError)
from .rationals import ONE, as_rational
from .shiftspace import ShiftBall, pure, with_symbol
from .systems import (Satellite, SatelliteBall, ShiftOrbitClosure, c0_distance,
                      iterate, orbit, orbit_closure, pair_sup_separation,
                      point_label, sorted_points, system_ball)


@dataclass(frozen=True)
class SeparationCertificate:
    n: int
    achieved: Fraction


@dataclass(frozen=True)
class ExpansivityVerdict:
    point: object
    constant: Fraction
    variant: str
    result: bool
    counterexample: tuple = None     # (y, z) with sup separation <= constant
    detail: str = ""

    def __bool__(self):
        return self.result


@dataclass(frozen=True)
class SeparationWindow:
    times: frozenset            # {n in [-N, N] : d(f^n x, f^n y) > eps}
    window: int
    full_period: bool           # window covers a joint pair period
    period: int = None


def separation_set(system, x, y, eps, window: int) -> SeparationWindow:
    """Times |n| <= window at which the pair separates beyond eps (strict).

    When the window covers a full joint period of the pair orbit the
    flag is set: membership for every integer n then follows by
    periodic extension.
    """
    eps = as_rational(eps)
    if window < 0:
        raise PreconditionError("window must be nonnegative")
    times = frozenset(n for n in range(-window, window + 1)
                      if system.dist(iterate(system, x, n), iterate(system, y, n)) > eps)
    period = _joint_period_or_none(system, x, y)
    full = period is not None and 2 * window + 1 >= period
    return SeparationWindow(times, window, full, period)


def _joint_period_or_none(system, x, y):
    obx, oby = orbit(system, x), orbit(system, y)
    if obx.finite and oby.finite:
        return lcm(obx.period, oby.period)
    return None


def is_expansive_on(system, domain, c) -> ExpansivityVerdict:
    """Is every distinct pair of `domain` separated beyond c at some time?

    `domain` is a finite point collection or a symbolic region
    (ShiftOrbitClosure, ShiftBall, SatelliteBall). Strict inequality:
    pair_sup_separation must exceed c.
    """
    c = as_rational(c)
    if isinstance(domain, ShiftOrbitClosure):
        return _expansive_on_shift_closure(system, domain, c)
    if isinstance(domain, ShiftBall):
        return _expansive_on_shift_ball(system, domain, c)
    if isinstance(domain, SatelliteBall):
        return _expansive_on_satellite_ball(system, domain, c)
    pts = sorted_points(domain)
    for i, y in enumerate(pts):
        for z in pts[i + 1:]:
            if pair_sup_separation(system, y, z) <= c:
                return ExpansivityVerdict(None, c, "expansive_on", False, (y, z))
    return ExpansivityVerdict(None, c, "expansive_on", True,
                              detail=f"{len(pts)} points, all pairs separate")


def _expansive_on_shift_closure(system, closure, c):
    # every distinct pair in a shift orbit closure attains separation 1
    if c < ONE:
        return ExpansivityVerdict(None, c, "expansive_on", True,
                                  detail="distinct sequences reach separation 1")
    y = closure.base
    return ExpansivityVerdict(None, c, "expansive_on", False, (y, y.shift_by(1)))


def _expansive_on_shift_ball(system, region, c):
    if c < ONE:
        return ExpansivityVerdict(None, c, "expansive_on", True,
                                  detail="distinct sequences reach separation 1")
    x = region.center
    alphabet = getattr(system, "alphabet", 2)
    other = with_symbol(x, region.halfwidth,
                          (x.value(region.halfwidth) + 1) % alphabet)
    return ExpansivityVerdict(None, c, "expansive_on", False, (x, other))


def _satellite_y_region_points(region):
    """At least two Y-points of the region, as concrete witnesses."""
    pts = list(region.y_extra)
    if region.y_ball is not None:
        x = region.y_ball.center
        pts.append(x)
        pts.append(with_symbol(x, region.y_ball.halfwidth,
                                 (x.value(region.y_ball.halfwidth) + 1) % 2))
    return pts


def _expansive_on_satellite_ball(system, region, c):
    y_points = _satellite_y_region_points(region)
    if len(y_points) >= 2 and c >= ONE:
        return ExpansivityVerdict(None, c, "expansive_on", False,
                                  (y_points[0], y_points[1]))
    for idx, q in enumerate(region.satellites):
        # nearest ball partner of a satellite inside Y is the marked point
        base = system.marked(q.j)
        if region.contains(base):
            if Fraction(1, q.k) <= c:
                return ExpansivityVerdict(None, c, "expansive_on", False, (q, base))
        elif region.y_ball is not None or region.y_extra:
            if Fraction(1, q.k) + ONE <= c:
                z = next(p for p in y_points)
                return ExpansivityVerdict(None, c, "expansive_on", False, (q, z))
        for q2 in region.satellites[idx + 1:]:
            if pair_sup_separation(system, q, q2) <= c:
                return ExpansivityVerdict(None, c, "expansive_on", False, (q, q2))
    return ExpansivityVerdict(None, c, "expansive_on", True,
                              detail="all region pairs separate")


def expansive_point_at(system, x, c) -> ExpansivityVerdict:
    """True iff every y != x satisfies pair_sup_separation(x, y) > c."""
    c = as_rational(c)
    if system.finite:
        for y in system.points():
            if y != x and pair_sup_separation(system, x, y) <= c:
                return ExpansivityVerdict(x, c, "expansive", False, (x, y))
        return ExpansivityVerdict(x, c, "expansive", True)
    if system.backend == "shift":
        if c < ONE:
            return ExpansivityVerdict(x, c, "expansive", True,
                                      detail="distinct sequences reach separation 1")
        other = with_symbol(x, 0, (x.value(0) + 1) % system.alphabet)
        return ExpansivityVerdict(x, c, "expansive", False, (x, other))
    if system.backend == "satellite":
        return _satellite_expansive_point(system, x, c)
    raise UnsupportedBackendError(system.backend)


def _satellite_expansive_point(system, x, c):
    variant = "expansive"
    if isinstance(x, Satellite):
        # weakest partner: another copy over the same marked point, sup 1/k
        if Fraction(1, x.k) <= c:
            other = Satellite(x.i % system.COPIES + 1, x.k, x.j)
            return ExpansivityVerdict(x, c, variant, False, (x, other))
        return ExpansivityVerdict(x, c, variant, True,
                                  detail=f"nearest orbit pattern separates at 1/{x.k}")
    if c >= ONE:
        other = with_symbol(x, 0, (x.value(0) + 1) % system.alphabet)
        return ExpansivityVerdict(x, c, variant, False, (x, other))
    for q in system.satellite_points():
        if pair_sup_separation(system, x, q) <= c:
            return ExpansivityVerdict(x, c, variant, False, (x, q))
    return ExpansivityVerdict(x, c, variant, True)


def uniformly_expansive_at(system, x, c) -> ExpansivityVerdict:
    """Expansive with constant c on the open ball B(x, c)."""
    c = as_rational(c)
    inner = is_expansive_on(system, system_ball(system, x, c), c)
    return ExpansivityVerdict(x, c, "uniform", inner.result,
                              inner.counterexample, inner.detail)


def minimally_expansive_at(system, x, c) -> ExpansivityVerdict:
    """Expansive with constant c on the orbit closure of every ball point."""
    c = as_rational(c)
    region = system_ball(system, x, c)
    if system.finite:
        for y in sorted_points(region):
            inner = is_expansive_on(system, orbit_closure(system, y), c)
            if not inner.result:
                return ExpansivityVerdict(
                    x, c, "minimal", False, inner.counterexample,
                    detail=f"orbit closure of {point_label(y)} fails")
        return ExpansivityVerdict(x, c, "minimal", True)
    if system.backend == "shift":
        return _shift_minimal(system, x, c, region)
    if system.backend == "satellite":
        return _satellite_minimal(system, x, c, region)
    raise UnsupportedBackendError(system.backend)


def _shift_minimal(system, x, c, region):
    # closures of cylinder points are sets of sequences: pairs separate to 1
    if c < ONE:
        return ExpansivityVerdict(x, c, "minimal", True,
                                  detail="closure pairs reach separation 1")
    y = _non_fixed_cylinder_point(system, region)
    return ExpansivityVerdict(x, c, "minimal", False, (y, y.shift_by(1)),
                              detail=f"orbit closure of {point_label(y)} fails")


def _non_fixed_cylinder_point(system, region):
    """A point of the cylinder whose orbit has at least two elements."""
    x = region.center
    h = region.halfwidth
    if h == 0:
        return pure([0, 1])
    # position h is free; making it differ from position h-1 rules out
    # constant sequences, the only shift-fixed points
    y = with_symbol(x, h, (x.value(h - 1) + 1) % system.alphabet)
    assert y.shift_by(1) != y and region.contains(y)
    return y


def _satellite_minimal(system, x, c, region):
    has_y = region.y_ball is not None or region.y_extra
    if has_y and c >= ONE:
        if region.y_ball is not None:
            y = _non_fixed_cylinder_point(system, region.y_ball)
        else:
            y = region.y_extra[0]  # marked point: periodic with period t >= 2
        return ExpansivityVerdict(x, c, "minimal", False, (y, y.shift_by(1)),
                                  detail=f"orbit closure of {point_label(y)} fails")
    for q in region.satellites:
        # distinct points of a satellite orbit separate to exactly 1 + 2/k
        if ONE + Fraction(2, q.k) <= c:
            q2 = system.image(q)
            return ExpansivityVerdict(x, c, "minimal", False, (q, q2),
                                      detail=f"orbit of {point_label(q)} fails")
    return ExpansivityVerdict(x, c, "minimal", True)


_VARIANTS = {
    "expansive": expansive_point_at,
    "uniform": uniformly_expansive_at,
    "minimal": minimally_expansive_at,
}


def classify_points(system, variant: str, c, probe=None):
    """Points of the carrier (or probe set) whose verdict is true at c."""
    if variant not in _VARIANTS:
        raise PreconditionError(f"unknown variant {variant!r}")
    check = _VARIANTS[variant]
    if system.finite:
        pts = system.points()
    else:
        pts = list(probe) if probe else []
        if system.backend == "satellite":
            pts.extend(system.satellite_points())
        if not pts:
            raise PreconditionError(
                "classification on an infinite carrier needs a probe set")
    return sorted_points([p for p in pts if check(system, p, c).result])


def separation_horizon(system, x, c, y, eps) -> int:
    """Smallest N with: any orbit(y) pair staying within c for |n| <= N
    must already be eps-close at time 0.

    The premise is the minimal-expansivity hypothesis at (x, c); the
    scan is exact over the finite orbit of y.
    """
    c, eps = as_rational(c), as_rational(eps)
    if not (0 < eps < c):
        raise PreconditionError("need 0 < eps < c")
    if not minimally_expansive_at(system, x, c).result:
        raise PreconditionError("map is not minimally expansive at (x, c)")
    ball = system_ball(system, x, c)
    if not _region_contains(ball, y):
        raise PreconditionError("y must lie in the open c-ball around x")
    ob = orbit(system, y)
    if not ob.finite:
        raise PreconditionError(f"orbit of {point_label(y)} is infinite")
    pts = ob.points
    horizon = 0
    for i, u in enumerate(pts):
        for v in pts[i + 1:]:
            if system.dist(u, v) < eps:
                continue
            horizon = max(horizon, _first_separation_time(system, u, v, c))
    return horizon


def _first_separation_time(system, u, v, c) -> int:
    """min{|n| : d(f^n u, f^n v) >= c}; exists under minimal expansivity."""
    period = _joint_period_or_none(system, u, v)
    for n in range(period + 1):
        for s in ((n, -n) if n else (0,)):
            if system.dist(iterate(system, u, s), iterate(system, v, s)) >= c:
                return abs(s)
    raise PreconditionError(
        f"pair ({point_label(u)}, {point_label(v)}) never separates to {c}")


def _region_contains(region, y) -> bool:
    if isinstance(region, (frozenset, set, tuple, list)):
        return y in region
    return region.contains(y)


def sequence_expansivity_criterion(system, approximants, x, delta,
                                   variant: str) -> ExpansivityVerdict:
    """Separation-set criterion for uniform/minimal expansivity under a
    convergent sequence of maps.

    The approximants must be eventually equal to the limit map (exact
    carriers make uniform convergence below the minimum spacing an
    equality), so the eventual separation sets reduce to those of the
    limit map, and the criterion at scale delta coincides with the
    direct classifier at constant delta. The verdict surfaces the
    scaled constant delta/3 that the converse direction transports.
    """
    delta = as_rational(delta)
    if variant not in ("uniform", "minimal"):
        raise PreconditionError(f"unsupported variant {variant!r}")
    tail_start = _eventual_agreement_index(system, approximants)
    check = _VARIANTS[variant]
    inner = check(system, x, delta)
    detail = (f"tail agrees with limit map from index {tail_start}; "
              f"converse direction transports constant {delta / 3}")
    return ExpansivityVerdict(x, delta, f"sequence_{variant}", inner.result,
                              inner.counterexample, detail)


def _eventual_agreement_index(system, approximants):
    """First index from which every approximant equals the limit map."""
    approximants = list(approximants)
    if not approximants:
        raise UnsupportedSequenceError("empty approximant sequence")
    try:
        agree = [c0_distance(system, g) == 0 for g in approximants]
    except PreconditionError as exc:
        raise UnsupportedSequenceError(
            f"cannot compare approximants to the limit map: {exc}") from exc
    if not agree[-1]:
        raise UnsupportedSequenceError(
            "approximants must eventually equal the limit map")
    idx = len(agree)
    while idx > 0 and agree[idx - 1]:
        idx -= 1
    return idx

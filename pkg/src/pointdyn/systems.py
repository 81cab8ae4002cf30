"""Dynamical systems: a metric carrier plus an invertible map.

Four backends share one API. Explicit (finite table + permutation) and
lattice (circle Z_n, torus Z_n x Z_n with an invertible integer
matrix) carriers are finite and enumerable. The shift backend carries
eventually periodic bi-infinite sequences; the satellite backend glues
finitely many isolated periodic "satellite" copies onto a marked
periodic orbit of the shift. Infinite carriers answer set-level
questions through symbolic objects (ShiftBall, ShiftOrbitClosure,
SatelliteBall) instead of enumeration; every answer stays exact.
"""

import hashlib
from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm

from .errors import (CarrierMismatchError, MalformedInputError,
                     PreconditionError, UnsupportedBackendError)
from .metric import FiniteMetricSpace
from .rationals import ZERO, as_rational, format_rational
from .shiftspace import (EPPoint, ShiftBall, ball_halfwidth, format_ep,
                         left_limit_cycle, right_limit_cycle, shift_metric)

ONE = Fraction(1)


# -- point helpers -------------------------------------------------------


@dataclass(frozen=True)
class Satellite:
    """An isolated copy index (i, k, j): the i-th copy at depth k over g^j(p)."""
    i: int
    k: int
    j: int


def point_label(p) -> str:
    if isinstance(p, EPPoint):
        return format_ep(p)
    if isinstance(p, Satellite):
        return f"q({p.i},{p.k},{p.j})"
    if isinstance(p, tuple):
        return "(" + ",".join(str(v) for v in p) + ")"
    return str(p)


def point_key(p):
    """Deterministic cross-type sort key for report ordering."""
    if isinstance(p, int):
        return (0, (p,), "")
    if isinstance(p, tuple):
        return (0, p, "")
    if isinstance(p, EPPoint):
        return (1, (len(p.center),), format_ep(p))
    if isinstance(p, Satellite):
        return (2, (p.k, p.j, p.i), "")
    raise MalformedInputError(f"not a carrier point: {p!r}")


def sorted_points(points):
    return sorted(points, key=point_key)


# -- system classes ------------------------------------------------------


class MetricSystem:
    backend = "abstract"
    name = "?"

    @property
    def finite(self) -> bool:
        raise NotImplementedError

    def points(self):
        raise UnsupportedBackendError(f"{self.backend} carrier is not enumerable")

    def dist(self, x, y) -> Fraction:
        raise NotImplementedError

    def image(self, x):
        raise NotImplementedError

    def preimage(self, x):
        raise NotImplementedError

    def carrier_token(self):
        raise NotImplementedError

    def describe(self) -> str:
        raise NotImplementedError

    def digest(self) -> str:
        return hashlib.sha256(self.describe().encode()).hexdigest()[:12]

    def __repr__(self):
        return f"<{type(self).__name__} {self.name}>"


class ExplicitSystem(MetricSystem):
    backend = "explicit"

    def __init__(self, space: FiniteMetricSpace, perm, name="explicit"):
        perm = tuple(perm)
        if sorted(perm) != list(range(space.n)):
            raise MalformedInputError("map table is not a permutation of the carrier")
        self.space = space
        self.perm = perm
        self.inv = tuple(perm.index(i) for i in range(space.n))
        self.name = name

    @property
    def finite(self):
        return True

    def points(self):
        return list(range(self.space.n))

    def dist(self, x, y):
        return self.space.table[x][y]

    def image(self, x):
        return self.perm[x]

    def preimage(self, x):
        return self.inv[x]

    def carrier_token(self):
        return ("explicit", self.space.table)

    def describe(self):
        rows = [f"explicit n={self.space.n}"]
        for i in range(self.space.n):
            for j in range(i + 1, self.space.n):
                rows.append(f"d {i} {j} {format_rational(self.space.table[i][j])}")
        rows.append("map " + " ".join(str(v) for v in self.perm))
        return "\n".join(rows)


class CircleSystem(MetricSystem):
    """Z_n with arc metric min(|i-j|, n-|i-j|)/n and rotation by `step`."""

    backend = "lattice"

    def __init__(self, n: int, step: int, name=None):
        if n < 2:
            raise MalformedInputError("circle lattice needs n >= 2")
        self.n = n
        self.step = step % n
        self.name = name or f"circle{n}_rot{self.step}"

    @property
    def finite(self):
        return True

    def points(self):
        return list(range(self.n))

    def dist(self, x, y):
        a = abs(x - y) % self.n
        return Fraction(min(a, self.n - a), self.n)

    def image(self, x):
        return (x + self.step) % self.n

    def preimage(self, x):
        return (x - self.step) % self.n

    def carrier_token(self):
        return ("circle", self.n)

    def describe(self):
        return f"lattice n={self.n} map=rot {self.step}"


class TorusSystem(MetricSystem):
    """Z_n x Z_n with the max of arc metrics; map = integer matrix mod n."""

    backend = "lattice"

    def __init__(self, n: int, matrix, name=None):
        a, b, c, d = (int(v) for v in matrix)
        det = (a * d - b * c) % n
        if gcd(det, n) != 1:
            raise MalformedInputError("torus matrix determinant must be invertible mod n")
        self.n = n
        self.matrix = (a, b, c, d)
        det_inv = pow(det, -1, n)
        self.inv_matrix = tuple((v * det_inv) % n for v in (d, -b, -c, a))
        self.name = name or f"torus{n}_mat{a}{b}{c}{d}"

    @property
    def finite(self):
        return True

    def points(self):
        return [(u, v) for u in range(self.n) for v in range(self.n)]

    def _arc(self, x, y):
        a = abs(x - y) % self.n
        return Fraction(min(a, self.n - a), self.n)

    def dist(self, x, y):
        return max(self._arc(x[0], y[0]), self._arc(x[1], y[1]))

    def image(self, x):
        a, b, c, d = self.matrix
        return ((a * x[0] + b * x[1]) % self.n, (c * x[0] + d * x[1]) % self.n)

    def preimage(self, x):
        a, b, c, d = self.inv_matrix
        return ((a * x[0] + b * x[1]) % self.n, (c * x[0] + d * x[1]) % self.n)

    def carrier_token(self):
        return ("torus", self.n)

    def describe(self):
        return f"lattice n={self.n} torus map=mat " + " ".join(str(v) for v in self.matrix)


class ShiftSystem(MetricSystem):
    """Full shift on eventually periodic points over a finite alphabet."""

    backend = "shift"

    def __init__(self, alphabet: int = 2, name=None):
        if alphabet < 2:
            raise MalformedInputError("shift alphabet needs at least 2 symbols")
        self.alphabet = alphabet
        self.name = name or f"shift{alphabet}"

    @property
    def finite(self):
        return False

    def check_point(self, x):
        if not isinstance(x, EPPoint):
            raise MalformedInputError(f"shift points are EPPoints, got {type(x).__name__}")
        bad = [s for s in x.symbols() if not 0 <= s < self.alphabet]
        if bad:
            raise MalformedInputError(f"symbols {bad} outside alphabet {self.alphabet}")
        return x

    def dist(self, x, y):
        return shift_metric(x, y)

    def image(self, x):
        return x.shift_by(1)

    def preimage(self, x):
        return x.shift_by(-1)

    def carrier_token(self):
        return ("shift", self.alphabet)

    def describe(self):
        return f"shift alphabet={self.alphabet}"


class SatelliteSystem(MetricSystem):
    """Shift core Y plus satellite copies q(i,k,j) near the orbit of p.

    The marked point p is periodic with period t (so g^t p = p). Each
    satellite q(i,k,j), 1 <= i <= 3, 1 <= k <= K, 0 <= j < t, sits at
    distance 1/k "above" g^j(p); the map advances j cyclically and acts
    as the shift on Y. The truncation bound K keeps the satellite part
    finite; every retained distance matches the untruncated construction.
    """

    backend = "satellite"
    COPIES = 3

    def __init__(self, K: int, t: int, p: EPPoint, probes=(), alphabet: int = 2, name=None):
        if K < 1:
            raise MalformedInputError("satellite truncation needs K >= 1")
        if t < 2:
            raise MalformedInputError("satellite orbit length needs t >= 2")
        if not p.is_periodic or p.period != t:
            raise MalformedInputError("marked point must have least period exactly t")
        self.K = K
        self.t = t
        self.p = p
        self.alphabet = alphabet
        self.probes = tuple(probes)
        self.name = name or f"satellite_K{K}_t{t}"
        self._marked = tuple(p.shift_by(j) for j in range(t))

    @property
    def finite(self):
        return False

    def marked(self, j: int) -> EPPoint:
        return self._marked[j % self.t]

    def satellite_points(self):
        return [Satellite(i, k, j)
                for k in range(1, self.K + 1)
                for j in range(self.t)
                for i in range(1, self.COPIES + 1)]

    def sample_points(self):
        return list(self.probes) + self.satellite_points()

    def dist(self, x, y):
        if x == y:
            return ZERO
        xs, ys = isinstance(x, Satellite), isinstance(y, Satellite)
        if not xs and not ys:
            return shift_metric(x, y)
        if xs and not ys:
            return Fraction(1, x.k) + shift_metric(self.marked(x.j), y)
        if ys and not xs:
            return Fraction(1, y.k) + shift_metric(self.marked(y.j), x)
        if (x.k, x.j) == (y.k, y.j):
            return Fraction(1, x.k)
        return (Fraction(1, x.k) + Fraction(1, y.k)
                + shift_metric(self.marked(x.j), self.marked(y.j)))

    def image(self, x):
        if isinstance(x, Satellite):
            return Satellite(x.i, x.k, (x.j + 1) % self.t)
        return x.shift_by(1)

    def preimage(self, x):
        if isinstance(x, Satellite):
            return Satellite(x.i, x.k, (x.j - 1) % self.t)
        return x.shift_by(-1)

    def carrier_token(self):
        return ("satellite", self.K, self.t, format_ep(self.p))

    def describe(self):
        return f"satellite K={self.K} t={self.t} p={format_ep(self.p)}"


# -- builders ------------------------------------------------------------


def build_explicit(space: FiniteMetricSpace, perm, name="explicit") -> ExplicitSystem:
    return ExplicitSystem(space, perm, name)


def build_lattice(n: int, kind: str = "circle", step: int = None,
                  matrix=None, name=None) -> MetricSystem:
    if kind == "circle":
        if step is None:
            raise MalformedInputError("circle lattice needs a rotation step")
        return CircleSystem(n, step, name)
    if kind == "torus":
        if matrix is None:
            raise MalformedInputError("torus lattice needs a 2x2 matrix")
        return TorusSystem(n, matrix, name)
    raise MalformedInputError(f"unknown lattice kind {kind!r}")


def build_shift(alphabet: int = 2, name=None) -> ShiftSystem:
    return ShiftSystem(alphabet, name)


def build_satellite(K: int, t: int, p: EPPoint, probes=(), alphabet=2,
                    name=None) -> SatelliteSystem:
    return SatelliteSystem(K, t, p, probes, alphabet, name)


# -- orbits --------------------------------------------------------------


@dataclass(frozen=True)
class OrbitResult:
    points: tuple
    period: int          # joint period of the listed window; None when infinite
    preperiod: int = 0
    finite: bool = True
    left_cycle: tuple = ()
    right_cycle: tuple = ()


@dataclass(frozen=True)
class ShiftOrbitClosure:
    """Closure of an infinite shift orbit: all shifts of `base` plus the
    two periodic cycles the forward and backward shifts accumulate on."""
    base: EPPoint
    left_cycle: tuple
    right_cycle: tuple

    def contains(self, y: EPPoint) -> bool:
        if y in self.left_cycle or y in self.right_cycle:
            return True
        if y.is_periodic:
            return False
        # canonical offsets are translation-equivariant, so only one
        # shift exponent can possibly match
        n = self.base.offset - y.offset
        return self.base.shift_by(n) == y

    def sample(self, width: int = 3):
        pts = [self.base.shift_by(n) for n in range(-width, width + 1)]
        return pts + list(self.left_cycle) + list(self.right_cycle)


def _finite_orbit(system, x):
    pts = [x]
    cur = system.image(x)
    while cur != x:
        pts.append(cur)
        cur = system.image(cur)
    return OrbitResult(tuple(pts), period=len(pts))


def orbit(system, x) -> OrbitResult:
    """Full two-sided orbit. Finite orbits come back as an ordered list
    with their exact period; infinite shift orbits come back as a window
    of shifts with finite=False plus the two limit cycles."""
    if system.finite:
        return _finite_orbit(system, x)
    if isinstance(x, Satellite):
        return _finite_orbit(system, x)
    if x.is_periodic:
        pts = tuple(x.shift_by(n) for n in range(x.period))
        return OrbitResult(pts, period=x.period)
    w = (max(abs(x.offset), abs(x.offset + len(x.center)))
         + lcm(len(x.left), len(x.right)) + 2)
    window = tuple(x.shift_by(n) for n in range(-w, w + 1))
    return OrbitResult(window, period=None, finite=False,
                       left_cycle=left_limit_cycle(x),
                       right_cycle=right_limit_cycle(x))


def orbit_closure(system, x):
    """Orbit closure: a point tuple when finite, else a ShiftOrbitClosure."""
    ob = orbit(system, x)
    if ob.finite:
        return ob.points
    return ShiftOrbitClosure(x, ob.left_cycle, ob.right_cycle)


def iterate(system, x, n: int):
    step = system.image if n >= 0 else system.preimage
    for _ in range(abs(n)):
        x = step(x)
    return x


def orbit_period(system, x) -> int:
    """Period of a finite orbit; PreconditionError when infinite."""
    ob = orbit(system, x)
    if not ob.finite:
        raise PreconditionError(f"orbit of {point_label(x)} is infinite")
    return ob.period


def system_order(system) -> int:
    """Smallest L >= 1 with f^L the identity (finite carriers only)."""
    if not system.finite:
        raise UnsupportedBackendError(
            f"{system.backend} maps have no global finite order")
    out = 1
    for p in system.points():
        out = lcm(out, orbit_period(system, p))
    return out


# -- separation along pair orbits ----------------------------------------


def pair_sup_separation(system, x, y) -> Fraction:
    """sup over n in Z of d(f^n x, f^n y), exact.

    Finite backends scan one joint pair period. On the shift two
    distinct points always reach separation exactly 1: shifting moves
    their first disagreement to the origin. Satellite pairs reduce to
    finitely many marked-orbit comparisons.
    """
    if x == y:
        return ZERO
    if system.finite:
        best = system.dist(x, y)
        a, b = system.image(x), system.image(y)
        while (a, b) != (x, y):
            d = system.dist(a, b)
            if d > best:
                best = d
            a, b = system.image(a), system.image(b)
        return best
    if system.backend == "shift":
        return ONE
    if system.backend == "satellite":
        return _satellite_sup_separation(system, x, y)
    raise UnsupportedBackendError(system.backend)


def _satellite_sup_separation(system, x, y):
    xs, ys = isinstance(x, Satellite), isinstance(y, Satellite)
    if not xs and not ys:
        return ONE
    if xs and not ys:
        x, y = y, x
        xs, ys = ys, xs
    if not xs and ys:
        base = system.marked(y.j)
        if x == base:
            return Fraction(1, y.k)
        return Fraction(1, y.k) + ONE
    if (x.k, x.j) == (y.k, y.j):
        return Fraction(1, x.k)
    worst = max(shift_metric(system.marked(x.j + n), system.marked(y.j + n))
                for n in range(system.t))
    return Fraction(1, x.k) + Fraction(1, y.k) + worst


def pair_distance_at(system, x, y, n: int) -> Fraction:
    return system.dist(iterate(system, x, n), iterate(system, y, n))


def joint_pair_period(system, x, y) -> int:
    return lcm(orbit_period(system, x), orbit_period(system, y))


# -- C0 distance ---------------------------------------------------------


def c0_distance(f: MetricSystem, g: MetricSystem, probe=None) -> Fraction:
    """sup over the carrier of d(f(x), g(x)).

    Exact on finite backends. On shift/satellite carriers a finite
    probe set is required and the result is a lower bound (the sup is
    over an infinite carrier); callers surface that caveat.
    """
    if f.carrier_token() != g.carrier_token():
        raise CarrierMismatchError(
            f"carriers differ: {f.carrier_token()[0]} vs {g.carrier_token()[0]}")
    if f is g or f.digest() == g.digest():
        return ZERO
    if f.finite:
        return max((f.dist(f.image(x), g.image(x)) for x in f.points()), default=ZERO)
    pts = list(probe) if probe else []
    if f.backend == "satellite":
        pts.extend(f.satellite_points())
    if not pts:
        raise PreconditionError("c0_distance on an infinite carrier needs a probe set")
    return max(f.dist(f.image(x), g.image(x)) for x in pts)


# -- balls ---------------------------------------------------------------


@dataclass(frozen=True)
class SatelliteBall:
    """Ball in the satellite carrier: finitely many satellite points
    plus (optionally) a shift ball inside Y and stray Y boundary points."""
    center: object
    satellites: tuple
    y_ball: object = None       # ShiftBall | None
    y_extra: tuple = ()

    def contains(self, pt) -> bool:
        if isinstance(pt, Satellite):
            return pt in self.satellites
        if self.y_ball is not None and self.y_ball.contains(pt):
            return True
        return pt in self.y_extra

    def has_y_region(self) -> bool:
        return self.y_ball is not None

    def sample_points(self, alphabet=2, limit=6):
        out = list(self.satellites) + list(self.y_extra)
        if self.y_ball is not None:
            out.extend(self.y_ball.sample_points(alphabet, limit))
        return out


def system_ball(system, x, radius, closed: bool = False):
    """Metric ball around x. Finite backends return a frozenset;
    the shift returns a ShiftBall; the satellite a SatelliteBall."""
    r = as_rational(radius)
    if system.finite:
        if closed:
            return frozenset(y for y in system.points() if system.dist(x, y) <= r)
        return frozenset(y for y in system.points() if system.dist(x, y) < r)
    if system.backend == "shift":
        if closed and r == 0:
            return frozenset([x])
        h = ball_halfwidth(r, closed)
        if h is None:
            return frozenset()
        return ShiftBall(x, h)
    if system.backend == "satellite":
        return _satellite_ball(system, x, r, closed)
    raise UnsupportedBackendError(system.backend)


def _satellite_ball(system, x, r, closed):
    ok = (lambda d: d <= r) if closed else (lambda d: d < r)
    sats = tuple(q for q in system.satellite_points() if ok(system.dist(x, q)))
    if isinstance(x, Satellite):
        base = system.marked(x.j)
        resid = r - Fraction(1, x.k)
    else:
        base = x
        resid = r
    y_ball = None
    y_extra = ()
    if closed and resid == 0:
        y_extra = (base,)
    elif (resid > 0) or (closed and resid >= 0):
        h = ball_halfwidth(resid, closed)
        if h is not None:
            y_ball = ShiftBall(base, h)
    return SatelliteBall(x, sats, y_ball, y_extra)


# -- materialization and conjugation --------------------------------------


def materialize(system) -> tuple:
    """Finite system as (ExplicitSystem, point list); index i <-> pts[i]."""
    if not system.finite:
        raise UnsupportedBackendError(f"{system.backend} carrier cannot be materialized")
    pts = system.points()
    index = {p: i for i, p in enumerate(pts)}
    table = [[system.dist(a, b) for b in pts] for a in pts]
    perm = tuple(index[system.image(p)] for p in pts)
    return ExplicitSystem(FiniteMetricSpace(table), perm, name=system.name), pts


def is_self_isometry(system, relabel: dict) -> bool:
    """Does the carrier bijection `relabel` preserve the metric?"""
    pts = list(relabel)
    return all(system.dist(relabel[a], relabel[b]) == system.dist(a, b)
               for i, a in enumerate(pts) for b in pts[i + 1:])


def conjugate_system(system, relabel: dict, name=None,
                     transport_metric: bool = False) -> ExplicitSystem:
    """System h o f o h^{-1} where h is the carrier bijection `relabel`.

    With transport_metric=False the result lives on the original metric
    space (indices in original point order, metric untouched): h is a
    conjugacy, and an isometric one exactly when is_self_isometry(h).
    With transport_metric=True the metric is pushed through h as well,
    so the result is always isometrically conjugate to the input.
    """
    if not system.finite:
        raise UnsupportedBackendError("conjugation requires a finite carrier")
    pts = system.points()
    if sorted(map(point_key, relabel)) != sorted(map(point_key, pts)) or \
            sorted(map(point_key, relabel.values())) != sorted(map(point_key, pts)):
        raise PreconditionError("relabeling must be a bijection of the carrier")
    index = {p: i for i, p in enumerate(pts)}
    inv = {v: k for k, v in relabel.items()}
    perm = tuple(index[relabel[system.image(inv[p])]] for p in pts)
    if transport_metric:
        table = [[system.dist(inv[a], inv[b]) for b in pts] for a in pts]
    else:
        table = [[system.dist(a, b) for b in pts] for a in pts]
    return ExplicitSystem(FiniteMetricSpace(table), perm,
                          name=name or f"{system.name}_conj")

"""Exact measure layer: weighted measures, separation sets, tracking maps.

Finite carriers take nonnegative rational point weights (zero weights
standing in for null structure, since finite measures cannot be
non-atomic); the shift carrier takes Bernoulli product measures with
positive rational symbol weights, which are genuinely non-atomic. All
values are exact rationals.
"""

from dataclasses import dataclass
from fractions import Fraction
from math import lcm

from .errors import (CarrierMismatchError, MalformedInputError, PointdynError,
                     PreconditionError, UnsupportedBackendError)
from .expansivity import ExpansivityVerdict, _eventual_agreement_index
from .rationals import ONE, ZERO, as_rational, format_rational
from .shiftspace import EPPoint, ShiftBall
from .systems import (Satellite, SatelliteBall, ShiftOrbitClosure,
                      c0_distance, orbit, orbit_closure, pair_sup_separation,
                      point_label, sorted_points, system_ball, system_order)


class WeightedMeasure:
    """Per-point rational weights (finite) or a Bernoulli vector (shift)."""

    def __init__(self, kind, *, weights=None, bernoulli=None):
        if kind == "weights":
            if not weights:
                raise MalformedInputError("weighted measure needs point weights")
            self.weights = {p: as_rational(w) for p, w in dict(weights).items()}
            if any(w < 0 for w in self.weights.values()):
                raise MalformedInputError("weights must be nonnegative")
            if sum(self.weights.values()) <= 0:
                raise MalformedInputError("measure must be nontrivial (total > 0)")
            self.bernoulli = None
        elif kind == "bernoulli":
            if not bernoulli:
                raise MalformedInputError("Bernoulli measure needs symbol weights")
            self.bernoulli = tuple(as_rational(w) for w in bernoulli)
            if any(w <= 0 for w in self.bernoulli):
                raise MalformedInputError("Bernoulli weights must be positive")
            if sum(self.bernoulli) != 1:
                raise MalformedInputError("Bernoulli weights must sum to 1")
            self.weights = None
        else:
            raise MalformedInputError(f"unknown measure kind {kind!r}")
        self.kind = kind

    @classmethod
    def from_weights(cls, weights):
        return cls("weights", weights=weights)

    @classmethod
    def from_bernoulli(cls, params):
        return cls("bernoulli", bernoulli=params)

    def total(self) -> Fraction:
        if self.kind == "weights":
            return sum(self.weights.values(), ZERO)
        return ONE

    def weight(self, point) -> Fraction:
        if self.kind != "weights":
            raise UnsupportedBackendError("point weights only exist on finite carriers")
        try:
            return self.weights[point]
        except KeyError:
            raise CarrierMismatchError(
                f"{point_label(point)} carries no weight") from None

    def __eq__(self, other):
        if not isinstance(other, WeightedMeasure):
            return NotImplemented
        return (self.kind == other.kind and self.weights == other.weights
                and self.bernoulli == other.bernoulli)

    def __repr__(self):
        if self.kind == "weights":
            body = ", ".join(f"{point_label(p)}: {format_rational(w)}"
                             for p, w in sorted(self.weights.items(),
                                                key=lambda kv: point_label(kv[0])))
            return f"WeightedMeasure(weights={{{body}}})"
        body = ", ".join(map(format_rational, self.bernoulli))
        return f"WeightedMeasure(bernoulli=({body}))"


def pullback(h, mu: WeightedMeasure) -> WeightedMeasure:
    """Transported measure giving h(x) the weight of x.

    For Bernoulli measures h must act as a symbol permutation (any
    other transformation has no Bernoulli image).
    """
    if mu.kind == "weights":
        relabel = h if callable(h) else h.__getitem__
        moved = {relabel(p): w for p, w in mu.weights.items()}
        if len(moved) != len(mu.weights):
            raise PreconditionError("measure transport needs a bijection")
        return WeightedMeasure.from_weights(moved)
    n = len(mu.bernoulli)
    if callable(h):
        perm = [h(s) for s in range(n)]
    else:
        try:
            perm = [h[s] for s in range(n)]
        except (KeyError, IndexError, TypeError):
            raise UnsupportedBackendError(
                "Bernoulli transport needs a symbol permutation") from None
    if sorted(perm) != list(range(n)):
        raise UnsupportedBackendError(
            "Bernoulli transport needs a symbol permutation")
    moved = [None] * n
    for s in range(n):
        moved[perm[s]] = mu.bernoulli[s]
    return WeightedMeasure.from_bernoulli(moved)


def measure_of(mu: WeightedMeasure, subset) -> Fraction:
    """Exact measure of a finite point set, shift cylinder, or orbit closure."""
    if isinstance(subset, SatelliteBall):
        raise UnsupportedBackendError("no measures are defined on the satellite carrier")
    if isinstance(subset, ShiftBall):
        if mu.kind != "bernoulli":
            raise CarrierMismatchError("shift cylinders need a Bernoulli measure")
        value = ONE
        for i in subset.fixed_positions():
            value *= mu.bernoulli[subset.center.value(i)]
        return value
    if isinstance(subset, ShiftOrbitClosure):
        if mu.kind != "bernoulli":
            raise CarrierMismatchError("orbit closures need a Bernoulli measure")
        return ZERO  # countable set, atomless measure
    if mu.kind == "bernoulli":
        for p in subset:
            if not isinstance(p, EPPoint):
                raise CarrierMismatchError(
                    f"{point_label(p)} is not a shift point")
        return ZERO  # finitely many atoms of an atomless measure
    return sum((mu.weight(p) for p in subset), ZERO)


def measure_complement(mu: WeightedMeasure, subset) -> Fraction:
    return mu.total() - measure_of(mu, subset)


# -- separation sets -------------------------------------------------------


def phi_set(system, x, c):
    """Points never separating from x beyond c: {y : sup_n d(f^n x, f^n y) <= c}."""
    c = as_rational(c)
    if system.finite:
        return frozenset(y for y in system.points()
                         if pair_sup_separation(system, x, y) <= c)
    if system.backend == "shift":
        if c < 1:
            return frozenset([x])  # any disagreement reaches distance 1
        return ShiftBall(x, 0)
    if system.backend == "satellite":
        return _phi_satellite(system, x, c)
    raise UnsupportedBackendError(system.backend)


def _phi_satellite(system, x, c):
    sats = frozenset(q for q in system.satellite_points()
                     if pair_sup_separation(system, x, q) <= c)
    if isinstance(x, Satellite):
        y_threshold = Fraction(1, x.k) + 1   # separation from any non-anchor Y point
        anchor = system.marked(x.j)
        extras = frozenset([anchor]) if Fraction(1, x.k) <= c else frozenset()
    else:
        y_threshold = ONE
        extras = frozenset([x])
    if c < y_threshold:
        return sats | extras
    base = anchor if isinstance(x, Satellite) else x
    return SatelliteBall(x, tuple(sorted_points(sats)), ShiftBall(base, 0), ())


def gamma_set(system, x, c, z):
    """phi_set(z, c) cut down to the open ball B(x, c); z must lie in that ball."""
    c = as_rational(c)
    ball = system_ball(system, x, c)
    if not _ball_contains(ball, z):
        raise PreconditionError(
            f"{point_label(z)} lies outside the open ball of radius {c}")
    phi = phi_set(system, z, c)
    if isinstance(phi, frozenset):
        return frozenset(y for y in phi if _ball_contains(ball, y))
    if system.backend == "shift":
        # phi is the whole space here (c >= 1), so the cut is the ball itself
        return ball
    raise UnsupportedBackendError(
        "satellite gamma sets with an unbounded Y part are not finitely representable")


def _ball_contains(ball, p) -> bool:
    if isinstance(ball, frozenset):
        return p in ball
    return ball.contains(p)


# -- pointwise mu-expansivity ----------------------------------------------


def _check_measure_backend(system, mu):
    if system.finite and mu.kind != "weights":
        raise CarrierMismatchError("finite carriers need point-weight measures")
    if not system.finite:
        if system.backend != "shift":
            raise UnsupportedBackendError(
                "no measures are defined on the satellite carrier")
        if mu.kind != "bernoulli":
            raise CarrierMismatchError("the shift carrier needs a Bernoulli measure")


def mu_uniformly_expansive_at(system, mu, x, c) -> ExpansivityVerdict:
    """Every z in B(x, c) has a mu-null set of c-inseparable ball companions."""
    c = as_rational(c)
    _check_measure_backend(system, mu)
    if system.finite:
        for z in sorted_points(system_ball(system, x, c)):
            gamma = gamma_set(system, x, c, z)
            if measure_of(mu, gamma) != 0:
                return ExpansivityVerdict(
                    x, c, "mu_uniform", False, counterexample=(z,),
                    detail=f"gamma set of {point_label(z)} has measure "
                           f"{format_rational(measure_of(mu, gamma))}")
        return ExpansivityVerdict(x, c, "mu_uniform", True)
    if c < 1:
        return ExpansivityVerdict(
            x, c, "mu_uniform", True,
            detail="every gamma set is a single point, null under Bernoulli")
    return ExpansivityVerdict(
        x, c, "mu_uniform", False, counterexample=(x,),
        detail="the gamma set of the centre is a cylinder of positive measure")


def mu_expansive_points(system, mu, c, probe=None) -> frozenset:
    """The set of mu-uniformly-expansive points (probe set on the shift)."""
    if system.finite:
        pts = system.points()
    else:
        if probe is None:
            raise PreconditionError("infinite carriers need a probe set")
        pts = list(probe)
    return frozenset(x for x in pts if mu_uniformly_expansive_at(system, mu, x, c))


@dataclass(frozen=True)
class MeasureExpansivityReport:
    constant: Fraction
    result: bool
    probes: tuple
    failing_point: object = None
    cross_check: str = ""

    def __bool__(self):
        return self.result


def expansive_measure_check(system, mu, c, probe=None) -> MeasureExpansivityReport:
    """Is every Phi-set mu-null at scale c?

    On finite carriers the probe must be the whole carrier and the
    verdict is cross-checked against the pointwise route: a null Phi
    layer forces every point to be mu-uniformly expansive at c, and a
    fully mu-uniformly-expansive carrier forces Phi-nullity at c/4.
    """
    c = as_rational(c)
    _check_measure_backend(system, mu)
    if system.finite:
        pts = system.points()
        if probe is not None and set(probe) != set(pts):
            raise PreconditionError("finite carriers must be probed in full")
        probes = tuple(sorted_points(pts))
    else:
        if probe is None:
            raise PreconditionError("the shift carrier needs a declared probe set")
        probes = tuple(sorted_points(probe))
    failing = None
    for p in probes:
        if measure_of(mu, phi_set(system, p, c)) != 0:
            failing = p
            break
    result = failing is None
    notes = []
    pointwise = all(mu_uniformly_expansive_at(system, mu, p, c) for p in probes)
    if result and not pointwise:
        raise PointdynError("null Phi-sets must make every point mu-uniformly expansive")
    notes.append(f"pointwise route at {format_rational(c)}: "
                 f"{'agrees' if pointwise == result else 'weaker, as expected'}")
    if system.finite and pointwise:
        quarter = c / 4
        if any(measure_of(mu, phi_set(system, p, quarter)) != 0 for p in pts):
            raise PointdynError(
                "a fully mu-uniformly-expansive carrier must have null "
                "Phi-sets at a quarter of the scale")
        notes.append(f"ball-cover route confirms nullity at {format_rational(quarter)}")
    return MeasureExpansivityReport(c, result, probes, failing, "; ".join(notes))


# -- tracking maps ----------------------------------------------------------


@dataclass(frozen=True)
class SetValuedAssignment:
    """Set-valued map u -> H(u) over an orbit, explicit or rule-given.

    Explicit assignments carry one finite image set per orbit point.
    The identity rule stands for H(u) = {u} over an infinite shift
    orbit closure, where the images cannot be tabulated.
    """
    eta: Fraction
    domain: tuple                 # orbit points (empty for rule-based maps)
    images: object = None         # dict point -> frozenset
    rule: str = None              # "identity"
    closure: object = None        # ShiftOrbitClosure for rule-based maps

    def image_of(self, u) -> frozenset:
        if self.rule == "identity":
            inside = (self.closure.contains(u) if isinstance(self.closure, ShiftOrbitClosure)
                      else u in self.closure)
            if not inside:
                raise PreconditionError(f"{point_label(u)} is outside the domain")
            return frozenset([u])
        return self.images[u]

    def dom(self):
        """Points with nonempty image."""
        if self.rule == "identity":
            return self.closure
        return tuple(u for u in self.domain if self.images[u])


def build_tracking_map(f, g, x, eta) -> SetValuedAssignment:
    """H(u) = {z : d(f^n z, g^n u) <= eta for all integer n}, u in the g-orbit of x.

    Closed balls, so the comparison is non-strict. On finite carriers
    both maps are permutations and the constraint is checked over one
    joint period exactly. Empty images are kept: they shrink the domain.
    """
    eta = as_rational(eta)
    if eta <= 0:
        raise PreconditionError("tracking radius must be positive")
    if f.carrier_token() != g.carrier_token():
        raise CarrierMismatchError("tracking maps need a shared carrier")
    if not f.finite:
        if f.backend != "shift":
            raise UnsupportedBackendError(
                "tracking maps are implemented for finite and shift carriers")
        if c0_distance(f, g) != 0:
            raise UnsupportedBackendError(
                "shift tracking maps require the unperturbed map")
        if eta >= 1:
            raise UnsupportedBackendError(
                "shift tracking images are only finitely representable below 1")
        return SetValuedAssignment(eta, (), rule="identity",
                                   closure=orbit_closure(f, x))
    horizon = lcm(system_order(f), system_order(g))
    pts = f.points()
    images = {}
    for u in orbit(g, x).points:
        survivors = []
        for z in pts:
            fz, gu = z, u
            ok = True
            for _ in range(horizon):
                if f.dist(fz, gu) > eta:
                    ok = False
                    break
                fz, gu = f.image(fz), g.image(gu)
            if ok:
                survivors.append(z)
        images[u] = frozenset(survivors)
    return SetValuedAssignment(eta, orbit(g, x).points, images=images)


def tracking_within_ball(assignment: SetValuedAssignment, system, eta=None):
    """Re-verify H(u) within the closed eta-ball of u; (ok, witness)."""
    eta = assignment.eta if eta is None else as_rational(eta)
    if assignment.rule == "identity":
        return True, None  # d(u, u) = 0 <= eta for every u
    for u in assignment.domain:
        for w in assignment.images[u]:
            if system.dist(u, w) > eta:
                return False, (u, w)
    return True, None


def tracking_commutes(assignment: SetValuedAssignment, f, g):
    """Re-verify f(H(u)) = H(g(u)) as exact set equality; (ok, witness)."""
    if assignment.rule == "identity":
        # images are {u}; f{u} = {f(u)} equals {g(u)} because g is f here
        return True, None
    for u in assignment.domain:
        pushed = frozenset(f.image(z) for z in assignment.images[u])
        target = assignment.images[g.image(u)]
        if pushed != target:
            return False, (u, pushed, target)
    return True, None


# -- strong mu-topological stability ----------------------------------------


@dataclass(frozen=True)
class ClauseCheck:
    name: str
    result: bool
    detail: str = ""

    def __bool__(self):
        return self.result


@dataclass(frozen=True)
class StabilityReport:
    result: bool
    clauses: tuple
    eta: Fraction
    assignment: SetValuedAssignment

    def __bool__(self):
        return self.result

    def clause(self, key: str) -> ClauseCheck:
        for c in self.clauses:
            if c.name == key or c.name.split(":")[0] == key:
                return c
        raise KeyError(key)


def verify_strong_mu_topological_stability(f, mu, x, eps, delta, g, B=None, *,
                                           eta=None, expansivity_c=None):
    """Check the strong stability clauses for the perturbation g of f at x.

    Builds the canonical tracking map H over the g-orbit of x and
    verifies: (i) mu-null images near x, (ii) displacement within eps,
    (iii) exact commutation, (iv) the domain co-measure bound against
    U = B intersect B(x, delta) intersect the orbit. Preconditions are
    reported as named clause failures rather than exceptions.
    """
    eps, delta = as_rational(eps), as_rational(delta)
    _check_measure_backend(f, mu)
    if eta is None:
        c = as_rational(expansivity_c) if expansivity_c is not None else None
        eta = min(c / 16, eps / 2) if c is not None else eps / 2
    eta = as_rational(eta)
    clauses = []

    if f.finite:
        gap = c0_distance(f, g)
        clauses.append(ClauseCheck(
            "pre:c0", gap <= delta,
            f"c0 distance {format_rational(gap)} vs delta {format_rational(delta)}"))
        carrier = frozenset(f.points())
        B = carrier if B is None else frozenset(B)
        b_defect = measure_of(mu, carrier - B)
        clauses.append(ClauseCheck(
            "pre:B", b_defect == 0,
            f"complement of B has measure {format_rational(b_defect)}"))
    else:
        clauses.append(ClauseCheck("pre:c0", c0_distance(f, g) == 0,
                                   "shift perturbations must be trivial"))
        if B is not None:
            raise UnsupportedBackendError(
                "explicit B sets are only supported on finite carriers")
        clauses.append(ClauseCheck("pre:B", True, "B defaults to the whole carrier"))

    H = build_tracking_map(f, g, x, eta)

    if f.finite:
        near = [z for z in H.domain if f.dist(x, z) < delta / 4]
        bad = next((z for z in near if measure_of(mu, H.images[z]) != 0), None)
        clauses.append(ClauseCheck(
            "i:null-images", bad is None,
            f"checked {len(near)} orbit points in B(x, delta/4)" if bad is None
            else f"H({point_label(bad)}) has measure "
                 f"{format_rational(measure_of(mu, H.images[bad]))}"))
    else:
        clauses.append(ClauseCheck(
            "i:null-images", True,
            "images are single points, null under a Bernoulli measure"))

    ok, witness = tracking_within_ball(H, f, eps)
    clauses.append(ClauseCheck(
        "ii:displacement", ok,
        "every image sits inside the closed eps-ball of its argument" if ok
        else f"H({point_label(witness[0])}) strays to {point_label(witness[1])}"))

    ok, witness = tracking_commutes(H, f, g)
    clauses.append(ClauseCheck(
        "iii:commutation", ok,
        "f(H(u)) = H(g(u)) exactly on the whole domain" if ok
        else f"commutation fails at {point_label(witness[0])}"))

    if f.finite:
        dom = frozenset(H.dom())
        dom_defect = measure_of(mu, carrier - dom)
        U = frozenset(u for u in orbit(g, x).points
                      if u in B and f.dist(x, u) < delta)
        u_defect = measure_of(mu, carrier - U)
        clauses.append(ClauseCheck(
            "iv:domain-measure", dom_defect <= u_defect,
            f"mu off the domain {format_rational(dom_defect)} vs mu off U "
            f"{format_rational(u_defect)}"))
    else:
        # Dom(H) is the orbit closure and U sits inside it; both
        # complements carry full measure 1, so the bound is tight.
        clauses.append(ClauseCheck(
            "iv:domain-measure", True,
            "both complements have measure 1 under an atomless measure"))

    clauses.append(ClauseCheck(
        "usc", True,
        "set-valued maps on a discrete orbit domain are upper semicontinuous"
        if f.finite else "identity-rule images vary continuously"))

    return StabilityReport(all(c.result for c in clauses), tuple(clauses), eta, H)


# -- sequence criterion ------------------------------------------------------


def measure_sequence_criterion(f, approximants, mu, x, delta) -> ExpansivityVerdict:
    """Do inseparable ball companions stay mu-null along the approximant tail?

    The approximants must eventually equal the limit map, so the
    eventual-separation sets reduce to sup-separation under f: for each
    z in B(x, delta) the set {y in B(x, delta) : sup_n d(f^n y, f^n z)
    <= delta/3} must be mu-null. A passing verdict is cross-checked
    against mu-uniform expansivity at delta/9.
    """
    delta = as_rational(delta)
    _check_measure_backend(f, mu)
    tail = _eventual_agreement_index(f, approximants)
    third = delta / 3
    if f.finite:
        ball = system_ball(f, x, delta)
        witness = None
        for z in sorted_points(ball):
            failure = frozenset(y for y in ball
                                if pair_sup_separation(f, z, y) <= third)
            if measure_of(mu, failure) != 0:
                witness = z
                break
        result = witness is None
    else:
        result = third < 1  # otherwise the failure set is a positive cylinder
        witness = None if result else x
    detail = f"approximants agree with the limit map from index {tail}"
    if result:
        if not mu_uniformly_expansive_at(f, mu, x, delta / 9):
            raise PointdynError(
                "a null separation-failure layer must transport to "
                "mu-uniform expansivity at a ninth of the scale")
        detail += f"; cross-checked at {format_rational(delta / 9)}"
    return ExpansivityVerdict(x, delta, "measure_sequence", result,
                              counterexample=(witness,) if witness is not None else None,
                              detail=detail)

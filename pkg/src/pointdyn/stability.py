"""Constructive stability checks.

The semiconjugacy builder follows the classical recipe: the perturbed
orbit of x is a pseudo-orbit of f, a tracer supplies the image of the
orbit, and expansivity makes the assignment well defined. Every claim
the builder makes (well-definedness, commutation, displacement) is
re-verified independently of the construction. The Gromov-Hausdorff
layer searches for delta-isometry pairs by branch and bound and turns
found pairs / exhausted searches into exact upper / lower bounds.
"""

from dataclasses import dataclass
from fractions import Fraction
from math import lcm

from .errors import (CarrierMismatchError, PreconditionError,
                     ResourceBudgetError, UnsupportedBackendError)
from .metric import distortion, hausdorff_distance
from .rationals import ZERO, as_rational, dyadic_below, format_rational
from .systems import (ExplicitSystem, c0_distance, iterate, materialize,
                      orbit, orbit_closure, pair_sup_separation, point_label,
                      point_key, system_order)

DEFAULT_ENUMERATION_BUDGET = 10 ** 6
DEFAULT_SEARCH_BUDGET = 500_000
MAX_REPORTED_PAIRS = 10_000


# -- semiconjugacy builder --------------------------------------------------


def _common_ground(f, g):
    """Comparable forms of two systems on the same metric carrier.

    Different backends (a lattice and an explicit perturbation of it)
    can present the same points and metric under different carrier
    tokens; materializing both reconciles them. Returns (f', g', pts)
    where pts translates working indices back to f's points, or None
    when no translation happened.
    """
    if f.carrier_token() == g.carrier_token():
        return f, g, None
    if not (f.finite and g.finite):
        raise CarrierMismatchError(
            f"carriers differ: {f.carrier_token()[0]} vs {g.carrier_token()[0]}")
    fm, fpts = materialize(f)
    gm, gpts = materialize(g)
    if fm.space != gm.space or fpts != gpts:
        raise CarrierMismatchError(
            f"carriers differ: {f.carrier_token()[0]} vs {g.carrier_token()[0]}")
    return fm, gm, fpts


@dataclass(frozen=True)
class ConjugacyResult:
    success: bool
    failed_step: str            # None | "shadowing" | "well-definedness" |
                                # "commutation" | "residual"
    domain: tuple               # orbit of x under g
    mapping: object             # dict point -> point (None on early failure)
    residual: Fraction          # sup d(h(z), z) over the domain, when built
    commutation_ok: object      # bool once h exists
    eta: Fraction
    detail: str = ""

    def __bool__(self):
        return self.success


def _tracer_candidates(f, g_orbit, eta):
    """Points z with d(f^n z, x_n) < eta for the whole periodic window."""
    P = len(g_orbit)
    horizon = lcm(system_order(f), P)
    found = []
    for z in f.points():
        cur, ok = z, True
        for n in range(horizon):
            if f.dist(cur, g_orbit[n % P]) >= eta:
                ok = False
                break
            cur = f.image(cur)
        if ok:
            found.append(z)
    return found


def build_conjugacy(f, g, x, eps, delta, *, expansivity_c=None, eta=None):
    """Semiconjugacy h from the g-orbit of x into X with f o h = h o g.

    Requires c0_distance(f, g) <= delta. The tracing radius defaults to
    the min(eps, c)/16 schedule (eps/16 without a declared expansivity
    constant); at that radius well-definedness needs separation only
    beyond 2*eta, which the schedule keeps below c.
    """
    eps, delta = as_rational(eps), as_rational(delta)
    f, g, pts = _common_ground(f, g)
    if pts is not None:
        try:
            x = pts.index(x)
        except ValueError:
            raise PreconditionError(
                f"{point_label(x)} is not a carrier point") from None
    gap = c0_distance(f, g)
    if gap > delta:
        raise PreconditionError(
            f"c0 distance {format_rational(gap)} exceeds delta")
    if eta is None:
        if expansivity_c is not None:
            eta = min(eps, as_rational(expansivity_c)) / 16
        else:
            eta = eps / 16
    eta = as_rational(eta)
    if not f.finite:
        if gap != 0:
            raise UnsupportedBackendError(
                "only the trivial perturbation is buildable on infinite carriers")
        dom = orbit_closure(f, x)
        dom_t = dom if isinstance(dom, tuple) else ()
        return ConjugacyResult(True, None, dom_t,
                               {u: u for u in dom_t} or None, ZERO, True, eta,
                               "unperturbed map: h is the identity on the orbit closure")

    def finish(res: ConjugacyResult) -> ConjugacyResult:
        if pts is None:
            return res
        dom = tuple(pts[u] for u in res.domain)
        mp = None if res.mapping is None else \
            {pts[u]: pts[v] for u, v in res.mapping.items()}
        return ConjugacyResult(res.success, res.failed_step, dom, mp,
                               res.residual, res.commutation_ok, res.eta,
                               res.detail)

    orb = orbit(g, x).points
    P = len(orb)
    tracers = _tracer_candidates(f, orb, eta)
    if not tracers:
        return finish(ConjugacyResult(
            False, "shadowing", orb, None, None, None, eta,
            f"no orbit of f stays within {format_rational(eta)} of the "
            f"perturbed orbit"))
    z = x if x in tracers else min(tracers, key=point_key)
    w = iterate(f, z, P)
    if w != z:
        sep = pair_sup_separation(f, z, w)
        return finish(ConjugacyResult(
            False, "well-definedness", orb, None, None, None, eta,
            f"tracer {point_label(z)} does not close up over the orbit "
            f"period {P}: the competing branch images separate by only "
            f"{format_rational(sep)} (at most 2*eta), below any usable "
            f"expansivity constant"))
    mapping, img = {}, z
    for u in orb:
        mapping[u] = img
        img = f.image(img)
    commutation = all(f.image(mapping[u]) == mapping[g.image(u)] for u in orb)
    residual = max(f.dist(mapping[u], u) for u in orb)
    if not commutation:
        return finish(ConjugacyResult(
            False, "commutation", orb, mapping, residual, False, eta,
            "f o h differs from h o g"))
    if residual > eps:
        return finish(ConjugacyResult(
            False, "residual", orb, mapping, residual, True, eta,
            f"sup displacement {format_rational(residual)} exceeds eps"))
    return finish(ConjugacyResult(
        True, None, orb, mapping, residual, True, eta,
        f"tracer {point_label(z)}, {len(tracers)} candidates"))


# -- perturbation enumeration ------------------------------------------------


@dataclass(frozen=True)
class PerturbationFamily:
    base: ExplicitSystem        # the input system, materialized
    points: tuple               # index -> original point
    systems: tuple              # every permutation within c0 distance delta

    def __len__(self):
        return len(self.systems)


def enumerate_perturbations(system, delta, budget=None) -> PerturbationFamily:
    """All self-maps g of the carrier with c0_distance(f, g) <= delta.

    Perturbations stay within the homeomorphism class, so on a finite
    carrier they are exactly the permutations moving each f-image by at
    most delta (non-strict, matching the stability comparisons).
    """
    delta = as_rational(delta)
    budget = DEFAULT_ENUMERATION_BUDGET if budget is None else budget
    base, pts = materialize(system)
    n = base.space.n
    table = base.space.table
    allowed = [[v for v in range(n) if table[base.perm[u]][v] <= delta]
               for u in range(n)]
    perms, chosen, used = [], [None] * n, [False] * n

    def place(u):
        if u == n:
            perms.append(tuple(chosen))
            if len(perms) > budget:
                raise ResourceBudgetError(
                    f"more than {budget} admissible perturbations",
                    budget=budget)
            return
        for v in allowed[u]:
            if not used[v]:
                used[v] = True
                chosen[u] = v
                place(u + 1)
                used[v] = False

    place(0)
    systems = tuple(
        ExplicitSystem(base.space, p, name=f"{base.name}~pert{i}")
        for i, p in enumerate(perms))
    return PerturbationFamily(base, pts, systems)


@dataclass(frozen=True)
class PerturbationVerdict:
    name: str
    status: str                 # "ok" | "failed" | "skipped"
    conjugacy: object
    note: str = ""


@dataclass(frozen=True)
class StablePointReport:
    result: bool
    point: object
    eps: Fraction
    delta: Fraction
    entries: tuple

    def __bool__(self):
        return self.result


def verify_topologically_stable_point(f, x, eps, delta, perturbations, *,
                                      expansivity_c=None, eta=None):
    """Does every admissible perturbation admit a verified semiconjugacy at x?

    Perturbations beyond the delta bound are recorded as skipped, not
    failed; the verdict quantifies over the admissible ones only.
    """
    eps, delta = as_rational(eps), as_rational(delta)
    if isinstance(perturbations, PerturbationFamily):
        perturbations = perturbations.systems
    entries, ok = [], True
    for g in perturbations:
        fg, gg, _ = _common_ground(f, g)
        gap = c0_distance(fg, gg)
        if gap > delta:
            entries.append(PerturbationVerdict(
                g.name, "skipped", None,
                f"c0 distance {format_rational(gap)} exceeds delta"))
            continue
        res = build_conjugacy(f, g, x, eps, delta,
                              expansivity_c=expansivity_c, eta=eta)
        entries.append(PerturbationVerdict(
            g.name, "ok" if res.success else "failed", res,
            "" if res.success else res.failed_step))
        ok = ok and res.success
    return StablePointReport(ok, x, eps, delta, tuple(entries))


# -- delta-isometry search ---------------------------------------------------


@dataclass(frozen=True)
class IsometryPair:
    i_map: tuple                # X index -> Y index
    j_map: tuple                # Y index -> X index
    delta: Fraction
    i_distortion: Fraction
    i_density: Fraction
    i_commutation: Fraction
    j_distortion: Fraction
    j_density: Fraction
    j_commutation: Fraction

    @property
    def score(self) -> Fraction:
        return max(self.i_distortion, self.i_density, self.i_commutation,
                   self.j_distortion, self.j_density, self.j_commutation)


def _clause_values(m, src, dst, fperm, gperm):
    """(distortion, image density defect, commutation defect) of one map."""
    dist = distortion(m, src, dst)
    density = hausdorff_distance(dst, sorted(set(m)), range(dst.n))
    comm = max(dst.table[gperm[m[u]]][m[fperm[u]]] for u in range(src.n))
    return dist, density, comm


def _orbit_chain_order(perm):
    """Carrier indices listed cycle by cycle, each point after its preimage."""
    seen, order = set(), []
    for s in range(len(perm)):
        cur = s
        while cur not in seen:
            seen.add(cur)
            order.append(cur)
            cur = perm[cur]
    return order


class _MapSearch:
    """Branch-and-bound enumeration of maps with all clauses strictly below delta.

    Assignments follow f-orbit chains so the commutation clause prunes
    each new image to a ball around g(previous image); the distortion
    clause prunes against every assigned point. Both partial quantities
    are monotone under extension, so pruning is admissible. Image
    density is checked at the leaves.
    """

    def __init__(self, src, dst, fperm, gperm, delta, budget):
        self.src, self.dst = src, dst
        self.fperm, self.gperm = fperm, gperm
        self.finv = [0] * len(fperm)
        for u, v in enumerate(fperm):
            self.finv[v] = u
        self.delta = delta
        self.budget = budget
        self.nodes = 0
        self.complete = True
        self.order = _orbit_chain_order(fperm)

    def run(self, limit=None):
        found = []
        image = [None] * self.src.n
        try:
            self._place(0, image, found, limit)
        except _SearchStop:
            pass
        return found

    def _place(self, t, image, found, limit):
        if self.nodes > self.budget:
            self.complete = False
            raise _SearchStop
        if t == self.src.n:
            density = hausdorff_distance(
                self.dst, sorted(set(image)), range(self.dst.n))
            if density < self.delta:
                found.append(tuple(image))
                if limit is not None and len(found) >= limit:
                    raise _SearchStop
            return
        x = self.order[t]
        fx, px = self.fperm[x], self.finv[x]
        for v in range(self.dst.n):
            self.nodes += 1
            if self.nodes > self.budget:
                self.complete = False
                raise _SearchStop
            if fx == x:
                if self.dst.table[self.gperm[v]][v] >= self.delta:
                    continue
            else:
                if px != x and image[px] is not None and \
                        self.dst.table[self.gperm[image[px]]][v] >= self.delta:
                    continue
                if image[fx] is not None and \
                        self.dst.table[self.gperm[v]][image[fx]] >= self.delta:
                    continue
            if not self._distortion_ok(x, v, image):
                continue
            image[x] = v
            self._place(t + 1, image, found, limit)
            image[x] = None

    def _distortion_ok(self, x, v, image):
        for y, w in enumerate(image):
            if w is None or y == x:
                continue
            if abs(self.dst.table[v][w] - self.src.table[x][y]) >= self.delta:
                return False
        return True


class _SearchStop(Exception):
    pass


def _one_sided_maps(src, dst, fperm, gperm, delta, budget, limit=None):
    search = _MapSearch(src, dst, fperm, gperm, delta, budget)
    maps = search.run(limit)
    return maps, search.complete, search.nodes


@dataclass(frozen=True)
class IsometrySearch:
    pairs: tuple
    complete: bool
    delta: Fraction

    def __len__(self):
        return len(self.pairs)


def _make_pair(i_map, j_map, delta, Xs, Ys, fperm, gperm) -> IsometryPair:
    i_d, i_h, i_c = _clause_values(i_map, Xs, Ys, fperm, gperm)
    j_d, j_h, j_c = _clause_values(j_map, Ys, Xs, gperm, fperm)
    return IsometryPair(tuple(i_map), tuple(j_map), delta,
                        i_d, i_h, i_c, j_d, j_h, j_c)


def search_delta_isometries(X, Y, delta, budget=None) -> IsometrySearch:
    """Every delta-isometry pair (i: X->Y, j: Y->X), budget permitting.

    The four clauses split between the two maps, so both directions are
    searched independently and the results crossed. A capped search or
    pair list is flagged incomplete.
    """
    delta = as_rational(delta)
    if delta <= 0:
        raise PreconditionError("delta must be positive")
    budget = DEFAULT_SEARCH_BUDGET if budget is None else budget
    Xs, _ = materialize(X)
    Ys, _ = materialize(Y)
    i_maps, i_done, _ = _one_sided_maps(Xs.space, Ys.space, Xs.perm, Ys.perm,
                                        delta, budget)
    j_maps, j_done, _ = _one_sided_maps(Ys.space, Xs.space, Ys.perm, Xs.perm,
                                        delta, budget)
    complete = i_done and j_done
    if len(i_maps) * len(j_maps) > MAX_REPORTED_PAIRS:
        complete = False
    pairs = []
    for im in i_maps:
        if len(pairs) >= MAX_REPORTED_PAIRS:
            break
        for jm in j_maps:
            if len(pairs) >= MAX_REPORTED_PAIRS:
                break
            pairs.append(_make_pair(im, jm, delta, Xs.space, Ys.space,
                                    Xs.perm, Ys.perm))
    return IsometrySearch(tuple(pairs), complete, delta)


def first_delta_isometry_pair(X, Y, delta, budget=None):
    """One certifying pair (or None); second value reports completeness."""
    delta = as_rational(delta)
    budget = DEFAULT_SEARCH_BUDGET if budget is None else budget
    Xs, _ = materialize(X)
    Ys, _ = materialize(Y)
    if Xs.space.n == Ys.space.n:
        ident = tuple(range(Xs.space.n))
        pair = _make_pair(ident, ident, delta, Xs.space, Ys.space,
                          Xs.perm, Ys.perm)
        if pair.score < delta:
            return pair, True
    i_maps, i_done, _ = _one_sided_maps(Xs.space, Ys.space, Xs.perm, Ys.perm,
                                        delta, budget, limit=1)
    if not i_maps:
        return None, i_done
    j_maps, j_done, _ = _one_sided_maps(Ys.space, Xs.space, Ys.perm, Xs.perm,
                                        delta, budget, limit=1)
    if not j_maps:
        return None, j_done
    return _make_pair(i_maps[0], j_maps[0], delta, Xs.space, Ys.space,
                      Xs.perm, Ys.perm), True


# -- exact isomorphism and GH0 bounds ---------------------------------------


def find_exact_isomorphism(X, Y):
    """Distance-preserving bijection with exact commutation, or None.

    Choosing the image of one point per f-cycle forces the whole cycle,
    so the search branches only over cycle representatives.
    """
    Xs, xpts = materialize(X)
    Ys, ypts = materialize(Y)
    n = Xs.space.n
    if n != Ys.space.n:
        return None
    fperm, gperm = Xs.perm, Ys.perm
    cycles = []
    seen = set()
    for s in range(n):
        if s in seen:
            continue
        cyc, cur = [], s
        while cur not in seen:
            seen.add(cur)
            cyc.append(cur)
            cur = fperm[cur]
        cycles.append(tuple(cyc))
    g_period = [None] * n
    for s in range(n):
        if g_period[s] is not None:
            continue
        cyc, cur = [], s
        while not cyc or cur != s:
            cyc.append(cur)
            cur = gperm[cur]
        for v in cyc:
            g_period[v] = len(cyc)

    image = [None] * n
    used = [False] * n

    def assign_cycle(ci):
        if ci == len(cycles):
            return True
        cyc = cycles[ci]
        for y0 in range(n):
            if used[y0] or g_period[y0] != len(cyc):
                continue
            trial, cur, ok = [], y0, True
            for x in cyc:
                trial.append((x, cur))
                cur = gperm[cur]
            for x, y in trial:
                if used[y]:
                    ok = False
                    break
                for w, z in enumerate(image):
                    if z is not None and Ys.space.table[y][z] != Xs.space.table[x][w]:
                        ok = False
                        break
                if not ok:
                    break
                image[x] = y
                used[y] = True
            else:
                if all(Ys.space.table[image[a]][image[b]] == Xs.space.table[a][b]
                       for a in cyc for b in cyc) and assign_cycle(ci + 1):
                    return True
                ok = False
            for x, y in trial:
                if image[x] == y:
                    image[x] = None
                    used[y] = False
        return False

    if assign_cycle(0):
        return {xpts[a]: ypts[image[a]] for a in range(n)}
    return None


@dataclass(frozen=True)
class GHBounds:
    lower: Fraction
    upper: Fraction
    complete: bool
    witness: object             # IsometryPair certifying the upper bound

    def __iter__(self):
        return iter((self.lower, self.upper))

    def __eq__(self, other):
        if isinstance(other, tuple):
            return (self.lower, self.upper) == other
        if isinstance(other, GHBounds):
            return (self.lower, self.upper) == (other.lower, other.upper)
        return NotImplemented


def _grid_above(value, step) -> Fraction:
    """Least multiple of step strictly above value."""
    k = value / step
    floor = k.numerator // k.denominator
    return step * (floor + 1)


def gh_distance_bounds(X, Y, budget=None, step=Fraction(1, 128)) -> GHBounds:
    """Dyadic-grid bounds with lower <= d_GH0(X, Y) <= upper.

    An exact isomorphism collapses the bounds to (0, 0). Otherwise a
    found pair admits every delta above its worst clause value, giving
    the upper bound; the lower bound rises only on grid points where a
    complete search proves no pair exists. Exhausted budgets leave the
    bounds valid but wider, flagged via `complete`.
    """
    budget = DEFAULT_SEARCH_BUDGET if budget is None else budget
    step = as_rational(step)
    if find_exact_isomorphism(X, Y) is not None:
        return GHBounds(ZERO, ZERO, True, None)
    Xs, _ = materialize(X)
    Ys, _ = materialize(Y)
    diameter = max(max(max(row) for row in Xs.space.table),
                   max(max(row) for row in Ys.space.table))
    start = diameter + 1
    pair, _ = first_delta_isometry_pair(X, Y, start, budget)
    if pair is None:
        # even the coarsest scale found nothing within budget
        return GHBounds(ZERO, start, False, None)
    best = pair
    hi = _grid_above(best.score, step)
    lo = ZERO
    complete = True
    while hi - lo > step:
        mid = (lo + hi) / 2
        found, done = first_delta_isometry_pair(X, Y, mid, budget)
        if found is not None:
            if found.score < best.score:
                best = found
            hi = min(_grid_above(best.score, step), mid)
        elif done:
            lo = mid
        else:
            complete = False
            break
    return GHBounds(lo, hi, complete, best)


# -- GH-stable points ---------------------------------------------------------


@dataclass(frozen=True)
class CandidateVerdict:
    name: str
    status: str                 # "pass" | "vacuous" | "fail" | "skipped"
    preimages: tuple
    detail: str = ""


@dataclass(frozen=True)
class GHStableReport:
    result: bool
    point: object
    eps: Fraction
    delta: Fraction
    entries: tuple

    def __bool__(self):
        return self.result


def gh_stable_point_check(f, x, eps, delta, candidates, budget=None, *,
                          eta=None) -> GHStableReport:
    """Stable-point check against GH-near systems.

    Each candidate must be certified delta-near by a delta-isometry
    pair; its j then selects the preimages of x, and every preimage
    orbit must admit a traced conjugacy staying within eps of j.
    Candidates without a certificate are skipped, an empty preimage is
    the recorded vacuous pass.
    """
    eps, delta = as_rational(eps), as_rational(delta)
    eta = eps if eta is None else as_rational(eta)
    Xs, xpts = materialize(f)
    xi = xpts.index(x)
    entries, ok = [], True
    for cand in candidates:
        pair, settled = first_delta_isometry_pair(f, cand, delta, budget)
        if pair is None:
            entries.append(CandidateVerdict(
                cand.name, "skipped", (),
                "no certifying isometry pair" if settled
                else "certificate search exhausted its budget"))
            continue
        Ys, ypts = materialize(cand)
        pre = tuple(y for y in range(Ys.space.n) if pair.j_map[y] == xi)
        if not pre:
            entries.append(CandidateVerdict(
                cand.name, "vacuous", (), "j never hits the point"))
            continue
        failures = []
        for y in pre:
            verdict = _gh_trace(Xs, Ys, pair.j_map, y, eta, eps)
            if verdict is not None:
                failures.append(f"{point_label(ypts[y])}: {verdict}")
        if failures:
            ok = False
            entries.append(CandidateVerdict(
                cand.name, "fail", tuple(ypts[y] for y in pre),
                "; ".join(failures)))
        else:
            entries.append(CandidateVerdict(
                cand.name, "pass", tuple(ypts[y] for y in pre),
                f"{len(pre)} preimage orbit(s) traced within "
                f"{format_rational(eta)}"))
    return GHStableReport(ok, x, eps, delta, tuple(entries))


def _gh_trace(Xs, Ys, j_map, y, eta, eps):
    """Trace the j-image of the g-orbit of y; None on success, else reason.

    The conjugacy h(g^n y) = f^n z is rebuilt explicitly and its
    closeness to j (strict, below eps) and commutation with the maps
    are verified independently of how the tracer was found.
    """
    gperm = Ys.perm
    orb, cur = [], y
    while not orb or cur != y:
        orb.append(cur)
        cur = gperm[cur]
    P = len(orb)
    window = [j_map[v] for v in orb]
    horizon = lcm(_perm_order(Xs.perm), P)
    fperm = Xs.perm
    table = Xs.space.table
    tracers = []
    for z in range(Xs.space.n):
        cur, okz = z, True
        for n in range(horizon):
            if table[cur][window[n % P]] >= eta:
                okz = False
                break
            cur = fperm[cur]
        if okz:
            tracers.append(z)
    if not tracers:
        return "no orbit of f traces the transported pseudo-orbit"
    z = tracers[0]
    cur = z
    for _ in range(P):
        cur = fperm[cur]
    if cur != z:
        return "tracer does not close up over the orbit period"
    h, img = {}, z
    for v in orb:
        h[v] = img
        img = fperm[img]
    if any(table[h[v]][j_map[v]] >= eps for v in orb):
        return "conjugacy image strays to eps or beyond from j"
    if any(fperm[h[v]] != h[gperm[v]] for v in orb):
        return "conjugacy fails to commute with the maps"
    return None


def _perm_order(perm) -> int:
    order, seen = 1, set()
    for s in range(len(perm)):
        if s in seen:
            continue
        length, cur = 0, s
        while True:
            cur = perm[cur]
            length += 1
            seen.add(cur)
            if cur == s:
                break
        order = lcm(order, length)
    return order


# -- conjugation transport ----------------------------------------------------


def transport_under_conjugacy(h, point_set, which=None) -> frozenset:
    """Image of a classified point set under the carrier bijection h."""
    move = h if callable(h) else h.__getitem__
    return frozenset(move(p) for p in point_set)


def transported_constant(system, h, c) -> Fraction:
    """A constant d with d(h(a), h(b)) > d whenever d(a, b) > c.

    The largest dyadic step strictly below the minimum separation of
    h-images over c-separated pairs; h need not be an isometry.
    """
    c = as_rational(c)
    move = h if callable(h) else h.__getitem__
    pts = system.points()
    gaps = [system.dist(move(a), move(b))
            for i, a in enumerate(pts) for b in pts[i + 1:]
            if system.dist(a, b) > c]
    if not gaps:
        raise PreconditionError("no pair separates beyond c")
    return dyadic_below(min(gaps))

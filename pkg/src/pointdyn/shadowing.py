"""Pseudo-orbit machinery and shadowable-point deciders.

A delta-pseudo-orbit is a walk in the graph whose edges (u, v) satisfy
d(f(u), v) < delta (strict). Tracing asks for a single true orbit
staying strictly within eps of every entry. The windowed decider
enumerates all finite windows through a point; the exact decider
settles the bi-infinite quantifier by propagating candidate tracer
sets to their fixpoints: along any infinite pseudo-orbit the set of
surviving time-zero tracers is non-increasing, hence eventually
constant, and the two directions of time constrain tracers
independently, so the verdict only depends on the finitely many
reachable limit sets of each half.
"""

from dataclasses import dataclass
from fractions import Fraction
from math import lcm

from .errors import (PreconditionError, ResourceBudgetError,
                     UnsupportedBackendError)
from .measures import measure_of
from .rationals import as_rational
from .shiftspace import EPPoint, shift_metric
from .systems import materialize, sorted_points, system_ball

DEFAULT_WINDOW_BUDGET = 10 ** 6


@dataclass(frozen=True)
class PseudoOrbitGraph:
    delta: Fraction
    successors: dict      # point -> tuple of admissible next points

    def out_degree(self, u) -> int:
        return len(self.successors[u])


@dataclass(frozen=True)
class PseudoOrbitWindow:
    entries: tuple        # x_{-N} .. x_{N}
    delta: Fraction

    @property
    def radius(self) -> int:
        return (len(self.entries) - 1) // 2

    @property
    def center(self):
        return self.entries[self.radius]

    def entry(self, n: int):
        return self.entries[n + self.radius]


@dataclass(frozen=True)
class TracerSet:
    points: frozenset
    eps: Fraction

    def __bool__(self):
        return bool(self.points)


def pseudo_orbit_graph(system, delta) -> PseudoOrbitGraph:
    delta = as_rational(delta)
    if delta <= 0:
        raise PreconditionError("pseudo-orbit gap must be positive")
    if not system.finite:
        raise UnsupportedBackendError(
            f"{system.backend} carrier has no finite pseudo-orbit graph")
    pts = system.points()
    succ = {u: tuple(v for v in pts if system.dist(system.image(u), v) < delta)
            for u in pts}
    return PseudoOrbitGraph(delta, succ)


def _path_counts(graph, length, pts):
    """counts[u] = number of graph walks of `length` steps starting at u."""
    counts = {u: 1 for u in pts}
    for _ in range(length):
        counts = {u: sum(counts[v] for v in graph.successors[u]) for u in pts}
    return counts


def _reverse(graph, pts):
    rev = {u: [] for u in pts}
    for u in pts:
        for v in graph.successors[u]:
            rev[v].append(u)
    return PseudoOrbitGraph(graph.delta, {u: tuple(vs) for u, vs in rev.items()})


def count_pseudo_orbits(system, x, delta, N) -> int:
    graph = pseudo_orbit_graph(system, delta)
    pts = system.points()
    fwd = _path_counts(graph, N, pts)[x]
    bwd = _path_counts(_reverse(graph, pts), N, pts)[x]
    return fwd * bwd


def enumerate_pseudo_orbits(system, x, delta, N, budget=None):
    """All delta-pseudo-orbit windows x_{-N}..x_N with x_0 = x.

    Counts first and refuses beyond the window budget so runtimes stay
    predictable; PDL_BUDGET / the budget argument raise the ceiling.
    """
    budget = DEFAULT_WINDOW_BUDGET if budget is None else budget
    total = count_pseudo_orbits(system, x, delta, N)
    if total > budget:
        raise ResourceBudgetError(
            f"{total} pseudo-orbit windows exceed the budget {budget}",
            requested=total, budget=budget)
    graph = pseudo_orbit_graph(system, delta)
    rev = _reverse(graph, system.points())
    return (PseudoOrbitWindow(tuple(reversed(back)) + (x,) + tuple(out), graph.delta)
            for back in _walks(rev, x, N) for out in _walks(graph, x, N))


def _walks(graph, start, length):
    """All walks of `length` steps from start, start excluded from output."""
    if length == 0:
        yield ()
        return
    for v in graph.successors[start]:
        for rest in _walks(graph, v, length - 1):
            yield (v,) + rest


def trace(system, window: PseudoOrbitWindow, eps) -> TracerSet:
    """Exact tracer set {z : d(f^n z, x_n) < eps for every window index}."""
    eps = as_rational(eps)
    if not system.finite:
        raise UnsupportedBackendError(
            "enumerative tracing needs a finite carrier; "
            "the shift backend traces by splicing")
    N = window.radius
    found = []
    for z in system.points():
        cur = z
        for _ in range(N):
            cur = system.preimage(cur)
        ok = True
        for n in range(-N, N + 1):
            if system.dist(cur, window.entry(n)) >= eps:
                ok = False
                break
            cur = system.image(cur)
        if ok:
            found.append(z)
    return TracerSet(frozenset(found), eps)


@dataclass(frozen=True)
class WindowedShadowReport:
    result: bool
    eps: Fraction
    delta: Fraction
    radius: int
    windows_checked: int
    worst_window: PseudoOrbitWindow
    worst_tracer_count: int

    def __bool__(self):
        return self.result


def shadowable_windowed(system, x, eps, delta, N, budget=None) -> WindowedShadowReport:
    """Every window of radius N through x traceable at eps?

    The worst window (fewest tracers; the failing one on False) is
    reported as the concrete witness.
    """
    eps = as_rational(eps)
    checked = 0
    worst, worst_count = None, None
    for window in enumerate_pseudo_orbits(system, x, delta, N, budget):
        checked += 1
        tr = trace(system, window, eps)
        if worst_count is None or len(tr.points) < worst_count:
            worst, worst_count = window, len(tr.points)
        if not tr.points:
            return WindowedShadowReport(False, eps, as_rational(delta), N,
                                        checked, window, 0)
    return WindowedShadowReport(True, eps, as_rational(delta), N,
                                checked, worst, worst_count or 0)


# -- exact decider --------------------------------------------------------


class _Tables:
    """Materialized index-level view of a finite system for the decider."""

    def __init__(self, system):
        explicit, pts = materialize(system)
        self.pts = pts
        self.index = {p: i for i, p in enumerate(pts)}
        self.dist = explicit.space.table
        self.perm = explicit.perm
        self.inv = explicit.inv
        self.order = _permutation_order(explicit.perm)
        # powers[k][z] = f^k(z), k modulo the permutation order
        powers = [list(range(len(pts)))]
        for _ in range(self.order - 1):
            powers.append([self.perm[z] for z in powers[-1]])
        self.powers = powers


def _permutation_order(perm) -> int:
    order = 1
    seen = set()
    for start in range(len(perm)):
        if start in seen:
            continue
        length, cur = 0, start
        while True:
            cur = perm[cur]
            length += 1
            seen.add(cur)
            if cur == start:
                break
        order = lcm(order, length)
    return order


def _half_limit_sets(tab: _Tables, x: int, eps, delta, forward: bool):
    """Limit candidate-tracer sets of one time direction.

    States are (current point, surviving time-zero tracer set, exponent
    mod order). Returns the set of tracer sets that persist along some
    infinite pseudo-orbit half starting at x.
    """
    n = len(tab.pts)
    rng = range(n)
    if forward:
        succ = [[v for v in rng if tab.dist[tab.perm[u]][v] < delta] for u in rng]
    else:
        succ = [[w for w in rng if tab.dist[tab.perm[w]][u] < delta] for u in rng]
    kstep = 1 if forward else -1
    start_set = frozenset(z for z in rng if tab.dist[z][x] < eps)
    start = (x, start_set, 0)
    edges = {}
    stack = [start]
    while stack:
        state = stack.pop()
        if state in edges:
            continue
        u, A, k = state
        k2 = (k + kstep) % tab.order
        pw = tab.powers[k2]
        outs = []
        for v in succ[u]:
            A2 = frozenset(z for z in A if tab.dist[pw[z]][v] < eps)
            outs.append((v, A2, k2))
        edges[state] = outs
        stack.extend(s for s in outs if s not in edges)
    limits = set()
    by_set = {}
    for state in edges:
        by_set.setdefault(state[1], []).append(state)
    for A, layer in by_set.items():
        if _layer_has_infinite_path(layer, edges, A):
            limits.add(A)
    return limits


def _layer_has_infinite_path(layer, edges, A) -> bool:
    """Does the A-preserving subgraph on `layer` contain an infinite walk?

    Iteratively trimming states with no A-preserving successor leaves
    exactly the states from which the set survives forever.
    """
    layer = set(layer)
    changed = True
    while changed and layer:
        changed = False
        for state in list(layer):
            if not any(nxt in layer for nxt in edges[state] if nxt[1] == A):
                layer.discard(state)
                changed = True
    return bool(layer)


def shadowable_exact(system, x, eps, delta) -> bool:
    """Is every bi-infinite delta-pseudo-orbit through x eps-traceable?

    Exact: forward and backward halves of a pseudo-orbit are
    independent, so the quantifier reduces to checking that every
    forward limit tracer set meets every backward one.
    """
    eps, delta = as_rational(eps), as_rational(delta)
    if not system.finite:
        raise UnsupportedBackendError(
            "the exact decider needs a finite carrier")
    tab = _Tables(system)
    xi = tab.index[x]
    fwd = _half_limit_sets(tab, xi, eps, delta, forward=True)
    if frozenset() in fwd:
        return False
    bwd = _half_limit_sets(tab, xi, eps, delta, forward=False)
    if frozenset() in bwd:
        return False
    return all(a & b for a in fwd for b in bwd)


def shadowable_exact_neighborhood(system, x, eps, delta) -> bool:
    """Every pseudo-orbit through the open delta-ball around x traceable."""
    return all(shadowable_exact(system, x0, eps, delta)
               for x0 in sorted_points(system_ball(system, x, delta)))


# -- shift backend: constructive splice tracer ----------------------------


def splice_trace_shift(system, window, m: int) -> EPPoint:
    """Tracer for a shift pseudo-orbit window with gap below 2^-m.

    The tracer copies each entry's time-zero symbol inside the window
    and continues with the end entries' own tails outside it; the gap
    condition makes consecutive entries agree on a 2m-wide block, so
    the splice stays within 2^-(m+1) of every entry — strictly below
    the 2^-m+1 tracing target.
    """
    entries = list(window.entries if isinstance(window, PseudoOrbitWindow)
                   else window)
    if m < 0:
        raise PreconditionError("agreement depth must be nonnegative")
    gap = Fraction(1, 2 ** m)
    for t in range(len(entries) - 1):
        d = shift_metric(entries[t].shift_by(1), entries[t + 1])
        if d >= gap:
            raise PreconditionError(
                f"step {t} has gap {d}, not below 1/2^{m}")
    N = (len(entries) - 1) // 2
    if len(entries) != 2 * N + 1:
        raise PreconditionError("window must have odd length x_-N..x_N")
    first, last = entries[0], entries[-1]
    lo = -N + min(first.offset, 0)
    hi = N + max(last.offset + len(last.center), 0)
    values = []
    for pos in range(lo, hi + 1):
        if pos < -N:
            values.append(first.value(pos + N))
        elif pos <= N:
            values.append(entries[pos + N].value(0))
        else:
            values.append(last.value(pos - N))
    L = len(first.left)
    left = tuple(first.left[(j + lo + N - first.offset) % L] for j in range(L))
    R = len(last.right)
    end_anchor = last.offset + len(last.center)
    right = tuple(last.right[(j + hi + 1 - N - end_anchor) % R] for j in range(R))
    return EPPoint(left, values, right, lo)


# -- measure-restricted variant -------------------------------------------


@dataclass(frozen=True)
class MuShadowReport:
    result: bool
    through_points: tuple
    failing_point: object = None

    def __bool__(self):
        return self.result


def mu_shadowable_at(system, mu, x, eps, delta, B) -> MuShadowReport:
    """Every pseudo-orbit through B intersected with B(x, delta) traceable.

    B must carry full measure; the quantifier then decomposes over the
    finitely many admissible through-points.
    """
    if not system.finite:
        raise UnsupportedBackendError(
            "measure-restricted shadowing needs a finite carrier")
    pts = system.points()
    outside = frozenset(p for p in pts if p not in set(B))
    if measure_of(mu, outside) != 0:
        raise PreconditionError("B must have full measure")
    ball = system_ball(system, x, delta)
    through = sorted_points(set(B) & set(ball))
    for x0 in through:
        if not shadowable_exact(system, x0, eps, delta):
            return MuShadowReport(False, tuple(through), x0)
    return MuShadowReport(True, tuple(through))

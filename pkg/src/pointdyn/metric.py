"""Finite metric spaces over exact rationals.

A FiniteMetricSpace is a full symmetric distance table on points
0..n-1. All axioms are decidable by exact comparison, so
validate_metric returns witnesses instead of tolerances. Set-level
operations (balls, set distance, Hausdorff distance) take index
iterables and return exact values; on finite spaces inf and sup are
min and max.
"""

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

from .errors import MalformedInputError, PreconditionError
from .rationals import ZERO, as_rational, format_rational, parse_rational


@dataclass(frozen=True)
class MetricViolation:
    axiom: str          # "shape" | "identity" | "positivity" | "symmetry" | "triangle"
    witness: tuple
    detail: str


class FiniteMetricSpace:
    """Immutable distance table; construction does not validate axioms."""

    __slots__ = ("table", "n")

    def __init__(self, table):
        rows = tuple(tuple(as_rational(v) for v in row) for row in table)
        self.table = rows
        self.n = len(rows)

    def dist(self, i: int, j: int) -> Fraction:
        return self.table[i][j]

    def points(self):
        return range(self.n)

    def __eq__(self, other):
        return isinstance(other, FiniteMetricSpace) and self.table == other.table

    def __hash__(self):
        return hash(self.table)

    def __repr__(self):
        return f"FiniteMetricSpace(n={self.n})"


def discrete_space(n: int, gap=1) -> FiniteMetricSpace:
    g = as_rational(gap)
    return FiniteMetricSpace(
        [[ZERO if i == j else g for j in range(n)] for i in range(n)]
    )


def space_from_pairs(n: int, pairs) -> FiniteMetricSpace:
    """Build from {(i, j): distance} with i < j; missing pairs are an error."""
    table = [[ZERO] * n for _ in range(n)]
    seen = set()
    for (i, j), v in pairs.items():
        if not (0 <= i < j < n):
            raise MalformedInputError(f"bad pair ({i},{j}) for n={n}")
        q = as_rational(v)
        table[i][j] = q
        table[j][i] = q
        seen.add((i, j))
    missing = {(i, j) for i in range(n) for j in range(i + 1, n)} - seen
    if missing:
        raise MalformedInputError(f"missing distances for pairs {sorted(missing)[:4]}")
    return FiniteMetricSpace(table)


def validate_metric(space: FiniteMetricSpace):
    """Return all axiom violations, each with an exact witness.

    Checks, in order: table shape, d(x,x) = 0, positivity off the
    diagonal, symmetry, and every triangle d(i,k) <= d(i,j) + d(j,k).
    """
    out = []
    n = space.n
    for i, row in enumerate(space.table):
        if len(row) != n:
            out.append(MetricViolation("shape", (i,), f"row {i} has length {len(row)}, want {n}"))
    if out:
        return out
    for i in range(n):
        if space.table[i][i] != 0:
            out.append(MetricViolation("identity", (i,),
                                       f"d({i},{i}) = {format_rational(space.table[i][i])}"))
    for i in range(n):
        for j in range(i + 1, n):
            if space.table[i][j] != space.table[j][i]:
                out.append(MetricViolation("symmetry", (i, j),
                                           "d(i,j) != d(j,i)"))
            if space.table[i][j] <= 0:
                out.append(MetricViolation("positivity", (i, j),
                                           f"d({i},{j}) = {format_rational(space.table[i][j])}"))
    for i, j, k in combinations(range(n), 3):
        for a, b, c in ((i, j, k), (j, i, k), (i, k, j)):
            # d(b,c) <= d(b,a) + d(a,c), a is the middle point
            if space.table[b][c] > space.table[b][a] + space.table[a][c]:
                out.append(MetricViolation(
                    "triangle", (b, a, c),
                    f"d({b},{c}) > d({b},{a}) + d({a},{c})"))
    return out


def ball(space: FiniteMetricSpace, x: int, radius, closed: bool = False):
    """Indices within radius of x; strict by default, closed on request."""
    r = as_rational(radius)
    if closed:
        return frozenset(y for y in space.points() if space.table[x][y] <= r)
    return frozenset(y for y in space.points() if space.table[x][y] < r)


def set_distance(space: FiniteMetricSpace, a, b) -> Fraction:
    """min over pairs; both sets must be nonempty."""
    a, b = tuple(a), tuple(b)
    if not a or not b:
        raise PreconditionError("set_distance needs nonempty sets")
    return min(space.table[i][j] for i in a for j in b)


def hausdorff_distance(space: FiniteMetricSpace, a, b) -> Fraction:
    a, b = tuple(a), tuple(b)
    if not a or not b:
        raise PreconditionError("hausdorff_distance needs nonempty sets")
    d_ab = max(min(space.table[i][j] for j in b) for i in a)
    d_ba = max(min(space.table[i][j] for i in a) for j in b)
    return max(d_ab, d_ba)


def _as_total_map(mapping, src_n: int):
    if isinstance(mapping, dict):
        m = mapping
    else:
        m = {i: v for i, v in enumerate(mapping)}
    missing = [i for i in range(src_n) if i not in m]
    if missing:
        raise PreconditionError(f"map not total on source carrier, missing {missing[:4]}")
    return m


def distortion(mapping, src: FiniteMetricSpace, dst: FiniteMetricSpace) -> Fraction:
    """sup over pairs of |d_dst(f(a), f(b)) - d_src(a, b)|, exact."""
    m = _as_total_map(mapping, src.n)
    worst = ZERO
    for a in range(src.n):
        for b in range(a + 1, src.n):
            gap = abs(dst.table[m[a]][m[b]] - src.table[a][b])
            if gap > worst:
                worst = gap
    return worst


def is_delta_isometry(mapping, src: FiniteMetricSpace, dst: FiniteMetricSpace, delta):
    """Check max(image Hausdorff gap, distortion) < delta, strictly.

    Returns (verdict, detail). The detail names the violated clause
    with its exact value when the verdict is False, and carries both
    values when True.
    """
    d = as_rational(delta)
    m = _as_total_map(mapping, src.n)
    dist = distortion(m, src, dst)
    image = sorted(set(m.values()))
    density = hausdorff_distance(dst, image, tuple(range(dst.n)))
    if dist >= d:
        return False, f"distortion {format_rational(dist)} >= delta"
    if density >= d:
        return False, f"image not delta-dense: hausdorff {format_rational(density)} >= delta"
    return True, (f"distortion {format_rational(dist)}, "
                  f"image hausdorff {format_rational(density)}")


def load_metric_text(text: str) -> FiniteMetricSpace:
    """Parse the table format: header "metric n", then n(n-1)/2 lines "i j p/q"."""
    lines = [ln.split("#", 1)[0].strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln]
    if not lines or not lines[0].startswith("metric"):
        raise MalformedInputError("metric table must start with 'metric n'")
    head = lines[0].split()
    if len(head) != 2:
        raise MalformedInputError(f"bad metric header: {lines[0]!r}")
    try:
        n = int(head[1])
    except ValueError:
        raise MalformedInputError(f"bad metric size: {head[1]!r}") from None
    want = n * (n - 1) // 2
    body = lines[1:]
    if len(body) != want:
        raise MalformedInputError(f"metric table for n={n} needs {want} entries, got {len(body)}")
    pairs = {}
    for ln in body:
        parts = ln.split()
        if len(parts) != 3:
            raise MalformedInputError(f"bad metric entry: {ln!r}")
        i, j = int(parts[0]), int(parts[1])
        if not (0 <= i < j < n):
            raise MalformedInputError(f"bad index pair in entry: {ln!r}")
        if (i, j) in pairs:
            raise MalformedInputError(f"duplicate pair ({i},{j})")
        pairs[(i, j)] = parse_rational(parts[2])
    return space_from_pairs(n, pairs)


def dump_metric_text(space: FiniteMetricSpace) -> str:
    lines = [f"metric {space.n}"]
    for i in range(space.n):
        for j in range(i + 1, space.n):
            lines.append(f"{i} {j} {format_rational(space.table[i][j])}")
    return "\n".join(lines) + "\n"

"""Command-line front end.

Verbs load systems from stanza files (or ``bundled:<name>``), run the
classifiers and pipelines, and print one JSON report to stdout. Exit
codes: 0 clean pass, 1 property or clause failure, 2 usage/parse
problem, 3 exhausted resource budget. Timing goes to stderr so reports
stay byte-identical across runs.
"""

import argparse
import os
import sys
import time
from fractions import Fraction

from .bundled import (REGISTRY, bundled_measure, bundled_system, mixed_sample,
                      sampled_space, shift_probes)
from .errors import (MalformedInputError, PointdynError, PreconditionError,
                     ResourceBudgetError)
from .expansivity import (classify_points, expansive_point_at,
                          minimally_expansive_at, uniformly_expansive_at)
from .measures import (build_tracking_map, expansive_measure_check,
                       mu_expansive_points, tracking_commutes,
                       tracking_within_ball,
                       verify_strong_mu_topological_stability)
from .metric import validate_metric
from .rationals import dyadic_below, format_rational, parse_rational
from .report import assemble, label, labels, opt_rat, rat, render, table
from .shadowing import shadowable_exact, shadowable_windowed
from .shiftspace import parse_ep, shift_metric
from .stability import (build_conjugacy, gh_distance_bounds,
                        gh_stable_point_check)
from .systems import Satellite, materialize, point_label, sorted_points
from . import sysfile

DEFAULT_BUDGET_ENV = "PDL_BUDGET"


# -- input resolution --------------------------------------------------------


def _load(spec: str) -> sysfile.SystemFile:
    """Resolve a path or ``bundled:<name>`` to a SystemFile."""
    if spec.startswith("bundled:"):
        name = spec.split(":", 1)[1]
        system = bundled_system(name)
        if system.backend == "satellite":
            probes = system.probes
        elif system.backend == "shift":
            probes = shift_probes()
        else:
            probes = ()
        return sysfile.SystemFile(system, None, tuple(probes))
    if os.path.exists(spec):
        return sysfile.load_file(spec)
    if spec in REGISTRY:
        return _load(f"bundled:{spec}")
    raise MalformedInputError(f"no such file or bundled system: {spec!r}")


def parse_point(system, text: str):
    """Read a carrier point in the system's own notation."""
    t = text.strip()
    backend = system.backend
    if backend == "satellite":
        if t.startswith("q(") and t.endswith(")"):
            try:
                i, k, j = (int(v) for v in t[2:-1].split(","))
            except ValueError:
                raise MalformedInputError(f"satellite points read q(i,k,j): {text!r}") from None
            return Satellite(i, k, j)
        return parse_ep(t)
    if backend == "shift":
        return parse_ep(t)
    if t.startswith("(") and t.endswith(")"):
        try:
            return tuple(int(v) for v in t[1:-1].split(","))
        except ValueError:
            raise MalformedInputError(f"lattice pairs read (a,b): {text!r}") from None
    try:
        return int(t)
    except ValueError:
        raise MalformedInputError(f"not a carrier point: {text!r}") from None


def _scale(text, what):
    if text is None:
        raise MalformedInputError(f"missing required scale --{what}")
    try:
        return parse_rational(text)
    except MalformedInputError:
        raise MalformedInputError(f"--{what} must be a rational p/q, got {text!r}") from None


def _budget(args):
    if getattr(args, "budget", None) is not None:
        return args.budget
    env = os.environ.get(DEFAULT_BUDGET_ENV)
    return int(env) if env else None


def _probe_points(system, loaded: sysfile.SystemFile, args):
    pts = list(loaded.probes)
    for text in getattr(args, "probe", None) or ():
        pts.append(parse_point(system, text))
    return pts


# -- verbs --------------------------------------------------------------------


def cmd_validate(args):
    loaded = _load(args.system)
    system = loaded.system
    if system is None:
        raise MalformedInputError(f"{args.system!r} holds no system stanza")
    if system.finite:
        sample = list(system.points())
    else:
        sample = _probe_points(system, loaded, args)
        if system.backend == "satellite":
            sample.extend(system.satellite_points())
        if not sample:
            sample = mixed_sample(system)
    space = sampled_space(system, sample)
    violations = validate_metric(space)
    bijection = all(system.preimage(system.image(x)) == x for x in sample)
    results = {
        "sample_size": len(sample),
        "violations": [
            {"axiom": v.axiom,
             "witness": [point_label(sample[i]) for i in v.witness],
             "detail": v.detail}
            for v in violations
        ],
        "bijection_on_sample": bijection,
        "ok": not violations and bijection,
    }
    echo = {"system": args.system}
    return assemble("validate", echo, results, system), 0 if results["ok"] else 1


def cmd_classify(args):
    loaded = _load(args.system)
    system = loaded.system
    probe = _probe_points(system, loaded, args) or None
    echo = {"system": args.system, "variant": args.variant, "c": args.c,
            "eps": args.eps, "delta": args.delta, "measure": args.measure}
    if args.variant == "shadow":
        eps, delta = _scale(args.eps, "eps"), _scale(args.delta, "delta")
        if not system.finite:
            raise MalformedInputError(
                "the exact shadowing classifier needs a finite carrier")
        verdicts = {p: shadowable_exact(system, p, eps, delta)
                    for p in system.points()}
        points = [p for p, ok in verdicts.items() if ok]
        results = {
            "points": labels(points),
            "certificates": {label(p): {"result": ok}
                             for p, ok in verdicts.items()},
        }
        return assemble("classify", echo, results, system), 0
    c = _scale(args.c, "c")
    if args.variant == "mu-uniform":
        mu = _resolve_measure(args, loaded)
        points = mu_expansive_points(system, mu, c, probe=probe)
        results = {"points": labels(points)}
        return assemble("classify", echo, results, system), 0
    points = classify_points(system, args.variant, c, probe=probe)
    if system.finite:
        pool = system.points()
    else:
        pool = list(probe or ())
        if system.backend == "satellite":
            pool = pool + system.satellite_points()
    certificates = {}
    check = {"expansive": expansive_point_at, "uniform": uniformly_expansive_at,
             "minimal": minimally_expansive_at}[args.variant]
    for p in sorted_points(pool):
        verdict = check(system, p, c)
        entry = {"result": verdict.result}
        if verdict.counterexample:
            entry["counterexample"] = [label(q) for q in verdict.counterexample]
        if verdict.detail:
            entry["detail"] = verdict.detail
        certificates[label(p)] = entry
    results = {"points": labels(points), "certificates": certificates}
    return assemble("classify", echo, results, system), 0


def cmd_shadow(args):
    loaded = _load(args.system)
    system = loaded.system
    x = parse_point(system, args.x)
    eps, delta = _scale(args.eps, "eps"), _scale(args.delta, "delta")
    echo = {"system": args.system, "x": args.x, "eps": args.eps,
            "delta": args.delta, "window": args.window}
    if args.window is not None:
        rep = shadowable_windowed(system, x, eps, delta, args.window,
                                  budget=_budget(args))
        results = {
            "mode": "windowed",
            "result": rep.result,
            "radius": rep.radius,
            "windows_checked": rep.windows_checked,
        }
        if rep.worst_window is not None:
            results["worst_window"] = [label(p) for p in rep.worst_window.entries]
            results["worst_tracer_count"] = rep.worst_tracer_count
    else:
        ok = shadowable_exact(system, x, eps, delta)
        results = {"mode": "exact", "result": ok}
    return assemble("shadow", echo, results, system), 0 if results["result"] else 1


def cmd_conjugacy(args):
    f = _load(args.f).system
    g = _load(args.g).system
    x = parse_point(g, args.x)
    eps, delta = _scale(args.eps, "eps"), _scale(args.delta, "delta")
    c = parse_rational(args.c) if args.c else None
    eta = parse_rational(args.eta) if args.eta else None
    res = build_conjugacy(f, g, x, eps, delta, expansivity_c=c, eta=eta)
    results = {
        "success": res.success,
        "failed_step": res.failed_step,
        "domain": [label(p) for p in res.domain],
        "h": None if res.mapping is None else table(res.mapping),
        "residual": opt_rat(res.residual),
        "commutation": res.commutation_ok,
        "eta": rat(res.eta),
        "detail": res.detail,
    }
    echo = {"f": args.f, "g": args.g, "x": args.x, "eps": args.eps,
            "delta": args.delta, "c": args.c, "eta": args.eta}
    return (assemble("conjugacy", echo, results, f, extra_systems=(g,)),
            0 if res.success else 1)


def cmd_trackmap(args):
    f = _load(args.f).system
    g = _load(args.g).system if args.g else f
    x = parse_point(g, args.x)
    eta = _scale(args.eta, "eta")
    assignment = build_tracking_map(f, g, x, eta)
    within_ok, within_witness = tracking_within_ball(assignment, f)
    commute_ok, commute_witness = tracking_commutes(assignment, f, g)
    if assignment.rule == "identity":
        images = "identity"
    else:
        images = {label(u): labels(assignment.image_of(u))
                  for u in assignment.domain}
    results = {
        "eta": rat(assignment.eta),
        "domain": [label(p) for p in assignment.domain],
        "images": images,
        "within_ball": {"ok": within_ok,
                        "witness": None if within_witness is None
                        else label(within_witness)},
        "commutes": {"ok": commute_ok,
                     "witness": None if commute_witness is None
                     else label(commute_witness)},
        "ok": within_ok and commute_ok,
    }
    echo = {"f": args.f, "g": args.g, "x": args.x, "eta": args.eta}
    extra = (g,) if g is not f else ()
    return (assemble("trackmap", echo, results, f, extra_systems=extra),
            0 if results["ok"] else 1)


def _pair_payload(pair, xpts, ypts):
    if pair is None:
        return None
    return {
        "i": {label(xpts[a]): label(ypts[pair.i_map[a]])
              for a in range(len(xpts))},
        "j": {label(ypts[b]): label(xpts[pair.j_map[b]])
              for b in range(len(ypts))},
        "clauses": {
            "i_distortion": rat(pair.i_distortion),
            "i_density": rat(pair.i_density),
            "i_commutation": rat(pair.i_commutation),
            "j_distortion": rat(pair.j_distortion),
            "j_density": rat(pair.j_density),
            "j_commutation": rat(pair.j_commutation),
        },
        "score": rat(pair.score),
    }


def cmd_ghdist(args):
    X = _load(args.x_system).system
    Y = _load(args.y_system).system
    bounds = gh_distance_bounds(X, Y, budget=_budget(args))
    _, xpts = materialize(X)
    _, ypts = materialize(Y)
    results = {
        "lower": rat(bounds.lower),
        "upper": rat(bounds.upper),
        "complete": bounds.complete,
        "witness": _pair_payload(bounds.witness, xpts, ypts),
    }
    echo = {"x_system": args.x_system, "y_system": args.y_system,
            "budget": args.budget}
    return assemble("ghdist", echo, results, X, extra_systems=(Y,)), 0


def cmd_ghstable(args):
    f = _load(args.f).system
    x = parse_point(f, args.x)
    eps, delta = _scale(args.eps, "eps"), _scale(args.delta, "delta")
    eta = parse_rational(args.eta) if args.eta else None
    candidates = [_load(spec).system for spec in args.candidates]
    rep = gh_stable_point_check(f, x, eps, delta, candidates,
                                budget=_budget(args), eta=eta)
    results = {
        "result": rep.result,
        "entries": [
            {"candidate": e.name, "status": e.status,
             "preimages": [label(p) for p in e.preimages],
             "detail": e.detail}
            for e in rep.entries
        ],
    }
    echo = {"f": args.f, "x": args.x, "eps": args.eps, "delta": args.delta,
            "eta": args.eta, "candidates": list(args.candidates)}
    return (assemble("ghstable", echo, results, f, extra_systems=candidates),
            0 if rep.result else 1)


def _resolve_measure(args, loaded: sysfile.SystemFile):
    spec = getattr(args, "measure", None)
    if spec:
        if spec.startswith("bundled:"):
            return bundled_measure(spec.split(":", 1)[1])
        if os.path.exists(spec):
            measure = sysfile.load_file(spec).measure
            if measure is None:
                raise MalformedInputError(f"{spec!r} holds no measure stanza")
            return measure
        try:
            return bundled_measure(spec)
        except MalformedInputError:
            raise MalformedInputError(
                f"no such measure file or bundled measure: {spec!r}") from None
    if loaded.measure is not None:
        return loaded.measure
    raise MalformedInputError(
        "no measure: pass --measure or add a measure stanza to the system file")


def cmd_mustable(args):
    loaded = _load(args.f)
    f = loaded.system
    g = _load(args.g).system if args.g else f
    mu = _resolve_measure(args, loaded)
    x = parse_point(f, args.x)
    eps, delta = _scale(args.eps, "eps"), _scale(args.delta, "delta")
    eta = parse_rational(args.eta) if args.eta else None
    c = parse_rational(args.c) if args.c else None
    B = None
    if args.through:
        B = frozenset(parse_point(f, t) for t in args.through)
    rep = verify_strong_mu_topological_stability(
        f, mu, x, eps, delta, g, B, eta=eta, expansivity_c=c)
    results = {
        "result": rep.result,
        "eta": rat(rep.eta),
        "clauses": [{"name": cl.name, "result": cl.result, "detail": cl.detail}
                    for cl in rep.clauses],
    }
    echo = {"f": args.f, "g": args.g, "x": args.x, "eps": args.eps,
            "delta": args.delta, "eta": args.eta, "c": args.c,
            "measure": args.measure,
            "through": list(args.through) if args.through else None}
    extra = (g,) if g is not f else ()
    return (assemble("mustable", echo, results, f, extra_systems=extra),
            0 if rep.result else 1)


def cmd_satellite(args):
    loaded = _load(args.system if args.system else "bundled:satellite3")
    system = loaded.system
    if system.backend != "satellite":
        raise MalformedInputError("the satellite verb needs a satellite system")
    shift_c = parse_rational(args.c) if args.c else Fraction(1, 2)
    marked = [system.marked(j) for j in range(system.t)]
    sample = system.satellite_points() + list(loaded.probes) + marked
    entries, ok = [], True
    for q in system.satellite_points():
        nearest = min(system.dist(q, y) for y in sample if y != q)
        isolated = nearest >= Fraction(1, q.k)
        constant = dyadic_below(Fraction(1, q.k))
        verdict = minimally_expansive_at(system, q, constant)
        good = isolated and verdict.result
        ok = ok and good
        entries.append({
            "point": label(q), "kind": "satellite",
            "nearest_distinct": rat(nearest), "isolated": isolated,
            "constant": rat(constant), "minimally_expansive": verdict.result,
            "ok": good,
        })
    for y in loaded.probes:
        gap = min(shift_metric(m, y) for m in marked)
        bound = min(shift_c, gap)
        if bound <= 0:
            entries.append({"point": label(y), "kind": "marked-orbit",
                            "ok": True, "note":
                            "on the marked orbit: no admissible constant"})
            continue
        constant = dyadic_below(bound)
        verdict = minimally_expansive_at(system, y, constant)
        ok = ok and verdict.result
        entries.append({
            "point": label(y), "kind": "core",
            "bound": rat(bound), "constant": rat(constant),
            "minimally_expansive": verdict.result, "ok": verdict.result,
        })
    results = {"result": ok, "entries": entries,
               "satellite_count": len(system.satellite_points())}
    echo = {"system": args.system, "c": args.c}
    return assemble("satellite", echo, results, system), 0 if ok else 1


# -- argument plumbing ---------------------------------------------------------


def _build_parser():
    parser = argparse.ArgumentParser(
        prog="pdl", description="pointwise-dynamics workbench")
    parser.add_argument("--pretty", action="store_true",
                        help="indent the JSON report")
    sub = parser.add_subparsers(dest="verb", required=True)

    def scales(p, *names):
        for name in names:
            p.add_argument(f"--{name}")

    p = sub.add_parser("validate", help="metric axioms + bijection on a sample")
    p.add_argument("system")
    p.add_argument("--probe", action="append")
    p.set_defaults(run=cmd_validate)

    p = sub.add_parser("classify", help="classified point set at a constant")
    p.add_argument("system")
    p.add_argument("--variant", required=True,
                   choices=["expansive", "uniform", "minimal", "shadow",
                            "mu-uniform"])
    scales(p, "c", "eps", "delta")
    p.add_argument("--measure")
    p.add_argument("--probe", action="append")
    p.set_defaults(run=cmd_classify)

    p = sub.add_parser("shadow", help="shadowable point check (exact or windowed)")
    p.add_argument("system")
    p.add_argument("--x", required=True)
    scales(p, "eps", "delta")
    p.add_argument("--window", type=int)
    p.add_argument("--budget", type=int)
    p.set_defaults(run=cmd_shadow)

    p = sub.add_parser("conjugacy", help="semiconjugacy builder f vs g at x")
    p.add_argument("f")
    p.add_argument("g")
    p.add_argument("--x", required=True)
    scales(p, "eps", "delta", "c", "eta")
    p.set_defaults(run=cmd_conjugacy)

    p = sub.add_parser("trackmap", help="set-valued tracking map H at eta")
    p.add_argument("f")
    p.add_argument("g", nargs="?")
    p.add_argument("--x", required=True)
    scales(p, "eta")
    p.set_defaults(run=cmd_trackmap)

    p = sub.add_parser("ghdist", help="GH0 distance bounds between two systems")
    p.add_argument("x_system")
    p.add_argument("y_system")
    p.add_argument("--budget", type=int)
    p.set_defaults(run=cmd_ghdist)

    p = sub.add_parser("ghstable", help="GH-stable point check against candidates")
    p.add_argument("f")
    p.add_argument("candidates", nargs="+")
    p.add_argument("--x", required=True)
    scales(p, "eps", "delta", "eta")
    p.add_argument("--budget", type=int)
    p.set_defaults(run=cmd_ghstable)

    p = sub.add_parser("mustable", help="strong measure-stability clause check")
    p.add_argument("f")
    p.add_argument("--g")
    p.add_argument("--x", required=True)
    scales(p, "eps", "delta", "eta", "c")
    p.add_argument("--measure")
    p.add_argument("--through", action="append",
                   help="carrier point of the full-measure set B (repeatable)")
    p.set_defaults(run=cmd_mustable)

    p = sub.add_parser("satellite", help="isolation + expansivity sweep of a satellite system")
    p.add_argument("system", nargs="?")
    scales(p, "c")
    p.set_defaults(run=cmd_satellite)

    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    started = time.perf_counter()
    try:
        payload, code = args.run(args)
    except MalformedInputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ResourceBudgetError as exc:
        print(f"budget exhausted: {exc}", file=sys.stderr)
        return 3
    except PreconditionError as exc:
        print(f"precondition failed: {exc}", file=sys.stderr)
        return 1
    except PointdynError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    print(render(payload, pretty=args.pretty))
    elapsed = time.perf_counter() - started
    print(f"{args.verb}: {elapsed:.3f}s", file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())

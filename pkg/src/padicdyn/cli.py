"""Command-line front end: every library operation as a JSON-emitting subcommand.

Exit codes: 0 success, 1 domain error, 2 precision exhaustion,
3 verification failure.
"""
from __future__ import annotations

import argparse
import json
import random
import sys
from fractions import Fraction

from . import fixedpoints, gibbs
from .errors import (
    BranchError,
    ConsistencyError,
    DivisionByZero,
    DomainError,
    EscapeError,
    LengthMismatch,
    NoConvergence,
    NotAFixedPoint,
    NotASquare,
    NoValidPlacement,
    PoleError,
    PrecisionExhausted,
    VerificationError,
    ZeroInput,
    ZeroPartitionFunction,
)
from .maps import MapParams, deriv_g_norm, eval_f, eval_g, eval_k
from .padic import PrimeContext, exp_p, norm_diff, norm_str, parse_padic, to_json
from .symbolic import RepellerGeometry, basin_status, check_word

_DOMAIN_ERRORS = (DomainError, PoleError, ZeroInput, NotASquare, DivisionByZero,
                  ZeroPartitionFunction, NotAFixedPoint, LengthMismatch,
                  EscapeError, ValueError)
_PRECISION_ERRORS = (PrecisionExhausted, NoConvergence)
_VERIFICATION_ERRORS = (VerificationError, ConsistencyError, BranchError,
                        NoValidPlacement)


def _add_context_flags(sub):
    sub.add_argument("--p", type=int, required=True)
    sub.add_argument("--precision", type=int, default=64)
    sub.add_argument("--guard", type=int, default=8)


def _add_map_flags(sub):
    sub.add_argument("--a", required=True, help="p-adic literal: m/n or v;d0,d1,...")
    sub.add_argument("--b", required=True)


def _ctx(args) -> PrimeContext:
    return PrimeContext(args.p, args.precision, args.guard)


def _params(args) -> MapParams:
    ctx = _ctx(args)
    return MapParams(parse_padic(args.a, ctx), parse_padic(args.b, ctx))


def _word(text: str):
    return check_word(tuple(int(s) for s in text.replace(",", " ").split()))


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="padicdyn",
        description="p-adic dynamics of the generalized Ising mapping")
    subs = parser.add_subparsers(dest="command", required=True)

    s = subs.add_parser("fixed-points", help="locate and classify all fixed points")
    _add_context_flags(s)
    _add_map_flags(s)

    s = subs.add_parser("classify", help="classify one fixed point")
    _add_context_flags(s)
    _add_map_flags(s)
    s.add_argument("--x", required=True)

    s = subs.add_parser("orbit", help="iterate a map from a start point")
    _add_context_flags(s)
    _add_map_flags(s)
    s.add_argument("--x", required=True)
    s.add_argument("--steps", type=int, default=10)
    s.add_argument("--map", choices=("f", "g", "k"), default="g")

    s = subs.add_parser("basin", help="basin-of-attraction status of a point")
    _add_context_flags(s)
    _add_map_flags(s)
    s.add_argument("--x", required=True)
    s.add_argument("--max-iter", type=int, default=100)

    s = subs.add_parser("itinerary", help="symbolic itinerary of a point under k")
    _add_context_flags(s)
    _add_map_flags(s)
    s.add_argument("--x", required=True)
    s.add_argument("--length", type=int, default=8)

    s = subs.add_parser("periodic", help="synthesize a periodic point from a word")
    _add_context_flags(s)
    _add_map_flags(s)
    s.add_argument("--word", required=True, help="comma-separated symbols in {1,2}")
    s.add_argument("--map", choices=("g", "k"), default="k")

    s = subs.add_parser("cylinders", help="Julia-set cylinder balls at a depth")
    _add_context_flags(s)
    _add_map_flags(s)
    s.add_argument("--depth", type=int, default=2)

    s = subs.add_parser("lemmas", help="norm-identity report for the parameter pair")
    _add_context_flags(s)
    _add_map_flags(s)
    s.add_argument("--samples", type=int, default=50)
    s.add_argument("--seed", type=int, default=0)

    s = subs.add_parser("gibbs", help="Cayley-tree Gibbs measures")
    _add_context_flags(s)
    s.add_argument("action", choices=("solve", "verify", "periodic"))
    s.add_argument("--J", default="0")
    s.add_argument("--J1", default="0")
    s.add_argument("--J0", default="0")
    s.add_argument("--k", type=int, default=2)
    s.add_argument("--n", type=int, default=2)
    s.add_argument("--source", default="solve",
                   help="verify: field source, 'solve' | 'unit' | 'orbit:<word>'")
    s.add_argument("--word", default="x0",
                   help="periodic: 'x0' or comma-separated symbols in {1,2}")
    s.add_argument("--diagonal", action="store_true",
                   help="periodic: also try the two-component diagonal placement")
    return parser


# -- subcommand bodies -------------------------------------------------------

def _cmd_fixed_points(args):
    return fixedpoints.analyze(_params(args)).to_json(), 0


def _cmd_classify(args):
    params = _params(args)
    x = parse_padic(args.x, params.ctx)
    label = fixedpoints.classify(params, x)
    return {
        "x": to_json(x),
        "classification": label,
        "multiplier_norm": norm_str(deriv_g_norm(params, x), params.ctx.p),
    }, 0


def _cmd_orbit(args):
    params = _params(args)
    step = {"f": eval_f, "g": eval_g, "k": eval_k}[args.map]
    x = parse_padic(args.x, params.ctx)
    points = [x]
    for _ in range(args.steps):
        points.append(step(params, points[-1]))
    return {"map": args.map, "orbit": [to_json(pt) for pt in points]}, 0


def _cmd_basin(args):
    params = _params(args)
    x = parse_padic(args.x, params.ctx)
    status = basin_status(params, x, args.max_iter)
    return {
        "outcome": status.outcome,
        "steps": status.steps,
        "trail": list(status.trail),
    }, 0


def _cmd_itinerary(args):
    params = _params(args)
    geom = RepellerGeometry.build(params)
    word = geom.itinerary(parse_padic(args.x, params.ctx), args.length)
    return {"itinerary": list(word)}, 0


def _cmd_periodic(args):
    params = _params(args)
    geom = RepellerGeometry.build(params)
    word = _word(args.word)
    if args.map == "k":
        point = geom.periodic_point_k(word)
        final = point
        for _ in word:
            final = eval_k(params, final)
    else:
        point = geom.periodic_point_g(word)
        final = point
        for _ in word:
            final = eval_g(params, final)
    return {
        "word": list(word),
        "map": args.map,
        "point": to_json(point),
        "period_residual": norm_str(norm_diff(final, point), params.ctx.p),
    }, 0


def _cmd_cylinders(args):
    params = _params(args)
    geom = RepellerGeometry.build(params)
    return {
        "depth": args.depth,
        "cylinders": [
            {"word": list(word), "ball": ball.to_json()}
            for word, ball in geom.julia_cylinders(args.depth)
        ],
    }, 0


def _cmd_lemmas(args):
    params = _params(args)
    report = fixedpoints.analyze(params)
    scaling = None
    if report.roots is not None and params.strict_regime:
        geom = RepellerGeometry.build(params)
        rng = random.Random(args.seed)
        ctx = params.ctx
        m = params.radius_exponent
        def in_ball_point(center):
            t = rng.randrange(1, ctx.p ** 6)
            j = m + 1 + rng.randrange(3)
            return center + ctx.from_int(t * ctx.p ** j)

        holds = 0
        for _ in range(args.samples):
            center = geom.center_sq(rng.choice((1, 2)))
            x, y = in_ball_point(center), in_ball_point(center)
            # exact one-step scaling of k on the repeller balls: the
            # expansion factor is 1/r per step
            lhs = norm_diff(eval_k(params, x), eval_k(params, y)) * params.radius
            if lhs == norm_diff(x, y):
                holds += 1
        scaling = {"samples": args.samples, "holds": holds,
                   "all_hold": holds == args.samples}
    body = report.to_json()
    body["scaling_identity"] = scaling
    return body, 0


def _cmd_gibbs(args):
    ctx = _ctx(args)
    couplings = gibbs.Couplings(parse_padic(args.J, ctx),
                                parse_padic(args.J1, ctx),
                                parse_padic(args.J0, ctx))
    tree = gibbs.CayleyTree(args.k)

    def orbit_from_word(text: str):
        a, b = couplings.a, couplings.b
        params = MapParams(a, b)
        if text == "x0":
            return [fixedpoints.find_x0(params)]
        geom = RepellerGeometry.build(params)
        return geom.g_orbit(_word(text))

    if args.action == "solve":
        field = gibbs.solve_7_11(tree, couplings, args.n)
        report = gibbs.check_compatibility(tree, couplings, field, field, args.n)
        return {"field": field.to_json(), "compatibility": report.to_json()}, 0

    if args.action == "verify":
        if args.source == "solve":
            field = gibbs.solve_7_11(tree, couplings, args.n)
        elif args.source == "unit":
            field = gibbs.GibbsField.unit(tree, args.n, ctx)
        elif args.source.startswith("orbit:"):
            orbit = orbit_from_word(args.source.split(":", 1)[1])
            candidates = gibbs.periodic_field_from_orbit(tree, couplings, orbit,
                                                         args.n)
            field = candidates[0].field
        else:
            raise DomainError(f"unknown field source {args.source!r}")
        report = gibbs.check_compatibility(tree, couplings, field, field, args.n)
        return {"compatibility": report.to_json()}, 0 if report.ok else 3

    # periodic
    orbit = orbit_from_word(args.word)
    body = {"orbit": [to_json(h) for h in orbit]}
    try:
        candidates = gibbs.periodic_field_from_orbit(tree, couplings, orbit, args.n)
    except NoValidPlacement as exc:
        if not args.diagonal:
            raise
        candidates = []
        body["single_component_diagnostics"] = exc.diagnostics
    if args.diagonal:
        candidates.append(gibbs.diagonal_field_from_orbit(tree, couplings, orbit,
                                                          args.n))
    body["placements"] = [
        {
            "placement": c.placement,
            "equation_residual": str(c.residual),
            "compatibility": gibbs.check_compatibility(
                tree, couplings, c.field, c.field, args.n).to_json(),
        }
        for c in candidates
    ]
    return body, 0


_COMMANDS = {
    "fixed-points": _cmd_fixed_points,
    "classify": _cmd_classify,
    "orbit": _cmd_orbit,
    "basin": _cmd_basin,
    "itinerary": _cmd_itinerary,
    "periodic": _cmd_periodic,
    "cylinders": _cmd_cylinders,
    "lemmas": _cmd_lemmas,
    "gibbs": _cmd_gibbs,
}


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 1 if exc.code else 0
    try:
        body, code = _COMMANDS[args.command](args)
    except NoValidPlacement as exc:
        print(json.dumps({"error": "no valid placement",
                          "diagnostics": exc.diagnostics}, indent=2))
        return 3
    except _PRECISION_ERRORS as exc:
        print(f"precision error: {exc}", file=sys.stderr)
        return 2
    except _VERIFICATION_ERRORS as exc:
        print(f"verification error: {exc}", file=sys.stderr)
        return 3
    except _DOMAIN_ERRORS as exc:
        print(f"domain error: {exc}", file=sys.stderr)
        return 1
    print(json.dumps(body, indent=2))
    return code


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()

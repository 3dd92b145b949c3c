"""Command line entry point: wpcount <verb> [flags]."""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
import warnings
from fractions import Fraction
from importlib import resources

from . import constants as K
from .arith import BoundedReal, format_decimal
from .counting import asymptotic_report, count_points_size, fixed_tuple_count, count_primitive_fast, size_classes
from .errors import BudgetExceededError, OracleMismatchError, OracleTooLargeError
from .lift import (
    fiber_rational_points,
    lift_bruteforce_oracle,
    lift_check,
    orbit_count_oracle,
    sparsity_scan,
    veronese_degree,
)
from .space import (
    ProjectivePoint,
    WeightedPoint,
    archimedean_height,
    canonicalize,
    normalize,
    parse_rationals,
    parse_weights,
    size,
    veronese,
    weighted_height,
    weil_height,
    wgcd,
)

EXIT_OK, EXIT_PARSE, EXIT_BUDGET, EXIT_MISMATCH = 0, 2, 3, 4
CSV_HEADER = [
    "X",
    "direct_size",
    "fast_size",
    "height_count",
    "predicted_mid",
    "predicted_width",
    "ratio_mid",
    "ratio_width",
]


class UsageError(ValueError):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _positive_int(text):
    v = int(float(text)) if "e" in text.lower() else int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return v


def _positive_rational(text):
    v = Fraction(text)
    if v <= 0:
        raise argparse.ArgumentTypeError("must be positive")
    return v


def _x_list(text):
    vals = parse_rationals(text)
    if not vals:
        raise argparse.ArgumentTypeError("empty X list")
    return list(vals)


def _interval(text):
    parts = parse_rationals(text)
    if len(parts) == 1:
        return BoundedReal.exact(parts[0])
    if len(parts) == 2:
        return BoundedReal(*parts)
    raise argparse.ArgumentTypeError("expected 'value' or 'lower,upper'")


def _height_json(h, tol) -> dict:
    return {"exact": str(h), "decimal": h.enclosure(tol).decimal()}


def _expect(ok: bool, what: str):
    if not ok:
        raise OracleMismatchError(what)


# --------------------------------------------------------------------------
# verbs


def cmd_height(args) -> dict:
    ws = args.weights
    if args.point is None:
        raise UsageError("height needs -p/--point")
    p = WeightedPoint(args.point, ws)
    tol = args.tol
    h = weighted_height(p)
    image = weil_height(veronese(p))
    out = {
        "weights": list(ws.weights),
        "point": [str(c) for c in p.coords],
        "wgcd": str(wgcd(p)),
        "normalized": [str(c) for c in normalize(p).coords],
        "canonical": [str(c) for c in canonicalize(p).coords],
        "weighted_height": _height_json(h, tol),
        "archimedean_height": _height_json(archimedean_height(p), tol),
        "size": _height_json(size(p), tol),
        "weil_height_of_image": _height_json(image, tol),
    }
    if args.check == "oracle":
        _expect(h.power(ws.q) == image, f"weighted height^{ws.q} = {h.power(ws.q)} but image height = {image}")
        out["check"] = "weighted height^q equals the Weil height of the image"
    return out


def _count_rows(args):
    methods = {"direct": {"direct"}, "fast": {"fast"}, "height": {"height"}, "both": {"direct", "fast"}}[args.method]
    records = asymptotic_report(args.weights, args.X, methods, args.tol, args.budget, args.workers)
    if args.check == "oracle":
        for r in records:
            fixed = fixed_tuple_count(args.weights, r.X)
            _expect(
                2 * r.fast_size_count - fixed == count_primitive_fast(args.weights, r.X),
                f"Burnside identity fails at X = {r.X}",
            )
            if r.direct_size_count is None:
                r_direct = count_points_size(args.weights, r.X, "direct", args.budget)
            else:
                r_direct = r.direct_size_count
            _expect(r_direct == r.fast_size_count, f"direct {r_direct} != fast {r.fast_size_count} at X = {r.X}")
            try:
                naive = len(size_classes(args.weights, r.X, min(args.budget, 10**6)))
            except BudgetExceededError:
                continue
            _expect(naive == r.fast_size_count, f"naive {naive} != fast {r.fast_size_count} at X = {r.X}")
    return records


def _fmt_x(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else str(x)


def _row(r, method) -> list:
    show_fast = method != "direct" and method != "height"
    ratio = r.height_ratio if method == "height" else r.ratio
    return [
        _fmt_x(r.X),
        "" if r.direct_size_count is None else r.direct_size_count,
        r.fast_size_count if show_fast else "",
        "" if r.height_count is None else r.height_count,
        format_decimal(r.predicted.midpoint),
        format_decimal(r.predicted.width, 3),
        format_decimal(ratio.midpoint),
        format_decimal(ratio.width, 3),
    ]


def render_count(records, method: str, fmt: str) -> str:
    rows = [_row(r, method) for r in records]
    if fmt == "json":
        return json.dumps([dict(zip(CSV_HEADER, row)) for row in rows], indent=2) + "\n"
    buf = io.StringIO()
    if fmt == "plain":
        for row in rows:
            buf.write("  ".join(f"{k}={v}" for k, v in zip(CSV_HEADER, row) if v != "") + "\n")
        return buf.getvalue()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER)
    w.writerows(rows)
    return buf.getvalue()


def _target(args) -> ProjectivePoint:
    if args.target is None:
        raise UsageError("this verb needs -y/--target")
    if len(args.target) != len(args.weights.weights):
        raise UsageError("target and weights have different lengths")
    return ProjectivePoint.from_rationals(args.target)


def cmd_lift(args) -> dict:
    y = _target(args)
    res = lift_check(y, args.weights)
    out = {"target": [int(c) for c in y.coords]}
    out.update(res.to_json())
    if res.liftable:
        out["witness_verified"] = res.check_witness(y)
    elif res.obstruction is not None:
        out["obstruction_verified"] = res.obstruction.verify(y, args.weights)
    if args.oracle or args.check == "oracle":
        brute = lift_bruteforce_oracle(y, args.weights)
        out["oracle_agrees"] = brute.liftable == res.liftable
        if args.check == "oracle":
            _expect(out["oracle_agrees"], f"bounded search says liftable={brute.liftable}")
            _expect(out.get("witness_verified", True) and out.get("obstruction_verified", True), "certificate fails")
    return out


def cmd_fiber(args) -> dict:
    y = _target(args)
    pts = sorted(fiber_rational_points(y, args.weights), key=lambda p: p.coords)
    out = {
        "target": [int(c) for c in y.coords],
        "count": len(pts),
        "points": [[int(c) for c in p.coords] for p in pts],
    }
    if args.check == "oracle":
        for p in pts:
            _expect(veronese(p) == y, f"{p} does not map to {y}")
    return out


def cmd_sparsity(args) -> dict:
    if args.bound is None:
        raise UsageError("sparsity needs -B/--bound")
    rec = sparsity_scan(args.weights, args.bound, args.budget, args.workers)
    out = {"weights": list(args.weights.weights)}
    out.update(rec.to_json())
    if args.check == "oracle":
        from .space import projective_points

        liftable = 0
        for c in projective_points(len(args.weights.weights), args.bound):
            y = ProjectivePoint(c)
            res = lift_check(y, args.weights)
            ok = res.check_witness(y) if res.liftable else res.obstruction.verify(y, args.weights)
            _expect(ok, f"certificate fails at {c}")
            liftable += res.liftable
        _expect(liftable == rec.liftable, "recount disagrees")
    return out


def cmd_degree(args) -> dict:
    ws = args.weights
    out = {"weights": list(ws.weights), "q": ws.q, "d": ws.d, "degree": veronese_degree(ws)}
    if args.oracle or args.check == "oracle":
        try:
            orbits = orbit_count_oracle(ws, min(args.budget, 10**7))
            out["oracle"] = orbits
            out["oracle_agrees"] = orbits == out["degree"]
        except OracleTooLargeError as exc:
            out["oracle"] = None
            out["oracle_agrees"] = None
            out["oracle_error"] = str(exc)
        if args.check == "oracle" and out["oracle_agrees"] is False:
            raise OracleMismatchError(f"orbit count {out['oracle']} != degree {out['degree']}")
    return out


def _field(args) -> K.FieldInvariants:
    if args.field == "q" and all(v is None for v in (args.m, args.e, args.r, args.s, args.disc)):
        return K.FieldInvariants.rationals()
    m = args.m or 1
    e = args.e or 1
    deg = m * e
    s = args.s if args.s is not None else (0 if args.r is None else (deg - args.r) // 2)
    r = args.r if args.r is not None else deg - 2 * s
    return K.FieldInvariants(
        m=m,
        e=e,
        h=args.h,
        R=args.R,
        w=args.roots_of_unity,
        disc=args.disc or 1,
        r=r,
        s=s,
        zeta_value=args.zeta,
    )


def cmd_constants(args) -> dict:
    ws = args.weights
    inv = _field(args)
    tol = args.tol
    out = {
        "weights": list(ws.weights),
        "field": {"m": inv.m, "e": inv.e, "h": inv.h, "R": str(inv.R), "w": inv.w, "disc": inv.disc, "r": inv.r, "s": inv.s},
        "sparsity_factor": str(K.sparsity_factor(ws.q, inv.m, inv.e)),
        "exponent_predictors": K.exponent_predictors(ws.n, inv.m),
        "comparison": K.comparison_constants(ws, args.morphism_degree, tol),
    }
    have_zeta = inv.is_rationals or inv.zeta_value is not None
    if inv.is_rationals:
        c = K.rational_leading_constant(ws, tol)
        out["leading"] = K.ConstantReport(c, Fraction(ws.Q), Fraction(ws.Q - min(ws.weights)), 0).to_json()
    if have_zeta:
        out["field_leading"] = K.numberfield_leading_constant(ws, inv, tol).to_json()
        out["degree_e_term"] = K.degree_e_constant_term(ws, inv, tol=tol).to_json()
    else:
        out["field_leading"] = None
        out["degree_e_term"] = None
        out["note"] = "pass --zeta to evaluate constants over a field other than Q"
    if args.g is not None:
        out["bounds"] = K.bounds_evaluators(args.g, inv.e, inv.m, ws.Q, ws.n).to_json()
    if args.check == "oracle" and inv.is_rationals:
        c = K.rational_leading_constant(ws, tol)
        _expect(K.numberfield_leading_constant(ws, inv, tol).constant.overlaps(c), "field constant at Q disagrees")
        if all(x == 1 for x in ws.weights):
            _expect(K.schanuel_constant(ws.n, inv, tol).overlaps(c), "Schanuel constant disagrees")
    return out


VERBS = {
    "height": cmd_height,
    "lift": cmd_lift,
    "fiber": cmd_fiber,
    "sparsity": cmd_sparsity,
    "degree": cmd_degree,
    "veronese-degree": cmd_degree,
    "constants": cmd_constants,
}


# --------------------------------------------------------------------------
# disputed fixtures


def load_disputed() -> list:
    root = resources.files("wpcount") / "fixtures" / "disputed"
    out = []
    for entry in sorted(root.iterdir(), key=lambda e: e.name):
        if entry.name.endswith(".json"):
            data = json.loads(entry.read_text())
            data["name"] = entry.name[:-5]
            out.append(data)
    return out


def evaluate_disputed(fx: dict, tol=Fraction(1, 10**9)) -> dict:
    """Recompute the quantity a fixture disputes; returns claimed vs computed."""
    ws = parse_weights(",".join(str(w) for w in fx["weights"]))
    kind = fx["quantity"]
    if kind == "size":
        p = WeightedPoint(tuple(Fraction(c) for c in fx["point"]), ws)
        computed = str(size(p))
        agrees = computed == fx["claimed"]
    elif kind == "leading_constant":
        c = K.rational_leading_constant(ws, tol)
        computed = c.decimal(6)
        agrees = abs(float(c.midpoint) - float(fx["claimed"])) < 0.01
    elif kind == "liftable":
        res = lift_check(ProjectivePoint.from_rationals([Fraction(c) for c in fx["target"]]), ws)
        computed = res.liftable
        agrees = computed == fx["claimed"]
    else:
        raise ValueError(f"unknown fixture quantity {kind!r}")
    return {"name": fx["name"], "quantity": kind, "claimed": fx["claimed"], "computed": computed, "agrees": agrees}


def disputed_report(stream) -> None:
    for fx in load_disputed():
        r = evaluate_disputed(fx)
        status = "agrees" if r["agrees"] else "DIVERGES"
        stream.write(f"{r['name']}: {r['quantity']} claimed {r['claimed']}, computed {r['computed']} -> {status}\n")


# --------------------------------------------------------------------------
# argument parsing


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("-w", "--weights", type=parse_weights, required=True, help="comma separated, e.g. 2,4,6,10")
    common.add_argument("--budget", type=_positive_int, default=10**8, help="max tuple enumerations")
    common.add_argument("--workers", type=_positive_int, default=1)
    common.add_argument("--tol", type=_positive_rational, default=Fraction(1, 10**9))
    common.add_argument("--out", help="write the result here instead of stdout")
    common.add_argument("--format", choices=("csv", "json", "plain"), default=None)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument(
        "--check", nargs="?", const="oracle", choices=("oracle", "paper"), help="oracle: assert agreement with an independent method; paper: list divergences from the disputed published values"
    )
    common.add_argument("--oracle", action="store_true", help="include the oracle result in the output")

    parser = _Parser(prog="wpcount", description="Heights, lifts and point counts on weighted projective spaces over Q.")
    sub = parser.add_subparsers(dest="verb", required=True, parser_class=_Parser)

    p = sub.add_parser("height", parents=[common], help="heights of a weighted point")
    p.add_argument("-p", "--point", type=parse_rationals)

    p = sub.add_parser("count", parents=[common], help="point counts with leading-term ratios")
    p.add_argument("-X", type=_x_list, required=True, help="bound or comma separated ascending bounds")
    p.add_argument("--method", choices=("direct", "fast", "height", "both"), default="fast")

    for verb in ("lift", "fiber"):
        p = sub.add_parser(verb, parents=[common])
        p.add_argument("-y", "--target", type=parse_rationals)

    p = sub.add_parser("sparsity", parents=[common], help="liftable density in a box of the target")
    p.add_argument("-B", "--bound", type=_positive_int)

    sub.add_parser("degree", parents=[common], aliases=["veronese-degree"], help="degree of the Veronese map")

    p = sub.add_parser("constants", parents=[common], help="leading constants and exponents")
    p.add_argument("--field", choices=("q",), default="q", help="q: use the invariants of Q")
    p.add_argument("--m", type=_positive_int)
    p.add_argument("--e", type=_positive_int)
    p.add_argument("--h", type=_positive_int, default=1)
    p.add_argument("--R", type=_positive_rational, default=Fraction(1))
    p.add_argument("--roots-of-unity", type=_positive_int, default=2)
    p.add_argument("--disc", type=_positive_int)
    p.add_argument("--r", type=int)
    p.add_argument("--s", type=int)
    p.add_argument("--zeta", type=_interval, help="Dedekind zeta enclosure 'lo,hi' at the needed argument")
    p.add_argument("--g", type=_positive_int, help="divisor of e for the bound exponents")
    p.add_argument("--morphism-degree", type=_positive_int, help="degree used in the comparison table (default q)")
    return parser


def _render(args, result) -> str:
    if args.verb == "count":
        return render_count(result, args.method, args.format or "csv")
    if (args.format or "json") == "plain":
        return "".join(f"{k}: {json.dumps(v)}\n" for k, v in result.items())
    return json.dumps(result, indent=2) + "\n"


def run(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    try:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            args = build_parser().parse_args(argv)
    except UsageError as exc:
        stderr.write(f"wpcount: error: {exc}\n")
        return EXIT_PARSE
    except SystemExit as exc:  # --help
        return int(exc.code or 0)

    try:
        if args.verb == "count":
            result = _count_rows(args)
        else:
            result = VERBS[args.verb](args)
    except (UsageError, ValueError) as exc:
        stderr.write(f"wpcount: error: {exc}\n")
        return EXIT_PARSE
    except OracleMismatchError as exc:
        stderr.write(f"wpcount: oracle mismatch: {exc}\n")
        return EXIT_MISMATCH
    except BudgetExceededError as exc:
        stderr.write(f"wpcount: budget exceeded: {exc}\n")
        return EXIT_BUDGET

    text = _render(args, result)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        stdout.write(text)
    if args.check == "paper":
        disputed_report(stderr)
    return EXIT_OK


def main(argv=None) -> None:
    sys.exit(run(argv))


if __name__ == "__main__":
    main()

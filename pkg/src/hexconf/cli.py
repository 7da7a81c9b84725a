"""Command-line surface tying the modules into reproducible experiments.

Exit codes: 0 success, 1 a verification check failed, 2 usage or data error.
"""

from __future__ import annotations

import argparse
import sys

from . import __version__, jsonio
from .errors import (
    DataError,
    DomainTooSmallError,
    HexconfError,
    NotFoundError,
    SolverStuckError,
)
from .lattice import ball, neighbors
from .layout import OverlapReport, develop, extract_similarity, find_overlap, overlap_radius
from .patch import check_edge_ratio_bound, curvature, length_cross_ratio, linear_factor
from .quasiharm import extract_weights, find_near_constant_ball, verify_propagation
from .solver import solve


def _parse_vertex(text: str):
    try:
        m_str, n_str = text.split(",")
        return (int(m_str), int(n_str))
    except ValueError:
        raise DataError(f"expected 'm,n' with integers, got {text!r}") from None


def _parse_edge(text: str):
    try:
        left, right = text.split(":")
    except ValueError:
        raise DataError(f"expected 'm,n:m,n', got {text!r}") from None
    return _parse_vertex(left), _parse_vertex(right)


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


# -- SVG ----------------------------------------------------------------------

def render_svg(layout, overlaps: OverlapReport | None, path) -> None:
    """One polygon per placed face; faces in overlap pairs are highlighted.

    The viewBox is the layout bounding box padded by 5 percent; y is flipped
    so figures match the mathematical orientation.
    """
    if not layout.placed_faces:
        raise DataError("layout has no faces to draw")
    highlighted = set()
    if overlaps is not None:
        for pair in overlaps.pairs:
            highlighted.add(pair.face_a)
            highlighted.add(pair.face_b)

    points = [z for _, tri in layout.placed_faces for z in tri]
    x0 = min(z.real for z in points)
    x1 = max(z.real for z in points)
    y0 = min(-z.imag for z in points)
    y1 = max(-z.imag for z in points)
    pad = 0.05 * max(x1 - x0, y1 - y0, 1e-30)
    width = (x1 - x0) + 2 * pad
    height = (y1 - y0) + 2 * pad
    stroke = 0.0015 * max(width, height)

    def num(v: float) -> str:
        return format(v, ".8g")

    lines = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f"<!-- hexconf {__version__} -->",
        f'<svg xmlns="http://www.w3.org/2000/svg" '
        f'viewBox="{num(x0 - pad)} {num(y0 - pad)} {num(width)} {num(height)}">',
    ]
    for f, tri in layout.placed_faces:
        pts = " ".join(f"{num(z.real)},{num(-z.imag)}" for z in tri)
        if f in highlighted:
            style = f'fill="#d62728" fill-opacity="0.55" stroke="#7f0000" stroke-width="{num(stroke)}"'
        else:
            style = f'fill="none" stroke="#444444" stroke-width="{num(stroke)}"'
        lines.append(f'<polygon points="{pts}" {style}/>')
    lines.append("</svg>")
    with open(path, "w", encoding="utf-8") as handle:
        handle.write("\n".join(lines) + "\n")


# -- commands -------------------------------------------------------------------

def _cmd_gen_linear(args) -> int:
    p = linear_factor(args.m, args.n, ball((0, 0), args.radius))
    jsonio.save_patch(p, args.out)
    print(f"wrote {args.out}")
    return 0


def _cmd_curvature(args) -> int:
    p = jsonio.load_patch(args.patch)
    report = curvature(p)
    if args.out:
        jsonio.write_doc(jsonio.curvature_report_to_doc(report), args.out)
    print(f"max|K| = {_fmt(report.max_abs_K)}")
    print(f"theta_sup = {_fmt(report.max_inner_angle)}")
    return 0


def _cmd_verify_flat(args) -> int:
    p = jsonio.load_patch(args.patch)
    report = curvature(p)
    flat = report.max_abs_K <= args.tol
    print(f"max|K| = {_fmt(report.max_abs_K)} (tol {_fmt(args.tol)}): "
          f"{'flat' if flat else 'NOT flat'}")
    return 0 if flat else 1


def _cmd_develop(args) -> int:
    p = jsonio.load_patch(args.patch)
    layout = develop(p)
    jsonio.save_layout(layout, args.out)
    print(f"holonomy_residual = {_fmt(layout.holonomy_residual)}")
    if args.svg:
        overlaps = find_overlap(layout)
        render_svg(layout, overlaps, args.svg)
        print(f"wrote {args.svg} ({len(overlaps.pairs)} overlap pairs highlighted)")
    return 0


def _cmd_overlap(args) -> int:
    layout = jsonio.load_layout(args.layout)
    report = find_overlap(layout)
    jsonio.save_overlaps(report, args.out)
    print(f"{len(report.pairs)} overlapping pairs "
          f"(threshold {_fmt(report.threshold)})")
    return 0


def _cmd_overlap_radius(args) -> int:
    radius = overlap_radius(args.m, args.n, args.rmax)
    print("none" if radius is None else str(radius))
    return 0


def _cmd_similarity(args) -> int:
    layout = jsonio.load_layout(args.layout)
    p = jsonio.load_patch(args.patch)
    direction = _parse_vertex(args.dir)
    if direction not in neighbors((0, 0)):
        raise DataError(f"--dir must be one of the six unit vectors, got {args.dir}")
    sim = extract_similarity(layout, p, _parse_vertex(args.at), direction, args.span)
    print(f"k = {_fmt(sim.k.real)} + {_fmt(sim.k.imag)}i")
    print(f"b = {_fmt(sim.b.real)} + {_fmt(sim.b.imag)}i")
    print(f"contraction_norm = {_fmt(sim.contraction_norm)}")
    if sim.fixed_point is None:
        print("fixed_point = none")
    else:
        print(f"fixed_point = {_fmt(sim.fixed_point.real)} + {_fmt(sim.fixed_point.imag)}i")
    return 0


def _cmd_qh_weights(args) -> int:
    p = jsonio.load_patch(args.patch)
    at = _parse_vertex(args.at) if args.at else p.ball.center
    weights = extract_weights(p, _parse_vertex(args.c), at, args.theta)
    jsonio.write_doc(jsonio.weights_to_doc(weights), args.out)
    print("mu =", " ".join(_fmt(mu) for mu in weights.weights))
    print(f"harmonic_factor_bound = {_fmt(weights.harmonic_factor_bound)}")
    return 0


def _cmd_qh_propagate(args) -> int:
    f = jsonio.load_function(args.f)
    report = verify_propagation(f, args.factor, _parse_vertex(args.center),
                                args.radius, args.level, args.eps)
    print(f"min over ball = {_fmt(report.min_over_ball)}")
    print(f"hypotheses: center {report.hypothesis_center}, upper {report.hypothesis_upper}")
    print(f"chain holds: {report.chain_holds}")
    print(f"conclusion f >= M - eps: {report.holds}")
    return 0 if report.holds else 1


def _cmd_qh_twofun(args) -> int:
    f1 = jsonio.load_function(args.f1)
    f2 = jsonio.load_function(args.f2)
    found = find_near_constant_ball(f1, f2, args.factor, args.radius, args.eps,
                                    ball((0, 0), args.domain))
    print(f"center = {found.center[0]},{found.center[1]}")
    print(f"M = {_fmt(found.f1_level)}")
    print(f"N = {_fmt(found.f2_level)}")
    return 0


def _cmd_solve(args) -> int:
    prob = jsonio.load_problem(args.problem)
    trace = solve(prob, tol=args.tol, max_iter=args.max_iter)
    jsonio.write_doc(jsonio.solution_to_doc(trace), args.out)
    final = trace.iterations[-1][0] if trace.iterations else 0.0
    print(f"converged = {trace.converged} after {len(trace.iterations)} iterations, "
          f"final residual {_fmt(final)}")
    return 0 if trace.converged else 1


def _cmd_cross_ratio(args) -> int:
    p = jsonio.load_patch(args.patch)
    i, j = _parse_edge(args.edge)
    print(_fmt(length_cross_ratio(p, i, j)))
    return 0


def _cmd_check_bound(args) -> int:
    p = jsonio.load_patch(args.patch)
    violations = check_edge_ratio_bound(p)
    if not violations:
        print("no violations: every flat star satisfies the 1/6 neighbor ratio")
        return 0
    for v in violations:
        print(f"violation at {v.vertex} -> {v.neighbor}: ratio {_fmt(v.ratio)}")
    return 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hexconf",
        description="PL-conformal hexagonal triangulation toolkit")
    parser.add_argument("--version", action="version", version=f"hexconf {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    s = sub.add_parser("gen-linear", help="write a linear-factor patch")
    s.add_argument("--m", type=float, required=True)
    s.add_argument("--n", type=float, required=True)
    s.add_argument("--radius", type=int, required=True)
    s.add_argument("--out", required=True)
    s.set_defaults(func=_cmd_gen_linear)

    s = sub.add_parser("curvature", help="curvature report for a patch")
    s.add_argument("--patch", required=True)
    s.add_argument("--out")
    s.set_defaults(func=_cmd_curvature)

    s = sub.add_parser("verify-flat", help="exit 1 unless max|K| <= tol")
    s.add_argument("--patch", required=True)
    s.add_argument("--tol", type=float, default=1e-9)
    s.set_defaults(func=_cmd_verify_flat)

    s = sub.add_parser("develop", help="immerse a patch in the plane")
    s.add_argument("--patch", required=True)
    s.add_argument("--out", required=True)
    s.add_argument("--svg")
    s.set_defaults(func=_cmd_develop)

    s = sub.add_parser("overlap", help="positive-area overlaps of a layout")
    s.add_argument("--layout", required=True)
    s.add_argument("--out", required=True)
    s.set_defaults(func=_cmd_overlap)

    s = sub.add_parser("overlap-radius",
                       help="smallest overlapping radius of a linear factor")
    s.add_argument("--m", type=float, required=True)
    s.add_argument("--n", type=float, required=True)
    s.add_argument("--rmax", type=int, required=True)
    s.set_defaults(func=_cmd_overlap_radius)

    s = sub.add_parser("similarity", help="ray-stepping similarity of a layout")
    s.add_argument("--layout", required=True)
    s.add_argument("--patch", required=True)
    s.add_argument("--at", required=True, metavar="m,n")
    s.add_argument("--dir", required=True, metavar="m,n")
    s.add_argument("--span", type=int, default=2)
    s.set_defaults(func=_cmd_similarity)

    s = sub.add_parser("qh-weights", help="quasi-harmonic weights at a vertex")
    s.add_argument("--patch", required=True)
    s.add_argument("--c", required=True, metavar="m,n")
    s.add_argument("--theta", type=float, required=True)
    s.add_argument("--at", metavar="m,n")
    s.add_argument("--out", required=True)
    s.set_defaults(func=_cmd_qh_weights)

    s = sub.add_parser("qh-propagate", help="near-maximum propagation check")
    s.add_argument("--f", required=True)
    s.add_argument("--factor", type=float, required=True)
    s.add_argument("--center", required=True, metavar="m,n")
    s.add_argument("--radius", type=int, required=True)
    s.add_argument("--level", type=float, required=True)
    s.add_argument("--eps", type=float, required=True)
    s.set_defaults(func=_cmd_qh_propagate)

    s = sub.add_parser("qh-twofun", help="two-function near-constant ball search")
    s.add_argument("--f1", required=True)
    s.add_argument("--f2", required=True)
    s.add_argument("--factor", type=float, required=True)
    s.add_argument("--radius", type=int, required=True)
    s.add_argument("--eps", type=float, required=True)
    s.add_argument("--domain", type=int, required=True, metavar="R_dom")
    s.set_defaults(func=_cmd_qh_twofun)

    s = sub.add_parser("solve", help="prescribed-curvature Newton solve")
    s.add_argument("--problem", required=True)
    s.add_argument("--tol", type=float, default=1e-10)
    s.add_argument("--max-iter", type=int, default=100)
    s.add_argument("--out", required=True)
    s.set_defaults(func=_cmd_solve)

    s = sub.add_parser("cross-ratio", help="length cross ratio of an interior edge")
    s.add_argument("--patch", required=True)
    s.add_argument("--edge", required=True, metavar="m,n:m,n")
    s.set_defaults(func=_cmd_cross_ratio)

    s = sub.add_parser("check-bound", help="1/6 neighbor-ratio check at flat stars")
    s.add_argument("--patch", required=True)
    s.set_defaults(func=_cmd_check_bound)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (NotFoundError, SolverStuckError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (DataError, DomainTooSmallError, HexconfError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())

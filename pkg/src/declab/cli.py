"""Command-line front end.

Subcommands
-----------
convergence     run a manufactured-solution convergence study and render
                the error table (markdown or CSV)
diagnostics     centroid/kernel/commuting diagnostics for one mesh
gen-mesh        generate a mesh and write it in the plain-text format
dual-report     per-simplex primal/dual volume table as CSV
dump-operators  assembled sparse operators in coordinate text form
selftest-forms  invariant battery for the polynomial form algebra

Exit codes: 0 on success, 2 on solver failure, 3 on mesh-generation
failure, 1 on bad arguments or a failed self test.
"""

from __future__ import annotations

import argparse
import math
import sys

import numpy as np

from .complex import SimplicialComplex
from .dual import build_dual
from .forms import (
    Poly2,
    PolyForm,
    codifferential,
    de_rham,
    exterior_derivative,
    gauss_legendre_unit,
    hodge_laplacian,
    hodge_star,
    integrate_over_simplex,
    manufactured_solution,
    triangle_rule,
)
from .experiments import diagnostics, render_report, run_convergence
from .meshes import MeshError, MeshFamilySpec, build_mesh, read_mesh, write_mesh
from .operators import (
    codifferential_matrix,
    hodge_laplacian_matrix,
    star_matrix,
)
from .solver import SolverError

__all__ = ["main"]


def _parse_levels(text: str) -> list[int]:
    """Parse '--levels a..b' (or a single 'm') into an ascending list."""
    if ".." in text:
        lo_s, hi_s = text.split("..", 1)
        lo, hi = int(lo_s), int(hi_s)
    else:
        lo = hi = int(text)
    if lo < 1 or hi < lo:
        raise argparse.ArgumentTypeError(
            f"levels must satisfy 1 <= a <= b, got {text!r}"
        )
    return list(range(lo, hi + 1))


def _add_mesh_args(
    p: argparse.ArgumentParser,
    with_level: bool = True,
    level_required: bool = True,
) -> None:
    p.add_argument(
        "--family",
        choices=("symmetric", "perturbed"),
        default="symmetric",
        help="mesh family (default symmetric)",
    )
    if with_level:
        p.add_argument(
            "--level",
            type=int,
            required=level_required,
            default=None,
            help="refinement level m (h = 2^-m)",
        )
    p.add_argument("--seed", type=int, default=0, help="perturbation seed")
    p.add_argument("--alpha", type=float, default=0.15, help="perturbation amplitude in (0, 0.5)")


def _mesh_from_args(args: argparse.Namespace) -> SimplicialComplex:
    if getattr(args, "mesh", None):
        return read_mesh(args.mesh)
    if args.level is None:
        raise ValueError("either --mesh or --level is required")
    spec = MeshFamilySpec(
        family=args.family, level=args.level, seed=args.seed, alpha=args.alpha
    )
    return build_mesh(spec)


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# -- subcommands -------------------------------------------------------------


def _cmd_convergence(args: argparse.Namespace) -> int:
    report = run_convergence(
        k=args.k,
        family=args.family,
        levels=args.levels,
        seed=args.seed,
        alpha=args.alpha,
        tol=args.solver_tol,
        max_iterations=args.solver_maxit,
    )
    _emit(render_report(report, args.format), args.out)
    return 0


def _cmd_diagnostics(args: argparse.Namespace) -> int:
    K = _mesh_from_args(args)
    dual = build_dual(K)
    _emit(diagnostics(K, dual, args.k), args.out)
    return 0


def _cmd_gen_mesh(args: argparse.Namespace) -> int:
    K = _mesh_from_args(args)
    write_mesh(K, args.out)
    print(
        f"wrote {K.n_simplices(0)} vertices, {K.n_simplices(2)} cells to {args.out}"
    )
    return 0


def _cmd_dual_report(args: argparse.Namespace) -> int:
    K = _mesh_from_args(args)
    dual = build_dual(K)
    lines = ["dim,simplex_id,primal_volume,dual_volume,ratio_a,is_boundary"]
    for k in range(3):
        flags = K.is_boundary(k)
        for i in range(K.n_simplices(k)):
            lines.append(
                f"{k},{i},{dual.primal_volumes[k][i]:.17g},"
                f"{dual.dual_volumes[k][i]:.17g},"
                f"{dual.hodge_ratio_a[k][i]:.17g},{int(flags[i])}"
            )
    _emit("\n".join(lines) + "\n", args.out)
    return 0


def _coo_lines(name: str, mat) -> list[str]:
    coo = mat.tocoo()
    lines = [f"# operator {name} shape {coo.shape[0]} {coo.shape[1]} nnz {coo.nnz}"]
    order = np.lexsort((coo.col, coo.row))
    for r, c, v in zip(coo.row[order], coo.col[order], coo.data[order]):
        lines.append(f"{r} {c} {v:.17g}")
    return lines


def _cmd_dump_operators(args: argparse.Namespace) -> int:
    K = _mesh_from_args(args)
    dual = build_dual(K)
    k = args.k
    lines: list[str] = []
    if k < 2:
        lines += _coo_lines(f"coboundary_d{k}", K.coboundary_matrix(k))
    lines += _coo_lines(f"hodge_star_{k}", star_matrix(dual, k))
    if k >= 1:
        lines += _coo_lines(f"codifferential_{k}", codifferential_matrix(K, dual, k))
    lines += _coo_lines(f"laplacian_{k}", hodge_laplacian_matrix(K, dual, k))
    _emit("\n".join(lines) + "\n", args.out)
    return 0


def _cmd_selftest_forms(args: argparse.Namespace) -> int:
    failures = 0

    def check(name: str, ok: bool, detail: str = "") -> None:
        nonlocal failures
        if ok:
            print(f"PASS {name}")
        else:
            failures += 1
            print(f"FAIL {name} {detail}")

    # reference-triangle quadrature against closed-form monomial integrals
    ref = np.array([[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]])
    worst = 0.0
    for a in range(21):
        for b in range(21 - a):
            exact = (
                math.factorial(a) * math.factorial(b) / math.factorial(a + b + 2)
            )
            form = PolyForm(2, (Poly2.monomial(a, b),))
            got = integrate_over_simplex(form, ref, triangle_rule(a + b))
            worst = max(worst, abs(got - exact) / exact)
    check("triangle quadrature, monomials to degree 20", worst <= 1e-13, f"rel err {worst:.2e}")

    rule = gauss_legendre_unit(6)
    worst = max(
        abs(rule.weights @ rule.points**d - 1.0 / (d + 1)) for d in range(12)
    )
    check("Gauss-Legendre segment rule, degree 11", worst <= 1e-14, f"{worst:.2e}")

    # d o d and delta o delta vanish on polynomial forms
    p = Poly2.monomial(3, 2, 1.5) + Poly2.monomial(1, 4, -2.0) + Poly2.monomial(0, 0, 0.25)
    ddp = exterior_derivative(exterior_derivative(PolyForm(0, (p,))))
    check("d(d(scalar)) = 0", ddp.components[0].max_abs() <= 1e-15 * p.max_abs())
    w2 = PolyForm(2, (Poly2.monomial(2, 3, -0.75) + Poly2.monomial(4, 0, 2.0),))
    dd2 = codifferential(codifferential(w2))
    check("delta(delta(2-form)) = 0", dd2.components[0].max_abs() <= 1e-15 * w2.components[0].max_abs())

    # pointwise Hodge star: explicit images and the double-star sign
    star_dx = hodge_star(PolyForm(1, (Poly2.constant(1.0), Poly2.zero())))
    check(
        "star(dx) = dy",
        star_dx.components[0].is_zero()
        and abs(star_dx.components[1](0.3, 0.7) - 1.0) <= 1e-15,
    )
    w1 = PolyForm(1, (Poly2.monomial(1, 1), Poly2.monomial(0, 2, -3.0)))
    ss = hodge_star(hodge_star(w1))
    dev = max(
        (ss.components[i] - Poly2.constant(-1.0) * w1.components[i]).max_abs()
        for i in range(2)
    )
    check("star(star) = -(id) on 1-forms", dev <= 1e-15)
    pts = np.array([[0.2, 0.1], [0.8, 0.4], [0.5, 0.9]])
    sw = hodge_star(w1)
    iso = max(
        abs(
            (w1.components[0](x, y) ** 2 + w1.components[1](x, y) ** 2)
            - (sw.components[0](x, y) ** 2 + sw.components[1](x, y) ** 2)
        )
        for x, y in pts
    )
    check("star is a pointwise isometry", iso <= 1e-12)

    # codifferential and Laplacian hand examples
    d1 = codifferential(PolyForm(1, (Poly2.monomial(1, 0), Poly2.zero())))
    check("delta(x dx) = -1", abs(d1.components[0](0.4, 0.9) + 1.0) <= 1e-15)
    lap = hodge_laplacian(PolyForm(0, (Poly2.monomial(2, 0) + Poly2.monomial(0, 2),)))
    check("laplacian(x^2 + y^2) = -4", abs(lap.components[0](0.1, 0.2) + 4.0) <= 1e-14)
    lap1 = hodge_laplacian(PolyForm(1, (Poly2.zero(), Poly2.monomial(1, 0))))
    check(
        "laplacian(x dy) = 0",
        max(c.max_abs() for c in lap1.components) <= 1e-15,
    )

    # de Rham map commutes with d on a mesh
    spec = MeshFamilySpec(family="symmetric", level=3)
    K = build_mesh(spec)
    for k, comps in ((0, (p,)), (1, (Poly2.monomial(2, 1), Poly2.monomial(1, 2, 0.5)))):
        form = PolyForm(k, comps)
        lhs = K.coboundary_matrix(k) @ de_rham(K, form)
        rhs = de_rham(K, exterior_derivative(form))
        rel = np.abs(lhs - rhs).max() / max(np.abs(rhs).max(), 1.0)
        check(f"coboundary(R(w)) = R(dw), k={k}", rel <= 1e-11, f"{rel:.2e}")

    # manufactured solution: centroid value and zero-mean source
    u, f = manufactured_solution(0)
    centroid = (0.5, math.sqrt(3.0) / 6.0)
    want = 1e8 / 3.0**15
    got = u.components[0](*centroid)
    check("u(centroid) = 1e8 / 3^15", abs(got - want) <= 1e-9 * want, f"{got!r}")
    total = 0.0
    for row in K.simplices(2):
        pts = K.vertices[row].copy()
        e1, e2 = pts[1] - pts[0], pts[2] - pts[0]
        if e1[0] * e2[1] - e1[1] * e2[0] < 0:
            pts[[1, 2]] = pts[[2, 1]]  # integrate with positive orientation
        total += integrate_over_simplex(PolyForm(2, f.components), pts)
    check("source term integrates to zero over the domain", abs(total) <= 1e-8, f"{total:.2e}")

    print(f"{'OK' if failures == 0 else 'FAILED'}: {failures} failures")
    return 0 if failures == 0 else 1


# -- parser ------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="declab",
        description="discrete exterior calculus convergence laboratory",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("convergence", help="run a convergence study")
    p.add_argument("--k", type=int, choices=(0, 1, 2), required=True, help="form degree")
    p.add_argument("--levels", type=_parse_levels, required=True, metavar="a..b")
    _add_mesh_args(p, with_level=False)
    p.add_argument("--format", choices=("markdown", "csv"), default="markdown")
    p.add_argument("--out", default=None, help="output path (default stdout)")
    p.add_argument("--solver-tol", type=float, default=1e-12)
    p.add_argument("--solver-maxit", type=int, default=None)
    p.set_defaults(func=_cmd_convergence)

    p = sub.add_parser("diagnostics", help="superconvergence diagnostics for one mesh")
    p.add_argument("--k", type=int, choices=(0, 1, 2), required=True)
    _add_mesh_args(p, level_required=False)
    p.add_argument("--mesh", default=None, help="read this mesh file instead of generating")
    p.add_argument("--out", default=None)
    p.set_defaults(func=_cmd_diagnostics)

    p = sub.add_parser("gen-mesh", help="generate a mesh file")
    _add_mesh_args(p)
    p.add_argument("--out", required=True, help="path of the mesh file to write")
    p.set_defaults(func=_cmd_gen_mesh)

    p = sub.add_parser("dual-report", help="primal/dual volume table")
    _add_mesh_args(p, level_required=False)
    p.add_argument("--mesh", default=None, help="read this mesh file instead of generating")
    p.add_argument("--out", default=None)
    p.set_defaults(func=_cmd_dual_report)

    p = sub.add_parser("dump-operators", help="sparse operators in coordinate text")
    p.add_argument("--k", type=int, choices=(0, 1, 2), required=True)
    _add_mesh_args(p, level_required=False)
    p.add_argument("--mesh", default=None, help="read this mesh file instead of generating")
    p.add_argument("--out", default=None)
    p.set_defaults(func=_cmd_dump_operators)

    p = sub.add_parser("selftest-forms", help="invariant battery for the form algebra")
    p.set_defaults(func=_cmd_selftest_forms)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except SolverError as exc:
        print(f"solver failure: {exc}", file=sys.stderr)
        return 2
    except MeshError as exc:
        print(f"mesh generation failure: {exc}", file=sys.stderr)
        return 3
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())

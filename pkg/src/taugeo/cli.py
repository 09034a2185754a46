"""Command-line driver: demos, the verification suite, report rendering.

Subcommands:
  demo <preset>     run a worked example and print exact values
  verify <config>   run every registered invariant suite for the preset;
                    exit code 0 iff no check failed
  report <in>       re-render an emitted JSON report (json or text)
"""
from __future__ import annotations

import argparse
import json
import sys

from .config import ConfigError, load_config
from .reports import Report, load_report, write_report
from .suites import run_suite


def _build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="taugeo",
        description="Exact verification of twisted-derivation geometry over "
                    "the q-plane, the quantum 3-sphere and matrix algebras.")
    sub = ap.add_subparsers(dest="command", required=True)

    demo = sub.add_parser("demo", help="run a worked example")
    demo.add_argument("preset", choices=["qplane", "shiftline", "matrix", "sphere"])
    demo.add_argument("--n", type=int, default=1,
                      help="qplane: x-exponent; matrix: dimension N")
    demo.add_argument("--m", type=int, default=1, help="qplane: y-exponent")
    demo.add_argument("--hbar", default="1/2", help="shiftline: step")
    demo.add_argument("--seed", type=int, default=42)
    demo.add_argument("--solve", action="store_true",
                      help="sphere: solve for the action table")
    demo.add_argument("--x-table", default=None,
                      help="sphere: JSON file with the action table")

    ver = sub.add_parser("verify", help="run the verification suite")
    ver.add_argument("config", help="JSON config file")
    ver.add_argument("--seed", type=int, default=None)
    ver.add_argument("--samples", type=int, default=None)
    ver.add_argument("--scalar", choices=["exact", "float"], default=None)
    ver.add_argument("--tolerance", type=float, default=None)
    ver.add_argument("--solve", action="store_true",
                     help="sphere: enable the action-table solver")
    ver.add_argument("--inject-negative", action="store_true",
                     help="append corrupted-input checks (expected failures)")
    ver.add_argument("--output", default=None, help="write the JSON report here")
    ver.add_argument("--format", choices=["json", "text"], default="json")

    rep = sub.add_parser("report", help="re-render a report")
    rep.add_argument("input", help="JSON report file")
    rep.add_argument("--format", choices=["json", "text"], default="text")
    rep.add_argument("--output", default=None)
    return ap


def cmd_demo(args) -> int:
    if args.preset == "qplane":
        return demo_qplane(args.n, args.m)
    if args.preset == "shiftline":
        return demo_shiftline(args.hbar)
    if args.preset == "matrix":
        return demo_matrix(args.n, args.seed)
    return demo_sphere(args)


def demo_qplane(n: int, m: int) -> int:
    from .presets import build_qplane
    from .suites import qplane_curvature_records
    qp = build_qplane()
    print(f"q-plane with nabla_X1 e1 = y^{m} e2, nabla_X2 e2 = x^{n} e1 (others 0)")
    records, conn, module = qplane_curvature_records(qp, n, m)
    from .connections import curvature
    alg = qp.presentation
    curv1 = curvature(conn, qp.lie, 0, 1, module.basis(0))
    curv2 = curvature(conn, qp.lie, 0, 1, module.basis(1))
    curvxy = curvature(conn, qp.lie, 0, 1,
                       module.element([alg.parse("x*y"), alg.zero]))
    print(f"Curv(X1,X2)e1       = {curv1}")
    print(f"Curv(X1,X2)e2       = {curv2}")
    print(f"Curv(X1,X2)(x*y*e1) = {curvxy}")
    ok = all(r.passed for r in records)
    for r in records:
        print(f"[{r.status}] {r.name}")
    return 0 if ok else 1


def demo_shiftline(hbar: str) -> int:
    from .presets import build_shift_line
    p = build_shift_line(hbar)
    alg = p.presentation
    D = p.st.X(0)
    t = alg.gen("t")
    print(f"shift line with hbar = {p.hbar}")
    for name, f in (("t", t), ("t^2", t * t), ("t^3", t * t * t), ("1", alg.one)):
        print(f"D({name}) = {D.apply(f)}")
    return 0


def demo_matrix(n: int, seed: int) -> int:
    import random

    from .connections import LieStructure, curvature
    from .matgeo import (MatrixGeometry, curvature_closed_form,
                         projective_connection)
    from .matrices import build_matrix_algebra, exact_matrix_algebra
    from .suites import default_twists
    alg = exact_matrix_algebra(n)
    st = build_matrix_algebra(default_twists(alg), check_unitary=True)
    G = MatrixGeometry(st, v0=alg.basis_vector(0))
    rng = random.Random(seed)
    gammas = [alg.random_element(rng) for _ in range(G.n)]
    L = LieStructure.flip(G.st)
    print(f"matrix algebra M_{n} with rank-one projector p = v0 v0-dagger")
    conn = projective_connection(G, gammas)
    A = conn.module.random_element(rng)
    direct = curvature(conn, L, 0, 1, A).components[0]
    closed = curvature_closed_form(G, gammas, 0, 1, A.components[0])
    print(f"definition-based Curv(X1,X2)A = {direct}")
    print(f"closed-form     Curv(X1,X2)A = {closed}")
    print(f"equal: {direct == closed}; identically zero (rank-one): {direct.is_zero()}")
    G_free = MatrixGeometry(st)
    conn2 = projective_connection(G_free, gammas)
    A2 = conn2.module.random_element(rng)
    direct2 = curvature(conn2, L, 0, 1, A2).components[0]
    closed2 = curvature_closed_form(G_free, gammas, 0, 1, A2.components[0])
    print(f"without projector, closed form still matches: {direct2 == closed2}")
    return 0 if direct == closed and direct2 == closed2 else 1


def demo_sphere(args) -> int:
    from .sphere import (XActionTable, bimodule_relation_check, build_sphere,
                         differential_d, solve_x_table, sphere_presentation)
    if args.x_table:
        alg = sphere_presentation()
        with open(args.x_table, "r", encoding="utf-8") as fh:
            table = XActionTable.from_dict(alg, json.load(fh))
    else:
        table = solve_x_table()
        print("solver report:", json.dumps(table.report, sort_keys=True))
    sph = build_sphere(table)
    alg = sph.presentation
    print("action table:")
    for name, row in table.as_dict().items():
        print(f"  {name}: {row}")
    print("symmetric derivations on generators:")
    for a in range(3):
        Y = sph.st.X(a)
        images = {g: str(Y.apply(alg.gen(g))) for g in ("a", "as", "c", "cs")}
        print(f"  Y{a+1}: {images}")
    for g in ("a", "c"):
        form = differential_d(sph, alg.gen(g))
        print(f"d({g}) = {form}")
        print(f"     = {form.eta()} in the self-adjoint basis")
    from .algebra import st_star_structure_check
    from .smodules import module_law_check
    from .sphere import differential_consistency_check, k_hat_check
    records = [
        bimodule_relation_check(sph, samples=10, seed=args.seed),
        k_hat_check(sph, samples=10, seed=args.seed),
        module_law_check(sph.omega1, samples=10, seed=args.seed),
        differential_consistency_check(sph, samples=8, seed=args.seed),
        st_star_structure_check(sph.st),
    ]
    for rec in records:
        print(f"[{rec.status}] {rec.name}: {rec.identity}")
    return 0 if all(r.passed for r in records) else 1


def cmd_verify(args) -> int:
    cfg = load_config(args.config)
    if args.seed is not None:
        cfg.seed = args.seed
    if args.samples is not None:
        cfg.samples = args.samples
    if args.scalar is not None:
        cfg.scalar = args.scalar
    if args.tolerance is not None:
        cfg.tolerance = args.tolerance
    if args.solve:
        cfg.sphere = dict(cfg.sphere, solve=True)
    if args.inject_negative:
        cfg.negative_controls = True
    report = Report(config=cfg.echo())
    report.extend(run_suite(cfg))
    out_path = args.output or cfg.output
    if out_path:
        try:
            write_report(report, out_path, fmt=args.format)
        except OSError as exc:
            print(f"cannot write report {out_path}: {exc}", file=sys.stderr)
            return 2
    print(report.to_text())
    return 0 if report.all_passed else 1


def cmd_report(args) -> int:
    report = load_report(args.input)
    text = report.to_json() if args.format == "json" else report.to_text()
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
            fh.write("\n")
    else:
        print(text)
    return 0


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        if args.command == "demo":
            return cmd_demo(args)
        if args.command == "verify":
            return cmd_verify(args)
        return cmd_report(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:
        from .algebra import AlgebraError
        from .matgeo import MatrixGeometryError
        from .matrices import MatrixError
        from .smodules import ModuleError
        from .sphere import SphereError
        if isinstance(exc, (AlgebraError, MatrixError, MatrixGeometryError,
                            ModuleError, SphereError)):
            print(f"invalid input: {exc}", file=sys.stderr)
            return 2
        raise


if __name__ == "__main__":
    sys.exit(main())

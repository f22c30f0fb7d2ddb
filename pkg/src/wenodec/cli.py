"""Command-line front end.

Subcommands:
  run            one simulation; writes profile CSVs
  converge       refinement study over orders x fluxes x mesh sizes
  compare        one case at fixed order/N across several fluxes
  riemann-exact  standalone exact Riemann solution profile

All CSV output is deterministic: fixed headers, 17-significant-digit floats,
LF line endings, and no wall-clock content (timings go to stdout).  Exit codes:
0 success (a recorded simulation crash still counts as success), 1 runtime
error such as an unwritable path, 2 usage error.
"""

import argparse
import os
import sys
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from .benchmark import ConvergenceTable, error_norms, run_and_measure
from .cases import ExactUnavailableError, UnknownCaseError, exact_solution, get_case
from .euler import GAS, conserved_to_primitive
from .fluxes import SCHEMES
from .riemann import sample, solve_star
from .solver import RunConfig, run

THREADS_ENV = "WENODEC_THREADS"


def _fmt(value):
    if value is None:
        return ""
    return format(float(value), ".17g")


def _write_csv(path, header, rows):
    try:
        with open(path, "w", newline="") as fh:
            fh.write(",".join(header) + "\n")
            for row in rows:
                fh.write(",".join(_fmt(v) if not isinstance(v, str) else v for v in row) + "\n")
    except OSError as exc:
        raise _OutputError("cannot write %s: %s" % (path, exc)) from exc
    return path


class _OutputError(RuntimeError):
    pass


def _parse_float_list(text):
    return [float(v) for v in text.split(",") if v]


def _parse_int_list(text):
    return [int(v) for v in text.split(",") if v]


def _parse_fluxes(text):
    if text == "all":
        return list(SCHEMES)
    names = [v for v in text.split(",") if v]
    for name in names:
        if name not in SCHEMES:
            raise argparse.ArgumentTypeError(
                "unknown flux %r; canonical names: %s" % (name, ", ".join(SCHEMES))
            )
    return names


def _parse_orders(text):
    orders = _parse_int_list(text)
    for p in orders:
        if p not in (3, 5, 7):
            raise argparse.ArgumentTypeError("orders must be from {3,5,7}, got %d" % p)
    return orders


def _parse_state(text):
    vals = _parse_float_list(text)
    if len(vals) != 3:
        raise argparse.ArgumentTypeError("state must be rho,u,p")
    return vals


def build_parser():
    parser = argparse.ArgumentParser(
        prog="wenodec",
        description="High-order WENO finite-volume benchmarks for the compressible "
        "Euler equations (orders 3/5/7, eight interchangeable numerical fluxes).",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, multi_flux=False, multi_order=False, multi_n=False):
        p.add_argument("--case", required=True, help="benchmark case identifier")
        if multi_order:
            p.add_argument("--orders", type=_parse_orders, default=[3, 5, 7],
                           help="comma list from {3,5,7} (default all)")
        else:
            p.add_argument("--order", type=int, choices=(3, 5, 7), default=5,
                           help="space-time order (default 5)")
        if multi_flux:
            p.add_argument("--fluxes", type=_parse_fluxes, default=list(SCHEMES),
                           help="comma list of flux names or 'all' (default all); "
                                "canonical names: %s" % ", ".join(SCHEMES))
        else:
            p.add_argument("--flux", choices=SCHEMES, default="hllc",
                           help="numerical flux (default hllc)")
        if multi_n:
            p.add_argument("--N", dest="ns", type=_parse_int_list, default=None,
                           help="comma list of mesh sizes")
        else:
            p.add_argument("--N", dest="n", type=int, default=None,
                           help="cells per direction (default: case default)")
        p.add_argument("--cfl", type=float, default=None,
                       help="CFL constant (default: 0.95 in 1D, 0.45 in 2D)")
        p.add_argument("--tf", type=float, default=None, help="final time override")
        p.add_argument("--variables", choices=("characteristic", "conserved"),
                       default="characteristic",
                       help="reconstruction variables (default characteristic)")
        p.add_argument("--outdir", default="out", help="output directory (default ./out)")

    add_common(sub.add_parser("run", help="single simulation with profile output"))
    add_common(sub.add_parser("converge", help="convergence study"),
               multi_flux=True, multi_order=True, multi_n=True)
    add_common(sub.add_parser("compare", help="flux comparison at fixed order/N"),
               multi_flux=True)

    rex = sub.add_parser("riemann-exact", help="exact Riemann solution profile")
    rex.add_argument("--left", type=_parse_state, required=True, help="rho,u,p")
    rex.add_argument("--right", type=_parse_state, required=True, help="rho,u,p")
    rex.add_argument("--time", type=float, required=True)
    rex.add_argument("--xd", type=float, default=0.5, help="initial jump location")
    rex.add_argument("--domain", type=_parse_float_list, default=[0.0, 1.0],
                     help="xl,xr sample window")
    rex.add_argument("--samples", type=int, default=1000)
    rex.add_argument("--outdir", default="out")
    return parser


def _tag(case, flux, order, n):
    return "%s_%s_o%d_N%d" % (case, flux, order, n)


def emit_profile(field, case, path_base, gas=GAS, with_exact=True):
    """Write plot-ready profile CSVs for a completed run; returns file paths."""
    mesh = field.mesh
    paths = []
    if mesh.dim == 1:
        prim = conserved_to_primitive(field.interior, gas)
        x = mesh.x_centers()
        header = ["x", "rho", "u", "p"]
        cols = [x, prim[:, 0], prim[:, 1], prim[:, 2]]
        if with_exact and case.exact is not None:
            ex = exact_solution(case, x, t=field.t, gas=gas)
            header += ["rho_exact", "u_exact", "p_exact"]
            cols += [ex[:, 0], ex[:, 1], ex[:, 2]]
        rows = list(zip(*cols))
        paths.append(_write_csv(path_base + ".csv", header, rows))
        return paths

    prim = conserved_to_primitive(field.interior, gas)
    x = mesh.x_centers()
    y = mesh.y_centers()
    rows = []
    for i in range(mesh.nx):
        for j in range(mesh.ny):
            rows.append((x[i], y[j], prim[i, j, 0], prim[i, j, 1], prim[i, j, 2], prim[i, j, 3]))
    paths.append(_write_csv(path_base + "_field.csv",
                            ["x", "y", "rho", "u", "v", "p"], rows))
    paths.append(_write_csv(path_base + "_diag.csv",
                            ["s", "rho", "u", "v", "p"], _diagonal_slice(field, gas)))
    return paths


def _diagonal_slice(field, gas):
    """Samples along y = x: the N diagonal cell centers plus the N-1 interior
    corner points (mean of the two adjacent diagonal cells); 2N-1 rows."""
    mesh = field.mesh
    if mesh.nx != mesh.ny or mesh.xlim != mesh.ylim:
        raise _OutputError("diagonal slice requires a square mesh on a square domain")
    prim = conserved_to_primitive(field.interior, gas)
    diag = np.array([prim[i, i] for i in range(mesh.nx)])
    x = mesh.x_centers()
    rows = []
    for i in range(mesh.nx):
        rows.append((x[i], diag[i, 0], diag[i, 1], diag[i, 2], diag[i, 3]))
        if i + 1 < mesh.nx:
            mid = 0.5 * (diag[i] + diag[i + 1])
            s = mesh.xlim[0] + (i + 1) * mesh.dx
            rows.append((s, mid[0], mid[1], mid[2], mid[3]))
    rows.sort(key=lambda r: r[0])
    return rows


CONVERGENCE_HEADER = ["N", "L1", "order1", "L2", "order2", "Linf", "orderInf",
                      "runtime", "crashed"]


def emit_convergence(table, path):
    """One CSV per (order, flux); crashed rows carry empty error fields.

    The runtime column is part of the fixed schema but is serialized empty so
    repeated identical invocations are byte-identical; timings are printed to
    stdout instead."""
    rows = []
    orders = [table.observed_orders(k) for k in range(3)]
    for i, rep in enumerate(table.rows):
        if rep.crashed:
            rows.append((rep.n, "", "", "", "", "", "", "", "true"))
        else:
            l1, l2, linf = rep.norms[table.variable]
            rows.append((rep.n,
                         l1, orders[0][i] if orders[0][i] is not None else "",
                         l2, orders[1][i] if orders[1][i] is not None else "",
                         linf, orders[2][i] if orders[2][i] is not None else "",
                         "", "false"))
    return _write_csv(path, CONVERGENCE_HEADER, rows)


def _threads():
    try:
        return max(1, int(os.environ.get(THREADS_ENV, "1")))
    except ValueError:
        return 1


def _print_report(tag, rep):
    if rep.crashed:
        print("%s: CRASH (%s) [%.2fs]" % (tag, rep.message, rep.runtime))
    elif rep.norms is not None:
        l1, l2, linf = rep.norms["rho"]
        print("%s: L1=%.6e L2=%.6e Linf=%.6e [%.2fs]" % (tag, l1, l2, linf, rep.runtime))
    else:
        print("%s: done [%.2fs]" % (tag, rep.runtime))


def cmd_run(args):
    case = get_case(args.case)
    n = args.n if args.n is not None else case.default_n
    cfg = RunConfig(case=case, order=args.order, scheme=args.flux, n=n,
                    cfl=args.cfl, t_final=args.tf, variable_mode=args.variables)
    result = run(cfg)
    os.makedirs(args.outdir, exist_ok=True)
    tag = _tag(case.name, args.flux, args.order, n)
    if result.crashed:
        print("%s: CRASH at t=%.6g after %d steps: %s [%.2fs]"
              % (tag, result.crash_time, result.steps, result.message, result.wall_time))
        return 0
    paths = emit_profile(result.field, case, os.path.join(args.outdir, "profile_" + tag))
    if case.exact is not None:
        rep = error_norms(result.field, case, args.order, runtime=result.wall_time)
        _print_report(tag, rep)
    else:
        print("%s: completed %d steps to t=%.6g [%.2fs]"
              % (tag, result.steps, result.field.t, result.wall_time))
    for p in paths:
        print("wrote %s" % p)
    return 0


def _study_jobs(case, orders, fluxes, ns, args):
    jobs = []
    for order in orders:
        for flux in fluxes:
            for n in ns:
                jobs.append((order, flux, n))
    results = {}

    def work(job):
        order, flux, n = job
        return job, run_and_measure(case, order, flux, n, cfl=args.cfl,
                                    t_final=args.tf, variable_mode=args.variables)

    nthreads = _threads()
    if nthreads > 1:
        with ThreadPoolExecutor(max_workers=nthreads) as pool:
            for job, pair in pool.map(work, jobs):
                results[job] = pair
    else:
        for job in jobs:
            results[job] = work(job)[1]
    return results


def cmd_converge(args):
    case = get_case(args.case)
    if case.exact is None:
        print("case %r has no exact solution; converge is unavailable" % case.name,
              file=sys.stderr)
        return 1
    ns = args.ns if args.ns else [case.default_n, 2 * case.default_n]
    results = _study_jobs(case, args.orders, args.fluxes, ns, args)
    os.makedirs(args.outdir, exist_ok=True)
    for order in args.orders:
        for flux in args.fluxes:
            table = ConvergenceTable(case=case.name, scheme=flux, order=order)
            for n in ns:
                rep, _ = results[(order, flux, n)]
                table.rows.append(rep)
                _print_report(_tag(case.name, flux, order, n), rep)
            path = os.path.join(args.outdir,
                                "convergence_%s_%s_o%d.csv" % (case.name, flux, order))
            print("wrote %s" % emit_convergence(table, path))
    return 0


def cmd_compare(args):
    case = get_case(args.case)
    n = args.n if args.n is not None else case.default_n
    results = _study_jobs(case, [args.order], args.fluxes, [n], args)
    os.makedirs(args.outdir, exist_ok=True)
    rows = []
    for flux in args.fluxes:
        rep, result = results[(args.order, flux, n)]
        _print_report(_tag(case.name, flux, args.order, n), rep)
        if rep.crashed:
            rows.append((flux, "true", "", "", ""))
            continue
        if rep.norms is not None:
            l1, l2, linf = rep.norms["rho"]
            rows.append((flux, "false", l1, l2, linf))
        else:
            rows.append((flux, "false", "", "", ""))
        emit_profile(result.field, case,
                     os.path.join(args.outdir, "profile_" + _tag(case.name, flux, args.order, n)))
    path = os.path.join(args.outdir, "compare_%s_o%d_N%d.csv" % (case.name, args.order, n))
    print("wrote %s" % _write_csv(path, ["flux", "crashed", "L1", "L2", "Linf"], rows))
    return 0


def cmd_riemann_exact(args):
    left = np.array(args.left)
    right = np.array(args.right)
    star = solve_star(left, right)
    xl, xr = args.domain
    x = np.linspace(xl, xr, args.samples)
    if args.time > 0.0:
        prim = sample(left, right, star, (x - args.xd) / args.time)
    else:
        prim = np.where((x < args.xd)[:, None], left, right)
    os.makedirs(args.outdir, exist_ok=True)
    path = os.path.join(args.outdir, "riemann_exact_t%g.csv" % args.time)
    _write_csv(path, ["x", "rho", "u", "p"],
               list(zip(x, prim[:, 0], prim[:, 1], prim[:, 2])))
    print("p_star=%s u_star=%s" % (_fmt(star.p), _fmt(star.u)))
    print("wrote %s" % path)
    return 0


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    handlers = {
        "run": cmd_run,
        "converge": cmd_converge,
        "compare": cmd_compare,
        "riemann-exact": cmd_riemann_exact,
    }
    try:
        return handlers[args.command](args)
    except (UnknownCaseError, ExactUnavailableError) as exc:
        parser.exit(2, "%s\n" % exc)
    except (_OutputError, OSError) as exc:
        print(str(exc), file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())

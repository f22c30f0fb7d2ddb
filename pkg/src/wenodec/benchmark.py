"""Error norms against exact solutions, convergence studies, and the
second-order MUSCL reference solver (characteristic minmod slopes, exact
Riemann fluxes, SSPRK2) used for cases without closed-form solutions.

Errors are measured on cell averages: the exact cell averages are computed
with the same Gauss-Legendre rule used for initialization at the scheme's
order, and the discrete norms carry the cell-volume weight.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from .cases import exact_solution
from .dec import ssprk2_step
from .euler import GAS, eigensystem, primitive_to_conserved
from .fluxes import FluxContext, flux_exact
from .solver import (RunConfig, build_mesh, compute_dt, fill_ghosts, initialize,
                     run, validate_averages)
from .weno import gauss_legendre

VARIABLE_NAMES = {3: ("rho", "mom_x", "energy"), 4: ("rho", "mom_x", "mom_y", "energy")}


@dataclass
class ErrorReport:
    """Per-variable discrete norms for one run; crashed runs carry no norms."""

    n: int
    norms: dict = None  # name -> (l1, l2, linf)
    runtime: float = 0.0
    crashed: bool = False
    message: str = ""


@dataclass
class ConvergenceTable:
    """ErrorReports over a refinement sequence plus observed orders
    log2(e_N / e_2N), defined only between consecutive successful rows."""

    case: str
    scheme: str
    order: int
    variable: str = "rho"
    rows: list = field(default_factory=list)

    def errors(self, norm_index=0):
        return [
            None if row.crashed else row.norms[self.variable][norm_index]
            for row in self.rows
        ]

    def observed_orders(self, norm_index=0):
        errs = self.errors(norm_index)
        out = [None]
        for prev, cur in zip(errs, errs[1:]):
            if prev is None or cur is None or cur == 0.0:
                out.append(None)
            else:
                out.append(math.log2(prev / cur))
        return out


def exact_cell_averages(case, mesh, t, order, gas=GAS):
    """Exact conserved cell averages by the initialization quadrature rule."""
    npts = (order + 1) // 2
    nodes, wts = gauss_legendre(npts)
    if mesh.dim == 1:
        x = mesh.x_centers()[:, None] + nodes[None, :] * mesh.dx
        prim = exact_solution(case, x, t=t, gas=gas)
        cons = primitive_to_conserved(prim, gas)
        return np.einsum("q,xqc->xc", wts, cons)
    x = mesh.x_centers()[:, None, None, None] + nodes[None, None, :, None] * mesh.dx
    y = mesh.y_centers()[None, :, None, None] + nodes[None, None, None, :] * mesh.dy
    prim = exact_solution(case, x, y, t=t, gas=gas)
    cons = primitive_to_conserved(prim, gas)
    return np.einsum("p,q,xypqc->xyc", wts, wts, cons)


def error_norms(field_, case, order, gas=GAS, runtime=0.0):
    """L1/L2/Linf errors of the cell averages against exact cell averages."""
    mesh = field_.mesh
    exact = exact_cell_averages(case, mesh, field_.t, order, gas)
    err = field_.interior - exact
    vol = mesh.dx if mesh.dim == 1 else mesh.dx * mesh.dy
    axes = tuple(range(err.ndim - 1))
    l1 = vol * np.sum(np.abs(err), axis=axes)
    l2 = np.sqrt(vol * np.sum(err * err, axis=axes))
    linf = np.max(np.abs(err), axis=axes)
    names = VARIABLE_NAMES[err.shape[-1]]
    norms = {name: (float(l1[k]), float(l2[k]), float(linf[k]))
             for k, name in enumerate(names)}
    return ErrorReport(n=mesh.nx, norms=norms, runtime=runtime)


def run_and_measure(case, order, scheme, n, cfl=None, t_final=None,
                    variable_mode="characteristic", gas=GAS):
    """One run folded into an ErrorReport (crash recorded, not raised)."""
    cfg = RunConfig(case=case, order=order, scheme=scheme, n=n, cfl=cfl,
                    t_final=t_final, variable_mode=variable_mode, gas=gas)
    result = run(cfg)
    if result.crashed:
        return ErrorReport(n=n, crashed=True, message=result.message,
                           runtime=result.wall_time), result
    report = error_norms(result.field, case, order, gas, runtime=result.wall_time)
    return report, result


def convergence_study(case, scheme, orders, ns, cfl=None, t_final=None,
                      variable_mode="characteristic", gas=GAS, variable="rho"):
    """Run each (order, N); crashes become data rows, never exceptions."""
    tables = {}
    for order in orders:
        table = ConvergenceTable(case=case.name, scheme=scheme, order=order,
                                 variable=variable)
        for n in ns:
            report, _ = run_and_measure(case, order, scheme, n, cfl=cfl,
                                        t_final=t_final,
                                        variable_mode=variable_mode, gas=gas)
            table.rows.append(report)
        tables[order] = table
    return tables


def minmod(a, b):
    """Componentwise minmod slope limiter."""
    return 0.5 * (np.sign(a) + np.sign(b)) * np.minimum(np.abs(a), np.abs(b))


def _muscl_traces_1d(u, gas):
    """Second-order traces from characteristic minmod slopes.

    u holds all cells with both neighbors available; returns the per-cell
    left/right edge values."""
    center = u[1:-1]
    d_minus = center - u[:-2]
    d_plus = u[2:] - center
    _, rmat, lmat = eigensystem(center, (1.0, 0.0), gas)
    w_minus = np.einsum("aij,aj->ai", lmat, d_minus)
    w_plus = np.einsum("aij,aj->ai", lmat, d_plus)
    sigma = np.einsum("aij,aj->ai", rmat, minmod(w_minus, w_plus))
    return center - 0.5 * sigma, center + 0.5 * sigma


def _muscl_rhs_1d(field_, gas):
    u = field_.u
    lo, hi = _muscl_traces_1d(u, gas)
    left = hi[:-1]
    right = lo[1:]
    f = flux_exact(left, right, FluxContext(gas=gas))
    return -(f[1:] - f[:-1]) / field_.mesh.dx


def _muscl_rhs_2d(field_, gas):
    u = field_.u
    mesh = field_.mesh
    rhs = np.zeros_like(u[1:-1, 1:-1])

    # x-direction: slopes per row block, faces at midpoints (2nd order).
    lo, hi = _muscl_traces_2d(u, gas, axis=0)
    f = flux_exact(hi[:-1], lo[1:], FluxContext(gas=gas, direction=(1.0, 0.0)))
    rhs -= (f[1:] - f[:-1]) / mesh.dx

    lo, hi = _muscl_traces_2d(u, gas, axis=1)
    g = flux_exact(hi[:, :-1], lo[:, 1:], FluxContext(gas=gas, direction=(0.0, 1.0)))
    rhs -= (g[:, 1:] - g[:, :-1]) / mesh.dy
    return rhs


def _muscl_traces_2d(u, gas, axis):
    direction = (1.0, 0.0) if axis == 0 else (0.0, 1.0)
    if axis == 0:
        center = u[1:-1, 1:-1]
        d_minus = center - u[:-2, 1:-1]
        d_plus = u[2:, 1:-1] - center
    else:
        center = u[1:-1, 1:-1]
        d_minus = center - u[1:-1, :-2]
        d_plus = u[1:-1, 2:] - center
    _, rmat, lmat = eigensystem(center, direction, gas)
    w_minus = np.einsum("abij,abj->abi", lmat, d_minus)
    w_plus = np.einsum("abij,abj->abi", lmat, d_plus)
    sigma = np.einsum("abij,abj->abi", rmat, minmod(w_minus, w_plus))
    return center - 0.5 * sigma, center + 0.5 * sigma


def reference_run(case, n, cfl=None, gas=GAS, t_final=None):
    """MUSCL + SSPRK2 + exact-Riemann reference solution on an n(-squared) mesh."""
    mesh = build_mesh(case, n, ghost=2)
    field_ = initialize(case.ic, mesh, order=3, gas=gas)
    if cfl is None:
        cfl = 0.5 if case.dim == 1 else 0.25
    t_final = case.t_final if t_final is None else t_final
    scratch = field_.copy()

    def rhs(_t, interior):
        scratch.interior[...] = interior
        fill_ghosts(scratch, case.boundary, gas)
        if mesh.dim == 1:
            return _muscl_rhs_1d(scratch, gas)
        return _muscl_rhs_2d(scratch, gas)

    while field_.t < t_final:
        dt = compute_dt(field_, cfl, gas, t_final)
        if dt <= 0.0:
            break
        arrived = dt == t_final - field_.t
        new_interior = ssprk2_step(field_.interior, dt, rhs, field_.t)
        validate_averages(new_interior, gas)
        field_.interior[...] = new_interior
        field_.t = t_final if arrived else field_.t + dt
    fill_ghosts(field_, case.boundary, gas)
    return field_

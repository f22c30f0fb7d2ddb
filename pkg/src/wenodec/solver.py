"""Finite-volume driver: uniform Cartesian meshes, ghost-cell boundary
handling, semidiscrete right-hand side assembly, CFL time-step control, and
the bDeC time loop.

Crashes (NaN/Inf or a positivity violation in a trace or cell average) abort
the run and are reported in the result log, never swallowed; the first
failing index in row-major order is the one recorded.
"""

import time
from dataclasses import dataclass

import numpy as np

from . import weno
from .dec import build_tableau, bdec_step
from .euler import GAS, InvalidStateError, _split, primitive_to_conserved
from .fluxes import ConfigurationError, FluxContext, numerical_flux
from .riemann import RiemannConvergenceError, VacuumError
from .weno import FACE_QUADRATURE, WenoConfig, gauss_legendre, order_to_r

CRASH_SIGNALS = (InvalidStateError, VacuumError, RiemannConvergenceError)


@dataclass(frozen=True)
class Mesh:
    dim: int
    xlim: tuple
    nx: int
    dx: float
    ghost: int
    ylim: tuple = None
    ny: int = None
    dy: float = None

    def x_centers(self):
        return self.xlim[0] + (np.arange(self.nx) + 0.5) * self.dx

    def y_centers(self):
        return self.ylim[0] + (np.arange(self.ny) + 0.5) * self.dy


def make_mesh_1d(xlim, nx, ghost):
    dx = (xlim[1] - xlim[0]) / nx
    return Mesh(dim=1, xlim=tuple(xlim), nx=nx, dx=dx, ghost=ghost)


def make_mesh_2d(xlim, ylim, nx, ny, ghost):
    dx = (xlim[1] - xlim[0]) / nx
    dy = (ylim[1] - ylim[0]) / ny
    return Mesh(dim=2, xlim=tuple(xlim), nx=nx, dx=dx, ghost=ghost,
                ylim=tuple(ylim), ny=ny, dy=dy)


@dataclass
class CellField:
    """Cell-averaged conserved states on a mesh, ghost layers included."""

    mesh: Mesh
    u: np.ndarray
    t: float = 0.0

    @property
    def interior(self):
        g = self.mesh.ghost
        if self.mesh.dim == 1:
            return self.u[g:-g]
        return self.u[g:-g, g:-g]

    def copy(self):
        return CellField(mesh=self.mesh, u=self.u.copy(), t=self.t)


@dataclass(frozen=True)
class Boundary:
    """One side's boundary rule: periodic, transmissive, or inflow(state)."""

    kind: str
    state: tuple = None  # primitive, inflow only

    def __post_init__(self):
        if self.kind not in ("periodic", "transmissive", "inflow"):
            raise ValueError("unknown boundary kind %r" % (self.kind,))
        if self.kind == "inflow" and self.state is None:
            raise ValueError("inflow boundary needs a primitive state")


PERIODIC = Boundary("periodic")
TRANSMISSIVE = Boundary("transmissive")


def _check_paired(a, b, axis):
    if (a.kind == "periodic") != (b.kind == "periodic"):
        raise ValueError("periodic boundaries must be paired along %s" % axis)


def fill_ghosts(field, bcs, gas=GAS):
    """Populate ghost layers in place; 2D corners get the x-rule then the y-rule."""
    g = field.mesh.ghost
    u = field.u
    if field.mesh.dim == 1:
        lo, hi = bcs
        _check_paired(lo, hi, "x")
        n = field.mesh.nx
        _fill_side(u, lo, hi, g, n, gas)
        return field
    lo, hi, bottom, top = bcs
    _check_paired(lo, hi, "x")
    _check_paired(bottom, top, "y")
    _fill_side(u, lo, hi, g, field.mesh.nx, gas)
    uy = u.swapaxes(0, 1)
    _fill_side(uy, bottom, top, g, field.mesh.ny, gas)
    return field


def _fill_side(u, lo, hi, g, n, gas):
    """Fill the leading/trailing g slots along axis 0 (all other axes whole)."""
    if lo.kind == "periodic":
        u[:g] = u[n : n + g]
        u[n + g :] = u[g : 2 * g]
        return
    for bc, sl, edge in ((lo, np.s_[:g], g), (hi, np.s_[n + g :], n + g - 1)):
        if bc.kind == "transmissive":
            u[sl] = u[edge : edge + 1]
        else:
            u[sl] = primitive_to_conserved(np.asarray(bc.state, dtype=float), gas)


def _check_finite(arr, what):
    bad = ~np.isfinite(arr)
    if np.any(bad):
        idx = np.unravel_index(int(np.argmax(bad)), bad.shape)
        raise InvalidStateError("non-finite %s" % what, where=idx)


def validate_averages(interior, gas=GAS):
    rho, _, _, p = _split(interior, gas.gamma)
    bad = ~(rho > 0.0) | ~(p > 0.0) | ~np.isfinite(rho) | ~np.isfinite(p)
    if np.any(bad):
        idx = np.unravel_index(int(np.argmax(bad)), bad.shape)
        raise InvalidStateError("non-physical cell average", where=idx)


def semidiscrete_rhs(field, scheme, wcfg, gas=GAS, dt=None):
    """Flux-divergence right-hand side d/dt(cell averages) on the interior.

    Ghost layers must be filled.  For lxf/force the current step's dt must be
    supplied so the per-direction mesh ratios can be bound into the flux."""
    mesh = field.mesh
    if mesh.dim == 1:
        left, right = weno.reconstruct_faces_1d(field.u, wcfg, gas)
        ctx = FluxContext(gas=gas, direction=(1.0, 0.0),
                          dx_over_dt=(mesh.dx / dt if dt is not None else None))
        f = numerical_flux(scheme, left, right, ctx)
        _check_finite(f, "face flux")
        return -(f[1:] - f[:-1]) / mesh.dx

    nq = FACE_QUADRATURE[wcfg.order]
    _, wq = gauss_legendre(nq)
    xl, xr, yl, yr = weno.reconstruct_faces_2d(field.u, wcfg, gas)
    ctx_x = FluxContext(gas=gas, direction=(1.0, 0.0),
                        dx_over_dt=(mesh.dx / dt if dt is not None else None))
    ctx_y = FluxContext(gas=gas, direction=(0.0, 1.0),
                        dx_over_dt=(mesh.dy / dt if dt is not None else None))
    fx = numerical_flux(scheme, xl, xr, ctx_x)
    fy = numerical_flux(scheme, yl, yr, ctx_y)
    _check_finite(fx, "x-face flux")
    _check_finite(fy, "y-face flux")
    fxa = np.einsum("q,ijqc->ijc", wq, fx)
    fya = np.einsum("q,ijqc->ijc", wq, fy)
    return -(fxa[1:] - fxa[:-1]) / mesh.dx - (fya[:, 1:] - fya[:, :-1]) / mesh.dy


def compute_dt(field, cfl, gas=GAS, t_final=None):
    """CFL time step from the interior averages, clamped to land on t_final."""
    interior = field.interior
    validate_averages(interior, gas)
    rho, u, v, p = _split(interior, gas.gamma)
    c = np.sqrt(gas.gamma * p / rho)
    sx = np.max(np.abs(u) + c)
    dt = cfl * field.mesh.dx / sx
    if v is not None:
        sy = np.max(np.abs(v) + c)
        dt = min(dt, cfl * field.mesh.dy / np.max(sy))
    if not np.isfinite(dt) or dt <= 0.0:
        raise InvalidStateError("non-finite or non-positive time step")
    if t_final is not None and field.t + dt >= t_final:
        dt = t_final - field.t
    return dt


def initialize(ic, mesh, order, gas=GAS):
    """Cell averages of the initial condition via tensor Gauss-Legendre
    quadrature with ceil(order/2) points per direction."""
    npts = (order + 1) // 2
    nodes, wts = gauss_legendre(npts)
    if mesh.dim == 1:
        x = mesh.x_centers()[:, None] + nodes[None, :] * mesh.dx
        prim = ic(x)
        cons = primitive_to_conserved(prim, gas)
        avg = np.einsum("q,xqc->xc", wts, cons)
        u = np.empty((mesh.nx + 2 * mesh.ghost, cons.shape[-1]))
        u[mesh.ghost : -mesh.ghost] = avg
    else:
        x = mesh.x_centers()[:, None, None, None] + nodes[None, None, :, None] * mesh.dx
        y = mesh.y_centers()[None, :, None, None] + nodes[None, None, None, :] * mesh.dy
        prim = ic(x, y)
        cons = primitive_to_conserved(prim, gas)
        avg = np.einsum("p,q,xypqc->xyc", wts, wts, cons)
        u = np.empty((mesh.nx + 2 * mesh.ghost, mesh.ny + 2 * mesh.ghost, cons.shape[-1]))
        u[mesh.ghost : -mesh.ghost, mesh.ghost : -mesh.ghost] = avg
    return CellField(mesh=mesh, u=u, t=0.0)


@dataclass(frozen=True)
class RunConfig:
    """One simulation: a benchmark case, discretization order, flux scheme,
    mesh resolution, and optional overrides of the case defaults."""

    case: object
    order: int
    scheme: str
    n: int
    cfl: float = None
    t_final: float = None
    variable_mode: str = "characteristic"
    gas: object = None

    def __post_init__(self):
        if self.order not in (3, 5, 7):
            raise ConfigurationError("order must be 3, 5 or 7, got %r" % (self.order,))
        if self.gas is None:
            object.__setattr__(self, "gas", GAS)


@dataclass
class RunResult:
    field: CellField
    steps: int
    crashed: bool = False
    message: str = ""
    crash_time: float = None
    wall_time: float = 0.0

    @property
    def completed(self):
        return not self.crashed


def build_mesh(case, n, ghost):
    if case.dim == 1:
        return make_mesh_1d(case.xlim, n, ghost)
    return make_mesh_2d(case.xlim, case.ylim, n, n, ghost)


def run(config):
    """Advance the configured case from t=0 to T_f; crashes become log entries."""
    case = config.case
    gas = config.gas
    r = order_to_r(config.order)
    wcfg = WenoConfig(r=r, variable_mode=config.variable_mode)
    mesh = build_mesh(case, config.n, ghost=r)
    tableau = build_tableau(config.order)
    cfl = config.cfl if config.cfl is not None else case.cfl
    t_final = config.t_final if config.t_final is not None else case.t_final
    needs_ratio = config.scheme in ("lxf", "force")

    start = time.perf_counter()
    field = initialize(case.ic, mesh, config.order, gas)
    scratch = field.copy()

    def rhs_at(dt_step):
        def rhs(t, interior):
            scratch.interior[...] = interior
            fill_ghosts(scratch, case.boundary, gas)
            return semidiscrete_rhs(scratch, config.scheme, wcfg, gas,
                                    dt=dt_step if needs_ratio else None)

        return rhs

    steps = 0
    try:
        while field.t < t_final:
            dt = compute_dt(field, cfl, gas, t_final)
            if dt <= 0.0:
                break
            arrived = dt == t_final - field.t
            new_interior = bdec_step(field.interior, dt, rhs_at(dt), tableau, field.t)
            validate_averages(new_interior, gas)
            field.interior[...] = new_interior
            field.t = t_final if arrived else field.t + dt
            steps += 1
    except CRASH_SIGNALS as exc:
        return RunResult(field=field, steps=steps, crashed=True, message=str(exc),
                         crash_time=field.t, wall_time=time.perf_counter() - start)
    fill_ghosts(field, case.boundary, gas)
    return RunResult(field=field, steps=steps, wall_time=time.perf_counter() - start)

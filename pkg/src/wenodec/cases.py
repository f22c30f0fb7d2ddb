"""Benchmark case catalog: initial conditions, boundary rules, final times,
and exact-solution handles for the 1D/2D Euler test problems.

All nine case families are constructible without external files: a smooth
1D density advection, four 1D Riemann problems (1, 5, 6, 7), the modified
shock-turbulence interaction, the 2D isentropic vortex (short and long time),
and the 2D explosion problem.
"""

from dataclasses import dataclass
from functools import partial

import numpy as np

from .euler import GAS
from .riemann import sample, solve_star
from .solver import PERIODIC, TRANSMISSIVE, Boundary


class UnknownCaseError(ValueError):
    pass


class ExactUnavailableError(ValueError):
    """Raised for cases without an exact solution; use reference_run instead."""


@dataclass(frozen=True)
class CaseSpec:
    name: str
    dim: int
    xlim: tuple
    t_final: float
    cfl: float
    boundary: tuple
    ic: callable
    exact: str = None  # "advection" | "riemann" | "vortex" | None
    ylim: tuple = None
    riemann_states: tuple = None  # ((rho,u,p)_L, (rho,u,p)_R, x_d)
    default_n: int = 100


def _stack(*comps):
    return np.stack([np.broadcast_to(c, np.broadcast_shapes(*map(np.shape, comps)))
                     for c in comps], axis=-1)


def ic_advection(x):
    """Smooth density profile 2 + sin^4(pi x) advected with u = p = 1."""
    x = np.asarray(x, dtype=float)
    return _stack(2.0 + np.sin(np.pi * x) ** 4, 1.0, 1.0)


def ic_riemann(x, left=None, right=None, x_d=0.5):
    x = np.asarray(x, dtype=float)
    l = np.asarray(left, dtype=float)
    r = np.asarray(right, dtype=float)
    return np.where((x < x_d)[..., None], l, r)


def ic_shock_turbulence(x):
    x = np.asarray(x, dtype=float)
    wave = _stack(1.0 + 0.1 * np.sin(20.0 * np.pi * x), 0.0, 1.0)
    inflow = np.array([1.515695, 0.523346, 1.80500])
    return np.where((x < -4.5)[..., None], inflow, wave)


VORTEX_STRENGTH = 5.0
VORTEX_SPEED = (1.0, 1.0)


def ic_vortex(x, y, gas=GAS):
    """Isentropic vortex centered at the origin riding a (1, 1) background."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    gamma = gas.gamma
    r2 = x * x + y * y
    factor = VORTEX_STRENGTH / (2.0 * np.pi) * np.exp(0.5 * (1.0 - r2))
    dtemp = -(gamma - 1.0) * VORTEX_STRENGTH**2 / (8.0 * gamma * np.pi**2) * np.exp(1.0 - r2)
    rho = (1.0 + dtemp) ** (1.0 / (gamma - 1.0))
    p = (1.0 + dtemp) ** (gamma / (gamma - 1.0))
    return _stack(rho, VORTEX_SPEED[0] - factor * y, VORTEX_SPEED[1] + factor * x, p)


def ic_explosion(x, y):
    """Radial jump at r = 0.4: the multidimensional analogue of the shock tube."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    inside = x * x + y * y < 0.4**2
    inner = np.array([1.0, 0.0, 0.0, 1.0])
    outer = np.array([0.125, 0.0, 0.0, 0.1])
    return np.where(inside[..., None], inner, outer)


RP_TABLE = {
    "rp1": ((1.0, 0.75, 1.0), (0.125, 0.0, 0.1), 0.3, 0.2),
    "rp5": ((1.0, -19.59745, 1000.0), (1.0, -19.59745, 0.01), 0.8, 0.012),
    "rp6": ((1.4, 0.0, 1.0), (1.0, 0.0, 1.0), 0.5, 2.0),
    "rp7": ((1.4, 0.1, 1.0), (1.0, 0.1, 1.0), 0.5, 2.0),
}


def _riemann_case(name):
    left, right, x_d, t_final = RP_TABLE[name]
    return CaseSpec(
        name=name,
        dim=1,
        xlim=(0.0, 1.0),
        t_final=t_final,
        cfl=0.95,
        boundary=(TRANSMISSIVE, TRANSMISSIVE),
        ic=partial(ic_riemann, left=np.array(left), right=np.array(right), x_d=x_d),
        exact="riemann",
        riemann_states=(left, right, x_d),
        default_n=100,
    )


def case_catalog():
    """All nine case families with the benchmark parameters as defaults."""
    inflow_state = (1.515695, 0.523346, 1.80500)
    cases = [
        CaseSpec(
            name="advection", dim=1, xlim=(-1.0, 1.0), t_final=2.0, cfl=0.95,
            boundary=(PERIODIC, PERIODIC), ic=ic_advection, exact="advection",
            default_n=160,
        ),
        _riemann_case("rp1"),
        _riemann_case("rp5"),
        _riemann_case("rp6"),
        _riemann_case("rp7"),
        CaseSpec(
            name="shock_turbulence", dim=1, xlim=(-5.0, 5.0), t_final=5.0, cfl=0.95,
            boundary=(Boundary("inflow", inflow_state), TRANSMISSIVE),
            ic=ic_shock_turbulence, default_n=1000,
        ),
        CaseSpec(
            name="vortex", dim=2, xlim=(-10.0, 10.0), ylim=(-10.0, 10.0),
            t_final=0.1, cfl=0.45,
            boundary=(PERIODIC, PERIODIC, PERIODIC, PERIODIC),
            ic=ic_vortex, exact="vortex", default_n=50,
        ),
        CaseSpec(
            name="vortex_long", dim=2, xlim=(-5.0, 5.0), ylim=(-5.0, 5.0),
            t_final=100.0, cfl=0.45,
            boundary=(PERIODIC, PERIODIC, PERIODIC, PERIODIC),
            ic=ic_vortex, exact="vortex", default_n=50,
        ),
        CaseSpec(
            name="explosion", dim=2, xlim=(-1.0, 1.0), ylim=(-1.0, 1.0),
            t_final=0.25, cfl=0.45,
            boundary=(TRANSMISSIVE,) * 4, ic=ic_explosion, default_n=50,
        ),
    ]
    return {c.name: c for c in cases}


_CATALOG = None


def get_case(name):
    global _CATALOG
    if _CATALOG is None:
        _CATALOG = case_catalog()
    try:
        return _CATALOG[name]
    except KeyError:
        raise UnknownCaseError(
            "unknown case %r; available: %s" % (name, ", ".join(sorted(_CATALOG)))
        ) from None


def _wrap(x, lim):
    width = lim[1] - lim[0]
    return lim[0] + np.mod(x - lim[0], width)


def exact_solution(case, x, y=None, t=0.0, gas=GAS):
    """Pointwise exact primitive state of a case at time t.

    Available for the advection, Riemann-problem, and vortex families; other
    cases raise ExactUnavailableError (generate a reference_run instead)."""
    if case.exact == "advection":
        return case.ic(_wrap(np.asarray(x, dtype=float) - 1.0 * t, case.xlim))
    if case.exact == "vortex":
        return case.ic(
            _wrap(np.asarray(x, dtype=float) - VORTEX_SPEED[0] * t, case.xlim),
            _wrap(np.asarray(y, dtype=float) - VORTEX_SPEED[1] * t, case.ylim),
        )
    if case.exact == "riemann":
        left, right, x_d = case.riemann_states
        x = np.asarray(x, dtype=float)
        if t == 0.0:
            return case.ic(x)
        l = np.asarray(left, dtype=float)
        r = np.asarray(right, dtype=float)
        star = solve_star(l, r, gas)
        return sample(l, r, star, (x - x_d) / t, gas)
    raise ExactUnavailableError(
        "case %r has no exact solution; use benchmark.reference_run" % (case.name,)
    )

"""Compressible Euler equations: state conversions, physical fluxes, wave
speeds, and the directional eigensystem used for characteristic projection.

States are numpy arrays with the component axis last: (rho, rho*u, E) in 1D,
(rho, rho*u, rho*v, E) in 2D.  The dimensionality is inferred from the number
of components.  All operations are pure and broadcast over leading axes.
"""

from dataclasses import dataclass

import numpy as np

X_DIR = (1.0, 0.0)
Y_DIR = (0.0, 1.0)


class InvalidStateError(ValueError):
    """Non-positive density/pressure or non-finite entry in a state."""

    def __init__(self, message, where=None):
        if where is not None:
            message = "%s (first offending index %s)" % (message, where)
        super().__init__(message)
        self.where = where


@dataclass(frozen=True)
class GasModel:
    """Ideal gas law p = (gamma - 1) * rho * e with constant gamma."""

    gamma: float = 1.4

    def __post_init__(self):
        if not self.gamma > 1.0:
            raise ValueError("adiabatic index must exceed 1, got %r" % (self.gamma,))


GAS = GasModel()


def _first_bad(mask):
    """Row-major index of the first True entry, for reproducible crash logs."""
    flat = int(np.argmax(mask))
    return np.unravel_index(flat, mask.shape)


def _check_positive(name, value):
    value = np.asarray(value)
    bad = ~(value > 0.0) | ~np.isfinite(value)
    if np.any(bad):
        where = _first_bad(bad)
        raise InvalidStateError(
            "%s must be positive and finite, got %r" % (name, float(value[where])),
            where=where,
        )


def primitive_to_conserved(prim, gas=GAS):
    """(rho, u[, v], p) -> (rho, rho*u[, rho*v], E) with E = p/(gamma-1) + kinetic."""
    prim = np.asarray(prim, dtype=float)
    rho = prim[..., 0]
    p = prim[..., -1]
    _check_positive("density", rho)
    _check_positive("pressure", p)
    out = np.empty_like(prim)
    out[..., 0] = rho
    ke = np.zeros_like(rho)
    for k in range(1, prim.shape[-1] - 1):
        out[..., k] = rho * prim[..., k]
        ke += prim[..., k] ** 2
    out[..., -1] = p / (gas.gamma - 1.0) + 0.5 * rho * ke
    return out


def conserved_to_primitive(cons, gas=GAS):
    """Exact algebraic inverse of primitive_to_conserved."""
    cons = np.asarray(cons, dtype=float)
    rho = cons[..., 0]
    _check_positive("density", rho)
    out = np.empty_like(cons)
    out[..., 0] = rho
    ke = np.zeros_like(rho)
    for k in range(1, cons.shape[-1] - 1):
        vel = cons[..., k] / rho
        out[..., k] = vel
        ke += vel**2
    p = (gas.gamma - 1.0) * (cons[..., -1] - 0.5 * rho * ke)
    _check_positive("reconstructed pressure", p)
    out[..., -1] = p
    return out


def _split(cons, gamma):
    """Unvalidated decode of a conserved state into rho, velocities, p."""
    rho = cons[..., 0]
    if cons.shape[-1] == 3:
        u = cons[..., 1] / rho
        p = (gamma - 1.0) * (cons[..., 2] - 0.5 * rho * u * u)
        return rho, u, None, p
    u = cons[..., 1] / rho
    v = cons[..., 2] / rho
    p = (gamma - 1.0) * (cons[..., 3] - 0.5 * rho * (u * u + v * v))
    return rho, u, v, p


def validate_conserved(cons, gas=GAS, what="state"):
    """Positivity/finiteness check used on traces and cell averages."""
    rho, _, _, p = _split(np.asarray(cons, dtype=float), gas.gamma)
    bad = ~(rho > 0.0) | ~(p > 0.0) | ~np.isfinite(rho) | ~np.isfinite(p)
    if np.any(bad):
        raise InvalidStateError("non-physical %s" % what, where=_first_bad(bad))


def sound_speed(prim, gas=GAS):
    """c = sqrt(gamma * p / rho)."""
    prim = np.asarray(prim, dtype=float)
    rho = prim[..., 0]
    p = prim[..., -1]
    _check_positive("density", rho)
    _check_positive("pressure", p)
    return np.sqrt(gas.gamma * p / rho)


def physical_flux(cons, direction=X_DIR, gas=GAS):
    """Normal flux n1*f(u) + n2*g(u); in 1D the single flux f(u)."""
    cons = np.asarray(cons, dtype=float)
    rho, u, v, p = _split(cons, gas.gamma)
    _check_positive("density", rho)
    _check_positive("pressure", p)
    out = np.empty_like(cons)
    if cons.shape[-1] == 3:
        out[..., 0] = rho * u
        out[..., 1] = rho * u * u + p
        out[..., 2] = (cons[..., 2] + p) * u
        return out
    n1, n2 = direction
    vn = u * n1 + v * n2
    out[..., 0] = rho * vn
    out[..., 1] = rho * u * vn + p * n1
    out[..., 2] = rho * v * vn + p * n2
    out[..., 3] = (cons[..., 3] + p) * vn
    return out


def max_signal_speed(cons, gas=GAS):
    """Per-direction signal speed estimates (|u|+c,) in 1D, (|u|+c, |v|+c) in 2D."""
    cons = np.asarray(cons, dtype=float)
    rho, u, v, p = _split(cons, gas.gamma)
    _check_positive("density", rho)
    _check_positive("pressure", p)
    c = np.sqrt(gas.gamma * p / rho)
    if v is None:
        return (np.abs(u) + c,)
    return (np.abs(u) + c, np.abs(v) + c)


def eigensystem(cons, direction=X_DIR, gas=GAS):
    """Eigenvalues and right/left eigenvector matrices of the normal Jacobian.

    Returns (lam, R, L) with lam sorted (v_n - c, v_n, [v_n,] v_n + c),
    L = R^-1 in closed form.  Vectorized over leading axes: for input
    (..., nc) the matrices have shape (..., nc, nc).
    """
    cons = np.asarray(cons, dtype=float)
    gamma = gas.gamma
    rho, u, v, p = _split(cons, gamma)
    _check_positive("density", rho)
    _check_positive("pressure", p)
    c = np.sqrt(gamma * p / rho)
    E = cons[..., -1]
    H = (E + p) / rho
    nc = cons.shape[-1]
    base = cons.shape[:-1]
    lam = np.empty(base + (nc,))
    R = np.empty(base + (nc, nc))
    L = np.empty(base + (nc, nc))
    b1 = (gamma - 1.0) / (c * c)
    if nc == 3:
        b2 = 0.5 * b1 * u * u
        lam[..., 0] = u - c
        lam[..., 1] = u
        lam[..., 2] = u + c
        R[..., 0, 0] = 1.0
        R[..., 0, 1] = 1.0
        R[..., 0, 2] = 1.0
        R[..., 1, 0] = u - c
        R[..., 1, 1] = u
        R[..., 1, 2] = u + c
        R[..., 2, 0] = H - c * u
        R[..., 2, 1] = 0.5 * u * u
        R[..., 2, 2] = H + c * u
        L[..., 0, 0] = 0.5 * (b2 + u / c)
        L[..., 0, 1] = -0.5 * (b1 * u + 1.0 / c)
        L[..., 0, 2] = 0.5 * b1
        L[..., 1, 0] = 1.0 - b2
        L[..., 1, 1] = b1 * u
        L[..., 1, 2] = -b1
        L[..., 2, 0] = 0.5 * (b2 - u / c)
        L[..., 2, 1] = -0.5 * (b1 * u - 1.0 / c)
        L[..., 2, 2] = 0.5 * b1
        return lam, R, L
    n1, n2 = direction
    t1, t2 = -n2, n1
    vn = u * n1 + v * n2
    vt = u * t1 + v * t2
    q2 = u * u + v * v
    b2 = 0.5 * b1 * q2
    lam[..., 0] = vn - c
    lam[..., 1] = vn
    lam[..., 2] = vn
    lam[..., 3] = vn + c
    R[..., 0, 0] = 1.0
    R[..., 0, 1] = 1.0
    R[..., 0, 2] = 0.0
    R[..., 0, 3] = 1.0
    R[..., 1, 0] = u - c * n1
    R[..., 1, 1] = u
    R[..., 1, 2] = t1
    R[..., 1, 3] = u + c * n1
    R[..., 2, 0] = v - c * n2
    R[..., 2, 1] = v
    R[..., 2, 2] = t2
    R[..., 2, 3] = v + c * n2
    R[..., 3, 0] = H - c * vn
    R[..., 3, 1] = 0.5 * q2
    R[..., 3, 2] = vt
    R[..., 3, 3] = H + c * vn
    L[..., 0, 0] = 0.5 * (b2 + vn / c)
    L[..., 0, 1] = -0.5 * (b1 * u + n1 / c)
    L[..., 0, 2] = -0.5 * (b1 * v + n2 / c)
    L[..., 0, 3] = 0.5 * b1
    L[..., 1, 0] = 1.0 - b2
    L[..., 1, 1] = b1 * u
    L[..., 1, 2] = b1 * v
    L[..., 1, 3] = -b1
    L[..., 2, 0] = -vt
    L[..., 2, 1] = t1
    L[..., 2, 2] = t2
    L[..., 2, 3] = 0.0
    L[..., 3, 0] = 0.5 * (b2 - vn / c)
    L[..., 3, 1] = -0.5 * (b1 * u - n1 / c)
    L[..., 3, 2] = -0.5 * (b1 * v - n2 / c)
    L[..., 3, 3] = 0.5 * b1
    return lam, R, L

"""Explicit deferred-correction time stepping on Gauss-Lobatto subtimenodes.

A step of order P performs P fixed-point-style correction sweeps over M+1
Lobatto subtimenodes, M = ceil(P/2); each sweep gains one order of accuracy,
and the scheme is equivalent to an explicit Runge-Kutta method with
M(P-1) + 1 stages.  Node positions and the normalized quadrature weights
theta[m, l] = integral over [0, beta_m] of the l-th Lagrange basis are
computed exactly with sympy and stored as doubles.
"""

from dataclasses import dataclass
from functools import lru_cache
from math import ceil

import numpy as np
import sympy as sp


@dataclass(frozen=True)
class DeCTableau:
    """Subtimenodes beta (length M+1, beta[0]=0, beta[M]=1) and weight rows
    theta (M x (M+1)); row m integrates the nodal Lagrange basis over
    [0, beta[m+1]]."""

    order: int
    m: int
    beta: np.ndarray
    theta: np.ndarray


@lru_cache(maxsize=None)
def _tableau_exact(m):
    """Exact Lobatto nodes on [0, 1] and quadrature-weight matrix for M+1 nodes."""
    tau = sp.Symbol("tau")
    if m == 1:
        nodes = [sp.Integer(0), sp.Integer(1)]
    else:
        # Interior Lobatto nodes: roots of the derivative of the degree-M
        # Legendre polynomial, mapped to [0, 1].
        poly = sp.Poly(sp.diff(sp.legendre(m, 2 * tau - 1), tau), tau)
        interior = sorted(poly.all_roots(), key=lambda v: sp.nsimplify(v).evalf(30))
        nodes = [sp.Integer(0)] + list(interior) + [sp.Integer(1)]
    basis = []
    for j in range(m + 1):
        phi = sp.prod(
            [(tau - nodes[k]) / (nodes[j] - nodes[k]) for k in range(m + 1) if k != j]
        )
        basis.append(sp.expand(phi))
    theta = [
        [sp.integrate(basis[l], (tau, 0, nodes[mm + 1])) for l in range(m + 1)]
        for mm in range(m)
    ]
    return nodes, theta


_TABLEAU_CACHE = {}


def build_tableau(order):
    """Tableau for a bDeC step of the given order (1 through 8)."""
    if order not in range(1, 9):
        raise ValueError("time-integration order must be in 1..8, got %r" % (order,))
    if order in _TABLEAU_CACHE:
        return _TABLEAU_CACHE[order]
    m = ceil(order / 2)
    nodes, theta = _tableau_exact(m)
    beta = np.array([float(v.evalf(30)) for v in nodes])
    th = np.array([[float(v.evalf(30)) for v in row] for row in theta])
    tab = DeCTableau(order=order, m=m, beta=beta, theta=th)
    _TABLEAU_CACHE[order] = tab
    return tab


def bdec_step(u_n, dt, rhs, tableau, t_n=0.0, iterations=None):
    """One bDeC step from t_n to t_n + dt.

    rhs(t, u) must be total (raise on invalid states).  The first sweep is the
    Euler prediction u_n + beta_m*dt*G(t_n, u_n), so the rhs-evaluation count
    is M(P-1) + 1 per step; `iterations` truncates the sweep count below the
    tableau order (used in order-growth studies).
    """
    p_total = tableau.order if iterations is None else iterations
    m = tableau.m
    beta = tableau.beta
    theta = tableau.theta
    g0 = rhs(t_n, u_n)
    states = [u_n + (dt * beta[mm]) * g0 for mm in range(1, m + 1)]
    for _ in range(2, p_total + 1):
        gs = [rhs(t_n + beta[mm] * dt, states[mm - 1]) for mm in range(1, m + 1)]
        new_states = []
        for mm in range(1, m + 1):
            acc = theta[mm - 1, 0] * g0
            for l in range(1, m + 1):
                acc = acc + theta[mm - 1, l] * gs[l - 1]
            new_states.append(u_n + dt * acc)
        states = new_states
    return states[m - 1]


def ssprk2_step(u_n, dt, rhs, t_n=0.0):
    """Heun / SSPRK2 step: the reference-solver time integrator."""
    u1 = u_n + dt * rhs(t_n, u_n)
    return 0.5 * u_n + 0.5 * (u1 + dt * rhs(t_n + dt, u1))

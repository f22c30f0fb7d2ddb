"""The eight interface numerical fluxes behind one uniform interface.

Canonical scheme names: lxf, force, rus, hll, cu, ldcu, hllc, exact.
All evaluators take two conserved trace states and a FluxContext and are
vectorized over leading axes.  In 2D the states are rotated into the face
normal frame, the 1D-augmented formulas applied, and the momentum flux
rotated back; for the axis-aligned directions used on Cartesian grids this
is exact.

HLL and HLLC use the rigorous adaptive wave-speed bounds; CU and LDCU use the
Davis estimates (which is what distinguishes CU from HLL in practice).
LxF and FORCE additionally require the mesh ratio dx/dt in the context.
"""

import logging
from dataclasses import dataclass

import numpy as np

from .euler import GAS, X_DIR, GasModel, InvalidStateError, _first_bad
from .riemann import sample, solve_star, speed_bounds_davis, speed_bounds_rigorous

logger = logging.getLogger(__name__)

SCHEMES = ("lxf", "force", "rus", "hll", "cu", "ldcu", "hllc", "exact")


class ConfigurationError(ValueError):
    """A flux was invoked without context data it requires (e.g. dx/dt)."""


@dataclass(frozen=True)
class FluxContext:
    gas: GasModel = GAS
    direction: tuple = X_DIR
    dx_over_dt: float = None


def _to_normal(u, n):
    if u.shape[-1] == 3:
        return u
    n1, n2 = n
    out = np.empty_like(u)
    out[..., 0] = u[..., 0]
    out[..., 1] = n1 * u[..., 1] + n2 * u[..., 2]
    out[..., 2] = -n2 * u[..., 1] + n1 * u[..., 2]
    out[..., 3] = u[..., 3]
    return out


def _from_normal(f, n):
    if f.shape[-1] == 3:
        return f
    n1, n2 = n
    out = np.empty_like(f)
    out[..., 0] = f[..., 0]
    out[..., 1] = n1 * f[..., 1] - n2 * f[..., 2]
    out[..., 2] = n2 * f[..., 1] + n1 * f[..., 2]
    out[..., 3] = f[..., 3]
    return out


def _decode(u, gamma):
    """Normal-frame primitives (rho, un, ut, p); raises on non-physical input."""
    rho = u[..., 0]
    un = u[..., 1] / rho
    if u.shape[-1] == 3:
        ut = None
        p = (gamma - 1.0) * (u[..., 2] - 0.5 * rho * un * un)
    else:
        ut = u[..., 2] / rho
        p = (gamma - 1.0) * (u[..., 3] - 0.5 * rho * (un * un + ut * ut))
    bad = ~(rho > 0.0) | ~(p > 0.0) | ~np.isfinite(rho) | ~np.isfinite(p)
    if np.any(bad):
        raise InvalidStateError("non-physical flux input state", where=_first_bad(bad))
    return rho, un, ut, p


def _flux_n(u, rho, un, p):
    """Normal-frame physical flux from a decoded state."""
    out = np.empty_like(u)
    out[..., 0] = rho * un
    out[..., 1] = u[..., 1] * un + p
    if u.shape[-1] == 4:
        out[..., 2] = u[..., 2] * un
    out[..., -1] = (u[..., -1] + p) * un
    return out


def _prepare(u_left, u_right, ctx):
    ul = _to_normal(np.asarray(u_left, dtype=float), ctx.direction)
    ur = _to_normal(np.asarray(u_right, dtype=float), ctx.direction)
    return ul, ur


def _primitive3(rho, un, p):
    return np.stack([rho, un, p], axis=-1)


def flux_lxf(u_left, u_right, ctx):
    """Lax-Friedrichs: 0.5(f_L + f_R) - 0.5 (dx/dt) (u_R - u_L)."""
    if ctx.dx_over_dt is None:
        raise ConfigurationError("lxf requires dx_over_dt in the flux context")
    ul, ur = _prepare(u_left, u_right, ctx)
    g = ctx.gas.gamma
    rl, vl, _, pl = _decode(ul, g)
    rr, vr, _, pr = _decode(ur, g)
    f = 0.5 * (_flux_n(ul, rl, vl, pl) + _flux_n(ur, rr, vr, pr))
    f -= (0.5 * ctx.dx_over_dt) * (ur - ul)
    return _from_normal(f, ctx.direction)


def flux_force(u_left, u_right, ctx):
    """FORCE: average of Lax-Friedrichs and the two-step Lax-Wendroff flux."""
    if ctx.dx_over_dt is None:
        raise ConfigurationError("force requires dx_over_dt in the flux context")
    ul, ur = _prepare(u_left, u_right, ctx)
    g = ctx.gas.gamma
    rl, vl, _, pl = _decode(ul, g)
    rr, vr, _, pr = _decode(ur, g)
    fl = _flux_n(ul, rl, vl, pl)
    fr = _flux_n(ur, rr, vr, pr)
    lxf = 0.5 * (fl + fr) - (0.5 * ctx.dx_over_dt) * (ur - ul)
    u_mid = 0.5 * (ul + ur) - (0.5 / ctx.dx_over_dt) * (fr - fl)
    rm, vm, _, pm = _decode(u_mid, g)  # Richtmyer state must itself be physical
    richtmyer = _flux_n(u_mid, rm, vm, pm)
    return _from_normal(0.5 * (lxf + richtmyer), ctx.direction)


def flux_rusanov(u_left, u_right, ctx):
    """Rusanov: central average plus |s|-scaled jump dissipation."""
    ul, ur = _prepare(u_left, u_right, ctx)
    g = ctx.gas.gamma
    rl, vl, _, pl = _decode(ul, g)
    rr, vr, _, pr = _decode(ur, g)
    s = np.maximum(
        np.abs(vl) + np.sqrt(g * pl / rl), np.abs(vr) + np.sqrt(g * pr / rr)
    )
    f = 0.5 * (_flux_n(ul, rl, vl, pl) + _flux_n(ur, rr, vr, pr))
    f -= 0.5 * s[..., None] * (ur - ul)
    return _from_normal(f, ctx.direction)


def _hll_from_bounds(ul, ur, fl, fr, sl, sr):
    den = sr - sl
    safe = np.where(np.abs(den) > 0.0, den, 1.0)
    mid = (sr[..., None] * fl - sl[..., None] * fr + (sl * sr)[..., None] * (ur - ul)) / safe[..., None]
    return np.where(
        (sl >= 0.0)[..., None], fl, np.where((sr <= 0.0)[..., None], fr, mid)
    )


def flux_hll(u_left, u_right, ctx, speed_estimate=speed_bounds_rigorous):
    """Two-wave HLL flux; wave speeds from the rigorous bounds by default."""
    ul, ur = _prepare(u_left, u_right, ctx)
    g = ctx.gas.gamma
    rl, vl, _, pl = _decode(ul, g)
    rr, vr, _, pr = _decode(ur, g)
    fl = _flux_n(ul, rl, vl, pl)
    fr = _flux_n(ur, rr, vr, pr)
    sl, sr = speed_estimate(_primitive3(rl, vl, pl), _primitive3(rr, vr, pr), ctx.gas)
    return _from_normal(_hll_from_bounds(ul, ur, fl, fr, sl, sr), ctx.direction)


def _cu_pieces(ul, ur, ctx):
    g = ctx.gas.gamma
    rl, vl, _, pl = _decode(ul, g)
    rr, vr, _, pr = _decode(ur, g)
    fl = _flux_n(ul, rl, vl, pl)
    fr = _flux_n(ur, rr, vr, pr)
    sl, sr = speed_bounds_davis(_primitive3(rl, vl, pl), _primitive3(rr, vr, pr), ctx.gas)
    al = np.minimum(sl, 0.0)
    ar = np.maximum(sr, 0.0)
    return fl, fr, al, ar


def flux_cu(u_left, u_right, ctx):
    """Central-upwind flux with one-sided Davis speeds (equivalent to HLL)."""
    ul, ur = _prepare(u_left, u_right, ctx)
    fl, fr, al, ar = _cu_pieces(ul, ur, ctx)
    den = ar - al
    safe = np.where(den > 0.0, den, 1.0)[..., None]
    mid = (ar[..., None] * fl - al[..., None] * fr + (al * ar)[..., None] * (ur - ul)) / safe
    central = 0.5 * (fl + fr)  # vanishing-speed limit of the formula
    f = np.where((den > 0.0)[..., None], mid, central)
    return _from_normal(f, ctx.direction)


def _minmod(z1, z2):
    return 0.5 * (np.sign(z1) + np.sign(z2)) * np.minimum(np.abs(z1), np.abs(z2))


def flux_ldcu(u_left, u_right, ctx):
    """Low-dissipation central-upwind: CU plus a minmod anti-diffusion term."""
    ul, ur = _prepare(u_left, u_right, ctx)
    fl, fr, al, ar = _cu_pieces(ul, ur, ctx)
    den = ar - al
    safe = np.where(den > 0.0, den, 1.0)[..., None]
    u_mid = (ar[..., None] * ur - al[..., None] * ul - (fr - fl)) / safe
    du = _minmod(ur - u_mid, u_mid - ul)
    mid = (
        ar[..., None] * fl - al[..., None] * fr + (al * ar)[..., None] * (ur - ul - du)
    ) / safe
    central = 0.5 * (fl + fr)
    f = np.where((den > 0.0)[..., None], mid, central)
    return _from_normal(f, ctx.direction)


def flux_hllc(u_left, u_right, ctx, speed_estimate=speed_bounds_rigorous):
    """Three-wave HLLC flux restoring the contact/shear wave."""
    ul, ur = _prepare(u_left, u_right, ctx)
    g = ctx.gas.gamma
    rl, vl, wl, pl = _decode(ul, g)
    rr, vr, wr, pr = _decode(ur, g)
    fl = _flux_n(ul, rl, vl, pl)
    fr = _flux_n(ur, rr, vr, pr)
    sl, sr = speed_estimate(_primitive3(rl, vl, pl), _primitive3(rr, vr, pr), ctx.gas)

    ml = rl * (sl - vl)  # strictly negative for bounding speeds
    mr = rr * (sr - vr)  # strictly positive
    den = ml - mr
    degenerate = ~(np.abs(den) > 0.0)
    safe_den = np.where(degenerate, 1.0, den)
    s_star = (pr - pl + vl * ml - vr * mr) / safe_den

    def star_state(u, rho, vn, vt, p, s, f_side):
        gap = s - s_star
        safe_gap = np.where(np.abs(gap) > 0.0, gap, 1.0)
        coef = rho * (s - vn) / safe_gap
        out = np.empty_like(u)
        out[..., 0] = coef
        out[..., 1] = coef * s_star
        if u.shape[-1] == 4:
            out[..., 2] = coef * vt
        out[..., -1] = coef * (
            u[..., -1] / rho + (s_star - vn) * (s_star + p / (rho * (s - vn)))
        )
        return f_side + s[..., None] * (out - u), np.abs(gap) > 0.0

    f_star_l, ok_l = star_state(ul, rl, vl, wl, pl, sl, fl)
    f_star_r, ok_r = star_state(ur, rr, vr, wr, pr, sr, fr)
    f = np.where(
        (sl >= 0.0)[..., None],
        fl,
        np.where(
            (s_star >= 0.0)[..., None],
            f_star_l,
            np.where((sr >= 0.0)[..., None], f_star_r, fr),
        ),
    )
    bad = degenerate | ~ok_l | ~ok_r | ~np.all(np.isfinite(f), axis=-1)
    if np.any(bad):
        logger.warning("hllc wave model degenerate at %d face(s); using hll there",
                       int(np.count_nonzero(bad)))
        hll = _hll_from_bounds(ul, ur, fl, fr, sl, sr)
        f = np.where(bad[..., None], hll, f)
    return _from_normal(f, ctx.direction)


def flux_exact(u_left, u_right, ctx):
    """Godunov flux: physical flux at the exact Riemann solution for x/t = 0."""
    ul, ur = _prepare(u_left, u_right, ctx)
    g = ctx.gas.gamma
    rl, vl, wl, pl = _decode(ul, g)
    rr, vr, wr, pr = _decode(ur, g)
    left = _primitive3(rl, vl, pl)
    right = _primitive3(rr, vr, pr)
    star = solve_star(left, right, ctx.gas)
    s = sample(left, right, star, 0.0, ctx.gas)
    rho, un, p = s[..., 0], s[..., 1], s[..., 2]
    out = np.empty_like(ul)
    out[..., 0] = rho * un
    out[..., 1] = rho * un * un + p
    if ul.shape[-1] == 4:
        vt = np.where(star.u >= 0.0, wl, wr)  # transverse velocity rides the contact
        energy = p / (g - 1.0) + 0.5 * rho * (un * un + vt * vt)
        out[..., 2] = rho * un * vt
        out[..., 3] = (energy + p) * un
    else:
        energy = p / (g - 1.0) + 0.5 * rho * un * un
        out[..., 2] = (energy + p) * un
    return _from_normal(out, ctx.direction)


_DISPATCH = {
    "lxf": flux_lxf,
    "force": flux_force,
    "rus": flux_rusanov,
    "hll": flux_hll,
    "cu": flux_cu,
    "ldcu": flux_ldcu,
    "hllc": flux_hllc,
    "exact": flux_exact,
}


def numerical_flux(scheme, u_left, u_right, ctx):
    """Evaluate the named flux; scheme is one of SCHEMES."""
    try:
        fn = _DISPATCH[scheme]
    except KeyError:
        raise ConfigurationError(
            "unknown flux scheme %r; choose one of %s" % (scheme, ", ".join(SCHEMES))
        ) from None
    return fn(u_left, u_right, ctx)

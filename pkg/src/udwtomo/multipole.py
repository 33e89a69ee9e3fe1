"""Spacetime multipole expansion of the smeared two-point function.

For width-ell Gaussian regions the dipole vanishes and the quadrupole is
ell^2 times the identity, so to second order

    W(region_i, region_j) = W(x_i, x_j)
        - (ell^2/6) W(x_i, x_j) (tr R(x_i) + tr R(x_j))
        + (ell^2/2) (tr Hess_i W + tr Hess_j W) + O(ell^4),

with Euclidean traces (Kronecker delta, not the metric).  The vacuum
derivative kernels are closed form,

    W_mu = -(x - x')_mu / (8 pi^2 sigma^2),
    W_{mu nu} = (W/sigma) (2 (x - x')_mu (x - x')_nu / sigma - eta_{mu nu}),

which makes the vacuum correction factor exactly

    1 + ell^2 (12 dt^2 + 4 dr^2) / (-dt^2 + dr^2)^2.

The equal-time and equal-position limits (4 ell^2/dr^2 and 12 ell^2/dt^2)
and direct comparison against the quadrature oracle pin this coefficient; a
candidate with half this value is excluded by both.  Non-vacuum states are
differentiated by 5-point central differences with Richardson refinement.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InsufficientDataError, LightconeSingularityError, StencilError
from .kernels import FieldState, hadamard_point, wightman_smeared_quadrature
from .numerics import SlopeFit, fit_loglog_slope
from .smearing import GaussianRegion
from .spacetime import Event, Separation, classify, interval

__all__ = [
    "DerivativeBundle",
    "MultipoleEstimate",
    "derivatives",
    "estimate",
    "convergence_order",
    "vacuum_quadrupole_factor",
    "thermal_expansion_temporal",
    "thermal_expansion_spatial",
]

_ETA = np.diag([-1.0, 1.0, 1.0, 1.0])
# 5-point first-derivative stencil: offsets and weights (divide by h)
_D1_OFFSETS = (-2, -1, 1, 2)
_D1_WEIGHTS = (1.0 / 12.0, -8.0 / 12.0, 8.0 / 12.0, -1.0 / 12.0)


@dataclass(frozen=True)
class DerivativeBundle:
    """Pointlike value plus first/second coordinate derivatives at both events."""

    w: float
    grad_i: np.ndarray   # d W / d x^mu at the first event
    grad_j: np.ndarray   # d W / d x'^mu at the second event
    hess_ii: np.ndarray  # 4x4 second derivatives in the first event
    hess_jj: np.ndarray  # 4x4 second derivatives in the second event


@dataclass(frozen=True)
class MultipoleEstimate:
    """Second-order multipole estimate of the smeared two-point value."""

    value: float
    pointlike_term: float
    quadrupole_term: float
    ricci_term: float


def _vacuum_bundle(a: Event, b: Event) -> DerivativeBundle:
    itv = interval(a, b)
    sigma = itv.sigma
    w = 1.0 / (8.0 * math.pi**2 * sigma)
    sep_lower = np.array([-(a.t - b.t), a.x - b.x, a.y - b.y, a.z - b.z])
    grad_i = -sep_lower / (8.0 * math.pi**2 * sigma**2)
    hess = (w / sigma) * (2.0 * np.outer(sep_lower, sep_lower) / sigma - _ETA)
    return DerivativeBundle(w=w, grad_i=grad_i, grad_j=-grad_i,
                            hess_ii=hess, hess_jj=hess.copy())


def _guarded_kernel(state: FieldState, sigma0: float):
    def k(a: Event, b: Event) -> float:
        itv = interval(a, b)
        if itv.sigma * sigma0 <= 0.0:
            raise StencilError(
                f"finite-difference stencil crossed the lightcone "
                f"(sigma went from {sigma0:g} to {itv.sigma:g})")
        return hadamard_point(state, a, b)
    return k


def _fd_bundle(state: FieldState, a: Event, b: Event, h: float) -> DerivativeBundle:
    sigma0 = interval(a, b).sigma
    kern = _guarded_kernel(state, sigma0)
    w0 = kern(a, b)

    def side(base: Event, other: Event, first_slot: bool):
        def at(ev: Event) -> float:
            return kern(ev, other) if first_slot else kern(other, ev)
        grad = np.zeros(4)
        hess = np.zeros((4, 4))
        cache = {}

        def val(sh: tuple[int, ...]) -> float:
            if sh not in cache:
                ev = base
                for axis, steps in enumerate(sh):
                    if steps:
                        ev = ev.shifted(axis, steps * h)
                cache[sh] = at(ev)
            return cache[sh]

        for mu in range(4):
            f = [val(tuple(s if ax == mu else 0 for ax in range(4)))
                 for s in (-2, -1, 1, 2)]
            grad[mu] = (f[0] - 8.0 * f[1] + 8.0 * f[2] - f[3]) / (12.0 * h)
            hess[mu, mu] = (-f[3] + 16.0 * f[2] - 30.0 * w0 + 16.0 * f[1] - f[0]) / (
                12.0 * h * h)
        for mu in range(4):
            for nu in range(mu + 1, 4):
                acc = 0.0
                for s, cs in zip(_D1_OFFSETS, _D1_WEIGHTS):
                    for t, ct in zip(_D1_OFFSETS, _D1_WEIGHTS):
                        sh = [0, 0, 0, 0]
                        sh[mu], sh[nu] = s, t
                        acc += cs * ct * val(tuple(sh))
                hess[mu, nu] = hess[nu, mu] = acc / (h * h)
        return grad, hess

    grad_i, hess_ii = side(a, b, first_slot=True)
    grad_j, hess_jj = side(b, a, first_slot=False)
    return DerivativeBundle(w=w0, grad_i=grad_i, grad_j=grad_j,
                            hess_ii=0.5 * (hess_ii + hess_ii.T),
                            hess_jj=0.5 * (hess_jj + hess_jj.T))


def _refine(coarse: np.ndarray, fine: np.ndarray, rel_tol: float = 1e-6) -> np.ndarray:
    scale = max(float(np.max(np.abs(fine))), 1e-300)
    if float(np.max(np.abs(fine - coarse))) / scale > rel_tol:
        return (16.0 * fine - coarse) / 15.0  # both stencils are 4th order
    return fine


def derivatives(state: FieldState, a: Event, b: Event,
                step: float | None = None) -> DerivativeBundle:
    """Derivative data of Re W at (a, b): closed form for the vacuum,
    Richardson-refined central differences for the other states."""
    if classify(a, b) is Separation.LIGHTLIKE:
        raise LightconeSingularityError("derivative kernels singular on the lightcone")
    if state.tag == "vacuum":
        return _vacuum_bundle(a, b)
    itv = interval(a, b)
    h = step if step is not None else (abs(itv.dt) + itv.dr) * 1e-4
    if h <= 0:
        raise ValueError("finite-difference step must be positive")
    coarse = _fd_bundle(state, a, b, h)
    fine = _fd_bundle(state, a, b, h / 2.0)
    return DerivativeBundle(
        w=fine.w,
        grad_i=_refine(coarse.grad_i, fine.grad_i),
        grad_j=_refine(coarse.grad_j, fine.grad_j),
        hess_ii=_refine(coarse.hess_ii, fine.hess_ii),
        hess_jj=_refine(coarse.hess_jj, fine.hess_jj),
    )


def estimate(state: FieldState, ri: GaussianRegion, rj: GaussianRegion,
             ricci_i: np.ndarray | None = None,
             ricci_j: np.ndarray | None = None,
             step: float | None = None) -> MultipoleEstimate:
    """Second-order multipole estimate of Re W(region_i, region_j)."""
    if abs(ri.ell - rj.ell) > 1e-12 * max(ri.ell, rj.ell):
        raise ValueError("regions must share the same width")
    ell2 = ri.ell**2
    bundle = derivatives(state, ri.center, rj.center, step=step)
    quad = 0.5 * ell2 * (float(np.trace(bundle.hess_ii)) + float(np.trace(bundle.hess_jj)))
    ricci = 0.0
    for mat in (ricci_i, ricci_j):
        if mat is not None:
            m = np.asarray(mat, dtype=float)
            if m.shape != (4, 4):
                raise ValueError("ricci matrices must be 4x4")
            ricci -= ell2 / 6.0 * bundle.w * float(np.trace(m))
    return MultipoleEstimate(value=bundle.w + ricci + quad,
                             pointlike_term=bundle.w,
                             quadrupole_term=quad,
                             ricci_term=ricci)


def vacuum_quadrupole_factor(dt: float, dr: float, ell: float) -> float:
    """Exact vacuum correction factor 1 + ell^2 (12 dt^2 + 4 dr^2)/(-dt^2+dr^2)^2."""
    return 1.0 + ell**2 * (12.0 * dt**2 + 4.0 * dr**2) / (-dt**2 + dr**2) ** 2


def thermal_expansion_temporal(beta: float, dt: float, ell: float) -> float:
    """Closed second-order thermal expansion at zero spatial separation."""
    s = math.sinh(math.pi * dt / beta)
    return (-1.0 / (4.0 * beta**2 * s**2)
            - math.pi**2 * ell**2 * (2.0 + math.cosh(2.0 * math.pi * dt / beta))
            / (beta**4 * s**4))


def thermal_expansion_spatial(beta: float, dr: float, ell: float) -> float:
    """Second-order thermal expansion at equal time, as verified numerically.

    The 1/(4 pi beta dr) leading prefactor is fixed by the beta -> infinity
    vacuum limit and by the finite-difference quadrupole oracle; a pi-less
    variant of that prefactor is excluded by both.
    """
    c = 1.0 / math.tanh(math.pi * dr / beta)
    s = math.sinh(math.pi * dr / beta)
    return (c / (4.0 * math.pi * beta * dr)
            + math.pi * ell**2 * c / (dr * beta**3 * s**2))


def residual_table(state: FieldState, base_config: tuple[float, float],
                   ell_grid: list[float], tol: float = 1e-12,
                   include_quadrupole: bool = True) -> list[tuple[float, float]]:
    """Per-width residuals |Re W_quadrature - estimate| at a fixed separation.

    Residuals below the 1e-13 quadrature noise floor are dropped.
    """
    dt, dr = base_config
    sep = math.sqrt(abs(-dt * dt + dr * dr))
    grid = sorted(ell_grid)
    if not grid or grid[0] <= 0:
        raise ValueError("ell grid must be strictly positive")
    if grid[-1] > sep / 10.0:
        raise ValueError(f"max(ell) = {grid[-1]:g} exceeds separation/10 = {sep / 10:g}")
    a = Event(dt, dr, 0.0, 0.0)
    b = Event(0.0, 0.0, 0.0, 0.0)
    points = []
    for ell in grid:
        ri, rj = GaussianRegion(a, ell), GaussianRegion(b, ell)
        w = wightman_smeared_quadrature(state, ri, rj, tol).real
        est = estimate(state, ri, rj)
        model = est.value if include_quadrupole else est.pointlike_term
        resid = abs(w - model)
        if resid >= 1e-13:
            points.append((ell, resid))
    return points


def convergence_order(state: FieldState, base_config: tuple[float, float],
                      ell_grid: list[float], tol: float = 1e-12,
                      include_quadrupole: bool = True) -> SlopeFit:
    """Fit the log-log slope of |W_quadrature - estimate| against ell.

    With the quadrupole term included the residual is O(ell^4); truncating
    the estimate to the pointlike term exposes the O(ell^2) error instead.
    """
    points = residual_table(state, base_config, ell_grid, tol, include_quadrupole)
    if len(points) < 3:
        raise InsufficientDataError(
            f"only {len(points)} residuals above the noise floor; refine the grid")
    return fit_loglog_slope(points)

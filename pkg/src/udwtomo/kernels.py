"""Two-point functions of a massless scalar field and their Gaussian smearings.

Four field states are supported: the Minkowski vacuum, a thermal state of
inverse temperature beta, a coherent state sourced by a spacetime Gaussian of
width delta, and a one-particle Gaussian wavepacket of width delta (spatial
source centered at the origin event for the latter two).

All smeared quantities are computed in momentum space as 1D radial integrals:
each width-ell Gaussian region contributes an on-shell factor exp(-ell^2 k^2),
so the full complex smeared two-point value between regions i, j is

    W_ij = (1/(4 pi^2 dr)) int_0^inf dk e^{-2 ell^2 k^2} e^{-i k dt} sin(k dr)

for the vacuum (dr -> 0 handled by the sin(k dr)/dr -> k limit), with thermal
occupation weights (n_k + 1) and n_k on the positive/negative frequency parts
for the KMS state.  This quadrature route is the independent oracle; closed
forms (imaginary error function / Dawson) exist for the vacuum at pure-space
or pure-time separations and for the coherent source terms, and are used on
those configurations.

Sign conventions: W = H/2 + i E/2, so the smeared commutator function
satisfies E = 2 Im W, and the retarded propagator between regions is read off
from E on the future side (dt > 0) of the pair.
"""

from __future__ import annotations

import json
import math
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from scipy.special import dawsn

from .errors import (ConvergenceError, LightconeSingularityError,
                     PrecisionWarning, UdwTomoError)
from .numerics import integrate_semi_infinite
from .smearing import GaussianRegion
from .spacetime import Event, Separation, classify, interval

__all__ = [
    "FieldState",
    "KernelMatrix",
    "hadamard_point",
    "phi0_coherent",
    "phi0_coherent_region",
    "F_oneparticle",
    "wightman_smeared_quadrature",
    "wightman_smeared_closed",
    "commutator_smeared",
    "retarded_smeared",
    "assemble_kernels",
]

_SQRT_PI = math.sqrt(math.pi)
_SQRT_2PI = math.sqrt(2.0 * math.pi)

_VALID_TAGS = ("vacuum", "thermal", "coherent", "one_particle")


@dataclass(frozen=True)
class FieldState:
    """Tagged field state; beta only for thermal, delta only for the sourced states."""

    tag: str
    beta: float | None = None
    delta: float | None = None

    def __post_init__(self):
        if self.tag not in _VALID_TAGS:
            raise ValueError(f"unknown field state tag {self.tag!r}")
        if self.tag == "thermal":
            if self.beta is None or not (math.isfinite(self.beta) and self.beta > 0):
                raise ValueError("thermal state requires finite beta > 0")
            if self.delta is not None:
                raise ValueError("thermal state takes no delta")
        elif self.tag in ("coherent", "one_particle"):
            if self.delta is None or not (math.isfinite(self.delta) and self.delta > 0):
                raise ValueError(f"{self.tag} state requires finite delta > 0")
            if self.beta is not None:
                raise ValueError(f"{self.tag} state takes no beta")
        else:
            if self.beta is not None or self.delta is not None:
                raise ValueError("vacuum state takes no parameters")

    @classmethod
    def vacuum(cls) -> "FieldState":
        return cls("vacuum")

    @classmethod
    def thermal(cls, beta: float) -> "FieldState":
        return cls("thermal", beta=beta)

    @classmethod
    def coherent(cls, delta: float) -> "FieldState":
        return cls("coherent", delta=delta)

    @classmethod
    def one_particle(cls, delta: float) -> "FieldState":
        return cls("one_particle", delta=delta)

    def to_dict(self) -> dict:
        d = {"tag": self.tag}
        if self.beta is not None:
            d["beta"] = self.beta
        if self.delta is not None:
            d["delta"] = self.delta
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "FieldState":
        return cls(d["tag"], beta=d.get("beta"), delta=d.get("delta"))


# ---------------------------------------------------------------------------
# pointlike kernels
# ---------------------------------------------------------------------------

def _coth(x: float) -> float:
    if x < 0:
        return -_coth(-x)
    if x < 1e-6:
        return 1.0 / x + x / 3.0
    if x > 350.0:
        return 1.0
    return 1.0 / math.tanh(x)


def _thermal_real(beta: float, dt: float, dr: float) -> float:
    """Re W for the KMS state, in the cancellation-free product form.

    coth(a) + coth(b) = sinh(a+b) / (sinh(a) sinh(b)) turns the textbook sum
    into a form that is regular as dr -> 0 and loses no precision there.
    """
    a = math.pi * (dr + dt) / beta
    b = math.pi * (dr - dt) / beta
    if min(abs(a), abs(b)) > 300.0:
        if a * b < 0:
            # deep timelike saturation: value ~ e^{-2 min(|a|,|b|)}, below double range
            return 0.0
        return 2.0 / (8.0 * math.pi * beta * dr)
    w = a + b  # = 2 pi dr / beta
    sinhc = 1.0 + w * w / 6.0 if abs(w) < 1e-6 else math.sinh(w) / w
    return sinhc * (2.0 * math.pi / beta) / (
        8.0 * math.pi * beta * math.sinh(a) * math.sinh(b))


def _gaussian_wave_pair(t: float, r: float, s2: float) -> float:
    """(exp(-(r+t)^2/(4 s2)) - exp(-(r-t)^2/(4 s2))) / r with the r -> 0 limit.

    This odd-in-r combination underlies the sourced classical wave, the
    smeared commutator function and their region-smeared versions.
    """
    if r < 1e-4 * math.sqrt(s2):
        u0 = math.exp(-t * t / (4.0 * s2))
        p = t / (2.0 * s2)
        return u0 * (-t / s2 + (p / s2 - p**3 / 3.0) * r * r)
    return (math.exp(-(r + t) ** 2 / (4.0 * s2))
            - math.exp(-(r - t) ** 2 / (4.0 * s2))) / r


def phi0_coherent(delta: float, x: Event) -> float:
    """Classical wave of the Gaussian-sourced coherent state at event x.

    An incoming positive spherical wave from past null infinity that re-emerges
    with flipped sign toward future null infinity; the r -> 0 singularity is
    removable and handled by series.
    """
    if delta <= 0:
        raise ValueError("delta must be positive")
    r = math.sqrt(x.x**2 + x.y**2 + x.z**2)
    return _gaussian_wave_pair(x.t, r, delta * delta) / (4.0 * math.sqrt(2.0) * math.pi)


def phi0_coherent_region(delta: float, region: GaussianRegion) -> float:
    """Classical wave smeared over a width-ell Gaussian region (closed form)."""
    if delta <= 0:
        raise ValueError("delta must be positive")
    c = region.center
    r = math.sqrt(c.x**2 + c.y**2 + c.z**2)
    s2 = delta * delta + region.ell**2
    return delta * _gaussian_wave_pair(c.t, r, s2) / (
        4.0 * math.sqrt(2.0) * math.pi * math.sqrt(s2))


def _H_pm(v: float, sign: float) -> complex:
    # v e^{-v^2} (1 + sign*i*erfi(v)) / sqrt(2 pi), Dawson-stabilised
    return v * (math.exp(-v * v) + sign * 2j * dawsn(v) / _SQRT_PI) / _SQRT_2PI


def _H_pm_third(v: float, sign: float) -> complex:
    # third derivative of _H_pm, used by the small-r series of F
    ev = math.exp(-v * v)
    g3 = (-8.0 * v**4 + 24.0 * v**2 - 6.0) * ev
    d = dawsn(v)
    m3 = (2.0 / _SQRT_PI) * (4.0 * v**3 - 10.0 * v
                             + (24.0 * v**2 - 8.0 * v**4 - 6.0) * d)
    return (g3 + sign * 1j * m3) / _SQRT_2PI


def _F_from_tr(delta: float, t: float, r: float) -> complex:
    v_m = (r - t) / (math.sqrt(2.0) * delta)
    v_p = (r + t) / (math.sqrt(2.0) * delta)
    if r < 1e-3 * delta:
        # numerator is odd in r; F = N'(0)/2 + N'''(0) r^2 / 12
        u = t / (math.sqrt(2.0) * delta)
        ev = math.exp(-u * u)
        d = dawsn(u)
        g1 = (1.0 - 2.0 * u * u) * ev
        m1 = (2.0 / _SQRT_PI) * (d + u - 2.0 * u * u * d)
        h1m = (g1 - 1j * m1) / _SQRT_2PI  # H_-'(u)
        f0 = h1m / (math.sqrt(2.0) * delta)
        f2 = _H_pm_third(u, -1.0) / (math.sqrt(2.0) * delta) ** 3 / 6.0
        return f0 + f2 * r * r
    return (_H_pm(v_m, +1.0) + _H_pm(v_p, -1.0)) / (2.0 * r)


def F_oneparticle(delta: float, x: Event) -> complex:
    """Positive-frequency wavepacket amplitude F(x) for the one-particle state.

    Matches the radial mode integral of the Gaussian momentum profile.  The
    conjugate convention is equally self-consistent (the imaginary part drops
    out of every anticommutator); this implementation follows the mode
    integral.
    """
    if delta <= 0:
        raise ValueError("delta must be positive")
    r = math.sqrt(x.x**2 + x.y**2 + x.z**2)
    return _F_from_tr(delta, x.t, r)


def hadamard_point(state: FieldState, a: Event, b: Event) -> float:
    """Re W(a, b) = H(a, b)/2 between two events, for any of the four states.

    Raises on (numerically) lightlike pairs, where the pointlike kernels are
    singular; callers should fall back to the smeared quadrature path there.
    """
    if classify(a, b) is Separation.LIGHTLIKE:
        itv = interval(a, b)
        raise LightconeSingularityError(
            f"pointlike kernel singular at dt={itv.dt:g}, dr={itv.dr:g}; "
            "use the smeared/quadrature path")
    itv = interval(a, b)
    vac = 1.0 / (4.0 * math.pi**2 * (-itv.dt**2 + itv.dr**2))
    if state.tag == "vacuum":
        return vac
    if state.tag == "thermal":
        return _thermal_real(state.beta, itv.dt, itv.dr)
    if state.tag == "coherent":
        return vac + phi0_coherent(state.delta, a) * phi0_coherent(state.delta, b)
    # one-particle wavepacket
    fa = F_oneparticle(state.delta, a)
    fb = F_oneparticle(state.delta, b)
    return vac + 2.0 * (fa * fb.conjugate()).real


# ---------------------------------------------------------------------------
# smeared kernels
# ---------------------------------------------------------------------------

def _check_equal_widths(ri: GaussianRegion, rj: GaussianRegion) -> float:
    if abs(ri.ell - rj.ell) > 1e-12 * max(ri.ell, rj.ell):
        raise ValueError(f"regions must share the same width, got {ri.ell} and {rj.ell}")
    return ri.ell


def _pair_geometry(ri: GaussianRegion, rj: GaussianRegion) -> tuple[float, float]:
    itv = interval(ri.center, rj.center)
    return itv.dt, itv.dr


def _radial_factor(k: float, dr: float) -> float:
    # sin(k dr)/dr, continued through dr = 0
    return k if dr < 1e-300 else math.sin(k * dr) / dr


def _F_region_quadrature(delta: float, ell: float, region: GaussianRegion,
                         tol: float) -> complex:
    c = region.center
    r = math.sqrt(c.x**2 + c.y**2 + c.z**2)
    t = c.t
    a = 0.5 * delta * delta + ell * ell
    pref = delta * delta / (math.pi * math.sqrt(2.0))

    def f(k: float) -> complex:
        return (pref * k * math.exp(-a * k * k) * _radial_factor(k, r)
                * complex(math.cos(k * t), -math.sin(k * t)))

    res = integrate_semi_infinite(f, tol, decay_scale=a, osc_scale=r + abs(t) + 1.0)
    return complex(res.value)


def _phi0_region_quadrature(delta: float, ell: float, region: GaussianRegion,
                            tol: float) -> float:
    c = region.center
    r = math.sqrt(c.x**2 + c.y**2 + c.z**2)
    t = c.t
    a = delta * delta + ell * ell
    pref = -delta / (_SQRT_2PI * math.pi)

    def f(k: float) -> float:
        return pref * math.exp(-a * k * k) * math.sin(k * t) * _radial_factor(k, r)

    res = integrate_semi_infinite(f, tol, decay_scale=a, osc_scale=r + abs(t) + 1.0)
    return float(res.value.real if isinstance(res.value, complex) else res.value)


def wightman_smeared_quadrature(state: FieldState, ri: GaussianRegion,
                                rj: GaussianRegion, tol: float = 1e-10) -> complex:
    """Full complex smeared two-point value via the radial momentum integral.

    This is the independent oracle for every closed form in this module.
    """
    ell = _check_equal_widths(ri, rj)
    dt, dr = _pair_geometry(ri, rj)
    a = 2.0 * ell * ell
    osc = dr + abs(dt) + 1.0

    if state.tag == "thermal":
        beta = state.beta

        def f(k: float) -> complex:
            if k <= 0.0:
                return complex(2.0 / beta / (4.0 * math.pi**2), 0.0)
            re_w = _coth(0.5 * beta * k) * math.cos(k * dt)
            return (math.exp(-a * k * k) * _radial_factor(k, dr)
                    * complex(re_w, -math.sin(k * dt)) / (4.0 * math.pi**2))

        return complex(integrate_semi_infinite(f, tol, decay_scale=a, osc_scale=osc).value)

    def f_vac(k: float) -> complex:
        return (math.exp(-a * k * k) * _radial_factor(k, dr)
                * complex(math.cos(k * dt), -math.sin(k * dt)) / (4.0 * math.pi**2))

    w = complex(integrate_semi_infinite(f_vac, tol, decay_scale=a, osc_scale=osc).value)
    if state.tag == "vacuum":
        return w
    if state.tag == "coherent":
        pi_ = _phi0_region_quadrature(state.delta, ell, ri, tol)
        pj_ = _phi0_region_quadrature(state.delta, ell, rj, tol)
        return w + pi_ * pj_
    fi = _F_region_quadrature(state.delta, ell, ri, tol)
    fj = _F_region_quadrature(state.delta, ell, rj, tol)
    return w + 2.0 * (fi * fj.conjugate()).real


def _erfi_scaled_over_x(x: float) -> float:
    # exp(-x^2) erfi(x) / x = 2 D(x) / (x sqrt(pi)), continued through x = 0
    if x < 1e-6:
        return (2.0 / _SQRT_PI) * (1.0 - 2.0 * x * x / 3.0)
    return 2.0 * dawsn(x) / (x * _SQRT_PI)


def _vacuum_closed_equal_time(s: float, ell: float) -> complex:
    # W = (ell/s) e^{-s^2/8 ell^2} erfi(s / (2 sqrt2 ell)) / (8 sqrt2 pi^{3/2} ell^2),
    # continued through s = 0 where it tends to 1 / (16 pi^2 ell^2)
    x = s / (2.0 * math.sqrt(2.0) * ell)
    return complex(_erfi_scaled_over_x(x) / (32.0 * math.pi**1.5 * ell**2), 0.0)


def _vacuum_closed_temporal(dt: float, ell: float) -> complex:
    s = abs(dt)
    x = s / (2.0 * math.sqrt(2.0) * ell)
    re = (1.0 / (16.0 * math.pi**2 * ell**2)
          - s * s * _erfi_scaled_over_x(x) / (128.0 * math.pi**1.5 * ell**4))
    im = -dt * math.exp(-s * s / (8.0 * ell * ell)) / (
        32.0 * math.sqrt(2.0) * math.pi**1.5 * ell**3)
    return complex(re, im)


def wightman_smeared_closed(state: FieldState, ri: GaussianRegion,
                            rj: GaussianRegion) -> complex | None:
    """Closed-form smeared two-point value, or None where no closed form exists.

    Available for the vacuum at pure-space (dt = 0) or pure-time (dr = 0)
    separations, and for the coherent state on those same configurations (the
    source term has a closed form for any geometry).  Thermal and one-particle
    smearings have no closed form.
    """
    ell = _check_equal_widths(ri, rj)
    if state.tag in ("thermal", "one_particle"):
        return None
    dt, dr = _pair_geometry(ri, rj)
    scale = max(ell, dr, abs(dt))
    if abs(dt) <= 1e-12 * scale:
        vac = _vacuum_closed_equal_time(dr, ell)
    elif dr <= 1e-12 * scale:
        vac = _vacuum_closed_temporal(dt, ell)
    else:
        return None
    if state.tag == "vacuum":
        return vac
    return vac + (phi0_coherent_region(state.delta, ri)
                  * phi0_coherent_region(state.delta, rj))


def commutator_smeared(ri: GaussianRegion, rj: GaussianRegion) -> float:
    """Smeared commutator function E(Lambda_i, Lambda_j) = 2 Im W_ij (closed form).

    Antisymmetric under i <-> j; Gaussian-suppressed away from the lightcone
    of the two centers.
    """
    ell = _check_equal_widths(ri, rj)
    dt, dr = _pair_geometry(ri, rj)
    return _gaussian_wave_pair(dt, dr, 2.0 * ell * ell) / (
        8.0 * math.sqrt(2.0) * math.pi**1.5 * ell)


def retarded_smeared(ri: GaussianRegion, rj: GaussianRegion) -> float:
    """Smeared retarded propagator G_R(Lambda_i, Lambda_j), read off from E.

    Equals E(Lambda_i, Lambda_j) when region i lies to the future of region j
    (dt > 0) and zero otherwise; warns when the two regions straddle the
    cone/time-order boundary so closely that this identification degrades.
    """
    ell = _check_equal_widths(ri, rj)
    dt, dr = _pair_geometry(ri, rj)
    if dt != 0.0 and abs(dt) < 5.0 * ell and abs(abs(dt) - dr) < 5.0 * ell:
        warnings.warn(
            f"retarded/commutator identification degraded at dt={dt:g}, dr={dr:g} "
            f"(within 5 ell = {5 * ell:g} of the boundary)", PrecisionWarning,
            stacklevel=2)
    if dt <= 0.0:
        return 0.0
    return commutator_smeared(ri, rj)


# ---------------------------------------------------------------------------
# kernel matrix assembly and serialisation
# ---------------------------------------------------------------------------

@dataclass
class KernelMatrix:
    """Coupling-scaled smeared kernels for a set of regions.

    H is the symmetric (anticommutator) part, E the antisymmetric commutator
    part, GR the retarded part, Delta = GR + GR^T the symmetric propagator and
    Wdiag the local noise H_ii / 2.  All entries carry the lambda^2 scaling,
    so they are dimensionless.
    """

    n: int
    H: np.ndarray
    E: np.ndarray
    GR: np.ndarray
    Delta: np.ndarray
    Wdiag: np.ndarray
    lam: float
    state: FieldState | None = None

    def validate(self, atol: float = 1e-12) -> None:
        scale = max(1.0, float(np.max(np.abs(self.H))), float(np.max(np.abs(self.GR))))
        tol = atol * scale
        checks = [
            ("H symmetric", np.max(np.abs(self.H - self.H.T))),
            ("E antisymmetric", np.max(np.abs(self.E + self.E.T))),
            ("Delta = GR + GR^T", np.max(np.abs(self.Delta - (self.GR + self.GR.T)))),
            ("E = GR - GR^T", np.max(np.abs(self.E - (self.GR - self.GR.T)))),
            ("Wdiag = H_ii / 2", np.max(np.abs(self.Wdiag - np.diag(self.H) / 2.0))),
        ]
        for name, dev in checks:
            if dev > tol:
                raise ValueError(f"kernel invariant violated: {name} (deviation {dev:.3e})")

    def save(self, directory: str | Path) -> None:
        d = Path(directory)
        d.mkdir(parents=True, exist_ok=True)
        for name in ("H", "E", "GR", "Delta"):
            _write_matrix_csv(d / f"{name}.csv", getattr(self, name))
        _write_matrix_csv(d / "Wdiag.csv", self.Wdiag.reshape(1, -1))
        envelope = {
            "format": "kernelmatrix-v1",
            "n": self.n,
            "lambda": self.lam,
            "state": self.state.to_dict() if self.state is not None else None,
        }
        with open(d / "kernelmatrix.json", "w", encoding="utf-8", newline="\n") as fh:
            json.dump(envelope, fh, indent=2, sort_keys=True)
            fh.write("\n")

    @classmethod
    def load(cls, directory: str | Path) -> "KernelMatrix":
        d = Path(directory)
        with open(d / "kernelmatrix.json", encoding="utf-8") as fh:
            envelope = json.load(fh)
        if envelope.get("format") != "kernelmatrix-v1":
            raise ValueError(f"unrecognised kernel envelope in {d}")
        n = int(envelope["n"])
        mats = {name: _read_matrix_csv(d / f"{name}.csv") for name in ("H", "E", "GR", "Delta")}
        wdiag = _read_matrix_csv(d / "Wdiag.csv").reshape(-1)
        state = envelope.get("state")
        km = cls(n=n, H=mats["H"], E=mats["E"], GR=mats["GR"], Delta=mats["Delta"],
                 Wdiag=wdiag, lam=float(envelope["lambda"]),
                 state=FieldState.from_dict(state) if state else None)
        if km.H.shape != (n, n) or km.Wdiag.shape != (n,):
            raise ValueError("kernel matrix shapes inconsistent with envelope")
        km.validate(atol=1e-10)
        return km


def _write_matrix_csv(path: Path, mat: np.ndarray) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for row in np.atleast_2d(mat):
            fh.write(",".join(f"{v:.17g}" for v in row))
            fh.write("\n")


def _read_matrix_csv(path: Path) -> np.ndarray:
    rows = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if line:
                rows.append([float(tok) for tok in line.split(",")])
    return np.asarray(rows, dtype=float)


def _pair_value(state: FieldState, ri: GaussianRegion, rj: GaussianRegion,
                tol: float) -> complex:
    closed = wightman_smeared_closed(state, ri, rj)
    if closed is not None:
        return closed
    return wightman_smeared_quadrature(state, ri, rj, tol)


def assemble_kernels(state: FieldState, regions: list[GaussianRegion], lam: float,
                     tol: float = 1e-10, threads: int | None = None) -> KernelMatrix:
    """Populate the full kernel matrix for a list of equal-width regions.

    Only zero-mean quasifree states (vacuum, thermal) are admissible: the
    exact detector state formula presupposes a vanishing one-point function.
    E is filled from its closed form (it is state independent), H from closed
    forms where available and from the quadrature oracle otherwise, and the
    retarded/symmetric parts follow exactly from E and the time order, so the
    matrix identities hold by construction.
    """
    if state.tag not in ("vacuum", "thermal"):
        raise ValueError(
            f"assemble_kernels requires a zero-mean quasifree state, got {state.tag!r}")
    if not (math.isfinite(lam) and lam > 0):
        raise ValueError("coupling lambda must be positive and finite")
    n = len(regions)
    if n == 0:
        raise ValueError("need at least one region")
    for r in regions[1:]:
        _check_equal_widths(regions[0], r)

    lam2 = lam * lam
    H = np.zeros((n, n))
    E = np.zeros((n, n))
    GR = np.zeros((n, n))

    def diag_value() -> float:
        ri = regions[0]
        if state.tag == "vacuum":
            return lam2 / (8.0 * math.pi**2 * ri.ell**2)
        try:
            w = wightman_smeared_quadrature(state, ri, ri, tol)
        except UdwTomoError as exc:
            raise type(exc)(f"diagonal kernel: {exc}") from exc
        return lam2 * 2.0 * w.real

    h_diag = diag_value()
    for i in range(n):
        H[i, i] = h_diag

    def fill_pair(pair: tuple[int, int]) -> None:
        i, j = pair
        try:
            w = _pair_value(state, regions[i], regions[j], tol)
        except UdwTomoError as exc:
            raise type(exc)(f"kernel pair (i={i}, j={j}): {exc}") from exc
        h = lam2 * 2.0 * w.real
        H[i, j] = H[j, i] = h
        e = lam2 * commutator_smeared(regions[i], regions[j])
        E[i, j] = e
        E[j, i] = -e
        dt = regions[i].center.t - regions[j].center.t
        if dt > 0.0:
            GR[i, j] = e
        elif dt < 0.0:
            GR[j, i] = -e

    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    if threads is not None and threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            list(pool.map(fill_pair, pairs))
    else:
        for p in pairs:
            fill_pair(p)

    km = KernelMatrix(n=n, H=H, E=E, GR=GR, Delta=GR + GR.T,
                      Wdiag=np.diag(H) / 2.0, lam=lam, state=state)
    km.validate()
    return km

"""Casimir torque between two anisotropic planar mirrors (1D, T = 0).

The torque on mirror 2 is

    tau_z = -(hbar c / 2 pi) int_0^inf F(kappa) dkappa

    F = dr1 dr2 sin(2g) e / [dr1 dr2 sin(g)^2 e + (1 - r1x r2x e)(1 - r1y r2y e)]

with ``e = exp(-2 kappa L)``, ``dr = r_x - r_y`` and ``g`` the angle between the
principal axes of the two mirrors.

Results are dimensionless.  For kappa-independent mirrors the natural scale is
``hbar c / L`` and :attr:`TorqueResult.tau` holds ``tau L / (hbar c)``; when a
mirror is dispersive the scale is ``hbar omega_ref`` and ``tau`` holds
``tau / (hbar omega_ref)``.  The tag in :attr:`TorqueResult.normalization`
says which.
"""
from dataclasses import dataclass, replace
import math

import numpy as np

from . import _kernels
from .errors import (
    DomainError,
    NonConvergenceError,
    OutOfRangeError,
    SingularDenominatorError,
)
from .material import MirrorModel, reflection_pair

__all__ = [
    "NORM_HBAR_C_OVER_L",
    "NORM_HBAR_OMEGA_REF",
    "CavityConfig",
    "QuadratureSettings",
    "TorqueResult",
    "AngleRow",
    "DistanceRow",
    "integrand",
    "torque",
    "torque_perfect_polarizers",
    "torque_lossy",
    "small_r_approx",
    "scan_angle",
    "scan_distance",
]

NORM_HBAR_C_OVER_L = "hbar_c_over_L"
NORM_HBAR_OMEGA_REF = "hbar_omega_ref"

DENOMINATOR_GUARD = _kernels.DENOMINATOR_GUARD


@dataclass(frozen=True)
class CavityConfig:
    """Two mirrors a distance ``separation`` apart, axes rotated by ``relative_angle``."""

    separation: float
    relative_angle: float
    mirror1: MirrorModel
    mirror2: MirrorModel

    def __post_init__(self):
        if not (math.isfinite(self.separation) and self.separation > 0):
            raise DomainError(f"separation must be finite and > 0, got {self.separation!r}")
        if not math.isfinite(self.relative_angle):
            raise DomainError(f"relative_angle must be finite, got {self.relative_angle!r}")
        for name in ("mirror1", "mirror2"):
            if not isinstance(getattr(self, name), MirrorModel):
                raise TypeError(f"{name} must be a MirrorModel")

    @property
    def dispersive(self):
        return self.mirror1.dispersive or self.mirror2.dispersive

    @property
    def normalization(self):
        return NORM_HBAR_OMEGA_REF if self.dispersive else NORM_HBAR_C_OVER_L


@dataclass(frozen=True)
class QuadratureSettings:
    rel_tol: float = 1e-10
    abs_tol: float = 1e-14
    max_subdivisions: int = 200

    def __post_init__(self):
        if not self.rel_tol > 0:
            raise DomainError("rel_tol must be > 0")
        if not self.abs_tol >= 0:
            raise DomainError("abs_tol must be >= 0")
        if int(self.max_subdivisions) != self.max_subdivisions or self.max_subdivisions < 1:
            raise DomainError("max_subdivisions must be an integer >= 1")


@dataclass(frozen=True)
class TorqueResult:
    """Dimensionless torque with quadrature diagnostics.

    ``kappa_window`` is set when tabulated data restricted the integration
    range to less than ``(0, inf)``.
    """

    tau: float
    error_estimate: float
    evaluations: int
    normalization: str
    kappa_window: tuple = None


def _angle_terms(gamma):
    """Return ``(sin 2g, sin^2 g, vanishes)`` for the angle reduced mod pi."""
    g = math.remainder(gamma, math.pi)
    tiny = 4.0 * np.finfo(float).eps * max(1.0, abs(gamma))
    vanishes = abs(g) <= tiny or abs(abs(g) - 0.5 * math.pi) <= tiny
    return math.sin(2.0 * g), math.sin(g) ** 2, vanishes


def integrand(kappa, cfg):
    """Torque integrand ``F(kappa)`` such that ``tau = -(hbar c/2pi) int F``."""
    s2g, ssq, vanishes = _angle_terms(cfg.relative_angle)
    p1 = reflection_pair(cfg.mirror1, kappa)
    p2 = reflection_pair(cfg.mirror2, kappa)
    if vanishes:
        return 0.0
    e = math.exp(-2.0 * kappa * cfg.separation)
    aniso = p1.delta_r * p2.delta_r
    den = aniso * ssq * e + (1.0 - p1.r_x * p2.r_x * e) * (1.0 - p1.r_y * p2.r_y * e)
    if abs(den) < DENOMINATOR_GUARD:
        raise SingularDenominatorError(
            f"integrand denominator {den!r} below guard at kappa={kappa!r}"
        )
    return aniso * s2g * e / den


def _integration_window(cfg):
    lo1, hi1 = cfg.mirror1.kappa_range()
    lo2, hi2 = cfg.mirror2.kappa_range()
    lo, hi = max(lo1, lo2), min(hi1, hi2)
    if not lo < hi:
        raise OutOfRangeError("tabulated mirrors have no overlapping kappa range")
    return lo, hi


def torque(cfg, settings=QuadratureSettings()):
    """Integrate the torque integrand over kappa.

    Raises
    ------
    NonConvergenceError
        If ``settings.max_subdivisions`` intervals do not reach the tolerance.
    SingularDenominatorError
        If an ideal ``|r| = 1`` closure makes the integrand singular.
    OutOfRangeError
        If tabulated mirrors do not overlap in kappa.
    """
    L = cfg.separation
    tag = cfg.normalization
    # tau = scale * int F dkappa
    scale = -(L if tag == NORM_HBAR_C_OVER_L else 1.0) / (2.0 * math.pi)
    s2g, ssq, vanishes = _angle_terms(cfg.relative_angle)
    k_lo, k_hi = _integration_window(cfg)
    window = None if (k_lo == 0.0 and math.isinf(k_hi)) else (k_lo, k_hi)
    if vanishes:
        return TorqueResult(0.0, 0.0, 0, tag, window)

    u_lo = 0.0 if math.isinf(k_hi) else math.exp(-2.0 * k_hi * L)
    u_hi = math.exp(-2.0 * k_lo * L)
    enc1 = cfg.mirror1.encode()
    enc2 = cfg.mirror2.encode()
    value, err, nev, status = _kernels.adaptive_integral(
        u_lo, u_hi, float(L), s2g, ssq, *enc1, *enc2,
        float(settings.rel_tol), float(settings.abs_tol) / abs(scale),
        int(settings.max_subdivisions),
    )
    if status == _kernels.STATUS_SINGULAR:
        raise SingularDenominatorError("integrand denominator vanished inside the cavity")
    if status == _kernels.STATUS_OUT_OF_RANGE:
        raise OutOfRangeError("quadrature node outside tabulated kappa range")
    tau = scale * value
    err = abs(scale) * err
    if status == _kernels.STATUS_NOT_CONVERGED:
        raise NonConvergenceError(
            f"quadrature did not converge: tau={tau!r}, error estimate {err!r}",
            value=tau, error_estimate=err, evaluations=int(nev),
        )
    return TorqueResult(float(tau), float(err), int(nev), tag, window)


def torque_perfect_polarizers(gamma, L=1.0):
    """Closed form for ``r_x = +-1``, ``r_y = 0`` on both walls.

    Returns ``tau / (hbar c) = tan(g) log(sin^2 g) / (2 pi L)``, with the
    limit 0 at ``g = 0`` and ``g = +-pi/2``.
    """
    if not L > 0:
        raise DomainError("L must be > 0")
    g = math.remainder(gamma, math.pi)
    _, _, vanishes = _angle_terms(gamma)
    if vanishes:
        return 0.0
    if abs(g) < 0.25 * math.pi:
        log_sin2 = 2.0 * math.log(abs(math.sin(g)))
    else:
        log_sin2 = math.log1p(-math.cos(g) ** 2)
    return math.tan(g) * log_sin2 / (2.0 * math.pi * L)


def torque_lossy(gamma, L, r):
    """Closed form for a lossy mirror of amplitude ``r`` behind a perfect polarizer.

    ``tau / (hbar c) = tan(g) log(1 - |r|^2 cos^2 g) / (2 pi L)``.
    """
    if not L > 0:
        raise DomainError("L must be > 0")
    if not abs(r) <= 1:
        raise DomainError(f"|r| must be <= 1, got {r!r}")
    g = math.remainder(gamma, math.pi)
    tiny = 4.0 * np.finfo(float).eps * max(1.0, abs(gamma))
    if abs(g) <= tiny and abs(r) == 1:
        raise DomainError("log(1 - |r|^2 cos^2 g) is singular at |r| = 1, g = 0")
    _, _, vanishes = _angle_terms(gamma)
    if vanishes:
        return 0.0
    return math.tan(g) * math.log1p(-(r * r) * math.cos(g) ** 2) / (2.0 * math.pi * L)


def small_r_approx(gamma, L, r):
    """Weak-reflection limit ``-|r|^2 sin(2g) / (4 pi L)`` of :func:`torque_lossy`."""
    if not L > 0:
        raise DomainError("L must be > 0")
    return -(r * r) * math.sin(2.0 * gamma) / (4.0 * math.pi * L)


@dataclass(frozen=True)
class AngleRow:
    gamma: float
    torque: float
    error_estimate: float
    error: str = None


@dataclass(frozen=True)
class DistanceRow:
    """One separation; ``torque`` is in units of ``hbar omega_ref``."""

    separation: float
    torque: float
    torque_times_L: float
    error_estimate: float
    error: str = None


def _failure(exc):
    return f"{type(exc).__name__}: {exc}"


def scan_angle(template, gammas, settings=QuadratureSettings()):
    """Torque at each angle in ``gammas``, in the template's normalization.

    Failed points are kept with ``torque = nan`` and ``error`` set.
    """
    gammas = list(gammas)
    if not gammas:
        raise DomainError("angle grid is empty")
    rows = []
    for g in gammas:
        try:
            res = torque(replace(template, relative_angle=float(g)), settings)
        except (ArithmeticError, ValueError) as exc:
            rows.append(AngleRow(float(g), math.nan, math.nan, _failure(exc)))
        else:
            rows.append(AngleRow(float(g), res.tau, res.error_estimate))
    return rows


def scan_distance(template, separations, settings=QuadratureSettings()):
    """Torque against separation.

    The ``torque`` column is ``tau / (hbar omega_ref)`` for every mirror type
    (for ideal mirrors ``hbar c / L`` is converted using ``c / omega_ref`` as
    the length unit), so that ``torque_times_L`` exposes the 1/L regime.
    """
    separations = list(separations)
    if not separations:
        raise DomainError("distance grid is empty")
    if any(not L > 0 for L in separations):
        raise DomainError("all separations must be > 0")
    rows = []
    for L in separations:
        L = float(L)
        try:
            res = torque(replace(template, separation=L), settings)
        except (ArithmeticError, ValueError) as exc:
            rows.append(DistanceRow(L, math.nan, math.nan, math.nan, _failure(exc)))
            continue
        if res.normalization == NORM_HBAR_C_OVER_L:
            tau, err = res.tau / L, res.error_estimate / L
        else:
            tau, err = res.tau, res.error_estimate
        rows.append(DistanceRow(L, tau, tau * L, err))
    return rows

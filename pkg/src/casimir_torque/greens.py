"""Independent check of the torque integrand from the cavity Green's function.

Inside the cavity ``z1 < z < z2`` the 2x2 Green's matrix of
``(d^2/dz^2 + q^2) G = delta(z - z') 1`` is assembled from the solution
matrices ``u`` (right-wall boundary condition) and ``v`` (left-wall one):

    G(z, z') =  u(z) [u'(z') - v'(z') v(z')^-1 u(z')]^-1       z > z'
             = -v(z) [v'(z') - u'(z') u(z')^-1 v(z')]^-1       z < z'

with ``u = R(g/2) u0`` and ``v = R(-g/2) v0``; the rotations act on the
Cartesian (row) index only.  All brackets are evaluated at ``z'``.  At
``q = i kappa`` the kernel

    K(kappa) = (d/dz' - d/dz) [G_xy(z, z') - G_yx(z, z')]   at z' -> z

is independent of ``z`` and equals ``C0 * F(kappa)`` with ``F`` the closed-form
torque integrand.  The constant comes out as ``C0 = -1``.

The expressions contain ``exp(+-kappa (z - z_a))`` factors whose ratio reaches
``exp(-2 kappa L)``, so double precision loses about ``2 kappa L / ln 10``
digits.  Everything here therefore runs in an mpmath context (40 digits by
default) and only the final numbers are converted to floats.
"""
from dataclasses import dataclass
from functools import lru_cache
import math

import mpmath
import numpy as np

from .errors import DomainError, InconsistentConstantError, SingularBracketError
from .material import LossyPolarizer, PerfectPolarizer, reflection_pair
from .torque import CavityConfig, integrand

__all__ = [
    "HomogeneousSolutions",
    "GreensEvaluation",
    "ValidationReport",
    "DEFAULT_DPS",
    "DET_GUARD",
    "build_solutions",
    "greens_matrix",
    "oracle_integrand",
    "kernel_spread",
    "reference_constant",
    "validate",
]

DEFAULT_DPS = 40
DET_GUARD = 1e-280
VALIDATION_THRESHOLD = 1e-8

# c0 is fixed from the first point and cross-checked against the second
REFERENCE_POINTS = (
    (CavityConfig(1.0, math.pi / 4, PerfectPolarizer(), PerfectPolarizer()), math.log(2) / 2),
    (CavityConfig(2.0, math.pi / 6, LossyPolarizer(0.8), LossyPolarizer(0.8)), 0.3),
)


@lru_cache(maxsize=None)
def _context(dps):
    ctx = mpmath.MPContext()
    ctx.dps = dps
    return ctx


def _inv2(ctx, m):
    """Adjugate inverse of a 2x2 mpmath matrix."""
    det = m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0]
    if abs(det) < DET_GUARD:
        raise SingularBracketError(f"2x2 bracket is singular (|det| = {float(abs(det)):.3g})")
    return ctx.matrix([[m[1, 1], -m[0, 1]], [-m[1, 0], m[0, 0]]]) / det


def _to_numpy(m):
    return np.array([[complex(m[i, j]) for j in range(2)] for i in range(2)])


@dataclass(frozen=True)
class HomogeneousSolutions:
    """Wall solution matrices at ``q = i kappa`` for a cavity on ``[z1, z2]``.

    ``u(z)`` satisfies the boundary condition of mirror 2 at ``z2``, ``v(z)``
    that of mirror 1 at ``z1``.  Derivatives are analytic.
    """

    kappa: float
    gamma: float
    r1: tuple
    r2: tuple
    z1: float
    z2: float
    dps: int = DEFAULT_DPS

    @property
    def ctx(self):
        return _context(self.dps)

    def _rotation(self, angle):
        ctx = self.ctx
        c, s = ctx.cos(angle), ctx.sin(angle)
        return ctx.matrix([[c, -s], [s, c]])

    def _solution(self, z, order, right):
        ctx = self.ctx
        q = ctx.mpc(0, self.kappa)
        if right:
            dz = ctx.mpf(z) - ctx.mpf(self.z2)
            refl, k_in, rot = self.r2, 1j * q, self._rotation(ctx.mpf(self.gamma) / 2)
        else:
            dz = ctx.mpf(z) - ctx.mpf(self.z1)
            refl, k_in, rot = self.r1, -1j * q, self._rotation(-ctx.mpf(self.gamma) / 2)
        # incoming wave k_in, reflected wave -k_in
        inc = k_in**order * ctx.exp(k_in * dz)
        out = (-k_in) ** order * ctx.exp(-k_in * dz)
        base = ctx.matrix([[inc + ctx.mpf(refl[0]) * out, 0], [0, inc + ctx.mpf(refl[1]) * out]])
        return rot * base

    def u(self, z, order=0):
        """``d^order u / dz^order`` at ``z``."""
        return self._solution(z, order, right=True)

    def v(self, z, order=0):
        """``d^order v / dz^order`` at ``z``."""
        return self._solution(z, order, right=False)


@dataclass(frozen=True)
class GreensEvaluation:
    G: np.ndarray
    dG_dz: np.ndarray
    dG_dzprime: np.ndarray


def build_solutions(kappa, cfg, dps=DEFAULT_DPS):
    """Solution matrices for ``cfg`` with walls at ``z1 = 0``, ``z2 = L``."""
    if not kappa > 0:
        raise DomainError("kappa must be > 0")
    p1 = reflection_pair(cfg.mirror1, kappa)
    p2 = reflection_pair(cfg.mirror2, kappa)
    return HomogeneousSolutions(
        float(kappa), float(cfg.relative_angle),
        (p1.r_x, p1.r_y), (p2.r_x, p2.r_y),
        0.0, float(cfg.separation), dps,
    )


def _greens_mp(sol, z, zp, upper):
    """``(G, dG/dz, dG/dz')`` as mpmath matrices on one side of ``z = z'``."""
    ctx = sol.ctx
    u, du, d2u = sol.u(zp), sol.u(zp, 1), sol.u(zp, 2)
    v, dv, d2v = sol.v(zp), sol.v(zp, 1), sol.v(zp, 2)
    if upper:
        # A(z') = u' - v' v^-1 u,  G = u(z) A^-1
        vi = _inv2(ctx, v)
        A = du - dv * vi * u
        dA = d2u - d2v * vi * u + dv * vi * dv * vi * u - dv * vi * du
        Ai = _inv2(ctx, A)
        G = sol.u(z) * Ai
        dG_dz = sol.u(z, 1) * Ai
        dG_dzp = -sol.u(z) * Ai * dA * Ai
    else:
        # B(z') = v' - u' u^-1 v,  G = -v(z) B^-1
        ui = _inv2(ctx, u)
        B = dv - du * ui * v
        dB = d2v - d2u * ui * v + du * ui * du * ui * v - du * ui * dv
        Bi = _inv2(ctx, B)
        G = -sol.v(z) * Bi
        dG_dz = -sol.v(z, 1) * Bi
        dG_dzp = sol.v(z) * Bi * dB * Bi
    return G, dG_dz, dG_dzp


def _check_interior(cfg, *points):
    L = cfg.separation
    for z in points:
        if not (1e-6 * L <= z <= L - 1e-6 * L):
            raise DomainError(f"z={z!r} must lie inside the cavity, >= 1e-6 L from each wall")


def greens_matrix(z, zp, kappa, cfg, dps=DEFAULT_DPS, upper=None):
    """Evaluate G and its first derivatives at ``(z, z')``.

    ``upper`` selects the ``z > z'`` branch; by default it follows the sign of
    ``z - z'`` (the upper branch is used at ``z = z'``).
    """
    _check_interior(cfg, z, zp)
    sol = build_solutions(kappa, cfg, dps)
    if upper is None:
        upper = z >= zp
    return GreensEvaluation(*(_to_numpy(m) for m in _greens_mp(sol, z, zp, upper)))


def _kernel_mp(sol, z):
    total = 0
    for upper in (True, False):
        _, dz, dzp = _greens_mp(sol, z, z, upper)
        D = dzp - dz
        total += D[0, 1] - D[1, 0]
    return total / 2


def oracle_integrand(kappa, cfg, z=None, dps=DEFAULT_DPS):
    """Kernel ``K(kappa)`` from the Green's matrix at the cavity point ``z``.

    Both one-sided limits ``z' -> z +- 0`` are evaluated and averaged.
    ``z`` defaults to the centre of the cavity.
    """
    if z is None:
        z = cfg.separation / 2
    _check_interior(cfg, z)
    sol = build_solutions(kappa, cfg, dps)
    return float(sol.ctx.re(_kernel_mp(sol, z)))


def kernel_spread(kappa, cfg, n=10, dps=DEFAULT_DPS):
    """Max relative deviation of K over ``n`` interior points from its mid-cavity value."""
    L = cfg.separation
    sol = build_solutions(kappa, cfg, dps)
    mid = _kernel_mp(sol, L / 2)
    if mid == 0:
        return 0.0
    zs = np.linspace(L * 1e-3, L * (1 - 1e-3), n)
    return max(float(abs(_kernel_mp(sol, z) - mid) / abs(mid)) for z in zs)


def reference_constant(dps=DEFAULT_DPS):
    """Return ``C0 = K / F`` from the first reference point, cross-checked.

    Raises
    ------
    InconsistentConstantError
        If the two reference points give constants differing by more than 1e-8.
    """
    estimates = [
        oracle_integrand(kappa, cfg, dps=dps) / integrand(kappa, cfg)
        for cfg, kappa in REFERENCE_POINTS
    ]
    c0 = estimates[0]
    for other in estimates[1:]:
        if abs(other - c0) > VALIDATION_THRESHOLD * abs(c0):
            raise InconsistentConstantError(
                f"kernel constant not universal: {c0!r} vs {other!r}"
            )
    return c0


@dataclass(frozen=True)
class ValidationReport:
    """``samples`` holds ``(kappa, K / c0, F, deviation)`` per kappa."""

    c0: float
    max_deviation: float
    samples: tuple
    threshold: float = VALIDATION_THRESHOLD

    @property
    def passed(self):
        return self.max_deviation <= self.threshold


def validate(cfg, kappas, floor=1e-300, dps=DEFAULT_DPS):
    """Compare the Green's-function kernel with the closed-form integrand.

    The deviation at each kappa is ``|K/c0 - F| / max(|F|, floor)``.
    """
    kappas = [float(k) for k in kappas]
    if not kappas:
        raise DomainError("kappa sample list is empty")
    if any(not k > 0 for k in kappas):
        raise DomainError("kappa samples must be > 0")
    c0 = reference_constant(dps)
    samples = []
    for k in kappas:
        kernel = oracle_integrand(k, cfg, dps=dps) / c0
        f = integrand(k, cfg)
        dev = abs(kernel - f) / max(abs(f), floor)
        samples.append((k, kernel, f, dev))
    return ValidationReport(c0, max(s[3] for s in samples), tuple(samples))

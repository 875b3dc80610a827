"""Mirror reflection models on the imaginary frequency axis.

Natural units are used throughout: hbar = c = 1, frequencies are measured in a
reference frequency ``omega_ref`` and lengths in ``c / omega_ref``.  On the
imaginary axis the frequency is ``xi = c * kappa``, so ``xi`` and ``kappa`` are
numerically equal.

Reflection amplitudes follow the field convention
``r = (1 - sqrt(eps)) / (1 + sqrt(eps))``, so an ideal conductor has ``r = -1``.
The torque only depends on products of amplitudes from the two mirrors, so any
global sign convention applied to both walls gives the same result.
"""
from dataclasses import dataclass, field
import math

import numpy as np

from .errors import DomainError, OutOfRangeError, StaticDivergenceError

__all__ = [
    "LorentzResonance",
    "MirrorModel",
    "ConstantPair",
    "PerfectPolarizer",
    "LossyPolarizer",
    "SemiInfiniteLorentz",
    "LorentzSlab",
    "Tabulated",
    "ReflectionPair",
    "eps_imaginary_axis",
    "fresnel_semiinfinite",
    "slab_reflection",
    "reflection_pair",
    "load_tabulated",
]

# kernel dispatch codes, see _kernels.reflect
KIND_CONSTANT = 0
KIND_LORENTZ = 1
KIND_SLAB = 2
KIND_TABULATED = 3

_EMPTY = np.zeros(1)


@dataclass(frozen=True)
class LorentzResonance:
    """Single Lorentz oscillator along one principal axis.

    Parameters
    ----------
    resonance_freq : float
        Resonance frequency, in units of ``omega_ref``.
    plasma_freq : float
        Oscillator strength expressed as a plasma frequency.
    inverse_lifetime : float
        Damping rate ``1/tau``.  Zero by default.
    """

    resonance_freq: float
    plasma_freq: float
    inverse_lifetime: float = 0.0

    def __post_init__(self):
        for name in ("resonance_freq", "plasma_freq", "inverse_lifetime"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value >= 0):
                raise DomainError(f"{name} must be finite and >= 0, got {value!r}")

    def as_array(self):
        return np.array(
            [self.resonance_freq, self.plasma_freq, self.inverse_lifetime], dtype=float
        )


@dataclass(frozen=True)
class ReflectionPair:
    """Principal-axis amplitudes at one imaginary frequency."""

    r_x: float
    r_y: float

    @property
    def delta_r(self):
        return self.r_x - self.r_y


def _check_amplitude(name, value):
    if not (math.isfinite(value) and abs(value) <= 1.0):
        raise DomainError(f"{name} must satisfy |r| <= 1, got {value!r}")


class MirrorModel:
    """Base class for the normal-incidence response of one wall."""

    #: True when the amplitudes depend on kappa.
    dispersive = True

    def encode(self):
        """Flatten into ``(kind, params, table_kappa, table_rx, table_ry)``."""
        raise NotImplementedError

    def kappa_range(self):
        """Range of kappa over which the model can be evaluated."""
        return (0.0, math.inf)


@dataclass(frozen=True)
class ConstantPair(MirrorModel):
    """Frequency-independent amplitudes ``r_x``, ``r_y``."""

    r_x: float
    r_y: float
    dispersive = False

    def __post_init__(self):
        _check_amplitude("r_x", self.r_x)
        _check_amplitude("r_y", self.r_y)

    def amplitudes(self):
        return float(self.r_x), float(self.r_y)

    def encode(self):
        rx, ry = self.amplitudes()
        return KIND_CONSTANT, np.array([rx, ry]), _EMPTY, _EMPTY, _EMPTY


@dataclass(frozen=True)
class PerfectPolarizer(MirrorModel):
    """Ideal mirror behind an ideal polarizer: ``r_x = sign``, ``r_y = 0``."""

    sign: int = 1
    dispersive = False

    def __post_init__(self):
        if self.sign not in (1, -1):
            raise DomainError(f"sign must be +1 or -1, got {self.sign!r}")

    def amplitudes(self):
        return float(self.sign), 0.0

    def encode(self):
        return KIND_CONSTANT, np.array(self.amplitudes()), _EMPTY, _EMPTY, _EMPTY


@dataclass(frozen=True)
class LossyPolarizer(MirrorModel):
    """Lossy mirror with amplitude ``r`` behind an ideal polarizer."""

    r: float
    dispersive = False

    def __post_init__(self):
        _check_amplitude("r", self.r)

    def amplitudes(self):
        return float(self.r), 0.0

    def encode(self):
        return KIND_CONSTANT, np.array(self.amplitudes()), _EMPTY, _EMPTY, _EMPTY


@dataclass(frozen=True)
class SemiInfiniteLorentz(MirrorModel):
    """Semi-infinite uniaxial/orthorhombic medium with Lorentzian axes."""

    res_x: LorentzResonance
    res_y: LorentzResonance

    def encode(self):
        params = np.concatenate([self.res_x.as_array(), self.res_y.as_array(), [0.0]])
        return KIND_LORENTZ, params, _EMPTY, _EMPTY, _EMPTY


@dataclass(frozen=True)
class LorentzSlab(MirrorModel):
    """Free-standing film of thickness ``thickness`` with Lorentzian axes."""

    res_x: LorentzResonance
    res_y: LorentzResonance
    thickness: float

    def __post_init__(self):
        if not (math.isfinite(self.thickness) and self.thickness >= 0):
            raise DomainError(f"thickness must be finite and >= 0, got {self.thickness!r}")

    def encode(self):
        params = np.concatenate(
            [self.res_x.as_array(), self.res_y.as_array(), [self.thickness]]
        )
        return KIND_SLAB, params, _EMPTY, _EMPTY, _EMPTY


@dataclass(frozen=True)
class Tabulated(MirrorModel):
    """Sampled amplitudes, linearly interpolated in kappa.

    Requests outside ``[kappa[0], kappa[-1]]`` raise :class:`OutOfRangeError`.
    """

    kappa: np.ndarray = field(repr=False)
    r_x: np.ndarray = field(repr=False)
    r_y: np.ndarray = field(repr=False)

    def __post_init__(self):
        arrays = []
        for name in ("kappa", "r_x", "r_y"):
            arr = np.array(getattr(self, name), dtype=float)
            if arr.ndim != 1:
                raise DomainError(f"{name} must be one-dimensional")
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)
            arrays.append(arr)
        k, rx, ry = arrays
        if not (len(k) == len(rx) == len(ry)):
            raise DomainError("kappa, r_x and r_y must have equal length")
        if len(k) < 2:
            raise DomainError("a tabulated mirror needs at least 2 samples")
        if not np.all(np.isfinite(k)) or np.any(k < 0):
            raise DomainError("kappa samples must be finite and >= 0")
        if np.any(np.diff(k) <= 0):
            raise DomainError("kappa samples must be strictly increasing")
        if np.any(~np.isfinite(rx)) or np.any(~np.isfinite(ry)):
            raise DomainError("amplitudes must be finite")
        if np.any(np.abs(rx) > 1) or np.any(np.abs(ry) > 1):
            raise DomainError("tabulated amplitudes must satisfy |r| <= 1")

    def __eq__(self, other):
        if not isinstance(other, Tabulated):
            return NotImplemented
        return all(
            np.array_equal(getattr(self, n), getattr(other, n))
            for n in ("kappa", "r_x", "r_y")
        )

    __hash__ = None

    def kappa_range(self):
        return float(self.kappa[0]), float(self.kappa[-1])

    def encode(self):
        return KIND_TABULATED, np.zeros(2), self.kappa, self.r_x, self.r_y


def load_tabulated(path):
    """Read a ``kappa r_x r_y`` text table (``#`` starts a comment)."""
    data = np.loadtxt(path, comments="#", ndmin=2)
    if data.shape[1] != 3:
        raise DomainError(f"{path}: expected 3 columns, found {data.shape[1]}")
    return Tabulated(data[:, 0], data[:, 1], data[:, 2])


def eps_imaginary_axis(res, xi):
    """Dielectric function of a Lorentz oscillator at ``omega = i xi``.

    ``eps(i xi) = 1 + wp**2 / (w0**2 + xi**2 + xi / tau)``, real and >= 1.
    """
    xi_arr = np.asarray(xi, dtype=float)
    if np.any(xi_arr < 0):
        raise DomainError("xi must be >= 0")
    w0, wp, g = res.resonance_freq, res.plasma_freq, res.inverse_lifetime
    den = w0 * w0 + xi_arr * xi_arr + xi_arr * g
    if np.any(den == 0):
        if wp == 0:
            return np.ones_like(xi_arr)[()] if xi_arr.ndim else 1.0
        raise StaticDivergenceError(
            "eps(i xi) diverges at xi = 0 for an undamped free-carrier resonance"
        )
    eps = 1.0 + wp * wp / den
    return eps if xi_arr.ndim else float(eps)


def fresnel_semiinfinite(eps):
    """Normal-incidence amplitude ``(1 - sqrt(eps)) / (1 + sqrt(eps))``."""
    eps_arr = np.asarray(eps, dtype=float)
    if np.any(np.isnan(eps_arr)) or np.any(eps_arr < 1):
        raise DomainError("fresnel_semiinfinite requires eps >= 1")
    n = np.sqrt(eps_arr)
    # -(eps - 1) / (1 + n)^2 avoids the cancellation in 1 - n near eps = 1
    with np.errstate(invalid="ignore"):
        r = np.where(np.isinf(n), -1.0, -(eps_arr - 1.0) / (1.0 + n) ** 2)
    return r if eps_arr.ndim else float(r)


def slab_reflection(res, d, kappa):
    """Amplitude of a free-standing slab of thickness ``d`` at ``q = i kappa``.

    Sums the internal round trips:
    ``r = r01 (1 - e) / (1 - r01**2 e)`` with ``e = exp(-2 n kappa d)``.
    """
    if d < 0:
        raise DomainError("slab thickness must be >= 0")
    if kappa <= 0:
        raise DomainError("kappa must be > 0")
    eps = eps_imaginary_axis(res, kappa)
    n = math.sqrt(eps)
    r01 = fresnel_semiinfinite(eps)
    if math.isinf(d):
        return r01
    e = math.exp(-2.0 * n * kappa * d)
    return r01 * (1.0 - e) / (1.0 - r01 * r01 * e)


def reflection_pair(mirror, kappa):
    """Evaluate ``(r_x, r_y)`` of ``mirror`` at imaginary wavenumber ``kappa``."""
    if not kappa > 0:
        raise DomainError(f"kappa must be > 0, got {kappa!r}")
    if isinstance(mirror, (ConstantPair, PerfectPolarizer, LossyPolarizer)):
        return ReflectionPair(*mirror.amplitudes())
    if isinstance(mirror, SemiInfiniteLorentz):
        return ReflectionPair(
            fresnel_semiinfinite(eps_imaginary_axis(mirror.res_x, kappa)),
            fresnel_semiinfinite(eps_imaginary_axis(mirror.res_y, kappa)),
        )
    if isinstance(mirror, LorentzSlab):
        return ReflectionPair(
            slab_reflection(mirror.res_x, mirror.thickness, kappa),
            slab_reflection(mirror.res_y, mirror.thickness, kappa),
        )
    if isinstance(mirror, Tabulated):
        lo, hi = mirror.kappa_range()
        if not lo <= kappa <= hi:
            raise OutOfRangeError(
                f"kappa={kappa!r} outside tabulated range [{lo!r}, {hi!r}]"
            )
        return ReflectionPair(
            float(np.interp(kappa, mirror.kappa, mirror.r_x)),
            float(np.interp(kappa, mirror.kappa, mirror.r_y)),
        )
    raise TypeError(f"unsupported mirror model {type(mirror).__name__}")

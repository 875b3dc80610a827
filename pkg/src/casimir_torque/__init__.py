"""Casimir torque between anisotropic planar mirrors in one dimension."""
__version__ = "0.1.0"

from ._backend import BACKEND
from .errors import (
    CasimirTorqueError,
    ConfigError,
    DomainError,
    InconsistentConstantError,
    NonConvergenceError,
    OutOfRangeError,
    SingularBracketError,
    SingularDenominatorError,
    StaticDivergenceError,
)
from .material import (
    ConstantPair,
    LorentzResonance,
    LorentzSlab,
    LossyPolarizer,
    MirrorModel,
    PerfectPolarizer,
    ReflectionPair,
    SemiInfiniteLorentz,
    Tabulated,
    eps_imaginary_axis,
    fresnel_semiinfinite,
    load_tabulated,
    reflection_pair,
    slab_reflection,
)
from .torque import (
    CavityConfig,
    QuadratureSettings,
    TorqueResult,
    integrand,
    scan_angle,
    scan_distance,
    small_r_approx,
    torque,
    torque_lossy,
    torque_perfect_polarizers,
)

__all__ = [
    "__version__",
    "BACKEND",
    "CasimirTorqueError",
    "ConfigError",
    "DomainError",
    "InconsistentConstantError",
    "NonConvergenceError",
    "OutOfRangeError",
    "SingularBracketError",
    "SingularDenominatorError",
    "StaticDivergenceError",
    "ConstantPair",
    "LorentzResonance",
    "LorentzSlab",
    "LossyPolarizer",
    "MirrorModel",
    "PerfectPolarizer",
    "ReflectionPair",
    "SemiInfiniteLorentz",
    "Tabulated",
    "eps_imaginary_axis",
    "fresnel_semiinfinite",
    "load_tabulated",
    "reflection_pair",
    "slab_reflection",
    "CavityConfig",
    "QuadratureSettings",
    "TorqueResult",
    "integrand",
    "scan_angle",
    "scan_distance",
    "small_r_approx",
    "torque",
    "torque_lossy",
    "torque_perfect_polarizers",
]

"""Radiative friction and rotational radiation of a spinning particle near a surface.

Thin re-export of the compiled core. Internal units set hbar = c = eps0 = kB = 1
with frequencies measured in omega_c; use UnitSystem to convert SI quantities at
the boundary.
"""

from ._core import (
    BathChannel,
    BodySusceptibility,
    Config,
    ConfigError,
    DielectricModel,
    DiscreteBath,
    Environment,
    GammaReport,
    ImGreenDiag,
    IntegralResult,
    LorentzTerm,
    NonConvergence,
    PlanarGeometry,
    Polarizability,
    PowerDensity,
    QuadratureConfig,
    RunResult,
    SpectralResult,
    SpinningBody,
    TorqueDensity,
    TorqueResult,
    UnitSystem,
    VerifyResult,
    __version__,
    couplings_from_chi,
    default_config,
    friction_torque,
    im_green,
    load_config_file,
    load_tabulated,
    log_grid,
    parse_config,
    point_dipole_warning,
    power_spectral_density,
    radiated_power,
    reconstruct_chi0,
    run_scenario,
    spectrum,
    thermal_mode_spectrum,
    torque_spectral_density,
    trapezoid_weights,
    verify_gamma,
    verify_scenario,
)

__all__ = [
    "BathChannel",
    "BodySusceptibility",
    "Config",
    "ConfigError",
    "DielectricModel",
    "DiscreteBath",
    "Environment",
    "GammaReport",
    "ImGreenDiag",
    "IntegralResult",
    "LorentzTerm",
    "NonConvergence",
    "PlanarGeometry",
    "Polarizability",
    "PowerDensity",
    "QuadratureConfig",
    "RunResult",
    "SpectralResult",
    "SpinningBody",
    "TorqueDensity",
    "TorqueResult",
    "UnitSystem",
    "VerifyResult",
    "__version__",
    "couplings_from_chi",
    "default_config",
    "friction_torque",
    "im_green",
    "load_config_file",
    "load_tabulated",
    "log_grid",
    "parse_config",
    "point_dipole_warning",
    "power_spectral_density",
    "radiated_power",
    "reconstruct_chi0",
    "run_scenario",
    "spectrum",
    "thermal_mode_spectrum",
    "torque_spectral_density",
    "trapezoid_weights",
    "verify_gamma",
    "verify_scenario",
]

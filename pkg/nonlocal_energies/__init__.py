from .asymmetry import AsymmetryResult, fraenkel_asymmetry
from .ball_cluster import BallCluster
from .densities import Density1D, Density2D, decreasing_rearrangement
from .errors import (
    BoundViolation,
    ConvergenceError,
    DomainError,
    MassMismatchError,
    NonlocalEnergiesError,
    PreconditionError,
)
from .geometry import Shape, load_shape, shape_from_dict
from .nearly_spherical import NearlySphericalShape
from .perimeter import p_s
from .radial_profile import RadialDensity, RadialProfile, annulus_family
from .report import EnergyReport, KernelSpec, evaluate, mixed_energy
from .shape_energy import deficit_beta, g_beta, g_beta_truncated, v_alpha
from .shell_transport import ShellMap, shell_transport
from .spectral import SpectralTable, build_table, verify_gap
from .sphere_grid import SphereGrid
from .stability import (
    big_asymmetry_check,
    constraint_project,
    fuglede_check,
    sharpness_fit,
    spectral_gap_form,
    stability_constant,
)
from .transport import KnotheRosenblatt2D, TransportMap1D

__all__ = [
    "AsymmetryResult",
    "BallCluster",
    "BoundViolation",
    "ConvergenceError",
    "Density1D",
    "Density2D",
    "DomainError",
    "EnergyReport",
    "KernelSpec",
    "KnotheRosenblatt2D",
    "MassMismatchError",
    "NearlySphericalShape",
    "NonlocalEnergiesError",
    "PreconditionError",
    "RadialDensity",
    "RadialProfile",
    "Shape",
    "ShellMap",
    "SpectralTable",
    "SphereGrid",
    "TransportMap1D",
    "annulus_family",
    "big_asymmetry_check",
    "build_table",
    "constraint_project",
    "decreasing_rearrangement",
    "deficit_beta",
    "evaluate",
    "fraenkel_asymmetry",
    "fuglede_check",
    "g_beta",
    "g_beta_truncated",
    "load_shape",
    "mixed_energy",
    "p_s",
    "shape_from_dict",
    "sharpness_fit",
    "shell_transport",
    "spectral_gap_form",
    "stability_constant",
    "v_alpha",
    "verify_gap",
]

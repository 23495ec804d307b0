"""Dimensionally homogeneous fractional embeddings of Lagrangian systems.

Submodules: :mod:`~fracdyn.dimension` (symbolic dimensions),
:mod:`~fracdyn.eqdsl` (equation language), :mod:`~fracdyn.specialfn`
(gamma, Mittag-Leffler), :mod:`~fracdyn.fractops` (Caputo derivatives),
:mod:`~fracdyn.lagrangian` (embeddings and residuals),
:mod:`~fracdyn.fdesolver` (predictor-corrector solver) and
:mod:`~fracdyn.oscillator` (worked scenarios).
"""

from fracdyn.dimension import DIMENSIONLESS, Dimension, ExponentExpr, HomogeneityVerdict, VerdictKind
from fracdyn.fractops import CaputoSpec, caputo, homogeneous_caputo
from fracdyn.specialfn import MLParams, gamma, mittag_leffler
from fracdyn.trajectory import SampledTrajectory

__version__ = "0.1.0"

__all__ = [
    "DIMENSIONLESS",
    "CaputoSpec",
    "Dimension",
    "ExponentExpr",
    "HomogeneityVerdict",
    "MLParams",
    "SampledTrajectory",
    "VerdictKind",
    "caputo",
    "gamma",
    "homogeneous_caputo",
    "mittag_leffler",
]

"""Darboux partners of PT-symmetric potentials along a shifted contour."""
__version__ = "0.1.0"

from .core import Contour, DiffScheme, SampledField, build_contour, differentiate
from .darboux import DarbouxPair, make_pair, map_state, shape_invariance_residual
from .ginocchio import GinocchioParams
from .oscillator import OscillatorParams
from .spectra import eigen_spectrum, discretize, match_spectra

__all__ = [
    "Contour", "DiffScheme", "SampledField", "build_contour", "differentiate",
    "DarbouxPair", "make_pair", "map_state", "shape_invariance_residual",
    "GinocchioParams", "OscillatorParams", "eigen_spectrum", "discretize", "match_spectra",
]

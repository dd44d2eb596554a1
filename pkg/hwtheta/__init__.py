"""Hatcher-Wagoner Theta invariants of barbell diffeomorphisms."""

from hwtheta.barbell import BarbellDescriptor, Circle, delta_k, realize, theta, theta_g
from hwtheta.errors import HWThetaError, ParseError
from hwtheta.groupwords import FactorSpec, GroupPresentation, Word
from hwtheta.pi2module import ModuleElement, ModuleSpec
from hwtheta.whitehead import ManifoldData, WhElement, WhNormalForm, wh_equal, wh_normalize

__version__ = "0.1.0"

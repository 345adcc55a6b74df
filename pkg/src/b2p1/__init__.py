"""(2+1)-dimensional Boussinesq systems over an uneven bottom."""
from .bathymetry import Bathymetry
from .dynamics import PairModel, StepperConfig, WaveState, evolve, step_rk4
from .errors import B2P1Error
from .grid import Grid1D, Grid2D, OperatorSymbol
from .kernels import BACKEND
from .params import Regime, SmallParams, nondimensionalize, validate_regime

__version__ = "0.1.0"

__all__ = ["BACKEND", "B2P1Error", "Bathymetry", "Grid1D", "Grid2D", "OperatorSymbol",
           "PairModel", "Regime", "SmallParams", "StepperConfig", "WaveState", "evolve",
           "nondimensionalize", "step_rk4", "validate_regime"]

"""Reduced-order model of a reconfigurable half-width microstrip leaky-wave antenna.

Modules, bottom up: ``twoport`` (chain matrices, microstrip closed forms),
``components`` (varactors, diodes, control state), ``dispersion`` (loaded-line
dispersion and the port-level cascade), ``farfield`` (aperture and pattern),
``steering`` (forward model, calibration, inverse solvers), ``config``/``io``
(files) and ``cli``.
"""

from .components import ControlState, DeviceSpecs, DiodeSpec, VaractorSpec
from .dispersion import AntennaGeometry
from .steering import (
    AntennaModel,
    BeamSolution,
    CalibrationConstants,
    calibrate,
    forward,
    solve_2d,
    steering_map,
)
from .twoport import SubstrateSpec

__version__ = "0.1.0"

__all__ = [
    "AntennaGeometry",
    "AntennaModel",
    "BeamSolution",
    "CalibrationConstants",
    "ControlState",
    "DeviceSpecs",
    "DiodeSpec",
    "SubstrateSpec",
    "VaractorSpec",
    "calibrate",
    "forward",
    "solve_2d",
    "steering_map",
]

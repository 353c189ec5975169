"""Power-law polyharmonic kernels, their orthogonal expansions, polyspherical
harmonics, and numerically certified addition theorems."""

from . import errors, expansions, kernels, orthopoly, polyspherical, specfun, verify

__all__ = [
    "errors",
    "expansions",
    "kernels",
    "orthopoly",
    "polyspherical",
    "specfun",
    "verify",
]

__version__ = "0.1.0"

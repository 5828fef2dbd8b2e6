"""
levy_mlmc

Multilevel Monte Carlo and control-variate estimators for elliptic problems
whose diffusion coefficient is a subordinated Gaussian random field with
spatial jumps.
"""

__version__ = "1.0.0"

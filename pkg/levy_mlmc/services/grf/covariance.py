"""
Matern Covariance

Stationary Matern covariance rho(s) = sigma2 2^(1-nu)/Gamma(nu) t^nu K_nu(t)
with t = 2 s sqrt(nu) / r, and dense covariance matrices of grid points.
"""

import math

import numpy as np
from scipy.spatial.distance import cdist
from scipy.special import gamma as gamma_fn
from scipy.special import kv

from levy_mlmc.core.errors import FieldError
from levy_mlmc.models import MaternParams, TensorGrid


def _half_integer_order(nu: float):
    k = nu - 0.5
    rounded = round(k)
    return int(rounded) if abs(k - rounded) < 1e-12 and rounded >= 0 else None


def matern_covariance(s, p: MaternParams):
    """Matern covariance at distance(s) `s`; sigma2 at s = 0."""
    distances = np.asarray(s, dtype=float)
    if not np.all(np.isfinite(distances)):
        raise FieldError("Matern covariance needs finite distances")
    if np.any(distances < 0.0):
        raise FieldError("Matern covariance needs distances >= 0")

    t = 2.0 * distances * math.sqrt(p.nu) / p.r
    k = _half_integer_order(p.nu)
    if k is not None:
        # finite expansion of K_{k+1/2}
        poly = np.zeros_like(t)
        for i in range(k + 1):
            coeff = math.factorial(k + i) / (math.factorial(i) * math.factorial(k - i))
            poly = poly + coeff * (2.0 * t) ** (k - i)
        out = p.sigma2 * np.exp(-t) * math.factorial(k) / math.factorial(2 * k) * poly
    else:
        with np.errstate(invalid="ignore", over="ignore"):
            out = p.sigma2 * 2.0 ** (1.0 - p.nu) / gamma_fn(p.nu) * t ** p.nu * kv(p.nu, t)
        out = np.where(t == 0.0, p.sigma2, np.nan_to_num(out, nan=0.0))

    if np.ndim(out) == 0:
        return float(out)
    return out


def covariance_matrix(grid: TensorGrid, p: MaternParams) -> np.ndarray:
    """Dense covariance of all grid nodes, ordered like GridField.values.ravel()."""
    points = grid.points()
    cov = matern_covariance(cdist(points, points), p)
    cov = np.atleast_2d(cov)
    if not np.allclose(cov, cov.T, rtol=0.0, atol=1e-14 * p.sigma2):
        raise FieldError("Assembled covariance matrix is not symmetric")
    if not np.allclose(np.diag(cov), p.sigma2, rtol=1e-14, atol=0.0):
        raise FieldError("Assembled covariance matrix has a non-constant diagonal")
    return cov

"""Jacobi, Gegenbauer and Chebyshev polynomials plus Jacobi machinery.

Evaluation goes through the standard three-term recurrences (O(n), stable on
[-1, 1] and for z > 1); the terminating hypergeometric definitions serve as
test oracles only.  All evaluators accept scalar or ndarray arguments.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass

import numpy as np

from .errors import ZeroParameterError
from .specfun import gamma_signed_log, hyp_3f2_unit, pochhammer


def _validate_jacobi_params(alpha, beta):
    if alpha <= -1.0 or beta <= -1.0:
        raise ValueError(f"Jacobi parameters must exceed -1, got ({alpha}, {beta})")
    if -1.0 < alpha < 0.0 and -1.0 < beta < 0.0 and alpha + beta + 1.0 == 0.0:
        raise ValueError("alpha + beta + 1 = 0 with both parameters in (-1, 0)")


def jacobi_p(n: int, alpha: float, beta: float, x):
    """Jacobi polynomial P_n^{(alpha,beta)}(x) by three-term recurrence."""
    if n < 0:
        raise ValueError("degree must be a nonnegative integer")
    _validate_jacobi_params(alpha, beta)
    xa = np.asarray(x, dtype=float)
    p0 = np.ones_like(xa)
    if n == 0:
        return p0 if np.ndim(x) else 1.0
    ab = alpha + beta
    p1 = 0.5 * ((ab + 2.0) * xa + (alpha - beta))
    for k in range(2, n + 1):
        c1 = 2.0 * k * (k + ab) * (2.0 * k + ab - 2.0)
        c2 = (2.0 * k + ab - 1.0) * (alpha * alpha - beta * beta)
        c3 = (2.0 * k + ab - 2.0) * (2.0 * k + ab - 1.0) * (2.0 * k + ab)
        c4 = 2.0 * (k + alpha - 1.0) * (k + beta - 1.0) * (2.0 * k + ab)
        p0, p1 = p1, ((c2 + c3 * xa) * p1 - c4 * p0) / c1
    return p1 if np.ndim(x) else float(p1)


def jacobi_norm(n: int, alpha: float, beta: float) -> float:
    """Normalization N_n^{alpha,beta} making sqrt-weighted P_n unit norm."""
    if n < 0:
        raise ValueError("degree must be a nonnegative integer")
    _validate_jacobi_params(alpha, beta)
    return math.exp(0.5 * jacobi_norm_log(n, alpha, beta))


def jacobi_norm_log(n: int, alpha: float, beta: float) -> float:
    """log of (N_n^{alpha,beta})^2, safe for large parameters."""
    ab = alpha + beta
    # (2n+ab+1) Gamma(n+ab+1) = Gamma(n+ab+2) (2n+ab+1)/(n+ab+1); the second
    # form stays finite at n = 0 when ab + 1 -> 0.  At n = 0 with ab + 1 < 0
    # both ratio factors are negative, so absolute values are safe.
    _, lg_top = gamma_signed_log(n + ab + 2.0)
    return (math.log(abs(2.0 * n + ab + 1.0)) - math.log(abs(n + ab + 1.0)) + lg_top
            + math.lgamma(n + 1.0) - (ab + 1.0) * math.log(2.0)
            - math.lgamma(n + alpha + 1.0) - math.lgamma(n + beta + 1.0))


def gegenbauer_c(n: int, mu: float, x):
    """Gegenbauer polynomial C_n^{mu}(x) by recurrence; mu > -1/2, mu != 0."""
    if n < 0:
        raise ValueError("degree must be a nonnegative integer")
    if mu == 0.0:
        raise ZeroParameterError(
            "C_n^0 vanishes identically; use chebyshev_t with the Neumann factor")
    if mu <= -0.5:
        raise ValueError(f"Gegenbauer order must exceed -1/2, got {mu}")
    xa = np.asarray(x, dtype=float)
    c0 = np.ones_like(xa)
    if n == 0:
        return c0 if np.ndim(x) else 1.0
    c1 = 2.0 * mu * xa
    for k in range(2, n + 1):
        c0, c1 = c1, (2.0 * xa * (k + mu - 1.0) * c1 - (k + 2.0 * mu - 2.0) * c0) / k
    return c1 if np.ndim(x) else float(c1)


def gegenbauer_c_all(nmax: int, mu: float, x):
    """All of C_0^mu(x) .. C_nmax^mu(x) in one recurrence pass."""
    if mu == 0.0:
        raise ZeroParameterError(
            "C_n^0 vanishes identically; use chebyshev_t with the Neumann factor")
    xa = np.asarray(x, dtype=float)
    out = np.empty((nmax + 1,) + xa.shape, dtype=float)
    out[0] = 1.0
    if nmax >= 1:
        out[1] = 2.0 * mu * xa
    for k in range(2, nmax + 1):
        out[k] = (2.0 * xa * (k + mu - 1.0) * out[k - 1]
                  - (k + 2.0 * mu - 2.0) * out[k - 2]) / k
    return out


def chebyshev_t(n: int, x):
    """Chebyshev polynomial of the first kind T_n(x) by recurrence."""
    if n < 0:
        raise ValueError("degree must be a nonnegative integer")
    xa = np.asarray(x, dtype=float)
    t0 = np.ones_like(xa)
    if n == 0:
        return t0 if np.ndim(x) else 1.0
    t1 = xa.copy()
    for _ in range(2, n + 1):
        t0, t1 = t1, 2.0 * xa * t1 - t0
    return t1 if np.ndim(x) else float(t1)


@dataclass(frozen=True)
class ConnectionTable:
    """Coefficients expanding P_n^{(gamma,delta)} over the P_k^{(alpha,beta)}."""

    source: tuple[float, float]
    target: tuple[float, float]
    degree: int
    coefficients: tuple[float, ...]

    def reconstruct(self, x):
        alpha, beta = self.target
        return sum(c * jacobi_p(k, alpha, beta, x)
                   for k, c in enumerate(self.coefficients))


_connection_cache: dict = {}
_connection_lock = threading.Lock()


def connection_coeffs(n: int, gamma_: float, delta: float,
                      alpha: float, beta: float) -> ConnectionTable:
    """Two-free-parameter Jacobi connection coefficients c_{n,k}.

    Each c_{n,k} is a terminating 3F2 at unit argument; results are cached
    per parameter tuple because the same table is reused across expansion
    degrees.
    """
    if n < 0:
        raise ValueError("degree must be a nonnegative integer")
    _validate_jacobi_params(gamma_, delta)
    _validate_jacobi_params(alpha, beta)
    key = (n, gamma_, delta, alpha, beta)
    with _connection_lock:
        hit = _connection_cache.get(key)
    if hit is not None:
        return hit
    coeffs = []
    for k in range(n + 1):
        front = (pochhammer(gamma_ + k + 1.0, n - k)
                 * pochhammer(n + gamma_ + delta + 1.0, k)
                 * math.gamma(alpha + beta + k + 1.0)
                 / (math.factorial(n - k) * math.gamma(alpha + beta + 2.0 * k + 1.0)))
        f = hyp_3f2_unit(-(n - k), n + k + gamma_ + delta + 1.0, alpha + k + 1.0,
                         gamma_ + k + 1.0, alpha + beta + 2.0 * k + 2.0)
        coeffs.append(front * f)
    table = ConnectionTable(source=(gamma_, delta), target=(alpha, beta),
                            degree=n, coefficients=tuple(coeffs))
    with _connection_lock:
        _connection_cache[key] = table
    return table

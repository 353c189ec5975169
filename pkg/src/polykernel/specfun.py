"""Scalar special functions: gamma, hypergeometric series, Legendre and
Ferrers functions, and the Jacobi function of the second kind.

All functions work in real double precision.  Legendre functions of the
second kind are returned phase-free: Qhat_nu^mu(z) := e^{-i pi mu} Q_nu^mu(z),
which is real for z > 1.  Every expansion elsewhere in the package is stated
in terms of Qhat, with the originating phase factors cancelled analytically.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import (
    ConvergenceError,
    DomainError,
    NonTerminatingError,
    ParameterPoleError,
    PoleError,
    SlowConvergenceError,
)

_MAX_TERMS = 100_000
_STOP_REL = 1e-16
_NEAR_ONE_GUARD = 1e-6


def _nonpositive_int(x, tol=1e-12):
    """Return the integer n <= 0 with x ~= n, or None."""
    if x > 0.5:
        return None
    n = round(x)
    if n <= 0 and abs(x - n) <= tol * max(1.0, abs(x)):
        return int(n)
    return None


def _is_int(x, tol=1e-12):
    return abs(x - round(x)) <= tol * max(1.0, abs(x))


def gamma(x: float) -> float:
    """Gamma function on the real line, poles excluded."""
    if _nonpositive_int(x) is not None:
        raise PoleError(f"gamma pole at x = {x}")
    return math.gamma(x)  # raises OverflowError past ~171.6


def gamma_signed_log(x: float) -> tuple[float, float]:
    """(sign, log|Gamma(x)|); usable where Gamma itself would overflow."""
    if _nonpositive_int(x) is not None:
        raise PoleError(f"gamma pole at x = {x}")
    sign = 1.0
    if x < 0.0:
        # Gamma alternates sign between consecutive negative integers:
        # negative on (-1, 0), positive on (-2, -1), ...
        sign = -1.0 if math.floor(x) % 2 != 0 else 1.0
    return sign, math.lgamma(x)


def pochhammer(z: float, n: int) -> float:
    """Rising factorial (z)_n = z (z+1) ... (z+n-1), with (z)_0 = 1."""
    if n < 0:
        raise ValueError("pochhammer order must be a nonnegative integer")
    out = 1.0
    for i in range(n):
        out *= z + i
    return out


def _hyp2f1_series(a, b, c, x, max_terms=_MAX_TERMS):
    """Sum the Gauss series with Kahan compensation and dynamic rescaling.

    Returns (mantissa, log_scale, terms) with value = mantissa * exp(log_scale).
    Rescaling keeps partial sums representable when the value itself would
    overflow a double (large-degree Legendre/Jacobi prefactors cancel it).
    """
    na = _nonpositive_int(a)
    nb = _nonpositive_int(b)
    n_stop = None
    if na is not None or nb is not None:
        n_stop = min(-n for n in (na, nb) if n is not None)
    nc = _nonpositive_int(c)
    if nc is not None and (n_stop is None or n_stop > -nc):
        raise ParameterPoleError(
            f"2F1 lower parameter c = {c} is a non-positive integer")
    if n_stop is None and abs(x) >= 1.0:
        raise ConvergenceError(
            f"2F1 series diverges for |x| = {abs(x)} >= 1 without termination")

    s = 1.0
    comp = 0.0
    t = 1.0
    log_scale = 0.0
    small_run = 0
    n = 0
    while True:
        if n_stop is not None and n >= n_stop:
            break
        t *= (a + n) * (b + n) / ((c + n) * (n + 1.0)) * x
        n += 1
        y = t - comp
        tmp = s + y
        comp = (tmp - s) - y
        s = tmp
        if n_stop is None:
            if abs(t) < _STOP_REL * abs(s):
                small_run += 1
                if small_run >= 3:
                    break
            else:
                small_run = 0
            if n >= max_terms:
                raise ConvergenceError(
                    f"2F1 did not converge within {max_terms} terms")
        if abs(s) > 1e250 or abs(t) > 1e250:
            s *= 1e-100
            comp *= 1e-100
            t *= 1e-100
            log_scale += 100.0 * math.log(10.0)
    return s, log_scale, n


def gauss_2f1(a: float, b: float, c: float, x: float) -> float:
    """Gauss hypergeometric 2F1(a, b; c; x) for real parameters.

    Terminates exactly when a or b is a non-positive integer; otherwise
    requires |x| < 1.
    """
    s, log_scale, _ = _hyp2f1_series(a, b, c, x)
    if log_scale == 0.0:
        return s
    if s == 0.0:
        return 0.0
    out = math.log(abs(s)) + log_scale
    if out > 709.0:
        raise OverflowError("2F1 value exceeds double range")
    return math.copysign(math.exp(out), s)


def hyp_3f2_unit(a1: float, a2: float, a3: float, b1: float, b2: float) -> float:
    """Terminating 3F2(a1, a2, a3; b1, b2; 1).

    One of the upper parameters must be a non-positive integer; the exact
    finite sum is returned.
    """
    stops = [-n for n in map(_nonpositive_int, (a1, a2, a3)) if n is not None]
    if not stops:
        raise NonTerminatingError(
            "3F2 at unit argument needs a non-positive-integer upper parameter")
    n_stop = min(stops)
    for b in (b1, b2):
        nb = _nonpositive_int(b)
        if nb is not None and -nb < n_stop:
            raise ParameterPoleError(
                f"3F2 lower parameter {b} hits a pole before termination")
    s = 1.0
    comp = 0.0
    t = 1.0
    for n in range(n_stop):
        t *= (a1 + n) * (a2 + n) * (a3 + n) / ((b1 + n) * (b2 + n) * (n + 1.0))
        y = t - comp
        tmp = s + y
        comp = (tmp - s) - y
        s = tmp
    return s


@dataclass(frozen=True)
class PhaseFreeQ:
    """Real value of Qhat_nu^mu(z) = e^{-i pi mu} Q_nu^mu(z).

    ``phase_exponent`` records the removed phase: the multiple of pi in the
    exponent of the stripped factor e^{-i pi mu}, stored exactly (every
    double is a dyadic rational).
    """

    value: float
    phase_exponent: Fraction

    def __float__(self):
        return self.value


def legendre_q_hat(nu: float, mu: float, z: float) -> PhaseFreeQ:
    """Phase-free associated Legendre function of the second kind, z > 1.

    Uses the hypergeometric series in 1/z^2, which converges for every
    z > 1; degrees nu in {-3/2, -5/2, ...} degenerate in that representation
    and are routed to the 2/(1-z) representation when it applies (z > 3).
    """
    if z <= 1.0:
        raise DomainError(f"legendre_q_hat requires z > 1, got {z}")
    if z - 1.0 < _NEAR_ONE_GUARD:
        raise SlowConvergenceError(
            f"z - 1 = {z - 1.0:.3e} below the {_NEAR_ONE_GUARD} guard")
    if _nonpositive_int(nu + mu + 1.0) is not None:
        raise PoleError(f"Q pole: nu + mu = {nu + mu} is a negative integer")
    if _is_int(nu + 0.5) and nu < -1.0:
        return _legendre_q_hat_alt(nu, mu, z)
    sign_t, log_t = gamma_signed_log(nu + mu + 1.0)
    sign_b, log_b = gamma_signed_log(nu + 1.5)
    log_pref = (0.5 * math.log(math.pi) + log_t - log_b
                + 0.5 * mu * math.log(z * z - 1.0)
                - (nu + 1.0) * math.log(2.0)
                - (nu + mu + 1.0) * math.log(z))
    f, log_scale, _ = _hyp2f1_series(0.5 * (nu + mu + 1.0),
                                     0.5 * (nu + mu + 2.0),
                                     nu + 1.5, 1.0 / (z * z))
    value = _exp_combine(sign_t * sign_b, log_pref + log_scale, f)
    return PhaseFreeQ(value=value, phase_exponent=-Fraction(mu))


def _legendre_q_hat_alt(nu, mu, z):
    # 2/(1-z) representation; needs |1-z| > 2 and non-degenerate gammas.
    if _nonpositive_int(2.0 * nu + 2.0) is not None or _nonpositive_int(nu + 1.0) is not None:
        raise PoleError(
            f"Q representation degenerates at degree nu = {nu}: both the"
            " 1/z^2 and the 2/(1-z) hypergeometric forms have gamma poles")
    if z <= 3.0:
        raise PoleError(
            f"degree nu = {nu} needs the 2/(1-z) representation, valid only"
            f" for z > 3 (got z = {z})")
    sign1, log1 = gamma_signed_log(nu + 1.0)
    sign2, log2 = gamma_signed_log(nu + mu + 1.0)
    sign3, log3 = gamma_signed_log(2.0 * nu + 2.0)
    log_pref = (nu * math.log(2.0) + log1 + log2 - log3
                + 0.5 * mu * math.log(z + 1.0)
                - (0.5 * mu + nu + 1.0) * math.log(z - 1.0))
    f, log_scale, _ = _hyp2f1_series(nu + 1.0, nu + mu + 1.0,
                                     2.0 * nu + 2.0, 2.0 / (1.0 - z))
    value = _exp_combine(sign1 * sign2 * sign3, log_pref + log_scale, f)
    return PhaseFreeQ(value=value, phase_exponent=-Fraction(mu))


def _exp_combine(sign, log_pref, mantissa):
    if mantissa == 0.0:
        return 0.0
    out = log_pref + math.log(abs(mantissa))
    if out > 709.0:
        raise OverflowError("value exceeds double range")
    if out < -745.0:
        return 0.0
    return sign * math.copysign(math.exp(out), mantissa)


def legendre_p_gt1(nu: float, mu: float, z: float) -> float:
    """Associated Legendre function of the first kind for real z > 1."""
    if z <= 1.0:
        raise DomainError(f"legendre_p_gt1 requires z > 1, got {z}")
    nu_int = _is_int(nu) and nu >= 0
    mu_int = _is_int(mu)
    if nu_int and mu_int and mu >= 0:
        return _legendre_p_recurrence(int(round(nu)), int(round(mu)), z)
    if mu_int and mu < 0:
        # Order -n: the defining series has no gamma pole and, for integer
        # degree, terminates, so it is valid for every z > 1.
        n = int(round(-mu))
        pref = ((z - 1.0) / (z + 1.0)) ** (0.5 * n) / math.gamma(n + 1.0)
        return pref * gauss_2f1(-nu, nu + 1.0, 1.0 + n, 0.5 * (1.0 - z))
    if _nonpositive_int(1.0 - mu) is not None:
        raise ParameterPoleError(
            f"legendre_p_gt1 pole: 1 - mu = {1.0 - mu} is a non-positive"
            " integer and the series does not terminate")
    pref = ((z + 1.0) / (z - 1.0)) ** (0.5 * mu) / math.gamma(1.0 - mu)
    return pref * gauss_2f1(-nu, nu + 1.0, 1.0 - mu, 0.5 * (1.0 - z))


def _legendre_p_recurrence(l, m, z):
    # P_m^m = (2m-1)!! (z^2-1)^{m/2}, then upward in degree (stable: P grows).
    if m > l:
        return 0.0
    pmm = 1.0
    for k in range(1, m + 1):
        pmm *= (2 * k - 1) * math.sqrt(z * z - 1.0)
    if l == m:
        return pmm
    pm1 = z * (2 * m + 1) * pmm
    if l == m + 1:
        return pm1
    prev, cur = pmm, pm1
    for ll in range(m + 2, l + 1):
        prev, cur = cur, ((2 * ll - 1) * z * cur - (ll + m - 1) * prev) / (ll - m)
    return cur


def ferrers_p(l: int, m: int, x) -> float:
    """Ferrers function of the first kind for integer degree and order.

    Accepts scalar or ndarray x on [-1, 1]; includes the (-1)^m
    Condon-Shortley factor of the on-the-cut definition.
    """
    if l < 0 or abs(m) > l:
        raise ValueError(f"ferrers_p needs 0 <= |m| <= l, got l={l}, m={m}")
    xa = np.asarray(x, dtype=float)
    if np.any(np.abs(xa) > 1.0) or (m != 0 and np.any(np.abs(xa) >= 1.0)):
        raise DomainError("ferrers_p requires x in (-1, 1) (closed for m = 0)")
    if m < 0:
        n = -m
        scale = (-1.0) ** n * math.factorial(l - n) / math.factorial(l + n)
        return scale * ferrers_p(l, n, x)
    pmm = np.ones_like(xa)
    if m > 0:
        s = np.sqrt(1.0 - xa * xa)
        for k in range(1, m + 1):
            pmm = pmm * (-(2 * k - 1)) * s
    if l == m:
        out = pmm
    else:
        pm1 = xa * (2 * m + 1) * pmm
        if l == m + 1:
            out = pm1
        else:
            prev, cur = pmm, pm1
            for ll in range(m + 2, l + 1):
                prev, cur = cur, ((2 * ll - 1) * xa * cur - (ll + m - 1) * prev) / (ll - m)
            out = cur
    return out if np.ndim(x) else float(out)


def jacobi_q2_signed_log(gamma_deg: float, alpha: float, beta: float,
                         z: float) -> tuple[float, float]:
    """(sign, log|Q_gamma^{(alpha,beta)}(z)|); overflow-free at large degree."""
    if z <= 1.0:
        raise DomainError(f"jacobi_q2 requires z > 1, got {z}")
    if z - 1.0 < _NEAR_ONE_GUARD:
        raise SlowConvergenceError(
            f"z - 1 = {z - 1.0:.3e} below the {_NEAR_ONE_GUARD} guard")
    for name, val in (("alpha+gamma", alpha + gamma_deg),
                      ("beta+gamma", beta + gamma_deg)):
        if _nonpositive_int(val + 1.0) is not None:
            raise PoleError(f"jacobi_q2 pole: {name} = {val} is a negative integer")
    c = alpha + beta + 2.0 * gamma_deg + 2.0
    if _nonpositive_int(c) is not None:
        raise PoleError(f"jacobi_q2 pole: alpha+beta+2gamma+2 = {c}")
    sign1, log1 = gamma_signed_log(alpha + gamma_deg + 1.0)
    sign2, log2 = gamma_signed_log(beta + gamma_deg + 1.0)
    sign3, log3 = gamma_signed_log(c)
    log_pref = ((alpha + beta + gamma_deg) * math.log(2.0) + log1 + log2 - log3
                - alpha * math.log(z - 1.0)
                - (beta + gamma_deg + 1.0) * math.log(z + 1.0))
    f, log_scale, _ = _hyp2f1_series(gamma_deg + 1.0, beta + gamma_deg + 1.0,
                                     c, 2.0 / (1.0 + z))
    if f == 0.0:
        return 0.0, -math.inf
    sign = sign1 * sign2 * sign3 * math.copysign(1.0, f)
    return sign, log_pref + log_scale + math.log(abs(f))


def jacobi_q2(gamma_deg: float, alpha: float, beta: float, z: float) -> float:
    """Jacobi function of the second kind Q_gamma^{(alpha,beta)}(z), z > 1.

    Evaluated through the Pfaff-transformed Gauss series in 2/(1+z), which
    converges for every z > 1 (the classical 2/(1-z) series only converges
    for z > 3 and serves as a far-field cross-check in the test suite).
    """
    sign, log_val = jacobi_q2_signed_log(gamma_deg, alpha, beta, z)
    if log_val == -math.inf:
        return 0.0
    if log_val > 709.0:
        raise OverflowError("jacobi_q2 value exceeds double range")
    return sign * math.exp(log_val) if log_val > -745.0 else 0.0

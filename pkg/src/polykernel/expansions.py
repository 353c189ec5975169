"""Series expansions of the power-law kernels.

Covers the finite and infinite Fourier cosine series of (z - x)^{+-p}, the
Jacobi / Gegenbauer / Chebyshev expansions of the Euler kernel (z - x)^{-nu},
and the multipole and azimuthal expansions of ||x - x'||^nu.  Every infinite
series is accumulated with compensated summation in ascending index order and
stops once three consecutive terms drop below tol * |partial sum|.

All Legendre-Q factors appear in their phase-free real form Qhat; the
complex unit prefactors these expansions normally carry cancel exactly
against the phase stripped from Q (checked analytically once per formula,
asserted by the oracle tests).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import (
    CoincidentRadiusError,
    ConvergenceError,
    ExclusionSetError,
    ParameterPoleError,
    SingularConfigurationError,
)
from .kernels import KernelGeometry
from .specfun import (
    _is_int,
    _nonpositive_int,
    gamma_signed_log,
    jacobi_q2_signed_log,
    legendre_q_hat,
)
from .orthopoly import jacobi_p


@dataclass(frozen=True)
class Truncation:
    """Stopping policy: relative tolerance plus a hard term budget."""

    tol: float = 1e-12
    max_terms: int = 2000


DEFAULT_TRUNCATION = Truncation()


@dataclass(frozen=True)
class PartialSum:
    value: float
    terms_used: int
    last_term_magnitude: float
    converged: bool

    def __float__(self):
        return self.value


class _Series:
    """Compensated accumulator with the three-small-terms stopping rule."""

    def __init__(self, tr: Truncation, trace=None, level=0):
        self.tr = tr
        self.s = 0.0
        self.c = 0.0
        self.n = 0
        self.small_run = 0
        self.last = 0.0
        self.trace = trace
        self.level = level

    def add(self, term: float) -> bool:
        """Accumulate one term; True once the stopping rule fires."""
        y = term - self.c
        t = self.s + y
        self.c = (t - self.s) - y
        self.s = t
        self.n += 1
        self.last = abs(term)
        if self.trace is not None:
            self.trace.append((self.level, self.n - 1, term, self.s))
        if self.last < self.tr.tol * abs(self.s):
            self.small_run += 1
        else:
            self.small_run = 0
        return self.small_run >= 3

    def result(self) -> PartialSum:
        if self.n >= self.tr.max_terms and self.small_run < 3:
            raise ConvergenceError(
                f"series not converged after {self.n} terms"
                f" (last |term| = {self.last:.3e}, partial = {self.s:.6e})")
        return PartialSum(value=self.s, terms_used=self.n,
                          last_term_magnitude=self.last, converged=True)


def euler_kernel_direct(nu: float, z: float, x: float) -> float:
    """Oracle value (z - x)^{-nu}."""
    return (z - x) ** (-nu)


def distance_power_direct(nu: float, r: float, rp: float, cos_gamma: float) -> float:
    """Oracle value ||x - x'||^nu from radii and separation angle."""
    return (r * r + rp * rp - 2.0 * r * rp * cos_gamma) ** (0.5 * nu)


def fourier_integer_power(p: int, z: float, x: float) -> float:
    """Finite Fourier cosine series of (z - x)^p: exact (p+1)-term sum.

    Each term (z^2-1)^{p/2} eps_n (-p)_n (p-n)!/(p+n)! P_p^n(z/sqrt(z^2-1))
    T_n(x) is a polynomial in (z, x): the Legendre parity cancels every half
    power, so the sum is assembled in exact rational arithmetic (floats are
    dyadic rationals) and rounded once.
    """
    if p < 0:
        raise ValueError("p must be a nonnegative integer")
    if not z > 1.0:
        raise ValueError("need z > 1")
    zq = Fraction(z)
    xq = Fraction(x)
    z2m1 = zq * zq - 1
    # coefficient lists (index = power of the argument) for P_p and T_n
    leg = [Fraction(1)]
    if p >= 1:
        leg_prev, leg = leg, [Fraction(0), Fraction(1)]
        for l in range(2, p + 1):
            nxt = [Fraction(0)] * (l + 1)
            for k, c in enumerate(leg):
                nxt[k + 1] += Fraction(2 * l - 1, l) * c
            for k, c in enumerate(leg_prev):
                nxt[k] -= Fraction(l - 1, l) * c
            leg_prev, leg = leg, nxt
    t_prev, t_cur = Fraction(1), xq
    total = Fraction(0)
    dcoef = list(leg)
    for n in range(p + 1):
        if n > 0:
            dcoef = [k * dcoef[k] for k in range(1, len(dcoef))]
        # (z^2-1)^{p/2} P_p^n(z/sqrt(z^2-1)) = sum_k d_k z^k (z^2-1)^{(p-n-k)/2}
        val = sum((c * zq ** k * z2m1 ** ((p - n - k) // 2)
                   for k, c in enumerate(dcoef) if c), Fraction(0))
        poch = 1
        for i in range(n):
            poch *= -p + i
        coef = ((2 if n else 1) * Fraction(poch)
                * Fraction(math.factorial(p - n), math.factorial(p + n)))
        tn = t_prev if n == 0 else t_cur
        total += coef * val * tn
        if n >= 1:
            t_prev, t_cur = t_cur, 2 * xq * t_cur - t_prev
    return float(total)


def fourier_negative_power(q: int, z: float, x: float,
                           tr: Truncation = DEFAULT_TRUNCATION,
                           trace=None) -> PartialSum:
    """Fourier cosine series of (z - x)^{-q} for integer q >= 1."""
    if q < 1:
        raise ValueError("q must be a positive integer")
    if not z > 1.0:
        raise ValueError("need z > 1")
    w = z / math.sqrt(z * z - 1.0)
    theta = math.acos(max(-1.0, min(1.0, x)))
    pref = (z * z - 1.0) ** (-q / 2.0) / math.factorial(q - 1)
    # (w-1)/(w+1) = (z - sqrt(z^2-1))^2 < 1 drives the geometric decay.
    log_ratio = math.log((w - 1.0) / (w + 1.0))
    half_w = 0.5 * (1.0 - w)
    acc = _Series(tr, trace)
    for n in range(tr.max_terms):
        eps = 2.0 if n else 1.0
        # (n+q-1)! P_{q-1}^{-n}(w), assembled in log space: the factorial and
        # the ((w-1)/(w+1))^{n/2} factor both leave double range separately.
        hyp = 1.0
        t = 1.0
        for k in range(q - 1):
            t *= (-(q - 1.0) + k) * (q + k) / ((1.0 + n + k) * (k + 1.0)) * half_w
            hyp += t
        log_mag = (math.lgamma(n + q) - math.lgamma(n + 1.0)
                   + 0.5 * n * log_ratio)
        term = pref * eps * math.exp(log_mag) * hyp * math.cos(n * theta)
        if acc.add(term):
            break
    return acc.result()


def euler_kernel_jacobi(nu: float, alpha: float, beta: float, z: float, x: float,
                        tr: Truncation = DEFAULT_TRUNCATION,
                        trace=None) -> PartialSum:
    """Jacobi expansion of (z - x)^{-nu}.

    For nu = -n (n in N0) the Pochhammer factor kills every term past n, so
    the sum reconstructs the binomial (z - x)^n exactly in n + 1 terms.
    """
    if not z > 1.0:
        raise ValueError("need z > 1")
    if alpha <= -1.0 or beta <= -1.0 or (alpha < 0.0 and beta < 0.0
                                         and alpha + beta + 1.0 == 0.0):
        raise ParameterPoleError(
            f"Jacobi parameters ({alpha}, {beta}) violate the expansion's"
            " side conditions")
    n_neg = _nonpositive_int(nu)
    stop_after = None if n_neg is None else -n_neg
    ab = alpha + beta
    pref = ((z - 1.0) ** (alpha + 1.0 - nu) * (z + 1.0) ** (beta + 1.0 - nu)
            / 2.0 ** (ab + 1.0 - nu))
    acc = _Series(tr, trace)
    log_poch = 0.0
    poch_sign = 1.0
    for n in range(tr.max_terms):
        if stop_after is not None and n > stop_after:
            break
        if n > 0:
            step = nu + n - 1.0
            log_poch += math.log(abs(step))
            poch_sign *= math.copysign(1.0, step)
        sg_top, lg_top = gamma_signed_log(ab + n + 1.0)
        coef_log = (math.log(ab + 2.0 * n + 1.0) + lg_top + log_poch
                    - math.lgamma(alpha + 1.0 + n) - math.lgamma(beta + 1.0 + n))
        q_sign, q_log = jacobi_q2_signed_log(n + nu - 1.0, alpha + 1.0 - nu,
                                             beta + 1.0 - nu, z)
        pn = jacobi_p(n, alpha, beta, x)
        mag = coef_log + q_log
        term = 0.0
        if pn != 0.0 and q_sign != 0.0 and mag > -700.0:
            term = pref * poch_sign * sg_top * q_sign * math.exp(mag) * pn
        if acc.add(term):
            break
    return acc.result()


def euler_kernel_gegenbauer(nu: float, mu: float, z: float, x: float,
                            tr: Truncation = DEFAULT_TRUNCATION,
                            trace=None) -> PartialSum:
    """Gegenbauer expansion of (z - x)^{-nu}; phase-cancelled real form."""
    if _nonpositive_int(nu) is not None:
        raise ExclusionSetError(f"nu = {nu} lies in the excluded set -N0")
    if mu <= -0.5 or mu == 0.0:
        raise ValueError("need mu in (-1/2, inf) \\ {0}")
    if not z > 1.0:
        raise ValueError("need z > 1")
    pref = (2.0 ** (mu + 0.5) * math.gamma(mu)
            / (math.sqrt(math.pi) * math.gamma(nu)
               * (z * z - 1.0) ** (0.5 * (nu - mu) - 0.25)))
    acc = _Series(tr, trace)
    c_prev = 0.0
    c_cur = 1.0
    for n in range(tr.max_terms):
        if n == 1:
            c_prev, c_cur = c_cur, 2.0 * mu * x
        elif n >= 2:
            c_prev, c_cur = c_cur, (2.0 * x * (n + mu - 1.0) * c_cur
                                    - (n + 2.0 * mu - 2.0) * c_prev) / n
        qhat = legendre_q_hat(n + mu - 0.5, nu - mu - 0.5, z).value
        if acc.add(pref * (n + mu) * qhat * c_cur):
            break
    return acc.result()


def euler_kernel_chebyshev(nu: float, z: float, x: float,
                           tr: Truncation = DEFAULT_TRUNCATION,
                           trace=None) -> PartialSum:
    """Chebyshev expansion of (z - x)^{-nu}; phase-cancelled real form."""
    if _nonpositive_int(nu) is not None:
        raise ExclusionSetError(f"nu = {nu} lies in the excluded set -N0")
    if not z > 1.0:
        raise ValueError("need z > 1")
    theta = math.acos(max(-1.0, min(1.0, x)))
    pref = (math.sqrt(2.0) / (math.sqrt(math.pi) * math.gamma(nu)
                              * (z * z - 1.0) ** (0.5 * nu - 0.25)))
    acc = _Series(tr, trace)
    for n in range(tr.max_terms):
        eps = 2.0 if n else 1.0
        qhat = legendre_q_hat(n - 0.5, nu - 0.5, z).value
        if acc.add(pref * eps * math.cos(n * theta) * qhat):
            break
    return acc.result()


def _check_power_exclusion(nu: float, start: float = 0.0):
    # excluded: nu in {start, start+2, start+4, ...}
    if nu >= start - 1e-12 and _is_int(0.5 * (nu - start)):
        raise ExclusionSetError(
            f"nu = {nu} lies in the excluded set {{{start}, {start + 2}, ...}}")


def multipole_power(d: int, nu: float, r: float, rp: float, cos_gamma: float,
                    tr: Truncation = DEFAULT_TRUNCATION,
                    trace=None) -> PartialSum:
    """Gegenbauer multipole expansion of ||x - x'||^nu on R^d, d >= 3."""
    if d < 3:
        raise ValueError("need dimension d >= 3")
    _check_power_exclusion(nu)
    if not -1.0 <= cos_gamma <= 1.0:
        raise ValueError("cos_gamma must lie in [-1, 1]")
    if r <= 0.0 or rp <= 0.0:
        raise ValueError("radii must be positive")
    r_less, r_greater = min(r, rp), max(r, rp)
    if (r_greater - r_less) / r_greater < 1e-6:
        raise CoincidentRadiusError(
            f"r = {r} and r' = {rp} too close: expansion argument z -> 1")
    z = (r * r + rp * rp) / (2.0 * r * rp)
    mu = 0.5 * d - 1.0
    pref = (math.gamma(0.5 * (d - 2.0)) / (2.0 * math.sqrt(math.pi)
                                           * math.gamma(-0.5 * nu))
            * (r_greater ** 2 - r_less ** 2) ** (0.5 * (nu + d - 1.0))
            / (r * rp) ** (0.5 * (d - 1.0)))
    acc = _Series(tr, trace)
    c_prev = 0.0
    c_cur = 1.0
    for n in range(tr.max_terms):
        if n == 1:
            c_prev, c_cur = c_cur, 2.0 * mu * cos_gamma
        elif n >= 2:
            c_prev, c_cur = c_cur, (2.0 * cos_gamma * (n + mu - 1.0) * c_cur
                                    - (n + 2.0 * mu - 2.0) * c_prev) / n
        qhat = legendre_q_hat(n + 0.5 * (d - 3.0), 0.5 * (1.0 - nu - d), z).value
        if acc.add(pref * (2.0 * n + d - 2.0) * qhat * c_cur):
            break
    return acc.result()


def azimuthal_power(nu: float, g: KernelGeometry,
                    tr: Truncation = DEFAULT_TRUNCATION,
                    trace=None) -> PartialSum:
    """Azimuthal Fourier expansion of ||x - x'||^nu about the invariant axis.

    Composition of the Chebyshev kernel expansion with the toroidal distance
    factorization; the working prefactor sqrt(2) (2RR')^{nu/2}
    (chi^2-1)^{(nu+1)/4} / (sqrt(pi) Gamma(-nu/2)) is the algebraically
    composed one (it reduces to the classical d = 3, nu = -1 result).
    """
    _check_power_exclusion(nu)
    chi = g.chi
    if chi is None:
        raise SingularConfigurationError("a point lies on the rotation axis")
    if chi <= 1.0 + 1e-6:
        raise SingularConfigurationError(
            f"chi = {chi} too close to 1 for the azimuthal series")
    dphi = g.delta_phi
    pref = (math.sqrt(2.0) * (2.0 * g.R * g.Rp) ** (0.5 * nu)
            * (chi * chi - 1.0) ** (0.25 * (nu + 1.0))
            / (math.sqrt(math.pi) * math.gamma(-0.5 * nu)))
    acc = _Series(tr, trace)
    for m in range(tr.max_terms):
        eps = 2.0 if m else 1.0
        qhat = legendre_q_hat(m - 0.5, -0.5 * (nu + 1.0), chi).value
        if acc.add(pref * eps * math.cos(m * dphi) * qhat):
            break
    return acc.result()

"""Polynomial verification of the process generator identity.

Everything is exact in the polynomial ring over (x, t); the drift alpha enters
as a rational constant per call. The martingale polynomials q_n and the
centered family p_n come from their three-term recursions, the operator L
integrates the difference quotient against closed-form moment polynomials, and
the headline identity is d/dt q_n + A_t q_n = 0 with
A_t = alpha (d/dx - L_mu) + d/dx L_nu.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .poly import BivariatePolynomial, difference_quotient

POLY_DEGREE_CAP = 16
SERIES_ORDER_CAP = 12


def _recursion_family(n_max: int, alpha, first) -> list[BivariatePolynomial]:
    # x f_k = f_{k+1} + alpha t f_k + t f_{k-1}, monic, seeded by f_1 = first.
    a = Fraction(alpha)
    x = BivariatePolynomial.x()
    shift = BivariatePolynomial({(0, 1): a})
    t = BivariatePolynomial.t()
    polys = [BivariatePolynomial.one()]
    if n_max >= 1:
        polys.append(first)
    for k in range(1, n_max):
        polys.append((x - shift) * polys[k] - t * polys[k - 1])
    return polys


def q_polynomials(n_max: int, alpha) -> list[BivariatePolynomial]:
    """Martingale polynomials q_0..q_n: monic, q_1 = x (no drift at level zero)."""
    if n_max > POLY_DEGREE_CAP:
        raise ValueError(f"n_max exceeds {POLY_DEGREE_CAP}")
    return _recursion_family(n_max, alpha, BivariatePolynomial.x())


def p_polynomials(n_max: int, alpha) -> list[BivariatePolynomial]:
    """Centered family p_0..p_n: monic, p_1 = x - alpha t."""
    if n_max > POLY_DEGREE_CAP:
        raise ValueError(f"n_max exceeds {POLY_DEGREE_CAP}")
    first = BivariatePolynomial.x() - BivariatePolynomial({(0, 1): Fraction(alpha)})
    return _recursion_family(n_max, alpha, first)


def _jacobi_moment_polys(betas, gammas, n_max: int) -> list[BivariatePolynomial]:
    # Moment polynomials in t from Jacobi data given as level -> polynomial,
    # by the same weighted-path recursion as the rational version.
    height = n_max // 2 + 1
    state = [BivariatePolynomial.zero() for _ in range(height + 2)]
    state[0] = BivariatePolynomial.one()
    moments = []
    for _ in range(n_max):
        new = [BivariatePolynomial.zero() for _ in range(height + 2)]
        for level in range(height + 1):
            v = state[level]
            if v.is_zero():
                continue
            new[level + 1] = new[level + 1] + v
            new[level] = new[level] + v * betas(level)
            if level > 0:
                new[level - 1] = new[level - 1] + v * gammas(level)
        state = new
        moments.append(state[0])
    return moments


def nu_moment_polys(n_max: int, alpha) -> list[BivariatePolynomial]:
    """Moments of the secondary-state law at time t, as polynomials in t."""
    drift = BivariatePolynomial({(0, 1): Fraction(alpha)})
    t = BivariatePolynomial.t()
    return _jacobi_moment_polys(lambda level: drift, lambda level: t, n_max)


def mu_moment_polys(n_max: int, alpha) -> list[BivariatePolynomial]:
    """Moments of the primary-state law at time t, as polynomials in t."""
    drift = BivariatePolynomial({(0, 1): Fraction(alpha)})
    zero = BivariatePolynomial.zero()
    t = BivariatePolynomial.t()
    return _jacobi_moment_polys(lambda level: zero if level == 0 else drift, lambda level: t, n_max)


def l_apply(f: BivariatePolynomial, measure_moments) -> BivariatePolynomial:
    """L[f](x) = integral of (f(x) - f(y)) / (x - y) over y.

    measure_moments[j-1] is the j-th moment as a polynomial in t; the zeroth
    moment is one and implicit.
    """
    needed = f.x_degree() - 1
    if needed > len(measure_moments):
        raise ValueError(f"need {needed} moments, got {len(measure_moments)}")
    result = BivariatePolynomial.zero()
    for (dx, dy, dt), c in difference_quotient(f).items():
        term = BivariatePolynomial({(dx, dt): c})
        if dy > 0:
            term = term * measure_moments[dy - 1]
        result = result + term
    return result


def generator_apply(f: BivariatePolynomial, alpha) -> BivariatePolynomial:
    """A_t f = alpha (d/dx f - L_mu f) + d/dx (L_nu f)."""
    a = Fraction(alpha)
    degree = max(f.x_degree(), 1)
    nu = nu_moment_polys(degree, alpha)
    mu = mu_moment_polys(degree, alpha)
    drift_part = (f.d_dx() - l_apply(f, mu)) * a
    diffusion_part = l_apply(f, nu).d_dx()
    return drift_part + diffusion_part


def time_derivative_residual(n: int, alpha) -> BivariatePolynomial:
    """d/dt q_n + A_t q_n; identically zero is the generator identity."""
    q = q_polynomials(n, alpha)[n]
    return q.d_dt() + generator_apply(q, alpha)


@dataclass(frozen=True)
class GeneratingFunctionReport:
    """Coefficient-wise checks of the two generating-function identities."""

    order: int
    h_coefficients_are_q: bool
    inverse_coefficients_are_p: bool
    nu_ladder: bool
    mu_ladder: bool
    time_derivative_identity: bool

    @property
    def ok(self) -> bool:
        return (
            self.h_coefficients_are_q
            and self.inverse_coefficients_are_p
            and self.nu_ladder
            and self.mu_ladder
            and self.time_derivative_identity
        )


def generating_function_check(order: int, alpha) -> GeneratingFunctionReport:
    """Expand H = (1 + t alpha z) / (1 - x z + t (alpha z + z^2)) and verify.

    The z-coefficients of H are the martingale polynomials, those of the bare
    inverse are the centered family, L_nu lowers q by one, L_mu sends q to the
    centered family, and the alpha-weighted combination reproduces -dH/dt.
    """
    if order > SERIES_ORDER_CAP:
        raise ValueError(f"order exceeds {SERIES_ORDER_CAP}")
    a = Fraction(alpha)
    x = BivariatePolynomial.x()
    t = BivariatePolynomial.t()
    # denominator 1 + (t alpha - x) z + t z^2, inverted as a z-series
    c1 = t * a - x
    c2 = t
    inverse = [BivariatePolynomial.one()]
    for k in range(1, order + 1):
        term = c1 * inverse[k - 1]
        if k >= 2:
            term = term + c2 * inverse[k - 2]
        inverse.append(-1 * term)
    h_coeffs = [inverse[0]]
    for k in range(1, order + 1):
        h_coeffs.append(inverse[k] + t * a * inverse[k - 1])

    q = q_polynomials(order, alpha)
    p = p_polynomials(order, alpha)
    nu = nu_moment_polys(max(order, 1), alpha)
    mu = mu_moment_polys(max(order, 1), alpha)

    h_ok = all(h_coeffs[k] == q[k] for k in range(order + 1))
    p_ok = all(inverse[k] == p[k] for k in range(order + 1))
    nu_ok = all(l_apply(q[k], nu) == q[k - 1] for k in range(1, order + 1))
    mu_ok = all(l_apply(q[k], mu) == p[k - 1] for k in range(1, order + 1))
    dt_ok = all(time_derivative_residual(k, alpha).is_zero() for k in range(order + 1))
    return GeneratingFunctionReport(order, h_ok, p_ok, nu_ok, mu_ok, dt_ok)

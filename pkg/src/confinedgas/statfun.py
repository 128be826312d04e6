"""Unified Bose-Einstein / Fermi-Dirac integral family h_sigma(z).

The two textbook families

    g_sigma(z) = sum_{n>=1} z^n / n^sigma          (Bose-Einstein)
    f_sigma(z) = sum_{n>=1} (-1)^(n+1) z^n / n^sigma   (Fermi-Dirac)

are handled through one entry point, ``eval_h``, selected by ``StatKind``.
For sigma > 0 both are equivalently

    h_sigma(z) = 1/Gamma(sigma) * int_0^inf x^(sigma-1) / (e^x / z -+ 1) dx.

Only the half-integer orders -1, -1/2, 0, 1/2, 1, 3/2, 2, 5/2 required by
the confined-gas equations of state are constructible.

Every evaluation returns a :class:`FunctionValue` carrying the value, a
certified absolute error bound, and the method that produced it.  Method
selection:

* exact closed forms for sigma in {1, 0, -1};
* the defining power series for 0 < z <= 0.99 (and for all Bose z < 1,
  where the series is the only convergent representation);
* adaptive quadrature on the integral representation for Fermi z > 0.99
  with sigma > 0;
* for Fermi z > 0.99 with sigma = -1/2, the order-lowering recurrence
  h_(sigma-1)(z) = z * d/dz h_sigma(z) applied analytically under the
  integral sign (never by numerical differencing).

All functions are pure and thread-safe.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np
from scipy.integrate import quad

from .errors import AccuracyError, DomainError

__all__ = [
    "StatKind",
    "Order",
    "Method",
    "FunctionValue",
    "MINUS_ONE",
    "MINUS_HALF",
    "ZERO",
    "HALF",
    "ONE",
    "THREE_HALVES",
    "TWO",
    "FIVE_HALVES",
    "ALL_ORDERS",
    "FERMI_Z_MAX",
    "SERIES_TERM_CAP",
    "METHOD_SWITCH_Z",
    "eval_h",
    "eval_h_closed_form",
    "eval_h_series",
    "eval_h_quadrature",
    "eval_h_recurrence",
    "bose_limit_at_unity",
]

_EPS = 2.220446049250313e-16

# Accuracy contract: every certified bound must satisfy
# bound <= max(ABS_CONTRACT, REL_CONTRACT * |value|).
ABS_CONTRACT = 1e-10
REL_CONTRACT = 1e-10

#: Default cap on the Fermi fugacity accepted by :func:`eval_h`.
FERMI_Z_MAX = 1e8

#: Default cap on the number of series terms before giving up.
SERIES_TERM_CAP = 10**6

#: Fermi evaluations switch from series to quadrature above this z.  The
#: geometric tail bound of the series degrades like 1/(1-z), so pushing the
#: series further buys nothing once the integral representation is smooth.
METHOD_SWITCH_Z = 0.99

# Riemann zeta at the orders with a finite Bose z->1 limit.
_ZETA = {
    3: 2.6123753486854883,  # zeta(3/2)
    4: 1.6449340668482264,  # zeta(2) = pi^2/6
    5: 1.3414872572509172,  # zeta(5/2)
}


class StatKind(enum.Enum):
    """Quantum statistics selector: upper sign Bose, lower sign Fermi."""

    BOSE = "bose"
    FERMI = "fermi"

    @property
    def sign(self) -> int:
        """+1 for Bose (all series terms positive), -1 for Fermi."""
        return 1 if self is StatKind.BOSE else -1


@dataclass(frozen=True, order=True)
class Order:
    """Half-integer order sigma of the integral family, stored as 2*sigma.

    Only the orders appearing in the confined-gas equations of state and
    their temperature derivatives are constructible.
    """

    twice: int

    _ALLOWED = frozenset({-2, -1, 0, 1, 2, 3, 4, 5})

    def __post_init__(self):
        if self.twice not in self._ALLOWED:
            raise DomainError(
                f"order sigma={self.twice}/2 is outside the supported set "
                "{-1, -1/2, 0, 1/2, 1, 3/2, 2, 5/2}"
            )

    @classmethod
    def of(cls, sigma) -> "Order":
        """Coerce an Order, int, float or Fraction to an Order."""
        if isinstance(sigma, cls):
            return sigma
        frac = Fraction(sigma).limit_denominator(10**6)
        twice = frac * 2
        if twice.denominator != 1:
            raise DomainError(f"order sigma={sigma} is not a half-integer")
        return cls(int(twice))

    @property
    def value(self) -> float:
        return self.twice / 2.0

    @property
    def is_integer(self) -> bool:
        return self.twice % 2 == 0

    def lowered(self) -> "Order":
        """The order sigma - 1 (raises DomainError if outside the set)."""
        return Order(self.twice - 2)

    def __str__(self) -> str:
        if self.is_integer:
            return str(self.twice // 2)
        return f"{self.twice}/2"


MINUS_ONE = Order(-2)
MINUS_HALF = Order(-1)
ZERO = Order(0)
HALF = Order(1)
ONE = Order(2)
THREE_HALVES = Order(3)
TWO = Order(4)
FIVE_HALVES = Order(5)

ALL_ORDERS = (MINUS_ONE, MINUS_HALF, ZERO, HALF, ONE, THREE_HALVES, TWO, FIVE_HALVES)


class Method(enum.Enum):
    CLOSED_FORM = "ClosedForm"
    SERIES = "Series"
    QUADRATURE = "Quadrature"
    ORDER_RECURRENCE = "OrderRecurrence"


@dataclass(frozen=True)
class FunctionValue:
    """A function value with a certified absolute error bound.

    ``abs_error_bound`` is a rigorous bound on |value - exact| under the
    module accuracy contract (1e-10 absolute or relative, whichever is
    larger).  ``terms`` reports the series length when applicable.
    """

    value: float
    abs_error_bound: float
    method: Method
    terms: int | None = None


def _require_z_in_domain(stat: StatKind, z: float, z_max: float) -> None:
    if not (z > 0.0) or not math.isfinite(z):
        raise DomainError(f"fugacity z={z} must be positive and finite")
    if stat is StatKind.BOSE and z > 1.0:
        raise DomainError(f"Bose fugacity z={z} > 1 has no meaning (condensation)")
    if stat is StatKind.FERMI and z > z_max:
        raise DomainError(f"Fermi fugacity z={z} exceeds the configured cap {z_max}")


def _check_contract(value: float, bound: float, what: str) -> None:
    if bound > max(ABS_CONTRACT, REL_CONTRACT * abs(value)):
        raise AccuracyError(
            f"{what}: achieved bound {bound:.3e} misses the accuracy contract "
            f"for value {value:.6e}",
            achieved=bound,
        )


# ---------------------------------------------------------------------------
# closed forms
# ---------------------------------------------------------------------------

def eval_h_closed_form(stat: StatKind, sigma, z: float) -> FunctionValue:
    """Exact closed form of h_sigma for sigma in {1, 0, -1}.

    Bose:  g_1 = -ln(1-z),  g_0 = z/(1-z),  g_-1 = z/(1-z)^2   (z < 1)
    Fermi: f_1 =  ln(1+z),  f_0 = z/(1+z),  f_-1 = z/(1+z)^2
    """
    sigma = Order.of(sigma)
    _require_z_in_domain(stat, z, math.inf)
    if sigma not in (ONE, ZERO, MINUS_ONE):
        raise DomainError(f"no closed form for sigma={sigma}")
    if stat is StatKind.BOSE and z >= 1.0:
        raise DomainError("Bose closed forms require z < 1 strictly")

    bose = stat is StatKind.BOSE
    if sigma == ONE:
        value = -math.log1p(-z) if bose else math.log1p(z)
    elif sigma == ZERO:
        value = z / (1.0 - z) if bose else z / (1.0 + z)
    else:
        value = z / (1.0 - z) ** 2 if bose else z / (1.0 + z) ** 2
    bound = 4.0 * _EPS * abs(value) + 1e-300
    return FunctionValue(value, bound, Method.CLOSED_FORM)


# ---------------------------------------------------------------------------
# direct series
# ---------------------------------------------------------------------------

def _series_tail_majorant(sigma: float, z: float, n: int) -> float:
    """Rigorous bound on |sum_{k>n} (+-1)^(k+1) z^k / k^sigma|.

    For sigma >= 0 the terms are dominated by the geometric majorant
    z^(n+1) / ((1-z) (n+1)^sigma).  For sigma > 1 the integral comparison
    z^(n+1) n^(1-sigma)/(sigma-1) can be sharper near z = 1; the minimum of
    the two is still a bound.  For sigma < 0 the term ratio is at most
    rho = z ((n+2)/(n+1))^(-sigma) and the tail is geometric once rho < 1.
    """
    lead = math.exp((n + 1) * math.log(z))
    if sigma >= 0.0:
        geo = lead / ((1.0 - z) * (n + 1) ** sigma)
        if sigma > 1.0:
            integral = lead * n ** (1.0 - sigma) / (sigma - 1.0)
            return min(geo, integral)
        return geo
    rho = z * ((n + 2) / (n + 1)) ** (-sigma)
    if rho >= 1.0:
        return math.inf
    return lead * (n + 1) ** (-sigma) / (1.0 - rho)


def eval_h_series(
    stat: StatKind,
    sigma,
    z: float,
    tail_bound: float = 1e-12,
    term_cap: int = SERIES_TERM_CAP,
) -> FunctionValue:
    """Sum the defining series until the rigorous tail bound is met.

    Parameters
    ----------
    stat, sigma, z :
        Statistics, order and fugacity; the series converges for 0 < z < 1.
    tail_bound :
        Target absolute bound on the neglected tail.
    term_cap :
        Hard cap on the number of terms; exceeding it raises AccuracyError
        carrying the bound that was actually achieved.
    """
    sigma = Order.of(sigma)
    if not (0.0 < z < 1.0):
        raise DomainError(f"series representation requires 0 < z < 1, got z={z}")
    if tail_bound <= 0.0:
        raise DomainError("tail_bound must be positive")

    sig = sigma.value
    log_z = math.log(z)
    fermi = stat is StatKind.FERMI

    total = 0.0
    total_abs = 0.0
    n_done = 0
    # Geometric blocks keep the numpy overhead negligible for short series
    # while still vectorising the ~30k-term sums near z -> 1.
    block = 64
    while n_done < term_cap:
        n_hi = min(n_done + block, term_cap)
        n = np.arange(n_done + 1, n_hi + 1, dtype=np.float64)
        terms = np.exp(n * log_z - sig * np.log(n))
        if fermi:
            signs = np.where(np.asarray(np.mod(n, 2.0) == 1.0), 1.0, -1.0)
            total += float(np.sum(terms * signs))
        else:
            total += float(np.sum(terms))
        total_abs += float(np.sum(terms))
        n_done = n_hi
        majorant = _series_tail_majorant(sig, z, n_done)
        if majorant <= tail_bound:
            rounding = 6e-15 * total_abs + 2.0 * _EPS * abs(total)
            return FunctionValue(total, majorant + rounding, Method.SERIES, terms=n_done)
        block = min(2 * block, 1 << 16)

    achieved = _series_tail_majorant(sig, z, n_done)
    raise AccuracyError(
        f"series for h_{sigma}({z}) needs more than {term_cap} terms "
        f"(achieved tail bound {achieved:.3e}, requested {tail_bound:.3e})",
        achieved=achieved,
    )


# ---------------------------------------------------------------------------
# quadrature on the integral representation (Fermi)
# ---------------------------------------------------------------------------

def _fermi_occ(t: float) -> float:
    """1/(e^t + 1), stable for any t."""
    if t > 0.0:
        e = math.exp(-t)
        return e / (1.0 + e)
    e = math.exp(t)
    return 1.0 / (e + 1.0)


def _fermi_occ_deriv(t: float) -> float:
    """e^t/(e^t + 1)^2 = occ(t) * occ(-t), stable for any t."""
    if abs(t) > 745.0:
        return 0.0
    return _fermi_occ(t) * _fermi_occ(-t)


def eval_h_quadrature(stat: StatKind, sigma, z: float, z_max: float = FERMI_Z_MAX) -> FunctionValue:
    """Adaptive quadrature of the Fermi integral representation, sigma > 0.

    The substitution x = u^2 removes the x^(sigma-1) endpoint singularity:

        f_sigma(z) = 2/Gamma(sigma) * int_0^inf u^(2 sigma - 1) / (e^(u^2 - ln z) + 1) du

    and the integrand is then smooth for every half-integer sigma > 0.  The
    interval is split at the Fermi edge u = sqrt(ln z) for z > 1.
    """
    sigma = Order.of(sigma)
    if stat is not StatKind.FERMI:
        raise DomainError("quadrature route is defined for Fermi statistics only")
    if sigma.value <= 0.0:
        raise DomainError(f"integral representation needs sigma > 0, got {sigma}")
    _require_z_in_domain(stat, z, z_max)

    log_z = math.log(z)
    power = 2.0 * sigma.value - 1.0

    def integrand(u: float) -> float:
        return u**power * _fermi_occ(u * u - log_z)

    split = math.sqrt(log_z) if log_z > 0.0 else 1.0
    v1, e1 = quad(integrand, 0.0, split, epsabs=1e-13, epsrel=1e-13, limit=200)
    v2, e2 = quad(integrand, split, np.inf, epsabs=1e-13, epsrel=1e-13, limit=200)
    value = 2.0 / math.gamma(sigma.value) * (v1 + v2)
    bound = 10.0 * (2.0 / math.gamma(sigma.value)) * (e1 + e2) + 4.0 * _EPS * abs(value)
    _check_contract(value, bound, f"quadrature h_{sigma}({z})")
    return FunctionValue(value, bound, Method.QUADRATURE)


def eval_h_recurrence(stat: StatKind, sigma, z: float, z_max: float = FERMI_Z_MAX) -> FunctionValue:
    """Order-lowering recurrence h_(s-1)(z) = z d/dz h_s(z), Fermi, sigma <= 0.

    Differentiating the integral representation of h_(sigma+1) under the
    integral sign gives

        h_sigma(z) = 2/Gamma(sigma+1) * int_0^inf u^(2 sigma + 1) w(u^2 - ln z) du,
        w(t) = e^t / (e^t + 1)^2,

    which is convergent at u = 0 for sigma > -1 and decays like a Gaussian.
    """
    sigma = Order.of(sigma)
    if stat is not StatKind.FERMI:
        raise DomainError("order recurrence route is defined for Fermi statistics only")
    if sigma.value > 0.0:
        raise DomainError("order recurrence route targets sigma <= 0")
    _require_z_in_domain(stat, z, z_max)

    upper = sigma.value + 1.0
    log_z = math.log(z)
    power = 2.0 * upper - 1.0

    def integrand(u: float) -> float:
        return u**power * _fermi_occ_deriv(u * u - log_z)

    split = math.sqrt(log_z) if log_z > 0.0 else 1.0
    v1, e1 = quad(integrand, 0.0, split, epsabs=1e-13, epsrel=1e-13, limit=200)
    v2, e2 = quad(integrand, split, np.inf, epsabs=1e-13, epsrel=1e-13, limit=200)
    value = 2.0 / math.gamma(upper) * (v1 + v2)
    bound = 10.0 * (2.0 / math.gamma(upper)) * (e1 + e2) + 4.0 * _EPS * abs(value)
    _check_contract(value, bound, f"recurrence h_{sigma}({z})")
    return FunctionValue(value, bound, Method.ORDER_RECURRENCE)


# ---------------------------------------------------------------------------
# Bose limit at z = 1
# ---------------------------------------------------------------------------

def bose_limit_at_unity(sigma) -> FunctionValue:
    """g_sigma(1) = zeta(sigma), finite only for sigma > 1."""
    sigma = Order.of(sigma)
    if sigma.value <= 1.0:
        raise DomainError(
            f"g_{sigma}(z) diverges as z -> 1 for sigma <= 1 (condensation boundary)"
        )
    value = _ZETA[sigma.twice]
    return FunctionValue(value, 4.0 * _EPS * abs(value), Method.CLOSED_FORM)


# ---------------------------------------------------------------------------
# dispatcher
# ---------------------------------------------------------------------------

@lru_cache(maxsize=65536)
def _eval_h_cached(
    stat: StatKind, twice_sigma: int, z: float, z_max: float, tail_bound: float
) -> FunctionValue:
    sigma = Order(twice_sigma)
    if stat is StatKind.BOSE and z == 1.0:
        if sigma.value > 1.0:
            return bose_limit_at_unity(sigma)
        raise DomainError(
            f"Bose h_{sigma}(1) diverges; z = 1 is admissible only for sigma > 1"
        )
    if stat is StatKind.BOSE and z >= 1.0:
        raise DomainError(f"Bose fugacity z={z} >= 1 has no meaning (condensation)")

    if sigma in (ONE, ZERO, MINUS_ONE):
        return eval_h_closed_form(stat, sigma, z)

    if stat is StatKind.BOSE:
        return eval_h_series(stat, sigma, z, tail_bound=tail_bound)

    # Fermi, non-closed-form order
    if z <= METHOD_SWITCH_Z:
        return eval_h_series(stat, sigma, z, tail_bound=tail_bound)
    if sigma.value > 0.0:
        return eval_h_quadrature(stat, sigma, z, z_max)
    return eval_h_recurrence(stat, sigma, z, z_max)


def eval_h(
    stat: StatKind,
    sigma,
    z: float,
    z_max: float = FERMI_Z_MAX,
    tail_bound: float | None = None,
) -> FunctionValue:
    """Evaluate h_sigma(z) by the best available method.

    Parameters
    ----------
    stat :
        ``StatKind.BOSE`` for g_sigma or ``StatKind.FERMI`` for f_sigma.
    sigma :
        Order; anything accepted by :meth:`Order.of`.
    z :
        Fugacity.  Bose requires z < 1 (z = 1 allowed for sigma > 1); Fermi
        requires z < ``z_max``.
    z_max :
        Cap on the Fermi fugacity (default 1e8).
    tail_bound :
        Optional series tail target.  Leaving it at None applies the default
        1e-12 target, which keeps the certified bound within the module
        accuracy contract; passing a looser value explicitly waives that
        contract (abs_error_bound still reports what was achieved).  Callers
        that only need h to a known absolute accuracy (e.g. the fugacity
        solver near the Bose condensation point, where series get long) use
        this to stay within the term cap.

    Returns
    -------
    FunctionValue
        Value, certified absolute error bound, and the method used.

    Raises
    ------
    DomainError
        z out of range, or Bose z >= 1 with sigma <= 1 (divergence at the
        condensation boundary).
    AccuracyError
        The requested bound is unreachable; ``achieved`` holds the bound
        actually attained.
    """
    sigma = Order.of(sigma)
    _require_z_in_domain(stat, z, z_max)
    tail = 1e-12 if tail_bound is None else float(tail_bound)
    return _eval_h_cached(stat, sigma.twice, float(z), float(z_max), tail)

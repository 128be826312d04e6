"""Grand potentials, particle-number equations and the fugacity solver.

For a planar domain (area O, boundary length L, holes r) at thermal
wavelength lam the corrected grand potential and particle number are

    ln Xi = (O/lam^2) h_2(z)  - (L/(4 lam)) h_3/2(z) + ((1-r)/6) h_1(z)
    N     = (O/lam^2) h_1(z)  - (L/(4 lam)) h_1/2(z) + ((1-r)/6) h_0(z)

and for a uniform tube of length Lz over that cross-section

    ln Xi = (Lz O/lam^3) h_5/2 - (Lz L/(4 lam^2)) h_2 + ((1-r)/6)(Lz/lam) h_3/2
    N     = (Lz O/lam^3) h_3/2 - (Lz L/(4 lam^2)) h_1 + ((1-r)/6)(Lz/lam) h_1/2.

``solve_fugacity`` inverts the particle-number equation for z with a
bracketed, safeguarded root-finder and reports how trustworthy the
asymptotic model is at the solution (wavelength/boundary/topology ratios,
Fermi z > 1 flag).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from scipy.optimize import brentq

from .errors import (
    AccuracyError,
    DomainError,
    ModelError,
    NoBracketError,
    NonMonotoneError,
)
from .geometry import PlanarDomain, TubeDomain, thermal_wavelength
from .statfun import (
    FERMI_Z_MAX,
    HALF,
    MINUS_HALF,
    MINUS_ONE,
    ONE,
    THREE_HALVES,
    TWO,
    FIVE_HALVES,
    ZERO,
    StatKind,
    eval_h,
)

__all__ = [
    "GasState",
    "ValidityReport",
    "BOSE_CONDENSATION_MARGIN",
    "WARN_WAVELENGTH_RATIO",
    "WARN_BOUNDARY_RATIO",
    "log_grand_potential_2d",
    "particle_number_2d",
    "log_grand_potential_tube",
    "particle_number_tube",
    "solve_fugacity",
    "pressure",
]

#: Bose fugacities are refused within this margin of the condensation point.
BOSE_CONDENSATION_MARGIN = 1e-12

#: Default validity thresholds (tunable per call and from the CLI).
WARN_WAVELENGTH_RATIO = 0.2
WARN_BOUNDARY_RATIO = 0.5


@dataclass(frozen=True)
class GasState:
    """A solved thermodynamic state point.

    The particle-number equation holds at (z, lam, N) within the solver
    tolerance; lam equals thermal_wavelength(T) exactly.
    """

    z: float
    lam: float
    T: float
    N: float
    stat: StatKind


@dataclass(frozen=True)
class ValidityReport:
    """How far inside the asymptotic validity region a solution sits.

    ratio_wavelength = lam / sqrt(area); ratio_boundary and ratio_topology
    compare the magnitude of the correction terms against the bulk term of
    the particle-number equation at the solution.
    """

    ratio_wavelength: float
    ratio_boundary: float
    ratio_topology: float
    fermi_extension_used: bool
    warnings: tuple[str, ...]


def _h(stat: StatKind, order, z: float, z_max: float = FERMI_Z_MAX, tail=None) -> float:
    return eval_h(stat, order, z, z_max=z_max, tail_bound=tail).value


def _weighted_terms(stat, coeffs, orders, z, z_max, abs_budget):
    """Evaluate coeff_i * h_(order_i)(z) with per-term accuracy budgets.

    When ``abs_budget`` is given, each series evaluation only needs
    budget/(4*|coeff|) of tail accuracy for the weighted sum to stay within
    the budget; near the Bose condensation point this is what keeps the
    series length finite.  Zero coefficients are skipped outright.
    """
    out = []
    for c, o in zip(coeffs, orders):
        if c == 0.0:
            out.append(0.0)
            continue
        tail = None
        if abs_budget is not None:
            tail = max(1e-15, min(abs_budget / (4.0 * abs(c)), 1e-6))
        out.append(c * _h(stat, o, z, z_max, tail))
    return tuple(out)


def _terms_2d(stat, dom: PlanarDomain, lam, z, orders, z_max=FERMI_Z_MAX, abs_budget=None):
    coeffs = (
        dom.area / lam**2,
        -0.25 * dom.perimeter / lam,
        (1.0 - dom.holes) / 6.0,
    )
    return _weighted_terms(stat, coeffs, orders, z, z_max, abs_budget)


def _terms_tube(stat, tube: TubeDomain, lam, z, orders, z_max=FERMI_Z_MAX, abs_budget=None):
    dom = tube.cross_section
    lz = tube.length_z
    coeffs = (
        lz * dom.area / lam**3,
        -0.25 * lz * dom.perimeter / lam**2,
        (1.0 - dom.holes) / 6.0 * lz / lam,
    )
    return _weighted_terms(stat, coeffs, orders, z, z_max, abs_budget)


def log_grand_potential_2d(stat: StatKind, dom: PlanarDomain, lam: float, z: float) -> float:
    """ln Xi for a planar domain (orders 2, 3/2, 1)."""
    value = sum(_terms_2d(stat, dom, lam, z, (TWO, THREE_HALVES, ONE)))
    if value < 0.0:
        raise ModelError(
            f"ln Xi = {value:.6g} < 0 at lambda={lam:.6g}, z={z:.6g}; "
            "corrections overwhelm the bulk term"
        )
    return value


def particle_number_2d(stat: StatKind, dom: PlanarDomain, lam: float, z: float) -> float:
    """Particle number for a planar domain (orders 1, 1/2, 0)."""
    value = sum(_terms_2d(stat, dom, lam, z, (ONE, HALF, ZERO)))
    if value < 0.0:
        raise ModelError(
            f"N(z) = {value:.6g} < 0 at lambda={lam:.6g}, z={z:.6g}; "
            "corrections overwhelm the bulk term"
        )
    return value


def log_grand_potential_tube(stat: StatKind, tube: TubeDomain, lam: float, z: float) -> float:
    """ln Xi for a uniform tube (orders 5/2, 2, 3/2)."""
    value = sum(_terms_tube(stat, tube, lam, z, (FIVE_HALVES, TWO, THREE_HALVES)))
    if value < 0.0:
        raise ModelError(
            f"ln Xi = {value:.6g} < 0 at lambda={lam:.6g}, z={z:.6g}; "
            "corrections overwhelm the bulk term"
        )
    return value


def particle_number_tube(stat: StatKind, tube: TubeDomain, lam: float, z: float) -> float:
    """Particle number for a uniform tube (orders 3/2, 1, 1/2)."""
    value = sum(_terms_tube(stat, tube, lam, z, (THREE_HALVES, ONE, HALF)))
    if value < 0.0:
        raise ModelError(
            f"N(z) = {value:.6g} < 0 at lambda={lam:.6g}, z={z:.6g}; "
            "corrections overwhelm the bulk term"
        )
    return value


# ---------------------------------------------------------------------------
# fugacity solver
# ---------------------------------------------------------------------------

def _particle_terms(stat, container, lam, z, z_max, abs_budget=None):
    if isinstance(container, TubeDomain):
        return _terms_tube(
            stat, container, lam, z, (THREE_HALVES, ONE, HALF), z_max, abs_budget
        )
    return _terms_2d(stat, container, lam, z, (ONE, HALF, ZERO), z_max, abs_budget)


def _particle_number_derivative(stat, container, lam, z, z_max, abs_budget=None):
    """Analytic z * dN/dz via the order-lowering property z h' = h_(s-1)."""
    if isinstance(container, TubeDomain):
        terms = _terms_tube(
            stat, container, lam, z, (HALF, ZERO, MINUS_HALF), z_max, abs_budget
        )
    else:
        terms = _terms_2d(
            stat, container, lam, z, (ZERO, MINUS_HALF, MINUS_ONE), z_max, abs_budget
        )
    return sum(terms)


def solve_fugacity(
    stat: StatKind,
    container: PlanarDomain | TubeDomain,
    N: float,
    T: float,
    tol: float = 1e-12,
    *,
    z_max: float = FERMI_Z_MAX,
    warn_wavelength: float = WARN_WAVELENGTH_RATIO,
    warn_boundary: float = WARN_BOUNDARY_RATIO,
) -> tuple[GasState, ValidityReport]:
    """Solve the particle-number equation for the fugacity z.

    Parameters
    ----------
    stat, container, N, T :
        Statistics, geometry (planar domain or tube), particle count and
        temperature.
    tol :
        Relative residual target: |N(z) - N| <= tol * N at the returned z.
    z_max, warn_wavelength, warn_boundary :
        Fermi fugacity cap and validity warning thresholds.

    Returns
    -------
    (GasState, ValidityReport)

    Raises
    ------
    NoBracketError
        Bose: N exceeds the maximum particle number reachable before the
        condensation margin (the model excludes condensation).  Fermi: N is
        unreachable below the fugacity cap.
    NonMonotoneError
        The particle-number equation is decreasing at the root; the
        corrections are too large for the model to be trusted here.
    """
    if not (N > 0.0) or not math.isfinite(N):
        raise DomainError(f"particle number must be positive, got {N}")
    if tol <= 0.0:
        raise DomainError(f"tolerance must be positive, got {tol}")
    lam = thermal_wavelength(T)
    bose = stat is StatKind.BOSE

    # The residual only needs a fraction of tol*N absolute accuracy; the
    # per-term budget keeps the series length finite near the Bose
    # condensation point where the default 1e-12 tail target would blow the
    # term cap.
    budget = 0.25 * tol * N

    def residual(z: float) -> float:
        return sum(_particle_terms(stat, container, lam, z, z_max, budget)) - N

    # Boltzmann seed: N(z) ~ z * (states within lambda), clipped into range.
    if isinstance(container, TubeDomain):
        scale = container.length_z * container.cross_section.area / lam**3
    else:
        scale = container.area / lam**2
    seed = N / scale if scale > 0 else 0.5
    z_cap = 1.0 - BOSE_CONDENSATION_MARGIN if bose else z_max
    z0 = min(max(seed, 1e-280), 0.5 if bose else z_cap / 2.0)

    # Walk geometrically until the residual changes sign.  For Bose the walk
    # approaches the condensation cap as z -> 1 - (1-z)/2; a residual that
    # starts decreasing again while still negative means the equation peaked
    # below N, i.e. near-condensation territory the model refuses.
    def residual_guarded(z: float) -> float:
        # Approaching the Bose condensation point the series length needed to
        # certify h_sigma blows up; a state that close to z = 1 is refused as
        # near-condensation rather than extrapolated.
        try:
            return residual(z)
        except AccuracyError as exc:
            if bose and z > 0.99:
                raise NoBracketError(
                    f"z = {z:.12g} is too close to the Bose condensation point "
                    "to certify the particle-number equation; near-condensation "
                    "states are outside the model"
                ) from exc
            raise

    lo = hi = z0
    f0 = residual_guarded(z0)
    if f0 == 0.0:
        lo = hi = z0
        f_lo = f_hi = 0.0
    elif f0 < 0.0:
        lo, f_lo = z0, f0
        prev = f0
        while True:
            if bose:
                nxt = 1.0 - (1.0 - lo) / 2.0
                if nxt >= z_cap:
                    nxt = z_cap
            else:
                nxt = min(lo * 2.0, z_cap)
            f_nxt = residual_guarded(nxt)
            if f_nxt >= 0.0:
                hi, f_hi = nxt, f_nxt
                break
            if bose and f_nxt < prev:
                raise NoBracketError(
                    f"N = {N:.6g} exceeds the maximum particle number reachable "
                    f"before the condensation margin (peak residual {prev + N:.6g}); "
                    "near-condensation states are outside the model"
                )
            if nxt >= z_cap:
                if bose:
                    raise NoBracketError(
                        f"N = {N:.6g} is not reachable below the Bose condensation "
                        f"margin z <= {z_cap}"
                    )
                raise NoBracketError(
                    f"N = {N:.6g} is not reachable below the Fermi fugacity cap {z_cap}"
                )
            lo, f_lo, prev = nxt, f_nxt, f_nxt
    else:
        hi, f_hi = z0, f0
        while True:
            nxt = lo / 4.0
            if nxt <= 1e-300:
                raise NoBracketError(
                    f"residual never changes sign down to z = {nxt:.3g}; "
                    "no physical solution"
                )
            f_nxt = residual_guarded(nxt)
            if f_nxt <= 0.0:
                lo, f_lo = nxt, f_nxt
                break
            hi, f_hi = nxt, f_nxt

    if lo == hi:
        z_star = lo
    else:
        z_star = brentq(residual, lo, hi, xtol=1e-15, rtol=8.9e-16, maxiter=200)

    res = residual(z_star)
    if abs(res) > tol * N:
        # One guarded re-polish by local bisection before giving up.
        a, b = (lo, hi) if lo < hi else (hi, lo)
        for _ in range(80):
            mid = 0.5 * (a + b)
            fm = residual(mid)
            if abs(fm) <= tol * N:
                z_star, res = mid, fm
                break
            if (fm < 0.0) == (f_lo < 0.0):
                a = mid
            else:
                b = mid
        else:
            raise AccuracyError(
                f"fugacity solver stalled at residual {res:.3e} (target {tol * N:.3e})",
                achieved=abs(res),
            )

    # Branch check: the analytic slope must be positive at the root.  Only
    # its sign matters, so a coarse budget (error <= 3/4 of it) is tried
    # first and tightened only when the sign is not yet certain.  A slope
    # that cannot be certified this close to the Bose condensation point is
    # refused the same way a non-monotone one is.
    try:
        deriv_budget = max(N, 16.0 * budget)
        deriv = _particle_number_derivative(stat, container, lam, z_star, z_max, deriv_budget)
        if abs(deriv) <= deriv_budget:
            deriv = _particle_number_derivative(
                stat, container, lam, z_star, z_max,
                max(0.05 * abs(deriv), 4.0 * budget),
            )
    except AccuracyError as exc:
        raise NonMonotoneError(
            f"cannot certify that the particle number is increasing at "
            f"z = {z_star:.6g}; the model is not trustworthy here"
        ) from exc
    if deriv <= 0.0:
        raise NonMonotoneError(
            f"particle number is not increasing at z = {z_star:.6g}; "
            "boundary/topology corrections dominate and the model is invalid here"
        )

    bulk, boundary, topology = _particle_terms(stat, container, lam, z_star, z_max, budget)
    area = (
        container.cross_section.area
        if isinstance(container, TubeDomain)
        else container.area
    )
    ratio_wavelength = lam / math.sqrt(area)
    ratio_boundary = abs(boundary) / abs(bulk) if bulk != 0.0 else math.inf
    ratio_topology = abs(topology) / abs(bulk) if bulk != 0.0 else math.inf
    # A few ulps of slack so a root at exactly z = 1 does not flag.
    fermi_ext = (stat is StatKind.FERMI) and z_star > 1.0 + 8e-15

    messages: list[str] = []
    if ratio_wavelength > warn_wavelength:
        messages.append(
            f"wavelength: lambda/sqrt(area) = {ratio_wavelength:.4g} exceeds "
            f"threshold {warn_wavelength:.4g}"
        )
    if ratio_boundary > warn_boundary:
        messages.append(
            f"boundary: |boundary term|/|bulk term| = {ratio_boundary:.4g} exceeds "
            f"threshold {warn_boundary:.4g}"
        )
    if fermi_ext:
        messages.append(
            f"fermi-extension: z = {z_star:.6g} > 1 relies on the heuristic "
            "extension of the boundary/connectivity terms"
        )

    state = GasState(z=z_star, lam=lam, T=T, N=N, stat=stat)
    report = ValidityReport(
        ratio_wavelength=ratio_wavelength,
        ratio_boundary=ratio_boundary,
        ratio_topology=ratio_topology,
        fermi_extension_used=fermi_ext,
        warnings=tuple(messages),
    )
    return state, report


def pressure(stat: StatKind, container: PlanarDomain | TubeDomain, state: GasState) -> float:
    """Pressure from P * measure = T * ln Xi (k_B = 1).

    For a planar domain the measure is the area (spreading pressure); for a
    tube it is the volume length_z * area.
    """
    if isinstance(container, TubeDomain):
        ln_xi = log_grand_potential_tube(stat, container, state.lam, state.z)
        return state.T * ln_xi / (container.length_z * container.cross_section.area)
    ln_xi = log_grand_potential_2d(stat, container, state.lam, state.z)
    return state.T * ln_xi / container.area

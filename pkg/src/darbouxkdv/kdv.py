"""Exact KdV multi-soliton fields from reflectionless scattering data.

For reflectionless data {kappa_n, c_n(0)} the inverse transform reduces to
u(x, t) = -2 (d^2/dx^2) log det A(x, t) with

    A_mn = delta_mn + c_m(t) c_n(t) e^(-(kappa_m+kappa_n)x) / (kappa_m+kappa_n)
    c_n(t) = c_n(0) e^(4 kappa_n^3 t)

(the symmetric congruent form of the GLM matrix; same determinant, positive
definite).  The field itself is evaluated through trace formulas on a
per-point rescaled matrix, which keeps every entry bounded for arbitrary
(x, t): the rescaling is a congruence by diag(e^(-max(theta_n, 0))), i.e. the
translation-covariance factors e^(kappa_n a) absorbed at the matrix level.
The KdV residual check re-evaluates the field in high precision through the
principal-minor (Cauchy determinant) expansion of det A, an algebraically
independent route.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations

import mpmath as mp
import numpy as np
from scipy.integrate import quad

from .darboux import SystemSpec, bound_states

__all__ = [
    "OverflowDomainError",
    "SolitonData",
    "SolitonField",
    "AsymptoticSoliton",
    "scattering_data_from_spec",
    "glm_matrix",
    "field_u",
    "kdv_residual",
    "asymptotic_decomposition",
    "conserved_quantities",
]

RAW_EXPONENT_LIMIT = 700.0  # beyond this the unscaled GLM entries overflow
RESIDUAL_DX = 5e-7
RESIDUAL_DT = 5e-8
RESIDUAL_DPS = 40
QUADRATURE_MARGIN = 40.0


class OverflowDomainError(ArithmeticError):
    """Requested evaluation point lies outside the representable domain."""


@dataclass(frozen=True)
class SolitonData:
    """Reflectionless scattering data: decay rates and norming constants at t=0."""

    kappas: tuple
    c0: tuple

    def __post_init__(self):
        kap = tuple(float(k) for k in self.kappas)
        cc = tuple(float(c) for c in self.c0)
        if len(kap) != len(cc) or not kap:
            raise ValueError("kappas and c0 must be nonempty lists of equal length")
        if any(not (math.isfinite(k) and k > 0) for k in kap):
            raise ValueError("every kappa must be finite and positive")
        if any(b <= a for a, b in zip(kap, kap[1:])):
            raise ValueError("kappas must be strictly increasing")
        if any(not (math.isfinite(c) and c > 0) for c in cc):
            raise ValueError("every norming constant must be finite and positive")
        object.__setattr__(self, "kappas", kap)
        object.__setattr__(self, "c0", cc)

    @property
    def n(self) -> int:
        return len(self.kappas)


def scattering_data_from_spec(spec: SystemSpec) -> SolitonData:
    """Scattering data of a deformed well with integer h (reflectionless).

    Non-integer h is rejected: the reflection amplitude would not vanish and
    the determinant form of the GLM solution would not apply.
    """
    if spec.h != round(spec.h) or round(spec.h) < 1:
        raise ValueError(
            f"h = {spec.h} is not a positive integer; the deformed well is not "
            "reflectionless and the GLM determinant form does not apply"
        )
    states = bound_states(spec)  # ascending energy == descending kappa
    states = sorted(states, key=lambda s: s.kappa)
    return SolitonData(
        kappas=tuple(s.kappa for s in states),
        c0=tuple(s.norming_constant for s in states),
    )


def _theta(data: SolitonData, x, t: float) -> np.ndarray:
    """theta_n = log c_n + 4 kappa_n^3 t - kappa_n x, shape (npts, N)."""
    kap = np.asarray(data.kappas)
    logc = np.log(data.c0)
    xx = np.atleast_1d(np.asarray(x, dtype=float))
    return logc + 4.0 * kap**3 * t - np.outer(xx, kap)


def glm_matrix(data: SolitonData, x: float, t: float) -> np.ndarray:
    """The symmetric GLM matrix A at one (x, t).

    Entries delta_mn + c_m(t) c_n(t) e^(-(kappa_m+kappa_n)x)/(kappa_m+kappa_n);
    the congruent symmetrization of the textbook asymmetric form, with the
    same determinant.  Raises OverflowDomainError where the raw entries would
    overflow; field evaluation itself uses the rescaled representation and has
    no such restriction.
    """
    th = _theta(data, x, t)[0]
    if 2.0 * float(th.max()) > RAW_EXPONENT_LIMIT:
        raise OverflowDomainError(
            f"raw GLM entries overflow at (x, t) = ({x}, {t}); "
            "evaluate the field through field_u instead"
        )
    kap = np.asarray(data.kappas)
    denom = kap[:, None] + kap[None, :]
    return np.eye(data.n) + np.exp(th[:, None] + th[None, :]) / denom


def field_u(data: SolitonData, x, t: float):
    """u(x, t) = -2 (log det A)'' via trace formulas, for scalar or array x.

    Per point the matrix is rescaled by the congruence S = diag(e^(-max(theta,0)))
    so that every entry is bounded; traces are invariant, so
    (log det A)' = tr(A^-1 A') and (log det A)'' = tr(A^-1 A'') - tr((A^-1 A')^2)
    are evaluated on the rescaled factors.  No numeric differentiation is used.
    """
    xarr = np.asarray(x, dtype=float)
    scalar = xarr.ndim == 0
    th = _theta(data, xarr, t)  # (npts, N)
    kap = np.asarray(data.kappas)
    denom = kap[:, None] + kap[None, :]
    th_hat = np.minimum(th, 0.0)
    w = np.exp(th_hat)  # bounded by 1
    s2 = np.exp(2.0 * (th_hat - th))  # diag of S^2, bounded by 1
    outer = w[:, :, None] * w[:, None, :]
    a = outer / denom
    a[:, np.arange(data.n), np.arange(data.n)] += s2
    d1 = -outer                # S (dA/dx) S
    d2 = outer * denom         # S (d2A/dx2) S
    g1 = np.linalg.solve(a, d1)
    g2 = np.linalg.solve(a, d2)
    tr_g2 = np.einsum("pii->p", g2)
    tr_g1g1 = np.einsum("pij,pji->p", g1, g1)
    u = -2.0 * (tr_g2 - tr_g1g1)
    return float(u[0]) if scalar else u


class SolitonField:
    """Callable (x, t) -> u for fixed reflectionless scattering data."""

    def __init__(self, data: SolitonData):
        self.data = data

    def __call__(self, x, t: float):
        return field_u(self.data, x, t)


@lru_cache(maxsize=64)
def _tau_terms(kappas: tuple, c0: tuple):
    """Principal-minor expansion of det A: per subset S the constants
    (alpha_S, beta_S, gamma_S) with term = exp(alpha + beta t + gamma x).

    det A = sum_S C_S prod_{n in S} c_n(t)^2 e^(-2 kappa_n x), with the Cauchy
    determinant C_S = prod_{i<j in S} ((k_i-k_j)/(k_i+k_j))^2 / prod_{i in S} 2 k_i.
    """
    n = len(kappas)
    terms = []
    for size in range(n + 1):
        for sub in combinations(range(n), size):
            log_c = 0.0
            for ii, i in enumerate(sub):
                log_c -= math.log(2.0 * kappas[i])
                log_c += 2.0 * math.log(c0[i])
                for j in sub[ii + 1:]:
                    log_c += 2.0 * math.log(
                        abs(kappas[i] - kappas[j]) / (kappas[i] + kappas[j])
                    )
            beta = sum(8.0 * kappas[i] ** 3 for i in sub)
            gamma = -sum(2.0 * kappas[i] for i in sub)
            terms.append((log_c, beta, gamma))
    return tuple(terms)


def _field_mp(data: SolitonData, x, t):
    """High-precision u(x, t) through the principal-minor expansion of det A."""
    terms = _tau_terms(data.kappas, data.c0)
    x = mp.mpf(x)
    t = mp.mpf(t)
    f = mp.mpf(0)
    fx = mp.mpf(0)
    fxx = mp.mpf(0)
    for log_c, beta, gamma in terms:
        e = mp.exp(mp.mpf(log_c) + mp.mpf(beta) * t + mp.mpf(gamma) * x)
        f += e
        fx += gamma * e
        fxx += gamma * gamma * e
    return -2.0 * (fxx * f - fx * fx) / (f * f)


def kdv_residual(data: SolitonData, x: float, t: float) -> float:
    """|u_t - 6 u u_x + u_xxx| at one point, from 5-point central stencils.

    The stencils are applied to a high-precision evaluation of the field (40
    significant digits through the determinant-expansion route), so the
    residual reflects the field itself rather than double-precision stencil
    noise; steps 5e-7 in x and 5e-8 in t keep the truncation error safely
    below the 1e-5 acceptance tolerance even for the steepest soliton cores.
    """
    with mp.workdps(RESIDUAL_DPS):
        dx = mp.mpf(RESIDUAL_DX)
        dt = mp.mpf(RESIDUAL_DT)
        u0 = _field_mp(data, x, t)
        ux1p = _field_mp(data, x + dx, t)
        ux1m = _field_mp(data, x - dx, t)
        ux2p = _field_mp(data, x + 2 * dx, t)
        ux2m = _field_mp(data, x - 2 * dx, t)
        ut1p = _field_mp(data, x, t + dt)
        ut1m = _field_mp(data, x, t - dt)
        ut2p = _field_mp(data, x, t + 2 * dt)
        ut2m = _field_mp(data, x, t - 2 * dt)
        u_x = (-ux2p + 8 * ux1p - 8 * ux1m + ux2m) / (12 * dx)
        u_xxx = (ux2p - 2 * ux1p + 2 * ux1m - ux2m) / (2 * dx**3)
        u_t = (-ut2p + 8 * ut1p - 8 * ut1m + ut2m) / (12 * dt)
        res = u_t - 6 * u0 * u_x + u_xxx
        return float(abs(res))


@dataclass(frozen=True)
class AsymptoticSoliton:
    """Asymptotic single-soliton component: speed 4 kappa^2 and phase shift chi."""

    kappa: float
    speed: float
    chi: float

    def peak_position(self, t: float) -> float:
        """Location of the -u peak for large |t|: 4 kappa^2 t -+ chi/kappa.

        The sign pairing (minus chi/kappa as t -> +inf) was fixed empirically
        against the peak positions of the evaluated field.
        """
        return self.speed * t - math.copysign(1.0, t) * self.chi / self.kappa


def asymptotic_decomposition(data: SolitonData) -> list:
    """Phase shifts chi_n = 1/2 sum_{m!=n} sgn(k_n-k_m) log|(k_n-k_m)/(k_n+k_m)|."""
    kap = data.kappas
    if len(set(kap)) != len(kap):
        raise ValueError("kappas must be distinct")
    out = []
    for n, kn in enumerate(kap):
        chi = 0.0
        for m, km in enumerate(kap):
            if m == n:
                continue
            chi += 0.5 * math.copysign(1.0, kn - km) * math.log(abs((kn - km) / (kn + km)))
        out.append(AsymptoticSoliton(kappa=kn, speed=4.0 * kn * kn, chi=chi))
    return out


def conserved_quantities(data: SolitonData, t: float):
    """(integral of u, integral of u^2) over a window covering every soliton.

    Expected values: -4 sum kappa_n and (16/3) sum kappa_n^3, independent of t.
    """
    centers = sorted(4.0 * k * k * t for k in data.kappas)
    lo = min(0.0, centers[0]) - QUADRATURE_MARGIN
    hi = max(0.0, centers[-1]) + QUADRATURE_MARGIN
    pts = tuple(sorted({c for c in centers if lo < c < hi}))
    mass, _ = quad(
        lambda xx: field_u(data, xx, t), lo, hi,
        epsabs=1e-11, epsrel=1e-13, limit=500, points=pts,
    )
    momentum, _ = quad(
        lambda xx: field_u(data, xx, t) ** 2, lo, hi,
        epsabs=1e-11, epsrel=1e-13, limit=500, points=pts,
    )
    return mass, momentum

"""Friction coefficient mu/(1+t)**lam: integrating factor and reciprocal integral.

The integrating factor beta solves beta' = mu (1+t)**(-lam) beta with
beta(0) = 1.  Its reciprocal integral I(t) = int_0^t dtau / beta(tau) is the
single quantity that decides between global smooth solutions and finite
lifespan: the decay exponent lam = 1 is the critical threshold.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .numerics import adaptive_quad

QUAD_TOL = 1e-12


@dataclass(frozen=True)
class IntegralLimit:
    """Limit of the reciprocal integral as t -> infinity: finite value or divergent."""

    finite: bool
    value: float | None = None

    @classmethod
    def finite_limit(cls, value: float) -> "IntegralLimit":
        if not value > 0:
            raise ValueError("a finite reciprocal-integral limit must be positive")
        return cls(True, value)

    @classmethod
    def divergent(cls) -> "IntegralLimit":
        return cls(False, None)


@dataclass(frozen=True)
class DampingLaw:
    """Damping strength ``mu`` and decay exponent ``lam`` (both >= 0).

    ``mu = 0`` is admitted (no damping: beta == 1, I(t) = t).  Immutable;
    quadrature uses no global state, so instances are freely shareable.
    """

    mu: float
    lam: float

    def __post_init__(self) -> None:
        if not self.mu >= 0:
            raise ValueError("mu must be nonnegative")
        if not self.lam >= 0:
            raise ValueError("lam must be nonnegative")

    def _check_time(self, t) -> None:
        if np.any(np.asarray(t) < 0):
            raise ValueError("time must be nonnegative")

    def log_integrating_factor(self, t):
        """log(beta(t)); overflow-free form used wherever ratios of beta appear."""
        self._check_time(t)
        t = np.asarray(t, dtype=float) if np.ndim(t) else float(t)
        if self.lam == 1.0:
            return self.mu * np.log1p(t)
        return self.mu / (1.0 - self.lam) * np.expm1((1.0 - self.lam) * np.log1p(t))

    def integrating_factor(self, t):
        """beta(t) = exp((mu/(1-lam)) ((1+t)**(1-lam) - 1)), or (1+t)**mu at lam = 1."""
        return np.exp(self.log_integrating_factor(t))

    def reciprocal_integral(self, t: float) -> float:
        """I(t) = int_0^t dtau / beta(tau); strictly increasing in t.

        Closed forms cover lam in {0, 1} and mu = 0; everything else goes
        through adaptive quadrature at absolute tolerance 1e-12.
        """
        self._check_time(t)
        t = float(t)
        if self.mu == 0.0:
            return t
        if self.lam == 1.0:
            if self.mu == 1.0:
                return float(np.log1p(t))
            return float(np.expm1((1.0 - self.mu) * np.log1p(t)) / (1.0 - self.mu))
        if self.lam == 0.0:
            return float(-np.expm1(-self.mu * t) / self.mu)
        return self._integral_quad(t)

    def _integral_quad(self, t: float) -> float:
        return self._segment_quad(0.0, t)

    def _segment_quad(self, t_lo: float, t_hi: float, abs_tol: float = QUAD_TOL) -> float:
        """Adaptive quadrature of 1/beta over [t_lo, t_hi]."""
        return adaptive_quad(
            lambda tau: np.exp(-self.log_integrating_factor(tau)),
            t_lo,
            t_hi,
            abs_tol=abs_tol,
        )

    def reciprocal_integral_limit(self) -> IntegralLimit:
        """Classify I(infinity): finite iff (lam < 1 and mu > 0) or (lam = 1 and mu > 1).

        For lam > 1 the integrating factor is bounded above by exp(mu/(lam-1)),
        so the integrand is bounded below and the integral diverges.
        """
        if self.lam == 1.0:
            if self.mu > 1.0:
                return IntegralLimit.finite_limit(1.0 / (self.mu - 1.0))
            return IntegralLimit.divergent()
        if self.lam > 1.0 or self.mu == 0.0:
            return IntegralLimit.divergent()
        if self.lam == 0.0:
            return IntegralLimit.finite_limit(1.0 / self.mu)

        # lam in (0, 1), mu > 0: substituting u = (1+tau)^(1-lam) compresses
        # the integral to c^-1-scale decay,
        #   I(inf) = (1/(1-lam)) int_1^inf e^{-c(u-1)} u^p du,
        # with c = mu/(1-lam) and p = lam/(1-lam).  For U >= max(1, 2p/c) the
        # tail is bounded by f(U) * 2/c (since (u/U)^p <= e^{c(u-U)/2} there);
        # U doubles until that bound drops below 1e-14.
        c = self.mu / (1.0 - self.lam)
        p = self.lam / (1.0 - self.lam)

        def integrand(u):
            u = np.asarray(u, dtype=float)
            return np.exp(-c * (u - 1.0) + p * np.log(u))

        u_big = max(1.0, 2.0 * p / c)
        bound = np.inf
        for _ in range(400):
            bound = float(integrand(np.array([u_big]))[0] * 2.0 / c)
            if bound < 1e-14:
                break
            u_big *= 2.0
        value = adaptive_quad(integrand, 1.0, u_big, abs_tol=QUAD_TOL) / (1.0 - self.lam)
        return IntegralLimit.finite_limit(value + bound)

"""Pair-connectedness probability H(r) for point-to-point link models.

Four models are supported: SISO, SIMO/MISO with m diversity branches,
MIMO with beamforming + maximum ratio combining restricted to
min(n_t, n_r) = 2, and the unit-disk hard threshold.  The MIMO
connectedness is available in three algebraically equivalent forms so
they can be cross-checked.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union

import numpy as np
from scipy import special as _sp

from . import specfun
from .errors import CapabilityError, DomainError

__all__ = [
    "ConnectionModel",
    "Mimo",
    "PathLossParams",
    "SimoMiso",
    "Siso",
    "UnitDisk",
    "mimo_gamma_form",
    "pair_connectedness",
    "pair_connectedness_many",
    "pair_connectedness_mimo_det",
]


@dataclass(frozen=True)
class PathLossParams:
    """Inverse-SNR scale beta (length^-eta), path-loss exponent eta, dimension."""

    beta: float
    eta: float
    dim: int = 3

    def __post_init__(self) -> None:
        if not (math.isfinite(self.beta) and self.beta > 0.0):
            raise DomainError(f"beta must be a positive finite real, got {self.beta}")
        if not (math.isfinite(self.eta) and self.eta >= 2.0):
            raise DomainError(
                f"eta must be finite and >= 2, got {self.eta}; "
                "use UnitDisk for the hard-threshold limit"
            )
        if self.dim not in (1, 2, 3):
            raise DomainError(f"dim must be 1, 2, or 3, got {self.dim}")


@dataclass(frozen=True)
class Siso:
    """Single antenna at both ends; exponential channel power."""

    params: PathLossParams


@dataclass(frozen=True)
class SimoMiso:
    """m-branch receive or transmit diversity; chi-squared channel power."""

    m: int
    params: PathLossParams

    def __post_init__(self) -> None:
        if self.m < 1:
            raise DomainError(f"diversity order m must be >= 1, got {self.m}")


@dataclass(frozen=True)
class Mimo:
    """Beamforming + MRC link with min(n_t, n_r) = 2 antennas at one end."""

    n_t: int
    n_r: int
    params: PathLossParams

    def __post_init__(self) -> None:
        if min(self.n_t, self.n_r) != 2:
            raise CapabilityError(
                f"MIMO links require min(n_t, n_r) == 2, got ({self.n_t}, {self.n_r}); "
                "use SimoMiso when one side has a single antenna"
            )

    @property
    def n(self) -> int:
        return max(self.n_t, self.n_r)


@dataclass(frozen=True)
class UnitDisk:
    """Hard connection threshold at a fixed radius.

    The value exactly at the radius defaults to exp(-beta), the
    complementary exponential CDF evaluated at the scale constant; it is
    measure-zero for every integral in this package.
    """

    radius: float
    params: PathLossParams
    plateau: float | None = None

    def __post_init__(self) -> None:
        if not (math.isfinite(self.radius) and self.radius > 0.0):
            raise DomainError(f"radius must be a positive finite real, got {self.radius}")
        if self.plateau is None:
            object.__setattr__(self, "plateau", math.exp(-self.params.beta))
        if not 0.0 <= self.plateau <= 1.0:
            raise DomainError(f"plateau must lie in [0, 1], got {self.plateau}")


ConnectionModel = Union[Siso, SimoMiso, Mimo, UnitDisk]


def _check_distance(r: float) -> None:
    if not (isinstance(r, (int, float)) and math.isfinite(r)) or r < 0.0:
        raise DomainError(f"distance must be a non-negative finite real, got {r}")


def _clamp01(h: float) -> float:
    return min(1.0, max(0.0, h))


def _mimo_m2(n: int, x: float, config: specfun.SpecFunConfig) -> float:
    p_lo = specfun.regularized_lower_gamma(n - 1, x, config)
    p_mid = specfun.regularized_lower_gamma(n, x, config)
    p_hi = specfun.regularized_lower_gamma(n + 1, x, config)
    return _clamp01(1.0 - n * p_lo * p_hi + (n - 1) * p_mid * p_mid)


def pair_connectedness(
    model: ConnectionModel,
    r: float,
    config: specfun.SpecFunConfig = specfun.DEFAULT_CONFIG,
) -> float:
    """Probability that two nodes a distance r apart share a direct link."""
    _check_distance(r)
    if isinstance(model, UnitDisk):
        if r < model.radius:
            return 1.0
        if r == model.radius:
            return model.plateau
        return 0.0
    x = model.params.beta * r ** model.params.eta
    if isinstance(model, Siso):
        return math.exp(-x)
    if isinstance(model, SimoMiso):
        if model.m == 1:
            return math.exp(-x)
        return specfun.regularized_upper_gamma(model.m, x, config)
    if isinstance(model, Mimo):
        if x == 0.0:
            return 1.0
        return _mimo_m2(model.n, x, config)
    raise DomainError(f"unsupported connection model {model!r}")


def pair_connectedness_many(model: ConnectionModel, r: np.ndarray) -> np.ndarray:
    """Vectorized H over an array of distances.

    Fast path for the Monte Carlo engine and field sampling; agrees with
    the scalar evaluation pointwise.
    """
    r = np.asarray(r, dtype=float)
    if r.size and (not np.isfinite(r).all() or (r < 0.0).any()):
        raise DomainError("distances must be non-negative finite reals")
    if isinstance(model, UnitDisk):
        return np.select(
            [r < model.radius, r == model.radius], [1.0, model.plateau], default=0.0
        )
    x = model.params.beta * r ** model.params.eta
    if isinstance(model, Siso) or (isinstance(model, SimoMiso) and model.m == 1):
        return np.exp(-x)
    if isinstance(model, SimoMiso):
        return _sp.gammaincc(model.m, x)
    if isinstance(model, Mimo):
        n = model.n
        h = (
            1.0
            - n * _sp.gammainc(n - 1, x) * _sp.gammainc(n + 1, x)
            + (n - 1) * _sp.gammainc(n, x) ** 2
        )
        return np.clip(h, 0.0, 1.0)
    raise DomainError(f"unsupported connection model {model!r}")


def pair_connectedness_mimo_det(
    n_t: int,
    n_r: int,
    params: PathLossParams,
    r: float,
    config: specfun.SpecFunConfig = specfun.DEFAULT_CONFIG,
) -> float:
    """MIMO H via the literal outage determinant of lower incomplete gammas.

    Evaluated for min(n_t, n_r) in {1, 2}; the m = 1 case collapses to the
    diversity form with n = max(n_t, n_r) branches.
    """
    m, n = min(n_t, n_r), max(n_t, n_r)
    if m < 1:
        raise DomainError(f"antenna counts must be positive, got ({n_t}, {n_r})")
    if m > 2:
        raise CapabilityError(
            f"determinant form implemented for min(n_t, n_r) <= 2 only, got {m}"
        )
    _check_distance(r)
    x = params.beta * r ** params.eta

    def gamma_lower(a: float) -> float:
        return math.exp(specfun.log_gamma(a)) * specfun.regularized_lower_gamma(
            a, x, config
        )

    if m == 1:
        kappa = math.exp(-specfun.log_gamma(n))
        det = gamma_lower(n)
    else:
        # 2x2 determinant of gamma(n - 2 + i + j - 1, x), i, j = 1, 2.
        g_lo, g_mid, g_hi = gamma_lower(n - 1), gamma_lower(n), gamma_lower(n + 1)
        det = g_lo * g_hi - g_mid * g_mid
        kappa = math.exp(-(specfun.log_gamma(n) + specfun.log_gamma(n - 1)))
    return _clamp01(1.0 - kappa * det)


def mimo_gamma_form(
    n: int,
    params: PathLossParams,
    r: float,
    config: specfun.SpecFunConfig = specfun.DEFAULT_CONFIG,
) -> float:
    """MIMO m = 2 H rearranged into unregularized upper-gamma terms."""
    if n < 2:
        raise DomainError(f"gamma form requires n >= 2, got {n}")
    _check_distance(r)
    x = params.beta * r ** params.eta
    g_lo = specfun.upper_incomplete_gamma(n - 1, x, config)
    g_mid = specfun.upper_incomplete_gamma(n, x, config)
    g_hi = specfun.upper_incomplete_gamma(n + 1, x, config)
    gam_lo = math.exp(specfun.log_gamma(n - 1))
    gam_mid = math.exp(specfun.log_gamma(n))
    linear = (n * g_lo - 2.0 * g_mid + g_hi / (n - 1.0)) / gam_lo
    quadratic = (g_mid * g_mid - g_lo * g_hi) / (gam_mid * gam_lo)
    return _clamp01(linear + quadratic)

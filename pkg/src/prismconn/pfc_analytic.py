"""High-density analytic full-connectivity probability in right prisms.

Valid for the min-2-antenna MIMO link with free-space path loss (eta = 2)
in three dimensions, the one case with hand-derived per-feature constants:
corners, edges, faces, and bulk each contribute an exponentially decaying
term controlled by the solid angle available there, and

    P_fc ~= 1 - sum over features of rho^(1-codim) G V exp(-rho omega M')

where M' is the homogeneous mass of connectivity of the link.  The
first-order expansion may go negative at low density; values are reported
as-is with an out-of-regime flag rather than clamped.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

from .errors import CapabilityError, DomainError
from .geometry import BoundaryFeature, RightPrism, enumerate_features
from .linkmodels import PathLossParams

__all__ = [
    "FeatureContribution",
    "PfcBreakdown",
    "assemble",
    "bulk_contribution",
    "class_term_sums",
    "corner_contribution",
    "cumulative_pfc",
    "edge_contribution",
    "face_contribution",
    "feature_contribution",
    "feature_table",
    "homogeneous_mass_mimo2",
]

_SQRT2 = math.sqrt(2.0)
_MIN_SCALE = 5.0  # derivations assume sqrt(beta) * feature length >> 1

_CLASS_NAMES = {3: "corners", 2: "edges", 1: "faces", 0: "bulk"}


def homogeneous_mass_mimo2(beta: float) -> float:
    """Closed-form M' of the eta = 2, min-2-antenna MIMO link in 3D."""
    return (23.0 - _SQRT2) * math.sqrt(math.pi) / (16.0 * beta**1.5)


def _require_supported(params: PathLossParams) -> None:
    if params.eta != 2.0 or params.dim != 3:
        raise CapabilityError(
            "per-feature constants are derived for eta = 2 in three dimensions "
            f"only, got eta={params.eta}, dim={params.dim}"
        )


def _check_angle(theta: float) -> None:
    if not 0.0 < theta < math.pi:
        raise DomainError(f"opening angle must be in (0, pi), got {theta}")


def _check_rho(rho: float) -> None:
    if not (math.isfinite(rho) and rho > 0.0):
        raise DomainError(f"node density must be a positive finite real, got {rho}")


def _corner_factor(theta: float, beta: float) -> float:
    return 256.0 * beta**3 / (343.0 * math.pi**2 * theta * math.sin(theta))


def _edge_factor(theta: float, beta: float) -> float:
    return 16.0 * beta**2 / (49.0 * math.pi**2 * math.sin(theta))


def _face_factor(beta: float) -> float:
    return 2.0 * beta / (7.0 * math.pi)


def corner_contribution(theta: float, params: PathLossParams, rho: float) -> float:
    """Outage integral of one corner of opening angle theta (before the
    overall density prefactor)."""
    _require_supported(params)
    _check_angle(theta)
    _check_rho(rho)
    rate = theta * homogeneous_mass_mimo2(params.beta)
    return _corner_factor(theta, params.beta) / rho**3 * math.exp(-rho * rate)


def edge_contribution(
    theta: float, length: float, params: PathLossParams, rho: float
) -> float:
    """Outage integral of one edge of the given length and opening angle."""
    _require_supported(params)
    _check_angle(theta)
    _check_rho(rho)
    if length <= 0.0:
        raise DomainError(f"edge length must be positive, got {length}")
    if math.sqrt(params.beta) * length < _MIN_SCALE:
        warnings.warn(
            f"sqrt(beta) * edge length = {math.sqrt(params.beta) * length:.3g} is "
            "small; the edge expansion assumes it is large",
            stacklevel=2,
        )
    rate = 2.0 * theta * homogeneous_mass_mimo2(params.beta)
    return _edge_factor(theta, params.beta) * length / rho**2 * math.exp(-rho * rate)


def face_contribution(surface_area: float, params: PathLossParams, rho: float) -> float:
    """Outage integral of the full surface, via equivalence with a sphere
    of the same area (no per-face enumeration needed)."""
    _require_supported(params)
    _check_rho(rho)
    if surface_area <= 0.0:
        raise DomainError(f"surface area must be positive, got {surface_area}")
    rate = 2.0 * math.pi * homogeneous_mass_mimo2(params.beta)
    return _face_factor(params.beta) * surface_area / rho * math.exp(-rho * rate)


def bulk_contribution(volume: float, params: PathLossParams, rho: float) -> float:
    """Outage integral of the interior, via equivalence with a sphere of
    the same volume."""
    _require_supported(params)
    if not (math.isfinite(rho) and rho >= 0.0):
        raise DomainError(f"node density must be non-negative, got {rho}")
    if volume <= 0.0:
        raise DomainError(f"volume must be positive, got {volume}")
    rate = 4.0 * math.pi * homogeneous_mass_mimo2(params.beta)
    return volume * math.exp(-rho * rate)


@dataclass(frozen=True)
class FeatureContribution:
    """One boundary feature's term in the full-connectivity expansion.

    term(rho) = multiplicity * rho^density_power * G * measure
                * exp(-rho * exponent_rate),
    with density_power = 1 - codim and exponent_rate = solid_angle * M'.
    """

    feature: BoundaryFeature
    geometric_factor: float
    exponent_rate: float
    density_power: int

    def term(self, rho: float) -> float:
        return (
            self.feature.multiplicity
            * rho**self.density_power
            * self.geometric_factor
            * self.feature.measure
            * math.exp(-rho * self.exponent_rate)
        )


def feature_contribution(
    feature: BoundaryFeature, params: PathLossParams
) -> FeatureContribution:
    """Geometric factor, exponent rate, and density power for one feature."""
    _require_supported(params)
    beta = params.beta
    if feature.codim == 3:
        factor = _corner_factor(feature.angle, beta)
    elif feature.codim == 2:
        factor = _edge_factor(feature.angle, beta)
    elif feature.codim == 1:
        factor = _face_factor(beta)
    else:
        factor = 1.0
    rate = feature.solid_angle * homogeneous_mass_mimo2(beta)
    return FeatureContribution(feature, factor, rate, 1 - feature.codim)


@dataclass(frozen=True)
class PfcBreakdown:
    """Analytic P_fc at one density with its per-feature ledger."""

    rho: float
    contributions: tuple[FeatureContribution, ...]
    p_fc: float
    p_out: float
    in_regime: bool


def class_term_sums(breakdown: PfcBreakdown) -> dict[str, float]:
    """Evaluated terms summed per feature class (corners/edges/faces/bulk)."""
    sums = {name: 0.0 for name in _CLASS_NAMES.values()}
    for contrib in breakdown.contributions:
        sums[_CLASS_NAMES[contrib.feature.codim]] += contrib.term(breakdown.rho)
    return sums


def cumulative_pfc(breakdown: PfcBreakdown) -> dict[str, float]:
    """P_fc keeping bulk only, then adding faces, edges, and corners."""
    sums = class_term_sums(breakdown)
    running = 0.0
    out = {}
    for label, name in (
        ("bulk_only", "bulk"),
        ("bulk_faces", "faces"),
        ("bulk_faces_edges", "edges"),
        ("full", "corners"),
    ):
        running += sums[name]
        out[label] = 1.0 - running
    return out


def assemble(
    prism: RightPrism, params: PathLossParams, rho_grid
) -> list[PfcBreakdown]:
    """Evaluate the per-feature expansion of P_fc over a density grid."""
    _require_supported(params)
    rhos = [float(r) for r in rho_grid]
    for rho in rhos:
        _check_rho(rho)
    # The regime flag keys on the characteristic scale; the stricter
    # shortest-edge check only warns, since single marginal edges degrade
    # their own term, not the whole expansion.
    scale_ok = math.sqrt(params.beta) * prism.volume ** (1.0 / 3.0) >= _MIN_SCALE
    if math.sqrt(params.beta) * prism.shortest_edge < _MIN_SCALE:
        warnings.warn(
            f"sqrt(beta) * shortest edge = "
            f"{math.sqrt(params.beta) * prism.shortest_edge:.3g} is small; the "
            "boundary expansion assumes it is large",
            stacklevel=2,
        )
    contributions = tuple(
        feature_contribution(f, params) for f in enumerate_features(prism)
    )
    results = []
    for rho in rhos:
        p_out = sum(c.term(rho) for c in contributions)
        p_fc = 1.0 - p_out
        results.append(
            PfcBreakdown(rho, contributions, p_fc, p_out, scale_ok and p_fc >= 0.0)
        )
    return results


def feature_table(prism: RightPrism, params: PathLossParams) -> list[dict]:
    """Per-feature (measure, solid angle, geometric factor) ledger rows."""
    rows = []
    for f in enumerate_features(prism):
        contrib = feature_contribution(f, params)
        rows.append(
            {
                "class": _CLASS_NAMES[f.codim],
                "codim": f.codim,
                "multiplicity": f.multiplicity,
                "angle": f.angle,
                "measure": f.measure,
                "solid_angle": f.solid_angle,
                "geometric_factor": contrib.geometric_factor,
                "exponent_rate": contrib.exponent_rate,
            }
        )
    return rows

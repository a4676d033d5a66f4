"""Pointing-error parameters (A0, rho) from Gaussian-beam optics.

Beyond the Rayleigh distance the beam radius grows linearly, w_z = theta * d,
with the divergence theta pinned by one reference point (2.5 m at 1 km by
default). From w_z we get

    upsilon = sqrt(pi/2) * a / w_z
    A0      = erf(upsilon)^2
    rho     = w_zeq / (2 sigma_s)

The equivalent beam radius w_zeq has two conventions. ``"linear"`` uses
w_zeq = w_z erf(upsilon) / (2 upsilon exp(-upsilon^2)) (no square root);
``"literature"`` uses w_zeq^2 = w_z^2 sqrt(pi) erf(upsilon) / (2 upsilon exp(-upsilon^2)).
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DomainError
from .specfun import erf

WZEQ_CONVENTIONS = ("linear", "literature")
_WZEQ_ALIASES = {"paper": "linear"}


@dataclass(frozen=True)
class PointingGeometry:
    aperture_radius_a: float = 0.1        # m
    waist_w0: float = 5e-3                # m
    wavelength: float = 650e-9            # m
    jitter_sigma_s: float = 0.28          # m, constant with distance
    beam_waist_at_ref: float = 2.5        # m
    ref_distance: float = 1000.0          # m
    wzeq_convention: str = "linear"

    def __post_init__(self):
        for name in ("aperture_radius_a", "waist_w0", "wavelength", "jitter_sigma_s",
                     "beam_waist_at_ref", "ref_distance"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0):
                raise DomainError(f"PointingGeometry.{name} must be positive, got {value}")
        canonical = _WZEQ_ALIASES.get(self.wzeq_convention, self.wzeq_convention)
        object.__setattr__(self, "wzeq_convention", canonical)
        if self.wzeq_convention not in WZEQ_CONVENTIONS:
            raise DomainError(
                f"wzeq_convention must be one of {WZEQ_CONVENTIONS}, got {self.wzeq_convention!r}")
        if self.ref_distance <= self.rayleigh_distance:
            raise DomainError(
                f"reference distance {self.ref_distance} m is inside the Rayleigh distance "
                f"{self.rayleigh_distance:.1f} m")

    @property
    def rayleigh_distance(self) -> float:
        """pi w0^2 / lambda in metres."""
        return math.pi * self.waist_w0 ** 2 / self.wavelength

    @property
    def divergence(self) -> float:
        return self.beam_waist_at_ref / self.ref_distance


@dataclass(frozen=True)
class PointingParams:
    A0: float
    rho: float
    w_z: float
    w_zeq: float
    upsilon: float

    @property
    def rho2(self) -> float:
        return self.rho * self.rho


def beam_waist(d: float, geom: PointingGeometry) -> float:
    """Beam radius w_z (m) at distance ``d`` (m) in the linear far-field regime."""
    if not d > geom.rayleigh_distance:
        raise DomainError(
            f"distance {d} m is within the Rayleigh distance {geom.rayleigh_distance:.1f} m; "
            "the linear beam-growth model does not apply")
    return geom.beam_waist_at_ref / geom.ref_distance * d


def equivalent_beam_radius(w_z: float, upsilon: float, convention: str = "linear") -> float:
    ratio = erf(upsilon) / (2.0 * upsilon * math.exp(-upsilon * upsilon))
    if _WZEQ_ALIASES.get(convention, convention) == "linear":
        return w_z * ratio
    if convention == "literature":
        return w_z * math.sqrt(math.sqrt(math.pi) * ratio)
    raise DomainError(f"unknown w_zeq convention {convention!r}")


def pointing_params(d: float, geom: PointingGeometry) -> PointingParams:
    """A0, rho and the beam radii at distance ``d`` metres."""
    w_z = beam_waist(d, geom)
    upsilon = math.sqrt(math.pi / 2.0) * geom.aperture_radius_a / w_z
    A0 = erf(upsilon) ** 2
    w_zeq = equivalent_beam_radius(w_z, upsilon, geom.wzeq_convention)
    rho = w_zeq / (2.0 * geom.jitter_sigma_s)
    if not 0.0 < A0 < 1.0:
        raise DomainError(f"collected fraction A0={A0} outside (0, 1) at d={d} m")
    return PointingParams(A0=A0, rho=rho, w_z=w_z, w_zeq=w_zeq, upsilon=upsilon)

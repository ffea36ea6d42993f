"""Plane-strain elasticity, hysteretic damping and radial damping profiles."""

from dataclasses import dataclass

import numpy as np


class OutOfRange(ValueError):
    pass


@dataclass(frozen=True)
class Material:
    young_modulus: float
    poisson_ratio: float
    density: float
    damping_ratio: float = 0.0

    def __post_init__(self):
        if self.young_modulus <= 0:
            raise ValueError("young_modulus must be positive")
        if not 0.0 <= self.poisson_ratio < 0.5:
            raise ValueError("poisson_ratio must lie in [0, 0.5)")
        if self.density <= 0:
            raise ValueError("density must be positive")
        if self.damping_ratio < 0:
            raise ValueError("damping_ratio must be non-negative")

    @property
    def shear_modulus(self):
        return self.young_modulus / (2.0 * (1.0 + self.poisson_ratio))


def elasticity_matrix(m):
    """Plane-strain constitutive matrix in Voigt order (xx, yy, xy)."""
    E, nu = m.young_modulus, m.poisson_ratio
    f = E / ((1.0 + nu) * (1.0 - 2.0 * nu))
    return f * np.array(
        [
            [1.0 - nu, nu, 0.0],
            [nu, 1.0 - nu, 0.0],
            [0.0, 0.0, 0.5 - nu],
        ]
    )


def complex_modulus_factor(zeta):
    """Hysteretic damping factor ``1 + 2i*zeta`` applied to the elasticity matrix."""
    if np.any(np.asarray(zeta) < 0):
        raise ValueError("damping ratio must be non-negative")
    return 1.0 + 2.0j * zeta


def wave_speeds(m):
    """Elastic P- and S-wave speeds under plane strain."""
    D = elasticity_matrix(m)
    return float(np.sqrt(D[0, 0] / m.density)), float(np.sqrt(D[2, 2] / m.density))


def pressure_wavelength(m, frequency):
    return wave_speeds(m)[0] / frequency


@dataclass(frozen=True)
class DampingProfile:
    """Damping ratio along the radial grid.

    ``zeta_start`` applies at the zero-traction end of the grid (the
    truncation point of an unbounded subdomain), ``zeta_end`` at the loaded
    end. ``kind`` is ``"constant"`` or ``"linear"``.
    """

    kind: str = "constant"
    zeta_start: float = 0.0
    zeta_end: float = 0.0

    def __post_init__(self):
        if self.kind not in ("constant", "linear"):
            raise ValueError(f"unknown damping profile kind {self.kind!r}")
        if self.zeta_start < 0 or self.zeta_end < 0:
            raise ValueError("damping ratios must be non-negative")

    @classmethod
    def constant(cls, zeta):
        return cls("constant", zeta, zeta)

    @classmethod
    def linear(cls, zeta_start, zeta_end):
        return cls("linear", zeta_start, zeta_end)


def damping_at(profile, xi, xi_start, xi_end):
    """Damping ratio at radial coordinate ``xi``.

    Works on scalars and arrays; raises OutOfRange outside the interval.
    """
    xi = np.asarray(xi, dtype=float)
    lo, hi = min(xi_start, xi_end), max(xi_start, xi_end)
    slack = 1e-12 * max(abs(lo), abs(hi), 1.0)
    if np.any(xi < lo - slack) or np.any(xi > hi + slack):
        raise OutOfRange(f"xi outside [{lo}, {hi}]")
    if profile.kind == "constant":
        out = np.full(xi.shape, float(profile.zeta_start))
    else:
        t = (xi - xi_start) / (xi_end - xi_start)
        out = profile.zeta_start + t * (profile.zeta_end - profile.zeta_start)
        out = np.where(np.isclose(xi, xi_end, rtol=0, atol=slack), profile.zeta_end, out)
    return float(out) if out.ndim == 0 else out
